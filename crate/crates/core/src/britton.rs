//! Word problem for `G_{r,P}` by Britton reduction over the stable letters.
//!
//! Edge `i` joins `rho(i)` (where `a_i` lives) to `sigma(i)`. Reading
//! `s_i` moves from `rho(i)` to `sigma(i)`; reading `s_i^-1` moves back.
//! The defining relation is `s_i^-1 a_i^p s_i = c_{sigma(i)}^q`.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::MarkedGraph;
use crate::spectral::{IntMatrix, Slope};
use crate::vm;
use crate::word::{Generator, Word};

/// Which side of the strip a pinch removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PinchKind {
    /// `s_i^-1 a_i^{kp} s_i -> c_{sigma(i)}^{kq}`.
    ASide,
    /// `s_i c_{sigma(i)}^{kq} s_i^-1 -> a_i^{kp}`.
    CSide,
}

/// A removed subword together with what replaced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pinch {
    /// Letter offsets in the input of the opening and closing stable letters.
    pub start: usize,
    pub end: usize,
    pub edge: usize,
    pub kind: PinchKind,
    /// `k`: the pinch trades `a_i^{kp}` for `c^{kq}`.
    pub k: i64,
    pub original: Vec<Token>,
    pub replacement: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Token {
    Letter(Generator, i64),
    Pinch(Box<Pinch>),
}

/// Output of [`Solver::reduce`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub base: usize,
    pub end: usize,
    pub reduced: Word,
    pub tokens: Vec<Token>,
    /// Whether the reduced word has no stable letters and its vertex-group
    /// residue is trivial.
    pub trivial: bool,
}

impl ReductionTrace {
    /// Expands every pinch back into its original letters.
    pub fn replay(&self) -> Word {
        let mut w = Word::identity();
        replay_into(&self.tokens, &mut w);
        w
    }

    /// All pinches, innermost first.
    pub fn pinches(&self) -> Vec<&Pinch> {
        let mut out = Vec::new();
        collect_pinches(&self.tokens, &mut out);
        out
    }
}

fn replay_into(tokens: &[Token], out: &mut Word) {
    for t in tokens {
        match t {
            Token::Letter(g, e) => out.push(*g, *e),
            Token::Pinch(p) => replay_into(&p.original, out),
        }
    }
}

fn collect_pinches<'a>(tokens: &'a [Token], out: &mut Vec<&'a Pinch>) {
    for t in tokens {
        if let Token::Pinch(p) = t {
            collect_pinches(&p.original, out);
            out.push(p);
        }
    }
}

fn flatten_tokens(tokens: &[Token], out: &mut Word) {
    for t in tokens {
        match t {
            Token::Letter(g, e) => out.push(*g, *e),
            Token::Pinch(p) => out.append(&p.replacement),
        }
    }
}

struct Frame {
    /// Stable letter that opened the frame and its offset.
    entry: Option<(usize, i64, usize)>,
    vertex: usize,
    /// The frame's content as an element of the vertex group, in local
    /// letters `a_1..a_m`, `c`.
    residue: Word,
    tokens: Vec<Token>,
}

/// Britton reduction for one `G_{r,P}`.
#[derive(Debug, Clone)]
pub struct Solver {
    graph: MarkedGraph,
    p: i64,
    q: i64,
}

impl Solver {
    pub fn new(p: &IntMatrix, r: Slope) -> Result<Self> {
        let graph = MarkedGraph::build(p)?;
        if r.p <= p.max_row_sum() * r.q {
            return Err(Error::SlopeTooSmall { p: r.p, q: r.q, m: p.max_row_sum() });
        }
        Ok(Solver { graph, p: r.p as i64, q: r.q as i64 })
    }

    pub fn graph(&self) -> &MarkedGraph {
        &self.graph
    }

    fn edge(&self, i: u32, g: Generator) -> Result<usize> {
        let i = i as usize;
        if i == 0 || i > self.graph.edge_count() {
            return Err(Error::UnknownGenerator(g.to_string()));
        }
        Ok(i)
    }

    /// The vertex a word must start at, read off its first letter.
    pub fn infer_base(&self, w: &Word) -> Result<usize> {
        match w.syllables().first() {
            None => Ok(1),
            Some(&(g @ Generator::A(i), _)) => Ok(self.graph.rho(self.edge(i, g)?)),
            Some(&(g @ Generator::S(i), e)) => {
                let i = self.edge(i, g)?;
                Ok(if e > 0 { self.graph.rho(i) } else { self.graph.sigma(i) })
            }
            Some(&(g, _)) => Err(Error::UnknownGenerator(g.to_string())),
        }
    }

    /// Innermost-first Britton reduction of a loop based at `base`.
    pub fn reduce(&self, base: usize, w: &Word) -> Result<ReductionTrace> {
        let count = self.graph.vertex_count();
        if base == 0 || base > count {
            return Err(Error::VertexOutOfRange { vertex: base, count });
        }
        let mut stack = vec![Frame { entry: None, vertex: base, residue: Word::identity(), tokens: Vec::new() }];
        for (pos, (g, e)) in w.letters().enumerate() {
            let top = stack.last_mut().expect("base frame");
            match g {
                Generator::A(i) => {
                    let i = self.edge(i, g)?;
                    if self.graph.rho(i) != top.vertex {
                        return Err(Error::IllFormed(format!(
                            "letter {g} at offset {pos} read at vertex {}, but it lives at vertex {}",
                            top.vertex,
                            self.graph.rho(i)
                        )));
                    }
                    top.residue.push(Generator::A(self.graph.local_index(i) as u32), e);
                    top.tokens.push(Token::Letter(g, e));
                }
                Generator::S(i) => {
                    let i = self.edge(i, g)?;
                    let (from, to) = if e > 0 {
                        (self.graph.rho(i), self.graph.sigma(i))
                    } else {
                        (self.graph.sigma(i), self.graph.rho(i))
                    };
                    if from != top.vertex {
                        return Err(Error::IllFormed(format!(
                            "letter {g}^{e} at offset {pos} read at vertex {}, but it starts at vertex {from}",
                            top.vertex
                        )));
                    }
                    let closes = matches!(top.entry, Some((j, f, _)) if j == i && f == -e);
                    if closes {
                        if let Some(pinch) = self.try_pinch(top, pos)? {
                            stack.pop();
                            let parent = stack.last_mut().expect("parent frame");
                            let local = match pinch.kind {
                                PinchKind::ASide => Word::letter(Generator::C, pinch.k * self.q),
                                PinchKind::CSide => {
                                    Word::letter(Generator::A(self.graph.local_index(i) as u32), pinch.k * self.p)
                                }
                            };
                            parent.residue.append(&local);
                            parent.tokens.push(Token::Pinch(Box::new(pinch)));
                            continue;
                        }
                    }
                    stack.push(Frame {
                        entry: Some((i, e, pos)),
                        vertex: to,
                        residue: Word::identity(),
                        tokens: vec![Token::Letter(g, e)],
                    });
                }
                _ => return Err(Error::UnknownGenerator(g.to_string())),
            }
        }
        let end = stack.last().expect("base frame").vertex;
        let single = stack.len() == 1;
        let trivial = single && vm::is_identity(self.graph.m(base), &stack[0].residue)?;
        let mut tokens = Vec::new();
        for f in stack {
            tokens.extend(f.tokens);
        }
        let mut reduced = Word::identity();
        flatten_tokens(&tokens, &mut reduced);
        Ok(ReductionTrace { base, end, reduced, tokens, trivial })
    }

    /// Tests whether the top frame, closed by the stable letter at `pos`,
    /// is a pinch. The frame's tokens move into the returned event.
    fn try_pinch(&self, top: &mut Frame, pos: usize) -> Result<Option<Pinch>> {
        let (i, open, start) = top.entry.expect("non-base frame");
        let m = self.graph.m(top.vertex);
        let (n, nc) = vm::exponent_vector(m, &top.residue)?;
        let tot: Vec<i64> = n.iter().map(|x| x + nc).collect();
        let close = Generator::S(i as u32);
        let (kind, k, target, replacement) = if open < 0 {
            // s_i^-1 g s_i at rho(i): g must be a power of a_i^p.
            let l = self.graph.local_index(i) - 1;
            let e = tot[l];
            if tot.iter().enumerate().any(|(j, &x)| j != l && x != 0) || e % self.p != 0 {
                return Ok(None);
            }
            let k = e / self.p;
            let target = Word::letter(Generator::A(l as u32 + 1), e);
            let sigma = self.graph.sigma(i);
            let c = self.graph.part(sigma).iter().map(|&j| (Generator::A(j as u32), k * self.q));
            (PinchKind::ASide, k, target, Word::from_syllables(c))
        } else {
            // s_i g s_i^-1 at sigma(i): g must be a power of c^q.
            let big_k = tot[0];
            if tot.iter().any(|&x| x != big_k) || big_k % self.q != 0 {
                return Ok(None);
            }
            let k = big_k / self.q;
            let target = Word::letter(Generator::C, big_k);
            (PinchKind::CSide, k, target, Word::letter(Generator::A(i as u32), k * self.p))
        };
        if !vm::equals(m, &top.residue, &target)? {
            return Ok(None);
        }
        let mut original = std::mem::take(&mut top.tokens);
        original.push(Token::Letter(close, -open));
        Ok(Some(Pinch { start, end: pos, edge: i, kind, k, original, replacement }))
    }

    pub fn is_trivial(&self, w: &Word) -> Result<bool> {
        Ok(self.reduce(self.infer_base(w)?, w)?.trivial)
    }

    pub fn equal(&self, w1: &Word, w2: &Word) -> Result<bool> {
        self.is_trivial(&w1.concat(&w2.inverse()))
    }

    /// `N` if the loop `w` at `vertex` equals `c_vertex^N`.
    pub fn power_of_c(&self, vertex: usize, w: &Word) -> Result<Option<i64>> {
        let trace = self.reduce(vertex, w)?;
        if trace.end != vertex || trace.tokens.iter().any(|t| matches!(t, Token::Letter(Generator::S(_), _))) {
            return Ok(None);
        }
        let mut local = Word::identity();
        for &(g, e) in trace.reduced.syllables() {
            let Generator::A(i) = g else { return Ok(None) };
            local.push(Generator::A(self.graph.local_index(i as usize) as u32), e);
        }
        vm::power_of_c(self.graph.m(vertex), &local)
    }

    /// Path of tree stable letters from vertex 1 to `v`.
    fn tree_paths(&self) -> Vec<Word> {
        let r = self.graph.vertex_count();
        let tree = self.graph.maximal_tree();
        let mut paths: Vec<Option<Word>> = vec![None; r + 1];
        paths[1] = Some(Word::identity());
        let mut queue = VecDeque::from([1usize]);
        while let Some(v) = queue.pop_front() {
            let here = paths[v].clone().expect("visited");
            for &i in &tree {
                let (a, b) = (self.graph.rho(i), self.graph.sigma(i));
                let (other, e) = if a == v {
                    (b, 1)
                } else if b == v {
                    (a, -1)
                } else {
                    continue;
                };
                if paths[other].is_none() {
                    paths[other] = Some(here.concat(&Word::letter(Generator::S(i as u32), e)));
                    queue.push_back(other);
                }
            }
        }
        paths.into_iter().map(Option::unwrap_or_default).collect()
    }

    /// Rewrites a word of the presentation with tree letters killed as a
    /// loop at vertex 1 with all stable letters present.
    pub fn lift_killed(&self, w: &Word) -> Result<Word> {
        let paths = self.tree_paths();
        let mut out = Word::identity();
        for &(g, e) in w.syllables() {
            let piece = match g {
                Generator::A(i) => {
                    let path = &paths[self.graph.rho(self.edge(i, g)?)];
                    path.concat(&Word::letter(g, 1)).concat(&path.inverse())
                }
                Generator::S(i) => {
                    let i = self.edge(i, g)?;
                    paths[self.graph.rho(i)].concat(&Word::letter(g, 1)).concat(&paths[self.graph.sigma(i)].inverse())
                }
                _ => return Err(Error::UnknownGenerator(g.to_string())),
            };
            out.append(&piece.pow(e));
        }
        Ok(out)
    }
}
