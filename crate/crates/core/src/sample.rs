//! Seeded random words for fuzzing the word-problem solvers.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::presentation::MarkedGraph;
use crate::word::{Generator, Word};

/// A word in `V_m` built from `x^N` by random length-bounded rewrites that
/// preserve the element, returned with `(x, N)`.
///
/// The rewrites are `b_{i-1} <-> a_i b_i` in either order, swapping
/// adjacent `a_i`, `b_i` powers, and inserting `[a_i^k, b_i^l]`.
pub fn vm_power_word<R: Rng>(rng: &mut R, m: usize, max_len: u64) -> (Word, Generator, i64) {
    assert!(m >= 1);
    let targets = canonical_letters(m);
    let x = *targets.choose(rng).expect("non-empty");
    let n: i64 = rng.gen_range(-4..=4);
    let mut syl: Vec<(Generator, i64)> = if n == 0 { vec![] } else { vec![(x, n)] };
    if m >= 2 {
        for _ in 0..rng.gen_range(1..=16) {
            let next = rewrite(rng, m, &syl);
            if len(&next) <= max_len {
                syl = next;
            }
        }
    }
    let w = Word::from_syllables(syl.into_iter().map(|(g, e)| (display_letter(rng, m, g), e)));
    (w, display_letter(rng, m, x), n)
}

fn canonical_letters(m: usize) -> Vec<Generator> {
    let mut v: Vec<Generator> = (1..m as u32).map(Generator::A).collect();
    v.extend((0..m as u32).map(Generator::B));
    v
}

fn len(syl: &[(Generator, i64)]) -> u64 {
    syl.iter().map(|s| s.1.unsigned_abs()).sum()
}

/// `b_{m-1}` may be written `a_m`, and `b_0` may be written `c`.
fn display_letter<R: Rng>(rng: &mut R, m: usize, g: Generator) -> Generator {
    match g {
        Generator::B(j) if j as usize == m - 1 && rng.gen_bool(0.5) => Generator::A(m as u32),
        Generator::B(0) if rng.gen_bool(0.5) => Generator::C,
        _ => g,
    }
}

fn rewrite<R: Rng>(rng: &mut R, m: usize, syl: &[(Generator, i64)]) -> Vec<(Generator, i64)> {
    let mut out = syl.to_vec();
    match rng.gen_range(0..4) {
        0 => {
            let cands: Vec<usize> =
                (0..out.len()).filter(|&k| matches!(out[k].0, Generator::B(j) if (j as usize) + 1 < m)).collect();
            if let Some(&k) = cands.choose(rng) {
                let (Generator::B(j), e) = out[k] else { unreachable!() };
                let pair = [(Generator::A(j + 1), e), (Generator::B(j + 1), e)];
                let pair = if rng.gen_bool(0.5) { pair } else { [pair[1], pair[0]] };
                out.splice(k..=k, pair);
            }
        }
        1 => {
            let cands: Vec<usize> =
                (0..out.len().saturating_sub(1)).filter(|&k| same_plane_pair(out[k].0, out[k + 1].0)).collect();
            if let Some(&k) = cands.choose(rng) {
                out.swap(k, k + 1);
            }
        }
        2 => {
            let cands: Vec<usize> = (0..out.len().saturating_sub(1))
                .filter(|&k| same_plane_pair(out[k].0, out[k + 1].0) && out[k].1 == out[k + 1].1)
                .collect();
            if let Some(&k) = cands.choose(rng) {
                let i = match (out[k].0, out[k + 1].0) {
                    (Generator::A(i), _) | (_, Generator::A(i)) => i,
                    _ => unreachable!(),
                };
                let e = out[k].1;
                out.splice(k..=k + 1, [(Generator::B(i - 1), e)]);
            }
        }
        _ => {
            let i = rng.gen_range(1..m as u32);
            let k = nonzero(rng, 2);
            let l = nonzero(rng, 2);
            let at = rng.gen_range(0..=out.len());
            let c = [(Generator::A(i), k), (Generator::B(i), l), (Generator::A(i), -k), (Generator::B(i), -l)];
            out.splice(at..at, c);
        }
    }
    Word::from_syllables(out).syllables().to_vec()
}

fn same_plane_pair(x: Generator, y: Generator) -> bool {
    matches!((x, y), (Generator::A(i), Generator::B(j)) | (Generator::B(j), Generator::A(i)) if i == j)
}

fn nonzero<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    let v = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

/// Letters readable at `v`, each with the vertex it leads to.
fn moves(graph: &MarkedGraph, v: usize) -> Vec<(Generator, i64, usize)> {
    let mut out = Vec::new();
    for &i in graph.part(v) {
        out.push((Generator::A(i as u32), 1, v));
        out.push((Generator::A(i as u32), -1, v));
    }
    for i in 1..=graph.edge_count() {
        if graph.rho(i) == v {
            out.push((Generator::S(i as u32), 1, graph.sigma(i)));
        }
        if graph.sigma(i) == v {
            out.push((Generator::S(i as u32), -1, graph.rho(i)));
        }
    }
    out
}

/// A random path of `steps` letters from `from`, freely reduced, with its
/// end vertex.
pub fn walk<R: Rng>(rng: &mut R, graph: &MarkedGraph, from: usize, steps: usize) -> (Word, usize) {
    let mut w = Word::identity();
    let mut v = from;
    for _ in 0..steps {
        let &(g, e, to) = moves(graph, v).choose(rng).expect("irreducible graph has moves");
        w.push(g, e);
        v = to;
    }
    (w, v)
}

/// Shortest stable-letter path from `from` to `to`, ignoring directions.
pub fn path(graph: &MarkedGraph, from: usize, to: usize) -> Word {
    let r = graph.vertex_count();
    let mut prev: Vec<Option<(usize, Generator, i64)>> = vec![None; r + 1];
    let mut seen = vec![false; r + 1];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for (g, e, u) in moves(graph, v) {
            if matches!(g, Generator::S(_)) && !seen[u] {
                seen[u] = true;
                prev[u] = Some((v, g, e));
                queue.push_back(u);
            }
        }
    }
    let mut letters = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, g, e) = prev[cur].expect("connected graph");
        letters.push((g, e));
        cur = p;
    }
    letters.reverse();
    Word::from_syllables(letters)
}

/// A random loop at `base` of roughly `steps` letters.
pub fn random_loop<R: Rng>(rng: &mut R, graph: &MarkedGraph, base: usize, steps: usize) -> Word {
    let (w, end) = walk(rng, graph, base, steps);
    w.concat(&path(graph, end, base))
}

/// A product of conjugates `g R^{+-1} g^-1` at `base`, of length at most
/// `max_len`. Each relator comes with the vertex it is based at.
pub fn relator_conjugates<R: Rng>(
    rng: &mut R,
    graph: &MarkedGraph,
    relators: &[(Word, usize)],
    base: usize,
    max_len: u64,
) -> Word {
    let mut out = Word::identity();
    for attempt in 0..16 {
        let (rel, at) = relators.choose(rng).expect("non-empty relator list");
        let rel = if rng.gen_bool(0.5) { rel.clone() } else { rel.inverse() };
        let steps = rng.gen_range(0..=6);
        let (g, end) = walk(rng, graph, base, steps);
        let g = g.concat(&path(graph, end, *at));
        let piece = g.concat(&rel).concat(&g.inverse());
        let next = out.concat(&piece);
        if next.len() <= max_len {
            out = next;
        } else if attempt > 4 && !out.is_empty() {
            break;
        }
    }
    out
}

/// Exponent sums of the stable letters: a homomorphism to `Z^n`.
pub fn stable_sums(graph: &MarkedGraph, w: &Word) -> Vec<i64> {
    (1..=graph.edge_count()).map(|i| w.exponent_sum(Generator::S(i as u32))).collect()
}
