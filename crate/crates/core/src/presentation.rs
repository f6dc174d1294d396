//! The marked graph of a matrix and finite presentations of the vertex
//! groups, snowflake groups, their suspensions and products with free
//! abelian factors.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{exponents, is_irreducible, IntMatrix, Slope};
use crate::word::{Generator, Word};

/// Directed graph with `p_ij` edges from vertex `i` to vertex `j`.
///
/// Vertices are numbered `1..=R` and edges `1..=n`; edges are sorted by
/// (source, target, multiplicity) so edge `i` carries generator `a_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedGraph {
    matrix: IntMatrix,
    rho: Vec<usize>,
    sigma: Vec<usize>,
    parts: Vec<Vec<usize>>,
}

impl MarkedGraph {
    pub fn build(p: &IntMatrix) -> Result<Self> {
        if !is_irreducible(p) {
            return Err(Error::NotIrreducible);
        }
        Ok(Self::build_unchecked(p))
    }

    fn build_unchecked(p: &IntMatrix) -> Self {
        let r = p.dim();
        let (mut rho, mut sigma) = (Vec::new(), Vec::new());
        let mut parts = vec![Vec::new(); r];
        for (v, part) in parts.iter_mut().enumerate() {
            for w in 0..r {
                for _ in 0..p.get(v, w) {
                    rho.push(v + 1);
                    sigma.push(w + 1);
                    part.push(rho.len());
                }
            }
        }
        MarkedGraph { matrix: p.clone(), rho, sigma, parts }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn vertex_count(&self) -> usize {
        self.parts.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rho.len()
    }

    /// Source vertex of edge `i`.
    pub fn rho(&self, i: usize) -> usize {
        self.rho[i - 1]
    }

    /// Target vertex of edge `i`.
    pub fn sigma(&self, i: usize) -> usize {
        self.sigma[i - 1]
    }

    /// The edges leaving vertex `v`, ascending.
    pub fn part(&self, v: usize) -> &[usize] {
        &self.parts[v - 1]
    }

    /// Rank `m_v` of the vertex group at `v`.
    pub fn m(&self, v: usize) -> usize {
        self.parts[v - 1].len()
    }

    pub fn max_m(&self) -> usize {
        self.parts.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Position of edge `i` inside its part, 1-based.
    pub fn local_index(&self, i: usize) -> usize {
        let part = self.part(self.rho(i));
        part.iter().position(|&e| e == i).expect("edge in its part") + 1
    }

    /// The diagonal element `c_v` as a word in `a`-letters.
    pub fn diagonal(&self, v: usize) -> Word {
        Word::from_syllables(self.part(v).iter().map(|&i| (Generator::A(i as u32), 1)))
    }

    /// Edges of a maximal tree found by breadth-first search from vertex 1,
    /// ignoring edge directions. Each new vertex uses its lowest edge.
    pub fn maximal_tree(&self) -> Vec<usize> {
        let r = self.vertex_count();
        let mut seen = vec![false; r + 1];
        seen[1] = true;
        let mut queue = VecDeque::from([1usize]);
        let mut tree = Vec::new();
        while let Some(v) = queue.pop_front() {
            for i in 1..=self.edge_count() {
                let (a, b) = (self.rho(i), self.sigma(i));
                let other = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    tree.push(i);
                    queue.push_back(other);
                }
            }
        }
        tree.sort_unstable();
        tree
    }
}

/// Which member of the family a presentation describes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    Empty,
    Vm { m: usize },
    Grp { matrix: IntMatrix, p: u64, q: u64, kill_tree: bool },
    Z2 { r: u64 },
    Suspension { k: u32, base: Box<Family> },
    Product { ell: u32, base: Box<Family> },
}

/// A diagonal element `c_v` recorded as a word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagonal {
    pub vertex: usize,
    pub word: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<Generator>,
    pub relators: Vec<Word>,
    pub family: Family,
    pub diagonals: Vec<Diagonal>,
}

/// Output formats of [`emit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Plain,
    Json,
    Calg,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Format::Plain),
            "json" => Ok(Format::Json),
            "calg" => Ok(Format::Calg),
            _ => Err(Error::Invalid(format!("unknown format {s:?}; expected plain, json or calg"))),
        }
    }
}

impl Presentation {
    pub fn empty() -> Self {
        Presentation { generators: vec![], relators: vec![], family: Family::Empty, diagonals: vec![] }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let pres: Presentation = serde_json::from_str(s).map_err(|e| Error::PresentationParse(e.to_string()))?;
        pres.check()?;
        Ok(pres)
    }

    /// Generator names are unique and every relator uses listed generators.
    pub fn check(&self) -> Result<()> {
        let gens: BTreeSet<Generator> = self.generators.iter().copied().collect();
        if gens.len() != self.generators.len() {
            return Err(Error::PresentationParse("duplicate generator".into()));
        }
        for w in &self.relators {
            if let Some((g, _)) = w.syllables().iter().find(|(g, _)| !gens.contains(g)) {
                return Err(Error::UnknownGenerator(g.to_string()));
            }
        }
        Ok(())
    }

    /// Parameters of the snowflake or Z^2 root together with the current
    /// suspension depth.
    fn suspension_root(&self) -> Result<(u64, u32)> {
        fn walk(f: &Family) -> Result<(u64, u32)> {
            match f {
                Family::Grp { p, q, .. } => {
                    if *q != 1 {
                        Err(Error::RationalRNotAllowed(*q))
                    } else {
                        Ok((*p, 0))
                    }
                }
                Family::Z2 { r } => Ok((*r, 0)),
                Family::Suspension { k, base } => walk(base).map(|(r, d)| (r, d + k)),
                _ => Err(Error::InvalidSuspensionBase),
            }
        }
        walk(&self.family)
    }
}

/// `V_m = < a_1..a_m | [a_i, a_{i+1}...a_m] >` with `c = a_1...a_m`.
pub fn vm_presentation(m: i64) -> Result<Presentation> {
    if m <= 0 {
        return Err(Error::InvalidArity(m));
    }
    let edges: Vec<usize> = (1..=m as usize).collect();
    Ok(Presentation {
        generators: edges.iter().map(|&i| Generator::A(i as u32)).collect(),
        relators: vm_relators(&edges),
        family: Family::Vm { m: m as usize },
        diagonals: vec![Diagonal { vertex: 1, word: a_product(&edges) }],
    })
}

fn a_product(edges: &[usize]) -> Word {
    Word::from_syllables(edges.iter().map(|&i| (Generator::A(i as u32), 1)))
}

/// Commutators `[a_{e_i}, a_{e_{i+1}} ... a_{e_m}]` for an ordered list of edges.
fn vm_relators(edges: &[usize]) -> Vec<Word> {
    (0..edges.len().saturating_sub(1))
        .map(|i| Word::commutator(&Word::letter(Generator::A(edges[i] as u32), 1), &a_product(&edges[i + 1..])))
        .collect()
}

/// The snowflake group `G_{r,P}` on generators `a_1..a_n, s_1..s_n`.
pub fn grp_presentation(p: &IntMatrix, r: Slope, kill_tree: bool) -> Result<Presentation> {
    exponents(p, r)?;
    let g = MarkedGraph::build(p)?;
    let n = g.edge_count();
    let mut generators: Vec<Generator> = (1..=n).map(|i| Generator::A(i as u32)).collect();
    generators.extend((1..=n).map(|i| Generator::S(i as u32)));
    let mut relators = Vec::new();
    for v in 1..=g.vertex_count() {
        relators.extend(vm_relators(g.part(v)));
    }
    for i in 1..=n {
        let s = Word::letter(Generator::S(i as u32), 1);
        let rel = s
            .inverse()
            .concat(&Word::letter(Generator::A(i as u32), r.p as i64))
            .concat(&s)
            .concat(&g.diagonal(g.sigma(i)).pow(-(r.q as i64)));
        relators.push(rel);
    }
    if kill_tree {
        relators.extend(g.maximal_tree().into_iter().map(|i| Word::letter(Generator::S(i as u32), 1)));
    }
    let diagonals = (1..=g.vertex_count()).map(|v| Diagonal { vertex: v, word: g.diagonal(v) }).collect();
    Ok(Presentation {
        generators,
        relators,
        family: Family::Grp { matrix: p.clone(), p: r.p, q: r.q, kill_tree },
        diagonals,
    })
}

/// `Z^2 = < a_1, a_2 | [a_1, a_2] >` with `c = a_1 a_2`, carrying the
/// scaling factor `r` used by suspensions.
pub fn z2_presentation(r: u64) -> Result<Presentation> {
    if r < 2 {
        return Err(Error::Invalid(format!("Z^2 base needs r >= 2; got {r}")));
    }
    let edges = [1usize, 2];
    Ok(Presentation {
        generators: vec![Generator::A(1), Generator::A(2)],
        relators: vm_relators(&edges),
        family: Family::Z2 { r },
        diagonals: vec![Diagonal { vertex: 1, word: a_product(&edges) }],
    })
}

/// Adds levels of stable letters `u_j, v_j` conjugating every earlier
/// generator `g` to `phi(g)`, where `phi(a_i) = a_i^r` fixes the rest.
pub fn suspension_presentation(base: &Presentation, k: u32) -> Result<Presentation> {
    let (r, depth) = base.suspension_root()?;
    if k == 0 {
        return Ok(base.clone());
    }
    let mut pres = base.clone();
    for level in depth + 1..=depth + k {
        let (u, v) = (Generator::U(level), Generator::V(level));
        let previous = pres.generators.clone();
        for t in [u, v] {
            for &g in &previous {
                let image = match g {
                    Generator::A(_) => Word::letter(g, r as i64),
                    _ => Word::letter(g, 1),
                };
                let t = Word::letter(t, 1);
                pres.relators.push(t.concat(&Word::letter(g, 1)).concat(&t.inverse()).concat(&image.inverse()));
            }
        }
        pres.generators.extend([u, v]);
    }
    pres.family = match base.family.clone() {
        Family::Suspension { k: k0, base } => Family::Suspension { k: k0 + k, base },
        other => Family::Suspension { k, base: Box::new(other) },
    };
    Ok(pres)
}

/// Adds central generators `z_1..z_ell`.
pub fn product_presentation(base: &Presentation, ell: u32) -> Presentation {
    if ell == 0 {
        return base.clone();
    }
    let mut pres = base.clone();
    let start = base.generators.iter().filter(|g| matches!(g, Generator::Z(_))).count() as u32;
    for l in start + 1..=start + ell {
        let z = Word::letter(Generator::Z(l), 1);
        for &g in &pres.generators.clone() {
            pres.relators.push(Word::commutator(&z, &Word::letter(g, 1)));
        }
        pres.generators.push(Generator::Z(l));
    }
    pres.family = Family::Product { ell, base: Box::new(base.family.clone()) };
    pres
}

/// Renders a presentation. Output depends only on the presentation.
pub fn emit(pres: &Presentation, format: Format) -> String {
    match format {
        Format::Plain => emit_plain(pres),
        Format::Json => serde_json::to_string(pres).expect("presentation serializes"),
        Format::Calg => emit_calg(pres),
    }
}

fn emit_plain(pres: &Presentation) -> String {
    let gens: Vec<String> = pres.generators.iter().map(ToString::to_string).collect();
    if gens.is_empty() && pres.relators.is_empty() {
        return "< | >\n".to_string();
    }
    let mut out = format!("< {} |", gens.join(", "));
    if pres.relators.is_empty() {
        out.push_str(" >\n");
        return out;
    }
    out.push('\n');
    for (k, rel) in pres.relators.iter().enumerate() {
        let sep = if k + 1 == pres.relators.len() { "" } else { "," };
        let _ = writeln!(out, "    {rel}{sep}");
    }
    out.push_str(">\n");
    out
}

fn calg_word(w: &Word) -> String {
    if w.is_empty() {
        return "One(F)".to_string();
    }
    let parts: Vec<String> =
        w.syllables().iter().map(|(g, e)| if *e == 1 { g.to_string() } else { format!("{g}^{e}") }).collect();
    parts.join("*")
}

fn emit_calg(pres: &Presentation) -> String {
    let mut out = String::new();
    if pres.generators.is_empty() {
        out.push_str("F := FreeGroup(0);\n");
    } else {
        let names: Vec<String> = pres.generators.iter().map(|g| format!("\"{g}\"")).collect();
        let _ = writeln!(out, "F := FreeGroup({});", names.join(", "));
        for (k, g) in pres.generators.iter().enumerate() {
            let _ = writeln!(out, "{g} := F.{};", k + 1);
        }
    }
    let rels: Vec<String> = pres.relators.iter().map(calg_word).collect();
    let _ = writeln!(out, "rels := [{}];", rels.join(", "));
    out.push_str("G := F / rels;\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u64]]) -> IntMatrix {
        IntMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn graph_examples() {
        let g = MarkedGraph::build(&IntMatrix::scalar(4)).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 4));
        assert_eq!(g.part(1), &[1, 2, 3, 4]);
        assert!((1..=4).all(|i| g.rho(i) == 1 && g.sigma(i) == 1));

        let g = MarkedGraph::build(&m(&[&[1, 1], &[2, 1]])).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.m(1), g.m(2)), (2, 5, 2, 3));
        assert_eq!((g.rho(1), g.sigma(1), g.rho(2), g.sigma(2)), (1, 1, 1, 2));
        assert_eq!(g.maximal_tree(), vec![2]);

        let g = MarkedGraph::build(&m(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!((g.part(1), g.part(2)), (&[1][..], &[2][..]));
        assert!(MarkedGraph::build(&m(&[&[1, 0], &[0, 1]])).is_err());
    }

    #[test]
    fn vm_examples() {
        let p = vm_presentation(16).unwrap();
        assert_eq!((p.generators.len(), p.relators.len()), (16, 15));
        assert_eq!(vm_presentation(1).unwrap().relators.len(), 0);
        assert_eq!(vm_presentation(2).unwrap().relators[0].to_string(), "a_1 a_2 a_1^-1 a_2^-1");
        assert_eq!(vm_presentation(0), Err(Error::InvalidArity(0)));
    }

    #[test]
    fn v2_json() {
        let text = emit(&vm_presentation(2).unwrap(), Format::Json);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let expected: serde_json::Value = serde_json::from_str(
            r#"{"generators":["a_1","a_2"],"relators":[[["a_1",1],["a_2",1],["a_1",-1],["a_2",-1]]]}"#,
        )
        .unwrap();
        assert_eq!(v["generators"], expected["generators"]);
        assert_eq!(v["relators"], expected["relators"]);
        assert!(
            text.starts_with(r#"{"generators":["a_1","a_2"],"relators":[[["a_1",1],["a_2",1],["a_1",-1],["a_2",-1]]]"#)
        );
    }

    #[test]
    fn grp_examples() {
        let p = grp_presentation(&IntMatrix::scalar(16), Slope::integer(32), false).unwrap();
        assert_eq!((p.generators.len(), p.relators.len()), (32, 31));
        assert!(emit(&p, Format::Plain).contains("s_1^-1 a_1^32 s_1"));
        let p = grp_presentation(&IntMatrix::scalar(4), Slope::integer(8), false).unwrap();
        assert_eq!(p.relators[3].to_string(), "s_1^-1 a_1^8 s_1 a_4^-1 a_3^-1 a_2^-1 a_1^-1");
        assert!(matches!(
            grp_presentation(&m(&[&[0, 1], &[1, 0]]), Slope::integer(2), false),
            Err(Error::LambdaNotGreaterThanOne(_))
        ));
        let p = grp_presentation(&m(&[&[1, 1], &[2, 1]]), Slope::integer(4), true).unwrap();
        assert_eq!(p.relators.last().unwrap().to_string(), "s_2");
    }

    #[test]
    fn suspension_and_product_counts() {
        let g3 = grp_presentation(&IntMatrix::scalar(4), Slope::integer(8), false).unwrap();
        let s = suspension_presentation(&g3, 1).unwrap();
        assert_eq!(s.generators.len(), 10);
        assert_eq!(s.relators.len() - g3.relators.len(), 16);
        assert_eq!(suspension_presentation(&g3, 0).unwrap(), g3);
        let s2 = suspension_presentation(&s, 1).unwrap();
        assert_eq!(s2.relators.len() - s.relators.len(), 20);
        assert_eq!(s2.family, suspension_presentation(&g3, 2).unwrap().family);

        let z2 = z2_presentation(2).unwrap();
        let sz = suspension_presentation(&z2, 1).unwrap();
        assert!(sz.relators.iter().any(|w| w.to_string() == "u_1 a_1 u_1^-1 a_1^-2"));

        let g52 = grp_presentation(&IntMatrix::scalar(16), Slope::integer(32), false).unwrap();
        let prod = product_presentation(&g52, 1);
        assert_eq!((prod.generators.len(), prod.relators.len()), (33, 63));
        let z4 = product_presentation(&z2, 2);
        assert_eq!((z4.generators.len(), z4.relators.len()), (4, 6));

        let rational = grp_presentation(&IntMatrix::scalar(4), Slope::new(9, 2).unwrap(), false).unwrap();
        assert_eq!(suspension_presentation(&rational, 1), Err(Error::RationalRNotAllowed(2)));
    }

    #[test]
    fn emit_empty_and_calg() {
        let e = Presentation::empty();
        assert_eq!(emit(&e, Format::Plain), "< | >\n");
        assert!(emit(&e, Format::Calg).contains("FreeGroup(0)"));
        assert_eq!(Presentation::from_json(&emit(&e, Format::Json)).unwrap(), e);
        let calg = emit(&vm_presentation(2).unwrap(), Format::Calg);
        assert!(calg.contains("rels := [a_1*a_2*a_1^-1*a_2^-1];"));
    }

    #[test]
    fn json_round_trip() {
        let p = grp_presentation(&m(&[&[1, 1], &[2, 1]]), Slope::integer(4), true).unwrap();
        let back = Presentation::from_json(&emit(&p, Format::Json)).unwrap();
        assert_eq!(back, p);
        let Family::Grp { matrix, .. } = &back.family else { panic!() };
        assert_eq!(MarkedGraph::build(matrix).unwrap(), MarkedGraph::build(&m(&[&[1, 1], &[2, 1]])).unwrap());
    }
}
