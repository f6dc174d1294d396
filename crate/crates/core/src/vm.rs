//! Word problem, shuffling and fillings in the vertex groups `V_m`.
//!
//! For `m >= 2`, `V_m` is a tree of groups over the segment of planes
//! `1..=m-1`. Plane `t` is `Z^2 = <a_t, b_t>`; its diagonal `a_t b_t`
//! equals `b_{t-1}`, which is the `b`-generator of plane `t-1`. Aliases:
//! `b_0 = c` and `a_m = b_{m-1}`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::CellCount;
use crate::word::{Generator, Word};

/// One syllable of a normal form: an element `a_t^a b_t^b` of plane `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct NfSyllable {
    pub plane: usize,
    pub a: i64,
    pub b: i64,
}

/// Reduced path of plane elements starting and ending at plane 1.
///
/// Every syllable but the last is a pure `a`-power (a coset
/// representative of the edge group towards the next plane) and no
/// identity syllable sits between two visits of the same plane.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct VmNormalForm {
    pub m: usize,
    pub syllables: Vec<NfSyllable>,
}

impl VmNormalForm {
    pub fn is_identity(&self) -> bool {
        self.syllables.len() == 1 && self.syllables[0].a == 0 && self.syllables[0].b == 0
    }
}

impl fmt::Display for VmNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|s| {
                if self.m == 1 {
                    format!("a_1^{}", s.a)
                } else {
                    format!("[{}: a_{}^{} b_{}^{}]", s.plane, s.plane, s.a, s.plane, s.b)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn check_arity(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidArity(0))
    } else {
        Ok(())
    }
}

/// Rewrites `a_m` as `b_{m-1}` and `c` as `b_0`, rejecting foreign letters.
fn canonical(m: usize, g: Generator) -> Result<Generator> {
    let m32 = m as u32;
    match g {
        Generator::C => Ok(Generator::B(0)),
        Generator::A(i) if i == m32 => Ok(Generator::B(m32 - 1)),
        Generator::A(i) if (1..m32).contains(&i) => Ok(g),
        Generator::B(i) if i < m32 => Ok(g),
        _ => Err(Error::UnknownGenerator(g.to_string())),
    }
}

/// Planes containing a canonical generator.
fn home_planes(m: usize, g: Generator) -> Vec<usize> {
    match g {
        Generator::A(i) => vec![i as usize],
        Generator::B(0) => vec![1],
        Generator::B(j) if j as usize == m - 1 => vec![m - 1],
        Generator::B(j) => vec![j as usize, j as usize + 1],
        _ => unreachable!("canonical generator"),
    }
}

/// Coordinates of a canonical generator in plane `t`, if it lies there.
fn coords(g: Generator, t: usize) -> Option<(i64, i64)> {
    match g {
        Generator::A(i) if i as usize == t => Some((1, 0)),
        Generator::B(j) if j as usize == t => Some((0, 1)),
        Generator::B(j) if j as usize + 1 == t => Some((1, 1)),
        _ => None,
    }
}

/// Canonical syllables of `w`, with adjacent equal generators merged.
fn canonical_word(m: usize, w: &Word) -> Result<Vec<(Generator, i64)>> {
    let mut out = Word::identity();
    for &(g, e) in w.syllables() {
        out.push(canonical(m, g)?, e);
    }
    Ok(out.syllables().to_vec())
}

/// Splits plane-`t` element `(x, y)` towards the adjacent plane `u` into a
/// pure `a`-power and an edge-group element, returned in `u` coordinates.
fn split(t: usize, u: usize, (x, y): (i64, i64)) -> (i64, (i64, i64)) {
    if u == t + 1 {
        (x, (y, y))
    } else {
        (x - y, (0, y))
    }
}

fn mul_vec(v: (i64, i64), e: i64) -> Result<(i64, i64)> {
    Ok((
        v.0.checked_mul(e).ok_or(Error::Overflow("normal form"))?,
        v.1.checked_mul(e).ok_or(Error::Overflow("normal form"))?,
    ))
}

fn add_vec(a: (i64, i64), b: (i64, i64)) -> Result<(i64, i64)> {
    Ok((
        a.0.checked_add(b.0).ok_or(Error::Overflow("normal form"))?,
        a.1.checked_add(b.1).ok_or(Error::Overflow("normal form"))?,
    ))
}

struct NfBuilder {
    m: usize,
    stack: Vec<(usize, (i64, i64))>,
}

impl NfBuilder {
    fn new(m: usize) -> Self {
        NfBuilder { m, stack: vec![(1, (0, 0))] }
    }

    fn top_plane(&self) -> usize {
        self.stack.last().expect("non-empty").0
    }

    /// Moves one plane along the segment.
    fn step(&mut self, u: usize) -> Result<()> {
        let (t, v) = self.stack.pop().expect("non-empty");
        let (rep, carry) = split(t, u, v);
        if rep == 0 && self.stack.last().is_some_and(|s| s.0 == u) {
            let below = self.stack.last_mut().expect("non-empty");
            below.1 = add_vec(below.1, carry)?;
        } else {
            self.stack.push((t, (rep, 0)));
            self.stack.push((u, carry));
        }
        Ok(())
    }

    fn walk_to(&mut self, target: usize) -> Result<()> {
        while self.top_plane() != target {
            let t = self.top_plane();
            self.step(if target > t { t + 1 } else { t - 1 })?;
        }
        Ok(())
    }

    fn add(&mut self, g: Generator, e: i64) -> Result<()> {
        let t = self.top_plane();
        let homes = home_planes(self.m, g);
        let target = *homes.iter().min_by_key(|&&h| h.abs_diff(t)).expect("non-empty");
        self.walk_to(target)?;
        let d = mul_vec(coords(g, target).expect("home plane"), e)?;
        let top = self.stack.last_mut().expect("non-empty");
        top.1 = add_vec(top.1, d)?;
        Ok(())
    }
}

/// Canonical form of `w` in `V_m`.
pub fn normal_form(m: usize, w: &Word) -> Result<VmNormalForm> {
    check_arity(m)?;
    let syl = canonical_word(m, w)?;
    if m == 1 {
        let mut total: i64 = 0;
        for &(_, e) in &syl {
            total = total.checked_add(e).ok_or(Error::Overflow("normal form"))?;
        }
        return Ok(VmNormalForm { m, syllables: vec![NfSyllable { plane: 1, a: total, b: 0 }] });
    }
    let mut nf = NfBuilder::new(m);
    for &(g, e) in &syl {
        nf.add(g, e)?;
    }
    nf.walk_to(1)?;
    let syllables = nf.stack.into_iter().map(|(plane, (a, b))| NfSyllable { plane, a, b }).collect();
    Ok(VmNormalForm { m, syllables })
}

pub fn is_identity(m: usize, w: &Word) -> Result<bool> {
    Ok(normal_form(m, w)?.is_identity())
}

pub fn equals(m: usize, w1: &Word, w2: &Word) -> Result<bool> {
    is_identity(m, &w1.concat(&w2.inverse()))
}

/// Exponent sums of `a_1..a_m` after expanding `b_i = a_{i+1}...a_m`,
/// with `c = b_0` counted separately.
pub fn exponent_vector(m: usize, w: &Word) -> Result<(Vec<i64>, i64)> {
    check_arity(m)?;
    let mut n = vec![0i64; m];
    let mut nc = 0i64;
    for &(g, e) in w.syllables() {
        match canonical(m, g)? {
            Generator::B(0) => nc += e,
            Generator::A(i) => n[i as usize - 1] += e,
            Generator::B(j) => n[j as usize..].iter_mut().for_each(|x| *x += e),
            _ => unreachable!(),
        }
    }
    Ok((n, nc))
}

/// Result of the shuffling rewrite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Shuffled {
    pub word: Word,
    pub exponents: Vec<i64>,
    pub c_exponent: i64,
    pub power: i64,
}

/// Rewrites a word equal to `c^N` as `a_1^n ... a_m^n c^{n_c}`.
pub fn shuffle(m: usize, w: &Word) -> Result<Shuffled> {
    let (n, nc) = exponent_vector(m, w)?;
    if n.iter().any(|&x| x != n[0]) {
        return Err(Error::NotACPower(format!("unequal exponent sums {n:?}")));
    }
    let mut word = Word::identity();
    for i in 1..=m {
        word.push(Generator::A(i as u32), n[0]);
    }
    word.push(Generator::C, nc);
    if !equals(m, w, &word)? {
        return Err(Error::NotACPower(w.to_string()));
    }
    Ok(Shuffled { word, power: n[0] + nc, exponents: n, c_exponent: nc })
}

/// If `w = c^N` in `V_m`, returns `N`.
pub fn power_of_c(m: usize, w: &Word) -> Result<Option<i64>> {
    match shuffle(m, w) {
        Ok(s) => Ok(Some(s.power)),
        Err(Error::NotACPower(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// The cells `(m-1) N^2` of the embedded disk for `c^N`, all of degree 2.
pub fn disk_area(m: usize, n: u64) -> CellCount {
    let mut cc = CellCount::new();
    cc.add(2, num_bigint::BigUint::from(m.saturating_sub(1)) * n * n);
    cc
}

/// One plane-local rewrite performed by [`fill`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FillStep {
    pub plane: usize,
    /// Syllables replaced, as a word.
    pub subword: String,
    /// What they were replaced by.
    pub result: String,
    pub transpositions: u128,
    pub collection: u128,
}

/// Record of a filling of `w x^{-N}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FillingReceipt {
    pub word: Word,
    pub target: Generator,
    pub power: i64,
    /// Relator applications used; free reductions are not counted.
    pub steps: u128,
    /// `3 sum_{i<j} |w_i||w_j|` over the syllables of `w`.
    pub bound: u128,
    pub log: Vec<FillStep>,
}

/// `3 sum_{i<j} |w_i| |w_j|`.
pub fn fill_bound(syllables: &[(Generator, i64)]) -> u128 {
    let lens: Vec<u128> = syllables.iter().map(|s| s.1.unsigned_abs() as u128).collect();
    let total: u128 = lens.iter().sum();
    let squares: u128 = lens.iter().map(|x| x * x).sum();
    3 * ((total * total - squares) / 2)
}

#[derive(Debug)]
struct Item {
    plane: usize,
    start: usize,
    vec: (i64, i64),
}

struct Filler {
    m: usize,
    processed: Vec<(Generator, i64)>,
    stack: Vec<Item>,
    steps: u128,
    log: Vec<FillStep>,
}

impl Filler {
    /// Area of `syl · x^{-N}` inside plane `t`: sort letters as
    /// `a_t^* b_t^* b_{t-1}^*` (two cells per transposition) then collect
    /// the triangle that remains.
    fn plane_cost(&mut self, t: usize, syl: &[(Generator, i64)], target: Option<Generator>, n: i64) -> Result<()> {
        let rank = |g: Generator| match coords(g, t) {
            Some((1, 0)) => 0usize,
            Some((0, 1)) => 1,
            _ => 2,
        };
        let mut counts = [0u128; 3];
        let mut sums = [0i64; 3];
        let mut inversions = 0u128;
        for &(g, e) in syl {
            let r = rank(g);
            let len = e.unsigned_abs() as u128;
            inversions += len * counts[r + 1..].iter().sum::<u128>();
            counts[r] += len;
            sums[r] += e;
        }
        let [alpha, beta, delta] = sums;
        let target_rank = target.and_then(|x| coords(x, t)).map(|c| match c {
            (1, 0) => 0usize,
            (0, 1) => 1,
            _ => 2,
        });
        let collection = match target_rank {
            Some(2) if alpha == beta && beta + delta == n => alpha.unsigned_abs() as u128,
            Some(0) if beta + delta == 0 && alpha + delta == n => delta.unsigned_abs() as u128,
            Some(1) if alpha + delta == 0 && beta + delta == n => delta.unsigned_abs() as u128,
            None if n == 0 && alpha + delta == 0 && beta + delta == 0 => delta.unsigned_abs() as u128,
            _ => return Err(Error::NotEqual),
        };
        let collection = collection * collection;
        self.steps += 2 * inversions + collection;
        self.log.push(FillStep {
            plane: t,
            subword: Word::from_syllables(syl.iter().copied()).to_string(),
            result: match target {
                Some(x) if n != 0 => Word::letter(x, n).to_string(),
                _ => "1".to_string(),
            },
            transpositions: inversions,
            collection,
        });
        Ok(())
    }

    fn push_syllable(&mut self, g: Generator, e: i64) -> Result<()> {
        let top = self.stack.last_mut().expect("non-empty stack");
        top.vec = add_vec(top.vec, mul_vec(coords(g, top.plane).expect("home plane"), e)?)?;
        if self.processed.len() > top.start {
            let last = self.processed.last_mut().expect("non-empty");
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.processed.pop();
                }
                return Ok(());
            }
        }
        self.processed.push((g, e));
        Ok(())
    }

    /// If the item at `idx` lies in the edge group towards plane `u`,
    /// returns the shared generator and its power.
    fn edge_power(&self, idx: usize, u: usize) -> Option<(Generator, i64)> {
        let it = &self.stack[idx];
        let (x, y) = it.vec;
        if u == it.plane + 1 && x == 0 {
            Some((Generator::B(it.plane as u32), y))
        } else if u + 1 == it.plane && x == y {
            Some((Generator::B(u as u32), x))
        } else {
            None
        }
    }

    /// Replaces the top item's syllables by an edge power merged into the
    /// item below.
    fn collapse_top(&mut self, g: Generator, power: i64) -> Result<()> {
        let it = self.stack.pop().expect("non-empty");
        let sub: Vec<_> = self.processed.drain(it.start..).collect();
        self.plane_cost(it.plane, &sub, Some(g), power)?;
        self.push_syllable(g, power)
    }

    /// Replaces the bottom item's syllables by an edge power prepended to
    /// the second item.
    fn collapse_bottom(&mut self, g: Generator, power: i64) -> Result<()> {
        let it = self.stack.remove(0);
        let end = self.stack[0].start;
        let sub: Vec<_> = self.processed.drain(..end).collect();
        self.plane_cost(it.plane, &sub, Some(g), power)?;
        for s in &mut self.stack {
            s.start -= end;
        }
        let next = &mut self.stack[0];
        next.vec = add_vec(next.vec, mul_vec(coords(g, next.plane).expect("shared"), power)?)?;
        if power == 0 {
            return Ok(());
        }
        let next_end = self.stack.get(1).map_or(self.processed.len(), |s| s.start);
        if next_end > 0 && self.processed[0].0 == g {
            self.processed[0].1 += power;
            if self.processed[0].1 == 0 {
                self.processed.remove(0);
                self.stack[1..].iter_mut().for_each(|s| s.start -= 1);
            }
        } else {
            self.processed.insert(0, (g, power));
            self.stack[1..].iter_mut().for_each(|s| s.start += 1);
        }
        Ok(())
    }

    fn move_to(&mut self, u: usize) -> Result<()> {
        let n = self.stack.len();
        if n >= 2 && self.stack[n - 2].plane == u {
            if let Some((g, power)) = self.edge_power(n - 1, u) {
                return self.collapse_top(g, power);
            }
        }
        let start = self.processed.len();
        self.stack.push(Item { plane: u, start, vec: (0, 0) });
        Ok(())
    }
}

/// Fills `w x^{-N}` following the innermost-excursion induction: every
/// maximal visit to a plane that returns across the same line is replaced
/// by a power of the shared generator, then the last plane is filled.
pub fn fill(m: usize, w: &Word, x: Generator, n: i64) -> Result<FillingReceipt> {
    check_arity(m)?;
    let syl = canonical_word(m, w)?;
    let xc = canonical(m, x)?;
    let bound = fill_bound(&syl);
    if !equals(m, w, &Word::letter(x, n))? {
        return Err(Error::NotEqual);
    }
    if n.unsigned_abs() > w.len() {
        return Err(Error::Invalid(format!("|N| = {} exceeds |w| = {}", n.unsigned_abs(), w.len())));
    }
    let receipt = |steps, log| FillingReceipt { word: w.clone(), target: x, power: n, steps, bound, log };
    if m == 1 {
        return Ok(receipt(0, vec![]));
    }
    let x_homes = home_planes(m, xc);
    let mut f = Filler { m, processed: Vec::new(), stack: Vec::new(), steps: 0, log: Vec::new() };
    for &(g, e) in &syl {
        let homes = home_planes(f.m, g);
        match f.stack.last().map(|it| it.plane) {
            None => {
                let plane = homes.iter().copied().find(|p| x_homes.contains(p)).unwrap_or(homes[0]);
                f.stack.push(Item { plane, start: 0, vec: (0, 0) });
            }
            Some(t) if homes.contains(&t) => {}
            Some(t) => {
                let target = *homes.iter().min_by_key(|&&h| h.abs_diff(t)).expect("non-empty");
                let mut cur = t;
                while cur != target {
                    cur = if target > cur { cur + 1 } else { cur - 1 };
                    f.move_to(cur)?;
                }
            }
        }
        f.push_syllable(g, e)?;
    }
    if f.stack.is_empty() {
        return Ok(receipt(0, vec![]));
    }
    while f.stack.len() > 1 {
        let k = f.stack.len();
        if let Some((g, power)) = f.edge_power(k - 1, f.stack[k - 2].plane) {
            f.collapse_top(g, power)?;
        } else if let Some((g, power)) = f.edge_power(0, f.stack[1].plane) {
            f.collapse_bottom(g, power)?;
        } else {
            return Err(Error::NotEqual);
        }
    }
    let last = f.stack.pop().expect("single item");
    let sub: Vec<_> = f.processed.drain(..).collect();
    let target = coords(xc, last.plane).map(|_| xc);
    f.plane_cost(last.plane, &sub, target, if target.is_some() { n } else { 0 })?;
    if target.is_none() && n != 0 {
        return Err(Error::NotEqual);
    }
    if f.steps > bound {
        return Err(Error::Invalid(format!("filling used {} steps above bound {bound}", f.steps)));
    }
    Ok(receipt(f.steps, f.log))
}
