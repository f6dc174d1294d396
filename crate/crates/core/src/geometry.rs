//! Exact cell counts for snowflake disks, snowflake balls and product
//! balls, with the exponent fits built on them.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fit::{line_fit, ln_big, ln_rational, LineFit};
use crate::memo_cap;
use crate::snowflake::{AlphaFit, Body, Sign, SnowflakeParams, SnowflakeWord};
use crate::spectral::{IntMatrix, Slope};

/// Cells grouped by `a`-degree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CellCount {
    counts: BTreeMap<u32, BigUint>,
}

impl CellCount {
    pub fn new() -> Self {
        CellCount::default()
    }

    pub fn single(degree: u32, count: BigUint) -> Self {
        let mut c = CellCount::new();
        c.add(degree, count);
        c
    }

    pub fn add(&mut self, degree: u32, count: BigUint) {
        if count.is_zero() {
            return;
        }
        *self.counts.entry(degree).or_default() += count;
    }

    pub fn add_all(&mut self, other: &CellCount) {
        for (&d, c) in &other.counts {
            self.add(d, c.clone());
        }
    }

    pub fn get(&self, degree: u32) -> BigUint {
        self.counts.get(&degree).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigUint)> {
        self.counts.iter().map(|(&d, c)| (d, c))
    }

    pub fn scaled(&self, factor: u32) -> CellCount {
        let counts = self.counts.iter().map(|(&d, c)| (d, c * factor)).collect();
        CellCount { counts }
    }

    /// Degree-wise difference, or `None` if some degree would go negative.
    pub fn checked_sub(&self, other: &CellCount) -> Option<CellCount> {
        let mut out = self.clone();
        for (&d, c) in &other.counts {
            let have = out.counts.get(&d).cloned().unwrap_or_default();
            if &have < c {
                return None;
            }
            let left = have - c;
            if left.is_zero() {
                out.counts.remove(&d);
            } else {
                out.counts.insert(d, left);
            }
        }
        Some(out)
    }
}

impl Serialize for CellCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.counts.len()))?;
        for (d, c) in &self.counts {
            map.serialize_entry(&d.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

/// Image under `Phi`: a cell of degree `d` becomes `r^d` cells.
pub fn phi_image(c: &CellCount, r: u64) -> CellCount {
    let counts = c.counts.iter().map(|(&d, n)| (d, n * BigUint::from(r).pow(d))).collect();
    CellCount { counts }
}

/// A group whose disks and balls can be counted.
#[derive(Debug, Clone)]
pub enum Family {
    Snowflake(Box<SnowflakeParams>),
    /// `Z^2` with the scaling `a_i -> a_i^r`.
    Z2 {
        r: u64,
    },
}

/// Exact data of a disk filling `c^N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiskStats {
    pub vertex: usize,
    pub n: i64,
    pub perimeter: u128,
    pub area: CellCount,
    pub d_min: u32,
    pub d_max: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiskRow {
    pub depth: u32,
    pub n: i64,
    pub perimeter: u128,
    pub area: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentFit {
    pub fit: LineFit,
    pub target: f64,
}

impl Family {
    pub fn snowflake(p: &IntMatrix, r: Slope) -> Result<Self> {
        Ok(Family::Snowflake(Box::new(SnowflakeParams::new(p, r)?)))
    }

    pub fn z2(r: u64) -> Result<Self> {
        if r < 2 {
            return Err(Error::Invalid(format!("Z^2 scaling needs r >= 2; got {r}")));
        }
        Ok(Family::Z2 { r })
    }

    /// The length exponent `alpha`.
    pub fn alpha(&self) -> f64 {
        match self {
            Family::Snowflake(sp) => sp.alpha(),
            Family::Z2 { .. } => 1.0,
        }
    }

    pub fn power(&self, d: u32) -> Result<i64> {
        match self {
            Family::Snowflake(sp) => sp.power(d),
            Family::Z2 { r } => {
                let v = BigUint::from(*r).pow(d);
                i64::try_from(v).map_err(|_| Error::Overflow("r^d"))
            }
        }
    }

    fn integer_r(&self) -> Result<u64> {
        match self {
            Family::Snowflake(sp) if sp.slope.q != 1 => Err(Error::RationalRNotAllowed(sp.slope.q)),
            Family::Snowflake(sp) => Ok(sp.slope.p),
            Family::Z2 { r } => Ok(*r),
        }
    }

    /// The lowest vertex whose group has rank at least 2.
    pub fn default_vertex(&self) -> usize {
        match self {
            Family::Snowflake(sp) => (1..=sp.graph.vertex_count()).find(|&v| sp.graph.m(v) >= 2).unwrap_or(1),
            Family::Z2 { .. } => 1,
        }
    }

    /// Perimeter and typed area of the disk for `c_v^N`.
    pub fn disk(&self, vertex: usize, n: i64) -> Result<DiskStats> {
        match self {
            Family::Snowflake(sp) => snowflake_disk(sp, vertex, n),
            Family::Z2 { .. } => {
                if vertex != 1 {
                    return Err(Error::VertexOutOfRange { vertex, count: 1 });
                }
                let a = BigUint::from(n.unsigned_abs());
                Ok(DiskStats {
                    vertex,
                    n,
                    perimeter: 4 * n.unsigned_abs() as u128,
                    area: CellCount::single(2, &a * &a),
                    d_min: 0,
                    d_max: 0,
                })
            }
        }
    }

    /// Disks for `N = r^d` over the given depths.
    pub fn disk_rows(&self, vertex: usize, depths: &[u32]) -> Result<Vec<DiskRow>> {
        depths
            .par_iter()
            .map(|&d| {
                let n = self.power(d)?;
                let st = self.disk(vertex, n)?;
                Ok(DiskRow { depth: d, n, perimeter: st.perimeter, area: st.area.total().to_string() })
            })
            .collect()
    }

    /// Slope of `log N` against `log |w|` over `N = r^d`.
    pub fn fit_alpha(&self, vertex: usize, depths: &[u32]) -> Result<AlphaFit> {
        match self {
            Family::Snowflake(sp) => sp.fit_alpha(vertex, depths),
            Family::Z2 { .. } => {
                let rows = depths
                    .iter()
                    .map(|&d| Ok((d, self.power(d)?, 4 * self.power(d)? as u128)))
                    .collect::<Result<Vec<_>>>()?;
                let pts: Vec<(f64, f64)> = rows.iter().map(|&(_, n, l)| ((l as f64).ln(), (n as f64).ln())).collect();
                let fit = line_fit(&pts)?;
                Ok(AlphaFit { fit, target: 1.0, c0: 0.25, c1: 0.25, rows })
            }
        }
    }

    /// Slope of `log area` against `log perimeter` over `N = r^d`.
    pub fn fit_disk_exponent(&self, vertex: usize, depths: &[u32]) -> Result<(ExponentFit, Vec<DiskRow>)> {
        if depths.len() < 3 {
            return Err(Error::InsufficientData(depths.len()));
        }
        let rows = self.disk_rows(vertex, depths)?;
        let pts = rows
            .iter()
            .map(|r| {
                let area: BigUint = r.area.parse().map_err(|_| Error::Invalid("area".into()))?;
                Ok(((r.perimeter as f64).ln(), ln_big(&area)))
            })
            .collect::<Result<Vec<_>>>()?;
        let fit = line_fit(&pts)?;
        Ok((ExponentFit { fit, target: 2.0 * self.alpha() }, rows))
    }

    /// Snowflake balls `B^k_j` for `2 <= k' <= k` and `1 <= j' <= j_max`,
    /// indexed `[k' - 2][j' - 1]`.
    pub fn ball_table(&self, k: u32, j_max: u32) -> Result<Vec<Vec<BallStats>>> {
        if k < 2 {
            return Err(Error::NonPositiveIndex(k as i64 - 1));
        }
        if j_max < 1 {
            return Err(Error::NonPositiveIndex(j_max as i64));
        }
        let r = self.integer_r()?;
        let vertex = self.default_vertex();
        let disks =
            (1..=j_max).into_par_iter().map(|j| self.disk(vertex, self.power(j)?)).collect::<Result<Vec<_>>>()?;
        let mut level = Vec::with_capacity(j_max as usize);
        for (idx, d) in disks.iter().enumerate() {
            let j = idx as u32 + 1;
            let shell = shell_of(&level, &d.area, r, 2, j)?;
            level.push(BallStats {
                k: 2,
                j,
                interior: d.area.clone(),
                boundary: CellCount::single(0, BigUint::from(d.perimeter)),
                shell,
            });
        }
        let mut table = vec![level];
        for kk in 3..=k {
            let prev = table.last().expect("base level");
            let mut next: Vec<BallStats> = Vec::with_capacity(j_max as usize);
            let (mut si, mut ss, mut sb) = (CellCount::new(), CellCount::new(), CellCount::new());
            for (idx, b) in prev.iter().enumerate() {
                let j = idx as u32 + 1;
                si.add_all(&b.interior);
                ss.add_all(&b.shell);
                sb.add_all(&b.boundary);
                sb.add_all(&b.shell);
                let interior = si.scaled(2);
                let shell = ss.scaled(2);
                let by_difference = shell_of(&next, &interior, r, kk, j)?;
                if by_difference != shell {
                    return Err(Error::Invalid(format!("shell recurrences disagree at k = {kk}, j = {j}")));
                }
                next.push(BallStats { k: kk, j, interior, boundary: sb.scaled(2), shell });
            }
            table.push(next);
        }
        Ok(table)
    }

    pub fn ball(&self, k: u32, j: u32) -> Result<BallStats> {
        let mut table = self.ball_table(k, j)?;
        let mut top = table.pop().expect("non-empty table");
        Ok(top.pop().expect("non-empty level"))
    }

    /// Slope of `log Vol(B^k_j)` against `log Vol(boundary)` over `j`.
    pub fn fit_ball_exponent(&self, k: u32, js: &[u32]) -> Result<(ExponentFit, Vec<BallStats>)> {
        if js.len() < 3 {
            return Err(Error::InsufficientData(js.len()));
        }
        if let Some(&j) = js.iter().find(|&&j| j == 0) {
            return Err(Error::NonPositiveIndex(j as i64));
        }
        let j_max = *js.iter().max().expect("non-empty");
        let mut table = self.ball_table(k, j_max)?;
        let top = table.pop().expect("non-empty table");
        let rows: Vec<BallStats> = js.iter().map(|&j| top[j as usize - 1].clone()).collect();
        let pts: Vec<(f64, f64)> =
            rows.iter().map(|b| (ln_big(&b.boundary.total()), ln_big(&b.interior.total()))).collect();
        let fit = line_fit(&pts)?;
        Ok((ExponentFit { fit, target: 2.0 * self.alpha() }, rows))
    }
}

/// `shell(k, j) = interior(k, j) - Phi(interior(k, j-1))`, or the whole
/// interior when `j = 1`.
fn shell_of(level: &[BallStats], interior: &CellCount, r: u64, k: u32, j: u32) -> Result<CellCount> {
    match level.last() {
        None => Ok(interior.clone()),
        Some(prev) => interior
            .checked_sub(&phi_image(&prev.interior, r))
            .ok_or_else(|| Error::Invalid(format!("negative shell at k = {k}, j = {j}"))),
    }
}

fn snowflake_disk(sp: &SnowflakeParams, vertex: usize, n: i64) -> Result<DiskStats> {
    let pos = sp.build(vertex, n, Sign::Positive)?;
    let neg = sp.build(vertex, n, Sign::Negative)?;
    let (sp_st, sn_st) = (pos.stats(), neg.stats());
    let mut memo = HashMap::new();
    let mut area = half_area(sp, &pos, &mut memo);
    area.add_all(&half_area(sp, &neg, &mut memo));
    Ok(DiskStats {
        vertex,
        n,
        perimeter: sp_st.length + sn_st.length,
        area,
        d_min: sp_st.d_min.min(sn_st.d_min),
        d_max: sp_st.d_max.max(sn_st.d_max),
    })
}

/// `H(v, N)`: the central `(m_v - 1) N^2` triangles plus, for a composite
/// node, `|k_j|` strip cells and the child's half-disk per edge.
fn half_area(sp: &SnowflakeParams, w: &SnowflakeWord, memo: &mut HashMap<(usize, i64, Sign), CellCount>) -> CellCount {
    let key = (w.vertex, w.n, w.sign);
    if let Some(c) = memo.get(&key) {
        return c.clone();
    }
    let n = BigUint::from(w.n.unsigned_abs());
    let mut c = CellCount::single(2, BigUint::from(sp.graph.m(w.vertex) - 1) * &n * &n);
    if let Body::Composite(strands) = &w.body {
        for s in strands {
            let k = (w.n - s.remainder) / sp.slope.p as i64;
            c.add(1, BigUint::from(k.unsigned_abs()));
            c.add_all(&half_area(sp, &s.child, memo));
        }
    }
    if memo.len() < memo_cap() {
        memo.insert(key, c.clone());
    }
    c
}

/// Interior, boundary and shell volumes of a snowflake ball. Base
/// boundaries count edges and are stored at degree 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallStats {
    pub k: u32,
    pub j: u32,
    pub interior: CellCount,
    pub boundary: CellCount,
    pub shell: CellCount,
}

/// One level `C_i = B_i x [0, m_i / 3 n_i]` of a product ball.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductLevel {
    /// `m_i = 3 Vol(B_i)`, the boundary volume of `C_i`.
    pub boundary: BigRational,
    /// `m_i^2 / 9 n_i`.
    pub volume: BigRational,
}

/// Maps `(n_i, Vol(B_i))` pairs to product-ball levels. Feeding the result
/// back in models a further `Z` factor.
pub fn product_ball(seq: &[(BigRational, BigRational)]) -> Result<Vec<ProductLevel>> {
    seq.iter()
        .map(|(n, v)| {
            if !(n > &BigRational::zero()) {
                return Err(Error::Invalid(format!("boundary volume must be positive; got {n}")));
            }
            let m = v * BigRational::from_integer(BigInt::from(3));
            let volume = &m * &m / (n * BigRational::from_integer(BigInt::from(9)));
            Ok(ProductLevel { boundary: m, volume })
        })
        .collect()
}

/// Slope of `log Vol(C_i)` against `log m_i`.
pub fn fit_product(levels: &[ProductLevel]) -> Result<LineFit> {
    let pts: Vec<(f64, f64)> = levels.iter().map(|l| (ln_rational(&l.boundary), ln_rational(&l.volume))).collect();
    line_fit(&pts)
}

/// `(perimeter, area)` pairs of disks as exact rationals, the usual input
/// to [`product_ball`].
pub fn disk_pairs(rows: &[DiskRow]) -> Result<Vec<(BigRational, BigRational)>> {
    rows.iter()
        .map(|r| {
            let area: BigInt = r.area.parse().map_err(|_| Error::Invalid("area".into()))?;
            Ok((BigRational::from_integer(BigInt::from(r.perimeter)), BigRational::from_integer(area)))
        })
        .collect()
}

/// Turns product levels into the `(n, Vol)` input for the next step.
pub fn next_pairs(levels: &[ProductLevel]) -> Vec<(BigRational, BigRational)> {
    levels.iter().map(|l| (l.boundary.clone(), l.volume.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(p: u64, r: u64) -> Family {
        Family::snowflake(&IntMatrix::scalar(p), Slope::integer(r)).unwrap()
    }

    fn cc(pairs: &[(u32, u64)]) -> CellCount {
        let mut c = CellCount::new();
        for &(d, n) in pairs {
            c.add(d, BigUint::from(n));
        }
        c
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_image(&cc(&[(2, 5)]), 2), cc(&[(2, 20)]));
        assert_eq!(phi_image(&cc(&[(1, 3), (2, 4)]), 8), cc(&[(1, 24), (2, 256)]));
        assert!(phi_image(&CellCount::new(), 8).is_empty());
    }

    #[test]
    fn disk_examples() {
        let z = Family::z2(2).unwrap();
        let d = z.disk(1, 8).unwrap();
        assert_eq!((d.perimeter, d.area.clone()), (32, cc(&[(2, 64)])));
        let f = family(4, 8);
        let d = f.disk(1, 96).unwrap();
        assert_eq!(d.area.total(), BigUint::from(55296u32));
        assert_eq!(d.perimeter, 768);
        let d = f.disk(1, 0).unwrap();
        assert_eq!((d.area.total(), d.perimeter), (BigUint::zero(), 0));
    }

    #[test]
    fn z2_ball_closed_forms() {
        let z = Family::z2(2).unwrap();
        let table = z.ball_table(3, 8).unwrap();
        for j in 1..=8u32 {
            let b3 = &table[1][j as usize - 1];
            assert_eq!(b3.interior.total(), BigUint::from(8 * (4u64.pow(j) - 1) / 3));
            assert_eq!(b3.boundary.total(), BigUint::from(16 * (2u64.pow(j) - 1) + 8));
            let s2 = &table[0][j as usize - 1].shell;
            assert_eq!(s2.total(), BigUint::from(if j == 1 { 4u32 } else { 0 }));
        }
    }

    #[test]
    fn snowflake_shell_is_interior_difference() {
        let f = family(4, 8);
        let table = f.ball_table(3, 5).unwrap();
        for level in &table {
            for j in 1..level.len() {
                let mut sum = phi_image(&level[j - 1].interior, 8);
                sum.add_all(&level[j].shell);
                assert_eq!(sum, level[j].interior, "k = {}, j = {}", level[j].k, j + 1);
            }
        }
        assert!(!table[1][2].shell.is_empty());
    }

    #[test]
    fn ball_rejects_rational_r() {
        let f = Family::snowflake(&IntMatrix::scalar(4), Slope::new(9, 2).unwrap()).unwrap();
        assert_eq!(f.ball(3, 2), Err(Error::RationalRNotAllowed(2)));
    }

    #[test]
    fn product_of_z2_disks() {
        let z = Family::z2(2).unwrap();
        let rows = z.disk_rows(1, &(1..=10).collect::<Vec<_>>()).unwrap();
        let levels = product_ball(&disk_pairs(&rows).unwrap()).unwrap();
        let fit = fit_product(&levels).unwrap();
        assert!((fit.slope - 1.5).abs() < 1e-9);
        assert_eq!(fit_product(&levels[..1]), Err(Error::InsufficientData(1)));
    }
}
