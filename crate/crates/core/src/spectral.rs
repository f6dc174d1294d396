//! Non-negative integer matrices, Perron-Frobenius eigenvalues and the
//! exponent arithmetic built on them.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Square matrix with non-negative integer entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u64>>", into = "Vec<Vec<u64>>")]
pub struct IntMatrix {
    rows: Vec<Vec<u64>>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 || rows.iter().any(|row| row.len() != r) {
            return Err(Error::NotSquare);
        }
        Ok(IntMatrix { rows })
    }

    /// The 1x1 matrix `(m)`.
    pub fn scalar(m: u64) -> Self {
        IntMatrix { rows: vec![vec![m]] }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.rows.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn max_row_sum(&self) -> u64 {
        self.row_sums().into_iter().max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|row| row.iter().all(|&x| x == 0))
    }

    pub fn transpose(&self) -> IntMatrix {
        let r = self.dim();
        let rows = (0..r).map(|i| (0..r).map(|j| self.rows[j][i]).collect()).collect();
        IntMatrix { rows }
    }

    fn to_big(&self) -> Vec<Vec<BigUint>> {
        self.rows.iter().map(|row| row.iter().map(|&x| BigUint::from(x)).collect()).collect()
    }
}

impl TryFrom<Vec<Vec<u64>>> for IntMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<u64>>) -> Result<Self> {
        IntMatrix::new(rows)
    }
}

impl From<IntMatrix> for Vec<Vec<u64>> {
    fn from(m: IntMatrix) -> Self {
        m.rows
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    /// Accepts JSON (`[[1,1],[2,1]]`) or the text form `R; row; row; ...`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('[') {
            let rows: Vec<Vec<u64>> =
                serde_json::from_str(t).map_err(|e| Error::Invalid(format!("cannot parse matrix JSON: {e}")))?;
            return IntMatrix::new(rows);
        }
        let mut parts = t.split(';').map(str::trim).filter(|p| !p.is_empty());
        let r: usize = parts
            .next()
            .ok_or_else(|| Error::Invalid("empty matrix text".into()))?
            .parse()
            .map_err(|_| Error::Invalid("matrix text must start with the dimension R".into()))?;
        let rows = parts
            .map(|p| {
                p.split_whitespace()
                    .map(|x| x.parse::<u64>().map_err(|_| Error::Invalid(format!("bad matrix entry {x:?}"))))
                    .collect::<Result<Vec<u64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != r {
            return Err(Error::Invalid(format!("expected {r} rows, got {}", rows.len())));
        }
        IntMatrix::new(rows)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(&self.rows).map_err(|_| fmt::Error)?)
    }
}

/// Strong connectivity of the digraph of `p` (every vertex reaches every
/// vertex along a path of length at least one).
pub fn is_irreducible(p: &IntMatrix) -> bool {
    let r = p.dim();
    let reach_all = |forward: bool| {
        let mut seen = vec![false; r];
        let mut stack = vec![0usize];
        let mut visited_any = false;
        while let Some(v) = stack.pop() {
            for (w, seen_w) in seen.iter_mut().enumerate() {
                let edge = if forward { p.get(v, w) } else { p.get(w, v) };
                if edge > 0 && !*seen_w {
                    *seen_w = true;
                    visited_any = true;
                    stack.push(w);
                }
            }
        }
        visited_any && seen.iter().all(|&s| s)
    };
    reach_all(true) && reach_all(false)
}

/// Rational slope `r = p/q`, stored as given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slope {
    pub p: u64,
    pub q: u64,
}

impl Slope {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidSlope(format!("{p}/{q}")));
        }
        Ok(Slope { p, q })
    }

    pub fn integer(r: u64) -> Self {
        Slope { p: r, q: 1 }
    }

    pub fn is_integer(&self) -> bool {
        self.p.is_multiple_of(self.q)
    }

    /// The integer value of `r`, when `q` divides `p`.
    pub fn as_integer(&self) -> Option<u64> {
        self.is_integer().then(|| self.p / self.q)
    }

    pub fn as_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn as_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.p), BigInt::from(self.q))
    }
}

impl FromStr for Slope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSlope(s.to_string());
        match s.trim().split_once('/') {
            Some((a, b)) => Slope::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => Slope::new(s.trim().parse().map_err(|_| bad())?, 1),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

/// A real number known to lie in `[value - radius, value + radius]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Real {
    pub value: f64,
    pub radius: f64,
}

impl Real {
    pub fn from_bounds(lo: f64, hi: f64) -> Self {
        let value = 0.5 * (lo + hi);
        let slack = 4.0 * f64::EPSILON * value.abs();
        Real { value, radius: 0.5 * (hi - lo) + slack }
    }

    pub fn lo(&self) -> f64 {
        self.value - self.radius
    }

    pub fn hi(&self) -> f64 {
        self.value + self.radius
    }
}

/// Either an exact rational or a certified real.
#[derive(Debug, Clone, PartialEq)]
pub enum Number {
    Exact(BigRational),
    Approx(Real),
}

impl Number {
    pub fn exact(num: i64, den: i64) -> Self {
        Number::Exact(BigRational::new(num.into(), den.into()))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(q) => ratio_to_f64(q),
            Number::Approx(r) => r.value,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Number::Exact(q) => Some(q),
            Number::Approx(_) => None,
        }
    }

    pub fn double(&self) -> Number {
        match self {
            Number::Exact(q) => Number::Exact(q * BigInt::from(2)),
            Number::Approx(r) => Number::Approx(Real { value: 2.0 * r.value, radius: 2.0 * r.radius }),
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(q) => write!(f, "{q}"),
            Number::Approx(r) => write!(f, "{} ± {:e}", r.value, r.radius),
        }
    }
}

fn big_to_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

impl Serialize for Number {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        match self {
            Number::Exact(q) => {
                map.serialize_entry("num", &big_to_json(q.numer()))?;
                map.serialize_entry("den", &big_to_json(q.denom()))?;
            }
            Number::Approx(r) => {
                map.serialize_entry("value", &r.value)?;
                map.serialize_entry("radius", &r.radius)?;
            }
        }
        map.end()
    }
}

pub fn ratio_to_f64(q: &BigRational) -> f64 {
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        // Scale down both parts to stay in range.
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    }
}

/// Perron-Frobenius eigenvalue with a certified enclosure of radius at most `tol`.
///
/// Exact when all row sums agree. Otherwise power iteration on `P + I`
/// tightens the Collatz-Wielandt bracket `[min (Pu)_i/u_i, max (Pu)_i/u_i]`.
pub fn pf_eigenvalue(p: &IntMatrix, tol: f64) -> Result<Number> {
    if p.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    if !is_irreducible(p) {
        return Err(Error::NotIrreducible);
    }
    let sums = p.row_sums();
    if sums.iter().all(|&s| s == sums[0]) {
        return Ok(Number::exact(sums[0] as i64, 1));
    }
    let r = p.dim();
    let mut u = vec![1.0f64; r];
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for _ in 0..200_000 {
        let pu: Vec<f64> = (0..r).map(|i| (0..r).map(|j| p.get(i, j) as f64 * u[j]).sum()).collect();
        let ratios = pu.iter().zip(&u).map(|(a, b)| a / b);
        let (mn, mx) = ratios.fold((f64::INFINITY, 0.0f64), |(a, b), x| (a.min(x), b.max(x)));
        let slack = 8.0 * r as f64 * f64::EPSILON * mx;
        lo = lo.max(mn - slack);
        hi = hi.min(mx + slack);
        if hi - lo <= 2.0 * tol {
            break;
        }
        let next: Vec<f64> = pu.iter().zip(&u).map(|(a, b)| a + b).collect();
        let norm = next.iter().cloned().fold(0.0, f64::max);
        u = next.into_iter().map(|x| x / norm).collect();
    }
    let real = Real { value: 0.5 * (lo + hi), radius: 0.5 * (hi - lo) };
    if real.radius > tol {
        return Err(Error::ToleranceNotReached { tol, radius: real.radius });
    }
    Ok(Number::Approx(real))
}

/// Eigenvalue, `alpha = log_lambda r` and the Dehn exponent `2 alpha`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentReport {
    pub lambda: Number,
    pub alpha: Number,
    pub dehn_exponent: Number,
}

const DEFAULT_TOL: f64 = 1e-12;

pub fn exponents(p: &IntMatrix, r: Slope) -> Result<ExponentReport> {
    let lambda = pf_eigenvalue(p, DEFAULT_TOL)?;
    let max = p.max_row_sum();
    if p.row_sums().iter().all(|&s| s == 1) {
        return Err(Error::LambdaNotGreaterThanOne(lambda.to_string()));
    }
    if r.p <= max.saturating_mul(r.q) {
        return Err(Error::RowSumViolation { max, r: r.to_string() });
    }
    let alpha = match &lambda {
        Number::Exact(l) => {
            let m = l.to_integer().to_u64().expect("integer eigenvalue");
            let reduced = r.as_rational();
            match reduced.is_integer().then(|| reduced.to_integer().to_u64()).flatten() {
                Some(rv) => match log_ratio(m, rv) {
                    Some(q) => Number::Exact(q),
                    None => approx_log(m as f64, m as f64, r.as_f64()),
                },
                None => approx_log(m as f64, m as f64, r.as_f64()),
            }
        }
        Number::Approx(real) => approx_log(real.lo(), real.hi(), r.as_f64()),
    };
    let dehn_exponent = alpha.double();
    Ok(ExponentReport { lambda, alpha, dehn_exponent })
}

/// The exponent report of the Z^2 member of the family.
pub fn exponents_z2() -> ExponentReport {
    ExponentReport { lambda: Number::exact(1, 1), alpha: Number::exact(1, 1), dehn_exponent: Number::exact(2, 1) }
}

fn approx_log(lam_lo: f64, lam_hi: f64, r: f64) -> Number {
    let lr = r.ln();
    Number::Approx(Real::from_bounds(lr / lam_hi.ln(), lr / lam_lo.ln()))
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `log_m r` as a rational when `m` and `r` are powers of a common integer.
fn log_ratio(m: u64, r: u64) -> Option<BigRational> {
    if m < 2 || r < 2 {
        return None;
    }
    let fm = factorize(m);
    let fr = factorize(r);
    if fm.len() != fr.len() || fm.iter().zip(&fr).any(|(a, b)| a.0 != b.0) {
        return None;
    }
    let q = BigRational::new(BigInt::from(fr[0].1), BigInt::from(fm[0].1));
    fm.iter().zip(&fr).all(|(a, b)| BigRational::new(BigInt::from(b.1), BigInt::from(a.1)) == q).then_some(q)
}

/// Empirical bounds on `||P^k e_i||_1 / lambda^k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthConstants {
    pub lower: f64,
    pub upper: f64,
    pub k_max: u32,
    /// Per-`k` minimum and maximum ratio.
    pub ratios: Vec<(f64, f64)>,
}

pub const DEFAULT_K_MAX: u32 = 16;

/// Exact integer matrix product.
pub fn mat_mul(a: &[Vec<BigUint>], b: &[Vec<BigUint>]) -> Vec<Vec<BigUint>> {
    let r = a.len();
    (0..r).map(|i| (0..r).map(|j| (0..r).fold(BigUint::zero(), |acc, k| acc + &a[i][k] * &b[k][j])).collect()).collect()
}

/// `P^k` for `k = 1..=k_max`, exactly.
pub fn matrix_powers(p: &IntMatrix, k_max: u32) -> Vec<Vec<Vec<BigUint>>> {
    let base = p.to_big();
    let mut out = Vec::with_capacity(k_max as usize);
    let mut cur = base.clone();
    for _ in 0..k_max {
        out.push(cur.clone());
        cur = mat_mul(&cur, &base);
    }
    out
}

pub fn growth_constants(p: &IntMatrix, k_max: u32) -> Result<GrowthConstants> {
    let lambda = pf_eigenvalue(p, DEFAULT_TOL)?.to_f64();
    let r = p.dim();
    let mut ratios = Vec::new();
    for (k, pk) in matrix_powers(p, k_max).iter().enumerate() {
        let scale = lambda.powi(k as i32 + 1);
        let cols = (0..r).map(|i| {
            let norm = (0..r).fold(BigUint::zero(), |acc, row| acc + &pk[row][i]);
            norm.to_f64().unwrap_or(f64::INFINITY) / scale
        });
        let (mn, mx) = cols.fold((f64::INFINITY, 0.0f64), |(a, b), x| (a.min(x), b.max(x)));
        ratios.push((mn, mx));
    }
    let lower = ratios.iter().map(|x| x.0).fold(f64::INFINITY, f64::min);
    let upper = ratios.iter().map(|x| x.1).fold(0.0, f64::max);
    Ok(GrowthConstants { lower, upper, k_max, ratios })
}

/// `s(ell) = ((ell+1) a - ell) / (ell a - (ell-1))` for `a = alpha2`.
pub fn s_of_ell(alpha2: &Number, ell: u32) -> Result<Number> {
    let l = ell as i64;
    match alpha2 {
        Number::Exact(a) => {
            if *a < BigRational::one() {
                return Err(Error::DomainError(a.to_string()));
            }
            let lb = BigRational::from_integer(l.into());
            let num = (&lb + BigRational::one()) * a - &lb;
            let den = &lb * a - (&lb - BigRational::one());
            Ok(Number::Exact(num / den))
        }
        Number::Approx(real) => {
            if real.value < 1.0 {
                return Err(Error::DomainError(real.value.to_string()));
            }
            let f = |a: f64| ((l + 1) as f64 * a - l as f64) / (l as f64 * a - (l - 1) as f64);
            // s is increasing in alpha2 on [1, inf).
            Ok(Number::Approx(Real::from_bounds(f(real.lo().max(1.0)), f(real.hi()))))
        }
    }
}

/// A group whose k-dimensional Dehn function is `x^s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SpectrumRecipe {
    /// `Sigma^{q-1} G_{2^p, (4^{q'})} x Z^ell`.
    Snowflake { q: u32, ell: u32, p: u64, q_prime: u64 },
    /// `Sigma^{q-1} Z^2 x Z^ell`.
    Z2 { q: u32, ell: u32 },
}

impl SpectrumRecipe {
    pub fn alpha2(&self) -> BigRational {
        match *self {
            SpectrumRecipe::Snowflake { p, q_prime, .. } => BigRational::new(BigInt::from(p), BigInt::from(q_prime)),
            SpectrumRecipe::Z2 { .. } => BigRational::from_integer(2.into()),
        }
    }

    pub fn ell(&self) -> u32 {
        match *self {
            SpectrumRecipe::Snowflake { ell, .. } | SpectrumRecipe::Z2 { ell, .. } => ell,
        }
    }

    pub fn q(&self) -> u32 {
        match *self {
            SpectrumRecipe::Snowflake { q, .. } | SpectrumRecipe::Z2 { q, .. } => q,
        }
    }

    /// Filling dimension `k = q + ell`.
    pub fn dimension(&self) -> u32 {
        self.q() + self.ell()
    }

    /// The exponent `s` realised by this recipe.
    pub fn exponent(&self) -> BigRational {
        match s_of_ell(&Number::Exact(self.alpha2()), self.ell()) {
            Ok(Number::Exact(s)) => s,
            _ => unreachable!("alpha2 >= 2"),
        }
    }

    /// Matrix and slope of the snowflake base, if any.
    pub fn base(&self) -> Option<(IntMatrix, Slope)> {
        match *self {
            SpectrumRecipe::Snowflake { p, q_prime, .. } => {
                Some((IntMatrix::scalar(4u64.pow(q_prime as u32)), Slope::integer(1u64 << p)))
            }
            SpectrumRecipe::Z2 { .. } => None,
        }
    }
}

/// Find `q + ell = k` and a base group whose k-dimensional Dehn exponent is `s`.
pub fn invert_spectrum(s: &BigRational, k: u32) -> Result<SpectrumRecipe> {
    if k == 0 {
        return Err(Error::NonPositiveIndex(0));
    }
    let kb = BigRational::from_integer(k.into());
    if *s < (&kb + BigRational::one()) / &kb {
        return Err(Error::OutOfRange { s: s.to_string(), k });
    }
    let two = BigRational::from_integer(2.into());
    for ell in 0..k {
        let mut a = s.clone();
        let mut ok = true;
        for _ in 0..ell {
            // Inverse of a -> 2 - 1/a.
            let d = &two - &a;
            if !d.is_positive() {
                ok = false;
                break;
            }
            a = d.recip();
        }
        if !ok || a < two {
            continue;
        }
        let q = k - ell;
        if a == two {
            return Ok(SpectrumRecipe::Z2 { q, ell });
        }
        let (p, qp) = (a.numer().to_u64(), a.denom().to_u64());
        match (p, qp) {
            (Some(p), Some(q_prime)) if p < 64 && q_prime < 32 => {
                return Ok(SpectrumRecipe::Snowflake { q, ell, p, q_prime })
            }
            _ => return Err(Error::Overflow("invert_spectrum base parameters")),
        }
    }
    Err(Error::NonRepresentable { s: s.to_string(), k })
}

/// `gcd`-reduced rational from integers.
pub fn rational(num: i64, den: i64) -> BigRational {
    let g = num.gcd(&den).max(1);
    BigRational::new((num / g).into(), (den / g).into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u64]]) -> IntMatrix {
        IntMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&IntMatrix::scalar(4)));
        assert!(is_irreducible(&m(&[&[1, 1], &[2, 1]])));
        assert!(!is_irreducible(&m(&[&[1, 0], &[0, 1]])));
        assert!(is_irreducible(&m(&[&[0, 1], &[1, 0]])));
        assert!(!is_irreducible(&IntMatrix::scalar(0)));
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(pf_eigenvalue(&IntMatrix::scalar(4), 1e-12).unwrap(), Number::exact(4, 1));
        assert_eq!(pf_eigenvalue(&m(&[&[0, 1], &[1, 0]]), 1e-12).unwrap(), Number::exact(1, 1));
        let lam = pf_eigenvalue(&m(&[&[1, 1], &[2, 1]]), 1e-10).unwrap();
        let Number::Approx(real) = lam else { panic!("expected approximate eigenvalue") };
        assert!(real.radius <= 1e-10);
        assert!(real.lo() <= 1.0 + 2f64.sqrt() && 1.0 + 2f64.sqrt() <= real.hi());
        assert_eq!(pf_eigenvalue(&m(&[&[0, 0], &[0, 0]]), 1e-9), Err(Error::ZeroMatrix));
        assert_eq!(pf_eigenvalue(&m(&[&[1, 0], &[0, 1]]), 1e-9), Err(Error::NotIrreducible));
    }

    #[test]
    fn periodic_matrix_converges() {
        let lam = pf_eigenvalue(&m(&[&[0, 2], &[1, 0]]), 1e-12).unwrap();
        assert!((lam.to_f64() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn exponent_examples() {
        let rep = exponents(&IntMatrix::scalar(16), Slope::integer(32)).unwrap();
        assert_eq!(rep.alpha, Number::exact(5, 4));
        assert_eq!(rep.dehn_exponent, Number::exact(5, 2));
        let rep = exponents(&IntMatrix::scalar(4), Slope::integer(8)).unwrap();
        assert_eq!(rep.dehn_exponent, Number::exact(3, 1));
        let rep = exponents(&m(&[&[1, 1], &[2, 1]]), Slope::integer(4)).unwrap();
        assert!((rep.alpha.to_f64() - 4f64.ln() / (1.0 + 2f64.sqrt()).ln()).abs() < 1e-9);
        assert!(matches!(
            exponents(&m(&[&[0, 1], &[1, 0]]), Slope::integer(2)),
            Err(Error::LambdaNotGreaterThanOne(_))
        ));
        assert!(matches!(exponents(&IntMatrix::scalar(4), Slope::integer(4)), Err(Error::RowSumViolation { .. })));
        // Rational r with q > 1 is never a rational power of an integer.
        let rep = exponents(&IntMatrix::scalar(4), Slope::new(9, 2).unwrap()).unwrap();
        assert!(rep.alpha.as_exact().is_none());
    }

    #[test]
    fn matrix_text_forms() {
        let a: IntMatrix = "[[1,1],[2,1]]".parse().unwrap();
        let b: IntMatrix = "2; 1 1; 2 1".parse().unwrap();
        assert_eq!(a, b);
        assert!("[[1,2]]".parse::<IntMatrix>().is_err());
    }

    #[test]
    fn growth_examples() {
        let g = growth_constants(&IntMatrix::scalar(4), 10).unwrap();
        assert_eq!((g.lower, g.upper), (1.0, 1.0));
        let g = growth_constants(&m(&[&[0, 1], &[1, 0]]), 10).unwrap();
        assert_eq!((g.lower, g.upper), (1.0, 1.0));
        let g = growth_constants(&m(&[&[1, 1], &[2, 1]]), 12).unwrap();
        assert!(g.lower > 0.0 && g.lower <= g.upper);
    }

    #[test]
    fn s_of_ell_examples() {
        let a = Number::exact(5, 2);
        assert_eq!(s_of_ell(&a, 0).unwrap(), a);
        assert_eq!(s_of_ell(&a, 1).unwrap(), Number::exact(8, 5));
        assert_eq!(s_of_ell(&Number::exact(2, 1), 3).unwrap(), Number::exact(5, 4));
        assert!(matches!(s_of_ell(&Number::exact(1, 2), 1), Err(Error::DomainError(_))));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(
            invert_spectrum(&rational(8, 5), 2).unwrap(),
            SpectrumRecipe::Snowflake { q: 1, ell: 1, p: 5, q_prime: 2 }
        );
        assert_eq!(invert_spectrum(&rational(3, 2), 2).unwrap(), SpectrumRecipe::Z2 { q: 1, ell: 1 });
        assert_eq!(
            invert_spectrum(&rational(5, 2), 1).unwrap(),
            SpectrumRecipe::Snowflake { q: 1, ell: 0, p: 5, q_prime: 2 }
        );
        assert!(matches!(invert_spectrum(&rational(5, 4), 2), Err(Error::OutOfRange { .. })));
    }
}
