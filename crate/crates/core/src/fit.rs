//! Least-squares fits on log-log data.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};

/// Fitted line `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
    pub points: usize,
}

/// Ordinary least squares on `(x, y)` pairs.
pub fn line_fit(points: &[(f64, f64)]) -> Result<LineFit> {
    let n = points.len();
    if n < 3 {
        return Err(Error::InsufficientData(n));
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 || !sxx.is_finite() {
        return Err(Error::Invalid("fit needs at least two distinct abscissae".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = points.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    Ok(LineFit { slope, intercept, residual: (sse / nf).sqrt(), points: n })
}

/// Fits `y = C x^slope` to positive data.
pub fn log_log_fit(points: &[(f64, f64)]) -> Result<LineFit> {
    if let Some(p) = points.iter().find(|p| !(p.0 > 0.0 && p.1 > 0.0)) {
        return Err(Error::Invalid(format!("log-log fit needs positive data; got {p:?}")));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|p| (p.0.ln(), p.1.ln())).collect();
    line_fit(&logs)
}

/// Natural log of a big integer, accurate for values beyond `f64` range.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_rational(x: &BigRational) -> f64 {
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    ln_big(num) - ln_big(den)
}
