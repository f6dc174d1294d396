//! Snowflake words: the recursive curve-shortening words for powers of
//! the diagonal elements `c_v`.

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::britton::Solver;
use crate::error::{Error, Result};
use crate::fit::{log_log_fit, LineFit};
use crate::presentation::MarkedGraph;
use crate::spectral::{exponents, ExponentReport, IntMatrix, Slope};
use crate::word::{Generator, Word};

/// Remainder choice at a composite node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Nearest multiple of `p`, ties towards the floor.
    #[default]
    Nearest,
    Floor,
    Ceil,
}

impl FromStr for Policy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nearest" => Ok(Policy::Nearest),
            "floor" => Ok(Policy::Floor),
            "ceil" => Ok(Policy::Ceil),
            _ => Err(Error::Invalid(format!("unknown policy {s:?}; expected nearest, floor or ceil"))),
        }
    }
}

/// When recursion stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Terminal {
    /// Terminal iff `|N| <= N0`.
    #[default]
    N0,
    /// Terminal iff `|N| <= 1`; needs integer `r`. Words for `N = r^k`
    /// then have uniform depth `k`.
    Unit,
}

impl FromStr for Terminal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n0" => Ok(Terminal::N0),
            "unit" => Ok(Terminal::Unit),
            _ => Err(Error::Invalid(format!("unknown terminal rule {s:?}; expected n0 or unit"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Negative,
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive" | "+" => Ok(Sign::Positive),
            "negative" | "-" => Ok(Sign::Negative),
            _ => Err(Error::Invalid(format!("unknown sign {s:?}; expected positive or negative"))),
        }
    }
}

/// `N0 = p M (q + 2 + p) / (p - M q) + p`.
pub fn n0(p: u64, q: u64, m: u64) -> Result<BigRational> {
    if p <= m * q {
        return Err(Error::SlopeTooSmall { p, q, m });
    }
    let (pb, qb, mb) = (BigInt::from(p), BigInt::from(q), BigInt::from(m));
    let frac = BigRational::new(&pb * &mb * (&qb + 2 + &pb), &pb - &mb * &qb);
    Ok(frac + BigRational::from_integer(pb))
}

/// Everything needed to build snowflake words for `G_{r,P}`.
#[derive(Debug, Clone)]
pub struct SnowflakeParams {
    pub graph: MarkedGraph,
    pub slope: Slope,
    pub max_row_sum: u64,
    pub n0: BigRational,
    pub policy: Policy,
    pub terminal: Terminal,
    pub report: ExponentReport,
}

impl SnowflakeParams {
    pub fn new(p: &IntMatrix, r: Slope) -> Result<Self> {
        let report = exponents(p, r)?;
        let graph = MarkedGraph::build(p)?;
        let max_row_sum = p.max_row_sum();
        let n0 = n0(r.p, r.q, max_row_sum)?;
        Ok(SnowflakeParams {
            graph,
            slope: r,
            max_row_sum,
            n0,
            policy: Policy::default(),
            terminal: Terminal::default(),
            report,
        })
    }

    pub fn with_policy(mut self, policy: Policy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_terminal(mut self, terminal: Terminal) -> Result<Self> {
        if terminal == Terminal::Unit && self.slope.q != 1 {
            return Err(Error::RationalRNotAllowed(self.slope.q));
        }
        self.terminal = terminal;
        Ok(self)
    }

    pub fn alpha(&self) -> f64 {
        self.report.alpha.to_f64()
    }

    pub fn is_terminal(&self, n: i64) -> bool {
        match self.terminal {
            Terminal::N0 => BigRational::from_integer(BigInt::from(n.unsigned_abs())) <= self.n0,
            Terminal::Unit => n.unsigned_abs() <= 1,
        }
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        let count = self.graph.vertex_count();
        if v == 0 || v > count {
            return Err(Error::VertexOutOfRange { vertex: v, count });
        }
        Ok(())
    }

    /// The multiple `k` of `p` used at a composite node for `c^n`.
    pub fn quotient(&self, n: i64) -> i64 {
        let p = self.slope.p as i64;
        let fl = n.div_euclid(p);
        let rem = n - fl * p;
        match self.policy {
            Policy::Floor => fl,
            Policy::Ceil => fl + i64::from(rem > 0),
            Policy::Nearest => fl + i64::from(2 * rem > p),
        }
    }

    /// `r^d`, rounded down for rational `r`.
    pub fn power(&self, d: u32) -> Result<i64> {
        let num = num_bigint::BigUint::from(self.slope.p).pow(d);
        let den = num_bigint::BigUint::from(self.slope.q).pow(d);
        i64::try_from(num / den).map_err(|_| Error::Overflow("r^d"))
    }

    /// Positive and negative snowflake words for `c_v^n`.
    pub fn build(&self, vertex: usize, n: i64, sign: Sign) -> Result<Arc<SnowflakeWord>> {
        self.check_vertex(vertex)?;
        let mut memo = HashMap::new();
        self.build_rec(vertex, n, sign, &mut memo)
    }

    fn build_rec(
        &self,
        vertex: usize,
        n: i64,
        sign: Sign,
        memo: &mut HashMap<(usize, i64), Arc<SnowflakeWord>>,
    ) -> Result<Arc<SnowflakeWord>> {
        if let Some(w) = memo.get(&(vertex, n)) {
            return Ok(w.clone());
        }
        let body = if self.is_terminal(n) {
            Body::Terminal(self.graph.part(vertex).to_vec())
        } else {
            let k = self.quotient(n);
            let child_n = k.checked_mul(self.slope.q as i64).ok_or(Error::Overflow("child exponent"))?;
            if child_n.unsigned_abs() >= n.unsigned_abs() {
                return Err(Error::NonShortening(n));
            }
            let remainder = k
                .checked_mul(self.slope.p as i64)
                .and_then(|kp| n.checked_sub(kp))
                .ok_or(Error::Overflow("remainder"))?;
            let mut strands = Vec::new();
            for &edge in self.graph.part(vertex) {
                let child = self.build_rec(self.graph.sigma(edge), child_n, sign, memo)?;
                strands.push(Strand { edge, remainder, child });
            }
            Body::Composite(strands)
        };
        let w = Arc::new(SnowflakeWord { vertex, n, sign, body });
        if memo.len() < crate::memo_cap() {
            memo.insert((vertex, n), w.clone());
        }
        Ok(w)
    }

    /// Structural check of every node, followed by a word-problem check of
    /// the flattened word when it has at most `budget` letters.
    pub fn verify(&self, w: &SnowflakeWord, budget: u64) -> Result<Verdict> {
        if let Err(path) = self.verify_rec(w, &mut String::from("root")) {
            return Ok(Verdict { ok: false, diagnostic: Some(path), solver_checked: false });
        }
        let stats = w.stats();
        if stats.length > budget as u128 {
            return Ok(Verdict { ok: true, diagnostic: None, solver_checked: false });
        }
        let solver = Solver::new(self.graph.matrix(), self.slope)?;
        let power = solver.power_of_c(w.vertex, &w.flatten())?;
        let ok = power == Some(w.n);
        Ok(Verdict {
            ok,
            diagnostic: (!ok).then(|| format!("root: solver found power {power:?}, expected {}", w.n)),
            solver_checked: true,
        })
    }

    fn verify_rec(&self, w: &SnowflakeWord, path: &mut String) -> std::result::Result<(), String> {
        if w.vertex == 0 || w.vertex > self.graph.vertex_count() {
            return Err(format!("{path}: vertex {} out of range", w.vertex));
        }
        match &w.body {
            Body::Terminal(edges) => {
                if edges != self.graph.part(w.vertex) {
                    return Err(format!("{path}: terminal generators {edges:?} do not match vertex {}", w.vertex));
                }
                if !self.is_terminal(w.n) {
                    return Err(format!("{path}: terminal node with exponent {} above threshold", w.n));
                }
            }
            Body::Composite(strands) => {
                if self.is_terminal(w.n) {
                    return Err(format!("{path}: composite node with exponent {} at or below threshold", w.n));
                }
                let edges: Vec<usize> = strands.iter().map(|s| s.edge).collect();
                if edges != self.graph.part(w.vertex) {
                    return Err(format!("{path}: strands {edges:?} do not match the edges at vertex {}", w.vertex));
                }
                let p = self.slope.p as i64;
                for s in strands {
                    let at = format!("{path}/s_{}", s.edge);
                    if s.remainder.unsigned_abs() >= self.slope.p {
                        return Err(format!("{at}: remainder {} not below p = {p}", s.remainder));
                    }
                    let diff = w.n - s.remainder;
                    if diff % p != 0 {
                        return Err(format!("{at}: {} - {} not divisible by p = {p}", w.n, s.remainder));
                    }
                    if s.child.n != diff / p * self.slope.q as i64 {
                        return Err(format!(
                            "{at}: child exponent {} should be {}",
                            s.child.n,
                            diff / p * self.slope.q as i64
                        ));
                    }
                    if s.child.vertex != self.graph.sigma(s.edge) {
                        return Err(format!(
                            "{at}: child vertex {} should be {}",
                            s.child.vertex,
                            self.graph.sigma(s.edge)
                        ));
                    }
                    if s.child.sign != w.sign {
                        return Err(format!("{at}: child sign differs"));
                    }
                    let mut sub = at.clone();
                    self.verify_rec(&s.child, &mut sub)?;
                }
            }
        }
        Ok(())
    }

    /// Length of the positive word for `c_v^n`, computed without
    /// materialising the word.
    pub fn word_stats(&self, vertex: usize, n: i64) -> Result<WordStats> {
        Ok(self.build(vertex, n, Sign::Positive)?.stats())
    }

    /// Least-squares slope of `log N` against `log |w|` over `N = r^d`.
    pub fn fit_alpha(&self, vertex: usize, depths: &[u32]) -> Result<AlphaFit> {
        if depths.len() < 3 {
            return Err(Error::InsufficientData(depths.len()));
        }
        let rows = depths
            .par_iter()
            .map(|&d| {
                let n = self.power(d)?;
                let stats = self.word_stats(vertex, n)?;
                Ok((d, n, stats.length))
            })
            .collect::<Result<Vec<_>>>()?;
        let points: Vec<(f64, f64)> = rows.iter().map(|&(_, n, l)| (l as f64, n as f64)).collect();
        let fit = log_log_fit(&points)?;
        let alpha = self.alpha();
        let ratios = rows.iter().map(|&(_, n, l)| n as f64 / (l as f64).powf(alpha));
        let (c0, c1) = ratios.fold((f64::INFINITY, 0.0f64), |(a, b), x| (a.min(x), b.max(x)));
        Ok(AlphaFit { fit, target: alpha, c0, c1, rows })
    }
}

/// Outcome of [`SnowflakeParams::verify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub ok: bool,
    pub diagnostic: Option<String>,
    pub solver_checked: bool,
}

/// Result of [`SnowflakeParams::fit_alpha`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaFit {
    pub fit: LineFit,
    pub target: f64,
    /// Envelope `C_0 <= N / |w|^alpha <= C_1` over the sampled depths.
    pub c0: f64,
    pub c1: f64,
    /// `(depth, N, length)`.
    pub rows: Vec<(u32, i64, u128)>,
}

/// A strand `s_j u s_j^-1` together with its remainder `a_j^{N_j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strand {
    pub edge: usize,
    pub remainder: i64,
    pub child: Arc<SnowflakeWord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Body {
    /// `a_{i_1}^N ... a_{i_m}^N` over the listed edges.
    Terminal(Vec<usize>),
    Composite(Vec<Strand>),
}

/// Tree form of a snowflake word. Equal subtrees are shared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnowflakeWord {
    pub vertex: usize,
    pub n: i64,
    pub sign: Sign,
    pub body: Body,
}

/// Size and depth data of a snowflake word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WordStats {
    pub length: u128,
    pub s_count: u128,
    pub d_min: u32,
    pub d_max: u32,
}

impl SnowflakeWord {
    /// The word in `a`- and `s`-letters.
    pub fn flatten(&self) -> Word {
        let mut out = Word::identity();
        self.flatten_into(&mut out);
        out
    }

    fn flatten_into(&self, out: &mut Word) {
        match (&self.body, self.sign) {
            (Body::Terminal(edges), Sign::Positive) => {
                edges.iter().for_each(|&i| out.push(Generator::A(i as u32), self.n))
            }
            (Body::Terminal(edges), Sign::Negative) => {
                edges.iter().rev().for_each(|&i| out.push(Generator::A(i as u32), self.n))
            }
            (Body::Composite(strands), Sign::Positive) => {
                for s in strands {
                    out.push(Generator::S(s.edge as u32), 1);
                    s.child.flatten_into(out);
                    out.push(Generator::S(s.edge as u32), -1);
                    out.push(Generator::A(s.edge as u32), s.remainder);
                }
            }
            (Body::Composite(strands), Sign::Negative) => {
                for s in strands.iter().rev() {
                    out.push(Generator::A(s.edge as u32), s.remainder);
                    out.push(Generator::S(s.edge as u32), 1);
                    s.child.flatten_into(out);
                    out.push(Generator::S(s.edge as u32), -1);
                }
            }
        }
    }

    pub fn stats(&self) -> WordStats {
        let mut memo = HashMap::new();
        self.stats_rec(&mut memo)
    }

    fn stats_rec(&self, memo: &mut HashMap<*const SnowflakeWord, WordStats>) -> WordStats {
        let key = self as *const SnowflakeWord;
        if let Some(s) = memo.get(&key) {
            return *s;
        }
        let st = match &self.body {
            Body::Terminal(edges) => WordStats {
                length: edges.len() as u128 * self.n.unsigned_abs() as u128,
                s_count: 0,
                d_min: 0,
                d_max: 0,
            },
            Body::Composite(strands) => {
                let mut st = WordStats { length: 0, s_count: 0, d_min: u32::MAX, d_max: 0 };
                for s in strands {
                    let c = s.child.stats_rec(memo);
                    st.length += 2 + c.length + s.remainder.unsigned_abs() as u128;
                    st.s_count += 2 + c.s_count;
                    st.d_min = st.d_min.min(c.d_min + 1);
                    st.d_max = st.d_max.max(c.d_max + 1);
                }
                st
            }
        };
        memo.insert(key, st);
        st
    }

    /// Indented text rendering of the tree.
    pub fn to_tree_text(&self) -> String {
        let mut out = String::new();
        self.tree_text_rec(0, &mut out);
        out
    }

    fn tree_text_rec(&self, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        match &self.body {
            Body::Terminal(_) => {
                let _ = writeln!(out, "{pad}c_{}^{} terminal", self.vertex, self.n);
            }
            Body::Composite(strands) => {
                let _ = writeln!(out, "{pad}c_{}^{}", self.vertex, self.n);
                for s in strands {
                    let _ = writeln!(out, "{pad}  s_{} remainder {}", s.edge, s.remainder);
                    s.child.tree_text_rec(depth + 2, out);
                }
            }
        }
    }

    /// JSON rendering of the tree.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "vertex": self.vertex,
            "n": self.n,
            "sign": self.sign,
        });
        if let Body::Composite(strands) = &self.body {
            v["strands"] = strands
                .iter()
                .map(|s| serde_json::json!({"edge": s.edge, "remainder": s.remainder, "child": s.child.to_json()}))
                .collect();
        }
        v
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
        })
    }
}

/// `2 sum_{i=1}^k ||(P^T)^i x_v||_1`: the `s`-letter count of a word of
/// uniform depth `k` at vertex `v`.
pub fn uniform_s_count(p: &IntMatrix, vertex: usize, k: u32) -> num_bigint::BigUint {
    crate::spectral::matrix_powers(p, k)
        .iter()
        .map(|pk| pk[vertex - 1].iter().sum::<num_bigint::BigUint>())
        .sum::<num_bigint::BigUint>()
        * 2u32
}
