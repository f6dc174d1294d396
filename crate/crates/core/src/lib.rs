//! Snowflake groups `G_{r,P}`: spectral exponents, presentations, the word
//! problem in the vertex groups and in the whole group, snowflake words,
//! and exact cell counts for disks and balls.

pub mod britton;
pub mod error;
pub mod fit;
pub mod geometry;
pub mod presentation;
pub mod sample;
pub mod snowflake;
pub mod spectral;
pub mod vm;
pub mod word;

pub use britton::{Pinch, PinchKind, ReductionTrace, Solver};
pub use error::{Error, Result};
pub use fit::LineFit;
pub use geometry::{phi_image, product_ball, BallStats, CellCount, DiskStats, Family, ProductLevel};
pub use presentation::{emit, Format, MarkedGraph, Presentation};
pub use snowflake::{Policy, Sign, SnowflakeParams, SnowflakeWord, Terminal, WordStats};
pub use spectral::{exponents, pf_eigenvalue, ExponentReport, IntMatrix, Number, Slope};
pub use word::{Generator, Word};

/// Environment variable bounding the number of entries per memo table.
pub const MEMO_CAP_VAR: &str = "SNOWFLAKE_MEMO_CAP";

/// Memo-table capacity from `SNOWFLAKE_MEMO_CAP`; unbounded when unset
/// or unparsable.
pub fn memo_cap() -> usize {
    static CAP: std::sync::OnceLock<usize> = std::sync::OnceLock::new();
    *CAP.get_or_init(|| std::env::var(MEMO_CAP_VAR).ok().and_then(|v| v.parse().ok()).unwrap_or(usize::MAX))
}
