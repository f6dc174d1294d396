use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "snowflake",
    version,
    about = "Snowflake groups: presentations, words, disks, balls and exponent fits"
)]
#[command(arg_required_else_help = true)]
pub struct Cli {
    /// Write the primary output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<String>,
    /// Write a run manifest (version, parameters, output digest) to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    pub manifest: Option<String>,
    /// Re-run the command recorded in a manifest and compare digests.
    #[arg(long, value_name = "FILE", conflicts_with = "manifest")]
    pub replay: Option<String>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Perron-Frobenius eigenvalue, alpha and the Dehn exponent (JSON).
    Eigen(EigenArgs),
    /// Emit a finite presentation.
    Present(PresentArgs),
    /// Normal forms, equality, shuffling and fillings in V_m (JSON).
    Vm(VmArgs),
    /// Build a snowflake word for c_v^N.
    Word(WordArgs),
    /// Exact disk perimeters and areas.
    ///
    /// CSV columns: index,n,perimeter,area (index is the depth d for
    /// N = r^d, or the position in --n).
    Disk(DiskArgs),
    /// Exact snowflake ball volumes.
    ///
    /// CSV columns: index,boundary,interior,shell (index is j; volumes are
    /// cell totals over all degrees).
    Ball(BallArgs),
    /// Fit a growth exponent and compare it with its target (JSON).
    Fit(FitArgs),
    /// Exponent arithmetic for products and suspensions (JSON).
    Spectrum(SpectrumArgs),
    /// Decide triviality of words read from stdin, one per line (JSON lines).
    Solve(SolveArgs),
    /// SVG of a disk's recursive polygon-and-strip layout.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Snowflake,
    Z2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PresentFamily {
    Snowflake,
    Vm,
    Z2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyArg {
    Nearest,
    Floor,
    Ceil,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalArg {
    N0,
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignArg {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PresentFormat {
    Plain,
    Json,
    Calg,
}

/// Matrix, slope and family shared by the geometry commands.
#[derive(Debug, Args, Serialize)]
pub struct GroupArgs {
    /// Matrix P as JSON (`[[1,1],[2,1]]`), text (`2; 1 1; 2 1`) or a file.
    #[arg(long)]
    pub matrix: Option<String>,
    /// Slope r = P/Q (integer for balls and z2).
    #[arg(long)]
    pub r: String,
    #[arg(long, value_enum, default_value_t = FamilyKind::Snowflake)]
    pub family: FamilyKind,
    #[arg(long, value_enum, default_value_t = PolicyArg::Nearest)]
    pub policy: PolicyArg,
    /// Recursion stops at |N| <= N0 (n0) or at |N| <= 1 (unit, integer r).
    #[arg(long, value_enum, default_value_t = TerminalArg::N0)]
    pub terminal: TerminalArg,
}

#[derive(Debug, Args, Serialize)]
pub struct EigenArgs {
    #[arg(long)]
    pub matrix: Option<String>,
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long, value_enum, default_value_t = FamilyKind::Snowflake)]
    pub family: FamilyKind,
    /// Certified radius for lambda.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Largest power used for the growth constants.
    #[arg(long, default_value_t = 16)]
    pub k_max: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct PresentArgs {
    #[arg(long, value_enum, default_value_t = PresentFamily::Snowflake)]
    pub family: PresentFamily,
    #[arg(long)]
    pub matrix: Option<String>,
    #[arg(long)]
    pub r: Option<String>,
    /// Arity of V_m.
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<i64>,
    /// Number of suspension levels (integer r only).
    #[arg(long, default_value_t = 0)]
    pub suspend: u32,
    /// Number of central Z factors.
    #[arg(long, default_value_t = 0)]
    pub product: u32,
    /// Add s_i = 1 for the edges of a maximal tree.
    #[arg(long)]
    pub kill_tree: bool,
    #[arg(long, value_enum, default_value_t = PresentFormat::Plain)]
    pub format: PresentFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VmAction {
    Nf,
    Eq,
    Shuffle,
    Fill,
}

#[derive(Debug, Args, Serialize)]
pub struct VmArgs {
    #[arg(value_enum)]
    pub action: VmAction,
    #[arg(long)]
    pub m: i64,
    /// Word in syllable syntax, e.g. `a1^3 b2^-1 c^2`.
    #[arg(long, allow_hyphen_values = true)]
    pub word: String,
    /// Second word for `eq`.
    #[arg(long, allow_hyphen_values = true)]
    pub other: Option<String>,
    /// Target generator x for `fill` (default c).
    #[arg(long)]
    pub target: Option<String>,
    /// Target power N for `fill` (default: inferred from exponent sums).
    #[arg(long, allow_hyphen_values = true)]
    pub power: Option<i64>,
    /// Include the step log in `fill` receipts.
    #[arg(long)]
    pub log: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WordEmit {
    /// Flattened word in syllable syntax.
    Flat,
    /// Indented tree text.
    Tree,
    /// Tree as JSON.
    Json,
    /// Length, s-letter count and depth range (JSON).
    Stats,
    /// Structural and word-problem verification (JSON).
    Verify,
}

#[derive(Debug, Args, Serialize)]
pub struct WordArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[arg(long, default_value_t = 1)]
    pub vertex: usize,
    /// Exponent N, or `rpow:D` for r^D.
    #[arg(long = "N", allow_hyphen_values = true)]
    pub n: String,
    #[arg(long, value_enum, default_value_t = SignArg::Positive)]
    pub sign: SignArg,
    #[arg(long, value_enum, default_value_t = WordEmit::Flat)]
    pub emit: WordEmit,
    /// Largest flattened length checked by the word-problem solver.
    #[arg(long, default_value_t = 5000)]
    pub budget: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct DiskArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    /// Vertex (default: the first with rank at least 2).
    #[arg(long)]
    pub vertex: Option<usize>,
    /// Depth range `A..B` (inclusive) for N = r^d.
    #[arg(long, conflicts_with = "n")]
    pub depths: Option<String>,
    /// Explicit exponents, comma separated.
    #[arg(long = "N", value_delimiter = ',', allow_hyphen_values = true)]
    pub n: Vec<i64>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
}

#[derive(Debug, Args, Serialize)]
pub struct BallArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    /// Ball dimension k >= 2.
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    /// Index range `A..B` (inclusive), A >= 1.
    #[arg(long, default_value = "1..8")]
    pub js: String,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    /// log N against log |w|; target alpha.
    Alpha,
    /// log area against log perimeter; target 2 alpha.
    Disk,
    /// log interior against log boundary of B^k_j; target 2 alpha.
    Ball,
    /// log Vol(C_i) against log m_i after --ell product steps; target s(ell).
    Product,
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[arg(long, value_enum)]
    pub kind: FitKind,
    /// Depth (or ball index) range `A..B`, inclusive.
    #[arg(long)]
    pub depths: String,
    /// Ball dimension for `ball`, and base dimension for `product` (2 = disks).
    #[arg(long)]
    pub k: Option<u32>,
    /// Number of Z factors for `product`.
    #[arg(long, default_value_t = 1)]
    pub ell: u32,
    /// Relative tolerance |slope - target| <= tol * target.
    #[arg(long, default_value_t = 0.1)]
    pub tol: f64,
    #[arg(long)]
    pub vertex: Option<usize>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    #[serde(skip)]
    pub jobs: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(subcommand)]
    pub action: SpectrumAction,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum SpectrumAction {
    /// s(0..=ell) for a given alpha2, checked against s(l) = 2 - 1/s(l-1).
    SOfEll {
        /// Rational alpha2, e.g. 5/2.
        #[arg(long)]
        alpha2: String,
        #[arg(long)]
        ell: u32,
    },
    /// A group whose k-dimensional Dehn exponent is s.
    Invert {
        /// Rational exponent, e.g. 8/5.
        #[arg(long)]
        s: String,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    #[arg(long)]
    pub matrix: String,
    #[arg(long)]
    pub r: String,
    /// Base vertex (default: read off the first letter).
    #[arg(long)]
    pub base: Option<usize>,
    /// Words are written in the presentation with tree letters killed.
    #[arg(long)]
    pub killed: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct RenderArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[arg(long, default_value_t = 1)]
    pub vertex: usize,
    /// Exponent N, or `rpow:D` for r^D.
    #[arg(long = "N", allow_hyphen_values = true)]
    pub n: String,
    /// Deepest recursion level drawn.
    #[arg(long, default_value_t = 4)]
    pub max_depth: u32,
    /// Width and height of the picture.
    #[arg(long, default_value_t = 800)]
    pub size: u32,
}
