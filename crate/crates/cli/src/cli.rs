use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaplab_core::Rational;
use serde::Serialize;

use crate::parse::{IntList, RatList, VecList};

/// Exact experiments on gaps, sumsets and nearest-neighbour censuses.
///
/// Rationals are written `p/q` or as decimals (`0.625` is read as `5/8`).
/// Exit status: 0 when every verdict passes, 1 when one fails, 2 on invalid input.
#[derive(Debug, Parser)]
#[command(name = "gaplab", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Master seed; trial `i` draws from stream `i`.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Report file; defaults to stdout, or to a file in the output directory when one is set.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, env = "GAPLAB_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Points {nα} for 1 ≤ n ≤ N with their labels.
    Orbit(OrbitArgs),
    /// Gap spectrum of an orbit, an AP union or an explicit set.
    Gaps(GapsArgs),
    /// Greedy subset of the orbit with many distinct gaps.
    Greedy(OrbitArgs),
    /// Sumset or difference set of two finite sets.
    Sumset(SumsetArgs),
    /// Smallest C ⊆ B with C − B = B − B.
    Cover(CoverArgs),
    /// Neighbour-gap generators and decompositions of B − B.
    Generators(GeneratorsArgs),
    /// Large set without three-term progressions.
    Behrend(BehrendArgs),
    /// Sumset-small set whose difference covers are forced to be large.
    Prop1(Prop1Args),
    /// Projection of a generalized progression onto the circle.
    Lattice(LatticeArgs),
    /// Nearest-neighbour census of a point cloud on the torus.
    NnCensus(CloudArgs),
    /// Census of a Kronecker sequence against its best-approximation order.
    Kronecker(KroneckerArgs),
    /// Kissing-configuration checks.
    Kissing(KissingArgs),
    /// Greedy extraction of a subset with a small census.
    ExtractCore(ExtractArgs),
    /// The integer example with a large census and small doubling.
    Example5(Example5Args),
    /// Seeded randomized verification suites.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Orbit(_) => "orbit",
            Command::Gaps(_) => "gaps",
            Command::Greedy(_) => "greedy",
            Command::Sumset(_) => "sumset",
            Command::Cover(_) => "cover",
            Command::Generators(_) => "generators",
            Command::Behrend(_) => "behrend",
            Command::Prop1(_) => "prop1",
            Command::Lattice(_) => "lattice",
            Command::NnCensus(_) => "nn-census",
            Command::Kronecker(_) => "kronecker",
            Command::Kissing(_) => "kissing",
            Command::ExtractCore(_) => "extract-core",
            Command::Example5(_) => "example5",
            Command::Verify(_) => "verify",
        }
    }

    pub fn config(&self) -> serde_json::Value {
        let v = match self {
            Command::Orbit(a) | Command::Greedy(a) => serde_json::to_value(a),
            Command::Gaps(a) => serde_json::to_value(a),
            Command::Sumset(a) => serde_json::to_value(a),
            Command::Cover(a) => serde_json::to_value(a),
            Command::Generators(a) => serde_json::to_value(a),
            Command::Behrend(a) => serde_json::to_value(a),
            Command::Prop1(a) => serde_json::to_value(a),
            Command::Lattice(a) => serde_json::to_value(a),
            Command::NnCensus(a) => serde_json::to_value(a),
            Command::Kronecker(a) => serde_json::to_value(a),
            Command::Kissing(a) => serde_json::to_value(a),
            Command::ExtractCore(a) => serde_json::to_value(a),
            Command::Example5(a) => serde_json::to_value(a),
            Command::Verify(a) => serde_json::to_value(a),
        };
        v.expect("arguments serialize")
    }
}

#[derive(Debug, Args, Serialize)]
pub struct OrbitArgs {
    #[arg(long)]
    pub alpha: Rational,
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct GapsArgs {
    #[arg(long)]
    pub alpha: Option<Rational>,
    #[arg(long, requires = "alpha", conflicts_with = "arm")]
    pub n: Option<u64>,
    /// AP arm `β:len`, repeatable; spectrum of the union of `{β + jα : 0 ≤ j < len}`.
    #[arg(long, requires = "alpha")]
    pub arm: Vec<String>,
    /// Explicit points of the circle.
    #[arg(long, conflicts_with_all = ["alpha", "n", "arm"])]
    pub points: Option<RatList>,
    /// Drop the gap from the last point back to the first.
    #[arg(long)]
    pub no_wrap: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainArg {
    Integers,
    Rationals,
    Torus,
}

#[derive(Debug, Args, Serialize)]
pub struct SumsetArgs {
    #[arg(long, required_unless_present = "random")]
    pub a: Option<RatList>,
    /// Second summand; defaults to A.
    #[arg(long)]
    pub b: Option<RatList>,
    #[arg(long, value_enum, default_value_t = DomainArg::Integers)]
    pub domain: DomainArg,
    /// Compute A − B instead of A + B.
    #[arg(long)]
    pub difference: bool,
    /// Count |A + B| for two seeded random sets of this many 64-bit integers.
    #[arg(long, conflicts_with_all = ["a", "b", "difference"])]
    pub random: Option<usize>,
    /// List the elements in the report.
    #[arg(long)]
    pub elements: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CoverArgs {
    /// Points of B on the circle.
    #[arg(long)]
    pub b: RatList,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SideArg {
    Minus,
    Plus,
}

#[derive(Debug, Args, Serialize)]
pub struct GeneratorsArgs {
    #[arg(long)]
    pub b: RatList,
    /// Difference cover; computed when omitted.
    #[arg(long)]
    pub c: Option<RatList>,
    /// Decompose this single difference instead of checking all of them.
    #[arg(long)]
    pub target: Option<Rational>,
    #[arg(long, value_enum, default_value_t = SideArg::Minus)]
    pub side: SideArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ApMethodArg {
    Behrend,
    Exact,
    Greedy,
}

#[derive(Debug, Args, Serialize)]
pub struct BehrendArgs {
    #[arg(long)]
    pub n: i64,
    #[arg(long, value_enum, default_value_t = ApMethodArg::Behrend)]
    pub method: ApMethodArg,
    /// List the elements in the report.
    #[arg(long)]
    pub elements: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct Prop1Args {
    #[arg(long)]
    pub n: i64,
    /// Progression-free S ⊆ [1, N] with |S| ≤ N/2; a largest one is used when omitted.
    #[arg(long)]
    pub s: Option<IntList>,
}

#[derive(Debug, Args, Serialize)]
pub struct LatticeArgs {
    #[arg(long)]
    pub alphas: RatList,
    /// Side lengths N_1, …, N_k.
    #[arg(long)]
    pub ns: IntList,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NnMethodArg {
    Grid,
    Brute,
    /// Run both and compare.
    Both,
}

#[derive(Debug, Args, Serialize)]
pub struct CloudArgs {
    /// Points as `x,y;x,y;…`.
    #[arg(long, required_unless_present = "random")]
    pub points: Option<VecList>,
    /// Draw this many seeded random points instead.
    #[arg(long, conflicts_with = "points")]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Grid denominator for random points.
    #[arg(long, default_value_t = 1000)]
    pub q: i64,
    #[arg(long, value_enum, default_value_t = NnMethodArg::Grid)]
    pub method: NnMethodArg,
    /// Include one record per point.
    #[arg(long)]
    pub records: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct KroneckerArgs {
    #[arg(long)]
    pub alphas: RatList,
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct KissingArgs {
    /// Configuration as `x,y;x,y;…`.
    #[arg(long, conflicts_with_all = ["hexagon", "grid"])]
    pub points: Option<VecList>,
    /// Check the regular hexagon of this radius, with coordinates in Q(√3).
    #[arg(long, conflicts_with = "grid")]
    pub hexagon: Option<Rational>,
    /// Exhaustive maximum over the grid with this denominator.
    #[arg(long)]
    pub grid: Option<i64>,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ExtractArgs {
    /// The cloud A as `x,y;x,y;…`.
    #[arg(long, required_unless_present = "m")]
    pub points: Option<VecList>,
    /// Use the integer example with parameter m instead.
    #[arg(long, conflicts_with = "points")]
    pub m: Option<u64>,
    /// The cloud B; defaults to A.
    #[arg(long)]
    pub b: Option<VecList>,
    /// Defaults to 1/(2m) with `--m`.
    #[arg(long)]
    pub epsilon: Option<Rational>,
    #[arg(long, default_value = "1")]
    pub kappa: Rational,
}

#[derive(Debug, Args, Serialize)]
pub struct Example5Args {
    #[arg(long)]
    pub m: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    ThreeGap,
    ApUnion,
    DistinctGaps,
    ArcCount,
    Sumset,
    Cover,
    Generators,
    ForcedSubset,
    Kronecker,
    Census,
    Kissing,
    Extraction,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
}
