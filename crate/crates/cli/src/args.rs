use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use meaningfock::lsa::Weighting;

#[derive(Debug, Parser)]
#[command(
    name = "meaningfock",
    version,
    about = "Concept-combination membership analysis: classicality, Fock-space fits, LSA similarity",
    arg_required_else_help = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Label each membership triple C, D or K and append delta_d, k_d, type.
    Classify {
        #[arg(long = "in", value_name = "CSV")]
        input: PathBuf,
        /// Output path; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
    },
    /// Fit the two-sector Fock model to every triple.
    Fit {
        #[arg(long = "in", value_name = "CSV")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Strategy::MinSector2)]
        strategy: Strategy,
        /// Interference angle in degrees, for `fixed-theta`.
        #[arg(long, value_name = "DEG")]
        theta: Option<f64>,
        /// Sector-2 weight, for `fixed-m2`.
        #[arg(long)]
        m2: Option<f64>,
    },
    /// Reconstruct concept states from three collapse distributions (JSON).
    Reconstruct {
        /// JSON request; `-` reads stdin.
        #[arg(long = "in", value_name = "JSON")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build or query a semantic space.
    #[command(subcommand)]
    Lsa(LsaCommand),
    /// Map similarities to memberships with the threshold curve.
    Threshold {
        #[arg(long = "in", value_name = "CSV")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        params: ThresholdArgs,
    },
    /// Compare model memberships with reference memberships.
    Compare {
        #[arg(long, value_name = "CSV")]
        reference: PathBuf,
        #[arg(long, value_name = "CSV")]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
    },
    /// Full pipeline: similarities, threshold models and comparisons.
    Report {
        /// Prebuilt space file. Mutually exclusive with --corpus.
        #[arg(long, conflicts_with = "corpus", required_unless_present = "corpus")]
        space: Option<PathBuf>,
        /// Corpus to build a space from.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[command(flatten)]
        lsa: LsaBuildArgs,
        #[arg(long, value_name = "CSV")]
        pairs: PathBuf,
        #[arg(long, value_name = "CSV")]
        data: PathBuf,
        #[arg(long, value_name = "DIR")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
        /// Keep connectives such as "or" in query phrases.
        #[arg(long)]
        keep_stop_words: bool,
    },
    /// Evaluate the Donkey parameters m2 = 0.26, theta = 77.34 deg and print the discrepancy from 0.7.
    VerifyExample {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum LsaCommand {
    /// Corpus (directory of .txt files or one line-per-document file) to space file.
    Build {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        lsa: LsaBuildArgs,
    },
    /// Cosine similarity of one phrase pair, or of a whole dataset.
    Sim {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, requires = "b", conflicts_with_all = ["pairs", "data"])]
        a: Option<String>,
        #[arg(long, requires = "a")]
        b: Option<String>,
        /// Concept pairs CSV; batch mode together with --data.
        #[arg(long, requires = "data", required_unless_present = "a")]
        pairs: Option<PathBuf>,
        /// Membership CSV whose rows name the exemplars.
        #[arg(long, requires = "pairs")]
        data: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replace negative cosines with zero.
        #[arg(long)]
        clip: bool,
        #[arg(long)]
        keep_stop_words: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct LsaBuildArgs {
    /// Number of retained dimensions.
    #[arg(long, default_value_t = 100)]
    pub k: usize,
    #[arg(long, value_parser = parse_weighting, default_value = "log-entropy")]
    pub weighting: Weighting,
    /// Drop terms with fewer total occurrences.
    #[arg(long, default_value_t = 1)]
    pub min_term_count: u32,
    /// Seed for the randomized SVD.
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SvdChoice::Auto)]
    pub svd: SvdChoice,
    /// Snowball-stem corpus and query tokens.
    #[arg(long)]
    pub stem: bool,
}

fn parse_weighting(s: &str) -> Result<Weighting, String> {
    s.parse()
}

#[derive(Debug, Clone, Args)]
pub struct ThresholdArgs {
    #[arg(long, value_enum, default_value_t = Preset::Wide)]
    pub preset: Preset,
    /// Lower threshold; overrides the preset together with --s-t and --s-h.
    #[arg(long, requires_all = ["s_t", "s_h"])]
    pub s_l: Option<f64>,
    #[arg(long, requires_all = ["s_l", "s_h"])]
    pub s_t: Option<f64>,
    #[arg(long, requires_all = ["s_l", "s_t"])]
    pub s_h: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    MinSector2,
    FixedTheta,
    FixedM2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// 0.1 / 0.5 / 0.9
    Wide,
    /// 0.3 / 0.5 / 0.7
    Narrow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SvdChoice {
    Auto,
    Dense,
    Randomized,
}
