use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use promise_color::round::RoundingMethod;

#[derive(Debug, Parser)]
#[command(name = "promise-color", version, about = "Approximate k- vs. l-colouring via a vector relaxation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Root seed; every random choice is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Omit the timestamp so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Fj,
    Kms,
    Derand,
}

impl From<Method> for RoundingMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Fj => RoundingMethod::Fj,
            Method::Kms => RoundingMethod::Kms,
            Method::Derand => RoundingMethod::Derand,
        }
    }
}

#[derive(Debug, Args)]
pub struct Palettes {
    /// Palette the graph is promised to be colourable with.
    #[arg(long)]
    pub k: u32,
    /// Palette of the output colouring; defaults to k.
    #[arg(long)]
    pub l: Option<u32>,
}

#[derive(Debug, Args)]
pub struct Rounding {
    #[arg(long, value_enum, default_value_t = Method::Fj)]
    pub method: Method,
    /// Independent roundings for fj and kms; the best is reported.
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// Slack of the derandomised rounding below its expectation.
    #[arg(long, default_value_t = 0.02)]
    pub epsilon: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the relaxation of a graph and round it.
    Solve {
        graph: PathBuf,
        #[command(flatten)]
        palettes: Palettes,
        #[command(flatten)]
        rounding: Rounding,
        /// Maximum pair violation accepted from the solver.
        #[arg(long)]
        feas_tol: Option<f64>,
        /// Certified optimality gap the solver aims for.
        #[arg(long)]
        gap_tol: Option<f64>,
        /// Also save the vector solution (text format) here.
        #[arg(long)]
        save_vectors: Option<PathBuf>,
    },
    /// Round a saved vector solution.
    Round {
        graph: PathBuf,
        /// Vector solution in the text or JSON format.
        vectors: PathBuf,
        /// Palette of the output colouring.
        #[arg(long)]
        l: u32,
        #[command(flatten)]
        rounding: Rounding,
    },
    /// Approximation constants for one palette pair.
    Alpha {
        #[command(flatten)]
        palettes: Palettes,
    },
    /// Table of the argmax-rounding constant.
    Table {
        #[arg(long, default_value_t = 3)]
        k_min: u32,
        #[arg(long, default_value_t = 15)]
        k_max: u32,
        #[arg(long, default_value_t = 3)]
        l_min: u32,
        #[arg(long, default_value_t = 15)]
        l_max: u32,
    },
    /// Exact optimum by branch and bound.
    Oracle {
        graph: PathBuf,
        #[arg(long)]
        k: u32,
        /// Largest number of non-isolated vertices to search.
        #[arg(long, default_value_t = 12)]
        budget: usize,
    },
    /// Scale a graph's optimum by p/q: p copies plus (q - p) m looped vertices.
    Gadget {
        graph: PathBuf,
        /// Ratio `p/q` with 0 < p <= q.
        #[arg(long)]
        ratio: String,
        /// Write the scaled graph here; otherwise it is embedded in the report.
        #[arg(long)]
        graph_out: Option<PathBuf>,
    },
    /// Build the label-cover reduction and check completeness.
    Pcp {
        /// Label-cover instance file.
        instance: PathBuf,
        #[arg(long)]
        k: u32,
        /// Markov operator file; defaults to the k-colour noise operator.
        #[arg(long)]
        operator: Option<PathBuf>,
        /// Tensor power; must equal the instance domain size r.
        #[arg(long)]
        r_blow: Option<usize>,
        /// Vertex budget of the reduction.
        #[arg(long, default_value_t = promise_color::gadget::PCP_VERTEX_BUDGET)]
        budget: usize,
        /// Write the reduced graph here.
        #[arg(long)]
        graph_out: Option<PathBuf>,
    },
}
