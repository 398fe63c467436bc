//! Command-line arguments.

use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Complex,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetArg {
    K0,
    Kinf,
    K,
    Sf,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Critical values K0, asymptotic critical values Kinf and generalized
/// critical values K of a polynomial with rational coefficients, or the
/// non-properness set of a polynomial map.
#[derive(Debug, Clone, Parser)]
#[command(name = "gcv", version)]
pub struct Args {
    /// Polynomial such as "x + x^2*y", or a ";"-separated map for --set sf.
    pub input: String,

    #[arg(long, value_enum, default_value_t = FieldArg::Complex)]
    pub field: FieldArg,

    /// Which sets to compute; "all" means k0, kinf and k for a polynomial
    /// and sf for a map.
    #[arg(long = "set", value_enum, default_value_t = SetArg::All)]
    pub set: SetArg,

    /// Arc bidegree bounds D1,D2.
    #[arg(long, value_name = "D1,D2", value_parser = parse_bounds, conflicts_with = "paper_bounds")]
    pub bounds: Option<(u32, u32)>,

    /// Use the bounds under which the arc method is complete.
    #[arg(long)]
    pub paper_bounds: bool,

    /// Run with --paper-bounds even above --max-arc-vars.
    #[arg(long)]
    pub force: bool,

    #[arg(long, default_value_t = 64)]
    pub max_arc_vars: u64,

    /// Variable names in order; defaults to order of first appearance.
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Same as --format json.
    #[arg(long)]
    pub json: bool,

    /// Include the generated equation systems in the report.
    #[arg(long)]
    pub dump_system: bool,

    /// Include elapsed milliseconds (makes reports run-dependent).
    #[arg(long)]
    pub timings: bool,

    #[arg(long, env = "GCV_MAX_PAIRS", default_value_t = 200_000)]
    pub max_pairs: usize,

    #[arg(long, env = "GCV_MAX_BASIS_SIZE", default_value_t = 20_000)]
    pub max_basis_size: usize,

    #[arg(long, env = "GCV_MAX_COEFFICIENT_BITS", default_value_t = 1 << 20)]
    pub max_coefficient_bits: u64,

    #[arg(long, env = "GCV_TIME_BUDGET_MS", default_value_t = 600_000)]
    pub time_budget_ms: u64,

    /// Residual below which a real witness certifies a value.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,

    #[arg(long, default_value_t = 32)]
    pub restarts: usize,

    #[arg(long, default_value_t = 200)]
    pub max_iters: usize,
}

impl Args {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

fn parse_bounds(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected D1,D2, got `{s}`"))?;
    let d1 = a.trim().parse().map_err(|e| format!("D1: {e}"))?;
    let d2 = b.trim().parse().map_err(|e| format!("D2: {e}"))?;
    Ok((d1, d2))
}
