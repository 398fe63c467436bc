//! Serializable report. Field order is fixed by declaration order, so a
//! report for fixed input, options and seed serializes to the same bytes.

use serde::Serialize;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub input: InputEcho,
    pub config: ConfigEcho,
    pub results: Results,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct InputEcho {
    pub text: String,
    pub variables: Vec<String>,
    /// Canonical form of each parsed component.
    pub polynomials: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConfigEcho {
    pub field: &'static str,
    pub sets: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsEcho>,
    pub seed: u64,
    pub limits: LimitsEcho,
    pub certifier: CertifierEcho,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BoundsEcho {
    pub d1: u32,
    pub d2: u32,
    pub source: &'static str,
    pub arc_variables: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LimitsEcho {
    pub max_pairs: usize,
    pub max_basis_size: usize,
    pub max_coefficient_bits: u64,
    pub time_budget_ms: u64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CertifierEcho {
    pub tolerance: f64,
    pub restarts: usize,
    pub max_iters: usize,
}

#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct Results {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k0: Option<SetReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kinf: Option<SetReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<SetReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sf: Option<SfReport>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SetReport {
    /// Squarefree eliminant in `y`; "1" for the empty set.
    pub eliminant: String,
    pub degree: usize,
    pub completeness: &'static str,
    /// The set itself: every root over the complex numbers, the certified
    /// real roots over the reals.
    pub values: Vec<Value>,
    pub real_roots: Vec<RealRootEcho>,
    pub complex_roots: Vec<ComplexRootEcho>,
    pub diagnostics: DiagnosticsEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemDump>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Value {
    pub re: f64,
    pub im: f64,
    /// Exact value when it is rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RealRootEcho {
    /// Isolating interval `[lo, hi]` with exact rational endpoints.
    pub interval: [String; 2],
    pub approx: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    /// Present on real runs only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certification: Option<CertificationEcho>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CertificationEcho {
    pub status: &'static str,
    /// `null` when no finite residual was reached.
    pub residual: Option<f64>,
    pub restart: Option<usize>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ComplexRootEcho {
    pub re: f64,
    pub im: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DiagnosticsEcho {
    pub variables: usize,
    pub generators: usize,
    pub simplified_generators: usize,
    pub basis_size: usize,
    pub pairs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SfReport {
    /// Generators of the elimination ideal in `y1, ..., ym`.
    pub ideal: Vec<String>,
    pub empty: bool,
    pub completeness: &'static str,
    pub diagnostics: DiagnosticsEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemDump>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SystemDump {
    pub mode: &'static str,
    pub arc_variables: Vec<String>,
    pub generators: Vec<GeneratorDump>,
    pub c0: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GeneratorDump {
    pub family: String,
    pub poly: String,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ErrorReport {
    pub error: ErrorBody,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<String>,
}
