//! Orchestration: parse, choose the arc shape, compute each requested set,
//! certify real candidates and assemble the report.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use gcv_core::arc::{paper_bounds_complex, paper_bounds_real, ArcShape, BoundSource, Field};
use gcv_core::certify::{certify_arc_system, certify_critical_value, CertificationOutcome, CertifyConfig};
use gcv_core::groebner::{Clock, GroebnerError, ResourceLimits};
use gcv_core::poly::{infer_variables, parse_map, ParseError, Poly, Rational, VarTable};
use gcv_core::system::{build_av_system, build_system, EquationSystem, SystemError, SystemMode};
use gcv_core::univariate::{exact_rational, refine};
use gcv_core::values::{compute_k0, compute_sf, heuristic_shape, value_set, Diagnostics, UnivariateResult, ValueError};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cli::{Args, FieldArg, Format, SetArg};
use crate::report::*;

/// Wall clock measured from construction.
pub struct InstantClock(Instant);

impl InstantClock {
    pub fn start() -> Self {
        Self(Instant::now())
    }
}

impl Clock for InstantClock {
    fn elapsed_ms(&self) -> u64 {
        self.0.elapsed().as_millis() as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunError {
    pub kind: &'static str,
    pub message: String,
    pub position: Option<usize>,
    pub limit: Option<String>,
    pub exit_code: i32,
}

impl RunError {
    fn parse(e: ParseError) -> Self {
        Self {
            kind: "parse",
            position: Some(e.position()),
            message: e.to_string(),
            limit: None,
            exit_code: 2,
        }
    }

    fn input(message: impl Into<String>) -> Self {
        Self {
            kind: "invalid-input",
            message: message.into(),
            position: None,
            limit: None,
            exit_code: 2,
        }
    }

    fn limit(limit: &str, message: impl Into<String>) -> Self {
        Self {
            kind: "limit-exceeded",
            message: message.into(),
            position: None,
            limit: Some(limit.to_string()),
            exit_code: 3,
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self {
            kind: "internal",
            message: message.into(),
            position: None,
            limit: None,
            exit_code: 4,
        }
    }

    pub fn to_report(&self) -> ErrorReport {
        ErrorReport {
            error: ErrorBody {
                kind: self.kind,
                message: self.message.clone(),
                position: self.position,
                limit: self.limit.clone(),
            },
        }
    }
}

impl From<ValueError> for RunError {
    fn from(e: ValueError) -> Self {
        match e {
            ValueError::Groebner(GroebnerError::LimitExceeded(l)) => Self::limit(l.as_str(), e.to_string()),
            ValueError::ConstantPolynomial | ValueError::System(SystemError::ConstantPolynomial) => Self::input(e.to_string()),
            other => Self::internal(other.to_string()),
        }
    }
}

impl From<SystemError> for RunError {
    fn from(e: SystemError) -> Self {
        match e {
            SystemError::ConstantPolynomial | SystemError::EmptyMap => Self::input(e.to_string()),
            other => Self::internal(other.to_string()),
        }
    }
}

fn field_name(f: Field) -> &'static str {
    match f {
        Field::Complex => "complex",
        Field::Real => "real",
    }
}

fn set_name(s: SetArg) -> &'static str {
    match s {
        SetArg::K0 => "k0",
        SetArg::Kinf => "kinf",
        SetArg::K => "k",
        SetArg::Sf => "sf",
        SetArg::All => "all",
    }
}

struct Ctx<'a> {
    args: &'a Args,
    field: Field,
    limits: ResourceLimits,
    certify: CertifyConfig,
    clock: Option<Instant>,
}

impl Ctx<'_> {
    fn elapsed(&self, since: Instant) -> Option<u64> {
        self.clock.map(|_| since.elapsed().as_millis() as u64)
    }
}

/// Runs the whole pipeline for parsed arguments.
pub fn run(args: &Args) -> Result<Report, RunError> {
    let field = match args.field {
        FieldArg::Complex => Field::Complex,
        FieldArg::Real => Field::Real,
    };
    let names = match &args.vars {
        Some(v) => v.clone(),
        None => infer_variables(&args.input).map_err(RunError::parse)?,
    };
    if names.is_empty() {
        return Err(RunError::input("the input has no variables"));
    }
    let vars = VarTable::new(names.iter().map(String::as_str)).map_err(|e| RunError::input(e.to_string()))?;
    let map = parse_map(&args.input, &vars).map_err(RunError::parse)?;
    let is_map = map.len() > 1;
    let sets: Vec<SetArg> = match (args.set, is_map) {
        (SetArg::All, false) => vec![SetArg::K0, SetArg::Kinf, SetArg::K],
        (SetArg::All, true) | (SetArg::Sf, true) => vec![SetArg::Sf],
        (SetArg::Sf, false) => return Err(RunError::input("--set sf needs a map: separate components with ';'")),
        (_, true) => return Err(RunError::input("a map only supports --set sf")),
        (s, false) => vec![s],
    };
    for p in &map {
        if p.is_constant() {
            return Err(RunError::input(format!("component `{p}` is constant")));
        }
    }

    let n = vars.len();
    let d = map.iter().map(|p| p.total_degree()).max().unwrap_or(0) as u32;
    let needs_arcs = sets.iter().any(|s| *s != SetArg::K0);
    let shape = if needs_arcs { Some(choose_shape(args, n, d, field, &sets)?) } else { None };

    let mut limits = ResourceLimits {
        max_pairs: args.max_pairs,
        max_basis_size: args.max_basis_size,
        max_coefficient_bits: args.max_coefficient_bits,
        wall_clock_budget_ms: args.time_budget_ms,
        clock: None,
    };
    limits.clock = Some(Arc::new(InstantClock::start()));
    let ctx = Ctx {
        args,
        field,
        limits,
        certify: CertifyConfig {
            tolerance: args.tolerance,
            restarts: args.restarts,
            max_iters: args.max_iters,
            seed: args.seed,
        },
        clock: args.timings.then(Instant::now),
    };

    let mut results = Results::default();
    for set in &sets {
        let started = Instant::now();
        match set {
            SetArg::K0 => {
                let f = &map[0];
                let r = compute_k0(f, &ctx.limits)?;
                let cert = |y: f64| certify_critical_value(f, y, &ctx.certify);
                results.k0 = Some(set_report(&ctx, &r, &cert, None, started));
            }
            SetArg::Kinf | SetArg::K => {
                let f = &map[0];
                let shape = shape.as_ref().expect("arc shape");
                let mode = if *set == SetArg::Kinf { SystemMode::Bv } else { SystemMode::Gbv };
                let sys = build_system(f, shape, mode)?;
                let r = value_set(&sys, &ctx.limits)?;
                let cert = |y: f64| certify_arc_system(&sys, y, &ctx.certify);
                let dump = args.dump_system.then(|| dump_system(&sys));
                let rep = set_report(&ctx, &r, &cert, dump, started);
                if *set == SetArg::Kinf {
                    results.kinf = Some(rep);
                } else {
                    results.k = Some(rep);
                }
            }
            SetArg::Sf => {
                let shape = shape.as_ref().expect("arc shape");
                let s = compute_sf(&map, shape, &ctx.limits)?;
                let dump = if args.dump_system {
                    Some(dump_system(&build_av_system(&map, shape, false)?))
                } else {
                    None
                };
                results.sf = Some(SfReport {
                    ideal: s.ideal.generators().iter().map(|g| g.to_string()).collect(),
                    empty: s.is_unit(),
                    completeness: s.completeness.as_str(),
                    diagnostics: diagnostics(&s.diagnostics, ctx.elapsed(started)),
                    system: dump,
                });
            }
            SetArg::All => unreachable!(),
        }
    }

    Ok(Report {
        input: InputEcho {
            text: args.input.clone(),
            variables: names,
            polynomials: map.iter().map(|p| p.to_string()).collect(),
        },
        config: ConfigEcho {
            field: field_name(field),
            sets: sets.iter().map(|s| set_name(*s)).collect(),
            bounds: shape.as_ref().map(|s| BoundsEcho {
                d1: s.d1(),
                d2: s.d2(),
                source: match s.bound_source() {
                    BoundSource::Paper => "paper",
                    BoundSource::User => "user",
                },
                arc_variables: s.num_vars(),
            }),
            seed: args.seed,
            limits: LimitsEcho {
                max_pairs: args.max_pairs,
                max_basis_size: args.max_basis_size,
                max_coefficient_bits: args.max_coefficient_bits,
                time_budget_ms: args.time_budget_ms,
            },
            certifier: CertifierEcho {
                tolerance: args.tolerance,
                restarts: args.restarts,
                max_iters: args.max_iters,
            },
        },
        results,
    })
}

fn choose_shape(args: &Args, n: usize, d: u32, field: Field, sets: &[SetArg]) -> Result<ArcShape, RunError> {
    let min_d1 = if sets.iter().all(|s| *s == SetArg::K || *s == SetArg::K0) { 0 } else { 1 };
    if let Some((d1, d2)) = args.bounds {
        if d1 < min_d1 {
            return Err(RunError::input("D1 must be at least 1 for kinf and sf"));
        }
        return Ok(ArcShape::new(n, d1, d2, field));
    }
    if args.paper_bounds {
        let n32 = n as u32;
        let bounds = match field {
            Field::Complex => paper_bounds_complex(n32, d),
            Field::Real => paper_bounds_real(n32, d),
        };
        let (d1, d2) = bounds.map_err(|e| RunError::limit("arc-bounds", e.to_string()))?;
        let count = ArcShape::paper_variable_count(n, d, field).map_err(|e| RunError::limit("arc-bounds", e.to_string()))?;
        if count > args.max_arc_vars && !args.force {
            return Err(RunError::limit(
                "max-arc-vars",
                format!(
                    "paper bounds D1={d1}, D2={d2} need {count} arc variables, above --max-arc-vars {}; pass --force to run anyway",
                    args.max_arc_vars
                ),
            ));
        }
        return ArcShape::paper(n, d, field).map_err(|e| RunError::limit("arc-bounds", e.to_string()));
    }
    Ok(heuristic_shape(n, d.max(1), field))
}

fn rational_text(q: &Rational) -> String {
    q.to_string()
}

/// Real roots refined to this width before reporting an approximation.
fn report_width() -> Rational {
    Rational::new(BigInt::from(1), BigInt::from(1u64 << 50))
}

fn set_report(
    ctx: &Ctx<'_>,
    r: &UnivariateResult,
    certify: &dyn Fn(f64) -> CertificationOutcome,
    system: Option<SystemDump>,
    started: Instant,
) -> SetReport {
    let real_field = ctx.field == Field::Real;
    let mut real_roots = Vec::with_capacity(r.real_roots.len());
    let mut values = Vec::new();
    for root in &r.real_roots {
        let exact = exact_rational(&r.eliminant, root).ok().flatten();
        let fine = refine(&r.eliminant, root, &report_width()).unwrap_or_else(|_| root.clone());
        let approx = exact.as_ref().and_then(|q| q.to_f64()).unwrap_or_else(|| fine.approx());
        let certification = real_field.then(|| {
            let out = certify(approx);
            if out.is_certified() {
                values.push(Value {
                    re: approx,
                    im: 0.0,
                    exact: exact.as_ref().map(rational_text),
                });
            }
            CertificationEcho {
                status: out.status.as_str(),
                residual: out.residual.is_finite().then_some(out.residual),
                restart: out.restart,
            }
        });
        real_roots.push(RealRootEcho {
            interval: [rational_text(&root.lo), rational_text(&root.hi)],
            approx,
            exact: exact.as_ref().map(rational_text),
            certification,
        });
    }
    let complex_roots: Vec<ComplexRootEcho> = r
        .complex_roots
        .iter()
        .map(|c| ComplexRootEcho {
            re: c.re,
            im: c.im,
            residual: c.residual,
        })
        .collect();
    if !real_field {
        for c in &r.complex_roots {
            let exact = if c.im == 0.0 {
                r.real_roots
                    .iter()
                    .zip(&real_roots)
                    .find(|(_, e)| (e.approx - c.re).abs() <= 1e-9 * c.re.abs().max(1.0))
                    .and_then(|(_, e)| e.exact.clone())
            } else {
                None
            };
            values.push(Value {
                re: c.re,
                im: c.im,
                exact,
            });
        }
    }
    let _ = ctx.args;
    SetReport {
        eliminant: r.eliminant.to_string(),
        degree: r.degree(),
        completeness: r.completeness.as_str(),
        values,
        real_roots,
        complex_roots,
        diagnostics: diagnostics(&r.diagnostics, ctx.elapsed(started)),
        system,
    }
}

fn diagnostics(d: &Diagnostics, elapsed_ms: Option<u64>) -> DiagnosticsEcho {
    DiagnosticsEcho {
        variables: d.variables,
        generators: d.generators,
        simplified_generators: d.simplified_generators,
        basis_size: d.basis_size,
        pairs: d.pairs,
        elapsed_ms,
    }
}

fn dump_system(sys: &EquationSystem) -> SystemDump {
    SystemDump {
        mode: match sys.mode {
            SystemMode::Bv => "bv",
            SystemMode::Gbv => "gbv",
            SystemMode::Av => "av",
            SystemMode::Gav => "gav",
        },
        arc_variables: sys.shape.vars().names().to_vec(),
        generators: sys
            .generators
            .iter()
            .map(|g| GeneratorDump {
                family: g.family.to_string(),
                poly: g.poly.to_string(),
            })
            .collect(),
        c0: sys.c0.iter().map(Poly::to_string).collect(),
    }
}

/// Serializes a report in the requested format.
pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => render_text(report),
    }
}

pub fn render_error(err: &RunError, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&err.to_report()).expect("error serializes");
            s.push('\n');
            s
        }
        Format::Text => format!("error ({}): {}\n", err.kind, err.message),
    }
}

fn value_text(v: &Value) -> String {
    if let Some(e) = &v.exact {
        return e.clone();
    }
    if v.im == 0.0 {
        format!("{:.12}", v.re)
    } else if v.re == 0.0 {
        format!("{:.12}*i", v.im)
    } else {
        format!("{:.12} {} {:.12}*i", v.re, if v.im < 0.0 { "-" } else { "+" }, v.im.abs())
    }
}

fn render_set(out: &mut String, label: &str, s: &SetReport, real: bool) {
    let vals: Vec<String> = s.values.iter().map(value_text).collect();
    let _ = writeln!(out, "{label}: {{{}}}", vals.join(", "));
    let _ = writeln!(out, "  eliminant: {}", s.eliminant);
    let _ = writeln!(out, "  completeness: {}", s.completeness);
    if real {
        for r in &s.real_roots {
            let value = r.exact.clone().unwrap_or_else(|| format!("{:.12}", r.approx));
            let status = r.certification.as_ref().map_or("", |c| c.status);
            let _ = writeln!(out, "  candidate {value} in [{}, {}]: {status}", r.interval[0], r.interval[1]);
        }
    }
}

fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "input: {}", r.input.polynomials.join("; "));
    let _ = writeln!(out, "variables: {}", r.input.variables.join(", "));
    let _ = write!(out, "field: {}", r.config.field);
    if let Some(b) = &r.config.bounds {
        let _ = write!(out, ", arcs D1={} D2={} ({} bounds, {} variables)", b.d1, b.d2, b.source, b.arc_variables);
    }
    out.push('\n');
    let real = r.config.field == "real";
    if let Some(s) = &r.results.k0 {
        render_set(&mut out, "K0", s, real);
    }
    if let Some(s) = &r.results.kinf {
        render_set(&mut out, "Kinf", s, real);
    }
    if let Some(s) = &r.results.k {
        render_set(&mut out, "K", s, real);
    }
    if let Some(s) = &r.results.sf {
        let _ = writeln!(out, "S_F: <{}>", s.ideal.join(", "));
        let _ = writeln!(out, "  completeness: {}", s.completeness);
    }
    out
}
