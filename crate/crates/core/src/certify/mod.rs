//! Numeric certification of real values and the Malgrange-condition probe.
//!
//! Everything upstream is exact; this module is the only place that uses
//! floating point. A certified value comes with a real witness whose
//! residual is below the tolerance. Failure to find one is reported as
//! [`Status::Uncertified`] and proves nothing.

mod compiled;
mod lm;
mod probe;

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arc::{ArcShape, Field};
use crate::poly::{Poly, PolyError, Rational};
use crate::system::{build_system, EquationSystem, SystemError, SystemMode};

pub use compiled::{Compiled, WithGradient};
pub use lm::{gauss_newton_step, levenberg_marquardt, Residual};
pub use probe::{malgrange_probe, ProbeConfig, ProbeField, ProbeTrace};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyConfig {
    pub tolerance: f64,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            restarts: 32,
            max_iters: 200,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    CertifiedReal,
    Uncertified,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::CertifiedReal => "certified-real",
            Self::Uncertified => "uncertified",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificationOutcome {
    pub status: Status,
    /// Best point found, certified or not.
    pub witness: Option<Vec<f64>>,
    /// `max |g(a)| + |c0(a) - y|` at the witness; infinite without one.
    pub residual: f64,
    /// Restart that produced the witness.
    pub restart: Option<usize>,
}

impl CertificationOutcome {
    pub fn is_certified(&self) -> bool {
        self.status == Status::CertifiedReal
    }
}

/// Residual after one Gauss-Newton step may exceed the current one by at
/// most this much and still count as a fixed point.
const REFINE_SLACK: f64 = 1e-14;

/// Equations `g_1 = ... = g_m = 0` plus the pin `c0 - y = 0`, over the reals.
#[derive(Debug, Clone)]
pub struct PinnedSystem {
    gens: Vec<WithGradient>,
    pin: WithGradient,
    y: f64,
    dim: usize,
}

impl PinnedSystem {
    pub fn new(gens: &[Poly], c0: &Poly, y: f64) -> Self {
        Self {
            gens: gens.iter().map(WithGradient::new).collect(),
            pin: WithGradient::new(c0),
            y,
            dim: c0.arity(),
        }
    }

    /// `max |g(a)| + |c0(a) - y|`.
    pub fn certificate_residual(&self, a: &[f64]) -> f64 {
        let g = self
            .gens
            .iter()
            .map(|g| g.value.eval(a).abs())
            .fold(0.0f64, f64::max);
        let r = g + (self.pin.value.eval(a) - self.y).abs();
        if r.is_nan() {
            f64::INFINITY
        } else {
            r
        }
    }
}

impl Residual for PinnedSystem {
    fn dim(&self) -> usize {
        self.dim
    }

    fn residual(&self, x: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = self.gens.iter().map(|g| g.value.eval(x)).collect();
        out.push(self.pin.value.eval(x) - self.y);
        out
    }

    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(self.gens.len() + 1, self.dim);
        for (row, g) in self.gens.iter().chain(core::iter::once(&self.pin)).enumerate() {
            for (v, d) in &g.partials {
                j[(row, *v)] = d.eval(x);
            }
        }
        j
    }
}

/// Polishes `x` with Gauss-Newton steps while the residual drops.
fn polish(sys: &PinnedSystem, mut x: Vec<f64>) -> (Vec<f64>, f64) {
    let mut res = sys.certificate_residual(&x);
    for _ in 0..8 {
        let next = gauss_newton_step(sys, &x);
        let r = sys.certificate_residual(&next);
        if r < res {
            x = next;
            res = r;
        } else {
            break;
        }
    }
    (x, res)
}

/// Whether one more Gauss-Newton step from `x` keeps the residual.
pub fn passes_refinement(sys: &PinnedSystem, x: &[f64]) -> bool {
    let res = sys.certificate_residual(x);
    let next = sys.certificate_residual(&gauss_newton_step(sys, x));
    next <= res + REFINE_SLACK
}

/// Seeded multi-start search for a real zero of `sys`. Starting points are
/// drawn from `start`, one call per restart.
pub fn certify_system(
    sys: &PinnedSystem,
    cfg: &CertifyConfig,
    mut start: impl FnMut(&mut ChaCha8Rng) -> Vec<f64>,
) -> CertificationOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best = CertificationOutcome {
        status: Status::Uncertified,
        witness: None,
        residual: f64::INFINITY,
        restart: None,
    };
    for k in 0..cfg.restarts {
        let x0 = start(&mut rng);
        let x = levenberg_marquardt(sys, x0, cfg.max_iters, cfg.tolerance * 1e-3);
        let (x, res) = polish(sys, x);
        if res < best.residual {
            best.residual = res;
            best.witness = Some(x);
            best.restart = Some(k);
        }
        if best.residual < cfg.tolerance && passes_refinement(sys, best.witness.as_ref().unwrap()) {
            best.status = Status::CertifiedReal;
            return best;
        }
    }
    best
}

fn uniform(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-scale..scale)).collect()
}

/// Certifies that `y` is attained by a real arc of `shape` in `BV(f)`.
pub fn certify_real(f: &Poly, shape: &ArcShape, y: f64, cfg: &CertifyConfig) -> Result<CertificationOutcome, SystemError> {
    let sys = build_system(f, &shape.with_field(Field::Real), SystemMode::Bv)?;
    Ok(certify_arc_system(&sys, y, cfg))
}

/// Certifies that `y = c0(a)` for a real zero `a` of an arc system. Starts
/// are drawn on the unit sphere of the positive-index coefficients.
pub fn certify_arc_system(sys: &EquationSystem, y: f64, cfg: &CertifyConfig) -> CertificationOutcome {
    let gens: Vec<Poly> = sys.polys().cloned().collect();
    let pinned = PinnedSystem::new(&gens, &sys.c0[0], y);
    let positive: Vec<usize> = sys.shape.positive_indices().collect();
    let dim = sys.shape.num_vars();
    certify_system(&pinned, cfg, |rng| {
        let mut x = uniform(rng, dim, 1.5);
        let norm = libm::sqrt(positive.iter().map(|&i| x[i] * x[i]).sum::<f64>());
        if norm > 0.0 {
            for &i in &positive {
                x[i] /= norm;
            }
        }
        x
    })
}

/// Certifies that `y` is a value of `f` at a real critical point.
pub fn certify_critical_value(f: &Poly, y: f64, cfg: &CertifyConfig) -> CertificationOutcome {
    let grads: Vec<Poly> = (0..f.arity()).map(|i| f.partial_derivative(i)).collect();
    let pinned = PinnedSystem::new(&grads, f, y);
    let n = f.arity();
    certify_system(&pinned, cfg, |rng| uniform(rng, n, 2.0))
}

/// True iff every generator of the `mode` system vanishes exactly at `a`.
pub fn verify_arc(f: &Poly, shape: &ArcShape, a: &[Rational], mode: SystemMode) -> Result<bool, SystemError> {
    let sys = build_system(f, shape, mode)?;
    if a.len() != shape.num_vars() {
        return Err(SystemError::Arc(crate::arc::ArcError::Poly(PolyError::ArityMismatch {
            expected: shape.num_vars(),
            got: a.len(),
        })));
    }
    for g in sys.polys() {
        let v = g.eval_exact(a).map_err(|e| SystemError::Arc(e.into()))?;
        if !v.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, rat, ratio, VarTable};
    use alloc::vec;

    fn poly(text: &str) -> Poly {
        parse_poly(text, &VarTable::new(["x", "y"]).unwrap()).unwrap()
    }

    fn broughton_witness(shape: &ArcShape) -> Vec<Rational> {
        let mut a = vec![rat(0); shape.num_vars()];
        a[shape.var_index(-1, 1).unwrap()] = ratio(-1, 2);
        a[shape.var_index(1, 2).unwrap()] = rat(1);
        a
    }

    #[test]
    fn witness_arcs_verify() {
        let f = poly("x + x^2*y");
        let shape = ArcShape::new(2, 1, 1, Field::Complex);
        assert!(verify_arc(&f, &shape, &broughton_witness(&shape), SystemMode::Bv).unwrap());
        let zero = vec![rat(0); shape.num_vars()];
        assert!(!verify_arc(&f, &shape, &zero, SystemMode::Bv).unwrap());
        // constant arc at a critical point of x^2 + y^2
        let g = poly("x^2 + y^2");
        assert!(verify_arc(&g, &shape, &zero, SystemMode::Gbv).unwrap());
        assert!(!verify_arc(&f, &shape, &zero, SystemMode::Gbv).unwrap());
        assert!(verify_arc(&f, &shape, &zero[1..], SystemMode::Bv).is_err());
    }

    #[test]
    fn broughton_certifies() {
        let f = poly("x + x^2*y");
        let shape = ArcShape::new(2, 1, 1, Field::Real);
        let cfg = CertifyConfig::default();
        let out = certify_real(&f, &shape, 0.0, &cfg).unwrap();
        assert_eq!(out.status, Status::CertifiedReal);
        assert!(out.residual < 1e-9);
        assert_eq!(out, certify_real(&f, &shape, 0.0, &cfg).unwrap());
        let far = certify_real(&f, &shape, 1e6, &cfg).unwrap();
        assert_eq!(far.status, Status::Uncertified);
    }

    #[test]
    fn quintic_real_is_not_certified() {
        let f = poly("x*(x^2+1)^2");
        let shape = ArcShape::new(2, 1, 0, Field::Real);
        let out = certify_real(&f, &shape, 0.0, &CertifyConfig::default()).unwrap();
        assert_eq!(out.status, Status::Uncertified);
        assert!(out.residual > 1e-3);
    }

    #[test]
    fn critical_values() {
        let f = parse_poly("x^3 - 3*x", &VarTable::new(["x"]).unwrap()).unwrap();
        let cfg = CertifyConfig::default();
        assert!(certify_critical_value(&f, 2.0, &cfg).is_certified());
        assert!(!certify_critical_value(&f, 1.0, &cfg).is_certified());
        let g = poly("x^2 + y^2 + 1");
        assert!(!certify_critical_value(&g, 0.0, &cfg).is_certified());
    }
}
