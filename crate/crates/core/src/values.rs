//! Value sets: critical values, asymptotic critical values, generalized
//! critical values and the non-properness set of a map.
//!
//! Each set is the image of a solution variety under a polynomial map `c0`.
//! It is computed by adjoining `y - c0` and eliminating every other
//! variable; for a finite image the roots of the resulting eliminant are
//! exactly the image points.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arc::{ArcShape, BoundSource, Field};
use crate::groebner::{eliminate_with_stats, GroebnerError, Ideal, OrderKind, ResourceLimits};
use crate::poly::{Poly, PolyError, Rational, VarTable};
use crate::system::{build_av_system, build_system, EquationSystem, SystemError, SystemMode};
use crate::univariate::{approx_complex_roots, isolate_real_roots, squarefree_part, ComplexRoot, RealRoot};

/// Scaled residual accepted for approximate complex roots.
pub const COMPLEX_ROOT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ValueError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("the polynomial is constant")]
    ConstantPolynomial,
    #[error("internal error: elimination ideal in the image variable is zero")]
    ZeroEliminationIdeal,
    #[error("internal error: {0}")]
    Internal(String),
}

/// How much of the true set a result is guaranteed to contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Completeness {
    /// No arcs involved; the set is computed exactly.
    Exact,
    /// Arc bounds large enough for the whole set.
    PaperBoundsComplete,
    /// Every reported value belongs to the set, but some may be missing.
    ReducedBoundsSoundOnly,
}

impl Completeness {
    pub fn for_shape(shape: &ArcShape) -> Self {
        match shape.bound_source() {
            BoundSource::Paper => Self::PaperBoundsComplete,
            BoundSource::User => Self::ReducedBoundsSoundOnly,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::PaperBoundsComplete => "paper-bounds-complete",
            Self::ReducedBoundsSoundOnly => "reduced-bounds-sound-only",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// Variables eliminated (arc coefficients or affine coordinates).
    pub variables: usize,
    pub generators: usize,
    /// Generators left after linear substitutions and pure-power pruning.
    pub simplified_generators: usize,
    pub basis_size: usize,
    pub pairs: usize,
}

#[derive(Debug, Clone)]
pub struct UnivariateResult {
    /// Squarefree, content-free, positive leading coefficient; the constant
    /// `1` for the empty set.
    pub eliminant: Poly,
    pub real_roots: Vec<RealRoot>,
    pub complex_roots: Vec<ComplexRoot>,
    pub completeness: Completeness,
    pub diagnostics: Diagnostics,
}

impl UnivariateResult {
    pub fn is_empty(&self) -> bool {
        self.eliminant.is_constant()
    }

    pub fn degree(&self) -> usize {
        self.eliminant.total_degree().max(0) as usize
    }

    /// Whether the exact value `y` is a root of the eliminant.
    pub fn contains(&self, y: &Rational) -> bool {
        self.eliminant.eval_exact(core::slice::from_ref(y)).is_ok_and(|v| v.is_zero())
    }
}

/// What a simplification may assume about the ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Simplify {
    /// Only steps that keep the ideal itself.
    Ideal,
    /// Also steps that keep the variety only.
    Variety,
}

/// Removes variables in `elim` that a generator expresses linearly with a
/// constant coefficient, and (for `Simplify::Variety`) variables with a
/// pure-power generator. Both leave the elimination ideal's variety in the
/// remaining variables unchanged; the linear step keeps the ideal too.
/// Returns `None` when a nonzero constant appears.
fn presimplify(mut gens: Vec<Poly>, elim: &[bool], mode: Simplify) -> Option<Vec<Poly>> {
    loop {
        gens.retain(|g| !g.is_zero());
        if gens.iter().any(Poly::is_constant) {
            return None;
        }
        let mut step: Option<(usize, usize, Poly)> = None;
        // prefer the shortest substitution; ties by position
        for (gi, g) in gens.iter().enumerate() {
            for v in g.support() {
                if !elim[v] {
                    continue;
                }
                if let Some(value) = solve_linear(g, v, mode) {
                    let better = step.as_ref().is_none_or(|(_, _, best)| value.num_terms() < best.num_terms());
                    if better {
                        step = Some((gi, v, value));
                    }
                    break;
                }
            }
        }
        let Some((gi, v, value)) = step else {
            return Some(dedup(gens));
        };
        gens.swap_remove(gi);
        for g in &mut gens {
            if g.mentions(v) {
                *g = g.substitute_var(v, &value);
            }
        }
    }
}

/// If `g = c * x_v^e` (variety mode) or `g = c * x_v + r` with constant `c`
/// and `r` free of `x_v`, the value forced on `x_v`.
fn solve_linear(g: &Poly, v: usize, mode: Simplify) -> Option<Poly> {
    if mode == Simplify::Variety && g.num_terms() == 1 && g.support() == [v] {
        return Some(Poly::zero(g.vars()));
    }
    if g.degree_in(v) != 1 {
        return None;
    }
    let mut coeff: Option<Rational> = None;
    let mut rest = Poly::zero(g.vars());
    for (m, c) in g.terms() {
        if m.exponents()[v] == 1 {
            if m.total_degree() != 1 {
                return None;
            }
            coeff = Some(c.clone());
        } else {
            rest = &rest + &Poly::monomial(g.vars(), m.clone(), c.clone());
        }
    }
    let c = coeff?;
    Some(rest.scale(&(-c.recip())))
}

fn dedup(gens: Vec<Poly>) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::with_capacity(gens.len());
    for g in gens {
        let p = g.primitive();
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Eliminates all but the last `keep` variables of `table` from `gens`.
fn eliminate_to_last(
    table: &VarTable,
    gens: Vec<Poly>,
    keep: usize,
    mode: Simplify,
    limits: &ResourceLimits,
    diag: &mut Diagnostics,
) -> Result<Option<Vec<Poly>>, ValueError> {
    let n = table.len();
    let elim: Vec<bool> = (0..n).map(|v| v < n - keep).collect();
    diag.variables = n - keep;
    let Some(simple) = presimplify(gens, &elim, mode) else {
        diag.simplified_generators = 1;
        return Ok(None);
    };
    diag.simplified_generators = simple.len();
    let ideal = Ideal::new(table, simple, OrderKind::GradedRevLex)?;
    let kept: Vec<usize> = (n - keep..n).collect();
    let (elim_ideal, stats) = eliminate_with_stats(&ideal, &kept, limits)?;
    diag.basis_size = stats.basis_peak;
    diag.pairs = stats.pairs_processed;
    if elim_ideal.generators().iter().any(Poly::is_constant) {
        return Ok(None);
    }
    Ok(Some(elim_ideal.generators().to_vec()))
}

/// Projects a polynomial in the last variable of its table onto `target`.
fn project_last(p: &Poly, target: &VarTable) -> Poly {
    let last = p.arity() - 1;
    Poly::from_terms(
        target,
        p.terms().map(|(m, c)| (alloc::vec![m.exponents()[last]], c.clone())),
    )
}

fn univariate_from(
    elim: Option<Vec<Poly>>,
    y_table: &VarTable,
    completeness: Completeness,
    diagnostics: Diagnostics,
) -> Result<UnivariateResult, ValueError> {
    let eliminant = match elim {
        None => Poly::one(y_table),
        Some(gens) => {
            if gens.is_empty() {
                return Err(ValueError::ZeroEliminationIdeal);
            }
            if gens.len() != 1 {
                return Err(ValueError::Internal(alloc::format!(
                    "univariate elimination ideal has {} generators",
                    gens.len()
                )));
            }
            let p = project_last(&gens[0], y_table);
            squarefree_part(&p).map_err(|e| ValueError::Internal(alloc::format!("{e}")))?
        }
    };
    let real_roots = isolate_real_roots(&eliminant).map_err(|e| ValueError::Internal(alloc::format!("{e}")))?;
    let complex_roots =
        approx_complex_roots(&eliminant, COMPLEX_ROOT_TOLERANCE).map_err(|e| ValueError::Internal(alloc::format!("{e}")))?;
    Ok(UnivariateResult {
        eliminant,
        real_roots,
        complex_roots,
        completeness,
        diagnostics,
    })
}

/// Table holding only the image variable.
pub fn image_table() -> VarTable {
    VarTable::new(["y"]).expect("single name")
}

/// Critical values: eliminate `x` from `<df/dx_1, ..., df/dx_n, y - f>`.
pub fn compute_k0(f: &Poly, limits: &ResourceLimits) -> Result<UnivariateResult, ValueError> {
    if f.is_constant() {
        return Err(ValueError::ConstantPolynomial);
    }
    let y = f.vars().fresh_name("y");
    let table = f.vars().extended([y.as_str()])?;
    let fe = f.embed(&table)?;
    let n = f.arity();
    let mut gens: Vec<Poly> = (0..n).map(|i| fe.partial_derivative(i)).collect();
    gens.push(&Poly::var(&table, n) - &fe);
    let mut diag = Diagnostics {
        generators: gens.len(),
        ..Diagnostics::default()
    };
    let elim = eliminate_to_last(&table, gens, 1, Simplify::Variety, limits, &mut diag)?;
    univariate_from(elim, &image_table(), Completeness::Exact, diag)
}

/// Image of `c0` over the system's variety, as a univariate result.
pub fn value_set(sys: &EquationSystem, limits: &ResourceLimits) -> Result<UnivariateResult, ValueError> {
    if sys.c0.len() != 1 {
        return Err(ValueError::Internal("value set needs a scalar c0".into()));
    }
    let arc = sys.shape.vars();
    let table = arc.extended(["y"])?;
    let mut gens: Vec<Poly> = sys.polys().map(|g| g.embed(&table)).collect::<Result<_, _>>()?;
    gens.push(&Poly::var(&table, arc.len()) - &sys.c0[0].embed(&table)?);
    let mut diag = Diagnostics {
        generators: sys.generators.len(),
        ..Diagnostics::default()
    };
    let elim = eliminate_to_last(&table, gens, 1, Simplify::Variety, limits, &mut diag)?;
    univariate_from(elim, &image_table(), Completeness::for_shape(&sys.shape), diag)
}

/// Asymptotic critical values from arcs of `shape`. Over the reals the real
/// roots are candidates for certification.
pub fn compute_kinf(f: &Poly, shape: &ArcShape, limits: &ResourceLimits) -> Result<UnivariateResult, ValueError> {
    let sys = build_system(f, shape, SystemMode::Bv)?;
    value_set(&sys, limits)
}

/// Generalized critical values from arcs of `shape`.
pub fn compute_k(f: &Poly, shape: &ArcShape, limits: &ResourceLimits) -> Result<UnivariateResult, ValueError> {
    let sys = build_system(f, shape, SystemMode::Gbv)?;
    value_set(&sys, limits)
}

/// Elimination ideal describing the non-properness set of a map, in the
/// image variables `y1, ..., ym`.
#[derive(Debug, Clone)]
pub struct NonPropernessIdeal {
    pub ideal: Ideal,
    pub completeness: Completeness,
    pub diagnostics: Diagnostics,
}

impl NonPropernessIdeal {
    /// True when the set is empty.
    pub fn is_unit(&self) -> bool {
        self.ideal.is_trivially_unit()
    }
}

pub fn compute_sf(map: &[Poly], shape: &ArcShape, limits: &ResourceLimits) -> Result<NonPropernessIdeal, ValueError> {
    let sys = build_av_system(map, shape, false)?;
    let m = map.len();
    let names: Vec<String> = (1..=m).map(|l| alloc::format!("y{l}")).collect();
    let y_table = VarTable::new(names.iter().map(String::as_str))?;
    let arc = shape.vars();
    let table = arc.extended(names.iter().map(String::as_str))?;
    let mut gens: Vec<Poly> = sys.polys().map(|g| g.embed(&table)).collect::<Result<_, _>>()?;
    for (l, c) in sys.c0.iter().enumerate() {
        gens.push(&Poly::var(&table, arc.len() + l) - &c.embed(&table)?);
    }
    let mut diag = Diagnostics {
        generators: sys.generators.len(),
        ..Diagnostics::default()
    };
    let elim = eliminate_to_last(&table, gens, m, Simplify::Ideal, limits, &mut diag)?;
    let gens = match elim {
        None => alloc::vec![Poly::one(&y_table)],
        Some(gs) => gs
            .iter()
            .map(|g| {
                Poly::from_terms(
                    &y_table,
                    g.terms().map(|(mono, c)| (mono.exponents()[arc.len()..].to_vec(), c.clone())),
                )
            })
            .collect(),
    };
    Ok(NonPropernessIdeal {
        ideal: Ideal::new(&y_table, gens, OrderKind::GradedRevLex)?,
        completeness: Completeness::for_shape(shape),
        diagnostics: diag,
    })
}

/// Upper bound `(D * prod deg F_i - mu) / min deg F_i` on the degree of the
/// non-properness set of a generically finite map `C^n -> C^n` defined on a
/// variety of degree `variety_degree`, where `mu` is the number of points in
/// a generic fiber.
pub fn sf_degree_bound(degrees: &[u32], variety_degree: u64, mu: u64) -> Option<Rational> {
    let min = *degrees.iter().min()?;
    if min == 0 {
        return None;
    }
    let prod = degrees.iter().try_fold(variety_degree, |acc, &d| acc.checked_mul(u64::from(d)))?;
    let num = i128::from(prod) - i128::from(mu);
    Some(Rational::new(num.into(), i128::from(min).into()))
}

/// The default reduced shape: `D1 = deg f`, `D2 = (deg f - 1) * D1 + 1`.
pub fn heuristic_shape(n: usize, d: u32, field: Field) -> ArcShape {
    let d1 = d;
    let d2 = d.saturating_sub(1).saturating_mul(d1).saturating_add(1);
    ArcShape::new(n, d1, d2, field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, rat, ratio};
    use alloc::string::ToString;
    use alloc::vec;

    fn poly(text: &str, names: &[&str]) -> Poly {
        parse_poly(text, &VarTable::new(names.iter().copied()).unwrap()).unwrap()
    }

    fn lim() -> ResourceLimits {
        ResourceLimits::default()
    }

    #[test]
    fn k0_examples() {
        let r = compute_k0(&poly("x^3 - 3*x", &["x"]), &lim()).unwrap();
        assert_eq!(r.eliminant.to_string(), "y^2 - 4");
        assert_eq!(r.real_roots.len(), 2);
        let r = compute_k0(&poly("x^2 + y^2", &["x", "y"]), &lim()).unwrap();
        assert_eq!(r.eliminant.to_string(), "y");
        let r = compute_k0(&poly("x + x^2*y", &["x", "y"]), &lim()).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.completeness, Completeness::Exact);
        assert!(compute_k0(&poly("3", &["x"]), &lim()).is_err());
    }

    #[test]
    fn broughton_kinf() {
        let f = poly("x + x^2*y", &["x", "y"]);
        let shape = ArcShape::new(2, 1, 1, Field::Complex);
        let r = compute_kinf(&f, &shape, &lim()).unwrap();
        assert_eq!(r.eliminant.to_string(), "y");
        assert_eq!(r.completeness, Completeness::ReducedBoundsSoundOnly);
        let k = compute_k(&f, &shape, &lim()).unwrap();
        assert_eq!(k.eliminant.to_string(), "y");
        let real = compute_kinf(&f, &shape.with_field(Field::Real), &lim()).unwrap();
        assert_eq!(real.eliminant.to_string(), "y");
    }

    #[test]
    fn quintic_complex_values() {
        let f = poly("x*(x^2+1)^2", &["x", "y"]);
        let r = compute_kinf(&f, &ArcShape::new(2, 1, 0, Field::Complex), &lim()).unwrap();
        assert!(r.contains(&rat(0)));
        assert_eq!(r.eliminant.to_string(), "3125*y^3 + 256*y");
        assert_eq!(r.real_roots.len(), 1);
        assert!(!r.contains(&ratio(16, 25)));
    }

    #[test]
    fn linear_has_no_values() {
        let f = poly("x", &["x"]);
        let r = compute_kinf(&f, &ArcShape::new(1, 2, 1, Field::Complex), &lim()).unwrap();
        assert!(r.is_empty());
        assert!(r.real_roots.is_empty() && r.complex_roots.is_empty());
    }

    #[test]
    fn univariate_k_is_k0() {
        let f = poly("x^3 - 3*x", &["x"]);
        let r = compute_k(&f, &ArcShape::new(1, 1, 1, Field::Complex), &lim()).unwrap();
        assert_eq!(r.eliminant.to_string(), "y^2 - 4");
    }

    #[test]
    fn sf_examples() {
        let names = ["x", "y"];
        let map = vec![poly("x", &names), poly("x*y", &names)];
        let s = compute_sf(&map, &ArcShape::new(2, 1, 1, Field::Complex), &lim()).unwrap();
        let gens: Vec<_> = s.ideal.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(gens, vec!["y1"]);
        let proper = vec![poly("x", &names), poly("y", &names)];
        let s = compute_sf(&proper, &ArcShape::new(2, 1, 1, Field::Complex), &lim()).unwrap();
        assert!(s.is_unit());
        assert_eq!(sf_degree_bound(&[1, 2], 1, 1), Some(rat(1)));
    }

    #[test]
    fn presimplify_detects_infeasible() {
        let v = VarTable::new(["a", "b"]).unwrap();
        let p = |t: &str| parse_poly(t, &v).unwrap();
        let gens = vec![p("a - 1"), p("a^2*b - b - a")];
        assert!(presimplify(gens.clone(), &[true, true], Simplify::Ideal).is_none());
        let gens = vec![p("a*b - 1"), p("b^2")];
        assert!(presimplify(gens.clone(), &[true, true], Simplify::Variety).is_none());
        assert_eq!(presimplify(gens, &[true, true], Simplify::Ideal).unwrap().len(), 2);
        // kept variables are never substituted
        let gens = vec![p("b - a^2")];
        assert_eq!(presimplify(gens, &[true, false], Simplify::Ideal).unwrap().len(), 1);
    }
}
