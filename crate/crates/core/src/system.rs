//! Equation systems on arc coefficients: the bifurcation varieties of a
//! polynomial and the asymptotic varieties of a polynomial map.

use alloc::vec::Vec;
use core::fmt;

use num_traits::One;

use crate::arc::{substitute, ArcError, ArcShape, Field};
use crate::poly::{Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SystemError {
    #[error("the polynomial is constant")]
    ConstantPolynomial,
    #[error("a polynomial map needs at least one component")]
    EmptyMap,
    #[error("{0:?} is not a bifurcation-variety mode")]
    WrongMode(SystemMode),
    #[error("sums of squares are only formed for real systems")]
    NotReal,
    #[error(transparent)]
    Arc(#[from] ArcError),
}

/// The map `(f, df/dx_1, ..., df/dx_n, h_11, ..., h_nn)` with
/// `h_ij = x_i * df/dx_j`.
#[derive(Debug, Clone)]
pub struct PhiMap {
    pub f: Poly,
    pub grads: Vec<Poly>,
    /// `hs[i][j] = x_i * df/dx_j` (0-based).
    pub hs: Vec<Vec<Poly>>,
}

impl PhiMap {
    /// All `1 + n + n^2` components in order.
    pub fn components(&self) -> impl Iterator<Item = &Poly> + '_ {
        core::iter::once(&self.f)
            .chain(self.grads.iter())
            .chain(self.hs.iter().flatten())
    }
}

pub fn build_phi(f: &Poly) -> Result<PhiMap, SystemError> {
    if f.is_constant() {
        return Err(SystemError::ConstantPolynomial);
    }
    let n = f.arity();
    let grads: Vec<Poly> = (0..n).map(|j| f.partial_derivative(j)).collect();
    let hs = (0..n)
        .map(|i| {
            let xi = Poly::var(f.vars(), i);
            grads.iter().map(|g| &xi * g).collect()
        })
        .collect();
    Ok(PhiMap {
        f: f.clone(),
        grads,
        hs,
    })
}

/// Which arc variety a system describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemMode {
    /// Arcs to infinity along which `f` converges and the gradient terms vanish.
    Bv,
    /// As `Bv` without the normalization, so bounded arcs are allowed.
    Gbv,
    /// Arcs to infinity along which a map converges.
    Av,
    /// As `Av` without the normalization.
    Gav,
}

impl SystemMode {
    pub fn is_normalized(self) -> bool {
        matches!(self, Self::Bv | Self::Av)
    }
}

/// Origin of a generator. Indices `i`, `j` are 1-based, `k` is the
/// t-exponent of the coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Coefficient of `t^k` in `f(x(t))`, `k > 0`.
    C { k: i64 },
    /// Coefficient of `t^k` in `df/dx_i (x(t))`, `k >= 0`.
    D { i: usize, k: i64 },
    /// Coefficient of `t^k` in `x_i(t) * df/dx_j (x(t))`, `k >= 0`.
    E { i: usize, j: usize, k: i64 },
    /// Coefficient of `t^k` in component `l` of a map, `k > 0`.
    Map { l: usize, k: i64 },
    /// The normalization forcing some positive-index coefficient to be nonzero.
    Normalization,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::C { k } => write!(f, "c[{k}]"),
            Self::D { i, k } => write!(f, "d[{i}][{k}]"),
            Self::E { i, j, k } => write!(f, "e[{i}][{j}][{k}]"),
            Self::Map { l, k } => write!(f, "F[{l}][{k}]"),
            Self::Normalization => f.write_str("normalization"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub poly: Poly,
    pub family: Family,
}

/// Polynomial equations in the arc variables plus the map `c0` whose image
/// over the solution set is the value set being computed.
#[derive(Debug, Clone)]
pub struct EquationSystem {
    pub shape: ArcShape,
    pub generators: Vec<Generator>,
    /// Constant coefficients; one entry for a polynomial, `m` for a map.
    pub c0: Vec<Poly>,
    pub mode: SystemMode,
}

impl EquationSystem {
    pub fn field(&self) -> Field {
        self.shape.field()
    }

    pub fn polys(&self) -> impl Iterator<Item = &Poly> + '_ {
        self.generators.iter().map(|g| &g.poly)
    }

    pub fn count(&self, pred: impl Fn(&Family) -> bool) -> usize {
        self.generators.iter().filter(|g| pred(&g.family)).count()
    }
}

/// `sum_{i>0, j} a_ij - 1` over the complex numbers, `sum a_ij^2 - 1` over
/// the reals.
pub fn normalization(shape: &ArcShape) -> Poly {
    let vars = shape.vars();
    let mut acc = Poly::constant(vars, -Rational::one());
    for idx in shape.positive_indices() {
        let a = Poly::var(vars, idx);
        acc = match shape.field() {
            Field::Complex => &acc + &a,
            Field::Real => &acc + &(&a * &a),
        };
    }
    acc
}

fn push_range(out: &mut Vec<Generator>, poly: &crate::arc::LaurentSeries, ks: core::ops::RangeInclusive<i64>, family: impl Fn(i64) -> Family) {
    for k in ks {
        let c = poly.coefficient_at(k);
        if !c.is_zero() {
            out.push(Generator {
                poly: c,
                family: family(k),
            });
        }
    }
}

/// Equations of `BV(f)` or `GBV(f)` for arcs of `shape`.
pub fn build_system(f: &Poly, shape: &ArcShape, mode: SystemMode) -> Result<EquationSystem, SystemError> {
    let normalized = match mode {
        SystemMode::Bv => true,
        SystemMode::Gbv => false,
        other => return Err(SystemError::WrongMode(other)),
    };
    let phi = build_phi(f)?;
    let d = f.total_degree();
    let d1 = i64::from(shape.d1());
    let n = f.arity();

    let sf = substitute(&phi.f, shape)?;
    let mut generators = Vec::new();
    push_range(&mut generators, &sf, 1..=d * d1, |k| Family::C { k });
    for (i, g) in phi.grads.iter().enumerate() {
        let s = substitute(g, shape)?;
        push_range(&mut generators, &s, 0..=(d - 1) * d1, |k| Family::D { i: i + 1, k });
    }
    for i in 0..n {
        for j in 0..n {
            let s = substitute(&phi.hs[i][j], shape)?;
            push_range(&mut generators, &s, 0..=d * d1, |k| Family::E {
                i: i + 1,
                j: j + 1,
                k,
            });
        }
    }
    if normalized {
        generators.push(Generator {
            poly: normalization(shape),
            family: Family::Normalization,
        });
    }
    Ok(EquationSystem {
        shape: shape.clone(),
        generators,
        c0: alloc::vec![sf.coefficient_at(0)],
        mode: if normalized { SystemMode::Bv } else { SystemMode::Gbv },
    })
}

/// Equations of `AV(F)` (or `GAV(F)` when `generalized`) for a map `F`.
pub fn build_av_system(map: &[Poly], shape: &ArcShape, generalized: bool) -> Result<EquationSystem, SystemError> {
    if map.is_empty() {
        return Err(SystemError::EmptyMap);
    }
    let d1 = i64::from(shape.d1());
    let mut generators = Vec::new();
    let mut c0 = Vec::with_capacity(map.len());
    for (l, component) in map.iter().enumerate() {
        let s = substitute(component, shape)?;
        let d = component.total_degree().max(0);
        push_range(&mut generators, &s, 1..=d * d1, |k| Family::Map { l: l + 1, k });
        c0.push(s.coefficient_at(0));
    }
    if !generalized {
        generators.push(Generator {
            poly: normalization(shape),
            family: Family::Normalization,
        });
    }
    Ok(EquationSystem {
        shape: shape.clone(),
        generators,
        c0,
        mode: if generalized { SystemMode::Gav } else { SystemMode::Av },
    })
}

/// `G = sum g^2` over all generators of a real system.
pub fn sum_of_squares(sys: &EquationSystem) -> Result<Poly, SystemError> {
    if sys.field() != Field::Real {
        return Err(SystemError::NotReal);
    }
    let mut acc = Poly::zero(sys.shape.vars());
    for g in &sys.generators {
        acc = &acc + &(&g.poly * &g.poly);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, rat, ratio, VarTable};
    use alloc::string::ToString;
    use alloc::vec;

    fn xy() -> VarTable {
        VarTable::new(["x", "y"]).unwrap()
    }

    fn broughton_witness(shape: &ArcShape) -> Vec<Rational> {
        let mut a = vec![rat(0); shape.num_vars()];
        a[shape.var_index(-1, 1).unwrap()] = ratio(-1, 2);
        a[shape.var_index(1, 2).unwrap()] = rat(1);
        a
    }

    #[test]
    fn phi_components() {
        let v = xy();
        let phi = build_phi(&parse_poly("x + x^2*y", &v).unwrap()).unwrap();
        assert_eq!(phi.grads[0], parse_poly("1 + 2*x*y", &v).unwrap());
        assert_eq!(phi.grads[1], parse_poly("x^2", &v).unwrap());
        assert_eq!(phi.hs[0][1], parse_poly("x^3", &v).unwrap());
        assert_eq!(phi.components().count(), 1 + 2 + 4);

        let quintic = build_phi(&parse_poly("x*(x^2+1)^2", &v).unwrap()).unwrap();
        assert_eq!(quintic.grads[0], parse_poly("(x^2+1)*(5*x^2+1)", &v).unwrap());
        assert!(quintic.grads[1].is_zero());

        let vx = VarTable::new(["x"]).unwrap();
        let phi1 = build_phi(&parse_poly("x^2", &vx).unwrap()).unwrap();
        let comps: Vec<_> = phi1.components().map(|p| p.to_string()).collect();
        assert_eq!(comps, ["x^2", "2*x", "2*x^2"]);
        assert!(matches!(build_phi(&parse_poly("3", &vx).unwrap()), Err(SystemError::ConstantPolynomial)));
    }

    #[test]
    fn broughton_witness_solves_bv() {
        let f = parse_poly("x + x^2*y", &xy()).unwrap();
        let shape = ArcShape::new(2, 1, 1, Field::Complex);
        assert_eq!(shape.num_vars(), 6);
        let sys = build_system(&f, &shape, SystemMode::Bv).unwrap();
        let a = broughton_witness(&shape);
        for g in &sys.generators {
            assert_eq!(g.poly.eval_exact(&a).unwrap(), rat(0), "{}", g.family);
        }
        assert_eq!(sys.c0[0].eval_exact(&a).unwrap(), rat(0));
        assert_eq!(sys.count(|f| *f == Family::Normalization), 1);
        assert!(sys.c0[0].total_degree() <= 3);

        let real = build_system(&f, &shape.with_field(Field::Real), SystemMode::Bv).unwrap();
        for g in &real.generators {
            assert_eq!(g.poly.eval_exact(&a).unwrap(), rat(0), "{}", g.family);
        }
    }

    #[test]
    fn linear_polynomial_is_infeasible() {
        let vx = VarTable::new(["x"]).unwrap();
        let sys = build_system(&parse_poly("x", &vx).unwrap(), &ArcShape::new(1, 2, 1, Field::Complex), SystemMode::Bv).unwrap();
        let d0 = sys
            .generators
            .iter()
            .find(|g| g.family == Family::D { i: 1, k: 0 })
            .unwrap();
        assert_eq!(d0.poly.constant_value(), Some(rat(1)));
    }

    #[test]
    fn generator_counts_respect_support() {
        let f = parse_poly("x + x^2*y", &xy()).unwrap();
        let shape = ArcShape::new(2, 2, 3, Field::Complex);
        let sys = build_system(&f, &shape, SystemMode::Bv).unwrap();
        let (d, d1, n) = (3, 2, 2);
        assert!(sys.count(|f| matches!(f, Family::C { .. })) <= d * d1);
        assert!(sys.count(|f| matches!(f, Family::D { .. })) <= n * ((d - 1) * d1 + 1));
        assert!(sys.count(|f| matches!(f, Family::E { .. })) <= n * n * (d * d1 + 1));
        for g in &sys.generators {
            assert!(g.poly.total_degree() <= 3);
        }
        let gbv = build_system(&f, &shape, SystemMode::Gbv).unwrap();
        assert_eq!(gbv.generators.len() + 1, sys.generators.len());
        assert_eq!(gbv.mode, SystemMode::Gbv);
    }

    #[test]
    fn av_system_for_a_non_proper_map() {
        let v = xy();
        let map = [parse_poly("x", &v).unwrap(), parse_poly("x*y", &v).unwrap()];
        let shape = ArcShape::new(2, 1, 1, Field::Complex);
        let sys = build_av_system(&map, &shape, false).unwrap();
        let mut a = vec![rat(0); shape.num_vars()];
        a[shape.var_index(-1, 1).unwrap()] = rat(1);
        a[shape.var_index(1, 2).unwrap()] = rat(1);
        for g in &sys.generators {
            assert_eq!(g.poly.eval_exact(&a).unwrap(), rat(0), "{}", g.family);
        }
        let c0: Vec<_> = sys.c0.iter().map(|p| p.eval_exact(&a).unwrap()).collect();
        assert_eq!(c0, [rat(0), rat(1)]);
        let gav = build_av_system(&map, &shape, true).unwrap();
        assert_eq!(gav.generators.len() + 1, sys.generators.len());
        assert!(matches!(build_av_system(&[], &shape, false), Err(SystemError::EmptyMap)));
    }

    #[test]
    fn proper_univariate_map_forces_top_coefficient() {
        let vx = VarTable::new(["x"]).unwrap();
        let shape = ArcShape::new(1, 1, 1, Field::Complex);
        let sys = build_av_system(&[parse_poly("x", &vx).unwrap()], &shape, false).unwrap();
        let texts: Vec<_> = sys.polys().map(|p| p.to_string()).collect();
        assert_eq!(texts, ["a[1][1]", "a[1][1] - 1"]);
    }

    #[test]
    fn sums_of_squares() {
        let v = xy();
        let shape = ArcShape::new(1, 0, 0, Field::Real);
        let vars = shape.vars();
        let a = Poly::var(vars, 0);
        let sys = EquationSystem {
            shape: shape.clone(),
            generators: vec![
                Generator {
                    poly: &a - &Poly::one(vars),
                    family: Family::C { k: 1 },
                },
                Generator {
                    poly: &a * &a,
                    family: Family::C { k: 2 },
                },
            ],
            c0: vec![Poly::zero(vars)],
            mode: SystemMode::Gbv,
        };
        assert_eq!(sum_of_squares(&sys).unwrap().to_string(), "a[0][1]^4 + a[0][1]^2 - 2*a[0][1] + 1");

        let f = parse_poly("x + x^2*y", &v).unwrap();
        let complex = build_system(&f, &ArcShape::new(2, 1, 1, Field::Complex), SystemMode::Bv).unwrap();
        assert!(matches!(sum_of_squares(&complex), Err(SystemError::NotReal)));
        let shape = ArcShape::new(2, 1, 1, Field::Real);
        let real = build_system(&f, &shape, SystemMode::Bv).unwrap();
        let g = sum_of_squares(&real).unwrap();
        assert_eq!(g.eval_exact(&broughton_witness(&shape)).unwrap(), rat(0));
    }
}
