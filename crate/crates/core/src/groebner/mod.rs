//! Ideals, reduced Gröbner bases and elimination.
//!
//! Bases are returned with primitive integer coefficients and a positive
//! leading coefficient, sorted by leading monomial descending.

mod engine;

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::poly::{Monomial, Poly, PolyError, Rational, VarTable};

use engine::{IPoly, Mono};
pub use engine::BuchbergerStats;

/// Monomial order on the permuted variables; position 0 is the largest
/// variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    GradedRevLex,
    Lex,
    /// Grevlex on positions `..k`, ties broken by grevlex on `k..`.
    BlockElim(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Limit {
    Pairs,
    BasisSize,
    CoefficientBits,
    WallClock,
}

impl Limit {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pairs => "max-pairs",
            Self::BasisSize => "max-basis-size",
            Self::CoefficientBits => "max-coefficient-bits",
            Self::WallClock => "wall-clock-budget",
        }
    }
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroebnerError {
    #[error("resource limit exceeded: {0}")]
    LimitExceeded(Limit),
    #[error("variable order is not a permutation of the table")]
    BadOrder,
    #[error("variable to keep is out of range")]
    BadKeep,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Milliseconds since some fixed start; supplied by the host since the
/// crate has no clock of its own.
pub trait Clock: Send + Sync {
    fn elapsed_ms(&self) -> u64;
}

#[derive(Clone)]
pub struct ResourceLimits {
    pub max_pairs: usize,
    pub max_basis_size: usize,
    pub max_coefficient_bits: u64,
    pub wall_clock_budget_ms: u64,
    /// Without a clock the wall-clock budget is not enforced.
    pub clock: Option<Arc<dyn Clock>>,
}

impl ResourceLimits {
    pub fn out_of_time(&self) -> bool {
        self.clock
            .as_ref()
            .is_some_and(|c| c.elapsed_ms() > self.wall_clock_budget_ms)
    }
}

impl Default for ResourceLimits {
    fn default() -> Self {
        Self {
            max_pairs: 200_000,
            max_basis_size: 20_000,
            max_coefficient_bits: 1 << 20,
            wall_clock_budget_ms: 600_000,
            clock: None,
        }
    }
}

impl fmt::Debug for ResourceLimits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ResourceLimits")
            .field("max_pairs", &self.max_pairs)
            .field("max_basis_size", &self.max_basis_size)
            .field("max_coefficient_bits", &self.max_coefficient_bits)
            .field("wall_clock_budget_ms", &self.wall_clock_budget_ms)
            .field("clock", &self.clock.is_some())
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ideal {
    generators: Vec<Poly>,
    vars: VarTable,
    order: Vec<usize>,
    kind: OrderKind,
}

impl Ideal {
    /// Ideal with the table's own variable order. Zero generators are dropped.
    pub fn new(vars: &VarTable, generators: Vec<Poly>, kind: OrderKind) -> Result<Self, GroebnerError> {
        Self::with_order(vars, generators, (0..vars.len()).collect(), kind)
    }

    /// `order[p]` is the table index of the variable at position `p`.
    pub fn with_order(
        vars: &VarTable,
        generators: Vec<Poly>,
        order: Vec<usize>,
        kind: OrderKind,
    ) -> Result<Self, GroebnerError> {
        let mut seen = alloc::vec![false; vars.len()];
        if order.len() != vars.len() {
            return Err(GroebnerError::BadOrder);
        }
        for &v in &order {
            if v >= vars.len() || seen[v] {
                return Err(GroebnerError::BadOrder);
            }
            seen[v] = true;
        }
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.vars() != vars {
                return Err(PolyError::mismatch(vars, g.vars()).into());
            }
            if !g.is_zero() {
                gens.push(g);
            }
        }
        Ok(Self {
            generators: gens,
            vars: vars.clone(),
            order,
            kind,
        })
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// True when some generator is a nonzero constant.
    pub fn is_trivially_unit(&self) -> bool {
        self.generators.iter().any(Poly::is_constant)
    }

    fn to_ipoly(&self, p: &Poly) -> (IPoly, Rational) {
        to_ipoly(self.kind, &self.order, p)
    }
}

/// Converts to the engine form; returns `(h, s)` with `h = s * p`.
fn to_ipoly(kind: OrderKind, order: &[usize], p: &Poly) -> (IPoly, Rational) {
    let den = p.denominator_lcm();
    let terms = p
        .terms()
        .map(|(m, c)| {
            let e = m.exponents();
            let perm: alloc::boxed::Box<[u32]> = order.iter().map(|&v| e[v]).collect();
            (Mono::new(perm), (c * Rational::from_integer(den.clone())).to_integer())
        })
        .collect();
    let mut h = IPoly {
        terms,
        sugar: 0,
    };
    h.terms.sort_by(|a, b| engine::compare(kind, &a.0, &b.0));
    h.sugar = h.terms.iter().map(|t| t.0.e.iter().sum::<u32>()).max().unwrap_or(0);
    let g = h.make_primitive();
    (h, Rational::new(den, g))
}

fn from_ipoly(vars: &VarTable, order: &[usize], h: &IPoly) -> Poly {
    Poly::from_terms(
        vars,
        h.terms.iter().map(|(m, c)| {
            let mut e = alloc::vec![0u32; vars.len()];
            for (p, &v) in order.iter().enumerate() {
                e[v] = m.e[p];
            }
            (e, Rational::from_integer(c.clone()))
        }),
    )
}

#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    basis: Vec<Poly>,
    engine: Vec<IPoly>,
    vars: VarTable,
    order: Vec<usize>,
    kind: OrderKind,
    stats: BuchbergerStats,
}

impl GroebnerBasis {
    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant()
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn stats(&self) -> &BuchbergerStats {
        &self.stats
    }

    /// The unique remainder of `p` modulo the basis.
    pub fn normal_form(&self, p: &Poly) -> Result<Poly, GroebnerError> {
        if p.vars() != &self.vars {
            return Err(PolyError::mismatch(&self.vars, p.vars()).into());
        }
        if p.is_zero() {
            return Ok(p.clone());
        }
        let (h, s) = to_ipoly(self.kind, &self.order, p);
        let idx: Vec<usize> = (0..self.engine.len()).collect();
        let mut factor = (BigInt::one(), BigInt::one());
        let r = engine::reduce_tracked(self.kind, h, &self.engine, &idx, Some(&mut factor));
        if r.is_zero() {
            return Ok(Poly::zero(&self.vars));
        }
        // r = (num/den) * nf(s * p)
        let back = Rational::new(factor.1, factor.0) / s;
        Ok(from_ipoly(&self.vars, &self.order, &r).scale(&back))
    }

    pub fn contains(&self, p: &Poly) -> Result<bool, GroebnerError> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// S-polynomial of basis elements `i` and `j`, over the rationals.
    pub fn s_polynomial(&self, i: usize, j: usize) -> Poly {
        let (f, g) = (&self.basis[i], &self.basis[j]);
        let (mf, cf) = self.leading(f);
        let (mg, cg) = self.leading(g);
        let lcm: Vec<u32> = mf.iter().zip(mg.iter()).map(|(a, b)| *a.max(b)).collect();
        let qf: Vec<u32> = lcm.iter().zip(mf.iter()).map(|(a, b)| a - b).collect();
        let qg: Vec<u32> = lcm.iter().zip(mg.iter()).map(|(a, b)| a - b).collect();
        let left = f.mul_term(&Monomial::new(qf), &cf.recip());
        let right = g.mul_term(&Monomial::new(qg), &cg.recip());
        &left - &right
    }

    /// Leading exponent vector (table indexing) and coefficient under the
    /// basis order.
    fn leading(&self, p: &Poly) -> (Vec<u32>, Rational) {
        let (h, s) = to_ipoly(self.kind, &self.order, p);
        let (m, c) = h.terms.last().unwrap();
        let mut e = alloc::vec![0u32; self.vars.len()];
        for (pos, &v) in self.order.iter().enumerate() {
            e[v] = m.e[pos];
        }
        (e, Rational::from_integer(c.clone()) / s)
    }

    pub fn into_ideal(self) -> Ideal {
        Ideal {
            generators: self.basis,
            vars: self.vars,
            order: self.order,
            kind: self.kind,
        }
    }
}

pub fn buchberger(ideal: &Ideal, limits: &ResourceLimits) -> Result<GroebnerBasis, GroebnerError> {
    let input: Vec<IPoly> = ideal.generators.iter().map(|g| ideal.to_ipoly(g).0).collect();
    let out = engine::groebner(ideal.kind, input, limits)?;
    let basis = out
        .basis
        .iter()
        .map(|h| from_ipoly(&ideal.vars, &ideal.order, h))
        .collect();
    Ok(GroebnerBasis {
        basis,
        engine: out.basis,
        vars: ideal.vars.clone(),
        order: ideal.order.clone(),
        kind: ideal.kind,
        stats: out.stats,
    })
}

/// Eliminates every variable not in `keep`. The eliminated variables keep
/// their relative order from `ideal` and are placed above the kept ones.
pub fn eliminate(ideal: &Ideal, keep: &[usize], limits: &ResourceLimits) -> Result<Ideal, GroebnerError> {
    let (basis, _) = eliminate_with_stats(ideal, keep, limits)?;
    Ok(basis)
}

/// As [`eliminate`], also returning the statistics of the underlying run.
pub fn eliminate_with_stats(
    ideal: &Ideal,
    keep: &[usize],
    limits: &ResourceLimits,
) -> Result<(Ideal, BuchbergerStats), GroebnerError> {
    let n = ideal.vars.len();
    if keep.iter().any(|&k| k >= n) {
        return Err(GroebnerError::BadKeep);
    }
    let mut kept = alloc::vec![false; n];
    for &k in keep {
        kept[k] = true;
    }
    let mut order: Vec<usize> = ideal.order.iter().copied().filter(|&v| !kept[v]).collect();
    let split = order.len();
    order.extend(ideal.order.iter().copied().filter(|&v| kept[v]));
    let block = Ideal {
        generators: ideal.generators.clone(),
        vars: ideal.vars.clone(),
        order: order.clone(),
        kind: OrderKind::BlockElim(split),
    };
    let gb = buchberger(&block, limits)?;
    let stats = gb.stats.clone();
    let generators = gb
        .basis
        .into_iter()
        .filter(|g| g.support().iter().all(|&v| kept[v]))
        .collect();
    let mut out_order: Vec<usize> = order[split..].to_vec();
    out_order.extend_from_slice(&order[..split]);
    Ok((
        Ideal {
            generators,
            vars: ideal.vars.clone(),
            order: out_order,
            kind: OrderKind::GradedRevLex,
        },
        stats,
    ))
}

impl fmt::Display for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, g) in self.basis.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("}")
    }
}
