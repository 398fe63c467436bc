//! Symbolic rational arcs `x(t) = sum_{-D2 <= i <= D1} a_i t^i` and exact
//! composition of polynomials with them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::poly::{Poly, PolyError, Rational, VarTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    Complex,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundSource {
    /// Bidegrees large enough that every value is reached by some arc.
    Paper,
    /// Caller-chosen bidegrees; results are sound but may be incomplete.
    User,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArcError {
    #[error("bound computation overflows for n = {n}, d = {d}")]
    Overflow { n: u32, d: u32 },
    #[error("bounds need n >= 1 and d >= 1 (got n = {n}, d = {d})")]
    InvalidDegree { n: u32, d: u32 },
    #[error("arc coordinate {j} out of range 1..={n}")]
    CoordinateOutOfRange { j: usize, n: usize },
    #[error("polynomial has {got} variables but the arc has {expected} coordinates")]
    ArityMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn checked_pow(base: u64, exp: u32, n: u32, d: u32) -> Result<u64, ArcError> {
    base.checked_pow(exp).ok_or(ArcError::Overflow { n, d })
}

/// `(D1, D2) = (d^(n-1), d^n - d^(n-1) + 1)`, sufficient over the complex
/// numbers.
pub fn paper_bounds_complex(n: u32, d: u32) -> Result<(u64, u64), ArcError> {
    if n == 0 || d == 0 {
        return Err(ArcError::InvalidDegree { n, d });
    }
    let overflow = ArcError::Overflow { n, d };
    let d1 = checked_pow(u64::from(d), n - 1, n, d)?;
    let dn = checked_pow(u64::from(d), n, n, d)?;
    let d2 = (dn - d1).checked_add(1).ok_or(overflow)?;
    Ok((d1, d2))
}

/// `(D1, D2) = ((d+1)^n (d^n+2)^(n-1), (d-1) D1 + 1)`, sufficient over the
/// reals.
pub fn paper_bounds_real(n: u32, d: u32) -> Result<(u64, u64), ArcError> {
    if n == 0 || d == 0 {
        return Err(ArcError::InvalidDegree { n, d });
    }
    let overflow = || ArcError::Overflow { n, d };
    let dn = checked_pow(u64::from(d), n, n, d)?;
    let a = checked_pow(u64::from(d) + 1, n, n, d)?;
    let b = checked_pow(dn.checked_add(2).ok_or_else(overflow)?, n - 1, n, d)?;
    let d1 = a.checked_mul(b).ok_or_else(overflow)?;
    let d2 = (u64::from(d) - 1)
        .checked_mul(d1)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(overflow)?;
    Ok((d1, d2))
}

/// Template for arcs in `n` coordinates with t-exponents in `[-d2, d1]`.
///
/// The unknown coefficient `a_{i,j}` of `t^i` in coordinate `j` is named
/// `a[i][j]`; the table lists them with `i` descending, then `j` ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcShape {
    n: usize,
    d1: u32,
    d2: u32,
    field: Field,
    bounds: BoundSource,
    vars: VarTable,
}

impl ArcShape {
    pub fn new(n: usize, d1: u32, d2: u32, field: Field) -> Self {
        Self::with_source(n, d1, d2, field, BoundSource::User)
    }

    pub fn with_source(n: usize, d1: u32, d2: u32, field: Field, bounds: BoundSource) -> Self {
        let mut names = Vec::with_capacity(n * (d1 + d2 + 1) as usize);
        for i in (-i64::from(d2)..=i64::from(d1)).rev() {
            for j in 1..=n {
                names.push(format!("a[{i}][{j}]"));
            }
        }
        let vars = VarTable::new(names).expect("arc variable names are unique");
        Self {
            n,
            d1,
            d2,
            field,
            bounds,
            vars,
        }
    }

    /// Shape at the paper bounds for a degree-`d` polynomial in `n`
    /// variables, for the given field.
    pub fn paper(n: usize, d: u32, field: Field) -> Result<Self, ArcError> {
        let n32 = u32::try_from(n).map_err(|_| ArcError::Overflow { n: u32::MAX, d })?;
        let (d1, d2) = match field {
            Field::Complex => paper_bounds_complex(n32, d)?,
            Field::Real => paper_bounds_real(n32, d)?,
        };
        let d1 = u32::try_from(d1).map_err(|_| ArcError::Overflow { n: n32, d })?;
        let d2 = u32::try_from(d2).map_err(|_| ArcError::Overflow { n: n32, d })?;
        Ok(Self::with_source(n, d1, d2, field, BoundSource::Paper))
    }

    /// Number of arc variables a paper-bound shape would need, without
    /// building it.
    pub fn paper_variable_count(n: usize, d: u32, field: Field) -> Result<u64, ArcError> {
        let n32 = u32::try_from(n).map_err(|_| ArcError::Overflow { n: u32::MAX, d })?;
        let (d1, d2) = match field {
            Field::Complex => paper_bounds_complex(n32, d)?,
            Field::Real => paper_bounds_real(n32, d)?,
        };
        d1.checked_add(d2)
            .and_then(|s| s.checked_add(1))
            .and_then(|s| s.checked_mul(n as u64))
            .ok_or(ArcError::Overflow { n: n32, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d1(&self) -> u32 {
        self.d1
    }

    pub fn d2(&self) -> u32 {
        self.d2
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn bound_source(&self) -> BoundSource {
        self.bounds
    }

    pub fn with_field(&self, field: Field) -> Self {
        Self {
            field,
            ..self.clone()
        }
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    /// Index of `a_{i,j}` (`j` is 1-based) in the variable table.
    pub fn var_index(&self, i: i64, j: usize) -> Option<usize> {
        if j == 0 || j > self.n || i > i64::from(self.d1) || i < -i64::from(self.d2) {
            return None;
        }
        Some((i64::from(self.d1) - i) as usize * self.n + (j - 1))
    }

    /// Inverse of [`var_index`](Self::var_index): `(i, j)` for a table slot.
    pub fn var_position(&self, index: usize) -> (i64, usize) {
        let row = (index / self.n) as i64;
        (i64::from(self.d1) - row, index % self.n + 1)
    }

    /// Table indices of the coefficients with positive t-exponent.
    pub fn positive_indices(&self) -> impl Iterator<Item = usize> + '_ {
        0..self.d1 as usize * self.n
    }

    /// Arc coordinate `x_j(t)` for 1-based `j`.
    pub fn coordinate(&self, j: usize) -> Result<LaurentSeries, ArcError> {
        arc_coordinate(self, j)
    }

    /// Exact point `x(t)` for concrete coefficient values.
    pub fn point_at(&self, a: &[Rational], t: &Rational) -> Result<Vec<Rational>, ArcError> {
        if a.len() != self.num_vars() {
            return Err(PolyError::ArityMismatch {
                expected: self.num_vars(),
                got: a.len(),
            }
            .into());
        }
        let mut x = alloc::vec![Rational::zero(); self.n];
        for (idx, value) in a.iter().enumerate() {
            let (i, j) = self.var_position(idx);
            x[j - 1] += value * rational_pow(t, i);
        }
        Ok(x)
    }
}

pub(crate) fn rational_pow(t: &Rational, e: i64) -> Rational {
    let base = if e < 0 { t.recip() } else { t.clone() };
    let mut acc = Rational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

/// Laurent polynomial in `t` whose coefficients are polynomials in the arc
/// variables. The key `k` holds the coefficient of `t^k`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    vars: VarTable,
    coeffs: BTreeMap<i64, Poly>,
    lo: i64,
    hi: i64,
}

impl LaurentSeries {
    pub fn zero(vars: &VarTable) -> Self {
        Self {
            vars: vars.clone(),
            coeffs: BTreeMap::new(),
            lo: 0,
            hi: 0,
        }
    }

    pub fn constant(c: Poly) -> Self {
        let mut s = Self::zero(c.vars());
        if !c.is_zero() {
            s.coeffs.insert(0, c);
        }
        s
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    /// Declared support interval `[lo, hi]`.
    pub fn bounds(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `(k, coefficient of t^k)` for every nonzero coefficient, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &Poly)> + '_ {
        self.coeffs.iter().map(|(&k, p)| (k, p))
    }

    /// Coefficient of `t^k`, zero outside the stored support.
    pub fn coefficient_at(&self, k: i64) -> Poly {
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Poly::zero(&self.vars))
    }

    fn insert_add(&mut self, k: i64, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.coeffs.remove(&k) {
            Some(old) => {
                let sum = &old + &p;
                if !sum.is_zero() {
                    self.coeffs.insert(k, sum);
                }
            }
            None => {
                self.coeffs.insert(k, p);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.lo = self.lo.min(other.lo);
        out.hi = self.hi.max(other.hi);
        for (&k, p) in &other.coeffs {
            out.insert_add(k, p.clone());
        }
        out
    }

    /// Convolution product; the declared support adds endpoint-wise.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.vars);
        out.lo = self.lo + other.lo;
        out.hi = self.hi + other.hi;
        for (&ka, pa) in &self.coeffs {
            for (&kb, pb) in &other.coeffs {
                out.insert_add(ka + kb, pa * pb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.vars);
        out.lo = self.lo;
        out.hi = self.hi;
        if !c.is_zero() {
            out.coeffs = self.coeffs.iter().map(|(&k, p)| (k, p.scale(c))).collect();
        }
        out
    }

    /// Exact value at concrete coefficient values `a` and a nonzero `t`.
    pub fn eval(&self, a: &[Rational], t: &Rational) -> Result<Rational, PolyError> {
        let mut acc = Rational::zero();
        for (&k, p) in &self.coeffs {
            acc += p.eval_exact(a)? * rational_pow(t, k);
        }
        Ok(acc)
    }
}

impl core::fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_map()
            .entries(self.coeffs.iter().map(|(k, p)| (k, alloc::string::ToString::to_string(p))))
            .finish()
    }
}

/// `x_j(t) = sum_i a_{i,j} t^i` with support `[-D2, D1]` (`j` is 1-based).
pub fn arc_coordinate(shape: &ArcShape, j: usize) -> Result<LaurentSeries, ArcError> {
    if j == 0 || j > shape.n {
        return Err(ArcError::CoordinateOutOfRange { j, n: shape.n });
    }
    let mut s = LaurentSeries::zero(shape.vars());
    s.lo = -i64::from(shape.d2);
    s.hi = i64::from(shape.d1);
    for i in s.lo..=s.hi {
        let idx = shape.var_index(i, j).unwrap();
        s.coeffs.insert(i, Poly::var(shape.vars(), idx));
    }
    Ok(s)
}

/// Composes `p(x_1, ..., x_n)` with the symbolic arc of `shape`.
///
/// Powers of each coordinate are computed once and reused across terms.
pub fn substitute(p: &Poly, shape: &ArcShape) -> Result<LaurentSeries, ArcError> {
    if p.arity() != shape.n {
        return Err(ArcError::ArityMismatch {
            expected: shape.n,
            got: p.arity(),
        });
    }
    let vars = shape.vars();
    let coords: Vec<LaurentSeries> = (1..=shape.n)
        .map(|j| arc_coordinate(shape, j))
        .collect::<Result<_, _>>()?;
    let one = LaurentSeries::constant(Poly::one(vars));
    let mut powers: Vec<Vec<LaurentSeries>> = coords.iter().map(|_| alloc::vec![one.clone()]).collect();
    for (j, c) in coords.iter().enumerate() {
        for _ in 0..p.degree_in(j) {
            let next = powers[j].last().unwrap().mul(c);
            powers[j].push(next);
        }
    }
    let deg = p.total_degree().max(0);
    let mut out = LaurentSeries::zero(vars);
    out.lo = -deg * i64::from(shape.d2);
    out.hi = deg * i64::from(shape.d1);
    for (m, c) in p.terms() {
        let mut term = one.scale(c);
        for (j, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                term = term.mul(&powers[j][e as usize]);
            }
        }
        for (k, q) in term.coeffs {
            out.insert_add(k, q);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, rat, ratio};
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn complex_bounds() {
        assert_eq!(paper_bounds_complex(2, 3).unwrap(), (3, 7));
        assert_eq!(paper_bounds_complex(2, 5).unwrap(), (5, 21));
        assert_eq!(paper_bounds_complex(1, 1).unwrap(), (1, 1));
        assert!(matches!(paper_bounds_complex(40, 1000), Err(ArcError::Overflow { .. })));
        assert!(paper_bounds_complex(0, 2).is_err());
    }

    #[test]
    fn real_bounds() {
        assert_eq!(paper_bounds_real(2, 2).unwrap(), (54, 55));
        assert_eq!(paper_bounds_real(2, 3).unwrap(), (176, 353));
        assert_eq!(paper_bounds_real(1, 1).unwrap(), (2, 1));
        assert!(matches!(paper_bounds_real(10, 100), Err(ArcError::Overflow { .. })));
    }

    #[test]
    fn variable_table_layout() {
        let s = ArcShape::new(2, 1, 1, Field::Complex);
        assert_eq!(
            s.vars().names(),
            ["a[1][1]", "a[1][2]", "a[0][1]", "a[0][2]", "a[-1][1]", "a[-1][2]"]
        );
        assert_eq!(s.var_index(-1, 2), Some(5));
        assert_eq!(s.var_position(5), (-1, 2));
        assert_eq!(s.var_index(2, 1), None);
        assert_eq!(s.positive_indices().count(), 2);
        assert_eq!(ArcShape::paper_variable_count(2, 3, Field::Real).unwrap(), 2 * 530);
    }

    #[test]
    fn coordinates() {
        let s = ArcShape::new(1, 1, 1, Field::Complex);
        let x = arc_coordinate(&s, 1).unwrap();
        assert_eq!(x.bounds(), (-1, 1));
        assert_eq!(x.coefficient_at(1).to_string(), "a[1][1]");
        assert_eq!(x.coefficient_at(-1).to_string(), "a[-1][1]");
        let s2 = ArcShape::new(2, 1, 0, Field::Complex);
        let y = arc_coordinate(&s2, 2).unwrap();
        assert_eq!(y.iter().count(), 2);
        assert_eq!(y.coefficient_at(0).to_string(), "a[0][2]");
        let s0 = ArcShape::new(1, 0, 0, Field::Complex);
        assert_eq!(arc_coordinate(&s0, 1).unwrap().coefficient_at(0).to_string(), "a[0][1]");
        assert!(matches!(arc_coordinate(&s2, 3), Err(ArcError::CoordinateOutOfRange { .. })));
    }

    #[test]
    fn square_of_arc() {
        let vx = VarTable::new(["x"]).unwrap();
        let s = ArcShape::new(1, 1, 1, Field::Complex);
        let sub = substitute(&parse_poly("x^2", &vx).unwrap(), &s).unwrap();
        let v = s.vars();
        let expect = |k: i64, text: &str| assert_eq!(sub.coefficient_at(k), parse_poly(text, v).unwrap());
        expect(2, "a[1][1]^2");
        expect(1, "2*a[1][1]*a[0][1]");
        expect(0, "a[0][1]^2 + 2*a[1][1]*a[-1][1]");
        expect(-1, "2*a[0][1]*a[-1][1]");
        expect(-2, "a[-1][1]^2");
        assert!(sub.coefficient_at(5).is_zero());
        assert_eq!(sub.bounds(), (-2, 2));
    }

    #[test]
    fn constant_substitution() {
        let vx = VarTable::new(["x", "y"]).unwrap();
        let s = ArcShape::new(2, 2, 3, Field::Real);
        let sub = substitute(&parse_poly("7", &vx).unwrap(), &s).unwrap();
        assert_eq!(sub.iter().count(), 1);
        assert_eq!(sub.coefficient_at(0).constant_value(), Some(rat(7)));
    }

    #[test]
    fn broughton_witness_kills_nonnegative_powers() {
        let vx = VarTable::new(["x", "y"]).unwrap();
        let s = ArcShape::new(2, 1, 1, Field::Complex);
        let f = parse_poly("x + x^2*y", &vx).unwrap();
        let sub = substitute(&f, &s).unwrap();
        let mut a = vec![rat(0); s.num_vars()];
        a[s.var_index(-1, 1).unwrap()] = ratio(-1, 2);
        a[s.var_index(1, 2).unwrap()] = rat(1);
        for (k, c) in sub.iter() {
            let v = c.eval_exact(&a).unwrap();
            if k >= 0 {
                assert_eq!(v, rat(0), "t^{k}");
            }
        }
        // f(x(t)) = -1/(4t)
        assert_eq!(sub.coefficient_at(-1).eval_exact(&a).unwrap(), ratio(-1, 4));
    }

    #[test]
    fn arity_is_checked() {
        let vx = VarTable::new(["x"]).unwrap();
        let s = ArcShape::new(2, 1, 1, Field::Complex);
        assert!(matches!(
            substitute(&Poly::var(&vx, 0), &s),
            Err(ArcError::ArityMismatch { expected: 2, got: 1 })
        ));
    }
}
