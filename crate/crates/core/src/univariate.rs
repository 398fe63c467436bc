//! Univariate tools over Q: squarefree part, Sturm real-root isolation and
//! floating-point complex root approximation.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{Monomial, Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnivariateError {
    #[error("polynomial involves more than one variable")]
    NotUnivariate,
    #[error("zero polynomial has no finite root set")]
    Zero,
}

/// Dense coefficients, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
struct Dense(Vec<Rational>);

impl Dense {
    fn from_poly(p: &Poly, var: Option<usize>) -> Self {
        let deg = var.map_or(0, |v| p.degree_in(v)) as usize;
        let mut c = vec![Rational::zero(); deg + 1];
        for (m, a) in p.terms() {
            let k = var.map_or(0, |v| m.exponents()[v]) as usize;
            c[k] = a.clone();
        }
        let mut d = Self(c);
        d.trim();
        d
    }

    fn to_poly(&self, like: &Poly, var: usize) -> Poly {
        let vars = like.vars();
        let mut out = Poly::zero(vars);
        for (k, a) in self.0.iter().enumerate() {
            if !a.is_zero() {
                let mut e = vec![0u32; vars.len()];
                e[var] = k as u32;
                out = &out + &Poly::monomial(vars, Monomial::new(e), a.clone());
            }
        }
        out
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lc(&self) -> &Rational {
        self.0.last().unwrap()
    }

    fn derivative(&self) -> Self {
        let mut d = Self(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * Rational::from_integer(BigInt::from(k)))
                .collect(),
        );
        d.trim();
        d
    }

    fn monic(&self) -> Self {
        let lc = self.lc().clone();
        Self(self.0.iter().map(|a| a / &lc).collect())
    }

    /// `(quotient, remainder)`; `d` nonzero.
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let mut r = self.0.clone();
        if r.len() < d.0.len() {
            return (Self(Vec::new()), self.clone());
        }
        let dl = d.0.len();
        let mut q = vec![Rational::zero(); r.len() - dl + 1];
        let lc = d.lc();
        for k in (0..q.len()).rev() {
            let c = &r[k + dl - 1] / lc;
            if !c.is_zero() {
                for (i, b) in d.0.iter().enumerate() {
                    r[k + i] -= &c * b;
                }
            }
            q[k] = c;
        }
        r.truncate(dl - 1);
        let mut q = Self(q);
        let mut r = Self(r);
        q.trim();
        r.trim();
        (q, r)
    }

    fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, a| acc * x + a)
    }

    fn sign_at(&self, x: &Rational) -> Ordering {
        self.eval(x).cmp(&Rational::zero())
    }

    /// Content-free integer multiple with positive leading coefficient.
    fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let den = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| num_integer::Integer::gcd(&acc, c));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        Self(ints.into_iter().map(|c| Rational::from_integer(c / &g)).collect())
    }

    fn squarefree(&self) -> Self {
        if self.degree() == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.primitive()
    }

    fn sturm(&self) -> Vec<Self> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(Self(r.0.iter().map(|a| -a).collect()));
        }
        seq
    }

    /// Cauchy bound: every root has absolute value below it.
    fn root_bound(&self) -> Rational {
        let lc = self.lc().abs();
        let m = self.0[..self.0.len() - 1]
            .iter()
            .map(|a| a.abs() / &lc)
            .fold(Rational::zero(), |acc, x| if x > acc { x } else { acc });
        m + Rational::one()
    }

    fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|a| a.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

fn sign_changes(seq: &[Dense], x: &Rational) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s != Ordering::Equal {
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn single_var(p: &Poly) -> Result<Option<usize>, UnivariateError> {
    let s = p.support();
    match s.len() {
        0 => Ok(None),
        1 => Ok(Some(s[0])),
        _ => Err(UnivariateError::NotUnivariate),
    }
}

/// `p / gcd(p, p')`, content-free with positive leading coefficient.
pub fn squarefree_part(p: &Poly) -> Result<Poly, UnivariateError> {
    if p.is_zero() {
        return Err(UnivariateError::Zero);
    }
    match single_var(p)? {
        None => Ok(Poly::one(p.vars())),
        Some(v) => Ok(Dense::from_poly(p, Some(v)).squarefree().to_poly(p, v)),
    }
}

/// A real root inside `(lo, hi)`, or exactly `lo` when `lo == hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealRoot {
    pub lo: Rational,
    pub hi: Rational,
}

impl RealRoot {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn approx(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    /// Whether `x` lies in the closed interval.
    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Isolating intervals for the distinct real roots, in increasing order.
/// Each open interval contains exactly one root and has both endpoints
/// nonzero under `p`.
pub fn isolate_real_roots(p: &Poly) -> Result<Vec<RealRoot>, UnivariateError> {
    if p.is_zero() {
        return Err(UnivariateError::Zero);
    }
    let Some(v) = single_var(p)? else {
        return Ok(Vec::new());
    };
    let d = Dense::from_poly(p, Some(v)).squarefree();
    let seq = d.sturm();
    let m = d.root_bound();
    let lo = -m.clone();
    let total = sign_changes(&seq, &lo) - sign_changes(&seq, &m);
    let mut out = Vec::new();
    isolate(&d, &seq, lo, m, total, &mut out);
    Ok(out)
}

/// Roots in `(lo, hi]`, `count` of them; `p(lo) != 0`.
fn isolate(d: &Dense, seq: &[Dense], lo: Rational, hi: Rational, count: usize, out: &mut Vec<RealRoot>) {
    if count == 0 {
        return;
    }
    if count == 1 {
        if d.sign_at(&hi) == Ordering::Equal {
            out.push(RealRoot { lo: hi.clone(), hi });
        } else {
            out.push(RealRoot { lo, hi });
        }
        return;
    }
    let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
    let vm = sign_changes(seq, &mid);
    let left = sign_changes(seq, &lo) - vm;
    if d.sign_at(&mid) == Ordering::Equal {
        // mid is the last root of the left half; isolate the rest strictly
        // away from it
        let eps = (&hi - &lo) / Rational::from_integer(BigInt::from(1 << 10));
        let mut e = eps;
        while {
            let a = &mid - &e;
            let b = &mid + &e;
            sign_changes(seq, &a) - sign_changes(seq, &b) != 1 || d.sign_at(&a) == Ordering::Equal || d.sign_at(&b) == Ordering::Equal
        } {
            e /= Rational::from_integer(BigInt::from(2));
        }
        let a = &mid - &e;
        let b = &mid + &e;
        let left_rest = sign_changes(seq, &lo) - sign_changes(seq, &a);
        isolate(d, seq, lo, a, left_rest, out);
        out.push(RealRoot { lo: mid.clone(), hi: mid });
        let right_rest = sign_changes(seq, &b) - sign_changes(seq, &hi);
        isolate(d, seq, b, hi, right_rest, out);
        return;
    }
    isolate(d, seq, lo, mid.clone(), left, out);
    isolate(d, seq, mid, hi, count - left, out);
}

/// Shrinks `root` by bisection until its width is at most `width`.
pub fn refine(p: &Poly, root: &RealRoot, width: &Rational) -> Result<RealRoot, UnivariateError> {
    let v = single_var(p)?;
    let d = Dense::from_poly(p, v).squarefree();
    let mut r = root.clone();
    if r.is_exact() {
        return Ok(r);
    }
    let slo = d.sign_at(&r.lo);
    while &r.width() > width {
        let mid = r.midpoint();
        match d.sign_at(&mid) {
            Ordering::Equal => return Ok(RealRoot { lo: mid.clone(), hi: mid }),
            s if s == slo => r.lo = mid,
            _ => r.hi = mid,
        }
    }
    Ok(r)
}

/// Simplest rational (smallest denominator) in `[a, b]`, `a <= b`.
fn simplest_between(a: &Rational, b: &Rational) -> Rational {
    let fl = a.floor();
    if &fl == a {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= b {
        return next;
    }
    let inner = simplest_between(&(b - &fl).recip(), &(a - &fl).recip());
    fl + inner.recip()
}

/// The root in `root` if it is rational.
pub fn exact_rational(p: &Poly, root: &RealRoot) -> Result<Option<Rational>, UnivariateError> {
    if root.is_exact() {
        return Ok(Some(root.lo.clone()));
    }
    let v = single_var(p)?;
    let d = Dense::from_poly(p, v).squarefree();
    // a rational root has denominator dividing the leading coefficient, so
    // once the interval is narrower than 1/(2 lc^2) it is the simplest
    // rational inside
    let lc = d.lc().clone();
    let width = (Rational::from_integer(BigInt::from(2)) * &lc * &lc).recip();
    let r = refine(p, root, &width)?;
    if r.is_exact() {
        return Ok(Some(r.lo));
    }
    let s = simplest_between(&r.lo, &r.hi);
    Ok(d.eval(&s).is_zero().then_some(s))
}

/// Approximate complex root with `residual = |p(z)| / (|p|_1 max(1,|z|)^deg)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexRoot {
    pub re: f64,
    pub im: f64,
    pub residual: f64,
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn scaled_residual(c: &[f64], z: Complex64) -> f64 {
    let norm: f64 = c.iter().map(|a| a.abs()).sum();
    let deg = c.len() as i32 - 1;
    let scale = libm::pow(z.norm().max(1.0), deg as f64);
    horner(c, z).0.norm() / (norm * scale)
}

/// Approximates all roots of the squarefree part by Aberth iteration.
/// Roots whose scaled residual is not below `tol` are still returned; the
/// caller can inspect `residual`.
pub fn approx_complex_roots(p: &Poly, tol: f64) -> Result<Vec<ComplexRoot>, UnivariateError> {
    if p.is_zero() {
        return Err(UnivariateError::Zero);
    }
    let Some(v) = single_var(p)? else {
        return Ok(Vec::new());
    };
    let d = Dense::from_poly(p, Some(v)).squarefree().monic();
    let c = d.to_f64();
    let n = d.degree();
    let radius = d.root_bound().to_f64().unwrap_or(1.0).min(1e12);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * core::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(0.5 * radius, theta)
        })
        .collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (pv, dv) = horner(&c, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    // Newton polish
    for zi in &mut z {
        for _ in 0..3 {
            let (pv, dv) = horner(&c, *zi);
            let step = pv / dv;
            if step.is_finite() && scaled_residual(&c, *zi - step) <= scaled_residual(&c, *zi) {
                *zi -= step;
            } else {
                break;
            }
        }
    }
    let scale_tol = tol.max(0.0);
    let mut out: Vec<ComplexRoot> = z
        .into_iter()
        .map(|zi| {
            let mut r = ComplexRoot {
                re: zi.re,
                im: zi.im,
                residual: scaled_residual(&c, zi),
            };
            if r.im.abs() <= scale_tol * r.re.abs().max(1.0) {
                r.im = 0.0;
            }
            if r.re.abs() <= scale_tol * r.im.abs().max(1.0) {
                r.re = 0.0;
            }
            r
        })
        .collect();
    out.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
    });
    Ok(out)
}

/// Sign of `p` at an exact point.
pub fn sign_at(p: &Poly, x: &Rational) -> Result<Ordering, UnivariateError> {
    let v = single_var(p)?;
    Ok(Dense::from_poly(p, v).sign_at(x))
}
