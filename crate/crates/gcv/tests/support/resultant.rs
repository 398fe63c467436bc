//! Resultant oracle for critical values, independent of the Gröbner code.
//!
//! Dense univariate polynomials over Q (low degree first), Sylvester
//! determinants by Gaussian elimination, and evaluation/interpolation for the
//! parameters.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn trim(mut p: Vec<Q>) -> Vec<Q> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn eval(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &[Q]) -> Vec<Q> {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect())
}

fn rem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let mut quo = vec![Q::zero(); r.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / b.last().unwrap();
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        quo[shift] = c;
        r = trim(r);
    }
    (trim(quo), r)
}

pub fn monic(p: Vec<Q>) -> Vec<Q> {
    let p = trim(p);
    match p.last().cloned() {
        Some(lc) => p.into_iter().map(|c| c / &lc).collect(),
        None => p,
    }
}

pub fn gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b).1;
        a = b;
        b = r;
    }
    monic(a)
}

/// Monic squarefree part; the zero polynomial stays zero.
pub fn squarefree(p: &[Q]) -> Vec<Q> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return monic(p);
    }
    let g = gcd(&p, &derivative(&p));
    monic(rem(&p, &g).0)
}

pub fn det(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let piv = m[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &piv;
            let (top, rest) = m.split_at_mut(r);
            for (x, p) in rest[0][c..].iter_mut().zip(&top[c][c..]) {
                *x -= &f * p;
            }
        }
    }
    d
}

/// Resultant with formal degrees `da`, `db` (missing top coefficients are
/// zero).
pub fn resultant(a: &[Q], da: usize, b: &[Q], db: usize) -> Q {
    let n = da + db;
    if n == 0 {
        return Q::one();
    }
    let coef = |p: &[Q], i: usize| p.get(i).cloned().unwrap_or_else(Q::zero);
    let mut m = vec![vec![Q::zero(); n]; n];
    for r in 0..db {
        for i in 0..=da {
            m[r][r + i] = coef(a, da - i);
        }
    }
    for r in 0..da {
        for i in 0..=db {
            m[db + r][r + i] = coef(b, db - i);
        }
    }
    det(m)
}

/// Newton interpolation through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[Q], ys: &[Q]) -> Vec<Q> {
    let n = xs.len();
    let mut c = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            c[i] = (&c[i] - &c[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut p = vec![Q::zero(); n];
    for k in (0..n).rev() {
        let mut next = vec![Q::zero(); n];
        for i in 0..n - 1 {
            next[i + 1] += &p[i];
            next[i] -= &xs[k] * &p[i];
        }
        next[0] += &c[k];
        p = next;
    }
    trim(p)
}

/// Monic squarefree generator of the critical values of a univariate `f`.
pub fn univariate_critical_values(f: &[Q]) -> Vec<Q> {
    let f = trim(f.to_vec());
    let d = f.len() - 1;
    let df = derivative(&f);
    let nodes: Vec<Q> = (0..=d as i64).map(q).collect();
    let vals: Vec<Q> = nodes
        .iter()
        .map(|y| {
            let mut g: Vec<Q> = f.iter().map(|c| -c).collect();
            g[0] += y;
            resultant(&df, df.len().saturating_sub(1), &g, d)
        })
        .collect();
    squarefree(&interpolate(&nodes, &vals))
}

/// Bivariate polynomial: `c[i][j]` is the coefficient of `x1^i x2^j`.
pub type Bi = Vec<Vec<Q>>;

fn binomial(n: usize, k: usize) -> Q {
    (0..k).fold(Q::one(), |acc, i| acc * q((n - i) as i64) / q(i as i64 + 1))
}

/// `f(x1 + c*x2, x2)`.
pub fn shear(f: &Bi, c: &Q, deg: usize) -> Bi {
    let mut out = vec![vec![Q::zero(); deg + 1]; deg + 1];
    for (i, row) in f.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for k in 0..=i {
                let t = a * binomial(i, k) * num_traits::pow(c.clone(), i - k);
                out[k][j + i - k] += t;
            }
        }
    }
    out
}

/// Coefficients in `x2` of `g(x1, x2)` at a fixed `x1`.
fn at_x1(g: &Bi, x1: &Q) -> Vec<Q> {
    let w = g.iter().map(Vec::len).max().unwrap_or(0);
    (0..w)
        .map(|j| {
            let col: Vec<Q> = g.iter().map(|r| r.get(j).cloned().unwrap_or_else(Q::zero)).collect();
            eval(&col, x1)
        })
        .collect()
}

fn x2_degree(g: &Bi) -> usize {
    g.iter()
        .flat_map(|r| r.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, _)| j))
        .max()
        .unwrap_or(0)
}

fn d1(f: &Bi) -> Bi {
    f.iter().enumerate().skip(1).map(|(i, r)| r.iter().map(|c| c * q(i as i64)).collect()).collect()
}

fn d2(f: &Bi) -> Bi {
    f.iter().map(|r| r.iter().enumerate().skip(1).map(|(j, c)| c * q(j as i64)).collect()).collect()
}

/// `Res_{x2}(g, y - f)` as a polynomial in `x1` for fixed `y`.
fn res_x2(g: &Bi, f: &Bi, y: &Q, x1_bound: usize) -> Vec<Q> {
    let dg = x2_degree(g);
    let df = x2_degree(f);
    let nodes: Vec<Q> = (0..=x1_bound as i64).map(q).collect();
    let vals: Vec<Q> = nodes
        .iter()
        .map(|x1| {
            let mut h: Vec<Q> = at_x1(f, x1).into_iter().map(|c| -c).collect();
            h[0] += y;
            resultant(&at_x1(g, x1), dg, &h, df)
        })
        .collect();
    interpolate(&nodes, &vals)
}

/// Iterated resultant `Res_{x1}(Res_{x2}(f_1, y - f), Res_{x2}(f_2, y - f))`
/// for total degree `deg`; a multiple of the critical-value polynomial.
fn iterated(f: &Bi, deg: usize) -> Vec<Q> {
    let (g1, g2) = (d1(f), d2(f));
    let bound = deg * deg.saturating_sub(1);
    // Generic x1-degrees, read off at parameters that avoid small integers.
    let probe = [Q::new(BigInt::from(7919), BigInt::from(101)), Q::new(BigInt::from(-104729), BigInt::from(307))];
    let ga = probe.iter().map(|y| trim(res_x2(&g1, f, y, bound)).len()).max().unwrap().saturating_sub(1);
    let gb = probe.iter().map(|y| trim(res_x2(&g2, f, y, bound)).len()).max().unwrap().saturating_sub(1);
    let ybound = bound * bound;
    let nodes: Vec<Q> = (0..=ybound as i64).map(q).collect();
    let vals: Vec<Q> = nodes
        .iter()
        .map(|y| resultant(&res_x2(&g1, f, y, bound), ga, &res_x2(&g2, f, y, bound), gb))
        .collect();
    interpolate(&nodes, &vals)
}

/// Monic squarefree generator of the critical values of a bivariate `f` of
/// total degree `deg` (at least 2): gcd of iterated resultants over several
/// shears, which removes the extraneous factors of any single projection.
pub fn bivariate_critical_values(f: &Bi, deg: usize) -> Vec<Q> {
    let mut acc: Option<Vec<Q>> = None;
    let mut used = 0;
    for c in [3, -5, 7, 11, -13, 17] {
        let c = Q::new(BigInt::from(c), BigInt::from(2));
        let g = shear(f, &c, deg);
        // y - f must have a constant leading coefficient in x2.
        if g[0][deg].is_zero() {
            continue;
        }
        let r = iterated(&g, deg);
        if r.is_empty() {
            continue;
        }
        let s = squarefree(&r);
        acc = Some(match acc {
            None => s,
            Some(a) => gcd(&a, &s),
        });
        used += 1;
        if used == 4 {
            break;
        }
    }
    acc.expect("some shear gives a nonzero resultant")
}
