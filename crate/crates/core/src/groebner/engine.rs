//! Fraction-free Buchberger over permuted exponent vectors.
//!
//! Polynomials are stored with integer coefficients, terms ascending in the
//! active order so the leading term sits at the end of the vector.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{GroebnerError, Limit, OrderKind, ResourceLimits};

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct Mono {
    pub e: Box<[u32]>,
    deg: u32,
    mask: u64,
}

impl Mono {
    pub fn new(e: Box<[u32]>) -> Self {
        let deg = e.iter().sum();
        let mask = e
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .fold(0u64, |m, (i, _)| m | (1 << (i % 64)));
        Self { e, deg, mask }
    }

    fn mul(&self, o: &Self) -> Self {
        Self {
            e: self.e.iter().zip(o.e.iter()).map(|(a, b)| a + b).collect(),
            deg: self.deg + o.deg,
            mask: self.mask | o.mask,
        }
    }

    /// `self / o`, assuming `o` divides `self`.
    fn div(&self, o: &Self) -> Self {
        Self::new(self.e.iter().zip(o.e.iter()).map(|(a, b)| a - b).collect())
    }

    fn lcm(&self, o: &Self) -> Self {
        Self::new(self.e.iter().zip(o.e.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn divides(&self, o: &Self) -> bool {
        self.mask & !o.mask == 0 && self.e.iter().zip(o.e.iter()).all(|(a, b)| a <= b)
    }

    fn coprime(&self, o: &Self) -> bool {
        self.e.iter().zip(o.e.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }
}

fn revlex(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()).rev() {
        match x.cmp(y) {
            Ordering::Equal => {}
            ord => return ord.reverse(),
        }
    }
    Ordering::Equal
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| revlex(a, b))
}

pub(crate) fn compare(kind: OrderKind, a: &Mono, b: &Mono) -> Ordering {
    match kind {
        OrderKind::GradedRevLex => a.deg.cmp(&b.deg).then_with(|| revlex(&a.e, &b.e)),
        OrderKind::Lex => a.e.cmp(&b.e),
        OrderKind::BlockElim(split) => {
            let s = split.min(a.e.len());
            grevlex(&a.e[..s], &b.e[..s]).then_with(|| grevlex(&a.e[s..], &b.e[s..]))
        }
    }
}

pub(crate) type Terms = Vec<(Mono, BigInt)>;

#[derive(Clone, Debug)]
pub(crate) struct IPoly {
    /// Ascending; leading term last.
    pub terms: Terms,
    pub sugar: u32,
}

impl IPoly {
    pub fn lm(&self) -> &Mono {
        &self.terms.last().unwrap().0
    }

    fn lc(&self) -> &BigInt {
        &self.terms.last().unwrap().1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Divides out the content (sign chosen so the leading coefficient is
    /// positive) and returns the divisor.
    pub fn make_primitive(&mut self) -> BigInt {
        let Some(lc) = self.terms.last().map(|t| t.1.clone()) else {
            return BigInt::one();
        };
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if lc.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for t in &mut self.terms {
                t.1 = &t.1 / &g;
            }
        }
        g
    }

    fn max_bits(&self) -> u64 {
        self.terms.iter().map(|t| t.1.bits()).max().unwrap_or(0)
    }
}

/// `a * h - b * q * g`, all ascending.
fn combine(kind: OrderKind, a: &BigInt, h: &[(Mono, BigInt)], b: &BigInt, q: &Mono, g: &[(Mono, BigInt)]) -> Terms {
    let mut out = Vec::with_capacity(h.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let a_one = a.is_one();
    let scaled = |c: &BigInt| if a_one { c.clone() } else { a * c };
    let mut pending: Option<Mono> = None;
    while i < h.len() || j < g.len() {
        let gm = if j < g.len() {
            Some(pending.take().unwrap_or_else(|| g[j].0.mul(q)))
        } else {
            None
        };
        match (h.get(i), gm) {
            (Some(ht), Some(gm)) => match compare(kind, &ht.0, &gm) {
                Ordering::Less => {
                    out.push((ht.0.clone(), scaled(&ht.1)));
                    i += 1;
                    pending = Some(gm);
                }
                Ordering::Greater => {
                    out.push((gm, -(b * &g[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = scaled(&ht.1) - b * &g[j].1;
                    if !c.is_zero() {
                        out.push((gm, c));
                    }
                    i += 1;
                    j += 1;
                }
            },
            (Some(ht), None) => {
                out.push((ht.0.clone(), scaled(&ht.1)));
                i += 1;
            }
            (None, Some(gm)) => {
                out.push((gm, -(b * &g[j].1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn content_of(a: &[(Mono, BigInt)], b: &[(Mono, BigInt)]) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in a.iter().chain(b.iter()) {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Fully reduces `h` modulo `basis` (indices into `polys`). The result is
/// a nonzero integer multiple of the true remainder, made primitive.
pub(crate) fn reduce(kind: OrderKind, h: IPoly, polys: &[IPoly], basis: &[usize]) -> IPoly {
    reduce_tracked(kind, h, polys, basis, None)
}

/// As [`reduce`]; when `factor` is given it is multiplied by `num/den` such
/// that the returned polynomial equals `factor * remainder(h)`.
pub(crate) fn reduce_tracked(
    kind: OrderKind,
    h: IPoly,
    polys: &[IPoly],
    basis: &[usize],
    mut factor: Option<&mut (BigInt, BigInt)>,
) -> IPoly {
    let sugar = h.sugar;
    let mut work = h.terms;
    // reduced part, collected in descending order
    let mut rem: Vec<(Mono, BigInt)> = Vec::new();
    let mut steps = 0u32;
    while let Some((m, c)) = work.pop() {
        let divisor = basis.iter().map(|&i| &polys[i]).find(|g| g.lm().divides(&m));
        match divisor {
            Some(g) => {
                let q = m.div(g.lm());
                let gcd = c.gcd(g.lc());
                let a = g.lc() / &gcd;
                let b = &c / &gcd;
                let glen = g.terms.len();
                work = combine(kind, &a, &work, &b, &q, &g.terms[..glen - 1]);
                if !a.is_one() {
                    for t in &mut rem {
                        t.1 = &a * &t.1;
                    }
                    if let Some(f) = factor.as_deref_mut() {
                        f.0 *= &a;
                    }
                }
                steps += 1;
                if steps.is_multiple_of(16) {
                    let g = content_of(&work, &rem);
                    if !g.is_one() && !g.is_zero() {
                        for t in work.iter_mut().chain(rem.iter_mut()) {
                            t.1 = &t.1 / &g;
                        }
                        if let Some(f) = factor.as_deref_mut() {
                            f.1 *= &g;
                        }
                    }
                }
            }
            None => rem.push((m, c)),
        }
    }
    rem.reverse();
    let mut out = IPoly { terms: rem, sugar };
    let g = out.make_primitive();
    if let Some(f) = factor {
        f.1 *= g;
    }
    out
}

fn s_poly(kind: OrderKind, f: &IPoly, g: &IPoly) -> IPoly {
    let lcm = f.lm().lcm(g.lm());
    let qf = lcm.div(f.lm());
    let qg = lcm.div(g.lm());
    let gcd = f.lc().gcd(g.lc());
    let a = g.lc() / &gcd;
    let b = f.lc() / &gcd;
    let fl = f.terms.len();
    let gl = g.terms.len();
    let left: Terms = f.terms[..fl - 1]
        .iter()
        .map(|(m, c)| (m.mul(&qf), c.clone()))
        .collect();
    let terms = combine(kind, &a, &left, &b, &qg, &g.terms[..gl - 1]);
    let sugar = (f.sugar + qf.deg).max(g.sugar + qg.deg);
    IPoly { terms, sugar }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    sugar: u32,
}

#[derive(Debug, Clone, Default)]
pub struct BuchbergerStats {
    pub pairs_processed: usize,
    pub zero_reductions: usize,
    pub basis_peak: usize,
}

pub(crate) struct Outcome {
    pub basis: Vec<IPoly>,
    pub stats: BuchbergerStats,
}

struct State<'a> {
    kind: OrderKind,
    polys: Vec<IPoly>,
    basis: Vec<usize>,
    pairs: Vec<Pair>,
    limits: &'a ResourceLimits,
    stats: BuchbergerStats,
}

impl State<'_> {
    fn pair(&self, i: usize, j: usize) -> Pair {
        let (pi, pj) = (&self.polys[i], &self.polys[j]);
        let lcm = pi.lm().lcm(pj.lm());
        let sugar = (pi.sugar + lcm.deg - pi.lm().deg).max(pj.sugar + lcm.deg - pj.lm().deg);
        Pair { i, j, lcm, sugar }
    }

    /// Gebauer-Moeller update for a new basis element `h`.
    fn update(&mut self, h: usize) {
        let lh = self.polys[h].lm().clone();
        let candidates: Vec<Pair> = self.basis.iter().map(|&g| self.pair(g, h)).collect();
        let coprime: Vec<bool> = self
            .basis
            .iter()
            .map(|&g| self.polys[g].lm().coprime(&lh))
            .collect();

        // chain criterion among the new pairs
        let mut keep = alloc::vec![true; candidates.len()];
        for a in 0..candidates.len() {
            if coprime[a] {
                continue;
            }
            for b in 0..candidates.len() {
                if a == b || !keep[b] {
                    continue;
                }
                let (la, lb) = (&candidates[a].lcm, &candidates[b].lcm);
                if lb.divides(la) && (lb != la || b < a) {
                    keep[a] = false;
                    break;
                }
            }
        }
        let new_pairs: Vec<Pair> = candidates
            .into_iter()
            .zip(keep.iter().zip(coprime.iter()))
            .filter(|(_, (&k, &c))| k && !c)
            .map(|(p, _)| p)
            .collect();

        let polys = &self.polys;
        self.pairs.retain(|p| {
            !(lh.divides(&p.lcm)
                && polys[p.i].lm().lcm(&lh) != p.lcm
                && polys[p.j].lm().lcm(&lh) != p.lcm)
        });
        self.pairs.extend(new_pairs);
        self.basis.retain(|&g| !lh.divides(polys[g].lm()));
        self.basis.push(h);
        self.stats.basis_peak = self.stats.basis_peak.max(self.basis.len());
    }

    fn select(&mut self) -> Option<Pair> {
        let kind = self.kind;
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, p), (_, q)| {
                p.sugar
                    .cmp(&q.sugar)
                    .then_with(|| compare(kind, &p.lcm, &q.lcm))
                    .then_with(|| (p.i, p.j).cmp(&(q.i, q.j)))
            })
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }

    fn check_limits(&self, h: &IPoly) -> Result<(), GroebnerError> {
        if self.stats.pairs_processed > self.limits.max_pairs {
            return Err(GroebnerError::LimitExceeded(Limit::Pairs));
        }
        if self.basis.len() > self.limits.max_basis_size {
            return Err(GroebnerError::LimitExceeded(Limit::BasisSize));
        }
        if h.max_bits() > self.limits.max_coefficient_bits {
            return Err(GroebnerError::LimitExceeded(Limit::CoefficientBits));
        }
        if self.limits.out_of_time() {
            return Err(GroebnerError::LimitExceeded(Limit::WallClock));
        }
        Ok(())
    }

    fn add(&mut self, h: IPoly) -> Result<bool, GroebnerError> {
        self.check_limits(&h)?;
        let unit = h.lm().is_one();
        self.polys.push(h);
        let idx = self.polys.len() - 1;
        if unit {
            self.basis = alloc::vec![idx];
            self.pairs.clear();
            return Ok(true);
        }
        self.update(idx);
        Ok(false)
    }
}

/// Buchberger with the normal/sugar strategy; returns a reduced basis with
/// primitive integer coefficients, sorted by leading monomial descending.
pub(crate) fn groebner(kind: OrderKind, mut input: Vec<IPoly>, limits: &ResourceLimits) -> Result<Outcome, GroebnerError> {
    input.retain(|p| !p.is_zero());
    input.sort_by(|a, b| compare(kind, a.lm(), b.lm()));
    let mut st = State {
        kind,
        polys: Vec::new(),
        basis: Vec::new(),
        pairs: Vec::new(),
        limits,
        stats: BuchbergerStats::default(),
    };
    for p in input {
        let h = reduce(kind, p, &st.polys, &st.basis);
        if h.is_zero() {
            continue;
        }
        if st.add(h)? {
            break;
        }
    }
    while let Some(pair) = st.select() {
        st.stats.pairs_processed += 1;
        let s = s_poly(kind, &st.polys[pair.i], &st.polys[pair.j]);
        let h = reduce(kind, s, &st.polys, &st.basis);
        if h.is_zero() {
            st.stats.zero_reductions += 1;
            if st.limits.out_of_time() {
                return Err(GroebnerError::LimitExceeded(Limit::WallClock));
            }
            continue;
        }
        if st.add(h)? {
            break;
        }
    }

    // interreduce into the reduced basis
    let mut minimal: Vec<usize> = Vec::new();
    for (k, &g) in st.basis.iter().enumerate() {
        let lg = st.polys[g].lm();
        let redundant = st.basis.iter().enumerate().any(|(l, &o)| {
            l != k && st.polys[o].lm().divides(lg) && (st.polys[o].lm() != lg || l < k)
        });
        if !redundant {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for (k, &g) in minimal.iter().enumerate() {
        let others: Vec<usize> = minimal
            .iter()
            .enumerate()
            .filter(|(l, _)| *l != k)
            .map(|(_, &o)| o)
            .collect();
        // no other leading monomial divides lm(g), so the lead survives
        let reduced = reduce(kind, st.polys[g].clone(), &st.polys, &others);
        out.push(reduced);
    }
    out.sort_by(|a, b| compare(kind, b.lm(), a.lm()));
    Ok(Outcome {
        basis: out,
        stats: st.stats,
    })
}
