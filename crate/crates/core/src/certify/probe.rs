//! Numeric probe of the Malgrange condition: on spheres of growing radius,
//! how small can `|x| |grad f(x)|` be while `f(x)` stays near `y`?
//!
//! At radius `r` the admissible level band is `|f(x) - y| <= delta(r)` with
//! `delta(r) = delta_0 + decay * (1 + |y|) / r`. The `1/r` term lets the
//! band shrink to the level itself as `r` grows, which is what sequences
//! realizing an asymptotic critical value do; with `decay = 0` the band has
//! fixed width `delta_0`.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::compiled::WithGradient;
use super::lm::{levenberg_marquardt, Residual};
use crate::poly::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProbeField {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    pub samples_per_radius: usize,
    /// `delta_0`; `None` means `1e-6 * (1 + |y|)`.
    pub level_tolerance: Option<f64>,
    pub level_decay: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub field: ProbeField,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            samples_per_radius: 24,
            level_tolerance: None,
            level_decay: 1.0,
            max_iters: 200,
            seed: 0,
            field: ProbeField::Real,
        }
    }
}

/// Values at or below `ZERO_FLOOR * r` are indistinguishable from zero in
/// double precision and are recorded as `0`.
pub const ZERO_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeTrace {
    /// `(radius, best value)`; `None` when no point of the level band was
    /// found at that radius.
    pub rows: Vec<(f64, Option<f64>)>,
}

impl ProbeTrace {
    /// Running minimum over the rows found so far.
    pub fn running_min(&self) -> Vec<Option<f64>> {
        let mut best: Option<f64> = None;
        self.rows
            .iter()
            .map(|(_, v)| {
                if let Some(v) = v {
                    best = Some(best.map_or(*v, |b: f64| b.min(*v)));
                }
                best
            })
            .collect()
    }
}

struct Level<'a> {
    f: &'a WithGradient,
    y: Complex64,
    radius: f64,
    delta: f64,
    weight: f64,
    complex: bool,
    n: usize,
}

impl Level<'_> {
    fn point(&self, u: &[f64]) -> Vec<Complex64> {
        let norm = libm::sqrt(u.iter().map(|v| v * v).sum::<f64>()).max(f64::MIN_POSITIVE);
        let s = self.radius / norm;
        if self.complex {
            (0..self.n).map(|i| Complex64::new(u[2 * i] * s, u[2 * i + 1] * s)).collect()
        } else {
            u.iter().map(|v| Complex64::new(v * s, 0.0)).collect()
        }
    }

    fn gradient(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut g = alloc::vec![Complex64::new(0.0, 0.0); self.n];
        for (v, d) in &self.f.partials {
            g[*v] = d.eval_complex(x);
        }
        g
    }

    fn gap(&self, x: &[Complex64]) -> f64 {
        (self.f.value.eval_complex(x) - self.y).norm()
    }

    /// `|x| |grad f(x)|` and `|f(x) - y|`.
    fn measure(&self, u: &[f64]) -> (f64, f64) {
        let x = self.point(u);
        let g = libm::sqrt(self.gradient(&x).iter().map(|c| c.norm_sqr()).sum::<f64>());
        (self.radius * g, self.gap(&x))
    }
}

impl Residual for Level<'_> {
    fn dim(&self) -> usize {
        if self.complex {
            2 * self.n
        } else {
            self.n
        }
    }

    fn residual(&self, u: &[f64]) -> Vec<f64> {
        let x = self.point(u);
        let mut out = Vec::with_capacity(2 * self.n + 1);
        for g in self.gradient(&x) {
            out.push(self.radius * g.re);
            if self.complex {
                out.push(self.radius * g.im);
            }
        }
        out.push(self.weight * (self.gap(&x) - self.delta).max(0.0));
        out
    }

    fn jacobian(&self, u: &[f64]) -> DMatrix<f64> {
        let m = self.residual(u).len();
        let d = u.len();
        let mut j = DMatrix::zeros(m, d);
        let mut up = u.to_vec();
        for k in 0..d {
            let h = 1e-7 * u[k].abs().max(1.0);
            up[k] = u[k] + h;
            let plus = self.residual(&up);
            up[k] = u[k] - h;
            let minus = self.residual(&up);
            up[k] = u[k];
            for i in 0..m {
                j[(i, k)] = (plus[i] - minus[i]) / (2.0 * h);
            }
        }
        j
    }
}

/// Probes `f` near the value `y` on each radius of `radii` (increasing).
pub fn malgrange_probe(f: &Poly, y: Complex64, radii: &[f64], cfg: &ProbeConfig) -> ProbeTrace {
    let compiled = WithGradient::new(f);
    let n = f.arity();
    let complex = cfg.field == ProbeField::Complex;
    let dim = if complex { 2 * n } else { n };
    let delta0 = cfg.level_tolerance.unwrap_or(1e-6 * (1.0 + y.norm()));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut carried: Option<Vec<f64>> = None;
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let level = Level {
            f: &compiled,
            y,
            radius: r,
            delta: delta0 + cfg.level_decay * (1.0 + y.norm()) / r,
            weight: 1e3 * (1.0 + r),
            complex,
            n,
        };
        let mut best: Option<(f64, Vec<f64>)> = None;
        let mut starts: Vec<Vec<f64>> = Vec::with_capacity(cfg.samples_per_radius + 1);
        if let Some(c) = carried.take() {
            starts.push(c);
        }
        for _ in 0..cfg.samples_per_radius {
            starts.push((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect());
        }
        for u0 in starts {
            let u = levenberg_marquardt(&level, u0, cfg.max_iters, 0.0);
            let (value, gap) = level.measure(&u);
            if value.is_finite() && gap <= level.delta * (1.0 + 1e-9) && best.as_ref().is_none_or(|(b, _)| value < *b) {
                best = Some((value, u));
            }
        }
        let value = best.as_ref().map(|(v, _)| if *v <= ZERO_FLOOR * r { 0.0 } else { *v });
        carried = best.map(|(_, u)| u);
        rows.push((r, value));
    }
    ProbeTrace { rows }
}
