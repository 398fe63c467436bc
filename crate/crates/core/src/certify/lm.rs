//! Levenberg-Marquardt and Gauss-Newton steps for small dense systems.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

/// A residual map `R^n -> R^m` with its Jacobian.
pub trait Residual {
    fn dim(&self) -> usize;
    fn residual(&self, x: &[f64]) -> Vec<f64>;
    fn jacobian(&self, x: &[f64]) -> DMatrix<f64>;
}

fn sq(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

/// Minimizes `|R(x)|^2` from `x`. Stops when the largest residual entry is
/// below `stop` or after `max_iters` Jacobian evaluations.
pub fn levenberg_marquardt<R: Residual + ?Sized>(sys: &R, mut x: Vec<f64>, max_iters: usize, stop: f64) -> Vec<f64> {
    let mut r = sys.residual(&x);
    let mut cost = sq(&r);
    let mut lambda = 1e-3;
    for _ in 0..max_iters {
        if !cost.is_finite() || r.iter().all(|v| v.abs() < stop) {
            break;
        }
        let j = sys.jacobian(&x);
        let rv = DVector::from_column_slice(&r);
        let jt = j.transpose();
        let a = &jt * &j;
        let g = &jt * &rv;
        let mut improved = false;
        for _ in 0..30 {
            let mut m = a.clone();
            for i in 0..m.nrows() {
                m[(i, i)] += lambda * (1.0 + a[(i, i)]);
            }
            let Some(ch) = m.cholesky() else {
                lambda *= 4.0;
                continue;
            };
            let step = ch.solve(&(-&g));
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let tr = sys.residual(&trial);
            let tc = sq(&tr);
            if tc.is_finite() && tc < cost {
                x = trial;
                r = tr;
                cost = tc;
                lambda = (lambda / 3.0).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    x
}

/// Minimum-norm Gauss-Newton step `x - J^+ R(x)`.
pub fn gauss_newton_step<R: Residual + ?Sized>(sys: &R, x: &[f64]) -> Vec<f64> {
    let r = DVector::from_vec(sys.residual(x));
    let j = sys.jacobian(x);
    let svd = j.svd(true, true);
    match svd.solve(&(-r), 1e-13) {
        Ok(step) => x.iter().zip(step.iter()).map(|(a, b)| a + b).collect(),
        Err(_) => x.to_vec(),
    }
}
