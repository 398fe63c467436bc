//! Floating-point evaluation of exact polynomials.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::poly::Poly;

#[derive(Debug, Clone)]
pub struct Compiled {
    terms: Vec<(f64, Vec<(usize, u32)>)>,
}

impl Compiled {
    pub fn new(p: &Poly) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| {
                let factors = m
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| (v, e))
                    .collect();
                (c.to_f64().unwrap_or(f64::NAN), factors)
            })
            .collect();
        Self { terms }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, fs)| fs.iter().fold(*c, |acc, &(v, e)| acc * libm::pow(x[v], f64::from(e))))
            .sum()
    }

    pub fn eval_complex(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, fs)| {
                fs.iter()
                    .fold(Complex64::new(*c, 0.0), |acc, &(v, e)| acc * z[v].powu(e))
            })
            .sum()
    }
}

/// A polynomial together with its nonzero partial derivatives.
#[derive(Debug, Clone)]
pub struct WithGradient {
    pub value: Compiled,
    pub partials: Vec<(usize, Compiled)>,
}

impl WithGradient {
    pub fn new(p: &Poly) -> Self {
        let partials = p
            .support()
            .into_iter()
            .map(|v| (v, Compiled::new(&p.partial_derivative(v))))
            .collect();
        Self {
            value: Compiled::new(p),
            partials,
        }
    }
}
