//! Critical values, asymptotic critical values and generalized critical
//! values of rational polynomials, computed from spaces of rational arcs.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arc;
pub mod certify;
pub mod groebner;
pub mod poly;
pub mod system;
pub mod univariate;
pub mod values;
