//! Noise-induced photon emission in the mass-proportional CSL model.
//!
//! Rates are photon emission rates per unit photon momentum, `dΓ/dp`, in
//! CGS-Gaussian units (s⁻¹·cm). Multiply by `ħcp` for radiated power.
//!
//! The crate is `no_std` and only needs `alloc`; IO, configuration and the
//! command line live in the `cslrad` companion crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod emitter;
mod error;
pub mod free_electron;
pub mod hydrogen;
pub mod manybody;
pub mod noise;
pub mod quadrature;
pub mod special;
pub mod units;

pub use error::{Error, Result};
