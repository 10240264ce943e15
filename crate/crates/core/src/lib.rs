//! Phase-space quantization of the 2D isotropic harmonic oscillator on a
//! noncommutative phase space, and the Rényi / Tsallis entanglement entropy
//! of its ground state.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod darboux;
pub mod entropy;
pub mod error;
pub mod figures;
pub mod moments;
pub mod params;
pub mod starcalc;
pub mod verify;
pub mod wigner;

pub use error::{Error, Result};
pub use params::{derive, DerivedQuantities, ModelParams};
