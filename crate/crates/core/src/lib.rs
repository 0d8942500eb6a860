//! Option pricing under Heston dynamics with Q-Hawkes, Hawkes or Poisson jumps by
//! Fourier-cosine expansions, with a Monte Carlo oracle.

pub mod cos;
pub mod error;
pub mod experiments;
pub mod hawkes;
pub mod heston;
pub mod impliedvol;
pub mod models;
pub mod montecarlo;
pub mod option;
pub mod qhawkes;

pub use error::{Error, Result};
