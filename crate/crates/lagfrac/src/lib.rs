//! Fractional integrals (negative powers) of Laguerre-type differential
//! operators: heat and potential kernels for the Hermite-type and
//! convolution-type Laguerre systems, the weighted operator family
//! `u_j (L_{alpha+aj})^{-sigma} (u_j^{-1} .)`, the harmonic-oscillator
//! application in mixed norms, and numerical certificates for the kernel
//! bounds and technical lemmas behind them.
//!
//! Start from the `examples/` directory for runnable tours of each
//! capability, or the `lagfrac` binary for batch sweeps with CSV output.

pub mod error;
pub mod grid;
pub mod ineqlab;
pub mod kernels;
pub mod numeric;
pub mod operators;
pub mod oscillator;
pub mod potential;
pub mod quad;
pub mod report;
pub mod runner;
pub mod specfun;

pub use error::{Error, Result};
pub use numeric::LogVal;
