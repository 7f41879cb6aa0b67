//! Stochastic-geometry analytics and Monte Carlo simulation for wake-up
//! signaling and energy-efficient uplink transmission in cellular IoT
//! networks.
//!
//! Base stations and devices are modeled as independent planar Poisson point
//! processes. BSs occasionally broadcast activation (wake-up) signals; the
//! aggregate received power at a typical device decides whether it wakes up.
//! The crate computes the false/true/total activation probabilities
//! (`activation`), uplink SIR coverage under fractional power control
//! (`uplink`), and validates every analytic expression against an independent
//! Monte Carlo engine (`montecarlo`). The `experiment` module packages the
//! whole thing into reproducible parameter sweeps with CSV output, also
//! exposed through the `cellwake` command line tool.
//!
//! Start with the runnable examples in `examples/` — one per capability.

pub mod activation;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod montecarlo;
pub mod numerics;
pub mod uplink;

pub use activation::{ActivationMethod, ActivationProbabilities, EpsilonEstimate, NetworkParams};
pub use error::{Error, Result};
pub use numerics::{LaplaceSpectrum, ToleranceSpec};
