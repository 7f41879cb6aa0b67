//! Special functions, adaptive quadrature and numerical Laplace inversion.

pub mod laplace;
pub mod quadrature;
pub mod special;

pub use laplace::{inverse_laplace_cdf, stable_cdf_series, LaplaceSpectrum, StableForm};
pub use quadrature::{integrate, Quadrature, ToleranceSpec};
pub use special::{erf, erfc, gamma, ln_gamma, sinc};
