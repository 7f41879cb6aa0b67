use crate::error::{Error, Result};

/// Physical-layer and deployment parameters of the network.
///
/// Units: densities in points/m², powers in W, `activation_threshold` in W
/// (configs accept µW and convert), `sir_threshold` unitless.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NetworkParams {
    /// BS density λ_b (BS/m²).
    pub lambda_b: f64,
    /// Device density λ_d (devices/m²).
    pub lambda_d: f64,
    /// BS transmit power P̄ (W).
    pub bs_power: f64,
    /// Device transmit power Q̄ (W).
    pub device_power: f64,
    /// Activation threshold θ_a (W): minimum received power that wakes a device.
    pub activation_threshold: f64,
    /// SIR threshold θ_c for successful uplink decoding.
    pub sir_threshold: f64,
    /// Probability µ that a BS is broadcasting its activation signal.
    pub bs_active_prob: f64,
    /// Probability ρ that a device occupies a given resource block.
    pub rb_prob: f64,
    /// Path-loss exponent α > 2.
    pub path_loss_exp: f64,
    /// Nakagami fading shape m ≥ 0.5 (m = 1 is Rayleigh).
    pub nakagami_m: f64,
    /// Minimum deployment density λ_b^min (BS/m²).
    pub lambda_b_min: f64,
    /// Maximum deployment density λ_b^max (BS/m²).
    pub lambda_b_max: f64,
}

impl NetworkParams {
    /// The built-in reference parameter set at a given BS density, with the
    /// device density expressed as a multiple of it.
    pub fn reference(lambda_b: f64, density_ratio: f64) -> Self {
        Self {
            lambda_b,
            lambda_d: density_ratio * lambda_b,
            bs_power: 20.0,
            device_power: 0.2,
            activation_threshold: 1e-7, // 0.1 µW
            sir_threshold: 1.0,
            bs_active_prob: 0.25,
            rb_prob: 0.01,
            path_loss_exp: 4.0,
            nakagami_m: 1.0,
            lambda_b_min: 5e-6,
            lambda_b_max: 3e-4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lambda_b", self.lambda_b),
            ("lambda_d", self.lambda_d),
            ("bs_power", self.bs_power),
            ("device_power", self.device_power),
            ("activation_threshold", self.activation_threshold),
            ("sir_threshold", self.sir_threshold),
            ("lambda_b_min", self.lambda_b_min),
            ("lambda_b_max", self.lambda_b_max),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.bs_active_prob > 0.0 && self.bs_active_prob < 1.0) {
            return Err(Error::Domain(format!(
                "bs_active_prob must lie in (0, 1), got {}",
                self.bs_active_prob
            )));
        }
        if !(self.rb_prob > 0.0 && self.rb_prob < 1.0) {
            return Err(Error::Domain(format!(
                "rb_prob must lie in (0, 1), got {}",
                self.rb_prob
            )));
        }
        if !(self.path_loss_exp > 2.0) {
            return Err(Error::Domain(format!(
                "path_loss_exp must exceed 2, got {}",
                self.path_loss_exp
            )));
        }
        if !(self.nakagami_m >= 0.5) {
            return Err(Error::Domain(format!(
                "nakagami_m must be >= 0.5, got {}",
                self.nakagami_m
            )));
        }
        if !(self.lambda_b_min <= self.lambda_b && self.lambda_b <= self.lambda_b_max) {
            return Err(Error::Domain(format!(
                "lambda_b = {} outside deployment bounds [{}, {}]",
                self.lambda_b, self.lambda_b_min, self.lambda_b_max
            )));
        }
        Ok(())
    }

    /// Average number of devices per cell, λ_d/λ_b.
    pub fn density_ratio(&self) -> f64 {
        self.lambda_d / self.lambda_b
    }

    /// 2/α, the stable-law index of all interference functionals here.
    pub fn two_over_alpha(&self) -> f64 {
        2.0 / self.path_loss_exp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_set_is_valid() {
        let p = NetworkParams::reference(8e-5, 100.0);
        p.validate().unwrap();
        assert_eq!(p.bs_power, 20.0);
        assert_eq!(p.bs_active_prob, 0.25);
        assert_eq!(p.activation_threshold, 1e-7);
        assert_eq!(p.path_loss_exp, 4.0);
        assert_eq!(p.lambda_d, 8e-3);
    }

    #[test]
    fn bounds_are_enforced() {
        let mut p = NetworkParams::reference(8e-5, 100.0);
        p.lambda_b = 5e-4; // above lambda_b_max
        assert!(p.validate().is_err());
        let mut p = NetworkParams::reference(8e-5, 100.0);
        p.path_loss_exp = 2.0;
        assert!(p.validate().is_err());
        let mut p = NetworkParams::reference(8e-5, 100.0);
        p.bs_active_prob = 1.0;
        assert!(p.validate().is_err());
    }
}
