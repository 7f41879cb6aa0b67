//! Uplink SIR coverage and the fractional power-control laws.
//!
//! An activated device at squared distance ‖X₁‖² from its serving BS
//! transmits with power Q₁ ∝ Q̄·‖X₁‖^{αν}; the matching downlink law scales
//! BS power as P̄·‖X₁‖^{αβ}. Exponent 0 is constant power, 1 is channel
//! inversion, and anything above −2/α keeps the fractional moments finite.
//! Both laws are energy-efficient: the mean transmit power never exceeds the
//! reference power inside the deployment density bounds.
//!
//! Rayleigh uplink coverage under the law reduces to a single composite load
//! number n_a, evaluated here by semi-infinite quadrature with closed forms
//! at ν = 0 (1/(1+n_a)) and ν = 1 (e^{−n_a}).

use crate::activation::{fading_moment_coefficient, NetworkParams};
use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate, ToleranceSpec};
use crate::numerics::special::gamma;

/// Uplink (device) or downlink (BS) side of a power-control law.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkKind {
    Uplink,
    Downlink,
}

/// A fractional power-control law: transmit power scales with the serving
/// distance as reference_power · d^{α·exponent} (suitably normalized).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerControlLaw {
    pub kind: LinkKind,
    pub exponent: f64,
    pub reference_power: f64,
}

impl PowerControlLaw {
    pub fn uplink(exponent: f64, params: &NetworkParams) -> Result<Self> {
        Self::checked(LinkKind::Uplink, exponent, params.device_power, params)
    }

    pub fn downlink(exponent: f64, params: &NetworkParams) -> Result<Self> {
        Self::checked(LinkKind::Downlink, exponent, params.bs_power, params)
    }

    fn checked(
        kind: LinkKind,
        exponent: f64,
        reference_power: f64,
        params: &NetworkParams,
    ) -> Result<Self> {
        if !(exponent > -2.0 / params.path_loss_exp) {
            return Err(Error::Domain(format!(
                "power-control exponent {exponent} must exceed -2/alpha = {}",
                -2.0 / params.path_loss_exp
            )));
        }
        Ok(Self {
            kind,
            exponent,
            reference_power,
        })
    }
}

/// Transmit power of the law at a given serving distance (meters):
///   reference · d^{αe} · (π λ_b^{min})^{αe/2} / Γ(1 + αe/2)   for e ≥ 0,
/// with λ_b^{max} in place of λ_b^{min} for e < 0.
pub fn transmit_power(
    law: &PowerControlLaw,
    nearest_dist: f64,
    params: &NetworkParams,
) -> Result<f64> {
    if !(nearest_dist > 0.0) {
        return Err(Error::Domain(format!(
            "serving distance must be positive, got {nearest_dist}"
        )));
    }
    let alpha = params.path_loss_exp;
    let e = law.exponent;
    if !(e > -2.0 / alpha) {
        return Err(Error::Domain(format!(
            "power-control exponent {e} must exceed -2/alpha"
        )));
    }
    if e == 0.0 {
        return Ok(law.reference_power);
    }
    let density = if e >= 0.0 {
        params.lambda_b_min
    } else {
        params.lambda_b_max
    };
    let half = alpha * e / 2.0;
    Ok(law.reference_power * nearest_dist.powf(alpha * e) / gamma(1.0 + half)?
        * (std::f64::consts::PI * density).powf(half))
}

// E[power] of the law when ‖X₁‖² ~ Exp(π λ_b): the Γ(1+αe/2) normalization
// cancels, leaving reference · (λ_b^{min}/λ_b)^{αe/2} (or the λ_b^{max} branch).
fn mean_power(reference: f64, exponent: f64, params: &NetworkParams) -> Result<f64> {
    let alpha = params.path_loss_exp;
    if !(exponent > -2.0 / alpha) {
        return Err(Error::Domain(format!(
            "power-control exponent {exponent} must exceed -2/alpha"
        )));
    }
    let half = alpha * exponent / 2.0;
    let ratio = if exponent >= 0.0 {
        params.lambda_b_min / params.lambda_b
    } else {
        params.lambda_b_max / params.lambda_b
    };
    Ok(reference * ratio.powf(half))
}

/// Mean device transmit power E[Q] ≤ Q̄ under the uplink law.
pub fn mean_uplink_power(nu: f64, params: &NetworkParams) -> Result<f64> {
    mean_power(params.device_power, nu, params)
}

/// Mean BS transmit power E[P] ≤ P̄ under the downlink law.
pub fn mean_downlink_power(beta: f64, params: &NetworkParams) -> Result<f64> {
    mean_power(params.bs_power, beta, params)
}

/// E[Q^{2/α}] of the uplink law, the moment entering interference statistics.
pub fn uplink_power_fractional_moment(nu: f64, params: &NetworkParams) -> Result<f64> {
    let alpha = params.path_loss_exp;
    if !(nu > -2.0 / alpha) {
        return Err(Error::Domain(format!(
            "uplink exponent {nu} must exceed -2/alpha = {}",
            -2.0 / alpha
        )));
    }
    let base = (params.device_power * gamma(1.0 + nu)?.powf(alpha / 2.0)
        / gamma(1.0 + alpha * nu / 2.0)?)
    .powf(2.0 / alpha);
    let density = if nu >= 0.0 {
        (params.lambda_b_min / params.lambda_b).powf(nu)
    } else {
        (params.lambda_b_max / params.lambda_b).powf(nu)
    };
    Ok(base * density)
}

/// The composite uplink load n_a = (λ_d/λ_b)·ρ·η_a·θ_c^{2/α}·𝔍(0,1), with its
/// factors retained for audit.
#[derive(Clone, Copy, Debug)]
pub struct UplinkLoad {
    pub n_a: f64,
    pub density_ratio: f64,
    pub rb_prob: f64,
    pub eta_a: f64,
    pub sir_threshold_pow: f64,
    pub fading_coeff: f64,
}

impl UplinkLoad {
    /// The product of the retained factors, for the 1e-12 audit invariant.
    pub fn recompute(&self) -> f64 {
        self.density_ratio * self.rb_prob * self.eta_a * self.sir_threshold_pow * self.fading_coeff
    }
}

/// Build the uplink load from network parameters and a total activation
/// probability.
pub fn uplink_load(params: &NetworkParams, eta_a: f64) -> Result<UplinkLoad> {
    params.validate()?;
    if !(eta_a > 0.0 && eta_a <= 1.0) {
        return Err(Error::Domain(format!(
            "eta_a must lie in (0, 1], got {eta_a}"
        )));
    }
    let density_ratio = params.density_ratio();
    let sir_threshold_pow = params.sir_threshold.powf(params.two_over_alpha());
    let fading_coeff = fading_moment_coefficient(params.nakagami_m, params.path_loss_exp)?;
    let n_a = density_ratio * params.rb_prob * eta_a * sir_threshold_pow * fading_coeff;
    Ok(UplinkLoad {
        n_a,
        density_ratio,
        rb_prob: params.rb_prob,
        eta_a,
        sir_threshold_pow,
        fading_coeff,
    })
}

/// Rayleigh uplink coverage under the fractional law:
///   η_c(ν, n_a) = ∫₀^∞ exp(−[n_a Γ(1+ν) u^{1−ν} + u]) du.
/// ν = 0 gives 1/(1+n_a) and ν = 1 gives e^{−n_a}.
pub fn uplink_coverage(nu: f64, n_a: f64, tol: &ToleranceSpec) -> Result<f64> {
    if !(n_a > 0.0) {
        return Err(Error::Domain(format!("n_a must be positive, got {n_a}")));
    }
    if !(nu > -1.0) {
        return Err(Error::Domain(format!(
            "uplink exponent {nu} must exceed -1 for the coverage integral"
        )));
    }
    let g = gamma(1.0 + nu)?;
    let q = integrate(
        |u| (-(n_a * g * u.powf(1.0 - nu) + u)).exp(),
        0.0,
        f64::INFINITY,
        tol,
    )?;
    Ok(q.value.clamp(0.0, 1.0))
}

/// Constant-power Rayleigh coverage λ_b/(λ_b + ρ η_a λ_d θ_c^{2/α} 𝔍(0,1))
/// = 1/(1 + n_a). Requires m = 1.
pub fn uplink_coverage_constant_power(params: &NetworkParams, eta_a: f64) -> Result<f64> {
    require_rayleigh(params)?;
    let load = uplink_load(params, eta_a)?;
    Ok(1.0 / (1.0 + load.n_a))
}

/// Jensen lower bound on the Rayleigh coverage under the ν-law:
/// exp(−n_a·Γ(1+ν)·Γ(2−ν)); tight at ν = 1. Requires m = 1 and ν < 2.
pub fn uplink_coverage_jensen_bound(
    params: &NetworkParams,
    eta_a: f64,
    nu: f64,
) -> Result<f64> {
    require_rayleigh(params)?;
    if !(nu > -2.0 / params.path_loss_exp && nu < 2.0) {
        return Err(Error::Domain(format!(
            "Jensen bound requires -2/alpha < nu < 2, got {nu}"
        )));
    }
    let load = uplink_load(params, eta_a)?;
    Ok((-load.n_a * gamma(1.0 + nu)? * gamma(2.0 - nu)?).exp())
}

fn require_rayleigh(params: &NetworkParams) -> Result<()> {
    if params.nakagami_m != 1.0 {
        return Err(Error::Domain(format!(
            "closed-form uplink coverage requires Rayleigh fading (m = 1), got m = {}",
            params.nakagami_m
        )));
    }
    Ok(())
}

/// Membership test for the beneficial set: ν > −2/α and the ν-law coverage is
/// at least the constant-power coverage (up to quadrature noise `slack`).
pub fn in_beneficial_set(nu: f64, n_a: f64, alpha: f64, slack: Option<f64>) -> Result<bool> {
    if !(nu > -2.0 / alpha) {
        return Ok(false);
    }
    let slack = slack.unwrap_or(1e-9);
    let tol = ToleranceSpec::default();
    let with_law = uplink_coverage(nu, n_a, &tol)?;
    let constant = 1.0 / (1.0 + n_a);
    Ok(with_law >= constant - slack)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn reference() -> NetworkParams {
        NetworkParams::reference(8e-5, 100.0)
    }

    fn tol() -> ToleranceSpec {
        ToleranceSpec::new(1e-12, 1e-11, 200_000).unwrap()
    }

    // completed-square closed form of ∫₀^∞ exp(−a√u − u) du for the ν = 1/2
    // coverage: 1 − (a√π/2)·exp(a²/4)·erfc(a/2)
    fn half_law_coverage(a: f64) -> f64 {
        1.0 - a * std::f64::consts::PI.sqrt() / 2.0
            * (a * a / 4.0).exp()
            * crate::numerics::special::erfc(a / 2.0)
    }

    #[test]
    fn transmit_power_shapes() {
        let p = reference();
        let constant = PowerControlLaw::uplink(0.0, &p).unwrap();
        assert_eq!(transmit_power(&constant, 37.5, &p).unwrap(), p.device_power);

        // channel inversion at α = 4: Q̄ d⁴ (π λ_b^min)² / Γ(3)
        let inversion = PowerControlLaw::uplink(1.0, &p).unwrap();
        let d = 120.0f64;
        let want = p.device_power * d.powi(4) * (std::f64::consts::PI * p.lambda_b_min).powi(2)
            / 2.0;
        assert_relative_eq!(
            transmit_power(&inversion, d, &p).unwrap(),
            want,
            max_relative = 1e-12
        );

        // strictly increasing in distance for positive exponents
        let half = PowerControlLaw::uplink(0.5, &p).unwrap();
        let q1 = transmit_power(&half, 50.0, &p).unwrap();
        let q2 = transmit_power(&half, 80.0, &p).unwrap();
        assert!(q2 > q1);

        assert!(PowerControlLaw::uplink(-0.5, &p).is_err());
    }

    #[test]
    fn mean_powers() {
        let mut p = reference();
        p.lambda_b = 1e-5;
        p.lambda_b_min = 5e-6; // ratio 1/2
        assert_eq!(mean_uplink_power(0.0, &p).unwrap(), p.device_power);
        // ν = 1/2, α = 4: (λ_min/λ_b)^{αν/2} = 0.5
        assert_relative_eq!(
            mean_uplink_power(0.5, &p).unwrap(),
            0.5 * p.device_power,
            max_relative = 1e-12
        );
        // ν = −1/4 with λ_b/λ_max = 1/2: (λ_b/λ_max)^{−να/2} = 0.5^{1/2}
        let mut q = reference();
        q.lambda_b = 1.5e-4;
        q.lambda_b_max = 3e-4;
        assert_relative_eq!(
            mean_uplink_power(-0.25, &q).unwrap(),
            q.device_power * 0.5f64.sqrt(),
            max_relative = 1e-12
        );
        assert_eq!(mean_downlink_power(0.0, &q).unwrap(), q.bs_power);
        assert_relative_eq!(
            mean_downlink_power(0.5, &p).unwrap(),
            0.5 * p.bs_power,
            max_relative = 1e-12
        );
    }

    #[test]
    fn load_composition() {
        // ratio 100, ρ = 0.01, η = 1, θ_c = 1, m = 1, α = 4: n_a = π/2
        let mut p = reference();
        p.rb_prob = 0.01;
        let load = uplink_load(&p, 1.0).unwrap();
        assert_relative_eq!(load.n_a, std::f64::consts::FRAC_PI_2, max_relative = 1e-12);
        assert!((load.n_a - load.recompute()).abs() <= 1e-12 * load.n_a);
        // linear in ρ
        let mut p2 = p;
        p2.rb_prob = 0.02;
        assert_relative_eq!(
            uplink_load(&p2, 1.0).unwrap().n_a,
            2.0 * load.n_a,
            max_relative = 1e-12
        );
        // vanishes with η_a
        assert!(uplink_load(&p, 1e-12).unwrap().n_a < 1e-11);
    }

    #[test]
    fn coverage_closed_forms() {
        let t = tol();
        assert_relative_eq!(
            uplink_coverage(0.0, 1.0, &t).unwrap(),
            0.5,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            uplink_coverage(1.0, 1.0, &t).unwrap(),
            (-1.0f64).exp(),
            max_relative = 1e-10
        );
        // ν = 1/2 at n_a = π/2, against the completed-square oracle
        let got = uplink_coverage(0.5, std::f64::consts::FRAC_PI_2, &t).unwrap();
        assert_relative_eq!(got, 0.349_239_590_504_961_4, max_relative = 1e-9);
        assert_relative_eq!(
            got,
            half_law_coverage(std::f64::consts::FRAC_PI_2 * 0.886_226_925_452_758),
            max_relative = 1e-9
        );
    }

    #[test]
    fn constant_power_identities() {
        let p = reference(); // m = 1
        let eta = 0.43;
        let closed = uplink_coverage_constant_power(&p, eta).unwrap();
        let load = uplink_load(&p, eta).unwrap();
        assert_relative_eq!(closed, 1.0 / (1.0 + load.n_a), max_relative = 1e-14);
        // consistency with the quadrature at ν = 0
        let quad = uplink_coverage(0.0, load.n_a, &tol()).unwrap();
        assert!((closed - quad).abs() <= 1e-10);
        // η_a → 0⁺: coverage → 1
        assert!(uplink_coverage_constant_power(&p, 1e-12).unwrap() > 1.0 - 1e-9);
        let mut m4 = p;
        m4.nakagami_m = 4.0;
        assert!(uplink_coverage_constant_power(&m4, eta).is_err());
    }

    #[test]
    fn jensen_bound_cases() {
        let p = reference();
        let eta = 0.5;
        let load = uplink_load(&p, eta).unwrap();
        // ν = 0: bound is exp(−n_a) ≤ 1/(1+n_a)
        let b0 = uplink_coverage_jensen_bound(&p, eta, 0.0).unwrap();
        assert_relative_eq!(b0, (-load.n_a).exp(), max_relative = 1e-12);
        assert!(b0 <= 1.0 / (1.0 + load.n_a));
        // n_a → 0: bound → 1
        assert!(uplink_coverage_jensen_bound(&p, 1e-9, 0.5).unwrap() > 1.0 - 1e-6);
        // never exceeds the quadrature coverage
        let t = tol();
        for &nu in &[-0.25, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5] {
            let bound = uplink_coverage_jensen_bound(&p, eta, nu).unwrap();
            let exact = uplink_coverage(nu, load.n_a, &t).unwrap();
            assert!(
                bound <= exact + 1e-9,
                "bound {bound} above coverage {exact} at nu={nu}"
            );
        }
        // tight at channel inversion
        let b1 = uplink_coverage_jensen_bound(&p, eta, 1.0).unwrap();
        let e1 = uplink_coverage(1.0, load.n_a, &t).unwrap();
        assert_relative_eq!(b1, e1, max_relative = 1e-9);
    }

    #[test]
    fn beneficial_set_membership() {
        // ν = 0 is always a member (self-comparison)
        assert!(in_beneficial_set(0.0, 0.7, 4.0, None).unwrap());
        // channel inversion at n_a = 1: e^{-1} < 1/2
        assert!(!in_beneficial_set(1.0, 1.0, 4.0, None).unwrap());
        // a strict member with ν > 0: quadrature 0.689 vs constant 2/3
        assert!(in_beneficial_set(0.5, 0.5, 4.0, None).unwrap());
        // exponents at or below −2/α are excluded outright
        assert!(!in_beneficial_set(-0.5, 0.5, 4.0, None).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn coverage_is_probability_and_decreasing_in_load(
            nu in -0.4f64..1.5,
            n_a in 0.01f64..20.0,
        ) {
            let t = ToleranceSpec::default();
            let c = uplink_coverage(nu, n_a, &t).unwrap();
            prop_assert!(c > 0.0 && c < 1.0);
            let c2 = uplink_coverage(nu, n_a * 1.3, &t).unwrap();
            prop_assert!(c2 < c + 1e-12);
        }

        #[test]
        fn mean_power_never_exceeds_reference(
            lambda_b in 1e-5f64..1.5e-4,
            exp in -0.45f64..2.0,
        ) {
            let p = NetworkParams::reference(lambda_b, 100.0);
            let mean = mean_uplink_power(exp, &p).unwrap();
            prop_assert!(mean <= p.device_power * (1.0 + 1e-12));
            if exp == 0.0 {
                prop_assert!((mean - p.device_power).abs() < 1e-15);
            }
        }
    }
}
