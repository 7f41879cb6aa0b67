//! Closed-form and semi-analytic activation quantities.
//!
//! The total wake-up power W received by a typical device from a Poisson
//! field of BSs (each broadcasting with probability µ) has the Laplace
//! transform
//!
//!   ℒ_W(s) = exp(−π λ_b µ 𝔍(0, s·P̄)),
//!
//! where 𝔍 is the fading/path-loss interference functional implemented by
//! [`interference_functional`]. Conditioning on the serving BS being idle
//! (interference only, I₁) or active (D₁ + I₁) splits the total activation
//! probability η_a = P[W ≥ θ_a] into the false (q_a) and true (p_a)
//! activation probabilities with η_a = µ·p_a + (1−µ)·q_a.
//!
//! Three evaluation routes are provided, from slowest/most exact to fully
//! closed form:
//!
//! * [`exact_activation_probs`] — numerical inversion of the conditional
//!   transforms themselves;
//! * [`approx_activation_probs`] — the mean-value-theorem approximation with
//!   a constant ε₁ ∈ [0, 1);
//! * [`closed_form_activation_probs`] — erf/erfc forms, exact for η_a, valid
//!   at path-loss exponent 4.
//!
//! The coordinated variants generalize to the K nearest BSs jointly
//! broadcasting under distance-proportional downlink power control.

mod params;

pub use params::NetworkParams;

use crate::error::{Error, Result};
use crate::numerics::laplace::{inverse_laplace_cdf, LaplaceSpectrum};
use crate::numerics::quadrature::{integrate, ToleranceSpec};
use crate::numerics::special::{erfc, gamma, sinc};

/// Evaluation route that produced an [`ActivationProbabilities`] triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActivationMethod {
    /// Numerical inverse Laplace transforms of the conditional processes.
    ExactInversion,
    /// Constant-ε mean-value approximation of the conditional transforms.
    EpsilonApprox,
    /// erf/erfc closed forms at path-loss exponent 4.
    Alpha4Closed,
}

/// The (q_a, p_a, η_a) triple together with the ε and coordination level
/// used to produce it. Invariant: 0 ≤ q_a ≤ p_a ≤ 1 and
/// η_a = µ·p_a + (1−µ)·q_a to 1e-12.
#[derive(Clone, Copy, Debug)]
pub struct ActivationProbabilities {
    pub q_a: f64,
    pub p_a: f64,
    pub eta_a: f64,
    /// Approximation constant used (0 when not applicable).
    pub epsilon: f64,
    /// Number of coordinated BSs (1 = no coordination).
    pub coordination: u32,
    pub method: ActivationMethod,
}

impl ActivationProbabilities {
    fn assemble(
        q_a: f64,
        p_a: f64,
        mu: f64,
        epsilon: f64,
        coordination: u32,
        method: ActivationMethod,
    ) -> Result<Self> {
        let q_a = clamp_probability(q_a, "q_a")?;
        let p_a = clamp_probability(p_a, "p_a")?;
        // recomputing η from the clamped pair keeps the decomposition exact
        let eta_a = mu * p_a + (1.0 - mu) * q_a;
        Ok(Self {
            q_a,
            p_a,
            eta_a,
            epsilon,
            coordination,
            method,
        })
    }

    /// Verify 0 ≤ q ≤ p ≤ 1 and the decomposition identity at `mu`.
    pub fn check(&self, mu: f64) -> Result<()> {
        if !(0.0 <= self.q_a && self.q_a <= self.p_a && self.p_a <= 1.0) {
            return Err(Error::Domain(format!(
                "probability ordering violated: q_a = {}, p_a = {}",
                self.q_a, self.p_a
            )));
        }
        let recomposed = mu * self.p_a + (1.0 - mu) * self.q_a;
        if (recomposed - self.eta_a).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "decomposition violated: eta_a = {}, mu p + (1-mu) q = {recomposed}",
                self.eta_a
            )));
        }
        Ok(())
    }
}

/// A fitted mean-value-theorem constant ε_K.
#[derive(Clone, Debug)]
pub struct EpsilonEstimate {
    pub epsilon: f64,
    pub coordination: u32,
    /// Sum of squared log-transform residuals at the fitted ε.
    pub residual: f64,
    /// The s-grid the fit was performed on.
    pub s_grid: Vec<f64>,
    /// Set when the fit hit the [0, 1) boundary.
    pub boundary: bool,
    /// Set when the objective is flat in ε (µ or K·µ negligible).
    pub degenerate: bool,
}

// per the clamping policy: within 1e-9 of [0,1] is rounding, beyond is a failure
fn clamp_probability(v: f64, what: &str) -> Result<f64> {
    if !v.is_finite() || v < -1e-9 || v > 1.0 + 1e-9 {
        return Err(Error::Accuracy {
            message: format!("{what} = {v} lies outside [0, 1] beyond the clamping tolerance"),
            best: v.clamp(0.0, 1.0),
        });
    }
    Ok(v.clamp(0.0, 1.0))
}

/// Γ(m + 2/α)·Γ(1 − 2/α)/Γ(m), the fading moment coefficient 𝔍(0, 1).
pub fn fading_moment_coefficient(m: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 2.0) {
        return Err(Error::Domain(format!(
            "path-loss exponent must exceed 2, got {alpha}"
        )));
    }
    if !(m >= 0.5) {
        return Err(Error::Domain(format!(
            "Nakagami shape must be >= 0.5, got {m}"
        )));
    }
    let d = 2.0 / alpha;
    Ok(gamma(m + d)? * gamma(1.0 - d)? / gamma(m)?)
}

// Integrand of the truncation term: 1 − (t^{α/2}/(t^{α/2} + 1))^m, the
// probability that a unit-rate Gamma(m) fading gain over exponential noise
// exceeds t^{α/2}. The expm1 form keeps full relative precision where the
// value is small (large t).
fn path_gain_tail(t: f64, m: f64, alpha: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    let ta = t.powf(alpha / 2.0);
    if ta > 1.0 {
        -(-m * (1.0 / ta).ln_1p()).exp_m1()
    } else {
        1.0 - (ta / (ta + 1.0)).powf(m)
    }
}

// ∫₀^a [1 − (1+u)^{−m}] u^{−d−1} du for a ≤ 0.1 via the binomial series:
// Σ_{k≥1} (−1)^{k+1} C(m+k−1, k) a^{k−d}/(k−d). Converges fast and avoids
// the integrable endpoint singularity.
fn tail_head_series(a: f64, m: f64, d: f64) -> f64 {
    let mut coeff = m; // C(m+k-1, k), iteratively
    let mut a_pow = a.powf(1.0 - d);
    let mut sum = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        let term = coeff * a_pow / (kf - d);
        sum += if k % 2 == 1 { term } else { -term };
        if term.abs() < 1e-16 * sum.abs() {
            break;
        }
        coeff *= (m + kf) / (kf + 1.0);
        a_pow *= a;
    }
    sum
}

/// The interference functional 𝔍(x, y): the expected path-gain mass of
/// transmitters whose squared distance exceeds x, at power scale y.
///
///   𝔍(x, y) = y^{2/α}·[ C_m − ∫₀^{y^{−2/α} x} (1 − (t^{α/2}/(t^{α/2}+1))^m) dt ],
///
/// with C_m = Γ(m+2/α)Γ(1−2/α)/Γ(m). It is non-negative, decreasing in x,
/// equals y^{2/α}·C_m at x = 0 and vanishes as x → ∞.
pub fn interference_functional(x: f64, y: f64, m: f64, alpha: f64) -> Result<f64> {
    if !(x >= 0.0) || !(y > 0.0) {
        return Err(Error::Domain(format!(
            "interference functional requires x >= 0 and y > 0, got ({x}, {y})"
        )));
    }
    let coeff = fading_moment_coefficient(m, alpha)?;
    let d = 2.0 / alpha;
    let scale = y.powf(d);
    if x == 0.0 {
        return Ok(scale * coeff);
    }
    let upper = x / scale; // y^{-2/α} x
    if m == 1.0 && alpha == 4.0 {
        // ∫₀^X dt/(1+t²) = atan(X); the tail form keeps precision for large X
        return Ok(scale * (1.0 / upper).atan());
    }
    let tol = ToleranceSpec {
        abs_tol: 1e-13,
        rel_tol: 1e-11,
        max_evals: 60_000,
    };
    if upper <= 4.0 {
        let head = integrate(|t| path_gain_tail(t, m, alpha), 0.0, upper, &tol)?;
        Ok(scale * (coeff - head.value))
    } else {
        // tail form via u = t^{-α/2}: avoids cancellation against C_m. The
        // u^{−d} endpoint singularity is summed as a series below 0.05 and
        // integrated numerically above it.
        let u_hi = upper.powf(-alpha / 2.0);
        let split = u_hi.min(0.05);
        let mut tail = tail_head_series(split, m, d);
        if u_hi > split {
            tail += integrate(
                |u| -(-m * u.ln_1p()).exp_m1() * u.powf(-d - 1.0),
                split,
                u_hi,
                &tol,
            )?
            .value;
        }
        Ok(scale * d * tail)
    }
}

/// Stable-law coefficient of the total wake-up power: ℒ_W(s) = exp(−c·s^{2/α})
/// with c = π λ_b µ C_m E[P^{2/α}]. `beta = 0` is constant BS power P̄.
pub fn wake_power_coefficient(params: &NetworkParams, beta: f64) -> Result<f64> {
    params.validate()?;
    let coeff = fading_moment_coefficient(params.nakagami_m, params.path_loss_exp)?;
    let p_frac = downlink_power_fractional_moment(beta, params)?;
    Ok(std::f64::consts::PI * params.lambda_b * params.bs_active_prob * coeff * p_frac)
}

/// ℒ_W as a stable-form spectrum, ready for numerical inversion.
pub fn wake_power_spectrum(params: &NetworkParams, beta: f64) -> Result<LaplaceSpectrum> {
    LaplaceSpectrum::stable(
        wake_power_coefficient(params, beta)?,
        params.two_over_alpha(),
    )
}

/// ℒ_W(s) = exp(−π λ_b µ 𝔍(0, s·P̄)) for real s > 0.
pub fn laplace_total_power(s: f64, params: &NetworkParams) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("s must be positive, got {s}")));
    }
    params.validate()?;
    let j0 = interference_functional(
        0.0,
        s * params.bs_power,
        params.nakagami_m,
        params.path_loss_exp,
    )?;
    Ok((-std::f64::consts::PI * params.lambda_b * params.bs_active_prob * j0).exp())
}

/// ℒ_{I₁}(s): Laplace transform of the interference seen by a device whose
/// serving BS is idle, marginalized over the serving distance (quadrature).
pub fn laplace_interference_exact(
    s: f64,
    params: &NetworkParams,
    tol: &ToleranceSpec,
) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("s must be positive, got {s}")));
    }
    params.validate()?;
    let pi_lb = std::f64::consts::PI * params.lambda_b;
    let mu = params.bs_active_prob;
    let (m, alpha) = (params.nakagami_m, params.path_loss_exp);
    let y = s * params.bs_power;
    // t = π λ_b x
    let q = integrate(
        |t| {
            let j = interference_functional(t / pi_lb, y, m, alpha)
                .expect("validated parameters inside integrand");
            (-t - pi_lb * mu * j).exp()
        },
        0.0,
        f64::INFINITY,
        tol,
    )?;
    Ok(q.value.min(1.0))
}

/// Constant-ε approximation ℒ_{I₁}(s) ≈ ℒ_W(s)/(1 − µ·ε₁), clamped to ≤ 1.
pub fn laplace_interference_approx(s: f64, params: &NetworkParams, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    Ok((laplace_total_power(s, params)? / (1.0 - params.bs_active_prob * epsilon)).min(1.0))
}

/// ℒ_{D₁+I₁}(s) = [ℒ_W(s) − (1−µ)ℒ_{I₁}(s)]/µ, switching to an expm1 form
/// when µ < 1e-3 to avoid cancellation. Below µ = 1e-9 the difference cannot
/// be resolved at the quadrature tolerance and an accuracy error is raised.
pub fn laplace_desired_plus_interference(
    s: f64,
    params: &NetworkParams,
    tol: &ToleranceSpec,
) -> Result<f64> {
    let mu = params.bs_active_prob;
    let li1 = laplace_interference_exact(s, params, tol)?;
    let value = if mu >= 1e-3 {
        (laplace_total_power(s, params)? - (1.0 - mu) * li1) / mu
    } else if mu >= 1e-9 {
        // a = −ln ℒ_W, b = −ln ℒ_{I₁}; result = ℒ_{I₁}·(1 + expm1(−(a−b))/µ)
        let a = -laplace_total_power(s, params)?.ln();
        let b = -li1.ln();
        li1 * (1.0 + ((-(a - b)).exp_m1()) / mu)
    } else {
        return Err(Error::Accuracy {
            message: format!("mu = {mu} below the 1e-9 cancellation floor"),
            best: li1,
        });
    };
    if !(value > 0.0) {
        return Err(Error::Accuracy {
            message: format!("conditional transform {value} <= 0 (quadrature noise dominates)"),
            best: value.max(0.0),
        });
    }
    Ok(value.min(1.0))
}

/// Laplace transform of I₁ scaled by the serving path loss, E[exp(−I₁‖X₁‖^α/P̄)],
/// evaluated by quadrature. Equals 1/(1 + µ·𝔍(1,1)) and is independent of λ_b.
pub fn laplace_interference_scaled(params: &NetworkParams, tol: &ToleranceSpec) -> Result<f64> {
    params.validate()?;
    let pi_lb = std::f64::consts::PI * params.lambda_b;
    let mu = params.bs_active_prob;
    let (m, alpha) = (params.nakagami_m, params.path_loss_exp);
    let q = integrate(
        |t| {
            let x = t / pi_lb;
            let j = interference_functional(x, x.powf(alpha / 2.0).max(f64::MIN_POSITIVE), m, alpha)
                .expect("validated parameters inside integrand");
            (-t - pi_lb * mu * j).exp()
        },
        0.0,
        f64::INFINITY,
        tol,
    )?;
    Ok(q.value.min(1.0))
}

/// Closed form of the path-loss-scaled conditional transform for Rayleigh
/// fading: (1/µ)·[sinc/(sinc+µ) − (1−µ)/(1+µ𝔍(1,1))] with sinc = sin(2π/α)/(2π/α).
pub fn laplace_desired_plus_interference_scaled(params: &NetworkParams) -> Result<f64> {
    params.validate()?;
    if params.nakagami_m != 1.0 {
        return Err(Error::Domain(
            "the scaled closed form requires Rayleigh fading (m = 1)".into(),
        ));
    }
    let mu = params.bs_active_prob;
    let snc = sinc(params.two_over_alpha());
    let j11 = interference_functional(1.0, 1.0, 1.0, params.path_loss_exp)?;
    Ok((snc / (snc + mu) - (1.0 - mu) / (1.0 + mu * j11)) / mu)
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::Domain(format!(
            "epsilon must lie in [0, 1), got {epsilon}"
        )));
    }
    Ok(())
}

/// P[W ≤ θ_a]: the wake-power CDF at the activation threshold, by numerical
/// inversion of the stable-form spectrum.
fn wake_power_cdf(params: &NetworkParams, beta: f64, tol: &ToleranceSpec) -> Result<f64> {
    inverse_laplace_cdf(
        &wake_power_spectrum(params, beta)?,
        params.activation_threshold,
        tol,
    )
}

/// Activation probabilities by numerical inversion of the exact conditional
/// transforms (no ε approximation).
pub fn exact_activation_probs(
    params: &NetworkParams,
    tol: &ToleranceSpec,
) -> Result<ActivationProbabilities> {
    params.validate()?;
    let mu = params.bs_active_prob;
    let w_cdf = wake_power_cdf(params, 0.0, tol)?;

    // CDF of I₁ at θ_a via the general (real-handle) inversion path
    let p = *params;
    let inner_tol = ToleranceSpec {
        abs_tol: tol.abs_tol * 0.1,
        rel_tol: tol.rel_tol * 0.1,
        max_evals: tol.max_evals,
    };
    let spectrum = LaplaceSpectrum::from_fn(move |s: f64| {
        laplace_interference_exact(s, &p, &inner_tol).expect("validated parameters")
    });
    let i1_cdf = inverse_laplace_cdf(&spectrum, params.activation_threshold, tol)?;

    let q_a = 1.0 - i1_cdf;
    let p_a = 1.0 - w_cdf / mu + (1.0 - mu) / mu * i1_cdf;
    ActivationProbabilities::assemble(q_a, p_a, mu, 0.0, 1, ActivationMethod::ExactInversion)
}

/// Activation probabilities under the constant-ε₁ approximation, any α > 2.
pub fn approx_activation_probs(
    params: &NetworkParams,
    epsilon: f64,
    tol: &ToleranceSpec,
) -> Result<ActivationProbabilities> {
    params.validate()?;
    check_epsilon(epsilon)?;
    let cdf = wake_power_cdf(params, 0.0, tol)?;
    epsilon_family(params, epsilon, 1.0 - cdf, ActivationMethod::EpsilonApprox)
}

/// Closed-form activation probabilities at α = 4: η_a = erf(z) exactly and
/// the ε-approximate q_a, p_a, with z = π^{3/2} λ_b µ Γ(m+1/2) √P̄ / (2√θ_a Γ(m)).
pub fn closed_form_activation_probs(
    params: &NetworkParams,
    epsilon: f64,
) -> Result<ActivationProbabilities> {
    params.validate()?;
    check_epsilon(epsilon)?;
    require_alpha4(params)?;
    let exceed = erfc_exceedance(params, params.bs_power.sqrt())?;
    epsilon_family(params, epsilon, exceed, ActivationMethod::Alpha4Closed)
}

fn require_alpha4(params: &NetworkParams) -> Result<()> {
    if (params.path_loss_exp - 4.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "closed forms require path-loss exponent 4, got {}",
            params.path_loss_exp
        )));
    }
    Ok(())
}

// erfc(π^{3/2} λ_b µ Γ(m+1/2) E[√P] / (2 √θ_a Γ(m))): the exceedance
// probability P[W > θ_a] of the α = 4 stable law.
fn erfc_exceedance(params: &NetworkParams, sqrt_power_moment: f64) -> Result<f64> {
    let m = params.nakagami_m;
    let z = std::f64::consts::PI.powf(1.5)
        * params.lambda_b
        * params.bs_active_prob
        * gamma(m + 0.5)?
        * sqrt_power_moment
        / (2.0 * params.activation_threshold.sqrt() * gamma(m)?);
    Ok(erfc(z))
}

// q = 1 − E/(1−µε), p = 1 − (1−ε)E/(1−µε): the single-BS ε family, whose
// decomposition gives η = 1 − E exactly.
fn epsilon_family(
    params: &NetworkParams,
    epsilon: f64,
    exceedance: f64,
    method: ActivationMethod,
) -> Result<ActivationProbabilities> {
    let mu = params.bs_active_prob;
    let q_a = 1.0 - exceedance / (1.0 - mu * epsilon);
    let p_a = 1.0 - (1.0 - epsilon) * exceedance / (1.0 - mu * epsilon);
    ActivationProbabilities::assemble(q_a, p_a, mu, epsilon, 1, method)
}

/// E[P^{2/α}] under distance-proportional downlink power control with
/// exponent β > −2/α:
///   (P̄ Γ(1+β)^{α/2} / Γ(1+αβ/2))^{2/α} · (λ_b^{min}/λ_b)^β   for β ≥ 0,
/// with λ_b^{max} replacing λ_b^{min} for β < 0. β = 0 gives P̄^{2/α}.
pub fn downlink_power_fractional_moment(beta: f64, params: &NetworkParams) -> Result<f64> {
    let alpha = params.path_loss_exp;
    if !(beta > -2.0 / alpha) {
        return Err(Error::Domain(format!(
            "downlink exponent {beta} must exceed -2/alpha = {}",
            -2.0 / alpha
        )));
    }
    let base = (params.bs_power * gamma(1.0 + beta)?.powf(alpha / 2.0)
        / gamma(1.0 + alpha * beta / 2.0)?)
    .powf(2.0 / alpha);
    let density = if beta >= 0.0 {
        (params.lambda_b_min / params.lambda_b).powf(beta)
    } else {
        (params.lambda_b_max / params.lambda_b).powf(beta)
    };
    Ok(base * density)
}

/// Which coordinated transform to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordinatedTransform {
    /// ℒ_{I_K}: interference from beyond the K coordinated BSs.
    Interference,
    /// ℒ_{D_K+I_K}: total power given the coordinated set is broadcasting.
    DesiredPlusInterference,
    /// ℒ_{W_K}: unconditional total power.
    Total,
}

/// The ε_K approximations of the coordinated transforms:
///   ℒ_{I_K}(s)      ≈ exp(−A)/(1−µε)^K,
///   ℒ_{D_K+I_K}(s)  ≈ [1−(1−µ)ε]^K exp(−A),
///   ℒ_{W_K}(s)      = µ ℒ_{D_K+I_K} + (1−µ) ℒ_{I_K},
/// with A = π λ_b µ 𝔍(0, s) E[P^{2/α}].
pub fn coordinated_laplace(
    s: f64,
    params: &NetworkParams,
    coordination: u32,
    epsilon: f64,
    beta: f64,
    which: CoordinatedTransform,
) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("s must be positive, got {s}")));
    }
    if coordination < 1 {
        return Err(Error::Domain("coordination level must be >= 1".into()));
    }
    params.validate()?;
    check_epsilon(epsilon)?;
    let mu = params.bs_active_prob;
    let k = coordination as i32;
    let base = (-wake_power_coefficient(params, beta)? * s.powf(params.two_over_alpha())).exp();
    let interference = base / (1.0 - mu * epsilon).powi(k);
    let desired = (1.0 - (1.0 - mu) * epsilon).powi(k) * base;
    Ok(match which {
        CoordinatedTransform::Interference => interference.min(1.0),
        CoordinatedTransform::DesiredPlusInterference => desired,
        CoordinatedTransform::Total => (mu * desired + (1.0 - mu) * interference).min(1.0),
    })
}

/// How to evaluate the common exceedance integral of the coordinated family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    /// Numerical inversion of the stable-form spectrum (any α > 2).
    NumericalInversion,
    /// erfc closed form, α = 4 only.
    ClosedFormAlpha4,
}

/// Activation probabilities when the K nearest BSs coordinate under downlink
/// power control with exponent β.
///
/// For K ≥ 2 the prefactors are (1−µε)^{−K} (false), [1−(1−µ)ε]^K (true) and
/// their µ-mixture (total). At K = 1 the triple reduces to the single-BS ε
/// family with E[P^{2/α}] in the erfc argument, so K = 1, β = 0 reproduces
/// [`closed_form_activation_probs`] exactly.
pub fn coordinated_activation_probs(
    params: &NetworkParams,
    coordination: u32,
    epsilon: f64,
    beta: f64,
    method: SolveMethod,
) -> Result<ActivationProbabilities> {
    if coordination < 1 {
        return Err(Error::Domain("coordination level must be >= 1".into()));
    }
    params.validate()?;
    check_epsilon(epsilon)?;
    let exceedance = match method {
        SolveMethod::NumericalInversion => {
            let tol = ToleranceSpec {
                abs_tol: 1e-10,
                rel_tol: 1e-10,
                max_evals: 100_000,
            };
            let cdf = inverse_laplace_cdf(
                &wake_power_spectrum(params, beta)?,
                params.activation_threshold,
                &tol,
            )?;
            1.0 - cdf
        }
        SolveMethod::ClosedFormAlpha4 => {
            require_alpha4(params)?;
            erfc_exceedance(params, downlink_power_fractional_moment(beta, params)?)?
        }
    };
    let mu = params.bs_active_prob;
    if coordination == 1 {
        let mut probs = epsilon_family(params, epsilon, exceedance, method_tag(method))?;
        probs.coordination = 1;
        return Ok(probs);
    }
    let k = coordination as i32;
    let q_a = 1.0 - exceedance / (1.0 - mu * epsilon).powi(k);
    let p_a = 1.0 - (1.0 - (1.0 - mu) * epsilon).powi(k) * exceedance;
    let mut probs =
        ActivationProbabilities::assemble(q_a, p_a, mu, epsilon, coordination, method_tag(method))?;
    probs.coordination = coordination;
    Ok(probs)
}

fn method_tag(method: SolveMethod) -> ActivationMethod {
    match method {
        SolveMethod::NumericalInversion => ActivationMethod::EpsilonApprox,
        SolveMethod::ClosedFormAlpha4 => ActivationMethod::Alpha4Closed,
    }
}

/// True iff [1−(1−µ)ε]^{K−1}·(1−µε)^{K+1} < 1, the condition under which
/// raising ε raises η_a in the coordinated family. Holds on all of
/// µ, ε ∈ (0, 1), K ≥ 1.
pub fn coordination_benefit_check(mu: f64, epsilon: f64, coordination: u32) -> bool {
    let k = coordination as i32;
    (1.0 - (1.0 - mu) * epsilon).powi(k - 1) * (1.0 - mu * epsilon).powi(k + 1) < 1.0
}

/// Activation performance index ζ_a = (1 − η_a)(p_a/q_a − 1). Large values
/// mean the BS wakes its own devices reliably while rarely waking others.
pub fn activation_performance_index(probs: &ActivationProbabilities) -> Result<f64> {
    if probs.q_a == 0.0 {
        return Err(Error::UnboundedIndex);
    }
    Ok((1.0 - probs.eta_a) * (probs.p_a / probs.q_a - 1.0))
}
