//! Independent Monte Carlo oracle for the activation and uplink analytics.
//!
//! Snapshots are drawn in squared-distance space: the squared distances of a
//! planar PPP from the origin form a rate-πλ 1-D Poisson process, so ordered
//! serving distances are cumulative exponential increments and the far field
//! beyond them is a uniform Poisson scatter. Bernoulli thinning of the
//! interferers (only broadcasting BSs contribute) is folded into the field
//! density. Windows are sized so the omitted far-field mean interference
//! stays below the configured fraction of the relevant power scale.
//!
//! Determinism contract: trials are partitioned into fixed-size chunks; chunk
//! i draws from a counter-based substream derived from (master_seed, i), and
//! chunk results are reduced in index order. Estimates are therefore
//! bit-identical for a given (config, parameters) regardless of worker count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Gamma, Poisson};
use rayon::prelude::*;

use crate::activation::{wake_power_coefficient, EpsilonEstimate, NetworkParams};
use crate::error::{Error, Result};
use crate::geometry::WindowSpec;
use crate::uplink::{
    mean_downlink_power, mean_uplink_power, uplink_load, uplink_power_fractional_moment,
};

const CHUNK: u64 = 1024;

/// Monte Carlo run configuration.
#[derive(Clone, Copy, Debug)]
pub struct McConfig {
    pub trials: u64,
    pub master_seed: u64,
    pub window: WindowSpec,
    /// Confidence level for intervals; 0.9, 0.95 and 0.99 are supported.
    pub confidence: f64,
    /// Worker thread count; 0 uses the global pool. Results do not depend on it.
    pub workers: usize,
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 100 {
            return Err(Error::Config(format!(
                "at least 100 trials required for interval validity, got {}",
                self.trials
            )));
        }
        z_value(self.confidence)?;
        Ok(())
    }
}

fn z_value(confidence: f64) -> Result<f64> {
    // two-sided normal quantiles for the supported levels
    if (confidence - 0.90).abs() < 1e-12 {
        Ok(1.644_853_626_951_472_2)
    } else if (confidence - 0.95).abs() < 1e-12 {
        Ok(1.959_963_984_540_054)
    } else if (confidence - 0.99).abs() < 1e-12 {
        Ok(2.575_829_303_548_900_4)
    } else {
        Err(Error::Config(format!(
            "unsupported confidence level {confidence}; use 0.9, 0.95 or 0.99"
        )))
    }
}

/// A Monte Carlo estimate with its normal-approximation confidence interval.
#[derive(Clone, Debug)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub tag: String,
}

impl McEstimate {
    fn frequency(hits: u64, n: u64, confidence: f64, tag: &str) -> Result<Self> {
        if n == 0 {
            return Err(Error::Estimation(format!(
                "no samples available for the {tag} estimator"
            )));
        }
        let mean = hits as f64 / n as f64;
        let std_error = (mean * (1.0 - mean) / n as f64).sqrt();
        Self::from_moments(mean, std_error, n, confidence, tag)
    }

    fn from_moments(
        mean: f64,
        std_error: f64,
        trials: u64,
        confidence: f64,
        tag: &str,
    ) -> Result<Self> {
        let z = z_value(confidence)?;
        Ok(Self {
            mean,
            std_error,
            trials,
            ci_low: mean - z * std_error,
            ci_high: mean + z * std_error,
            tag: tag.to_string(),
        })
    }

    /// Distance from a reference value in units of the standard error.
    pub fn sigmas_from(&self, reference: f64) -> f64 {
        if self.std_error == 0.0 {
            if self.mean == reference {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - reference).abs() / self.std_error
        }
    }
}

/// Substream for chunk `index` of a run seeded with `master_seed`:
/// a splitmix64 expansion of the pair feeds a counter-based ChaCha stream.
pub fn chunk_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut z = master_seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut seed = [0u8; 32];
    for word in seed.chunks_exact_mut(8) {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut x = z;
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        x ^= x >> 31;
        word.copy_from_slice(&x.to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

fn with_pool<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    if workers == 0 {
        Ok(f())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
        Ok(pool.install(f))
    }
}

// Deterministic chunked map-reduce: results folded in chunk-index order.
fn run_chunks<A, F>(trials: u64, seed: u64, workers: usize, per_chunk: F) -> Result<Vec<A>>
where
    A: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> Result<A> + Sync,
{
    let n_chunks = trials.div_ceil(CHUNK);
    let chunks: Vec<Result<A>> = with_pool(workers, || {
        (0..n_chunks)
            .into_par_iter()
            .map(|ci| {
                let mut rng = chunk_rng(seed, ci);
                let here = CHUNK.min(trials - ci * CHUNK);
                per_chunk(&mut rng, here)
            })
            .collect()
    })?;
    chunks.into_iter().collect()
}

/// Window for activation snapshots: far-field mean interference below
/// `fraction` of the activation threshold.
pub fn activation_window(params: &NetworkParams, beta: f64, fraction: f64) -> Result<WindowSpec> {
    params.validate()?;
    WindowSpec::for_interference_field(
        params.lambda_b * params.bs_active_prob,
        mean_downlink_power(beta, params)?,
        params.activation_threshold,
        params.path_loss_exp,
        fraction,
    )
}

/// Window for uplink SIR snapshots: far-field mean interference below
/// `fraction` of the interference scale (π·ρη_aλ_d·𝔍(0,1)·E[Q^{2/α}])^{α/2}.
pub fn uplink_window(
    params: &NetworkParams,
    nu: f64,
    eta_a: f64,
    fraction: f64,
) -> Result<WindowSpec> {
    params.validate()?;
    let density = params.rb_prob * eta_a * params.lambda_d;
    let load = uplink_load(params, eta_a)?;
    let scale = (std::f64::consts::PI
        * density
        * load.fading_coeff
        * uplink_power_fractional_moment(nu, params)?)
    .powf(params.path_loss_exp / 2.0);
    WindowSpec::for_interference_field(
        density,
        mean_uplink_power(nu, params)?,
        scale,
        params.path_loss_exp,
        fraction,
    )
}

/// One realization of the coordinated activation signaling process.
#[derive(Clone, Copy, Debug)]
pub struct ActivationSnapshot {
    /// W_K: total received wake-up power at the origin (W).
    pub total_power: f64,
    /// I_K: power from beyond the coordinated set (W).
    pub interference: f64,
    /// D_K: power the coordinated set would deliver when broadcasting (W).
    pub desired: f64,
    /// Whether the coordinated set is broadcasting (ω₁).
    pub serving_active: bool,
}

// Precomputed constants for activation snapshot sampling.
struct ActivationSampler {
    pi_lb: f64,
    mu: f64,
    k: u32,
    r2: f64,
    // power-control law: P = power_const · T^{pow_exponent}, T ~ Exp(πλ_b)
    power_const: f64,
    pow_exponent: f64,
    constant_power: bool,
    alpha_half: f64,
    rayleigh: bool,
    serving_exp: Exp<f64>,
    fading: Gamma<f64>,
}

impl ActivationSampler {
    fn new(params: &NetworkParams, k: u32, beta: f64, window: &WindowSpec) -> Result<Self> {
        params.validate()?;
        if k < 1 {
            return Err(Error::Domain("coordination level must be >= 1".into()));
        }
        let alpha = params.path_loss_exp;
        if !(beta > -2.0 / alpha) {
            return Err(Error::Domain(format!(
                "downlink exponent {beta} must exceed -2/alpha"
            )));
        }
        // the window must honor its own truncation bound
        let required = WindowSpec::required_radius(
            params.lambda_b * params.bs_active_prob,
            mean_downlink_power(beta, params)?,
            params.activation_threshold,
            alpha,
            window.truncation_fraction,
        );
        if window.radius < required * (1.0 - 1e-9) {
            return Err(Error::Config(format!(
                "window radius {:.1} m below the {:.1} m required by its truncation bound",
                window.radius, required
            )));
        }
        let mean_count = params.lambda_b * window.area();
        if mean_count < k as f64 + 10.0 {
            return Err(Error::Config(format!(
                "window holds only {mean_count:.1} BSs on average; too small for K = {k}"
            )));
        }
        let pi_lb = std::f64::consts::PI * params.lambda_b;
        let (power_const, pow_exponent, constant_power) = if beta == 0.0 {
            (params.bs_power, 0.0, true)
        } else {
            let density = if beta > 0.0 {
                params.lambda_b_min
            } else {
                params.lambda_b_max
            };
            let half = alpha * beta / 2.0;
            let c = params.bs_power * (std::f64::consts::PI * density).powf(half)
                / crate::numerics::special::gamma(1.0 + half)?;
            (c, half, false)
        };
        Ok(Self {
            pi_lb,
            mu: params.bs_active_prob,
            k,
            r2: window.radius * window.radius,
            power_const,
            pow_exponent,
            constant_power,
            alpha_half: alpha / 2.0,
            rayleigh: params.nakagami_m == 1.0,
            serving_exp: Exp::new(pi_lb).expect("positive rate"),
            fading: Gamma::new(params.nakagami_m, 1.0 / params.nakagami_m)
                .expect("valid shape and scale"),
        })
    }

    #[inline]
    fn path_loss(&self, sq_dist: f64) -> f64 {
        if self.alpha_half == 2.0 {
            1.0 / (sq_dist * sq_dist)
        } else {
            sq_dist.powf(-self.alpha_half)
        }
    }

    #[inline]
    fn power<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.constant_power {
            self.power_const
        } else {
            let t: f64 = self.serving_exp.sample(rng);
            self.power_const * t.powf(self.pow_exponent)
        }
    }

    #[inline]
    fn gain<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.rayleigh {
            // inverse-CDF exponential keeps the hot path branch-free
            -(1.0 - rng.gen::<f64>()).ln()
        } else {
            self.fading.sample(rng)
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ActivationSnapshot> {
        let serving_active = rng.gen::<f64>() < self.mu;
        // ordered squared distances of the K coordinated BSs
        let mut boundary = 0.0;
        let mut desired = 0.0;
        for _ in 0..self.k {
            boundary += self.serving_exp.sample(rng);
            if boundary >= self.r2 {
                return Err(Error::Config(
                    "coordinated set fell outside the simulation window".into(),
                ));
            }
            desired += self.power(rng) * self.gain(rng) * self.path_loss(boundary);
        }
        // broadcasting interferers beyond the set: thinned field of rate πλ_b µ
        let mean = self.mu * self.pi_lb * (self.r2 - boundary);
        let count = Poisson::new(mean)
            .map_err(|e| Error::Config(format!("poisson({mean}): {e}")))?
            .sample(rng) as u64;
        let mut interference = 0.0;
        for _ in 0..count {
            let sq = boundary + (self.r2 - boundary) * (1.0 - rng.gen::<f64>());
            interference += self.power(rng) * self.gain(rng) * self.path_loss(sq);
        }
        Ok(ActivationSnapshot {
            total_power: if serving_active {
                desired + interference
            } else {
                interference
            },
            interference,
            desired,
            serving_active,
        })
    }
}

/// One coordinated activation snapshot: the K nearest BSs share the
/// broadcasting decision; everything beyond them interferes independently.
pub fn simulate_activation_snapshot<R: Rng + ?Sized>(
    params: &NetworkParams,
    coordination: u32,
    beta: f64,
    window: &WindowSpec,
    rng: &mut R,
) -> Result<ActivationSnapshot> {
    ActivationSampler::new(params, coordination, beta, window)?.sample(rng)
}

/// The conditional and total activation frequency estimates of one run.
#[derive(Clone, Debug)]
pub struct ActivationEstimates {
    pub q_a: McEstimate,
    pub p_a: McEstimate,
    pub eta_a: McEstimate,
}

#[derive(Clone, Default)]
struct ActivationAccumulator {
    n_active: u64,
    hits_active: u64,
    n_idle: u64,
    hits_idle: u64,
    laplace_sum: Vec<f64>,
    laplace_sum_sq: Vec<f64>,
}

/// One full activation study: conditional activation frequencies plus the
/// empirical interference transform on `s_grid` and the fitted ε_K.
pub fn activation_study(
    params: &NetworkParams,
    coordination: u32,
    beta: f64,
    mc: &McConfig,
    s_grid: &[f64],
) -> Result<(ActivationEstimates, EpsilonEstimate)> {
    mc.validate()?;
    let grid: Vec<f64> = if s_grid.is_empty() {
        default_s_grid(params, beta)?
    } else {
        s_grid.to_vec()
    };
    let sampler = ActivationSampler::new(params, coordination, beta, &mc.window)?;
    let theta = params.activation_threshold;

    let chunks = run_chunks(mc.trials, mc.master_seed, mc.workers, |rng, here| {
        let mut acc = ActivationAccumulator {
            laplace_sum: vec![0.0; grid.len()],
            laplace_sum_sq: vec![0.0; grid.len()],
            ..Default::default()
        };
        for _ in 0..here {
            let snap = sampler.sample(rng)?;
            if snap.serving_active {
                acc.n_active += 1;
                acc.hits_active += (snap.total_power >= theta) as u64;
            } else {
                acc.n_idle += 1;
                acc.hits_idle += (snap.total_power >= theta) as u64;
            }
            for (i, &s) in grid.iter().enumerate() {
                let v = (-s * snap.interference).exp();
                acc.laplace_sum[i] += v;
                acc.laplace_sum_sq[i] += v * v;
            }
        }
        Ok(acc)
    })?;

    let mut total = ActivationAccumulator {
        laplace_sum: vec![0.0; grid.len()],
        laplace_sum_sq: vec![0.0; grid.len()],
        ..Default::default()
    };
    for c in chunks {
        total.n_active += c.n_active;
        total.hits_active += c.hits_active;
        total.n_idle += c.n_idle;
        total.hits_idle += c.hits_idle;
        for i in 0..grid.len() {
            total.laplace_sum[i] += c.laplace_sum[i];
            total.laplace_sum_sq[i] += c.laplace_sum_sq[i];
        }
    }

    let estimates = ActivationEstimates {
        q_a: McEstimate::frequency(total.hits_idle, total.n_idle, mc.confidence, "q_a")?,
        p_a: McEstimate::frequency(total.hits_active, total.n_active, mc.confidence, "p_a")?,
        eta_a: McEstimate::frequency(
            total.hits_idle + total.hits_active,
            mc.trials,
            mc.confidence,
            "eta_a",
        )?,
    };

    // fit ε_K against log L̂_{I_K}(s) + c·s^δ = −K·ln(1 − µε)
    let c = wake_power_coefficient(params, beta)?;
    let delta = params.two_over_alpha();
    let n = mc.trials as f64;
    let mut log_ratios = Vec::with_capacity(grid.len());
    let mut used_grid = Vec::with_capacity(grid.len());
    for (i, &s) in grid.iter().enumerate() {
        let mean = total.laplace_sum[i] / n;
        if mean > 1e-12 {
            log_ratios.push(mean.ln() + c * s.powf(delta));
            used_grid.push(s);
        }
    }
    if log_ratios.is_empty() {
        return Err(Error::Estimation(
            "empirical transform vanished on the whole s-grid".into(),
        ));
    }
    let (epsilon, residual, boundary) =
        fit_epsilon(&log_ratios, coordination, params.bs_active_prob);
    let eps = EpsilonEstimate {
        epsilon,
        coordination,
        residual,
        s_grid: used_grid,
        boundary,
        degenerate: params.bs_active_prob * (coordination as f64) < 1e-6,
    };
    Ok((estimates, eps))
}

/// Least-squares ε for log-ratios r_s ≈ −K·ln(1 − µε): closed-form solution
/// ε = (1 − exp(−mean(r)/K))/µ, clamped to [0, 1).
pub fn fit_epsilon(log_ratios: &[f64], coordination: u32, mu: f64) -> (f64, f64, bool) {
    let n = log_ratios.len() as f64;
    let rho = log_ratios.iter().sum::<f64>() / n;
    let raw = (1.0 - (-rho / coordination as f64).exp()) / mu;
    let clamped = raw.clamp(0.0, 1.0 - 1e-9);
    let boundary = raw != clamped;
    let fitted_rho = -(coordination as f64) * (1.0 - mu * clamped).ln();
    let residual = log_ratios.iter().map(|r| (r - fitted_rho).powi(2)).sum();
    (clamped, residual, boundary)
}

/// Conditional activation frequencies P[W_K ≥ θ_a | ω₁] and the total.
pub fn estimate_activation_probs(
    params: &NetworkParams,
    coordination: u32,
    beta: f64,
    mc: &McConfig,
) -> Result<ActivationEstimates> {
    Ok(activation_study(params, coordination, beta, mc, &[1.0 / params.activation_threshold])?.0)
}

/// Fit ε_K from the empirical interference transform. An empty `s_grid`
/// selects 20 geometric points spanning transform values 0.95 down to 0.05.
pub fn estimate_epsilon(
    params: &NetworkParams,
    coordination: u32,
    beta: f64,
    mc: &McConfig,
    s_grid: &[f64],
) -> Result<EpsilonEstimate> {
    Ok(activation_study(params, coordination, beta, mc, s_grid)?.1)
}

/// 20 geometric s values on which exp(−c·s^δ) runs from 0.95 down to 0.05.
pub fn default_s_grid(params: &NetworkParams, beta: f64) -> Result<Vec<f64>> {
    let c = wake_power_coefficient(params, beta)?;
    let delta = params.two_over_alpha();
    let s_lo = ((-(0.95f64).ln()) / c).powf(1.0 / delta);
    let s_hi = ((-(0.05f64).ln()) / c).powf(1.0 / delta);
    let n = 20;
    Ok((0..n)
        .map(|i| s_lo * (s_hi / s_lo).powf(i as f64 / (n - 1) as f64))
        .collect())
}

// Precomputed constants for uplink SIR sampling.
struct UplinkSampler {
    r2: f64,
    interferer_mean: f64,
    power_const: f64,
    pow_exponent: f64,
    constant_power: bool,
    alpha_half: f64,
    rayleigh: bool,
    serving_exp: Exp<f64>,
    fading: Gamma<f64>,
}

impl UplinkSampler {
    fn new(params: &NetworkParams, nu: f64, eta_a: f64, window: &WindowSpec) -> Result<Self> {
        params.validate()?;
        if !(eta_a > 0.0 && eta_a <= 1.0) {
            return Err(Error::Domain(format!(
                "eta_a must lie in (0, 1], got {eta_a}"
            )));
        }
        let alpha = params.path_loss_exp;
        if !(nu > -2.0 / alpha) {
            return Err(Error::Domain(format!(
                "uplink exponent {nu} must exceed -2/alpha"
            )));
        }
        let density = params.rb_prob * eta_a * params.lambda_d;
        let required = WindowSpec::required_radius(
            density,
            mean_uplink_power(nu, params)?,
            (std::f64::consts::PI
                * density
                * crate::activation::fading_moment_coefficient(params.nakagami_m, alpha)?
                * uplink_power_fractional_moment(nu, params)?)
            .powf(alpha / 2.0),
            alpha,
            window.truncation_fraction,
        );
        if window.radius < required * (1.0 - 1e-9) {
            return Err(Error::Config(format!(
                "window radius {:.1} m below the {:.1} m required by its truncation bound",
                window.radius, required
            )));
        }
        let pi_lb = std::f64::consts::PI * params.lambda_b;
        let (power_const, pow_exponent, constant_power) = if nu == 0.0 {
            (params.device_power, 0.0, true)
        } else {
            let d = if nu > 0.0 {
                params.lambda_b_min
            } else {
                params.lambda_b_max
            };
            let half = alpha * nu / 2.0;
            let c = params.device_power * (std::f64::consts::PI * d).powf(half)
                / crate::numerics::special::gamma(1.0 + half)?;
            (c, half, false)
        };
        Ok(Self {
            r2: window.radius * window.radius,
            interferer_mean: std::f64::consts::PI * density * window.radius * window.radius,
            power_const,
            pow_exponent,
            constant_power,
            alpha_half: alpha / 2.0,
            rayleigh: params.nakagami_m == 1.0,
            serving_exp: Exp::new(pi_lb).expect("positive rate"),
            fading: Gamma::new(params.nakagami_m, 1.0 / params.nakagami_m)
                .expect("valid shape and scale"),
        })
    }

    #[inline]
    fn path_loss(&self, sq_dist: f64) -> f64 {
        if self.alpha_half == 2.0 {
            1.0 / (sq_dist * sq_dist)
        } else {
            sq_dist.powf(-self.alpha_half)
        }
    }

    #[inline]
    fn gain<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.rayleigh {
            -(1.0 - rng.gen::<f64>()).ln()
        } else {
            self.fading.sample(rng)
        }
    }

    #[inline]
    fn power_at<R: Rng + ?Sized>(&self, sq_dist: f64, _rng: &mut R) -> f64 {
        if self.constant_power {
            self.power_const
        } else {
            self.power_const * sq_dist.powf(self.pow_exponent)
        }
    }

    fn sample_sir<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        // the device's own power is coupled to its serving distance
        let v1: f64 = self.serving_exp.sample(rng);
        let desired = self.power_at(v1, rng) * self.gain(rng) * self.path_loss(v1);
        let count = Poisson::new(self.interferer_mean)
            .map_err(|e| Error::Config(format!("poisson({}): {e}", self.interferer_mean)))?
            .sample(rng) as u64;
        let mut interference = 0.0;
        for _ in 0..count {
            let sq = self.r2 * (1.0 - rng.gen::<f64>());
            // interferers use their own i.i.d. serving-distance marks
            let mark: f64 = self.serving_exp.sample(rng);
            interference += self.power_at(mark, rng) * self.gain(rng) * self.path_loss(sq);
        }
        Ok(if interference == 0.0 {
            f64::INFINITY
        } else {
            desired / interference
        })
    }
}

/// One uplink SIR draw at a typical serving BS: fractional power control on
/// the desired link, thinned device field of density ρ·η_a·λ_d interfering.
pub fn simulate_uplink_sir<R: Rng + ?Sized>(
    params: &NetworkParams,
    nu: f64,
    eta_a: f64,
    window: &WindowSpec,
    rng: &mut R,
) -> Result<f64> {
    UplinkSampler::new(params, nu, eta_a, window)?.sample_sir(rng)
}

/// Empirical uplink coverage P[SIR ≥ θ_c].
pub fn estimate_uplink_coverage(
    params: &NetworkParams,
    nu: f64,
    eta_a: f64,
    theta_c: f64,
    mc: &McConfig,
) -> Result<McEstimate> {
    mc.validate()?;
    if !(theta_c > 0.0) {
        return Err(Error::Domain(format!(
            "SIR threshold must be positive, got {theta_c}"
        )));
    }
    let sampler = UplinkSampler::new(params, nu, eta_a, &mc.window)?;
    let chunks = run_chunks(mc.trials, mc.master_seed, mc.workers, |rng, here| {
        let mut hits = 0u64;
        for _ in 0..here {
            hits += (sampler.sample_sir(rng)? >= theta_c) as u64;
        }
        Ok(hits)
    })?;
    let hits: u64 = chunks.iter().sum();
    McEstimate::frequency(hits, mc.trials, mc.confidence, "eta_c")
}

/// Empirical Laplace transform: mean of exp(−s·x) over the samples, with a
/// 95% confidence interval.
pub fn empirical_laplace(samples: &[f64], s: f64) -> Result<McEstimate> {
    if samples.is_empty() {
        return Err(Error::Domain(
            "empirical transform of an empty sample set".into(),
        ));
    }
    if !(s >= 0.0) {
        return Err(Error::Domain(format!("s must be non-negative, got {s}")));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().map(|&x| (-s * x).exp()).sum::<f64>() / n;
    let var = samples
        .iter()
        .map(|&x| ((-s * x).exp() - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0).max(1.0);
    McEstimate::from_moments(
        mean,
        (var / n).sqrt(),
        samples.len() as u64,
        0.95,
        "empirical-laplace",
    )
}
