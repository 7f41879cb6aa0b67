//! Sampling and distribution laws for the Poisson-deployed network.
//!
//! Covers the planar PPP realizations used by the Monte Carlo engine, the
//! nearest/k-th neighbour distance laws, Nakagami power fading, and the
//! negative-binomial cell-load PMFs.

use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma, Poisson};

use crate::error::{Error, Result};
use crate::numerics::special::ln_gamma;

/// A finite circular simulation window around the origin.
///
/// `truncation_fraction` records the bound used to size the window: the mean
/// interference from transmitters beyond `radius` is at most that fraction of
/// the reference power scale passed to [`WindowSpec::for_interference_field`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowSpec {
    /// Window radius in meters.
    pub radius: f64,
    /// Target bound on the omitted far-field mean interference, in (0, 0.01].
    pub truncation_fraction: f64,
}

impl WindowSpec {
    pub fn new(radius: f64, truncation_fraction: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Domain(format!(
                "window radius must be positive, got {radius}"
            )));
        }
        if !(truncation_fraction > 0.0 && truncation_fraction <= 0.01) {
            return Err(Error::Domain(format!(
                "truncation fraction must lie in (0, 0.01], got {truncation_fraction}"
            )));
        }
        Ok(Self {
            radius,
            truncation_fraction,
        })
    }

    /// Smallest radius such that the mean far-field interference of a
    /// transmitter field with density `active_density` and mean power
    /// `mean_power`, namely 2π·λ·E[P]·R^{2−α}/(α−2), stays below
    /// `fraction · power_scale`.
    pub fn required_radius(
        active_density: f64,
        mean_power: f64,
        power_scale: f64,
        alpha: f64,
        fraction: f64,
    ) -> f64 {
        let tail_coeff = 2.0 * std::f64::consts::PI * active_density * mean_power / (alpha - 2.0);
        (tail_coeff / (fraction * power_scale)).powf(1.0 / (alpha - 2.0))
    }

    /// Window sized by the far-field truncation bound above.
    pub fn for_interference_field(
        active_density: f64,
        mean_power: f64,
        power_scale: f64,
        alpha: f64,
        fraction: f64,
    ) -> Result<Self> {
        let radius = Self::required_radius(active_density, mean_power, power_scale, alpha, fraction);
        Self::new(radius, fraction)
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }
}

/// One realization of a planar PPP inside a window.
#[derive(Clone, Debug)]
pub struct PointField {
    /// Point coordinates (x, y) in meters.
    pub points: Vec<[f64; 2]>,
    /// The density the field was generated with (points/m²).
    pub density: f64,
}

impl PointField {
    /// Squared distances from the origin, ascending.
    pub fn sorted_sq_distances(&self) -> Vec<f64> {
        let mut d: Vec<f64> = self
            .points
            .iter()
            .map(|p| p[0] * p[0] + p[1] * p[1])
            .collect();
        d.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
        d
    }
}

/// Nakagami-m power fading: gains are Gamma(m, rate m), unit mean.
#[derive(Clone, Copy, Debug)]
pub struct FadingModel {
    pub m: f64,
}

impl FadingModel {
    pub fn new(m: f64) -> Result<Self> {
        if !(m >= 0.5) || !m.is_finite() {
            return Err(Error::Domain(format!(
                "Nakagami shape must be >= 0.5, got {m}"
            )));
        }
        Ok(Self { m })
    }
}

/// Sample a homogeneous PPP of the given density inside the window:
/// Poisson count with mean λ·πR², points i.i.d. uniform over the disk.
pub fn sample_ppp<R: Rng + ?Sized>(
    density: f64,
    window: &WindowSpec,
    rng: &mut R,
) -> Result<PointField> {
    if !(density > 0.0) || !density.is_finite() {
        return Err(Error::Domain(format!(
            "density must be positive, got {density}"
        )));
    }
    let mean = density * window.area();
    if mean > 1e8 {
        return Err(Error::Resource(format!(
            "expected point count {mean:.3e} exceeds the 1e8 budget"
        )));
    }
    let count = if mean < 1e-12 {
        0
    } else {
        Poisson::new(mean)
            .map_err(|e| Error::Domain(format!("poisson({mean}): {e}")))?
            .sample(rng) as usize
    };
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        let r = window.radius * rng.gen::<f64>().sqrt();
        let phi = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
        points.push([r * phi.cos(), r * phi.sin()]);
    }
    Ok(PointField { points, density })
}

/// Squared distance to the nearest BS: exponential with rate πλ_b
/// (survival e^{−πλ_b x}, mean 1/(πλ_b)).
pub fn sample_nearest_distance_sq<R: Rng + ?Sized>(lambda_b: f64, rng: &mut R) -> f64 {
    Exp::new(std::f64::consts::PI * lambda_b)
        .expect("positive rate")
        .sample(rng)
}

/// Squared distance to the k-th nearest BS: Gamma(k, rate πλ_b).
pub fn sample_kth_distance_sq<R: Rng + ?Sized>(lambda_b: f64, k: u32, rng: &mut R) -> f64 {
    assert!(k >= 1, "k must be at least 1");
    let rate = std::f64::consts::PI * lambda_b;
    Gamma::new(k as f64, 1.0 / rate)
        .expect("valid gamma parameters")
        .sample(rng)
}

/// One Nakagami-m power gain, exactly Gamma(m, rate m).
pub fn sample_fading_gain<R: Rng + ?Sized>(model: &FadingModel, rng: &mut R) -> f64 {
    Gamma::new(model.m, 1.0 / model.m)
        .expect("valid gamma parameters")
        .sample(rng)
}

// Negative-binomial cell-load PMF with shape 7/2 and mean ratio:
// P[N = n] = Γ(n+7/2)/(n! Γ(7/2)) · (2r/7)^n · (1 + 2r/7)^{-(n+7/2)}.
fn load_pmf(n: u64, ratio: f64) -> Result<f64> {
    if ratio == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let rho = 2.0 * ratio / 7.0;
    let nf = n as f64;
    let ln_p = ln_gamma(nf + 3.5)? - ln_gamma(nf + 1.0)? - ln_gamma(3.5)? + nf * rho.ln()
        - (nf + 3.5) * rho.ln_1p();
    Ok(ln_p.exp())
}

/// PMF of the number of devices associated with a BS under nearest-BS
/// association.
pub fn cell_load_pmf(n: u64, lambda_d: f64, lambda_b: f64) -> Result<f64> {
    if !(lambda_d > 0.0 && lambda_b > 0.0) {
        return Err(Error::Domain(format!(
            "densities must be positive, got lambda_d={lambda_d}, lambda_b={lambda_b}"
        )));
    }
    load_pmf(n, lambda_d / lambda_b)
}

/// PMF of the number of *activated* devices in a cell: the activated devices
/// thin the device field to density η_a·λ_d. Reduces to [`cell_load_pmf`] at
/// η_a = 1.
pub fn activated_cell_load_pmf(
    n: u64,
    lambda_d: f64,
    lambda_b: f64,
    eta_a: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta_a) {
        return Err(Error::Domain(format!(
            "eta_a must lie in [0, 1], got {eta_a}"
        )));
    }
    if !(lambda_d > 0.0 && lambda_b > 0.0) {
        return Err(Error::Domain(format!(
            "densities must be positive, got lambda_d={lambda_d}, lambda_b={lambda_b}"
        )));
    }
    load_pmf(n, eta_a * lambda_d / lambda_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::{integrate, ToleranceSpec};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    // Regularized upper incomplete gamma Q(a, x), via this crate's own
    // quadrature: oracle for chi-square p-values.
    fn gamma_q(a: f64, x: f64) -> f64 {
        let tol = ToleranceSpec::default();
        let ln_ga = ln_gamma(a).unwrap();
        let q = integrate(
            |t| ((a - 1.0) * t.ln() - t - ln_ga).exp(),
            x,
            f64::INFINITY,
            &tol,
        )
        .unwrap();
        q.value
    }

    #[test]
    fn ppp_count_matches_poisson_mean() {
        let window = WindowSpec::new(5000.0, 0.01).unwrap();
        let density = 1e-4;
        let expected = density * window.area(); // ≈ 7854
        let mut r = rng(42);
        let n_draws = 1000;
        let mut total = 0usize;
        for _ in 0..n_draws {
            total += sample_ppp(density, &window, &mut r).unwrap().points.len();
        }
        let mean = total as f64 / n_draws as f64;
        let sigma = (expected / n_draws as f64).sqrt();
        assert!(
            (mean - expected).abs() <= 3.0 * sigma,
            "mean {mean} vs expected {expected} (3σ = {})",
            3.0 * sigma
        );
    }

    #[test]
    fn ppp_chi_square_goodness_of_fit() {
        // counts over 1000 windows against the Poisson PMF, 1% significance
        let window = WindowSpec::new(400.0, 0.01).unwrap();
        let density = 6e-5;
        let mean = density * window.area(); // ≈ 30
        let mut r = rng(7);
        let n_windows = 1000usize;
        let mut counts = std::collections::BTreeMap::<usize, usize>::new();
        for _ in 0..n_windows {
            let n = sample_ppp(density, &window, &mut r).unwrap().points.len();
            *counts.entry(n).or_default() += 1;
        }
        // bin k = 0.. with expected >= 5, grouping the two tails
        let pmf = |k: usize| {
            let kf = k as f64;
            (kf * mean.ln() - mean - ln_gamma(kf + 1.0).unwrap()).exp()
        };
        let lo = (0..).find(|&k| n_windows as f64 * pmf(k) >= 5.0).unwrap();
        let hi = (lo..)
            .take_while(|&k| n_windows as f64 * pmf(k) >= 5.0)
            .last()
            .unwrap();
        let mut chi2 = 0.0;
        // left tail [0, lo), interior bins, right tail (hi, inf)
        let obs_left: usize = counts.range(..lo).map(|(_, c)| c).sum();
        let exp_left: f64 = (0..lo).map(pmf).sum::<f64>() * n_windows as f64;
        if exp_left > 0.0 {
            chi2 += (obs_left as f64 - exp_left).powi(2) / exp_left;
        }
        for k in lo..=hi {
            let obs = *counts.get(&k).unwrap_or(&0) as f64;
            let expd = n_windows as f64 * pmf(k);
            chi2 += (obs - expd).powi(2) / expd;
        }
        let obs_right: usize = counts.range(hi + 1..).map(|(_, c)| c).sum();
        let exp_right = n_windows as f64 * (1.0 - (0..=hi).map(pmf).sum::<f64>());
        if exp_right > 0.0 {
            chi2 += (obs_right as f64 - exp_right).powi(2) / exp_right;
        }
        let dof = (hi - lo + 2) as f64; // bins − 1
        let p_value = gamma_q(dof / 2.0, chi2 / 2.0);
        assert!(
            p_value > 0.01,
            "chi-square GOF rejected: chi2 = {chi2:.2}, dof = {dof}, p = {p_value:.4}"
        );
    }

    #[test]
    fn ppp_negligible_density_is_empty() {
        let window = WindowSpec::new(1.0, 0.01).unwrap();
        let mut r = rng(1);
        for _ in 0..50 {
            let f = sample_ppp(1e-14, &window, &mut r).unwrap();
            assert!(f.points.is_empty());
        }
    }

    #[test]
    fn ppp_replay_is_deterministic() {
        let window = WindowSpec::new(1000.0, 0.01).unwrap();
        let a = sample_ppp(1e-4, &window, &mut rng(99)).unwrap();
        let b = sample_ppp(1e-4, &window, &mut rng(99)).unwrap();
        assert_eq!(a.points, b.points);
    }

    #[test]
    fn ppp_resource_budget() {
        let window = WindowSpec::new(1e6, 0.01).unwrap();
        match sample_ppp(1.0, &window, &mut rng(0)) {
            Err(crate::error::Error::Resource(_)) => {}
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn nearest_distance_law() {
        let lambda_b = 1e-4;
        let mut r = rng(3);
        let n = 100_000;
        let samples: Vec<f64> = (0..n)
            .map(|_| sample_nearest_distance_sq(lambda_b, &mut r))
            .collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let want = 1.0 / (std::f64::consts::PI * lambda_b); // 3183.1 m²
        let sigma = want / (n as f64).sqrt(); // exp std = mean
        assert!((mean - want).abs() <= 3.0 * sigma, "mean {mean} vs {want}");
        // survival at the mean is e^{-1}
        let frac = samples.iter().filter(|&&x| x > want).count() as f64 / n as f64;
        let p = (-1.0f64).exp();
        let sigma_p = (p * (1.0 - p) / n as f64).sqrt();
        assert!((frac - p).abs() <= 3.0 * sigma_p);
    }

    #[test]
    fn kth_distance_law() {
        let lambda_b = 1e-4;
        let mut r = rng(4);
        let n = 100_000;
        let mean3: f64 = (0..n)
            .map(|_| sample_kth_distance_sq(lambda_b, 3, &mut r))
            .sum::<f64>()
            / n as f64;
        let want = 3.0 / (std::f64::consts::PI * lambda_b); // 9549.3 m²
        let sigma = want / (3f64).sqrt() / (n as f64).sqrt();
        assert!(
            (mean3 - want).abs() <= 3.0 * sigma,
            "mean {mean3} vs {want}"
        );
    }

    #[test]
    fn ordered_field_distances_are_monotone() {
        let window = WindowSpec::new(600.0, 0.01).unwrap();
        let mut r = rng(5);
        let field = sample_ppp(1e-4, &window, &mut r).unwrap();
        let d = field.sorted_sq_distances();
        assert!(d.len() >= 2);
        assert!(d.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn sorted_field_distance_matches_kth_law_ks() {
        // two-sample KS at 1% significance between the 3rd ordered squared
        // distance of sampled fields and the Gamma(3, πλ_b) sampler
        let lambda_b = 1e-4;
        let window = WindowSpec::new(430.0, 0.01).unwrap(); // mean count ≈ 58
        let k = 3usize;
        let n = 10_000usize;
        let mut r = rng(6);
        let mut from_fields = Vec::with_capacity(n);
        while from_fields.len() < n {
            let f = sample_ppp(lambda_b, &window, &mut r).unwrap();
            let d = f.sorted_sq_distances();
            if d.len() >= k {
                from_fields.push(d[k - 1]);
            }
        }
        let mut from_law: Vec<f64> = (0..n)
            .map(|_| sample_kth_distance_sq(lambda_b, k as u32, &mut r))
            .collect();
        from_fields.sort_by(|a, b| a.partial_cmp(b).unwrap());
        from_law.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // KS statistic over the merged grid
        let mut d_stat: f64 = 0.0;
        let (mut i, mut j) = (0usize, 0usize);
        while i < n && j < n {
            if from_fields[i] <= from_law[j] {
                i += 1;
            } else {
                j += 1;
            }
            d_stat = d_stat.max((i as f64 / n as f64 - j as f64 / n as f64).abs());
        }
        // c(0.01) = sqrt(-ln(0.005)/2)
        let crit = (-(0.005f64).ln() / 2.0).sqrt() * (2.0 / n as f64).sqrt();
        assert!(d_stat < crit, "KS D = {d_stat:.4} >= {crit:.4}");
    }

    #[test]
    fn fading_gain_moments() {
        let mut r = rng(8);
        let n = 100_000;
        // m = 1: exponential with mean 1
        let rayleigh = FadingModel::new(1.0).unwrap();
        let mean: f64 = (0..n)
            .map(|_| sample_fading_gain(&rayleigh, &mut r))
            .sum::<f64>()
            / n as f64;
        assert!((mean - 1.0).abs() <= 3.0 / (n as f64).sqrt());
        // m = 4: variance 1/4
        let nak4 = FadingModel::new(4.0).unwrap();
        let samples: Vec<f64> = (0..n).map(|_| sample_fading_gain(&nak4, &mut r)).collect();
        let mean4 = samples.iter().sum::<f64>() / n as f64;
        let var4 = samples.iter().map(|x| (x - mean4).powi(2)).sum::<f64>() / (n - 1) as f64;
        // Var of the variance estimator for Gamma(4, 4): (µ4 − σ⁴(n−3)/(n−1))/n, µ4 = 3σ⁴(1+2/shape)
        let sigma_var = (3.0f64 * (0.25f64).powi(2) * (1.0 + 2.0 / 4.0) / n as f64).sqrt();
        assert!(
            (var4 - 0.25).abs() <= 3.0 * sigma_var,
            "variance {var4} vs 0.25"
        );
        assert!(samples.iter().all(|&x| x > 0.0));
        assert!(FadingModel::new(0.3).is_err());
    }

    #[test]
    fn cell_load_pmf_values() {
        // n = 0, ratio 100: (1 + 200/7)^{-3.5}
        let p0 = cell_load_pmf(0, 1e-2, 1e-4).unwrap();
        assert_relative_eq!(p0, 7.111_266_115_151_55e-6, max_relative = 1e-10);
        // empty-cell limit as the ratio vanishes
        let p0_small = cell_load_pmf(0, 1e-12, 1.0).unwrap();
        assert!(p0_small > 1.0 - 1e-9);
    }

    #[test]
    fn cell_load_pmf_normalizes() {
        let (ld, lb) = (1e-2, 1e-4); // ratio 100
        let sum: f64 = (0..=2000).map(|n| cell_load_pmf(n, ld, lb).unwrap()).sum();
        assert!((sum - 1.0).abs() <= 1e-9, "sum = {sum}");
        assert!((0..=2000).all(|n| cell_load_pmf(n, ld, lb).unwrap() >= 0.0));
    }

    #[test]
    fn activated_pmf_reduces_and_degenerates() {
        let (ld, lb) = (1e-2, 1e-4);
        for n in [0u64, 1, 5, 50] {
            assert_relative_eq!(
                activated_cell_load_pmf(n, ld, lb, 1.0).unwrap(),
                cell_load_pmf(n, ld, lb).unwrap(),
                max_relative = 1e-14
            );
        }
        assert_eq!(activated_cell_load_pmf(0, ld, lb, 0.0).unwrap(), 1.0);
        assert_eq!(activated_cell_load_pmf(3, ld, lb, 0.0).unwrap(), 0.0);
        // n = 0, η_a = 0.5, ratio 100: (1 + 100/7)^{-3.5}
        assert_relative_eq!(
            activated_cell_load_pmf(0, ld, lb, 0.5).unwrap(),
            7.161_432_752_465_54e-5,
            max_relative = 1e-10
        );
        let sum: f64 = (0..=2000)
            .map(|n| activated_cell_load_pmf(n, ld, lb, 0.5).unwrap())
            .sum();
        assert!((sum - 1.0).abs() <= 1e-9, "sum = {sum}");
    }
}
