use cellwake::numerics::special::erfc;

fn binom(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

fn zeta(n: usize) -> Vec<f64> {
    let mut n_fact = 1.0f64;
    for i in 2..=n { n_fact *= i as f64; }
    (1..=2 * n).map(|k| {
        let mut sum = 0.0f64;
        for j in k.div_ceil(2)..=k.min(n) {
            sum += (j as f64).powi(n as i32 + 1) / n_fact * binom(n, j) * binom(2 * j, j) * binom(j, k - j);
        }
        if (n + k) % 2 == 0 { sum } else { -sum }
    }).collect()
}

fn gs<F: Fn(f64) -> f64>(f: &F, tau: f64, n: usize) -> f64 {
    let ln2 = std::f64::consts::LN_2;
    zeta(n).iter().enumerate().map(|(k, z)| {
        let k1 = (k + 1) as f64;
        z * f(k1 * ln2 / tau) / k1
    }).sum()
}

fn main() {
    println!("-- erfc spectrum, c=4.4138e-4, tau=1e-7 (CDF=0.32366) --");
    let c = 4.4138e-4;
    let f = |s: f64| (-c * s.sqrt()).exp();
    let want = erfc(c / (2.0 * 1e-7f64.sqrt()));
    for n in [5usize, 6, 7, 8, 9, 10] {
        let v = gs(&f, 1e-7, n);
        println!("n={n}: {v:.12e} err={:.3e}", (v - want).abs());
    }
    println!("-- rational spectrum 1/(1+s), tau=1.0 (CDF=1-e^-1) --");
    let g = |s: f64| 1.0 / (1.0 + s);
    let want = 1.0 - (-1.0f64).exp();
    for n in [5usize, 6, 7, 8, 9, 10] {
        let v = gs(&g, 1.0, n);
        println!("n={n}: {v:.12e} err={:.3e}", (v - want).abs());
    }
    println!("-- erfc big: c=1.0 tau=1.0 (CDF=erfc(0.5)) --");
    let h = |s: f64| (-(s.sqrt())).exp();
    let want = erfc(0.5);
    for n in [5usize, 6, 7, 8, 9, 10] {
        let v = gs(&h, 1.0, n);
        println!("n={n}: {v:.12e} err={:.3e}", (v - want).abs());
    }
}
