//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls the closed-form evidence code: integrals are done by
//! adaptive Gauss-Kronrod quadrature of the defining integrands, and
//! partition sums by explicit enumeration.

#![allow(dead_code)]

use statrs::function::gamma::ln_gamma;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Globally adaptive Gauss-Kronrod (7/15) on `[a, b]`: the interval with
/// the largest error estimate is bisected until the summed estimate drops
/// below `tol` or 2000 intervals are in play.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let (v, e) = gk15(&f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    while intervals.len() < 2000 {
        let total_err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if total_err <= tol {
            break;
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap();
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
    intervals.iter().map(|iv| iv.2).sum()
}

/// `ln ∫ exp(log_f(t)) dt` over `[lo, hi]`.
///
/// A grid scan locates the maximum and the region within 60 nats of it; the
/// integrand is rescaled by the maximum before quadrature.
pub fn log_integrate<F: Fn(f64) -> f64>(log_f: F, lo: f64, hi: f64, grid: usize) -> f64 {
    let step = (hi - lo) / grid as f64;
    let values: Vec<f64> = (0..=grid).map(|k| log_f(lo + k as f64 * step)).collect();
    let peak = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let first = values.iter().position(|&v| v > peak - 60.0).unwrap();
    let last = values.iter().rposition(|&v| v > peak - 60.0).unwrap();
    let a = lo + first.saturating_sub(1) as f64 * step;
    let b = lo + (last + 1).min(grid) as f64 * step;
    let rel = integrate(|t| (log_f(t) - peak).exp(), a, b, 1e-12 * (b - a));
    rel.ln() + peak
}

/// Beta-Bernoulli evidence by quadrature over `t = logit θ`.
pub fn beta_bernoulli_quadrature(a: f64, b: f64, data: &[usize]) -> f64 {
    let ones = data.iter().filter(|&&x| x == 1).count() as f64;
    let zeros = data.len() as f64 - ones;
    let log_beta = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
    // θ = σ(t), dθ = θ(1−θ) dt
    let log_f = |t: f64| {
        let log_theta = -(-t).exp().ln_1p();
        let log_one_minus = -t.exp().ln_1p();
        (a + ones) * log_theta + (b + zeros) * log_one_minus - log_beta
    };
    log_integrate(log_f, -80.0, 80.0, 4000)
}

fn log_poisson(x: u64, lambda: f64) -> f64 {
    x as f64 * lambda.ln() - lambda - ln_gamma(x as f64 + 1.0)
}

/// Gamma-Poisson evidence by quadrature over `t = ln λ`.
pub fn gamma_poisson_quadrature(shape: f64, rate: f64, data: &[u64]) -> f64 {
    let log_f = |t: f64| {
        let lambda = t.exp();
        let prior = shape * rate.ln() - ln_gamma(shape) + (shape - 1.0) * t - rate * lambda;
        let lik: f64 = data.iter().map(|&x| log_poisson(x, lambda)).sum();
        lik + prior + t
    };
    log_integrate(log_f, -40.0, 15.0, 4000)
}

fn log_normal(x: f64, mean: f64, var: f64) -> f64 {
    -0.5 * (2.0 * std::f64::consts::PI * var).ln() - 0.5 * (x - mean) * (x - mean) / var
}

/// 1-D Normal-inverse-Wishart evidence by nested quadrature over
/// `(μ, ln σ²)` with `σ² ~ InvGamma(ν₀/2, λ₀/2)` and `μ | σ² ~ N(μ₀, σ²/κ₀)`.
pub fn niw_1d_quadrature(mu0: f64, kappa0: f64, nu0: f64, lambda0: f64, data: &[f64]) -> f64 {
    let n = data.len() as f64;
    let centre = (kappa0 * mu0 + data.iter().sum::<f64>()) / (kappa0 + n);
    let shape = nu0 / 2.0;
    let scale = lambda0 / 2.0;
    let log_outer = |t: f64| {
        let var = t.exp();
        let width = 40.0 * (var / (kappa0 + n)).sqrt();
        let inner = |mu: f64| {
            let lik: f64 = data.iter().map(|&x| log_normal(x, mu, var)).sum();
            lik + log_normal(mu, mu0, var / kappa0)
        };
        // The μ-integrand is Gaussian-shaped; rescale by its value at the centre.
        let shift = inner(centre);
        let rel = integrate(
            |mu| (inner(mu) - shift).exp(),
            centre - width,
            centre + width,
            1e-12 * width,
        );
        let log_inv_gamma = shape * scale.ln() - ln_gamma(shape) - (shape + 1.0) * t - scale / var;
        rel.ln() + shift + log_inv_gamma + t
    };
    log_integrate(log_outer, -20.0, 20.0, 400)
}

/// Restricted-growth strings of length `n`, by recursion.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for label in 0..=max + 1 {
            prefix.push(label);
            let next_max = if label > max { label } else { max };
            go(prefix, next_max, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut prefix = vec![0];
    // `max` counts labels already used minus one; starting label 0 sets it to 0.
    go(&mut prefix, 0, n, &mut out);
    out
}

/// Bell numbers from the recurrence `B(n+1) = Σ_k C(n, k) B(k)`.
pub fn bell(n: usize) -> u64 {
    let mut b = vec![1u64];
    for m in 0..n {
        let mut c = 1u64;
        let mut next = 0u64;
        for (k, bk) in b.iter().enumerate() {
            next += c * bk;
            c = c * (m - k) as u64 / (k + 1) as u64;
        }
        b.push(next);
    }
    b[n]
}

/// CRP log prior written out directly from block sizes.
pub fn crp_log_prior(assignment: &[usize], alpha: f64) -> f64 {
    let k = assignment.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; k];
    for &a in assignment {
        sizes[a] += 1;
    }
    let n = assignment.len() as f64;
    let mut out = k as f64 * alpha.ln() + ln_gamma(alpha) - ln_gamma(alpha + n);
    for s in sizes {
        out += ln_gamma(s as f64);
    }
    out
}

/// Brute-force DPM evidence: enumerate partitions, score each block with
/// `block_evidence`.
pub fn dpm_brute_force<F: Fn(&[usize]) -> f64>(n: usize, alpha: f64, block_evidence: F) -> f64 {
    let terms: Vec<f64> = all_partitions(n)
        .iter()
        .map(|p| {
            let k = p.iter().max().unwrap() + 1;
            let mut total = crp_log_prior(p, alpha);
            for label in 0..k {
                let members: Vec<usize> = (0..n).filter(|&i| p[i] == label).collect();
                total += block_evidence(&members);
            }
            total
        })
        .collect();
    let peak = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    peak + terms.iter().map(|t| (t - peak).exp()).sum::<f64>().ln()
}

/// Beta-Bernoulli block evidence written directly from counts.
pub fn beta_block(a: f64, b: f64, data: &[usize], members: &[usize]) -> f64 {
    let ones = members.iter().filter(|&&i| data[i] == 1).count() as f64;
    let zeros = members.len() as f64 - ones;
    let lb = |x: f64, y: f64| ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y);
    lb(a + ones, b + zeros) - lb(a, b)
}
