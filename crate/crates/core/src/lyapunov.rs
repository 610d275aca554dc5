//! Monte-Carlo estimation of the top Lyapunov exponent of the spectral
//! cocycle, plus deterministic upper bounds.
//!
//! Every sampled value is a pure function of `(seed, index)`, and reductions
//! use fixed-order pairwise summation, so results are byte-identical no
//! matter how the index range is split across threads.

use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};

use crate::intmatrix::ln_big;
use crate::substitution::Substitution;
use crate::trig::rescaled_cocycle_product;
use crate::{Error, Result};

/// Quadratic irrationals `frac(sqrt(p_j))` used as Kronecker directions.
const KRONECKER_PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    /// Kronecker lattice `frac(shift + i * alpha)` with badly approximable
    /// directions; low-discrepancy, the default.
    Kronecker,
    /// Independent uniform points from a per-index ChaCha8 stream.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct McPlan {
    pub seed: u64,
    pub samples: usize,
    /// Cocycle depth: each sample is `log ||M(xi, k)||`.
    pub k: u32,
    pub sampler: SamplerKind,
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct LyapunovEstimate {
    pub k: u32,
    pub samples: usize,
    /// Mean of `log ||M(xi, k)||` over the samples.
    pub mean_log_norm: f64,
    pub std_error_log_norm: f64,
    /// `mean / k`: Monte-Carlo estimate of the level-k exponent.
    pub value: f64,
    /// `std_error / k`.
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct KEstimate {
    pub k: u32,
    pub estimate: LyapunovEstimate,
    /// `(1/2k) log sum(S^k)`: exact mean-square upper bound for the level-k
    /// exponent, via the L2 norm of the matrix entries.
    pub parseval_bound: f64,
    /// `min(parseval_bound, value + 3 sigma)`: certified-with-confidence
    /// upper bound for the exponent at this level.
    pub upper: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ExponentReport {
    pub per_k: Vec<KEstimate>,
    /// Smallest upper bound across levels (the exponent is the infimum over
    /// k of the level-k exponents).
    pub best_upper: f64,
    pub best_k: u32,
}

/// SplitMix64 finalizer; decorrelates per-index streams from a shared seed.
fn mix(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_f64(x: u64) -> f64 {
    (x >> 11) as f64 / (1u64 << 53) as f64
}

/// The `index`-th sample point in `[0,1)^d`; pure in `(plan.seed, index)`.
pub fn sample_point(plan: &McPlan, d: usize, index: usize) -> Vec<f64> {
    match plan.sampler {
        SamplerKind::Kronecker => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(mix(plan.seed, 0));
            let n = (index + 1) as f64;
            (0..d)
                .map(|j| {
                    let shift = unit_f64(rng.next_u64());
                    let alpha = (KRONECKER_PRIMES[j % KRONECKER_PRIMES.len()] as f64).sqrt();
                    let x = shift + n * alpha.fract();
                    x - x.floor()
                })
                .collect()
        }
        SamplerKind::Random => {
            let mut rng =
                rand_chacha::ChaCha8Rng::seed_from_u64(mix(plan.seed, index as u64 + 1));
            (0..d).map(|_| unit_f64(rng.next_u64())).collect()
        }
    }
}

/// `log ||M(xi_index, k)||_F` for the `index`-th sample point.
pub fn sample_value(zeta: &Substitution, plan: &McPlan, index: usize) -> Result<f64> {
    let xi = sample_point(plan, zeta.dim(), index);
    let (_, log_scale) = rescaled_cocycle_product(zeta, &xi, plan.k)?;
    if !log_scale.is_finite() {
        return Err(Error::NonFinite { context: "sample log norm" });
    }
    Ok(log_scale)
}

/// Fill `out` with sample values for indices `start .. start + out.len()`.
/// Threaded callers hand each worker a disjoint slice.
pub fn fill_values(
    zeta: &Substitution,
    plan: &McPlan,
    start: usize,
    out: &mut [f64],
) -> Result<()> {
    for (offset, slot) in out.iter_mut().enumerate() {
        *slot = sample_value(zeta, plan, start + offset)?;
    }
    Ok(())
}

/// Fixed-order pairwise summation; the result depends only on the slice
/// contents, never on how it was produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Reduce a complete vector of sample values to an estimate.
pub fn estimate_from_values(plan: &McPlan, values: &[f64]) -> LyapunovEstimate {
    let n = values.len();
    let mean = if n == 0 { 0.0 } else { pairwise_sum(values) / n as f64 };
    let std_error = if n >= 2 {
        let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
        let var = pairwise_sum(&sq) / (n - 1) as f64;
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    let k = plan.k as f64;
    LyapunovEstimate {
        k: plan.k,
        samples: n,
        mean_log_norm: mean,
        std_error_log_norm: std_error,
        value: mean / k,
        sigma: std_error / k,
    }
}

/// Single-threaded Monte-Carlo estimate at one level.
pub fn mc_exponent(zeta: &Substitution, plan: &McPlan) -> Result<LyapunovEstimate> {
    if plan.k == 0 {
        return Err(Error::ZeroPower);
    }
    let mut values = alloc::vec![0.0f64; plan.samples];
    fill_values(zeta, plan, 0, &mut values)?;
    Ok(estimate_from_values(plan, &values))
}

/// Exact mean-square bound `(1/2k) log sum_{i,j} (S^k)_{ij}`.
///
/// Each entry of the level-k matrix is a trigonometric polynomial with
/// unit coefficients, one per letter occurrence, so its mean square over the
/// torus is the corresponding entry of `S^k`; the bound follows by comparing
/// the mean of the log with the log of the mean.
pub fn entrywise_bound(zeta: &Substitution, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::ZeroPower);
    }
    let total = zeta.substitution_matrix().pow(k).entry_sum();
    Ok(ln_big(&total) / (2.0 * k as f64))
}

/// Estimate the exponent as an infimum over levels `1..=k_max`, combining
/// Monte-Carlo values (with a 3-sigma safety margin) and the exact
/// mean-square bounds.
pub fn inf_exponent(
    zeta: &Substitution,
    samples: usize,
    k_max: u32,
    seed: u64,
) -> Result<ExponentReport> {
    if k_max == 0 {
        return Err(Error::ZeroPower);
    }
    let mut per_k = Vec::with_capacity(k_max as usize);
    let mut best_upper = f64::INFINITY;
    let mut best_k = 1;
    for k in 1..=k_max {
        let plan = McPlan { seed, samples, k, sampler: SamplerKind::Kronecker };
        let estimate = mc_exponent(zeta, &plan)?;
        let parseval_bound = entrywise_bound(zeta, k)?;
        let upper = parseval_bound.min(estimate.value + 3.0 * estimate.sigma);
        if upper < best_upper {
            best_upper = upper;
            best_k = k;
        }
        per_k.push(KEstimate { k, estimate, parseval_bound, upper });
    }
    Ok(ExponentReport { per_k, best_upper, best_k })
}

/// `(1/n) log ||M(xi, n)||_F` along a single orbit.
pub fn pointwise_exponent(zeta: &Substitution, xi: &[f64], n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroPower);
    }
    let (_, log_scale) = rescaled_cocycle_product(zeta, xi, n)?;
    Ok(log_scale / n as f64)
}

/// Largest Weyl sum modulus `|mean_i e(<h, xi_i>)|` over nonzero integer
/// frequencies with `|h_j| <= max_freq`; small values certify that the
/// sampler equidistributes at the scales that matter for the integrand.
pub fn weyl_diagnostic(plan: &McPlan, d: usize, max_freq: i64) -> Result<f64> {
    let width = (2 * max_freq + 1) as u64;
    let count = width.saturating_pow(d as u32);
    if count > 100_000 {
        return Err(Error::GuardExceeded { what: "Weyl frequencies", limit: 100_000, got: count });
    }
    let points: Vec<Vec<f64>> =
        (0..plan.samples).map(|i| sample_point(plan, d, i)).collect();
    let mut h = alloc::vec![-max_freq; d];
    let mut worst = 0.0f64;
    loop {
        if h.iter().any(|&x| x != 0) {
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for p in &points {
                let phase: f64 = h.iter().zip(p).map(|(&hj, &xj)| hj as f64 * xj).sum();
                let angle = 2.0 * core::f64::consts::PI * phase;
                re += angle.cos();
                im += angle.sin();
            }
            let n = plan.samples as f64;
            worst = worst.max((re * re + im * im).sqrt() / n);
        }
        // odometer over the frequency box
        let mut j = 0;
        loop {
            if j == d {
                return Ok(worst);
            }
            h[j] += 1;
            if h[j] <= max_freq {
                break;
            }
            h[j] = -max_freq;
            j += 1;
        }
    }
}
