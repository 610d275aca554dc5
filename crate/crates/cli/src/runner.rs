//! Monte-Carlo driver with deterministic multithreading: every sample is a
//! pure function of (seed, index), workers fill disjoint index ranges, and
//! the reduction runs in a fixed order, so the numbers are byte-identical
//! for any thread count.

use clap::{Args, ValueEnum};

use subcocycle_core::lyapunov::{
    entrywise_bound, estimate_from_values, fill_values, ExponentReport, KEstimate, McPlan,
    SamplerKind,
};
use subcocycle_core::Substitution;

use crate::input::CliError;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    Kronecker,
    Random,
}

#[derive(Args)]
pub struct McArgs {
    /// Sample points per cocycle level.
    #[arg(long, default_value = "1000")]
    pub samples: usize,
    /// Estimate levels 1..=k_max and take the best bound.
    #[arg(long = "k-max", default_value = "10")]
    pub k_max: u32,
    #[arg(long, default_value = "1")]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "kronecker")]
    pub sampler: SamplerArg,
    /// Worker threads; the results do not depend on this.
    #[arg(long, env = "SUBCOCYCLE_THREADS", default_value = "1")]
    pub threads: usize,
}

impl McArgs {
    pub fn sampler(&self) -> SamplerKind {
        match self.sampler {
            SamplerArg::Kronecker => SamplerKind::Kronecker,
            SamplerArg::Random => SamplerKind::Random,
        }
    }

    pub fn sampler_kind(&self) -> &'static str {
        match self.sampler {
            SamplerArg::Kronecker => "kronecker",
            SamplerArg::Random => "random",
        }
    }
}

/// Same combination rule as the single-threaded library path, with the
/// sample filling spread over disjoint index slices.
pub fn threaded_report(zeta: &Substitution, mc: &McArgs) -> Result<ExponentReport, CliError> {
    if mc.k_max == 0 {
        return Err(CliError::Config("k-max must be >= 1".into()));
    }
    if mc.threads == 0 {
        return Err(CliError::Config("threads must be >= 1".into()));
    }
    let mut per_k = Vec::with_capacity(mc.k_max as usize);
    let mut best_upper = f64::INFINITY;
    let mut best_k = 1;
    for k in 1..=mc.k_max {
        let plan = McPlan { seed: mc.seed, samples: mc.samples, k, sampler: mc.sampler() };
        let mut values = vec![0.0f64; mc.samples];
        fill_threaded(zeta, &plan, &mut values, mc.threads)?;
        let estimate = estimate_from_values(&plan, &values);
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

fn fill_threaded(
    zeta: &Substitution,
    plan: &McPlan,
    values: &mut [f64],
    threads: usize,
) -> Result<(), CliError> {
    let n = values.len();
    if threads <= 1 || n < 2 * threads {
        fill_values(zeta, plan, 0, values)?;
        return Ok(());
    }
    let chunk = n.div_ceil(threads);
    let results: Vec<subcocycle_core::Result<()>> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (index, slice) in values.chunks_mut(chunk).enumerate() {
            handles.push(scope.spawn(move || fill_values(zeta, plan, index * chunk, slice)));
        }
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    for r in results {
        r?;
    }
    Ok(())
}
