//! Fixtures shared by the benchmarks.

use wcrte_core::{distributions, Model, ParametricModel, RandomStream, Sample};

/// A reproducible Exp(1) sample of size `n`.
pub fn exponential_sample(n: usize, seed: u64) -> Sample {
    let model = Model::Parametric(ParametricModel::exponential(1.0).expect("valid rate"));
    distributions::sample(&model, n, &mut RandomStream::from_seed(seed)).expect("n ≥ 2")
}

/// A reproducible U(0, 1) sample of size `n`.
pub fn uniform_sample(n: usize, seed: u64) -> Sample {
    let model = Model::Parametric(ParametricModel::uniform(1.0).expect("valid scale"));
    distributions::sample(&model, n, &mut RandomStream::from_seed(seed)).expect("n ≥ 2")
}
