//! Metropolis sampling, local estimators, reference states and gradient
//! descent.

mod estimator;
mod io;
mod reference;
mod sampler;
mod sgd;

pub use estimator::{
    blocked_stats, exact_distribution, exact_expectation, expectation, local_estimator, local_estimator_with,
    local_values, Estimate, EstimatorMode, DEFAULT_BLOCKS, EXACT_SUM_MAX_SITES,
};
pub use io::{read_samples, write_samples, write_trace_csv, TRACE_HEADER};
pub use reference::{
    bcs_amplitude_ordered, bcs_reference_amplitude, correlator_operator_amplitude, determinant, jastrow_correlators,
    permutation_sign, BcsReference, CorrelatorOperatorState, NumberProjection, OperatorFactor, PairingMatrix,
};
pub use sampler::{
    chain_rng, find_start, metropolis_sample, transition_matrix, Chain, MoveSet, SampleStream, SamplerConfig,
};
pub use sgd::{energy_gradient, optimize_sgd, GradientEstimate, GradientMode, SgdConfig, SgdOutcome, TraceRow};
