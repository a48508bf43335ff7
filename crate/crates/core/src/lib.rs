//! Quantile absolute deviation (QAD) dispersion estimators, trimmed
//! Harrell-Davis median estimators, their asymptotic theory under reference
//! distributions, and a seeded Monte-Carlo engine for finite-sample
//! constants and efficiencies.

pub mod asymptotics;
pub mod dispersion;
pub mod distributions;
pub mod error;
pub mod montecarlo;
pub mod quantile;
pub mod rng;
pub mod sample;
pub mod specfun;

pub use asymptotics::{
    asymptotic_constant, asymptotic_gaussian_efficiency, asymptotic_qad, coverage_probability,
    find_optimal_p, solve_vp_numeric, VpResult,
};
pub use dispersion::{
    consistency_constant, mad, oqad, qad, sqad, ConsistencyConstants, ConstantFamily,
    DispersionEstimate, Estimator, MAD_CONSTANT,
};
pub use distributions::ReferenceDistribution;
pub use error::{Error, Result};
pub use montecarlo::{
    fit_constant_model, simulate_constants, simulate_location_efficiency,
    simulate_scale_efficiency, standardized_variance, unbiased_sd, ConstantRecord,
    EfficiencyRecord, FitResult, SimulationConfig,
};
pub use quantile::{
    hd_quantile, hf7_quantile, othdme, sample_median, sthdme, thd_median, HdiWidth, ThdWeights,
    RHO_O, RHO_S,
};
pub use rng::RngStream;
pub use sample::Sample;
pub use specfun::{c4, normal_cdf, normal_quantile, regularized_incomplete_beta};
