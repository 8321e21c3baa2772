//! Statistical verdicts on mean ergodicity: time and ensemble averages, the
//! weighted covariance functional, growth rates, inhibition limits and
//! recurrence to the mean.
//!
//! `Cov_yy(tau)` is always the ensemble variance of `Y` at lag `tau`, and the
//! functional is `(1/T) int_0^T (1 - tau/T) Cov_yy(tau) dtau`.

mod estimators;
mod growth;
mod inhibition;
mod pipeline;
mod recurrence;
mod verdict;

pub use estimators::{
    covariance_curve, ensemble_average, limer_from_ensemble, limer_functional, time_average,
    CovarianceCurve, Estimate,
};
pub use growth::growth_rate_time_average;
pub use inhibition::{inhibition_limit_check, InhibitedProcess, InhibitionRow, INHIBITION_STEPS};
pub use pipeline::{
    additivity_from_ensembles, variance_additivity_check, AdditivityCheck, EnsembleConfig, Pipeline,
};
pub use recurrence::{detect_recurrence, RecurrenceRecord};
pub use verdict::{classify, mean_ergodicity_test, ErgodicityReport, Verdict, DEFAULT_TOLERANCE};
