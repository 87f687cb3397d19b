//! Maximal quantum violation of the CGLMP Bell inequality for two qudits.
//!
//! Two independent routes compute the same Bell value:
//!
//! * the probability route ([`probability`]) evaluates joint outcome
//!   probabilities of two Bell multiports and assembles the correlation
//!   functions directly;
//! * the operator route ([`operator`], [`spectral`], [`states`]) contracts
//!   Schmidt coefficients against the reduced Toeplitz Bell operator, whose
//!   largest eigenvalue is the maximal violation.
//!
//! ```
//! use cglmp::{operator::reduced_bell_coefficients, spectral::max_eigenpair_default};
//!
//! let op = reduced_bell_coefficients(3).unwrap();
//! let eig = max_eigenpair_default(&op).unwrap();
//! assert!((eig.eigenvalue - (1.0 + (11.0f64 / 3.0).sqrt())).abs() < 1e-10);
//! ```

pub mod cli;
pub mod error;
pub mod fit;
pub mod operator;
pub mod probability;
pub mod qudit;
pub mod spectral;
pub mod states;

pub use error::{Error, Result};
pub use fit::{fit_power_law, FitModel};
pub use operator::{
    extract_first_block, full_bell_matrix, reduced_bell_coefficients,
    reduced_bell_coefficients_sinesum, FullBellMatrix, ReducedBellOperator,
};
pub use probability::{bell_value_probabilistic, correlation_q, joint_probabilities, JointProbabilityTable};
pub use qudit::{
    epsilon, f_coeff, make_optimal_settings, mod_d, BellValue, GeneralState, MeasurementSettings,
    SchmidtState,
};
pub use spectral::{
    autocorrelation, dense_max_eigenpair, max_eigenpair, max_eigenpair_default, toeplitz_matvec,
    EigenResult,
};
pub use states::{
    app_state, app_vs_eig_error, bell_value_schmidt, i_d_mes_closed, i_d_mes_limit, mes_state,
};
