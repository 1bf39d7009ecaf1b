//! Entanglement production by operators on tensor-product Hilbert spaces.
//!
//! The crate computes how strongly an operator `A` maps product states into
//! entangled ones by comparing its norm with that of its non-entangling
//! counterpart `A⊗`, built from the single-site partial traces of `A`.
//! Evolution operators `exp(-iHt)` and Gibbs operators `exp(-βH)/Z` are the
//! main customers; [`models`] holds the two-qubit Ising register with its
//! closed-form answer.
//!
//! ```
//! use entprod::{evolutional_measure, ising2_hamiltonian, Ising2Params};
//!
//! let h = ising2_hamiltonian(Ising2Params { h: 1.0, j: 1.0 });
//! let eps = evolutional_measure(&h, std::f64::consts::FRAC_PI_4).unwrap().epsilon;
//! assert!((eps - 0.5 * (2.5f64 / 2.25).ln()).abs() < 1e-12);
//! ```

// `!(x >= y)` is used on purpose so that NaN fails range checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod matrix;
pub mod measure;
pub mod models;
pub mod space;

pub use error::{Error, Result};
pub use matrix::{
    evolve_operator, hermitian_eig, imaginary_time_operator, kron, Complex64, ComplexMatrix,
    EigenSystem, SchattenIndex,
};
pub use measure::{
    entanglement_probability, entanglement_production, evolutional_measure,
    nonentangling_counterpart, richardson, short_time_mu, thermal_measure_direct,
    thermal_measure_partition, Extrapolation, LogBase, MeasureResult, ThermalResult, ThermalRoute,
};
pub use models::{
    classify_periodicity, ising2_hamiltonian, ising2_measure_closed_form, ising2_short_time,
    ising_chain_hamiltonian, period_defect, random_operator, verify_period, Ising2Params,
    PeriodCheck, PeriodClass, RandomKind, RationalTolerance,
};
pub use space::{
    embed_local, partial_trace_keep, product_state, OperatorOnSpace, SpaceStructure, StateVector,
};
