//! Stabilizer Bell inequalities on six-qubit graph states.
//!
//! Exact dense states for LC4/LC6/Y6/GHZ6, Bell operator expansion with
//! brute-force local-hidden-variable bounds, depolarizing decay, exact
//! stabilizer fidelities, and counting statistics for measured tables.

pub mod bell;
pub mod error;
pub mod experiment;
pub mod fidelity;
pub mod noise;
pub mod pauli;
pub mod state;

pub use bell::{expand_bell, lhv_search, lc6_operator, mermin_ghz6, named_operator, y6_operator, BellOperator, LhvSearch};
pub use error::{Error, Result};
pub use pauli::{PauliAxis, PauliString, Phase, QubitOrder};
pub use state::{build_named_state, GraphSpec, NamedState, StateVector};
pub use noise::{apply_depolarizing_dm, decay_curve, noisy_bell_value, noisy_expectation, violation_threshold, DecayCurve, DensityOperator, DepolarizingNoise, Grid, Threshold};
pub use fidelity::{exact_fidelity, gme_check, PauliExpectation, StabilizerGroup};
pub use experiment::{aggregate_bell, ingest_table, simulate_counts, simulate_operator, BellAggregate, IngestedTable, MeasurementRecord};
