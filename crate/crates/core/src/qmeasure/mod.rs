//! Decorated events in a tensor-product space: probabilities, the
//! utility/attraction split, consecutive and synchronous measurements,
//! entanglement production and a randomized property suite.

pub mod dynamics;
pub mod events;
pub mod matrix;
pub mod random;
pub mod suite;

pub use dynamics::{
    consecutive_probabilities, luders_reduce, master_equation_2x2, swap_factors, swap_function,
    swap_function_symmetric, synchronous_probability, Consecutive,
};
pub use events::{
    check_state, completeness, decohere, decorated_projector, entanglement_production,
    event_probability, event_probability_explicit, schmidt_rank, separable_state, split_fq,
    superposition_probability, NoiseProfile, StateCheck,
};
pub use matrix::{CMatrix, C};
pub use suite::{run_suite, SuiteReport, SuiteRow};
