//! Affective decision theory at desk scale.
//!
//! Behavioral probabilities are built as `p = f + q`: a utility factor `f`
//! obtained from expected utilities, plus an attraction factor `q` carrying the
//! emotional bias of a choice. On top of that sit a catalog of classic choice
//! paradoxes, a two-group network model with memory and herding, and a small
//! dense-matrix toolkit for noise-decorated projective measurements.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;

pub mod attraction;
pub mod decision;
pub mod lottery;
pub mod network;
pub mod paradox;
pub mod qmeasure;
pub mod utility;

pub use error::{Error, Result};
pub use lottery::{expected_utility, gain_loss_number, Lottery, Utility};
