//! Simulation and analysis toolkit for bipartite no-signaling boxes.
//!
//! The crate is organised around four pieces:
//!
//! * [`boxmodel`]: binary-input/binary-output correlation tables, the isotropic
//!   family parameterised by a correlation strength `E`, and single-use box
//!   instances that sample outcomes lazily.
//! * [`protocol`]: the inverted-pyramid guessing game for `N = 2^n` data bits,
//!   its multi-message variant, oblivious transfer and the dating game.
//! * [`analysis`]: binary entropy, information-causality violation tests,
//!   sufficient-condition bounds, mutual-information estimates and a numeric
//!   check of the Tsirelson-point inequality for every depth.
//! * [`polytope`]: deterministic vertices, PR-box variants and CHSH-facet
//!   classification of behaviours.
//!
//! Everything here is `no_std` (with `alloc`); file formats and the command
//! line live in the companion `infocausality-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod boxmodel;
pub mod error;
pub mod polytope;
pub mod protocol;
pub mod rng;

pub use boxmodel::{make_isotropic, BoxBehavior, BoxInstance, Correlation, InputPair, OutputPair, Side};
pub use error::{Error, Result};
