//! Multi-task sequence autoencoder lab.
//!
//! A character-level LSTM encoder produces a fixed-size sentence
//! representation that several task decoders (replication, two synthetic
//! translations and part-of-speech tagging) are trained to consume. The
//! remaining modules analyze the representation space: K-means syntax
//! clustering, linear interpolation and representation arithmetic.
//!
//! The crate is `no_std` and needs only `alloc`; file IO and the command line
//! live in the companion `mtae` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod autodiff;
pub mod clusterlab;
pub mod corpus;
pub mod latentlab;
pub mod prototypes;
pub mod seqmodel;
pub mod task;
pub mod training;

pub use task::Task;
