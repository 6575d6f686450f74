//! File formats, experiment drivers and the `mtae` command line for the
//! multi-task autoencoder lab. The models and analyses live in `mtae-core`.

pub mod cli;
pub mod config;
pub mod experiments;
pub mod io;

