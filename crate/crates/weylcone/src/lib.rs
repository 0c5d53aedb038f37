//! Command line, exchange formats and seeded checks on top of
//! `weylcone-core`.

pub mod checks;
pub mod cli;
pub mod json;
pub mod off;

pub use weylcone_core as core;
