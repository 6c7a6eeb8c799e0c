//! Operational pieces: file format, reports, generators, oracle checks and
//! timing.

pub mod bench;
pub mod corpus;
pub mod envelope;
pub mod stats;
pub mod verify;
