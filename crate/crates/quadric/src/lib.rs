//! File formats, JSON reports and the command-line front end for
//! [`quadric_core`].
//!
//! * [`document`]: complexes as JSON documents with exact rationals.
//! * [`report`]: the versioned envelope every JSON report is wrapped in.
//! * [`table`]: CSV tables.
//! * [`svg`]: the moment image picture.
//! * [`cli`]: argument parsing and dispatch for the `quadric` binary.

pub mod cli;
pub mod document;
pub mod report;
pub mod svg;
pub mod table;
