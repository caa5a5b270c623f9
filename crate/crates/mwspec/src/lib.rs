//! File formats, reports, campaigns and the command-line driver built on
//! `mwspec-core`.

pub mod bench;
pub mod campaign;
pub mod cli;
pub mod format;
pub mod golden;
pub mod io;
pub mod report;
