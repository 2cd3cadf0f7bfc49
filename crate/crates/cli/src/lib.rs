//! Command-line harness over the `uniplex` library: sampling, one-shot
//! analyses, and seeded Monte Carlo scans with CSV/JSON output.

pub mod config;
pub mod experiments;
pub mod format;
pub mod records;
