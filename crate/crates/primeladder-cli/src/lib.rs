//! Driver, schedulers, and output formats around `primeladder-core`.

pub mod driver;
pub mod emit;
