//! Sweep driver and dataset emitters for the coupled-waveguide squeezing model.

pub mod config;
pub mod emit;
pub mod presets;
pub mod sweep;

pub use config::{ConfigError, SweepConfig};
pub use emit::{emit, Format};
pub use sweep::{run_sweep, run_sweep_with_threads, Dataset, RunError};
