//! Parameter sweeps, table output and the `lmg3` command line.

pub mod cli;
pub mod emit;
pub mod sweep;

pub use cli::cli_main;
pub use emit::{emit_table, Format};
pub use sweep::{preset, run_sweep, Quantity, SweepSpec, SweepTable};
