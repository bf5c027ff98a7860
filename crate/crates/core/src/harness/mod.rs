//! Sweeps, CSV tables and the invariant suite driven by the `lplde` binary.

pub mod erratum;
pub mod selfcheck;
pub mod sweep;
pub mod table;
pub mod trajectory;

pub use erratum::{erratum_markdown, erratum_rows, erratum_table, ErratumRow};
pub use selfcheck::{run_selfcheck, CheckOutcome};
pub use sweep::{evaluate, run_sweep, FixedParams, SweepMethod, SweepSpec, SweepVariable};
pub use table::{format_number, ResultTable};
pub use trajectory::{compare_trajectory, TrajectoryComparison};
