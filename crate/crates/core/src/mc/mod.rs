//! Seeded simulation of the encoded-gate algorithms and the underlying walks.

mod process;
mod report;
mod sim;
mod stats;

pub use process::{process_expectation, ProcessExpectation};
pub use report::{mc_report, ComparisonRow, McReport, Source, MIN_REPORT_TRIALS, Z_GATE};
pub use sim::{
    cnot_trial, sim_cnot, sim_walk, sim_z90, simulate, z90_trial, Algorithm, GateProcess, McError, Role,
    RngStream, Stage, StageCosts, TeleportOrder, TraceEvent, TrialOutcome, WalkReport, RunReport,
};
pub use stats::Estimate;
