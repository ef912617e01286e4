//! Verifiers, bound calculators, censuses and the experiment harness.

pub mod bounds;
pub mod census;
pub mod experiment;
pub mod trajectory;

pub use bounds::{
    bound_report, check_lll_condition, first_moment, first_moment_crossover, first_moment_log,
    lll_threshold, AnalysisError, BoundReport, LllConditionReport,
};
pub use census::{
    common_neighbour_census, common_neighbour_census_sampled, matching_census,
    CommonNeighbourCensus, MatchingCensus,
};
pub use experiment::{run_experiment, success_curve_csv, ExperimentParams, ExperimentReport, SolverKind};
pub use trajectory::{trajectory_report, TrajectoryReport, SHRINK_TOLERANCE};
