//! Solver library for the static and dynamic multi-vehicle pickup-and-
//! delivery problem with time windows (m-PDPTW).
//!
//! Routes a fleet over paired pickup/delivery requests under precedence,
//! capacity, and soft time-window constraints, minimizing a weighted
//! compromise between total travel cost and total tardiness. Search is a
//! genetic algorithm over permutation/split chromosomes with correction
//! procedures and a Pareto archive; scaling coefficients come from
//! relaxation lower bounds. Dynamic requests are worked in either by greedy
//! best-position insertion or by re-optimizing the unfrozen route suffixes.
//!
//! With the default `parallel` feature, candidate evaluation and the
//! exhaustive oracle fan out over rayon; results are merged in input order,
//! so runs are bit-identical to the sequential build.

pub mod batch;
pub mod bounds;
pub mod dynamic;
pub mod evolution;
pub mod instance;
pub mod oracle;
pub mod pareto;
pub mod report;
pub mod schedule;

pub use bounds::{compute_bounds, scaling_coefficients, BoundsReport};
pub use dynamic::{
    apply_event, freeze_prefix, insert_method1, parse_events, run_dynamic, run_method2,
    DynamicEvent, DynamicRun, FrozenPlan, InsertionMethod,
};
pub use evolution::{run_static, Chromosome, GaConfig, PlanContext, RunStats};
pub use instance::{
    generate_synthetic, parse_lilim, serialize_lilim, validate_instance, Couple, Fleet, Instance,
    Node, NodeId, VehicleId,
};
pub use oracle::{enumerate_solutions, exact_front, OracleResult};
pub use pareto::{dominates, extract_front, ParetoArchive};
pub use report::{derive_events, RunReport};
pub use schedule::{
    aggregate_fitness, feasibility_report, objectives, propagate_schedule, total_tardiness,
    total_travel_cost, ObjectiveVector, RouteSchedule, Solution, Weights,
};
