//! Dynamic m-PDPTW: event timeline, frozen-prefix computation, greedy
//! insertion of urgent couples (method 1) and genetic re-optimization of the
//! unfrozen route suffixes (method 2).

use crate::bounds::weights_for;
use crate::evolution::{
    run_static, run_with_context, EvolveError, GaConfig, PlanContext, RouteStub, RunStats,
};
use crate::instance::{Instance, Node, NodeId, VehicleId, DEPOT};
use crate::pareto::ParetoArchive;
use crate::schedule::{
    aggregate_fitness, objectives, propagate_schedule, ObjectiveVector, Solution, Weights,
};
use serde::{Deserialize, Serialize};
use std::time::Instant;
use thiserror::Error;

/// Node payload of a dynamic request (ids are assigned on application).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeData {
    pub x: f64,
    pub y: f64,
    pub demand: f64,
    pub ready: f64,
    pub due: f64,
    pub service: f64,
}

impl NodeData {
    fn into_node(self) -> Node {
        Node {
            id: 0,
            x: self.x,
            y: self.y,
            demand: self.demand,
            ready: self.ready,
            due: self.due,
            service: self.service,
        }
    }
}

/// An urgent couple appearing at time `time` while vehicles are under way.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicEvent {
    pub time: f64,
    pub pickup: NodeData,
    pub delivery: NodeData,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EventError {
    #[error("line {line}: expected 13 comma-separated fields, got {got}")]
    FieldCount { line: usize, got: usize },
    #[error("line {line}: cannot parse field {field}")]
    BadNumber { line: usize, field: &'static str },
    #[error("line {line}: delivery quantity must equal the negated pickup quantity")]
    UnbalancedQuantities { line: usize },
    #[error("line {line}: appearance time must be nonnegative")]
    NegativeTime { line: usize },
}

/// Parses the event CSV: one `t_d,px,py,pq,pe,pl,ps,dx,dy,dq,de,dl,ds` row
/// per event.
pub fn parse_events(text: &str) -> Result<Vec<DynamicEvent>, EventError> {
    const FIELDS: [&str; 13] = [
        "t_d", "px", "py", "pq", "pe", "pl", "ps", "dx", "dy", "dq", "de", "dl", "ds",
    ];
    let mut events = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let tokens: Vec<&str> = raw.split(',').map(str::trim).collect();
        if tokens.len() != 13 {
            return Err(EventError::FieldCount {
                line,
                got: tokens.len(),
            });
        }
        let mut vals = [0.0f64; 13];
        for (i, t) in tokens.iter().enumerate() {
            vals[i] = t
                .parse()
                .map_err(|_| EventError::BadNumber { line, field: FIELDS[i] })?;
        }
        if vals[0] < 0.0 {
            return Err(EventError::NegativeTime { line });
        }
        if vals[3] + vals[9] != 0.0 || vals[3] <= 0.0 {
            return Err(EventError::UnbalancedQuantities { line });
        }
        events.push(DynamicEvent {
            time: vals[0],
            pickup: NodeData { x: vals[1], y: vals[2], demand: vals[3], ready: vals[4], due: vals[5], service: vals[6] },
            delivery: NodeData { x: vals[7], y: vals[8], demand: vals[9], ready: vals[10], due: vals[11], service: vals[12] },
        });
    }
    Ok(events)
}

/// Renders events back into the CSV layout accepted by [`parse_events`].
pub fn format_events(events: &[DynamicEvent]) -> String {
    let mut out = String::new();
    for e in events {
        let p = &e.pickup;
        let d = &e.delivery;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            e.time, p.x, p.y, p.demand, p.ready, p.due, p.service, d.x, d.y, d.demand, d.ready, d.due, d.service,
        ));
    }
    out
}

/// Extends the instance with the event couple; the new nodes take the next
/// two ids. Returns the extended instance and the new couple's index.
pub fn apply_event(inst: &Instance, ev: &DynamicEvent) -> (Instance, usize) {
    inst.with_couple(ev.pickup.into_node(), ev.delivery.into_node())
}

/// Committed state of one route at an event time.
#[derive(Debug, Clone, PartialEq)]
pub struct FrozenRoute {
    /// The committed visits, starting at the depot.
    pub visits: Vec<NodeId>,
    /// Departure time of the last committed visit.
    pub release_time: f64,
    /// Node at which the vehicle becomes re-plannable.
    pub release_node: NodeId,
    /// Whole route committed, terminal depot included.
    pub closed: bool,
}

/// Per-vehicle frozen prefixes of a solution at one event time.
#[derive(Debug, Clone, PartialEq)]
pub struct FrozenPlan {
    pub base: Solution,
    pub time: f64,
    pub routes: Vec<FrozenRoute>,
}

/// Fixes every visit whose departure time lies at or before `t_d`. The depot
/// start is always committed; a fully departed route (terminal depot
/// included) closes its vehicle for re-planning. A vehicle that never left
/// the depot has nothing under way and stays dispatchable at any time.
pub fn freeze_prefix(inst: &Instance, sol: &Solution, t_d: f64) -> FrozenPlan {
    assert!(t_d >= 0.0, "event times are nonnegative");
    let mut routes = Vec::with_capacity(sol.routes.len());
    for (k, route) in sol.routes.iter().enumerate() {
        if route.len() == 2 {
            routes.push(FrozenRoute {
                visits: vec![DEPOT],
                release_time: 0.0,
                release_node: DEPOT,
                closed: false,
            });
            continue;
        }
        let schedule = propagate_schedule(inst, k, route);
        let mut frozen_len = 1;
        while frozen_len < route.len() && schedule.entries[frozen_len].departure <= t_d {
            frozen_len += 1;
        }
        routes.push(FrozenRoute {
            visits: route[..frozen_len].to_vec(),
            release_time: schedule.entries[frozen_len - 1].departure,
            release_node: route[frozen_len - 1],
            closed: frozen_len == route.len(),
        });
    }
    FrozenPlan {
        base: sol.clone(),
        time: t_d,
        routes,
    }
}

impl FrozenPlan {
    /// Nodes of the base solution that are still re-plannable.
    pub fn unfrozen_nodes(&self) -> Vec<NodeId> {
        let mut free = Vec::new();
        for (k, route) in self.base.routes.iter().enumerate() {
            let start = self.routes[k].visits.len();
            let end = if self.routes[k].closed { start } else { route.len() - 1 };
            free.extend(route[start..end].iter().copied());
        }
        free
    }

    /// Plan context whose chromosomes cover the unfrozen nodes plus
    /// `extra_nodes`, decoded behind the committed prefixes.
    pub fn context<'a>(&self, inst: &'a Instance, weights: Weights, extra_nodes: &[NodeId]) -> PlanContext<'a> {
        let stubs = self
            .routes
            .iter()
            .map(|r| RouteStub {
                visits: r.visits.clone(),
                closed: r.closed,
            })
            .collect();
        let mut free = self.unfrozen_nodes();
        free.extend_from_slice(extra_nodes);
        PlanContext::new(inst, weights, stubs, free)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InsertionError {
    #[error("no capacity-feasible placement exists for couple {couple}")]
    NoPlacement { couple: usize },
}

/// One capacity-feasible way of inserting a couple into the frozen plan.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub vehicle: VehicleId,
    pub solution: Solution,
    pub objectives: ObjectiveVector,
    pub fitness: f64,
}

fn route_within_capacity(inst: &Instance, k: VehicleId, route: &[NodeId]) -> bool {
    let mut load = 0.0;
    for &n in route {
        load += inst.node(n).demand;
        if load > inst.fleet.capacity(k) || load < 0.0 {
            return false;
        }
    }
    true
}

/// Every capacity-feasible placement of the couple's pickup and delivery in
/// some vehicle's unfrozen suffix, pickup strictly before delivery, scored
/// on the full solution. Enumeration order is vehicle-major, then pickup
/// slot, then delivery slot.
pub fn enumerate_placements(
    inst: &Instance,
    frozen: &FrozenPlan,
    couple: usize,
    weights: &Weights,
) -> Vec<Placement> {
    let c = inst.couples[couple];
    let (pickup, delivery) = (c.pickup, c.delivery);
    let mut out = Vec::new();
    for (k, fr) in frozen.routes.iter().enumerate() {
        if fr.closed {
            continue;
        }
        let route = &frozen.base.routes[k];
        let start = fr.visits.len();
        let suffix: Vec<NodeId> = route[start..route.len() - 1].to_vec();
        for a in 0..=suffix.len() {
            for b in a..=suffix.len() {
                let mut tail = suffix.clone();
                tail.insert(a, pickup);
                tail.insert(b + 1, delivery);
                let mut new_route = fr.visits.clone();
                new_route.extend_from_slice(&tail);
                new_route.push(DEPOT);
                if !route_within_capacity(inst, k, &new_route) {
                    continue;
                }
                let mut solution = frozen.base.clone();
                solution.routes[k] = new_route;
                let obj = objectives(inst, &solution);
                out.push(Placement {
                    vehicle: k,
                    solution,
                    objectives: obj,
                    fitness: aggregate_fitness(obj, weights),
                });
            }
        }
    }
    out
}

/// Greedy insertion: the placement minimizing the aggregate fitness over
/// the full enumeration. Frozen prefixes and the relative order of all
/// other visits are untouched.
pub fn insert_method1(
    inst: &Instance,
    frozen: &FrozenPlan,
    couple: usize,
    weights: &Weights,
) -> Result<Placement, InsertionError> {
    enumerate_placements(inst, frozen, couple, weights)
        .into_iter()
        .min_by(|a, b| a.fitness.total_cmp(&b.fitness))
        .ok_or(InsertionError::NoPlacement { couple })
}

/// Genetic re-optimization of the unfrozen suffixes plus the new couples.
/// Decoding prepends the committed prefixes, so every archived solution
/// extends them.
pub fn run_method2(
    inst: &Instance,
    frozen: &FrozenPlan,
    new_couples: &[usize],
    cfg: &GaConfig,
) -> Result<(ParetoArchive, RunStats), EvolveError> {
    let weights = weights_for(inst, cfg.lambda1, cfg.lambda2)?;
    let mut extra = Vec::new();
    for &c in new_couples {
        extra.push(inst.couples[c].pickup);
        extra.push(inst.couples[c].delivery);
    }
    let ctx = frozen.context(inst, weights, &extra);
    run_with_context(&ctx, cfg)
}

/// How dynamic couples are worked into the running plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InsertionMethod {
    /// Method 1: best-position insertion into the incumbent.
    Greedy,
    /// Method 2: genetic re-optimization of the unfrozen suffixes.
    Reoptimize,
}

/// Result of inserting one event into one archive entry (method 1 probes
/// every entry; the incumbent drives the timeline).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryInsertion {
    pub entry: usize,
    pub served: bool,
    pub objectives: Option<ObjectiveVector>,
    pub fitness: Option<f64>,
}

/// Outcome of one processed event.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub index: usize,
    pub time: f64,
    pub served: bool,
    /// Vehicle hosting the couple (method 1 only).
    pub vehicle: Option<VehicleId>,
    /// Objectives and fitness of the plan adopted after the event.
    pub objectives: Option<ObjectiveVector>,
    pub fitness: Option<f64>,
    /// Per-archive-entry insertion probes (method 1 only).
    pub per_entry: Vec<EntryInsertion>,
    /// The committed prefix of every route at this event time.
    pub committed: Vec<Vec<NodeId>>,
}

/// Full dynamic run output: the final archive over the final instance, the
/// per-event outcomes, and the accumulated statistics.
#[derive(Debug, Clone)]
pub struct DynamicRun {
    pub instance: Instance,
    pub archive: ParetoArchive,
    pub weights: Weights,
    pub records: Vec<EventRecord>,
    pub stats: RunStats,
}

fn derive_seed(base: u64, event: usize) -> u64 {
    // SplitMix64 step keyed by the event index.
    let mut z = base ^ (event as u64 + 1).wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn retain_extending(archive: &ParetoArchive, committed: &[Vec<NodeId>], capacity: Option<usize>) -> ParetoArchive {
    let mut out = ParetoArchive::new(capacity);
    for e in archive.entries() {
        let extends = committed
            .iter()
            .enumerate()
            .all(|(k, prefix)| e.solution.routes[k].starts_with(prefix));
        if extends {
            out.insert(e.objectives, e.solution.clone());
        }
    }
    out
}

/// Plans statically, then replays the events in time order: freeze the
/// incumbent at t_d, work the couple in with the selected method, and carry
/// the surviving archive forward. Unserved couples are recorded and left
/// out of the plan rather than aborting the run.
pub fn run_dynamic(
    inst: &Instance,
    events: &[DynamicEvent],
    cfg: &GaConfig,
    method: InsertionMethod,
) -> Result<DynamicRun, EvolveError> {
    assert!(
        events.windows(2).all(|w| w[0].time <= w[1].time),
        "events must be sorted by appearance time"
    );
    let start = Instant::now();
    let (mut archive, static_stats) = run_static(inst, cfg)?;
    let mut current = inst.clone();
    let mut evaluations = static_stats.evaluations;
    let mut generations = static_stats.generations;
    let mut best_fitness_per_generation = static_stats.best_fitness_per_generation.clone();
    let mut records = Vec::with_capacity(events.len());

    for (index, ev) in events.iter().enumerate() {
        let (extended, couple_idx) = apply_event(&current, ev);
        let weights = weights_for(&extended, cfg.lambda1, cfg.lambda2)?;
        let incumbent = archive
            .min_fitness_entry(&weights)
            .expect("archive holds at least one entry")
            .clone();
        let frozen = freeze_prefix(&extended, &incumbent.solution, ev.time);
        let committed: Vec<Vec<NodeId>> = frozen.routes.iter().map(|r| r.visits.clone()).collect();

        match method {
            InsertionMethod::Greedy => {
                let per_entry: Vec<EntryInsertion> = archive
                    .entries()
                    .iter()
                    .enumerate()
                    .map(|(entry, e)| {
                        let fz = freeze_prefix(&extended, &e.solution, ev.time);
                        match insert_method1(&extended, &fz, couple_idx, &weights) {
                            Ok(p) => EntryInsertion {
                                entry,
                                served: true,
                                objectives: Some(p.objectives),
                                fitness: Some(p.fitness),
                            },
                            Err(_) => EntryInsertion {
                                entry,
                                served: false,
                                objectives: None,
                                fitness: None,
                            },
                        }
                    })
                    .collect();
                let placements = enumerate_placements(&extended, &frozen, couple_idx, &weights);
                evaluations += placements.len();
                if placements.is_empty() {
                    archive = retain_extending(&archive, &committed, cfg.archive_capacity);
                    records.push(EventRecord {
                        index,
                        time: ev.time,
                        served: false,
                        vehicle: None,
                        objectives: None,
                        fitness: None,
                        per_entry,
                        committed,
                    });
                    continue;
                }
                let chosen = placements
                    .iter()
                    .min_by(|a, b| a.fitness.total_cmp(&b.fitness))
                    .cloned()
                    .expect("nonempty placements");
                let mut next = ParetoArchive::new(cfg.archive_capacity);
                for p in &placements {
                    next.insert(p.objectives, p.solution.clone());
                }
                archive = next;
                current = extended;
                records.push(EventRecord {
                    index,
                    time: ev.time,
                    served: true,
                    vehicle: Some(chosen.vehicle),
                    objectives: Some(chosen.objectives),
                    fitness: Some(chosen.fitness),
                    per_entry,
                    committed,
                });
            }
            InsertionMethod::Reoptimize => {
                let sub_cfg = GaConfig {
                    seed: derive_seed(cfg.seed, index),
                    ..cfg.clone()
                };
                let outcome = run_method2(&extended, &frozen, &[couple_idx], &sub_cfg);
                match outcome {
                    Ok((arch, stats)) if !arch.is_empty() => {
                        evaluations += stats.evaluations;
                        generations += stats.generations;
                        best_fitness_per_generation.extend(stats.best_fitness_per_generation);
                        let chosen = arch.min_fitness_entry(&weights).unwrap();
                        records.push(EventRecord {
                            index,
                            time: ev.time,
                            served: true,
                            vehicle: None,
                            objectives: Some(chosen.objectives),
                            fitness: Some(aggregate_fitness(chosen.objectives, &weights)),
                            per_entry: Vec::new(),
                            committed,
                        });
                        archive = arch;
                        current = extended;
                    }
                    Ok(_) | Err(EvolveError::NoFeasibleIndividuals) => {
                        archive = retain_extending(&archive, &committed, cfg.archive_capacity);
                        records.push(EventRecord {
                            index,
                            time: ev.time,
                            served: false,
                            vehicle: None,
                            objectives: None,
                            fitness: None,
                            per_entry: Vec::new(),
                            committed,
                        });
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }

    let weights = weights_for(&current, cfg.lambda1, cfg.lambda2)?;
    let stats = RunStats {
        n_sol: archive.len(),
        vehicles_used: archive.entries().iter().map(|e| e.solution.used_vehicles()).collect(),
        generations,
        evaluations,
        best_fitness_per_generation,
        wall: start.elapsed(),
    };
    Ok(DynamicRun {
        instance: current,
        archive,
        weights,
        records,
        stats,
    })
}
