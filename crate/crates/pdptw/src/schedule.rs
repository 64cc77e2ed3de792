//! Route schedules, feasibility reports, and the two objective components:
//! total travel cost (f1) and total tardiness (f2), aggregated into the
//! scalar fitness F = lambda1*c1*f1 + lambda2*c2*f2.

use crate::instance::{Instance, NodeId, VehicleId, DEPOT};
use serde::{Deserialize, Serialize};

/// One ordered route per vehicle, each beginning and ending at the depot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Solution {
    pub routes: Vec<Vec<NodeId>>,
}

impl Solution {
    pub fn empty(vehicles: usize) -> Self {
        Solution {
            routes: vec![vec![DEPOT, DEPOT]; vehicles],
        }
    }

    /// Number of routes visiting at least one non-depot node.
    pub fn used_vehicles(&self) -> usize {
        self.routes.iter().filter(|r| r.len() > 2).count()
    }

    pub fn visits(&self) -> impl Iterator<Item = (VehicleId, NodeId)> + '_ {
        self.routes
            .iter()
            .enumerate()
            .flat_map(|(k, r)| r.iter().map(move |&n| (k, n)))
    }
}

/// Timing and load trace for one visit of a route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleEntry {
    pub node: NodeId,
    pub arrival: f64,
    pub wait: f64,
    pub departure: f64,
    /// Goods on board after servicing this visit.
    pub load: f64,
}

/// Full arrival/wait/departure/load trace for one route.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteSchedule {
    pub entries: Vec<ScheduleEntry>,
}

impl RouteSchedule {
    pub fn departure_of(&self, node: NodeId) -> Option<f64> {
        self.entries.iter().find(|e| e.node == node).map(|e| e.departure)
    }
}

/// Propagates times and loads along a depot-bracketed route: the vehicle
/// leaves the depot at time 0, waits out early arrivals, and stops for the
/// service duration at every vertex.
pub fn propagate_schedule(inst: &Instance, k: VehicleId, route: &[NodeId]) -> RouteSchedule {
    assert!(
        route.len() >= 2 && route[0] == DEPOT && *route.last().unwrap() == DEPOT,
        "route must be depot-bracketed"
    );
    let mut entries = Vec::with_capacity(route.len());
    entries.push(ScheduleEntry {
        node: DEPOT,
        arrival: 0.0,
        wait: 0.0,
        departure: 0.0,
        load: 0.0,
    });
    for &node in &route[1..] {
        let prev = entries.last().unwrap();
        let n = inst.node(node);
        let arrival = prev.departure + inst.travel_time(k, prev.node, node);
        let wait = (n.ready - arrival).max(0.0);
        let departure = arrival.max(n.ready) + n.service;
        let load = prev.load + n.demand;
        entries.push(ScheduleEntry {
            node,
            arrival,
            wait,
            departure,
            load,
        });
    }
    RouteSchedule { entries }
}

/// Travel cost of a single route: unit cost of the vehicle times the summed
/// arc lengths.
pub fn route_travel_cost(inst: &Instance, k: VehicleId, route: &[NodeId]) -> f64 {
    let dist: f64 = route.windows(2).map(|w| inst.distance(w[0], w[1])).sum();
    inst.fleet.unit_cost(k) * dist
}

/// Tardiness of a single route: summed positive lateness of non-depot
/// departures against their window close.
pub fn route_tardiness(inst: &Instance, k: VehicleId, route: &[NodeId]) -> f64 {
    propagate_schedule(inst, k, route)
        .entries
        .iter()
        .filter(|e| e.node != DEPOT)
        .map(|e| (e.departure - inst.node(e.node).due).max(0.0))
        .sum()
}

pub fn total_travel_cost(inst: &Instance, sol: &Solution) -> f64 {
    sol.routes
        .iter()
        .enumerate()
        .map(|(k, r)| route_travel_cost(inst, k, r))
        .sum()
}

pub fn total_tardiness(inst: &Instance, sol: &Solution) -> f64 {
    sol.routes
        .iter()
        .enumerate()
        .map(|(k, r)| route_tardiness(inst, k, r))
        .sum()
}

/// The two criteria being minimized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector {
    /// Total travel cost.
    pub f1: f64,
    /// Total tardiness.
    pub f2: f64,
}

pub fn objectives(inst: &Instance, sol: &Solution) -> ObjectiveVector {
    ObjectiveVector {
        f1: total_travel_cost(inst, sol),
        f2: total_tardiness(inst, sol),
    }
}

/// Criterion weights and the lower-bound-derived scaling coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub lambda1: f64,
    pub lambda2: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Weights {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.lambda1 >= 0.0 && self.lambda2 >= 0.0) {
            return Err("lambda weights must be nonnegative".into());
        }
        if (self.lambda1 + self.lambda2 - 1.0).abs() > 1e-9 {
            return Err("lambda weights must sum to 1".into());
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0) {
            return Err("scaling coefficients must be positive".into());
        }
        Ok(())
    }
}

/// The scalar fitness F of an objective vector under the given weights.
pub fn aggregate_fitness(obj: ObjectiveVector, w: &Weights) -> f64 {
    w.lambda1 * w.c1 * obj.f1 + w.lambda2 * w.c2 * obj.f2
}

/// A breached solution constraint. Window breaches are soft (they feed f2);
/// everything else is hard.
#[derive(Debug, Clone, PartialEq)]
pub enum Breach {
    RouteCountMismatch { expected: usize, got: usize },
    NotDepotBracketed { vehicle: VehicleId },
    DepotInterior { vehicle: VehicleId },
    UnknownNode { vehicle: VehicleId, node: NodeId },
    DuplicateVisit { node: NodeId },
    MissingVisit { node: NodeId },
    CapacityExceeded { vehicle: VehicleId, node: NodeId, load: f64 },
    NegativeLoad { vehicle: VehicleId, node: NodeId, load: f64 },
    CoupleSplit { couple: usize },
    PrecedenceViolated { couple: usize },
    /// Soft: departure after the window close (counts toward f2).
    LateDeparture { vehicle: VehicleId, node: NodeId, lateness: f64 },
}

impl Breach {
    pub fn is_hard(&self) -> bool {
        !matches!(self, Breach::LateDeparture { .. })
    }
}

impl std::fmt::Display for Breach {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use Breach::*;
        match self {
            RouteCountMismatch { expected, got } => {
                write!(f, "solution has {got} routes for a fleet of {expected}")
            }
            NotDepotBracketed { vehicle } => write!(f, "vehicle {vehicle}: route not depot-bracketed"),
            DepotInterior { vehicle } => write!(f, "vehicle {vehicle}: depot in route interior"),
            UnknownNode { vehicle, node } => write!(f, "vehicle {vehicle}: unknown node {node}"),
            DuplicateVisit { node } => write!(f, "node {node} visited more than once"),
            MissingVisit { node } => write!(f, "node {node} never visited"),
            CapacityExceeded { vehicle, node, load } => {
                write!(f, "vehicle {vehicle}: load {load} over capacity at node {node}")
            }
            NegativeLoad { vehicle, node, load } => {
                write!(f, "vehicle {vehicle}: negative load {load} at node {node}")
            }
            CoupleSplit { couple } => write!(f, "couple {couple} split across vehicles"),
            PrecedenceViolated { couple } => {
                write!(f, "couple {couple}: customer departs at or before its supplier")
            }
            LateDeparture { vehicle, node, lateness } => {
                write!(f, "vehicle {vehicle}: node {node} departs {lateness} late (soft)")
            }
        }
    }
}

/// Checks a solution against every constraint of the model. Hard breaches
/// (visit-once, depot-bracketing, capacity, precedence, couple-pairing)
/// disqualify a solution; soft window breaches are informational.
pub fn feasibility_report(inst: &Instance, sol: &Solution) -> Vec<Breach> {
    use Breach::*;
    let mut out = Vec::new();
    if sol.routes.len() != inst.fleet.count() {
        out.push(RouteCountMismatch {
            expected: inst.fleet.count(),
            got: sol.routes.len(),
        });
    }

    let mut visit_count = vec![0usize; inst.nodes.len()];
    let mut vehicle_of = vec![usize::MAX; inst.nodes.len()];
    let mut departure_of = vec![f64::NAN; inst.nodes.len()];
    let mut position_of = vec![usize::MAX; inst.nodes.len()];

    for (k, route) in sol.routes.iter().enumerate() {
        if route.len() < 2 || route[0] != DEPOT || *route.last().unwrap() != DEPOT {
            out.push(NotDepotBracketed { vehicle: k });
            continue;
        }
        if route[1..route.len() - 1].contains(&DEPOT) {
            out.push(DepotInterior { vehicle: k });
            continue;
        }
        if let Some(&bad) = route.iter().find(|&&n| n >= inst.nodes.len()) {
            out.push(UnknownNode { vehicle: k, node: bad });
            continue;
        }
        let schedule = propagate_schedule(inst, k, route);
        for (pos, e) in schedule.entries.iter().enumerate() {
            if e.node == DEPOT {
                continue;
            }
            visit_count[e.node] += 1;
            vehicle_of[e.node] = k;
            departure_of[e.node] = e.departure;
            position_of[e.node] = pos;
            if e.load > inst.fleet.capacity(k) {
                out.push(CapacityExceeded {
                    vehicle: k,
                    node: e.node,
                    load: e.load,
                });
            }
            if e.load < 0.0 {
                out.push(NegativeLoad {
                    vehicle: k,
                    node: e.node,
                    load: e.load,
                });
            }
            let lateness = e.departure - inst.node(e.node).due;
            if lateness > 0.0 {
                out.push(LateDeparture {
                    vehicle: k,
                    node: e.node,
                    lateness,
                });
            }
        }
    }

    for node in 1..inst.nodes.len() {
        match visit_count[node] {
            0 => out.push(MissingVisit { node }),
            1 => {}
            _ => out.push(DuplicateVisit { node }),
        }
    }

    for (idx, c) in inst.couples.iter().enumerate() {
        if visit_count[c.pickup] != 1 || visit_count[c.delivery] != 1 {
            continue;
        }
        if vehicle_of[c.pickup] != vehicle_of[c.delivery] {
            out.push(CoupleSplit { couple: idx });
            continue;
        }
        if position_of[c.delivery] < position_of[c.pickup]
            || departure_of[c.delivery] <= departure_of[c.pickup]
        {
            out.push(PrecedenceViolated { couple: idx });
        }
    }
    out
}

/// True when the solution has no hard breach.
pub fn is_hard_feasible(inst: &Instance, sol: &Solution) -> bool {
    feasibility_report(inst, sol).iter().all(|b| !b.is_hard())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_synthetic, Couple, Fleet, Node};

    fn t1() -> Instance {
        let nodes = vec![
            Node { id: 0, x: 0.0, y: 0.0, demand: 0.0, ready: 0.0, due: 1000.0, service: 0.0 },
            Node { id: 1, x: 0.0, y: 3.0, demand: 5.0, ready: 0.0, due: 100.0, service: 0.0 },
            Node { id: 2, x: 4.0, y: 3.0, demand: -5.0, ready: 0.0, due: 100.0, service: 0.0 },
        ];
        Instance::new(
            nodes,
            vec![Couple { pickup: 1, delivery: 2 }],
            Fleet::homogeneous(1, 10.0, 1.0, 1.0),
        )
    }

    fn t1_route() -> Vec<NodeId> {
        vec![0, 1, 2, 0]
    }

    fn t1_solution() -> Solution {
        Solution { routes: vec![t1_route()] }
    }

    #[test]
    fn t1_schedule_trace() {
        let s = propagate_schedule(&t1(), 0, &t1_route());
        assert_eq!(s.entries[1].departure, 3.0);
        assert_eq!(s.entries[2].arrival, 7.0);
        assert_eq!(s.entries[2].departure, 7.0);
        let loads: Vec<f64> = s.entries.iter().map(|e| e.load).collect();
        assert_eq!(loads, vec![0.0, 5.0, 0.0, 0.0]);
    }

    #[test]
    fn waiting_delays_departure() {
        let mut inst = t1();
        inst.nodes[1].ready = 10.0;
        let inst = Instance::new(inst.nodes, inst.couples, inst.fleet);
        let s = propagate_schedule(&inst, 0, &t1_route());
        assert_eq!(s.entries[1].wait, 7.0);
        assert_eq!(s.entries[1].departure, 10.0);
        assert_eq!(s.entries[2].arrival, 14.0);
    }

    #[test]
    fn empty_route_is_all_zero() {
        let s = propagate_schedule(&t1(), 0, &[0, 0]);
        assert_eq!(s.entries.len(), 2);
        for e in &s.entries {
            assert_eq!((e.arrival, e.wait, e.departure, e.load), (0.0, 0.0, 0.0, 0.0));
        }
    }

    #[test]
    #[should_panic(expected = "depot-bracketed")]
    fn rejects_unbracketed_route() {
        propagate_schedule(&t1(), 0, &[0, 1, 2]);
    }

    #[test]
    fn travel_cost_of_t1() {
        assert_eq!(total_travel_cost(&t1(), &t1_solution()), 12.0);
    }

    #[test]
    fn travel_cost_of_idle_fleet_is_zero() {
        let sol = Solution::empty(1);
        assert_eq!(total_travel_cost(&t1(), &sol), 0.0);
    }

    #[test]
    fn travel_cost_linear_in_unit_cost() {
        let inst = t1();
        let doubled = Instance::new(inst.nodes.clone(), inst.couples.clone(), inst.fleet.scale_costs(2.0));
        assert_eq!(
            total_travel_cost(&doubled, &t1_solution()),
            2.0 * total_travel_cost(&inst, &t1_solution())
        );
    }

    #[test]
    fn tardiness_of_t1_is_zero() {
        assert_eq!(total_tardiness(&t1(), &t1_solution()), 0.0);
    }

    #[test]
    fn tardiness_counts_late_departures() {
        let mut inst = t1();
        inst.nodes[2].due = 5.0;
        let inst = Instance::new(inst.nodes, inst.couples, inst.fleet);
        assert_eq!(total_tardiness(&inst, &t1_solution()), 2.0);
    }

    #[test]
    fn tardiness_vanishes_with_open_windows() {
        let mut inst = t1();
        for n in inst.nodes.iter_mut() {
            n.due = f64::INFINITY;
        }
        let inst = Instance::new(inst.nodes, inst.couples, inst.fleet);
        assert_eq!(total_tardiness(&inst, &t1_solution()), 0.0);
    }

    #[test]
    fn aggregate_fitness_weighted_sum() {
        let w = Weights { lambda1: 0.5, lambda2: 0.5, c1: 1.0 / 9.0, c2: 1.0 };
        let f = aggregate_fitness(ObjectiveVector { f1: 12.0, f2: 0.0 }, &w);
        assert!((f - 2.0 / 3.0).abs() <= 1e-12);
        assert_eq!(aggregate_fitness(ObjectiveVector { f1: 0.0, f2: 0.0 }, &w), 0.0);
        let mask = Weights { lambda1: 1.0, lambda2: 0.0, c1: 1.0, c2: 1.0 };
        assert_eq!(aggregate_fitness(ObjectiveVector { f1: 7.0, f2: 99.0 }, &mask), 7.0);
    }

    #[test]
    fn feasibility_accepts_t1() {
        assert!(is_hard_feasible(&t1(), &t1_solution()));
    }

    #[test]
    fn feasibility_flags_precedence() {
        let sol = Solution { routes: vec![vec![0, 2, 1, 0]] };
        let report = feasibility_report(&t1(), &sol);
        assert!(report.contains(&Breach::PrecedenceViolated { couple: 0 }));
    }

    #[test]
    fn feasibility_flags_capacity() {
        let inst = t1();
        let tight = Instance::new(inst.nodes, inst.couples, Fleet::homogeneous(1, 4.0, 1.0, 1.0));
        let report = feasibility_report(&tight, &t1_solution());
        assert!(report
            .iter()
            .any(|b| matches!(b, Breach::CapacityExceeded { node: 1, .. })));
    }

    #[test]
    fn feasibility_flags_split_couple() {
        let inst = t1();
        let two = Instance::new(inst.nodes, inst.couples, Fleet::homogeneous(2, 10.0, 1.0, 1.0));
        let sol = Solution { routes: vec![vec![0, 1, 0], vec![0, 2, 0]] };
        let report = feasibility_report(&two, &sol);
        assert!(report.contains(&Breach::CoupleSplit { couple: 0 }));
    }

    #[test]
    fn window_breach_is_soft() {
        let mut inst = t1();
        inst.nodes[2].due = 5.0;
        let inst = Instance::new(inst.nodes, inst.couples, inst.fleet);
        let report = feasibility_report(&inst, &t1_solution());
        assert!(report.iter().all(|b| !b.is_hard()));
        assert!(report
            .iter()
            .any(|b| matches!(b, Breach::LateDeparture { node: 2, .. })));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn random_full_solution(inst: &Instance, seed: u64) -> Solution {
            use rand::prelude::*;
            use rand_chacha::ChaCha8Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut routes = vec![vec![DEPOT]; inst.fleet.count()];
            for c in &inst.couples {
                let k = rng.random_range(0..inst.fleet.count());
                routes[k].push(c.pickup);
                routes[k].push(c.delivery);
            }
            for r in routes.iter_mut() {
                r.push(DEPOT);
            }
            Solution { routes }
        }

        proptest! {
            #[test]
            fn f1_is_route_additive(seed in 0u64..300, n in 1usize..6) {
                let inst = generate_synthetic(n, 0.5, seed);
                let sol = random_full_solution(&inst, seed ^ 0xabcd);
                let total = total_travel_cost(&inst, &sol);
                let per_route: f64 = sol
                    .routes
                    .iter()
                    .enumerate()
                    .map(|(k, r)| route_travel_cost(&inst, k, r))
                    .sum();
                prop_assert!((total - per_route).abs() < 1e-9);
            }

            #[test]
            fn zero_tardiness_iff_all_departures_in_window(seed in 0u64..300, n in 1usize..6) {
                let inst = generate_synthetic(n, 0.3, seed);
                let sol = random_full_solution(&inst, seed ^ 0x1234);
                let f2 = total_tardiness(&inst, &sol);
                let mut any_late = false;
                for (k, r) in sol.routes.iter().enumerate() {
                    for e in propagate_schedule(&inst, k, r).entries {
                        if e.node != DEPOT && e.departure > inst.node(e.node).due {
                            any_late = true;
                        }
                    }
                }
                prop_assert_eq!(f2 > 0.0, any_late);
            }

            #[test]
            fn complete_couples_end_with_empty_load(seed in 0u64..300, n in 1usize..6) {
                let inst = generate_synthetic(n, 0.5, seed);
                let sol = random_full_solution(&inst, seed ^ 0x9999);
                for (k, r) in sol.routes.iter().enumerate() {
                    let s = propagate_schedule(&inst, k, r);
                    prop_assert_eq!(s.entries.last().unwrap().load, 0.0);
                }
            }

            #[test]
            fn fitness_order_invariant_under_joint_scaling(
                seed in 0u64..200,
                pow in -8i32..8,
            ) {
                // Power-of-two factors keep the float products exact.
                let alpha = (2.0f64).powi(pow);
                let w = Weights { lambda1: 0.5, lambda2: 0.5, c1: 0.25, c2: 1.0 };
                let scaled = Weights { c1: w.c1 / alpha, ..w };
                let inst = generate_synthetic(3, 0.5, seed);
                let sol = random_full_solution(&inst, seed ^ 0x7777);
                let obj = objectives(&inst, &sol);
                let obj_scaled = ObjectiveVector { f1: obj.f1 * alpha, f2: obj.f2 };
                prop_assert_eq!(
                    aggregate_fitness(obj, &w),
                    aggregate_fitness(obj_scaled, &scaled)
                );
            }

            #[test]
            fn permuting_empty_routes_changes_nothing(seed in 0u64..200) {
                let inst = generate_synthetic(2, 0.5, seed);
                // Couples all on vehicle 0; the rest idle.
                let mut routes = vec![vec![DEPOT]; inst.fleet.count().max(2)];
                for c in &inst.couples {
                    routes[0].push(c.pickup);
                    routes[0].push(c.delivery);
                }
                for r in routes.iter_mut() {
                    r.push(DEPOT);
                }
                let fleet = Fleet::homogeneous(routes.len(), 100.0, 1.0, 1.0);
                let inst = Instance::new(inst.nodes.clone(), inst.couples.clone(), fleet);
                let a = Solution { routes: routes.clone() };
                let mut swapped = routes;
                let last = swapped.len() - 1;
                swapped.swap(1, last);
                let b = Solution { routes: swapped };
                prop_assert_eq!(objectives(&inst, &a), objectives(&inst, &b));
            }
        }
    }
}
