//! Exhaustive enumeration of all hard-feasible solutions on tiny instances.
//! The resulting exact Pareto front is the acceptance oracle for the
//! genetic solver.

use crate::instance::{Instance, NodeId, DEPOT};
use crate::pareto::ParetoArchive;
use crate::schedule::{objectives, ObjectiveVector, Solution};
use thiserror::Error;

/// Hard limits keeping the worst-case enumeration below ~10^7 states.
pub const MAX_COUPLES: usize = 5;
pub const MAX_VEHICLES: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("instance exceeds the oracle guard: {couples} couples / {vehicles} vehicles (max {max_couples}/{max_vehicles})")]
    GuardExceeded {
        couples: usize,
        vehicles: usize,
        max_couples: usize,
        max_vehicles: usize,
    },
    #[error("enumeration would visit {upper} orderings, over the limit of {limit}")]
    TooManyStates { upper: u64, limit: u64 },
}

/// Exact non-dominated front with representative solutions, plus the number
/// of feasible assignments examined.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub front: Vec<(ObjectiveVector, Solution)>,
    pub enumerated: usize,
}

// (2m)! / 2^m precedence-feasible interleavings of m couples on one route.
fn interleavings(m: usize) -> u64 {
    let mut f = 1u64;
    for i in 1..=2 * m as u64 {
        f *= i;
    }
    f >> m
}

fn guard(inst: &Instance, limit: u64) -> Result<(), OracleError> {
    let couples = inst.couples.len();
    let vehicles = inst.fleet.count();
    if couples > MAX_COUPLES || vehicles > MAX_VEHICLES {
        return Err(OracleError::GuardExceeded {
            couples,
            vehicles,
            max_couples: MAX_COUPLES,
            max_vehicles: MAX_VEHICLES,
        });
    }
    let mut upper = 0u64;
    let assignments = (vehicles as u64).pow(couples as u32);
    for a in 0..assignments {
        let mut counts = vec![0usize; vehicles];
        let mut rest = a;
        for _ in 0..couples {
            counts[(rest % vehicles as u64) as usize] += 1;
            rest /= vehicles as u64;
        }
        upper += counts.iter().map(|&m| interleavings(m)).product::<u64>();
    }
    if upper > limit {
        return Err(OracleError::TooManyStates { upper, limit });
    }
    Ok(())
}

// Emits every capacity-feasible interleaving of the given couples on one
// vehicle, pickup always before its delivery. The partial route carries the
// running load; time windows never prune.
fn route_orderings(
    inst: &Instance,
    k: usize,
    couples: &[usize],
    route: &mut Vec<NodeId>,
    onboard: &mut Vec<usize>,
    remaining: &mut Vec<usize>,
    load: f64,
    out: &mut dyn FnMut(&[NodeId]),
) {
    if onboard.is_empty() && remaining.is_empty() {
        out(route);
        return;
    }
    // Deliver any onboard couple next.
    for i in 0..onboard.len() {
        let c = onboard[i];
        let delivery = inst.couples[c].delivery;
        onboard.remove(i);
        route.push(delivery);
        route_orderings(
            inst,
            k,
            couples,
            route,
            onboard,
            remaining,
            load - inst.node(inst.couples[c].pickup).demand,
            out,
        );
        route.pop();
        onboard.insert(i, c);
    }
    // Or pick up any remaining couple, capacity permitting.
    for i in 0..remaining.len() {
        let c = remaining[i];
        let pickup = inst.couples[c].pickup;
        let q = inst.node(pickup).demand;
        if load + q > inst.fleet.capacity(k) {
            continue;
        }
        remaining.remove(i);
        onboard.push(c);
        route.push(pickup);
        route_orderings(inst, k, couples, route, onboard, remaining, load + q, out);
        route.pop();
        onboard.pop();
        remaining.insert(i, c);
    }
}

fn solutions_of_assignment(inst: &Instance, assignment: &[usize], out: &mut dyn FnMut(Solution)) {
    let vehicles = inst.fleet.count();
    let mut per_vehicle: Vec<Vec<usize>> = vec![Vec::new(); vehicles];
    for (c, &k) in assignment.iter().enumerate() {
        per_vehicle[k].push(c);
    }
    // Cartesian product of per-vehicle orderings, depth-first.
    fn recurse(
        inst: &Instance,
        per_vehicle: &[Vec<usize>],
        k: usize,
        routes: &mut Vec<Vec<NodeId>>,
        out: &mut dyn FnMut(Solution),
    ) {
        if k == per_vehicle.len() {
            out(Solution {
                routes: routes.clone(),
            });
            return;
        }
        let mut route = vec![DEPOT];
        let mut onboard = Vec::new();
        let mut remaining = per_vehicle[k].clone();
        let mut emit = |r: &[NodeId]| {
            let mut full = r.to_vec();
            full.push(DEPOT);
            routes.push(full);
            recurse(inst, per_vehicle, k + 1, routes, out);
            routes.pop();
        };
        route_orderings(
            inst,
            k,
            &per_vehicle[k],
            &mut route,
            &mut onboard,
            &mut remaining,
            0.0,
            &mut emit,
        );
    }
    let mut routes = Vec::new();
    recurse(inst, &per_vehicle, 0, &mut routes, out);
}

fn visit_assignment_indices(inst: &Instance) -> impl Iterator<Item = Vec<usize>> + '_ {
    let couples = inst.couples.len();
    let vehicles = inst.fleet.count();
    (0..(vehicles as u64).pow(couples as u32)).map(move |a| {
        let mut assignment = vec![0usize; couples];
        let mut rest = a;
        for slot in assignment.iter_mut() {
            *slot = (rest % vehicles as u64) as usize;
            rest /= vehicles as u64;
        }
        assignment
    })
}

/// Streams every hard-feasible solution (visit-once, depot-bracketed,
/// precedence, pairing, capacity; windows stay soft). Fails upfront when the
/// instance exceeds the guard or `limit` orderings.
pub fn enumerate_solutions(
    inst: &Instance,
    limit: u64,
) -> Result<impl Iterator<Item = Solution> + '_, OracleError> {
    guard(inst, limit)?;
    let mut pending: Vec<Solution> = Vec::new();
    let mut assignments = visit_assignment_indices(inst);
    Ok(std::iter::from_fn(move || loop {
        if let Some(sol) = pending.pop() {
            return Some(sol);
        }
        let assignment = assignments.next()?;
        solutions_of_assignment(inst, &assignment, &mut |s| pending.push(s));
        pending.reverse();
    }))
}

#[cfg(feature = "parallel")]
fn front_over_assignments(inst: &Instance) -> (ParetoArchive, usize) {
    use rayon::prelude::*;
    let assignments: Vec<Vec<usize>> = visit_assignment_indices(inst).collect();
    assignments
        .into_par_iter()
        .map(|assignment| {
            let mut local = ParetoArchive::unbounded();
            let mut count = 0usize;
            solutions_of_assignment(inst, &assignment, &mut |s| {
                count += 1;
                local.insert(objectives(inst, &s), s);
            });
            (local, count)
        })
        .reduce(
            || (ParetoArchive::unbounded(), 0),
            |(mut a, ca), (b, cb)| {
                for e in b.entries() {
                    a.insert(e.objectives, e.solution.clone());
                }
                (a, ca + cb)
            },
        )
}

#[cfg(not(feature = "parallel"))]
fn front_over_assignments(inst: &Instance) -> (ParetoArchive, usize) {
    front_over_assignments_seq(inst)
}

/// Sequential twin of the front computation, kept for the benchmark suite.
pub fn front_over_assignments_seq(inst: &Instance) -> (ParetoArchive, usize) {
    let mut archive = ParetoArchive::unbounded();
    let mut count = 0usize;
    for assignment in visit_assignment_indices(inst) {
        solutions_of_assignment(inst, &assignment, &mut |s| {
            count += 1;
            archive.insert(objectives(inst, &s), s);
        });
    }
    (archive, count)
}

/// Exact Pareto front by full enumeration. Merging per-assignment fronts is
/// order-independent, so the parallel and sequential paths agree exactly.
pub fn exact_front(inst: &Instance) -> Result<OracleResult, OracleError> {
    guard(inst, 10_000_000)?;
    let (archive, enumerated) = front_over_assignments(inst);
    Ok(OracleResult {
        front: archive
            .entries()
            .iter()
            .map(|e| (e.objectives, e.solution.clone()))
            .collect(),
        enumerated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_synthetic, Couple, Fleet, Node};
    use crate::pareto::extract_front;
    use crate::schedule::is_hard_feasible;

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

    fn two_couples_one_vehicle() -> Instance {
        let nodes = vec![
            Node { id: 0, x: 0.0, y: 0.0, demand: 0.0, ready: 0.0, due: 1000.0, service: 0.0 },
            Node { id: 1, x: 1.0, y: 0.0, demand: 5.0, ready: 0.0, due: 1000.0, service: 0.0 },
            Node { id: 2, x: 2.0, y: 0.0, demand: -5.0, ready: 0.0, due: 1000.0, service: 0.0 },
            Node { id: 3, x: 3.0, y: 0.0, demand: 5.0, ready: 0.0, due: 1000.0, service: 0.0 },
            Node { id: 4, x: 4.0, y: 0.0, demand: -5.0, ready: 0.0, due: 1000.0, service: 0.0 },
        ];
        Instance::new(
            nodes,
            vec![Couple { pickup: 1, delivery: 2 }, Couple { pickup: 3, delivery: 4 }],
            Fleet::homogeneous(1, 1000.0, 1.0, 1.0),
        )
    }

    #[test]
    fn t1_has_one_feasible_solution() {
        let all: Vec<Solution> = enumerate_solutions(&t1(), 1_000_000).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].routes, vec![vec![0, 1, 2, 0]]);
    }

    #[test]
    fn two_couples_one_vehicle_has_six_interleavings() {
        let all: Vec<Solution> = enumerate_solutions(&two_couples_one_vehicle(), 1_000_000)
            .unwrap()
            .collect();
        assert_eq!(all.len(), 6);
        for s in &all {
            assert!(is_hard_feasible(&two_couples_one_vehicle(), s));
        }
    }

    #[test]
    fn one_couple_two_vehicles_has_two_solutions() {
        let base = t1();
        let inst = Instance::new(base.nodes, base.couples, Fleet::homogeneous(2, 10.0, 1.0, 1.0));
        let all: Vec<Solution> = enumerate_solutions(&inst, 1_000_000).unwrap().collect();
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn exact_front_of_t1() {
        let res = exact_front(&t1()).unwrap();
        assert_eq!(res.front.len(), 1);
        assert_eq!(res.front[0].0, ObjectiveVector { f1: 12.0, f2: 0.0 });
        assert_eq!(res.enumerated, 1);
    }

    #[test]
    fn tight_window_creates_two_point_front() {
        // Near couple (1,2) north, far couple (3,4) east. Serving the near
        // couple first is cheapest but misses node 4's deadline; serving the
        // far couple first is on time but longer. Every other interleaving
        // is both longer and later.
        let nodes = vec![
            Node { id: 0, x: 0.0, y: 0.0, demand: 0.0, ready: 0.0, due: 1000.0, service: 0.0 },
            Node { id: 1, x: 0.0, y: 1.0, demand: 5.0, ready: 0.0, due: 1000.0, service: 0.0 },
            Node { id: 2, x: 0.0, y: 2.0, demand: -5.0, ready: 0.0, due: 1000.0, service: 0.0 },
            Node { id: 3, x: 5.0, y: 0.0, demand: 5.0, ready: 0.0, due: 1000.0, service: 0.0 },
            Node { id: 4, x: 6.0, y: 0.0, demand: -5.0, ready: 0.0, due: 7.0, service: 0.0 },
        ];
        let inst = Instance::new(
            nodes,
            vec![Couple { pickup: 1, delivery: 2 }, Couple { pickup: 3, delivery: 4 }],
            Fleet::homogeneous(1, 1000.0, 1.0, 1.0),
        );
        let res = exact_front(&inst).unwrap();
        assert_eq!(res.front.len(), 2, "front: {:?}", res.front);
        assert!(res.front.iter().any(|(o, _)| o.f2 == 0.0));
        assert!(res.front.iter().any(|(o, _)| o.f2 > 0.0));
    }

    #[test]
    fn guard_rejects_oversized_instances() {
        let inst = generate_synthetic(6, 0.5, 1);
        assert!(inst.couples.len() > MAX_COUPLES || inst.fleet.count() <= MAX_VEHICLES);
        let big = generate_synthetic(6, 0.5, 1);
        assert!(matches!(
            exact_front(&big),
            Err(OracleError::GuardExceeded { .. })
        ));
        let wide = Instance::new(big.nodes.clone(), big.couples.clone(), Fleet::homogeneous(4, 100.0, 1.0, 1.0));
        assert!(matches!(
            exact_front(&wide),
            Err(OracleError::GuardExceeded { .. })
        ));
        assert!(matches!(
            enumerate_solutions(&two_couples_one_vehicle(), 3),
            Err(OracleError::TooManyStates { upper: 6, limit: 3 })
        ));
    }

    #[test]
    fn front_matches_extract_front_of_enumeration() {
        for seed in [2u64, 11, 29] {
            let inst = generate_synthetic(3, 0.3, seed);
            let res = exact_front(&inst).unwrap();
            let points: Vec<ObjectiveVector> = enumerate_solutions(&inst, 10_000_000)
                .unwrap()
                .map(|s| objectives(&inst, &s))
                .collect();
            let front = extract_front(&points);
            let got: Vec<ObjectiveVector> = res.front.iter().map(|(o, _)| *o).collect();
            assert_eq!(got, front);
            assert_eq!(points.len(), res.enumerated);
        }
    }

    #[test]
    fn parallel_and_sequential_fronts_agree() {
        let inst = generate_synthetic(4, 0.4, 77);
        let res = exact_front(&inst).unwrap();
        let (seq, count) = front_over_assignments_seq(&inst);
        assert_eq!(res.enumerated, count);
        assert_eq!(
            res.front,
            seq.entries()
                .iter()
                .map(|e| (e.objectives, e.solution.clone()))
                .collect::<Vec<_>>()
        );
    }
}
