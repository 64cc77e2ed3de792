//! Relaxation lower bounds for both objectives and the derived scaling
//! coefficients c1 = 1/f_1b, c2 = 1/f_2b used by the aggregate fitness.

use crate::instance::{Instance, DEPOT};
use crate::schedule::Weights;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Positive floor for the tardiness bound: any positive constant works
/// because it only rescales the fitness, never the dominance order.
pub const TARDINESS_FLOOR: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("lower bounds are undefined for an instance without couples")]
    NoCouples,
}

/// Both bounds plus the scaling coefficients, as carried in run reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    /// f_1b: travel-cost lower bound.
    pub travel_cost: f64,
    /// Unclamped tardiness bound (may be zero).
    pub tardiness_raw: f64,
    /// f_2b: tardiness bound clamped to [`TARDINESS_FLOOR`].
    pub tardiness: f64,
    pub c1: f64,
    pub c2: f64,
}

/// f_1b = C_min * d_min * (N' + 1).
///
/// Every feasible solution visits all N' vertices and returns at least one
/// vehicle to the depot, so it traverses at least N' + 1 arcs with distinct
/// endpoints, each costing at least C_min * d_min.
pub fn travel_cost_lower_bound(inst: &Instance) -> Result<f64, BoundsError> {
    if inst.couples.is_empty() {
        return Err(BoundsError::NoCouples);
    }
    let mut d_min = f64::INFINITY;
    for i in 0..inst.nodes.len() {
        for j in (i + 1)..inst.nodes.len() {
            let d = inst.distance(i, j);
            if d > 0.0 {
                d_min = d_min.min(d);
            }
        }
    }
    if !d_min.is_finite() {
        // All vertices collocated: travel is free and the bound degenerates.
        d_min = 0.0;
    }
    Ok(inst.fleet.min_unit_cost() * d_min * (inst.active_nodes() as f64 + 1.0))
}

fn raw_tardiness_bound(inst: &Instance) -> Result<f64, BoundsError> {
    if inst.couples.is_empty() {
        return Err(BoundsError::NoCouples);
    }
    // Earliest conceivable departures: relax vehicle sharing and detours,
    // keeping only depot->pickup and pickup->delivery legs at top speed.
    let mut raw = 0.0;
    for c in &inst.couples {
        let p = inst.node(c.pickup);
        let d = inst.node(c.delivery);
        let depart_p = inst.min_travel_time(DEPOT, c.pickup).max(p.ready) + p.service;
        let depart_d = (depart_p + inst.min_travel_time(c.pickup, c.delivery)).max(d.ready) + d.service;
        raw += (depart_p - p.due).max(0.0);
        raw += (depart_d - d.due).max(0.0);
    }
    Ok(raw)
}

/// f_2b: raw relaxation bound clamped away from zero so that c2 = 1/f_2b
/// stays defined.
pub fn tardiness_lower_bound(inst: &Instance) -> Result<f64, BoundsError> {
    Ok(raw_tardiness_bound(inst)?.max(TARDINESS_FLOOR))
}

/// (c1, c2) = (1/f_1b, 1/f_2b).
pub fn scaling_coefficients(f1b: f64, f2b: f64) -> (f64, f64) {
    assert!(f1b > 0.0 && f2b > 0.0, "bounds must be positive");
    (1.0 / f1b, 1.0 / f2b)
}

pub fn compute_bounds(inst: &Instance) -> Result<BoundsReport, BoundsError> {
    let travel_cost = travel_cost_lower_bound(inst)?;
    let tardiness_raw = raw_tardiness_bound(inst)?;
    let tardiness = tardiness_raw.max(TARDINESS_FLOOR);
    // A degenerate all-collocated instance yields f_1b = 0; keep c1 usable.
    let (c1, c2) = scaling_coefficients(travel_cost.max(f64::MIN_POSITIVE), tardiness);
    Ok(BoundsReport {
        travel_cost,
        tardiness_raw,
        tardiness,
        c1,
        c2,
    })
}

/// Weights with the scaling coefficients initialized from the bounds.
pub fn weights_for(inst: &Instance, lambda1: f64, lambda2: f64) -> Result<Weights, BoundsError> {
    let b = compute_bounds(inst)?;
    Ok(Weights {
        lambda1,
        lambda2,
        c1: b.c1,
        c2: b.c2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Couple, Fleet, Instance, Node};
    use crate::schedule::{total_tardiness, total_travel_cost, Solution};

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

    #[test]
    fn travel_bound_on_t1() {
        let b = travel_cost_lower_bound(&t1()).unwrap();
        assert_eq!(b, 9.0);
        let f1 = total_travel_cost(&t1(), &Solution { routes: vec![vec![0, 1, 2, 0]] });
        assert!(b <= f1);
    }

    #[test]
    fn travel_bound_linear_in_costs() {
        let inst = t1();
        let doubled = Instance::new(inst.nodes.clone(), inst.couples.clone(), inst.fleet.scale_costs(2.0));
        assert_eq!(
            travel_cost_lower_bound(&doubled).unwrap(),
            2.0 * travel_cost_lower_bound(&inst).unwrap()
        );
    }

    #[test]
    fn travel_bound_with_unit_minimum_distance() {
        let nodes = vec![
            Node { id: 0, x: 0.0, y: 0.0, demand: 0.0, ready: 0.0, due: 100.0, service: 0.0 },
            Node { id: 1, x: 1.0, y: 0.0, demand: 5.0, ready: 0.0, due: 100.0, service: 0.0 },
            Node { id: 2, x: 3.0, y: 0.0, demand: -5.0, ready: 0.0, due: 100.0, service: 0.0 },
        ];
        let inst = Instance::new(
            nodes,
            vec![Couple { pickup: 1, delivery: 2 }],
            Fleet::homogeneous(1, 10.0, 1.0, 1.0),
        );
        assert_eq!(travel_cost_lower_bound(&inst).unwrap(), 3.0);
    }

    #[test]
    fn tardiness_bound_clamps_to_floor() {
        assert_eq!(tardiness_lower_bound(&t1()).unwrap(), TARDINESS_FLOOR);
        assert_eq!(raw_tardiness_bound(&t1()).unwrap(), 0.0);
    }

    #[test]
    fn tardiness_bound_detects_forced_lateness() {
        let mut inst = t1();
        inst.nodes[2].due = 5.0;
        let inst = Instance::new(inst.nodes, inst.couples, inst.fleet);
        assert_eq!(raw_tardiness_bound(&inst).unwrap(), 2.0);
        assert_eq!(tardiness_lower_bound(&inst).unwrap(), 2.0);
        let f2 = total_tardiness(&inst, &Solution { routes: vec![vec![0, 1, 2, 0]] });
        assert!(raw_tardiness_bound(&inst).unwrap() <= f2);
    }

    #[test]
    fn open_windows_give_floor_bound() {
        let mut inst = t1();
        for n in inst.nodes.iter_mut() {
            n.due = f64::INFINITY;
        }
        let inst = Instance::new(inst.nodes, inst.couples, inst.fleet);
        assert_eq!(tardiness_lower_bound(&inst).unwrap(), TARDINESS_FLOOR);
    }

    #[test]
    fn scaling_is_reciprocal() {
        let (c1, c2) = scaling_coefficients(9.0, 1.0);
        assert!((c1 - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(c2, 1.0);
        assert_eq!(scaling_coefficients(1.0, 1.0), (1.0, 1.0));
        assert_eq!(scaling_coefficients(2.0, 4.0), (0.5, 0.25));
    }

    #[test]
    #[should_panic(expected = "positive")]
    fn scaling_rejects_nonpositive() {
        scaling_coefficients(0.0, 1.0);
    }

    #[test]
    fn no_couples_is_an_error() {
        let inst = Instance::new(
            vec![Node { id: 0, x: 0.0, y: 0.0, demand: 0.0, ready: 0.0, due: 10.0, service: 0.0 }],
            vec![],
            Fleet::homogeneous(1, 10.0, 1.0, 1.0),
        );
        assert_eq!(travel_cost_lower_bound(&inst), Err(BoundsError::NoCouples));
        assert_eq!(tardiness_lower_bound(&inst), Err(BoundsError::NoCouples));
    }

    #[test]
    fn bounds_are_deterministic() {
        let inst = crate::instance::generate_synthetic(4, 0.3, 99);
        assert_eq!(compute_bounds(&inst).unwrap(), compute_bounds(&inst).unwrap());
    }
}
