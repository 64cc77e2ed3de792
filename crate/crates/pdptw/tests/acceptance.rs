//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Oracle- and property-based; the LRC1 runs use the
//! shipped benchmark fixtures under data/.

use pdptw::bounds::{compute_bounds, weights_for};
use pdptw::dynamic::{
    apply_event, freeze_prefix, insert_method1, run_dynamic, DynamicEvent, InsertionMethod,
    NodeData,
};
use pdptw::evolution::{run_static, GaConfig};
use pdptw::instance::{generate_synthetic, parse_lilim, serialize_lilim, Instance, NodeId, DEPOT};
use pdptw::oracle::{enumerate_solutions, exact_front};
use pdptw::pareto::{extract_front, ParetoArchive};
use pdptw::report::{self, derive_events, RoutesJson};
use pdptw::schedule::{
    aggregate_fitness, feasibility_report, objectives, ObjectiveVector, Solution, Weights,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn data_file(name: &str) -> String {
    let path = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("cannot read {path}: {e}"))
}

fn load_lrc(index: usize) -> Instance {
    parse_lilim(&data_file(&format!("lrc10{index}.txt"))).expect("fixture parses")
}

fn pass(criterion: usize, detail: &str) {
    println!("ACCEPTANCE {criterion} PASS: {detail}");
}

/// Criterion 1: on 20 seeded tiny instances the genetic run recovers the
/// exhaustive Pareto front exactly in at least 18 of 20 runs, within 5 s.
#[test]
fn criterion_1_oracle_equivalence_static() {
    let started = Instant::now();
    let mut matched = 0;
    for seed in 0..20u64 {
        let couples = 1 + (seed as usize % 3);
        let inst = generate_synthetic(couples, 0.3, 900 + seed);
        assert!(inst.couples.len() <= 3 && inst.fleet.count() <= 2);
        let cfg = GaConfig {
            population_size: 16,
            generations: 100,
            split_samples: 2,
            seed,
            ..GaConfig::default()
        };
        let (archive, _) = run_static(&inst, &cfg).expect("static run succeeds");
        let oracle = exact_front(&inst).expect("oracle within guard");
        let got = archive.front();
        let want: Vec<ObjectiveVector> = oracle.front.iter().map(|(o, _)| *o).collect();
        let same = got.len() == want.len()
            && got
                .iter()
                .zip(&want)
                .all(|(a, b)| (a.f1 - b.f1).abs() <= 1e-9 && (a.f2 - b.f2).abs() <= 1e-9);
        if same {
            matched += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(
        matched >= 18,
        "only {matched}/20 runs recovered the exact front"
    );
    assert!(
        elapsed.as_secs_f64() < 5.0,
        "oracle-equivalence suite took {elapsed:?}"
    );
    pass(1, &format!("{matched}/20 exact front matches in {elapsed:?}"));
}

// Test-side placement enumeration, independent of the library's insertion
// path: splice the couple into every suffix position pair and score the
// full solution through the public objective functions.
fn brute_force_best_insertion(
    inst: &Instance,
    base: &Solution,
    suffix_starts: &[usize],
    closed: &[bool],
    pickup: NodeId,
    delivery: NodeId,
    weights: &Weights,
) -> Option<f64> {
    let capacity_ok = |k: usize, route: &[NodeId]| -> bool {
        let mut load = 0.0;
        for &n in route {
            load += inst.node(n).demand;
            if load > inst.fleet.capacity(k) || load < 0.0 {
                return false;
            }
        }
        true
    };
    let mut best: Option<f64> = None;
    for k in 0..base.routes.len() {
        if closed[k] {
            continue;
        }
        let route = &base.routes[k];
        let head = suffix_starts[k];
        let tail_len = route.len() - 1 - head;
        for a in 0..=tail_len {
            for b in a..=tail_len {
                let mut new_route: Vec<NodeId> = Vec::with_capacity(route.len() + 2);
                new_route.extend_from_slice(&route[..head + a]);
                new_route.push(pickup);
                new_route.extend_from_slice(&route[head + a..head + b]);
                new_route.push(delivery);
                new_route.extend_from_slice(&route[head + b..]);
                if !capacity_ok(k, &new_route) {
                    continue;
                }
                let mut sol = base.clone();
                sol.routes[k] = new_route;
                let f = aggregate_fitness(objectives(inst, &sol), weights);
                if best.is_none_or(|b| f < b) {
                    best = Some(f);
                }
            }
        }
    }
    best
}

/// Criterion 2: greedy insertion equals the independent brute-force minimum
/// over all placements, exactly, on 50 randomized cases.
#[test]
fn criterion_2_method1_neighborhood_optimality() {
    let mut exact = 0;
    for case in 0..50u64 {
        let couples = 3 + (case as usize % 4);
        let inst = generate_synthetic(couples, 0.5, 5000 + case);
        let cfg = GaConfig {
            population_size: 8,
            generations: 10,
            seed: case,
            ..GaConfig::default()
        };
        let (archive, _) = run_static(&inst, &cfg).expect("static run succeeds");
        let incumbent = archive.entries()[0].solution.clone();

        let mut rng = ChaCha8Rng::seed_from_u64(7000 + case);
        let q = rng.random_range(5..=20) as f64;
        let event = DynamicEvent {
            time: rng.random_range(0.0..=120.0),
            pickup: NodeData {
                x: rng.random_range(0..=100) as f64,
                y: rng.random_range(0..=100) as f64,
                demand: q,
                ready: 0.0,
                due: 2000.0,
                service: 10.0,
            },
            delivery: NodeData {
                x: rng.random_range(0..=100) as f64,
                y: rng.random_range(0..=100) as f64,
                demand: -q,
                ready: 0.0,
                due: 2000.0,
                service: 10.0,
            },
        };
        let (extended, couple_idx) = apply_event(&inst, &event);
        let weights = weights_for(&extended, 0.5, 0.5).unwrap();
        let frozen = freeze_prefix(&extended, &incumbent, event.time);

        let suffix_starts: Vec<usize> = frozen.routes.iter().map(|r| r.visits.len()).collect();
        let closed: Vec<bool> = frozen.routes.iter().map(|r| r.closed).collect();
        let c = extended.couples[couple_idx];
        let brute = brute_force_best_insertion(
            &extended,
            &incumbent,
            &suffix_starts,
            &closed,
            c.pickup,
            c.delivery,
            &weights,
        )
        .expect("wide event always placeable");
        let got = insert_method1(&extended, &frozen, couple_idx, &weights)
            .expect("placement exists")
            .fitness;
        assert_eq!(got, brute, "case {case}: {got} vs brute {brute}");
        exact += 1;
    }
    assert_eq!(exact, 50);
    pass(2, "50/50 insertions equal the brute-force minimum exactly");
}

/// Criterion 3: lower bounds never exceed any enumerated solution's
/// objectives, nor any genetic archive entry's on LRC101.
#[test]
fn criterion_3_bound_soundness() {
    let mut checked = 0usize;
    for seed in 0..20u64 {
        let couples = 1 + (seed as usize % 3);
        let inst = generate_synthetic(couples, 0.3, 300 + seed);
        let bounds = compute_bounds(&inst).unwrap();
        for sol in enumerate_solutions(&inst, 10_000_000).unwrap() {
            let obj = objectives(&inst, &sol);
            assert!(
                bounds.travel_cost <= obj.f1 + 1e-9,
                "f1 bound {} > {}",
                bounds.travel_cost,
                obj.f1
            );
            assert!(
                bounds.tardiness_raw <= obj.f2 + 1e-9,
                "raw f2 bound {} > {}",
                bounds.tardiness_raw,
                obj.f2
            );
            checked += 1;
        }
    }

    let inst = load_lrc(1);
    let bounds = compute_bounds(&inst).unwrap();
    let cfg = GaConfig { seed: 7, ..GaConfig::default() };
    let (archive, _) = run_static(&inst, &cfg).unwrap();
    for e in archive.entries() {
        assert!(bounds.travel_cost <= e.objectives.f1);
        assert!(bounds.tardiness_raw <= e.objectives.f2);
        checked += 1;
    }
    pass(3, &format!("bounds sound over {checked} solutions, zero violations"));
}

/// Criterion 4: every archive entry of static and dynamic runs over all
/// eight LRC1 fixtures is hard-feasible when re-evaluated from the
/// serialized routes.
#[test]
fn criterion_4_feasibility_suite() {
    let cfg = GaConfig { seed: 11, ..GaConfig::default() };
    let mut entries_checked = 0usize;

    let recheck = |inst: &Instance, routes: &[RoutesJson]| -> usize {
        let mut n = 0;
        for rj in routes {
            let sol = rj.to_solution();
            let hard: Vec<_> = feasibility_report(inst, &sol)
                .into_iter()
                .filter(|b| b.is_hard())
                .collect();
            assert!(hard.is_empty(), "hard violations: {hard:?}");
            n += 1;
        }
        n
    };

    for index in 1..=8 {
        let inst = load_lrc(index);
        let name = format!("LRC10{index}");

        let bounds = compute_bounds(&inst).unwrap();
        let weights = Weights {
            lambda1: cfg.lambda1,
            lambda2: cfg.lambda2,
            c1: bounds.c1,
            c2: bounds.c2,
        };
        let (archive, _) = run_static(&inst, &cfg).unwrap();
        let rep = report::report_static(&name, &cfg, bounds, weights, &archive);
        entries_checked += recheck(&inst, &rep.routes);

        let (reduced, events) = derive_events(&inst, 0.04, 0.3, cfg.seed).unwrap();
        for (method, tag) in [
            (InsertionMethod::Greedy, "m1"),
            (InsertionMethod::Reoptimize, "m2"),
        ] {
            let run = run_dynamic(&reduced, &events, &cfg, method).unwrap();
            let bounds = compute_bounds(&run.instance).unwrap();
            let rep = report::report_dynamic(&name, &cfg, bounds, &run, tag);
            entries_checked += recheck(&run.instance, &rep.routes);
        }
    }
    assert!(entries_checked > 0);
    pass(4, &format!("{entries_checked} archive entries re-checked hard-feasible"));
}

/// Criterion 5: with two or more events, every emitted solution preserves
/// the incumbent's committed prefix at each event time, visit by visit.
#[test]
fn criterion_5_frozen_prefix_immutability() {
    let full = load_lrc(1);
    let keep: Vec<usize> = (10..full.couples.len()).collect();
    let subset = full.without_couples(&keep);
    assert_eq!(subset.couples.len(), 10);
    let cfg = GaConfig { seed: 3, ..GaConfig::default() };

    let event = |time: f64, x: f64| DynamicEvent {
        time,
        pickup: NodeData { x, y: 20.0, demand: 8.0, ready: 0.0, due: 220.0, service: 10.0 },
        delivery: NodeData { x, y: 60.0, demand: -8.0, ready: 0.0, due: 235.0, service: 10.0 },
    };
    let events = vec![event(40.0, 30.0), event(90.0, 70.0)];

    let mut deviations = 0usize;
    let mut solutions = 0usize;
    for method in [InsertionMethod::Greedy, InsertionMethod::Reoptimize] {
        let run = run_dynamic(&subset, &events, &cfg, method).unwrap();
        assert_eq!(run.records.len(), 2);
        assert!(run.records.iter().all(|r| r.served), "events must be served");
        for e in run.archive.entries() {
            solutions += 1;
            for record in &run.records {
                for (k, prefix) in record.committed.iter().enumerate() {
                    if !e.solution.routes[k].starts_with(prefix) {
                        deviations += 1;
                    }
                }
            }
        }
    }
    assert_eq!(deviations, 0);
    pass(5, &format!("{solutions} emitted solutions preserve all commitments"));
}

/// Criterion 6: on a 10-couple LRC101 subset with one derived event,
/// suffix re-optimization reaches zero total tardiness in at least
/// 8 of 10 seeds.
#[test]
fn criterion_6_zero_tardiness_reachability() {
    let full = load_lrc(1);
    let keep: Vec<usize> = (10..full.couples.len()).collect();
    let subset = full.without_couples(&keep);
    assert_eq!(subset.couples.len(), 10);

    let mut hits = 0;
    for seed in 0..10u64 {
        let cfg = GaConfig { seed, ..GaConfig::default() };
        let (reduced, events) = derive_events(&subset, 0.1, 0.2, seed).unwrap();
        assert_eq!(events.len(), 1);
        let run = run_dynamic(&reduced, &events, &cfg, InsertionMethod::Reoptimize).unwrap();
        if run.archive.entries().iter().any(|e| e.objectives.f2 == 0.0) {
            hits += 1;
        }
    }
    assert!(hits >= 8, "zero tardiness reached in only {hits}/10 seeds");
    pass(6, &format!("f2 = 0 reached in {hits}/10 seeds"));
}

/// Criterion 7: archive contents equal the extracted front of the inserted
/// multiset for 1,000 random insertion sequences.
#[test]
fn criterion_7_pareto_archive_correctness() {
    let mut rng = ChaCha8Rng::seed_from_u64(424242);
    for _ in 0..1000 {
        let len = rng.random_range(0..40);
        let points: Vec<ObjectiveVector> = (0..len)
            .map(|_| ObjectiveVector {
                f1: rng.random_range(0..25) as f64,
                f2: rng.random_range(0..25) as f64,
            })
            .collect();
        let mut archive = ParetoArchive::unbounded();
        for &p in &points {
            archive.insert(p, Solution { routes: vec![] });
        }
        assert_eq!(archive.front(), extract_front(&points));
    }
    pass(7, "1000/1000 insertion sequences match extract_front");
}

/// Criterion 8: the full LRC101 static run finishes within 60 s and two
/// same-seed invocations serialize to byte-identical JSON.
#[test]
fn criterion_8_determinism_and_scale() {
    let inst = load_lrc(1);
    let cfg = GaConfig { seed: 7, ..GaConfig::default() };
    let bounds = compute_bounds(&inst).unwrap();
    let weights = Weights {
        lambda1: cfg.lambda1,
        lambda2: cfg.lambda2,
        c1: bounds.c1,
        c2: bounds.c2,
    };

    let started = Instant::now();
    let (archive_a, _) = run_static(&inst, &cfg).unwrap();
    let first = started.elapsed();
    assert!(first.as_secs_f64() < 60.0, "static run took {first:?}");

    let (archive_b, _) = run_static(&inst, &cfg).unwrap();
    let json_a = report::to_json(&report::report_static("LRC101", &cfg, bounds, weights, &archive_a));
    let json_b = report::to_json(&report::report_static("LRC101", &cfg, bounds, weights, &archive_b));
    assert_eq!(json_a, json_b, "same-seed reports must be byte-identical");
    pass(8, &format!("LRC101 static in {first:?}, reports byte-identical"));
}

/// Criterion 9: all eight fixtures parse with every node paired, the fleet
/// header matching the file, and lossless round-trip serialization.
#[test]
fn criterion_9_parser_fidelity() {
    for index in 1..=8 {
        let text = data_file(&format!("lrc10{index}.txt"));
        let inst = parse_lilim(&text).expect("fixture parses");

        let mut paired = vec![0usize; inst.nodes.len()];
        for c in &inst.couples {
            paired[c.pickup] += 1;
            paired[c.delivery] += 1;
        }
        assert!(
            paired.iter().skip(1).all(|&n| n == 1),
            "lrc10{index}: every non-depot node pairs exactly once"
        );
        assert_eq!(paired[DEPOT], 0);

        let header: Vec<f64> = text
            .lines()
            .next()
            .unwrap()
            .split_whitespace()
            .map(|t| t.parse().unwrap())
            .collect();
        assert_eq!(inst.fleet.count(), header[0] as usize);
        assert_eq!(inst.fleet.capacity(0), header[1]);
        assert_eq!(inst.fleet.speed(0), header[2]);

        let again = parse_lilim(&serialize_lilim(&inst)).expect("round trip parses");
        assert_eq!(inst, again, "lrc10{index}: retained fields must survive");
    }
    pass(9, "8/8 fixtures: pairing complete, header matched, round trip exact");
}
