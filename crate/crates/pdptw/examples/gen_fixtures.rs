//! Regenerates the eight LRC1-layout benchmark fixtures under data/.
//!
//! The files follow the Li & Lim text format (fleet header, depot row,
//! paired pickup/delivery rows) with the LRC1 shape: ~100 tasks, partially
//! clustered coordinates, K=25, Q=200, a 240-unit horizon, and window
//! widths that grow from lrc101 to lrc108. Windows are anchored so every
//! couple alone is servable without tardiness by one empty vehicle.
//!
//! Usage: cargo run -p pdptw --example gen_fixtures -- [OUT_DIR]

use pdptw::instance::{serialize_lilim, validate_instance, Couple, Fleet, Instance, Node};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

const COUPLES: usize = 50;
const VEHICLES: usize = 25;
const CAPACITY: f64 = 200.0;
const HORIZON: f64 = 240.0;
const SERVICE: f64 = 10.0;
const CLUSTERS: [(f64, f64); 4] = [(15.0, 20.0), (70.0, 15.0), (25.0, 80.0), (80.0, 75.0)];

fn field_point(rng: &mut ChaCha8Rng) -> (f64, f64) {
    if rng.random::<f64>() < 0.5 {
        let (cx, cy) = CLUSTERS[rng.random_range(0..CLUSTERS.len())];
        let x = (cx + rng.random_range(-8..=8) as f64).clamp(0.0, 100.0);
        let y = (cy + rng.random_range(-8..=8) as f64).clamp(0.0, 100.0);
        (x, y)
    } else {
        (rng.random_range(0..=100) as f64, rng.random_range(0..=100) as f64)
    }
}

fn build(index: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(1000 + index as u64);
    let width = 20.0 + 14.0 * (index - 1) as f64;
    let depot = Node {
        id: 0,
        x: 40.0,
        y: 50.0,
        demand: 0.0,
        ready: 0.0,
        due: HORIZON,
        service: 0.0,
    };
    let mut nodes = vec![depot];
    let mut couples = Vec::with_capacity(COUPLES);
    for _ in 0..COUPLES {
        let p_id = nodes.len();
        let d_id = p_id + 1;
        let (px, py) = field_point(&mut rng);
        let dx = (px + rng.random_range(-20..=20) as f64).clamp(0.0, 100.0);
        let dy = (py + rng.random_range(-20..=20) as f64).clamp(0.0, 100.0);
        let q = rng.random_range(5..=40) as f64;

        let from_depot = ((px - 40.0).powi(2) + (py - 50.0).powi(2)).sqrt();
        let slack = rng.random_range(0.0..=120.0);
        let anchor_p = (from_depot + slack).min(160.0);
        let ready_p = (anchor_p - rng.random_range(0.0..=width / 2.0)).max(0.0).floor();
        let due_p = (anchor_p + SERVICE + rng.random_range(width / 4.0..=width / 2.0))
            .min(HORIZON)
            .ceil();
        let pair_dist = ((px - dx).powi(2) + (py - dy).powi(2)).sqrt();
        let anchor_d = anchor_p + SERVICE + pair_dist;
        let ready_d = (anchor_d - rng.random_range(0.0..=width / 2.0)).max(0.0).floor();
        let due_d = (anchor_d + SERVICE + rng.random_range(width / 4.0..=width / 2.0))
            .min(HORIZON)
            .ceil();

        nodes.push(Node { id: p_id, x: px, y: py, demand: q, ready: ready_p, due: due_p, service: SERVICE });
        nodes.push(Node { id: d_id, x: dx, y: dy, demand: -q, ready: ready_d, due: due_d, service: SERVICE });
        couples.push(Couple { pickup: p_id, delivery: d_id });
    }
    Instance::new(nodes, couples, Fleet::homogeneous(VEHICLES, CAPACITY, 1.0, 1.0))
}

fn main() {
    let out_dir = std::env::args().nth(1).unwrap_or_else(|| "data".to_string());
    std::fs::create_dir_all(&out_dir).expect("create output directory");
    for index in 1..=8 {
        let inst = build(index);
        let violations = validate_instance(&inst);
        assert!(violations.is_empty(), "lrc10{index}: {violations:?}");
        let path = format!("{out_dir}/lrc10{index}.txt");
        std::fs::write(&path, serialize_lilim(&inst)).expect("write fixture");
        println!(
            "{path}: {} nodes, {} couples, K={}",
            inst.nodes.len(),
            inst.couples.len(),
            inst.fleet.count()
        );
    }
}
