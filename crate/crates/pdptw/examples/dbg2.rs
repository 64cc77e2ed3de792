use pdptw::dynamic::{run_dynamic, InsertionMethod};
use pdptw::evolution::{run_static, GaConfig};
use pdptw::instance::parse_lilim;
use pdptw::report::derive_events;

fn main() {
    let text = std::fs::read_to_string("data/lrc101.txt").unwrap();
    let full = parse_lilim(&text).unwrap();
    let keep: Vec<usize> = (10..full.couples.len()).collect();
    let subset = full.without_couples(&keep);
    for seed in 0..3u64 {
        let cfg = GaConfig { seed, ..GaConfig::default() };
        let (st, _) = run_static(&subset, &cfg).unwrap();
        let min_f2_static = st.entries().iter().map(|e| e.objectives.f2).fold(f64::INFINITY, f64::min);
        let used: Vec<usize> = st.entries().iter().map(|e| e.solution.used_vehicles()).collect();
        println!("seed {seed}: static N_sol={} min_f2={min_f2_static:.2} used={used:?}", st.len());
        let (reduced, events) = derive_events(&subset, 0.1, 0.2, seed).unwrap();
        println!("  event t_d={} pickup ready..due = {}..{} delivery {}..{}",
            events[0].time, events[0].pickup.ready, events[0].pickup.due, events[0].delivery.ready, events[0].delivery.due);
        let run = run_dynamic(&reduced, &events, &cfg, InsertionMethod::Reoptimize).unwrap();
        let f2s: Vec<f64> = run.archive.entries().iter().map(|e| e.objectives.f2).collect();
        println!("  m2 served={} N_sol={} f2s={:?}", run.records[0].served, run.archive.len(), f2s.iter().map(|x| (x*100.0).round()/100.0).collect::<Vec<_>>());
    }
}
