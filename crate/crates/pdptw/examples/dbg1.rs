use pdptw::evolution::{run_static, GaConfig};
use pdptw::instance::generate_synthetic;
use pdptw::oracle::exact_front;
use pdptw::schedule::ObjectiveVector;

fn main() {
    for seed in 0..20u64 {
        let couples = 1 + (seed as usize % 3);
        let inst = generate_synthetic(couples, 0.3, 900 + seed);
        let cfg = GaConfig { population_size: 16, generations: 100, split_samples: 2, seed, ..GaConfig::default() };
        let (archive, _) = run_static(&inst, &cfg).unwrap();
        let oracle = exact_front(&inst).unwrap();
        let got = archive.front();
        let want: Vec<ObjectiveVector> = oracle.front.iter().map(|(o, _)| *o).collect();
        let same = got.len() == want.len()
            && got.iter().zip(&want).all(|(a, b)| (a.f1 - b.f1).abs() <= 1e-9 && (a.f2 - b.f2).abs() <= 1e-9);
        if !same {
            println!("seed {seed} couples {couples} K {}:", inst.fleet.count());
            println!("  got  {:?}", got.iter().map(|o| (o.f1, o.f2)).collect::<Vec<_>>());
            println!("  want {:?}", want.iter().map(|o| (o.f1, o.f2)).collect::<Vec<_>>());
        }
    }
}
