//! Genetic core: permutation/split chromosome encoding, population
//! generation, crossover/mutation/copy, the correction procedures for
//! precedence, couple-pairing and capacity, and the static optimization
//! loop feeding a Pareto archive.

use crate::batch;
use crate::bounds::{weights_for, BoundsError};
use crate::instance::{Instance, NodeId, VehicleId, DEPOT};
use crate::pareto::ParetoArchive;
use crate::schedule::{
    aggregate_fitness, is_hard_feasible, objectives, route_tardiness, route_travel_cost,
    ObjectiveVector, Solution, Weights,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Permutation of the assignable nodes plus per-vehicle block lengths.
/// Vehicle k serves the k-th consecutive block of `perm`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chromosome {
    pub perm: Vec<NodeId>,
    pub splits: Vec<usize>,
}

/// Tunables of the genetic run. `split_samples` is the number of vehicle
/// split vectors paired with every permutation each generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub copy_prob: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub split_samples: usize,
    /// Fresh random individuals added to each generation's candidate pool,
    /// as a fraction of the population size.
    pub immigrant_rate: f64,
    pub seed: u64,
    pub archive_capacity: Option<usize>,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 50,
            generations: 200,
            crossover_prob: 0.7,
            mutation_prob: 0.2,
            copy_prob: 0.1,
            lambda1: 0.5,
            lambda2: 0.5,
            split_samples: 4,
            immigrant_rate: 0.25,
            seed: 0,
            archive_capacity: Some(ParetoArchive::DEFAULT_CAPACITY),
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), EvolveError> {
        let probs = [self.crossover_prob, self.mutation_prob, self.copy_prob];
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(EvolveError::Config("operator probabilities must lie in [0, 1]".into()));
        }
        if (probs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(EvolveError::Config("operator probabilities must sum to 1".into()));
        }
        if self.population_size < 2 {
            return Err(EvolveError::Config("population size must be at least 2".into()));
        }
        if self.split_samples < 1 {
            return Err(EvolveError::Config("split_samples must be at least 1".into()));
        }
        if self.lambda1 < 0.0 || self.lambda2 < 0.0 || (self.lambda1 + self.lambda2 - 1.0).abs() > 1e-9 {
            return Err(EvolveError::Config("lambda weights must be nonnegative and sum to 1".into()));
        }
        if !(0.0..=1.0).contains(&self.immigrant_rate) {
            return Err(EvolveError::Config("immigrant_rate must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum EvolveError {
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no hard-feasible individual could be constructed")]
    NoFeasibleIndividuals,
}

/// Committed route head for one vehicle. In the static problem every stub
/// is just the depot start; dynamic re-planning freezes longer heads.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteStub {
    /// Committed visits, beginning at the depot. A closed stub is the whole
    /// route including the terminal depot.
    pub visits: Vec<NodeId>,
    pub closed: bool,
}

/// Everything a chromosome needs to become a full solution: the instance,
/// the fitness weights, the committed route heads, and the assignable nodes.
#[derive(Debug, Clone)]
pub struct PlanContext<'a> {
    pub instance: &'a Instance,
    pub weights: Weights,
    stubs: Vec<RouteStub>,
    free: Vec<NodeId>,
    open: Vec<VehicleId>,
}

impl<'a> PlanContext<'a> {
    pub fn new(instance: &'a Instance, weights: Weights, stubs: Vec<RouteStub>, mut free: Vec<NodeId>) -> Self {
        assert_eq!(stubs.len(), instance.fleet.count());
        free.sort_unstable();
        let open = stubs
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.closed)
            .map(|(k, _)| k)
            .collect();
        PlanContext {
            instance,
            weights,
            stubs,
            free,
            open,
        }
    }

    /// Context for the static problem: all vehicles at the depot, every
    /// non-depot node assignable.
    pub fn static_plan(instance: &'a Instance, weights: Weights) -> Self {
        let stubs = vec![
            RouteStub {
                visits: vec![DEPOT],
                closed: false,
            };
            instance.fleet.count()
        ];
        let free = (1..instance.nodes.len()).collect();
        Self::new(instance, weights, stubs, free)
    }

    pub fn free_nodes(&self) -> &[NodeId] {
        &self.free
    }

    pub fn open_vehicles(&self) -> &[VehicleId] {
        &self.open
    }

    /// First index of a vehicle's route that re-planning may touch.
    pub fn suffix_start(&self, k: VehicleId) -> usize {
        self.stubs[k].visits.len()
    }

    pub fn is_closed(&self, k: VehicleId) -> bool {
        self.stubs[k].closed
    }

    /// Expands a chromosome into full depot-bracketed routes: each open
    /// vehicle gets its committed head, its block of the permutation, and a
    /// terminal depot.
    pub fn decode(&self, chrom: &Chromosome) -> Solution {
        assert_eq!(chrom.splits.len(), self.stubs.len(), "one split per vehicle");
        assert_eq!(
            chrom.splits.iter().sum::<usize>(),
            chrom.perm.len(),
            "splits must sum to the permutation length"
        );
        let mut routes = Vec::with_capacity(self.stubs.len());
        let mut cursor = 0;
        for (k, stub) in self.stubs.iter().enumerate() {
            if stub.closed {
                assert_eq!(chrom.splits[k], 0, "closed vehicles take no block");
                routes.push(stub.visits.clone());
                continue;
            }
            let take = chrom.splits[k];
            let mut route = Vec::with_capacity(stub.visits.len() + take + 1);
            route.extend_from_slice(&stub.visits);
            route.extend_from_slice(&chrom.perm[cursor..cursor + take]);
            route.push(DEPOT);
            cursor += take;
            routes.push(route);
        }
        Solution { routes }
    }

    /// Inverse of [`decode`](Self::decode) for solutions that extend this
    /// context's committed heads.
    pub fn encode(&self, sol: &Solution) -> Chromosome {
        let mut perm = Vec::new();
        let mut splits = vec![0; self.stubs.len()];
        for (k, route) in sol.routes.iter().enumerate() {
            if self.stubs[k].closed {
                continue;
            }
            let start = self.suffix_start(k);
            let block = &route[start..route.len() - 1];
            splits[k] = block.len();
            perm.extend_from_slice(block);
        }
        Chromosome { perm, splits }
    }
}

// ---------------------------------------------------------------------------
// Genetic operators
// ---------------------------------------------------------------------------

fn ox_fill(p1: &[NodeId], p2: &[NodeId], start: usize, end: usize) -> Vec<NodeId> {
    let mut child = vec![usize::MAX; p1.len()];
    let mut used = HashSet::with_capacity(end - start + 1);
    for i in start..=end {
        child[i] = p1[i];
        used.insert(p1[i]);
    }
    let mut donor = p2.iter().filter(|n| !used.contains(n));
    for slot in child.iter_mut() {
        if *slot == usize::MAX {
            *slot = *donor.next().expect("both parents permute the same set");
        }
    }
    child
}

/// Order crossover: a random contiguous segment is copied from the first
/// parent and the remaining positions are filled in the second parent's
/// relative order. The child keeps the first parent's splits.
pub fn order_crossover<R: Rng>(p1: &Chromosome, p2: &Chromosome, rng: &mut R) -> Chromosome {
    let len = p1.perm.len();
    if len < 2 {
        return p1.clone();
    }
    let a = rng.random_range(0..len);
    let b = rng.random_range(0..len);
    let (start, end) = (a.min(b), a.max(b));
    Chromosome {
        perm: ox_fill(&p1.perm, &p2.perm, start, end),
        splits: p1.splits.clone(),
    }
}

fn shift_split(splits: &mut [usize], from: VehicleId, to: VehicleId) {
    if from != to && splits[from] > 0 {
        splits[from] -= 1;
        splits[to] += 1;
    }
}

/// Mutation: with equal probability either swaps two permutation positions
/// or shifts one unit of block mass between two open vehicles.
pub fn mutate<R: Rng>(ctx: &PlanContext, chrom: &Chromosome, rng: &mut R) -> Chromosome {
    let mut out = chrom.clone();
    if rng.random::<f64>() < 0.5 {
        if out.perm.len() >= 2 {
            let i = rng.random_range(0..out.perm.len());
            let j = rng.random_range(0..out.perm.len());
            out.perm.swap(i, j);
        }
    } else {
        let open = ctx.open_vehicles();
        if open.len() >= 2 {
            let from = open[rng.random_range(0..open.len())];
            let to = open[rng.random_range(0..open.len())];
            shift_split(&mut out.splits, from, to);
        }
    }
    out
}

fn random_splits<R: Rng>(ctx: &PlanContext, len: usize, rng: &mut R) -> Vec<usize> {
    let mut splits = vec![0; ctx.stubs.len()];
    let open = ctx.open_vehicles();
    if open.is_empty() {
        return splits;
    }
    for _ in 0..len {
        splits[open[rng.random_range(0..open.len())]] += 1;
    }
    splits
}

fn random_chromosome<R: Rng>(ctx: &PlanContext, rng: &mut R) -> Chromosome {
    let mut perm = ctx.free.clone();
    perm.shuffle(rng);
    let splits = random_splits(ctx, perm.len(), rng);
    Chromosome { perm, splits }
}

// ---------------------------------------------------------------------------
// Correction procedures
// ---------------------------------------------------------------------------

fn fix_precedence(ctx: &PlanContext, sol: &mut Solution) {
    for (k, route) in sol.routes.iter_mut().enumerate() {
        if ctx.is_closed(k) {
            continue;
        }
        let mut i = ctx.suffix_start(k);
        while i + 1 < route.len() {
            let node = route[i];
            if ctx.instance.node(node).is_delivery() {
                if let Some(partner) = ctx.instance.partner_of(node) {
                    if let Some(ppos) = route.iter().position(|&n| n == partner) {
                        if ppos > i {
                            route.remove(i);
                            route.insert(ppos, node);
                            continue;
                        }
                    }
                }
            }
            i += 1;
        }
    }
}

fn locate(sol: &Solution, node: NodeId) -> Option<(VehicleId, usize)> {
    for (k, route) in sol.routes.iter().enumerate() {
        if let Some(pos) = route.iter().position(|&n| n == node) {
            return Some((k, pos));
        }
    }
    None
}

// Weighted fitness contribution of a single route; both objectives are
// route-additive, so slot choices can be compared route-locally.
fn route_contribution(ctx: &PlanContext, k: VehicleId, route: &[NodeId]) -> f64 {
    let w = &ctx.weights;
    w.lambda1 * w.c1 * route_travel_cost(ctx.instance, k, route)
        + w.lambda2 * w.c2 * route_tardiness(ctx.instance, k, route)
}

fn fix_pairing(ctx: &PlanContext, sol: &mut Solution) {
    for couple in &ctx.instance.couples {
        let Some((kp, p_pos)) = locate(sol, couple.pickup) else { continue };
        let Some((kd, d_pos)) = locate(sol, couple.delivery) else { continue };
        if kp == kd {
            continue;
        }
        sol.routes[kd].remove(d_pos);
        let lo = (p_pos + 1).max(ctx.suffix_start(kp));
        let hi = sol.routes[kp].len() - 1;
        let mut best = lo;
        let mut best_contribution = f64::INFINITY;
        for slot in lo..=hi {
            let mut trial = sol.routes[kp].clone();
            trial.insert(slot, couple.delivery);
            let contribution = route_contribution(ctx, kp, &trial);
            if contribution < best_contribution {
                best_contribution = contribution;
                best = slot;
            }
        }
        sol.routes[kp].insert(best, couple.delivery);
    }
}

fn load_breach(inst: &Instance, k: VehicleId, route: &[NodeId]) -> Option<usize> {
    let mut load = 0.0;
    for (pos, &n) in route.iter().enumerate() {
        load += inst.node(n).demand;
        if load > inst.fleet.capacity(k) || load < 0.0 {
            return Some(pos);
        }
    }
    None
}

fn peak_load(inst: &Instance, route: &[NodeId]) -> f64 {
    let mut load = 0.0;
    let mut peak = 0.0;
    for &n in route {
        load += inst.node(n).demand;
        peak = load.max(peak);
    }
    peak
}

// Whether appending the couple right before the terminal depot keeps the
// route within capacity.
fn can_host(inst: &Instance, k: VehicleId, route: &[NodeId], demand: f64) -> bool {
    if load_breach(inst, k, route).is_some() {
        return false;
    }
    let end_load: f64 = route.iter().map(|&n| inst.node(n).demand).sum();
    end_load + demand <= inst.fleet.capacity(k) && end_load >= 0.0
}

fn fix_capacity(ctx: &PlanContext, sol: &mut Solution) -> bool {
    let inst = ctx.instance;
    loop {
        let mut breach: Option<(VehicleId, usize)> = None;
        for (k, route) in sol.routes.iter().enumerate() {
            if let Some(pos) = load_breach(inst, k, route) {
                breach = Some((k, pos));
                break;
            }
        }
        let Some((k, pos)) = breach else { return true };
        if pos < ctx.suffix_start(k) {
            // Committed head over capacity: nothing may be moved.
            return false;
        }
        let trigger = sol.routes[k][pos];
        let Some(couple_idx) = ctx.instance.couple_of(trigger) else { return false };
        let couple = ctx.instance.couples[couple_idx];
        if !ctx.instance.node(trigger).is_pickup() {
            // A delivery can only breach via a malformed head; unrecoverable.
            return false;
        }
        let Some((_, p_pos)) = locate(sol, couple.pickup) else { return false };
        let Some((dk, d_pos)) = locate(sol, couple.delivery) else { return false };
        debug_assert_eq!(dk, k);
        if p_pos < ctx.suffix_start(k) || d_pos < ctx.suffix_start(dk) {
            return false;
        }

        let demand = ctx.instance.node(couple.pickup).demand;
        let mut best: Option<(VehicleId, f64)> = None;
        for &v in ctx.open_vehicles() {
            let stripped: Vec<NodeId> = sol.routes[v]
                .iter()
                .copied()
                .filter(|&n| n != couple.pickup && n != couple.delivery)
                .collect();
            if !can_host(inst, v, &stripped, demand) {
                continue;
            }
            let residual = inst.fleet.capacity(v) - peak_load(inst, &stripped);
            if best.map_or(true, |(_, r)| residual > r) {
                best = Some((v, residual));
            }
        }
        let Some((target, _)) = best else { return false };

        let route = &mut sol.routes[k];
        route.retain(|&n| n != couple.pickup && n != couple.delivery);
        let t = &mut sol.routes[target];
        let at = t.len() - 1;
        t.insert(at, couple.delivery);
        t.insert(at, couple.pickup);
    }
}

/// Relocates any customer that precedes its supplier to just after it,
/// route by route. Stable and idempotent.
pub fn precedence_correction(ctx: &PlanContext, chrom: &Chromosome) -> Chromosome {
    let mut sol = ctx.decode(chrom);
    fix_precedence(ctx, &mut sol);
    ctx.encode(&sol)
}

/// Moves the customer of every split couple onto its supplier's vehicle at
/// the cheapest position after the supplier.
pub fn pairing_correction(ctx: &PlanContext, chrom: &Chromosome) -> Chromosome {
    let mut sol = ctx.decode(chrom);
    fix_pairing(ctx, &mut sol);
    ctx.encode(&sol)
}

/// Relocates couples out of overloaded routes onto the vehicle with the
/// most remaining peak capacity; `None` marks an unplaceable individual.
/// Expects precedence and pairing to be corrected already.
pub fn capacity_correction(ctx: &PlanContext, chrom: &Chromosome) -> Option<Chromosome> {
    let mut sol = ctx.decode(chrom);
    if fix_capacity(ctx, &mut sol) {
        Some(ctx.encode(&sol))
    } else {
        None
    }
}

/// A corrected, decoded, and scored individual.
#[derive(Debug, Clone)]
pub struct Evaluated {
    pub chromosome: Chromosome,
    pub solution: Solution,
    pub objectives: ObjectiveVector,
    pub fitness: f64,
}

/// Runs the full correction pipeline and scores the result; `None` marks an
/// individual no correction could make feasible.
pub fn correct_and_evaluate(ctx: &PlanContext, chrom: Chromosome) -> Option<Evaluated> {
    let mut sol = ctx.decode(&chrom);
    fix_precedence(ctx, &mut sol);
    fix_pairing(ctx, &mut sol);
    if !fix_capacity(ctx, &mut sol) {
        return None;
    }
    debug_assert!(
        is_hard_feasible(ctx.instance, &sol),
        "correction pipeline must end hard-feasible"
    );
    let obj = objectives(ctx.instance, &sol);
    let fitness = aggregate_fitness(obj, &ctx.weights);
    Some(Evaluated {
        chromosome: ctx.encode(&sol),
        solution: sol,
        objectives: obj,
        fitness,
    })
}

/// Corrects and scores a candidate batch, in parallel when the `parallel`
/// feature is on. Output order equals input order, so runs are reproducible
/// regardless of the worker count.
pub fn evaluate_candidates(ctx: &PlanContext, candidates: Vec<Chromosome>) -> Vec<Option<Evaluated>> {
    batch::map(candidates, |c| correct_and_evaluate(ctx, c))
}

/// Sequential twin of [`evaluate_candidates`], kept for the benchmark suite.
pub fn evaluate_candidates_seq(ctx: &PlanContext, candidates: Vec<Chromosome>) -> Vec<Option<Evaluated>> {
    batch::map_seq(candidates, |c| correct_and_evaluate(ctx, c))
}

fn random_individual<R: Rng>(ctx: &PlanContext, rng: &mut R) -> Option<Evaluated> {
    correct_and_evaluate(ctx, random_chromosome(ctx, rng))
}

/// Seeds the population with corrected random individuals.
pub fn init_population<R: Rng>(
    ctx: &PlanContext,
    cfg: &GaConfig,
    rng: &mut R,
) -> Result<Vec<Evaluated>, EvolveError> {
    let mut pop = Vec::with_capacity(cfg.population_size);
    let mut attempts = 0;
    while pop.len() < cfg.population_size && attempts < 200 * cfg.population_size {
        attempts += 1;
        if let Some(e) = random_individual(ctx, rng) {
            pop.push(e);
        }
    }
    if pop.is_empty() {
        return Err(EvolveError::NoFeasibleIndividuals);
    }
    // Pathological instances may starve the sampler; recycle survivors.
    let mut i = 0;
    while pop.len() < cfg.population_size {
        let clone = pop[i % pop.len()].clone();
        pop.push(clone);
        i += 1;
    }
    Ok(pop)
}

fn tournament<R: Rng>(pop: &[Evaluated], rng: &mut R) -> usize {
    let i = rng.random_range(0..pop.len());
    let j = rng.random_range(0..pop.len());
    if pop[j].fitness < pop[i].fitness {
        j
    } else {
        i
    }
}

/// One generation: fills a 2n pool by crossover/mutation/copy with binary
/// tournament selection, pairs each permutation with `split_samples` vehicle
/// splits, corrects and scores everything, feeds the archive, and keeps the
/// n fittest individuals. Returns the next population and the number of
/// evaluations spent.
pub fn evolve_generation<R: Rng>(
    ctx: &PlanContext,
    cfg: &GaConfig,
    population: &[Evaluated],
    archive: &mut ParetoArchive,
    rng: &mut R,
) -> (Vec<Evaluated>, usize) {
    let n = cfg.population_size;
    let mut candidates = Vec::with_capacity(2 * n * cfg.split_samples);
    for _ in 0..2 * n {
        let roll: f64 = rng.random();
        let chrom = if roll < cfg.crossover_prob {
            let a = tournament(population, rng);
            let b = tournament(population, rng);
            order_crossover(&population[a].chromosome, &population[b].chromosome, rng)
        } else if roll < cfg.crossover_prob + cfg.mutation_prob {
            let a = tournament(population, rng);
            mutate(ctx, &population[a].chromosome, rng)
        } else {
            population[tournament(population, rng)].chromosome.clone()
        };
        // The operator's own split vector is the first sample; the rest
        // re-pair the permutation with fresh vehicle splits.
        let variants: Vec<Vec<usize>> = (1..cfg.split_samples)
            .map(|_| random_splits(ctx, chrom.perm.len(), rng))
            .collect();
        let perm = chrom.perm.clone();
        candidates.push(chrom);
        for splits in variants {
            candidates.push(Chromosome {
                perm: perm.clone(),
                splits,
            });
        }
    }
    // A trickle of fresh random individuals keeps orderings reachable that
    // sit several mutations away from the converged population.
    for _ in 0..(cfg.immigrant_rate * n as f64).round() as usize {
        candidates.push(random_chromosome(ctx, rng));
    }
    let mut evaluations = candidates.len();
    let mut feasible: Vec<Evaluated> = evaluate_candidates(ctx, candidates)
        .into_iter()
        .flatten()
        .collect();
    for e in &feasible {
        archive.insert(e.objectives, e.solution.clone());
    }
    feasible.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));

    // Copy non-dominated solutions back into the breeding population: the
    // lowest-F truncation alone abandons the front's f1 extreme, which the
    // archive alone cannot re-expand.
    let keep = (n / 2).min(archive.len());
    let mut next: Vec<Evaluated> = (0..keep)
        .map(|i| {
            let idx = if keep > 1 {
                i * (archive.len() - 1) / (keep - 1)
            } else {
                0
            };
            let entry = &archive.entries()[idx];
            Evaluated {
                chromosome: ctx.encode(&entry.solution),
                solution: entry.solution.clone(),
                objectives: entry.objectives,
                fitness: aggregate_fitness(entry.objectives, &ctx.weights),
            }
        })
        .collect();
    next.extend(feasible.into_iter().take(n - keep));
    let mut attempts = 0;
    while next.len() < n && attempts < 50 * n {
        attempts += 1;
        evaluations += 1;
        if let Some(e) = random_individual(ctx, rng) {
            archive.insert(e.objectives, e.solution.clone());
            next.push(e);
        }
    }
    (next, evaluations)
}

/// Aggregate counters of one genetic run.
#[derive(Debug, Clone)]
pub struct RunStats {
    /// Number of non-dominated solutions in the final archive.
    pub n_sol: usize,
    /// Used-vehicle count per archive entry, in archive order.
    pub vehicles_used: Vec<usize>,
    pub generations: usize,
    pub evaluations: usize,
    /// Best archive fitness after every generation.
    pub best_fitness_per_generation: Vec<f64>,
    pub wall: Duration,
}

/// Generic loop over any plan context; the static and dynamic entry points
/// both route through here.
pub fn run_with_context(ctx: &PlanContext, cfg: &GaConfig) -> Result<(ParetoArchive, RunStats), EvolveError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut archive = ParetoArchive::new(cfg.archive_capacity);
    let mut population = init_population(ctx, cfg, &mut rng)?;
    let mut evaluations = population.len();
    for e in &population {
        archive.insert(e.objectives, e.solution.clone());
    }
    let mut best_fitness_per_generation = Vec::with_capacity(cfg.generations);
    for _ in 0..cfg.generations {
        let (next, spent) = evolve_generation(ctx, cfg, &population, &mut archive, &mut rng);
        evaluations += spent;
        if next.is_empty() {
            return Err(EvolveError::NoFeasibleIndividuals);
        }
        population = next;
        let best = archive
            .entries()
            .iter()
            .map(|e| aggregate_fitness(e.objectives, &ctx.weights))
            .fold(f64::INFINITY, f64::min);
        best_fitness_per_generation.push(best);
    }
    let stats = RunStats {
        n_sol: archive.len(),
        vehicles_used: archive.entries().iter().map(|e| e.solution.used_vehicles()).collect(),
        generations: cfg.generations,
        evaluations,
        best_fitness_per_generation,
        wall: start.elapsed(),
    };
    Ok((archive, stats))
}

/// Full static optimization: scaling weights from the lower bounds, then
/// the generation loop until the budget is exhausted.
pub fn run_static(inst: &Instance, cfg: &GaConfig) -> Result<(ParetoArchive, RunStats), EvolveError> {
    let weights = weights_for(inst, cfg.lambda1, cfg.lambda2)?;
    let ctx = PlanContext::static_plan(inst, weights);
    run_with_context(&ctx, cfg)
}
