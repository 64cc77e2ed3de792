//! Pareto dominance, non-dominated archive maintenance, and front
//! extraction over (f1, f2) objective vectors.

use crate::schedule::{aggregate_fitness, ObjectiveVector, Solution, Weights};
use serde::{Deserialize, Serialize};

/// Minimization dominance: `a` is no worse in both criteria and strictly
/// better in at least one.
pub fn dominates(a: ObjectiveVector, b: ObjectiveVector) -> bool {
    a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2)
}

/// The non-dominated subset of a point set, duplicates collapsed, sorted by
/// ascending f1.
pub fn extract_front(points: &[ObjectiveVector]) -> Vec<ObjectiveVector> {
    let mut front: Vec<ObjectiveVector> = Vec::new();
    for &p in points {
        if front.iter().any(|&q| dominates(q, p) || q == p) {
            continue;
        }
        front.retain(|&q| !dominates(p, q));
        front.push(p);
    }
    front.sort_by(|a, b| a.f1.total_cmp(&b.f1).then(a.f2.total_cmp(&b.f2)));
    front
}

/// One archived solution with its objectives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveEntry {
    pub objectives: ObjectiveVector,
    pub solution: Solution,
}

/// Bounded set of mutually non-dominated solutions, kept sorted by
/// ascending f1 (hence descending f2). When full, the entry with the
/// smallest crowding distance is evicted; boundary entries are immortal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoArchive {
    entries: Vec<ArchiveEntry>,
    capacity: Option<usize>,
}

impl ParetoArchive {
    pub const DEFAULT_CAPACITY: usize = 256;

    pub fn unbounded() -> Self {
        ParetoArchive {
            entries: Vec::new(),
            capacity: None,
        }
    }

    pub fn with_capacity(capacity: usize) -> Self {
        ParetoArchive {
            entries: Vec::new(),
            capacity: Some(capacity.max(2)),
        }
    }

    pub fn new(capacity: Option<usize>) -> Self {
        match capacity {
            Some(c) => Self::with_capacity(c),
            None => Self::unbounded(),
        }
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn front(&self) -> Vec<ObjectiveVector> {
        self.entries.iter().map(|e| e.objectives).collect()
    }

    /// Entry minimizing the weighted fitness F; ties break toward smaller f1.
    pub fn min_fitness_entry(&self, w: &Weights) -> Option<&ArchiveEntry> {
        self.entries.iter().min_by(|a, b| {
            aggregate_fitness(a.objectives, w)
                .total_cmp(&aggregate_fitness(b.objectives, w))
                .then(a.objectives.f1.total_cmp(&b.objectives.f1))
        })
    }

    /// Entries are f1-sorted, so the extremes sit at the ends.
    pub fn min_f1_entry(&self) -> Option<&ArchiveEntry> {
        self.entries.first()
    }

    pub fn min_f2_entry(&self) -> Option<&ArchiveEntry> {
        self.entries.last()
    }

    /// Offers a candidate. Returns true when the candidate enters the
    /// archive; dominated or duplicate candidates are rejected (a duplicate
    /// objective vector keeps whichever solution compares lexicographically
    /// smaller, so insertion order never matters).
    pub fn insert(&mut self, objectives: ObjectiveVector, solution: Solution) -> bool {
        if !(objectives.f1.is_finite() && objectives.f2.is_finite()) {
            return false;
        }
        if let Some(twin) = self
            .entries
            .iter_mut()
            .find(|e| e.objectives == objectives)
        {
            if solution < twin.solution {
                twin.solution = solution;
            }
            return false;
        }
        if self
            .entries
            .iter()
            .any(|e| dominates(e.objectives, objectives))
        {
            return false;
        }
        self.entries.retain(|e| !dominates(objectives, e.objectives));
        let pos = self
            .entries
            .partition_point(|e| e.objectives.f1 < objectives.f1);
        self.entries.insert(
            pos,
            ArchiveEntry {
                objectives,
                solution,
            },
        );
        if let Some(cap) = self.capacity {
            while self.entries.len() > cap {
                let victim = self.least_crowded();
                self.entries.remove(victim);
            }
        }
        true
    }

    // Index of the non-boundary entry with the smallest crowding distance.
    fn least_crowded(&self) -> usize {
        debug_assert!(self.entries.len() >= 3);
        let n = self.entries.len();
        let f1_span = (self.entries[n - 1].objectives.f1 - self.entries[0].objectives.f1).max(1e-30);
        let f2_span = (self.entries[0].objectives.f2 - self.entries[n - 1].objectives.f2).max(1e-30);
        let mut best = 1;
        let mut best_dist = f64::INFINITY;
        for i in 1..n - 1 {
            let d1 = (self.entries[i + 1].objectives.f1 - self.entries[i - 1].objectives.f1) / f1_span;
            let d2 = (self.entries[i - 1].objectives.f2 - self.entries[i + 1].objectives.f2) / f2_span;
            let dist = d1 + d2;
            if dist < best_dist {
                best_dist = dist;
                best = i;
            }
        }
        best
    }
}
