//! Machine-readable run reports mirroring the benchmark tables: one row per
//! non-dominated solution with the used-vehicle count, both objectives, and
//! the aggregate fitness, plus bounds, per-event outcomes, and full routes.

use crate::bounds::BoundsReport;
use crate::dynamic::{DynamicEvent, DynamicRun, EntryInsertion, EventRecord};
use crate::evolution::GaConfig;
use crate::instance::{Instance, NodeId};
use crate::pareto::ParetoArchive;
use crate::schedule::{aggregate_fitness, Solution, Weights};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Routes keyed by vehicle index, serialized as a JSON object
/// `{"0": [...], "1": [...]}` in vehicle order.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutesJson(pub Vec<Vec<NodeId>>);

impl From<&Solution> for RoutesJson {
    fn from(sol: &Solution) -> Self {
        RoutesJson(sol.routes.clone())
    }
}

impl RoutesJson {
    pub fn to_solution(&self) -> Solution {
        Solution {
            routes: self.0.clone(),
        }
    }
}

impl Serialize for RoutesJson {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, route) in self.0.iter().enumerate() {
            map.serialize_entry(&k.to_string(), route)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for RoutesJson {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: std::collections::BTreeMap<String, Vec<NodeId>> =
            Deserialize::deserialize(deserializer)?;
        let mut keyed: Vec<(usize, Vec<NodeId>)> = Vec::with_capacity(raw.len());
        for (k, route) in raw {
            let idx: usize = k
                .parse()
                .map_err(|_| D::Error::custom(format!("vehicle key {k:?} is not an index")))?;
            keyed.push((idx, route));
        }
        keyed.sort_by_key(|(k, _)| *k);
        for (expect, (got, _)) in keyed.iter().enumerate() {
            if *got != expect {
                return Err(D::Error::custom(format!(
                    "vehicle keys must be contiguous, missing {expect}"
                )));
            }
        }
        Ok(RoutesJson(keyed.into_iter().map(|(_, r)| r).collect()))
    }
}

/// One archive entry as presented in the result tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    /// N_k: vehicles used.
    pub n_k: usize,
    pub f1: f64,
    pub f2: f64,
    /// Aggregate fitness F under the run's weights.
    pub fitness: f64,
}

/// The two table extremes: the row minimizing f1 and the row minimizing f2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub min_f1: Option<ReportRow>,
    pub min_f2: Option<ReportRow>,
}

/// Per-event outcome mirrored from the dynamic run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventOutcome {
    pub index: usize,
    pub time: f64,
    pub served: bool,
    pub vehicle: Option<usize>,
    pub f1: Option<f64>,
    pub f2: Option<f64>,
    pub fitness: Option<f64>,
    pub per_entry: Vec<EntryInsertion>,
    pub committed: Vec<Vec<NodeId>>,
}

impl From<&EventRecord> for EventOutcome {
    fn from(r: &EventRecord) -> Self {
        EventOutcome {
            index: r.index,
            time: r.time,
            served: r.served,
            vehicle: r.vehicle,
            f1: r.objectives.map(|o| o.f1),
            f2: r.objectives.map(|o| o.f2),
            fitness: r.fitness,
            per_entry: r.per_entry.clone(),
            committed: r.committed.clone(),
        }
    }
}

/// Full machine-readable result of one solver run. Wall time is deliberately
/// not part of the report so that equal flags and seed produce byte-equal
/// files; it goes to stderr instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: String,
    pub method: String,
    pub seed: u64,
    pub n_sol: usize,
    pub bounds: BoundsReport,
    pub weights: Weights,
    pub config: GaConfig,
    pub rows: Vec<ReportRow>,
    pub summary: Summary,
    pub events: Vec<EventOutcome>,
    /// Full routes per row, re-checkable against the instance file.
    pub routes: Vec<RoutesJson>,
}

fn rows_of(archive: &ParetoArchive, weights: &Weights) -> Vec<ReportRow> {
    archive
        .entries()
        .iter()
        .map(|e| ReportRow {
            n_k: e.solution.used_vehicles(),
            f1: e.objectives.f1,
            f2: e.objectives.f2,
            fitness: aggregate_fitness(e.objectives, weights),
        })
        .collect()
}

fn summary_of(rows: &[ReportRow]) -> Summary {
    // Rows arrive f1-sorted from the archive.
    Summary {
        min_f1: rows.first().cloned(),
        min_f2: rows.last().cloned(),
    }
}

/// Assembles the report of a static run.
pub fn report_static(
    instance_name: &str,
    cfg: &GaConfig,
    bounds: BoundsReport,
    weights: Weights,
    archive: &ParetoArchive,
) -> RunReport {
    let rows = rows_of(archive, &weights);
    RunReport {
        instance: instance_name.to_string(),
        method: "static".to_string(),
        seed: cfg.seed,
        n_sol: archive.len(),
        bounds,
        weights,
        config: cfg.clone(),
        summary: summary_of(&rows),
        rows,
        events: Vec::new(),
        routes: archive.entries().iter().map(|e| RoutesJson::from(&e.solution)).collect(),
    }
}

/// Assembles the report of a dynamic run; bounds refer to the final
/// (fully extended) instance.
pub fn report_dynamic(
    instance_name: &str,
    cfg: &GaConfig,
    bounds: BoundsReport,
    run: &DynamicRun,
    method_tag: &str,
) -> RunReport {
    let rows = rows_of(&run.archive, &run.weights);
    RunReport {
        instance: instance_name.to_string(),
        method: method_tag.to_string(),
        seed: cfg.seed,
        n_sol: run.archive.len(),
        bounds,
        weights: run.weights,
        config: cfg.clone(),
        summary: summary_of(&rows),
        rows,
        events: run.records.iter().map(EventOutcome::from).collect(),
        routes: run
            .archive
            .entries()
            .iter()
            .map(|e| RoutesJson::from(&e.solution))
            .collect(),
    }
}

/// Renders a number with nine decimal places, trailing zeros trimmed, so
/// that at least six significant digits survive for every value in range.
fn fmt_sig(x: f64) -> String {
    let mut s = format!("{x:.9}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

pub const CSV_HEADER: &str = "instance,method,N_sol,N_k,f1,f2,F,seed";

/// CSV rendering: the header plus one row per archive entry.
pub fn to_csv(report: &RunReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            report.instance,
            report.method,
            report.n_sol,
            row.n_k,
            fmt_sig(row.f1),
            fmt_sig(row.f2),
            fmt_sig(row.fitness),
            report.seed,
        ));
    }
    out
}

/// JSON rendering; equal reports serialize to equal bytes.
pub fn to_json(report: &RunReport) -> String {
    serde_json::to_string_pretty(report).expect("report serialization cannot fail")
}

pub fn from_json(text: &str) -> Result<RunReport, serde_json::Error> {
    serde_json::from_str(text)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeriveError {
    #[error("fraction must lie strictly between 0 and 1, got {0}")]
    BadFraction(f64),
    #[error("removing {removed} of {total} couples would leave no static request")]
    NothingLeft { removed: usize, total: usize },
}

/// Splits an instance into a reduced static instance plus dynamic events:
/// ceil(fraction * couples) randomly chosen couples are re-emitted as events
/// at t_d = release * horizon. Deterministic per seed; reduced instance and
/// events jointly cover every original couple.
pub fn derive_events(
    inst: &Instance,
    fraction: f64,
    release: f64,
    seed: u64,
) -> Result<(Instance, Vec<DynamicEvent>), DeriveError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(DeriveError::BadFraction(fraction));
    }
    let total = inst.couples.len();
    let removed = (fraction * total as f64).ceil() as usize;
    if removed >= total {
        return Err(DeriveError::NothingLeft { removed, total });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices: Vec<usize> = (0..total).collect();
    indices.shuffle(&mut rng);
    let mut drop: Vec<usize> = indices.into_iter().take(removed).collect();
    drop.sort_unstable();

    let t_d = release * inst.horizon;
    let events = drop
        .iter()
        .map(|&idx| {
            let c = inst.couples[idx];
            let p = inst.node(c.pickup);
            let d = inst.node(c.delivery);
            DynamicEvent {
                time: t_d,
                pickup: crate::dynamic::NodeData {
                    x: p.x,
                    y: p.y,
                    demand: p.demand,
                    ready: p.ready,
                    due: p.due,
                    service: p.service,
                },
                delivery: crate::dynamic::NodeData {
                    x: d.x,
                    y: d.y,
                    demand: d.demand,
                    ready: d.ready,
                    due: d.due,
                    service: d.service,
                },
            }
        })
        .collect();
    Ok((inst.without_couples(&drop), events))
}
