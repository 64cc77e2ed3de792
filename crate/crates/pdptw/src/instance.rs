//! Problem data model: nodes, pickup/delivery couples, fleet, distances,
//! the Li & Lim text format, and instance validation.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type NodeId = usize;
pub type VehicleId = usize;

/// The depot is always node 0.
pub const DEPOT: NodeId = 0;

/// A vertex of the problem. `demand > 0` marks a supplier (pickup),
/// `demand < 0` a customer (delivery), `demand == 0` the depot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub x: f64,
    pub y: f64,
    pub demand: f64,
    /// Time-window open (e).
    pub ready: f64,
    /// Time-window close (l).
    pub due: f64,
    /// Service duration at the vertex (s).
    pub service: f64,
}

impl Node {
    pub fn is_pickup(&self) -> bool {
        self.demand > 0.0
    }

    pub fn is_delivery(&self) -> bool {
        self.demand < 0.0
    }
}

/// A paired pickup and delivery that must be served in order by one vehicle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Couple {
    pub pickup: NodeId,
    pub delivery: NodeId,
}

/// The vehicle fleet. Stored per vehicle so heterogeneous data stays
/// representable, even though the benchmark files are homogeneous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fleet {
    capacities: Vec<f64>,
    unit_costs: Vec<f64>,
    speeds: Vec<f64>,
}

impl Fleet {
    pub fn homogeneous(count: usize, capacity: f64, unit_cost: f64, speed: f64) -> Self {
        Fleet {
            capacities: vec![capacity; count],
            unit_costs: vec![unit_cost; count],
            speeds: vec![speed; count],
        }
    }

    pub fn from_parts(capacities: Vec<f64>, unit_costs: Vec<f64>, speeds: Vec<f64>) -> Self {
        assert!(capacities.len() == unit_costs.len() && unit_costs.len() == speeds.len());
        Fleet {
            capacities,
            unit_costs,
            speeds,
        }
    }

    pub fn count(&self) -> usize {
        self.capacities.len()
    }

    pub fn capacity(&self, k: VehicleId) -> f64 {
        self.capacities[k]
    }

    pub fn unit_cost(&self, k: VehicleId) -> f64 {
        self.unit_costs[k]
    }

    pub fn speed(&self, k: VehicleId) -> f64 {
        self.speeds[k]
    }

    pub fn min_unit_cost(&self) -> f64 {
        self.unit_costs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_speed(&self) -> f64 {
        self.speeds.iter().copied().fold(0.0, f64::max)
    }

    pub fn scale_costs(&self, factor: f64) -> Fleet {
        Fleet {
            capacities: self.capacities.clone(),
            unit_costs: self.unit_costs.iter().map(|c| c * factor).collect(),
            speeds: self.speeds.clone(),
        }
    }
}

/// Immutable problem data. Node ids are dense `0..nodes.len()` with the
/// depot at index 0; every non-depot node belongs to exactly one couple.
#[derive(Debug, Clone)]
pub struct Instance {
    pub nodes: Vec<Node>,
    pub couples: Vec<Couple>,
    pub fleet: Fleet,
    /// Planning horizon, equal to the depot's time-window close.
    pub horizon: f64,
    // id -> couple index, id -> partner id; built once at construction.
    couple_of: Vec<Option<usize>>,
    partner_of: Vec<Option<NodeId>>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.couples == other.couples && self.fleet == other.fleet
    }
}

impl Instance {
    /// Builds an instance without validating it; see [`validate_instance`].
    pub fn new(nodes: Vec<Node>, couples: Vec<Couple>, fleet: Fleet) -> Self {
        let horizon = nodes.first().map(|d| d.due).unwrap_or(0.0);
        let mut couple_of = vec![None; nodes.len()];
        let mut partner_of = vec![None; nodes.len()];
        for (idx, c) in couples.iter().enumerate() {
            if c.pickup < nodes.len() {
                couple_of[c.pickup] = Some(idx);
                partner_of[c.pickup] = Some(c.delivery);
            }
            if c.delivery < nodes.len() {
                couple_of[c.delivery] = Some(idx);
                partner_of[c.delivery] = Some(c.pickup);
            }
        }
        Instance {
            nodes,
            couples,
            fleet,
            horizon,
            couple_of,
            partner_of,
        }
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    /// Number of non-depot vertices (N').
    pub fn active_nodes(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    pub fn couple_of(&self, id: NodeId) -> Option<usize> {
        self.couple_of.get(id).copied().flatten()
    }

    pub fn partner_of(&self, id: NodeId) -> Option<NodeId> {
        self.partner_of.get(id).copied().flatten()
    }

    /// Euclidean distance between two vertices.
    pub fn distance(&self, i: NodeId, j: NodeId) -> f64 {
        let a = &self.nodes[i];
        let b = &self.nodes[j];
        ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt()
    }

    /// Travel time of vehicle `k` over the arc (i, j).
    pub fn travel_time(&self, k: VehicleId, i: NodeId, j: NodeId) -> f64 {
        self.distance(i, j) / self.fleet.speed(k)
    }

    /// Fastest possible traversal of (i, j) over the whole fleet.
    pub fn min_travel_time(&self, i: NodeId, j: NodeId) -> f64 {
        self.distance(i, j) / self.fleet.max_speed()
    }

    /// New instance with the given couples (by index) removed and the
    /// remaining node ids re-densified. The fleet is kept unchanged.
    pub fn without_couples(&self, drop: &[usize]) -> Instance {
        let mut keep_nodes: Vec<Node> = vec![self.nodes[DEPOT]];
        let mut remap = vec![usize::MAX; self.nodes.len()];
        remap[DEPOT] = DEPOT;
        let mut couples = Vec::new();
        for (idx, c) in self.couples.iter().enumerate() {
            if drop.contains(&idx) {
                continue;
            }
            for id in [c.pickup, c.delivery] {
                remap[id] = keep_nodes.len();
                let mut n = self.nodes[id];
                n.id = remap[id];
                keep_nodes.push(n);
            }
            couples.push(Couple {
                pickup: remap[c.pickup],
                delivery: remap[c.delivery],
            });
        }
        Instance::new(keep_nodes, couples, self.fleet.clone())
    }

    /// New instance extended by one pickup/delivery couple; the new nodes
    /// take the next two ids. Returns the instance and the couple's index.
    pub fn with_couple(&self, pickup: Node, delivery: Node) -> (Instance, usize) {
        let mut nodes = self.nodes.clone();
        let p_id = nodes.len();
        let d_id = p_id + 1;
        nodes.push(Node { id: p_id, ..pickup });
        nodes.push(Node { id: d_id, ..delivery });
        let mut couples = self.couples.clone();
        couples.push(Couple {
            pickup: p_id,
            delivery: d_id,
        });
        let idx = couples.len() - 1;
        (Instance::new(nodes, couples, self.fleet.clone()), idx)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: dangling sibling reference {sibling} for node {node}")]
    DanglingSibling {
        line: usize,
        node: NodeId,
        sibling: NodeId,
    },
    #[error("line {line}: duplicate node id {id}")]
    DuplicateId { line: usize, id: NodeId },
    #[error("node ids are not contiguous: missing id {missing}")]
    NonContiguousIds { missing: NodeId },
    #[error("couple ({pickup}, {delivery}): pickup/delivery quantities do not match")]
    QuantityMismatch { pickup: NodeId, delivery: NodeId },
    #[error("invalid instance: {0}")]
    Invalid(String),
}

fn field<T: std::str::FromStr>(
    tokens: &[&str],
    idx: usize,
    line: usize,
    what: &str,
) -> Result<T, ParseError> {
    tokens
        .get(idx)
        .ok_or_else(|| ParseError::Malformed {
            line,
            message: format!("missing field `{what}`"),
        })?
        .parse::<T>()
        .map_err(|_| ParseError::Malformed {
            line,
            message: format!("cannot parse field `{what}` from {:?}", tokens[idx]),
        })
}

/// Parses the Li & Lim text layout: a `K Q speed` header line followed by
/// `id x y q e l s pickup_sibling delivery_sibling` rows, depot on row id 0.
pub fn parse_lilim(text: &str) -> Result<Instance, ParseError> {
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut header: Option<(usize, f64, f64)> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if header.is_none() {
            if tokens.len() != 3 {
                return Err(ParseError::Malformed {
                    line,
                    message: format!("expected header `K Q speed`, got {} fields", tokens.len()),
                });
            }
            let k: usize = field(&tokens, 0, line, "K")?;
            let q: f64 = field(&tokens, 1, line, "Q")?;
            let speed: f64 = field(&tokens, 2, line, "speed")?;
            header = Some((k, q, speed));
            continue;
        }
        if tokens.len() != 9 {
            return Err(ParseError::Malformed {
                line,
                message: format!("expected 9 fields, got {}", tokens.len()),
            });
        }
        let mut vals = Vec::with_capacity(9);
        for (i, what) in ["id", "x", "y", "q", "e", "l", "s", "psib", "dsib"]
            .iter()
            .enumerate()
        {
            vals.push(field::<f64>(&tokens, i, line, what)?);
        }
        rows.push((line, vals));
    }

    let (k, q, speed) = header.ok_or(ParseError::Malformed {
        line: 1,
        message: "empty stream".into(),
    })?;
    if rows.is_empty() {
        return Err(ParseError::Malformed {
            line: 2,
            message: "no node rows".into(),
        });
    }

    let mut nodes: Vec<Option<Node>> = vec![None; rows.len()];
    let mut siblings: Vec<(usize, NodeId, NodeId, NodeId)> = Vec::new();
    for (line, vals) in &rows {
        let id = vals[0] as usize;
        if vals[0].fract() != 0.0 || id >= rows.len() {
            if id >= rows.len() {
                return Err(ParseError::NonContiguousIds { missing: rows.len() - 1 });
            }
            return Err(ParseError::Malformed {
                line: *line,
                message: "node id must be an integer".into(),
            });
        }
        if nodes[id].is_some() {
            return Err(ParseError::DuplicateId { line: *line, id });
        }
        nodes[id] = Some(Node {
            id,
            x: vals[1],
            y: vals[2],
            demand: vals[3],
            ready: vals[4],
            due: vals[5],
            service: vals[6],
        });
        siblings.push((*line, id, vals[7] as usize, vals[8] as usize));
    }
    let nodes: Vec<Node> = nodes
        .into_iter()
        .enumerate()
        .map(|(id, n)| n.ok_or(ParseError::NonContiguousIds { missing: id }))
        .collect::<Result<_, _>>()?;

    // Couples come from the pickup rows; delivery rows must point back.
    let mut back: Vec<Option<NodeId>> = vec![None; nodes.len()];
    let mut couples = Vec::new();
    for &(line, id, psib, dsib) in &siblings {
        if id == DEPOT {
            continue;
        }
        if nodes[id].is_pickup() {
            if dsib == 0 || dsib >= nodes.len() {
                return Err(ParseError::DanglingSibling {
                    line,
                    node: id,
                    sibling: dsib,
                });
            }
            couples.push(Couple {
                pickup: id,
                delivery: dsib,
            });
        } else {
            if psib == 0 || psib >= nodes.len() {
                return Err(ParseError::DanglingSibling {
                    line,
                    node: id,
                    sibling: psib,
                });
            }
            back[id] = Some(psib);
        }
    }
    couples.sort_by_key(|c| c.pickup);
    for c in &couples {
        if back.get(c.delivery).copied().flatten() != Some(c.pickup) {
            return Err(ParseError::DanglingSibling {
                line: 0,
                node: c.pickup,
                sibling: c.delivery,
            });
        }
        if nodes[c.pickup].demand + nodes[c.delivery].demand != 0.0 {
            return Err(ParseError::QuantityMismatch {
                pickup: c.pickup,
                delivery: c.delivery,
            });
        }
    }

    let inst = Instance::new(nodes, couples, Fleet::homogeneous(k, q, 1.0, speed));
    let violations = validate_instance(&inst);
    if let Some(v) = violations.first() {
        return Err(ParseError::Invalid(format!(
            "{v} (and {} more)",
            violations.len() - 1
        )));
    }
    Ok(inst)
}

fn fmt_num(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

/// Renders an instance back into the Li & Lim text layout.
pub fn serialize_lilim(inst: &Instance) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{} {} {}\n",
        inst.fleet.count(),
        fmt_num(inst.fleet.capacity(0)),
        fmt_num(inst.fleet.speed(0)),
    ));
    for n in &inst.nodes {
        let (psib, dsib) = if n.id == DEPOT {
            (0, 0)
        } else if n.is_pickup() {
            (0, inst.partner_of(n.id).unwrap_or(0))
        } else {
            (inst.partner_of(n.id).unwrap_or(0), 0)
        };
        out.push_str(&format!(
            "{} {} {} {} {} {} {} {} {}\n",
            n.id,
            fmt_num(n.x),
            fmt_num(n.y),
            fmt_num(n.demand),
            fmt_num(n.ready),
            fmt_num(n.due),
            fmt_num(n.service),
            psib,
            dsib,
        ));
    }
    out
}

/// A broken instance invariant. Violations are data, not errors: collecting
/// them lets callers report everything wrong with a file at once.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceViolation {
    MissingDepot,
    DepotHasDemand,
    WindowInverted { node: NodeId },
    NegativeService { node: NodeId },
    QuantityMismatch { couple: usize },
    SelfPaired { couple: usize },
    DepotPaired { couple: usize },
    UnknownNode { couple: usize, node: NodeId },
    Unpaired { node: NodeId },
    MultiplyPaired { node: NodeId },
    EmptyFleet,
    BadCapacity { vehicle: VehicleId },
    BadUnitCost { vehicle: VehicleId },
    BadSpeed { vehicle: VehicleId },
}

impl std::fmt::Display for InstanceViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use InstanceViolation::*;
        match self {
            MissingDepot => write!(f, "node 0 (depot) is missing"),
            DepotHasDemand => write!(f, "depot demand must be zero"),
            WindowInverted { node } => write!(f, "node {node}: window-inverted (e > l)"),
            NegativeService { node } => write!(f, "node {node}: negative service time"),
            QuantityMismatch { couple } => write!(f, "couple {couple}: quantity-mismatch"),
            SelfPaired { couple } => write!(f, "couple {couple}: pickup equals delivery"),
            DepotPaired { couple } => write!(f, "couple {couple}: uses the depot"),
            UnknownNode { couple, node } => write!(f, "couple {couple}: unknown node {node}"),
            Unpaired { node } => write!(f, "node {node} belongs to no couple"),
            MultiplyPaired { node } => write!(f, "node {node} belongs to several couples"),
            EmptyFleet => write!(f, "fleet has no vehicles"),
            BadCapacity { vehicle } => write!(f, "vehicle {vehicle}: capacity must be > 0"),
            BadUnitCost { vehicle } => write!(f, "vehicle {vehicle}: unit cost must be > 0"),
            BadSpeed { vehicle } => write!(f, "vehicle {vehicle}: speed must be > 0"),
        }
    }
}

/// Checks every instance invariant; the empty list marks a valid instance.
pub fn validate_instance(inst: &Instance) -> Vec<InstanceViolation> {
    use InstanceViolation::*;
    let mut out = Vec::new();
    if inst.nodes.is_empty() {
        out.push(MissingDepot);
        return out;
    }
    if inst.nodes[DEPOT].demand != 0.0 {
        out.push(DepotHasDemand);
    }
    for n in &inst.nodes {
        if n.ready > n.due {
            out.push(WindowInverted { node: n.id });
        }
        if n.service < 0.0 {
            out.push(NegativeService { node: n.id });
        }
    }
    let mut seen = vec![0usize; inst.nodes.len()];
    for (idx, c) in inst.couples.iter().enumerate() {
        if c.pickup == c.delivery {
            out.push(SelfPaired { couple: idx });
            continue;
        }
        if c.pickup == DEPOT || c.delivery == DEPOT {
            out.push(DepotPaired { couple: idx });
            continue;
        }
        let mut bad = false;
        for id in [c.pickup, c.delivery] {
            if id >= inst.nodes.len() {
                out.push(UnknownNode {
                    couple: idx,
                    node: id,
                });
                bad = true;
            }
        }
        if bad {
            continue;
        }
        seen[c.pickup] += 1;
        seen[c.delivery] += 1;
        let (p, d) = (&inst.nodes[c.pickup], &inst.nodes[c.delivery]);
        if !(p.demand > 0.0 && d.demand < 0.0 && p.demand + d.demand == 0.0) {
            out.push(QuantityMismatch { couple: idx });
        }
    }
    for n in inst.nodes.iter().skip(1) {
        match seen[n.id] {
            0 => out.push(Unpaired { node: n.id }),
            1 => {}
            _ => out.push(MultiplyPaired { node: n.id }),
        }
    }
    if inst.fleet.count() == 0 {
        out.push(EmptyFleet);
    }
    for k in 0..inst.fleet.count() {
        if !(inst.fleet.capacity(k) > 0.0) {
            out.push(BadCapacity { vehicle: k });
        }
        if !(inst.fleet.unit_cost(k) > 0.0) {
            out.push(BadUnitCost { vehicle: k });
        }
        if !(inst.fleet.speed(k) > 0.0) {
            out.push(BadSpeed { vehicle: k });
        }
    }
    out
}

/// Deterministic random instance for tests and experiments. Windows are
/// placed so that each couple alone is servable without tardiness by one
/// empty vehicle; `window_tightness` in (0, 1] scales the window widths.
pub fn generate_synthetic(n_couples: usize, window_tightness: f64, seed: u64) -> Instance {
    assert!(n_couples >= 1, "need at least one couple");
    let tightness = window_tightness.clamp(0.05, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let horizon = 1000.0;
    let width = (tightness * 200.0).max(30.0);
    let service = 10.0;

    let depot = Node {
        id: DEPOT,
        x: 50.0,
        y: 50.0,
        demand: 0.0,
        ready: 0.0,
        due: horizon,
        service: 0.0,
    };
    let mut nodes = vec![depot];
    let mut couples = Vec::new();
    for _ in 0..n_couples {
        let p_id = nodes.len();
        let d_id = p_id + 1;
        let (px, py) = (rng.random_range(0..=100) as f64, rng.random_range(0..=100) as f64);
        let (dx, dy) = (rng.random_range(0..=100) as f64, rng.random_range(0..=100) as f64);
        let q = rng.random_range(10..=30) as f64;

        // Direct solo-route trace, used to anchor windows.
        let slack = rng.random_range(0..=300) as f64;
        let arrive_p = ((px - 50.0).powi(2) + (py - 50.0).powi(2)).sqrt() + slack;
        let ready_p = (arrive_p - rng.random_range(0.0..=width / 2.0)).max(0.0);
        let due_p = arrive_p.max(ready_p) + service + rng.random_range(width / 4.0..=width / 2.0);
        let depart_p = arrive_p.max(ready_p) + service;
        let arrive_d = depart_p + ((px - dx).powi(2) + (py - dy).powi(2)).sqrt();
        let ready_d = (arrive_d - rng.random_range(0.0..=width / 2.0)).max(0.0);
        let due_d = arrive_d.max(ready_d) + service + rng.random_range(width / 4.0..=width / 2.0);

        nodes.push(Node {
            id: p_id,
            x: px,
            y: py,
            demand: q,
            ready: ready_p.floor(),
            due: due_p.ceil(),
            service,
        });
        nodes.push(Node {
            id: d_id,
            x: dx,
            y: dy,
            demand: -q,
            ready: ready_d.floor(),
            due: due_d.ceil(),
            service,
        });
        couples.push(Couple {
            pickup: p_id,
            delivery: d_id,
        });
    }
    let vehicles = 1 + n_couples / 3;
    Instance::new(nodes, couples, Fleet::homogeneous(vehicles, 100.0, 1.0, 1.0))
}
