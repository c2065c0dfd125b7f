//! Finite approximations of infinite lattices.
//!
//! `cut_network` keeps only the vertices of a finite subset S and the edges
//! internal to it (insulated boundary); `short_network` additionally merges
//! everything outside S into a single vertex so that each edge leaving S
//! becomes a parallel edge to that vertex (shorted boundary). Cutting can only
//! raise the resistance between two vertices of S and shorting can only lower
//! it, so the two networks bracket the infinite-lattice resistance at every
//! radius of a swelling sequence.
//!
//! Both constructions enumerate internal edges in the same subset order, so
//! edge index `i < internal_edge_count` refers to the same lattice edge in the
//! cut network and in the short network. The flows module relies on this
//! correspondence.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, LatticeVertex, SwellingSequence, VertexSubset};
use crate::network::{Network, VertexId};
use crate::solve::{effective_resistance, SolveConfig};

/// A lattice subset materialized with an insulated boundary.
#[derive(Debug, Clone)]
pub struct CutResult {
    pub network: Network,
    /// Subset position i is network vertex i.
    pub subset: VertexSubset,
}

impl CutResult {
    pub fn vertex_id(&self, v: &LatticeVertex) -> Option<VertexId> {
        self.subset.position(v).map(VertexId)
    }
}

/// A lattice subset materialized with a shorted boundary vertex.
#[derive(Debug, Clone)]
pub struct ShortResult {
    pub network: Network,
    pub subset: VertexSubset,
    /// The vertex all outside vertices were identified into.
    pub infinity: VertexId,
    /// Edges `0..internal_edge_count` are internal to the subset and indexed
    /// exactly as in the corresponding [`CutResult`].
    pub internal_edge_count: usize,
}

impl ShortResult {
    pub fn vertex_id(&self, v: &LatticeVertex) -> Option<VertexId> {
        self.subset.position(v).map(VertexId)
    }
}

/// Network on S only, with exactly the lattice edges internal to S.
pub fn cut_network(lattice: &LatticeSpec, s: &VertexSubset) -> Result<CutResult> {
    if s.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut net = Network::new(s.len());
    for (i, v) in s.iter().enumerate() {
        for (w, c) in lattice.neighbors(v) {
            if let Some(j) = s.position(&w) {
                if i < j {
                    net.add_edge(VertexId(i), VertexId(j), c)?;
                }
            }
        }
    }
    Ok(CutResult {
        network: net,
        subset: s.clone(),
    })
}

/// Network on S plus one extra vertex standing for everything outside.
/// Each lattice edge leaving S becomes a distinct parallel edge to that
/// vertex; edges entirely outside S would be self-loops there and are
/// dropped.
///
/// `fringe_radius` controls how far outside S edges are enumerated. Every
/// lattice kind in scope reaches all leaving edges at distance 1, so any
/// value >= 1 yields the same network; the parameter is validated and kept
/// for interface stability.
pub fn short_network(
    lattice: &LatticeSpec,
    s: &VertexSubset,
    fringe_radius: u32,
) -> Result<ShortResult> {
    if s.is_empty() {
        return Err(Error::EmptySubset);
    }
    if fringe_radius < 1 {
        return Err(Error::InvalidArgument(
            "fringe_radius must be at least 1".to_string(),
        ));
    }
    let infinity = VertexId(s.len());
    let mut net = Network::new(s.len() + 1);
    for (i, v) in s.iter().enumerate() {
        for (w, c) in lattice.neighbors(v) {
            if let Some(j) = s.position(&w) {
                if i < j {
                    net.add_edge(VertexId(i), VertexId(j), c)?;
                }
            }
        }
    }
    let internal_edge_count = net.edge_count();
    for (i, v) in s.iter().enumerate() {
        for (w, c) in lattice.neighbors(v) {
            if !s.contains(&w) {
                net.add_edge(VertexId(i), infinity, c)?;
            }
        }
    }
    Ok(ShortResult {
        network: net,
        subset: s.clone(),
        infinity,
        internal_edge_count,
    })
}

/// Paired short-side and cut-side resistances for one subset.
#[derive(Debug, Clone, Serialize)]
pub struct Bracket {
    pub radius: u32,
    /// |S|.
    pub vertices: usize,
    /// Edge count of the cut network.
    pub edges: usize,
    pub short_resistance: f64,
    /// `f64::INFINITY` when the cut network disconnects the pair.
    pub cut_resistance: f64,
    pub cut_disconnected: bool,
}

impl Bracket {
    pub fn gap(&self) -> f64 {
        self.cut_resistance - self.short_resistance
    }
}

/// Computes the short/cut resistance pair between `p` and `q` over the subset
/// `s`. `radius` is the reporting label for the subset (the swelling-sequence
/// index). Disconnection of the pair in the cut network is a representable
/// outcome, not an error: the cut resistance becomes `+inf` and is flagged.
pub fn resistance_bracket(
    lattice: &LatticeSpec,
    p: &LatticeVertex,
    q: &LatticeVertex,
    s: &VertexSubset,
    radius: u32,
    cfg: &SolveConfig,
) -> Result<Bracket> {
    if p == q {
        return Err(Error::InvalidArgument(
            "bracket endpoints must be distinct".to_string(),
        ));
    }
    let pid = s
        .position(p)
        .ok_or_else(|| Error::OutsideSubset {
            vertex: p.to_string(),
        })
        .map(VertexId)?;
    let qid = s
        .position(q)
        .ok_or_else(|| Error::OutsideSubset {
            vertex: q.to_string(),
        })
        .map(VertexId)?;

    let cut = cut_network(lattice, s)?;
    let (cut_resistance, cut_disconnected) =
        match resistance_within_component(&cut.network, pid, qid, cfg)? {
            Some(r) => (r, false),
            None => (f64::INFINITY, true),
        };

    let short = short_network(lattice, s, 1)?;
    let short_resistance = effective_resistance(&short.network, pid, qid, cfg)?.resistance;

    Ok(Bracket {
        radius,
        vertices: s.len(),
        edges: cut.network.edge_count(),
        short_resistance,
        cut_resistance,
        cut_disconnected,
    })
}

/// Effective resistance between p and q inside p's connected component, or
/// `None` when q lies in a different component.
fn resistance_within_component(
    net: &Network,
    p: VertexId,
    q: VertexId,
    cfg: &SolveConfig,
) -> Result<Option<f64>> {
    if net.is_connected() {
        return Ok(Some(effective_resistance(net, p, q, cfg)?.resistance));
    }
    let comps = net.components();
    let comp = comps
        .iter()
        .find(|c| c.contains(&p))
        .expect("p is a valid vertex");
    if !comp.contains(&q) {
        return Ok(None);
    }
    // Solve on the induced component.
    let mut local = vec![usize::MAX; net.vertex_count()];
    for (i, v) in comp.iter().enumerate() {
        local[v.0] = i;
    }
    let mut sub = Network::new(comp.len());
    for e in net.edges() {
        let (a, b) = (local[e.tail.0], local[e.head.0]);
        if a != usize::MAX && b != usize::MAX {
            sub.add_edge(VertexId(a), VertexId(b), e.conductance)?;
        }
    }
    let r = effective_resistance(&sub, VertexId(local[p.0]), VertexId(local[q.0]), cfg)?;
    Ok(Some(r.resistance))
}

/// Brackets along the default swelling sequence (balls around the pair).
pub fn bracket_table(
    lattice: &LatticeSpec,
    p: &LatticeVertex,
    q: &LatticeVertex,
    radii: &[u32],
    cfg: &SolveConfig,
) -> Result<Vec<Bracket>> {
    let seq = SwellingSequence::around_pair(lattice, p, q)?;
    radii
        .iter()
        .map(|&r| resistance_bracket(lattice, p, q, &seq.subset(r), r, cfg))
        .collect()
}

/// Radius schedule with an optional early-stop tolerance on successive
/// differences.
#[derive(Debug, Clone, Copy)]
pub struct StopRule {
    pub min_radius: u32,
    pub max_radius: u32,
    /// Stop once two successive values differ by less than this.
    pub gap_tolerance: Option<f64>,
}

impl StopRule {
    pub fn radii(min_radius: u32, max_radius: u32) -> Self {
        StopRule {
            min_radius,
            max_radius,
            gap_tolerance: None,
        }
    }

    pub fn with_gap_tolerance(mut self, tolerance: f64) -> Self {
        self.gap_tolerance = Some(tolerance);
        self
    }
}

/// Cut-side resistances along a swelling sequence; nonincreasing in the
/// radius. The final entry is the best finite-stage upper estimate.
pub fn even_resistance_estimate(
    lattice: &LatticeSpec,
    p: &LatticeVertex,
    q: &LatticeVertex,
    seq: &SwellingSequence,
    stop: &StopRule,
    cfg: &SolveConfig,
) -> Result<Vec<(u32, f64)>> {
    estimate_with(stop, |r| {
        let b = resistance_bracket(lattice, p, q, &seq.subset(r), r, cfg)?;
        Ok(b.cut_resistance)
    })
}

/// Short-side resistances along a swelling sequence; nondecreasing in the
/// radius, and never above the cut values.
pub fn odd_resistance_estimate(
    lattice: &LatticeSpec,
    p: &LatticeVertex,
    q: &LatticeVertex,
    seq: &SwellingSequence,
    stop: &StopRule,
    cfg: &SolveConfig,
) -> Result<Vec<(u32, f64)>> {
    estimate_with(stop, |r| {
        let b = resistance_bracket(lattice, p, q, &seq.subset(r), r, cfg)?;
        Ok(b.short_resistance)
    })
}

/// Resistance from `p` to the shorted boundary along a swelling sequence;
/// nondecreasing. Bounded sequences indicate a finite-energy flow to
/// infinity, divergence indicates there is none; the caller reads the trend,
/// no verdict is emitted here.
pub fn resistance_to_infinity(
    lattice: &LatticeSpec,
    p: &LatticeVertex,
    seq: &SwellingSequence,
    stop: &StopRule,
    cfg: &SolveConfig,
) -> Result<Vec<(u32, f64)>> {
    let first = seq.subset(stop.min_radius);
    let pid = first
        .position(p)
        .ok_or_else(|| Error::OutsideSubset {
            vertex: p.to_string(),
        })?;
    debug_assert!(pid < first.len());
    estimate_with(stop, |r| {
        let s = seq.subset(r);
        let pid = s.position(p).ok_or_else(|| Error::OutsideSubset {
            vertex: p.to_string(),
        })?;
        let short = short_network(lattice, &s, 1)?;
        Ok(effective_resistance(&short.network, VertexId(pid), short.infinity, cfg)?.resistance)
    })
}

fn estimate_with(
    stop: &StopRule,
    mut value_at: impl FnMut(u32) -> Result<f64>,
) -> Result<Vec<(u32, f64)>> {
    if stop.min_radius > stop.max_radius {
        return Err(Error::InvalidArgument(
            "min_radius exceeds max_radius".to_string(),
        ));
    }
    let mut table = Vec::new();
    for r in stop.min_radius..=stop.max_radius {
        let v = value_at(r)?;
        if let (Some(tol), Some(&(_, prev))) = (stop.gap_tolerance, table.last()) {
            table.push((r, v));
            if (v - prev as f64).abs() < tol {
                break;
            }
        } else {
            table.push((r, v));
        }
    }
    Ok(table)
}

/// Successive-difference threshold below which a sequence is read as
/// converged.
pub const PLATEAU_TOLERANCE: f64 = 1e-3;

/// Qualitative description of a radius-indexed resistance table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Trend {
    DivergingLinear,
    DivergingLog,
    Plateau,
    Indeterminate,
}

impl Trend {
    pub fn label(&self) -> &'static str {
        match self {
            Trend::DivergingLinear => "diverging-linear",
            Trend::DivergingLog => "diverging-log",
            Trend::Plateau => "plateau",
            Trend::Indeterminate => "indeterminate",
        }
    }

    pub fn is_diverging(&self) -> bool {
        matches!(self, Trend::DivergingLinear | Trend::DivergingLog)
    }
}

/// Classifies a monotone table by the decay of its increments: roughly
/// constant increments diverge linearly, increments ~ 1/r diverge like log r,
/// increments decaying faster (or below [`PLATEAU_TOLERANCE`]) read as a
/// plateau. Fewer than three points are indeterminate.
pub fn classify_trend(table: &[(u32, f64)]) -> Trend {
    if table.len() < 3 {
        return Trend::Indeterminate;
    }
    let increments: Vec<(f64, f64)> = table
        .windows(2)
        .map(|w| {
            let (r0, v0) = w[0];
            let (r1, v1) = w[1];
            ((r0 as f64 + r1 as f64) / 2.0, v1 - v0)
        })
        .collect();
    let last = increments.last().unwrap().1;
    if last.abs() < PLATEAU_TOLERANCE {
        return Trend::Plateau;
    }
    if increments.iter().any(|&(_, d)| d <= 0.0) {
        // Monotone data with a non-positive step is already at solver noise.
        return Trend::Plateau;
    }
    // Least-squares slope of ln(increment) against ln(radius).
    let pts: Vec<(f64, f64)> = increments
        .iter()
        .map(|&(r, d)| (r.ln(), d.ln()))
        .collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom <= 0.0 {
        return Trend::Indeterminate;
    }
    let slope = (n * sxy - sx * sy) / denom;
    if slope > -0.5 {
        Trend::DivergingLinear
    } else if slope > -1.5 {
        Trend::DivergingLog
    } else {
        Trend::Plateau
    }
}
