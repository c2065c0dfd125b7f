//! Even, odd and ghost flows on lattice approximations.
//!
//! For a balanced finite source distribution supported inside a subset S, the
//! even flow is the Kirchhoff flow in `cut_network(S)` (insulated boundary)
//! and the odd flow is the Kirchhoff flow in `short_network(S)` (shorted
//! boundary). The odd flow is the minimum-energy flow with those sources, so
//! odd resistances never exceed even resistances. Their difference restricted
//! to the common (internal) edges estimates the ghost flow; its energy
//! estimates the even/odd resistance gap and vanishes in the limit exactly
//! when the two resistances agree.
//!
//! Only the odd flow accepts unbalanced sources: the shorted boundary absorbs
//! the imbalance, which is the finite-stage picture of a flow to infinity.

use crate::approximation::{cut_network, short_network, CutResult, ShortResult};
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, LatticeVertex, VertexSubset};
use crate::network::{EdgeId, Flow, Network, SourceDistribution, VertexId};
use crate::solve::{effective_resistance, solve_potential, SolveConfig};

/// Maps lattice-vertex sources into network sources over a subset.
fn map_sources(
    sources: &[(LatticeVertex, f64)],
    s: &VertexSubset,
) -> Result<SourceDistribution> {
    let mut pairs = Vec::with_capacity(sources.len());
    for (v, strength) in sources {
        let id = s.position(v).ok_or_else(|| Error::OutsideSubset {
            vertex: v.to_string(),
        })?;
        pairs.push((VertexId(id), *strength));
    }
    Ok(SourceDistribution::from_pairs(pairs))
}

/// Deterministic ground: the most negative source, ties broken by lowest id.
fn ground_for(sources: &SourceDistribution) -> VertexId {
    sources
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .map(|(v, _)| v)
        .unwrap_or(VertexId(0))
}

/// Kirchhoff flow for balanced sources in the cut network of S.
pub fn even_flow(
    lattice: &LatticeSpec,
    sources: &[(LatticeVertex, f64)],
    s: &VertexSubset,
    cfg: &SolveConfig,
) -> Result<(CutResult, Flow)> {
    let mapped = map_sources(sources, s)?;
    if !mapped.is_balanced() {
        return Err(Error::Unbalanced {
            total: mapped.total(),
        });
    }
    let cut = cut_network(lattice, s)?;
    if mapped.is_empty() {
        let flow = Flow::zero(cut.network.edge_count());
        return Ok((cut, flow));
    }
    let ground = ground_for(&mapped);
    let u = solve_potential(&cut.network, &mapped, ground, cfg)?;
    let flow = cut.network.potential_flow(&u);
    Ok((cut, flow))
}

/// Kirchhoff flow in the short network of S. Unbalanced sources are allowed:
/// the boundary vertex absorbs the surplus.
pub fn odd_flow(
    lattice: &LatticeSpec,
    sources: &[(LatticeVertex, f64)],
    s: &VertexSubset,
    cfg: &SolveConfig,
) -> Result<(ShortResult, Flow)> {
    let mapped = map_sources(sources, s)?;
    let short = short_network(lattice, s, 1)?;
    let total = mapped.total();
    let with_sink = SourceDistribution::from_pairs(
        mapped.iter().chain([(short.infinity, -total)]),
    );
    if with_sink.is_empty() {
        let flow = Flow::zero(short.network.edge_count());
        return Ok((short, flow));
    }
    let u = solve_potential(&short.network, &with_sink, short.infinity, cfg)?;
    let flow = short.network.potential_flow(&u);
    Ok((short, flow))
}

/// Even and odd flows for the same balanced sources over the same subset.
#[derive(Debug, Clone)]
pub struct FlowPair {
    pub radius: u32,
    pub cut: CutResult,
    pub short: ShortResult,
    pub even: Flow,
    pub odd: Flow,
}

impl FlowPair {
    /// Edges shared by the two networks: the internal edges, identically
    /// indexed in both.
    pub fn common_edge_count(&self) -> usize {
        self.short.internal_edge_count
    }
}

pub fn flow_pair(
    lattice: &LatticeSpec,
    sources: &[(LatticeVertex, f64)],
    s: &VertexSubset,
    radius: u32,
    cfg: &SolveConfig,
) -> Result<FlowPair> {
    let (cut, even) = even_flow(lattice, sources, s, cfg)?;
    let (short, odd) = odd_flow(lattice, sources, s, cfg)?;
    Ok(FlowPair {
        radius,
        cut,
        short,
        even,
        odd,
    })
}

/// Finite-radius ghost estimate: the even-minus-odd difference on the common
/// edges. The true ghost flow is the limit object; the estimate is labeled
/// with its radius.
#[derive(Debug, Clone)]
pub struct GhostEstimate {
    pub radius: u32,
    /// Difference flow on the cut network's edges.
    pub ghost: Flow,
    pub ghost_energy: f64,
    pub even_resistance: f64,
    pub odd_resistance: f64,
}

impl GhostEstimate {
    /// Even/odd resistance gap carried by this estimate.
    pub fn resistance_gap(&self) -> f64 {
        self.even_resistance - self.odd_resistance
    }
}

/// Unit-pair ghost estimate between `p` and `q` over subset `s`.
pub fn ghost_flow_estimate(
    lattice: &LatticeSpec,
    p: &LatticeVertex,
    q: &LatticeVertex,
    s: &VertexSubset,
    radius: u32,
    cfg: &SolveConfig,
) -> Result<GhostEstimate> {
    let pid = s.position(p).ok_or_else(|| Error::OutsideSubset {
        vertex: p.to_string(),
    })?;
    let qid = s.position(q).ok_or_else(|| Error::OutsideSubset {
        vertex: q.to_string(),
    })?;
    let (pid, qid) = (VertexId(pid), VertexId(qid));

    let cut = cut_network(lattice, s)?;
    let even = effective_resistance(&cut.network, pid, qid, cfg)?;
    let short = short_network(lattice, s, 1)?;
    let odd = effective_resistance(&short.network, pid, qid, cfg)?;

    let ghost_values: Vec<f64> = (0..short.internal_edge_count)
        .map(|i| even.flow.value(EdgeId(i)) - odd.flow.value(EdgeId(i)))
        .collect();
    let ghost = Flow::from_values(ghost_values);
    let ghost_energy = cut.network.energy(&ghost);

    Ok(GhostEstimate {
        radius,
        ghost,
        ghost_energy,
        even_resistance: even.resistance,
        odd_resistance: odd.resistance,
    })
}

/// The variational objective `energy(u) - (u(p) - u(q))`, minimized by the
/// potential whose flow is the ghost flow.
pub fn ghost_objective(net: &Network, u: &crate::network::Potential, p: VertexId, q: VertexId) -> f64 {
    net.dirichlet_energy(u) - (u.value(p) - u.value(q))
}

/// Energy change from perturbing `flow` by `epsilon` amps around a closed
/// edge cycle. For a Kirchhoff flow the first-order term vanishes and the
/// change is exactly `epsilon^2 * sum of cycle resistances`.
pub fn cycle_perturbation_check(
    net: &Network,
    flow: &Flow,
    cycle: &[(EdgeId, bool)],
    epsilon: f64,
) -> Result<f64> {
    if cycle.is_empty() {
        return Err(Error::OpenChain);
    }
    let first = net.edge(cycle[0].0)?;
    let start = if cycle[0].1 { first.tail } else { first.head };
    let mut at = start;
    let mut circulation = vec![0.0f64; net.edge_count()];
    for &(e, forward) in cycle {
        let rec = net.edge(e)?;
        let (from, to) = if forward {
            (rec.tail, rec.head)
        } else {
            (rec.head, rec.tail)
        };
        if from != at {
            return Err(Error::OpenChain);
        }
        circulation[e.0] += if forward { 1.0 } else { -1.0 };
        at = to;
    }
    if at != start {
        return Err(Error::OpenChain);
    }
    let circulation = Flow::from_values(circulation);
    let perturbed = flow.add_scaled(&circulation, epsilon);
    Ok(net.energy(&perturbed) - net.energy(flow))
}

/// Fundamental cycles of the breadth-first spanning tree rooted at vertex 0
/// (per component). Deterministic given the vertex ordering; each non-tree
/// edge yields one cycle traversed tail-to-head then back through the tree.
pub fn fundamental_cycles(net: &Network) -> Vec<Vec<(EdgeId, bool)>> {
    let n = net.vertex_count();
    let mut parent: Vec<Option<(EdgeId, VertexId)>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut tree_edge = vec![false; net.edge_count()];

    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut queue = std::collections::VecDeque::from([VertexId(root)]);
        while let Some(v) = queue.pop_front() {
            for &(e, w) in net.incident_edges(v) {
                if !visited[w.0] {
                    visited[w.0] = true;
                    parent[w.0] = Some((e, v));
                    depth[w.0] = depth[v.0] + 1;
                    tree_edge[e.0] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    let mut cycles = Vec::new();
    for rec in net.edges() {
        if tree_edge[rec.id.0] {
            continue;
        }
        // climb both endpoints to their common ancestor
        let (mut a, mut b) = (rec.tail, rec.head);
        let mut up_from_head: Vec<(EdgeId, bool)> = Vec::new();
        let mut up_from_tail: Vec<(EdgeId, bool)> = Vec::new();
        while depth[b.0] > depth[a.0] {
            let (e, p) = parent[b.0].expect("non-root has a parent");
            up_from_head.push((e, net.edges()[e.0].tail == b));
            b = p;
        }
        while depth[a.0] > depth[b.0] {
            let (e, p) = parent[a.0].expect("non-root has a parent");
            up_from_tail.push((e, net.edges()[e.0].tail == a));
            a = p;
        }
        while a != b {
            let (ea, pa) = parent[a.0].expect("distinct roots cannot meet");
            up_from_tail.push((ea, net.edges()[ea.0].tail == a));
            a = pa;
            let (eb, pb) = parent[b.0].expect("distinct roots cannot meet");
            up_from_head.push((eb, net.edges()[eb.0].tail == b));
            b = pb;
        }
        // cycle: the chord tail->head, head up to the ancestor, then down to tail
        let mut cycle = vec![(rec.id, true)];
        cycle.extend(up_from_head);
        cycle.extend(
            up_from_tail
                .into_iter()
                .rev()
                .map(|(e, fwd)| (e, !fwd)),
        );
        cycles.push(cycle);
    }
    cycles
}
