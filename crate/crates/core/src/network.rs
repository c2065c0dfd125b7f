//! Finite multigraph resistor networks: vertices, conductance-weighted edges,
//! source distributions, flows and potentials.
//!
//! A [`Network`] is a finite multigraph with strictly positive edge
//! conductances. Parallel edges are kept distinct; self-loops are rejected
//! (they cannot carry current). Every edge has a fixed reference orientation
//! from its lower-indexed endpoint to its higher-indexed endpoint, so
//! serialized flows are reproducible across runs.
//!
//! All types here are immutable once built and safe to share across threads.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Absolute tolerance for the balance check on source distributions.
pub const BALANCE_TOLERANCE: f64 = 1e-12;

/// Dense vertex handle, valid for one particular [`Network`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dense edge handle, valid for one particular [`Network`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One edge: unordered endpoint pair stored in reference orientation
/// (`tail.0 < head.0`) plus a strictly positive conductance in siemens.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
    pub conductance: f64,
}

impl EdgeRecord {
    pub fn resistance(&self) -> f64 {
        1.0 / self.conductance
    }

    pub fn other_endpoint(&self, v: VertexId) -> Option<VertexId> {
        if v == self.tail {
            Some(self.head)
        } else if v == self.head {
            Some(self.tail)
        } else {
            None
        }
    }
}

/// Finite multigraph with positive edge conductances and a per-vertex
/// incidence index.
#[derive(Debug, Clone)]
pub struct Network {
    vertex_count: usize,
    edges: Vec<EdgeRecord>,
    incidence: Vec<Vec<(EdgeId, VertexId)>>,
}

impl Network {
    pub fn new(vertex_count: usize) -> Self {
        Network {
            vertex_count,
            edges: Vec::new(),
            incidence: vec![Vec::new(); vertex_count],
        }
    }

    /// Adds an edge between two distinct vertices. The stored record is
    /// normalized to reference orientation (lower vertex index first).
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, conductance: f64) -> Result<EdgeId> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop { vertex: u.0 });
        }
        if !(conductance > 0.0 && conductance.is_finite()) {
            return Err(Error::BadConductance { value: conductance });
        }
        let (tail, head) = if u.0 < v.0 { (u, v) } else { (v, u) };
        let id = EdgeId(self.edges.len());
        self.edges.push(EdgeRecord {
            id,
            tail,
            head,
            conductance,
        });
        self.incidence[tail.0].push((id, head));
        self.incidence[head.0].push((id, tail));
        Ok(id)
    }

    /// Convenience constructor for unit-conductance graphs given as index pairs.
    pub fn from_unit_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut net = Network::new(vertex_count);
        for &(u, v) in edges {
            net.add_edge(VertexId(u), VertexId(v), 1.0)?;
        }
        Ok(net)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count).map(VertexId)
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Result<&EdgeRecord> {
        self.edges.get(e.0).ok_or(Error::InvalidEdge {
            edge: e.0,
            edge_count: self.edges.len(),
        })
    }

    /// Edges incident to `v` as `(edge, other endpoint)` pairs, in insertion order.
    pub fn incident_edges(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        &self.incidence[v.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v.0].len()
    }

    /// Sum of conductances of the edges at `v` (the Laplacian diagonal).
    pub fn vertex_conductance(&self, v: VertexId) -> f64 {
        self.incidence[v.0]
            .iter()
            .map(|&(e, _)| self.edges[e.0].conductance)
            .sum()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.0 < self.vertex_count {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v.0,
                vertex_count: self.vertex_count,
            })
        }
    }

    /// Connected components as vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.vertex_count];
        let mut out = Vec::new();
        for start in 0..self.vertex_count {
            if seen[start] {
                continue;
            }
            let mut comp = vec![VertexId(start)];
            seen[start] = true;
            let mut queue = std::collections::VecDeque::from([VertexId(start)]);
            while let Some(v) = queue.pop_front() {
                for &(_, w) in &self.incidence[v.0] {
                    if !seen[w.0] {
                        seen[w.0] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count <= 1 || self.components().len() == 1
    }

    /// Returns an error naming a stranded component when the network is
    /// disconnected.
    pub fn require_connected(&self) -> Result<()> {
        let comps = self.components();
        if comps.len() <= 1 {
            return Ok(());
        }
        // Report the smallest component; a handful of ids is enough to locate it.
        let smallest = comps.iter().min_by_key(|c| c.len()).unwrap();
        Err(Error::Disconnected {
            component: smallest.iter().take(8).map(|v| v.0).collect(),
        })
    }

    /// Rebuilds the incidence index from the edge list and compares; used by
    /// tests to validate internal consistency.
    pub fn incidence_consistent(&self) -> bool {
        let mut rebuilt = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            rebuilt[e.tail.0].push((e.id, e.head));
            rebuilt[e.head.0].push((e.id, e.tail));
        }
        rebuilt == self.incidence
    }

    /// Signed current on `e` leaving `from`, i.e. the flow value in the
    /// orientation that starts at `from`. Querying both endpoints returns
    /// negated values.
    pub fn oriented_current(&self, flow: &Flow, e: EdgeId, from: VertexId) -> Result<f64> {
        let rec = self.edge(e)?;
        let raw = flow.value(e);
        if from == rec.tail {
            Ok(raw)
        } else if from == rec.head {
            Ok(-raw)
        } else {
            Err(Error::InvalidArgument(format!(
                "vertex {} is not an endpoint of edge {}",
                from.0, e.0
            )))
        }
    }

    /// Net signed outflow of `flow` at `v`. Summing over all vertices gives 0.
    pub fn divergence(&self, flow: &Flow, v: VertexId) -> Result<f64> {
        self.check_vertex(v)?;
        assert_eq!(flow.len(), self.edges.len(), "flow/network shape mismatch");
        let mut out = 0.0;
        for &(e, _) in &self.incidence[v.0] {
            let rec = &self.edges[e.0];
            if rec.tail == v {
                out += flow.value(e);
            } else {
                out -= flow.value(e);
            }
        }
        Ok(out)
    }

    /// Dissipated power of a flow: sum over edges of f(e)^2 / c(e).
    pub fn energy(&self, flow: &Flow) -> f64 {
        assert_eq!(flow.len(), self.edges.len(), "flow/network shape mismatch");
        self.edges
            .iter()
            .map(|rec| {
                let f = flow.value(rec.id);
                f * f / rec.conductance
            })
            .sum()
    }

    /// Ohm's-law flow of a potential: f(tail -> head) = c * (u(tail) - u(head)).
    pub fn potential_flow(&self, u: &Potential) -> Flow {
        assert_eq!(
            u.len(),
            self.vertex_count,
            "potential/network shape mismatch"
        );
        let values = self
            .edges
            .iter()
            .map(|rec| rec.conductance * (u.value(rec.tail) - u.value(rec.head)))
            .collect();
        Flow { values }
    }

    /// Dirichlet energy of a potential: sum over edges of c * (u(a) - u(b))^2.
    /// Equals `energy(potential_flow(u))`.
    pub fn dirichlet_energy(&self, u: &Potential) -> f64 {
        assert_eq!(
            u.len(),
            self.vertex_count,
            "potential/network shape mismatch"
        );
        self.edges
            .iter()
            .map(|rec| {
                let d = u.value(rec.tail) - u.value(rec.head);
                rec.conductance * d * d
            })
            .sum()
    }
}

/// Finite-support map from vertices to source strengths in amperes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SourceDistribution {
    entries: BTreeMap<VertexId, f64>,
}

impl SourceDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a distribution, merging repeated vertices by summing strengths
    /// and dropping exact zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VertexId, f64)>) -> Self {
        let mut entries: BTreeMap<VertexId, f64> = BTreeMap::new();
        for (v, s) in pairs {
            *entries.entry(v).or_insert(0.0) += s;
        }
        entries.retain(|_, s| *s != 0.0);
        SourceDistribution { entries }
    }

    /// +1 A at `p`, -1 A at `q`.
    pub fn unit_pair(p: VertexId, q: VertexId) -> Self {
        Self::from_pairs([(p, 1.0), (q, -1.0)])
    }

    pub fn strength(&self, v: VertexId) -> f64 {
        self.entries.get(&v).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    /// True iff strengths sum to zero within [`BALANCE_TOLERANCE`].
    pub fn is_balanced(&self) -> bool {
        self.total().abs() <= BALANCE_TOLERANCE
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        self.entries.iter().map(|(&v, &s)| (v, s))
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Antisymmetric edge-current assignment in amperes. Values are stored
/// relative to each edge's reference orientation (tail -> head).
#[derive(Debug, Clone, PartialEq)]
pub struct Flow {
    values: Vec<f64>,
}

impl Flow {
    pub fn zero(edge_count: usize) -> Self {
        Flow {
            values: vec![0.0; edge_count],
        }
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        Flow { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Current along the reference orientation of `e`.
    pub fn value(&self, e: EdgeId) -> f64 {
        self.values[e.0]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Componentwise `self + scale * other`.
    pub fn add_scaled(&self, other: &Flow, scale: f64) -> Flow {
        assert_eq!(self.len(), other.len(), "flow length mismatch");
        Flow {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + scale * b)
                .collect(),
        }
    }
}

/// Per-vertex voltage assignment in volts.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    values: Vec<f64>,
}

impl Potential {
    pub fn from_values(values: Vec<f64>) -> Self {
        Potential { values }
    }

    pub fn zero(vertex_count: usize) -> Self {
        Potential {
            values: vec![0.0; vertex_count],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, v: VertexId) -> f64 {
        self.values[v.0]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The same potential shifted by a constant; its induced flow is unchanged.
    pub fn shifted(&self, offset: f64) -> Potential {
        Potential {
            values: self.values.iter().map(|v| v + offset).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn triangle() -> Network {
        Network::from_unit_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn divergence_of_zero_flow_is_zero() {
        let net = triangle();
        let f = Flow::zero(net.edge_count());
        for v in net.vertices() {
            assert_eq!(net.divergence(&f, v).unwrap(), 0.0);
        }
    }

    #[test]
    fn single_edge_conservation() {
        let mut net = Network::new(2);
        net.add_edge(VertexId(0), VertexId(1), 1.0).unwrap();
        let f = Flow::from_values(vec![1.0]);
        assert_eq!(net.divergence(&f, VertexId(0)).unwrap(), 1.0);
        assert_eq!(net.divergence(&f, VertexId(1)).unwrap(), -1.0);
    }

    #[test]
    fn cycle_flow_is_sourceless() {
        let net = triangle();
        // unit circulation 0 -> 1 -> 2 -> 0; edge (0,2) is traversed head-to-tail
        let f = Flow::from_values(vec![1.0, 1.0, -1.0]);
        for v in net.vertices() {
            assert_abs_diff_eq!(net.divergence(&f, v).unwrap(), 0.0);
        }
    }

    #[test]
    fn divergence_rejects_invalid_vertex() {
        let net = triangle();
        let f = Flow::zero(net.edge_count());
        assert!(matches!(
            net.divergence(&f, VertexId(9)),
            Err(Error::InvalidVertex { .. })
        ));
    }

    #[test]
    fn energy_examples() {
        let net = triangle();
        assert_eq!(net.energy(&Flow::zero(3)), 0.0);

        let mut single = Network::new(2);
        single.add_edge(VertexId(0), VertexId(1), 1.0).unwrap();
        assert_eq!(single.energy(&Flow::from_values(vec![1.0])), 1.0);

        // 1 A split evenly over two parallel 1-ohm edges dissipates 0.5 W,
        // matching the series/parallel reduction R = 1/2.
        let mut par = Network::new(2);
        par.add_edge(VertexId(0), VertexId(1), 1.0).unwrap();
        par.add_edge(VertexId(0), VertexId(1), 1.0).unwrap();
        assert_eq!(par.edge_count(), 2, "parallel edges kept distinct");
        assert_eq!(par.energy(&Flow::from_values(vec![0.5, 0.5])), 0.5);
    }

    #[test]
    fn potential_flow_examples() {
        let mut single = Network::new(2);
        single.add_edge(VertexId(0), VertexId(1), 1.0).unwrap();
        let constant = Potential::from_values(vec![3.0, 3.0]);
        assert_eq!(single.potential_flow(&constant).values(), &[0.0]);

        let u = Potential::from_values(vec![1.0, 0.0]);
        assert_eq!(single.potential_flow(&u).values(), &[1.0]);

        // path 0-1-2, u = (1, 0.5, 0): 0.5 A along each edge, Kirchhoff at midpoint
        let mut path = Network::new(3);
        path.add_edge(VertexId(0), VertexId(1), 1.0).unwrap();
        path.add_edge(VertexId(1), VertexId(2), 1.0).unwrap();
        let u = Potential::from_values(vec![1.0, 0.5, 0.0]);
        let f = path.potential_flow(&u);
        assert_eq!(f.values(), &[0.5, 0.5]);
        assert_abs_diff_eq!(path.divergence(&f, VertexId(1)).unwrap(), 0.0);
        assert_relative_eq!(path.dirichlet_energy(&u), 0.5);
    }

    #[test]
    fn dirichlet_energy_examples() {
        let mut single = Network::new(2);
        single.add_edge(VertexId(0), VertexId(1), 1.0).unwrap();
        assert_eq!(
            single.dirichlet_energy(&Potential::from_values(vec![2.0, 2.0])),
            0.0
        );
        assert_eq!(
            single.dirichlet_energy(&Potential::from_values(vec![1.0, 0.0])),
            1.0
        );
    }

    #[test]
    fn balance_examples() {
        assert!(SourceDistribution::new().is_balanced());
        assert!(SourceDistribution::unit_pair(VertexId(0), VertexId(1)).is_balanced());
        assert!(!SourceDistribution::from_pairs([(VertexId(0), 1.0)]).is_balanced());
    }

    #[test]
    fn self_loop_rejected() {
        let mut net = Network::new(2);
        assert!(matches!(
            net.add_edge(VertexId(1), VertexId(1), 1.0),
            Err(Error::SelfLoop { vertex: 1 })
        ));
    }

    #[test]
    fn bad_conductance_rejected() {
        let mut net = Network::new(2);
        for c in [0.0, -1.0, f64::INFINITY, f64::NAN] {
            assert!(matches!(
                net.add_edge(VertexId(0), VertexId(1), c),
                Err(Error::BadConductance { .. })
            ));
        }
    }

    #[test]
    fn reference_orientation_is_normalized() {
        let mut net = Network::new(6);
        let e = net.add_edge(VertexId(5), VertexId(2), 2.0).unwrap();
        let rec = net.edge(e).unwrap();
        assert_eq!((rec.tail, rec.head), (VertexId(2), VertexId(5)));
    }

    #[test]
    fn oriented_current_antisymmetry() {
        let mut net = Network::new(2);
        let e = net.add_edge(VertexId(0), VertexId(1), 1.0).unwrap();
        let f = Flow::from_values(vec![0.75]);
        let a = net.oriented_current(&f, e, VertexId(0)).unwrap();
        let b = net.oriented_current(&f, e, VertexId(1)).unwrap();
        assert_eq!(a, -b);
        assert_eq!(a, 0.75);
    }

    #[test]
    fn components_and_connectivity() {
        let net = Network::from_unit_edges(5, &[(0, 1), (2, 3)]).unwrap();
        let comps = net.components();
        assert_eq!(comps.len(), 3);
        assert!(!net.is_connected());
        let err = net.require_connected().unwrap_err();
        assert!(matches!(err, Error::Disconnected { .. }));

        assert!(triangle().is_connected());
        assert!(triangle().incidence_consistent());
    }

    #[test]
    fn source_distribution_merges_duplicates() {
        let s = SourceDistribution::from_pairs([
            (VertexId(0), 1.0),
            (VertexId(0), 2.0),
            (VertexId(1), -3.0),
        ]);
        assert_eq!(s.strength(VertexId(0)), 3.0);
        assert_eq!(s.support_len(), 2);
        assert!(s.is_balanced());
    }
}
