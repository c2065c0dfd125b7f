//! Exhaustive spanning-tree enumeration.
//!
//! Recursive edge inclusion/exclusion with connectivity pruning, deliberately
//! not determinant-based: for unit-conductance networks the per-edge tree
//! probability equals the effective resistance across the edge, and an
//! enumeration count is an oracle independent of the resistance solver.
//! Capped at [`ENUMERATION_VERTEX_LIMIT`] vertices to guard the combinatorial
//! blowup.

use crate::error::{Error, Result};
use crate::network::{EdgeId, Network};

pub const ENUMERATION_VERTEX_LIMIT: usize = 12;

/// Total spanning-tree count and, per edge, the number of trees containing it.
#[derive(Debug, Clone)]
pub struct TreeCensus {
    pub total: u64,
    pub containing: Vec<u64>,
}

impl TreeCensus {
    pub fn probability(&self, e: EdgeId) -> f64 {
        self.containing[e.0] as f64 / self.total as f64
    }
}

/// Enumerates every spanning tree of the network. Parallel edges count as
/// distinct trees; conductances are ignored (trees are counted, not weighted).
pub fn spanning_tree_census(net: &Network) -> Result<TreeCensus> {
    let n = net.vertex_count();
    if n > ENUMERATION_VERTEX_LIMIT {
        return Err(Error::CapacityExceeded {
            vertices: n,
            limit: ENUMERATION_VERTEX_LIMIT,
            operation: "spanning-tree enumeration",
        });
    }
    net.require_connected()?;
    let mut census = TreeCensus {
        total: 0,
        containing: vec![0; net.edge_count()],
    };
    if n <= 1 {
        census.total = 1;
        return Ok(census);
    }
    let edges: Vec<(usize, usize)> = net
        .edges()
        .iter()
        .map(|e| (e.tail.0, e.head.0))
        .collect();
    let mut state = Search {
        edges,
        dsu: Dsu::new(n),
        components: n,
        included: Vec::new(),
        census: &mut census,
    };
    state.recurse(0);
    Ok(census)
}

pub fn spanning_tree_count(net: &Network) -> Result<u64> {
    Ok(spanning_tree_census(net)?.total)
}

/// Fraction of spanning trees containing `edge`.
pub fn spanning_tree_edge_probability(net: &Network, edge: EdgeId) -> Result<f64> {
    net.edge(edge)?;
    Ok(spanning_tree_census(net)?.probability(edge))
}

struct Search<'a> {
    edges: Vec<(usize, usize)>,
    dsu: Dsu,
    components: usize,
    included: Vec<usize>,
    census: &'a mut TreeCensus,
}

impl Search<'_> {
    fn recurse(&mut self, k: usize) {
        if self.components == 1 {
            // Included edges already span; the unique completion excludes the rest.
            self.census.total += 1;
            for &e in &self.included {
                self.census.containing[e] += 1;
            }
            return;
        }
        if k == self.edges.len() || !self.still_connectable(k) {
            return;
        }
        let (u, v) = self.edges[k];
        // Include branch, unless it would close a cycle.
        if let Some(undo) = self.dsu.union(u, v) {
            self.components -= 1;
            self.included.push(k);
            self.recurse(k + 1);
            self.included.pop();
            self.components += 1;
            self.dsu.undo(undo);
        }
        // Exclude branch.
        self.recurse(k + 1);
    }

    /// Can the current partial forest still be completed using edges k..?
    fn still_connectable(&self, k: usize) -> bool {
        let mut probe = self.dsu.clone();
        let mut components = self.components;
        for &(u, v) in &self.edges[k..] {
            if probe.union(u, v).is_some() {
                components -= 1;
                if components == 1 {
                    return true;
                }
            }
        }
        components == 1
    }
}

/// Union-find without path compression so that unions can be undone on
/// backtrack.
#[derive(Clone)]
struct Dsu {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

struct Undo {
    child_root: usize,
    rank_bumped: Option<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) -> Option<Undo> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (root, child) = if self.rank[ra] >= self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[child] = root;
        let rank_bumped = if self.rank[root] == self.rank[child] {
            self.rank[root] += 1;
            Some(root)
        } else {
            None
        };
        Some(Undo {
            child_root: child,
            rank_bumped,
        })
    }

    fn undo(&mut self, undo: Undo) {
        self.parent[undo.child_root] = undo.child_root;
        if let Some(root) = undo.rank_bumped {
            self.rank[root] -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::VertexId;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bridges_lie_in_every_tree() {
        let net = Network::from_unit_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let census = spanning_tree_census(&net).unwrap();
        assert_eq!(census.total, 1);
        for e in net.edges() {
            assert_eq!(census.probability(e.id), 1.0);
        }
    }

    #[test]
    fn triangle_has_three_trees() {
        let net = Network::from_unit_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let census = spanning_tree_census(&net).unwrap();
        assert_eq!(census.total, 3);
        assert_eq!(census.containing, vec![2, 2, 2]);
        assert_abs_diff_eq!(census.probability(EdgeId(0)), 2.0 / 3.0);
    }

    #[test]
    fn four_cycle() {
        let net = Network::from_unit_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let census = spanning_tree_census(&net).unwrap();
        assert_eq!(census.total, 4);
        assert_eq!(
            spanning_tree_edge_probability(&net, EdgeId(0)).unwrap(),
            0.75
        );
    }

    #[test]
    fn complete_graph_k4_has_sixteen_trees() {
        let net =
            Network::from_unit_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(spanning_tree_count(&net).unwrap(), 16);
    }

    #[test]
    fn parallel_edges_are_distinct_trees() {
        let mut net = Network::new(2);
        net.add_edge(VertexId(0), VertexId(1), 1.0).unwrap();
        net.add_edge(VertexId(0), VertexId(1), 1.0).unwrap();
        let census = spanning_tree_census(&net).unwrap();
        assert_eq!(census.total, 2);
        assert_eq!(census.containing, vec![1, 1]);
    }

    #[test]
    fn capacity_and_connectivity_guards() {
        let big = Network::new(13);
        assert!(matches!(
            spanning_tree_census(&big),
            Err(Error::CapacityExceeded { limit: 12, .. })
        ));
        let disc = Network::from_unit_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            spanning_tree_census(&disc),
            Err(Error::Disconnected { .. })
        ));
    }
}
