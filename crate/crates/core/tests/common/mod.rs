//! Shared test corpus: named small graphs and seeded random connected graphs.

#![allow(dead_code)]

use ohmnet::network::{Network, VertexId};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn triangle() -> Network {
    Network::from_unit_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
}

pub fn path(n: usize) -> Network {
    let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    Network::from_unit_edges(n, &edges).unwrap()
}

pub fn cycle(n: usize) -> Network {
    let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    edges.push((0, n - 1));
    Network::from_unit_edges(n, &edges).unwrap()
}

pub fn complete(n: usize) -> Network {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    Network::from_unit_edges(n, &edges).unwrap()
}

/// 3-cube: 8 vertices, 12 edges, edge-transitive.
pub fn cube() -> Network {
    Network::from_unit_edges(
        8,
        &[
            (0, 1),
            (2, 3),
            (4, 5),
            (6, 7),
            (0, 2),
            (1, 3),
            (4, 6),
            (5, 7),
            (0, 4),
            (1, 5),
            (2, 6),
            (3, 7),
        ],
    )
    .unwrap()
}

/// Hub vertex 0 joined to a 5-cycle.
pub fn wheel6() -> Network {
    Network::from_unit_edges(
        6,
        &[
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (0, 5),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (1, 5),
        ],
    )
    .unwrap()
}

/// Two vertices joined by two parallel unit edges plus a pendant.
pub fn parallel_with_pendant() -> Network {
    let mut net = Network::new(3);
    net.add_edge(VertexId(0), VertexId(1), 1.0).unwrap();
    net.add_edge(VertexId(0), VertexId(1), 1.0).unwrap();
    net.add_edge(VertexId(1), VertexId(2), 1.0).unwrap();
    net
}

/// Named unit-conductance corpus; all connected.
pub fn named_corpus() -> Vec<(&'static str, Network)> {
    vec![
        ("triangle", triangle()),
        ("path3", path(3)),
        ("path5", path(5)),
        ("cycle4", cycle(4)),
        ("cycle7", cycle(7)),
        ("k4", complete(4)),
        ("k5", complete(5)),
        ("cube", cube()),
        ("wheel6", wheel6()),
        ("parallel_pendant", parallel_with_pendant()),
    ]
}

/// Random connected simple graph on `n` vertices with unit conductances:
/// a random spanning tree plus extra edges with density ~0.3.
pub fn random_connected_unit(rng: &mut ChaCha8Rng, n: usize) -> Network {
    let mut net = Network::new(n);
    let mut present = std::collections::HashSet::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        net.add_edge(VertexId(u), VertexId(v), 1.0).unwrap();
        present.insert((u, v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present.contains(&(u, v)) && rng.random::<f64>() < 0.3 {
                net.add_edge(VertexId(u), VertexId(v), 1.0).unwrap();
                present.insert((u, v));
            }
        }
    }
    net
}

/// As above but with conductances log-uniform in [0.1, 10].
pub fn random_connected_weighted(rng: &mut ChaCha8Rng, n: usize) -> Network {
    let unit = random_connected_unit(rng, n);
    let mut net = Network::new(n);
    for e in unit.edges() {
        let c = 10f64.powf(rng.random_range(-1.0..1.0));
        net.add_edge(e.tail, e.head, c).unwrap();
    }
    net
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
