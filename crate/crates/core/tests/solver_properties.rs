//! Solver invariants: reciprocity, dissipation, the resistance metric,
//! Kirchhoff's spanning-tree rule and Foster's identity, plus agreement with
//! the independent dense-elimination oracle.

mod common;

use approx::{assert_abs_diff_eq, assert_relative_eq};
use ohmnet::network::VertexId;
use ohmnet::oracle::dense_effective_resistance;
use ohmnet::solve::{effective_resistance, foster_average, unit_current_flow, SolveConfig};
use ohmnet::spanning::spanning_tree_census;
use rand::Rng;

#[test]
fn reciprocity_on_corpus() {
    let cfg = SolveConfig::default();
    for (name, net) in common::named_corpus() {
        let p = VertexId(0);
        let q = VertexId(net.vertex_count() - 1);
        let a = effective_resistance(&net, p, q, &cfg).unwrap().resistance;
        let b = effective_resistance(&net, q, p, &cfg).unwrap().resistance;
        assert_relative_eq!(a, b, max_relative = 1e-10, epsilon = 1e-12);
        assert!(a > 0.0, "{name}: resistance must be positive");
    }
}

#[test]
fn dissipation_equals_resistance() {
    let cfg = SolveConfig::default();
    for (name, net) in common::named_corpus() {
        let p = VertexId(0);
        let q = VertexId(net.vertex_count() - 1);
        let rep = effective_resistance(&net, p, q, &cfg).unwrap();
        let energy = net.energy(&rep.flow);
        assert_relative_eq!(energy, rep.resistance, max_relative = 1e-8);
        // and the flow really is the unit current flow
        let flow = unit_current_flow(&net, p, q, &cfg).unwrap();
        assert_eq!(flow.values(), rep.flow.values(), "{name}");
        assert_abs_diff_eq!(net.divergence(&flow, p).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(net.divergence(&flow, q).unwrap(), -1.0, epsilon = 1e-9);
    }
}

#[test]
fn resistance_triangle_inequality() {
    let cfg = SolveConfig::default();
    let mut rng = common::seeded_rng(2024);
    for _ in 0..10 {
        let n = rng.random_range(4..10);
        let net = common::random_connected_unit(&mut rng, n);
        let mut picks = (0..n).collect::<Vec<_>>();
        for _ in 0..3 {
            let i = rng.random_range(0..picks.len());
            picks.swap(0, i);
        }
        let (p, q, r) = (VertexId(picks[0]), VertexId(picks[1]), VertexId(picks[2]));
        if p == q || q == r || p == r {
            continue;
        }
        let rpq = effective_resistance(&net, p, q, &cfg).unwrap().resistance;
        let rqr = effective_resistance(&net, q, r, &cfg).unwrap().resistance;
        let rpr = effective_resistance(&net, p, r, &cfg).unwrap().resistance;
        assert!(
            rpr <= rpq + rqr + 1e-9,
            "triangle inequality violated: {rpr} > {rpq} + {rqr}"
        );
    }
}

#[test]
fn kirchhoff_rule_on_small_corpus() {
    // tree probability = effective resistance across the edge, unit conductances
    let cfg = SolveConfig::with_tolerance(1e-13);
    for (name, net) in common::named_corpus() {
        if net.vertex_count() > 8 {
            continue;
        }
        let census = spanning_tree_census(&net).unwrap();
        for e in net.edges() {
            let probability = census.probability(e.id);
            let resistance = effective_resistance(&net, e.tail, e.head, &cfg)
                .unwrap()
                .resistance;
            assert!(
                (probability - resistance).abs() <= 1e-9,
                "{name} edge {}: |{probability} - {resistance}| > 1e-9",
                e.id
            );
        }
    }
}

#[test]
fn foster_identity_spot_check() {
    let cfg = SolveConfig::with_tolerance(1e-13);
    let mut rng = common::seeded_rng(7);
    for _ in 0..10 {
        let n = rng.random_range(3..=12);
        let net = common::random_connected_unit(&mut rng, n);
        let average = foster_average(&net, &cfg).unwrap();
        let formula = (n as f64 - 1.0) / net.edge_count() as f64;
        assert!(
            (average - formula).abs() <= 1e-7,
            "foster mismatch on n={n}: {average} vs {formula}"
        );
    }
}

#[test]
fn iterative_solver_matches_dense_oracle() {
    let cfg = SolveConfig::with_tolerance(1e-12);
    let mut rng = common::seeded_rng(99);
    for n in [10usize, 20, 35, 50] {
        for weighted in [false, true] {
            let net = if weighted {
                common::random_connected_weighted(&mut rng, n)
            } else {
                common::random_connected_unit(&mut rng, n)
            };
            for _ in 0..3 {
                let p = VertexId(rng.random_range(0..n));
                let q = VertexId(rng.random_range(0..n));
                if p == q {
                    continue;
                }
                let iterative = effective_resistance(&net, p, q, &cfg).unwrap().resistance;
                let dense = dense_effective_resistance(&net, p, q).unwrap();
                assert!(
                    (iterative - dense).abs() <= 1e-8 * dense.max(1.0),
                    "n={n} weighted={weighted}: iterative {iterative} vs dense {dense}"
                );
            }
        }
    }
}

#[test]
fn report_carries_consistent_diagnostics() {
    let net = common::cube();
    let cfg = SolveConfig::default();
    let rep = effective_resistance(&net, VertexId(0), VertexId(7), &cfg).unwrap();
    assert!(rep.iterations > 0);
    assert!(rep.residual <= cfg.residual_tolerance);
    assert_eq!(rep.potential.value(rep.q), 0.0);
    assert_relative_eq!(
        rep.potential.value(rep.p) - rep.potential.value(rep.q),
        rep.resistance
    );
}
