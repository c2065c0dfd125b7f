//! Dense reference solver used to cross-check the iterative path.
//!
//! Straight Gaussian elimination with partial pivoting on the grounded
//! Laplacian. Quadratic storage and cubic time, so only sensible up to a few
//! hundred vertices; it shares no code with the conjugate-gradient solver and
//! serves as an independent oracle in tests.

use crate::error::{Error, Result};
use crate::network::{Network, Potential, SourceDistribution, VertexId};

/// Solves the grounded Kirchhoff system by dense elimination.
/// Returns the potential with `u(ground) = 0`.
pub fn dense_potential(
    net: &Network,
    sources: &SourceDistribution,
    ground: VertexId,
) -> Result<Potential> {
    net.check_vertex(ground)?;
    net.require_connected()?;
    if !sources.is_balanced() {
        return Err(Error::Unbalanced {
            total: sources.total(),
        });
    }
    for (v, _) in sources.iter() {
        net.check_vertex(v)?;
    }
    let n = net.vertex_count();
    if n > 512 {
        return Err(Error::CapacityExceeded {
            vertices: n,
            limit: 512,
            operation: "dense elimination",
        });
    }
    if n <= 1 {
        return Ok(Potential::zero(n));
    }

    // Reduced index map skipping the ground row/column.
    let reduced: Vec<usize> = (0..n).filter(|&v| v != ground.0).collect();
    let m = n - 1;
    let col_of = |v: usize| -> Option<usize> {
        if v == ground.0 {
            None
        } else if v < ground.0 {
            Some(v)
        } else {
            Some(v - 1)
        }
    };

    let mut a = vec![vec![0.0f64; m]; m];
    for e in net.edges() {
        let (t, h, c) = (e.tail.0, e.head.0, e.conductance);
        if let Some(i) = col_of(t) {
            a[i][i] += c;
        }
        if let Some(j) = col_of(h) {
            a[j][j] += c;
        }
        if let (Some(i), Some(j)) = (col_of(t), col_of(h)) {
            a[i][j] -= c;
            a[j][i] -= c;
        }
    }
    let mut b = vec![0.0f64; m];
    for (v, s) in sources.iter() {
        if let Some(i) = col_of(v.0) {
            b[i] = s;
        }
    }

    // Elimination with partial pivoting.
    for col in 0..m {
        let (piv, piv_abs) = (col..m)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if piv_abs == 0.0 {
            // Cannot happen for a connected network's grounded Laplacian.
            return Err(Error::InvalidArgument(
                "singular grounded system".to_string(),
            ));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..m {
            let factor = a[r][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for c in col..m {
                a[r][c] -= factor * a[col][c];
            }
            b[r] -= factor * b[col];
        }
    }
    for col in (0..m).rev() {
        let mut s = b[col];
        for c in col + 1..m {
            s -= a[col][c] * b[c];
        }
        b[col] = s / a[col][col];
    }

    let mut u = vec![0.0f64; n];
    for (i, &v) in reduced.iter().enumerate() {
        u[v] = b[i];
    }
    Ok(Potential::from_values(u))
}

/// Effective resistance between `p` and `q` by dense elimination.
pub fn dense_effective_resistance(net: &Network, p: VertexId, q: VertexId) -> Result<f64> {
    if p == q {
        return Err(Error::InvalidArgument(
            "effective resistance requires distinct vertices".to_string(),
        ));
    }
    let u = dense_potential(net, &SourceDistribution::unit_pair(p, q), q)?;
    Ok(u.value(p) - u.value(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn single_edge() {
        let net = Network::from_unit_edges(2, &[(0, 1)]).unwrap();
        let r = dense_effective_resistance(&net, VertexId(0), VertexId(1)).unwrap();
        assert_relative_eq!(r, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn triangle_adjacent() {
        let net = Network::from_unit_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let r = dense_effective_resistance(&net, VertexId(0), VertexId(1)).unwrap();
        // 1 ohm in parallel with 1+1 ohms
        assert_relative_eq!(r, 2.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn grid_3x3_center_to_side() {
        // vertices (x, y) -> 3*y + x
        let mut edges = Vec::new();
        for y in 0..3usize {
            for x in 0..3usize {
                if x + 1 < 3 {
                    edges.push((3 * y + x, 3 * y + x + 1));
                }
                if y + 1 < 3 {
                    edges.push((3 * y + x, 3 * (y + 1) + x));
                }
            }
        }
        let net = Network::from_unit_edges(9, &edges).unwrap();
        let r = dense_effective_resistance(&net, VertexId(4), VertexId(1)).unwrap();
        // exact value by rational elimination: 7/12
        assert_relative_eq!(r, 7.0 / 12.0, max_relative = 1e-12);
    }

    #[test]
    fn rejects_unbalanced_and_disconnected() {
        let net = Network::from_unit_edges(2, &[(0, 1)]).unwrap();
        let s = SourceDistribution::from_pairs([(VertexId(0), 1.0)]);
        assert!(matches!(
            dense_potential(&net, &s, VertexId(1)),
            Err(Error::Unbalanced { .. })
        ));
        let disc = Network::from_unit_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let s = SourceDistribution::unit_pair(VertexId(0), VertexId(1));
        assert!(matches!(
            dense_potential(&disc, &s, VertexId(0)),
            Err(Error::Disconnected { .. })
        ));
    }
}
