//! Kirchhoff solves on finite networks.
//!
//! The linear system is the conductance-weighted graph Laplacian with one
//! vertex pinned to zero volts (grounding fixes the null space of constants).
//! We use preconditioned conjugate gradients with matrix-free assembly, so
//! memory stays linear in the number of edges. Convergence is measured as the
//! relative residual in the 2-norm against the source vector norm.

use crate::error::{Error, Result};
use crate::network::{Flow, Network, Potential, SourceDistribution, VertexId};

/// Preconditioner choice for the conjugate-gradient solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Preconditioner {
    None,
    #[default]
    Diagonal,
}

/// Iterative-solver configuration.
#[derive(Debug, Clone, Copy)]
pub struct SolveConfig {
    /// Relative residual target in (0, 1).
    pub residual_tolerance: f64,
    /// Iteration budget; `None` means 20 times the vertex count.
    pub max_iterations: Option<usize>,
    pub preconditioner: Preconditioner,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            residual_tolerance: 1e-10,
            max_iterations: None,
            preconditioner: Preconditioner::Diagonal,
        }
    }
}

impl SolveConfig {
    pub fn with_tolerance(residual_tolerance: f64) -> Self {
        SolveConfig {
            residual_tolerance,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.residual_tolerance > 0.0 && self.residual_tolerance < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "residual_tolerance must lie in (0, 1), got {}",
                self.residual_tolerance
            )));
        }
        if self.max_iterations == Some(0) {
            return Err(Error::InvalidConfig(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn iteration_budget(&self, vertex_count: usize) -> usize {
        self.max_iterations.unwrap_or(20 * vertex_count.max(1))
    }
}

/// Result of a unit-current solve between two vertices.
#[derive(Debug, Clone)]
pub struct ResistanceReport {
    pub p: VertexId,
    pub q: VertexId,
    /// Voltage drop u(p) - u(q) for the unit-current solve, in ohms.
    pub resistance: f64,
    pub flow: Flow,
    pub potential: Potential,
    pub iterations: usize,
    pub residual: f64,
}

/// Solves Kirchhoff's laws: finds `u` with `u(ground) = 0` whose Ohm's-law
/// flow has divergence equal to `sources` at every vertex.
pub fn solve_potential(
    net: &Network,
    sources: &SourceDistribution,
    ground: VertexId,
    cfg: &SolveConfig,
) -> Result<Potential> {
    Ok(solve_grounded(net, sources, ground, cfg)?.0)
}

pub(crate) fn solve_grounded(
    net: &Network,
    sources: &SourceDistribution,
    ground: VertexId,
    cfg: &SolveConfig,
) -> Result<(Potential, usize, f64)> {
    cfg.validate()?;
    net.check_vertex(ground)?;
    net.require_connected()?;
    if !sources.is_balanced() {
        return Err(Error::Unbalanced {
            total: sources.total(),
        });
    }
    let n = net.vertex_count();
    let mut b = vec![0.0f64; n];
    for (v, s) in sources.iter() {
        net.check_vertex(v)?;
        b[v.0] = s;
    }
    b[ground.0] = 0.0;

    let b_norm = norm(&b);
    if b_norm == 0.0 {
        return Ok((Potential::zero(n), 0, 0.0));
    }

    let inv_diag: Option<Vec<f64>> = match cfg.preconditioner {
        Preconditioner::None => None,
        Preconditioner::Diagonal => Some(
            net.vertices()
                .map(|v| {
                    let d = net.vertex_conductance(v);
                    if d > 0.0 {
                        1.0 / d
                    } else {
                        1.0
                    }
                })
                .collect(),
        ),
    };

    let mut x = vec![0.0f64; n];
    let mut r = b.clone();
    let mut z = apply_preconditioner(&inv_diag, &r, ground);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0f64; n];

    let budget = cfg.iteration_budget(n);
    let mut residual = norm(&r) / b_norm;
    for iteration in 1..=budget {
        laplacian_apply(net, &p, &mut ap);
        ap[ground.0] = 0.0;
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            // Search direction collapsed; report whatever residual remains.
            return Err(Error::Convergence {
                iterations: iteration,
                residual,
            });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        r[ground.0] = 0.0;
        residual = norm(&r) / b_norm;
        if residual <= cfg.residual_tolerance {
            x[ground.0] = 0.0;
            return Ok((Potential::from_values(x), iteration, residual));
        }
        z = apply_preconditioner(&inv_diag, &r, ground);
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        p[ground.0] = 0.0;
    }
    Err(Error::Convergence {
        iterations: budget,
        residual,
    })
}

/// y = L x where L is the conductance-weighted Laplacian.
fn laplacian_apply(net: &Network, x: &[f64], y: &mut [f64]) {
    y.fill(0.0);
    for e in net.edges() {
        let d = e.conductance * (x[e.tail.0] - x[e.head.0]);
        y[e.tail.0] += d;
        y[e.head.0] -= d;
    }
}

fn apply_preconditioner(inv_diag: &Option<Vec<f64>>, r: &[f64], ground: VertexId) -> Vec<f64> {
    let mut z = match inv_diag {
        None => r.to_vec(),
        Some(d) => r.iter().zip(d).map(|(ri, di)| ri * di).collect(),
    };
    z[ground.0] = 0.0;
    z
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Effective resistance between `p` and `q`: the voltage drop of the
/// unit-current solve with +1 A injected at `p` and withdrawn at `q`.
pub fn effective_resistance(
    net: &Network,
    p: VertexId,
    q: VertexId,
    cfg: &SolveConfig,
) -> Result<ResistanceReport> {
    if p == q {
        return Err(Error::InvalidArgument(
            "effective resistance requires distinct vertices".to_string(),
        ));
    }
    net.check_vertex(p)?;
    net.check_vertex(q)?;
    let sources = SourceDistribution::unit_pair(p, q);
    let (potential, iterations, residual) = solve_grounded(net, &sources, q, cfg)?;
    let flow = net.potential_flow(&potential);
    Ok(ResistanceReport {
        p,
        q,
        resistance: potential.value(p) - potential.value(q),
        flow,
        potential,
        iterations,
        residual,
    })
}

/// The unit current flow from `p` to `q`: divergence +1 at `p`, -1 at `q`,
/// zero elsewhere. Its dissipation equals the effective resistance.
pub fn unit_current_flow(
    net: &Network,
    p: VertexId,
    q: VertexId,
    cfg: &SolveConfig,
) -> Result<Flow> {
    Ok(effective_resistance(net, p, q, cfg)?.flow)
}

/// Arithmetic mean over edges of the effective resistance between the edge's
/// endpoints. For connected unit-conductance networks this equals
/// `(n - 1) / e` (Foster's identity).
pub fn foster_average(net: &Network, cfg: &SolveConfig) -> Result<f64> {
    net.require_connected()?;
    if net.edge_count() == 0 {
        return Err(Error::InvalidArgument(
            "foster average of an edgeless network".to_string(),
        ));
    }
    // Parallel edges share the endpoint resistance; solve each pair once.
    let mut cache: std::collections::BTreeMap<(usize, usize), f64> = std::collections::BTreeMap::new();
    let mut sum = 0.0;
    for e in net.edges() {
        let key = (e.tail.0, e.head.0);
        let r = match cache.get(&key) {
            Some(&r) => r,
            None => {
                let r = effective_resistance(net, e.tail, e.head, cfg)?.resistance;
                cache.insert(key, r);
                r
            }
        };
        sum += r;
    }
    Ok(sum / net.edge_count() as f64)
}
