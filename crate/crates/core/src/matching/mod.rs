//! Minimum-weight perfect matching on general graphs.
//!
//! Weights are real numbers. Internally they are quantised onto a power-of-two
//! integer grid (at most 2^40 units for the heaviest edge) so that the blossom
//! algorithm runs in exact integer arithmetic; the reported weight is always
//! recomputed from the original real weights. The quantisation error is below
//! `max_weight * 2^-41` per edge.

mod blossom;

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Absolute tolerance for slack and weight comparisons.
pub const TOLERANCE: f64 = 1e-9;

const GRID_BITS: i32 = 40;

/// A weighted undirected simple graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl GeneralGraph {
    /// Validates and builds a graph. Rejects self-loops, parallel edges,
    /// out-of-range endpoints and negative or non-finite weights.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v, w) in &edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidInstance(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("self-loop at vertex {u}")));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidInstance(format!(
                    "edge ({u}, {v}) has weight {w}; weights must be finite and nonnegative"
                )));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidInstance(format!("parallel edge ({u}, {v})")));
            }
        }
        Ok(GeneralGraph {
            vertex_count,
            edges,
        })
    }

    /// Builds a graph whose edges are known to satisfy the invariants.
    pub(crate) fn new_unchecked(vertex_count: usize, edges: Vec<(usize, usize, f64)>) -> Self {
        debug_assert!(GeneralGraph::new(vertex_count, edges.clone()).is_ok());
        GeneralGraph {
            vertex_count,
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// A perfect matching and its total weight.
#[derive(Debug, Clone, PartialEq)]
pub struct PerfectMatching {
    /// Matched pairs, each stored as `(smaller, larger)` and sorted.
    pub pairs: Vec<(usize, usize)>,
    pub weight: f64,
}

impl PerfectMatching {
    /// `mate[v]` for every vertex.
    pub fn mates(&self, vertex_count: usize) -> Vec<usize> {
        let mut mate = vec![usize::MAX; vertex_count];
        for &(u, v) in &self.pairs {
            mate[u] = v;
            mate[v] = u;
        }
        mate
    }
}

/// An odd vertex set carrying a nonzero dual value.
#[derive(Debug, Clone, PartialEq)]
pub struct OddSet {
    pub members: Vec<usize>,
    /// Dual value; never positive for a minimisation certificate.
    pub value: f64,
}

/// Optimal dual solution of the perfect-matching linear program.
///
/// For every edge `{u, v}` the reduced cost
/// `w(u, v) - potential[u] - potential[v] - sum(value of odd sets containing u and v)`
/// is nonnegative and it is zero on matched edges.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingDuals {
    pub potentials: Vec<f64>,
    pub odd_sets: Vec<OddSet>,
}

impl MatchingDuals {
    /// Reduced cost of edge `{u, v}` with weight `w`.
    pub fn reduced_cost(&self, u: usize, v: usize, w: f64) -> f64 {
        let inside: f64 = self
            .odd_sets
            .iter()
            .filter(|s| s.members.contains(&u) && s.members.contains(&v))
            .map(|s| s.value)
            .sum();
        w - self.potentials[u] - self.potentials[v] - inside
    }

    /// Dual objective value.
    pub fn objective(&self) -> f64 {
        self.potentials.iter().sum::<f64>()
            + self
                .odd_sets
                .iter()
                .map(|s| s.value * (s.members.len() / 2) as f64)
                .sum::<f64>()
    }

    /// Checks dual feasibility and complementary slackness against
    /// `matching`, each within `tol`. Returns a description of the first
    /// violation found.
    pub fn verify(
        &self,
        graph: &GeneralGraph,
        matching: &PerfectMatching,
        tol: f64,
    ) -> std::result::Result<(), String> {
        let mate = matching.mates(graph.vertex_count());
        for &(u, v, w) in graph.edges() {
            let rc = self.reduced_cost(u, v, w);
            if rc < -tol {
                return Err(format!("edge ({u}, {v}) has negative reduced cost {rc}"));
            }
            if mate[u] == v && rc.abs() > tol {
                return Err(format!("matched edge ({u}, {v}) has reduced cost {rc}"));
            }
        }
        for set in &self.odd_sets {
            if set.value > tol {
                return Err(format!("odd set has positive dual {}", set.value));
            }
            if set.value.abs() > tol {
                let inside = set
                    .members
                    .iter()
                    .filter(|&&v| set.members.contains(&mate[v]))
                    .count()
                    / 2;
                if inside != set.members.len() / 2 {
                    return Err(format!(
                        "odd set of size {} with nonzero dual holds only {inside} matched edges",
                        set.members.len()
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Minimum-weight perfect matching of `graph`.
pub fn min_weight_perfect_matching(graph: &GeneralGraph) -> Result<PerfectMatching> {
    min_weight_perfect_matching_with_duals(graph).map(|(m, _)| m)
}

/// Minimum-weight perfect matching together with an optimality certificate.
pub fn min_weight_perfect_matching_with_duals(
    graph: &GeneralGraph,
) -> Result<(PerfectMatching, MatchingDuals)> {
    let n = graph.vertex_count();
    if n % 2 == 1 {
        return Err(Error::NoPerfectMatching(format!("{n} vertices is odd")));
    }
    if n == 0 {
        let duals = MatchingDuals {
            potentials: Vec::new(),
            odd_sets: Vec::new(),
        };
        return Ok((
            PerfectMatching {
                pairs: Vec::new(),
                weight: 0.0,
            },
            duals,
        ));
    }

    let max_weight = graph.edges().iter().map(|e| e.2).fold(0.0, f64::max);
    let scale = grid_scale(max_weight);
    let quantised: Vec<i64> = graph
        .edges()
        .iter()
        .map(|e| (e.2 * scale).round() as i64)
        .collect();
    let top = quantised.iter().copied().max().unwrap_or(0);
    // Maximum-weight maximum-cardinality matching on complemented weights.
    let complemented: Vec<(usize, usize, i64)> = graph
        .edges()
        .iter()
        .zip(&quantised)
        .map(|(&(u, v, _), &q)| (u, v, top - q))
        .collect();
    let outcome = blossom::max_weight_matching(n, &complemented, true);

    let mut pairs = Vec::with_capacity(n / 2);
    for (v, m) in outcome.mate.iter().enumerate() {
        match m {
            None => {
                return Err(Error::NoPerfectMatching(format!(
                    "vertex {v} is left unmatched by every maximum matching"
                )))
            }
            Some(u) if v < *u => pairs.push((v, *u)),
            Some(_) => {}
        }
    }
    pairs.sort_unstable();
    let matched: HashSet<(usize, usize)> = pairs.iter().copied().collect();
    let weight = graph
        .edges()
        .iter()
        .filter(|&&(u, v, _)| matched.contains(&(u.min(v), u.max(v))))
        .map(|e| e.2)
        .sum();

    let potentials = outcome
        .vertex_dual
        .iter()
        .map(|&d| (top - d) as f64 / (2.0 * scale))
        .collect();
    let odd_sets = outcome
        .blossoms
        .into_iter()
        .filter(|(_, z)| *z != 0)
        .map(|(members, z)| OddSet {
            members,
            value: -(z as f64) / scale,
        })
        .collect();

    Ok((
        PerfectMatching { pairs, weight },
        MatchingDuals {
            potentials,
            odd_sets,
        },
    ))
}

/// Power of two that maps `max_weight` to at most 2^GRID_BITS.
fn grid_scale(max_weight: f64) -> f64 {
    if max_weight <= 0.0 {
        return 1.0;
    }
    let exp = GRID_BITS - max_weight.log2().ceil() as i32;
    2f64.powi(exp)
}
