//! Minimum-weight 2-factors through the perfect-matching gadget.
//!
//! Every original vertex `v` becomes two copies `b'_v`, `b''_v`. Every
//! original edge `e = {u, v}` becomes two vertices `a_e^u`, `a_e^v` joined by
//! a zero-weight edge, with `a_e^u` adjacent to both copies of `u` and
//! `a_e^v` adjacent to both copies of `v` at weight `c_e / 2`. A perfect
//! matching of this graph leaves `a_e^u` paired with a copy of `u` exactly
//! when `e` belongs to the 2-factor, and every original vertex ends up with
//! two such edges.

use crate::cover::CycleCover;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::matching::{
    min_weight_perfect_matching_with_duals, GeneralGraph, MatchingDuals, PerfectMatching, TOLERANCE,
};

/// Gadget ids for one original edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeGadget {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    /// `a_e^u`, `a_e^v`.
    pub a_u: usize,
    pub a_v: usize,
    /// Gadget edge ids in the order `{b'_u,a_u}`, `{b''_u,a_u}`,
    /// `{a_u,a_v}`, `{b'_v,a_v}`, `{b''_v,a_v}`.
    pub edge_ids: [usize; 5],
}

/// The auxiliary matching graph together with its maps back to the original
/// instance.
#[derive(Debug, Clone)]
pub struct GadgetGraph {
    pub graph: GeneralGraph,
    pub edge_map: Vec<EdgeGadget>,
    n: usize,
}

impl GadgetGraph {
    /// Ids of `b'_v` and `b''_v`.
    pub fn vertex_copies(&self, v: usize) -> (usize, usize) {
        debug_assert!(v < self.n);
        (2 * v, 2 * v + 1)
    }

    pub fn original_vertex_count(&self) -> usize {
        self.n
    }
}

/// Gadget over the complete graph of `inst`: `2n + 2m` vertices and `5m`
/// edges.
pub fn build_gadget(inst: &Instance) -> GadgetGraph {
    gadget_over(inst.n(), inst.edges())
}

/// Gadget over a subset of the original edges.
pub fn gadget_over(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> GadgetGraph {
    let mut gadget_edges = Vec::new();
    let mut edge_map = Vec::new();
    for (k, (u, v, w)) in edges.into_iter().enumerate() {
        let a_u = 2 * n + 2 * k;
        let a_v = a_u + 1;
        let half = w / 2.0;
        let first = gadget_edges.len();
        gadget_edges.extend_from_slice(&[
            (2 * u, a_u, half),
            (2 * u + 1, a_u, half),
            (a_u, a_v, 0.0),
            (2 * v, a_v, half),
            (2 * v + 1, a_v, half),
        ]);
        edge_map.push(EdgeGadget {
            u,
            v,
            weight: w,
            a_u,
            a_v,
            edge_ids: [first, first + 1, first + 2, first + 3, first + 4],
        });
    }
    let vertex_count = 2 * n + 2 * edge_map.len();
    GadgetGraph {
        graph: GeneralGraph::new_unchecked(vertex_count, gadget_edges),
        edge_map,
        n,
    }
}

/// Tuning for [`min_weight_two_factor_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoFactorOptions {
    /// Instances with at most this many vertices are solved on the complete
    /// gadget. Larger ones start from a nearest-neighbour candidate graph
    /// and add edges until the matching duals prove optimality on the
    /// complete graph.
    pub dense_limit: usize,
    /// Initial number of nearest neighbours per vertex in the candidate
    /// graph.
    pub neighbours: usize,
}

impl Default for TwoFactorOptions {
    fn default() -> Self {
        TwoFactorOptions {
            dense_limit: 30,
            neighbours: 8,
        }
    }
}

/// Minimum-weight 2-factor of the complete graph of `inst`.
pub fn min_weight_two_factor(inst: &Instance) -> Result<CycleCover> {
    min_weight_two_factor_with(inst, TwoFactorOptions::default())
}

pub fn min_weight_two_factor_with(inst: &Instance, opts: TwoFactorOptions) -> Result<CycleCover> {
    let n = inst.n();
    if n < 3 {
        return Err(Error::InvalidInstance(format!("n must be ≥ 3, got {n}")));
    }
    if n <= opts.dense_limit {
        let gadget = build_gadget(inst);
        let (matching, _) = solve_gadget(&gadget)?;
        return extract_cover(inst, &gadget, &matching);
    }

    let mut candidate = vec![false; n * n];
    let mut k = opts.neighbours.max(2).min(n - 1);
    add_nearest(inst, k, &mut candidate);
    loop {
        let edges: Vec<(usize, usize, f64)> = inst
            .edges()
            .filter(|&(i, j, _)| candidate[i * n + j])
            .collect();
        let gadget = gadget_over(n, edges);
        let (matching, duals) = match solve_gadget(&gadget) {
            Ok(solved) => solved,
            Err(Error::NoPerfectMatching(_)) if k < n - 1 => {
                // Candidate graph has no 2-factor; widen it.
                k = (2 * k).min(n - 1);
                add_nearest(inst, k, &mut candidate);
                continue;
            }
            Err(e) => return Err(e),
        };

        // An absent edge {u, v} could only improve the matching if
        // c_uv < max(y(b'_u), y(b''_u)) + max(y(b'_v), y(b''_v)).
        let best: Vec<f64> = (0..n)
            .map(|v| {
                let (b1, b2) = gadget.vertex_copies(v);
                duals.potentials[b1].max(duals.potentials[b2])
            })
            .collect();
        let mut violated = 0;
        for (i, j, w) in inst.edges() {
            if !candidate[i * n + j] && w < best[i] + best[j] - TOLERANCE {
                candidate[i * n + j] = true;
                violated += 1;
            }
        }
        log::debug!(
            "two-factor pricing: {} candidate edges, {violated} violated",
            gadget.edge_map.len()
        );
        if violated == 0 {
            return extract_cover(inst, &gadget, &matching);
        }
    }
}

fn add_nearest(inst: &Instance, k: usize, candidate: &mut [bool]) {
    let n = inst.n();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        order.clear();
        order.extend((0..n).filter(|&j| j != i));
        let row = inst.row(i);
        order.sort_by(|&a, &b| row[a].total_cmp(&row[b]).then(a.cmp(&b)));
        for &j in order.iter().take(k) {
            candidate[i.min(j) * n + i.max(j)] = true;
        }
    }
}

fn solve_gadget(gadget: &GadgetGraph) -> Result<(PerfectMatching, MatchingDuals)> {
    min_weight_perfect_matching_with_duals(&gadget.graph)
}

/// Reads the 2-factor off a perfect matching of the gadget.
fn extract_cover(
    inst: &Instance,
    gadget: &GadgetGraph,
    matching: &PerfectMatching,
) -> Result<CycleCover> {
    let n = inst.n();
    let mate = matching.mates(gadget.graph.vertex_count());
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::with_capacity(2); n];
    let mut selected_weight = 0.0;
    for eg in &gadget.edge_map {
        let (bu1, bu2) = gadget.vertex_copies(eg.u);
        let (bv1, bv2) = gadget.vertex_copies(eg.v);
        let u_side = mate[eg.a_u] == bu1 || mate[eg.a_u] == bu2;
        let v_side = mate[eg.a_v] == bv1 || mate[eg.a_v] == bv2;
        let middle = mate[eg.a_u] == eg.a_v;
        if u_side != v_side || u_side == middle {
            return Err(Error::Internal(format!(
                "gadget of edge ({}, {}) is inconsistently matched",
                eg.u, eg.v
            )));
        }
        if u_side {
            adjacency[eg.u].push(eg.v);
            adjacency[eg.v].push(eg.u);
            selected_weight += eg.weight;
        }
    }
    if let Some(v) = adjacency.iter().position(|a| a.len() != 2) {
        return Err(Error::Internal(format!(
            "vertex {v} has degree {} in the extracted 2-factor",
            adjacency[v].len()
        )));
    }
    if (selected_weight - matching.weight).abs() > TOLERANCE * (1.0 + selected_weight) {
        return Err(Error::Internal(format!(
            "2-factor weight {selected_weight} differs from matching weight {}",
            matching.weight
        )));
    }

    let mut visited = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut cycle = vec![start];
        visited[start] = true;
        let (mut prev, mut cur) = (start, adjacency[start][0]);
        while cur != start {
            visited[cur] = true;
            cycle.push(cur);
            let next = if adjacency[cur][0] == prev {
                adjacency[cur][1]
            } else {
                adjacency[cur][0]
            };
            prev = cur;
            cur = next;
        }
        cycles.push(cycle);
    }
    CycleCover::new(inst, cycles)
}
