use petgraph::unionfind::UnionFind;

use crate::cover::CycleCover;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::matching::TOLERANCE;

/// Where an edge of the working multigraph came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOrigin {
    TwoFactor,
    Tree,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiEdge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    /// 1 or 2.
    pub multiplicity: u8,
    pub origin: EdgeOrigin,
}

/// The multigraph built by the merge or split branch, ready to be
/// shortcut into cycles.
#[derive(Debug, Clone)]
pub struct WorkingMultigraph {
    n: usize,
    edges: Vec<MultiEdge>,
    component: Vec<usize>,
    component_count: usize,
}

impl WorkingMultigraph {
    /// Builds the multigraph and labels components `0..k` in order of their
    /// smallest vertex.
    pub fn new(n: usize, edges: Vec<MultiEdge>) -> Self {
        let mut uf = UnionFind::new(n);
        for e in &edges {
            uf.union(e.u, e.v);
        }
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let component = (0..n)
            .map(|v| {
                let root = uf.find_mut(v);
                if label[root] == usize::MAX {
                    label[root] = count;
                    count += 1;
                }
                label[root]
            })
            .collect();
        WorkingMultigraph {
            n,
            edges,
            component,
            component_count: count,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[MultiEdge] {
        &self.edges
    }

    /// Component label of every vertex.
    pub fn component_index(&self) -> &[usize] {
        &self.component
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    /// Vertex sets of the components, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.component_count];
        for v in 0..self.n {
            out[self.component[v]].push(v);
        }
        out
    }

    /// Total weight counting multiplicity.
    pub fn weight(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| e.weight * f64::from(e.multiplicity))
            .sum()
    }

    /// Weight of each component, counting multiplicity.
    pub fn component_weights(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.component_count];
        for e in &self.edges {
            out[self.component[e.u]] += e.weight * f64::from(e.multiplicity);
        }
        out
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.u] += usize::from(e.multiplicity);
            deg[e.v] += usize::from(e.multiplicity);
        }
        deg
    }

    /// Checks what shortcutting needs: `p` components, each with at least
    /// three vertices, and every degree even.
    pub fn check_ready(&self, p: usize) -> Result<()> {
        if self.component_count != p {
            return Err(Error::Internal(format!(
                "multigraph has {} components, expected {p}",
                self.component_count
            )));
        }
        if let Some((v, d)) = self
            .degrees()
            .into_iter()
            .enumerate()
            .find(|(_, d)| d % 2 == 1)
        {
            return Err(Error::Internal(format!("vertex {v} has odd degree {d}")));
        }
        if let Some(c) = self.components().iter().find(|c| c.len() < 3) {
            return Err(Error::Internal(format!(
                "component {c:?} has fewer than three vertices"
            )));
        }
        Ok(())
    }
}

fn cycle_edges(inst: &Instance, cycle: &[usize], multiplicity: u8) -> Vec<MultiEdge> {
    let k = cycle.len();
    (0..k)
        .map(|i| {
            let (u, v) = (cycle[i], cycle[(i + 1) % k]);
            MultiEdge {
                u,
                v,
                weight: inst.weight(u, v),
                multiplicity,
                origin: EdgeOrigin::TwoFactor,
            }
        })
        .collect()
}

/// Joins the cycles of `cover` into `p` components with forest edges that
/// bridge distinct components, cheapest first, and doubles every added edge.
pub fn merge_branch(
    cover: &CycleCover,
    forest: &[(usize, usize, f64)],
    p: usize,
    inst: &Instance,
) -> Result<WorkingMultigraph> {
    let n = inst.n();
    let q = cover.len();
    if q < p {
        return Err(Error::Internal(format!(
            "merge branch needs q ≥ p, got q = {q}, p = {p}"
        )));
    }
    let mut uf = UnionFind::new(n);
    let mut edges = Vec::with_capacity(n + q - p);
    for cycle in cover.cycles() {
        for w in cycle.windows(2) {
            uf.union(w[0], w[1]);
        }
        edges.extend(cycle_edges(inst, cycle, 1));
    }

    let mut ordered = forest.to_vec();
    ordered.sort_by(|a, b| a.2.total_cmp(&b.2).then((a.0, a.1).cmp(&(b.0, b.1))));
    let mut components = q;
    for &(u, v, w) in &ordered {
        if components == p {
            break;
        }
        if uf.union(u, v) {
            components -= 1;
            edges.push(MultiEdge {
                u,
                v,
                weight: w,
                multiplicity: 2,
                origin: EdgeOrigin::Tree,
            });
        }
    }
    if components != p {
        return Err(Error::Internal(format!(
            "forest left {components} components, expected {p}"
        )));
    }
    Ok(WorkingMultigraph::new(n, edges))
}

/// A component during splitting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Cycle(Vec<usize>),
    Path(Vec<usize>),
}

impl Piece {
    pub fn vertices(&self) -> &[usize] {
        match self {
            Piece::Cycle(v) | Piece::Path(v) => v,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices().len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices().is_empty()
    }

    /// Weight of the single copy of every edge.
    pub fn weight(&self, inst: &Instance) -> f64 {
        match self {
            Piece::Cycle(v) => inst.cycle_weight(v),
            Piece::Path(v) => v.windows(2).map(|w| inst.weight(w[0], w[1])).sum(),
        }
    }

    fn edge_list(&self) -> Vec<(usize, usize)> {
        let v = self.vertices();
        let mut out: Vec<(usize, usize)> = v.windows(2).map(|w| (w[0], w[1])).collect();
        if let Piece::Cycle(_) = self {
            out.push((v[v.len() - 1], v[0]));
        }
        out
    }

    /// The vertex sequence `v1, ..., vk`: a cycle starts at its smallest
    /// vertex and heads to the smaller neighbour, a path starts at its
    /// smaller endpoint.
    fn oriented(&self) -> Vec<usize> {
        match self {
            Piece::Cycle(v) => crate::cover::canonical_cycle(v.clone()),
            Piece::Path(v) => {
                let mut v = v.clone();
                if v[v.len() - 1] < v[0] {
                    v.reverse();
                }
                v
            }
        }
    }
}

/// Result of the splitting loop, before duplication.
#[derive(Debug, Clone)]
pub struct SplitOutcome {
    pub pieces: Vec<Piece>,
    /// Single-copy weight before the first split and after each split.
    pub weight_trace: Vec<f64>,
}

/// Splits the cycles of `cover` until there are `p` components, always
/// cutting the largest component with at least six vertices (smallest
/// vertex id on ties) into `(v1, v2, v3)` and `(v4, ..., vk)`.
pub fn split_components(inst: &Instance, cover: &CycleCover, p: usize) -> Result<SplitOutcome> {
    let mut pieces: Vec<Piece> = cover.cycles().iter().cloned().map(Piece::Cycle).collect();
    let mut weight: f64 = pieces.iter().map(|c| c.weight(inst)).sum();
    let mut weight_trace = vec![weight];
    while pieces.len() < p {
        let chosen = pieces
            .iter()
            .enumerate()
            .filter(|(_, piece)| piece.len() >= 6)
            .max_by(|(_, a), (_, b)| {
                let min_a = a.vertices().iter().min();
                let min_b = b.vertices().iter().min();
                a.len().cmp(&b.len()).then(min_b.cmp(&min_a))
            })
            .map(|(i, _)| i);
        let Some(i) = chosen else {
            return Err(Error::AlgorithmInapplicable {
                components: pieces.len(),
                p,
            });
        };
        let piece = pieces.swap_remove(i);
        let seq = piece.oriented();
        let before = piece.weight(inst);
        let head = Piece::Path(seq[..3].to_vec());
        let tail = Piece::Path(seq[3..].to_vec());
        let after = head.weight(inst) + tail.weight(inst);
        if after > before + TOLERANCE {
            return Err(Error::Internal(format!(
                "split raised component weight from {before} to {after}"
            )));
        }
        weight += after - before;
        weight_trace.push(weight);
        pieces.push(head);
        pieces.push(tail);
    }
    pieces.sort_by_key(|piece| piece.vertices().iter().copied().min());
    Ok(SplitOutcome {
        pieces,
        weight_trace,
    })
}

/// Splits to `p` components and doubles every remaining edge.
pub fn split_branch(inst: &Instance, cover: &CycleCover, p: usize) -> Result<WorkingMultigraph> {
    let q = cover.len();
    if q > p {
        return Err(Error::Internal(format!(
            "split branch needs q ≤ p, got q = {q}, p = {p}"
        )));
    }
    let outcome = split_components(inst, cover, p)?;
    let edges = outcome
        .pieces
        .iter()
        .flat_map(|piece| piece.edge_list())
        .map(|(u, v)| MultiEdge {
            u,
            v,
            weight: inst.weight(u, v),
            multiplicity: 2,
            origin: EdgeOrigin::TwoFactor,
        })
        .collect();
    Ok(WorkingMultigraph::new(inst.n(), edges))
}
