//! Exhaustive reference solvers for small instances.
//!
//! These favour obviousness over speed. Matchings are enumerated by
//! recursive pairing. Cycle problems use an exact subset dynamic program:
//! the cheapest Hamiltonian cycle of every vertex subset (Held-Karp), then
//! every partition of the vertex set into blocks of size at least 3.

use crate::cover::{CycleCover, HpmpSolution};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::matching::{GeneralGraph, PerfectMatching};

/// Hard size limits for the exhaustive solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimitConfig {
    pub max_n_matching: usize,
    pub max_n_two_factor: usize,
    pub max_n_hpmp: usize,
}

impl Default for OracleLimitConfig {
    fn default() -> Self {
        OracleLimitConfig {
            max_n_matching: 12,
            max_n_two_factor: 10,
            max_n_hpmp: 10,
        }
    }
}

fn check_limit(n: usize, limit: usize) -> Result<()> {
    if limit == 0 || n > limit {
        return Err(Error::OracleLimit { n, limit });
    }
    Ok(())
}

/// Minimum-weight perfect matching by trying every pairing.
pub fn brute_matching(g: &GeneralGraph, limits: &OracleLimitConfig) -> Result<PerfectMatching> {
    let n = g.vertex_count();
    check_limit(n, limits.max_n_matching)?;
    if n % 2 == 1 {
        return Err(Error::NoPerfectMatching(format!("{n} vertices is odd")));
    }
    let mut adj = vec![None; n * n];
    for &(u, v, w) in g.edges() {
        adj[u * n + v] = Some(w);
        adj[v * n + u] = Some(w);
    }

    struct Search<'a> {
        n: usize,
        adj: &'a [Option<f64>],
        used: Vec<bool>,
        pairs: Vec<(usize, usize)>,
        best: Option<(f64, Vec<(usize, usize)>)>,
    }

    impl Search<'_> {
        fn go(&mut self, weight: f64) {
            let Some(u) = (0..self.n).find(|&v| !self.used[v]) else {
                if self.best.as_ref().is_none_or(|(b, _)| weight < *b) {
                    self.best = Some((weight, self.pairs.clone()));
                }
                return;
            };
            self.used[u] = true;
            for v in (u + 1)..self.n {
                if self.used[v] {
                    continue;
                }
                if let Some(w) = self.adj[u * self.n + v] {
                    self.used[v] = true;
                    self.pairs.push((u, v));
                    self.go(weight + w);
                    self.pairs.pop();
                    self.used[v] = false;
                }
            }
            self.used[u] = false;
        }
    }

    let mut search = Search {
        n,
        adj: &adj,
        used: vec![false; n],
        pairs: Vec::new(),
        best: None,
    };
    search.go(0.0);
    match search.best {
        Some((_, pairs)) => {
            // Re-sum in sorted order so the weight does not depend on the
            // recursion's accumulation order.
            let weight = pairs.iter().map(|&(u, v)| adj[u * n + v].unwrap()).sum();
            Ok(PerfectMatching { pairs, weight })
        }
        None => Err(Error::NoPerfectMatching(
            "no pairing of the vertices uses only graph edges".into(),
        )),
    }
}

/// Cheapest Hamiltonian cycle of every vertex subset of size at least 3.
struct SubsetCycles {
    n: usize,
    cost: Vec<f64>,
    /// For each subset, predecessor table of the best path DP, keyed by
    /// `(mask, last)`.
    parent: Vec<usize>,
    closing: Vec<usize>,
}

impl SubsetCycles {
    fn new(inst: &Instance) -> Self {
        let n = inst.n();
        let full = 1usize << n;
        // path[mask * n + j]: cheapest path that starts at the lowest vertex
        // of `mask`, visits all of `mask` and ends at `j`.
        let mut path = vec![f64::INFINITY; full * n];
        let mut parent = vec![usize::MAX; full * n];
        for s in 0..n {
            path[(1 << s) * n + s] = 0.0;
        }
        for mask in 1..full {
            let s = mask.trailing_zeros() as usize;
            for j in 0..n {
                let here = path[mask * n + j];
                if mask >> j & 1 == 0 || !here.is_finite() {
                    continue;
                }
                // Extend with vertices above the start only.
                for k in (s + 1)..n {
                    if mask >> k & 1 == 1 {
                        continue;
                    }
                    let next = mask | 1 << k;
                    let cand = here + inst.weight(j, k);
                    if cand < path[next * n + k] {
                        path[next * n + k] = cand;
                        parent[next * n + k] = j;
                    }
                }
            }
        }
        let mut cost = vec![f64::INFINITY; full];
        let mut closing = vec![usize::MAX; full];
        for mask in 1..full {
            if mask.count_ones() < 3 {
                continue;
            }
            let s = mask.trailing_zeros() as usize;
            for j in 0..n {
                if j == s || mask >> j & 1 == 0 {
                    continue;
                }
                let cand = path[mask * n + j] + inst.weight(j, s);
                if cand < cost[mask] {
                    cost[mask] = cand;
                    closing[mask] = j;
                }
            }
        }
        SubsetCycles {
            n,
            cost,
            parent,
            closing,
        }
    }

    fn cycle(&self, mask: usize) -> Vec<usize> {
        let n = self.n;
        let mut out = Vec::new();
        let mut m = mask;
        let mut j = self.closing[mask];
        while j != usize::MAX {
            out.push(j);
            let prev = self.parent[m * n + j];
            m &= !(1 << j);
            j = prev;
        }
        out.reverse();
        out
    }
}

/// Minimum over partitions of `mask` into exactly `blocks` cycles (or any
/// number of cycles when `blocks` is `None`).
fn best_partition(
    cycles: &SubsetCycles,
    n: usize,
    blocks: Option<usize>,
) -> Option<(f64, Vec<usize>)> {
    let full = (1usize << n) - 1;
    let layers = blocks.unwrap_or(1);
    // best[k][mask]: cheapest split of `mask` into k + 1 cycles (or any
    // number when unconstrained).
    let mut best = vec![vec![f64::INFINITY; full + 1]; layers];
    let mut choice = vec![vec![0usize; full + 1]; layers];
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // Every block containing the lowest vertex of `mask`.
        let mut sub = rest;
        loop {
            let block = sub | low;
            if block.count_ones() >= 3 {
                let remainder = mask ^ block;
                let c = cycles.cost[block];
                for k in 0..layers {
                    let tail = if blocks.is_none() {
                        if remainder == 0 {
                            0.0
                        } else {
                            best[0][remainder]
                        }
                    } else if k == 0 {
                        if remainder == 0 {
                            0.0
                        } else {
                            f64::INFINITY
                        }
                    } else if remainder == 0 {
                        f64::INFINITY
                    } else {
                        best[k - 1][remainder]
                    };
                    if c + tail < best[k][mask] {
                        best[k][mask] = c + tail;
                        choice[k][mask] = block;
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    let top = layers - 1;
    if !best[top][full].is_finite() {
        return None;
    }
    let mut parts = Vec::new();
    let mut mask = full;
    let mut k = top;
    while mask != 0 {
        let block = choice[k][mask];
        parts.push(block);
        mask ^= block;
        if blocks.is_some() && k > 0 {
            k -= 1;
        }
    }
    Some((best[top][full], parts))
}

/// Minimum-weight 2-factor by exhaustive partition enumeration.
pub fn brute_two_factor(inst: &Instance, limits: &OracleLimitConfig) -> Result<CycleCover> {
    let n = inst.n();
    check_limit(n, limits.max_n_two_factor)?;
    let cycles = SubsetCycles::new(inst);
    let (_, parts) = best_partition(&cycles, n, None)
        .ok_or_else(|| Error::Internal("complete graph without a 2-factor".into()))?;
    CycleCover::new(inst, parts.into_iter().map(|b| cycles.cycle(b)).collect())
}

/// Exact Hamiltonian p-median optimum by exhaustive partition enumeration.
pub fn brute_hpmp(inst: &Instance, p: usize, limits: &OracleLimitConfig) -> Result<HpmpSolution> {
    let n = inst.n();
    if p == 0 || 3 * p > n {
        return Err(Error::Infeasible { n, p, max: n / 3 });
    }
    check_limit(n, limits.max_n_hpmp)?;
    let cycles = SubsetCycles::new(inst);
    let (_, parts) = best_partition(&cycles, n, Some(p))
        .ok_or_else(|| Error::Internal(format!("no partition into {p} cycles")))?;
    HpmpSolution::new(
        inst,
        parts.into_iter().map(|b| cycles.cycle(b)).collect(),
        p,
    )
}

/// Largest value of `sum(part mod 3)` over partitions of `n` into parts of
/// size at least 3.
pub fn max_l_exhaustive(n: usize) -> Result<usize> {
    if !(3..=200).contains(&n) {
        return Err(Error::InvalidInstance(format!(
            "max_l_exhaustive needs 3 ≤ n ≤ 200, got {n}"
        )));
    }
    let mut best: Vec<Option<usize>> = vec![None; n + 1];
    best[0] = Some(0);
    for total in 3..=n {
        best[total] = (3..=total)
            .filter_map(|part| best[total - part].map(|b| b + part % 3))
            .max();
    }
    Ok(best[n].expect("every n ≥ 3 has a partition into parts ≥ 3"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_euclidean, Instance};

    #[test]
    fn matching_single_edge_and_k6() {
        let limits = OracleLimitConfig::default();
        let g = GeneralGraph::new(2, vec![(0, 1, 4.5)]).unwrap();
        let m = brute_matching(&g, &limits).unwrap();
        assert_eq!(m.pairs, vec![(0, 1)]);
        assert_eq!(m.weight, 4.5);

        let k6: Vec<_> = (0..6)
            .flat_map(|i| ((i + 1)..6).map(move |j| (i, j, 1.0)))
            .collect();
        let m = brute_matching(&GeneralGraph::new(6, k6).unwrap(), &limits).unwrap();
        assert_eq!(m.weight, 3.0);
    }

    #[test]
    fn matching_k4() {
        let g = GeneralGraph::new(
            4,
            vec![
                (0, 1, 1.0),
                (2, 3, 1.0),
                (0, 2, 10.0),
                (0, 3, 10.0),
                (1, 2, 10.0),
                (1, 3, 10.0),
            ],
        )
        .unwrap();
        let m = brute_matching(&g, &OracleLimitConfig::default()).unwrap();
        assert_eq!(m.weight, 2.0);
    }

    #[test]
    fn matching_limits_and_failures() {
        let limits = OracleLimitConfig::default();
        let g = GeneralGraph::new(14, vec![(0, 1, 1.0)]).unwrap();
        assert!(matches!(
            brute_matching(&g, &limits),
            Err(Error::OracleLimit { n: 14, limit: 12 })
        ));
        let g = GeneralGraph::new(4, vec![(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).unwrap();
        assert!(matches!(
            brute_matching(&g, &limits),
            Err(Error::NoPerfectMatching(_))
        ));
        let g = GeneralGraph::new(3, vec![(0, 1, 1.0)]).unwrap();
        assert!(matches!(
            brute_matching(&g, &limits),
            Err(Error::NoPerfectMatching(_))
        ));
    }

    #[test]
    fn two_factor_of_triangle() {
        let inst = generate_euclidean(3, 4, 100.0).unwrap();
        let f = brute_two_factor(&inst, &OracleLimitConfig::default()).unwrap();
        assert_eq!(f.cycles(), &[vec![0, 1, 2]]);
    }

    /// Independent enumeration for n = 6: one 6-cycle over all orderings,
    /// or two triangles over all 10 splits.
    fn six_vertex_optimum(inst: &Instance) -> (f64, f64) {
        let mut best_hamiltonian = f64::INFINITY;
        let mut rest = [1usize, 2, 3, 4, 5];
        permute(&mut rest, 0, &mut |perm| {
            let mut tour = vec![0];
            tour.extend_from_slice(perm);
            best_hamiltonian = best_hamiltonian.min(inst.cycle_weight(&tour));
        });
        let mut best_split = f64::INFINITY;
        for a in 1..6 {
            for b in (a + 1)..6 {
                let first = [0, a, b];
                let second: Vec<usize> = (1..6).filter(|&v| v != a && v != b).collect();
                best_split = best_split.min(inst.cycle_weight(&first) + inst.cycle_weight(&second));
            }
        }
        (best_hamiltonian, best_split)
    }

    fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
        if k == items.len() {
            visit(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, visit);
            items.swap(k, i);
        }
    }

    #[test]
    fn six_vertices_against_direct_enumeration() {
        let limits = OracleLimitConfig::default();
        for seed in 0..10 {
            let inst = generate_euclidean(6, seed, 100.0).unwrap();
            let (ham, split) = six_vertex_optimum(&inst);
            let f = brute_two_factor(&inst, &limits).unwrap();
            assert!((f.weight() - ham.min(split)).abs() < 1e-9);
            let p1 = brute_hpmp(&inst, 1, &limits).unwrap();
            assert!((p1.weight() - ham).abs() < 1e-9);
            let p2 = brute_hpmp(&inst, 2, &limits).unwrap();
            assert!((p2.weight() - split).abs() < 1e-9);
            assert_eq!(p2.cycles().len(), 2);
        }
    }

    #[test]
    fn hpmp_infeasible_and_limits() {
        let limits = OracleLimitConfig::default();
        let inst = generate_euclidean(8, 1, 100.0).unwrap();
        assert!(matches!(
            brute_hpmp(&inst, 3, &limits),
            Err(Error::Infeasible { n: 8, p: 3, max: 2 })
        ));
        assert!(matches!(
            brute_hpmp(&inst, 0, &limits),
            Err(Error::Infeasible { .. })
        ));
        let big = generate_euclidean(11, 1, 100.0).unwrap();
        assert!(matches!(
            brute_hpmp(&big, 2, &limits),
            Err(Error::OracleLimit { n: 11, limit: 10 })
        ));
        assert!(matches!(
            brute_two_factor(&big, &limits),
            Err(Error::OracleLimit { .. })
        ));
    }

    #[test]
    fn two_factor_lower_bounds_every_feasible_p() {
        let limits = OracleLimitConfig::default();
        for seed in 0..5 {
            let inst = generate_euclidean(9, seed, 100.0).unwrap();
            let f = brute_two_factor(&inst, &limits).unwrap();
            for p in 1..=3 {
                let h = brute_hpmp(&inst, p, &limits).unwrap();
                assert!(f.weight() <= h.weight() + 1e-9);
            }
        }
    }

    #[test]
    fn max_l_small_values() {
        assert_eq!(max_l_exhaustive(5).unwrap(), 2);
        assert_eq!(max_l_exhaustive(10).unwrap(), 4);
        assert_eq!(max_l_exhaustive(12).unwrap(), 3);
        assert_eq!(max_l_exhaustive(3).unwrap(), 0);
        assert!(max_l_exhaustive(2).is_err());
        assert!(max_l_exhaustive(201).is_err());
    }
}
