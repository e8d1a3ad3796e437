use crate::error::{Error, Result};
use crate::instance::Instance;

/// Vertex-disjoint cycles, each of length at least 3, covering every vertex
/// of an instance.
///
/// Cycles are stored canonically: each starts at its smallest vertex and
/// continues toward the smaller of that vertex's two neighbours; cycles are
/// sorted by their first vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleCover {
    cycles: Vec<Vec<usize>>,
    weight: f64,
}

impl CycleCover {
    pub fn new(inst: &Instance, cycles: Vec<Vec<usize>>) -> Result<Self> {
        let n = inst.n();
        let mut seen = vec![false; n];
        for cycle in &cycles {
            if cycle.len() < 3 {
                return Err(Error::Internal(format!(
                    "cycle {cycle:?} has fewer than 3 vertices"
                )));
            }
            for &v in cycle {
                if v >= n || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::Internal(format!(
                        "vertex {v} is out of range or covered twice"
                    )));
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::Internal(format!("vertex {v} is not covered")));
        }
        let mut cycles: Vec<Vec<usize>> = cycles.into_iter().map(canonical_cycle).collect();
        cycles.sort_unstable_by_key(|c| c[0]);
        let weight = cycles.iter().map(|c| inst.cycle_weight(c)).sum();
        Ok(CycleCover { cycles, weight })
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Number of cycles.
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }

    pub fn into_cycles(self) -> Vec<Vec<usize>> {
        self.cycles
    }
}

/// Rotates `cycle` to start at its minimum and orients it toward the smaller
/// neighbour of that minimum.
pub fn canonical_cycle(mut cycle: Vec<usize>) -> Vec<usize> {
    if cycle.is_empty() {
        return cycle;
    }
    let start = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap();
    cycle.rotate_left(start);
    if cycle.len() > 2 && cycle[cycle.len() - 1] < cycle[1] {
        cycle[1..].reverse();
    }
    cycle
}

/// A solution of the Hamiltonian p-median problem: exactly `p` cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct HpmpSolution {
    cover: CycleCover,
}

impl HpmpSolution {
    pub fn new(inst: &Instance, cycles: Vec<Vec<usize>>, p: usize) -> Result<Self> {
        Self::from_cover(CycleCover::new(inst, cycles)?, p)
    }

    pub fn from_cover(cover: CycleCover, p: usize) -> Result<Self> {
        if cover.len() != p {
            return Err(Error::Internal(format!(
                "solution has {} cycles, expected {p}",
                cover.len()
            )));
        }
        Ok(HpmpSolution { cover })
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        self.cover.cycles()
    }

    pub fn weight(&self) -> f64 {
        self.cover.weight()
    }

    pub fn p(&self) -> usize {
        self.cover.len()
    }

    pub fn cover(&self) -> &CycleCover {
        &self.cover
    }
}
