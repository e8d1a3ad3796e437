//! The three-branch approximation for the Hamiltonian p-median problem.
//!
//! A minimum-weight 2-factor `F` with `q` cycles is a lower bound on the
//! optimum. If `q = p` it is optimal. If `q > p`, cycles are joined with
//! doubled edges of an MST forest with `p` components (ratio 3). If `q < p`,
//! components of at least six vertices are cut into a 3-vertex path and the
//! rest, then every edge is doubled (ratio 2). In both cases each component
//! of the resulting even multigraph is shortcut along an Eulerian circuit.

mod euler;
mod forest;
mod lemma;
mod multigraph;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

pub use euler::{euler_tour, eulerian_shortcut};
pub use forest::mst_forest;
pub use lemma::{feasibility_threshold, l_value, l_value_of_sizes, max_l_partition};
pub use multigraph::{
    merge_branch, split_branch, split_components, EdgeOrigin, MultiEdge, Piece, SplitOutcome,
    WorkingMultigraph,
};

use crate::cover::HpmpSolution;
use crate::error::{Error, Result};
use crate::instance::{check_triangle_inequality, Instance};
use crate::two_factor::min_weight_two_factor;

/// Slack allowed when checking a solution against its guaranteed ratio.
pub const RATIO_SLACK: f64 = 1e-6;

/// Which branch produced the solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// `q = p`: the 2-factor itself.
    Equal,
    /// `q > p`: cycles joined by forest edges.
    Merge,
    /// `q < p`: cycles split into paths.
    Split,
}

impl Branch {
    pub fn for_counts(q: usize, p: usize) -> Branch {
        match q.cmp(&p) {
            std::cmp::Ordering::Equal => Branch::Equal,
            std::cmp::Ordering::Greater => Branch::Merge,
            std::cmp::Ordering::Less => Branch::Split,
        }
    }

    pub fn guaranteed_ratio(self) -> u32 {
        match self {
            Branch::Equal => 1,
            Branch::Merge => 3,
            Branch::Split => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Equal => "equal",
            Branch::Merge => "merge",
            Branch::Split => "split",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "equal" => Ok(Branch::Equal),
            "merge" => Ok(Branch::Merge),
            "split" => Ok(Branch::Split),
            other => Err(format!("unknown branch {other:?}")),
        }
    }
}

/// Summary of one solve.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub p: usize,
    /// Weight of the minimum 2-factor.
    pub lb: f64,
    /// Weight of the returned solution.
    pub ub: f64,
    /// `ub / lb` (1 when both are zero).
    pub ratio: f64,
    /// Cycles in the minimum 2-factor.
    pub q: usize,
    pub branch: Branch,
    pub guaranteed_ratio: u32,
    /// Whether the instance passed the triangle-inequality check. The ratio
    /// guarantee is only enforced on metric instances.
    pub metric: bool,
    pub time_ms_two_factor: f64,
    pub time_ms_branch: f64,
    pub time_ms_total: f64,
}

fn ratio(ub: f64, lb: f64) -> f64 {
    if lb > 0.0 {
        ub / lb
    } else if ub == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

/// Runs the approximation on `inst` with `p` cycles.
pub fn solve(inst: &Instance, p: usize) -> Result<(HpmpSolution, RunReport)> {
    let n = inst.n();
    if p == 0 || 3 * p > n {
        return Err(Error::Infeasible { n, p, max: n / 3 });
    }
    let metric = check_triangle_inequality(inst, 1e-9);
    if !metric {
        log::warn!(
            "instance {} violates the triangle inequality; the ratio guarantee does not apply",
            inst.name()
        );
    }

    let start = Instant::now();
    let cover = min_weight_two_factor(inst)?;
    let two_factor_done = Instant::now();
    let q = cover.len();
    let lb = cover.weight();
    let branch = Branch::for_counts(q, p);

    let solution = match branch {
        Branch::Equal => HpmpSolution::from_cover(cover, p)?,
        Branch::Merge => {
            let forest = mst_forest(inst, p)?;
            let mg = merge_branch(&cover, &forest, p, inst)?;
            eulerian_shortcut(&mg, inst)?
        }
        Branch::Split => {
            let mg = split_branch(inst, &cover, p)?;
            eulerian_shortcut(&mg, inst)?
        }
    };
    let end = Instant::now();

    if solution.p() != p {
        return Err(Error::Internal(format!(
            "solution has {} cycles, expected {p}",
            solution.p()
        )));
    }
    let ub = solution.weight();
    let guaranteed_ratio = branch.guaranteed_ratio();
    if metric && ub > f64::from(guaranteed_ratio) * lb + RATIO_SLACK {
        return Err(Error::Internal(format!(
            "{branch} branch returned {ub}, above {guaranteed_ratio} × {lb}"
        )));
    }
    let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
    let report = RunReport {
        p,
        lb,
        ub,
        ratio: ratio(ub, lb),
        q,
        branch,
        guaranteed_ratio,
        metric,
        time_ms_two_factor: ms(two_factor_done - start),
        time_ms_branch: ms(end - two_factor_done),
        time_ms_total: ms(end - start),
    };
    Ok((solution, report))
}
