//! Counting arguments behind the split branch: how many vertices of a
//! 2-factor are left over when its cycles are cut into pieces of three, and
//! the largest `p` for which splitting always succeeds.

use crate::cover::CycleCover;
use crate::error::{Error, Result};

/// `ceil((n - 2 * ceil(n / 5)) / 3)`: the largest `p` for which any 2-factor
/// on `n` vertices can be split into `p` components of at least 3 vertices.
pub fn feasibility_threshold(n: usize) -> usize {
    let reserved = 2 * n.div_ceil(5);
    n.saturating_sub(reserved).div_ceil(3)
}

/// Sum over cycles of `len mod 3`.
pub fn l_value(cover: &CycleCover) -> usize {
    l_value_of_sizes(&cover.sizes())
}

pub fn l_value_of_sizes(sizes: &[usize]) -> usize {
    sizes.iter().map(|s| s % 3).sum()
}

/// A partition of `n` into parts of size at least 3 maximising
/// `sum(part mod 3)`: `floor(n/5) - 1` fives, with the remaining 5 to 9
/// vertices arranged as `[5]`, `[6]`, `[7]`, `[5, 3]` or `[5, 4]`.
/// Returns the parts and their `l` value.
pub fn max_l_partition(n: usize) -> Result<(Vec<usize>, usize)> {
    if n < 3 {
        return Err(Error::InvalidInstance(format!("n must be ≥ 3, got {n}")));
    }
    let sizes = if n < 5 {
        vec![n]
    } else {
        let fives = n / 5 - 1;
        let mut sizes = vec![5; fives];
        match n - 5 * fives {
            5 => sizes.push(5),
            6 => sizes.push(6),
            7 => sizes.push(7),
            8 => sizes.extend([5, 3]),
            9 => sizes.extend([5, 4]),
            r => unreachable!("remainder {r} outside 5..=9"),
        }
        sizes
    };
    let l = l_value_of_sizes(&sizes);
    debug_assert!(l <= 2 * n.div_ceil(5));
    Ok((sizes, l))
}
