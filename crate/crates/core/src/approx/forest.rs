use crate::error::{Error, Result};
use crate::instance::Instance;

/// Minimum spanning tree of the complete graph with its `p - 1` heaviest
/// edges removed: `n - p` edges spanning `p` components, some possibly
/// singletons. Edges are returned as `(u, v, w)` with `u < v`, sorted by
/// ascending weight.
pub fn mst_forest(inst: &Instance, p: usize) -> Result<Vec<(usize, usize, f64)>> {
    let n = inst.n();
    if p == 0 || p > n {
        return Err(Error::InvalidInstance(format!(
            "forest needs 1 ≤ p ≤ n = {n}, got p = {p}"
        )));
    }
    let mut tree = prim(inst);
    tree.sort_by(|a, b| a.2.total_cmp(&b.2).then((a.0, a.1).cmp(&(b.0, b.1))));
    tree.truncate(n - p);
    Ok(tree)
}

/// Dense Prim, O(n^2). Ties go to the lowest vertex id.
fn prim(inst: &Instance) -> Vec<(usize, usize, f64)> {
    let n = inst.n();
    let mut in_tree = vec![false; n];
    let mut dist = vec![f64::INFINITY; n];
    let mut link = vec![0usize; n];
    let mut edges = Vec::with_capacity(n - 1);
    dist[0] = 0.0;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)))
            .expect("vertices remain");
        in_tree[u] = true;
        if u != 0 {
            let v = link[u];
            edges.push((u.min(v), u.max(v), dist[u]));
        }
        let row = inst.row(u);
        for v in 0..n {
            if !in_tree[v] && row[v] < dist[v] {
                dist[v] = row[v];
                link[v] = u;
            }
        }
    }
    edges
}
