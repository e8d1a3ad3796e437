use super::multigraph::WorkingMultigraph;
use crate::cover::HpmpSolution;
use crate::error::{Error, Result};
use crate::instance::Instance;

/// Eulerian circuit of the component containing `start`, as a closed vertex
/// walk beginning and ending at `start`. Neighbours are tried in increasing
/// vertex order.
pub fn euler_tour(mg: &WorkingMultigraph, start: usize) -> Vec<usize> {
    let n = mg.n();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut copies = 0;
    for e in mg.edges() {
        for _ in 0..e.multiplicity {
            adj[e.u].push((e.v, copies));
            adj[e.v].push((e.u, copies));
            copies += 1;
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut used = vec![false; copies];
    let mut cursor = vec![0usize; n];
    let mut stack = vec![start];
    let mut circuit = Vec::new();
    while let Some(&v) = stack.last() {
        let list = &adj[v];
        while cursor[v] < list.len() && used[list[cursor[v]].1] {
            cursor[v] += 1;
        }
        if let Some(&(w, id)) = list.get(cursor[v]) {
            used[id] = true;
            stack.push(w);
        } else {
            circuit.push(v);
            stack.pop();
        }
    }
    circuit.reverse();
    circuit
}

/// Turns every component into one cycle by walking an Eulerian circuit from
/// its smallest vertex and skipping vertices already visited.
pub fn eulerian_shortcut(mg: &WorkingMultigraph, inst: &Instance) -> Result<HpmpSolution> {
    let p = mg.component_count();
    mg.check_ready(p)?;
    let mut cycles = Vec::with_capacity(p);
    let mut seen = vec![false; mg.n()];
    for component in mg.components() {
        let tour = euler_tour(mg, component[0]);
        let cycle: Vec<usize> = tour
            .into_iter()
            .filter(|&v| !std::mem::replace(&mut seen[v], true))
            .collect();
        if cycle.len() != component.len() {
            return Err(Error::Internal(format!(
                "Euler tour from {} missed part of its component",
                component[0]
            )));
        }
        cycles.push(cycle);
    }
    HpmpSolution::new(inst, cycles, p)
}
