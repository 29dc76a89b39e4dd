//! Constant-ratio approximation for opt-OLSE (ratio Δ_G + 1) and opt-OLISE
//! (ratio (Δ_G + 1)(Δ_H + 1)): edge-stripped DP followed by greedy
//! independent-set filtering.

use crate::exact::{solve_dp_no_edges, ExactError};
use crate::model::{Embedding, Instance, Solution};
use std::collections::BTreeSet;

/// Greedy independent set over `vertices`: take the smallest remaining
/// vertex, drop it and its neighbors, repeat. Guarantees
/// |I| >= |vertices| / (Δ + 1) on the induced subgraph.
pub fn greedy_independent(vertices: &[usize], edges: &[(usize, usize)]) -> Vec<usize> {
    let mut remaining: BTreeSet<usize> = vertices.iter().copied().collect();
    let mut chosen = Vec::new();
    while let Some(&u) = remaining.iter().next() {
        chosen.push(u);
        remaining.remove(&u);
        for &(a, b) in edges {
            if a == u {
                remaining.remove(&b);
            } else if b == u {
                remaining.remove(&a);
            }
        }
    }
    chosen
}

fn stripped(inst: &Instance) -> Instance {
    Instance::edgeless(inst.n_g, inst.n_h, inst.lists.clone())
}

/// (Δ_G + 1)-approximation for opt-OLSE.
pub fn approx_olse(inst: &Instance) -> Result<Solution, ExactError> {
    let (dp_sol, _) = solve_dp_no_edges(&stripped(inst))?;
    let picked: Vec<usize> = dp_sol.embedding.pairs().iter().map(|p| p.0).collect();
    let independent = greedy_independent(&picked, &inst.edges_g);
    let pairs: Vec<(usize, usize)> = dp_sol
        .embedding
        .pairs()
        .iter()
        .filter(|(g, _)| independent.contains(g))
        .copied()
        .collect();
    Ok(Solution::new(Embedding::new(pairs), "approx-olse"))
}

/// (Δ_G + 1)(Δ_H + 1)-approximation for opt-OLISE: a second greedy pass on
/// the image clears H-edges between mapped vertices.
pub fn approx_olise(inst: &Instance) -> Result<Solution, ExactError> {
    let first = approx_olse(inst)?;
    let image: Vec<usize> = first.embedding.pairs().iter().map(|p| p.1).collect();
    let image_independent = greedy_independent(&image, &inst.edges_h);
    let pairs: Vec<(usize, usize)> = first
        .embedding
        .pairs()
        .iter()
        .filter(|(_, h)| image_independent.contains(h))
        .copied()
        .collect();
    Ok(Solution::new(Embedding::new(pairs), "approx-olise"))
}
