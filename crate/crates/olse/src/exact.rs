//! Ground-truth solvers: a capped brute-force oracle for all four variants
//! and the LCS-style dynamic program for the edgeless-G case.

use crate::model::{Embedding, Instance, Solution, Variant};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("instance too large for the oracle: {n_g} x {n_h} exceeds cap {cap}")]
    SizeGuard { n_g: usize, n_h: usize, cap: usize },
    #[error("dynamic program requires an edgeless G; found edge ({0}, {1})", .edge.0, .edge.1)]
    GHasEdges { edge: (usize, usize) },
}

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Largest n_g / n_h the oracle accepts.
    pub max_vertices: usize,
    /// Branch-and-bound pruning; exhaustive either way.
    pub prune: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_vertices: 20, prune: true }
    }
}

/// Exhaustive maximum-embedding search, intended for small instances.
pub fn solve_oracle(inst: &Instance, variant: Variant) -> Result<Solution, ExactError> {
    solve_oracle_with(inst, variant, OracleConfig::default())
}

pub fn solve_oracle_with(
    inst: &Instance,
    variant: Variant,
    cfg: OracleConfig,
) -> Result<Solution, ExactError> {
    if inst.n_g > cfg.max_vertices || inst.n_h > cfg.max_vertices {
        return Err(ExactError::SizeGuard {
            n_g: inst.n_g,
            n_h: inst.n_h,
            cap: cfg.max_vertices,
        });
    }
    let mut search = Search {
        inst,
        variant,
        prune: cfg.prune,
        used_h: vec![false; inst.n_h],
        current: Vec::new(),
        best: Vec::new(),
    };
    search.run(0);
    Ok(Solution::new(Embedding::new(search.best), "oracle"))
}

struct Search<'a> {
    inst: &'a Instance,
    variant: Variant,
    prune: bool,
    used_h: Vec<bool>,
    current: Vec<(usize, usize)>,
    best: Vec<(usize, usize)>,
}

impl Search<'_> {
    fn run(&mut self, g: usize) {
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if g == self.inst.n_g {
            return;
        }
        if self.prune && self.current.len() + (self.inst.n_g - g) <= self.best.len() {
            return;
        }
        // Map g to some list entry, pairs explored in ascending (g, h) order.
        let list = self.inst.list(g).to_vec();
        for h in list {
            if self.used_h[h] || !self.compatible(g, h) {
                continue;
            }
            self.used_h[h] = true;
            self.current.push((g, h));
            self.run(g + 1);
            self.current.pop();
            self.used_h[h] = false;
        }
        // Or leave g out of the subgraph.
        self.run(g + 1);
    }

    fn compatible(&self, g: usize, h: usize) -> bool {
        for &(g2, h2) in &self.current {
            if self.variant.ordered() && h2 >= h {
                return false;
            }
            if self.inst.has_edge_g(g2, g) && !self.inst.has_edge_h(h2, h) {
                return false;
            }
            if self.variant.induced() && self.inst.has_edge_h(h2, h) && !self.inst.has_edge_g(g2, g)
            {
                return false;
            }
        }
        true
    }
}

/// The table of Proposition-style LCS dynamic programming:
/// `t[i][j]` is the largest embeddable subset of the first `i` G-vertices
/// into the first `j` H-vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpTable {
    pub t: Vec<Vec<u32>>,
}

impl DpTable {
    pub fn value(&self) -> usize {
        *self.t.last().and_then(|r| r.last()).unwrap_or(&0) as usize
    }

    /// Re-checks the recurrence cell by cell.
    pub fn recurrence_holds(&self, inst: &Instance) -> bool {
        let t = &self.t;
        for i in 0..=inst.n_g {
            for j in 0..=inst.n_h {
                let expect = if i == 0 || j == 0 {
                    0
                } else if inst.list(i - 1).binary_search(&(j - 1)).is_ok() {
                    1 + t[i - 1][j - 1]
                } else {
                    t[i][j - 1].max(t[i - 1][j])
                };
                if t[i][j] != expect {
                    return false;
                }
            }
        }
        true
    }
}

/// Optimal OLSE solver for instances with an edgeless G (H-edges play no
/// role in that case). Runs in O(n_g * n_h).
pub fn solve_dp_no_edges(inst: &Instance) -> Result<(Solution, DpTable), ExactError> {
    if let Some(&edge) = inst.edges_g.first() {
        return Err(ExactError::GHasEdges { edge });
    }
    let (n, m) = (inst.n_g, inst.n_h);
    let mut t = vec![vec![0u32; m + 1]; n + 1];
    for i in 1..=n {
        let list = inst.list(i - 1);
        let mut li = 0;
        for j in 1..=m {
            let member = li < list.len() && list[li] == j - 1;
            if member {
                li += 1;
            }
            t[i][j] = if member {
                1 + t[i - 1][j - 1]
            } else {
                t[i][j - 1].max(t[i - 1][j])
            };
        }
    }
    // Reconstruction: prefer the match branch on ties, then prefer moving
    // along the H axis.
    let mut pairs = Vec::new();
    let (mut i, mut j) = (n, m);
    while i > 0 && j > 0 && t[i][j] > 0 {
        let member = inst.list(i - 1).binary_search(&(j - 1)).is_ok();
        if member && t[i][j] == 1 + t[i - 1][j - 1] {
            pairs.push((i - 1, j - 1));
            i -= 1;
            j -= 1;
        } else if t[i][j] == t[i][j - 1] {
            j -= 1;
        } else {
            i -= 1;
        }
    }
    pairs.reverse();
    let table = DpTable { t };
    debug_assert_eq!(pairs.len(), table.value());
    Ok((Solution::new(Embedding::new(pairs), "dp"), table))
}
