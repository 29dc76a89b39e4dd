//! Vertex-cover-parameterized exact OLSE solver: compute a minimum vertex
//! cover C of G, enumerate which part of C the solution uses and where it
//! maps, prune the remaining lists, and finish each interval between
//! anchor images with the edgeless DP.

use crate::exact::solve_dp_no_edges;
use crate::model::{embedding_is_valid, Embedding, Instance, Solution, Variant};

/// A guessed intersection of the solution with the vertex cover, together
/// with its images: s_c ascending, phi_c[i] = image of s_c[i].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverGuess {
    pub s_c: Vec<usize>,
    pub phi_c: Vec<usize>,
}

impl CoverGuess {
    /// Checks the guess against the instance: images ascending (order and
    /// injectivity), list membership, and the subgraph edge condition
    /// inside s_c.
    pub fn is_valid(&self, inst: &Instance) -> bool {
        if self.s_c.len() != self.phi_c.len() {
            return false;
        }
        if self.s_c.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        if self.phi_c.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        for (&u, &v) in self.s_c.iter().zip(&self.phi_c) {
            if inst.list(u).binary_search(&v).is_err() {
                return false;
            }
        }
        for i in 0..self.s_c.len() {
            for j in i + 1..self.s_c.len() {
                if inst.has_edge_g(self.s_c[i], self.s_c[j])
                    && !inst.has_edge_h(self.phi_c[i], self.phi_c[j])
                {
                    return false;
                }
            }
        }
        true
    }
}

/// Index ranges (half-open) over the remaining G-vertices and over H,
/// one pair per gap around the anchors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPartition {
    pub g_intervals: Vec<(usize, usize)>,
    pub h_intervals: Vec<(usize, usize)>,
}

/// Splits V(G) \ s_c by position relative to the anchors, and V(H) into
/// the open ranges strictly between consecutive anchor images (plus the
/// two outer ranges). Excluding the images keeps injectivity for free.
pub fn interval_partition(inst: &Instance, guess: &CoverGuess) -> IntervalPartition {
    let r = guess.s_c.len();
    let mut g_intervals = Vec::with_capacity(r + 1);
    let mut h_intervals = Vec::with_capacity(r + 1);
    for j in 0..=r {
        let g_lo = if j == 0 { 0 } else { guess.s_c[j - 1] + 1 };
        let g_hi = if j == r { inst.n_g } else { guess.s_c[j] };
        g_intervals.push((g_lo, g_hi));
        let h_lo = if j == 0 { 0 } else { guess.phi_c[j - 1] + 1 };
        let h_hi = if j == r { inst.n_h } else { guess.phi_c[j] };
        h_intervals.push((h_lo, h_hi));
    }
    IntervalPartition { g_intervals, h_intervals }
}

/// Minimum vertex cover by branching on an uncovered edge (take either
/// endpoint). Exact; exponential only in the cover size.
pub fn min_vertex_cover(edges_g: &[(usize, usize)], n_g: usize) -> Vec<usize> {
    fn branch(edges: &[(usize, usize)], covered: &mut Vec<bool>, best: &mut Option<Vec<usize>>, size: usize) {
        if let Some(b) = best {
            if size >= b.len() {
                return;
            }
        }
        match edges.iter().find(|&&(a, b)| !covered[a] && !covered[b]) {
            None => {
                let cover: Vec<usize> =
                    (0..covered.len()).filter(|&v| covered[v]).collect();
                *best = Some(cover);
            }
            Some(&(a, b)) => {
                covered[a] = true;
                branch(edges, covered, best, size + 1);
                covered[a] = false;
                covered[b] = true;
                branch(edges, covered, best, size + 1);
                covered[b] = false;
            }
        }
    }
    let mut covered = vec![false; n_g];
    let mut best = None;
    branch(edges_g, &mut covered, &mut best, 0);
    best.unwrap_or_default()
}

/// Removes candidates incompatible with the guess: (1) u is G-adjacent to
/// an anchor but v is not H-adjacent to its image, (2) v falls on the
/// wrong side of an anchor's image relative to u's position, and every
/// anchor image itself.
pub fn prune_lists(inst: &Instance, guess: &CoverGuess) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(inst.n_g);
    for u in 0..inst.n_g {
        if guess.s_c.binary_search(&u).is_ok() {
            out.push(Vec::new());
            continue;
        }
        let kept = inst
            .list(u)
            .iter()
            .copied()
            .filter(|&v| {
                for (&a, &img) in guess.s_c.iter().zip(&guess.phi_c) {
                    if v == img {
                        return false;
                    }
                    if inst.has_edge_g(u, a) && !inst.has_edge_h(v, img) {
                        return false;
                    }
                    if (u < a) != (v < img) {
                        return false;
                    }
                }
                true
            })
            .collect();
        out.push(kept);
    }
    out
}

/// Diagnostics from a [`solve_vc_fpt`] run.
#[derive(Debug, Clone)]
pub struct VcOutcome {
    pub accepted: bool,
    pub witness: Option<Solution>,
    pub cover_size: usize,
    /// Number of (S_C, φ_C) guesses evaluated; bounded by (1 + Δ_L)^ν.
    pub guesses: usize,
}

/// Decides whether an OLSE solution of size ≥ k exists, exactly.
///
/// Enumerates subsets of a minimum vertex cover by ascending size then
/// lexicographically, mappings lexicographically over list positions; the
/// first accepting guess supplies the witness.
pub fn solve_vc_fpt(inst: &Instance, k: usize) -> VcOutcome {
    let cover = min_vertex_cover(&inst.edges_g, inst.n_g);
    let nu = cover.len();
    if k == 0 {
        return VcOutcome {
            accepted: true,
            witness: Some(Solution::new(Embedding::empty(), "vc-fpt")),
            cover_size: nu,
            guesses: 0,
        };
    }
    let mut guesses = 0usize;
    for size in 0..=nu {
        let mut subset_idx: Vec<usize> = (0..size).collect();
        loop {
            let s_c: Vec<usize> = subset_idx.iter().map(|&i| cover[i]).collect();
            if let Some(out) = try_subset(inst, &cover, &s_c, k, &mut guesses) {
                return VcOutcome {
                    accepted: true,
                    witness: Some(out),
                    cover_size: nu,
                    guesses,
                };
            }
            if !next_combination(&mut subset_idx, nu) {
                break;
            }
        }
    }
    VcOutcome { accepted: false, witness: None, cover_size: nu, guesses }
}

/// Advances `idx` to the next k-combination of 0..n; false when exhausted.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - (k - i) {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn try_subset(
    inst: &Instance,
    cover: &[usize],
    s_c: &[usize],
    k: usize,
    guesses: &mut usize,
) -> Option<Solution> {
    // Enumerate φ_C lexicographically over list positions.
    let r = s_c.len();
    let mut choice = vec![0usize; r];
    'outer: loop {
        let phi_c: Vec<usize> = s_c
            .iter()
            .zip(&choice)
            .map(|(&u, &c)| inst.list(u).get(c).copied())
            .collect::<Option<Vec<usize>>>()?;
        *guesses += 1;
        let guess = CoverGuess { s_c: s_c.to_vec(), phi_c };
        if guess.is_valid(inst) {
            if let Some(sol) = evaluate_guess(inst, cover, &guess, k) {
                return Some(sol);
            }
        }
        // Odometer increment.
        for i in (0..r).rev() {
            choice[i] += 1;
            if choice[i] < inst.list(s_c[i]).len() {
                continue 'outer;
            }
            choice[i] = 0;
        }
        return None;
    }
}

fn evaluate_guess(
    inst: &Instance,
    cover: &[usize],
    guess: &CoverGuess,
    k: usize,
) -> Option<Solution> {
    let mut pruned = prune_lists(inst, guess);
    // Cover vertices outside s_c are outside the guessed solution: the
    // interval DP must not pick them.
    for &u in cover {
        pruned[u].clear();
    }
    let parts = interval_partition(inst, guess);
    let mut pairs: Vec<(usize, usize)> =
        guess.s_c.iter().copied().zip(guess.phi_c.iter().copied()).collect();
    for (&(g_lo, g_hi), &(h_lo, h_hi)) in parts.g_intervals.iter().zip(&parts.h_intervals) {
        let members: Vec<usize> = (g_lo..g_hi).collect();
        // Selectable interval vertices lie off the cover and hence form
        // an independent set: the edgeless DP applies.
        debug_assert!(!members.iter().any(|&u| {
            !pruned[u].is_empty()
                && members
                    .iter()
                    .any(|&w| w > u && !pruned[w].is_empty() && inst.has_edge_g(u, w))
        }));
        let sub_lists: Vec<Vec<usize>> = members
            .iter()
            .map(|&u| {
                pruned[u]
                    .iter()
                    .filter(|&&v| v >= h_lo && v < h_hi)
                    .map(|&v| v - h_lo)
                    .collect()
            })
            .collect();
        let sub = Instance::edgeless(members.len(), h_hi.saturating_sub(h_lo), sub_lists);
        let (sol, _) = solve_dp_no_edges(&sub).expect("interval sub-instance is edgeless");
        pairs.extend(
            sol.embedding
                .pairs()
                .iter()
                .map(|&(i, j)| (members[i], j + h_lo)),
        );
    }
    if pairs.len() < k {
        return None;
    }
    let sol = Solution::new(Embedding::new(pairs), "vc-fpt");
    debug_assert!(embedding_is_valid(inst, &sol.embedding, Variant::Olse));
    Some(sol)
}
