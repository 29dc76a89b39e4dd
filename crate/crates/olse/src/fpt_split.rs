//! FPT pipeline for OLSE with bounded Δ_G and Δ_L: vertex splitting,
//! the Simplify pass, conflict-graph construction, permutation-graph
//! maximum independent set, and random-separation decision procedures.

use crate::exact::solve_dp_no_edges;
use crate::model::{degree_stats, embedding_is_valid, Embedding, Instance, Solution, Variant};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FptError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

/// One split vertex pair: a list edge of the split instance, identified by
/// its endpoint positions in the split orders, with provenance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub g_pos: usize,
    pub h_pos: usize,
    pub origin_g: usize,
    pub origin_h: usize,
}

/// Result of the splitting operation: every split vertex carries exactly
/// one list edge, so segments stand in for split vertices on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitInstance {
    pub segments: Vec<Segment>,
    /// Segment pairs whose G-side split vertices are adjacent.
    pub split_edges_g: Vec<(usize, usize)>,
    /// Segment pairs whose H-side split vertices are adjacent.
    pub split_edges_h: Vec<(usize, usize)>,
}

/// Conflict graph: segments (vertices of the permutation graph) plus the
/// conflict edges E_c left over after Simplify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    pub segments: Vec<Segment>,
    pub conflict_edges: Vec<(usize, usize)>,
}

impl ConflictGraph {
    pub fn conflict_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.segments.len()];
        for &(a, b) in &self.conflict_edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn max_conflict_degree(&self) -> usize {
        self.conflict_degrees().into_iter().max().unwrap_or(0)
    }
}

/// Splits every vertex of G and H into one copy per incident list edge,
/// wiring the copies anti-parallel so that at most one copy per original
/// vertex fits any order-preserving solution. Vertices with no list edge
/// disappear.
pub fn split(inst: &Instance) -> SplitInstance {
    // Node ids: originals keep their index, copies get fresh ids. Orders
    // are id sequences; list edges reference ids on both sides.
    let mut g_origin: Vec<usize> = (0..inst.n_g).collect();
    let mut h_origin: Vec<usize> = (0..inst.n_h).collect();
    let mut g_order: Vec<usize> = (0..inst.n_g).collect();
    let mut h_order: Vec<usize> = (0..inst.n_h).collect();
    let mut l_edges: Vec<(usize, usize)> = Vec::new();
    for (u, l) in inst.lists.iter().enumerate() {
        for &v in l {
            l_edges.push((u, v));
        }
    }

    // Split the G side. H is untouched here, so an H id is its position.
    for u in 0..inst.n_g {
        let pos = g_order.iter().position(|&x| x == u).expect("original still present");
        let mut incident: Vec<usize> =
            (0..l_edges.len()).filter(|&e| l_edges[e].0 == u).collect();
        incident.sort_by_key(|&e| l_edges[e].1);
        let r = incident.len();
        if r == 0 {
            g_order.remove(pos);
            continue;
        }
        let fresh: Vec<usize> = (0..r).map(|s| g_origin.len() + s).collect();
        g_origin.extend(std::iter::repeat(u).take(r));
        g_order.splice(pos..=pos, fresh.iter().copied());
        // Copy s pairs with the (r-1-s)-th list partner: anti-parallel.
        for (t, &e) in incident.iter().enumerate() {
            l_edges[e].0 = fresh[r - 1 - t];
        }
    }

    // Split the H side; partners are split G nodes ordered by g_order.
    let g_pos_of: HashMap<usize, usize> =
        g_order.iter().enumerate().map(|(p, &id)| (id, p)).collect();
    for v in 0..inst.n_h {
        let pos = h_order.iter().position(|&x| x == v).expect("original still present");
        let mut incident: Vec<usize> =
            (0..l_edges.len()).filter(|&e| l_edges[e].1 == v).collect();
        incident.sort_by_key(|&e| g_pos_of[&l_edges[e].0]);
        let r = incident.len();
        if r == 0 {
            h_order.remove(pos);
            continue;
        }
        let fresh: Vec<usize> = (0..r).map(|s| h_origin.len() + s).collect();
        h_origin.extend(std::iter::repeat(v).take(r));
        h_order.splice(pos..=pos, fresh.iter().copied());
        for (t, &e) in incident.iter().enumerate() {
            l_edges[e].1 = fresh[r - 1 - t];
        }
    }

    let h_pos_of: HashMap<usize, usize> =
        h_order.iter().enumerate().map(|(p, &id)| (id, p)).collect();
    let mut segments: Vec<Segment> = l_edges
        .iter()
        .map(|&(gid, hid)| Segment {
            g_pos: g_pos_of[&gid],
            h_pos: h_pos_of[&hid],
            origin_g: g_origin[gid],
            origin_h: h_origin[hid],
        })
        .collect();
    segments.sort_by_key(|s| s.g_pos);

    // Copies inherit every edge of their original; copies of the same
    // original are not adjacent.
    let mut split_edges_g = Vec::new();
    let mut split_edges_h = Vec::new();
    for i in 0..segments.len() {
        for j in i + 1..segments.len() {
            if inst.has_edge_g(segments[i].origin_g, segments[j].origin_g) {
                split_edges_g.push((i, j));
            }
            if inst.has_edge_h(segments[i].origin_h, segments[j].origin_h) {
                split_edges_h.push((i, j));
            }
        }
    }
    SplitInstance { segments, split_edges_g, split_edges_h }
}

/// Simplify: H-edges with no matching G-edge are dropped; matched
/// G-edge/H-edge pairs are both dropped. H ends up edgeless and the
/// surviving G-edges are the future conflict edges.
pub fn simplify(s: &SplitInstance) -> SplitInstance {
    let kept: Vec<(usize, usize)> = s
        .split_edges_g
        .iter()
        .filter(|e| !s.split_edges_h.contains(e))
        .copied()
        .collect();
    SplitInstance {
        segments: s.segments.clone(),
        split_edges_g: kept,
        split_edges_h: Vec::new(),
    }
}

pub fn build_conflict_graph(s: &SplitInstance) -> Result<ConflictGraph, FptError> {
    if !s.split_edges_h.is_empty() {
        return Err(FptError::Precondition("instance not simplified (H-edges remain)".into()));
    }
    Ok(ConflictGraph {
        segments: s.segments.clone(),
        conflict_edges: s.split_edges_g.clone(),
    })
}

pub fn conflict_graph(inst: &Instance) -> ConflictGraph {
    build_conflict_graph(&simplify(&split(inst))).expect("simplify leaves H edgeless")
}

/// Maximum pairwise non-crossing subset of segments, i.e. a maximum
/// independent set in the permutation graph: longest strictly increasing
/// subsequence of h_pos after sorting by g_pos. Returns indices into the
/// input slice.
pub fn permutation_mis(segments: &[(usize, usize)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..segments.len()).collect();
    order.sort_by_key(|&i| segments[i].0);
    // tails[len-1] = index (into order) ending the best subsequence of
    // that length with smallest final h_pos.
    let mut tails: Vec<usize> = Vec::new();
    let mut parent: Vec<Option<usize>> = vec![None; segments.len()];
    for &idx in &order {
        let h = segments[idx].1;
        let pos = tails.partition_point(|&t| segments[t].1 < h);
        if pos > 0 {
            parent[idx] = Some(tails[pos - 1]);
        }
        if pos == tails.len() {
            tails.push(idx);
        } else {
            tails[pos] = idx;
        }
    }
    let mut result = Vec::new();
    let mut cur = tails.last().copied();
    while let Some(i) = cur {
        result.push(i);
        cur = parent[i];
    }
    result.reverse();
    result
}

/// Reproducible budget for the randomized separation solvers.
#[derive(Debug, Clone, Copy)]
pub struct TrialBudget {
    pub seed: u64,
    /// One-sided error bound for "no" answers.
    pub delta: f64,
    /// Hard cap on random trials; `None` uses the computed count.
    pub max_trials: Option<usize>,
    /// Enumerate all colorings exhaustively when at most this many
    /// vertices need coloring (deterministic answers at desk scale).
    pub exhaustive_threshold: usize,
}

impl Default for TrialBudget {
    fn default() -> Self {
        TrialBudget { seed: 0, delta: 0.01, max_trials: None, exhaustive_threshold: 20 }
    }
}

fn trial_count(delta_exp: usize, k: usize, budget: &TrialBudget) -> usize {
    let exponent = ((delta_exp + 1) * k) as f64;
    let t = exponent.exp2() * (1.0 / budget.delta).ln();
    let t = t.ceil().min(usize::MAX as f64).max(1.0) as usize;
    match budget.max_trials {
        Some(cap) => t.min(cap),
        None => t,
    }
}

/// Outcome of a (possibly randomized) decision procedure.
#[derive(Debug, Clone)]
pub struct FptOutcome {
    pub accepted: bool,
    pub witness: Option<Solution>,
    pub trials: usize,
    /// True when the answer came from exhaustive coloring enumeration and
    /// is therefore deterministic.
    pub exhaustive: bool,
}

impl FptOutcome {
    fn no(trials: usize, exhaustive: bool) -> Self {
        FptOutcome { accepted: false, witness: None, trials, exhaustive }
    }
}

/// Decides p-OLSE via split -> simplify -> conflict graph -> random
/// separation. "Yes" answers carry a verified witness; "no" answers are
/// exact in exhaustive mode and one-sided-error claims otherwise.
pub fn solve_split_fpt(
    inst: &Instance,
    k: usize,
    budget: &TrialBudget,
) -> Result<FptOutcome, FptError> {
    let cg = conflict_graph(inst);
    let m = cg.segments.len();
    if k == 0 {
        return Ok(FptOutcome {
            accepted: true,
            witness: Some(Solution::new(Embedding::empty(), "split-fpt")),
            trials: 0,
            exhaustive: true,
        });
    }
    if k > m || k > inst.n_g.min(inst.n_h) {
        return Ok(FptOutcome::no(0, true));
    }

    // Only segments touching a conflict edge need coloring; the rest can
    // always be treated as green.
    let degrees = cg.conflict_degrees();
    let colored: Vec<usize> = (0..m).filter(|&i| degrees[i] > 0).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    for &(a, b) in &cg.conflict_edges {
        adj[a].push(b);
        adj[b].push(a);
    }

    let evaluate = |green: &dyn Fn(usize) -> bool| -> Option<Vec<usize>> {
        // V_0: green segments with no green conflict neighbor.
        let keep: Vec<usize> = (0..m)
            .filter(|&i| green(i) && !adj[i].iter().any(|&j| green(j)))
            .collect();
        let pts: Vec<(usize, usize)> =
            keep.iter().map(|&i| (cg.segments[i].g_pos, cg.segments[i].h_pos)).collect();
        let mis = permutation_mis(&pts);
        if mis.len() >= k {
            Some(mis.into_iter().map(|p| keep[p]).collect())
        } else {
            None
        }
    };

    let finish = |chosen: Vec<usize>, trials: usize, exhaustive: bool| -> Result<FptOutcome, FptError> {
        let mut pairs: Vec<(usize, usize)> = chosen
            .iter()
            .map(|&i| (cg.segments[i].origin_g, cg.segments[i].origin_h))
            .collect();
        pairs.sort_unstable();
        pairs.truncate(k);
        let sol = Solution::new(Embedding::new(pairs), "split-fpt");
        if !embedding_is_valid(inst, &sol.embedding, Variant::Olse) {
            return Err(FptError::Internal("accepted witness failed validation".into()));
        }
        Ok(FptOutcome { accepted: true, witness: Some(sol), trials, exhaustive })
    };

    if colored.is_empty() {
        return match evaluate(&|_| true) {
            Some(chosen) => finish(chosen, 1, true),
            None => Ok(FptOutcome::no(1, true)),
        };
    }

    if colored.len() <= budget.exhaustive_threshold {
        let c = colored.len();
        let mut slot = vec![None; m];
        for (p, &i) in colored.iter().enumerate() {
            slot[i] = Some(p);
        }
        for mask in 0u64..(1u64 << c) {
            let green = |i: usize| slot[i].map_or(true, |p| mask >> p & 1 == 1);
            if let Some(chosen) = evaluate(&green) {
                return finish(chosen, (mask + 1) as usize, true);
            }
        }
        return Ok(FptOutcome::no(1usize << c, true));
    }

    let delta_deg = cg.max_conflict_degree();
    let trials = trial_count(delta_deg, k, budget);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for t in 0..trials {
        let mut green_set = vec![true; m];
        for &i in &colored {
            green_set[i] = rng.gen::<bool>();
        }
        if let Some(chosen) = evaluate(&|i| green_set[i]) {
            return finish(chosen, t + 1, false);
        }
    }
    Ok(FptOutcome::no(trials, false))
}

/// The simpler random-separation solver for Δ_H = 0: color V(G), keep the
/// green vertices with no green neighbor, and run the edgeless DP.
pub fn solve_random_sep_simple(
    inst: &Instance,
    k: usize,
    budget: &TrialBudget,
) -> Result<FptOutcome, FptError> {
    let stats = degree_stats(inst);
    if stats.delta_h != 0 {
        return Err(FptError::Precondition(format!("Δ_H = {} != 0", stats.delta_h)));
    }
    if k == 0 {
        return Ok(FptOutcome {
            accepted: true,
            witness: Some(Solution::new(Embedding::empty(), "random-sep")),
            trials: 0,
            exhaustive: true,
        });
    }
    if k > inst.n_g.min(inst.n_h) {
        return Ok(FptOutcome::no(0, true));
    }

    let adj = inst.g_adjacency();
    let colored: Vec<usize> = (0..inst.n_g).filter(|&u| !adj[u].is_empty()).collect();

    let evaluate = |green: &dyn Fn(usize) -> bool| -> Option<Vec<(usize, usize)>> {
        let keep: Vec<usize> = (0..inst.n_g)
            .filter(|&u| green(u) && !adj[u].iter().any(|&w| green(w)))
            .collect();
        let sub = Instance::edgeless(
            keep.len(),
            inst.n_h,
            keep.iter().map(|&u| inst.lists[u].clone()).collect(),
        );
        let (sol, _) = solve_dp_no_edges(&sub).expect("sub-instance is edgeless");
        if sol.size >= k {
            Some(sol.embedding.pairs().iter().map(|&(p, h)| (keep[p], h)).collect())
        } else {
            None
        }
    };

    let finish = |mut pairs: Vec<(usize, usize)>, trials: usize, exhaustive: bool| {
        pairs.sort_unstable();
        pairs.truncate(k);
        let sol = Solution::new(Embedding::new(pairs), "random-sep");
        if !embedding_is_valid(inst, &sol.embedding, Variant::Olse) {
            return Err(FptError::Internal("accepted witness failed validation".into()));
        }
        Ok(FptOutcome { accepted: true, witness: Some(sol), trials, exhaustive })
    };

    if colored.is_empty() {
        return match evaluate(&|_| true) {
            Some(pairs) => finish(pairs, 1, true),
            None => Ok(FptOutcome::no(1, true)),
        };
    }

    if colored.len() <= budget.exhaustive_threshold {
        let c = colored.len();
        let mut slot = vec![None; inst.n_g];
        for (p, &u) in colored.iter().enumerate() {
            slot[u] = Some(p);
        }
        for mask in 0u64..(1u64 << c) {
            let green = |u: usize| slot[u].map_or(true, |p| mask >> p & 1 == 1);
            if let Some(pairs) = evaluate(&green) {
                return finish(pairs, (mask + 1) as usize, true);
            }
        }
        return Ok(FptOutcome::no(1usize << c, true));
    }

    let trials = trial_count(stats.delta_g, k, budget);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for t in 0..trials {
        let mut green_set = vec![true; inst.n_g];
        for &u in &colored {
            green_set[u] = rng.gen::<bool>();
        }
        if let Some(pairs) = evaluate(&|u| green_set[u]) {
            return finish(pairs, t + 1, false);
        }
    }
    Ok(FptOutcome::no(trials, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(g: usize, h: usize) -> (usize, usize) {
        (g, h)
    }

    #[test]
    fn split_anti_parallel_pair() {
        // One G-vertex listing two H-vertices, each listed only once.
        let inst = Instance::edgeless(1, 2, vec![vec![0, 1]]);
        let s = split(&inst);
        let pts: Vec<(usize, usize)> =
            s.segments.iter().map(|x| (x.g_pos, x.h_pos)).collect();
        assert_eq!(pts, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn split_identity_on_singleton_lists() {
        let inst = Instance::edgeless(3, 3, vec![vec![0], vec![1], vec![2]]);
        let s = split(&inst);
        let pts: Vec<(usize, usize)> =
            s.segments.iter().map(|x| (x.g_pos, x.h_pos)).collect();
        assert_eq!(pts, vec![(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn split_replicates_g_edges_to_all_copies() {
        // 3 list entries times 2 list entries across one G-edge: 6 edges.
        let inst = Instance::new(
            2,
            5,
            vec![(0, 1)],
            vec![],
            vec![vec![0, 1, 2], vec![3, 4]],
            None,
        );
        let s = split(&inst);
        assert_eq!(s.segments.len(), 5);
        assert_eq!(s.split_edges_g.len(), 6);
    }

    #[test]
    fn simplify_cases() {
        // Segment pair with an H-edge but no G-edge: H-edge dropped.
        let base = SplitInstance {
            segments: vec![
                Segment { g_pos: 0, h_pos: 0, origin_g: 0, origin_h: 0 },
                Segment { g_pos: 1, h_pos: 1, origin_g: 1, origin_h: 1 },
            ],
            split_edges_g: vec![],
            split_edges_h: vec![(0, 1)],
        };
        let out = simplify(&base);
        assert!(out.split_edges_g.is_empty() && out.split_edges_h.is_empty());

        // Matched pair: both dropped.
        let both = SplitInstance { split_edges_g: vec![(0, 1)], ..base.clone() };
        let out = simplify(&both);
        assert!(out.split_edges_g.is_empty());

        // G-edge alone survives as a conflict edge.
        let only_g = SplitInstance {
            split_edges_g: vec![(0, 1)],
            split_edges_h: vec![],
            ..base
        };
        let out = simplify(&only_g);
        assert_eq!(out.split_edges_g, vec![(0, 1)]);
        let cg = build_conflict_graph(&out).unwrap();
        assert_eq!(cg.conflict_edges, vec![(0, 1)]);
    }

    #[test]
    fn permutation_mis_examples() {
        assert_eq!(permutation_mis(&[seg(0, 0), seg(1, 1), seg(2, 2)]).len(), 3);
        assert_eq!(permutation_mis(&[seg(0, 1), seg(1, 0), seg(2, 2)]).len(), 2);
        assert_eq!(permutation_mis(&[seg(0, 2), seg(1, 1), seg(2, 0)]).len(), 1);
        assert!(permutation_mis(&[]).is_empty());
    }

    #[test]
    fn split_fpt_trivial_answers() {
        let inst = Instance::edgeless(2, 2, vec![vec![0], vec![1]]);
        let yes = solve_split_fpt(&inst, 0, &TrialBudget::default()).unwrap();
        assert!(yes.accepted);
        assert_eq!(yes.witness.unwrap().size, 0);
        let no = solve_split_fpt(&inst, 3, &TrialBudget::default()).unwrap();
        assert!(!no.accepted);
    }

    #[test]
    fn split_fpt_finds_identity_solution() {
        let inst = Instance::edgeless(3, 3, vec![vec![0], vec![1], vec![2]]);
        let out = solve_split_fpt(&inst, 3, &TrialBudget::default()).unwrap();
        assert!(out.accepted);
        assert_eq!(out.witness.unwrap().size, 3);
    }

    #[test]
    fn split_fpt_respects_conflicts() {
        // G = edge {0,1}, H edgeless, identity lists: no size-2 solution.
        let inst = Instance::new(2, 2, vec![(0, 1)], vec![], vec![vec![0], vec![1]], None);
        let out = solve_split_fpt(&inst, 2, &TrialBudget::default()).unwrap();
        assert!(!out.accepted);
        let out = solve_split_fpt(&inst, 1, &TrialBudget::default()).unwrap();
        assert!(out.accepted);
    }

    #[test]
    fn random_sep_path_example() {
        // G = path on 4 (as a matching would be Δ_G = 1; use two disjoint
        // edges to stay within small degrees), H edgeless, identity lists.
        let inst = Instance::new(
            4,
            4,
            vec![(0, 1), (1, 2), (2, 3)],
            vec![],
            (0..4).map(|i| vec![i]).collect(),
            None,
        );
        let yes = solve_random_sep_simple(&inst, 2, &TrialBudget::default()).unwrap();
        assert!(yes.accepted);
        let no = solve_random_sep_simple(&inst, 3, &TrialBudget::default()).unwrap();
        assert!(!no.accepted);
    }

    #[test]
    fn random_sep_rejects_h_edges() {
        let inst = Instance::new(1, 2, vec![], vec![(0, 1)], vec![vec![0]], None);
        assert!(matches!(
            solve_random_sep_simple(&inst, 1, &TrialBudget::default()),
            Err(FptError::Precondition(_))
        ));
    }
}
