//! Polynomial solvers for the unordered variants: the rule-based LSE
//! solver for Δ_G <= 1, Δ_H = 0, Δ_L = 1 instances, and the weighted
//! bipartite matching pipeline for LISE with Δ_G, Δ_H <= 1.

use crate::model::{degree_stats, Embedding, Instance, Solution};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum UnorderedError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal construction error: {0}")]
    Internal(String),
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), UnorderedError> {
    if cond {
        Ok(())
    } else {
        Err(UnorderedError::Precondition(msg()))
    }
}

// ---------------------------------------------------------------------------
// LSE rules (Δ_G <= 1, Δ_H = 0, Δ_L = 1)
// ---------------------------------------------------------------------------

/// Per H-vertex group L^{-1}(v) of G-vertices whose singleton list is {v}.
#[derive(Debug, Clone)]
pub struct SubsetFamily {
    pub groups: Vec<Vec<usize>>,
}

pub fn subset_family(inst: &Instance) -> SubsetFamily {
    let mut groups = vec![Vec::new(); inst.n_h];
    for (u, l) in inst.lists.iter().enumerate() {
        if let [v] = l[..] {
            groups[v].push(u);
        }
    }
    SubsetFamily { groups }
}

/// Exact opt-LSE solver by exhaustive application of the three reduction
/// rules: (i) take a vertex that is isolated or has an intra-group
/// neighbor, (ii) resolve cycles of groups, (iii) peel leaf groups.
pub fn solve_lse_rules(inst: &Instance) -> Result<Solution, UnorderedError> {
    let stats = degree_stats(inst);
    require(stats.delta_g <= 1, || format!("Δ_G = {} > 1", stats.delta_g))?;
    require(stats.delta_h == 0, || format!("Δ_H = {} != 0", stats.delta_h))?;
    require(stats.delta_l <= 1, || format!("Δ_L = {} > 1", stats.delta_l))?;

    // Δ_G <= 1: each vertex has at most one neighbor.
    let mut neighbor: Vec<Option<usize>> = vec![None; inst.n_g];
    for &(a, b) in &inst.edges_g {
        neighbor[a] = Some(b);
        neighbor[b] = Some(a);
    }
    let family = subset_family(inst);
    let mut group_of: Vec<Option<usize>> = vec![None; inst.n_g];
    for (h, members) in family.groups.iter().enumerate() {
        for &u in members {
            group_of[u] = Some(h);
        }
    }
    // Vertices with an empty list can never join a solution.
    let mut alive: Vec<bool> = group_of.iter().map(|g| g.is_some()).collect();
    let mut h_alive = vec![true; inst.n_h];
    let mut pairs: Vec<(usize, usize)> = Vec::new();

    let live_neighbor = |u: usize, alive: &[bool]| neighbor[u].filter(|&w| alive[w]);
    let remove_group = |h: usize, alive: &mut [bool], h_alive: &mut [bool]| {
        for &u in &family.groups[h] {
            alive[u] = false;
        }
        h_alive[h] = false;
    };

    loop {
        let alive_count = alive.iter().filter(|&&a| a).count();
        if alive_count == 0 {
            break;
        }

        // Rule (i): a group containing an isolated vertex or a vertex whose
        // neighbor sits in the same group.
        let mut applied = false;
        'rule1: for h in 0..inst.n_h {
            if !h_alive[h] {
                continue;
            }
            for &u in &family.groups[h] {
                if !alive[u] {
                    continue;
                }
                let n = live_neighbor(u, &alive);
                if n.is_none() || n.map(|w| group_of[w] == Some(h)).unwrap_or(false) {
                    pairs.push((u, h));
                    remove_group(h, &mut alive, &mut h_alive);
                    applied = true;
                    break 'rule1;
                }
            }
        }
        if applied {
            continue;
        }

        // Group multigraph: one arc per live inter-group G-edge.
        let mut arcs: Vec<(usize, usize, usize, usize)> = Vec::new(); // (ga, gb, u, w)
        for &(u, w) in &inst.edges_g {
            if alive[u] && alive[w] {
                let (ga, gb) = (group_of[u].unwrap(), group_of[w].unwrap());
                if ga != gb {
                    arcs.push((ga, gb, u, w));
                }
            }
        }

        // Rule (ii), l = 2: two groups joined by two distinct edges.
        let mut by_pair: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for &(ga, gb, u, w) in &arcs {
            let (key, pair) = if ga < gb { ((ga, gb), (u, w)) } else { ((gb, ga), (w, u)) };
            by_pair.entry(key).or_default().push(pair);
        }
        if let Some((&(ga, gb), edges)) = by_pair.iter().find(|(_, e)| e.len() >= 2) {
            // u1 in ga adjacent to u2 in gb; u1' adjacent to u2'. Keep u1
            // and u2' (non-adjacent by Δ_G <= 1).
            let (u1, _u2) = edges[0];
            let (_u1p, u2p) = edges[1];
            pairs.push((u1, ga));
            pairs.push((u2p, gb));
            remove_group(ga, &mut alive, &mut h_alive);
            remove_group(gb, &mut alive, &mut h_alive);
            continue;
        }

        // Rule (ii), l > 2: a simple cycle in the group graph.
        if let Some(cycle) = find_group_cycle(inst.n_h, &by_pair) {
            let l = cycle.len();
            for i in 0..l {
                let prev = cycle[(i + l - 1) % l];
                let here = cycle[i];
                // u_i = the endpoint in `here` of the edge from `prev`.
                let key = (prev.min(here), prev.max(here));
                let (a, b) = by_pair[&key][0]; // a in key.0, b in key.1
                let u_i = if key.0 == here { a } else { b };
                pairs.push((u_i, here));
            }
            for &h in &cycle {
                remove_group(h, &mut alive, &mut h_alive);
            }
            continue;
        }

        // Rule (iii): a leaf group (adjacent to exactly one other group).
        let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
        for &(ga, gb) in by_pair.keys() {
            *degree.entry(ga).or_default() += 1;
            *degree.entry(gb).or_default() += 1;
        }
        if let Some((&leaf, _)) = degree.iter().find(|(_, &d)| d == 1) {
            let members: Vec<usize> =
                family.groups[leaf].iter().copied().filter(|&u| alive[u]).collect();
            // After rules (i) and (ii) a leaf group is a single vertex.
            debug_assert_eq!(members.len(), 1);
            let u = *members.first().ok_or_else(|| {
                UnorderedError::Internal("leaf group with no live member".into())
            })?;
            pairs.push((u, leaf));
            // Committing to u excludes its unique neighbor (the exchange
            // argument picks exactly one of the two).
            if let Some(w) = live_neighbor(u, &alive) {
                alive[w] = false;
            }
            remove_group(leaf, &mut alive, &mut h_alive);
            continue;
        }

        return Err(UnorderedError::Internal(format!(
            "no rule applies but {alive_count} vertices remain"
        )));
    }

    Ok(Solution::new(Embedding::new(pairs), "lse-rules"))
}

/// DFS for a simple cycle in the (simple) group adjacency graph. Returns
/// the groups along the cycle in order.
fn find_group_cycle(
    n_groups: usize,
    by_pair: &BTreeMap<(usize, usize), Vec<(usize, usize)>>,
) -> Option<Vec<usize>> {
    let mut adj = vec![Vec::new(); n_groups];
    for &(a, b) in by_pair.keys() {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut state = vec![0u8; n_groups]; // 0 unseen, 1 on stack, 2 done
    let mut parent = vec![usize::MAX; n_groups];
    for start in 0..n_groups {
        if state[start] != 0 || adj[start].is_empty() {
            continue;
        }
        let mut stack = vec![(start, usize::MAX)];
        while let Some((u, from)) = stack.pop() {
            if state[u] == 2 {
                continue;
            }
            if state[u] == 1 {
                state[u] = 2;
                continue;
            }
            state[u] = 1;
            parent[u] = from;
            stack.push((u, from)); // post-visit marker
            for &w in &adj[u] {
                if w == from {
                    continue;
                }
                if state[w] == 1 {
                    // Found a cycle w -> ... -> u -> w.
                    let mut cycle = vec![u];
                    let mut cur = u;
                    while cur != w {
                        cur = parent[cur];
                        cycle.push(cur);
                    }
                    cycle.reverse();
                    return Some(cycle);
                }
                if state[w] == 0 {
                    stack.push((w, u));
                }
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// LISE via weighted bipartite matching (Δ_G <= 1, Δ_H <= 1)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XOrigin {
    GEdge(usize, usize),
    GVertex(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YOrigin {
    HEdge(usize, usize),
    HVertex(usize),
}

/// The bipartite graph of the matching reduction: X-nodes from G-edges and
/// isolated G-vertices, Y-nodes from H-edges and isolated H-vertices.
#[derive(Debug, Clone)]
pub struct MatchingGraph {
    pub x_nodes: Vec<XOrigin>,
    pub y_nodes: Vec<YOrigin>,
    pub weighted_edges: Vec<(usize, usize, u32)>,
}

pub fn build_matching_graph(inst: &Instance) -> Result<MatchingGraph, UnorderedError> {
    let stats = degree_stats(inst);
    require(stats.delta_g <= 1, || format!("Δ_G = {} > 1", stats.delta_g))?;
    require(stats.delta_h <= 1, || format!("Δ_H = {} > 1", stats.delta_h))?;

    let g_deg = inst.g_degrees();
    let h_deg = inst.h_degrees();
    let mut x_nodes: Vec<XOrigin> =
        inst.edges_g.iter().map(|&(a, b)| XOrigin::GEdge(a, b)).collect();
    x_nodes.extend((0..inst.n_g).filter(|&u| g_deg[u] == 0).map(XOrigin::GVertex));
    let mut y_nodes: Vec<YOrigin> =
        inst.edges_h.iter().map(|&(a, b)| YOrigin::HEdge(a, b)).collect();
    y_nodes.extend((0..inst.n_h).filter(|&v| h_deg[v] == 0).map(YOrigin::HVertex));

    let in_list = |u: usize, v: usize| inst.list(u).binary_search(&v).is_ok();
    let mut weighted_edges = Vec::new();
    for (xi, &x) in x_nodes.iter().enumerate() {
        for (yi, &y) in y_nodes.iter().enumerate() {
            let w = match (x, y) {
                (XOrigin::GEdge(u, up), YOrigin::HEdge(v, vp)) => {
                    if (in_list(u, v) && in_list(up, vp)) || (in_list(u, vp) && in_list(up, v)) {
                        2
                    } else if in_list(u, v) || in_list(u, vp) || in_list(up, v) || in_list(up, vp) {
                        // A single endpoint of the G-edge can still be
                        // embedded alone onto an endpoint of the H-edge.
                        1
                    } else {
                        0
                    }
                }
                (XOrigin::GVertex(u), YOrigin::HVertex(v)) => in_list(u, v) as u32,
                (XOrigin::GVertex(u), YOrigin::HEdge(v, vp)) => {
                    (in_list(u, v) || in_list(u, vp)) as u32
                }
                (XOrigin::GEdge(u, up), YOrigin::HVertex(v)) => {
                    (in_list(u, v) || in_list(up, v)) as u32
                }
            };
            if w > 0 {
                // One edge per node pair even when several endpoint
                // combinations justify it.
                weighted_edges.push((xi, yi, w));
            }
        }
    }
    Ok(MatchingGraph { x_nodes, y_nodes, weighted_edges })
}

/// Maximum-weight bipartite matching via the Hungarian algorithm on the
/// (zero-padded) weight matrix. Zero-weight pads model "unmatched".
pub fn max_weight_matching(mg: &MatchingGraph) -> (Vec<(usize, usize)>, u64) {
    let (nx, ny) = (mg.x_nodes.len(), mg.y_nodes.len());
    if nx == 0 || ny == 0 || mg.weighted_edges.is_empty() {
        return (Vec::new(), 0);
    }
    let mut weight = vec![vec![0i64; ny]; nx];
    for &(x, y, w) in &mg.weighted_edges {
        weight[x][y] = weight[x][y].max(w as i64);
    }
    let transpose = nx > ny;
    let (rows, cols) = if transpose { (ny, nx) } else { (nx, ny) };
    let cost = |i: usize, j: usize| -> i64 {
        if transpose {
            -weight[j][i]
        } else {
            -weight[i][j]
        }
    };
    let assignment = hungarian(rows, cols, cost);
    let mut matched = Vec::new();
    let mut total = 0u64;
    for (i, j) in assignment {
        let (x, y) = if transpose { (j, i) } else { (i, j) };
        if weight[x][y] > 0 {
            matched.push((x, y));
            total += weight[x][y] as u64;
        }
    }
    matched.sort_unstable();
    (matched, total)
}

/// Min-cost assignment of all `rows` (rows <= cols) with the potentials
/// formulation. Returns (row, col) pairs.
fn hungarian(rows: usize, cols: usize, cost: impl Fn(usize, usize) -> i64) -> Vec<(usize, usize)> {
    const INF: i64 = i64::MAX / 4;
    let mut u = vec![0i64; rows + 1];
    let mut v = vec![0i64; cols + 1];
    let mut p = vec![0usize; cols + 1]; // row matched to column j (1-based, 0 = free)
    let mut way = vec![0usize; cols + 1];
    for i in 1..=rows {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![INF; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=cols).filter(|&j| p[j] != 0).map(|j| (p[j] - 1, j - 1)).collect()
}

/// Lifts a matching of the reduction graph back to a LISE embedding of
/// size equal to the matching weight.
pub fn matching_to_solution(
    mg: &MatchingGraph,
    matching: &[(usize, usize)],
    inst: &Instance,
) -> Result<Solution, UnorderedError> {
    let in_list = |u: usize, v: usize| inst.list(u).binary_search(&v).is_ok();
    let mut pairs = Vec::new();
    for &(xi, yi) in matching {
        let x = *mg.x_nodes.get(xi).ok_or_else(|| bad_tag("x index out of range"))?;
        let y = *mg.y_nodes.get(yi).ok_or_else(|| bad_tag("y index out of range"))?;
        let weight = mg
            .weighted_edges
            .iter()
            .find(|&&(a, b, _)| a == xi && b == yi)
            .map(|&(_, _, w)| w)
            .ok_or_else(|| bad_tag("matched pair is not an edge"))?;
        match (x, y, weight) {
            (XOrigin::GEdge(u, up), YOrigin::HEdge(v, vp), 2) => {
                if in_list(u, v) && in_list(up, vp) {
                    pairs.push((u, v));
                    pairs.push((up, vp));
                } else if in_list(u, vp) && in_list(up, v) {
                    pairs.push((u, vp));
                    pairs.push((up, v));
                } else {
                    return Err(bad_tag("weight-2 edge with no consistent orientation"));
                }
            }
            (XOrigin::GEdge(u, up), YOrigin::HEdge(v, vp), 1) => {
                let pick = [(u, v), (u, vp), (up, v), (up, vp)]
                    .into_iter()
                    .find(|&(a, b)| in_list(a, b))
                    .ok_or_else(|| bad_tag("weight-1 edge-edge with no list support"))?;
                pairs.push(pick);
            }
            (XOrigin::GVertex(u), YOrigin::HVertex(v), 1) => pairs.push((u, v)),
            (XOrigin::GVertex(u), YOrigin::HEdge(v, vp), 1) => {
                let b = [v, vp]
                    .into_iter()
                    .find(|&b| in_list(u, b))
                    .ok_or_else(|| bad_tag("vertex-edge with no list support"))?;
                pairs.push((u, b));
            }
            (XOrigin::GEdge(u, up), YOrigin::HVertex(v), 1) => {
                let a = [u, up]
                    .into_iter()
                    .find(|&a| in_list(a, v))
                    .ok_or_else(|| bad_tag("edge-vertex with no list support"))?;
                pairs.push((a, v));
            }
            _ => return Err(bad_tag("weight inconsistent with origin tags")),
        }
    }
    Ok(Solution::new(Embedding::new(pairs), "lise-matching"))
}

fn bad_tag(msg: &str) -> UnorderedError {
    UnorderedError::Internal(msg.to_string())
}

/// Full Prop.-style pipeline: build, match, convert.
pub fn solve_lise_matching(inst: &Instance) -> Result<Solution, UnorderedError> {
    let mg = build_matching_graph(inst)?;
    let (matching, weight) = max_weight_matching(&mg);
    let sol = matching_to_solution(&mg, &matching, inst)?;
    if sol.size as u64 != weight {
        return Err(bad_tag("solution size disagrees with matching weight"));
    }
    Ok(sol)
}
