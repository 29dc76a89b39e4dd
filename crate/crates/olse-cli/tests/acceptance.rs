//! End-to-end acceptance checks, one test per criterion. Each prints a
//! single pass/fail line; run with `--nocapture` to see all of them.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::process::Command;
use std::time::Instant;

use olse::approx::{approx_olise, approx_olse};
use olse::exact::{solve_dp_no_edges, solve_oracle};
use olse::fpt_split::{conflict_graph, permutation_mis, solve_split_fpt, TrialBudget};
use olse::fpt_vc::solve_vc_fpt;
use olse::instances::{
    encode_lapcs_as_olise, generate_random, reduce_is_to_olse, reduce_mcis_to_olse,
    ArcAnnotatedSequence, GenParams, McisInstance,
};
use olse::model::{degree_stats, embedding_is_valid, Instance, Variant};
use olse::unordered::{
    build_matching_graph, matching_to_solution, solve_lise_matching, solve_lse_rules,
};

fn verdict(n: usize, pass: bool, desc: &str) {
    println!("criterion {n}: {} - {desc}", if pass { "pass" } else { "fail" });
    assert!(pass, "criterion {n} failed: {desc}");
}

/// Varied small instances, deterministic per index.
fn small_instance(i: u64, dg: usize, dh: usize, dl: usize, n_cap: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED ^ i);
    let n_g = rng.gen_range(1..=n_cap);
    let n_h = rng.gen_range(1..=n_cap);
    let params = GenParams {
        n_g,
        n_h,
        max_delta_g: dg.min(n_g.saturating_sub(1)),
        max_delta_h: dh.min(n_h.saturating_sub(1)),
        max_delta_l: dl.min(n_h),
        density_g: rng.gen_range(0.1..0.6),
        density_h: rng.gen_range(0.1..0.6),
        density_l: rng.gen_range(0.2..0.8),
    };
    generate_random(&params, i.wrapping_mul(7919)).unwrap()
}

#[test]
fn criterion_01_dp_exactness() {
    let started = Instant::now();
    let mut checked = 0;
    for i in 0..500u64 {
        let inst = small_instance(i, 0, 3, 4, 8);
        let (dp_sol, _) = solve_dp_no_edges(&inst).unwrap();
        let opt = solve_oracle(&inst, Variant::Olse).unwrap().size;
        assert_eq!(dp_sol.size, opt, "instance {i}");
        checked += 1;
    }
    let elapsed = started.elapsed();
    verdict(
        1,
        checked == 500 && elapsed.as_secs() < 10,
        &format!("DP equals oracle on {checked} edgeless-G instances in {elapsed:?}"),
    );
}

#[test]
fn criterion_02_dp_complexity_shape() {
    for i in 0..20u64 {
        let inst = small_instance(i, 0, 2, 3, 8);
        let (_, table) = solve_dp_no_edges(&inst).unwrap();
        assert_eq!(table.t.len(), inst.n_g + 1);
        assert!(table.t.iter().all(|r| r.len() == inst.n_h + 1));
    }
    let n = 2000;
    let big = Instance::edgeless(n, n, (0..n).map(|i| vec![i]).collect());
    let started = Instant::now();
    let (sol, table) = solve_dp_no_edges(&big).unwrap();
    let elapsed = started.elapsed();
    assert_eq!(sol.size, n);
    assert_eq!(table.t.len() * table.t[0].len(), (n + 1) * (n + 1));
    verdict(
        2,
        elapsed.as_millis() < 2000,
        &format!("cell count exact; 2000x2000 DP in {elapsed:?}"),
    );
}

#[test]
fn criterion_03_approx_ratios() {
    for i in 0..500u64 {
        let inst = small_instance(i, 3, 3, 4, 8);
        let stats = degree_stats(&inst);
        let opt_olse = solve_oracle(&inst, Variant::Olse).unwrap().size;
        let a = approx_olse(&inst).unwrap();
        assert!(embedding_is_valid(&inst, &a.embedding, Variant::Olse));
        let bound = opt_olse.div_ceil(stats.delta_g + 1);
        assert!(a.size >= bound, "olse ratio violated on {i}: {} < {bound}", a.size);
        let opt_olise = solve_oracle(&inst, Variant::Olise).unwrap().size;
        let b = approx_olise(&inst).unwrap();
        assert!(embedding_is_valid(&inst, &b.embedding, Variant::Olise));
        let bound = opt_olise.div_ceil((stats.delta_g + 1) * (stats.delta_h + 1));
        assert!(b.size >= bound, "olise ratio violated on {i}: {} < {bound}", b.size);
    }
    verdict(3, true, "approximation ratios hold on 500 instances");
}

#[test]
fn criterion_04_lse_rules_exactness() {
    for i in 0..300u64 {
        let inst = small_instance(i, 1, 0, 1, 10);
        let sol = solve_lse_rules(&inst).unwrap();
        assert!(embedding_is_valid(&inst, &sol.embedding, Variant::Lse));
        let opt = solve_oracle(&inst, Variant::Lse).unwrap().size;
        assert_eq!(sol.size, opt, "instance {i}");
    }
    verdict(4, true, "rule-based LSE solver equals oracle on 300 instances");
}

#[test]
fn criterion_05_matching_pipeline() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for i in 0..300u64 {
        let inst = small_instance(i, 1, 1, 3, 8);
        let sol = solve_lise_matching(&inst).unwrap();
        assert!(embedding_is_valid(&inst, &sol.embedding, Variant::Lise));
        let opt = solve_oracle(&inst, Variant::Lise).unwrap().size;
        assert_eq!(sol.size, opt, "instance {i}");

        // Arbitrary (not only maximum) matchings lift to valid embeddings
        // of size equal to their weight.
        let mg = build_matching_graph(&inst).unwrap();
        let mut edges = mg.weighted_edges.clone();
        for j in (1..edges.len()).rev() {
            edges.swap(j, rng.gen_range(0..=j));
        }
        let mut used_x = vec![false; mg.x_nodes.len()];
        let mut used_y = vec![false; mg.y_nodes.len()];
        let mut matching = Vec::new();
        let mut weight = 0u64;
        for &(x, y, w) in &edges {
            if !used_x[x] && !used_y[y] && rng.gen_bool(0.7) {
                used_x[x] = true;
                used_y[y] = true;
                matching.push((x, y));
                weight += w as u64;
            }
        }
        let lifted = matching_to_solution(&mg, &matching, &inst).unwrap();
        assert_eq!(lifted.size as u64, weight);
        assert!(embedding_is_valid(&inst, &lifted.embedding, Variant::Lise));
    }
    verdict(5, true, "matching pipeline equals oracle; sampled matchings lift validly");
}

/// Branch-and-bound maximum independent set over bitmask adjacency.
fn max_independent_set(adj: &[u32]) -> usize {
    fn go(adj: &[u32], avail: u32, size: usize, best: &mut usize) {
        if size + avail.count_ones() as usize <= *best {
            return;
        }
        if avail == 0 {
            *best = (*best).max(size);
            return;
        }
        let v = avail.trailing_zeros() as usize;
        go(adj, avail & !adj[v] & !(1u32 << v), size + 1, best);
        go(adj, avail & !(1u32 << v), size, best);
    }
    let mut best = 0;
    let all = if adj.len() == 32 { u32::MAX } else { (1u32 << adj.len()) - 1 };
    go(adj, all, 0, &mut best);
    best
}

fn conflict_graph_adjacency(cg: &olse::fpt_split::ConflictGraph) -> Vec<u32> {
    let m = cg.segments.len();
    assert!(m <= 32);
    let mut adj = vec![0u32; m];
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = (&cg.segments[i], &cg.segments[j]);
            let crossing = (a.g_pos < b.g_pos) != (a.h_pos < b.h_pos);
            if crossing {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    for &(i, j) in &cg.conflict_edges {
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    adj
}

#[test]
fn criterion_06_splitting_equivalence() {
    for i in 0..300u64 {
        let inst = small_instance(i, 2, 2, 2, 8);
        let cg = conflict_graph(&inst);
        let mis = max_independent_set(&conflict_graph_adjacency(&cg));
        let opt = solve_oracle(&inst, Variant::Olse).unwrap().size;
        for k in 0..=5usize {
            assert_eq!(opt >= k, mis >= k, "instance {i}, k = {k}: opt {opt}, mis {mis}");
        }
    }
    verdict(6, true, "size-k solutions correspond to size-k independent sets (300 instances)");
}

#[test]
fn criterion_07_split_fpt_soundness() {
    let mut yes_runs = 0usize;
    let mut failures = 0usize;
    let mut i = 0u64;
    while yes_runs < 200 {
        let inst = small_instance(i, 2, 2, 2, 8);
        i += 1;
        let opt = solve_oracle(&inst, Variant::Olse).unwrap().size;

        // Exhaustive mode is deterministic and must match the oracle.
        // The decision is monotone in k, so the threshold (opt and opt+1)
        // pins down the whole curve.
        for k in [0, opt, (opt + 1).min(inst.n_g.min(inst.n_h))] {
            let out = solve_split_fpt(&inst, k, &TrialBudget::default()).unwrap();
            assert!(out.exhaustive);
            assert_eq!(out.accepted, opt >= k, "exhaustive mismatch at k = {k}");
        }

        if opt == 0 {
            continue;
        }
        // Randomized mode on a yes-instance: forced past the exhaustive
        // fallback; failures are the one-sided error being measured.
        let k = opt.min(2);
        let budget = TrialBudget {
            seed: i,
            delta: 0.01,
            max_trials: None,
            exhaustive_threshold: 0,
        };
        let out = solve_split_fpt(&inst, k, &budget).unwrap();
        if out.accepted {
            // Accepted answers carry a verified witness: no false positives.
            assert!(opt >= k);
            assert_eq!(out.witness.as_ref().unwrap().size, k);
        } else {
            failures += 1;
        }
        // A target above the optimum must never be accepted.  Acceptance
        // requires a verified witness, so capping the trial count cannot
        // introduce a false positive; the full 2^((d+1)k) schedule at the
        // larger k would only burn time.
        let k_no = opt + 1;
        if k_no <= inst.n_g.min(inst.n_h) {
            let capped = TrialBudget {
                max_trials: Some(10_000),
                ..budget
            };
            let out = solve_split_fpt(&inst, k_no, &capped).unwrap();
            assert!(!out.accepted, "false positive at k = {k_no} > opt = {opt}");
        }
        yes_runs += 1;
    }
    let rate = failures as f64 / yes_runs as f64;
    verdict(
        7,
        rate <= 0.05,
        &format!("{failures}/{yes_runs} randomized misses (rate {rate:.3}); no false positives"),
    );
}

#[test]
fn criterion_08_conflict_degree_bound() {
    for i in 0..300u64 {
        let inst = small_instance(i, 3, 3, 3, 8);
        let stats = degree_stats(&inst);
        let cg = conflict_graph(&inst);
        let bound = stats.delta_l * stats.delta_g;
        assert!(
            cg.max_conflict_degree() <= bound,
            "instance {i}: conflict degree {} > {bound}",
            cg.max_conflict_degree()
        );
    }
    verdict(8, true, "conflict degree <= Δ_L·Δ_G on 300 instances");
}

#[test]
fn criterion_09_vc_fpt_exactness() {
    for i in 0..300u64 {
        let inst = small_instance(i, 3, 3, 3, 10);
        let stats = degree_stats(&inst);
        let opt = solve_oracle(&inst, Variant::Olse).unwrap().size;
        for k in 0..=inst.n_g.min(inst.n_h) + 1 {
            let out = solve_vc_fpt(&inst, k);
            assert_eq!(out.accepted, opt >= k, "instance {i}, k = {k}");
            let bound = (1 + stats.delta_l as u64).pow(out.cover_size as u32);
            assert!(out.guesses as u64 <= bound, "guess bound violated on {i}");
            if let Some(w) = out.witness {
                assert!(w.size >= k);
                assert!(embedding_is_valid(&inst, &w.embedding, Variant::Olse));
            }
        }
    }
    verdict(9, true, "vertex-cover FPT equals oracle for every k on 300 instances");
}

fn mcis_has_solution(m: &McisInstance) -> bool {
    // One vertex per class, pairwise non-adjacent.
    fn go(m: &McisInstance, class: usize, chosen: &mut Vec<usize>) -> bool {
        if class == m.n_colors {
            return true;
        }
        'cand: for j in 0..m.class_size {
            let v = class * m.class_size + j;
            for &u in chosen.iter() {
                if m.edges.contains(&(u, v)) || m.edges.contains(&(v, u)) {
                    continue 'cand;
                }
            }
            chosen.push(v);
            if go(m, class + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    go(m, 0, &mut Vec::new())
}

#[test]
fn criterion_10_reduction_equivalences() {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);

    // Multicolored independent set: yes iff the reduced instance reaches
    // the target size.
    for i in 0..100 {
        let (k, n) = if i % 2 == 0 { (2, 2) } else { (3, 1) };
        let mut edges = Vec::new();
        let total = k * n;
        for a in 0..total {
            for b in a + 1..total {
                if a / n != b / n && rng.gen_bool(0.4) {
                    edges.push((a, b));
                }
            }
        }
        let m = McisInstance::new(k, n, edges).unwrap();
        let (inst, target) = reduce_mcis_to_olse(&m);
        let opt = solve_oracle(&inst, Variant::Olse).unwrap().size;
        assert_eq!(mcis_has_solution(&m), opt >= target, "mcis case {i}");
    }

    // Independent set: the reduced optimum is the independence number.
    for i in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + i);
        let n = rng.gen_range(1..=8);
        let mut edges = Vec::new();
        let mut adj = vec![0u32; n];
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(0.4) {
                    edges.push((a, b));
                    adj[a] |= 1 << b;
                    adj[b] |= 1 << a;
                }
            }
        }
        let inst = reduce_is_to_olse(n, &edges, n);
        let opt = solve_oracle(&inst, Variant::Olse).unwrap().size;
        assert_eq!(opt, max_independent_set(&adj), "is case {i}");
    }

    // Arc-preserving common subsequence: encoded optimum equals the
    // sequence-level brute force.
    for i in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(3000 + i);
        let s1 = random_arc_sequence(&mut rng);
        let s2 = random_arc_sequence(&mut rng);
        let inst = encode_lapcs_as_olise(&s1, &s2).unwrap();
        let opt = solve_oracle(&inst, Variant::Olise).unwrap().size;
        assert_eq!(opt, lapcs_brute_force(&s1, &s2), "lapcs case {i}");
    }

    verdict(10, true, "all three reductions agree with source-problem brute force (100 each)");
}

fn random_arc_sequence(rng: &mut ChaCha8Rng) -> ArcAnnotatedSequence {
    let n = rng.gen_range(1..=8);
    let chars: String = (0..n).map(|_| if rng.gen_bool(0.5) { 'a' } else { 'b' }).collect();
    let mut arcs = Vec::new();
    let mut used = vec![false; n];
    for a in 0..n {
        for b in a + 1..n {
            if !used[a] && !used[b] && rng.gen_bool(0.2) {
                used[a] = true;
                used[b] = true;
                arcs.push((a, b));
            }
        }
    }
    ArcAnnotatedSequence::new(&chars, arcs).unwrap()
}

/// Longest arc-preserving common subsequence by exhaustive search over
/// position pairings, independent of the solver code paths.
fn lapcs_brute_force(s1: &ArcAnnotatedSequence, s2: &ArcAnnotatedSequence) -> usize {
    let c1: Vec<char> = s1.chars.chars().collect();
    let c2: Vec<char> = s2.chars.chars().collect();
    let has_arc = |arcs: &[(usize, usize)], x: usize, y: usize| {
        arcs.contains(&(x, y)) || arcs.contains(&(y, x))
    };
    fn go(
        c1: &[char],
        c2: &[char],
        s1: &ArcAnnotatedSequence,
        s2: &ArcAnnotatedSequence,
        has_arc: &dyn Fn(&[(usize, usize)], usize, usize) -> bool,
        i: usize,
        j: usize,
        chosen: &mut Vec<(usize, usize)>,
        best: &mut usize,
    ) {
        *best = (*best).max(chosen.len());
        for ii in i..c1.len() {
            for jj in j..c2.len() {
                if c1[ii] != c2[jj] {
                    continue;
                }
                if chosen.iter().any(|&(pi, pj)| {
                    has_arc(&s1.arcs, pi, ii) != has_arc(&s2.arcs, pj, jj)
                }) {
                    continue;
                }
                chosen.push((ii, jj));
                go(c1, c2, s1, s2, has_arc, ii + 1, jj + 1, chosen, best);
                chosen.pop();
            }
        }
    }
    let mut best = 0;
    go(&c1, &c2, s1, s2, &has_arc, 0, 0, &mut Vec::new(), &mut best);
    best
}

#[test]
fn criterion_11_permutation_mis_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    for case in 0..200 {
        let m = rng.gen_range(0..=12usize);
        let mut h: Vec<usize> = (0..m).collect();
        for j in (1..m).rev() {
            h.swap(j, rng.gen_range(0..=j));
        }
        let segs: Vec<(usize, usize)> = h.iter().enumerate().map(|(g, &h)| (g, h)).collect();
        let fast = permutation_mis(&segs).len();
        // Brute force: crossing pairs are the permutation-graph edges.
        let mut adj = vec![0u32; m];
        for a in 0..m {
            for b in a + 1..m {
                if (segs[a].1 < segs[b].1) != (segs[a].0 < segs[b].0) {
                    adj[a] |= 1 << b;
                    adj[b] |= 1 << a;
                }
            }
        }
        assert_eq!(fast, max_independent_set(&adj), "case {case}");
    }
    verdict(11, true, "longest-increasing-subsequence MIS matches brute force (200 sets)");
}

#[test]
fn criterion_12_cli_round_trip() {
    let bin = env!("CARGO_BIN_EXE_olse");
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..50u64 {
        let gen = |extra: &[&str]| {
            let out = Command::new(bin)
                .args(["generate", "--seed", &seed.to_string(), "--n-g", "6", "--n-h", "6"])
                .args(extra)
                .output()
                .unwrap();
            assert!(out.status.success(), "generate failed for seed {seed}");
            out.stdout
        };
        let first = gen(&[]);
        let second = gen(&[]);
        assert_eq!(first, second, "generation not byte-identical for seed {seed}");

        let inst_path = dir.path().join(format!("inst-{seed}.json"));
        std::fs::write(&inst_path, &first).unwrap();

        let solve = Command::new(bin)
            .args(["solve", "--variant", "olse", "--algo", "oracle", "--input"])
            .arg(&inst_path)
            .output()
            .unwrap();
        assert!(solve.status.success(), "solve failed for seed {seed}");
        let report: serde_json::Value = serde_json::from_slice(&solve.stdout).unwrap();
        assert_eq!(report["valid"], serde_json::Value::Bool(true));

        let sol_path = dir.path().join(format!("sol-{seed}.json"));
        let sol = serde_json::json!({
            "size": report["size"],
            "pairs": report["pairs"],
            "algorithm": report["algorithm"],
            "valid": true,
        });
        std::fs::write(&sol_path, serde_json::to_vec(&sol).unwrap()).unwrap();

        let validate = Command::new(bin)
            .args(["validate", "--variant", "olse", "--input"])
            .arg(&inst_path)
            .arg("--solution")
            .arg(&sol_path)
            .output()
            .unwrap();
        assert!(
            validate.status.success(),
            "validate rejected solver output for seed {seed}: {}",
            String::from_utf8_lossy(&validate.stdout)
        );
    }
    verdict(12, true, "50 seeded generate→solve→validate round trips; byte-stable generation");
}
