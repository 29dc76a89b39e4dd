//! Instance plumbing: constructive reductions used as generators and
//! cross-checks, a seeded random generator, and the JSON file format.

use crate::model::{degree_stats, validate_instance, Instance, Violation};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("json error at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("instance violates invariants: {}", join_violations(.0))]
    Violations(Vec<Violation>),
    #[error("invalid parameters: {0}")]
    Params(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// A properly colored multicolored-independent-set instance: k·N vertices,
/// class i = {iN .. iN+N-1}, edges only between different classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McisInstance {
    pub n_colors: usize,
    pub class_size: usize,
    pub edges: Vec<(usize, usize)>,
}

impl McisInstance {
    pub fn new(
        n_colors: usize,
        class_size: usize,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, InstanceError> {
        let m = McisInstance { n_colors, class_size, edges };
        m.validate()?;
        Ok(m)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_colors * self.class_size
    }

    pub fn color_of(&self, v: usize) -> usize {
        v / self.class_size
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        let n = self.n_vertices();
        for &(a, b) in &self.edges {
            if a >= n || b >= n {
                return Err(InstanceError::Params(format!(
                    "edge ({a}, {b}) out of range for {n} vertices"
                )));
            }
            if self.class_size == 0 || self.color_of(a) == self.color_of(b) {
                return Err(InstanceError::Params(format!(
                    "edge ({a}, {b}) stays inside one color class"
                )));
            }
        }
        Ok(())
    }
}

/// NP-hardness construction: block B_i holds one length-kN vertex sequence
/// per member of color class C_i; lists pair sequences of a block with
/// H-sequences in reverse, so one sequence per block survives; the
/// source's edges become single cross-sequence G-edges. Returns the
/// instance (with its `k` field set) and the target size k²N.
pub fn reduce_mcis_to_olse(m: &McisInstance) -> (Instance, usize) {
    let (k, n_cls) = (m.n_colors, m.class_size);
    let kn = k * n_cls;
    let n = kn * kn;
    // Block-major layout: block i, sequence j, position s.
    let idx = |i: usize, j: usize, s: usize| (i * n_cls + j) * kn + s;
    let lists: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            let s = u % kn;
            let j = (u / kn) % n_cls;
            let i = u / (kn * n_cls);
            vec![idx(i, n_cls - 1 - j, s)]
        })
        .collect();
    let mut edges_g = Vec::with_capacity(m.edges.len());
    for &(p, q) in &m.edges {
        let (p, q) = (p.min(q), p.max(q));
        // The sequence of p carries a vertex at position q and vice versa;
        // those two vertices are joined.
        edges_g.push((idx(p / n_cls, p % n_cls, q), idx(q / n_cls, q % n_cls, p)));
    }
    let target = k * k * n_cls;
    let inst = Instance::new(n, n, edges_g, Vec::new(), lists, Some(target));
    let stats = degree_stats(&inst);
    assert!(stats.delta_g <= 1 && stats.delta_h == 0 && stats.delta_l <= 1);
    debug_assert!(validate_instance(&inst).is_empty());
    (inst, target)
}

/// Independent set as OLSE: H edgeless of the same size, identity lists.
pub fn reduce_is_to_olse(n: usize, edges: &[(usize, usize)], k: usize) -> Instance {
    let lists = (0..n).map(|i| vec![i]).collect();
    Instance::new(n, n, edges.to_vec(), Vec::new(), lists, Some(k.min(n)))
}

/// A sequence with arcs between positions (positions are char indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcAnnotatedSequence {
    pub chars: String,
    pub arcs: Vec<(usize, usize)>,
}

impl ArcAnnotatedSequence {
    pub fn new(chars: &str, arcs: Vec<(usize, usize)>) -> Result<Self, InstanceError> {
        let s = ArcAnnotatedSequence { chars: chars.to_string(), arcs };
        s.validate()?;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.chars.chars().count()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    /// Endpoint-disjoint arcs with valid positions (the degree-1 regime).
    pub fn validate(&self) -> Result<(), InstanceError> {
        let n = self.len();
        let mut used = vec![false; n];
        for &(a, b) in &self.arcs {
            if a >= n || b >= n || a == b {
                return Err(InstanceError::Params(format!("bad arc ({a}, {b})")));
            }
            if used[a] || used[b] {
                return Err(InstanceError::Params(format!(
                    "arcs share endpoint at ({a}, {b})"
                )));
            }
            used[a] = true;
            used[b] = true;
        }
        Ok(())
    }
}

/// Pair of arc-annotated sequences for the common-subsequence encoding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LapcsPair {
    pub s1: ArcAnnotatedSequence,
    pub s2: ArcAnnotatedSequence,
}

/// Arc-preserving common subsequence as OLISE: G from s2, H from s1, arcs
/// as edges, lists by character equality.
pub fn encode_lapcs_as_olise(
    s1: &ArcAnnotatedSequence,
    s2: &ArcAnnotatedSequence,
) -> Result<Instance, InstanceError> {
    s1.validate()?;
    s2.validate()?;
    let c1: Vec<char> = s1.chars.chars().collect();
    let c2: Vec<char> = s2.chars.chars().collect();
    let lists = c2
        .iter()
        .map(|&ch| (0..c1.len()).filter(|&v| c1[v] == ch).collect())
        .collect();
    Ok(Instance::new(
        c2.len(),
        c1.len(),
        s2.arcs.clone(),
        s1.arcs.clone(),
        lists,
        None,
    ))
}

/// Parameters for [`generate_random`]. Caps are upper bounds the output
/// must respect, densities are per-candidate inclusion probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub n_g: usize,
    pub n_h: usize,
    pub max_delta_g: usize,
    pub max_delta_h: usize,
    pub max_delta_l: usize,
    pub density_g: f64,
    pub density_h: f64,
    pub density_l: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n_g: 8,
            n_h: 8,
            max_delta_g: 2,
            max_delta_h: 2,
            max_delta_l: 2,
            density_g: 0.3,
            density_h: 0.3,
            density_l: 0.5,
        }
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<(), InstanceError> {
        for (name, d) in [
            ("density_g", self.density_g),
            ("density_h", self.density_h),
            ("density_l", self.density_l),
        ] {
            if !(0.0..=1.0).contains(&d) {
                return Err(InstanceError::Params(format!("{name} = {d} not in [0, 1]")));
            }
        }
        if self.max_delta_g >= self.n_g.max(1) {
            return Err(InstanceError::Params(format!(
                "max_delta_g = {} unreachable with n_g = {}",
                self.max_delta_g, self.n_g
            )));
        }
        if self.max_delta_h >= self.n_h.max(1) {
            return Err(InstanceError::Params(format!(
                "max_delta_h = {} unreachable with n_h = {}",
                self.max_delta_h, self.n_h
            )));
        }
        if self.max_delta_l > self.n_h {
            return Err(InstanceError::Params(format!(
                "max_delta_l = {} exceeds n_h = {}",
                self.max_delta_l, self.n_h
            )));
        }
        Ok(())
    }
}

/// Seed-deterministic random instance within the given caps.
pub fn generate_random(params: &GenParams, seed: u64) -> Result<Instance, InstanceError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges_g = random_edges(&mut rng, params.n_g, params.max_delta_g, params.density_g);
    let edges_h = random_edges(&mut rng, params.n_h, params.max_delta_h, params.density_h);
    let lists = (0..params.n_g)
        .map(|_| {
            let mut l = Vec::new();
            for v in 0..params.n_h {
                if l.len() < params.max_delta_l && rng.gen_bool(params.density_l) {
                    l.push(v);
                }
            }
            l
        })
        .collect();
    let inst = Instance::new(params.n_g, params.n_h, edges_g, edges_h, lists, None);
    let stats = degree_stats(&inst);
    debug_assert!(
        stats.delta_g <= params.max_delta_g
            && stats.delta_h <= params.max_delta_h
            && stats.delta_l <= params.max_delta_l
    );
    Ok(inst)
}

fn random_edges(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_deg: usize,
    density: f64,
) -> Vec<(usize, usize)> {
    let mut deg = vec![0usize; n];
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if deg[a] < max_deg && deg[b] < max_deg && rng.gen_bool(density) {
                deg[a] += 1;
                deg[b] += 1;
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Strict JSON parse plus invariant validation.
pub fn parse_instance(bytes: &[u8]) -> Result<Instance, InstanceError> {
    let mut inst: Instance =
        serde_json::from_slice(bytes).map_err(|e| InstanceError::Json {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
    let violations = validate_instance(&inst);
    if !violations.is_empty() {
        return Err(InstanceError::Violations(violations));
    }
    inst.canonicalize();
    Ok(inst)
}

/// Canonical serialization: sorted edge sets and lists, pretty-printed,
/// trailing newline. Byte-stable per instance.
pub fn serialize_instance(inst: &Instance) -> Vec<u8> {
    let mut canon = inst.clone();
    canon.canonicalize();
    let mut out = serde_json::to_vec_pretty(&canon).expect("instance serializes");
    out.push(b'\n');
    out
}
