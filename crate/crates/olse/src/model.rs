//! Instance and solution data model shared by every solver.
//!
//! Vertices of both graphs are identified by their position in the linear
//! order: G-vertices are `0..n_g` and H-vertices are `0..n_h`, and index
//! order *is* the order. Lists are kept strictly ascending.

use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

/// An instance of the (O)L(I)SE problem family.
///
/// Fields are public plain data; use [`validate_instance`] to check the
/// structural invariants. Solvers assume a valid instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub n_g: usize,
    pub n_h: usize,
    pub edges_g: Vec<(usize, usize)>,
    pub edges_h: Vec<(usize, usize)>,
    pub lists: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl Instance {
    /// Builds an instance in canonical form: edge pairs ascending, edge sets
    /// sorted and deduplicated, lists sorted and deduplicated.
    pub fn new(
        n_g: usize,
        n_h: usize,
        edges_g: Vec<(usize, usize)>,
        edges_h: Vec<(usize, usize)>,
        lists: Vec<Vec<usize>>,
        k: Option<usize>,
    ) -> Self {
        let mut inst = Instance {
            n_g,
            n_h,
            edges_g,
            edges_h,
            lists,
            k,
        };
        inst.canonicalize();
        inst
    }

    /// Edgeless instance with the given lists.
    pub fn edgeless(n_g: usize, n_h: usize, lists: Vec<Vec<usize>>) -> Self {
        Self::new(n_g, n_h, Vec::new(), Vec::new(), lists, None)
    }

    pub fn canonicalize(&mut self) {
        for e in self.edges_g.iter_mut().chain(self.edges_h.iter_mut()) {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        self.edges_g.sort_unstable();
        self.edges_g.dedup();
        self.edges_h.sort_unstable();
        self.edges_h.dedup();
        for l in &mut self.lists {
            l.sort_unstable();
            l.dedup();
        }
    }

    pub fn g_degrees(&self) -> Vec<usize> {
        degrees(self.n_g, &self.edges_g)
    }

    pub fn h_degrees(&self) -> Vec<usize> {
        degrees(self.n_h, &self.edges_h)
    }

    pub fn g_adjacency(&self) -> Vec<Vec<usize>> {
        adjacency(self.n_g, &self.edges_g)
    }

    pub fn h_adjacency(&self) -> Vec<Vec<usize>> {
        adjacency(self.n_h, &self.edges_h)
    }

    pub fn has_edge_g(&self, u: usize, v: usize) -> bool {
        let e = if u <= v { (u, v) } else { (v, u) };
        self.edges_g.binary_search(&e).is_ok()
    }

    pub fn has_edge_h(&self, u: usize, v: usize) -> bool {
        let e = if u <= v { (u, v) } else { (v, u) };
        self.edges_h.binary_search(&e).is_ok()
    }

    pub fn list(&self, u: usize) -> &[usize] {
        &self.lists[u]
    }
}

fn degrees(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut deg = vec![0; n];
    for &(a, b) in edges {
        if a < n {
            deg[a] += 1;
        }
        if b < n {
            deg[b] += 1;
        }
    }
    deg
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a < n && b < n {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    adj
}

/// Which of the four problem variants a solver or check runs under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Olse,
    Olise,
    Lse,
    Lise,
}

impl Variant {
    /// Ordered variants enforce the order condition.
    pub fn ordered(self) -> bool {
        matches!(self, Variant::Olse | Variant::Olise)
    }

    /// Induced variants enforce the biconditional edge condition.
    pub fn induced(self) -> bool {
        matches!(self, Variant::Olise | Variant::Lise)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variant::Olse => "olse",
            Variant::Olise => "olise",
            Variant::Lse => "lse",
            Variant::Lise => "lise",
        };
        f.write_str(s)
    }
}

/// A partial injective map from G-vertices to H-vertices, kept sorted by
/// G-vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pairs: Vec<(usize, usize)>,
}

impl Embedding {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        Embedding { pairs }
    }

    pub fn empty() -> Self {
        Embedding { pairs: Vec::new() }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// An embedding together with its size and the solver that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub embedding: Embedding,
    pub size: usize,
    pub algorithm: String,
}

impl Solution {
    pub fn new(embedding: Embedding, algorithm: impl Into<String>) -> Self {
        let size = embedding.len();
        Solution {
            embedding,
            size,
            algorithm: algorithm.into(),
        }
    }
}

/// One structural defect of an [`Instance`]. Violations are data, not
/// errors, so fuzzers and the CLI can assert on them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    EdgeEndpointOutOfRange { graph: char, edge: (usize, usize) },
    SelfLoop { graph: char, vertex: usize },
    DuplicateEdge { graph: char, edge: (usize, usize) },
    ListCountMismatch { expected: usize, actual: usize },
    ListNotAscending { vertex: usize },
    ListEntryOutOfRange { vertex: usize, entry: usize },
    KOutOfRange { k: usize, max: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EdgeEndpointOutOfRange { graph, edge } => {
                write!(f, "edge ({}, {}) in {} out of range", edge.0, edge.1, graph)
            }
            Violation::SelfLoop { graph, vertex } => {
                write!(f, "self-loop at vertex {vertex} in {graph}")
            }
            Violation::DuplicateEdge { graph, edge } => {
                write!(f, "duplicate edge ({}, {}) in {}", edge.0, edge.1, graph)
            }
            Violation::ListCountMismatch { expected, actual } => {
                write!(f, "expected {expected} lists, found {actual}")
            }
            Violation::ListNotAscending { vertex } => {
                write!(f, "list of vertex {vertex} not strictly ascending")
            }
            Violation::ListEntryOutOfRange { vertex, entry } => {
                write!(f, "list entry {entry} of vertex {vertex} out of range")
            }
            Violation::KOutOfRange { k, max } => write!(f, "k = {k} exceeds {max}"),
        }
    }
}

/// Returns every invariant violation of `inst`; empty means valid.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    check_edges(&inst.edges_g, inst.n_g, 'G', &mut out);
    check_edges(&inst.edges_h, inst.n_h, 'H', &mut out);
    if inst.lists.len() != inst.n_g {
        out.push(Violation::ListCountMismatch {
            expected: inst.n_g,
            actual: inst.lists.len(),
        });
    }
    for (u, l) in inst.lists.iter().enumerate() {
        if l.windows(2).any(|w| w[0] >= w[1]) {
            out.push(Violation::ListNotAscending { vertex: u });
        }
        for &v in l {
            if v >= inst.n_h {
                out.push(Violation::ListEntryOutOfRange { vertex: u, entry: v });
            }
        }
    }
    if let Some(k) = inst.k {
        let max = inst.n_g.min(inst.n_h);
        if k > max {
            out.push(Violation::KOutOfRange { k, max });
        }
    }
    out
}

fn check_edges(edges: &[(usize, usize)], n: usize, graph: char, out: &mut Vec<Violation>) {
    let mut seen = HashSet::new();
    for &(a, b) in edges {
        if a >= n || b >= n {
            out.push(Violation::EdgeEndpointOutOfRange { graph, edge: (a, b) });
            continue;
        }
        if a == b {
            out.push(Violation::SelfLoop { graph, vertex: a });
            continue;
        }
        let key = (a.min(b), a.max(b));
        if !seen.insert(key) {
            out.push(Violation::DuplicateEdge { graph, edge: (a, b) });
        }
    }
}

/// First condition an embedding violates, in the order they are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    /// Two pairs share a G-vertex or an H-vertex.
    Injectivity,
    /// Some pair maps a vertex outside its list.
    List,
    /// Ordered variants: images not strictly ascending with the G-order.
    Order,
    /// A G-edge inside the embedded subgraph has no H-edge image.
    EdgePreserved,
    /// Induced variants: an H-edge between images with no G-edge preimage.
    InducedEdge,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("embedding pair ({g}, {h}) out of range")]
    OutOfRange { g: usize, h: usize },
}

/// Checks an embedding against the semantics of `variant`.
///
/// Returns `Ok(None)` if the embedding is valid, `Ok(Some(c))` with the
/// first violated condition otherwise, and `Err` for out-of-range indices
/// (a malformed certificate rather than an invalid one).
pub fn check_embedding(
    inst: &Instance,
    emb: &Embedding,
    variant: Variant,
) -> Result<Option<Condition>, CertificateError> {
    let pairs = emb.pairs();
    for &(g, h) in pairs {
        if g >= inst.n_g || h >= inst.n_h {
            return Err(CertificateError::OutOfRange { g, h });
        }
    }
    let mut hs: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
        return Ok(Some(Condition::Injectivity));
    }
    hs.sort_unstable();
    if hs.windows(2).any(|w| w[0] == w[1]) {
        return Ok(Some(Condition::Injectivity));
    }
    for &(g, h) in pairs {
        if inst.lists[g].binary_search(&h).is_err() {
            return Ok(Some(Condition::List));
        }
    }
    if variant.ordered() && pairs.windows(2).any(|w| w[0].1 >= w[1].1) {
        return Ok(Some(Condition::Order));
    }
    for (i, &(g, h)) in pairs.iter().enumerate() {
        for &(g2, h2) in &pairs[i + 1..] {
            if inst.has_edge_g(g, g2) && !inst.has_edge_h(h, h2) {
                return Ok(Some(Condition::EdgePreserved));
            }
            if variant.induced() && inst.has_edge_h(h, h2) && !inst.has_edge_g(g, g2) {
                return Ok(Some(Condition::InducedEdge));
            }
        }
    }
    Ok(None)
}

/// True iff `emb` is a well-formed valid embedding for `variant`.
pub fn embedding_is_valid(inst: &Instance, emb: &Embedding, variant: Variant) -> bool {
    matches!(check_embedding(inst, emb, variant), Ok(None))
}

/// Maximum degree of G, maximum degree of H, and the list width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeStats {
    pub delta_g: usize,
    pub delta_h: usize,
    pub delta_l: usize,
}

pub fn degree_stats(inst: &Instance) -> DegreeStats {
    DegreeStats {
        delta_g: inst.g_degrees().into_iter().max().unwrap_or(0),
        delta_h: inst.h_degrees().into_iter().max().unwrap_or(0),
        delta_l: inst.lists.iter().map(|l| l.len()).max().unwrap_or(0),
    }
}
