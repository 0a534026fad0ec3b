//! Canonical forms for rooted graphs via individualization-refinement.
//!
//! Two rooted graphs get equal canonical codes exactly when a
//! root-preserving isomorphism exists between them, so symmetry classes of
//! n egonets cost n canonicalizations plus a sort instead of O(n^2)
//! pairwise isomorphism tests.

use thiserror::Error;

use crate::graph::{Graph, Vertex};

/// Version tag prefixed to serialized codes.
pub const CODE_FORMAT_VERSION: &str = "v1";

/// Default backtracking node budget per canonicalization.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// A graph with a distinguished root vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedGraph {
    pub graph: Graph,
    pub root: Vertex,
}

impl RootedGraph {
    pub fn new(graph: Graph, root: Vertex) -> RootedGraph {
        assert!((root as usize) < graph.n(), "root {root} outside graph");
        RootedGraph { graph, root }
    }
}

/// The backtracking search exhausted its node budget. Callers report the
/// query as undecided; a budget failure is never a silent wrong answer.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("canonicalization budget of {budget} search nodes exceeded")]
pub struct BudgetExceeded {
    pub budget: u64,
}

/// Canonical certificate of a rooted graph: the vertex count plus the
/// upper-triangular adjacency bitstring of the canonically relabeled graph,
/// with the root fixed at position 0. Codes order lexicographically by
/// (n, bits) so they can key sorted maps.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode {
    n: u32,
    bits: Vec<u8>,
}

impl CanonicalCode {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Serializes as `v1:` followed by the hex of the big-endian vertex
    /// count and the certificate bytes.
    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(3 + 8 + 2 * self.bits.len());
        s.push_str(CODE_FORMAT_VERSION);
        s.push(':');
        for b in self.n.to_be_bytes() {
            s.push_str(&format!("{b:02x}"));
        }
        for b in &self.bits {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }
}

/// Vertex coloring with class ids forming a contiguous range `0..num_colors`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<u32>,
    num_colors: u32,
}

impl Coloring {
    /// The root-distinguishing initial coloring: root in color 0, every
    /// other vertex in color 1.
    pub fn root_initial(n: usize, root: Vertex) -> Coloring {
        assert!((root as usize) < n);
        if n == 1 {
            return Coloring { colors: vec![0], num_colors: 1 };
        }
        let mut colors = vec![1u32; n];
        colors[root as usize] = 0;
        Coloring { colors, num_colors: 2 }
    }

    pub fn color(&self, v: Vertex) -> u32 {
        self.colors[v as usize]
    }

    pub fn num_colors(&self) -> u32 {
        self.num_colors
    }

    pub fn is_discrete(&self) -> bool {
        self.num_colors as usize == self.colors.len()
    }

    /// Color classes in color-id order, members ascending.
    pub fn classes(&self) -> Vec<Vec<Vertex>> {
        let mut out = vec![Vec::new(); self.num_colors as usize];
        for (v, &c) in self.colors.iter().enumerate() {
            out[c as usize].push(v as Vertex);
        }
        out
    }
}

/// One pass of signature computation and renumbering. Returns true if the
/// coloring was strictly refined.
fn refine_round(g: &Graph, colors: &mut [u32], num_colors: &mut u32) -> bool {
    let n = colors.len();
    let mut sigs: Vec<(u32, Vec<u32>)> = Vec::with_capacity(n);
    for v in 0..n {
        let mut nbr: Vec<u32> = g.neighbors(v as Vertex).iter().map(|&w| colors[w as usize]).collect();
        nbr.sort_unstable();
        sigs.push((colors[v], nbr));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| sigs[a].cmp(&sigs[b]));

    let mut next = 0u32;
    let mut new_colors = vec![0u32; n];
    for (i, &v) in order.iter().enumerate() {
        if i > 0 && sigs[v] != sigs[order[i - 1]] {
            next += 1;
        }
        new_colors[v] = next;
    }
    let new_num = next + 1;
    let changed = new_num != *num_colors;
    colors.copy_from_slice(&new_colors);
    *num_colors = new_num;
    changed
}

/// Coarsest stable refinement of `initial`: vertices keep a common color
/// only while they agree on their color and the multiset of neighbor colors
/// at every round. Color ids are assigned by sorted signature, so the
/// result is deterministic and the root (the unique color-0 vertex of the
/// initial coloring) stays in color 0.
pub fn refine(rg: &RootedGraph, initial: &Coloring) -> Coloring {
    let root_class = initial
        .colors
        .iter()
        .filter(|&&c| c == initial.color(rg.root))
        .count();
    assert_eq!(root_class, 1, "initial coloring must single out the root");
    let mut colors = initial.colors.clone();
    let mut num_colors = initial.num_colors;
    while refine_round(&rg.graph, &mut colors, &mut num_colors) {}
    Coloring { colors, num_colors }
}

/// Index of pair (i, j), i < j, in row-major upper-triangular order.
fn tri_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Adjacency bitstring of the graph relabeled by the discrete coloring
/// (vertex v goes to position colors[v]), MSB first.
fn certificate(g: &Graph, colors: &[u32]) -> Vec<u8> {
    let n = g.n();
    let nbits = n * (n - 1) / 2;
    let mut bits = vec![0u8; nbits.div_ceil(8)];
    for (u, v) in g.edges() {
        let (a, b) = (colors[u as usize] as usize, colors[v as usize] as usize);
        let idx = if a < b { tri_index(n, a, b) } else { tri_index(n, b, a) };
        bits[idx / 8] |= 0x80 >> (idx % 8);
    }
    bits
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, v: u32) -> u32 {
        let mut v = v;
        while self.parent[v as usize] != v {
            let up = self.parent[self.parent[v as usize] as usize];
            self.parent[v as usize] = up;
            v = up;
        }
        v
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
}

struct Search<'g> {
    g: &'g Graph,
    budget: u64,
    nodes_left: u64,
    best_bits: Option<Vec<u8>>,
    // Position -> vertex map of the current best leaf.
    best_inv: Vec<u32>,
    // Root-fixing automorphisms discovered at equal-certificate leaves.
    generators: Vec<Vec<u32>>,
    path: Vec<Vertex>,
}

impl<'g> Search<'g> {
    fn leaf(&mut self, colors: &[u32]) {
        let bits = certificate(self.g, colors);
        match &self.best_bits {
            None => {
                self.record_best(bits, colors);
            }
            Some(best) => match bits.cmp(best) {
                std::cmp::Ordering::Less => self.record_best(bits, colors),
                std::cmp::Ordering::Equal => {
                    // Equal certificates expose an automorphism: send each
                    // vertex to the one at the same position in the best
                    // labeling.
                    let n = self.g.n();
                    let mut sigma = vec![0u32; n];
                    let mut identity = true;
                    for v in 0..n {
                        sigma[v] = self.best_inv[colors[v] as usize];
                        identity &= sigma[v] == v as u32;
                    }
                    if !identity && !self.generators.contains(&sigma) {
                        self.generators.push(sigma);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }

    fn record_best(&mut self, bits: Vec<u8>, colors: &[u32]) {
        let mut inv = vec![0u32; colors.len()];
        for (v, &pos) in colors.iter().enumerate() {
            inv[pos as usize] = v as u32;
        }
        self.best_inv = inv;
        self.best_bits = Some(bits);
    }

    /// Detects the state where every non-singleton color class is a set of
    /// pairwise twins (equal neighborhoods outside the pair). Swapping two
    /// twins is an automorphism fixing everything else, so all discrete
    /// extensions of such a coloring carry equal certificates: one
    /// synthesized leaf stands for the whole subtree. Stars and the
    /// star-like egonets of sparse random graphs hit this immediately,
    /// which keeps their cost linear instead of factorial.
    fn twin_shortcut(&mut self, coloring: &Coloring) -> Option<Vec<u32>> {
        let classes = coloring.classes();
        for class in &classes {
            if class.len() < 2 {
                continue;
            }
            let first = class[0];
            for &v in &class[1..] {
                if !twins(self.g, first, v) {
                    return None;
                }
            }
        }

        // The per-class transpositions generate the full symmetric group on
        // each class; registering them lets ancestor nodes prune siblings.
        let n = self.g.n();
        for class in &classes {
            if class.len() < 2 {
                continue;
            }
            let first = class[0];
            for &v in &class[1..] {
                let mut sigma: Vec<u32> = (0..n as u32).collect();
                sigma.swap(first as usize, v as usize);
                if !self.generators.contains(&sigma) {
                    self.generators.push(sigma);
                }
            }
        }

        let mut colors = vec![0u32; n];
        let mut next = 0u32;
        for class in &classes {
            for &v in class {
                colors[v as usize] = next;
                next += 1;
            }
        }
        Some(colors)
    }

    /// Vertices of the first largest non-singleton color class, ascending.
    fn target_cell(&self, coloring: &Coloring) -> Vec<Vertex> {
        let mut sizes = vec![0u32; coloring.num_colors as usize];
        for &c in &coloring.colors {
            sizes[c as usize] += 1;
        }
        let max = sizes.iter().copied().filter(|&s| s >= 2).max().unwrap();
        let cell = sizes.iter().position(|&s| s == max).unwrap() as u32;
        (0..coloring.colors.len() as Vertex)
            .filter(|&v| coloring.colors[v as usize] == cell)
            .collect()
    }

    /// Orbit partition of the generators that fix the current search path
    /// pointwise; candidates in the orbit of an already-expanded sibling
    /// lead to leaves with identical certificates and are skipped.
    fn path_orbits(&self) -> UnionFind {
        let n = self.g.n();
        let mut uf = UnionFind::new(n);
        for sigma in &self.generators {
            if self.path.iter().all(|&v| sigma[v as usize] == v) {
                for v in 0..n as u32 {
                    uf.union(v, sigma[v as usize]);
                }
            }
        }
        uf
    }

    fn dfs(&mut self, coloring: Coloring) -> Result<(), BudgetExceeded> {
        if self.nodes_left == 0 {
            return Err(BudgetExceeded { budget: self.budget });
        }
        self.nodes_left -= 1;

        if coloring.is_discrete() {
            self.leaf(&coloring.colors);
            return Ok(());
        }

        if let Some(leaf_colors) = self.twin_shortcut(&coloring) {
            self.leaf(&leaf_colors);
            return Ok(());
        }

        let cell = self.target_cell(&coloring);
        let mut tried: Vec<Vertex> = Vec::new();
        let mut gens_seen = usize::MAX;
        let mut orbits = None;
        for &v in &cell {
            if !tried.is_empty() {
                if self.generators.len() != gens_seen {
                    orbits = Some(self.path_orbits());
                    gens_seen = self.generators.len();
                }
                let uf = orbits.as_mut().unwrap();
                let rv = uf.find(v);
                if tried.iter().any(|&u| uf.find(u) == rv) {
                    continue;
                }
            }
            tried.push(v);

            let mut child = coloring.clone();
            individualize(&mut child, v);
            let mut num = child.num_colors;
            while refine_round(self.g, &mut child.colors, &mut num) {}
            child.num_colors = num;

            self.path.push(v);
            let r = self.dfs(child);
            self.path.pop();
            r?;
        }
        Ok(())
    }
}

/// True iff swapping u and v while fixing every other vertex is an
/// automorphism: their neighborhoods agree outside {u, v}.
fn twins(g: &Graph, u: Vertex, v: Vertex) -> bool {
    let mut a = g.neighbors(u).iter().filter(|&&w| w != u && w != v);
    let mut b = g.neighbors(v).iter().filter(|&&w| w != u && w != v);
    loop {
        match (a.next(), b.next()) {
            (None, None) => return true,
            (Some(x), Some(y)) if x == y => continue,
            _ => return false,
        }
    }
}

/// Splits v out of its color class: v keeps the class color, everyone else
/// in the class (and every higher class) shifts up by one.
fn individualize(coloring: &mut Coloring, v: Vertex) {
    let cv = coloring.colors[v as usize];
    for (w, c) in coloring.colors.iter_mut().enumerate() {
        if *c > cv || (*c == cv && w as u32 != v) {
            *c += 1;
        }
    }
    coloring.num_colors += 1;
}

/// Canonical code with the default node budget.
pub fn canonical_code(rg: &RootedGraph) -> Result<CanonicalCode, BudgetExceeded> {
    canonical_code_with_budget(rg, DEFAULT_NODE_BUDGET)
}

/// Canonical code of a rooted graph: the lexicographically smallest
/// upper-triangular adjacency bitstring over all root-preserving
/// relabelings reachable by individualization-refinement, with the root at
/// position 0.
pub fn canonical_code_with_budget(rg: &RootedGraph, budget: u64) -> Result<CanonicalCode, BudgetExceeded> {
    canonical_code_rooted(&rg.graph, rg.root, budget)
}

/// Same computation without requiring an owned `RootedGraph`; partition
/// construction roots one shared graph at every vertex.
pub fn canonical_code_rooted(g: &Graph, root: Vertex, budget: u64) -> Result<CanonicalCode, BudgetExceeded> {
    assert!((root as usize) < g.n(), "root {root} outside graph");
    let n = g.n();
    let mut start = Coloring::root_initial(n, root);
    let mut num = start.num_colors;
    while refine_round(g, &mut start.colors, &mut num) {}
    start.num_colors = num;
    let mut search = Search {
        g,
        budget,
        nodes_left: budget,
        best_bits: None,
        best_inv: Vec::new(),
        generators: Vec::new(),
        path: Vec::new(),
    };
    search.dfs(start)?;
    Ok(CanonicalCode {
        n: n as u32,
        bits: search.best_bits.expect("search visited no leaf"),
    })
}

/// True iff a root-preserving isomorphism exists. Cheap pre-filters
/// (vertex count, edge count, root degree, sorted degree sequence) short
/// circuit to false before any backtracking.
pub fn rooted_isomorphic(a: &RootedGraph, b: &RootedGraph) -> Result<bool, BudgetExceeded> {
    rooted_isomorphic_with_budget(a, b, DEFAULT_NODE_BUDGET)
}

pub fn rooted_isomorphic_with_budget(a: &RootedGraph, b: &RootedGraph, budget: u64) -> Result<bool, BudgetExceeded> {
    if a.graph.n() != b.graph.n()
        || a.graph.m() != b.graph.m()
        || a.graph.degree(a.root) != b.graph.degree(b.root)
        || a.graph.degree_sequence() != b.graph.degree_sequence()
    {
        return Ok(false);
    }
    Ok(canonical_code_with_budget(a, budget)? == canonical_code_with_budget(b, budget)?)
}
