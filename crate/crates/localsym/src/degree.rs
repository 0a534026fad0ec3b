//! Degree functions, degree-sequence edit distance (DSED), degree mismatch
//! counts for partial vertex mappings, and the exhaustive mismatch oracle.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};

/// Sparse histogram of vertex degrees: degree k maps to the number of
/// vertices with that degree. Zero counts are omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeFunction {
    counts: BTreeMap<u32, u64>,
}

impl DegreeFunction {
    pub fn from_graph(g: &Graph) -> DegreeFunction {
        let mut counts = BTreeMap::new();
        for v in g.vertices() {
            *counts.entry(g.degree(v) as u32).or_insert(0u64) += 1;
        }
        DegreeFunction { counts }
    }

    /// Number of vertices with degree `k`.
    pub fn get(&self, k: u32) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// (degree, count) pairs in increasing degree order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }

    /// Total vertex count.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// L1 distance, summed over the union of supports by merged iteration.
    pub fn l1_distance(&self, other: &DegreeFunction) -> u64 {
        let mut a = self.counts.iter().peekable();
        let mut b = other.counts.iter().peekable();
        let mut sum = 0u64;
        loop {
            match (a.peek(), b.peek()) {
                (Some(&(&ka, &ca)), Some(&(&kb, &cb))) => {
                    if ka < kb {
                        sum += ca;
                        a.next();
                    } else if kb < ka {
                        sum += cb;
                        b.next();
                    } else {
                        sum += ca.abs_diff(cb);
                        a.next();
                        b.next();
                    }
                }
                (Some(&(_, &ca)), None) => {
                    sum += ca;
                    a.next();
                }
                (None, Some(&(_, &cb))) => {
                    sum += cb;
                    b.next();
                }
                (None, None) => return sum,
            }
        }
    }
}

/// Degree function of a graph.
pub fn degree_function(g: &Graph) -> DegreeFunction {
    DegreeFunction::from_graph(g)
}

/// Degree-sequence edit distance: the L1 distance between degree functions.
pub fn dsed(g1: &Graph, g2: &Graph) -> u64 {
    degree_function(g1).l1_distance(&degree_function(g2))
}

/// Injective partial mapping from vertices of one graph to another.
#[derive(Debug, Clone, Default)]
pub struct PartialMapping {
    pairs: Vec<(Vertex, Vertex)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvalidMapping {
    #[error("vertex {0} mapped more than once")]
    DuplicateSource(Vertex),
    #[error("vertex {0} is the image of more than one vertex")]
    DuplicateTarget(Vertex),
    #[error("vertex {0} outside the source graph")]
    SourceOutOfRange(Vertex),
    #[error("vertex {0} outside the target graph")]
    TargetOutOfRange(Vertex),
}

impl PartialMapping {
    pub fn new(pairs: Vec<(Vertex, Vertex)>) -> PartialMapping {
        PartialMapping { pairs }
    }

    pub fn pairs(&self) -> &[(Vertex, Vertex)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn validate(&self, g1: &Graph, g2: &Graph) -> Result<(), InvalidMapping> {
        let mut src: Vec<Vertex> = self.pairs.iter().map(|&(u, _)| u).collect();
        let mut dst: Vec<Vertex> = self.pairs.iter().map(|&(_, v)| v).collect();
        src.sort_unstable();
        dst.sort_unstable();
        if let Some(w) = src.windows(2).find(|w| w[0] == w[1]) {
            return Err(InvalidMapping::DuplicateSource(w[0]));
        }
        if let Some(w) = dst.windows(2).find(|w| w[0] == w[1]) {
            return Err(InvalidMapping::DuplicateTarget(w[0]));
        }
        if let Some(&u) = src.iter().find(|&&u| u as usize >= g1.n()) {
            return Err(InvalidMapping::SourceOutOfRange(u));
        }
        if let Some(&v) = dst.iter().find(|&&v| v as usize >= g2.n()) {
            return Err(InvalidMapping::TargetOutOfRange(v));
        }
        Ok(())
    }
}

/// Degree mismatch count of a partial mapping: vertices mapped across
/// differing degrees are counted on both sides, and unmapped vertices of
/// both graphs each count once.
pub fn degree_mismatch_count(g1: &Graph, g2: &Graph, f: &PartialMapping) -> Result<u64, InvalidMapping> {
    f.validate(g1, g2)?;
    let mapped = f.pairs.len() as u64;
    let mut mismatched_pairs = 0u64;
    for &(u, v) in &f.pairs {
        if g1.degree(u) != g2.degree(v) {
            mismatched_pairs += 1;
        }
    }
    let unmapped = (g1.n() as u64 - mapped) + (g2.n() as u64 - mapped);
    Ok(2 * mismatched_pairs + unmapped)
}

/// Default cap on `n1 + n2` for the exhaustive minimum-mismatch search.
pub const DEFAULT_MISMATCH_CAP: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("graphs have {total} vertices combined, above the brute-force cap of {cap}")]
pub struct CapExceeded {
    pub total: usize,
    pub cap: usize,
}

/// Exact minimum of `degree_mismatch_count` over all partial injective
/// mappings, by exhaustive search. Intended as the test oracle for the
/// equality `dsed = min mismatch`.
pub fn min_mismatch_bruteforce(g1: &Graph, g2: &Graph) -> Result<u64, CapExceeded> {
    min_mismatch_bruteforce_with_cap(g1, g2, DEFAULT_MISMATCH_CAP)
}

/// Which vertices a mapping pairs up only matters through their degrees, so
/// the search enumerates transport plans between degree classes: how many
/// vertices of degree-class i of g1 map to degree-class j of g2. Each plan
/// is realized as a concrete mapping and evaluated with the definitional
/// mismatch count; branches are cut with a lower bound once an incumbent
/// exists.
pub fn min_mismatch_bruteforce_with_cap(g1: &Graph, g2: &Graph, cap: usize) -> Result<u64, CapExceeded> {
    let total = g1.n() + g2.n();
    if total > cap {
        return Err(CapExceeded { total, cap });
    }

    let classes1 = degree_classes(g1);
    let classes2 = degree_classes(g2);
    let mut state = PlanSearch {
        g1,
        g2,
        classes1: &classes1,
        classes2: &classes2,
        remaining1: classes1.iter().map(|(_, vs)| vs.len() as u64).collect(),
        remaining2: classes2.iter().map(|(_, vs)| vs.len() as u64).collect(),
        plan: Vec::new(),
        best: u64::MAX,
    };
    // Cells pairing equal degrees first, so good incumbents appear early.
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for i in 0..classes1.len() {
        for j in 0..classes2.len() {
            if classes1[i].0 == classes2[j].0 {
                cells.push((i, j));
            }
        }
    }
    for i in 0..classes1.len() {
        for j in 0..classes2.len() {
            if classes1[i].0 != classes2[j].0 {
                cells.push((i, j));
            }
        }
    }
    state.explore(&cells, 0);
    Ok(state.best)
}

fn degree_classes(g: &Graph) -> Vec<(u32, Vec<Vertex>)> {
    let mut by_degree: BTreeMap<u32, Vec<Vertex>> = BTreeMap::new();
    for v in g.vertices() {
        by_degree.entry(g.degree(v) as u32).or_default().push(v);
    }
    by_degree.into_iter().collect()
}

struct PlanSearch<'a> {
    g1: &'a Graph,
    g2: &'a Graph,
    classes1: &'a [(u32, Vec<Vertex>)],
    classes2: &'a [(u32, Vec<Vertex>)],
    remaining1: Vec<u64>,
    remaining2: Vec<u64>,
    plan: Vec<(usize, usize, u64)>,
    best: u64,
}

impl PlanSearch<'_> {
    fn explore(&mut self, cells: &[(usize, usize)], idx: usize) {
        if self.lower_bound(cells, idx) >= self.best {
            return;
        }
        if idx == cells.len() {
            let value = self.evaluate_leaf();
            self.best = self.best.min(value);
            return;
        }
        let (i, j) = cells[idx];
        let max_flow = self.remaining1[i].min(self.remaining2[j]);
        // Larger flows first: equal-degree cells saturate early, which
        // tightens the incumbent fast.
        for flow in (0..=max_flow).rev() {
            self.remaining1[i] -= flow;
            self.remaining2[j] -= flow;
            self.plan.push((i, j, flow));
            self.explore(cells, idx + 1);
            self.plan.pop();
            self.remaining1[i] += flow;
            self.remaining2[j] += flow;
        }
    }

    /// n1 + n2 - 2 * (equal-degree matches already placed or still
    /// possible) never overstates the final mismatch count.
    fn lower_bound(&self, cells: &[(usize, usize)], idx: usize) -> u64 {
        let mut equal = 0u64;
        for &(i, j, flow) in &self.plan {
            if self.classes1[i].0 == self.classes2[j].0 {
                equal += flow;
            }
        }
        for &(i, j) in &cells[idx..] {
            if self.classes1[i].0 == self.classes2[j].0 {
                equal += self.remaining1[i].min(self.remaining2[j]);
            }
        }
        (self.g1.n() + self.g2.n()) as u64 - 2 * equal
    }

    fn evaluate_leaf(&self) -> u64 {
        let mut used1 = vec![0usize; self.classes1.len()];
        let mut used2 = vec![0usize; self.classes2.len()];
        let mut pairs = Vec::new();
        for &(i, j, flow) in &self.plan {
            for _ in 0..flow {
                pairs.push((self.classes1[i].1[used1[i]], self.classes2[j].1[used2[j]]));
                used1[i] += 1;
                used2[j] += 1;
            }
        }
        degree_mismatch_count(self.g1, self.g2, &PartialMapping::new(pairs))
            .expect("plan realizations are valid mappings")
    }
}

/// Both sides of the subgraph inequality: the DSED between `g` and the
/// subgraph induced on `s`, and the bound `|V \ S| + |C(S)|` where `C(S)`
/// is the set of edges crossing between `s` and its complement.
pub fn subgraph_bound_check(g: &Graph, s: &VertexSet) -> (u64, u64) {
    let induced = g.induced(s);
    let d = dsed(g, &induced.graph);
    let bound = (g.n() - s.len()) as u64 + g.boundary_edge_count(s) as u64;
    (d, bound)
}
