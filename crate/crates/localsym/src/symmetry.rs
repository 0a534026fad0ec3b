//! k-local and global symmetry queries: vertex pair tests, whole-graph
//! verdicts, and symmetry-class partitions.
//!
//! Two vertices are k-locally symmetric when a root-preserving isomorphism
//! joins their closed k-neighborhoods, and globally symmetric when an
//! automorphism of the whole graph maps one to the other. Both reduce to
//! equality of rooted canonical codes, rooting the whole graph for the
//! global case.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::{canonical_code_rooted, CanonicalCode, RootedGraph, DEFAULT_NODE_BUDGET};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::random::peripheral_edge_free;

/// Which neighborhoods a query compares: closed k-neighborhoods, or the
/// whole graph for global symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Locality {
    K(u32),
    Global,
}

impl std::fmt::Display for Locality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Locality::K(k) => write!(f, "{k}"),
            Locality::Global => write!(f, "global"),
        }
    }
}

/// Outcome of a pair query. Undecided reports a canonicalization budget
/// failure, never a guess.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairVerdict {
    Symmetric,
    Asymmetric,
    Undecided,
}

impl std::fmt::Display for PairVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let word = match self {
            PairVerdict::Symmetric => "symmetric",
            PairVerdict::Asymmetric => "asymmetric",
            PairVerdict::Undecided => "undecided",
        };
        f.write_str(word)
    }
}

/// Whole-graph verdict: `symmetric` means some pair of distinct vertices
/// was shown symmetric, in which case `witness` names one such pair.
/// Vertices whose canonicalization ran out of budget are listed in
/// `undecided`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryVerdict {
    pub symmetric: bool,
    pub witness: Option<(Vertex, Vertex)>,
    pub undecided: Vec<Vertex>,
}

impl SymmetryVerdict {
    /// Collapses to the tri-state reading: a graph with no witness but
    /// undecided vertices is undecided, not asymmetric.
    pub fn status(&self) -> PairVerdict {
        if self.symmetric {
            PairVerdict::Symmetric
        } else if self.undecided.is_empty() {
            PairVerdict::Asymmetric
        } else {
            PairVerdict::Undecided
        }
    }
}

/// Tuning for whole-graph queries.
#[derive(Debug, Clone, Copy)]
pub struct QueryOpts {
    pub budget: u64,
    /// Group k=1 egonets by degree signature first; star egonets of equal
    /// size are an instant witness without canonicalization.
    pub star_fast_path: bool,
}

impl Default for QueryOpts {
    fn default() -> QueryOpts {
        QueryOpts {
            budget: DEFAULT_NODE_BUDGET,
            star_fast_path: true,
        }
    }
}

/// The closed k-neighborhood of v as a rooted graph, rooted at v's image.
pub fn egonet(g: &Graph, v: Vertex, k: u32) -> RootedGraph {
    let sub = g.closed_k_neighborhood(&VertexSet::singleton(v), k);
    let root = sub.position_of(v).expect("center always belongs to its neighborhood");
    RootedGraph::new(sub.graph, root)
}

fn egonet_code(g: &Graph, v: Vertex, k: u32, budget: u64) -> Result<CanonicalCode, crate::canonical::BudgetExceeded> {
    let rg = egonet(g, v, k);
    canonical_code_rooted(&rg.graph, rg.root, budget)
}

/// Are v1 and v2 k-locally symmetric? Compares rooted canonical codes of
/// the two closed k-neighborhoods.
pub fn k_locally_symmetric(g: &Graph, v1: Vertex, v2: Vertex, k: u32) -> PairVerdict {
    k_locally_symmetric_with_budget(g, v1, v2, k, DEFAULT_NODE_BUDGET)
}

pub fn k_locally_symmetric_with_budget(g: &Graph, v1: Vertex, v2: Vertex, k: u32, budget: u64) -> PairVerdict {
    assert_ne!(v1, v2, "pair queries need distinct vertices");
    let a = egonet(g, v1, k);
    let b = egonet(g, v2, k);
    match crate::canonical::rooted_isomorphic_with_budget(&a, &b, budget) {
        Ok(true) => PairVerdict::Symmetric,
        Ok(false) => PairVerdict::Asymmetric,
        Err(_) => PairVerdict::Undecided,
    }
}

/// Does some automorphism of g map v1 to v2? Equivalent to equality of the
/// whole-graph canonical codes rooted at v1 and at v2.
pub fn globally_symmetric_pair(g: &Graph, v1: Vertex, v2: Vertex) -> PairVerdict {
    globally_symmetric_pair_with_budget(g, v1, v2, DEFAULT_NODE_BUDGET)
}

pub fn globally_symmetric_pair_with_budget(g: &Graph, v1: Vertex, v2: Vertex, budget: u64) -> PairVerdict {
    assert_ne!(v1, v2, "pair queries need distinct vertices");
    if g.degree(v1) != g.degree(v2) {
        return PairVerdict::Asymmetric;
    }
    let a = match canonical_code_rooted(g, v1, budget) {
        Ok(c) => c,
        Err(_) => return PairVerdict::Undecided,
    };
    let b = match canonical_code_rooted(g, v2, budget) {
        Ok(c) => c,
        Err(_) => return PairVerdict::Undecided,
    };
    if a == b {
        PairVerdict::Symmetric
    } else {
        PairVerdict::Asymmetric
    }
}

/// Partition of all vertices into symmetry classes.
///
/// Classes are sorted by size descending, ties by smallest member; members
/// ascend. `codes` holds the representative canonical code per class;
/// vertices whose canonicalization exceeded the budget sit in singleton
/// classes with no code and are listed in `undecided`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryClassPartition {
    pub locality: Locality,
    pub n: usize,
    pub classes: Vec<Vec<Vertex>>,
    pub codes: Vec<Option<CanonicalCode>>,
    pub undecided: Vec<Vertex>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum KField {
    Order(u32),
    Marker(&'static str),
}

#[derive(Serialize)]
struct PartitionReport<'a> {
    k: KField,
    n: usize,
    classes: &'a [Vec<Vertex>],
    undecided: &'a [Vertex],
    codes: Vec<Option<String>>,
}

impl SymmetryClassPartition {
    /// JSON report with stable field order:
    /// { "k", "n", "classes", "undecided", "codes" }.
    pub fn to_json(&self) -> String {
        let report = PartitionReport {
            k: match self.locality {
                Locality::K(k) => KField::Order(k),
                Locality::Global => KField::Marker("global"),
            },
            n: self.n,
            classes: &self.classes,
            undecided: &self.undecided,
            codes: self.codes.iter().map(|c| c.as_ref().map(|c| c.to_hex())).collect(),
        };
        serde_json::to_string(&report).expect("report serialization cannot fail")
    }
}

/// Groups all vertices by the canonical code of their k-neighborhood (or of
/// the whole graph rooted at each vertex, for global locality). Costs n
/// canonicalizations plus a sort; canonicalizations run in parallel.
pub fn symmetry_partition(g: &Graph, locality: Locality) -> SymmetryClassPartition {
    symmetry_partition_with_budget(g, locality, DEFAULT_NODE_BUDGET)
}

pub fn symmetry_partition_with_budget(g: &Graph, locality: Locality, budget: u64) -> SymmetryClassPartition {
    let n = g.n();
    let results: Vec<_> = (0..n as Vertex)
        .into_par_iter()
        .map(|v| match locality {
            Locality::K(k) => egonet_code(g, v, k, budget),
            Locality::Global => canonical_code_rooted(g, v, budget),
        })
        .collect();

    let mut groups: BTreeMap<CanonicalCode, Vec<Vertex>> = BTreeMap::new();
    let mut undecided = Vec::new();
    for (v, result) in results.into_iter().enumerate() {
        match result {
            Ok(code) => groups.entry(code).or_default().push(v as Vertex),
            Err(_) => undecided.push(v as Vertex),
        }
    }

    let mut entries: Vec<(Vec<Vertex>, Option<CanonicalCode>)> = groups
        .into_iter()
        .map(|(code, members)| (members, Some(code)))
        .collect();
    entries.extend(undecided.iter().map(|&v| (vec![v], None)));
    entries.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0[0].cmp(&b.0[0])));

    let (classes, codes) = entries.into_iter().unzip();
    SymmetryClassPartition {
        locality,
        n,
        classes,
        codes,
        undecided,
    }
}

/// Is the graph k-locally symmetric: do two distinct vertices have
/// isomorphic rooted k-neighborhoods?
pub fn graph_k_locally_symmetric(g: &Graph, k: u32, opts: &QueryOpts) -> SymmetryVerdict {
    if g.n() < 2 {
        return SymmetryVerdict { symmetric: false, witness: None, undecided: Vec::new() };
    }
    if k == 1 && opts.star_fast_path {
        return one_local_fast(g, opts.budget);
    }
    partition_verdict(&symmetry_partition_with_budget(g, Locality::K(k), opts.budget))
}

/// Does the graph admit a non-trivial automorphism?
pub fn graph_globally_symmetric(g: &Graph, opts: &QueryOpts) -> SymmetryVerdict {
    if g.n() < 2 {
        return SymmetryVerdict { symmetric: false, witness: None, undecided: Vec::new() };
    }
    partition_verdict(&symmetry_partition_with_budget(g, Locality::Global, opts.budget))
}

fn partition_verdict(partition: &SymmetryClassPartition) -> SymmetryVerdict {
    let witness = partition
        .classes
        .iter()
        .find(|class| class.len() >= 2)
        .map(|class| (class[0], class[1]));
    SymmetryVerdict {
        symmetric: witness.is_some(),
        witness,
        undecided: partition.undecided.clone(),
    }
}

/// Sorted multiset of egonet-internal degrees: the center contributes its
/// own degree, each neighbor contributes 1 plus its peripheral degree.
/// Equal signatures are necessary for 1-local symmetry, and for star
/// egonets (all peripheral degrees zero) they are also sufficient.
fn egonet_degree_signature(g: &Graph, v: Vertex) -> Vec<u32> {
    let nbrs = g.neighbors(v);
    let mut sig = Vec::with_capacity(nbrs.len() + 1);
    sig.push(nbrs.len() as u32);
    for &u in nbrs {
        let mut internal = 1u32;
        let mut a = nbrs.iter().peekable();
        let mut b = g.neighbors(u).iter().peekable();
        while let (Some(&&x), Some(&&y)) = (a.peek(), b.peek()) {
            match x.cmp(&y) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => {
                    internal += 1;
                    a.next();
                    b.next();
                }
            }
        }
        sig.push(internal);
    }
    sig.sort_unstable();
    sig
}

fn signature_is_star(sig: &[u32]) -> bool {
    let s = sig.len() as u32;
    if s == 1 {
        return sig[0] == 0;
    }
    sig[..sig.len() - 1].iter().all(|&d| d == 1) && sig[sig.len() - 1] == s - 1
}

/// k=1 shortcut from the structure of sparse egonets: bucket vertices by
/// egonet degree signature; a signature bucket of star egonets with at
/// least two members is an immediate witness, and only non-star buckets
/// with at least two members pay for canonicalization.
fn one_local_fast(g: &Graph, budget: u64) -> SymmetryVerdict {
    let sigs: Vec<Vec<u32>> = g
        .vertices()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|v| egonet_degree_signature(g, v))
        .collect();

    let mut buckets: BTreeMap<&[u32], Vec<Vertex>> = BTreeMap::new();
    for (v, sig) in sigs.iter().enumerate() {
        buckets.entry(sig.as_slice()).or_default().push(v as Vertex);
    }

    let mut undecided = Vec::new();
    for (sig, members) in &buckets {
        if members.len() < 2 {
            continue;
        }
        if signature_is_star(sig) {
            debug_assert!(peripheral_edge_free(g, members[0]));
            return SymmetryVerdict {
                symmetric: true,
                witness: Some((members[0], members[1])),
                undecided: Vec::new(),
            };
        }
        let codes: Vec<_> = members
            .par_iter()
            .map(|&v| egonet_code(g, v, 1, budget))
            .collect();
        let mut seen: BTreeMap<CanonicalCode, Vertex> = BTreeMap::new();
        for (&v, result) in members.iter().zip(codes) {
            match result {
                Ok(code) => {
                    if let Some(&first) = seen.get(&code) {
                        return SymmetryVerdict {
                            symmetric: true,
                            witness: Some((first, v)),
                            undecided: Vec::new(),
                        };
                    }
                    seen.insert(code, v);
                }
                Err(_) => undecided.push(v),
            }
        }
    }
    undecided.sort_unstable();
    SymmetryVerdict {
        symmetric: false,
        witness: None,
        undecided,
    }
}
