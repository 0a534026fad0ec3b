//! Brute-force oracles shared by the integration suites. Everything here
//! is exponential and intended for graphs of at most 7 or 8 vertices.
//!
//! Each test binary compiles this module separately, so any one binary
//! uses only a subset of the oracles.
#![allow(dead_code)]

use localsym::canonical::RootedGraph;
use localsym::degree::{degree_mismatch_count, PartialMapping};
use localsym::graph::{Graph, Vertex};

/// All permutations of `items`, in lexicographic order.
pub fn permutations(items: &[Vertex]) -> Vec<Vec<Vertex>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// Relabels a graph: vertex v becomes perm[v].
pub fn relabel(g: &Graph, perm: &[Vertex]) -> Graph {
    let edges: Vec<_> = g.edges().map(|(u, v)| (perm[u as usize], perm[v as usize])).collect();
    Graph::from_edges(g.n(), &edges)
}

fn is_isomorphism(a: &Graph, b: &Graph, map: &[Vertex]) -> bool {
    a.edges().all(|(u, v)| b.has_edge(map[u as usize], map[v as usize]))
}

/// Rooted isomorphism decided by trying every root-fixing bijection.
pub fn rooted_iso_bruteforce(a: &RootedGraph, b: &RootedGraph) -> bool {
    if a.graph.n() != b.graph.n() || a.graph.m() != b.graph.m() {
        return false;
    }
    let others_a: Vec<Vertex> = (0..a.graph.n() as Vertex).filter(|&v| v != a.root).collect();
    let others_b: Vec<Vertex> = (0..b.graph.n() as Vertex).filter(|&v| v != b.root).collect();
    for perm in permutations(&others_b) {
        let mut map = vec![0 as Vertex; a.graph.n()];
        map[a.root as usize] = b.root;
        for (i, &va) in others_a.iter().enumerate() {
            map[va as usize] = perm[i];
        }
        if is_isomorphism(&a.graph, &b.graph, &map) {
            return true;
        }
    }
    false
}

/// Every automorphism of g, as vertex->vertex maps (m edges vs m edges, so
/// checking one direction suffices).
pub fn automorphisms(g: &Graph) -> Vec<Vec<Vertex>> {
    let ids: Vec<Vertex> = (0..g.n() as Vertex).collect();
    permutations(&ids)
        .into_iter()
        .filter(|perm| is_isomorphism(g, g, perm))
        .collect()
}

/// Minimum degree mismatch count over every partial injective mapping,
/// enumerated rawly (subsets times injections); only sane for n1+n2 <= 8.
pub fn min_mismatch_raw(g1: &Graph, g2: &Graph) -> u64 {
    let n1 = g1.n();
    let n2 = g2.n();
    let targets: Vec<Vertex> = (0..n2 as Vertex).collect();
    let mut best = u64::MAX;
    for subset in 0u32..(1 << n1) {
        let sources: Vec<Vertex> = (0..n1 as Vertex).filter(|&v| subset >> v & 1 == 1).collect();
        if sources.len() > n2 {
            continue;
        }
        for perm in permutations(&targets) {
            let pairs: Vec<_> = sources.iter().copied().zip(perm.iter().copied()).collect();
            let f = PartialMapping::new(pairs);
            let value = degree_mismatch_count(g1, g2, &f).expect("constructed mappings are valid");
            best = best.min(value);
        }
    }
    best
}
