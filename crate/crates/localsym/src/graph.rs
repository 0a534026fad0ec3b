//! Compressed sparse row storage for simple undirected graphs, vertex sets,
//! induced subgraphs, and breadth-first neighborhood/distance queries.

use thiserror::Error;

/// Vertex identifier. Graphs are limited to `u32::MAX` vertices.
pub type Vertex = u32;

/// Errors raised while building a graph from an edge list.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) has an endpoint outside 0..{2}")]
    EndpointOutOfRange(Vertex, Vertex, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),
}

/// Result of building a graph from a raw edge list. In lenient mode
/// `dropped` counts the self-loops and duplicate edges that were discarded;
/// in strict mode it is always zero.
#[derive(Debug, Clone)]
pub struct EdgeListBuild {
    pub graph: Graph,
    pub dropped: usize,
}

/// A simple undirected graph in CSR form: neighbor lists are sorted and
/// contain no self-loops or duplicates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    offsets: Vec<usize>,
    adj: Vec<Vertex>,
    m: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={}, edges={:?})", self.n(), self.m(), self.edges().collect::<Vec<_>>())
    }
}

impl Graph {
    /// Builds a graph on `n` vertices from an undirected edge list.
    ///
    /// In strict mode self-loops and duplicate edges (in either orientation)
    /// are errors. In lenient mode they are dropped and counted. Endpoints
    /// outside `0..n` are errors in both modes.
    pub fn from_edge_list(n: usize, edges: &[(Vertex, Vertex)], strict: bool) -> Result<EdgeListBuild, GraphError> {
        assert!(n <= u32::MAX as usize, "vertex count exceeds u32 range");
        let mut dropped = 0usize;
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            if (u as usize) >= n || (v as usize) >= n {
                return Err(GraphError::EndpointOutOfRange(u, v, n));
            }
            if u == v {
                if strict {
                    return Err(GraphError::SelfLoop(u));
                }
                dropped += 1;
                continue;
            }
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }

        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut adj = vec![0 as Vertex; offsets[n]];
        let mut cursor = offsets.clone();
        for &(u, v) in edges {
            if u == v {
                continue;
            }
            adj[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            adj[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }

        // Sort each neighbor list, then squeeze out duplicates in place.
        // Every duplicate undirected edge shows up once in each endpoint's
        // list, so the number of removed entries is exactly twice the number
        // of duplicate edges.
        let mut write = 0usize;
        let mut new_offsets = vec![0usize; n + 1];
        let mut removed_entries = 0usize;
        for v in 0..n {
            let (lo, hi) = (offsets[v], offsets[v + 1]);
            adj[lo..hi].sort_unstable();
            new_offsets[v] = write;
            let mut prev: Option<Vertex> = None;
            for i in lo..hi {
                let w = adj[i];
                if prev == Some(w) {
                    if strict {
                        let (a, b) = (w.min(v as Vertex), w.max(v as Vertex));
                        return Err(GraphError::DuplicateEdge(a, b));
                    }
                    removed_entries += 1;
                    continue;
                }
                prev = Some(w);
                adj[write] = w;
                write += 1;
            }
        }
        new_offsets[n] = write;
        adj.truncate(write);
        dropped += removed_entries / 2;

        Ok(EdgeListBuild {
            graph: Graph {
                offsets: new_offsets,
                m: write / 2,
                adj,
            },
            dropped,
        })
    }

    /// Strict construction helper for fixtures; panics on malformed input.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Graph {
        Graph::from_edge_list(n, edges, true).expect("malformed edge list").graph
    }

    /// The graph on `n` vertices with no edges.
    pub fn edgeless(n: usize) -> Graph {
        Graph {
            offsets: vec![0; n + 1],
            adj: Vec::new(),
            m: 0,
        }
    }

    /// The complete graph on `n` vertices.
    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n as Vertex {
            for j in (i + 1)..n as Vertex {
                edges.push((i, j));
            }
        }
        Graph::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        0..self.n() as Vertex
    }

    /// All edges as pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices()
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Open k-neighborhood of a nonempty vertex set: every vertex at BFS
    /// distance at most `k` from some member of `s`, including `s` itself.
    pub fn open_k_neighborhood(&self, s: &VertexSet, k: u32) -> VertexSet {
        assert!(!s.is_empty(), "neighborhood of an empty set");
        let n = self.n();
        let mut dist = vec![u32::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for &v in s.members() {
            assert!((v as usize) < n, "vertex {v} outside graph");
            if dist[v as usize] == u32::MAX {
                dist[v as usize] = 0;
                queue.push_back(v);
            }
        }
        let mut out = Vec::new();
        while let Some(v) = queue.pop_front() {
            out.push(v);
            let d = dist[v as usize];
            if d == k {
                continue;
            }
            for &w in self.neighbors(v) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = d + 1;
                    queue.push_back(w);
                }
            }
        }
        VertexSet::from_vec(out)
    }

    /// Closed k-neighborhood: the subgraph induced on the open
    /// k-neighborhood of `s`.
    pub fn closed_k_neighborhood(&self, s: &VertexSet, k: u32) -> InducedSubgraph {
        self.induced(&self.open_k_neighborhood(s, k))
    }

    /// Subgraph induced on `s`. Vertex `i` of the result is `s.members()[i]`.
    pub fn induced(&self, s: &VertexSet) -> InducedSubgraph {
        let map = s.members().to_vec();
        let mut edges = Vec::new();
        for (i, &orig) in map.iter().enumerate() {
            for &w in self.neighbors(orig) {
                if let Ok(j) = map.binary_search(&w) {
                    if i < j {
                        edges.push((i as Vertex, j as Vertex));
                    }
                }
            }
        }
        InducedSubgraph {
            graph: Graph::from_edges(map.len(), &edges),
            vertex_map: map,
        }
    }

    /// Number of edges with exactly one endpoint in `s`.
    pub fn boundary_edge_count(&self, s: &VertexSet) -> usize {
        let mut count = 0;
        for &v in s.members() {
            for &w in self.neighbors(v) {
                if !s.contains(w) {
                    count += 1;
                }
            }
        }
        count
    }

    /// BFS distances from `v`; unreachable vertices get `u32::MAX`.
    pub fn bfs_distances(&self, v: Vertex) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n()];
        let mut queue = std::collections::VecDeque::new();
        dist[v as usize] = 0;
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[u as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Graph diameter. Graphs on at most one vertex have diameter 0;
    /// disconnected graphs have infinite diameter.
    pub fn diameter(&self) -> Diameter {
        let n = self.n();
        if n <= 1 {
            return Diameter::Finite(0);
        }
        let mut max = 0u32;
        for v in self.vertices() {
            let dist = self.bfs_distances(v);
            for &d in &dist {
                if d == u32::MAX {
                    return Diameter::Infinite;
                }
                max = max.max(d);
            }
        }
        Diameter::Finite(max)
    }

    /// True iff the eccentricity of `v` is at least `k`. Vertices that fail
    /// to reach the whole graph have infinite eccentricity.
    pub fn eccentricity_at_least(&self, v: Vertex, k: u32) -> bool {
        let dist = self.bfs_distances(v);
        let mut max = 0u32;
        for &d in &dist {
            if d == u32::MAX {
                return true;
            }
            max = max.max(d);
        }
        max >= k
    }

    /// The complement graph on the same vertex set.
    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut edges = Vec::new();
        for u in 0..n as Vertex {
            let mut nbrs = self.neighbors(u).iter().peekable();
            for v in (u + 1)..n as Vertex {
                while let Some(&&w) = nbrs.peek() {
                    if w < v {
                        nbrs.next();
                    } else {
                        break;
                    }
                }
                if nbrs.peek() != Some(&&v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges)
    }

    /// Non-decreasing degree sequence.
    pub fn degree_sequence(&self) -> Vec<u32> {
        let mut degs: Vec<u32> = self.vertices().map(|v| self.degree(v) as u32).collect();
        degs.sort_unstable();
        degs
    }
}

/// Graph diameter: finite value or infinite for disconnected graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diameter {
    Finite(u32),
    Infinite,
}

impl std::fmt::Display for Diameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => write!(f, "infinite"),
        }
    }
}

/// A set of vertices kept as a sorted, deduplicated list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    members: Vec<Vertex>,
}

impl VertexSet {
    pub fn from_vec(mut members: Vec<Vertex>) -> VertexSet {
        members.sort_unstable();
        members.dedup();
        VertexSet { members }
    }

    pub fn singleton(v: Vertex) -> VertexSet {
        VertexSet { members: vec![v] }
    }

    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().copied()
    }

    /// All vertices of `0..n` not in this set.
    pub fn complement(&self, n: usize) -> VertexSet {
        let mut out = Vec::with_capacity(n - self.members.len());
        let mut it = self.members.iter().peekable();
        for v in 0..n as Vertex {
            if it.peek() == Some(&&v) {
                it.next();
            } else {
                out.push(v);
            }
        }
        VertexSet { members: out }
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<T: IntoIterator<Item = Vertex>>(iter: T) -> VertexSet {
        VertexSet::from_vec(iter.into_iter().collect())
    }
}

/// An induced subgraph together with the map from its vertex ids back to
/// the parent graph (`vertex_map[i]` is the parent id of vertex `i`).
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub vertex_map: Vec<Vertex>,
}

impl InducedSubgraph {
    /// Position of parent vertex `v` inside the subgraph, if present.
    pub fn position_of(&self, v: Vertex) -> Option<Vertex> {
        self.vertex_map.binary_search(&v).ok().map(|i| i as Vertex)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n as Vertex - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges)
    }

    #[test]
    fn builds_csr_with_sorted_neighbors() {
        let g = Graph::from_edges(4, &[(2, 0), (0, 1), (3, 0)]);
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 3);
        assert_eq!(g.neighbors(0), &[1, 2, 3]);
        assert_eq!(g.neighbors(2), &[0]);
        assert!(g.has_edge(3, 0));
        assert!(!g.has_edge(1, 2));
    }

    #[test]
    fn strict_mode_rejects_loops_and_duplicates() {
        assert_eq!(
            Graph::from_edge_list(2, &[(0, 0)], true).unwrap_err(),
            GraphError::SelfLoop(0)
        );
        assert_eq!(
            Graph::from_edge_list(2, &[(0, 1), (1, 0)], true).unwrap_err(),
            GraphError::DuplicateEdge(0, 1)
        );
        assert_eq!(
            Graph::from_edge_list(2, &[(0, 5)], true).unwrap_err(),
            GraphError::EndpointOutOfRange(0, 5, 2)
        );
    }

    #[test]
    fn lenient_mode_drops_and_counts() {
        let b = Graph::from_edge_list(3, &[(0, 0), (0, 1), (1, 0), (0, 1), (1, 2)], false).unwrap();
        assert_eq!(b.graph.m(), 2);
        assert_eq!(b.dropped, 3);
        assert_eq!(b.graph.neighbors(0), &[1]);

        let single = Graph::from_edge_list(1, &[(0, 0)], false).unwrap();
        assert_eq!(single.graph.n(), 1);
        assert_eq!(single.graph.m(), 0);
        assert_eq!(single.dropped, 1);
    }

    #[test]
    fn out_of_range_is_an_error_even_in_lenient_mode() {
        assert!(Graph::from_edge_list(2, &[(0, 2)], false).is_err());
    }

    #[test]
    fn neighborhoods_grow_with_k() {
        let g = path(6);
        let s = VertexSet::singleton(0);
        assert_eq!(g.open_k_neighborhood(&s, 0).members(), &[0]);
        assert_eq!(g.open_k_neighborhood(&s, 1).members(), &[0, 1]);
        assert_eq!(g.open_k_neighborhood(&s, 3).members(), &[0, 1, 2, 3]);
        assert_eq!(g.open_k_neighborhood(&s, 99).len(), 6);
    }

    #[test]
    fn multi_source_neighborhood() {
        let g = path(7);
        let s = VertexSet::from_vec(vec![0, 6]);
        assert_eq!(g.open_k_neighborhood(&s, 1).members(), &[0, 1, 5, 6]);
    }

    #[test]
    fn induced_subgraph_keeps_internal_edges_only() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let sub = g.induced(&VertexSet::from_vec(vec![0, 1, 3]));
        assert_eq!(sub.vertex_map, vec![0, 1, 3]);
        assert_eq!(sub.graph.n(), 3);
        assert_eq!(sub.graph.m(), 1);
        assert!(sub.graph.has_edge(0, 1));
        assert_eq!(sub.position_of(3), Some(2));
        assert_eq!(sub.position_of(2), None);
    }

    #[test]
    fn closed_neighborhood_of_cycle_vertex() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let ego = g.closed_k_neighborhood(&VertexSet::singleton(0), 1);
        assert_eq!(ego.vertex_map, vec![0, 1, 4]);
        assert_eq!(ego.graph.m(), 2);
    }

    #[test]
    fn boundary_edges() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(g.boundary_edge_count(&VertexSet::from_vec(vec![0, 1])), 2);
        assert_eq!(g.boundary_edge_count(&VertexSet::from_vec(vec![0, 1, 2, 3, 4])), 0);
        assert_eq!(g.boundary_edge_count(&VertexSet::from_vec(vec![])), 0);
    }

    #[test]
    fn diameter_and_eccentricity() {
        assert_eq!(path(6).diameter(), Diameter::Finite(5));
        assert_eq!(Graph::edgeless(1).diameter(), Diameter::Finite(0));
        assert_eq!(Graph::edgeless(2).diameter(), Diameter::Infinite);
        assert_eq!(Graph::complete(4).diameter(), Diameter::Finite(1));

        let g = path(6);
        assert!(g.eccentricity_at_least(0, 5));
        assert!(!g.eccentricity_at_least(0, 6));
        assert!(g.eccentricity_at_least(2, 3));
        assert!(!g.eccentricity_at_least(2, 4));
        assert!(Graph::edgeless(2).eccentricity_at_least(0, 1_000_000));
    }

    #[test]
    fn complement_roundtrip() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let c = g.complement();
        assert_eq!(c.m(), 10 - 5);
        assert_eq!(c.complement(), g);
        assert_eq!(Graph::complete(4).complement(), Graph::edgeless(4));
    }

    #[test]
    fn vertex_set_complement() {
        let s = VertexSet::from_vec(vec![1, 3]);
        assert_eq!(s.complement(5).members(), &[0, 2, 4]);
        assert_eq!(VertexSet::from_vec(vec![]).complement(3).members(), &[0, 1, 2]);
    }

    #[test]
    fn edges_iterator_is_sorted() {
        let g = Graph::from_edges(4, &[(3, 2), (1, 0), (0, 2)]);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (2, 3)]);
    }
}
