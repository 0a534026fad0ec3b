//! Seeded Erdős-Rényi generators and the per-sample statistics the
//! experiment harness measures (triangle counts, degree concentration,
//! star-shaped egonets).
//!
//! Determinism contract: a spec (n, parameter, seed) always produces the
//! same graph. Streams for independent samples are derived by chaining
//! splitmix64 over (base seed, index words) into a ChaCha12 key, so any
//! sample of any grid cell can be regenerated in isolation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::graph::{Graph, Vertex};

/// Identifier of the seeding scheme and generator, recorded in experiment
/// output so archived CSVs stay attributable.
pub const PRNG_ID: &str = "splitmix64-chacha12/v1";

/// G(n,p): every unordered pair becomes an edge independently with
/// probability p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnpSpec {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

/// G(n,m): a uniformly random graph with exactly m edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GnmSpec {
    pub n: usize,
    pub m: u64,
    pub seed: u64,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn chain(base: u64, words: &[u64]) -> u64 {
    let mut state = base;
    for &w in words {
        let mixed = splitmix64(&mut state);
        state = mixed ^ w;
    }
    state
}

/// Derives the seed of one sample stream from the base seed and a word
/// path such as [cell index, sample index]; any sample of any grid cell
/// can be regenerated in isolation.
pub fn derive_seed(base: u64, words: &[u64]) -> u64 {
    let mut state = chain(base, words);
    splitmix64(&mut state)
}

/// ChaCha12 stream keyed by the base seed and a word path.
pub fn stream_rng(base: u64, words: &[u64]) -> ChaCha12Rng {
    let mut state = chain(base, words);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

/// Unranks pair index t (colex order) into an edge (i, j) with i < j:
/// index C(j,2) + i maps to (i, j).
fn unrank_pair(t: u64) -> (Vertex, Vertex) {
    let mut j = ((1.0 + (1.0 + 8.0 * t as f64).sqrt()) / 2.0).floor() as u64;
    while j * (j - 1) / 2 > t {
        j -= 1;
    }
    while (j + 1) * j / 2 <= t {
        j += 1;
    }
    let i = t - j * (j - 1) / 2;
    (i as Vertex, j as Vertex)
}

fn pair_count(n: usize) -> u64 {
    let n = n as u64;
    n * (n - 1) / 2
}

/// Samples G(n,p) by geometric skipping over pair indices: expected
/// runtime O(n + m) rather than O(n^2).
pub fn sample_gnp(spec: &GnpSpec) -> Graph {
    assert!(spec.n >= 1, "G(n,p) needs n >= 1");
    assert!((0.0..=1.0).contains(&spec.p), "p must lie in [0,1]");
    assert!(spec.n <= u32::MAX as usize);
    if spec.p <= 0.0 {
        return Graph::edgeless(spec.n);
    }
    if spec.p >= 1.0 {
        return Graph::complete(spec.n);
    }
    let total = pair_count(spec.n);
    let mut rng = stream_rng(spec.seed, &[]);
    let log_q = (1.0 - spec.p).ln();
    let mut edges = Vec::new();
    let mut cur = 0u64;
    while cur < total {
        let u: f64 = rng.random();
        let skip = (1.0 - u).ln() / log_q;
        if !(skip < (total - cur) as f64) {
            break;
        }
        cur += skip as u64;
        edges.push(unrank_pair(cur));
        cur += 1;
    }
    Graph::from_edges(spec.n, &edges)
}

/// Samples G(n,m) with Floyd's algorithm: m distinct pair indices drawn
/// uniformly, then unranked into edges.
pub fn sample_gnm(spec: &GnmSpec) -> Graph {
    assert!(spec.n >= 1, "G(n,m) needs n >= 1");
    let total = pair_count(spec.n);
    assert!(spec.m <= total, "m exceeds the number of vertex pairs");
    let mut rng = stream_rng(spec.seed, &[]);
    let mut chosen = std::collections::BTreeSet::new();
    for t in (total - spec.m)..total {
        let r = rng.random_range(0..=t);
        if !chosen.insert(r) {
            chosen.insert(t);
        }
    }
    let edges: Vec<_> = chosen.into_iter().map(unrank_pair).collect();
    Graph::from_edges(spec.n, &edges)
}

/// Exact triangle count by sorted-adjacency intersection over edges; each
/// triangle is counted once at its lowest-indexed edge pair.
pub fn triangle_count(g: &Graph) -> u64 {
    let mut count = 0u64;
    for u in g.vertices() {
        for &v in g.neighbors(u) {
            if v <= u {
                continue;
            }
            // Common neighbors above v close a triangle u < v < w.
            let mut a = g.neighbors(u).iter().skip_while(|&&w| w <= v).peekable();
            let mut b = g.neighbors(v).iter().skip_while(|&&w| w <= v).peekable();
            while let (Some(&&x), Some(&&y)) = (a.peek(), b.peek()) {
                match x.cmp(&y) {
                    std::cmp::Ordering::Less => {
                        a.next();
                    }
                    std::cmp::Ordering::Greater => {
                        b.next();
                    }
                    std::cmp::Ordering::Equal => {
                        count += 1;
                        a.next();
                        b.next();
                    }
                }
            }
        }
    }
    count
}

/// True iff the egonet of v is a star centered at v: no edge joins two
/// neighbors of v.
pub fn peripheral_edge_free(g: &Graph, v: Vertex) -> bool {
    let nbrs = g.neighbors(v);
    for &u in nbrs {
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
                    if x != v {
                        return false;
                    }
                    a.next();
                    b.next();
                }
            }
        }
    }
    true
}

/// True iff every degree lies strictly inside ((n-1)p(1-delta),
/// (n-1)p(1+delta)).
pub fn degree_concentration_check(g: &Graph, p: f64, delta: f64) -> bool {
    assert!(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
    let mean = (g.n() as f64 - 1.0) * p;
    let lo = mean * (1.0 - delta);
    let hi = mean * (1.0 + delta);
    g.vertices().all(|v| {
        let d = g.degree(v) as f64;
        lo < d && d < hi
    })
}
