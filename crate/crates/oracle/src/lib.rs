//! Exhaustive reference computations on graphs with at most 20 vertices.
//!
//! Everything here enumerates vertex subsets directly and shares no code with
//! the flow or local-search implementations it is used to check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Undirected graph as neighbor bitmasks.
#[derive(Clone, Debug)]
pub struct Small {
    pub n: usize,
    pub adj: Vec<u32>,
}

impl Small {
    pub fn new(n: usize, edges: &[(u32, u32)]) -> Self {
        assert!(n <= 20, "oracle is exhaustive; keep n <= 20");
        let mut adj = vec![0u32; n];
        for &(u, v) in edges {
            if u != v {
                adj[u as usize] |= 1 << v;
                adj[v as usize] |= 1 << u;
            }
        }
        Self { n, adj }
    }

    fn all(&self) -> u32 {
        if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 }
    }

    /// Vertices reachable from `start` inside `allowed`.
    pub fn reach(&self, start: usize, allowed: u32) -> u32 {
        if allowed & (1 << start) == 0 {
            return 0;
        }
        let mut seen = 1u32 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & allowed & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen
    }

    /// True when `G - removed` has at least two components.
    pub fn is_cut(&self, removed: u32) -> bool {
        let rest = self.all() & !removed;
        if rest.count_ones() < 2 {
            return false;
        }
        self.reach(rest.trailing_zeros() as usize, rest) != rest
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u] & (1 << v) != 0
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }
}

fn subsets_of_size(universe: u32, size: u32) -> impl Iterator<Item = u32> {
    let bits: Vec<u32> = (0..32).filter(|b| universe & (1 << b) != 0).collect();
    let k = bits.len();
    let total: u64 = 1 << k;
    (0..total)
        .filter(move |idx| idx.count_ones() == size)
        .map(move |idx| {
            let mut m = 0u32;
            for (i, b) in bits.iter().enumerate() {
                if idx & (1 << i) != 0 {
                    m |= 1 << b;
                }
            }
            m
        })
}

/// Vertex connectivity: size of a smallest vertex cut, or `n - 1` when none
/// exists.
pub fn vertex_connectivity(g: &Small) -> usize {
    minimum_cuts(g).0
}

/// `(kappa, all cuts of size kappa)`. The cut list is empty for graphs
/// without a vertex cut.
pub fn minimum_cuts(g: &Small) -> (usize, Vec<u32>) {
    if g.n <= 1 {
        return (0, Vec::new());
    }
    for size in 0..=(g.n as u32).saturating_sub(2) {
        let cuts: Vec<u32> = subsets_of_size(g.all(), size).filter(|&s| g.is_cut(s)).collect();
        if !cuts.is_empty() {
            return (size as usize, cuts);
        }
    }
    (g.n - 1, Vec::new())
}

/// Smallest `C` with `C` disjoint from `forbidden` such that no vertex of
/// `sources \ C` reaches `target` in `G - C`. `None` when some source is
/// forbidden and adjacent to `target` (no finite separator).
pub fn min_separator(g: &Small, sources: u32, forbidden: u32, target: usize) -> Option<usize> {
    let candidates = g.all() & !forbidden & !(1 << target);
    for size in 0..=candidates.count_ones() {
        for c in subsets_of_size(candidates, size) {
            let allowed = g.all() & !c;
            let live = sources & allowed;
            let mut reached = 0u32;
            let mut rest = live;
            while rest != 0 {
                let s = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                reached |= g.reach(s, allowed);
            }
            if reached & (1 << target) == 0 {
                return Some(size as usize);
            }
        }
    }
    None
}

/// Maximum number of internally vertex-disjoint `x`-`y` paths for
/// non-adjacent `x`, `y` (Menger: equals the smallest `x`-`y` separator).
pub fn local_connectivity(g: &Small, x: usize, y: usize) -> usize {
    assert!(x != y && !g.is_adjacent(x, y));
    min_separator(g, 1 << x, 1 << x, y).unwrap()
}

/// `G(n, p)` edge list.
pub fn gnp(seed: u64, n: usize, p: f64) -> Vec<(u32, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// A random small graph for oracle sweeps: `n` in `4..=max_n`, density drawn
/// from `[0.25, 0.9]`.
pub fn random_small(seed: u64, max_n: usize) -> (usize, Vec<(u32, u32)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let n = rng.gen_range(4..=max_n);
    let p = rng.gen_range(0.25..0.9);
    (n, gnp(seed, n, p))
}
