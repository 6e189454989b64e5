//! Forest decompositions and the sparse certificates `FG_k`.
//!
//! A labeling assigns every undirected edge to a forest `E_i` (`i >= 1`) such
//! that each `E_i` is acyclic and the endpoints of an edge in `E_i` are already
//! connected in `E_1 ∪ … ∪ E_{i-1}`. The union of the first `k` forests keeps
//! every vertex cut of size below `k` and has at most `nk` edges.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestLabeling {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    labels: Vec<u32>,
}

impl ForestLabeling {
    pub fn new(n: usize, edges: Vec<(Vertex, Vertex)>, labels: Vec<u32>) -> Self {
        assert_eq!(edges.len(), labels.len());
        Self { n, edges, labels }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// One-based forest index per edge, aligned with [`Self::edges`].
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn max_label(&self) -> u32 {
        self.labels.iter().copied().max().unwrap_or(0)
    }

    /// Edges with label at most `k`, in labeling order.
    pub fn prefix_edges(&self, k: u32) -> Vec<(Vertex, Vertex)> {
        self.edges
            .iter()
            .zip(&self.labels)
            .filter(|&(_, &l)| l <= k)
            .map(|(&e, _)| e)
            .collect()
    }

    /// The sparse certificate `FG_k`.
    pub fn fg_k(&self, k: u32) -> Graph {
        Graph::from_undirected_edges(self.n, &self.prefix_edges(k))
    }
}

/// Scan-first search labeling (Nagamochi–Ibaraki). Repeatedly scans the
/// unscanned vertex with the most already-scanned incident edges; an edge
/// scanned towards `w` gets label `r(w)` after incrementing it.
pub fn forest_decompose(g: &Graph) -> ForestLabeling {
    let n = g.n();
    let edges = g.undirected_edges();
    let (offsets, incidence) = incidence_lists(n, &edges);

    let mut labels = vec![0u32; edges.len()];
    let mut edge_done = vec![false; edges.len()];
    let mut vertex_done = vec![false; n];
    let mut r = vec![0u32; n];
    let mut buckets: Vec<Vec<Vertex>> = vec![Vec::new(); n.max(1)];
    buckets[0] = (0..n as Vertex).rev().collect();
    let mut top = 0usize;

    for _ in 0..n {
        let v = loop {
            match buckets[top].pop() {
                Some(v) if !vertex_done[v as usize] && r[v as usize] as usize == top => break v,
                Some(_) => {}
                None => top -= 1,
            }
        };
        vertex_done[v as usize] = true;
        for &(w, e) in &incidence[offsets[v as usize]..offsets[v as usize + 1]] {
            if edge_done[e as usize] {
                continue;
            }
            edge_done[e as usize] = true;
            r[w as usize] += 1;
            labels[e as usize] = r[w as usize];
            let rw = r[w as usize] as usize;
            buckets[rw].push(w);
            top = top.max(rw);
        }
    }
    ForestLabeling { n, edges, labels }
}

fn incidence_lists(n: usize, edges: &[(Vertex, Vertex)]) -> (Vec<usize>, Vec<(Vertex, u32)>) {
    let mut offsets = vec![0usize; n + 1];
    for &(u, v) in edges {
        offsets[u as usize + 1] += 1;
        offsets[v as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets.clone();
    let mut incidence = vec![(0, 0); 2 * edges.len()];
    for (e, &(u, v)) in edges.iter().enumerate() {
        incidence[fill[u as usize]] = (v, e as u32);
        fill[u as usize] += 1;
        incidence[fill[v as usize]] = (u, e as u32);
        fill[v as usize] += 1;
    }
    (offsets, incidence)
}

/// Forest labeling with randomized tie-breaking: edges are processed in a
/// uniformly random order and each goes to the lowest-index forest that keeps
/// it acyclic.
pub fn randomized_forest_partition<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> ForestLabeling {
    let mut edges = g.undirected_edges();
    edges.shuffle(rng);
    let mut forests = LeveledForests::new(g.n(), None);
    let labels = edges
        .iter()
        .map(|&(u, v)| forests.place(u, v).expect("uncapped placement always succeeds"))
        .collect();
    ForestLabeling { n: g.n(), edges, labels }
}

/// Union-find per forest level. Components at level `i` refine those at level
/// `i - 1`, so "connected at level i" holds for a prefix of levels and the
/// lowest acyclic level is found by binary search.
pub(crate) struct LeveledForests {
    n: usize,
    cap: Option<usize>,
    levels: Vec<UnionFind>,
}

impl LeveledForests {
    pub(crate) fn new(n: usize, cap: Option<usize>) -> Self {
        Self { n, cap, levels: Vec::new() }
    }

    /// Inserts edge `u-v` into the lowest forest where it closes no cycle and
    /// returns the one-based label, or `None` if every allowed level already
    /// connects `u` and `v`.
    pub(crate) fn place(&mut self, u: Vertex, v: Vertex) -> Option<u32> {
        let (mut lo, mut hi) = (0usize, self.levels.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.levels[mid].same(u, v) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo == self.levels.len() {
            if self.cap.is_some_and(|c| lo >= c) {
                return None;
            }
            self.levels.push(UnionFind::new(self.n));
        }
        self.levels[lo].union(u, v);
        Some(lo as u32 + 1)
    }

    /// True once the highest allowed level exists and connects every vertex
    /// of `set` to `probe`, so every further pair inside `set` is rejected.
    pub(crate) fn spans(&mut self, set: &[Vertex], probe: Vertex) -> bool {
        let Some(c) = self.cap else { return false };
        if self.levels.len() < c {
            return false;
        }
        let top = &mut self.levels[c - 1];
        let root = top.find(probe);
        set.iter().all(|&v| top.find(v) == root)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    components: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub(crate) fn find(&mut self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            let p = self.parent[v as usize];
            self.parent[v as usize] = self.parent[p as usize];
            v = p;
        }
        v
    }

    pub(crate) fn same(&mut self, a: u32, b: u32) -> bool {
        self.find(a) == self.find(b)
    }

    pub(crate) fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        self.components -= 1;
        true
    }
}

/// Checks both labeling invariants: every forest is acyclic and every edge
/// of label `i > 1` joins vertices already connected by lower labels.
pub fn labeling_is_valid(labeling: &ForestLabeling) -> bool {
    let n = labeling.n();
    let max = labeling.max_label() as usize;
    let mut by_label: Vec<Vec<(Vertex, Vertex)>> = vec![Vec::new(); max + 1];
    for (&e, &l) in labeling.edges().iter().zip(labeling.labels()) {
        if l == 0 {
            return false;
        }
        by_label[l as usize].push(e);
    }
    let mut prefix = UnionFind::new(n);
    for (label, forest) in by_label.iter().enumerate().skip(1) {
        let mut own = UnionFind::new(n);
        for &(u, v) in forest {
            if !own.union(u, v) {
                return false;
            }
        }
        if label > 1 && !forest.iter().all(|&(u, v)| prefix.same(u, v)) {
            return false;
        }
        for &(u, v) in forest {
            prefix.union(u, v);
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn complete(n: u32) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::from_undirected_edges(n as usize, &edges)
    }

    #[test]
    fn triangle_needs_two_forests() {
        let l = forest_decompose(&complete(3));
        assert!(labeling_is_valid(&l));
        let mut labels = l.labels().to_vec();
        labels.sort();
        assert_eq!(labels, vec![1, 1, 2]);
    }

    #[test]
    fn tree_fits_in_first_forest() {
        let g = Graph::from_undirected_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]);
        assert!(forest_decompose(&g).labels().iter().all(|&l| l == 1));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(randomized_forest_partition(&g, &mut rng).labels().iter().all(|&l| l == 1));
    }

    #[test]
    fn k4_uses_three_forests() {
        let l = forest_decompose(&complete(4));
        assert!(labeling_is_valid(&l));
        assert_eq!(l.max_label(), 3);
    }

    #[test]
    fn full_prefix_is_original_graph() {
        let g = complete(6);
        let l = forest_decompose(&g);
        let fg = l.fg_k(6);
        assert_eq!(fg.m(), g.m());
    }

    #[test]
    fn prefix_size_bound() {
        let g = complete(9);
        for l in [forest_decompose(&g), randomized_forest_partition(&g, &mut ChaCha8Rng::seed_from_u64(1))] {
            for k in 1..=9 {
                assert!(l.fg_k(k).m() / 2 <= 9 * k as usize);
            }
        }
    }

    #[test]
    fn randomized_labelings_differ_but_stay_valid() {
        let g = complete(5);
        let a = randomized_forest_partition(&g, &mut ChaCha8Rng::seed_from_u64(1));
        let b = randomized_forest_partition(&g, &mut ChaCha8Rng::seed_from_u64(2));
        assert!(labeling_is_valid(&a) && labeling_is_valid(&b));
        assert_ne!(a, b);
    }

    #[test]
    fn validator_rejects_cycle_in_forest() {
        let bad = ForestLabeling::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![1, 1, 1]);
        assert!(!labeling_is_valid(&bad));
        let gap = ForestLabeling::new(3, vec![(0, 1), (1, 2)], vec![1, 2]);
        assert!(!labeling_is_valid(&gap));
    }

    #[test]
    fn capped_forests_saturate() {
        let mut f = LeveledForests::new(3, Some(1));
        assert_eq!(f.place(0, 1), Some(1));
        assert!(!f.spans(&[0, 1, 2], 0));
        assert_eq!(f.place(1, 2), Some(1));
        assert!(f.spans(&[0, 1, 2], 0));
        assert_eq!(f.place(0, 2), None);
    }
}
