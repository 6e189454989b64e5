//! Planted-cut instances and k-core extraction.

use std::collections::{HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, SeparationTriple, Vertex};
use crate::sparsify::LeveledForests;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("invalid planted parameters: {0}")]
    Planted(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedParams {
    pub n: usize,
    pub size_l: usize,
    pub size_s: usize,
    pub k_gen: u32,
    pub seed: u64,
}

impl PlantedParams {
    pub const DEFAULT_K_GEN: u32 = 60;

    pub fn new(n: usize, size_l: usize, size_s: usize, seed: u64) -> Self {
        Self { n, size_l, size_s, k_gen: Self::DEFAULT_K_GEN, seed }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let err = |m: &str| Err(ConfigError::Planted(m.to_string()));
        if self.size_l == 0 || self.size_s == 0 {
            return err("|L| and |S| must be positive");
        }
        if self.size_l + self.size_s >= self.n {
            return err("|L| + |S| must be smaller than n");
        }
        if self.k_gen as usize <= self.size_s {
            return err("k_gen must exceed |S|");
        }
        if self.n > u32::MAX as usize / 2 {
            return err("n too large");
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Planted {
    pub graph: Graph,
    pub triple: SeparationTriple,
}

/// Sidecar record describing a generated planted instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedMeta {
    pub n: usize,
    pub m_edges: usize,
    pub size_l: usize,
    pub size_s: usize,
    pub k_gen: u32,
    pub seed: u64,
    pub kappa: usize,
    pub left: Vec<Vertex>,
    pub separator: Vec<Vertex>,
}

impl Planted {
    pub fn meta(&self, params: &PlantedParams) -> PlantedMeta {
        PlantedMeta {
            n: params.n,
            m_edges: self.graph.m() / 2,
            size_l: params.size_l,
            size_s: params.size_s,
            k_gen: params.k_gen,
            seed: params.seed,
            kappa: params.size_s,
            left: self.triple.left.clone(),
            separator: self.triple.separator.clone(),
        }
    }
}

#[inline]
fn key(u: Vertex, v: Vertex) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    (a as u64) << 32 | b as u64
}

/// Uniformly ordered stream of the pairs inside `S ∪ R`, drawn by rejection
/// while sparse and switching to an explicit shuffled list once half of the
/// pairs are used.
struct PairStream {
    vertices: Vec<Vertex>,
    total: u64,
    drawn: HashSet<u64>,
    rest: Option<Vec<(Vertex, Vertex)>>,
}

impl PairStream {
    fn new(vertices: Vec<Vertex>) -> Self {
        let b = vertices.len() as u64;
        Self { vertices, total: b * (b - 1) / 2, drawn: HashSet::new(), rest: None }
    }

    fn remaining(&self) -> u64 {
        match &self.rest {
            Some(r) => r.len() as u64,
            None => self.total - self.drawn.len() as u64,
        }
    }

    fn next<R: Rng>(&mut self, rng: &mut R) -> Option<(Vertex, Vertex)> {
        if self.rest.is_none() && 2 * self.drawn.len() as u64 >= self.total {
            let mut rest = Vec::with_capacity((self.total - self.drawn.len() as u64) as usize);
            for (i, &u) in self.vertices.iter().enumerate() {
                for &v in &self.vertices[i + 1..] {
                    if !self.drawn.contains(&key(u, v)) {
                        rest.push((u, v));
                    }
                }
            }
            rest.shuffle(rng);
            self.rest = Some(rest);
        }
        if let Some(rest) = &mut self.rest {
            return rest.pop();
        }
        let b = self.vertices.len();
        loop {
            let i = rng.gen_range(0..b);
            let mut j = rng.gen_range(0..b - 1);
            if j >= i {
                j += 1;
            }
            let (u, v) = (self.vertices[i], self.vertices[j]);
            if self.drawn.insert(key(u, v)) {
                return Some((u, v));
            }
        }
    }
}

/// Complete graph minus all `L`-`R` pairs, with pairs placed in a uniformly
/// random order into the lowest acyclic forest and only the first `k_gen`
/// forests kept. `L` and `S` are random vertex subsets.
///
/// Pairs inside `S ∪ R` are generated lazily: once the top kept forest spans
/// `S ∪ R`, every further such pair would be rejected, so the stream stops.
pub fn generate_planted(params: &PlantedParams) -> Result<Planted, ConfigError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.n;
    let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
    perm.shuffle(&mut rng);
    let left = &perm[..params.size_l];
    let separator = &perm[params.size_l..params.size_l + params.size_s];

    // Pairs with an endpoint in L: inside L and between L and S.
    let mut left_pairs = Vec::new();
    for (i, &u) in left.iter().enumerate() {
        for &v in left[i + 1..].iter().chain(separator) {
            left_pairs.push((u, v));
        }
    }
    left_pairs.shuffle(&mut rng);
    let mut big = PairStream::new(perm[params.size_l..].to_vec());
    let probe = perm[params.size_l];

    let cap = params.k_gen as usize;
    let mut forests = LeveledForests::new(n, Some(cap));
    let mut edges = Vec::new();
    let mut big_done = false;
    let mut since_check = 0usize;
    loop {
        let from_big = if big_done {
            false
        } else if left_pairs.is_empty() {
            true
        } else {
            let b = big.remaining();
            rng.gen_range(0..b + left_pairs.len() as u64) < b
        };
        let pair = if from_big { big.next(&mut rng) } else { left_pairs.pop() };
        let Some((u, v)) = pair else {
            if from_big {
                big_done = true;
                continue;
            }
            break;
        };
        if forests.place(u, v).is_some() {
            edges.push((u, v));
        }
        since_check += 1;
        if !big_done && since_check >= n {
            since_check = 0;
            big_done = forests.spans(&perm[params.size_l..], probe);
        }
        if big_done && left_pairs.is_empty() {
            break;
        }
    }

    let graph = Graph::from_undirected_edges(n, &edges);
    let sorted = |s: &[Vertex]| {
        let mut s = s.to_vec();
        s.sort_unstable();
        s
    };
    let triple = SeparationTriple {
        left: sorted(left),
        separator: sorted(separator),
        right: sorted(&perm[params.size_l + params.size_s..]),
    };
    Ok(Planted { graph, triple })
}

#[derive(Clone, Debug)]
pub struct KCore {
    pub graph: Graph,
    /// Vertex of the input graph for each core vertex.
    pub original: Vec<Vertex>,
}

/// Largest connected component of the `k`-core (iterative peeling of
/// vertices of degree below `k`). Empty if the core is empty.
pub fn k_core(g: &Graph, k: usize) -> KCore {
    let n = g.n();
    let mut degree: Vec<usize> = (0..n as Vertex).map(|v| g.out_degree(v)).collect();
    let mut removed = vec![false; n];
    let mut queue: VecDeque<Vertex> = (0..n as Vertex).filter(|&v| degree[v as usize] < k).collect();
    for &v in &queue {
        removed[v as usize] = true;
    }
    while let Some(v) = queue.pop_front() {
        for w in g.out_neighbors(v) {
            if removed[w as usize] {
                continue;
            }
            degree[w as usize] -= 1;
            if degree[w as usize] < k {
                removed[w as usize] = true;
                queue.push_back(w);
            }
        }
    }

    let mut component = vec![u32::MAX; n];
    let mut best: Option<(usize, u32)> = None;
    let mut next = 0u32;
    for s in 0..n as Vertex {
        if removed[s as usize] || component[s as usize] != u32::MAX {
            continue;
        }
        let mut size = 0;
        let mut stack = vec![s];
        component[s as usize] = next;
        while let Some(u) = stack.pop() {
            size += 1;
            for w in g.out_neighbors(u) {
                if !removed[w as usize] && component[w as usize] == u32::MAX {
                    component[w as usize] = next;
                    stack.push(w);
                }
            }
        }
        if best.is_none_or(|(b, _)| size > b) {
            best = Some((size, next));
        }
        next += 1;
    }

    let Some((_, keep)) = best else {
        return KCore { graph: Graph::with_vertices(0), original: Vec::new() };
    };
    let original: Vec<Vertex> = (0..n as Vertex).filter(|&v| component[v as usize] == keep).collect();
    let mut index = vec![u32::MAX; n];
    for (i, &v) in original.iter().enumerate() {
        index[v as usize] = i as u32;
    }
    let edges: Vec<(Vertex, Vertex)> = g
        .undirected_edges()
        .into_iter()
        .filter(|&(u, v)| index[u as usize] != u32::MAX && index[v as usize] != u32::MAX)
        .map(|(u, v)| (index[u as usize], index[v as usize]))
        .collect();
    KCore { graph: Graph::from_undirected_edges(original.len(), &edges), original }
}
