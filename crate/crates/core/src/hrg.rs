//! Preflow-push baseline: a sequence of minimum `S_i`-`t_i` cuts on the
//! split graph, sharing one preflow across sinks.
//!
//! From a seed vertex `x` the sources start as `x_in`, `x_out` and the
//! in-vertices of the neighbours of `x`. Sinks are the
//! in-vertices of non-neighbours of `x`; after its phase a sink joins the
//! sources. Vertices that can no longer reach the sink are parked in dormant
//! sets, and the awake set `W` is kept in distance buckets with an index map.
//! When a phase ends the only active vertex in `W` is the sink, and the
//! internal arcs entering `W` form a minimum cut whose value is the sink's
//! excess.

use std::collections::VecDeque;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::driver::{ms, trivial_cut_sweep, VcReport};
use crate::graph::{in_vertex, is_vertex_cut, out_vertex, Graph, SplitGraph, Vertex};
use crate::sparsify::{forest_decompose, ForestLabeling};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HrgConfig {
    pub seed: u64,
    /// Seed vertices are added until the chance that every one of them lies
    /// in all minimum cuts drops to this value.
    pub error_target: f64,
    pub k_initial: Option<u32>,
    /// Use this vertex as the only seed instead of random ones.
    pub fixed_seed_vertex: Option<Vertex>,
}

impl Default for HrgConfig {
    fn default() -> Self {
        Self { seed: 0, error_target: 0.01, k_initial: None, fixed_seed_vertex: None }
    }
}

/// Number of distinct uniform seeds `r` with `C(c, r) / C(n, r) <= target`.
pub fn seeds_needed(c: usize, n: usize, target: f64) -> usize {
    let mut p = 1.0;
    for r in 1..=n {
        if r > c {
            return r;
        }
        p *= (c + 1 - r) as f64 / (n + 1 - r) as f64;
        if p <= target {
            return r;
        }
    }
    n
}

/// One phase: the minimum cut between the current sources and `sink`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SinkCut {
    pub sink: Vertex,
    pub value: usize,
    /// Present when `value` beat the bound and every earlier phase.
    pub cut: Option<Vec<Vertex>>,
}

/// Residual network of a split graph with unit internal arcs and
/// effectively infinite external arcs.
struct Network {
    first: Vec<u32>,
    to: Vec<u32>,
    rev: Vec<u32>,
    cap: Vec<u32>,
}

impl Network {
    fn build(g: &Graph) -> Self {
        let sg = SplitGraph::build(g).graph;
        let nodes = sg.n();
        let big = g.n() as u32 + 1;
        let mut degree = vec![0u32; nodes + 1];
        for a in 0..sg.m() as u32 {
            degree[sg.tail(a) as usize + 1] += 1;
            degree[sg.head(a) as usize + 1] += 1;
        }
        for i in 0..nodes {
            degree[i + 1] += degree[i];
        }
        let first = degree.clone();
        let mut fill = degree;
        let total = 2 * sg.m();
        let (mut to, mut rev, mut cap) = (vec![0; total], vec![0; total], vec![0; total]);
        for a in 0..sg.m() as u32 {
            let (u, v) = (sg.tail(a), sg.head(a));
            let (f, b) = (fill[u as usize], fill[v as usize]);
            fill[u as usize] += 1;
            fill[v as usize] += 1;
            to[f as usize] = v;
            to[b as usize] = u;
            rev[f as usize] = b;
            rev[b as usize] = f;
            cap[f as usize] = if (a as usize) < g.n() { 1 } else { big };
        }
        Self { first, to, rev, cap }
    }

    fn nodes(&self) -> usize {
        self.first.len() - 1
    }

    #[inline]
    fn arcs(&self, v: u32) -> std::ops::Range<usize> {
        self.first[v as usize] as usize..self.first[v as usize + 1] as usize
    }
}

const SOURCE_LAYER: u32 = 0;

/// Positions of vertices inside their label lists.
struct Index {
    pos: Vec<u32>,
    cpos: Vec<u32>,
}

/// One awake or dormant set: members and sink candidates by label.
#[derive(Default)]
struct Layer {
    lists: Vec<Vec<u32>>,
    candidates: Vec<Vec<u32>>,
    count: usize,
    /// Members that may hold excess, re-queued when the set wakes.
    pending: Vec<u32>,
}

fn push_at(lists: &mut Vec<Vec<u32>>, pos: &mut [u32], v: u32, label: usize) {
    if lists.len() <= label {
        lists.resize_with(label + 1, Vec::new);
    }
    pos[v as usize] = lists[label].len() as u32;
    lists[label].push(v);
}

fn remove_at(lists: &mut [Vec<u32>], pos: &mut [u32], v: u32, label: usize) {
    let i = pos[v as usize] as usize;
    let list = &mut lists[label];
    debug_assert_eq!(list[i], v);
    list.swap_remove(i);
    if let Some(&moved) = list.get(i) {
        pos[moved as usize] = i as u32;
    }
    pos[v as usize] = u32::MAX;
}

impl Layer {
    fn insert(&mut self, ix: &mut Index, v: u32, label: u32, candidate: bool) {
        push_at(&mut self.lists, &mut ix.pos, v, label as usize);
        if candidate {
            push_at(&mut self.candidates, &mut ix.cpos, v, label as usize);
        }
        self.count += 1;
    }

    fn remove(&mut self, ix: &mut Index, v: u32, label: u32) {
        remove_at(&mut self.lists, &mut ix.pos, v, label as usize);
        if ix.cpos[v as usize] != u32::MAX {
            remove_at(&mut self.candidates, &mut ix.cpos, v, label as usize);
        }
        self.count -= 1;
    }

    fn lowest(lists: &[Vec<u32>]) -> Option<usize> {
        lists.iter().position(|l| !l.is_empty())
    }

    /// Moves the members with label at least `d` into a new layer.
    fn split_off(&mut self, d: usize) -> Layer {
        let upper_of = |lists: &mut Vec<Vec<u32>>| {
            let mut upper: Vec<Vec<u32>> = Vec::new();
            if d < lists.len() {
                upper.resize_with(d, Vec::new);
                upper.extend(lists.drain(d..));
            }
            upper
        };
        let lists = upper_of(&mut self.lists);
        let candidates = upper_of(&mut self.candidates);
        let count = lists.iter().map(Vec::len).sum();
        self.count -= count;
        Layer { lists, candidates, count, pending: Vec::new() }
    }

    fn members(&self) -> impl Iterator<Item = u32> + '_ {
        self.lists.iter().flatten().copied()
    }
}

/// Preflow over the whole split graph. Every vertex carries a layer id:
/// the sources, the awake set `W`, or one dormant set. Splitting and merging
/// sets relabels the ids of the smaller side only.
struct Preflow<'a> {
    net: &'a Network,
    res: Vec<u32>,
    excess: Vec<u64>,
    label: Vec<u32>,
    layer: Vec<u32>,
    ix: Index,
    candidate: Vec<bool>,
    awake: Layer,
    awake_id: u32,
    parked: Vec<Layer>,
    dormant: Vec<u32>,
    queue: VecDeque<u32>,
    queued: Vec<bool>,
    current: Vec<u32>,
    scans: u64,
}

impl<'a> Preflow<'a> {
    fn new(net: &'a Network, x: Vertex, candidate: Vec<bool>) -> Self {
        let nodes = net.nodes();
        let mut p = Self {
            net,
            res: net.cap.clone(),
            excess: vec![0; nodes],
            label: vec![0; nodes],
            layer: vec![1; nodes],
            ix: Index { pos: vec![u32::MAX; nodes], cpos: vec![u32::MAX; nodes] },
            candidate,
            awake: Layer::default(),
            awake_id: 1,
            parked: vec![Layer::default(), Layer::default()],
            dormant: Vec::new(),
            queue: VecDeque::new(),
            queued: vec![false; nodes],
            current: net.first[..nodes].to_vec(),
            scans: 0,
        };
        // In-vertices of neighbours of `x` sit behind infinite arcs from
        // `x_out`, so every finite cut keeps them on the source side.
        let mut sources = vec![in_vertex(x), out_vertex(x)];
        sources.extend(net.arcs(out_vertex(x)).filter(|&e| net.cap[e] > 0).map(|e| net.to[e]));
        for &s in &sources {
            p.layer[s as usize] = SOURCE_LAYER;
        }
        for v in 0..nodes as u32 {
            if p.layer[v as usize] != SOURCE_LAYER {
                p.awake.insert(&mut p.ix, v, 0, p.candidate[v as usize]);
            }
        }
        for &s in &sources {
            p.saturate_from(s);
        }
        p
    }

    #[inline]
    fn is_awake(&self, v: u32) -> bool {
        self.layer[v as usize] == self.awake_id
    }

    fn new_layer_id(&mut self) -> u32 {
        self.parked.push(Layer::default());
        (self.parked.len() - 1) as u32
    }

    fn relabel_to(&mut self, v: u32, label: u32) {
        self.awake.remove(&mut self.ix, v, self.label[v as usize]);
        self.label[v as usize] = label;
        self.awake.insert(&mut self.ix, v, label, self.candidate[v as usize]);
        self.current[v as usize] = self.net.first[v as usize];
    }

    fn enqueue(&mut self, v: u32) {
        if !self.queued[v as usize] {
            self.queued[v as usize] = true;
            self.queue.push_back(v);
        }
    }

    /// Sends excess to `v`: queued if awake, remembered by its set otherwise.
    fn activate(&mut self, v: u32) {
        match self.layer[v as usize] {
            id if id == self.awake_id => self.enqueue(v),
            SOURCE_LAYER => {}
            id => self.parked[id as usize].pending.push(v),
        }
    }

    fn saturate_from(&mut self, s: u32) {
        for e in self.net.arcs(s) {
            let v = self.net.to[e];
            let r = self.res[e];
            if r == 0 || self.layer[v as usize] == SOURCE_LAYER {
                continue;
            }
            self.res[e] = 0;
            self.res[self.net.rev[e] as usize] += r;
            self.excess[v as usize] += r as u64;
            self.activate(v);
        }
    }

    /// Parks a set split off from `W` on top of the dormant stack.
    fn park(&mut self, mut set: Layer, active: &[u32]) {
        let id = self.new_layer_id();
        if set.count <= self.awake.count {
            for v in set.members() {
                self.layer[v as usize] = id;
            }
            set.pending.extend_from_slice(active);
            self.parked[id as usize] = set;
            self.dormant.push(id);
        } else {
            for v in self.awake.members() {
                self.layer[v as usize] = id;
            }
            let old = std::mem::replace(&mut self.awake_id, id);
            set.pending.extend_from_slice(active);
            self.parked[old as usize] = set;
            self.dormant.push(old);
        }
    }

    /// Picks the awake candidate of minimum label (random among ties),
    /// waking dormant sets when no candidate is awake. When a woken set
    /// merges with what is left of `W`, the smaller side moves to a single
    /// label that keeps the labelling valid, and exact labels are
    /// recomputed once the sink is known.
    fn choose_sink<R: Rng>(&mut self, rng: &mut R) -> Option<u32> {
        let mut stale = false;
        loop {
            if let Some(l) = Layer::lowest(&self.awake.candidates) {
                let list = &self.awake.candidates[l];
                let t = list[rng.gen_range(0..list.len())];
                if stale {
                    self.global_relabel(t);
                }
                return Some(t);
            }
            let id = self.dormant.pop()?;
            let mut set = std::mem::take(&mut self.parked[id as usize]);
            let pending = std::mem::take(&mut set.pending);
            stale |= self.awake.count > 0;
            if self.awake.count == 0 {
                self.awake = set;
                self.awake_id = id;
            } else if set.count < self.awake.count {
                let base = self.awake.lists.iter().rposition(|l| !l.is_empty()).unwrap_or(0) as u32;
                let woken: Vec<u32> = set.members().collect();
                self.absorb(woken, base);
            } else {
                let base = Layer::lowest(&set.lists).map_or(0, |l| l as u32 + 1);
                let rest: Vec<u32> = self.awake.members().collect();
                self.awake = set;
                self.awake_id = id;
                self.absorb(rest, base);
            }
            for v in pending {
                if self.is_awake(v) && self.excess[v as usize] > 0 {
                    self.enqueue(v);
                }
            }
        }
    }

    /// Moves `vertices` into `W` at `label`.
    fn absorb(&mut self, vertices: Vec<u32>, label: u32) {
        for v in vertices {
            self.layer[v as usize] = self.awake_id;
            self.label[v as usize] = label;
            self.current[v as usize] = self.net.first[v as usize];
            self.awake.insert(&mut self.ix, v, label, self.candidate[v as usize]);
        }
    }

    /// Exact distances to `t` over residual arcs inside `W`; vertices that
    /// cannot reach `t` become a new dormant set.
    fn global_relabel(&mut self, t: u32) {
        let members: Vec<u32> = self.awake.members().collect();
        let mut dist = vec![u32::MAX; self.net.nodes()];
        dist[t as usize] = 0;
        let mut queue = VecDeque::from([t]);
        while let Some(v) = queue.pop_front() {
            for e in self.net.arcs(v) {
                let u = self.net.to[e];
                self.scans += 1;
                if self.is_awake(u) && dist[u as usize] == u32::MAX && self.res[self.net.rev[e] as usize] > 0 {
                    dist[u as usize] = dist[v as usize] + 1;
                    queue.push_back(u);
                }
            }
        }
        let mut unreachable = Layer::default();
        let mut active = Vec::new();
        for v in members {
            let l = self.label[v as usize];
            match dist[v as usize] {
                u32::MAX => {
                    self.awake.remove(&mut self.ix, v, l);
                    unreachable.insert(&mut self.ix, v, l, self.candidate[v as usize]);
                    if self.excess[v as usize] > 0 {
                        active.push(v);
                    }
                }
                d => self.relabel_to(v, d),
            }
        }
        if unreachable.count > 0 {
            self.park(unreachable, &active);
        }
    }

    fn run_phase(&mut self, t: u32) {
        while let Some(u) = self.queue.pop_front() {
            self.queued[u as usize] = false;
            if u == t || self.excess[u as usize] == 0 {
                continue;
            }
            if !self.is_awake(u) {
                self.activate(u);
                continue;
            }
            if !self.discharge(u, t) {
                // Labels ran out of range: recompute them and restart the queue.
                self.global_relabel(t);
                let active: Vec<u32> =
                    self.awake.members().filter(|&v| v != t && self.excess[v as usize] > 0).collect();
                for v in active {
                    self.enqueue(v);
                }
            }
        }
    }

    /// Pushes and relabels `u` until its excess is gone or it leaves `W`.
    /// Returns false if `u` could not be relabelled within the label range.
    fn discharge(&mut self, u: u32, t: u32) -> bool {
        let net = self.net;
        let end = net.first[u as usize + 1];
        loop {
            while self.current[u as usize] < end && self.excess[u as usize] > 0 {
                let e = self.current[u as usize] as usize;
                let v = net.to[e];
                self.scans += 1;
                if self.res[e] > 0 && self.is_awake(v) && self.label[u as usize] == self.label[v as usize] + 1 {
                    let delta = self.excess[u as usize].min(self.res[e] as u64) as u32;
                    self.res[e] -= delta;
                    self.res[net.rev[e] as usize] += delta;
                    self.excess[u as usize] -= delta as u64;
                    self.excess[v as usize] += delta as u64;
                    if v != t {
                        self.enqueue(v);
                    }
                    if self.res[e] == 0 {
                        self.current[u as usize] += 1;
                    }
                } else {
                    self.current[u as usize] += 1;
                }
            }
            if self.excess[u as usize] == 0 {
                return true;
            }

            let d = self.label[u as usize];
            let mut best = u32::MAX;
            for e in net.arcs(u) {
                self.scans += 1;
                let v = net.to[e];
                if self.res[e] > 0 && self.is_awake(v) {
                    best = best.min(self.label[v as usize]);
                }
            }
            if best == u32::MAX {
                self.awake.remove(&mut self.ix, u, d);
                let mut alone = Layer::default();
                alone.insert(&mut self.ix, u, d, self.candidate[u as usize]);
                let id = self.new_layer_id();
                self.layer[u as usize] = id;
                alone.pending.push(u);
                self.parked[id as usize] = alone;
                self.dormant.push(id);
                return true;
            }
            if best + 1 == d {
                // An arc became admissible while its head was dormant.
                self.current[u as usize] = net.first[u as usize];
                continue;
            }
            // Gap: nothing at or above an emptied label above the sink's can
            // reach the sink.
            if best >= d && d > self.label[t as usize] && self.awake.lists[d as usize].len() == 1 {
                let set = self.awake.split_off(d as usize);
                self.park(set, &[u]);
                return true;
            }
            if best as usize + 1 >= net.nodes() {
                return false;
            }
            self.relabel_to(u, best + 1);
        }
    }

    /// Vertices whose internal arc enters `W`: the cut of the finished phase.
    fn phase_cut(&self) -> Vec<Vertex> {
        let n = self.net.nodes() / 2;
        (0..n as Vertex).filter(|&v| !self.is_awake(in_vertex(v)) && self.is_awake(out_vertex(v))).collect()
    }

    fn make_source(&mut self, t: u32) {
        self.awake.remove(&mut self.ix, t, self.label[t as usize]);
        self.layer[t as usize] = SOURCE_LAYER;
        self.saturate_from(t);
    }
}

/// All phases of one preflow run from seed `x` on `g`, in sink order. A cut
/// set is extracted whenever a phase value drops below `bound` and every
/// earlier phase value.
pub fn sink_cuts<R: Rng>(g: &Graph, x: Vertex, bound: usize, rng: &mut R) -> (Vec<SinkCut>, u64) {
    let net = Network::build(g);
    sink_cuts_on(&net, g, x, bound, rng)
}

fn sink_cuts_on<R: Rng>(net: &Network, g: &Graph, x: Vertex, bound: usize, rng: &mut R) -> (Vec<SinkCut>, u64) {
    let mut candidate = vec![false; net.nodes()];
    for v in 0..g.n() as Vertex {
        candidate[in_vertex(v) as usize] = v != x;
    }
    for w in g.out_neighbors(x) {
        candidate[in_vertex(w) as usize] = false;
    }
    let mut p = Preflow::new(net, x, candidate);
    let mut phases = Vec::new();
    let mut bound = bound;
    while let Some(t) = p.choose_sink(rng) {
        p.run_phase(t);
        let value = p.excess[t as usize] as usize;
        let cut = (value < bound).then(|| {
            bound = value;
            p.phase_cut()
        });
        debug_assert!(cut.as_ref().is_none_or(|c| c.len() == value));
        phases.push(SinkCut { sink: SplitGraph::original(t), value, cut });
        p.make_source(t);
    }
    (phases, p.scans)
}

/// Vertex connectivity by k-doubling over sparse certificates, running the
/// preflow from random seed vertices at each level.
pub fn hrg_vertex_connectivity(g: &Graph, config: &HrgConfig) -> VcReport {
    if let Some(report) = VcReport::trivial(g, config.seed) {
        return report;
    }
    let labeling = forest_decompose(g);
    hrg_with_labeling(g, &labeling, config)
}

pub fn hrg_with_labeling(g: &Graph, labeling: &ForestLabeling, config: &HrgConfig) -> VcReport {
    let started = Instant::now();
    if let Some(mut report) = VcReport::trivial(g, config.seed) {
        report.total_ms = ms(started.elapsed());
        return report;
    }
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = VcReport { seed: config.seed, ..VcReport::default() };
    let mut best: Option<Vec<Vertex>> = None;
    let mut k = config.k_initial.unwrap_or(2).max(2);
    report.phase_times.other += ms(started.elapsed());

    loop {
        let t0 = Instant::now();
        let fg = labeling.fg_k(k);
        report.phase_times.sparsify_build += ms(t0.elapsed());
        report.final_k = k;

        let t0 = Instant::now();
        if let (_, Some(cut)) = trivial_cut_sweep(&fg) {
            if cut.len() < k as usize && best.as_ref().is_none_or(|b| cut.len() < b.len()) && is_vertex_cut(g, &cut) {
                best = Some(cut);
            }
        }
        report.phase_times.trivial += ms(t0.elapsed());

        let t0 = Instant::now();
        let net = Network::build(&fg);
        report.phase_times.other += ms(t0.elapsed());

        let t0 = Instant::now();
        let mut seeds: Vec<Vertex> = match config.fixed_seed_vertex {
            Some(x) => vec![x],
            None => (0..n as Vertex).collect(),
        };
        seeds.shuffle(&mut rng);
        for (runs, &x) in seeds.iter().enumerate() {
            let c = best.as_ref().map_or(k as usize - 1, |b| b.len().min(k as usize - 1));
            if c == 0 || (runs > 0 && runs >= seeds_needed(c, n, config.error_target)) {
                break;
            }
            let bound = best.as_ref().map_or(k as usize, |b| b.len());
            let (phases, scans) = sink_cuts_on(&net, &fg, x, bound, &mut rng);
            report.flow_calls += phases.len() as u64;
            report.flow_counters.t_edge_accesses += scans;
            for phase in phases.into_iter().rev() {
                if let Some(cut) = phase.cut {
                    if best.as_ref().is_none_or(|b| cut.len() < b.len()) && is_vertex_cut(g, &cut) {
                        best = Some(cut);
                        break;
                    }
                }
            }
        }
        report.phase_times.preflow += ms(t0.elapsed());

        if best.as_ref().is_some_and(|b| b.len() < k as usize) {
            break;
        }
        assert!((k as usize) < 2 * n, "a non-complete connected graph always has a trivial cut");
        k *= 2;
    }
    report.kappa = best.as_ref().map_or(n - 1, Vec::len);
    report.cut = best;
    report.total_ms = ms(started.elapsed());
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_undirected_edges(n as usize, &edges)
    }

    #[test]
    fn seed_counts() {
        assert_eq!(seeds_needed(3, 8, 0.01), 4);
        assert_eq!(seeds_needed(8, 1000, 0.01), 1);
        assert_eq!(seeds_needed(0, 10, 0.01), 1);
    }

    #[test]
    fn cycle_connectivity() {
        for seed in 0..10 {
            let r = hrg_vertex_connectivity(&cycle(6), &HrgConfig { seed, ..HrgConfig::default() });
            assert_eq!(r.kappa, 2);
            assert!(is_vertex_cut(&cycle(6), r.cut.as_ref().unwrap()));
        }
    }

    #[test]
    fn phases_on_cycle_are_bounded_by_two() {
        let g = cycle(8);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (phases, _) = sink_cuts(&g, 0, usize::MAX, &mut rng);
        assert_eq!(phases.len(), 5);
        assert!(phases.iter().all(|p| p.value <= 2));
        assert_eq!(phases.iter().map(|p| p.value).min(), Some(2));
    }

    #[test]
    fn complete_graph() {
        let edges: Vec<_> = (0..5u32).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
        let r = hrg_vertex_connectivity(&Graph::from_undirected_edges(5, &edges), &HrgConfig::default());
        assert_eq!((r.kappa, r.cut), (4, None));
    }
}
