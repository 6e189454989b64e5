//! The full randomized vertex connectivity algorithm.
//!
//! For `k = 2, 4, 8, …` the driver builds the sparse certificate `FG_k` and
//! looks for a vertex cut smaller than `k`, keeping a running best `k'`:
//! first the minimum-degree neighbourhood, then max flow between vertex pairs
//! sampled along arcs (balanced cuts), then LocalEC on the split graph from
//! sampled out-vertices over a doubling volume schedule (unbalanced cuts).

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{is_vertex_cut, out_vertex, AccessCounters, Graph, SplitGraph, Vertex};
use crate::localec::{local_ec, LocalEcParams, Variant};
use crate::maxflow::max_flow_vc;
use crate::search::SearchContext;
use crate::sparsify::{forest_decompose, ForestLabeling};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriverConfig {
    pub variant: Variant,
    /// First level of the doubling schedule; defaults to 2.
    pub k_initial: Option<u32>,
    /// Number of `solve_k` runs at the level where a cut is first found.
    pub boost: u32,
    pub seed: u64,
    /// Overrides the variant's default budget factor.
    pub budget_factor: Option<u64>,
    /// Scales the `3k` max-flow samples.
    pub flow_sample_multiplier: f64,
    /// Scales the `⌊m/ν⌋` LocalEC samples per volume.
    pub local_sample_multiplier: f64,
    /// Keep one [`LocalEcCall`] record per LocalEC call.
    pub log_calls: bool,
    /// Count distinct arcs and vertices in the access counters.
    pub count_unique: bool,
}

impl Default for DriverConfig {
    fn default() -> Self {
        Self {
            variant: Variant::Local2Plus,
            k_initial: None,
            boost: 1,
            seed: 0,
            budget_factor: None,
            flow_sample_multiplier: 1.0,
            local_sample_multiplier: 1.0,
            log_calls: true,
            count_unique: true,
        }
    }
}

impl DriverConfig {
    pub fn new(variant: Variant, seed: u64) -> Self {
        Self { variant, seed, ..Self::default() }
    }

    pub fn budget_factor(&self) -> u64 {
        self.budget_factor.unwrap_or(self.variant.default_budget_factor())
    }
}

/// Wall time per phase, in milliseconds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimes {
    pub sparsify_build: f64,
    pub trivial: f64,
    pub balanced_ff: f64,
    pub unbalanced_localec: f64,
    pub preflow: f64,
    pub other: f64,
}

impl PhaseTimes {
    pub fn sum(&self) -> f64 {
        self.sparsify_build + self.trivial + self.balanced_ff + self.unbalanced_localec + self.preflow + self.other
    }
}

pub(crate) fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalEcCall {
    pub nu: u64,
    pub k: u32,
    pub counters: AccessCounters,
    pub found: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VcReport {
    /// Size of the best cut found, `n - 1` for complete graphs.
    pub kappa: usize,
    /// Witness cut; absent for complete graphs and tiny inputs.
    pub cut: Option<Vec<Vertex>>,
    pub phase_times: PhaseTimes,
    pub total_ms: f64,
    /// Aggregated LocalEC counters.
    pub counters: AccessCounters,
    /// Aggregated max-flow search counters.
    pub flow_counters: AccessCounters,
    pub localec_calls: u64,
    pub flow_calls: u64,
    pub localec_call_log: Vec<LocalEcCall>,
    /// Last `k` of the doubling schedule.
    pub final_k: u32,
    pub seed: u64,
}

impl VcReport {
    pub(crate) fn trivial(g: &Graph, seed: u64) -> Option<Self> {
        let n = g.n();
        let (kappa, cut) = if n <= 1 {
            (0, None)
        } else if !g.is_connected() {
            (0, Some(Vec::new()))
        } else if g.is_complete() {
            (n - 1, None)
        } else {
            return None;
        };
        Some(Self { kappa, cut, seed, ..Self::default() })
    }

    /// Mean of `t_edge_accesses / (factor·ν·k)` per distinct `ν`, ascending.
    pub fn edges_per_call_over_nu_k(&self, budget_factor: u64) -> Vec<(u64, f64)> {
        edges_per_call_over_nu_k(&self.localec_call_log, budget_factor)
    }
}

pub fn edges_per_call_over_nu_k(log: &[LocalEcCall], budget_factor: u64) -> Vec<(u64, f64)> {
    let mut groups: std::collections::BTreeMap<u64, (f64, u64)> = Default::default();
    for c in log {
        let norm = (budget_factor * c.nu * c.k as u64) as f64;
        let e = groups.entry(c.nu).or_default();
        e.0 += c.counters.t_edge_accesses as f64 / norm;
        e.1 += 1;
    }
    groups.into_iter().map(|(nu, (s, c))| (nu, s / c as f64)).collect()
}

/// Minimum out-degree and, when it leaves vertices outside, the
/// neighbourhood of a minimum-degree vertex as a cut.
pub fn trivial_cut_sweep(g: &Graph) -> (usize, Option<Vec<Vertex>>) {
    let Some((v, delta)) = g.min_out_degree() else {
        return (0, None);
    };
    if g.n() <= delta + 1 {
        return (delta, None);
    }
    let mut cut: Vec<Vertex> = g.out_neighbors(v).collect();
    cut.sort_unstable();
    (delta, Some(cut))
}

/// Maps a cut side of the split graph to a vertex cut of the underlying
/// graph: with `L = {v : v_out ∈ side}` the cut is `N(L) \ L`, which has at
/// most as many vertices as the side has boundary arcs. `None` if `L` is
/// empty or `L ∪ N(L)` covers every vertex.
pub fn map_split_cut_to_vertex_cut(g: &Graph, split_side: &[Vertex]) -> Option<Vec<Vertex>> {
    let n = g.n();
    let mut left = vec![false; n];
    let mut any = false;
    for &sv in split_side {
        if SplitGraph::is_out(sv) {
            left[SplitGraph::original(sv) as usize] = true;
            any = true;
        }
    }
    if !any {
        return None;
    }
    let mut in_cut = vec![false; n];
    let mut cut = Vec::new();
    let mut covered = 0;
    for u in 0..n as Vertex {
        if !left[u as usize] {
            continue;
        }
        covered += 1;
        for w in g.out_neighbors(u) {
            if !left[w as usize] && !in_cut[w as usize] {
                in_cut[w as usize] = true;
                cut.push(w);
            }
        }
    }
    if covered + cut.len() == n {
        return None;
    }
    cut.sort_unstable();
    Some(cut)
}

/// Mutable state of one driver run.
struct Run<'a> {
    g: &'a Graph,
    config: &'a DriverConfig,
    rng: ChaCha8Rng,
    best: Option<Vec<Vertex>>,
    report: VcReport,
}

impl Run<'_> {
    /// Accepts `cut` if it is a genuine cut of the input and beats the best.
    fn offer(&mut self, cut: Vec<Vertex>) -> bool {
        let better = self.best.as_ref().is_none_or(|b| cut.len() < b.len());
        if better && is_vertex_cut(self.g, &cut) {
            self.best = Some(cut);
            true
        } else {
            false
        }
    }

    /// Searches `fg` for a cut of size below `bound`; returns the new bound.
    fn solve_level(&mut self, fg: &Graph, k: u32, mut bound: u32) -> u32 {
        let started = Instant::now();
        let (delta, trivial) = trivial_cut_sweep(fg);
        if let Some(cut) = trivial {
            if cut.len() < bound as usize && self.offer(cut) {
                bound = delta as u32;
            }
        }
        self.report.phase_times.trivial += ms(started.elapsed());
        if bound <= 1 {
            return bound;
        }

        let started = Instant::now();
        let mut ctx = SearchContext::new(SplitGraph::build(fg).graph);
        ctx.set_track_unique(self.config.count_unique);
        self.report.phase_times.other += ms(started.elapsed());

        let m = fg.m();
        let a = m as f64 / (3.0 * k as f64);

        let started = Instant::now();
        let flow_samples = (3.0 * k as f64 * self.config.flow_sample_multiplier).ceil() as u64;
        for _ in 0..flow_samples {
            if bound <= 1 {
                break;
            }
            let Some((x, y)) = self.sample_pair(fg) else { continue };
            let flow = max_flow_vc(&mut ctx, x, y, bound);
            self.report.flow_calls += 1;
            self.report.flow_counters += ctx.counters();
            if let Some(cut) = flow.cut {
                if self.offer(cut) {
                    bound = flow.value;
                }
            }
        }
        self.report.phase_times.balanced_ff += ms(started.elapsed());

        let started = Instant::now();
        let factor = self.config.budget_factor();
        let mut nu = delta.max(1) as u64;
        while (nu as f64) < a && bound > 1 {
            let samples = (m as f64 / nu as f64 * self.config.local_sample_multiplier).floor() as u64;
            for _ in 0..samples {
                if bound <= 1 {
                    break;
                }
                let x = fg.tail(self.rng.gen_range(0..m as u32));
                let params = LocalEcParams::new(self.config.variant, out_vertex(x), nu, bound, self.rng.gen())
                    .with_budget_factor(factor);
                let result = local_ec(&mut ctx, self.config.variant, &params);
                self.report.localec_calls += 1;
                self.report.counters += result.counters;
                let mut found = false;
                if let Some(side) = result.cut() {
                    if let Some(cut) = map_split_cut_to_vertex_cut(fg, side) {
                        if cut.len() < bound as usize && self.offer(cut) {
                            bound = self.best.as_ref().unwrap().len() as u32;
                            found = true;
                        }
                    }
                }
                if self.config.log_calls {
                    self.report.localec_call_log.push(LocalEcCall {
                        nu,
                        k: params.k,
                        counters: result.counters,
                        found,
                    });
                }
            }
            nu *= 2;
        }
        self.report.phase_times.unbalanced_localec += ms(started.elapsed());
        bound
    }

    /// Two vertices drawn as tails of uniform arcs; one resample if they are
    /// equal or adjacent, then give up.
    fn sample_pair(&mut self, fg: &Graph) -> Option<(Vertex, Vertex)> {
        let m = fg.m() as u32;
        for _ in 0..2 {
            let x = fg.tail(self.rng.gen_range(0..m));
            let y = fg.tail(self.rng.gen_range(0..m));
            if x != y && !fg.is_adjacent(x, y) {
                return Some((x, y));
            }
        }
        None
    }
}

/// Runs one search at level `k` on a prepared certificate `fg` of `g`:
/// returns the smallest verified cut of size below `k` that it finds.
pub fn solve_k(g: &Graph, fg: &Graph, k: u32, config: &DriverConfig) -> VcReport {
    let started = Instant::now();
    let mut run = Run {
        g,
        config,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        best: None,
        report: VcReport { seed: config.seed, final_k: k, ..VcReport::default() },
    };
    run.solve_level(fg, k, k);
    finish(run, started)
}

fn finish(mut run: Run<'_>, started: Instant) -> VcReport {
    let n = run.g.n();
    run.report.kappa = run.best.as_ref().map_or(n.saturating_sub(1), |c| c.len());
    run.report.cut = run.best;
    run.report.total_ms = ms(started.elapsed());
    run.report
}

/// Vertex connectivity with a witness cut, via k-doubling over sparse
/// certificates. The forest labeling is computed once and not timed.
pub fn vertex_connectivity(g: &Graph, config: &DriverConfig) -> VcReport {
    assert!(config.boost >= 1, "boost must be at least 1");
    if let Some(report) = VcReport::trivial(g, config.seed) {
        return report;
    }
    let labeling = forest_decompose(g);
    vertex_connectivity_with_labeling(g, &labeling, config)
}

/// As [`vertex_connectivity`] with a precomputed labeling of `g`.
pub fn vertex_connectivity_with_labeling(g: &Graph, labeling: &ForestLabeling, config: &DriverConfig) -> VcReport {
    let started = Instant::now();
    if let Some(mut report) = VcReport::trivial(g, config.seed) {
        report.total_ms = ms(started.elapsed());
        return report;
    }
    let mut run = Run {
        g,
        config,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        best: None,
        report: VcReport { seed: config.seed, ..VcReport::default() },
    };
    run.report.phase_times.other += ms(started.elapsed());

    let n = g.n() as u32;
    let mut k = config.k_initial.unwrap_or(2).max(2);
    loop {
        let built = Instant::now();
        let fg = labeling.fg_k(k);
        run.report.phase_times.sparsify_build += ms(built.elapsed());
        let mut bound = run.solve_level(&fg, k, k);
        run.report.final_k = k;
        if run.best.is_some() {
            for _ in 1..config.boost {
                if bound <= 1 {
                    break;
                }
                bound = run.solve_level(&fg, k, bound);
            }
            break;
        }
        assert!(k < 2 * n, "a non-complete connected graph always has a trivial cut");
        k *= 2;
    }
    finish(run, started)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: u32) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::from_undirected_edges(n as usize, &edges)
    }

    fn cycle(n: u32) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_undirected_edges(n as usize, &edges)
    }

    #[test]
    fn sweep_on_complete_and_star() {
        assert_eq!(trivial_cut_sweep(&complete(5)), (4, None));
        let star = Graph::from_undirected_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(trivial_cut_sweep(&star), (1, Some(vec![0])));
    }

    #[test]
    fn small_graphs() {
        for v in Variant::ALL {
            let cfg = DriverConfig::new(v, 3);
            let path = Graph::from_undirected_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
            let r = vertex_connectivity(&path, &cfg);
            assert_eq!(r.kappa, 1);
            assert!(is_vertex_cut(&path, r.cut.as_ref().unwrap()));
            assert_eq!(vertex_connectivity(&cycle(6), &cfg).kappa, 2);
            let r = vertex_connectivity(&complete(6), &cfg);
            assert_eq!((r.kappa, r.cut), (5, None));
            let split = Graph::from_undirected_edges(4, &[(0, 1), (2, 3)]);
            assert_eq!(vertex_connectivity(&split, &cfg).kappa, 0);
        }
    }

    #[test]
    fn complete_graph_certifies_level() {
        let g = complete(6);
        let fg = forest_decompose(&g).fg_k(5);
        let r = solve_k(&g, &fg, 5, &DriverConfig::default());
        assert_eq!(r.cut, None);
    }

    #[test]
    fn mapping_recovers_separator() {
        // Two triangles sharing vertex 2.
        let g = Graph::from_undirected_edges(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]);
        use crate::graph::in_vertex;
        let side = vec![in_vertex(0), out_vertex(0), in_vertex(1), out_vertex(1), in_vertex(2)];
        assert_eq!(map_split_cut_to_vertex_cut(&g, &side), Some(vec![2]));
        assert_eq!(map_split_cut_to_vertex_cut(&g, &[in_vertex(0)]), None);
    }

    #[test]
    fn edges_metric_groups_by_volume() {
        let call = |nu, t| LocalEcCall {
            nu,
            k: 2,
            counters: AccessCounters { t_edge_accesses: t, ..Default::default() },
            found: false,
        };
        let log = [call(4, 16), call(4, 32), call(8, 32)];
        assert_eq!(edges_per_call_over_nu_k(&log, 2), vec![(4, 1.5), (8, 1.0)]);
    }
}
