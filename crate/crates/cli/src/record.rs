use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use vconn::driver::{vertex_connectivity_with_labeling, DriverConfig};
use vconn::hrg::{hrg_with_labeling, HrgConfig};
use vconn::sparsify::ForestLabeling;
use vconn::{Graph, Variant, VcReport, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Local(Variant),
    Hrg,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Self::Local(Variant::Local1) => "LOCAL1",
            Self::Local(Variant::Local1Plus) => "LOCAL1PLUS",
            Self::Local(Variant::Local2) => "LOCAL2",
            Self::Local(Variant::Local2Plus) => "LOCAL2PLUS",
            Self::Hrg => "HRG",
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("hrg") {
            return Ok(Self::Hrg);
        }
        s.parse::<Variant>()
            .map(Self::Local)
            .map_err(|_| format!("unknown algorithm `{s}` (expected local1, local1plus, local2, local2plus or hrg)"))
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOptions {
    pub k_initial: Option<u32>,
    pub seed: u64,
    pub boost: u32,
    /// Track distinct arcs and vertices; slows the search down.
    pub counters: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { k_initial: None, seed: 0, boost: 1, counters: false }
    }
}

/// One algorithm run. Field order is the CSV column order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance: String,
    pub algorithm: String,
    pub trial: u32,
    pub seed: u64,
    pub n: usize,
    /// Undirected edges.
    pub m: usize,
    pub kappa_reference: Option<usize>,
    pub kappa_found: Option<usize>,
    pub cut_valid: bool,
    pub success: Option<bool>,
    pub time_ms: f64,
    pub time_sparsify_ms: f64,
    pub time_trivial_ms: f64,
    pub time_balanced_ff_ms: f64,
    pub time_unbalanced_localec_ms: f64,
    pub time_preflow_ms: f64,
    pub time_other_ms: f64,
    /// Arc accesses by LocalEC and the flow searches, repeats included.
    pub edge_queries: u64,
    pub unique_edge_queries: Option<u64>,
    pub vertex_queries: Option<u64>,
    pub localec_calls: u64,
    pub flow_calls: u64,
    pub final_k: u32,
    /// `nu:value` pairs joined by `;`.
    pub edges_per_call_over_nu_k: String,
    pub error: String,
}

pub fn run_algorithm(algo: Algorithm, g: &Graph, labeling: &ForestLabeling, opts: &RunOptions) -> VcReport {
    match algo {
        Algorithm::Local(variant) => {
            let config = driver_config(variant, opts);
            vertex_connectivity_with_labeling(g, labeling, &config)
        }
        Algorithm::Hrg => {
            let config = HrgConfig { seed: opts.seed, k_initial: opts.k_initial, ..HrgConfig::default() };
            hrg_with_labeling(g, labeling, &config)
        }
    }
}

fn driver_config(variant: Variant, opts: &RunOptions) -> DriverConfig {
    DriverConfig {
        k_initial: opts.k_initial,
        boost: opts.boost,
        count_unique: opts.counters,
        ..DriverConfig::new(variant, opts.seed)
    }
}

impl BenchRecord {
    pub fn from_report(
        algo: Algorithm,
        g: &Graph,
        report: &VcReport,
        opts: &RunOptions,
        kappa_reference: Option<usize>,
    ) -> Self {
        let t = &report.phase_times;
        let (edge_queries, unique, vertices) = match algo {
            Algorithm::Local(_) => (
                report.counters.t_edge_accesses + report.flow_counters.t_edge_accesses,
                opts.counters.then_some(report.counters.u_edges + report.flow_counters.u_edges),
                opts.counters.then_some(report.counters.u_vertices + report.flow_counters.u_vertices),
            ),
            Algorithm::Hrg => (report.flow_counters.t_edge_accesses, None, None),
        };
        let series = match algo {
            Algorithm::Local(variant) => format_series(&report.edges_per_call_over_nu_k(driver_config(variant, opts).budget_factor())),
            Algorithm::Hrg => String::new(),
        };
        Self {
            algorithm: algo.label().to_string(),
            seed: opts.seed,
            n: g.n(),
            m: g.m() / 2,
            kappa_reference,
            kappa_found: Some(report.kappa),
            cut_valid: cut_is_valid(g, report.cut.as_deref(), report.kappa),
            success: kappa_reference.map(|k| k == report.kappa),
            time_ms: report.total_ms,
            time_sparsify_ms: t.sparsify_build,
            time_trivial_ms: t.trivial,
            time_balanced_ff_ms: t.balanced_ff,
            time_unbalanced_localec_ms: t.unbalanced_localec,
            time_preflow_ms: t.preflow,
            time_other_ms: t.other,
            edge_queries,
            unique_edge_queries: unique,
            vertex_queries: vertices,
            localec_calls: report.localec_calls,
            flow_calls: report.flow_calls,
            final_k: report.final_k,
            edges_per_call_over_nu_k: series,
            ..Self::default()
        }
    }

    pub fn failed(algo: Algorithm, g: Option<&Graph>, seed: u64, kappa_reference: Option<usize>, error: String) -> Self {
        Self {
            algorithm: algo.label().to_string(),
            seed,
            n: g.map_or(0, |g| g.n()),
            m: g.map_or(0, |g| g.m() / 2),
            kappa_reference,
            error,
            ..Self::default()
        }
    }
}

pub fn format_series(series: &[(u64, f64)]) -> String {
    series.iter().map(|(nu, v)| format!("{nu}:{v:.4}")).collect::<Vec<_>>().join(";")
}

pub fn parse_series(s: &str) -> Result<Vec<(u64, f64)>, String> {
    s.split(';')
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (nu, v) = p.split_once(':').ok_or_else(|| format!("bad series entry `{p}`"))?;
            Ok((nu.parse().map_err(|_| format!("bad nu `{nu}`"))?, v.parse().map_err(|_| format!("bad value `{v}`"))?))
        })
        .collect()
}

/// A cut of size `kappa` whose removal leaves at least two components,
/// checked by breadth-first search over the undirected edges.
pub fn cut_is_valid(g: &Graph, cut: Option<&[Vertex]>, kappa: usize) -> bool {
    let Some(cut) = cut else { return false };
    let n = g.n();
    let mut blocked = vec![false; n];
    for &v in cut {
        if v as usize >= n || blocked[v as usize] {
            return false;
        }
        blocked[v as usize] = true;
    }
    if cut.len() != kappa {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for (u, v) in g.undirected_edges() {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let Some(start) = (0..n).find(|&v| !blocked[v]) else { return false };
    let mut queue = VecDeque::from([start]);
    blocked[start] = true;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !blocked[w as usize] {
                blocked[w as usize] = true;
                reached += 1;
                queue.push_back(w as usize);
            }
        }
    }
    reached < n - cut.len()
}
