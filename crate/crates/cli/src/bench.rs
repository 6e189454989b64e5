use std::collections::BTreeMap;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use vconn::generators::{generate_planted, k_core, PlantedParams};
use vconn::sparsify::{forest_decompose, ForestLabeling};
use vconn::Graph;

use crate::record::{format_series, parse_series, run_algorithm, Algorithm, BenchRecord, RunOptions};

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Matrix {
    #[serde(default)]
    pub algorithms: Vec<String>,
    #[serde(default)]
    pub instances: Vec<InstanceSpec>,
    #[serde(default = "one")]
    pub trials: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub counters: bool,
    pub k_initial: Option<u32>,
    #[serde(default = "one")]
    pub boost: u32,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InstanceSpec {
    Planted {
        id: Option<String>,
        n: usize,
        l: usize,
        s: usize,
        k_gen: Option<u32>,
        #[serde(default)]
        seed: u64,
    },
    File {
        id: Option<String>,
        path: PathBuf,
        kappa: Option<usize>,
    },
    Kcore {
        id: Option<String>,
        path: PathBuf,
        k: usize,
        kappa: Option<usize>,
    },
}

impl InstanceSpec {
    fn id(&self) -> String {
        match self {
            Self::Planted { id: Some(id), .. } | Self::File { id: Some(id), .. } | Self::Kcore { id: Some(id), .. } => id.clone(),
            Self::Planted { n, l, s, k_gen, seed, .. } => {
                format!("planted-n{n}-l{l}-s{s}-k{}-seed{seed}", k_gen.unwrap_or(PlantedParams::DEFAULT_K_GEN))
            }
            Self::File { path, .. } => path.display().to_string(),
            Self::Kcore { path, k, .. } => format!("{}-core{k}", path.display()),
        }
    }

    fn build(&self, base: &Path) -> Result<Instance> {
        let (graph, kappa) = match self {
            Self::Planted { n, l, s, k_gen, seed, .. } => {
                let params = PlantedParams {
                    k_gen: k_gen.unwrap_or(PlantedParams::DEFAULT_K_GEN),
                    ..PlantedParams::new(*n, *l, *s, *seed)
                };
                let planted = generate_planted(&params)?;
                let kappa = planted.meta(&params).kappa;
                (planted.graph, Some(kappa))
            }
            Self::File { path, kappa, .. } => {
                let path = base.join(path);
                let graph = crate::load_graph(&path)?;
                (graph, kappa.or(crate::sidecar_kappa(&path)?))
            }
            Self::Kcore { path, k, kappa, .. } => (k_core(&crate::load_graph(&base.join(path))?, *k).graph, *kappa),
        };
        let labeling = forest_decompose(&graph);
        Ok(Instance { graph, labeling, kappa })
    }
}

struct Instance {
    graph: Graph,
    labeling: ForestLabeling,
    kappa: Option<usize>,
}

/// Mean values over the trials of one (instance, algorithm) group.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub instance: String,
    pub algorithm: String,
    pub trials: u32,
    pub errors: u32,
    pub n: usize,
    pub m: usize,
    pub kappa_reference: Option<usize>,
    pub mean_kappa_found: Option<f64>,
    pub success_rate: Option<f64>,
    pub cut_valid_rate: Option<f64>,
    pub mean_time_ms: Option<f64>,
    pub std_time_ms: Option<f64>,
    pub mean_sparsify_ms: Option<f64>,
    pub mean_trivial_ms: Option<f64>,
    pub mean_balanced_ff_ms: Option<f64>,
    pub mean_unbalanced_localec_ms: Option<f64>,
    pub mean_preflow_ms: Option<f64>,
    pub mean_other_ms: Option<f64>,
    pub mean_edge_queries: Option<f64>,
    pub mean_vertex_queries: Option<f64>,
    pub mean_localec_calls: Option<f64>,
    pub edges_per_call_over_nu_k: String,
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let matrix: Matrix = toml::from_str(text).context("invalid bench matrix")?;
    if matrix.trials == 0 && !matrix.instances.is_empty() {
        bail!("trials must be positive");
    }
    if matrix.boost == 0 {
        bail!("boost must be positive");
    }
    Ok(matrix)
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn trial_seed(base: u64, instance: usize, algorithm: usize, trial: u32) -> u64 {
    mix(mix(mix(base ^ instance as u64) ^ algorithm as u64) ^ trial as u64)
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "panic".to_string()
    }
}

/// Runs every (instance, algorithm, trial) cell on the current rayon pool.
/// Records come back ordered by instance, then algorithm, then trial.
pub fn run_matrix(matrix: &Matrix, base: &Path) -> Result<Vec<BenchRecord>> {
    let algorithms: Vec<Algorithm> = matrix
        .algorithms
        .iter()
        .map(|a| a.parse().map_err(anyhow::Error::msg))
        .collect::<Result<_>>()?;
    let instances: Vec<(String, Result<Instance, String>)> = matrix
        .instances
        .par_iter()
        .map(|entry| (entry.id(), entry.build(base).map_err(|e| format!("{e:#}"))))
        .collect();

    let cells: Vec<(usize, usize, u32)> = (0..instances.len())
        .flat_map(|i| (0..algorithms.len()).flat_map(move |a| (0..matrix.trials).map(move |t| (i, a, t))))
        .collect();
    let records = cells
        .into_par_iter()
        .map(|(i, a, trial)| {
            let (id, instance) = &instances[i];
            let algo = algorithms[a];
            let opts = RunOptions {
                k_initial: matrix.k_initial,
                seed: trial_seed(matrix.seed, i, a, trial),
                boost: matrix.boost,
                counters: matrix.counters,
            };
            let mut record = match instance {
                Err(e) => BenchRecord::failed(algo, None, opts.seed, None, e.clone()),
                Ok(inst) => {
                    let run = catch_unwind(AssertUnwindSafe(|| run_algorithm(algo, &inst.graph, &inst.labeling, &opts)));
                    match run {
                        Ok(report) => BenchRecord::from_report(algo, &inst.graph, &report, &opts, inst.kappa),
                        Err(p) => BenchRecord::failed(algo, Some(&inst.graph), opts.seed, inst.kappa, panic_message(p)),
                    }
                }
            };
            record.instance = id.clone();
            record.trial = trial;
            record
        })
        .collect();
    Ok(records)
}

fn mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (mut sum, mut count) = (0.0, 0usize);
    for v in values {
        sum += v;
        count += 1;
    }
    (count > 0).then(|| sum / count as f64)
}

pub fn summarize(records: &[BenchRecord]) -> Vec<SummaryRow> {
    let mut order: Vec<(String, String)> = Vec::new();
    let mut groups: BTreeMap<(String, String), Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        let key = (r.instance.clone(), r.algorithm.clone());
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let all = &groups[&key];
            let ok: Vec<&BenchRecord> = all.iter().copied().filter(|r| r.error.is_empty()).collect();
            let avg = |f: &dyn Fn(&BenchRecord) -> f64| mean(ok.iter().map(|r| f(r)));
            let mean_time = avg(&|r| r.time_ms);
            let std_time = mean_time.map(|m| mean(ok.iter().map(|r| (r.time_ms - m).powi(2))).unwrap_or(0.0).sqrt());
            let mut series: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
            for r in &ok {
                for (nu, v) in parse_series(&r.edges_per_call_over_nu_k).unwrap_or_default() {
                    series.entry(nu).or_default().push(v);
                }
            }
            let series: Vec<(u64, f64)> = series.into_iter().map(|(nu, v)| (nu, v.iter().sum::<f64>() / v.len() as f64)).collect();
            let first = all[0];
            SummaryRow {
                instance: key.0,
                algorithm: key.1,
                trials: all.len() as u32,
                errors: (all.len() - ok.len()) as u32,
                n: first.n,
                m: first.m,
                kappa_reference: first.kappa_reference,
                mean_kappa_found: mean(ok.iter().filter_map(|r| r.kappa_found.map(|k| k as f64))),
                success_rate: mean(all.iter().filter_map(|r| r.success.map(|s| s as u8 as f64))),
                cut_valid_rate: mean(ok.iter().map(|r| r.cut_valid as u8 as f64)),
                mean_time_ms: mean_time,
                std_time_ms: std_time,
                mean_sparsify_ms: avg(&|r| r.time_sparsify_ms),
                mean_trivial_ms: avg(&|r| r.time_trivial_ms),
                mean_balanced_ff_ms: avg(&|r| r.time_balanced_ff_ms),
                mean_unbalanced_localec_ms: avg(&|r| r.time_unbalanced_localec_ms),
                mean_preflow_ms: avg(&|r| r.time_preflow_ms),
                mean_other_ms: avg(&|r| r.time_other_ms),
                mean_edge_queries: avg(&|r| r.edge_queries as f64),
                mean_vertex_queries: mean(ok.iter().filter_map(|r| r.vertex_queries.map(|v| v as f64))),
                mean_localec_calls: avg(&|r| r.localec_calls as f64),
                edges_per_call_over_nu_k: format_series(&series),
            }
        })
        .collect()
}

/// Writes `rows` as CSV with a header line, also when `rows` is empty.
pub fn write_csv<T: Serialize + Default, W: Write>(out: W, rows: &[T]) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(header::<T>()?)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

fn header<T: Serialize + Default>() -> Result<Vec<String>> {
    let mut probe = csv::Writer::from_writer(Vec::new());
    probe.serialize(T::default())?;
    let bytes = probe.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut reader = csv::Reader::from_reader(bytes.as_slice());
    Ok(reader.headers()?.iter().map(String::from).collect())
}
