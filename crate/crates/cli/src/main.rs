//! `vconn`: vertex connectivity runs, instance generation and benchmark
//! matrices.

mod bench;
mod record;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use vconn::generators::{generate_planted, k_core, PlantedParams};
use vconn::graph::{load_edge_list, write_edge_list};
use vconn::sparsify::forest_decompose;
use vconn::Graph;

use record::{run_algorithm, Algorithm, BenchRecord, RunOptions};

#[derive(Parser)]
#[command(name = "vconn", version, about = "Vertex connectivity of undirected graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the vertex connectivity of an edge list and print one JSON record.
    Vc {
        input: PathBuf,
        #[arg(long, default_value = "local2plus")]
        algo: Algorithm,
        /// First level of the doubling schedule.
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Repetitions at the level where a cut is first found.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        boost: u32,
        /// Also count distinct arcs and vertices.
        #[arg(long)]
        counters: bool,
        /// Reference connectivity; read from `<input>.meta.json` when absent.
        #[arg(long)]
        kappa: Option<usize>,
    },
    /// Generate an instance.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Run a TOML benchmark matrix and write per-trial and summary CSVs.
    Bench {
        matrix: PathBuf,
        /// Per-trial CSV.
        #[arg(long, default_value = "bench.csv")]
        out: PathBuf,
        /// Summary CSV; defaults to `<out>` with a `.summary.csv` suffix.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Worker threads.
        #[arg(long, env = "VCONN_JOBS")]
        jobs: Option<usize>,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Random graph with a planted separation triple (L, S, R); writes
    /// `<out>.meta.json` alongside.
    Planted {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = PlantedParams::DEFAULT_K_GEN)]
        k_gen: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Largest component of the k-core of an edge list, in the input's ids.
    Kcore {
        input: PathBuf,
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

pub(crate) fn load_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(load_edge_list(&text).with_context(|| format!("parsing {}", path.display()))?.graph)
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// The `kappa` field of `<path>.meta.json`, if that file exists.
pub(crate) fn sidecar_kappa(path: &Path) -> Result<Option<usize>> {
    let meta = sidecar_path(path);
    if !meta.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&meta).with_context(|| format!("reading {}", meta.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", meta.display()))?;
    Ok(value.get("kappa").and_then(|k| k.as_u64()).map(|k| k as usize))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct CoreMeta {
    source: String,
    k: usize,
    n: usize,
    m_edges: usize,
    min_degree: usize,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Vc { input, algo, k, seed, boost, counters, kappa } => {
            let graph = load_graph(&input)?;
            let kappa = match kappa {
                Some(k) => Some(k),
                None => sidecar_kappa(&input)?,
            };
            let opts = RunOptions { k_initial: k, seed, boost, counters };
            let labeling = forest_decompose(&graph);
            let report = run_algorithm(algo, &graph, &labeling, &opts);
            let mut record = BenchRecord::from_report(algo, &graph, &report, &opts, kappa);
            record.instance = input.display().to_string();
            println!("{}", serde_json::to_string(&record)?);
        }
        Command::Gen { kind: GenKind::Planted { n, l, s, k_gen, seed, out } } => {
            let params = PlantedParams { k_gen, ..PlantedParams::new(n, l, s, seed) };
            let planted = generate_planted(&params)?;
            fs::write(&out, write_edge_list(&planted.graph)).with_context(|| format!("writing {}", out.display()))?;
            write_json(&sidecar_path(&out), &planted.meta(&params))?;
        }
        Command::Gen { kind: GenKind::Kcore { input, k, out } } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let list = load_edge_list(&text).with_context(|| format!("parsing {}", input.display()))?;
            let core = k_core(&list.graph, k);
            let raw = |v: u32| list.original_ids[core.original[v as usize] as usize];
            let mut body = String::new();
            for (u, v) in core.graph.undirected_edges() {
                body.push_str(&format!("{} {}\n", raw(u), raw(v)));
            }
            fs::write(&out, body).with_context(|| format!("writing {}", out.display()))?;
            let meta = CoreMeta {
                source: input.display().to_string(),
                k,
                n: core.graph.n(),
                m_edges: core.graph.m() / 2,
                min_degree: core.graph.min_out_degree().map_or(0, |(_, d)| d),
            };
            write_json(&sidecar_path(&out), &meta)?;
        }
        Command::Bench { matrix, out, summary, jobs } => {
            let text = fs::read_to_string(&matrix).with_context(|| format!("reading {}", matrix.display()))?;
            let parsed = bench::parse_matrix(&text)?;
            let base = matrix.parent().unwrap_or(Path::new("."));
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(jobs) = jobs {
                if jobs == 0 {
                    bail!("jobs must be positive");
                }
                pool = pool.num_threads(jobs);
            }
            let records = pool.build()?.install(|| bench::run_matrix(&parsed, base))?;
            let failed = records.iter().filter(|r| !r.error.is_empty()).count();
            bench::write_csv(fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?, &records)?;
            let summary = summary.unwrap_or_else(|| out.with_extension("summary.csv"));
            let rows = bench::summarize(&records);
            bench::write_csv(fs::File::create(&summary).with_context(|| format!("creating {}", summary.display()))?, &rows)?;
            if failed > 0 {
                eprintln!("{failed} of {} runs failed", records.len());
            }
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
