//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion, nonzero exit
//! if any fails. Pass criterion numbers as arguments to run a subset.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vconn::driver::{vertex_connectivity, vertex_connectivity_with_labeling, DriverConfig, LocalEcCall};
use vconn::generators::{generate_planted, PlantedParams};
use vconn::graph::{membership, out_vertex, Graph, SplitGraph};
use vconn::hrg::{hrg_vertex_connectivity, hrg_with_labeling, HrgConfig};
use vconn::localec::{local_ec, LocalEcParams, Variant};
use vconn::search::SearchContext;
use vconn::sparsify::{forest_decompose, randomized_forest_partition, ForestLabeling};
use vconn::VcReport;
use vconn_oracle::{self as oracle, Small};

struct Check {
    ok: bool,
    detail: String,
}

#[derive(Default)]
struct Verdict {
    checks: Vec<Check>,
}

impl Verdict {
    fn check(&mut self, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check { ok, detail: detail.into() });
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Algo {
    Local(Variant),
    Hrg,
}

impl Algo {
    const ALL: [Algo; 5] = [
        Algo::Local(Variant::Local1),
        Algo::Local(Variant::Local1Plus),
        Algo::Local(Variant::Local2),
        Algo::Local(Variant::Local2Plus),
        Algo::Hrg,
    ];

    fn name(self) -> &'static str {
        match self {
            Algo::Local(v) => v.name(),
            Algo::Hrg => "hrg",
        }
    }

    fn run(self, g: &Graph, labeling: &ForestLabeling, seed: u64) -> VcReport {
        match self {
            Algo::Local(v) => {
                let config = DriverConfig { count_unique: false, ..DriverConfig::new(v, seed) };
                vertex_connectivity_with_labeling(g, labeling, &config)
            }
            Algo::Hrg => hrg_with_labeling(g, labeling, &HrgConfig { seed, ..HrgConfig::default() }),
        }
    }
}

fn small_of(g: &Graph) -> Small {
    Small::new(g.n(), &g.undirected_edges())
}

fn mask(set: &[u32]) -> u32 {
    set.iter().fold(0, |m, &v| m | 1 << v)
}

fn planted(n: usize, size_l: usize, size_s: usize, seed: u64) -> Graph {
    generate_planted(&PlantedParams::new(n, size_l, size_s, seed)).expect("planted parameters").graph
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn spread(xs: &[f64]) -> f64 {
    let max = xs.iter().cloned().fold(f64::MIN, f64::max);
    let min = xs.iter().cloned().fold(f64::MAX, f64::min);
    max / min
}

fn within_limit(v: &mut Verdict, started: Instant, limit: Duration) {
    let took = started.elapsed();
    v.check(took < limit, format!("runtime {:.1}s (limit {}s)", took.as_secs_f64(), limit.as_secs()));
}

fn c1_oracle_correctness() -> Verdict {
    let started = Instant::now();
    let graphs = 200;
    let mut invalid = [0usize; 5];
    let mut exact = [0usize; 5];
    for seed in 0..graphs {
        let (n, edges) = oracle::random_small(10_000 + seed, 10);
        let g = Graph::from_undirected_edges(n, &edges);
        let s = Small::new(n, &edges);
        let kappa = oracle::vertex_connectivity(&s);
        for (i, algo) in Algo::ALL.into_iter().enumerate() {
            let r = match algo {
                Algo::Local(v) => vertex_connectivity(&g, &DriverConfig::new(v, seed)),
                Algo::Hrg => hrg_vertex_connectivity(&g, &HrgConfig { seed, ..HrgConfig::default() }),
            };
            let valid = r.kappa >= kappa
                && match &r.cut {
                    Some(cut) => cut.len() == r.kappa && s.is_cut(mask(cut)),
                    None => r.kappa == n.saturating_sub(1),
                };
            invalid[i] += !valid as usize;
            exact[i] += (r.kappa == kappa) as usize;
        }
    }
    let mut v = Verdict::default();
    for (i, algo) in Algo::ALL.into_iter().enumerate() {
        let need = if algo == Algo::Hrg { 0.99 } else { 0.90 };
        let rate = exact[i] as f64 / graphs as f64;
        v.check(invalid[i] == 0, format!("{}: {} invalid answers", algo.name(), invalid[i]));
        v.check(rate >= need, format!("{}: exact {:.1}% (need {:.0}%)", algo.name(), 100.0 * rate, 100.0 * need));
    }
    within_limit(&mut v, started, Duration::from_secs(120));
    v
}

/// Cliques on `0..a` and `a..a+b` joined by `bridges` disjoint edges.
fn two_cliques(a: u32, b: u32, bridges: u32) -> Graph {
    let mut edges = Vec::new();
    for (lo, hi) in [(0, a), (a, a + b)] {
        for u in lo..hi {
            for w in u + 1..hi {
                edges.push((u, w));
            }
        }
    }
    edges.extend((0..bridges).map(|i| (i, a + i)));
    Graph::from_undirected_edges((a + b) as usize, &edges)
}

fn c2_bot_rate() -> Verdict {
    let started = Instant::now();
    let trials = 400u64;
    let mut v = Verdict::default();
    for (a, bridges) in [(4, 1), (4, 2), (5, 1), (5, 2), (5, 3), (6, 2), (6, 3), (7, 1), (7, 3), (8, 2)] {
        let k = bridges + 1;
        let side_a: Vec<u32> = (0..a).collect();
        let nu = (a * (a - 1) + bridges) as u64;
        let b = (2..).find(|&b: &u32| (b * (b - 1)) as u64 > 2 * 8 * nu * k as u64).unwrap();
        let g = two_cliques(a, b, bridges);
        let in_a = membership(g.n(), &side_a);
        let eq1 = g.boundary(&in_a) < k as usize && g.volume_out(side_a.iter().copied()) as u64 <= nu;
        v.check(eq1, format!("K{a}+K{b} with {bridges} bridges: side A satisfies the volume/boundary condition"));
        let mut ctx = SearchContext::new(g.clone());
        let mut bad_cut = false;
        for variant in Variant::ALL {
            for (factor, bound) in [(variant.default_budget_factor(), 0.5), (8, 0.125)] {
                let mut bots = 0;
                for seed in 0..trials {
                    let x = (seed % a as u64) as u32;
                    let p = LocalEcParams::new(variant, x, nu, k, seed * 7919 + a as u64).with_budget_factor(factor);
                    let r = local_ec(&mut ctx, variant, &p);
                    match r.cut() {
                        Some(s) => bad_cut |= !s.contains(&x) || s.len() >= g.n() || g.boundary(&membership(g.n(), s)) >= k as usize,
                        None => bots += 1,
                    }
                }
                let rate = bots as f64 / trials as f64;
                let margin = 3.0 * (bound * (1.0 - bound) / trials as f64).sqrt();
                v.check(
                    rate <= bound + margin,
                    format!("K{a}+K{b} {} factor {factor}: bot rate {:.3} (limit {:.3})", variant.name(), rate, bound + margin),
                );
            }
        }
        v.check(!bad_cut, format!("K{a}+K{b}: all returned cuts valid"));
    }
    within_limit(&mut v, started, Duration::from_secs(120));
    v
}

fn c3_counter_scaling() -> Verdict {
    let started = Instant::now();
    let mut v = Verdict::default();
    let base = planted(4000, 5, 40, 3);
    let labeling = forest_decompose(&base);
    let calls = 20;
    // Normalized counter series keyed by (variant, counter).
    let mut series: BTreeMap<(&str, &str), Vec<f64>> = BTreeMap::new();
    let mut cuts = 0;
    for k in [8u32, 16, 32] {
        let fg = labeling.fg_k(k);
        let delta = fg.min_out_degree().unwrap().1 as u64;
        let split = SplitGraph::build(&fg).graph;
        let mut ctx = SearchContext::new(split);
        for nu in [delta, 2 * delta, 4 * delta, 8 * delta] {
            let (nu_f, k_f) = (nu as f64, k as f64);
            for variant in Variant::ALL {
                let mut rng = ChaCha8Rng::seed_from_u64(nu * 131 + k as u64);
                let (mut t, mut ue, mut uv) = (0.0, 0.0, 0.0);
                for _ in 0..calls {
                    let x = out_vertex(rng.gen_range(0..fg.n() as u32));
                    let r = local_ec(&mut ctx, variant, &LocalEcParams::new(variant, x, nu, k, rng.gen()));
                    cuts += r.cut().is_some() as usize;
                    t += r.counters.t_edge_accesses as f64 / calls as f64;
                    ue += r.counters.u_edges as f64 / calls as f64;
                    uv += r.counters.u_vertices as f64 / calls as f64;
                }
                let name = variant.name();
                series.entry((name, "t/(nu k^2)")).or_default().push(t / (nu_f * k_f * k_f));
                match variant {
                    Variant::Local1Plus => series.entry((name, "u_vertices/(nu k)")).or_default().push(uv / (nu_f * k_f)),
                    Variant::Local2 => series.entry((name, "u_edges/(nu k)")).or_default().push(ue / (nu_f * k_f)),
                    Variant::Local2Plus => {
                        series.entry((name, "u_edges/(nu k)")).or_default().push(ue / (nu_f * k_f));
                        series.entry((name, "u_vertices/nu")).or_default().push(uv / nu_f);
                    }
                    Variant::Local1 => {}
                }
            }
        }
    }
    for ((name, counter), values) in &series {
        let s = spread(values);
        v.check(s <= 2.0, format!("{name} {counter}: range {:.3}..{:.3}, spread {s:.2}x", values.iter().cloned().fold(f64::MAX, f64::min), values.iter().cloned().fold(f64::MIN, f64::max)));
    }
    v.check(true, format!("{cuts} cuts returned on certificates of a 40-connected instance"));
    within_limit(&mut v, started, Duration::from_secs(300));
    v
}

/// Mean of `t_edge_accesses / (nu k)` and of the uniform-stop expectation
/// `((k-1)(B+1)/2 + B) / (nu k)` per `nu`.
fn per_nu(log: &[LocalEcCall], factor: u64) -> BTreeMap<u64, (f64, f64)> {
    let mut acc: BTreeMap<u64, (f64, f64, usize)> = BTreeMap::new();
    for c in log {
        let nk = (c.nu * c.k as u64) as f64;
        let budget = (factor * c.nu * c.k as u64) as f64;
        let expected = ((c.k as f64 - 1.0) * (budget + 1.0) / 2.0 + budget) / nk;
        let e = acc.entry(c.nu).or_default();
        e.0 += c.counters.t_edge_accesses as f64 / nk;
        e.1 += expected;
        e.2 += 1;
    }
    acc.into_iter().map(|(nu, (t, x, c))| (nu, (t / c as f64, x / c as f64))).collect()
}

struct SpeedRuns {
    times: BTreeMap<&'static str, Vec<f64>>,
    exact: BTreeMap<&'static str, usize>,
    logs: BTreeMap<&'static str, Vec<LocalEcCall>>,
    elapsed: Duration,
}

fn speed_runs() -> SpeedRuns {
    let started = Instant::now();
    let variants = [Variant::Local1, Variant::Local1Plus, Variant::Local2Plus];
    let mut runs = SpeedRuns { times: BTreeMap::new(), exact: BTreeMap::new(), logs: BTreeMap::new(), elapsed: Duration::ZERO };
    for instance in 0..5u64 {
        let g = planted(10_000, 5, 8, 100 + instance);
        let labeling = forest_decompose(&g);
        for run in 0..5u64 {
            for variant in variants {
                let config = DriverConfig { count_unique: false, ..DriverConfig::new(variant, instance * 10 + run) };
                let r = vertex_connectivity_with_labeling(&g, &labeling, &config);
                runs.times.entry(variant.name()).or_default().push(r.total_ms);
                *runs.exact.entry(variant.name()).or_default() += (r.kappa == 8) as usize;
                if instance == 0 && run == 0 {
                    runs.logs.insert(variant.name(), r.localec_call_log);
                }
            }
        }
    }
    runs.elapsed = started.elapsed();
    runs
}

fn c4_degree_counting(runs: &SpeedRuns) -> Verdict {
    let mut v = Verdict::default();
    let local1 = per_nu(&runs.logs["local1"], Variant::Local1.default_budget_factor());
    for variant in [Variant::Local1Plus, Variant::Local2Plus] {
        let other = per_nu(&runs.logs[variant.name()], variant.default_budget_factor());
        let mut worst: Option<(u64, f64)> = None;
        let mut missing = Vec::new();
        for (&nu, &(base, _)) in &local1 {
            match other.get(&nu) {
                Some(&(value, _)) => {
                    let ratio = value / base;
                    if worst.is_none_or(|(_, r)| ratio > r) {
                        worst = Some((nu, ratio));
                    }
                }
                None => missing.push(nu),
            }
        }
        let (nu, ratio) = worst.unwrap_or((0, f64::INFINITY));
        v.check(
            missing.is_empty() && ratio < 1.0,
            format!("{} below local1 at all {} nu (worst ratio {ratio:.3} at nu {nu}; missing {missing:?})", variant.name(), local1.len()),
        );
    }
    let (&nu, &(value, expected)) = local1.iter().next_back().expect("local1 made LocalEC calls");
    let ratio = value / expected;
    v.check(
        (0.5..=2.0).contains(&ratio),
        format!("local1 at largest nu {nu}: {value:.2} vs uniform-stop regime {expected:.2} (ratio {ratio:.2})"),
    );
    v
}

fn c5_speedup(runs: &SpeedRuns) -> Verdict {
    let mut v = Verdict::default();
    let base = mean(&runs.times["local1"]);
    for name in ["local1plus", "local2plus"] {
        let m = mean(&runs.times[name]);
        v.check(base / m >= 1.5, format!("{name}: mean {m:.0} ms vs local1 {base:.0} ms, speedup {:.2}x (need 1.5x)", base / m));
    }
    for (name, hits) in &runs.exact {
        v.check(true, format!("{name}: {hits}/25 runs found kappa 8"));
    }
    v.check(runs.elapsed < Duration::from_secs(600), format!("runtime {:.1}s (limit 600s)", runs.elapsed.as_secs_f64()));
    v
}

fn c6_success_rates() -> Verdict {
    let started = Instant::now();
    let algos = [Algo::Local(Variant::Local1), Algo::Local(Variant::Local1Plus), Algo::Local(Variant::Local2Plus), Algo::Hrg];
    let mut v = Verdict::default();
    for kappa in [4usize, 8, 15] {
        let mut exact = [0usize; 4];
        let mut invalid = 0;
        let mut runs = 0;
        for instance in 0..20u64 {
            let g = planted(1000, 5, kappa, 1000 * kappa as u64 + instance);
            let labeling = forest_decompose(&g);
            for run in 0..5u64 {
                runs += 1;
                for (i, algo) in algos.into_iter().enumerate() {
                    let r = algo.run(&g, &labeling, instance * 5 + run);
                    exact[i] += (r.kappa == kappa) as usize;
                    let valid = r.cut.as_ref().is_some_and(|c| c.len() == r.kappa && vconn::graph::is_vertex_cut(&g, c));
                    invalid += !valid as usize;
                }
            }
        }
        for (i, algo) in algos.into_iter().enumerate() {
            let need = if algo == Algo::Hrg { 0.99 } else { 0.95 };
            let rate = exact[i] as f64 / runs as f64;
            v.check(rate >= need, format!("kappa {kappa} {}: {:.0}% optimal (need {:.0}%)", algo.name(), 100.0 * rate, 100.0 * need));
        }
        v.check(invalid == 0, format!("kappa {kappa}: {invalid} invalid cuts"));
    }
    within_limit(&mut v, started, Duration::from_secs(600));
    v
}

fn c7_sparsification() -> Verdict {
    let started = Instant::now();
    let mut failures = 0;
    let mut checked = 0;
    for seed in 0..100u64 {
        let (n, edges) = oracle::random_small(20_000 + seed, 10);
        let g = Graph::from_undirected_edges(n, &edges);
        let kappa = oracle::vertex_connectivity(&Small::new(n, &edges));
        for labeling in [forest_decompose(&g), randomized_forest_partition(&g, &mut ChaCha8Rng::seed_from_u64(seed))] {
            for k in 1..=n.max(1) as u32 {
                let fg = labeling.fg_k(k);
                let ok = fg.m() / 2 <= n * k as usize
                    && oracle::vertex_connectivity(&small_of(&fg)).min(k as usize) == kappa.min(k as usize);
                failures += !ok as usize;
                checked += 1;
            }
        }
    }
    let mut v = Verdict::default();
    v.check(failures == 0, format!("{failures} failures over {checked} (graph, labeling, k) cases"));
    within_limit(&mut v, started, Duration::from_secs(60));
    v
}

fn c8_generator() -> Verdict {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    for i in 0..50u64 {
        let n = rng.gen_range(6..=14);
        let size_l = rng.gen_range(1..=3.min(n - 2));
        let size_s = rng.gen_range(1..=4.min(n - 1 - size_l));
        let params = PlantedParams::new(n, size_l, size_s, 300 + i);
        let p = generate_planted(&params).unwrap();
        let (kappa, cuts) = oracle::minimum_cuts(&small_of(&p.graph));
        if kappa != size_s || cuts != vec![mask(&p.triple.separator)] {
            failures.push(format!("n {n} L {size_l} S {size_s}: kappa {kappa}, {} minimum cuts", cuts.len()));
        }
    }
    let mut v = Verdict::default();
    v.check(failures.is_empty(), format!("{} of 50 instances differ {failures:?}", failures.len()));
    within_limit(&mut v, started, Duration::from_secs(120));
    v
}

fn c9_crossover() -> Verdict {
    let started = Instant::now();
    let algos = [Algo::Local(Variant::Local1Plus), Algo::Local(Variant::Local2Plus), Algo::Hrg];
    let mut v = Verdict::default();
    for n in [1000usize, 2000, 5000] {
        let mut times = [0.0f64; 3];
        let runs = 3;
        for instance in 0..runs {
            let g = planted(n, 5, 8, 9000 + n as u64 + instance);
            let labeling = forest_decompose(&g);
            for (i, algo) in algos.into_iter().enumerate() {
                times[i] += algo.run(&g, &labeling, instance).total_ms / runs as f64;
            }
        }
        let hrg = times[2];
        for (i, algo) in algos[..2].iter().enumerate() {
            v.check(
                times[i] < hrg,
                format!("n {n}: {} {:.0} ms vs hrg {hrg:.0} ms ({:.1}x)", algo.name(), times[i], hrg / times[i]),
            );
        }
    }
    within_limit(&mut v, started, Duration::from_secs(600));
    v
}

fn main() {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let wanted = |id: &str| filter.is_empty() || filter.iter().any(|f| f == id);
    let mut failed = 0;
    let mut report = |id: &str, title: &str, v: Verdict| {
        let ok = v.passed();
        failed += !ok as usize;
        println!("[{}] {id}. {title}", if ok { "PASS" } else { "FAIL" });
        for c in &v.checks {
            println!("       {} {}", if c.ok { "ok " } else { "BAD" }, c.detail);
        }
    };
    type Criterion = (&'static str, &'static str, fn() -> Verdict);
    let first: [Criterion; 3] = [
        ("1", "oracle correctness on small random graphs", c1_oracle_correctness),
        ("2", "LocalEC miss rate on two-clique instances", c2_bot_rate),
        ("3", "LocalEC counter scaling over a nu-k grid", c3_counter_scaling),
    ];
    for (id, title, run) in &first {
        if wanted(id) {
            report(id, title, run());
        }
    }
    if wanted("4") || wanted("5") {
        let runs = speed_runs();
        if wanted("4") {
            report("4", "degree counting lowers edges per LocalEC call", c4_degree_counting(&runs));
        }
        if wanted("5") {
            report("5", "end-to-end speedup over local1", c5_speedup(&runs));
        }
    }
    let rest: [Criterion; 4] = [
        ("6", "success rates on planted cuts", c6_success_rates),
        ("7", "sparse certificates preserve small cuts", c7_sparsification),
        ("8", "planted separator is the unique minimum cut", c8_generator),
        ("9", "local variants beat the preflow baseline for n >= 1000", c9_crossover),
    ];
    for (id, title, run) in &rest {
        if wanted(id) {
            report(id, title, run());
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
