//! Local edge-cut detection from a seed vertex.
//!
//! Every variant repeats up to `k` randomized DFS iterations from `x`. A DFS
//! that finishes on its own yields its tree as the cut side; a DFS stopped
//! early designates an endpoint `y` and, except in the last iteration, the
//! tree path `x -> y` is reversed before the next iteration. The variants
//! differ only in when they stop and how `y` is chosen.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{AccessCounters, Vertex};
use crate::search::{CapacityTable, Grow, Hook, SearchContext, StopRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Local1,
    Local1Plus,
    Local2,
    Local2Plus,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Self::Local1, Self::Local1Plus, Self::Local2, Self::Local2Plus];

    /// Factor replacing the constant 8 in the per-iteration budget.
    pub fn default_budget_factor(self) -> u64 {
        match self {
            Self::Local1 | Self::Local1Plus => 2,
            Self::Local2 | Self::Local2Plus => 3,
        }
    }

    /// Per-iteration budget: `factor·ν·k` for the first pair, `factor·ν` for
    /// the variants that only count fresh work.
    pub fn budget(self, nu: u64, k: u32, factor: u64) -> u64 {
        match self {
            Self::Local1 | Self::Local1Plus => factor * nu * k as u64,
            Self::Local2 | Self::Local2Plus => factor * nu,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Local1 => "local1",
            Self::Local1Plus => "local1plus",
            Self::Local2 => "local2",
            Self::Local2Plus => "local2plus",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown LocalEC variant `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalEcParams {
    pub x: Vertex,
    pub nu: u64,
    pub k: u32,
    pub budget_factor: u64,
    pub seed: u64,
}

impl LocalEcParams {
    /// Parameters with the variant's default budget factor.
    pub fn new(variant: Variant, x: Vertex, nu: u64, k: u32, seed: u64) -> Self {
        Self { x, nu, k, budget_factor: variant.default_budget_factor(), seed }
    }

    pub fn with_budget_factor(mut self, factor: u64) -> Self {
        self.budget_factor = factor;
        self
    }

    pub fn is_valid(&self) -> bool {
        self.nu >= 1 && self.k >= 1 && self.budget_factor >= 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Vertex set containing `x` with fewer than `k` outgoing boundary arcs.
    Cut(Vec<Vertex>),
    Bot,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalResult {
    pub outcome: Outcome,
    pub counters: AccessCounters,
    /// DFS iterations performed.
    pub iterations: u32,
    /// Endpoint designated in each early-stopped iteration, in order.
    pub endpoints: Vec<Vertex>,
}

impl LocalResult {
    pub fn cut(&self) -> Option<&[Vertex]> {
        match &self.outcome {
            Outcome::Cut(s) => Some(s),
            Outcome::Bot => None,
        }
    }
}

struct Local1Rule {
    tau: u64,
    seen: u64,
}

impl StopRule for Local1Rule {
    fn on_arc(&mut self, _: Vertex, _: bool) -> Hook {
        self.seen += 1;
        let hit = self.seen == self.tau;
        Hook { designate: hit, stop: hit }
    }
}

struct Local1PlusRule {
    tau: u64,
    volume: u64,
}

impl StopRule for Local1PlusRule {
    fn on_vertex(&mut self, _: Vertex, out_degree: usize, _: &mut CapacityTable) -> Hook {
        self.volume += out_degree as u64;
        let hit = self.volume >= self.tau;
        Hook { designate: hit, stop: hit }
    }
}

struct Local2Rule {
    tau: u64,
    budget: u64,
    fresh: u64,
}

impl StopRule for Local2Rule {
    const NEEDS_NEW_ARCS: bool = true;

    fn on_arc(&mut self, _: Vertex, is_new: bool) -> Hook {
        if !is_new {
            return Hook::default();
        }
        self.fresh += 1;
        Hook { designate: self.fresh == self.tau, stop: self.fresh >= self.budget }
    }
}

struct Local2PlusRule {
    tau: u64,
    budget: u64,
    sum: u64,
    designated: bool,
}

impl StopRule for Local2PlusRule {
    fn on_vertex(&mut self, v: Vertex, out_degree: usize, capacity: &mut CapacityTable) -> Hook {
        self.sum += capacity.get(v, out_degree);
        let designate = !self.designated && self.sum >= self.tau;
        self.designated |= designate;
        Hook { designate, stop: self.sum >= self.budget }
    }
}

/// Runs one LocalEC call on the context's graph. The graph is restored to
/// its input arc configuration before returning.
///
/// # Panics
/// If the parameters are invalid or `x` is out of range.
pub fn local_ec(ctx: &mut SearchContext, variant: Variant, params: &LocalEcParams) -> LocalResult {
    assert!(params.is_valid(), "invalid LocalEC parameters {params:?}");
    assert!((params.x as usize) < ctx.graph().n(), "start vertex out of range");

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let budget = variant.budget(params.nu, params.k, params.budget_factor);
    let n = ctx.graph().n();
    ctx.begin_call();

    let mut endpoints = Vec::new();
    let mut outcome = Outcome::Bot;
    let mut iterations = 0;
    for iteration in 1..=params.k {
        iterations = iteration;
        let last = iteration == params.k;
        let tau = if last { budget } else { rng.gen_range(1..=budget) };
        let grown = match variant {
            Variant::Local1 => ctx.grow(params.x, &mut Local1Rule { tau, seen: 0 }),
            Variant::Local1Plus => ctx.grow(params.x, &mut Local1PlusRule { tau, volume: 0 }),
            Variant::Local2 => ctx.grow(params.x, &mut Local2Rule { tau, budget, fresh: 0 }),
            Variant::Local2Plus => {
                let mut rule = Local2PlusRule { tau, budget, sum: 0, designated: false };
                let grown = ctx.grow(params.x, &mut rule);
                if matches!(grown, Grow::Stopped { .. }) {
                    settle_capacities(ctx, rule.sum - budget);
                }
                grown
            }
        };
        match grown {
            Grow::Exhausted => {
                if ctx.visited.len() < n {
                    outcome = Outcome::Cut(ctx.visited.clone());
                }
                break;
            }
            Grow::Stopped { y } => {
                let y = y.expect("every stopping rule designates before stopping");
                if !last {
                    endpoints.push(y);
                    ctx.reverse_tree_path(params.x, y);
                }
            }
        }
    }

    ctx.restore();
    LocalResult { outcome, counters: ctx.counters(), iterations, endpoints }
}

/// Zeroes the capacity of every vertex visited in the stopped DFS except
/// the last one, which keeps the overshoot.
fn settle_capacities(ctx: &mut SearchContext, overshoot: u64) {
    let (&last, rest) = ctx.visited.split_last().expect("DFS visits its root");
    for &v in rest {
        ctx.capacity.set(v, 0);
    }
    ctx.capacity.set(last, overshoot);
}

pub fn local1(ctx: &mut SearchContext, params: &LocalEcParams) -> LocalResult {
    local_ec(ctx, Variant::Local1, params)
}

pub fn local1_plus(ctx: &mut SearchContext, params: &LocalEcParams) -> LocalResult {
    local_ec(ctx, Variant::Local1Plus, params)
}

pub fn local2(ctx: &mut SearchContext, params: &LocalEcParams) -> LocalResult {
    local_ec(ctx, Variant::Local2, params)
}

pub fn local2_plus(ctx: &mut SearchContext, params: &LocalEcParams) -> LocalResult {
    local_ec(ctx, Variant::Local2Plus, params)
}
