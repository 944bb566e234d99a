//! Competing influence-maximization experiments on synthetic social
//! graphs, with CSV emission.
//!
//! Three competition regimes: `low` (Erdős–Rényi), `medium` (power-law
//! expected degrees via a Chung–Lu construction), and `high`
//! (Erdős–Rényi plus ten implanted high-degree influencer vertices).
//! Every cell of the sweep derives its own seed from the master seed, so
//! a run is reproducible byte-for-byte.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{
    default_policies, run_round_robin, AgentOrdering, NegativeMarginalRule, ProtocolConfig,
};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::instance::{AgentSpec, Instance};
use crate::objectives::ObjectiveSpec;
use crate::constraints::ConstraintSpec;
use crate::rng::{derive_seed, rng_from_seed, RngSeed};
use crate::trace::allocation_of;

/// Number of influencer vertices the `high` regime implants.
pub const IMPLANT_COUNT: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Low,
    Medium,
    High,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Low => "low",
            Regime::Medium => "medium",
            Regime::High => "high",
        }
    }
}

/// Synthetic-network description: `vertices` and target `avg_degree`,
/// plus the competition regime deciding the generator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphGenSpec {
    pub vertices: usize,
    pub avg_degree: f64,
    pub regime: Regime,
    pub seed: RngSeed,
}

impl GraphGenSpec {
    fn validate(&self) -> Result<()> {
        if self.vertices < 20 {
            return Err(Error::InvalidSpec(format!(
                "graph generation needs at least 20 vertices, got {}",
                self.vertices
            )));
        }
        if !(self.avg_degree > 0.0 && self.avg_degree < self.vertices as f64) {
            return Err(Error::InvalidSpec(format!(
                "average degree {} outside (0, V)",
                self.avg_degree
            )));
        }
        Ok(())
    }
}

/// G(V, p) with `p = avg_degree / (V-1)`.
pub fn gen_erdos_renyi(vertices: usize, avg_degree: f64, seed: RngSeed) -> Result<SimpleGraph> {
    if !(avg_degree > 0.0 && avg_degree < vertices as f64) {
        return Err(Error::InvalidSpec(format!(
            "average degree {avg_degree} outside (0, {vertices})"
        )));
    }
    let p = (avg_degree / (vertices as f64 - 1.0)).min(1.0);
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..vertices as u32 {
        for v in u + 1..vertices as u32 {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::new(vertices, &edges)
}

/// Power-law expected degrees: weights sampled from a Lomax (Pareto
/// type II) distribution with shape 2, realized Chung–Lu style with edge
/// probability `min(1, c·w_u·w_v)`. The scale `c` is calibrated so the
/// expected mean degree matches the target even after probability capping
/// (at `avg_degree` near `V` the calibration saturates toward the
/// complete graph).
pub fn gen_power_law(vertices: usize, avg_degree: f64, seed: RngSeed) -> Result<SimpleGraph> {
    if !(avg_degree > 0.0 && avg_degree < vertices as f64) {
        return Err(Error::InvalidSpec(format!(
            "average degree {avg_degree} outside (0, {vertices})"
        )));
    }
    let mut rng = rng_from_seed(seed);
    // inverse-CDF sample of Lomax(shape 2, scale 1), mean 1
    let weights: Vec<f64> = (0..vertices)
        .map(|_| {
            let u: f64 = rng.gen_range(0.0..1.0);
            1.0 / (1.0 - u).sqrt() - 1.0
        })
        .collect();
    let target_edges = avg_degree * vertices as f64 / 2.0;
    let expected_edges = |c: f64| -> f64 {
        let mut total = 0.0;
        for u in 0..vertices {
            for v in u + 1..vertices {
                total += (c * weights[u] * weights[v]).min(1.0);
            }
        }
        total
    };
    // bracket then bisect the scale; expected_edges is monotone in c
    let mut hi = 1.0;
    while expected_edges(hi) < target_edges {
        hi *= 2.0;
        if hi > 1e18 {
            break;
        }
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if expected_edges(mid) < target_edges {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let c = hi;
    let mut edges = Vec::new();
    for u in 0..vertices {
        for v in u + 1..vertices {
            let p = (c * weights[u] * weights[v]).min(1.0);
            if p > 0.0 && rng.gen_bool(p) {
                edges.push((u as u32, v as u32));
            }
        }
    }
    SimpleGraph::new(vertices, &edges)
}

/// Implants ten influencer vertices: the j-th new vertex (j = 0..9) is
/// wired to `ceil(V / 3^j)` distinct pre-existing vertices chosen
/// uniformly, capped at V. Needs a host graph of at least 60 vertices.
pub fn implant_influencers(graph: &SimpleGraph, seed: RngSeed) -> Result<SimpleGraph> {
    let v = graph.vertex_count();
    if v < 60 {
        return Err(Error::InvalidSpec(format!(
            "influencer implant needs at least 60 vertices, got {v}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges: Vec<(u32, u32)> = graph.edges().to_vec();
    let mut denom = 1usize;
    for j in 0..IMPLANT_COUNT {
        let new_vertex = (v + j) as u32;
        let targets = v.div_ceil(denom).min(v);
        // uniform sample of `targets` distinct pre-existing vertices
        let mut pool: Vec<u32> = (0..v as u32).collect();
        for t in 0..targets {
            let pick = rng.gen_range(t..pool.len());
            pool.swap(t, pick);
            edges.push((pool[t], new_vertex));
        }
        denom = denom.saturating_mul(3);
    }
    SimpleGraph::new(v + IMPLANT_COUNT, &edges)
}

/// Generates the regime's graph for one experiment cell.
pub fn generate_graph(spec: &GraphGenSpec, seed: RngSeed) -> Result<SimpleGraph> {
    spec.validate()?;
    match spec.regime {
        Regime::Low => gen_erdos_renyi(spec.vertices, spec.avg_degree, seed),
        Regime::Medium => gen_power_law(spec.vertices, spec.avg_degree, seed),
        Regime::High => {
            let base = gen_erdos_renyi(spec.vertices, spec.avg_degree, seed)?;
            implant_influencers(&base, derive_seed(seed, 0x1f, 0))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    Agents,
    Cardinality,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolKind {
    Fixed,
    Randomized,
}

impl ProtocolKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProtocolKind::Fixed => "fixed",
            ProtocolKind::Randomized => "randomized",
        }
    }
}

/// A full experiment description (JSON file for the CLI).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub graph: GraphGenSpec,
    /// Agent count (the fixed value when sweeping cardinality).
    pub agents: usize,
    /// Cardinality constraint (the fixed value when sweeping agents).
    pub cardinality: usize,
    /// Activation probability of the influence objective.
    pub q: f64,
    /// Repetitions per sweep point; each run regenerates the graph from
    /// its own derived seed.
    pub runs: usize,
    pub sweep: SweepKind,
    /// Override of the swept values; defaults to 2..=6 agents or
    /// cardinality 2,5,...,20.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_values: Option<Vec<usize>>,
    pub protocol: ProtocolKind,
}

impl ExperimentSpec {
    pub fn sweep_values(&self) -> Vec<usize> {
        match &self.sweep_values {
            Some(values) => values.clone(),
            None => match self.sweep {
                SweepKind::Agents => (2..=6).collect(),
                SweepKind::Cardinality => (2..=20).step_by(3).collect(),
            },
        }
    }

    pub fn from_json(text: &str) -> Result<ExperimentSpec> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// One (sweep value, run, agent) cell of an experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub sweep: usize,
    pub run: usize,
    pub agent: usize,
    pub value: f64,
    /// Single-agent greedy value on the same graph; identical for all
    /// agents of a cell.
    pub baseline: f64,
    pub ratio: f64,
    pub protocol: ProtocolKind,
    /// 0-based position of the agent in the round order.
    pub position: usize,
}

fn influence_instance(graph: &SimpleGraph, n: usize, k: usize, q: f64) -> Result<Instance> {
    let agents = (0..n)
        .map(|_| {
            AgentSpec::new(
                ObjectiveSpec::Influence {
                    edges: graph.edges().to_vec(),
                    q,
                },
                ConstraintSpec::Cardinality { k },
            )
        })
        .collect();
    Instance::new(graph.vertex_count(), agents)
}

/// Runs an experiment: for every sweep value and run, regenerate the
/// graph, run the chosen protocol with all-greedy policies over identical
/// influence agents, and record each agent's value against the
/// single-agent greedy baseline. Rows come out in deterministic order.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ExperimentRow>> {
    spec.graph.validate()?;
    if spec.runs < 1 {
        return Err(Error::InvalidSpec("experiment needs runs >= 1".into()));
    }
    if spec.sweep == SweepKind::Agents && spec.cardinality < 1
        || spec.sweep == SweepKind::Cardinality && spec.sweep_values().iter().any(|&k| k < 1)
    {
        return Err(Error::InvalidSpec(
            "cardinality must be >= 1 (the baseline is a ratio denominator)".into(),
        ));
    }
    let mut rows = Vec::new();
    for &sweep_value in &spec.sweep_values() {
        let (n, k) = match spec.sweep {
            SweepKind::Agents => (sweep_value, spec.cardinality),
            SweepKind::Cardinality => (spec.agents, sweep_value),
        };
        if n < 1 {
            return Err(Error::InvalidSpec("agent sweep value must be >= 1".into()));
        }
        for run in 0..spec.runs {
            let cell_seed = derive_seed(spec.graph.seed, sweep_value as u64, run as u64);
            let graph = generate_graph(&spec.graph, derive_seed(cell_seed, 0, 0))?;

            let baseline_instance = influence_instance(&graph, 1, k, spec.q)?;
            let baseline_trace = run_round_robin(
                &baseline_instance,
                &default_policies(&baseline_instance),
                &ProtocolConfig::default(),
            )?;
            let baseline_alloc = allocation_of(&baseline_trace)?;
            let (baseline_objective, _) = baseline_instance.compile_agent(0);
            let baseline = baseline_objective.value(baseline_alloc.solution(0).best_set());
            debug_assert!(baseline > 0.0);

            let instance = influence_instance(&graph, n, k, spec.q)?;
            let ordering = match spec.protocol {
                ProtocolKind::Fixed => AgentOrdering::Identity,
                ProtocolKind::Randomized => {
                    AgentOrdering::Randomized(derive_seed(cell_seed, 1, 0))
                }
            };
            let trace = run_round_robin(
                &instance,
                &default_policies(&instance),
                &ProtocolConfig {
                    ordering,
                    negative_marginal_rule: NegativeMarginalRule::AsWritten,
                },
            )?;
            let alloc = allocation_of(&trace)?;
            for agent in 0..n {
                let (objective, _) = instance.compile_agent(agent);
                let value = objective.value(alloc.solution(agent).best_set());
                rows.push(ExperimentRow {
                    sweep: sweep_value,
                    run,
                    agent,
                    value,
                    baseline,
                    ratio: value / baseline,
                    protocol: spec.protocol,
                    position: trace.position_of(agent),
                });
            }
        }
    }
    Ok(rows)
}

/// CSV with a fixed header, UTF-8, LF line endings. Byte-identical for
/// identical specs and seeds.
pub fn rows_to_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from("sweep,run,agent,value,baseline,ratio,protocol,position\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.sweep,
            row.run,
            row.agent,
            row.value,
            row.baseline,
            row.ratio,
            row.protocol.name(),
            row.position
        ));
    }
    out
}
