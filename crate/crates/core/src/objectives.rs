//! Submodular value-query oracles.
//!
//! Five concrete families: additive, weighted coverage, influence on a
//! social graph, graph cut (the non-monotone family), and the adversarial
//! `example1` family whose round-robin outcomes are known in closed form.
//! All families are normalized (`f(∅) = 0`) and non-negative.
//!
//! [`check_submodular`] and [`check_monotone`] verify the defining
//! inequalities exhaustively on small ground sets (falling back to random
//! sampling beyond `m = 12`), including both set-function inequalities of
//! the classic submodularity characterization.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::rng::{rng_from_seed, RngSeed};
use crate::set::{GroundSet, ItemId, ItemSet};

/// Absolute tolerance for floating-point comparisons; all families produce
/// values far above this scale.
pub const VALUE_TOL: f64 = 1e-9;

/// Default epsilon ladder for the `example1` family. Only the strict
/// ordering matters; powers of ten keep float comparisons well separated.
pub const EXAMPLE1_DEFAULT_EPS: [f64; 4] = [1e-3, 1e-4, 1e-5, 1e-6];

fn example1_default_eps() -> Vec<f64> {
    EXAMPLE1_DEFAULT_EPS.to_vec()
}

/// Declarative description of an objective; compiles to an
/// [`ObjectiveOracle`] against a concrete ground set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ObjectiveSpec {
    /// `f(S) = sum of per-item weights`.
    Additive { weights: Vec<f64> },
    /// Weighted coverage: item `j` covers `covers[j] ⊆ [universe]`,
    /// `f(S) = total weight of covered universe elements`.
    Coverage {
        universe: usize,
        covers: Vec<Vec<usize>>,
        weights: Vec<f64>,
    },
    /// Expected number of influenced users: every item is a vertex, each
    /// non-seed vertex is activated independently with probability `q` per
    /// seed neighbor. `f(S) = |S| + Σ_{v∉S} 1 - (1-q)^{N_S(v)}`.
    Influence { edges: Vec<(u32, u32)>, q: f64 },
    /// Weight of edges crossing the cut `(S, V∖S)`; non-monotone.
    Cut {
        edges: Vec<(u32, u32)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
    },
    /// Adversarial family on `m = n²+1` items where the all-greedy and
    /// strategic round-robin outcomes for agent 1 are known exactly.
    /// `agent` is 1-indexed; `eps` is the strictly decreasing ladder
    /// `1 >> e1 > e2 > e3 > e4 > 0`.
    Example1 {
        n: usize,
        agent: usize,
        #[serde(default = "example1_default_eps")]
        eps: Vec<f64>,
    },
}

impl ObjectiveSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            ObjectiveSpec::Additive { .. } => "additive",
            ObjectiveSpec::Coverage { .. } => "coverage",
            ObjectiveSpec::Influence { .. } => "influence",
            ObjectiveSpec::Cut { .. } => "cut",
            ObjectiveSpec::Example1 { .. } => "example1",
        }
    }

    /// Whether the family is monotone (cut is the one non-monotone family).
    pub fn is_monotone_family(&self) -> bool {
        !matches!(self, ObjectiveSpec::Cut { .. })
    }

    /// Validates the parameters against a ground set and builds the oracle.
    pub fn compile(&self, ground: &GroundSet) -> Result<ObjectiveOracle> {
        let m = ground.size();
        let kind = match self {
            ObjectiveSpec::Additive { weights } => {
                check_weights("additive weights", weights, m)?;
                OracleKind::Additive {
                    weights: weights.clone(),
                }
            }
            ObjectiveSpec::Coverage {
                universe,
                covers,
                weights,
            } => {
                if covers.len() != m {
                    return Err(Error::InvalidSpec(format!(
                        "coverage needs one covered subset per item: got {} for m={m}",
                        covers.len()
                    )));
                }
                check_weights("coverage weights", weights, *universe)?;
                for (j, cover) in covers.iter().enumerate() {
                    if cover.iter().any(|&e| e >= *universe) {
                        return Err(Error::InvalidSpec(format!(
                            "item {j} covers an element outside the universe [0,{universe})"
                        )));
                    }
                }
                OracleKind::Coverage {
                    covers: covers.clone(),
                    weights: weights.clone(),
                }
            }
            ObjectiveSpec::Influence { edges, q } => {
                if !(0.0..=1.0).contains(q) {
                    return Err(Error::InvalidSpec(format!(
                        "activation probability q={q} outside [0,1]"
                    )));
                }
                OracleKind::Influence {
                    graph: SimpleGraph::new(m, edges)?,
                    q: *q,
                }
            }
            ObjectiveSpec::Cut { edges, weights } => {
                let graph = SimpleGraph::new(m, edges)?;
                let weights = match weights {
                    Some(w) => {
                        check_weights("cut edge weights", w, edges.len())?;
                        // edges are re-sorted during graph construction, so
                        // re-associate weights with the normalized order
                        let mut lookup: HashMap<(u32, u32), f64> = HashMap::new();
                        for (&(u, v), &w) in edges.iter().zip(w.iter()) {
                            lookup.insert((u.min(v), u.max(v)), w);
                        }
                        graph.edges().iter().map(|e| lookup[e]).collect()
                    }
                    None => vec![1.0; edges.len()],
                };
                OracleKind::Cut { graph, weights }
            }
            ObjectiveSpec::Example1 { n, agent, eps } => {
                let params = Example1Params::new(*n, *agent, eps)?;
                if m != params.item_count() {
                    return Err(Error::InvalidSpec(format!(
                        "example1 with n={n} needs m={} items, ground set has {m}",
                        params.item_count()
                    )));
                }
                OracleKind::Example1(params)
            }
        };
        Ok(ObjectiveOracle {
            ground_size: m,
            kind,
            queries: AtomicU64::new(0),
            memo: None,
        })
    }
}

fn check_weights(what: &str, weights: &[f64], expected_len: usize) -> Result<()> {
    if weights.len() != expected_len {
        return Err(Error::InvalidSpec(format!(
            "{what}: expected {expected_len} entries, got {}",
            weights.len()
        )));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidSpec(format!(
            "{what}: entries must be finite and non-negative"
        )));
    }
    Ok(())
}

/// Compiled parameters of the `example1` family.
///
/// Items carry the 1-indexed names `g_1..g_m` (id `j-1` is `g_j`). Agent 1
/// is additive with unit value on `g_1..g_{2n}`. For an agent `i != 1` the
/// singletons are `g_{i-1}: 1+e1`, `g_i: 1+e2`, `g_{n+i}: 1+e3`, every item
/// past `g_{2n}`: `1+e4`, and `f_i(Z)` is the singleton sum minus `e3` once
/// both `g_{i-1}` and `g_{n+i}` are in `Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct Example1Params {
    n: usize,
    agent: usize,
    eps: [f64; 4],
    singletons: Vec<f64>,
    /// The coupled pair `(g_{i-1}, g_{n+i})` for agents other than 1.
    pair: Option<(ItemId, ItemId)>,
}

impl Example1Params {
    pub fn new(n: usize, agent: usize, eps: &[f64]) -> Result<Example1Params> {
        if n < 1 {
            return Err(Error::InvalidSpec("example1 needs n >= 1".into()));
        }
        if agent < 1 || agent > n {
            return Err(Error::InvalidSpec(format!(
                "example1 agent index {agent} outside 1..={n}"
            )));
        }
        if eps.len() != 4 {
            return Err(Error::InvalidSpec(format!(
                "example1 needs exactly 4 eps values, got {}",
                eps.len()
            )));
        }
        let strict = eps[0] < 1.0
            && eps[3] > 0.0
            && eps.windows(2).all(|w| w[0] > w[1]);
        if !strict {
            return Err(Error::InvalidSpec(
                "example1 eps must satisfy 1 > e1 > e2 > e3 > e4 > 0".into(),
            ));
        }
        let m = n * n + 1;
        let mut singletons = vec![0.0; m];
        let mut pair = None;
        if agent == 1 {
            for w in singletons.iter_mut().take(2 * n) {
                *w = 1.0;
            }
        } else {
            // ids are 0-indexed: g_j is id j-1
            singletons[agent - 2] = 1.0 + eps[0];
            singletons[agent - 1] = 1.0 + eps[1];
            singletons[n + agent - 1] = 1.0 + eps[2];
            for w in singletons.iter_mut().take(m).skip(2 * n) {
                *w = 1.0 + eps[3];
            }
            pair = Some((ItemId::new(agent - 2), ItemId::new(n + agent - 1)));
        }
        Ok(Example1Params {
            n,
            agent,
            eps: [eps[0], eps[1], eps[2], eps[3]],
            singletons,
            pair,
        })
    }

    pub fn item_count(&self) -> usize {
        self.n * self.n + 1
    }

    pub fn coupled_pair(&self) -> Option<(ItemId, ItemId)> {
        self.pair
    }

    fn value(&self, set: &ItemSet) -> f64 {
        let mut total: f64 = set.iter().map(|id| self.singletons[id.index()]).sum();
        if let Some((a, b)) = self.pair {
            if set.contains(a) && set.contains(b) {
                total -= self.eps[2];
            }
        }
        total
    }
}

#[derive(Clone, Debug)]
enum OracleKind {
    Additive { weights: Vec<f64> },
    Coverage { covers: Vec<Vec<usize>>, weights: Vec<f64> },
    Influence { graph: SimpleGraph, q: f64 },
    Cut { graph: SimpleGraph, weights: Vec<f64> },
    Example1(Example1Params),
}

/// A compiled value oracle with a query counter and optional memoization
/// (off by default; brute-force verifiers repeat queries heavily).
#[derive(Debug)]
pub struct ObjectiveOracle {
    ground_size: usize,
    kind: OracleKind,
    queries: AtomicU64,
    memo: Option<Mutex<HashMap<ItemSet, f64>>>,
}

impl ObjectiveOracle {
    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    /// Turns on value memoization keyed on the canonical sorted set.
    pub fn with_memo(mut self) -> Self {
        self.memo = Some(Mutex::new(HashMap::new()));
        self
    }

    /// Number of value queries issued so far. Every [`value`] call counts
    /// exactly once, memoized or not.
    ///
    /// [`value`]: ObjectiveOracle::value
    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    /// `f(S)`. Deterministic; `f(∅) = 0` for every family.
    pub fn value(&self, set: &ItemSet) -> f64 {
        if let Some(max) = set.max_id() {
            assert!(
                max.index() < self.ground_size,
                "item {max} outside ground set of size {}",
                self.ground_size
            );
        }
        self.queries.fetch_add(1, Ordering::Relaxed);
        if let Some(memo) = &self.memo {
            let mut memo = memo.lock().unwrap();
            if let Some(&v) = memo.get(set) {
                return v;
            }
            let v = self.eval(set);
            memo.insert(set.clone(), v);
            return v;
        }
        self.eval(set)
    }

    /// Marginal value `f(x | S) = f(S ∪ {x}) - f(S)`; `x` must not be in `S`.
    pub fn marginal(&self, x: ItemId, set: &ItemSet) -> f64 {
        assert!(!set.contains(x), "marginal of {x} requested with {x} in the set");
        self.value(&set.with(x)) - self.value(set)
    }

    fn eval(&self, set: &ItemSet) -> f64 {
        match &self.kind {
            OracleKind::Additive { weights } => {
                set.iter().map(|id| weights[id.index()]).sum()
            }
            OracleKind::Coverage { covers, weights } => {
                let mut covered = vec![false; weights.len()];
                let mut total = 0.0;
                for id in set.iter() {
                    for &e in &covers[id.index()] {
                        if !covered[e] {
                            covered[e] = true;
                            total += weights[e];
                        }
                    }
                }
                total
            }
            OracleKind::Influence { graph, q } => {
                let v = graph.vertex_count();
                let mut seed = vec![false; v];
                for id in set.iter() {
                    seed[id.index()] = true;
                }
                let mut seed_neighbors = vec![0u32; v];
                for id in set.iter() {
                    for &nb in graph.neighbors(id.index()) {
                        seed_neighbors[nb as usize] += 1;
                    }
                }
                let mut total = set.len() as f64;
                for u in 0..v {
                    if !seed[u] && seed_neighbors[u] > 0 {
                        total += 1.0 - (1.0 - q).powi(seed_neighbors[u] as i32);
                    }
                }
                total
            }
            OracleKind::Cut { graph, weights } => {
                let mut in_set = vec![false; graph.vertex_count()];
                for id in set.iter() {
                    in_set[id.index()] = true;
                }
                graph
                    .edges()
                    .iter()
                    .zip(weights.iter())
                    .filter(|(&(u, v), _)| in_set[u as usize] != in_set[v as usize])
                    .map(|(_, &w)| w)
                    .sum()
            }
            OracleKind::Example1(params) => params.value(set),
        }
    }
}

// ---------------------------------------------------------------------------
// Property checkers
// ---------------------------------------------------------------------------

/// Largest ground set checked exhaustively; beyond this the checkers fall
/// back to randomized sampling.
pub const EXHAUSTIVE_CHECK_LIMIT: usize = 12;

const SAMPLED_CHECKS: u64 = 50_000;

/// First violation found by a property check, with both sides of the
/// failed inequality.
#[derive(Clone, Debug)]
pub struct PropertyWitness {
    pub law: &'static str,
    pub s: ItemSet,
    pub t: ItemSet,
    pub x: Option<ItemId>,
    pub lhs: f64,
    pub rhs: f64,
}

/// Outcome of a submodularity or monotonicity check.
#[derive(Clone, Debug)]
pub struct PropertyReport {
    /// `exhaustive` below the size limit, `sampled` above it.
    pub exhaustive: bool,
    /// Number of inequalities evaluated.
    pub checks: u64,
    pub witness: Option<PropertyWitness>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    pub fn describe(&self) -> String {
        let mode = if self.exhaustive { "exhaustive" } else { "sampled" };
        match &self.witness {
            None => format!("pass ({mode}, {} checks)", self.checks),
            Some(w) => format!(
                "FAIL {} at S={:?} T={:?} x={:?}: {} < {}",
                w.law, w.s, w.t, w.x, w.lhs, w.rhs
            ),
        }
    }
}

/// Precomputed table of `f` over every subset of `[0, m)`.
struct ValueTable {
    values: Vec<f64>,
}

impl ValueTable {
    fn build(oracle: &ObjectiveOracle, m: usize) -> ValueTable {
        let values = (0u64..1 << m)
            .map(|mask| oracle.value(&ItemSet::from_mask(mask)))
            .collect();
        ValueTable { values }
    }

    fn get(&self, mask: u64) -> f64 {
        self.values[mask as usize]
    }

    /// `f(x | S)` for `x ∉ S`, via table lookups.
    fn marginal(&self, x: usize, mask: u64) -> f64 {
        self.get(mask | (1 << x)) - self.get(mask)
    }
}

/// Verifies submodularity: diminishing marginals `f(x|S) ≥ f(x|T)` for all
/// `S ⊆ T`, `x ∉ T`, plus the general set-function inequality
/// `f(T) ≤ f(S) + Σ_{x∈T∖S} f(x|S) − Σ_{x∈S∖T} f(x|S∪T∖{x})` for all pairs.
/// Exhaustive for `m ≤ 12`, randomized sampling beyond.
pub fn check_submodular(spec: &ObjectiveSpec, ground: &GroundSet) -> Result<PropertyReport> {
    let oracle = spec.compile(ground)?;
    let m = ground.size();
    if m <= EXHAUSTIVE_CHECK_LIMIT {
        Ok(check_submodular_exhaustive(&oracle, m))
    } else {
        Ok(check_submodular_sampled(&oracle, m, RngSeed(0)))
    }
}

fn check_submodular_exhaustive(oracle: &ObjectiveOracle, m: usize) -> PropertyReport {
    let table = ValueTable::build(oracle, m);
    let full: u64 = (1 << m) - 1;
    let mut checks = 0u64;

    // diminishing marginals over all chains S ⊆ T, x ∉ T
    for t in 0..=full {
        let rest = full & !t;
        let mut x_bits = rest;
        while x_bits != 0 {
            let x = x_bits.trailing_zeros() as usize;
            x_bits &= x_bits - 1;
            let gain_t = table.marginal(x, t);
            // iterate over submasks of t
            let mut s = t;
            loop {
                checks += 1;
                let gain_s = table.marginal(x, s);
                if gain_s < gain_t - VALUE_TOL {
                    return PropertyReport {
                        exhaustive: true,
                        checks,
                        witness: Some(PropertyWitness {
                            law: "diminishing marginals",
                            s: ItemSet::from_mask(s),
                            t: ItemSet::from_mask(t),
                            x: Some(ItemId(x as u32)),
                            lhs: gain_s,
                            rhs: gain_t,
                        }),
                    };
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & t;
            }
        }
    }

    // general inequality over all ordered pairs (S, T)
    for s in 0..=full {
        for t in 0..=full {
            checks += 1;
            let mut rhs = table.get(s);
            let mut bits = t & !s;
            while bits != 0 {
                let x = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                rhs += table.marginal(x, s);
            }
            let mut bits = s & !t;
            while bits != 0 {
                let x = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                rhs -= table.marginal(x, (s | t) & !(1 << x));
            }
            if table.get(t) > rhs + VALUE_TOL {
                return PropertyReport {
                    exhaustive: true,
                    checks,
                    witness: Some(PropertyWitness {
                        law: "general submodular inequality",
                        s: ItemSet::from_mask(s),
                        t: ItemSet::from_mask(t),
                        x: None,
                        lhs: rhs,
                        rhs: table.get(t),
                    }),
                };
            }
        }
    }

    PropertyReport {
        exhaustive: true,
        checks,
        witness: None,
    }
}

fn check_submodular_sampled(oracle: &ObjectiveOracle, m: usize, seed: RngSeed) -> PropertyReport {
    let mut rng = rng_from_seed(seed);
    let mut checks = 0u64;
    for _ in 0..SAMPLED_CHECKS {
        let t_mask: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.5)).collect();
        let t = ItemSet::from_indices((0..m).filter(|&i| t_mask[i]));
        if t.len() == m {
            continue;
        }
        let s = ItemSet::from_ids(t.iter().filter(|_| rng.gen_bool(0.5)));
        let outside: Vec<usize> = (0..m).filter(|&i| !t_mask[i]).collect();
        let x = ItemId::new(outside[rng.gen_range(0..outside.len())]);
        checks += 1;
        let gain_s = oracle.marginal(x, &s);
        let gain_t = oracle.marginal(x, &t);
        if gain_s < gain_t - VALUE_TOL {
            return PropertyReport {
                exhaustive: false,
                checks,
                witness: Some(PropertyWitness {
                    law: "diminishing marginals",
                    s,
                    t,
                    x: Some(x),
                    lhs: gain_s,
                    rhs: gain_t,
                }),
            };
        }
    }
    PropertyReport {
        exhaustive: false,
        checks,
        witness: None,
    }
}

/// Verifies monotonicity: `f(S) ≤ f(T)` for all `S ⊆ T`, plus the
/// monotone-submodular inequality `f(T) ≤ f(S) + Σ_{x∈T∖S} f(x|S)` for all
/// pairs. Exhaustive for `m ≤ 12`, sampled beyond.
pub fn check_monotone(spec: &ObjectiveSpec, ground: &GroundSet) -> Result<PropertyReport> {
    let oracle = spec.compile(ground)?;
    let m = ground.size();
    if m <= EXHAUSTIVE_CHECK_LIMIT {
        Ok(check_monotone_exhaustive(&oracle, m))
    } else {
        Ok(check_monotone_sampled(&oracle, m, RngSeed(0)))
    }
}

fn check_monotone_exhaustive(oracle: &ObjectiveOracle, m: usize) -> PropertyReport {
    let table = ValueTable::build(oracle, m);
    let full: u64 = (1 << m) - 1;
    let mut checks = 0u64;

    // direct comparisons over all chains S ⊆ T
    for t in 0..=full {
        let mut s = t;
        loop {
            checks += 1;
            if table.get(s) > table.get(t) + VALUE_TOL {
                return PropertyReport {
                    exhaustive: true,
                    checks,
                    witness: Some(PropertyWitness {
                        law: "monotonicity",
                        s: ItemSet::from_mask(s),
                        t: ItemSet::from_mask(t),
                        x: None,
                        lhs: table.get(t),
                        rhs: table.get(s),
                    }),
                };
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & t;
        }
    }

    // monotone-submodular inequality over all ordered pairs (S, T)
    for s in 0..=full {
        for t in 0..=full {
            checks += 1;
            let mut rhs = table.get(s);
            let mut bits = t & !s;
            while bits != 0 {
                let x = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                rhs += table.marginal(x, s);
            }
            if table.get(t) > rhs + VALUE_TOL {
                return PropertyReport {
                    exhaustive: true,
                    checks,
                    witness: Some(PropertyWitness {
                        law: "monotone submodular inequality",
                        s: ItemSet::from_mask(s),
                        t: ItemSet::from_mask(t),
                        x: None,
                        lhs: rhs,
                        rhs: table.get(t),
                    }),
                };
            }
        }
    }

    PropertyReport {
        exhaustive: true,
        checks,
        witness: None,
    }
}

fn check_monotone_sampled(oracle: &ObjectiveOracle, m: usize, seed: RngSeed) -> PropertyReport {
    let mut rng = rng_from_seed(seed);
    let mut checks = 0u64;
    for _ in 0..SAMPLED_CHECKS {
        let t = ItemSet::from_indices((0..m).filter(|_| rng.gen_bool(0.5)));
        let s = ItemSet::from_ids(t.iter().filter(|_| rng.gen_bool(0.5)));
        checks += 1;
        let fs = oracle.value(&s);
        let ft = oracle.value(&t);
        if fs > ft + VALUE_TOL {
            return PropertyReport {
                exhaustive: false,
                checks,
                witness: Some(PropertyWitness {
                    law: "monotonicity",
                    s,
                    t,
                    x: None,
                    lhs: ft,
                    rhs: fs,
                }),
            };
        }
    }
    PropertyReport {
        exhaustive: false,
        checks,
        witness: None,
    }
}
