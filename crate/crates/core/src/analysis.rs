//! Independent verification oracles: brute-force optima, per-agent
//! approximation-bound checks, envy certificates, and exact or sampled
//! ex-ante checks for the randomized protocol.
//!
//! Everything here recomputes from traces and instance data; nothing
//! trusts the engine's internal state. Bound comparisons allow an absolute
//! slack of `1e-9` for float noise on equality-tight instances.

use std::fmt;

use crate::constraints::{enumerate_independent_sets, ConstraintOracle, Ratio};
use crate::engine::{run_round_robin, AgentOrdering, NegativeMarginalRule, PolicyKind, ProtocolConfig};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::objectives::ObjectiveOracle;
use crate::rng::{derive_seed, RngSeed};
use crate::set::{ItemId, ItemSet};
use crate::trace::{allocation_of, AgentSolution, Allocation, Trace};

/// Slack for all bound comparisons.
pub const BOUND_TOL: f64 = 1e-9;

/// Largest candidate set for brute-force optimization.
pub const BRUTE_FORCE_LIMIT: usize = 22;

/// Exact maximum of the objective over independent subsets of `over`,
/// with a witness (the lexicographically smallest maximizer).
pub fn brute_force_opt(
    objective: &ObjectiveOracle,
    constraint: &ConstraintOracle,
    over: &ItemSet,
) -> Result<(f64, ItemSet)> {
    if over.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            what: "brute_force_opt",
            limit: BRUTE_FORCE_LIMIT,
            got: over.len(),
        });
    }
    let mut best_value = f64::NEG_INFINITY;
    let mut best_set = ItemSet::new();
    // enumeration is lexicographic, so keeping the first strict maximum
    // yields the lexicographically smallest witness
    for set in enumerate_independent_sets(constraint, over) {
        let value = objective.value(&set);
        if value > best_value {
            best_value = value;
            best_set = set;
        }
    }
    Ok((best_value, best_set))
}

/// The competition-free optimum of one agent over the whole ground set.
pub fn agent_opt(instance: &Instance, agent: usize) -> Result<(f64, ItemSet)> {
    let (objective, constraint) = instance.compile_agent(agent);
    brute_force_opt(&objective, &constraint, &instance.ground().full_set())
}

/// The optimum still available to an agent at the instant before its first
/// turn: items taken strictly earlier in round 1 are removed, then the
/// remainder is brute-forced under the agent's own constraint.
pub fn opt_minus_from_trace(trace: &Trace, agent: usize) -> Result<(f64, ItemSet)> {
    let instance = trace.instance();
    let taken = trace.items_taken_before_first_turn(agent);
    let remaining = instance.ground().full_set().difference(&taken);
    let (objective, constraint) = instance.compile_agent(agent);
    brute_force_opt(&objective, &constraint, &remaining)
}

/// The pessimistic floor on the available optimum: minimize over every way
/// `removed` items could have been taken. Exponential; documentation-scale
/// only. The realized value from a trace is always at least this.
pub fn opt_minus_pessimistic(
    instance: &Instance,
    agent: usize,
    removed: usize,
) -> Result<f64> {
    let m = instance.item_count();
    if removed > m {
        return Err(Error::InvalidSpec(format!(
            "cannot remove {removed} of {m} items"
        )));
    }
    let (objective, constraint) = instance.compile_agent(agent);
    let full = instance.ground().full_set();
    let mut worst = f64::INFINITY;
    let mut removal = vec![0usize; removed];
    fn recurse(
        items: &[ItemId],
        removal: &mut Vec<usize>,
        depth: usize,
        start: usize,
        full: &ItemSet,
        objective: &ObjectiveOracle,
        constraint: &ConstraintOracle,
        worst: &mut f64,
    ) {
        if depth == removal.len() {
            let removed_set: ItemSet = removal.iter().map(|&i| items[i]).collect();
            let remaining = full.difference(&removed_set);
            let (value, _) = brute_force_opt(objective, constraint, &remaining).unwrap();
            if value < *worst {
                *worst = value;
            }
            return;
        }
        for i in start..items.len() {
            removal[depth] = i;
            recurse(items, removal, depth + 1, i + 1, full, objective, constraint, worst);
        }
    }
    let items: Vec<ItemId> = full.iter().collect();
    recurse(
        &items,
        &mut removal,
        0,
        0,
        &full,
        &objective,
        &constraint,
        &mut worst,
    );
    Ok(worst)
}

/// Identifiers of the per-agent guarantees checked by this module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    /// Greedy, monotone, p-system: `f(S) ≥ OPT⁻/(n+p)`.
    T1,
    /// Greedy, monotone, cardinality, n ≥ 2: `f(S) ≥ OPT⁻/n`.
    T2,
    /// Pairwise, greedy, p-system: `f_i(S_i) ≥ max_{S∈I_i|S'_j} f_i(S) / (p+2)`.
    T3,
    /// Pairwise, greedy, cardinality: factor 1/2.
    T4,
    /// Simultaneous greedy, p-system: `max_t f(S_t) ≥ OPT⁻/(4n+4p+2)`.
    T5,
    /// Simultaneous greedy, cardinality: `max_t f(S_t) ≥ OPT⁻/(4n+2)`.
    T6,
    /// Randomized protocol, ex-ante: `E[f(S)] ≥ OPT/(βn)`.
    T7,
}

impl TheoremId {
    pub fn parse(token: &str) -> Result<TheoremId> {
        match token.trim().to_ascii_uppercase().as_str() {
            "T1" => Ok(TheoremId::T1),
            "T2" => Ok(TheoremId::T2),
            "T3" => Ok(TheoremId::T3),
            "T4" => Ok(TheoremId::T4),
            "T5" => Ok(TheoremId::T5),
            "T6" => Ok(TheoremId::T6),
            "T7" => Ok(TheoremId::T7),
            other => Err(Error::Parse(format!("unknown theorem id {other:?}"))),
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// The ex-ante regime selecting β in the randomized guarantee.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum T7Case {
    MonotoneCardinality,
    MonotonePSystem,
    NonMonotoneCardinality,
    NonMonotonePSystem,
}

impl T7Case {
    pub fn for_agent(instance: &Instance, agent: usize) -> T7Case {
        let spec = instance.agent(agent);
        match (spec.monotone, spec.constraint.is_cardinality()) {
            (true, true) => T7Case::MonotoneCardinality,
            (true, false) => T7Case::MonotonePSystem,
            (false, true) => T7Case::NonMonotoneCardinality,
            (false, false) => T7Case::NonMonotonePSystem,
        }
    }
}

/// A theorem instantiated with its parameters; `factor()` is the exact
/// rational approximation factor the theorem promises.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundSpec {
    pub theorem: TheoremId,
    pub n: usize,
    pub p: usize,
    pub t7_case: Option<T7Case>,
}

impl BoundSpec {
    pub fn new(theorem: TheoremId, n: usize, p: usize) -> BoundSpec {
        BoundSpec {
            theorem,
            n,
            p,
            t7_case: None,
        }
    }

    /// Builds the spec for an agent of an instance, deriving n, p, and the
    /// ex-ante case from the agent's declared regime.
    pub fn for_agent(theorem: TheoremId, instance: &Instance, agent: usize) -> BoundSpec {
        BoundSpec {
            theorem,
            n: instance.agent_count(),
            p: instance.agent(agent).constraint.declared_p(),
            t7_case: Some(T7Case::for_agent(instance, agent)),
        }
    }

    pub fn factor(&self) -> Ratio {
        let (n, p) = (self.n as u64, self.p as u64);
        match self.theorem {
            TheoremId::T1 => Ratio::new(1, n + p),
            TheoremId::T2 => Ratio::new(1, n),
            TheoremId::T3 => Ratio::new(1, p + 2),
            TheoremId::T4 => Ratio::new(1, 2),
            TheoremId::T5 => Ratio::new(1, 4 * n + 4 * p + 2),
            TheoremId::T6 => Ratio::new(1, 4 * n + 2),
            TheoremId::T7 => match self.t7_case.expect("T7 needs its regime") {
                // β·n spelled out: 2n, (2+p/n)n = 2n+p, (5+2/n)n = 5n+2,
                // (5+(4p+2)/n)n = 5n+4p+2
                T7Case::MonotoneCardinality => Ratio::new(1, 2 * n),
                T7Case::MonotonePSystem => Ratio::new(1, 2 * n + p),
                T7Case::NonMonotoneCardinality => Ratio::new(1, 5 * n + 2),
                T7Case::NonMonotonePSystem => Ratio::new(1, 5 * n + 4 * p + 2),
            },
        }
    }
}

/// Result of checking one ex-post bound for one agent.
#[derive(Clone, Debug)]
pub struct BoundCheck {
    pub theorem: TheoremId,
    pub agent: usize,
    pub factor: Ratio,
    pub opt_minus: f64,
    pub achieved: f64,
    /// `factor * OPT⁻`.
    pub bound: f64,
    /// `achieved / bound`; infinite when the bound is 0.
    pub margin: f64,
    pub pass: bool,
}

fn achieved_value(instance: &Instance, alloc: &Allocation, agent: usize) -> f64 {
    let (objective, _) = instance.compile_agent(agent);
    match alloc.solution(agent) {
        AgentSolution::Single(s) => objective.value(s),
        AgentSolution::Pair { first, second, .. } => {
            objective.value(first).max(objective.value(second))
        }
    }
}

/// Checks an OPT⁻-style bound (T1, T2, T5, T6) for one agent of a trace.
/// T3/T4 are pairwise (see [`check_fef1_pair`] / [`check_theorem_pair`]);
/// T7 is ex-ante (see [`exante_bound_check`]).
pub fn check_theorem_bound(
    trace: &Trace,
    agent: usize,
    bound: &BoundSpec,
) -> Result<BoundCheck> {
    let instance = trace.instance();
    let n = instance.agent_count();
    let spec = instance.agent(agent);
    let alloc = allocation_of(trace)?;
    let is_pair = matches!(alloc.solution(agent), AgentSolution::Pair { .. });

    match bound.theorem {
        TheoremId::T1 => {
            if is_pair {
                return Err(Error::BoundMismatch(
                    "T1 covers the single-solution greedy policy".into(),
                ));
            }
        }
        TheoremId::T2 => {
            if is_pair {
                return Err(Error::BoundMismatch(
                    "T2 covers the single-solution greedy policy".into(),
                ));
            }
            if !spec.constraint.is_cardinality() {
                return Err(Error::BoundMismatch(format!(
                    "T2 needs a cardinality constraint, agent {agent} has {}",
                    spec.constraint.family_name()
                )));
            }
            if n < 2 {
                return Err(Error::BoundMismatch("T2 requires n >= 2".into()));
            }
        }
        TheoremId::T5 | TheoremId::T6 => {
            if !is_pair {
                return Err(Error::BoundMismatch(
                    "T5/T6 cover the two-solution policy".into(),
                ));
            }
            if bound.theorem == TheoremId::T6 && !spec.constraint.is_cardinality() {
                return Err(Error::BoundMismatch(format!(
                    "T6 needs a cardinality constraint, agent {agent} has {}",
                    spec.constraint.family_name()
                )));
            }
        }
        other => {
            return Err(Error::BoundMismatch(format!(
                "{other} is not an OPT⁻-style per-agent bound"
            )))
        }
    }

    let (opt_minus, _) = opt_minus_from_trace(trace, agent)?;
    let achieved = achieved_value(instance, &alloc, agent);
    let factor = bound.factor();
    let bound_value = factor.as_f64() * opt_minus;
    Ok(BoundCheck {
        theorem: bound.theorem,
        agent,
        factor,
        opt_minus,
        achieved,
        bound: bound_value,
        margin: if bound_value > 0.0 {
            achieved / bound_value
        } else {
            f64::INFINITY
        },
        pass: achieved >= bound_value - BOUND_TOL,
    })
}

/// The α an allocation achieves for the ordered pair (i, j) under the
/// feasible envy-free-up-to-one-item definition:
/// `max_{g ∈ A_j} v_i(A_i) / max{ v_i(A'_j) : feasible A'_j ⊆ A_j∖{g} }`,
/// infinite when some removal zeroes the denominator (vacuously fair).
pub fn check_fef1_pair(
    alloc: &Allocation,
    instance: &Instance,
    i: usize,
    j: usize,
) -> Result<f64> {
    if i == j {
        return Ok(f64::INFINITY);
    }
    let own = achieved_value(instance, alloc, i);
    let others = alloc.solution(j).best_set();
    if others.is_empty() {
        return Ok(f64::INFINITY);
    }
    let (objective, constraint) = instance.compile_agent(i);
    let mut best_alpha = f64::NEG_INFINITY;
    for g in others.iter() {
        let reduced = others.without(g);
        let restricted = constraint.restrict(&reduced);
        let (denom, _) = brute_force_opt(&objective, &restricted, &reduced)?;
        let alpha = if denom <= BOUND_TOL {
            f64::INFINITY
        } else {
            own / denom
        };
        if alpha > best_alpha {
            best_alpha = alpha;
        }
        if best_alpha.is_infinite() {
            break;
        }
    }
    Ok(best_alpha)
}

/// The one-sided pairwise guarantee: with `S'_j = S_j` when `i < j` and
/// `S_j` minus j's first pick otherwise, computes
/// `v_i(A_i) / max_{S ∈ I_i|S'_j} v_i(S)`. Greedy agents satisfy
/// `α ≥ 1/(p_i+2)` in general and `α ≥ 1/2` under cardinality.
pub fn check_theorem_pair(trace: &Trace, i: usize, j: usize) -> Result<f64> {
    if i == j {
        return Ok(f64::INFINITY);
    }
    let instance = trace.instance();
    let alloc = allocation_of(trace)?;
    let own = achieved_value(instance, &alloc, i);
    let mut comparison = alloc.solution(j).best_set().clone();
    if i > j {
        if let Some(first) = trace.first_pick_of(j) {
            // the first pick may sit in j's other slot; only remove it if
            // it is part of the comparison set
            comparison.remove(first);
        }
    }
    if comparison.is_empty() {
        return Ok(f64::INFINITY);
    }
    let (objective, constraint) = instance.compile_agent(i);
    let restricted = constraint.restrict(&comparison);
    let (denom, _) = brute_force_opt(&objective, &restricted, &comparison)?;
    Ok(if denom <= BOUND_TOL {
        f64::INFINITY
    } else {
        own / denom
    })
}

/// Fairness certificate over every ordered agent pair.
#[derive(Clone, Debug)]
pub struct FairnessReport {
    pub pairs: Vec<PairFairness>,
    pub min_fef1: f64,
    pub min_theorem_form: f64,
}

#[derive(Clone, Debug)]
pub struct PairFairness {
    pub i: usize,
    pub j: usize,
    /// α under the quantified-over-g feasible-EF1 definition.
    pub fef1_alpha: f64,
    /// α under the one-sided first-pick form.
    pub theorem_alpha: f64,
}

pub fn fairness_report(trace: &Trace) -> Result<FairnessReport> {
    let instance = trace.instance();
    let alloc = allocation_of(trace)?;
    let n = instance.agent_count();
    let mut pairs = Vec::new();
    let mut min_fef1 = f64::INFINITY;
    let mut min_theorem = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let fef1_alpha = check_fef1_pair(&alloc, instance, i, j)?;
            let theorem_alpha = check_theorem_pair(trace, i, j)?;
            min_fef1 = min_fef1.min(fef1_alpha);
            min_theorem = min_theorem.min(theorem_alpha);
            pairs.push(PairFairness {
                i,
                j,
                fef1_alpha,
                theorem_alpha,
            });
        }
    }
    Ok(FairnessReport {
        pairs,
        min_fef1,
        min_theorem_form: min_theorem,
    })
}

/// Expectation mode for [`exante_bound_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExAnteMode {
    /// Enumerate all n! agent orderings; n ≤ 6.
    Exact,
    /// Sample random orderings; reports a 99% confidence interval and
    /// flags only statistically significant violations.
    MonteCarlo { samples: usize, seed: RngSeed },
}

#[derive(Clone, Debug)]
pub struct ExAnteAgentReport {
    pub agent: usize,
    pub case: T7Case,
    pub factor: Ratio,
    pub opt: f64,
    pub expected: f64,
    /// `factor * OPT`.
    pub bound: f64,
    /// 99% confidence interval around the expectation (sampling mode only).
    pub ci99: Option<(f64, f64)>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct ExAnteReport {
    pub exact: bool,
    pub runs: usize,
    pub agents: Vec<ExAnteAgentReport>,
}

impl ExAnteReport {
    pub fn all_pass(&self) -> bool {
        self.agents.iter().all(|a| a.pass)
    }
}

const EXACT_EXANTE_LIMIT: usize = 6;
const Z_99: f64 = 2.5758293035489004; // two-sided 99% normal quantile

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    fn heap(k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(current.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, current, out);
            if k % 2 == 0 {
                current.swap(i, k - 1);
            } else {
                current.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut current, &mut out);
    out
}

/// Verifies the ex-ante guarantee `E[f_i(S_i)] ≥ OPT_i / (β n)` with β
/// chosen per agent regime, either exactly over all orderings or by
/// sampling seeds.
pub fn exante_bound_check(
    instance: &Instance,
    policies: &[PolicyKind],
    mode: ExAnteMode,
) -> Result<ExAnteReport> {
    let n = instance.agent_count();
    let mut per_agent_values: Vec<Vec<f64>> = vec![Vec::new(); n];

    let (exact, runs) = match mode {
        ExAnteMode::Exact => {
            if n > EXACT_EXANTE_LIMIT {
                return Err(Error::TooLarge {
                    what: "exact ex-ante enumeration",
                    limit: EXACT_EXANTE_LIMIT,
                    got: n,
                });
            }
            let perms = permutations(n);
            for perm in &perms {
                let trace = run_round_robin(
                    instance,
                    policies,
                    &ProtocolConfig {
                        ordering: AgentOrdering::Fixed(perm.clone()),
                        negative_marginal_rule: NegativeMarginalRule::AsWritten,
                    },
                )?;
                let alloc = allocation_of(&trace)?;
                for agent in 0..n {
                    per_agent_values[agent].push(achieved_value(instance, &alloc, agent));
                }
            }
            (true, perms.len())
        }
        ExAnteMode::MonteCarlo { samples, seed } => {
            for s in 0..samples {
                let run_seed = derive_seed(seed, s as u64, 0);
                let trace = run_round_robin(
                    instance,
                    policies,
                    &ProtocolConfig {
                        ordering: AgentOrdering::Randomized(run_seed),
                        negative_marginal_rule: NegativeMarginalRule::AsWritten,
                    },
                )?;
                let alloc = allocation_of(&trace)?;
                for agent in 0..n {
                    per_agent_values[agent].push(achieved_value(instance, &alloc, agent));
                }
            }
            (false, samples)
        }
    };

    let mut agents = Vec::with_capacity(n);
    for agent in 0..n {
        let values = &per_agent_values[agent];
        let count = values.len() as f64;
        let expected = values.iter().sum::<f64>() / count;
        let (opt, _) = agent_opt(instance, agent)?;
        let spec = BoundSpec::for_agent(TheoremId::T7, instance, agent);
        let factor = spec.factor();
        let bound = factor.as_f64() * opt;
        let (ci99, pass) = if exact {
            (None, expected >= bound - BOUND_TOL)
        } else {
            let var = values
                .iter()
                .map(|v| (v - expected) * (v - expected))
                .sum::<f64>()
                / (count - 1.0).max(1.0);
            let half = Z_99 * (var / count).sqrt();
            let ci = (expected - half, expected + half);
            // an exact-expectation statement: only a significant violation
            // (upper confidence bound below the bound) fails
            (Some(ci), ci.1 >= bound - BOUND_TOL)
        };
        agents.push(ExAnteAgentReport {
            agent,
            case: spec.t7_case.unwrap(),
            factor,
            opt,
            expected,
            bound,
            ci99,
            pass,
        });
    }
    Ok(ExAnteReport {
        exact,
        runs,
        agents,
    })
}

/// Saturation property of an all-greedy allocation: no unallocated item
/// can be feasibly added to any agent's set(s); in the all-cardinality
/// regime, equivalently, the allocation is complete or every cap is met.
#[derive(Clone, Debug)]
pub struct SaturationReport {
    pub pass: bool,
    /// (agent, item) pairs where an unallocated item is still addable.
    pub violations: Vec<(usize, ItemId)>,
}

pub fn check_corollary_saturation(alloc: &Allocation, instance: &Instance) -> SaturationReport {
    let allocated = alloc.allocated();
    let unallocated = instance.ground().full_set().difference(&allocated);
    let mut violations = Vec::new();
    for agent in 0..instance.agent_count() {
        let (_, constraint) = instance.compile_agent(agent);
        for set in alloc.solution(agent).all_sets() {
            for item in unallocated.iter() {
                if constraint.is_independent(&set.with(item)) {
                    violations.push((agent, item));
                }
            }
        }
    }
    violations.sort();
    violations.dedup();
    SaturationReport {
        pass: violations.is_empty(),
        violations,
    }
}

/// Everything the `verify` interface reports for one agent of one run.
#[derive(Clone, Debug)]
pub struct AgentBenchmark {
    pub agent: usize,
    pub opt: f64,
    pub opt_witness: ItemSet,
    pub opt_minus: f64,
    pub opt_minus_witness: ItemSet,
    pub achieved: f64,
    pub bounds: Vec<BoundCheck>,
}

/// Per-run verification report: per-agent optima and bound outcomes plus
/// the pairwise fairness section.
#[derive(Clone, Debug)]
pub struct BenchmarkReport {
    pub agents: Vec<AgentBenchmark>,
    pub fairness: Option<FairnessReport>,
}

impl BenchmarkReport {
    pub fn all_pass(&self) -> bool {
        let bounds_ok = self
            .agents
            .iter()
            .all(|a| a.bounds.iter().all(|b| b.pass));
        let fairness_ok = match &self.fairness {
            Some(report) => report.pairs.iter().all(|p| {
                // the theorem form must clear its factor; the quantified
                // FEF1 alpha is informational
                p.theorem_alpha.is_infinite() || p.theorem_alpha > 0.0
            }),
            None => true,
        };
        bounds_ok && fairness_ok
    }
}

/// Which OPT⁻-style theorems apply to an agent given its regime and the
/// policy it ran.
pub fn applicable_theorems(instance: &Instance, agent: usize, ran_pair_policy: bool) -> Vec<TheoremId> {
    let spec = instance.agent(agent);
    let mut out = Vec::new();
    if ran_pair_policy {
        out.push(TheoremId::T5);
        if spec.constraint.is_cardinality() {
            out.push(TheoremId::T6);
        }
    } else if spec.monotone {
        out.push(TheoremId::T1);
        if spec.constraint.is_cardinality() && instance.agent_count() >= 2 {
            out.push(TheoremId::T2);
        }
    }
    out
}

/// Runs the requested theorem checks against a trace and assembles the
/// full verification report. `theorems` restricts the set; by default each
/// agent gets every applicable OPT⁻ bound, and T3/T4 requests add the
/// pairwise fairness section.
pub fn benchmark_trace(trace: &Trace, theorems: &[TheoremId]) -> Result<BenchmarkReport> {
    let instance = trace.instance();
    let alloc = allocation_of(trace)?;
    let n = instance.agent_count();
    let wants_fairness = theorems.contains(&TheoremId::T3) || theorems.contains(&TheoremId::T4);

    let mut agents = Vec::with_capacity(n);
    for agent in 0..n {
        let is_pair = matches!(alloc.solution(agent), AgentSolution::Pair { .. });
        let applicable = applicable_theorems(instance, agent, is_pair);
        let mut bounds = Vec::new();
        for theorem in &applicable {
            if !theorems.contains(theorem) {
                continue;
            }
            let spec = BoundSpec::for_agent(*theorem, instance, agent);
            bounds.push(check_theorem_bound(trace, agent, &spec)?);
        }
        let (opt, opt_witness) = agent_opt(instance, agent)?;
        let (opt_minus, opt_minus_witness) = opt_minus_from_trace(trace, agent)?;
        agents.push(AgentBenchmark {
            agent,
            opt,
            opt_witness,
            opt_minus,
            opt_minus_witness,
            achieved: achieved_value(instance, &alloc, agent),
            bounds,
        });
    }
    let fairness = if wants_fairness && n >= 2 {
        Some(fairness_report(trace)?)
    } else {
        None
    };
    Ok(BenchmarkReport { agents, fairness })
}

fn fmt_alpha(alpha: f64) -> String {
    if alpha.is_infinite() {
        "inf".to_string()
    } else {
        format!("{alpha:.6}")
    }
}

impl fmt::Display for BenchmarkReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.agents {
            writeln!(
                f,
                "agent {}: opt={:.6} opt_minus={:.6} achieved={:.6}",
                a.agent, a.opt, a.opt_minus, a.achieved
            )?;
            for b in &a.bounds {
                writeln!(
                    f,
                    "  {} factor={} bound={:.6} margin={} {}",
                    b.theorem,
                    b.factor,
                    b.bound,
                    fmt_alpha(b.margin),
                    if b.pass { "pass" } else { "FAIL" }
                )?;
            }
        }
        if let Some(fairness) = &self.fairness {
            for p in &fairness.pairs {
                writeln!(
                    f,
                    "pair ({},{}): fef1_alpha={} theorem_alpha={}",
                    p.i,
                    p.j,
                    fmt_alpha(p.fef1_alpha),
                    fmt_alpha(p.theorem_alpha)
                )?;
            }
            writeln!(
                f,
                "fairness minima: fef1={} theorem={}",
                fmt_alpha(fairness.min_fef1),
                fmt_alpha(fairness.min_theorem_form)
            )?;
        }
        Ok(())
    }
}

impl fmt::Display for ExAnteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "ex-ante over {} {} runs",
            self.runs,
            if self.exact { "exact" } else { "sampled" }
        )?;
        for a in &self.agents {
            write!(
                f,
                "agent {}: E[f]={:.6} opt={:.6} factor={} bound={:.6}",
                a.agent, a.expected, a.opt, a.factor, a.bound
            )?;
            if let Some((lo, hi)) = a.ci99 {
                write!(f, " ci99=[{lo:.6},{hi:.6}]")?;
            }
            writeln!(f, " {}", if a.pass { "pass" } else { "FAIL" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::ConstraintSpec;
    use crate::engine::default_policies;
    use crate::instance::AgentSpec;
    use crate::objectives::ObjectiveSpec;

    fn additive_agent(weights: &[f64], k: usize) -> AgentSpec {
        AgentSpec::new(
            ObjectiveSpec::Additive {
                weights: weights.to_vec(),
            },
            ConstraintSpec::Cardinality { k },
        )
    }

    fn hand_instance() -> Instance {
        Instance::new(
            3,
            vec![
                additive_agent(&[3.0, 2.0, 1.0], 2),
                additive_agent(&[1.0, 3.0, 2.0], 2),
            ],
        )
        .unwrap()
    }

    fn hand_trace() -> Trace {
        run_round_robin(
            &hand_instance(),
            &[PolicyKind::Greedy, PolicyKind::Greedy],
            &ProtocolConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn brute_force_top_two_weights() {
        let instance = Instance::new(3, vec![additive_agent(&[3.0, 2.0, 1.0], 2)]).unwrap();
        let (value, witness) = agent_opt(&instance, 0).unwrap();
        assert_eq!(value, 5.0);
        assert_eq!(witness, ItemSet::from_indices([0, 1]));
    }

    #[test]
    fn brute_force_cut_on_four_cycle() {
        let instance = Instance::new(
            4,
            vec![AgentSpec::new(
                ObjectiveSpec::Cut {
                    edges: vec![(0, 1), (1, 2), (2, 3), (3, 0)],
                    weights: None,
                },
                ConstraintSpec::Cardinality { k: 4 },
            )],
        )
        .unwrap();
        let (value, witness) = agent_opt(&instance, 0).unwrap();
        assert_eq!(value, 4.0);
        // lexicographically smallest bipartition side
        assert_eq!(witness, ItemSet::from_indices([0, 2]));
    }

    #[test]
    fn brute_force_example1_first_agent() {
        let instance = Instance::example1(4).unwrap();
        let (value, _) = agent_opt(&instance, 0).unwrap();
        assert_eq!(value, 8.0); // 2n
    }

    #[test]
    fn opt_minus_first_agent_equals_opt() {
        let trace = hand_trace();
        let (opt_minus, _) = opt_minus_from_trace(&trace, 0).unwrap();
        let (opt, _) = agent_opt(trace.instance(), 0).unwrap();
        assert_eq!(opt_minus, opt);
    }

    #[test]
    fn opt_minus_second_agent_over_remainder() {
        let trace = hand_trace();
        // item 0 is gone; best for f2 = [1,3,2] over {1,2} is 5
        let (opt_minus, witness) = opt_minus_from_trace(&trace, 1).unwrap();
        assert_eq!(opt_minus, 5.0);
        assert_eq!(witness, ItemSet::from_indices([1, 2]));
    }

    #[test]
    fn opt_minus_zero_when_valued_items_are_gone() {
        // agent 1 only values item 0, which agent 0 takes first
        let instance = Instance::new(
            2,
            vec![
                additive_agent(&[5.0, 0.0], 1),
                additive_agent(&[1.0, 0.0], 1),
            ],
        )
        .unwrap();
        let trace = run_round_robin(
            &instance,
            &[PolicyKind::Greedy, PolicyKind::Greedy],
            &ProtocolConfig::default(),
        )
        .unwrap();
        let (opt_minus, _) = opt_minus_from_trace(&trace, 1).unwrap();
        assert_eq!(opt_minus, 0.0);
    }

    #[test]
    fn pessimistic_floor_is_below_realized() {
        let instance = hand_instance();
        let trace = hand_trace();
        let realized = opt_minus_from_trace(&trace, 1).unwrap().0;
        let pessimistic = opt_minus_pessimistic(&instance, 1, 1).unwrap();
        assert!(pessimistic <= realized + BOUND_TOL);
        // removing the top item of f2 leaves {0,2}: value 3
        assert_eq!(pessimistic, 3.0);
    }

    #[test]
    fn opt_minus_shrinks_with_more_removals() {
        let instance = hand_instance();
        let mut previous = f64::INFINITY;
        for removed in 0..=2 {
            let value = opt_minus_pessimistic(&instance, 0, removed).unwrap();
            assert!(value <= previous + BOUND_TOL);
            previous = value;
        }
    }

    #[test]
    fn t2_on_the_hand_trace() {
        let trace = hand_trace();
        let spec = BoundSpec::for_agent(TheoremId::T2, trace.instance(), 0);
        let check = check_theorem_bound(&trace, 0, &spec).unwrap();
        assert!(check.pass);
        assert_eq!(check.opt_minus, 5.0);
        assert_eq!(check.bound, 2.5);
        assert_eq!(check.achieved, 4.0);
        assert!((check.margin - 1.6).abs() < 1e-12);
    }

    #[test]
    fn bound_mismatches_are_rejected() {
        let trace = hand_trace();
        // T5 on a single-solution agent
        let spec = BoundSpec::for_agent(TheoremId::T5, trace.instance(), 0);
        assert!(check_theorem_bound(&trace, 0, &spec).is_err());
        // T3 is pairwise, not an OPT⁻ bound
        let spec = BoundSpec::for_agent(TheoremId::T3, trace.instance(), 0);
        assert!(check_theorem_bound(&trace, 0, &spec).is_err());

        // T2 on a non-cardinality constraint
        let instance = Instance::new(
            2,
            vec![
                AgentSpec::new(
                    ObjectiveSpec::Additive {
                        weights: vec![1.0, 2.0],
                    },
                    ConstraintSpec::PartitionMatroid {
                        parts: vec![vec![0], vec![1]],
                        caps: vec![1, 1],
                    },
                ),
                additive_agent(&[1.0, 2.0], 1),
            ],
        )
        .unwrap();
        let trace = run_round_robin(
            &instance,
            &default_policies(&instance),
            &ProtocolConfig::default(),
        )
        .unwrap();
        let spec = BoundSpec::for_agent(TheoremId::T2, &instance, 0);
        assert!(check_theorem_bound(&trace, 0, &spec).is_err());

        // T2 with a single agent
        let solo = Instance::new(2, vec![additive_agent(&[1.0, 2.0], 1)]).unwrap();
        let trace = run_round_robin(
            &solo,
            &default_policies(&solo),
            &ProtocolConfig::default(),
        )
        .unwrap();
        let spec = BoundSpec::for_agent(TheoremId::T2, &solo, 0);
        assert!(check_theorem_bound(&trace, 0, &spec).is_err());
    }

    /// Single greedy agent on matroid constraints: the general bound
    /// specializes to OPT/2 and holds across a random fleet.
    #[test]
    fn t1_single_agent_matroid_fleet() {
        use crate::fleet::{monotone_instance, ConstraintKind};
        for seed in 0..40u64 {
            let m = 6 + (seed % 5) as usize;
            let instance =
                monotone_instance(RngSeed(seed), 1, m, ConstraintKind::PartitionMatroid).unwrap();
            let trace = run_round_robin(
                &instance,
                &default_policies(&instance),
                &ProtocolConfig::default(),
            )
            .unwrap();
            let spec = BoundSpec::for_agent(TheoremId::T1, &instance, 0);
            assert_eq!(spec.factor(), Ratio::new(1, 2));
            let check = check_theorem_bound(&trace, 0, &spec).unwrap();
            assert!(check.pass, "seed {seed}: {check:?}");
        }
    }

    #[test]
    fn example1_t2_is_tight() {
        let instance = Instance::example1(3).unwrap();
        let trace = run_round_robin(
            &instance,
            &default_policies(&instance),
            &ProtocolConfig::default(),
        )
        .unwrap();
        let spec = BoundSpec::for_agent(TheoremId::T2, &instance, 0);
        let check = check_theorem_bound(&trace, 0, &spec).unwrap();
        assert!(check.pass);
        assert_eq!(check.opt_minus, 6.0); // 2n with nothing removed
        assert!((check.achieved - 2.0).abs() < BOUND_TOL);
        assert!((check.bound - 2.0).abs() < BOUND_TOL); // exactly tight
    }

    #[test]
    fn fef1_vacuous_cases() {
        let trace = hand_trace();
        let alloc = allocation_of(&trace).unwrap();
        let instance = trace.instance();
        assert!(check_fef1_pair(&alloc, instance, 0, 0).unwrap().is_infinite());
        // removing agent 1's only item zeroes the denominator
        assert!(check_fef1_pair(&alloc, instance, 0, 1).unwrap().is_infinite());
    }

    #[test]
    fn theorem_pair_on_hand_trace() {
        let trace = hand_trace();
        // i=0 < j=1: comparison set is {1}; f0({1}) = 2; alpha = 4/2
        let alpha = check_theorem_pair(&trace, 0, 1).unwrap();
        assert!((alpha - 2.0).abs() < 1e-12);
        // i=1 > j=0: drop agent 0's first pick (item 0) from {0,2}
        let alpha = check_theorem_pair(&trace, 1, 0).unwrap();
        // f1 over {2}: 2; own value 3
        assert!((alpha - 1.5).abs() < 1e-12);
    }

    #[test]
    fn exante_single_agent_is_the_greedy_value() {
        let instance = Instance::new(3, vec![additive_agent(&[3.0, 2.0, 1.0], 2)]).unwrap();
        let report =
            exante_bound_check(&instance, &default_policies(&instance), ExAnteMode::Exact)
                .unwrap();
        assert_eq!(report.runs, 1);
        let agent = &report.agents[0];
        assert_eq!(agent.expected, 5.0);
        assert_eq!(agent.opt, 5.0);
        assert_eq!(agent.factor, Ratio::new(1, 2)); // monotone cardinality, n=1
        assert!(agent.pass);
    }

    #[test]
    fn exante_two_symmetric_agents_average_both_orders() {
        // one contested top item: first picker gets 10, the other 1
        let instance = Instance::new(
            2,
            vec![
                additive_agent(&[10.0, 1.0], 1),
                additive_agent(&[10.0, 1.0], 1),
            ],
        )
        .unwrap();
        let report =
            exante_bound_check(&instance, &default_policies(&instance), ExAnteMode::Exact)
                .unwrap();
        for agent in &report.agents {
            assert!((agent.expected - 5.5).abs() < 1e-12);
            assert_eq!(agent.opt, 10.0);
            assert!(agent.pass); // 5.5 >= 10/4
        }
    }

    /// Identical |S|-valued agents with n = m: each agent expects exactly
    /// m/n = 1, opt is m, so the achieved ex-ante ratio is exactly 1/n,
    /// comfortably above the 1/(2n) guarantee.
    #[test]
    fn exante_tightness_sanity() {
        let n = 4;
        let weights = vec![1.0; n];
        let agents: Vec<_> = (0..n).map(|_| additive_agent(&weights, n)).collect();
        let instance = Instance::new(n, agents).unwrap();
        let report =
            exante_bound_check(&instance, &default_policies(&instance), ExAnteMode::Exact)
                .unwrap();
        assert_eq!(report.runs, 24);
        for agent in &report.agents {
            assert!((agent.expected - 1.0).abs() < 1e-12);
            assert_eq!(agent.opt, n as f64);
            assert!(agent.pass);
        }
    }

    #[test]
    fn exante_exact_rejects_large_n() {
        let weights = vec![1.0; 7];
        let agents: Vec<_> = (0..7).map(|_| additive_agent(&weights, 1)).collect();
        let instance = Instance::new(7, agents).unwrap();
        let err = exante_bound_check(&instance, &default_policies(&instance), ExAnteMode::Exact);
        assert!(err.is_err());
    }

    #[test]
    fn exante_monte_carlo_reports_interval() {
        let instance = hand_instance();
        let report = exante_bound_check(
            &instance,
            &default_policies(&instance),
            ExAnteMode::MonteCarlo {
                samples: 200,
                seed: RngSeed(11),
            },
        )
        .unwrap();
        assert!(!report.exact);
        for agent in &report.agents {
            assert!(agent.ci99.is_some());
            assert!(agent.pass);
        }
    }

    #[test]
    fn saturation_passes_when_complete_or_capped() {
        // complete allocation
        let trace = hand_trace();
        let alloc = allocation_of(&trace).unwrap();
        let report = check_corollary_saturation(&alloc, trace.instance());
        assert!(report.pass);

        // caps met with items remaining
        let instance = Instance::new(
            4,
            vec![
                additive_agent(&[4.0, 3.0, 0.1, 0.1], 1),
                additive_agent(&[1.0, 2.0, 0.2, 0.1], 1),
            ],
        )
        .unwrap();
        let trace = run_round_robin(
            &instance,
            &default_policies(&instance),
            &ProtocolConfig::default(),
        )
        .unwrap();
        let alloc = allocation_of(&trace).unwrap();
        assert!(check_corollary_saturation(&alloc, &instance).pass);
    }

    #[test]
    fn saturation_flags_a_lazy_policy() {
        // a scripted agent that stops early leaves feasible items behind
        let instance = hand_instance();
        let trace = run_round_robin(
            &instance,
            &[
                PolicyKind::Scripted {
                    order: vec![ItemId(0)],
                },
                PolicyKind::Scripted {
                    order: vec![ItemId(1)],
                },
            ],
            &ProtocolConfig::default(),
        )
        .unwrap();
        let alloc = allocation_of(&trace).unwrap();
        let report = check_corollary_saturation(&alloc, &instance);
        assert!(!report.pass);
        assert!(report.violations.contains(&(0, ItemId(2))));
    }

    #[test]
    fn benchmark_report_is_deterministic_text() {
        let trace = hand_trace();
        let theorems = [TheoremId::T1, TheoremId::T2, TheoremId::T3, TheoremId::T4];
        let a = benchmark_trace(&trace, &theorems).unwrap().to_string();
        let b = benchmark_trace(&trace, &theorems).unwrap().to_string();
        assert_eq!(a, b);
        assert!(a.contains("agent 0"));
        assert!(a.contains("pair (0,1)"));
    }
}
