//! `submod` - run round-robin protocols over multi-agent submodular
//! instances, verify the per-agent guarantees, and reproduce the
//! influence-maximization experiments.
//!
//! Exit codes: 0 on success / all checks passing, 1 on a check failure or
//! runtime error, 2 on usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use submod_core::analysis::{
    agent_opt, benchmark_trace, exante_bound_check, ExAnteMode, TheoremId,
};
use submod_core::engine::{
    default_policies, run_round_robin, AgentOrdering, NegativeMarginalRule, ProtocolConfig,
};
use submod_core::experiments::{rows_to_csv, run_experiment, ExperimentSpec};
use submod_core::fleet::randomize_like;
use submod_core::objectives::EXAMPLE1_DEFAULT_EPS;
use submod_core::trace::allocation_of;
use submod_core::{AgentSolution, Instance, ItemId, PolicyKind, RngSeed};

#[derive(Parser)]
#[command(
    name = "submod",
    about = "Round-robin protocols for multi-agent constrained submodular maximization",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one protocol instance and print the resulting allocation.
    Run(RunArgs),
    /// Check per-agent approximation and envy guarantees on an instance
    /// (or a randomized fleet derived from it).
    Verify(VerifyArgs),
    /// Check the randomized protocol's expectation guarantee.
    Exante(ExanteArgs),
    /// Run a competing influence-maximization experiment and write CSV.
    Experiment(ExperimentArgs),
    /// Reproduce the adversarial instance's golden values.
    Example1(Example1Args),
}

#[derive(Args)]
struct RunArgs {
    /// Instance file (JSON).
    instance: PathBuf,
    /// Per-agent policies: greedy, simultaneous_greedy (sg),
    /// scripted:<id,id,...>, example1_strategic. Defaults to greedy for
    /// monotone agents and simultaneous greedy otherwise.
    #[arg(long, num_args = 1.., value_name = "POLICY")]
    policies: Vec<String>,
    /// Randomize the agent ordering with this seed (fixed identity order
    /// when omitted).
    #[arg(long)]
    seed: Option<u64>,
    /// Write the trace (one `round,turn,agent,item|DUMMY[,slot]` line per
    /// event) to this path.
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
    /// Return a dummy instead of a non-positive best marginal.
    #[arg(long)]
    skip_nonpositive: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file (JSON).
    instance: PathBuf,
    /// Comma-separated theorem ids among T1,T2,T3,T4,T5,T6 (default: all
    /// applicable).
    #[arg(long, value_name = "LIST")]
    theorems: Option<String>,
    /// Verify a fleet of N instances with re-randomized data (same shape
    /// as the given instance).
    #[arg(long, value_name = "N")]
    fleet: Option<usize>,
    /// Base seed for the fleet.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExanteArgs {
    /// Instance file (JSON).
    instance: PathBuf,
    /// Enumerate all n! orderings (n <= 6); the default when --samples is
    /// not given.
    #[arg(long)]
    exact: bool,
    /// Sample this many random orderings instead; reports a 99%
    /// confidence interval.
    #[arg(long, value_name = "N", conflicts_with = "exact")]
    samples: Option<usize>,
    /// Seed for sampling mode.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment specification file (JSON).
    spec: PathBuf,
    /// Output CSV path.
    #[arg(long, value_name = "PATH")]
    csv: PathBuf,
}

#[derive(Args)]
struct Example1Args {
    /// Number of agents (>= 2); the instance has n^2+1 items.
    #[arg(long)]
    n: usize,
    /// Let the first agent play the strategic opening instead of greedy.
    #[arg(long)]
    strategic: bool,
}

fn parse_policy(token: &str) -> Result<PolicyKind> {
    let token = token.trim();
    if let Some(rest) = token.strip_prefix("scripted:") {
        let order = rest
            .split(',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map(ItemId)
                    .map_err(|_| anyhow!("bad item id {t:?} in scripted policy"))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(PolicyKind::Scripted { order });
    }
    match token {
        "greedy" => Ok(PolicyKind::Greedy),
        "simultaneous_greedy" | "sg" => Ok(PolicyKind::SimultaneousGreedy),
        "example1_strategic" | "strategic" => Ok(PolicyKind::Example1Strategic),
        other => bail!("unknown policy {other:?}"),
    }
}

fn load_instance(path: &PathBuf) -> Result<Instance> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading instance file {}", path.display()))?;
    Instance::from_json(&text).map_err(|e| anyhow!("{e}"))
}

fn resolve_policies(instance: &Instance, tokens: &[String]) -> Result<Vec<PolicyKind>> {
    if tokens.is_empty() {
        return Ok(default_policies(instance));
    }
    if tokens.len() != instance.agent_count() {
        bail!(
            "{} policies given for {} agents",
            tokens.len(),
            instance.agent_count()
        );
    }
    tokens.iter().map(|t| parse_policy(t)).collect()
}

fn cmd_run(args: &RunArgs) -> Result<i32> {
    let instance = load_instance(&args.instance)?;
    let policies = resolve_policies(&instance, &args.policies)?;
    let config = ProtocolConfig {
        ordering: match args.seed {
            Some(seed) => AgentOrdering::Randomized(RngSeed(seed)),
            None => AgentOrdering::Identity,
        },
        negative_marginal_rule: if args.skip_nonpositive {
            NegativeMarginalRule::SkipNonpositive
        } else {
            NegativeMarginalRule::AsWritten
        },
    };
    let trace = run_round_robin(&instance, &policies, &config)?;
    let alloc = allocation_of(&trace)?;

    println!("permutation: {:?}", trace.permutation());
    for agent in 0..instance.agent_count() {
        let (objective, _) = instance.compile_agent(agent);
        match alloc.solution(agent) {
            AgentSolution::Single(set) => {
                println!(
                    "agent {agent}: value={} set={:?}",
                    objective.value(set),
                    set
                );
            }
            AgentSolution::Pair { first, second, best } => {
                println!(
                    "agent {agent}: value={} best=slot{} set1={:?} set2={:?}",
                    objective.value(match best {
                        submod_core::Slot::First => first,
                        submod_core::Slot::Second => second,
                    }),
                    best.number(),
                    first,
                    second
                );
            }
        }
    }
    if let Some(path) = &args.trace {
        fs::write(path, trace.export())
            .with_context(|| format!("writing trace to {}", path.display()))?;
        println!("trace written to {}", path.display());
    }
    Ok(0)
}

fn parse_theorems(arg: &Option<String>) -> Result<Vec<TheoremId>> {
    match arg {
        None => Ok(vec![
            TheoremId::T1,
            TheoremId::T2,
            TheoremId::T3,
            TheoremId::T4,
            TheoremId::T5,
            TheoremId::T6,
        ]),
        Some(list) => {
            let theorems = list
                .split(',')
                .filter(|t| !t.is_empty())
                .map(|t| TheoremId::parse(t).map_err(|e| anyhow!("{e}")))
                .collect::<Result<Vec<_>>>()?;
            if theorems.contains(&TheoremId::T7) {
                bail!("T7 is the ex-ante guarantee; use the `exante` subcommand");
            }
            Ok(theorems)
        }
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let base = load_instance(&args.instance)?;
    let theorems = parse_theorems(&args.theorems)?;
    let count = args.fleet.unwrap_or(1);
    let mut failures = 0usize;
    for index in 0..count {
        let instance = if args.fleet.is_some() {
            randomize_like(&base, RngSeed(args.seed.wrapping_add(index as u64)))?
        } else {
            base.clone()
        };
        let policies = default_policies(&instance);
        let trace = run_round_robin(&instance, &policies, &ProtocolConfig::default())?;
        let report = benchmark_trace(&trace, &theorems)?;
        if args.fleet.is_some() {
            println!("instance {index}:");
        }
        print!("{report}");
        if !report.all_pass() {
            failures += 1;
        }
    }
    if args.fleet.is_some() {
        println!("fleet: {count} instances, {failures} with violations");
    }
    println!("RESULT: {}", if failures == 0 { "PASS" } else { "FAIL" });
    Ok(if failures == 0 { 0 } else { 1 })
}

fn cmd_exante(args: &ExanteArgs) -> Result<i32> {
    let instance = load_instance(&args.instance)?;
    let mode = match args.samples {
        Some(samples) => ExAnteMode::MonteCarlo {
            samples,
            seed: RngSeed(args.seed),
        },
        None => ExAnteMode::Exact,
    };
    let policies = default_policies(&instance);
    let report = exante_bound_check(&instance, &policies, mode)?;
    print!("{report}");
    let pass = report.all_pass();
    println!("RESULT: {}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { 0 } else { 1 })
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<i32> {
    let text = fs::read_to_string(&args.spec)
        .with_context(|| format!("reading experiment spec {}", args.spec.display()))?;
    let spec = ExperimentSpec::from_json(&text)?;
    let rows = run_experiment(&spec)?;
    fs::write(&args.csv, rows_to_csv(&rows))
        .with_context(|| format!("writing CSV to {}", args.csv.display()))?;
    println!("{} rows written to {}", rows.len(), args.csv.display());
    Ok(0)
}

fn cmd_example1(args: &Example1Args) -> Result<i32> {
    let n = args.n;
    let instance = Instance::example1(n)?;
    let mut policies = default_policies(&instance);
    if args.strategic {
        policies[0] = PolicyKind::Example1Strategic;
    }
    let trace = run_round_robin(&instance, &policies, &ProtocolConfig::default())?;
    let alloc = allocation_of(&trace)?;
    let (objective, _) = instance.compile_agent(0);
    let value = objective.value(alloc.solution(0).best_set());

    // brute force within enumeration range, additive closed form beyond
    let opt = if instance.item_count() <= 22 {
        agent_opt(&instance, 0)?.0
    } else {
        2.0 * n as f64
    };
    println!(
        "n={n} m={} policy={} first-agent value {} OPT {}",
        instance.item_count(),
        if args.strategic { "strategic" } else { "greedy" },
        value,
        opt
    );
    println!("eps ladder: {:?}", EXAMPLE1_DEFAULT_EPS);
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Exante(args) => cmd_exante(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Example1(args) => cmd_example1(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
