//! The problem statement: a ground set plus one (objective, constraint)
//! pair per agent, and the JSON file format the CLI consumes.

use serde::{Deserialize, Serialize};

use crate::constraints::{ConstraintOracle, ConstraintSpec};
use crate::error::{Error, Result};
use crate::objectives::{ObjectiveOracle, ObjectiveSpec};
use crate::set::GroundSet;

/// One agent's objective, constraint, and declared monotonicity. The flag
/// must agree with the family (cut is non-monotone, the rest monotone).
#[derive(Clone, Debug, PartialEq)]
pub struct AgentSpec {
    pub objective: ObjectiveSpec,
    pub constraint: ConstraintSpec,
    pub monotone: bool,
}

impl AgentSpec {
    /// Builds a spec with the monotone flag derived from the family.
    pub fn new(objective: ObjectiveSpec, constraint: ConstraintSpec) -> AgentSpec {
        let monotone = objective.is_monotone_family();
        AgentSpec {
            objective,
            constraint,
            monotone,
        }
    }
}

/// A validated multi-agent instance over a common ground set.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    ground: GroundSet,
    agents: Vec<AgentSpec>,
}

impl Instance {
    /// Validates and assembles an instance: the ground set is non-empty,
    /// every objective/constraint fits it, and each monotone flag matches
    /// its objective family.
    pub fn new(ground_size: usize, agents: Vec<AgentSpec>) -> Result<Instance> {
        if ground_size == 0 {
            return Err(Error::InvalidSpec("ground set must be non-empty".into()));
        }
        if agents.is_empty() {
            return Err(Error::InvalidSpec("instance needs at least one agent".into()));
        }
        let ground = GroundSet::new(ground_size);
        for (i, agent) in agents.iter().enumerate() {
            agent
                .objective
                .compile(&ground)
                .map_err(|e| prefix_agent(i, e))?;
            agent
                .constraint
                .compile(&ground)
                .map_err(|e| prefix_agent(i, e))?;
            let expected = agent.objective.is_monotone_family();
            if agent.monotone != expected {
                return Err(Error::MonotoneFlagMismatch {
                    agent: i,
                    family: agent.objective.family_name(),
                    expected: if expected { "monotone" } else { "non-monotone" },
                    declared: agent.monotone,
                });
            }
        }
        Ok(Instance { ground, agents })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn item_count(&self) -> usize {
        self.ground.size()
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn agents(&self) -> &[AgentSpec] {
        &self.agents
    }

    pub fn agent(&self, i: usize) -> &AgentSpec {
        &self.agents[i]
    }

    /// Compiles the value and independence oracles for one agent.
    /// Construction was validated in [`Instance::new`], so this only fails
    /// if the instance was mutated out from under us.
    pub fn compile_agent(&self, i: usize) -> (ObjectiveOracle, ConstraintOracle) {
        let objective = self.agents[i]
            .objective
            .compile(&self.ground)
            .expect("validated at construction");
        let constraint = self.agents[i]
            .constraint
            .compile(&self.ground)
            .expect("validated at construction");
        (objective, constraint)
    }

    /// The adversarial n-agent instance on `n²+1` items where all-greedy
    /// round robin leaves agent 1 with value exactly 2, while a strategic
    /// first pick raises it to `n+1`. Agents carry no combinatorial
    /// constraint (cardinality `m`).
    pub fn example1(n: usize) -> Result<Instance> {
        if n < 2 {
            return Err(Error::InvalidSpec(
                "the adversarial instance needs at least 2 agents".into(),
            ));
        }
        let m = n * n + 1;
        let agents = (1..=n)
            .map(|agent| {
                AgentSpec::new(
                    ObjectiveSpec::Example1 {
                        n,
                        agent,
                        eps: crate::objectives::EXAMPLE1_DEFAULT_EPS.to_vec(),
                    },
                    ConstraintSpec::Cardinality { k: m },
                )
            })
            .collect();
        Instance::new(m, agents)
    }

    pub fn from_json(text: &str) -> Result<Instance> {
        let doc: InstanceDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let agents = doc
            .agents
            .into_iter()
            .map(|a| {
                let monotone = a
                    .monotone
                    .unwrap_or_else(|| a.objective.is_monotone_family());
                AgentSpec {
                    objective: a.objective,
                    constraint: a.constraint,
                    monotone,
                }
            })
            .collect();
        Instance::new(doc.m, agents)
    }

    pub fn to_json(&self) -> String {
        let doc = InstanceDoc {
            m: self.ground.size(),
            agents: self
                .agents
                .iter()
                .map(|a| AgentDoc {
                    objective: a.objective.clone(),
                    constraint: a.constraint.clone(),
                    monotone: Some(a.monotone),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("instance serialization")
    }
}

fn prefix_agent(i: usize, e: Error) -> Error {
    match e {
        Error::InvalidSpec(msg) => Error::InvalidSpec(format!("agent {i}: {msg}")),
        other => other,
    }
}

/// On-disk instance document: `{m, agents:[{objective, constraint,
/// monotone?}]}`. The monotone flag may be omitted and is then derived
/// from the objective family.
#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    m: usize,
    agents: Vec<AgentDoc>,
}

#[derive(Serialize, Deserialize)]
struct AgentDoc {
    objective: ObjectiveSpec,
    constraint: ConstraintSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    monotone: Option<bool>,
}
