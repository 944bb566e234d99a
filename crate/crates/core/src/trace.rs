//! Run artifacts: the ordered record of every pick in a protocol run and
//! the allocation reconstructed from it.
//!
//! Dummy picks are recorded explicitly so every trace has exactly
//! `ceil(m/n) * n` events, grouped into rounds that follow the permutation
//! order.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::set::{ItemId, ItemSet};

/// Which of the two solutions a simultaneous-greedy pick extended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    First,
    Second,
}

impl Slot {
    pub fn index(self) -> usize {
        match self {
            Slot::First => 0,
            Slot::Second => 1,
        }
    }

    pub fn number(self) -> usize {
        self.index() + 1
    }
}

/// One turn of the protocol: the acting agent and what it took (or a dummy
/// marker). `slot` is present only for two-solution policies.
#[derive(Clone, Debug, PartialEq)]
pub struct PickEvent {
    /// 1-based round number.
    pub round: usize,
    pub agent: usize,
    pub item: Option<ItemId>,
    pub slot: Option<Slot>,
}

/// Complete record of a protocol run.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    instance: Arc<Instance>,
    /// Turn position within a round -> agent index.
    permutation: Vec<usize>,
    events: Vec<PickEvent>,
}

impl Trace {
    pub(crate) fn new(
        instance: Arc<Instance>,
        permutation: Vec<usize>,
        events: Vec<PickEvent>,
    ) -> Trace {
        Trace {
            instance,
            permutation,
            events,
        }
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn instance_arc(&self) -> Arc<Instance> {
        Arc::clone(&self.instance)
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Turn position of `agent` within each round.
    pub fn position_of(&self, agent: usize) -> usize {
        self.permutation
            .iter()
            .position(|&a| a == agent)
            .expect("agent in permutation")
    }

    pub fn events(&self) -> &[PickEvent] {
        &self.events
    }

    pub fn rounds(&self) -> usize {
        self.instance.item_count().div_ceil(self.instance.agent_count())
    }

    /// Items taken strictly before `agent`'s first turn of round 1.
    pub fn items_taken_before_first_turn(&self, agent: usize) -> ItemSet {
        let position = self.position_of(agent);
        self.events
            .iter()
            .take(position)
            .filter_map(|e| e.item)
            .collect()
    }

    /// First item the agent actually picked, if any.
    pub fn first_pick_of(&self, agent: usize) -> Option<ItemId> {
        self.events
            .iter()
            .filter(|e| e.agent == agent)
            .find_map(|e| e.item)
    }

    /// Line-oriented export, one event per line:
    /// `round,turn,agent,item|DUMMY[,slot]` with 1-based round/turn.
    pub fn export(&self) -> String {
        let n = self.instance.agent_count();
        let mut out = String::new();
        for (idx, event) in self.events.iter().enumerate() {
            let turn = idx % n + 1;
            let item = match event.item {
                Some(id) => id.to_string(),
                None => "DUMMY".to_string(),
            };
            out.push_str(&format!("{},{},{},{}", event.round, turn, event.agent, item));
            if let Some(slot) = event.slot {
                out.push_str(&format!(",{}", slot.number()));
            }
            out.push('\n');
        }
        out
    }
}

/// Final solution set(s) of one agent.
#[derive(Clone, Debug, PartialEq)]
pub enum AgentSolution {
    Single(ItemSet),
    /// Two simultaneously built solutions plus which one is worth more.
    Pair {
        first: ItemSet,
        second: ItemSet,
        best: Slot,
    },
}

impl AgentSolution {
    /// The solution the agent keeps: the single set, or the better of the
    /// pair.
    pub fn best_set(&self) -> &ItemSet {
        match self {
            AgentSolution::Single(s) => s,
            AgentSolution::Pair { first, second, best } => match best {
                Slot::First => first,
                Slot::Second => second,
            },
        }
    }

    /// Every set the agent holds (one or two).
    pub fn all_sets(&self) -> Vec<&ItemSet> {
        match self {
            AgentSolution::Single(s) => vec![s],
            AgentSolution::Pair { first, second, .. } => vec![first, second],
        }
    }

    /// Union of the agent's sets; the items it removed from the pool.
    pub fn taken(&self) -> ItemSet {
        match self {
            AgentSolution::Single(s) => s.clone(),
            AgentSolution::Pair { first, second, .. } => first.union(second),
        }
    }
}

/// Per-agent solutions reconstructed from a trace; pairwise disjoint and
/// independent in each agent's constraint.
#[derive(Clone, Debug, PartialEq)]
pub struct Allocation {
    solutions: Vec<AgentSolution>,
}

impl Allocation {
    pub fn agent_count(&self) -> usize {
        self.solutions.len()
    }

    pub fn solution(&self, agent: usize) -> &AgentSolution {
        &self.solutions[agent]
    }

    pub fn solutions(&self) -> &[AgentSolution] {
        &self.solutions
    }

    /// All items held by any agent.
    pub fn allocated(&self) -> ItemSet {
        let mut out = ItemSet::new();
        for sol in &self.solutions {
            out = out.union(&sol.taken());
        }
        out
    }
}

/// Replays a trace into each agent's final set(s), erroring on duplicate
/// items and verifying that every reconstructed set is independent.
pub fn allocation_of(trace: &Trace) -> Result<Allocation> {
    let instance = trace.instance();
    let n = instance.agent_count();
    let mut seen = ItemSet::new();
    let mut singles: Vec<ItemSet> = vec![ItemSet::new(); n];
    let mut pairs: Vec<[ItemSet; 2]> = vec![[ItemSet::new(), ItemSet::new()]; n];
    let mut uses_slots = vec![false; n];

    for event in trace.events() {
        if event.agent >= n {
            return Err(Error::Parse(format!(
                "event references agent {} of {n}",
                event.agent
            )));
        }
        let Some(item) = event.item else { continue };
        if !instance.ground().contains(item) {
            return Err(Error::Parse(format!("event references item {item} outside ground")));
        }
        if !seen.insert(item) {
            return Err(Error::DuplicateItem { item: item.0 });
        }
        match event.slot {
            Some(slot) => {
                uses_slots[event.agent] = true;
                pairs[event.agent][slot.index()].insert(item);
            }
            None => {
                singles[event.agent].insert(item);
            }
        }
    }

    let mut solutions = Vec::with_capacity(n);
    for agent in 0..n {
        let (objective, constraint) = instance.compile_agent(agent);
        if uses_slots[agent] {
            if !singles[agent].is_empty() {
                return Err(Error::Parse(format!(
                    "agent {agent} mixes slotted and unslotted picks"
                )));
            }
            let [first, second] = std::mem::take(&mut pairs[agent]);
            for set in [&first, &second] {
                if !constraint.is_independent(set) {
                    return Err(Error::InfeasibleSolution { agent });
                }
            }
            let best = if objective.value(&first) >= objective.value(&second) {
                Slot::First
            } else {
                Slot::Second
            };
            solutions.push(AgentSolution::Pair { first, second, best });
        } else {
            let set = std::mem::take(&mut singles[agent]);
            if !constraint.is_independent(&set) {
                return Err(Error::InfeasibleSolution { agent });
            }
            solutions.push(AgentSolution::Single(set));
        }
    }
    Ok(Allocation { solutions })
}
