//! Shared instance builders for the criterion benches.

use submod_core::constraints::ConstraintSpec;
use submod_core::experiments::{gen_erdos_renyi, implant_influencers};
use submod_core::instance::AgentSpec;
use submod_core::objectives::ObjectiveSpec;
use submod_core::rng::RngSeed;
use submod_core::Instance;

/// Competing influence agents with a cardinality cap on an implanted
/// Erdős–Rényi graph; the workhorse of the experiment harness.
pub fn influence_instance(vertices: usize, agents: usize, k: usize) -> Instance {
    let base = gen_erdos_renyi(vertices, 10.0, RngSeed(1)).unwrap();
    let graph = implant_influencers(&base, RngSeed(2)).unwrap();
    let specs = (0..agents)
        .map(|_| {
            AgentSpec::new(
                ObjectiveSpec::Influence {
                    edges: graph.edges().to_vec(),
                    q: 0.2,
                },
                ConstraintSpec::Cardinality { k },
            )
        })
        .collect();
    Instance::new(graph.vertex_count(), specs).unwrap()
}

/// A small cut instance for the two-solution policy.
pub fn cut_instance(m: usize, agents: usize) -> Instance {
    submod_core::fleet::cut_instance(
        RngSeed(3),
        agents,
        m,
        submod_core::fleet::ConstraintKind::Cardinality,
    )
    .unwrap()
}
