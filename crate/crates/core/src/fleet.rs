//! Seeded random instance generation for verification fleets.
//!
//! Fleets drive the bound checkers across regimes: monotone objectives
//! (additive, coverage) and non-monotone ones (cut), under cardinality,
//! partition-matroid, and two-matroid-intersection constraints. Every
//! instance is a pure function of its seed.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::constraints::{ConstraintSpec, MatroidSpec};
use crate::error::Result;
use crate::instance::{AgentSpec, Instance};
use crate::objectives::ObjectiveSpec;
use crate::rng::{derive_seed, rng_from_seed, RngSeed};

/// Constraint families exercised by the fleets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    Cardinality,
    PartitionMatroid,
    TwoIntersection,
}

impl ConstraintKind {
    pub const ALL: [ConstraintKind; 3] = [
        ConstraintKind::Cardinality,
        ConstraintKind::PartitionMatroid,
        ConstraintKind::TwoIntersection,
    ];
}

fn random_partition_matroid(rng: &mut ChaCha8Rng, m: usize) -> MatroidSpec {
    let part_count = rng.gen_range(2..=3.min(m));
    let mut parts: Vec<Vec<u32>> = vec![Vec::new(); part_count];
    for item in 0..m as u32 {
        parts[rng.gen_range(0..part_count)].push(item);
    }
    // empty parts are legal only if no item maps to them; drop them to
    // keep the caps meaningful
    parts.retain(|p| !p.is_empty());
    let caps = parts.iter().map(|_| rng.gen_range(1..=2)).collect();
    MatroidSpec::PartitionMatroid { parts, caps }
}

fn random_constraint(rng: &mut ChaCha8Rng, m: usize, kind: ConstraintKind) -> ConstraintSpec {
    match kind {
        ConstraintKind::Cardinality => ConstraintSpec::Cardinality {
            k: rng.gen_range(1..=4.min(m)),
        },
        ConstraintKind::PartitionMatroid => match random_partition_matroid(rng, m) {
            MatroidSpec::PartitionMatroid { parts, caps } => {
                ConstraintSpec::PartitionMatroid { parts, caps }
            }
            _ => unreachable!(),
        },
        ConstraintKind::TwoIntersection => ConstraintSpec::Intersection {
            members: vec![
                random_partition_matroid(rng, m),
                random_partition_matroid(rng, m),
            ],
        },
    }
}

fn random_additive(rng: &mut ChaCha8Rng, m: usize) -> ObjectiveSpec {
    ObjectiveSpec::Additive {
        weights: (0..m).map(|_| rng.gen_range(0.0..10.0)).collect(),
    }
}

fn random_coverage(rng: &mut ChaCha8Rng, m: usize) -> ObjectiveSpec {
    let universe = rng.gen_range(m..=2 * m);
    let covers = (0..m)
        .map(|_| {
            let size = rng.gen_range(1..=4.min(universe));
            let mut cover: Vec<usize> = (0..size).map(|_| rng.gen_range(0..universe)).collect();
            cover.sort_unstable();
            cover.dedup();
            cover
        })
        .collect();
    let weights = (0..universe).map(|_| rng.gen_range(0.1..3.0)).collect();
    ObjectiveSpec::Coverage {
        universe,
        covers,
        weights,
    }
}

fn random_cut(rng: &mut ChaCha8Rng, m: usize) -> ObjectiveSpec {
    let mut edges = Vec::new();
    for u in 0..m as u32 {
        for v in u + 1..m as u32 {
            if rng.gen_bool(0.45) {
                edges.push((u, v));
            }
        }
    }
    // a cut objective without edges is identically zero; force one edge
    if edges.is_empty() && m >= 2 {
        edges.push((0, 1));
    }
    let weights = if rng.gen_bool(0.5) {
        Some(edges.iter().map(|_| rng.gen_range(0.2..2.0)).collect())
    } else {
        None
    };
    ObjectiveSpec::Cut { edges, weights }
}

/// A random monotone instance: each agent gets an additive or coverage
/// objective and a constraint of the requested family.
pub fn monotone_instance(
    seed: RngSeed,
    n: usize,
    m: usize,
    kind: ConstraintKind,
) -> Result<Instance> {
    let mut rng = rng_from_seed(seed);
    let agents = (0..n)
        .map(|_| {
            let objective = if rng.gen_bool(0.5) {
                random_additive(&mut rng, m)
            } else {
                random_coverage(&mut rng, m)
            };
            AgentSpec::new(objective, random_constraint(&mut rng, m, kind))
        })
        .collect();
    Instance::new(m, agents)
}

/// A random non-monotone instance: cut objectives on random graphs.
pub fn cut_instance(seed: RngSeed, n: usize, m: usize, kind: ConstraintKind) -> Result<Instance> {
    let mut rng = rng_from_seed(seed);
    let agents = (0..n)
        .map(|_| {
            AgentSpec::new(
                random_cut(&mut rng, m),
                random_constraint(&mut rng, m, kind),
            )
        })
        .collect();
    Instance::new(m, agents)
}

/// Re-randomizes the data of an instance while preserving its shape: same
/// ground size, same per-agent objective and constraint families, fresh
/// weights/graphs/covers/partition assignments. The adversarial example1
/// family is fully determined by its parameters and is kept as-is.
pub fn randomize_like(template: &Instance, seed: RngSeed) -> Result<Instance> {
    let m = template.item_count();
    let agents = template
        .agents()
        .iter()
        .enumerate()
        .map(|(i, agent)| {
            let mut rng = rng_from_seed(derive_seed(seed, i as u64, 0));
            let objective = match &agent.objective {
                ObjectiveSpec::Additive { .. } => random_additive(&mut rng, m),
                ObjectiveSpec::Coverage { .. } => random_coverage(&mut rng, m),
                ObjectiveSpec::Cut { .. } => random_cut(&mut rng, m),
                ObjectiveSpec::Influence { q, .. } => {
                    let mut edges = Vec::new();
                    for u in 0..m as u32 {
                        for v in u + 1..m as u32 {
                            if rng.gen_bool(0.3) {
                                edges.push((u, v));
                            }
                        }
                    }
                    ObjectiveSpec::Influence { edges, q: *q }
                }
                keep @ ObjectiveSpec::Example1 { .. } => keep.clone(),
            };
            let constraint = match &agent.constraint {
                ConstraintSpec::Cardinality { k } => ConstraintSpec::Cardinality { k: *k },
                ConstraintSpec::PartitionMatroid { .. } => {
                    random_constraint(&mut rng, m, ConstraintKind::PartitionMatroid)
                }
                ConstraintSpec::GraphicMatroid { edges } => ConstraintSpec::GraphicMatroid {
                    edges: edges.clone(),
                },
                ConstraintSpec::Intersection { .. } => {
                    random_constraint(&mut rng, m, ConstraintKind::TwoIntersection)
                }
            };
            AgentSpec {
                objective,
                constraint,
                monotone: agent.monotone,
            }
        })
        .collect();
    Instance::new(m, agents)
}
