//! Independence oracles realizing p-systems.
//!
//! Single matroids (cardinality, partition, graphic) declare `p = 1`;
//! an intersection of `k` matroids declares `p = k` and is represented
//! lazily as the conjunction of its member oracles. Restrictions keep the
//! declared `p` (the restriction of a p-system is a p-system).
//!
//! [`verify_p_system`] is the exhaustive rank-ratio verifier for test-scale
//! ground sets; at protocol runtime the declared `p` is trusted.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::{GroundSet, ItemId, ItemSet};

/// A single-matroid description; also the member type for intersections.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum MatroidSpec {
    /// At most `k` items.
    Cardinality { k: usize },
    /// Items partitioned into classes with per-class capacities.
    PartitionMatroid {
        parts: Vec<Vec<u32>>,
        caps: Vec<usize>,
    },
    /// Items are the edges of a multigraph; independent sets are the
    /// acyclic edge subsets.
    GraphicMatroid { edges: Vec<(u32, u32)> },
}

/// Constraint description; compiles to a [`ConstraintOracle`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ConstraintSpec {
    Cardinality {
        k: usize,
    },
    PartitionMatroid {
        parts: Vec<Vec<u32>>,
        caps: Vec<usize>,
    },
    GraphicMatroid {
        edges: Vec<(u32, u32)>,
    },
    /// Feasible sets are independent in every member matroid; a k-member
    /// intersection is a k-system.
    Intersection {
        members: Vec<MatroidSpec>,
    },
}

impl ConstraintSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            ConstraintSpec::Cardinality { .. } => "cardinality",
            ConstraintSpec::PartitionMatroid { .. } => "partition_matroid",
            ConstraintSpec::GraphicMatroid { .. } => "graphic_matroid",
            ConstraintSpec::Intersection { .. } => "intersection",
        }
    }

    pub fn is_cardinality(&self) -> bool {
        matches!(self, ConstraintSpec::Cardinality { .. })
    }

    /// The `p` this constraint is claimed to be a p-system for:
    /// 1 for a single matroid, the member count for an intersection.
    pub fn declared_p(&self) -> usize {
        match self {
            ConstraintSpec::Intersection { members } => members.len(),
            _ => 1,
        }
    }

    pub fn compile(&self, ground: &GroundSet) -> Result<ConstraintOracle> {
        let members = match self {
            ConstraintSpec::Cardinality { k } => vec![MatroidSpec::Cardinality { k: *k }],
            ConstraintSpec::PartitionMatroid { parts, caps } => vec![MatroidSpec::PartitionMatroid {
                parts: parts.clone(),
                caps: caps.clone(),
            }],
            ConstraintSpec::GraphicMatroid { edges } => vec![MatroidSpec::GraphicMatroid {
                edges: edges.clone(),
            }],
            ConstraintSpec::Intersection { members } => {
                if members.len() < 2 {
                    return Err(Error::InvalidSpec(
                        "intersection needs at least 2 member matroids".into(),
                    ));
                }
                members.clone()
            }
        };
        let compiled = members
            .iter()
            .map(|m| MatroidOracle::compile(m, ground))
            .collect::<Result<Vec<_>>>()?;
        Ok(ConstraintOracle {
            members: compiled,
            declared_p: self.declared_p(),
            mask: None,
        })
    }
}

#[derive(Clone, Debug)]
enum MatroidOracle {
    Cardinality {
        k: usize,
    },
    Partition {
        /// part index per item
        part_of: Vec<usize>,
        caps: Vec<usize>,
    },
    Graphic {
        vertices: usize,
        /// endpoints per item (= per edge)
        endpoints: Vec<(u32, u32)>,
    },
}

impl MatroidOracle {
    fn compile(spec: &MatroidSpec, ground: &GroundSet) -> Result<MatroidOracle> {
        let m = ground.size();
        match spec {
            MatroidSpec::Cardinality { k } => Ok(MatroidOracle::Cardinality { k: *k }),
            MatroidSpec::PartitionMatroid { parts, caps } => {
                if caps.len() != parts.len() {
                    return Err(Error::InvalidSpec(format!(
                        "partition matroid: {} parts but {} capacities",
                        parts.len(),
                        caps.len()
                    )));
                }
                let mut part_of = vec![usize::MAX; m];
                for (p, part) in parts.iter().enumerate() {
                    for &item in part {
                        let idx = item as usize;
                        if idx >= m {
                            return Err(Error::InvalidSpec(format!(
                                "partition matroid: item {item} outside ground set of size {m}"
                            )));
                        }
                        if part_of[idx] != usize::MAX {
                            return Err(Error::InvalidSpec(format!(
                                "partition matroid: item {item} appears in two parts"
                            )));
                        }
                        part_of[idx] = p;
                    }
                }
                if let Some(missing) = part_of.iter().position(|&p| p == usize::MAX) {
                    return Err(Error::InvalidSpec(format!(
                        "partition matroid: item {missing} not covered by any part"
                    )));
                }
                Ok(MatroidOracle::Partition {
                    part_of,
                    caps: caps.clone(),
                })
            }
            MatroidSpec::GraphicMatroid { edges } => {
                if edges.len() != m {
                    return Err(Error::InvalidSpec(format!(
                        "graphic matroid: {} edges for ground set of size {m}; items are edges",
                        edges.len()
                    )));
                }
                let vertices = edges
                    .iter()
                    .map(|&(u, v)| u.max(v) as usize + 1)
                    .max()
                    .unwrap_or(0);
                Ok(MatroidOracle::Graphic {
                    vertices,
                    endpoints: edges.clone(),
                })
            }
        }
    }

    fn is_independent(&self, set: &ItemSet) -> bool {
        match self {
            MatroidOracle::Cardinality { k } => set.len() <= *k,
            MatroidOracle::Partition { part_of, caps } => {
                let mut counts = vec![0usize; caps.len()];
                for id in set.iter() {
                    let p = part_of[id.index()];
                    counts[p] += 1;
                    if counts[p] > caps[p] {
                        return false;
                    }
                }
                true
            }
            MatroidOracle::Graphic {
                vertices,
                endpoints,
            } => {
                let mut parent: Vec<u32> = (0..*vertices as u32).collect();
                fn find(parent: &mut [u32], mut v: u32) -> u32 {
                    while parent[v as usize] != v {
                        parent[v as usize] = parent[parent[v as usize] as usize];
                        v = parent[v as usize];
                    }
                    v
                }
                for id in set.iter() {
                    let (u, v) = endpoints[id.index()];
                    let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                    if ru == rv {
                        return false;
                    }
                    parent[ru as usize] = rv;
                }
                true
            }
        }
    }
}

/// Compiled independence oracle: the lazy conjunction of member matroids,
/// optionally restricted to a subset of the ground set.
#[derive(Clone, Debug)]
pub struct ConstraintOracle {
    members: Vec<MatroidOracle>,
    declared_p: usize,
    mask: Option<ItemSet>,
}

impl ConstraintOracle {
    pub fn declared_p(&self) -> usize {
        self.declared_p
    }

    /// Membership query `S ∈ I`. Downward-closed; the empty set is always
    /// independent.
    pub fn is_independent(&self, set: &ItemSet) -> bool {
        if let Some(mask) = &self.mask {
            if !set.is_subset(mask) {
                return false;
            }
        }
        self.members.iter().all(|m| m.is_independent(set))
    }

    /// The restriction `I|A`: for `S ⊆ A` membership equals membership in
    /// the original system. Declared `p` is preserved.
    pub fn restrict(&self, allowed: &ItemSet) -> ConstraintOracle {
        let mask = match &self.mask {
            Some(existing) => existing
                .iter()
                .filter(|&id| allowed.contains(id))
                .collect(),
            None => allowed.clone(),
        };
        ConstraintOracle {
            members: self.members.clone(),
            declared_p: self.declared_p,
            mask: Some(mask),
        }
    }
}

/// Exact rational `num/den`, used for measured rank ratios and bound
/// factors.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Ratio {
        assert!(den != 0, "zero denominator");
        if num == 0 {
            return Ratio { num: 0, den: 1 };
        }
        let g = gcd(num, den);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn le_int(&self, bound: usize) -> bool {
        (self.num as u128) <= (bound as u128) * (self.den as u128)
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(
            ((self.num as u128) * (other.den as u128))
                .cmp(&((other.num as u128) * (self.den as u128))),
        )
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Outcome of the exhaustive rank-ratio measurement.
#[derive(Clone, Debug)]
pub struct PSystemReport {
    /// Exact maximum of upper-rank / lower-rank over all subsets.
    pub measured_p: Ratio,
    pub declared_p: usize,
    /// Subset attaining the maximum ratio.
    pub witness: ItemSet,
}

impl PSystemReport {
    pub fn within_declared(&self) -> bool {
        self.measured_p.le_int(self.declared_p)
    }
}

/// Largest ground set for the exhaustive p-system verifier.
pub const P_SYSTEM_LIMIT: usize = 14;

/// Measures the exact `max_S ur(S)/lr(S)` by enumerating, for every subset
/// `S`, the maximal independent subsets of `S`. Exhaustive; `m ≤ 14`.
pub fn verify_p_system(spec: &ConstraintSpec, ground: &GroundSet) -> Result<PSystemReport> {
    let m = ground.size();
    if m > P_SYSTEM_LIMIT {
        return Err(Error::TooLarge {
            what: "verify_p_system",
            limit: P_SYSTEM_LIMIT,
            got: m,
        });
    }
    let oracle = spec.compile(ground)?;
    let mut best = Ratio::new(1, 1);
    let mut witness = ItemSet::new();
    for s_mask in 1u64..(1 << m) {
        let over = ItemSet::from_mask(s_mask);
        let mut upper = 0usize;
        let mut lower = usize::MAX;
        for candidate in enumerate_independent_sets(&oracle, &over) {
            // maximal within `over`?
            let extendable = over
                .iter()
                .any(|x| !candidate.contains(x) && oracle.is_independent(&candidate.with(x)));
            if !extendable {
                upper = upper.max(candidate.len());
                lower = lower.min(candidate.len());
            }
        }
        // the empty set is always independent, so at least one basis exists
        if lower == 0 || lower == usize::MAX {
            continue;
        }
        let ratio = Ratio::new(upper as u64, lower as u64);
        if ratio > best {
            best = ratio;
            witness = over;
        }
    }
    Ok(PSystemReport {
        measured_p: best,
        declared_p: spec.declared_p(),
        witness,
    })
}

/// Streaming enumeration of every independent subset of `over`, each
/// exactly once, in lexicographic order. Downward-closed DFS: children of a
/// set extend it with a larger id, pruning dependent extensions.
pub fn enumerate_independent_sets<'a>(
    oracle: &'a ConstraintOracle,
    over: &ItemSet,
) -> IndependentSets<'a> {
    assert!(
        over.len() <= 24,
        "independent-set enumeration over {} items",
        over.len()
    );
    IndependentSets {
        oracle,
        items: over.iter().collect(),
        stack: vec![(ItemSet::new(), 0)],
    }
}

pub struct IndependentSets<'a> {
    oracle: &'a ConstraintOracle,
    items: Vec<ItemId>,
    /// `(set, index of the next candidate extension)`
    stack: Vec<(ItemSet, usize)>,
}

impl Iterator for IndependentSets<'_> {
    type Item = ItemSet;

    fn next(&mut self) -> Option<ItemSet> {
        let (set, start) = self.stack.pop()?;
        for j in (start..self.items.len()).rev() {
            let child = set.with(self.items[j]);
            if self.oracle.is_independent(&child) {
                self.stack.push((child, j + 1));
            }
        }
        Some(set)
    }
}
