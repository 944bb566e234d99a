//! Ground sets and canonical item sets.
//!
//! Items are dense integer ids in `[0, m)`. Sets are kept as sorted,
//! duplicate-free id vectors so that equal sets have equal representations
//! (cheap hashing, deterministic iteration, lexicographic comparison).

use std::fmt;

use serde::{Deserialize, Serialize};

/// Index of an item in a ground set of size `m`; valid ids are `0..m`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ItemId(pub u32);

impl ItemId {
    pub fn new(id: usize) -> Self {
        ItemId(id as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for ItemId {
    fn from(id: u32) -> Self {
        ItemId(id)
    }
}

/// The ground set `{0, 1, ..., m-1}` all agents compete over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    size: usize,
}

impl GroundSet {
    /// A ground set must hold at least one item.
    pub fn new(size: usize) -> Self {
        assert!(size >= 1, "ground set must be non-empty");
        GroundSet { size }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, id: ItemId) -> bool {
        id.index() < self.size
    }

    pub fn items(&self) -> impl Iterator<Item = ItemId> {
        (0..self.size as u32).map(ItemId)
    }

    /// The full item set `{0, ..., m-1}`.
    pub fn full_set(&self) -> ItemSet {
        ItemSet {
            ids: self.items().collect(),
        }
    }
}

/// A subset of a ground set, stored as a sorted vector of distinct ids.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemSet {
    ids: Vec<ItemId>,
}

impl ItemSet {
    pub fn new() -> Self {
        ItemSet::default()
    }

    /// Builds a set from arbitrary ids, sorting and deduplicating.
    pub fn from_ids<I: IntoIterator<Item = ItemId>>(ids: I) -> Self {
        let mut ids: Vec<ItemId> = ids.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        ItemSet { ids }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(ids: I) -> Self {
        Self::from_ids(ids.into_iter().map(ItemId::new))
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: ItemId) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    /// Inserts an id, keeping the order; returns false if already present.
    pub fn insert(&mut self, id: ItemId) -> bool {
        match self.ids.binary_search(&id) {
            Ok(_) => false,
            Err(pos) => {
                self.ids.insert(pos, id);
                true
            }
        }
    }

    /// Removes an id; returns false if it was not present.
    pub fn remove(&mut self, id: ItemId) -> bool {
        match self.ids.binary_search(&id) {
            Ok(pos) => {
                self.ids.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.ids.iter().copied()
    }

    pub fn as_slice(&self) -> &[ItemId] {
        &self.ids
    }

    /// Largest id in the set, if any. Sets are sorted, so this is `O(1)`.
    pub fn max_id(&self) -> Option<ItemId> {
        self.ids.last().copied()
    }

    pub fn is_subset(&self, other: &ItemSet) -> bool {
        self.ids.iter().all(|&id| other.contains(id))
    }

    pub fn is_disjoint(&self, other: &ItemSet) -> bool {
        self.ids.iter().all(|&id| !other.contains(id))
    }

    /// The set with `id` added (self is unchanged).
    pub fn with(&self, id: ItemId) -> ItemSet {
        let mut out = self.clone();
        out.insert(id);
        out
    }

    /// The set with `id` removed (self is unchanged).
    pub fn without(&self, id: ItemId) -> ItemSet {
        let mut out = self.clone();
        out.remove(id);
        out
    }

    pub fn union(&self, other: &ItemSet) -> ItemSet {
        let mut ids = self.ids.clone();
        ids.extend_from_slice(&other.ids);
        ItemSet::from_ids(ids)
    }

    pub fn difference(&self, other: &ItemSet) -> ItemSet {
        ItemSet {
            ids: self
                .ids
                .iter()
                .copied()
                .filter(|&id| !other.contains(id))
                .collect(),
        }
    }

    /// Encodes the set as a bitmask; requires all ids below 64.
    pub fn to_mask(&self) -> u64 {
        let mut mask = 0u64;
        for id in self.iter() {
            assert!(id.index() < 64);
            mask |= 1 << id.index();
        }
        mask
    }

    pub fn from_mask(mut mask: u64) -> ItemSet {
        let mut ids = Vec::new();
        while mask != 0 {
            let bit = mask.trailing_zeros();
            ids.push(ItemId(bit));
            mask &= mask - 1;
        }
        ItemSet { ids }
    }
}

impl fmt::Debug for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, id) in self.ids.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", id)?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<ItemId> for ItemSet {
    fn from_iter<I: IntoIterator<Item = ItemId>>(iter: I) -> Self {
        ItemSet::from_ids(iter)
    }
}
