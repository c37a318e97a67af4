//! Exact frequent-itemset mining and border computation.
//!
//! Mining is depth-first over vertical transaction-id lists: the support
//! of an extension is the length of the intersection of two sorted id
//! lists. Every frequent itemset is materialized together with its exact
//! support, which the curve metrics downstream require; a configurable
//! capacity cap turns pathological thresholds into an error instead of an
//! out-of-memory abort.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use thiserror::Error;

use crate::corpus::{ItemId, Itemset, TransactionDatabase};

/// Default cap on the number of mined itemsets.
pub const DEFAULT_ITEMSET_CAP: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MineError {
    /// Minimum support counts are absolute and must lie in `1..=DS`.
    #[error("minimum support count {minsup_count} outside 1..={transaction_count}")]
    ThresholdOutOfRange {
        minsup_count: u64,
        transaction_count: u64,
    },
    /// The result would exceed `cap` itemsets.
    #[error("frequent itemset count exceeds cap of {cap}")]
    CapacityExceeded { cap: u64 },
}

/// All frequent itemsets at one threshold, with exact supports.
///
/// Keys are canonical itemsets, so iteration is lexicographic and
/// deterministic. The empty itemset is not a member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequentItemsetCollection {
    minsup_count: u64,
    itemsets: BTreeMap<Itemset, u64>,
}

impl FrequentItemsetCollection {
    /// The absolute threshold this collection was mined at.
    pub fn minsup_count(&self) -> u64 {
        self.minsup_count
    }

    pub fn len(&self) -> u64 {
        self.itemsets.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.itemsets.is_empty()
    }

    pub fn contains(&self, itemset: &[ItemId]) -> bool {
        self.itemsets.contains_key(itemset)
    }

    /// Exact support, or `None` if the itemset is not frequent.
    pub fn support_of(&self, itemset: &[ItemId]) -> Option<u64> {
        self.itemsets.get(itemset).copied()
    }

    /// Lexicographic iteration over `(itemset, support)`.
    pub fn iter(&self) -> impl Iterator<Item = (&Itemset, u64)> {
        self.itemsets.iter().map(|(k, &v)| (k, v))
    }

    /// Sum of supports over all members.
    pub fn total_support(&self) -> u64 {
        self.itemsets.values().sum()
    }

    /// Sum of itemset lengths over all members.
    pub fn total_len(&self) -> u64 {
        self.itemsets.keys().map(|k| k.len() as u64).sum()
    }

    /// Restriction to members with support at least `minsup_count`.
    ///
    /// For thresholds at or above the mined one this is exactly the
    /// collection a fresh mine at that threshold would return, because
    /// supports are exact; downward closure survives since subsets never
    /// have lower support.
    pub fn filter_at(&self, minsup_count: u64) -> FrequentItemsetCollection {
        let itemsets = self
            .itemsets
            .iter()
            .filter(|&(_, &sup)| sup >= minsup_count)
            .map(|(k, &v)| (k.clone(), v))
            .collect();
        FrequentItemsetCollection {
            minsup_count: minsup_count.max(self.minsup_count),
            itemsets,
        }
    }
}

/// Mines all frequent itemsets with the default capacity cap.
pub fn mine_frequent(
    db: &TransactionDatabase,
    minsup_count: u64,
) -> Result<FrequentItemsetCollection, MineError> {
    mine_frequent_capped(db, minsup_count, DEFAULT_ITEMSET_CAP)
}

/// Mines all itemsets with support at least `minsup_count`.
///
/// Fails with [`MineError::CapacityExceeded`] as soon as more than `cap`
/// itemsets have been found, without materializing the rest.
pub fn mine_frequent_capped(
    db: &TransactionDatabase,
    minsup_count: u64,
    cap: u64,
) -> Result<FrequentItemsetCollection, MineError> {
    let ds = db.transaction_count();
    if minsup_count == 0 || minsup_count > ds {
        return Err(MineError::ThresholdOutOfRange {
            minsup_count,
            transaction_count: ds,
        });
    }

    // Vertical layout: per frequent item, the ascending list of ids of
    // the transactions containing it.
    let mut tidlists: BTreeMap<ItemId, Vec<u32>> = BTreeMap::new();
    for (tid, t) in db.transactions().iter().enumerate() {
        for &i in t {
            if db.singleton_support(i) >= minsup_count {
                tidlists.entry(i).or_default().push(tid as u32);
            }
        }
    }
    let roots: Vec<(ItemId, Vec<u32>)> = tidlists.into_iter().collect();

    let mut out: BTreeMap<Itemset, u64> = BTreeMap::new();
    let mut prefix: Itemset = Vec::new();
    extend(&roots, &mut prefix, minsup_count, cap, &mut out)?;
    Ok(FrequentItemsetCollection {
        minsup_count,
        itemsets: out,
    })
}

/// One DFS layer: each entry of `tails` extends `prefix` by one item that
/// is greater than every item already in `prefix`, so each itemset is
/// reached exactly once.
fn extend(
    tails: &[(ItemId, Vec<u32>)],
    prefix: &mut Itemset,
    minsup_count: u64,
    cap: u64,
    out: &mut BTreeMap<Itemset, u64>,
) -> Result<(), MineError> {
    for (idx, (item, tids)) in tails.iter().enumerate() {
        prefix.push(*item);
        out.insert(prefix.clone(), tids.len() as u64);
        if out.len() as u64 > cap {
            return Err(MineError::CapacityExceeded { cap });
        }
        let mut children: Vec<(ItemId, Vec<u32>)> = Vec::new();
        for (other, other_tids) in &tails[idx + 1..] {
            let inter = intersect_sorted(tids, other_tids);
            if inter.len() as u64 >= minsup_count {
                children.push((*other, inter));
            }
        }
        if !children.is_empty() {
            extend(&children, prefix, minsup_count, cap, out)?;
        }
        prefix.pop();
    }
    Ok(())
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BorderKind {
    /// Maximal frequent itemsets: no frequent proper superset exists.
    Positive,
    /// Minimal infrequent itemsets: every non-empty proper subset is
    /// frequent.
    Negative,
}

/// An antichain of itemsets (no member contains another).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorderSet {
    kind: BorderKind,
    itemsets: BTreeSet<Itemset>,
}

impl BorderSet {
    pub fn kind(&self) -> BorderKind {
        self.kind
    }

    pub fn len(&self) -> u64 {
        self.itemsets.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.itemsets.is_empty()
    }

    pub fn contains(&self, itemset: &[ItemId]) -> bool {
        self.itemsets.contains(itemset)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Itemset> {
        self.itemsets.iter()
    }

    /// Mean member length; 0 for an empty border.
    pub fn mean_len(&self) -> f64 {
        if self.itemsets.is_empty() {
            return 0.0;
        }
        let total: u64 = self.itemsets.iter().map(|s| s.len() as u64).sum();
        total as f64 / self.itemsets.len() as f64
    }
}

/// Positive border of a frequent collection: the members none of whose
/// one-item extensions inside the collection exist.
///
/// Works by erasing every immediate subset of every member; whatever
/// survives has no frequent superset, because supersets are reachable
/// through chains of immediate subsets.
pub fn positive_border(fi: &FrequentItemsetCollection) -> BorderSet {
    let mut maximal: BTreeSet<Itemset> = fi.itemsets.keys().cloned().collect();
    for itemset in fi.itemsets.keys() {
        if itemset.len() < 2 {
            continue;
        }
        let mut sub = Vec::with_capacity(itemset.len() - 1);
        for drop in 0..itemset.len() {
            sub.clear();
            sub.extend_from_slice(&itemset[..drop]);
            sub.extend_from_slice(&itemset[drop + 1..]);
            maximal.remove(sub.as_slice());
        }
    }
    BorderSet {
        kind: BorderKind::Positive,
        itemsets: maximal,
    }
}

/// Negative border: the minimal infrequent itemsets over the database
/// alphabet, at the threshold `fi` was mined with.
///
/// Candidates are infrequent singletons plus single-item extensions of
/// frequent itemsets past their maximum item. Every minimal infrequent
/// itemset of size >= 2 arises this way: dropping its maximum item leaves
/// a frequent set (minimality), and extending that set by the maximum
/// regenerates it. Extending only past the maximum also means no
/// candidate is generated twice.
pub fn negative_border(db: &TransactionDatabase, fi: &FrequentItemsetCollection) -> BorderSet {
    let alphabet = db.alphabet();
    let mut border: BTreeSet<Itemset> = BTreeSet::new();

    for &i in alphabet {
        if !fi.contains(&[i]) {
            border.insert(alloc::vec![i]);
        }
    }

    let mut candidate: Itemset = Vec::new();
    let mut sub: Itemset = Vec::new();
    for itemset in fi.itemsets.keys() {
        let max_item = *itemset.last().expect("members are non-empty");
        let start = alphabet.partition_point(|&a| a <= max_item);
        'next_ext: for &ext in &alphabet[start..] {
            candidate.clear();
            candidate.extend_from_slice(itemset);
            candidate.push(ext);
            if fi.contains(&candidate) {
                continue;
            }
            // Minimality: every immediate subset must be frequent. The
            // subset dropping `ext` is `itemset` itself, known frequent.
            for drop in 0..candidate.len() - 1 {
                sub.clear();
                sub.extend_from_slice(&candidate[..drop]);
                sub.extend_from_slice(&candidate[drop + 1..]);
                if !fi.contains(&sub) {
                    continue 'next_ext;
                }
            }
            border.insert(candidate.clone());
        }
    }

    BorderSet {
        kind: BorderKind::Negative,
        itemsets: border,
    }
}
