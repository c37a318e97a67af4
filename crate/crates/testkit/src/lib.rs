//! Brute-force oracles and random inputs for testing the mining and
//! metric code against first principles.
//!
//! Everything here trades speed for obviousness: supports come from
//! rescanning transactions, itemset families from full powerset
//! enumeration, and curve areas from dense midpoint sums. None of it
//! shares code paths with the optimized implementations it checks.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use tdprof_core::{ItemId, Itemset, TransactionDatabase};

/// Upper bounds used by the randomized suites: alphabets up to 12 items
/// keep the 2^|I| powerset enumerable in microseconds.
pub const MAX_ALPHABET: u32 = 12;
pub const MAX_TRANSACTIONS: usize = 50;

/// Draws a random database with up to [`MAX_ALPHABET`] items and up to
/// [`MAX_TRANSACTIONS`] transactions. Transactions are non-empty;
/// duplicates (of items and of whole transactions) are allowed, matching
/// what real inputs contain.
pub fn random_database(rng: &mut impl Rng) -> TransactionDatabase {
    let alphabet_size = rng.gen_range(1..=MAX_ALPHABET);
    let n_transactions = rng.gen_range(1..=MAX_TRANSACTIONS);
    let mut transactions = Vec::with_capacity(n_transactions);
    for _ in 0..n_transactions {
        let len = rng.gen_range(1..=alphabet_size);
        let t: Vec<ItemId> = (0..len).map(|_| rng.gen_range(1..=alphabet_size)).collect();
        transactions.push(t);
    }
    TransactionDatabase::from_transactions("random", transactions)
        .expect("at least one non-empty transaction")
}

/// A threshold drawn uniformly from `1..=DS`.
pub fn random_threshold(rng: &mut impl Rng, db: &TransactionDatabase) -> u64 {
    rng.gen_range(1..=db.transaction_count())
}

/// Support by rescanning every transaction with a per-item membership
/// test; independent of the core crate's merge-based containment.
pub fn oracle_support(db: &TransactionDatabase, itemset: &[ItemId]) -> u64 {
    db.transactions()
        .iter()
        .filter(|t| itemset.iter().all(|i| t.binary_search(i).is_ok()))
        .count() as u64
}

/// Every non-empty subset of the database alphabet, via bitmask
/// enumeration. Sorted order falls out of the mask order plus canonical
/// storage.
pub fn powerset_of_alphabet(db: &TransactionDatabase) -> Vec<Itemset> {
    let alphabet = db.alphabet();
    assert!(
        alphabet.len() <= MAX_ALPHABET as usize,
        "powerset oracle limited to {MAX_ALPHABET} items"
    );
    let mut out = Vec::with_capacity((1usize << alphabet.len()) - 1);
    for mask in 1u32..(1u32 << alphabet.len()) {
        let subset: Itemset = alphabet
            .iter()
            .enumerate()
            .filter(|&(bit, _)| mask & (1 << bit) != 0)
            .map(|(_, &item)| item)
            .collect();
        out.push(subset);
    }
    out
}

/// All frequent non-empty itemsets with exact supports, by scanning the
/// whole powerset.
pub fn oracle_frequent_itemsets(
    db: &TransactionDatabase,
    minsup_count: u64,
) -> BTreeMap<Itemset, u64> {
    powerset_of_alphabet(db)
        .into_iter()
        .filter_map(|subset| {
            let sup = oracle_support(db, &subset);
            (sup >= minsup_count).then_some((subset, sup))
        })
        .collect()
}

/// Maximal members of a frequent family: no strict superset inside the
/// family. Quadratic pairwise scan.
pub fn oracle_positive_border(fi: &BTreeMap<Itemset, u64>) -> BTreeSet<Itemset> {
    fi.keys()
        .filter(|x| {
            !fi.keys()
                .any(|y| y.len() > x.len() && is_strict_subset(x, y))
        })
        .cloned()
        .collect()
}

/// Minimal infrequent itemsets by direct definition over the full
/// powerset: not frequent, and every non-empty strict subset frequent.
pub fn oracle_negative_border(
    db: &TransactionDatabase,
    fi: &BTreeMap<Itemset, u64>,
) -> BTreeSet<Itemset> {
    powerset_of_alphabet(db)
        .into_iter()
        .filter(|x| {
            if fi.contains_key(x) {
                return false;
            }
            proper_non_empty_subsets(x).iter().all(|s| fi.contains_key(s))
        })
        .collect()
}

/// All non-empty strict subsets of a canonical itemset.
pub fn proper_non_empty_subsets(itemset: &[ItemId]) -> Vec<Itemset> {
    let n = itemset.len();
    let mut out = Vec::new();
    for mask in 1u32..((1u32 << n) - 1) {
        let subset: Itemset = itemset
            .iter()
            .enumerate()
            .filter(|&(bit, _)| mask & (1 << bit) != 0)
            .map(|(_, &item)| item)
            .collect();
        out.push(subset);
    }
    out
}

/// All non-empty subsets, the itemset itself included.
pub fn non_empty_subsets(itemset: &[ItemId]) -> Vec<Itemset> {
    let mut out = proper_non_empty_subsets(itemset);
    out.push(itemset.to_vec());
    out
}

fn is_strict_subset(a: &[ItemId], b: &[ItemId]) -> bool {
    a.len() < b.len() && a.iter().all(|i| b.binary_search(i).is_ok())
}

/// Area under the piecewise-linear interpolant of `points` by a dense
/// midpoint Riemann sum; converges to the trapezoid value because the
/// midpoint rule is exact on each linear piece up to the panel cuts.
pub fn oracle_midpoint_area(points: &[(f64, f64)], panels_per_segment: usize) -> f64 {
    assert!(points.len() >= 2);
    let mut area = 0.0;
    for w in points.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        let h = (x1 - x0) / panels_per_segment as f64;
        for p in 0..panels_per_segment {
            let mid = x0 + h * (p as f64 + 0.5);
            let t = (mid - x0) / (x1 - x0);
            area += h * (y0 + t * (y1 - y0));
        }
    }
    area
}
