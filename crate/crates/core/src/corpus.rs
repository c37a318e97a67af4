//! Transaction text format, the in-memory database, and elemental statistics.
//!
//! The input format is one transaction per line: whitespace-separated
//! non-negative integer item ids. Blank lines are skipped and duplicate
//! items within a line are collapsed, so every stored transaction is a
//! non-empty sorted set.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

/// Integer identifier of a single item.
pub type ItemId = u32;

/// Canonical itemset: strictly ascending item ids.
pub type Itemset = Vec<ItemId>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    /// A token on some line is not a non-negative 32-bit integer.
    #[error("line {line}: invalid item token {token:?}")]
    InvalidToken { line: usize, token: String },
    /// The input contains no transactions, which leaves every per-database
    /// statistic undefined.
    #[error("input contains no transactions")]
    EmptyDatabase,
}

/// An immutable transactional database.
///
/// Construction canonicalizes every transaction (sorted, deduplicated) and
/// precomputes the alphabet and singleton supports. Instances never change
/// after construction, so sharing one across threads is safe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionDatabase {
    name: String,
    transactions: Vec<Itemset>,
    alphabet: Vec<ItemId>,
    singleton_support: BTreeMap<ItemId, u64>,
}

impl TransactionDatabase {
    /// Parses the one-transaction-per-line text format.
    ///
    /// `name` is a label carried along into reports; it has no semantic
    /// effect. Line numbers in errors are 1-based and count every input
    /// line, including blank ones.
    pub fn parse(text: &str, name: impl Into<String>) -> Result<Self, ParseError> {
        let mut transactions: Vec<Itemset> = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut items: Itemset = Vec::new();
            for token in line.split_whitespace() {
                let id: ItemId = token.parse().map_err(|_| ParseError::InvalidToken {
                    line: idx + 1,
                    token: token.to_string(),
                })?;
                items.push(id);
            }
            transactions.push(items);
        }
        Self::from_transactions(name, transactions)
    }

    /// Builds a database from already-tokenized transactions.
    ///
    /// Transactions are canonicalized here; empty transactions are dropped
    /// (the line-based parser never produces them, but callers may).
    pub fn from_transactions(
        name: impl Into<String>,
        transactions: Vec<Vec<ItemId>>,
    ) -> Result<Self, ParseError> {
        let mut canon: Vec<Itemset> = Vec::with_capacity(transactions.len());
        for mut t in transactions {
            t.sort_unstable();
            t.dedup();
            if !t.is_empty() {
                canon.push(t);
            }
        }
        if canon.is_empty() {
            return Err(ParseError::EmptyDatabase);
        }
        let mut singleton_support: BTreeMap<ItemId, u64> = BTreeMap::new();
        for t in &canon {
            for &i in t {
                *singleton_support.entry(i).or_insert(0) += 1;
            }
        }
        let alphabet: Vec<ItemId> = singleton_support.keys().copied().collect();
        Ok(Self {
            name: name.into(),
            transactions: canon,
            alphabet,
            singleton_support,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of transactions. Always at least 1.
    pub fn transaction_count(&self) -> u64 {
        self.transactions.len() as u64
    }

    /// All transactions, each sorted and duplicate-free.
    pub fn transactions(&self) -> &[Itemset] {
        &self.transactions
    }

    /// Distinct items that occur at least once, ascending.
    pub fn alphabet(&self) -> &[ItemId] {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> u64 {
        self.alphabet.len() as u64
    }

    /// Occurrence count of a single item (0 for unknown items).
    pub fn singleton_support(&self, item: ItemId) -> u64 {
        self.singleton_support.get(&item).copied().unwrap_or(0)
    }

    pub fn singleton_supports(&self) -> &BTreeMap<ItemId, u64> {
        &self.singleton_support
    }

    /// Largest singleton support in the database.
    pub fn max_singleton_support(&self) -> u64 {
        self.singleton_support.values().copied().max().unwrap_or(0)
    }

    /// Largest singleton support as a percentage of the transaction count.
    /// This is the highest threshold at which any itemset is frequent.
    pub fn max_singleton_support_pct(&self) -> f64 {
        100.0 * self.max_singleton_support() as f64 / self.transaction_count() as f64
    }

    /// Number of transactions containing every item of `itemset`, by a
    /// full scan. The empty itemset is contained in every transaction.
    pub fn support(&self, itemset: &[ItemId]) -> u64 {
        let canon = canonical(itemset);
        self.transactions
            .iter()
            .filter(|t| contains_sorted(t, &canon))
            .count() as u64
    }

    /// Serializes back to the line format. Parsing the result yields an
    /// equal database (transactions are already canonical).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.transactions {
            let mut first = true;
            for &i in t {
                if !first {
                    out.push(' ');
                }
                push_u32(&mut out, i);
                first = false;
            }
            out.push('\n');
        }
        out
    }
}

fn push_u32(out: &mut String, v: u32) {
    use core::fmt::Write;
    let _ = write!(out, "{v}");
}

/// Sorted+deduplicated copy of an arbitrary id slice.
pub fn canonical(items: &[ItemId]) -> Itemset {
    let mut v = items.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Subset test for two ascending slices, one linear pass.
fn contains_sorted(haystack: &[ItemId], needle: &[ItemId]) -> bool {
    let mut it = haystack.iter();
    'outer: for want in needle {
        for have in it.by_ref() {
            if have == want {
                continue 'outer;
            }
            if have > want {
                return false;
            }
        }
        return false;
    }
    true
}

/// The size-and-shape statistics of one database.
///
/// Percentages are in `[0, 100]`. `ones_fraction_pct` is the filled share
/// of the database-as-binary-matrix and equals
/// `100 * mean_transaction_len / alphabet_size`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementalStats {
    pub transaction_count: u64,
    pub alphabet_size: u64,
    pub mean_transaction_len: f64,
    pub max_transaction_len: u64,
    pub ones_fraction_pct: f64,
    pub max_singleton_support_pct: f64,
}

/// Computes [`ElementalStats`]. Total cost is one pass over the
/// transactions; the database is never empty, so every field is defined.
pub fn elemental_stats(db: &TransactionDatabase) -> ElementalStats {
    let ds = db.transaction_count();
    let total_items: u64 = db.transactions().iter().map(|t| t.len() as u64).sum();
    let mts = db
        .transactions()
        .iter()
        .map(|t| t.len() as u64)
        .max()
        .unwrap_or(0);
    let ats = total_items as f64 / ds as f64;
    let alphabet_size = db.alphabet_size();
    let ones = 100.0 * total_items as f64 / (ds as f64 * alphabet_size as f64);
    ElementalStats {
        transaction_count: ds,
        alphabet_size,
        mean_transaction_len: ats,
        max_transaction_len: mts,
        ones_fraction_pct: ones,
        max_singleton_support_pct: db.max_singleton_support_pct(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_canonicalizes_lines() {
        let db = TransactionDatabase::parse("3 1 2\n\n2 2 1\n", "t").unwrap();
        assert_eq!(db.transaction_count(), 2);
        assert_eq!(db.transactions()[0], vec![1, 2, 3]);
        assert_eq!(db.transactions()[1], vec![1, 2]);
        assert_eq!(db.alphabet(), &[1, 2, 3]);
    }

    #[test]
    fn parse_rejects_bad_token() {
        let err = TransactionDatabase::parse("1 2\nx 3\n", "t").unwrap_err();
        assert_eq!(
            err,
            ParseError::InvalidToken {
                line: 2,
                token: "x".into()
            }
        );
    }

    #[test]
    fn parse_rejects_empty_input() {
        assert_eq!(
            TransactionDatabase::parse("\n \n", "t").unwrap_err(),
            ParseError::EmptyDatabase
        );
        assert_eq!(
            TransactionDatabase::parse("", "t").unwrap_err(),
            ParseError::EmptyDatabase
        );
    }

    #[test]
    fn parse_error_line_numbers_count_blank_lines() {
        let err = TransactionDatabase::parse("1\n\n\n-4\n", "t").unwrap_err();
        assert_eq!(
            err,
            ParseError::InvalidToken {
                line: 4,
                token: "-4".into()
            }
        );
    }

    #[test]
    fn support_counts_supersets() {
        let db = TransactionDatabase::parse("1 2 3\n1 2\n1 2 3\n", "t").unwrap();
        assert_eq!(db.support(&[]), 3);
        assert_eq!(db.support(&[1]), 3);
        assert_eq!(db.support(&[3]), 2);
        assert_eq!(db.support(&[1, 3]), 2);
        assert_eq!(db.support(&[3, 1, 1]), 2); // order and duplicates are irrelevant
        assert_eq!(db.support(&[4]), 0);
    }

    #[test]
    fn singleton_supports_match_scan() {
        let db = TransactionDatabase::parse("1 2\n2 3\n2\n", "t").unwrap();
        assert_eq!(db.singleton_support(1), 1);
        assert_eq!(db.singleton_support(2), 3);
        assert_eq!(db.singleton_support(3), 1);
        assert_eq!(db.singleton_support(9), 0);
        assert_eq!(db.max_singleton_support(), 3);
        assert_eq!(db.max_singleton_support_pct(), 100.0);
    }

    #[test]
    fn elemental_stats_small() {
        let db = TransactionDatabase::parse("1 2 3\n1 2\n1 2 3\n", "t").unwrap();
        let s = elemental_stats(&db);
        assert_eq!(s.transaction_count, 3);
        assert_eq!(s.alphabet_size, 3);
        assert!((s.mean_transaction_len - 8.0 / 3.0).abs() < 1e-12);
        assert_eq!(s.max_transaction_len, 3);
        assert!((s.ones_fraction_pct - 800.0 / 9.0).abs() < 1e-12);
        assert_eq!(s.max_singleton_support_pct, 100.0);
    }

    #[test]
    fn round_trip_text() {
        let text = "1 2 3\n1 2\n4\n";
        let db = TransactionDatabase::parse(text, "t").unwrap();
        assert_eq!(db.to_text(), text);
        let again = TransactionDatabase::parse(&db.to_text(), "t").unwrap();
        assert_eq!(again, db);
    }
}
