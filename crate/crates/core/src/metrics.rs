//! Per-database metrics: co-occurrence graph density, itemset entropy,
//! and the support-sweep curve metrics.
//!
//! The sweep metrics integrate per-level curves (itemset counts, mean
//! supports, mean lengths, border statistics) over an ascending schedule
//! of support percentages using the trapezoidal rule. Cardinality curves
//! can be rescaled to percent of their own maximum before integration,
//! which makes the resulting areas comparable across databases of very
//! different itemset counts; mean-support and mean-length areas are never
//! rescaled.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::corpus::{elemental_stats, ElementalStats, ItemId, TransactionDatabase};
use crate::miner::{
    mine_frequent_capped, negative_border, positive_border, MineError, DEFAULT_ITEMSET_CAP,
};

/// Default cap on enumerated k-item combinations for [`entropy_k`].
pub const DEFAULT_COMBINATION_CAP: u64 = 2_000_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    /// The metric has no defined value on this input.
    #[error("{metric} undefined: {reason}")]
    Undefined { metric: String, reason: String },
    #[error("invalid support schedule: {0}")]
    InvalidSchedule(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    /// Mining failed while sweeping; carries the offending level.
    #[error("mining failed at support level {level_pct}%")]
    MineAtLevel {
        level_pct: f64,
        #[source]
        source: MineError,
    },
}

fn undefined(metric: &str, reason: impl Into<String>) -> MetricsError {
    MetricsError::Undefined {
        metric: String::from(metric),
        reason: reason.into(),
    }
}

/// Ascending support percentages at which sweep metrics are evaluated.
///
/// A valid schedule has at least two levels (a single level spans zero
/// width, so every area metric would degenerate), all in `(0, 100]` and
/// strictly ascending. Whether the top level fits a concrete database
/// (level two must not exceed its maximum singleton support) is checked
/// separately by [`SupportSchedule::validate_for`].
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSchedule {
    levels: Vec<f64>,
}

impl SupportSchedule {
    pub fn new(levels: Vec<f64>) -> Result<Self, MetricsError> {
        if levels.len() < 2 {
            return Err(MetricsError::InvalidSchedule(String::from(
                "fewer than two support levels",
            )));
        }
        for &l in &levels {
            if !l.is_finite() || l <= 0.0 || l > 100.0 {
                return Err(MetricsError::InvalidSchedule(format!(
                    "level {l} outside (0, 100]"
                )));
            }
        }
        for w in levels.windows(2) {
            if !(w[1] > w[0]) {
                return Err(MetricsError::InvalidSchedule(format!(
                    "levels not strictly ascending at {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { levels })
    }

    /// Equidistant levels `start, start+step, …` up to the largest level
    /// not exceeding `max_pct`. Levels are snapped to a 1e-9 grid so that
    /// accumulated floating-point noise does not leak into reports.
    pub fn from_step(start: f64, step: f64, max_pct: f64) -> Result<Self, MetricsError> {
        if !(start > 0.0) || !(step > 0.0) || !start.is_finite() || !step.is_finite() {
            return Err(MetricsError::InvalidSchedule(format!(
                "start {start} and step {step} must be positive"
            )));
        }
        let eps = 1e-9 * if max_pct > 1.0 { max_pct } else { 1.0 };
        let mut levels = Vec::new();
        let mut i = 0u32;
        loop {
            let level = snap_level(start + step * f64::from(i));
            if level > max_pct + eps {
                break;
            }
            levels.push(level);
            i += 1;
            if i > 100_000 {
                return Err(MetricsError::InvalidSchedule(String::from(
                    "step too small, schedule would be enormous",
                )));
            }
        }
        Self::new(levels)
    }

    /// Automatic schedule for a database with the given maximum singleton
    /// support: multiples of 10% up to that maximum, falling back decade
    /// by decade (1%, 0.1%, …) until at least two levels fit.
    pub fn auto(mss_pct: f64) -> Result<Self, MetricsError> {
        if !(mss_pct > 0.0) || !mss_pct.is_finite() {
            return Err(MetricsError::InvalidSchedule(format!(
                "maximum singleton support {mss_pct} must be positive"
            )));
        }
        let eps = 1e-9 * if mss_pct > 1.0 { mss_pct } else { 1.0 };
        let mut step = 10.0;
        while 2.0 * step > mss_pct + eps {
            step /= 10.0;
            if step < 1e-6 {
                return Err(MetricsError::InvalidSchedule(format!(
                    "maximum singleton support {mss_pct}% too small for an automatic schedule"
                )));
            }
        }
        Self::from_step(step, step, mss_pct)
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn first(&self) -> f64 {
        self.levels[0]
    }

    pub fn last(&self) -> f64 {
        *self.levels.last().expect("schedule has >= 2 levels")
    }

    /// Width of the integration interval, `s_m - s_1`.
    pub fn width(&self) -> f64 {
        self.last() - self.first()
    }

    /// Checks that the top level does not exceed the database's maximum
    /// singleton support (beyond which no itemset is frequent).
    pub fn validate_for(&self, db: &TransactionDatabase) -> Result<(), MetricsError> {
        let mss = db.max_singleton_support_pct();
        let eps = 1e-9 * if mss > 1.0 { mss } else { 1.0 };
        if self.last() > mss + eps {
            return Err(MetricsError::InvalidSchedule(format!(
                "top level {}% exceeds maximum singleton support {mss}%",
                self.last()
            )));
        }
        Ok(())
    }
}

fn snap_level(x: f64) -> f64 {
    libm::round(x * 1e9) / 1e9
}

/// Converts a support percentage to an absolute transaction count:
/// `ceiling(level · DS / 100)`, clamped to at least 1.
///
/// Products that land within 1e-9 (relative) of an integer are treated as
/// that integer before the ceiling, so a level derived from an exact
/// count (for example the maximum singleton support) converts back to the
/// same count despite floating-point noise.
pub fn minsup_count_for(level_pct: f64, transaction_count: u64) -> u64 {
    let raw = level_pct * transaction_count as f64 / 100.0;
    let nearest = libm::round(raw);
    let eps = 1e-9 * if raw > 1.0 { raw } else { 1.0 };
    let count = if libm::fabs(raw - nearest) <= eps {
        nearest
    } else {
        libm::ceil(raw)
    };
    if count < 1.0 {
        1
    } else {
        count as u64
    }
}

/// Density of the co-occurrence graph, in percent.
///
/// Two distinct items are adjacent iff some transaction contains both;
/// the result is `100 · |E| / C(AS, 2)`.
pub fn gaifman_density(db: &TransactionDatabase) -> Result<f64, MetricsError> {
    let alphabet_size = db.alphabet_size();
    if alphabet_size < 2 {
        return Err(undefined(
            "ggd",
            "alphabet has fewer than two items, the co-occurrence graph has no possible edges",
        ));
    }
    let mut edges: BTreeSet<(ItemId, ItemId)> = BTreeSet::new();
    for t in db.transactions() {
        for (i, &a) in t.iter().enumerate() {
            for &b in &t[i + 1..] {
                edges.insert((a, b));
            }
        }
    }
    let possible = alphabet_size as f64 * (alphabet_size - 1) as f64 / 2.0;
    Ok(100.0 * edges.len() as f64 / possible)
}

/// Shannon entropy, in bits, of the support distribution over all
/// k-itemsets that occur at least once, using the default combination
/// budget.
pub fn entropy_k(db: &TransactionDatabase, k: usize) -> Result<f64, MetricsError> {
    entropy_k_capped(db, k, DEFAULT_COMBINATION_CAP)
}

/// [`entropy_k`] with an explicit budget on enumerated combinations.
///
/// Support counts come from expanding each transaction into its k-item
/// combinations; the budget bounds that total expansion across the whole
/// database, so a pathologically wide database fails cleanly instead of
/// running without bound.
pub fn entropy_k_capped(
    db: &TransactionDatabase,
    k: usize,
    combination_cap: u64,
) -> Result<f64, MetricsError> {
    let metric = format!("h{k}");
    if k == 0 {
        return Err(undefined(&metric, "itemset size k must be positive"));
    }
    if k == 1 {
        let counts = db.singleton_supports().values().copied();
        return entropy_of_counts(counts).ok_or_else(|| unreachable_empty(&metric));
    }

    let mut budget = combination_cap;
    let mut counts: BTreeMap<Vec<ItemId>, u64> = BTreeMap::new();
    let mut combo: Vec<ItemId> = Vec::with_capacity(k);
    for t in db.transactions() {
        if t.len() < k {
            continue;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if budget == 0 {
                return Err(undefined(
                    &metric,
                    format!("combination budget of {combination_cap} exhausted"),
                ));
            }
            budget -= 1;
            combo.clear();
            combo.extend(idx.iter().map(|&i| t[i]));
            *counts.entry(combo.clone()).or_insert(0) += 1;
            if !advance_combination(&mut idx, t.len()) {
                break;
            }
        }
    }
    if counts.is_empty() {
        return Err(undefined(
            &metric,
            format!("no {k}-itemset occurs in any transaction"),
        ));
    }
    Ok(entropy_of_counts(counts.values().copied()).expect("non-empty counts"))
}

fn unreachable_empty(metric: &str) -> MetricsError {
    // Databases are never empty, so singleton counts always exist.
    undefined(metric, "database has no items")
}

/// Advances `idx` to the next k-combination of `0..n` in lexicographic
/// order; returns false after the last one.
fn advance_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - (k - i) {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `H = log2(T) - (1/T)·Σ c·log2(c)` over positive counts summing to T.
fn entropy_of_counts(counts: impl Iterator<Item = u64>) -> Option<f64> {
    let mut total = 0u64;
    let mut weighted = 0.0f64;
    for c in counts {
        total += c;
        let cf = c as f64;
        weighted += cf * libm::log2(cf);
    }
    if total == 0 {
        return None;
    }
    let tf = total as f64;
    Some(libm::log2(tf) - weighted / tf)
}

/// Trapezoidal-rule area under a piecewise-linear curve given by points
/// with strictly ascending abscissas.
pub fn area_under_curve(points: &[(f64, f64)]) -> Result<f64, MetricsError> {
    if points.len() < 2 {
        return Err(MetricsError::InvalidCurve(String::from(
            "fewer than two points",
        )));
    }
    let mut area = 0.0;
    for w in points.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if !(x1 > x0) {
            return Err(MetricsError::InvalidCurve(format!(
                "abscissas not strictly ascending at {x0} -> {x1}"
            )));
        }
        area += (x1 - x0) * (y0 + y1) / 2.0;
    }
    Ok(area)
}

/// Everything recorded at one support level of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepLevel {
    pub level_pct: f64,
    pub minsup_count: u64,
    pub fi_count: u64,
    /// Mean support of frequent itemsets, in percent of the transaction
    /// count; 0 when no itemset is frequent.
    pub mean_support_pct: f64,
    /// Mean length of frequent itemsets; 0 when none are frequent.
    pub mean_len: f64,
    pub pb_count: u64,
    pub pb_mean_len: f64,
    pub nb_count: Option<u64>,
    pub nb_mean_len: Option<f64>,
}

/// Per-level sweep results, ascending by level.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurves {
    levels: Vec<SweepLevel>,
}

impl SweepCurves {
    pub fn levels(&self) -> &[SweepLevel] {
        &self.levels
    }

    fn points(&self, f: impl Fn(&SweepLevel) -> f64) -> Vec<(f64, f64)> {
        self.levels.iter().map(|l| (l.level_pct, f(l))).collect()
    }
}

/// How cardinality curves are treated before integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Rescale each cardinality curve to percent of its own maximum over
    /// the schedule. The resulting area lies in `[0, 100·(s_m - s_1)]`
    /// and hits the upper bound exactly for constant curves.
    PercentOfMax,
    /// Integrate raw counts.
    Raw,
}

/// Tuning knobs for sweeps and metric assembly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsOptions {
    pub include_negative: bool,
    pub normalization: Normalization,
    /// Cap on mined itemsets per sweep, forwarded to the miner.
    pub max_itemsets: u64,
    /// Budget for pair expansion in the second-order entropy.
    pub combination_cap: u64,
}

impl Default for MetricsOptions {
    fn default() -> Self {
        Self {
            include_negative: false,
            normalization: Normalization::PercentOfMax,
            max_itemsets: DEFAULT_ITEMSET_CAP,
            combination_cap: DEFAULT_COMBINATION_CAP,
        }
    }
}

/// Mines the database along the schedule and records all per-level curve
/// fields. Negative borders are computed only when
/// `opts.include_negative` is set, since their candidate generation can
/// dwarf the mining itself on wide alphabets.
///
/// Itemsets are mined once at the lowest level; every higher level is an
/// exact support-filtered restriction of that collection, so a capacity
/// failure is always reported at the first level.
pub fn sweep(
    db: &TransactionDatabase,
    schedule: &SupportSchedule,
    opts: &MetricsOptions,
) -> Result<SweepCurves, MetricsError> {
    schedule.validate_for(db)?;
    let ds = db.transaction_count();
    let base_count = minsup_count_for(schedule.first(), ds);
    let base = mine_frequent_capped(db, base_count, opts.max_itemsets).map_err(|source| {
        MetricsError::MineAtLevel {
            level_pct: schedule.first(),
            source,
        }
    })?;

    let mut levels = Vec::with_capacity(schedule.levels().len());
    for &level_pct in schedule.levels() {
        let minsup_count = minsup_count_for(level_pct, ds);
        let fi = base.filter_at(minsup_count);
        let fi_count = fi.len();
        let (mean_support_pct, mean_len) = if fi_count == 0 {
            (0.0, 0.0)
        } else {
            (
                100.0 * fi.total_support() as f64 / (fi_count as f64 * ds as f64),
                fi.total_len() as f64 / fi_count as f64,
            )
        };
        let pb = positive_border(&fi);
        let (nb_count, nb_mean_len) = if opts.include_negative {
            let nb = negative_border(db, &fi);
            (Some(nb.len()), Some(nb.mean_len()))
        } else {
            (None, None)
        };
        levels.push(SweepLevel {
            level_pct,
            minsup_count,
            fi_count,
            mean_support_pct,
            mean_len,
            pb_count: pb.len(),
            pb_mean_len: pb.mean_len(),
            nb_count,
            nb_mean_len,
        });
    }
    Ok(SweepCurves { levels })
}

/// The seven curve areas of a sweep.
///
/// `fi_count_area`, `pb_count_area` and `nb_count_area` integrate the
/// cardinality curves under the chosen normalization; the mean-support
/// area and the three mean-length areas are always raw. Negative-border
/// areas are `None` if the sweep skipped negative borders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepMetrics {
    pub fi_count_area: f64,
    pub mean_support_area: f64,
    pub fi_len_area: f64,
    pub pb_count_area: f64,
    pub pb_len_area: f64,
    pub nb_count_area: Option<f64>,
    pub nb_len_area: Option<f64>,
}

/// Integrates sweep curves into the area metrics.
///
/// Every level must have at least one frequent itemset, otherwise the
/// mean-support and mean-length curves are undefined at that level; with
/// a schedule capped at the maximum singleton support this always holds.
pub fn sweep_metrics(
    curves: &SweepCurves,
    normalization: Normalization,
) -> Result<SweepMetrics, MetricsError> {
    for l in curves.levels() {
        if l.fi_count == 0 {
            return Err(undefined(
                "gamma_s",
                format!("no frequent itemsets at support level {}%", l.level_pct),
            ));
        }
    }

    let fi_count_area = cardinality_area(&curves.points(|l| l.fi_count as f64), normalization)?;
    let pb_count_area = cardinality_area(&curves.points(|l| l.pb_count as f64), normalization)?;
    let mean_support_area = area_under_curve(&curves.points(|l| l.mean_support_pct))?;
    let fi_len_area = area_under_curve(&curves.points(|l| l.mean_len))?;
    let pb_len_area = area_under_curve(&curves.points(|l| l.pb_mean_len))?;

    let all_nb = curves.levels().iter().all(|l| l.nb_count.is_some());
    let (nb_count_area, nb_len_area) = if all_nb {
        let nb_counts = curves.points(|l| l.nb_count.expect("checked") as f64);
        let nb_lens = curves.points(|l| l.nb_mean_len.expect("checked"));
        (
            Some(cardinality_area(&nb_counts, normalization)?),
            Some(area_under_curve(&nb_lens)?),
        )
    } else {
        (None, None)
    };

    Ok(SweepMetrics {
        fi_count_area,
        mean_support_area,
        fi_len_area,
        pb_count_area,
        pb_len_area,
        nb_count_area,
        nb_len_area,
    })
}

fn cardinality_area(
    points: &[(f64, f64)],
    normalization: Normalization,
) -> Result<f64, MetricsError> {
    match normalization {
        Normalization::Raw => area_under_curve(points),
        Normalization::PercentOfMax => {
            let max = points.iter().map(|&(_, y)| y).fold(0.0f64, f64::max);
            if max == 0.0 {
                // An all-zero curve (possible for borders) has zero area
                // under either convention.
                return area_under_curve(points);
            }
            let scaled: Vec<(f64, f64)> =
                points.iter().map(|&(x, y)| (x, 100.0 * y / max)).collect();
            area_under_curve(&scaled)
        }
    }
}

/// The full metric record of one database.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricVector {
    pub elemental: ElementalStats,
    pub gaifman_density_pct: f64,
    pub entropy_h1: f64,
    /// `None` when the pair expansion exceeded its budget or no pair
    /// occurs at all.
    pub entropy_h2: Option<f64>,
    pub sweep: SweepMetrics,
    pub schedule: SupportSchedule,
    pub curves: SweepCurves,
}

/// Computes every metric of one database over one schedule.
///
/// Hard failures (undefined graph density, an invalid schedule, a mining
/// capacity overrun) propagate as errors; a failed second-order entropy
/// alone degrades to `entropy_h2 = None` because it is routinely
/// unobtainable on very wide databases.
pub fn metric_vector(
    db: &TransactionDatabase,
    schedule: &SupportSchedule,
    opts: &MetricsOptions,
) -> Result<MetricVector, MetricsError> {
    let elemental = elemental_stats(db);
    let gaifman_density_pct = gaifman_density(db)?;
    let entropy_h1 = entropy_k_capped(db, 1, opts.combination_cap)?;
    let entropy_h2 = entropy_k_capped(db, 2, opts.combination_cap).ok();
    let curves = sweep(db, schedule, opts)?;
    let sweep = sweep_metrics(&curves, opts.normalization)?;
    Ok(MetricVector {
        elemental,
        gaifman_density_pct,
        entropy_h1,
        entropy_h2,
        sweep,
        schedule: schedule.clone(),
        curves,
    })
}
