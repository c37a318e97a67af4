//! Corpus-level analysis: feature scaling, clustering, cluster
//! explanation, and representative-benchmark computation.
//!
//! The pipeline is robust_scale -> kmeans -> fit_tree. Scaling and
//! clustering work on the same dense matrix; the tree is deliberately
//! trained on unscaled values so its thresholds are readable in metric
//! units. Benchmarks are audited as hitting sets over the non-empty
//! clusters.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("feature matrix has no rows")]
    EmptyMatrix,
    #[error("feature matrix is not rectangular")]
    RaggedMatrix,
    #[error("duplicate dataset id {0}")]
    DuplicateId(u32),
    #[error("column {column:?} has no observed values")]
    AllMissingColumn { column: String },
    #[error("cluster count {k} invalid for {rows} rows")]
    InvalidK { k: usize, rows: usize },
    #[error("at least one restart required")]
    NoRestarts,
    #[error("label count {labels} does not match row count {rows}")]
    LabelMismatch { labels: usize, rows: usize },
    #[error("benchmark {study:?} references unknown dataset id {id}")]
    UnknownId { study: String, id: u32 },
    #[error("minimum benchmark count exceeds u64 range")]
    CountOverflow,
}

/// Rectangular matrix of metric values, one row per database, with
/// explicit missing cells.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    ids: Vec<u32>,
    names: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
}

impl FeatureMatrix {
    pub fn new(
        ids: Vec<u32>,
        names: Vec<String>,
        columns: Vec<String>,
        rows: Vec<Vec<Option<f64>>>,
    ) -> Result<Self, AnalysisError> {
        if ids.len() != rows.len() || names.len() != rows.len() {
            return Err(AnalysisError::RaggedMatrix);
        }
        if rows.iter().any(|r| r.len() != columns.len()) {
            return Err(AnalysisError::RaggedMatrix);
        }
        let mut seen = BTreeSet::new();
        for &id in &ids {
            if !seen.insert(id) {
                return Err(AnalysisError::DuplicateId(id));
            }
        }
        Ok(Self {
            ids,
            names,
            columns,
            rows,
        })
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Option<f64>>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Fills missing cells with their column median (over observed
    /// values) and reports which `(row, column)` cells were imputed.
    pub fn impute_median(&self) -> Result<(DenseMatrix, Vec<(usize, usize)>), AnalysisError> {
        if self.rows.is_empty() {
            return Err(AnalysisError::EmptyMatrix);
        }
        let mut medians = Vec::with_capacity(self.columns.len());
        for (c, column) in self.columns.iter().enumerate() {
            let mut observed: Vec<f64> = self.rows.iter().filter_map(|r| r[c]).collect();
            if observed.is_empty() {
                return Err(AnalysisError::AllMissingColumn {
                    column: column.clone(),
                });
            }
            observed.sort_by(f64::total_cmp);
            medians.push(quantile_sorted(&observed, 0.5));
        }
        let mut imputed = Vec::new();
        let rows: Vec<Vec<f64>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(|(c, cell)| {
                        cell.unwrap_or_else(|| {
                            imputed.push((r, c));
                            medians[c]
                        })
                    })
                    .collect()
            })
            .collect();
        Ok((
            DenseMatrix {
                ids: self.ids.clone(),
                names: self.names.clone(),
                columns: self.columns.clone(),
                rows,
            },
            imputed,
        ))
    }
}

/// Fully observed matrix, same row/column bookkeeping as
/// [`FeatureMatrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    ids: Vec<u32>,
    names: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl DenseMatrix {
    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }
}

/// Result of [`robust_scale`]: the scaled matrix plus the cells that were
/// median-imputed before scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledMatrix {
    pub data: DenseMatrix,
    pub imputed: Vec<(usize, usize)>,
}

/// Centers each column at its median and divides by its interquartile
/// range (linear-interpolation quantiles). Columns with zero IQR become
/// all-zero. Missing cells are imputed with the column median first,
/// which scales them to exactly 0.
pub fn robust_scale(m: &FeatureMatrix) -> Result<ScaledMatrix, AnalysisError> {
    let (dense, imputed) = m.impute_median()?;
    let mut rows = dense.rows.clone();
    for c in 0..dense.columns.len() {
        let mut values: Vec<f64> = rows.iter().map(|r| r[c]).collect();
        values.sort_by(f64::total_cmp);
        let median = quantile_sorted(&values, 0.5);
        let iqr = quantile_sorted(&values, 0.75) - quantile_sorted(&values, 0.25);
        for row in rows.iter_mut() {
            row[c] = if iqr == 0.0 {
                0.0
            } else {
                (row[c] - median) / iqr
            };
        }
    }
    Ok(ScaledMatrix {
        data: DenseMatrix {
            ids: dense.ids,
            names: dense.names,
            columns: dense.columns,
            rows,
        },
        imputed,
    })
}

/// Quantile of a non-empty ascending slice by linear interpolation
/// between order statistics at positions `q · (n-1)`.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos as usize;
    let hi = lo + 1;
    if hi >= n {
        return sorted[n - 1];
    }
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// A fitted k-means model over one matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    k: usize,
    ids: Vec<u32>,
    names: Vec<String>,
    assignment: Vec<u32>,
    centroids: Vec<Vec<f64>>,
    inertia: f64,
    seed: u64,
}

impl ClusterModel {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Labels aligned with `ids()`.
    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    pub fn centroids(&self) -> &[Vec<f64>] {
        &self.centroids
    }

    pub fn inertia(&self) -> f64 {
        self.inertia
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn cluster_of(&self, id: u32) -> Option<u32> {
        self.ids
            .iter()
            .position(|&i| i == id)
            .map(|p| self.assignment[p])
    }

    /// Member ids of one cluster, ascending.
    pub fn members_of(&self, cluster: u32) -> Vec<u32> {
        let mut members: Vec<u32> = self
            .ids
            .iter()
            .zip(&self.assignment)
            .filter(|&(_, &a)| a == cluster)
            .map(|(&id, _)| id)
            .collect();
        members.sort_unstable();
        members
    }

    /// Labels of clusters with at least one member, ascending.
    pub fn non_empty_clusters(&self) -> Vec<u32> {
        let mut labels: Vec<u32> = self.assignment.to_owned();
        labels.sort_unstable();
        labels.dedup();
        labels
    }

    /// Rebuilds a model from a stored assignment, for audits against a
    /// clustering computed elsewhere. Carries no centroids and zero
    /// inertia; only membership queries are meaningful on the result.
    pub fn from_assignment(
        ids: Vec<u32>,
        names: Vec<String>,
        assignment: Vec<u32>,
        k: usize,
        seed: u64,
    ) -> Result<Self, AnalysisError> {
        if ids.is_empty() {
            return Err(AnalysisError::EmptyMatrix);
        }
        if ids.len() != names.len() {
            return Err(AnalysisError::RaggedMatrix);
        }
        if assignment.len() != ids.len() {
            return Err(AnalysisError::LabelMismatch {
                labels: assignment.len(),
                rows: ids.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for &id in &ids {
            if !seen.insert(id) {
                return Err(AnalysisError::DuplicateId(id));
            }
        }
        if assignment.iter().any(|&a| a as usize >= k) {
            return Err(AnalysisError::InvalidK {
                k,
                rows: ids.len(),
            });
        }
        Ok(ClusterModel {
            k,
            ids,
            names,
            assignment,
            centroids: Vec::new(),
            inertia: 0.0,
            seed,
        })
    }
}

const MAX_LLOYD_ITERS: usize = 300;

/// Lloyd's algorithm from kmeans++ starts, best of `restarts` runs.
///
/// Each restart draws its randomness from a seed derived from `seed` and
/// the restart index, so the selected model does not depend on execution
/// order. The run with strictly lowest inertia wins; ties keep the
/// earlier restart. Point-to-centroid ties assign to the lowest cluster
/// index. A cluster left empty after an update step is re-seeded at the
/// point farthest from its current centroid.
pub fn kmeans(
    data: &DenseMatrix,
    k: usize,
    restarts: usize,
    seed: u64,
) -> Result<ClusterModel, AnalysisError> {
    let n = data.n_rows();
    if k == 0 || k > n {
        return Err(AnalysisError::InvalidK { k, rows: n });
    }
    if restarts == 0 {
        return Err(AnalysisError::NoRestarts);
    }

    let mut best: Option<(f64, Vec<u32>, Vec<Vec<f64>>)> = None;
    for restart in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, restart as u64));
        let (assignment, centroids, inertia) = lloyd_once(data.rows(), k, &mut rng);
        let better = match &best {
            None => true,
            Some((best_inertia, _, _)) => inertia < *best_inertia,
        };
        if better {
            best = Some((inertia, assignment, centroids));
        }
    }
    let (inertia, assignment, centroids) = best.expect("restarts >= 1");
    Ok(ClusterModel {
        k,
        ids: data.ids().to_owned(),
        names: data.names().to_owned(),
        assignment,
        centroids,
        inertia,
        seed,
    })
}

/// splitmix64 over the master seed and restart index; decorrelates
/// consecutive restarts far better than seed+restart would.
fn derive_seed(seed: u64, restart: u64) -> u64 {
    let mut z = seed
        .wrapping_add(restart.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn lloyd_once(rows: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> (Vec<u32>, Vec<Vec<f64>>, f64) {
    let n = rows.len();
    let dim = rows[0].len();
    let mut centroids = kmeanspp_init(rows, k, rng);
    let mut assignment: Vec<u32> = vec![u32::MAX; n];

    for _ in 0..MAX_LLOYD_ITERS {
        let mut changed = false;
        for (i, row) in rows.iter().enumerate() {
            let a = nearest_centroid(row, &centroids);
            if assignment[i] != a {
                assignment[i] = a;
                changed = true;
            }
        }

        let mut sums = vec![vec![0.0f64; dim]; k];
        let mut counts = vec![0usize; k];
        for (row, &a) in rows.iter().zip(&assignment) {
            counts[a as usize] += 1;
            for (s, v) in sums[a as usize].iter_mut().zip(row) {
                *s += v;
            }
        }

        let mut repaired = false;
        let mut taken = vec![false; n];
        for c in 0..k {
            if counts[c] == 0 {
                let far = farthest_point(rows, &assignment, &centroids, &taken);
                taken[far] = true;
                centroids[c] = rows[far].clone();
                repaired = true;
            } else {
                for (j, s) in sums[c].iter().enumerate() {
                    centroids[c][j] = s / counts[c] as f64;
                }
            }
        }

        if !changed && !repaired {
            break;
        }
    }

    let inertia = rows
        .iter()
        .zip(&assignment)
        .map(|(row, &a)| dist2(row, &centroids[a as usize]))
        .sum();
    (assignment, centroids, inertia)
}

/// kmeans++ seeding: first center uniform, then each next center drawn
/// with probability proportional to squared distance from the closest
/// chosen center. Falls back to uniform when all distances are zero.
fn kmeanspp_init(rows: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = rows.len();
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
    centers.push(rows[rng.gen_range(0..n)].clone());
    let mut d2: Vec<f64> = rows.iter().map(|r| dist2(r, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let idx = if total > 0.0 {
            let mut r = rng.gen::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if r < w {
                    chosen = i;
                    break;
                }
                r -= w;
            }
            chosen
        } else {
            rng.gen_range(0..n)
        };
        centers.push(rows[idx].clone());
        for (i, row) in rows.iter().enumerate() {
            let d = dist2(row, centers.last().expect("just pushed"));
            if d < d2[i] {
                d2[i] = d;
            }
        }
    }
    centers
}

fn nearest_centroid(row: &[f64], centroids: &[Vec<f64>]) -> u32 {
    let mut best = 0u32;
    let mut best_d = f64::INFINITY;
    for (c, centroid) in centroids.iter().enumerate() {
        let d = dist2(row, centroid);
        if d < best_d {
            best_d = d;
            best = c as u32;
        }
    }
    best
}

/// Index of the not-yet-taken point with the largest squared distance to
/// its assigned centroid; ties keep the lowest index.
fn farthest_point(
    rows: &[Vec<f64>],
    assignment: &[u32],
    centroids: &[Vec<f64>],
    taken: &[bool],
) -> usize {
    let mut best = 0;
    let mut best_d = -1.0;
    for (i, row) in rows.iter().enumerate() {
        if taken[i] {
            continue;
        }
        let d = dist2(row, &centroids[assignment[i] as usize]);
        if d > best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Binary classification tree over raw metric values.
#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf {
        label: u32,
        count: usize,
    },
    /// `feature <= threshold` goes left.
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    root: TreeNode,
    feature_names: Vec<String>,
    accuracy_pct: f64,
}

impl DecisionTree {
    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn accuracy_pct(&self) -> f64 {
        self.accuracy_pct
    }

    pub fn predict(&self, row: &[f64]) -> u32 {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { label, .. } => return *label,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] <= *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    pub fn internal_node_count(&self) -> usize {
        fn count(node: &TreeNode) -> usize {
            match node {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + count(left) + count(right),
            }
        }
        count(&self.root)
    }

    pub fn depth(&self) -> usize {
        fn depth(node: &TreeNode) -> usize {
            match node {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + depth(left).max(depth(right)),
            }
        }
        depth(&self.root)
    }

    /// Indented text rendering; the `else` branch is the `>` side.
    pub fn render(&self) -> String {
        use core::fmt::Write;
        fn walk(node: &TreeNode, names: &[String], depth: usize, out: &mut String) {
            for _ in 0..depth {
                out.push_str("  ");
            }
            match node {
                TreeNode::Leaf { label, count } => {
                    let _ = writeln!(out, "-> cluster {label} ({count} rows)");
                }
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    let _ = writeln!(out, "{} <= {threshold:.4}", names[*feature]);
                    walk(left, names, depth + 1, out);
                    for _ in 0..depth {
                        out.push_str("  ");
                    }
                    out.push_str("else\n");
                    walk(right, names, depth + 1, out);
                }
            }
        }
        let mut out = String::new();
        walk(&self.root, &self.feature_names, 0, &mut out);
        out
    }
}

/// Greedy CART with Gini impurity and midpoint thresholds.
///
/// Splits must strictly reduce weighted impurity; among equal reductions
/// the first candidate wins (features in column order, thresholds
/// ascending), which makes the tree deterministic. `max_depth` bounds the
/// length of any root-to-leaf chain of splits; pass `usize::MAX` to grow
/// until pure.
pub fn fit_tree(
    data: &DenseMatrix,
    labels: &[u32],
    max_depth: usize,
) -> Result<DecisionTree, AnalysisError> {
    let n = data.n_rows();
    if n == 0 {
        return Err(AnalysisError::EmptyMatrix);
    }
    if labels.len() != n {
        return Err(AnalysisError::LabelMismatch {
            labels: labels.len(),
            rows: n,
        });
    }
    let indices: Vec<usize> = (0..n).collect();
    let root = grow(data.rows(), labels, &indices, 0, max_depth);
    let tree = DecisionTree {
        root,
        feature_names: data.columns().to_owned(),
        accuracy_pct: 0.0,
    };
    let correct = data
        .rows()
        .iter()
        .zip(labels)
        .filter(|(row, &label)| tree.predict(row) == label)
        .count();
    Ok(DecisionTree {
        accuracy_pct: 100.0 * correct as f64 / n as f64,
        ..tree
    })
}

fn grow(
    rows: &[Vec<f64>],
    labels: &[u32],
    indices: &[usize],
    depth: usize,
    max_depth: usize,
) -> TreeNode {
    let node_gini = gini(labels, indices);
    if node_gini == 0.0 || depth >= max_depth {
        return leaf(labels, indices);
    }
    let Some((feature, threshold)) = best_split(rows, labels, indices, node_gini) else {
        return leaf(labels, indices);
    };
    let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
        .iter()
        .partition(|&&i| rows[i][feature] <= threshold);
    TreeNode::Split {
        feature,
        threshold,
        left: Box::new(grow(rows, labels, &left_idx, depth + 1, max_depth)),
        right: Box::new(grow(rows, labels, &right_idx, depth + 1, max_depth)),
    }
}

/// Best (feature, midpoint threshold) by weighted Gini, or `None` when no
/// split strictly improves on the parent.
fn best_split(
    rows: &[Vec<f64>],
    labels: &[u32],
    indices: &[usize],
    node_gini: f64,
) -> Option<(usize, f64)> {
    let n = indices.len();
    if n < 2 {
        return None;
    }
    let n_features = rows[indices[0]].len();
    let mut best: Option<(f64, usize, f64)> = None;

    for feature in 0..n_features {
        let mut order: Vec<usize> = indices.to_owned();
        order.sort_by(|&a, &b| {
            rows[a][feature]
                .total_cmp(&rows[b][feature])
                .then(a.cmp(&b))
        });

        let mut left_counts: BTreeMap<u32, usize> = BTreeMap::new();
        let mut right_counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &i in &order {
            *right_counts.entry(labels[i]).or_insert(0) += 1;
        }

        for cut in 1..n {
            let moved = labels[order[cut - 1]];
            *left_counts.entry(moved).or_insert(0) += 1;
            if let Some(c) = right_counts.get_mut(&moved) {
                *c -= 1;
                if *c == 0 {
                    right_counts.remove(&moved);
                }
            }
            let lo = rows[order[cut - 1]][feature];
            let hi = rows[order[cut]][feature];
            if lo == hi {
                continue; // no threshold separates equal values
            }
            let g_left = gini_of_counts(&left_counts, cut);
            let g_right = gini_of_counts(&right_counts, n - cut);
            let weighted = (cut as f64 * g_left + (n - cut) as f64 * g_right) / n as f64;
            let improves = weighted + 1e-12 < node_gini;
            let beats_best = match best {
                None => true,
                Some((best_w, _, _)) => weighted + 1e-12 < best_w,
            };
            if improves && beats_best {
                best = Some((weighted, feature, (lo + hi) / 2.0));
            }
        }
    }
    best.map(|(_, feature, threshold)| (feature, threshold))
}

fn gini(labels: &[u32], indices: &[usize]) -> f64 {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &i in indices {
        *counts.entry(labels[i]).or_insert(0) += 1;
    }
    gini_of_counts(&counts, indices.len())
}

fn gini_of_counts(counts: &BTreeMap<u32, usize>, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    1.0 - counts
        .values()
        .map(|&c| {
            let p = c as f64 / t;
            p * p
        })
        .sum::<f64>()
}

/// Majority-label leaf; ties go to the smallest label.
fn leaf(labels: &[u32], indices: &[usize]) -> TreeNode {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &i in indices {
        *counts.entry(labels[i]).or_insert(0) += 1;
    }
    let (label, _) = counts
        .iter()
        .fold(None::<(u32, usize)>, |acc, (&l, &c)| match acc {
            Some((_, best)) if c <= best => acc,
            _ => Some((l, c)),
        })
        .expect("leaf over non-empty indices");
    TreeNode::Leaf {
        label,
        count: indices.len(),
    }
}

/// A named selection of dataset ids to audit against a clustering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Benchmark {
    pub name: String,
    pub members: BTreeSet<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub representative: bool,
    /// Non-empty cluster labels the benchmark fails to hit, ascending.
    pub missing_clusters: Vec<u32>,
}

/// A benchmark is representative iff it intersects every non-empty
/// cluster of the model.
pub fn check_representative(
    benchmark: &Benchmark,
    model: &ClusterModel,
) -> Result<Verdict, AnalysisError> {
    let mut covered: BTreeSet<u32> = BTreeSet::new();
    for &id in &benchmark.members {
        match model.cluster_of(id) {
            Some(c) => {
                covered.insert(c);
            }
            None => {
                return Err(AnalysisError::UnknownId {
                    study: benchmark.name.clone(),
                    id,
                })
            }
        }
    }
    let missing_clusters: Vec<u32> = model
        .non_empty_clusters()
        .into_iter()
        .filter(|c| !covered.contains(c))
        .collect();
    Ok(Verdict {
        representative: missing_clusters.is_empty(),
        missing_clusters,
    })
}

/// Minimum representative benchmarks of one model.
#[derive(Debug, Clone, PartialEq)]
pub struct MrbResult {
    /// Size of every minimum representative benchmark: the number of
    /// non-empty clusters, since clusters partition the corpus.
    pub minimum_size: usize,
    /// Total number of minimum benchmarks: the product of cluster sizes.
    pub total_count: u64,
    /// Up to `limit` minimum benchmarks, ids ascending within each, in
    /// cross-product order over (cluster, member) with both ascending.
    pub examples: Vec<Vec<u32>>,
}

/// Enumerates minimum hitting sets over the clusters: one member from
/// each non-empty cluster.
pub fn minimum_representative_benchmarks(
    model: &ClusterModel,
    limit: usize,
) -> Result<MrbResult, AnalysisError> {
    let clusters: Vec<Vec<u32>> = model
        .non_empty_clusters()
        .into_iter()
        .map(|c| model.members_of(c))
        .collect();
    let minimum_size = clusters.len();
    let mut total_count: u64 = 1;
    for members in &clusters {
        total_count = total_count
            .checked_mul(members.len() as u64)
            .ok_or(AnalysisError::CountOverflow)?;
    }

    let mut examples = Vec::new();
    let mut odometer = vec![0usize; minimum_size];
    'enumerate: while examples.len() < limit {
        let mut example: Vec<u32> = odometer
            .iter()
            .zip(&clusters)
            .map(|(&pick, members)| members[pick])
            .collect();
        example.sort_unstable();
        examples.push(example);
        // Advance the least-significant position (last cluster) first.
        let mut pos = minimum_size;
        loop {
            if pos == 0 {
                break 'enumerate;
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < clusters[pos].len() {
                break;
            }
            odometer[pos] = 0;
        }
    }
    Ok(MrbResult {
        minimum_size,
        total_count,
        examples,
    })
}
