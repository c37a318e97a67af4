//! Algorithms for characterizing transactional databases.
//!
//! The crate is split along the processing pipeline:
//!
//! * [`corpus`]: the transaction file format, the immutable in-memory
//!   database and its elemental statistics.
//! * [`miner`]: exact frequent-itemset mining plus the positive border
//!   (maximal frequent itemsets) and negative border (minimal infrequent
//!   itemsets).
//! * [`metrics`]: per-database metrics built on top of the miner: support
//!   sweeps over a threshold schedule, curve areas, co-occurrence density
//!   and itemset entropy.
//! * [`analysis`]: corpus-level tooling: robust feature scaling, k-means
//!   with restarts, a small decision-tree learner, and representative
//!   benchmark construction and auditing.
//!
//! Everything here is deterministic: identical inputs (including seeds)
//! produce identical outputs, bit for bit. The crate is `no_std` and only
//! requires `alloc`; file handling lives in the companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod corpus;
pub mod metrics;
pub mod miner;

pub use analysis::{
    check_representative, fit_tree, kmeans, minimum_representative_benchmarks, robust_scale,
    AnalysisError, Benchmark, ClusterModel, DecisionTree, DenseMatrix, FeatureMatrix, MrbResult,
    ScaledMatrix, TreeNode, Verdict,
};
pub use corpus::{elemental_stats, ElementalStats, ItemId, Itemset, ParseError, TransactionDatabase};
pub use metrics::{
    area_under_curve, entropy_k, entropy_k_capped, gaifman_density, metric_vector,
    minsup_count_for, sweep, sweep_metrics, MetricVector, MetricsError, MetricsOptions,
    Normalization, SupportSchedule, SweepCurves, SweepLevel, SweepMetrics,
    DEFAULT_COMBINATION_CAP,
};
pub use miner::{
    mine_frequent, mine_frequent_capped, negative_border, positive_border, BorderKind, BorderSet,
    FrequentItemsetCollection, MineError, DEFAULT_ITEMSET_CAP,
};
