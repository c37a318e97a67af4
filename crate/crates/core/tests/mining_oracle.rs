//! Randomized equivalence against brute-force powerset oracles.
//!
//! Every case draws a small random database and threshold, then checks
//! the miner and both border extractors field-for-field against
//! first-principles enumeration.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tdprof_core::{mine_frequent, negative_border, positive_border, Itemset};
use tdprof_testkit as kit;

const CASES: usize = 250;

#[test]
fn mining_and_borders_match_powerset_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD5A7);
    for case in 0..CASES {
        let db = kit::random_database(&mut rng);
        let minsup = kit::random_threshold(&mut rng, &db);
        let fi = mine_frequent(&db, minsup).unwrap();
        let mined: BTreeMap<Itemset, u64> = fi.iter().map(|(k, v)| (k.clone(), v)).collect();
        let oracle = kit::oracle_frequent_itemsets(&db, minsup);
        assert_eq!(mined, oracle, "case {case}: frequent itemsets diverge");

        let pb: BTreeSet<Itemset> = positive_border(&fi).iter().cloned().collect();
        assert_eq!(
            pb,
            kit::oracle_positive_border(&oracle),
            "case {case}: positive border diverges"
        );

        let nb: BTreeSet<Itemset> = negative_border(&db, &fi).iter().cloned().collect();
        assert_eq!(
            nb,
            kit::oracle_negative_border(&db, &oracle),
            "case {case}: negative border diverges"
        );
    }
}

#[test]
fn closure_and_border_properties_hold_on_every_instance() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC10);
    for case in 0..CASES {
        let db = kit::random_database(&mut rng);
        let minsup = kit::random_threshold(&mut rng, &db);
        let fi = mine_frequent(&db, minsup).unwrap();
        let pb = positive_border(&fi);
        let nb = negative_border(&db, &fi);

        // Downward closure with exact supports.
        for (itemset, sup) in fi.iter() {
            assert!(sup >= minsup, "case {case}");
            assert_eq!(sup, db.support(itemset), "case {case}");
            for subset in kit::proper_non_empty_subsets(itemset) {
                assert!(
                    fi.contains(&subset),
                    "case {case}: closure violated for {subset:?} under {itemset:?}"
                );
            }
        }

        // Border membership relations.
        for m in pb.iter() {
            assert!(fi.contains(m), "case {case}: Bd+ member outside FI");
        }
        for m in nb.iter() {
            assert!(!fi.contains(m), "case {case}: Bd- member inside FI");
        }
        assert!(pb.len() <= fi.len(), "case {case}");

        // Antichain property for both borders.
        for border in [&pb, &nb] {
            let members: Vec<&Itemset> = border.iter().collect();
            for a in &members {
                for b in &members {
                    if a != b {
                        assert!(
                            !a.iter().all(|i| b.binary_search(i).is_ok()),
                            "case {case}: {a:?} contained in {b:?}"
                        );
                    }
                }
            }
        }

        // FI is exactly the union of downward closures of Bd+ members.
        let mut reconstructed: BTreeSet<Itemset> = BTreeSet::new();
        for m in pb.iter() {
            reconstructed.extend(kit::non_empty_subsets(m));
        }
        let stored: BTreeSet<Itemset> = fi.iter().map(|(k, _)| k.clone()).collect();
        assert_eq!(
            reconstructed, stored,
            "case {case}: Bd+ closures do not rebuild FI"
        );
    }
}

#[test]
fn support_matches_rescan_oracle_on_arbitrary_itemsets() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    for _ in 0..CASES {
        let db = kit::random_database(&mut rng);
        for itemset in kit::powerset_of_alphabet(&db).iter().step_by(7) {
            assert_eq!(db.support(itemset), kit::oracle_support(&db, itemset));
        }
    }
}

#[test]
fn filtering_a_collection_equals_remining() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF11);
    for _ in 0..100 {
        let db = kit::random_database(&mut rng);
        let low = kit::random_threshold(&mut rng, &db);
        let fi = mine_frequent(&db, low).unwrap();
        for high in [low, low + 1, db.transaction_count()] {
            if high > db.transaction_count() {
                continue;
            }
            let filtered: BTreeMap<Itemset, u64> =
                fi.filter_at(high).iter().map(|(k, v)| (k.clone(), v)).collect();
            let fresh: BTreeMap<Itemset, u64> = mine_frequent(&db, high)
                .unwrap()
                .iter()
                .map(|(k, v)| (k.clone(), v))
                .collect();
            assert_eq!(filtered, fresh);
        }
    }
}
