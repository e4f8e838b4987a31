//! Property tests over randomized records, datasets, and queries.

use proptest::prelude::*;

use synth_audit::attack::compute_auc;
use synth_audit::data::{AttributeKind, Cell, Dataset, Record, Schema};
use synth_audit::encoding::{
    encode, minkowski_mixed_distance, mixed_cosine_distance, NormalizationStats,
};
use synth_audit::query::{answer_queries, answer_queries_naive, sample_queries};

/// Fixed mixed schema: two categoricals (3 and 4 values) and two continuous.
fn mixed_schema() -> Schema {
    Schema::new(vec![
        (
            "c0".into(),
            AttributeKind::Categorical {
                values: vec!["a".into(), "b".into(), "c".into()],
            },
        ),
        (
            "c1".into(),
            AttributeKind::Categorical {
                values: vec!["w".into(), "x".into(), "y".into(), "z".into()],
            },
        ),
        (
            "x0".into(),
            AttributeKind::Continuous {
                observed_min: 0.0,
                observed_max: 10.0,
            },
        ),
        (
            "x1".into(),
            AttributeKind::Continuous {
                observed_min: -5.0,
                observed_max: 5.0,
            },
        ),
    ])
    .unwrap()
}

fn stats() -> NormalizationStats {
    NormalizationStats {
        ranges: vec![(0.0, 10.0), (-5.0, 5.0)],
    }
}

prop_compose! {
    fn arb_record()(
        c0 in 0u32..3,
        c1 in 0u32..4,
        x0 in 0.0f64..10.0,
        x1 in -5.0f64..5.0,
    ) -> Record {
        Record::new(vec![Cell::Cat(c0), Cell::Cat(c1), Cell::Cont(x0), Cell::Cont(x1)])
    }
}

proptest! {
    #[test]
    fn cosine_distance_is_bounded_symmetric_reflexive(a in arb_record(), b in arb_record()) {
        let schema = mixed_schema();
        let ea = encode(&a, &schema, &stats()).unwrap();
        let eb = encode(&b, &schema, &stats()).unwrap();
        let d_ab = mixed_cosine_distance(&ea, &eb, &schema).unwrap();
        let d_ba = mixed_cosine_distance(&eb, &ea, &schema).unwrap();
        prop_assert!((0.0..=1.0).contains(&d_ab));
        prop_assert!((d_ab - d_ba).abs() < 1e-12);
        let d_aa = mixed_cosine_distance(&ea, &ea, &schema).unwrap();
        prop_assert!(d_aa.abs() < 1e-12);
    }

    #[test]
    fn minkowski_symmetric_reflexive_and_l1_matches_naive(
        a in arb_record(),
        b in arb_record(),
        p in 1u32..=4,
    ) {
        let schema = mixed_schema();
        let ea = encode(&a, &schema, &stats()).unwrap();
        let eb = encode(&b, &schema, &stats()).unwrap();
        let d_ab = minkowski_mixed_distance(&ea, &eb, &schema, p).unwrap();
        let d_ba = minkowski_mixed_distance(&eb, &ea, &schema, p).unwrap();
        prop_assert!(d_ab >= 0.0);
        prop_assert!((d_ab - d_ba).abs() < 1e-12);
        prop_assert!(minkowski_mixed_distance(&ea, &ea, &schema, p).unwrap().abs() < 1e-12);

        if p == 1 {
            // Per-coordinate oracle: weighted L1 over the encoded blocks.
            let l1 = |u: &[f64], v: &[f64]| -> f64 {
                u.iter().zip(v).map(|(x, y)| (x - y).abs()).sum()
            };
            let expected = 0.5 * l1(&ea.cat_block, &eb.cat_block)
                + 0.5 * l1(&ea.cont_block, &eb.cont_block);
            prop_assert!((d_ab - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn all_categorical_distance_zero_iff_identical(
        a0 in 0u32..3, a1 in 0u32..4,
        b0 in 0u32..3, b1 in 0u32..4,
    ) {
        let schema = Schema::new(vec![
            (
                "c0".into(),
                AttributeKind::Categorical {
                    values: vec!["a".into(), "b".into(), "c".into()],
                },
            ),
            (
                "c1".into(),
                AttributeKind::Categorical {
                    values: vec!["w".into(), "x".into(), "y".into(), "z".into()],
                },
            ),
        ]).unwrap();
        let no_stats = NormalizationStats { ranges: vec![] };
        let ra = Record::new(vec![Cell::Cat(a0), Cell::Cat(a1)]);
        let rb = Record::new(vec![Cell::Cat(b0), Cell::Cat(b1)]);
        let d = mixed_cosine_distance(
            &encode(&ra, &schema, &no_stats).unwrap(),
            &encode(&rb, &schema, &no_stats).unwrap(),
            &schema,
        ).unwrap();
        if ra == rb {
            prop_assert!(d.abs() < 1e-12);
        } else {
            prop_assert!(d > 1e-12);
        }
    }

    #[test]
    fn query_fast_path_equals_naive(
        rows in prop::collection::vec(arb_record(), 1..120),
        target in arb_record(),
        query_seed in 0u64..1000,
    ) {
        let schema = mixed_schema();
        let dataset = Dataset::new(schema.clone(), rows).unwrap();
        let queries = sample_queries(&schema, &target, 50, query_seed).unwrap();
        let fast = answer_queries(&dataset, &queries).unwrap();
        let naive = answer_queries_naive(&dataset, &queries).unwrap();
        prop_assert_eq!(fast, naive);
    }

    #[test]
    fn partition_is_disjoint_and_union_sized(
        rows in prop::collection::vec(arb_record(), 10..80),
        seed_value in 0u64..500,
    ) {
        let schema = mixed_schema();
        let dataset = Dataset::new(schema, rows).unwrap();
        let n_aux = dataset.len() / 2;
        let n_test = dataset.len() / 4;
        let (aux, test) = dataset.partition(n_aux, n_test, seed_value).unwrap();
        prop_assert_eq!(aux.len(), n_aux);
        prop_assert_eq!(test.len(), n_test);

        // Union is a sub-multiset of the input.
        let mut pool: Vec<&Record> = dataset.rows().iter().collect();
        for row in aux.rows().iter().chain(test.rows()) {
            let at = pool.iter().position(|r| *r == row);
            prop_assert!(at.is_some(), "partition produced a row not in the input");
            pool.swap_remove(at.unwrap());
        }
    }

    #[test]
    fn auc_is_bounded_and_flips_with_labels(
        scores in prop::collection::vec(0.0f64..1.0, 4..60),
        flip in prop::collection::vec(any::<bool>(), 4..60),
    ) {
        let n = scores.len().min(flip.len());
        let scores = &scores[..n];
        let labels: Vec<u8> = flip[..n].iter().map(|&b| u8::from(b)).collect();
        let positives: usize = labels.iter().map(|&l| l as usize).sum();
        prop_assume!(positives > 0 && positives < n);

        let auc = compute_auc(scores, &labels).unwrap();
        prop_assert!((0.0..=1.0).contains(&auc));

        // Complementing the labels mirrors the AUC around one half.
        let complement: Vec<u8> = labels.iter().map(|&l| 1 - l).collect();
        let mirrored = compute_auc(scores, &complement).unwrap();
        prop_assert!((auc + mirrored - 1.0).abs() < 1e-12);
    }
}
