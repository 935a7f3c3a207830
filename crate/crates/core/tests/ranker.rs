mod oracle;

use entityrank_core::features::FeatureVector;
use entityrank_core::ranker::{
    assign_folds, cross_validate, fuse, rank_order, Dataset, ExtraTreesModel, ExtraTreesParams, FusionMode,
};
use entityrank_core::eval::ApMode;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn separable(n: usize, seed: u64) -> Vec<FeatureVector> {
    oracle::separable_points(n, seed, 0.02)
        .into_iter()
        .enumerate()
        .map(|(i, (values, label))| FeatureVector {
            query_id: format!("q{}", i % 20),
            entity_id: format!("e{i}"),
            label,
            values,
        })
        .collect()
}

#[test]
fn learns_a_separable_problem() {
    let train = separable(200, 1);
    let test = separable(200, 2);
    let model = ExtraTreesModel::train_vectors(&train, &ExtraTreesParams::default(), "").unwrap();
    let fits = train
        .iter()
        .all(|v| (model.predict_proba(&v.values).unwrap() > 0.5) == (v.label == 1));
    assert!(fits, "training set not fitted");
    let correct = test
        .iter()
        .filter(|v| (model.predict_proba(&v.values).unwrap() > 0.5) == (v.label == 1))
        .count();
    assert!(correct as f64 / test.len() as f64 >= 0.95, "accuracy {correct}/200");
}

#[test]
fn single_perfect_feature_is_found() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let make = |rng: &mut ChaCha8Rng, i: usize| {
        let label = u8::from(i % 3 == 0);
        let mut values: Vec<f64> = (0..10).map(|_| rng.random_range(0.0..1.0)).collect();
        values[4] = f64::from(label) + rng.random_range(-0.2..0.2);
        FeatureVector {
            query_id: "q".into(),
            entity_id: format!("e{i}"),
            label,
            values,
        }
    };
    let train: Vec<_> = (0..200).map(|i| make(&mut rng, i)).collect();
    let test: Vec<_> = (0..200).map(|i| make(&mut rng, i)).collect();
    let model = ExtraTreesModel::train_vectors(&train, &ExtraTreesParams::default(), "").unwrap();
    for v in &test {
        assert_eq!(model.predict_proba(&v.values).unwrap() > 0.5, v.label == 1);
    }
}

#[test]
fn same_seed_same_model() {
    let data = separable(120, 3);
    let p = ExtraTreesParams::default().with_shape(30, 6);
    let a = ExtraTreesModel::train_vectors(&data, &p, "x").unwrap();
    let b = ExtraTreesModel::train_vectors(&data, &p, "x").unwrap();
    assert_eq!(a, b);
    let mut other = p;
    other.seed += 1;
    assert_ne!(a, ExtraTreesModel::train_vectors(&data, &other, "x").unwrap());
}

#[test]
fn identical_across_thread_pools() {
    let data = separable(150, 4);
    let p = ExtraTreesParams::default().with_shape(40, 8);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| ExtraTreesModel::train_vectors(&data, &p, "").unwrap());
    let b = four.install(|| ExtraTreesModel::train_vectors(&data, &p, "").unwrap());
    assert_eq!(a, b);
    let sa = one.install(|| a.predict_many(&data).unwrap());
    let sb = four.install(|| b.predict_many(&data).unwrap());
    assert_eq!(sa, sb);
}

#[test]
fn depth_is_capped() {
    let data = separable(200, 5);
    for depth in [1, 2, 4] {
        let m = ExtraTreesModel::train_vectors(&data, &ExtraTreesParams::default().with_shape(10, depth), "").unwrap();
        assert!(m.trees.iter().all(|t| t.depth() <= depth));
    }
}

#[test]
fn cross_validation_covers_every_query_once() {
    let data = separable(200, 6);
    let folds = assign_folds(data.iter().map(|v| v.query_id.as_str()), 10, 11).unwrap();
    let mut seen: Vec<&String> = folds.iter().flatten().collect();
    seen.sort();
    seen.dedup();
    assert_eq!(seen.len(), 20);
    assert_eq!(folds.iter().map(Vec::len).sum::<usize>(), 20);
    let report = cross_validate(&data, &ExtraTreesParams::default().with_shape(20, 6), 10, 11, ApMode::Standard).unwrap();
    assert_eq!(report.fold_maps.len(), 10);
    assert!(report.mean_map > 0.8, "{}", report.mean_map);
}

#[test]
fn fusion_modes() {
    let keys: Vec<(String, String)> = [("q", "a"), ("q", "b"), ("q", "c")]
        .iter()
        .map(|(q, e)| (q.to_string(), e.to_string()))
        .collect();
    let scores = vec![vec![0.9, 0.5, 0.1], vec![0.1, 0.5, 0.3]];
    let prob = fuse(&scores, &keys, FusionMode::Prob).unwrap();
    assert!((prob[0] - 0.5).abs() < 1e-15 && (prob[2] - 0.2).abs() < 1e-15);
    let rank = fuse(&scores, &keys, FusionMode::Rank).unwrap();
    // a: 1 + 1/3, b: 1/2 + 1, c: 1/3 + 1/2
    assert!((rank[1] - 1.5).abs() < 1e-15);
    assert_eq!(rank_order(&["a", "b", "c"], &rank), vec![1, 0, 2]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn probabilities_stay_in_unit_interval(seed in 0u64..1000, probe in proptest::collection::vec(-3.0f64..3.0, 2)) {
        let data = separable(60, seed);
        prop_assume!(data.iter().any(|v| v.label == 1) && data.iter().any(|v| v.label == 0));
        let m = ExtraTreesModel::train(
            &Dataset::from_vectors(&data).unwrap(),
            &ExtraTreesParams::default().with_shape(15, 4),
            "",
        ).unwrap();
        let p = m.predict_proba(&probe).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(m.predict_proba(&probe[..1]).is_err());
    }

    #[test]
    fn rank_order_sorts_descending(scores in proptest::collection::vec(0.0f64..1.0, 1..30)) {
        let ids: Vec<String> = (0..scores.len()).map(|i| format!("e{i:02}")).collect();
        let order = rank_order(&ids, &scores);
        for w in order.windows(2) {
            prop_assert!(scores[w[0]] > scores[w[1]] || (scores[w[0]] == scores[w[1]] && ids[w[0]] < ids[w[1]]));
        }
    }
}
