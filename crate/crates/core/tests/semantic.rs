mod oracle;

use entityrank_core::corpus::{StreamKind, TokenStream, Tokenization};
use entityrank_core::embedding::EmbeddingTable;
use entityrank_core::semantic::{
    sentence_aggregates, stream_semantic_features, QueryEmbedding, SimMode, SimilarityMatrix,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DIM: usize = 8;

fn vocabulary(rng: &mut ChaCha8Rng, n: usize) -> (EmbeddingTable, Vec<String>) {
    let mut table = EmbeddingTable::new(DIM, 99).unwrap();
    let words: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    for w in &words {
        table.insert(w.clone(), &oracle::random_unit(rng, DIM)).unwrap();
    }
    (table, words)
}

fn pick(rng: &mut ChaCha8Rng, words: &[String], n: usize) -> Vec<String> {
    (0..n).map(|_| words[rng.random_range(0..words.len())].clone()).collect()
}

#[test]
fn matrix_form_equals_nested_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (table, words) = vocabulary(&mut rng, 40);
    for _ in 0..1000 {
        let m = rng.random_range(1..6);
        let n = rng.random_range(1..12);
        let query = pick(&mut rng, &words, m);
        let sentence = pick(&mut rng, &words, n);
        let qv: Vec<Vec<f64>> = query.iter().map(|w| table.get(w).unwrap().to_vec()).collect();
        let sv: Vec<Vec<f64>> = sentence.iter().map(|w| table.get(w).unwrap().to_vec()).collect();
        let r = SimilarityMatrix::product(&qv.concat(), &sv.concat(), DIM);
        let rows = r.reduce_rows(SimMode::Max);
        for (i, q) in qv.iter().enumerate() {
            let want = oracle::word_sentence_sim(q, &sv);
            assert!((rows[i] - want).abs() <= 1e-12);
            assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&rows[i]));
        }
        let idfs: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..3.0)).collect();
        let idf_of = |w: &str| idfs[query.iter().position(|q| q == w).unwrap()];
        // repeated words share an idf, mirror that in the oracle
        let idfs_aligned: Vec<f64> = query.iter().map(|w| idf_of(w)).collect();
        let agg = sentence_aggregates(&query, &sentence, &table, idf_of, SimMode::Max).unwrap();
        let want = oracle::aggregates(&qv, &idfs_aligned, &sv);
        for (g, w) in [agg.ss, agg.sws, agg.ms, agg.mws].iter().zip(want) {
            assert!((g - w).abs() <= 1e-12);
        }
        assert!(agg.ss.abs() <= m as f64 + 1e-12);
    }
}

#[test]
fn stream_features_match_brute_force_aggregator() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut table, words) = vocabulary(&mut rng, 30);
    table.precompute_oov(["oov1", "oov2"]);
    for _ in 0..300 {
        let m = rng.random_range(1..5);
        let mut query = pick(&mut rng, &words, m);
        if rng.random_bool(0.3) {
            query.push("oov1".into());
        }
        let n_sentences = rng.random_range(0..6);
        let sentences: Vec<Vec<String>> = (0..n_sentences)
            .map(|_| {
                let n = rng.random_range(1..8);
                let mut s = pick(&mut rng, &words, n);
                if rng.random_bool(0.2) {
                    s.push("oov2".into());
                }
                s
            })
            .collect();
        let idf = |w: &str| (w.len() as f64) * 0.3 - 0.5;
        let stream = TokenStream {
            kind: StreamKind::Body,
            tokenization: Tokenization::Seg,
            sentences: sentences.clone(),
        };
        let qe = QueryEmbedding::new(&query, &table, idf);
        let got = stream_semantic_features(&qe, &stream, &table, SimMode::Max);

        let qv: Vec<Vec<f64>> = query.iter().map(|w| table.vector(w).into_owned()).collect();
        let idfs: Vec<f64> = query.iter().map(|w| idf(w)).collect();
        let sv: Vec<Vec<Vec<f64>>> = sentences
            .iter()
            .map(|s| s.iter().map(|w| table.vector(w).into_owned()).collect())
            .collect();
        let want = oracle::stream_features(&qv, &idfs, &sv);
        for k in 0..8 {
            assert!((got[k] - want[k]).abs() <= 1e-12, "feature {k}: {} vs {}", got[k], want[k]);
        }
        for k in 0..4 {
            assert!(got[k] >= got[4 + k] - 1e-12);
        }
    }
}

proptest! {
    #[test]
    fn word_order_does_not_matter(seed in 0u64..1000, rot_q in 0usize..5, rot_s in 0usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (table, words) = vocabulary(&mut rng, 20);
        let query = pick(&mut rng, &words, 5);
        let sentence = pick(&mut rng, &words, 9);
        let idf = |w: &str| w.len() as f64;
        let base = sentence_aggregates(&query, &sentence, &table, idf, SimMode::Max).unwrap();
        let mut q2 = query.clone();
        q2.rotate_left(rot_q);
        q2.reverse();
        let mut s2 = sentence.clone();
        s2.rotate_left(rot_s);
        let moved = sentence_aggregates(&q2, &s2, &table, idf, SimMode::Max).unwrap();
        prop_assert!((base.ss - moved.ss).abs() <= 1e-12);
        prop_assert!((base.sws - moved.sws).abs() <= 1e-12);
        prop_assert_eq!(base.ms, moved.ms);
        prop_assert_eq!(base.mws, moved.mws);
        prop_assert!(base.ms <= 1.0 + 1e-12 && base.ms >= -1.0 - 1e-12);
    }
}
