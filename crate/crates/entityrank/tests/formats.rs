use std::fs;
use std::path::Path;

use entityrank::core::corpus::{Document, LabeledPair, Query, StreamKind, Tokenization};
use entityrank::core::features::{FeatureLayout, FeatureVector};
use entityrank::core::ranker::{ExtraTreesModel, ExtraTreesParams};
use entityrank::io::{self, EmbeddingFormat, Prediction};
use entityrank::Error;
use proptest::prelude::*;
use tempfile::TempDir;

fn write(dir: &TempDir, name: &str, content: impl AsRef<[u8]>) -> std::path::PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, content).unwrap();
    p
}

#[test]
fn corpus_round_trip() {
    let dir = TempDir::new().unwrap();
    let docs = vec![
        Document::new("e1", "北京", "北京大学。"),
        Document::new("e2", "", "").with_segmentation(vec!["a".into()], vec!["b".into(), "。".into()]),
    ];
    let p = dir.path().join("c.jsonl");
    io::write_documents(&p, &docs).unwrap();
    assert_eq!(io::read_documents(&p).unwrap(), docs);

    let mut q = Query::new("q1", "北京");
    q.seg_text = Some(vec!["北京".into()]);
    let p = dir.path().join("q.jsonl");
    io::write_queries(&p, &[q.clone()]).unwrap();
    assert_eq!(io::read_queries(&p).unwrap(), vec![q]);

    let pairs = vec![LabeledPair::new("q1", "e1", 1).unwrap(), LabeledPair::new("q1", "e2", 0).unwrap()];
    let p = dir.path().join("p.tsv");
    io::write_pairs(&p, &pairs).unwrap();
    assert!(fs::read_to_string(&p).unwrap().starts_with("query_id\tentity_id\tlabel\n"));
    assert_eq!(io::read_pairs(&p).unwrap(), pairs);
}

#[test]
fn malformed_jsonl_reports_its_line() {
    let dir = TempDir::new().unwrap();
    let mut text = String::new();
    for i in 1..=6 {
        text += &format!("{{\"entity_id\":\"e{i}\",\"title\":\"t\",\"body\":\"b\"}}\n");
    }
    text += "{\"entity_id\": \"e7\", \"title\": \n";
    let p = write(&dir, "c.jsonl", text);
    let err = io::read_documents(&p).unwrap_err();
    assert_eq!(err.line(), Some(7));
    assert!(err.to_string().contains("line 7"), "{err}");
}

#[test]
fn corpus_id_rules() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "dup.jsonl", "{\"entity_id\":\"a\"}\n{\"entity_id\":\"a\"}\n");
    assert_eq!(io::read_documents(&p).unwrap_err().line(), Some(2));
    let p = write(&dir, "empty_id.jsonl", "{\"entity_id\":\"\"}\n");
    assert_eq!(io::read_documents(&p).unwrap_err().line(), Some(1));
    let p = write(&dir, "none.jsonl", "");
    assert!(io::read_documents(&p).is_err());
    let p = write(&dir, "q.jsonl", "{\"query_id\":\"q\",\"text\":\"x\"}\n\n{\"query_id\":\"q\"}\n");
    assert_eq!(io::read_queries(&p).unwrap_err().line(), Some(3));
}

#[test]
fn pairs_errors() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "nohdr.tsv", "q\te\t1\n");
    assert_eq!(io::read_pairs(&p).unwrap_err().line(), Some(1));
    let p = write(&dir, "label.tsv", "query_id\tentity_id\tlabel\nq\te\t2\n");
    assert_eq!(io::read_pairs(&p).unwrap_err().line(), Some(2));
    let p = write(&dir, "fields.tsv", "query_id\tentity_id\tlabel\nq\te\t1\nq\te2\n");
    assert_eq!(io::read_pairs(&p).unwrap_err().line(), Some(3));
    let p = write(&dir, "dup.tsv", "query_id\tentity_id\tlabel\nq\te\t1\nq\te\t0\n");
    assert_eq!(io::read_pairs(&p).unwrap_err().line(), Some(3));
}

#[test]
fn word2vec_text_is_normalized() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "e.txt", "2 3\na 1 0 0\nb 0 2 0\n");
    let t = io::load_word2vec_text(&p, 1).unwrap();
    assert_eq!(t.dim(), 3);
    assert_eq!(t.get("a").unwrap(), &[1.0, 0.0, 0.0]);
    assert_eq!(t.get("b").unwrap(), &[0.0, 1.0, 0.0]);
}

#[test]
fn word2vec_errors() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "short.txt", "1 3\na 1 0\n");
    assert!(matches!(io::load_word2vec_text(&p, 1), Err(Error::DimensionMismatch { line: 2, .. })));
    let p = write(&dir, "zero.txt", "1 3\nc 0 0 0\n");
    assert!(matches!(io::load_word2vec_text(&p, 1), Err(Error::ZeroNormVector { ref word, .. }) if word == "c"));
    for bad in ["", "x 3\n", "1\n", "1 0\n", "1 2 3\n"] {
        let p = write(&dir, "hdr.txt", bad);
        assert!(matches!(io::load_word2vec_text(&p, 1), Err(Error::MalformedHeader { .. })), "{bad:?}");
    }
    let p = write(&dir, "few.txt", "2 2\na 1 0\n");
    assert!(matches!(io::load_word2vec_text(&p, 1), Err(Error::UnexpectedEof { .. })));
    let p = write(&dir, "dupw.txt", "2 2\na 1 0\na 0 1\n");
    assert_eq!(io::load_word2vec_text(&p, 1).unwrap_err().line(), Some(3));
}

#[test]
fn word2vec_binary_round_trip_and_detection() {
    let dir = TempDir::new().unwrap();
    let rows: Vec<(String, Vec<f32>)> = (0..50)
        .map(|i| (format!("w{i}词"), (0..7).map(|j| ((i * 7 + j) as f32 * 0.37).sin() + 0.01).collect()))
        .collect();
    let view: Vec<(&str, &[f32])> = rows.iter().map(|(w, v)| (w.as_str(), v.as_slice())).collect();
    let text = dir.path().join("e.txt");
    let bin = dir.path().join("e.bin");
    io::write_word2vec_text(&text, 7, &view).unwrap();
    io::write_word2vec_binary(&bin, 7, &view).unwrap();
    let a = io::load_word2vec_text(&text, 3).unwrap();
    let b = io::load_word2vec_binary(&bin, 3).unwrap();
    assert_eq!(a.len(), 50);
    for ((wa, va), (wb, vb)) in a.iter().zip(b.iter()) {
        assert_eq!(wa, wb);
        for (x, y) in va.iter().zip(vb) {
            assert!((x - y).abs() <= 1e-6);
        }
    }
    let auto_text = io::load_embeddings(&text, EmbeddingFormat::Auto, 3).unwrap();
    let auto_bin = io::load_embeddings(&bin, EmbeddingFormat::Auto, 3).unwrap();
    assert_eq!(auto_text.iter().count(), 50);
    assert_eq!(auto_bin.get("w3词"), b.get("w3词"));
}

#[test]
fn word2vec_binary_edge_cases() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "empty.bin", "0 4\n");
    let t = io::load_word2vec_binary(&p, 0).unwrap();
    assert!(t.is_empty());
    assert_eq!(t.dim(), 4);

    let mut bytes = b"1 2\nab ".to_vec();
    bytes.extend_from_slice(&1.0f32.to_le_bytes());
    let p = write(&dir, "trunc.bin", &bytes);
    assert!(matches!(io::load_word2vec_binary(&p, 0), Err(Error::UnexpectedEof { .. })));

    // newline-separated records as produced by the reference tool
    let mut bytes = b"2 1\na ".to_vec();
    bytes.extend_from_slice(&2.0f32.to_le_bytes());
    bytes.extend_from_slice(b"\nb ");
    bytes.extend_from_slice(&(-3.0f32).to_le_bytes());
    bytes.push(b'\n');
    let p = write(&dir, "nl.bin", &bytes);
    let t = io::load_embeddings(&p, EmbeddingFormat::Auto, 0).unwrap();
    assert_eq!(t.get("a").unwrap(), &[1.0]);
    assert_eq!(t.get("b").unwrap(), &[-1.0]);
}

fn vector(q: &str, e: &str, label: u8, values: Vec<f64>) -> FeatureVector {
    FeatureVector {
        query_id: q.into(),
        entity_id: e.into(),
        label,
        values,
    }
}

#[test]
fn letor_line_format() {
    let v = vector("q7", "e3", 1, vec![0.5, -1.0]);
    assert_eq!(io::format_letor_line(&v), "1 qid:q7 1:0.5 2:-1 # e3");
    assert_eq!(io::format_value(1e-300), "1e-300");
    assert_eq!(io::format_value(0.0), "0");
}

fn one_block() -> FeatureLayout {
    FeatureLayout::new(vec![Tokenization::TwoGram], vec![StreamKind::Title]).unwrap()
}

#[test]
fn letor_sidecar_and_errors() {
    let dir = TempDir::new().unwrap();
    let layout = one_block();
    let p = dir.path().join("f.letor");
    let v = vector("q", "e", 0, (0..15).map(f64::from).collect());
    io::write_letor(&p, &[v.clone()], &layout).unwrap();
    let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(io::layout_path(&p)).unwrap()).unwrap();
    assert_eq!(side["dim"], 15);
    assert_eq!(side["columns"][3], "twogram.title.bm25");
    let back = io::read_letor(&p).unwrap();
    assert_eq!(back.vectors, vec![v.clone()]);
    assert_eq!(back.fingerprint(), layout.fingerprint());

    assert!(io::write_letor(&p, &[vector("q", "e", 0, vec![1.0])], &layout).is_err());

    let bad = write(&dir, "bad.letor", "1 qid:q 1:0.5 # e\n0 q 1:1 # e\n");
    assert_eq!(io::read_letor(&bad).unwrap_err().line(), Some(2));
    for line in ["1 qid: 1:1 # e", "2 qid:q 1:1 # e", "1 qid:q 1:x # e", "1 qid:q 2:1 1:1 # e", "1 qid:q 1:1"] {
        let bad = write(&dir, "bad.letor", format!("{line}\n"));
        assert!(matches!(io::read_letor(&bad), Err(Error::Parse { line: 1, .. })), "{line}");
    }

    // sparse lines are zero-filled; an index past the sidecar width is rejected
    let sparse = dir.path().join("s.letor");
    io::write_letor(&sparse, &[], &layout).unwrap();
    fs::write(&sparse, "1 qid:q 3:2.5 # e\n").unwrap();
    let f = io::read_letor(&sparse).unwrap();
    assert_eq!(f.vectors[0].values.len(), 15);
    assert_eq!(f.vectors[0].values[2], 2.5);
    fs::write(&sparse, "1 qid:q 16:2.5 # e\n").unwrap();
    assert!(matches!(io::read_letor(&sparse), Err(Error::DimensionMismatch { line: 1, .. })));
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        -1e3f64..1e3,
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn letor_round_trip_is_exact(values in proptest::collection::vec(finite(), 15 * 1000), labels in proptest::collection::vec(0u8..=1, 1000)) {
        let dir = TempDir::new().unwrap();
        let p = dir.path().join("f.letor");
        let vectors: Vec<FeatureVector> = values
            .chunks(15)
            .zip(&labels)
            .enumerate()
            .map(|(i, (v, &l))| vector(&format!("q{}", i % 13), &format!("e{i}"), l, v.to_vec()))
            .collect();
        io::write_letor(&p, &vectors, &one_block()).unwrap();
        let back = io::read_letor(&p).unwrap();
        prop_assert_eq!(back.vectors.len(), 1000);
        for (a, b) in vectors.iter().zip(&back.vectors) {
            prop_assert_eq!(&a.query_id, &b.query_id);
            prop_assert_eq!(&a.entity_id, &b.entity_id);
            prop_assert_eq!(a.label, b.label);
            let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
            prop_assert_eq!(bits(&a.values), bits(&b.values));
        }
    }
}

fn toy_model() -> ExtraTreesModel {
    let vectors: Vec<FeatureVector> = (0..40)
        .map(|i| vector("q", &format!("e{i}"), u8::from(i % 4 == 0), vec![i as f64, (i % 7) as f64]))
        .collect();
    ExtraTreesModel::train_vectors(&vectors, &ExtraTreesParams::default().with_shape(10, 4), "abc").unwrap()
}

#[test]
fn model_file_round_trip() {
    let dir = TempDir::new().unwrap();
    let m = toy_model();
    let p = dir.path().join("m.json");
    io::save_model(&p, &m).unwrap();
    let back = io::load_model(&p).unwrap();
    assert_eq!(back, m);
    let p2 = dir.path().join("m2.json");
    io::save_model(&p2, &back).unwrap();
    assert_eq!(fs::read(&p).unwrap(), fs::read(&p2).unwrap());

    let json: serde_json::Value = serde_json::from_slice(&fs::read(&p).unwrap()).unwrap();
    assert_eq!(json["format"], io::MODEL_FORMAT);
    assert_eq!(json["version"], io::MODEL_VERSION);
    assert_eq!(json["layout_fingerprint"], "abc");
    assert!(json["trees"][0]["nodes"][0]["kind"].is_string());

    let mut wrong = json.clone();
    wrong["version"] = 99.into();
    let p3 = write(&dir, "v.json", wrong.to_string());
    assert!(io::load_model(&p3).is_err());
    let mut broken = json;
    broken["trees"][0]["nodes"][0] = serde_json::json!({"kind": "split", "feature": 9, "threshold": 0.0, "left": 1, "right": 2});
    let p4 = write(&dir, "b.json", broken.to_string());
    assert!(io::load_model(&p4).is_err());
}

#[test]
fn predictions_round_trip() {
    let dir = TempDir::new().unwrap();
    let preds = vec![
        Prediction { query_id: "q".into(), entity_id: "a".into(), score: 0.75, rank: 1 },
        Prediction { query_id: "q".into(), entity_id: "b".into(), score: 0.1, rank: 2 },
    ];
    let p = dir.path().join("p.tsv");
    io::write_predictions(&p, &preds).unwrap();
    assert_eq!(
        fs::read_to_string(&p).unwrap(),
        "query_id\tentity_id\tscore\trank\nq\ta\t0.75\t1\nq\tb\t0.1\t2\n"
    );
    assert_eq!(io::read_predictions(&p).unwrap(), preds);
    let bad = write(&dir, "bad.tsv", "query_id\tentity_id\tscore\trank\nq\ta\tx\t1\n");
    assert_eq!(io::read_predictions(&bad).unwrap_err().line(), Some(2));
    assert!(io::read_predictions(Path::new("/nonexistent/p.tsv")).is_err());
}
