//! Brute-force reference implementations used by the integration and
//! acceptance tests. Everything here works on plain token lists with nested
//! loops and does not call into the library's scoring code.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FLOOR: f64 = 1e-10;

/// Relative closeness, with an absolute floor of 1e-12 for values that are
/// zero up to rounding (sums of canceling idf terms).
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + 1e-12
}

/// One random corpus: per document a title and a body token list.
#[derive(Debug, Clone)]
pub struct RandomCorpus {
    pub titles: Vec<Vec<String>>,
    pub bodies: Vec<Vec<String>>,
    pub query: Vec<String>,
}

const ALPHABET: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

fn random_tokens(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<String> {
    let n = rng.random_range(0..=max_len);
    (0..n)
        .map(|_| ALPHABET[rng.random_range(0..ALPHABET.len())].to_string())
        .collect()
}

/// At most 10 documents with at most 20 tokens per stream.
pub fn random_corpus(seed: u64) -> RandomCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_docs = rng.random_range(1..=10);
    let titles = (0..n_docs).map(|_| random_tokens(&mut rng, 5)).collect();
    let bodies = (0..n_docs).map(|_| random_tokens(&mut rng, 20)).collect();
    let mut query = random_tokens(&mut rng, 4);
    query.push(if rng.random_bool(0.5) { "z".into() } else { "a".into() });
    RandomCorpus { titles, bodies, query }
}

impl RandomCorpus {
    /// Token lists of the stream with index 0 = title, 1 = body, 2 = both.
    pub fn stream(&self, kind: usize) -> Vec<Vec<String>> {
        match kind {
            0 => self.titles.clone(),
            1 => self.bodies.clone(),
            _ => self
                .titles
                .iter()
                .zip(&self.bodies)
                .map(|(t, b)| t.iter().chain(b).cloned().collect())
                .collect(),
        }
    }
}

pub fn count(doc: &[String], term: &str) -> usize {
    let mut c = 0;
    for t in doc {
        if t == term {
            c += 1;
        }
    }
    c
}

pub fn unique_terms(doc: &[String]) -> usize {
    let mut seen: Vec<&String> = Vec::new();
    for t in doc {
        if !seen.contains(&t) {
            seen.push(t);
        }
    }
    seen.len()
}

pub fn doc_freq(docs: &[Vec<String>], term: &str) -> usize {
    docs.iter().filter(|d| count(d, term) > 0).count()
}

pub fn idf(docs: &[Vec<String>], term: &str) -> f64 {
    let n = docs.len() as f64;
    let df = doc_freq(docs, term) as f64;
    ((n - df + 0.5) / (df + 0.5)).ln()
}

pub fn corpus_prob(docs: &[Vec<String>], term: &str) -> f64 {
    let total: usize = docs.iter().map(Vec::len).sum();
    if total == 0 {
        return 0.0;
    }
    let occurrences: usize = docs.iter().map(|d| count(d, term)).sum();
    occurrences as f64 / total as f64
}

fn ln_floor(p: f64) -> f64 {
    if p < FLOOR {
        FLOOR.ln()
    } else {
        p.ln()
    }
}

/// Parameters mirrored from the library defaults.
pub struct Params {
    pub k1: f64,
    pub k3: f64,
    pub b: f64,
    pub lambda: f64,
    pub mu: f64,
    pub delta: f64,
}

pub const DEFAULTS: Params = Params {
    k1: 2.0,
    k3: 0.0,
    b: 0.75,
    lambda: 0.1,
    mu: 2000.0,
    delta: 0.7,
};

/// The seven frequency features of `docs[d]` against `query`.
pub fn lexical(docs: &[Vec<String>], d: usize, query: &[String], p: &Params) -> [f64; 7] {
    let doc = &docs[d];
    let len = doc.len() as f64;
    let total: usize = docs.iter().map(Vec::len).sum();
    let avg = total as f64 / docs.len() as f64;

    let mut tf = 0.0;
    let mut idf_sum = 0.0;
    let mut tfidf = 0.0;
    let mut jm = 0.0;
    let mut dir = 0.0;
    let mut abs = 0.0;
    for q in query {
        let f = count(doc, q) as f64;
        let w = idf(docs, q);
        let pc = corpus_prob(docs, q);
        tf += f;
        idf_sum += w;
        tfidf += f * w;
        let ml = if doc.is_empty() { 0.0 } else { f / len };
        jm += ln_floor((1.0 - p.lambda) * ml + p.lambda * pc);
        dir += ln_floor((f + p.mu * pc) / (len + p.mu));
        let pa = if doc.is_empty() {
            0.0
        } else {
            (f - p.delta).max(0.0) / len + p.delta * unique_terms(doc) as f64 / len * pc
        };
        abs += ln_floor(pa);
    }

    let mut bm25 = 0.0;
    if avg > 0.0 {
        let mut done: Vec<&String> = Vec::new();
        for q in query {
            if done.contains(&q) {
                continue;
            }
            done.push(q);
            let f = count(doc, q) as f64;
            if f == 0.0 {
                continue;
            }
            let qtf = count(query, q) as f64;
            bm25 += idf(docs, q) * f * (p.k1 + 1.0) / (f + p.k1 * (1.0 - p.b + p.b * len / avg))
                * ((p.k3 + 1.0) * qtf / (p.k3 + qtf));
        }
    }
    [tf, idf_sum, tfidf, bm25, jm, dir, abs]
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += a[i] * b[i];
    }
    s
}

/// Nested-loop word-to-sentence similarity.
pub fn word_sentence_sim(word: &[f64], sentence: &[Vec<f64>]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for s in sentence {
        let d = dot(word, s);
        if d > best {
            best = d;
        }
    }
    best
}

/// SS, SWS, MS, MWS by nested loops.
pub fn aggregates(query: &[Vec<f64>], idfs: &[f64], sentence: &[Vec<f64>]) -> [f64; 4] {
    let mut ss = 0.0;
    let mut sws = 0.0;
    let mut ms = f64::NEG_INFINITY;
    let mut mws = f64::NEG_INFINITY;
    for (i, q) in query.iter().enumerate() {
        let s = word_sentence_sim(q, sentence);
        ss += s;
        sws += s * idfs[i];
        if s > ms {
            ms = s;
        }
        if s * idfs[i] > mws {
            mws = s * idfs[i];
        }
    }
    [ss, sws, ms, mws]
}

/// Max then average over sentences of the four aggregates.
pub fn stream_features(query: &[Vec<f64>], idfs: &[f64], sentences: &[Vec<Vec<f64>>]) -> [f64; 8] {
    let mut out = [0.0; 8];
    if query.is_empty() || sentences.is_empty() {
        return out;
    }
    let per: Vec<[f64; 4]> = sentences.iter().map(|s| aggregates(query, idfs, s)).collect();
    for k in 0..4 {
        let mut m = f64::NEG_INFINITY;
        let mut sum = 0.0;
        for a in &per {
            if a[k] > m {
                m = a[k];
            }
            sum += a[k];
        }
        out[k] = m;
        out[4 + k] = sum / per.len() as f64;
    }
    out
}

/// Random unit vector of the given width.
pub fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = dot(&v, &v).sqrt();
        if n > 1e-6 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Average precision straight from its definition: precision at each
/// relevant position, recomputed by scanning the prefix, averaged over the
/// relevant entities.
pub fn definitional_ap(rels: &[u8]) -> f64 {
    let mut total = 0.0;
    let mut n_rel = 0;
    for k in 0..rels.len() {
        if rels[k] == 1 {
            n_rel += 1;
            let mut hits = 0;
            for j in 0..=k {
                if rels[j] == 1 {
                    hits += 1;
                }
            }
            total += hits as f64 / (k + 1) as f64;
        }
    }
    if n_rel == 0 {
        0.0
    } else {
        total / n_rel as f64
    }
}

/// All permutations of `items` (Heap's algorithm).
pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    fn heap<T: Clone>(k: usize, a: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        heap(k - 1, a, out);
        for i in 0..k - 1 {
            if k % 2 == 0 {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            heap(k - 1, a, out);
        }
    }
    let mut a = items.to_vec();
    let mut out = Vec::new();
    heap(a.len(), &mut a, &mut out);
    out
}

/// `n` points of `[-1, 1]^2` labelled by `x + 2y > 0.1`, skipping any point
/// closer than `margin` to that line.
pub fn separable_points(n: usize, seed: u64, margin: f64) -> Vec<(Vec<f64>, u8)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x: f64 = rng.random_range(-1.0..1.0);
        let y: f64 = rng.random_range(-1.0..1.0);
        let s = (x + 2.0 * y - 0.1) / 5.0f64.sqrt();
        if s.abs() < margin {
            continue;
        }
        out.push((vec![x, y], u8::from(s > 0.0)));
    }
    out
}
