//! Seeded synthetic entity search data.
//!
//! Words are pairs of CJK codepoints, grouped into topics that share an
//! embedding direction. Each query takes a few words from one topic. Relevant
//! candidates carry each query word with probability `overlap_strength` and
//! draw some filler from the query topic; irrelevant candidates draw all words
//! uniformly. At `overlap_strength = 0` both kinds are generated identically.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Document, LabeledPair, Query};
use crate::{Error, Result};

const FIRST_CODEPOINT: u32 = 0x4E00;
const LAST_CODEPOINT: u32 = 0x9FFF;
const QUERY_WORDS: usize = 3;
const TITLE_WORDS: usize = 2;
const BODY_SENTENCES: usize = 6;
const SENTENCE_WORDS: usize = 6;
const WORDS_PER_TOPIC: usize = 25;
const TOPIC_FILLER_RATE: f64 = 0.3;
pub const SYNTH_EMBEDDING_DIM: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SynthSpec {
    pub n_queries: usize,
    pub candidates_per_query: usize,
    pub vocab_size: usize,
    pub relevant_fraction: f64,
    pub overlap_strength: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n_queries: 10,
            candidates_per_query: 100,
            vocab_size: 500,
            relevant_fraction: 0.2,
            overlap_strength: 0.8,
            seed: 42,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.n_queries == 0 || self.candidates_per_query < 2 {
            return bad("need at least one query and two candidates per query");
        }
        let max_vocab = (LAST_CODEPOINT - FIRST_CODEPOINT).div_ceil(2) as usize;
        if self.vocab_size < WORDS_PER_TOPIC || self.vocab_size > max_vocab {
            return Err(Error::InvalidParameter(format!(
                "vocab_size must be in [{WORDS_PER_TOPIC}, {max_vocab}]"
            )));
        }
        if !(self.relevant_fraction > 0.0 && self.relevant_fraction < 1.0) {
            return bad("relevant_fraction must be in (0, 1)");
        }
        if !(0.0..=1.0).contains(&self.overlap_strength) {
            return bad("overlap_strength must be in [0, 1]");
        }
        Ok(())
    }

    pub fn relevant_per_query(&self) -> usize {
        let n = self.candidates_per_query;
        let r = libm::round(self.relevant_fraction * n as f64) as usize;
        r.clamp(1, n - 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthData {
    pub documents: Vec<Document>,
    pub queries: Vec<Query>,
    pub pairs: Vec<LabeledPair>,
    /// Raw (unnormalized) vectors for every vocabulary word.
    pub embeddings: Vec<(String, Vec<f32>)>,
}

/// The `i`-th vocabulary word.
pub fn word(i: usize) -> String {
    let base = FIRST_CODEPOINT + 2 * i as u32;
    [base, base + 1]
        .into_iter()
        .map(|c| char::from_u32(c).expect("CJK range"))
        .collect()
}

struct Vocab {
    words: Vec<String>,
    topics: usize,
}

impl Vocab {
    fn topic_of(&self, w: usize) -> usize {
        w % self.topics
    }

    fn topic_word(&self, topic: usize, rng: &mut ChaCha8Rng) -> usize {
        let per_topic = (self.words.len() - topic).div_ceil(self.topics);
        topic + self.topics * rng.random_range(0..per_topic)
    }
}

pub fn generate(spec: &SynthSpec) -> Result<SynthData> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let vocab = Vocab {
        words: (0..spec.vocab_size).map(word).collect(),
        topics: (spec.vocab_size / WORDS_PER_TOPIC).max(1),
    };

    let centers: Vec<Vec<f32>> = (0..vocab.topics)
        .map(|_| (0..SYNTH_EMBEDDING_DIM).map(|_| rng.random_range(-1.0f32..1.0)).collect())
        .collect();
    let embeddings = (0..spec.vocab_size)
        .map(|w| {
            let c = &centers[vocab.topic_of(w)];
            let v = c.iter().map(|x| x + rng.random_range(-0.5f32..0.5)).collect();
            (vocab.words[w].clone(), v)
        })
        .collect();

    let mut documents = Vec::new();
    let mut queries = Vec::new();
    let mut pairs = Vec::new();
    let n_rel = spec.relevant_per_query();
    for qi in 0..spec.n_queries {
        let query_id = format!("q{qi:03}");
        let topic = rng.random_range(0..vocab.topics);
        let mut qwords: Vec<usize> = Vec::with_capacity(QUERY_WORDS);
        while qwords.len() < QUERY_WORDS {
            let w = vocab.topic_word(topic, &mut rng);
            if !qwords.contains(&w) {
                qwords.push(w);
            }
        }
        let seg: Vec<String> = qwords.iter().map(|&w| vocab.words[w].clone()).collect();
        queries.push(Query {
            query_id: query_id.clone(),
            text: seg.concat(),
            seg_text: Some(seg),
        });

        let mut slots: Vec<usize> = (0..spec.candidates_per_query).collect();
        slots.shuffle(&mut rng);
        let relevant: Vec<bool> = {
            let mut r = alloc::vec![false; spec.candidates_per_query];
            for &s in &slots[..n_rel] {
                r[s] = true;
            }
            r
        };

        for (k, &is_rel) in relevant.iter().enumerate() {
            let entity_id = format!("{query_id}-e{k:03}");
            let title: Vec<usize> = (0..TITLE_WORDS).map(|_| rng.random_range(0..spec.vocab_size)).collect();
            let mut body: Vec<usize> = (0..BODY_SENTENCES * SENTENCE_WORDS)
                .map(|_| {
                    if is_rel && rng.random_bool(spec.overlap_strength * TOPIC_FILLER_RATE) {
                        vocab.topic_word(topic, &mut rng)
                    } else {
                        rng.random_range(0..spec.vocab_size)
                    }
                })
                .collect();
            if is_rel {
                let positions = index::sample(&mut rng, body.len(), QUERY_WORDS);
                for (&w, pos) in qwords.iter().zip(positions.iter()) {
                    if rng.random_bool(spec.overlap_strength) {
                        body[pos] = w;
                    }
                }
            }
            documents.push(render(&vocab, entity_id.clone(), &title, &body));
            pairs.push(LabeledPair {
                query_id: query_id.clone(),
                entity_id,
                label: u8::from(is_rel),
            });
        }
    }
    Ok(SynthData {
        documents,
        queries,
        pairs,
        embeddings,
    })
}

fn render(vocab: &Vocab, entity_id: String, title: &[usize], body: &[usize]) -> Document {
    let seg_title: Vec<String> = title.iter().map(|&w| vocab.words[w].clone()).collect();
    let mut body_text = String::new();
    let mut seg_body = Vec::new();
    for sentence in body.chunks(SENTENCE_WORDS) {
        for &w in sentence {
            body_text.push_str(&vocab.words[w]);
            seg_body.push(vocab.words[w].clone());
        }
        body_text.push('。');
        seg_body.push(String::from("。"));
    }
    Document {
        entity_id,
        title: seg_title.concat(),
        body: body_text,
        seg_title: Some(seg_title),
        seg_body: Some(seg_body),
    }
}
