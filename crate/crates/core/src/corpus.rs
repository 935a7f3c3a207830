//! Documents, queries and their token streams.
//!
//! Raw text is lowercased (ASCII only), cut into sentences at end marks,
//! stripped of punctuation and turned into tokens either by an overlapping
//! two-codepoint window or by taking caller-provided segmentation verbatim.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use unicode_general_category::{get_general_category, GeneralCategory};

use crate::{Error, Result};

/// Default sentence end marks: CJK and ASCII full stop, exclamation and
/// question marks, plus newline.
pub const DEFAULT_TERMINATORS: &[char] = &['。', '！', '？', '!', '?', '.', '\n'];

/// One candidate entity.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Document {
    pub entity_id: String,
    #[cfg_attr(feature = "serde", serde(default))]
    pub title: String,
    #[cfg_attr(feature = "serde", serde(default))]
    pub body: String,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub seg_title: Option<Vec<String>>,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub seg_body: Option<Vec<String>>,
}

impl Document {
    pub fn new(entity_id: impl Into<String>, title: impl Into<String>, body: impl Into<String>) -> Self {
        Self {
            entity_id: entity_id.into(),
            title: title.into(),
            body: body.into(),
            seg_title: None,
            seg_body: None,
        }
    }

    pub fn with_segmentation(mut self, seg_title: Vec<String>, seg_body: Vec<String>) -> Self {
        self.seg_title = Some(seg_title);
        self.seg_body = Some(seg_body);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Query {
    pub query_id: String,
    #[cfg_attr(feature = "serde", serde(default))]
    pub text: String,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub seg_text: Option<Vec<String>>,
}

impl Query {
    pub fn new(query_id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            query_id: query_id.into(),
            text: text.into(),
            seg_text: None,
        }
    }
}

/// A judged (query, entity) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LabeledPair {
    pub query_id: String,
    pub entity_id: String,
    pub label: u8,
}

impl LabeledPair {
    pub fn new(query_id: impl Into<String>, entity_id: impl Into<String>, label: u32) -> Result<Self> {
        if label > 1 {
            return Err(Error::InvalidLabel(label));
        }
        Ok(Self {
            query_id: query_id.into(),
            entity_id: entity_id.into(),
            label: label as u8,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum StreamKind {
    Title,
    Body,
    TitleBody,
}

impl StreamKind {
    pub const ALL: [StreamKind; 3] = [StreamKind::Title, StreamKind::Body, StreamKind::TitleBody];

    pub fn index(self) -> usize {
        match self {
            StreamKind::Title => 0,
            StreamKind::Body => 1,
            StreamKind::TitleBody => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StreamKind::Title => "title",
            StreamKind::Body => "body",
            StreamKind::TitleBody => "titlebody",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "title" => Some(StreamKind::Title),
            "body" => Some(StreamKind::Body),
            "titlebody" | "title+body" | "title_body" => Some(StreamKind::TitleBody),
            _ => None,
        }
    }
}

impl fmt::Display for StreamKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Tokenization {
    /// Caller-provided word segmentation.
    Seg,
    /// Overlapping codepoint bigrams.
    TwoGram,
}

impl Tokenization {
    pub fn name(self) -> &'static str {
        match self {
            Tokenization::Seg => "seg",
            Tokenization::TwoGram => "twogram",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "seg" => Some(Tokenization::Seg),
            "twogram" | "2gram" | "2-gram" => Some(Tokenization::TwoGram),
            _ => None,
        }
    }
}

impl fmt::Display for Tokenization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sentences of tokens for one stream of one document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    pub kind: StreamKind,
    pub tokenization: Tokenization,
    pub sentences: Vec<Vec<String>>,
}

impl TokenStream {
    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.sentences.iter().flatten().map(String::as_str)
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }
}

/// Text normalization settings shared by documents and queries.
#[derive(Debug, Clone, PartialEq)]
pub struct TextConfig {
    pub terminators: Vec<char>,
}

impl Default for TextConfig {
    fn default() -> Self {
        Self {
            terminators: DEFAULT_TERMINATORS.to_vec(),
        }
    }
}

impl TextConfig {
    pub fn with_terminators(terminators: impl IntoIterator<Item = char>) -> Self {
        Self {
            terminators: terminators.into_iter().collect(),
        }
    }

    fn is_terminator(&self, c: char) -> bool {
        self.terminators.contains(&c)
    }

    pub fn split_sentences<'a>(&self, text: &'a str) -> Vec<&'a str> {
        text.split(|c| self.is_terminator(c))
            .filter(|s| !s.is_empty())
            .collect()
    }

    /// Builds the Title, Body and TitleBody streams of `doc`.
    pub fn build_streams(&self, doc: &Document, tokenization: Tokenization) -> Result<[TokenStream; 3]> {
        let (title, body) = match tokenization {
            Tokenization::TwoGram => (
                self.twogram_sentences(&doc.title),
                self.twogram_sentences(&doc.body),
            ),
            Tokenization::Seg => match (&doc.seg_title, &doc.seg_body) {
                (Some(t), Some(b)) => (self.seg_sentences(t), self.seg_sentences(b)),
                _ => return Err(Error::MissingSegmentation(doc.entity_id.clone())),
            },
        };
        let mut both = title.clone();
        both.extend(body.iter().cloned());
        let stream = |kind, sentences| TokenStream {
            kind,
            tokenization,
            sentences,
        };
        Ok([
            stream(StreamKind::Title, title),
            stream(StreamKind::Body, body),
            stream(StreamKind::TitleBody, both),
        ])
    }

    /// Flat token list for a query, tokenized the same way as the streams it
    /// is scored against.
    pub fn query_tokens(&self, query: &Query, tokenization: Tokenization) -> Result<Vec<String>> {
        let sentences = match tokenization {
            Tokenization::TwoGram => self.twogram_sentences(&query.text),
            Tokenization::Seg => match &query.seg_text {
                Some(tokens) => self.seg_sentences(tokens),
                None => return Err(Error::MissingSegmentation(query.query_id.clone())),
            },
        };
        Ok(sentences.into_iter().flatten().collect())
    }

    fn twogram_sentences(&self, text: &str) -> Vec<Vec<String>> {
        let lowered = text.to_ascii_lowercase();
        self.split_sentences(&lowered)
            .into_iter()
            .map(strip_punctuation)
            .filter(|s| !s.is_empty())
            .map(|s| tokenize_2gram(&s))
            .collect()
    }

    /// Pre-segmented tokens: a token made only of end marks closes the current
    /// sentence, whitespace-only and fully stripped tokens are dropped.
    fn seg_sentences(&self, tokens: &[String]) -> Vec<Vec<String>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        for raw in tokens {
            if !raw.is_empty() && raw.chars().all(|c| self.is_terminator(c)) {
                if !current.is_empty() {
                    out.push(core::mem::take(&mut current));
                }
                continue;
            }
            let cleaned = strip_punctuation(&raw.to_ascii_lowercase());
            if cleaned.trim().is_empty() {
                continue;
            }
            current.push(cleaned);
        }
        if !current.is_empty() {
            out.push(current);
        }
        out
    }
}

/// Splits `text` at the default end marks, dropping empty pieces.
pub fn split_sentences(text: &str) -> Vec<&str> {
    TextConfig::default().split_sentences(text)
}

/// Unicode `P*` categories plus the fullwidth block U+FF01..=U+FF65.
pub fn is_punctuation(c: char) -> bool {
    if ('\u{FF01}'..='\u{FF65}').contains(&c) {
        return true;
    }
    matches!(
        get_general_category(c),
        GeneralCategory::ConnectorPunctuation
            | GeneralCategory::DashPunctuation
            | GeneralCategory::OpenPunctuation
            | GeneralCategory::ClosePunctuation
            | GeneralCategory::InitialPunctuation
            | GeneralCategory::FinalPunctuation
            | GeneralCategory::OtherPunctuation
    )
}

pub fn strip_punctuation(sentence: &str) -> String {
    sentence.chars().filter(|&c| !is_punctuation(c)).collect()
}

/// Width-2, stride-1 codepoint window. A single codepoint is returned as is.
pub fn tokenize_2gram(sentence: &str) -> Vec<String> {
    let chars: Vec<char> = sentence.chars().collect();
    match chars.len() {
        0 => Vec::new(),
        1 => alloc::vec![chars[0].into()],
        _ => chars.windows(2).map(|w| w.iter().collect()).collect(),
    }
}

/// Convenience wrapper using the default [`TextConfig`].
pub fn build_streams(doc: &Document, tokenization: Tokenization) -> Result<[TokenStream; 3]> {
    TextConfig::default().build_streams(doc, tokenization)
}
