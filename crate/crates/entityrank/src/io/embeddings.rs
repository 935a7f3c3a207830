//! word2vec text and binary embedding files.
//!
//! Both start with an ASCII header `<vocab> <dim>`. Text rows are
//! `<word> <v1> ... <vdim>`; binary records are the word bytes, one space,
//! then `dim` little-endian `f32`s. Newlines between binary records, as
//! written by the reference word2vec tool, are skipped on read.

use std::io::{BufRead, Read, Write};
use std::path::Path;
use std::str::FromStr;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use entityrank_core::embedding::EmbeddingTable;

use super::{open, write_with};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingFormat {
    Text,
    Binary,
    #[default]
    Auto,
}

impl FromStr for EmbeddingFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "text" => Ok(Self::Text),
            "binary" => Ok(Self::Binary),
            "auto" => Ok(Self::Auto),
            _ => Err(format!("unknown embeddings format {s:?}")),
        }
    }
}

fn parse_header(path: &Path, line: &str) -> Result<(usize, usize)> {
    let bad = |msg: &str| Error::MalformedHeader {
        path: path.into(),
        msg: msg.into(),
    };
    let fields: Vec<&str> = line.split_whitespace().collect();
    let [v, d] = fields[..] else {
        return Err(bad("expected \"<vocab_size> <dim>\""));
    };
    let vocab = v.parse().map_err(|_| bad("vocab size is not an integer"))?;
    let dim: usize = d.parse().map_err(|_| bad("dimension is not an integer"))?;
    if dim == 0 {
        return Err(bad("dimension must be positive"));
    }
    Ok((vocab, dim))
}

fn read_header(path: &Path, r: &mut impl BufRead) -> Result<(usize, usize)> {
    let mut bytes = Vec::new();
    r.read_until(b'\n', &mut bytes).map_err(|e| Error::io(path, e))?;
    let line = std::str::from_utf8(&bytes).map_err(|_| Error::MalformedHeader {
        path: path.into(),
        msg: "header is not UTF-8".into(),
    })?;
    parse_header(path, line)
}

fn insert(table: &mut EmbeddingTable, path: &Path, line: usize, word: String, v: &[f64]) -> Result<()> {
    use entityrank_core::Error as CoreError;
    table.insert(word.clone(), v).map_err(|e| match e {
        CoreError::ZeroNormVector(_) => Error::ZeroNormVector { path: path.into(), word },
        CoreError::DuplicateWord(w) => Error::parse(path, line, format!("duplicate word {w:?}")),
        other => Error::parse(path, line, other.to_string()),
    })
}

fn read_text(path: &Path, r: impl BufRead, oov_seed: u64) -> Result<EmbeddingTable> {
    let mut lines = r.lines();
    let header = match lines.next() {
        Some(l) => l.map_err(|e| Error::io(path, e))?,
        None => return Err(Error::MalformedHeader { path: path.into(), msg: "empty file".into() }),
    };
    let (vocab, dim) = parse_header(path, &header)?;
    let mut table = EmbeddingTable::new(dim, oov_seed)?;
    let mut row = Vec::with_capacity(dim);
    let mut n = 1;
    for line in lines {
        let line = line.map_err(|e| Error::io(path, e))?;
        n += 1;
        if line.trim().is_empty() {
            continue;
        }
        if table.len() == vocab {
            return Err(Error::parse(path, n, format!("more than {vocab} entries")));
        }
        let mut fields = line.split_whitespace();
        let word = fields.next().unwrap_or_default().to_string();
        row.clear();
        for f in fields {
            row.push(f.parse::<f32>().map_err(|_| Error::parse(path, n, format!("bad number {f:?}")))? as f64);
        }
        if row.len() != dim {
            return Err(Error::DimensionMismatch {
                path: path.into(),
                line: n,
                expected: dim,
                found: row.len(),
            });
        }
        insert(&mut table, path, n, word, &row)?;
    }
    if table.len() < vocab {
        return Err(Error::UnexpectedEof { path: path.into() });
    }
    Ok(table)
}

fn read_binary(path: &Path, mut r: impl BufRead, oov_seed: u64) -> Result<EmbeddingTable> {
    let (vocab, dim) = read_header(path, &mut r)?;
    let mut table = EmbeddingTable::new(dim, oov_seed)?;
    let mut raw = vec![0f32; dim];
    let mut row = vec![0f64; dim];
    let mut word = Vec::new();
    for i in 0..vocab {
        word.clear();
        loop {
            let b = r.read_u8().map_err(|e| Error::io(path, e))?;
            match b {
                b' ' => break,
                b'\n' if word.is_empty() => {}
                _ => word.push(b),
            }
        }
        let w = String::from_utf8(word.clone())
            .map_err(|_| Error::parse(path, i + 2, "word is not UTF-8"))?;
        r.read_f32_into::<LittleEndian>(&mut raw).map_err(|e| Error::io(path, e))?;
        for (d, s) in row.iter_mut().zip(&raw) {
            *d = f64::from(*s);
        }
        insert(&mut table, path, i + 2, w, &row)?;
    }
    Ok(table)
}

pub fn load_word2vec_text(path: &Path, oov_seed: u64) -> Result<EmbeddingTable> {
    read_text(path, open(path)?, oov_seed)
}

pub fn load_word2vec_binary(path: &Path, oov_seed: u64) -> Result<EmbeddingTable> {
    read_binary(path, open(path)?, oov_seed)
}

/// Text when the first record after the header parses as a text row of the
/// declared width, binary otherwise.
fn looks_like_text(path: &Path) -> Result<bool> {
    let mut r = open(path)?;
    let (_, dim) = read_header(path, &mut r)?;
    let mut first = Vec::new();
    r.take(1 << 20).read_until(b'\n', &mut first).map_err(|e| Error::io(path, e))?;
    let Ok(line) = std::str::from_utf8(&first) else {
        return Ok(false);
    };
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.is_empty() {
        return Ok(true);
    }
    Ok(fields.len() == dim + 1 && fields[1..].iter().all(|f| f.parse::<f32>().is_ok()))
}

pub fn load_embeddings(path: &Path, format: EmbeddingFormat, oov_seed: u64) -> Result<EmbeddingTable> {
    match format {
        EmbeddingFormat::Text => load_word2vec_text(path, oov_seed),
        EmbeddingFormat::Binary => load_word2vec_binary(path, oov_seed),
        EmbeddingFormat::Auto if looks_like_text(path)? => load_word2vec_text(path, oov_seed),
        EmbeddingFormat::Auto => load_word2vec_binary(path, oov_seed),
    }
}

fn check_dims<'a>(path: &Path, dim: usize, rows: &[(&'a str, &'a [f32])]) -> Result<()> {
    if dim == 0 {
        return Err(Error::invalid(path, "dimension must be positive"));
    }
    for (i, (w, v)) in rows.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::DimensionMismatch { path: path.into(), line: i + 2, expected: dim, found: v.len() });
        }
        if w.is_empty() || w.contains(char::is_whitespace) {
            return Err(Error::invalid(path, format!("word {w:?} cannot be written")));
        }
    }
    Ok(())
}

pub fn write_word2vec_text(path: &Path, dim: usize, rows: &[(&str, &[f32])]) -> Result<()> {
    check_dims(path, dim, rows)?;
    write_with(path, |w| {
        writeln!(w, "{} {dim}", rows.len())?;
        for (word, v) in rows {
            write!(w, "{word}")?;
            for x in *v {
                write!(w, " {x}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    })
}

pub fn write_word2vec_binary(path: &Path, dim: usize, rows: &[(&str, &[f32])]) -> Result<()> {
    check_dims(path, dim, rows)?;
    write_with(path, |w| {
        writeln!(w, "{} {dim}", rows.len())?;
        for (word, v) in rows {
            w.write_all(word.as_bytes())?;
            w.write_all(b" ")?;
            for &x in *v {
                w.write_f32::<LittleEndian>(x)?;
            }
        }
        Ok(())
    })
}
