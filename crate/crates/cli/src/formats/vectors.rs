//! Word vector files.
//!
//! Text: a `V D` header line, then `word v1 .. vD` per line.
//! Binary: magic `FNWV`, u32 version, u64 V, u64 D, V length-prefixed
//! (u32) UTF-8 words, then V·D little-endian f32 values row by row.

use std::path::Path;

use fakenews_core::embeddings::{EmbeddingMatrix, Vocabulary};
use fakenews_core::features::WordVectors;
use fakenews_core::linalg::Matrix;

use crate::error::{CliError, Result};

pub const BINARY_MAGIC: &[u8; 4] = b"FNWV";
pub const BINARY_VERSION: u32 = 1;

pub fn to_text(v: &WordVectors) -> String {
    let mut out = format!("{} {}\n", v.vocab.len(), v.dim());
    for (i, w) in v.vocab.words().iter().enumerate() {
        out.push_str(w);
        for x in v.matrix.vector(i) {
            out.push(' ');
            out.push_str(&x.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn parse_text(text: &str) -> std::result::Result<WordVectors, String> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or("empty file")?;
    let mut h = header.split_whitespace();
    let (Some(v), Some(d), None) = (h.next(), h.next(), h.next()) else {
        return Err("line 1: expected header `V D`".into());
    };
    let v: usize = v.parse().map_err(|_| format!("line 1: bad vocabulary size `{v}`"))?;
    let d: usize = d.parse().map_err(|_| format!("line 1: bad dimension `{d}`"))?;
    let mut words = Vec::with_capacity(v);
    let mut data = Vec::with_capacity(v * d);
    for (idx, line) in lines {
        let line_no = idx + 1;
        let mut fields = line.split_whitespace();
        let word = fields.next().expect("non-blank line");
        let before = data.len();
        for f in fields {
            let x: f64 = f.parse().map_err(|_| format!("line {line_no}: bad value `{f}`"))?;
            if !x.is_finite() {
                return Err(format!("line {line_no}: non-finite value"));
            }
            data.push(x);
        }
        if data.len() - before != d {
            return Err(format!("line {line_no}: expected {d} values, found {}", data.len() - before));
        }
        words.push(word.to_string());
    }
    if words.len() != v {
        return Err(format!("header announces {v} words, file has {}", words.len()));
    }
    build(words, d, data)
}

fn build(words: Vec<String>, d: usize, data: Vec<f64>) -> std::result::Result<WordVectors, String> {
    let n = words.len();
    let vocab = Vocabulary::from_words(words).map_err(|e| e.to_string())?;
    let matrix = Matrix::from_vec(n, d, data).ok_or("matrix size mismatch")?;
    let matrix = EmbeddingMatrix::from_input(matrix).map_err(|e| e.to_string())?;
    WordVectors::new(vocab, matrix).map_err(|e| e.to_string())
}

pub fn to_binary(v: &WordVectors) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(BINARY_MAGIC);
    out.extend_from_slice(&BINARY_VERSION.to_le_bytes());
    out.extend_from_slice(&(v.vocab.len() as u64).to_le_bytes());
    out.extend_from_slice(&(v.dim() as u64).to_le_bytes());
    for w in v.vocab.words() {
        out.extend_from_slice(&(w.len() as u32).to_le_bytes());
        out.extend_from_slice(w.as_bytes());
    }
    for i in 0..v.vocab.len() {
        for &x in v.matrix.vector(i) {
            out.extend_from_slice(&(x as f32).to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> std::result::Result<&'a [u8], String> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or("truncated file")?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> std::result::Result<u32, String> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> std::result::Result<u64, String> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

pub fn parse_binary(bytes: &[u8]) -> std::result::Result<WordVectors, String> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4)? != BINARY_MAGIC {
        return Err("not a binary vector file".into());
    }
    let version = r.u32()?;
    if version != BINARY_VERSION {
        return Err(format!("unsupported version {version}"));
    }
    let v = usize::try_from(r.u64()?).map_err(|_| "vocabulary too large")?;
    let d = usize::try_from(r.u64()?).map_err(|_| "dimension too large")?;
    let mut words = Vec::with_capacity(v.min(1 << 20));
    for _ in 0..v {
        let len = r.u32()? as usize;
        let w = std::str::from_utf8(r.take(len)?).map_err(|_| "word is not UTF-8")?;
        words.push(w.to_string());
    }
    let count = v.checked_mul(d).ok_or("matrix too large")?;
    let raw = r.take(count.checked_mul(4).ok_or("matrix too large")?)?;
    let data: Vec<f64> = raw.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")) as f64).collect();
    if data.iter().any(|x| !x.is_finite()) {
        return Err("non-finite value".into());
    }
    if r.pos != bytes.len() {
        return Err("trailing bytes after matrix".into());
    }
    build(words, d, data)
}

/// Reads either format, chosen by the magic bytes.
pub fn load_vectors(path: &Path) -> Result<WordVectors> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let parsed = if bytes.starts_with(BINARY_MAGIC) {
        parse_binary(&bytes)
    } else {
        std::str::from_utf8(&bytes).map_err(|_| "file is not UTF-8".to_string()).and_then(parse_text)
    };
    parsed.map_err(|m| CliError::format(path, m))
}

/// Writes the binary format for `.bin` paths, text otherwise.
pub fn save_vectors(path: &Path, v: &WordVectors) -> Result<()> {
    let bytes = if path.extension().is_some_and(|e| e == "bin") { to_binary(v) } else { to_text(v).into_bytes() };
    super::write_atomic(path, &bytes)
}
