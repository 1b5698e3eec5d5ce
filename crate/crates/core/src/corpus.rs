//! Corpus loading and normalization.
//!
//! A corpus is the raw text a model is built from, reduced to a sequence of
//! Unicode scalar values in which every run of ASCII whitespace has become a
//! single space. Nothing else is touched: case, punctuation and any
//! Project Gutenberg header or licence text survive as-is, so strip those
//! before loading if you don't want them in the model.
//!
//! For model building the corpus is read as a ring. The window starting at
//! the last position wraps around to the first characters, which gives
//! every state at least one successor.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus file not found: {}", .0.display())]
    NotFound(PathBuf),
    #[error("could not read corpus file {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("corpus file {} is not valid UTF-8 (first bad byte at offset {offset})", .path.display())]
    InvalidEncoding { path: PathBuf, offset: usize },
    #[error("corpus is empty after normalization")]
    Empty,
    #[error("corpus of {len} characters is too short for order {order} (need at least {})", .order + 1)]
    TooShort { len: usize, order: usize },
}

/// Collapse every maximal run of ASCII whitespace to one space.
pub fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_space = false;
    for c in text.chars() {
        if c.is_ascii_whitespace() {
            if !in_space {
                out.push(' ');
            }
            in_space = true;
        } else {
            out.push(c);
            in_space = false;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    chars: Vec<char>,
}

impl Corpus {
    /// Normalize `text` into a corpus.
    pub fn from_text(text: &str) -> Result<Self, CorpusError> {
        let chars: Vec<char> = normalize(text).chars().collect();
        if chars.is_empty() {
            return Err(CorpusError::Empty);
        }
        Ok(Self { chars })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CorpusError> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|source| match source.kind() {
            io::ErrorKind::NotFound => CorpusError::NotFound(path.to_owned()),
            _ => CorpusError::Io {
                path: path.to_owned(),
                source,
            },
        })?;
        let text = String::from_utf8(bytes).map_err(|e| CorpusError::InvalidEncoding {
            path: path.to_owned(),
            offset: e.utf8_error().valid_up_to(),
        })?;
        Self::from_text(&text)
    }

    pub fn chars(&self) -> &[char] {
        &self.chars
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    /// Always false; an empty corpus cannot be constructed.
    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn text(&self) -> String {
        self.chars.iter().collect()
    }

    /// Every `(state, next)` transition of order `order`, reading the corpus
    /// circularly. Yields exactly `len()` pairs.
    pub fn circular_windows(&self, order: usize) -> Result<CircularWindows<'_>, CorpusError> {
        if self.chars.len() < order + 1 {
            return Err(CorpusError::TooShort {
                len: self.chars.len(),
                order,
            });
        }
        Ok(CircularWindows {
            chars: &self.chars,
            order,
            pos: 0,
        })
    }
}

/// Iterator returned by [`Corpus::circular_windows`].
#[derive(Debug, Clone)]
pub struct CircularWindows<'a> {
    chars: &'a [char],
    order: usize,
    pos: usize,
}

impl Iterator for CircularWindows<'_> {
    type Item = (String, char);

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.chars.len();
        if self.pos >= n {
            return None;
        }
        let i = self.pos;
        self.pos += 1;
        let state = (i..i + self.order).map(|j| self.chars[j % n]).collect();
        Some((state, self.chars[(i + self.order) % n]))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.chars.len() - self.pos;
        (left, Some(left))
    }
}

impl ExactSizeIterator for CircularWindows<'_> {}
