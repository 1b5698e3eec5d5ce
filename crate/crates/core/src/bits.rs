//! Finite bit strings and the zero-extended bit stream that drives generation.
//!
//! Bit strings render as ASCII `0`/`1`, most significant (first drawn) bit first.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid bit character {found:?} at position {position}; expected '0' or '1'")]
pub struct ParseBitsError {
    pub position: usize,
    pub found: char,
}

/// An owned, finite sequence of bits.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn with_capacity(n: usize) -> Self {
        Self(Vec::with_capacity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    /// The `width` low bits of `value`, most significant first.
    ///
    /// Enumerating `value` over `0..1 << width` visits every bit string of
    /// that length exactly once.
    pub fn from_uint(value: u64, width: usize) -> Self {
        assert!(width <= 64, "width {width} exceeds 64 bits");
        Self((0..width).rev().map(|i| (value >> i) & 1 == 1).collect())
    }

    /// Unpack bytes most-significant-bit first, keeping only the first `n` bits.
    pub fn from_bytes(bytes: &[u8], n: usize) -> Self {
        assert!(
            n <= bytes.len() * 8,
            "need {n} bits, have {}",
            bytes.len() * 8
        );
        Self(
            (0..n)
                .map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1 == 1)
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    pub fn starts_with(&self, prefix: &BitString) -> bool {
        self.0.starts_with(&prefix.0)
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        Self(bits)
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl FromStr for BitString {
    type Err = ParseBitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(position, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                found => Err(ParseBitsError { position, found }),
            })
            .collect()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Anything a Huffman walk can pull bits from.
pub trait BitSource {
    fn read_bit(&mut self) -> bool;
}

/// A finite bit string read as if followed by infinitely many zeros.
///
/// `cursor` counts real bits consumed and never exceeds `len()`; reads past
/// the end return `false` without advancing it.
#[derive(Debug, Clone)]
pub struct BitStream<'a> {
    bits: &'a BitString,
    cursor: usize,
    padding: usize,
}

impl<'a> BitStream<'a> {
    pub fn new(bits: &'a BitString) -> Self {
        Self {
            bits,
            cursor: 0,
            padding: 0,
        }
    }

    /// Real bits consumed so far.
    pub fn cursor(&self) -> usize {
        self.cursor
    }

    /// Zero bits supplied past the end of the real bits.
    pub fn padding(&self) -> usize {
        self.padding
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_exhausted(&self) -> bool {
        self.cursor >= self.bits.len()
    }
}

impl BitSource for BitStream<'_> {
    fn read_bit(&mut self) -> bool {
        match self.bits.get(self.cursor) {
            Some(bit) => {
                self.cursor += 1;
                bit
            }
            None => {
                self.padding += 1;
                false
            }
        }
    }
}

impl<I: Iterator<Item = bool>> BitSource for std::iter::Fuse<I> {
    fn read_bit(&mut self) -> bool {
        self.next().unwrap_or(false)
    }
}
