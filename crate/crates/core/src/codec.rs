//! Turning random bits into text and back.
//!
//! A [`Model`] holds one Huffman tree per state. Decoding walks the tree of
//! the current state with bits from the input, emits the leaf character and
//! slides the state window; the walk is a bijection because two inputs that
//! first differ at some bit pick different leaves at that step. Encoding runs
//! the same trees in the compression direction and recovers the bits.
//!
//! Decoding stops at the first step where every real input bit has been read.
//! A tree walk cut short by the end of input is completed with zeros, so the
//! encoder may return a few trailing zero bits past the original length.
//! [`Model::verify_roundtrip`] accounts for exactly that.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::TryRngCore;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bits::{BitStream, BitString};
use crate::corpus::{Corpus, CorpusError};
use crate::huffman::{CodeTree, HuffmanError};
use crate::markov::{TableStats, TransitionTable};

/// Default initial state; order k starts from its first k characters.
pub const DEFAULT_START: &str = "The ";

#[derive(Debug, Error)]
pub enum CodecError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("model order must be at least 1")]
    ZeroOrder,
    #[error("no default initial state for order {0}; pass an explicit start state of that length")]
    OrderExceedsDefaultStart(usize),
    #[error("start state {0:?} never occurs in the corpus")]
    StartStateNotFound(String),
    #[error("transition table is not closed; state {0:?} has no way out")]
    NotClosed(String),
    #[error(transparent)]
    Huffman(#[from] HuffmanError),
    #[error("text does not begin with the initial state {expected:?}")]
    BadPrefix { expected: String },
    #[error("the corpus never follows {state:?} with {next:?}")]
    UnknownTransition { state: String, next: char },
    #[error("model stuck in a cycle of forced transitions after {steps} steps with bits left")]
    DeterministicCycle { steps: usize },
    #[error("round trip failed for bits {0}")]
    RoundTripFailed(BitString),
    #[error("random source failed: {0}")]
    Rng(String),
}

/// A built, immutable generator.
#[derive(Debug, Clone)]
pub struct Model {
    order: usize,
    initial_state: String,
    trees: BTreeMap<String, CodeTree>,
    corpus_len: usize,
    fingerprint: String,
    table_stats: TableStats,
}

/// Output of [`Model::generate`]: the password and the bits that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub password: String,
    pub bits: BitString,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelStats {
    pub table: TableStats,
    /// Expected Huffman codeword length per emitted character, weighted by
    /// how often each transition occurs in the corpus.
    pub huffman_bits_per_char: f64,
    pub initial_state: String,
    pub fingerprint: String,
}

impl Model {
    /// Build the model of order `order` over `corpus`.
    ///
    /// Without `start`, the initial state is the first `order` characters of
    /// [`DEFAULT_START`], which only exists for orders up to 4.
    pub fn build(corpus: &Corpus, order: usize, start: Option<&str>) -> Result<Self, CodecError> {
        if order == 0 {
            return Err(CodecError::ZeroOrder);
        }
        let table = TransitionTable::from_corpus(corpus, order)?;
        let initial_state = match start {
            Some(s) => s.to_string(),
            None if order <= DEFAULT_START.chars().count() => {
                DEFAULT_START.chars().take(order).collect()
            }
            None => return Err(CodecError::OrderExceedsDefaultStart(order)),
        };
        if !table.contains_state(&initial_state) {
            return Err(CodecError::StartStateNotFound(initial_state));
        }
        Self::from_table(&table, initial_state, fingerprint(corpus))
    }

    fn from_table(
        table: &TransitionTable,
        initial_state: String,
        fingerprint: String,
    ) -> Result<Self, CodecError> {
        if let Some(state) = table.open_state() {
            return Err(CodecError::NotClosed(state.to_string()));
        }
        let trees = table
            .rows()
            .iter()
            .map(|(state, dist)| Ok((state.clone(), CodeTree::build(dist)?)))
            .collect::<Result<BTreeMap<_, _>, HuffmanError>>()?;
        Ok(Self {
            order: table.order(),
            initial_state,
            trees,
            corpus_len: table.total() as usize,
            fingerprint,
            table_stats: table.stats(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn initial_state(&self) -> &str {
        &self.initial_state
    }

    pub fn tree(&self, state: &str) -> Option<&CodeTree> {
        self.trees.get(state)
    }

    pub fn trees(&self) -> &BTreeMap<String, CodeTree> {
        &self.trees
    }

    /// SHA-256 of the normalized corpus text, hex encoded.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn stats(&self) -> ModelStats {
        let mut weighted_bits = 0u64;
        let mut total = 0u64;
        for tree in self.trees.values() {
            weighted_bits += tree.weighted_path_length();
            total += tree.total_weight();
        }
        ModelStats {
            table: self.table_stats.clone(),
            huffman_bits_per_char: weighted_bits as f64 / total.max(1) as f64,
            initial_state: self.initial_state.clone(),
            fingerprint: self.fingerprint.clone(),
        }
    }

    pub fn decode(&self, bits: &BitString) -> Result<String, CodecError> {
        self.decode_stream(&mut BitStream::new(bits))
    }

    /// Decode from an already opened stream, leaving its cursor at the end.
    pub fn decode_stream(&self, stream: &mut BitStream<'_>) -> Result<String, CodecError> {
        let mut out = self.initial_state.clone();
        let mut state = self.initial_state.clone();
        let mut forced_run = 0usize;
        while !stream.is_exhausted() {
            let tree = self
                .trees
                .get(&state)
                .ok_or_else(|| CodecError::NotClosed(state.clone()))?;
            let (next, used) = tree.traverse(stream);
            if used == 0 {
                forced_run += 1;
                if forced_run > self.corpus_len {
                    return Err(CodecError::DeterministicCycle { steps: forced_run });
                }
            } else {
                forced_run = 0;
            }
            out.push(next);
            let first = state.chars().next().map_or(0, char::len_utf8);
            state.drain(..first);
            state.push(next);
        }
        Ok(out)
    }

    /// Concatenated codewords of every transition in `text`.
    pub fn encode(&self, text: &str) -> Result<BitString, CodecError> {
        let rest = text
            .strip_prefix(self.initial_state.as_str())
            .ok_or_else(|| CodecError::BadPrefix {
                expected: self.initial_state.clone(),
            })?;
        let mut bits = BitString::new();
        let mut state = self.initial_state.clone();
        for next in rest.chars() {
            let unknown = || CodecError::UnknownTransition {
                state: state.clone(),
                next,
            };
            let code = self
                .trees
                .get(&state)
                .ok_or_else(unknown)?
                .codeword(next)
                .map_err(|_| unknown())?;
            bits.extend_from(code);
            let first = state.chars().next().map_or(0, char::len_utf8);
            state.drain(..first);
            state.push(next);
        }
        Ok(bits)
    }

    /// Decode then re-encode `bits`: the result must start with `bits` and
    /// continue with nothing but zeros.
    pub fn verify_roundtrip(&self, bits: &BitString) -> bool {
        let Ok(text) = self.decode(bits) else {
            return false;
        };
        let Ok(back) = self.encode(&text) else {
            return false;
        };
        back.len() >= bits.len()
            && back.starts_with(bits)
            && back.iter().skip(bits.len()).all(|b| !b)
    }

    /// Draw `n` bits from `rng`, decode them and check the round trip.
    pub fn generate<R>(&self, n: usize, rng: &mut R) -> Result<Generated, CodecError>
    where
        R: TryRngCore + ?Sized,
    {
        let mut bytes = vec![0u8; n.div_ceil(8)];
        rng.try_fill_bytes(&mut bytes)
            .map_err(|e| CodecError::Rng(e.to_string()))?;
        let bits = BitString::from_bytes(&bytes, n);
        let password = self.decode(&bits)?;
        if !self.verify_roundtrip(&bits) {
            return Err(CodecError::RoundTripFailed(bits));
        }
        Ok(Generated { password, bits })
    }
}

fn fingerprint(corpus: &Corpus) -> String {
    let digest = Sha256::digest(corpus.text().as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use std::collections::BTreeSet;

    fn model(text: &str, k: usize, start: Option<&str>) -> Model {
        Model::build(&Corpus::from_text(text).unwrap(), k, start).unwrap()
    }

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn aabb() -> Model {
        model("aabb", 1, Some("a"))
    }

    #[test]
    fn fixture_trees() {
        let m = aabb();
        assert_eq!(m.trees().keys().collect::<Vec<_>>(), ["a", "b"]);
        for state in ["a", "b"] {
            let t = m.tree(state).unwrap();
            assert_eq!(t.codeword('a').unwrap().to_string(), "0");
            assert_eq!(t.codeword('b').unwrap().to_string(), "1");
        }
    }

    #[test]
    fn decode_fixture() {
        let m = aabb();
        assert_eq!(m.decode(&bits("")).unwrap(), "a");
        assert_eq!(m.decode(&bits("10")).unwrap(), "aba");
        assert_eq!(m.encode("a").unwrap(), bits(""));
        assert_eq!(m.encode("aba").unwrap(), bits("10"));
    }

    #[test]
    fn decode_consumes_every_bit_once() {
        let m = model("the cat sat on the mat. the end", 2, Some("th"));
        for v in 0..1u64 << 10 {
            let b = BitString::from_uint(v, 10);
            let mut s = BitStream::new(&b);
            m.decode_stream(&mut s).unwrap();
            assert_eq!(s.cursor(), 10);
        }
    }

    #[test]
    fn forced_transitions_are_free_and_trailing_ones_dropped() {
        // "ab" then "c" is forced; from "c" the choice is 'a' or 'd'.
        let m = model("abcabd", 1, Some("a"));
        assert_eq!(m.tree("a").unwrap().leaf_count(), 1);
        assert_eq!(m.tree("b").unwrap().leaf_count(), 2);
        // a→b forced, b: c="0"; c→a forced, stop (no bits left).
        assert_eq!(m.decode(&bits("0")).unwrap(), "abc");
        assert_eq!(m.decode(&bits("1")).unwrap(), "abd");
        assert_eq!(m.decode(&bits("")).unwrap(), "a");
    }

    #[test]
    fn zero_padding_completes_last_walk() {
        let m = model("abcd", 1, Some("a"));
        // Every state is forced; no choice exists anywhere.
        assert!(matches!(
            m.decode(&bits("1")),
            Err(CodecError::DeterministicCycle { .. })
        ));

        let m = model("aaabac", 1, Some("a"));
        // State 'a' has a:2, b:1, c:1 → a="0", b="10", c="11".
        assert_eq!(
            m.tree("a").unwrap().codeword('b').unwrap().to_string(),
            "10"
        );
        assert_eq!(m.decode(&bits("1")).unwrap(), "ab");
        assert_eq!(m.encode("ab").unwrap(), bits("10"));
        assert!(m.verify_roundtrip(&bits("1")));
    }

    #[test]
    fn encode_errors() {
        let m = aabb();
        assert!(matches!(m.encode("ba"), Err(CodecError::BadPrefix { .. })));
        assert!(matches!(
            m.encode("abx"),
            Err(CodecError::UnknownTransition { next: 'x', .. })
        ));
    }

    #[test]
    fn build_errors() {
        let c = Corpus::from_text("aabb").unwrap();
        assert!(matches!(
            Model::build(&c, 0, None),
            Err(CodecError::ZeroOrder)
        ));
        assert!(matches!(
            Model::build(&c, 1, None),
            Err(CodecError::StartStateNotFound(s)) if s == "T"
        ));
        assert!(matches!(
            Model::build(&c, 1, Some("ab")),
            Err(CodecError::StartStateNotFound(_))
        ));
        assert!(matches!(
            Model::build(&c, 4, Some("aabb")),
            Err(CodecError::Corpus(CorpusError::TooShort { .. }))
        ));
        let long = Corpus::from_text("The quick brown fox").unwrap();
        assert!(matches!(
            Model::build(&long, 5, None),
            Err(CodecError::OrderExceedsDefaultStart(5))
        ));
        assert_eq!(
            Model::build(&long, 5, Some("quick"))
                .unwrap()
                .initial_state(),
            "quick"
        );
        for k in 1..=4 {
            let m = Model::build(&long, k, None).unwrap();
            assert_eq!(m.initial_state(), &"The "[..k]);
        }
    }

    #[test]
    fn hand_built_open_table_is_rejected() {
        let rows = [("a".to_string(), [('b', 1u64)].into_iter().collect())]
            .into_iter()
            .collect();
        let t = TransitionTable::from_rows(1, rows);
        assert!(matches!(
            Model::from_table(&t, "a".into(), String::new()),
            Err(CodecError::NotClosed(s)) if s == "a"
        ));
    }

    #[test]
    fn exhaustive_bijection_on_fixture() {
        let m = aabb();
        for n in 0..=8usize {
            let mut seen = BTreeSet::new();
            for v in 0..1u64 << n {
                let b = BitString::from_uint(v, n);
                assert!(m.verify_roundtrip(&b));
                assert!(seen.insert(m.decode(&b).unwrap()));
            }
            assert_eq!(seen.len(), 1 << n);
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let m = aabb();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let g = m.generate(12, &mut rng).unwrap();
        // Both trees map 0→'a', 1→'b', so the password spells the bits.
        let spelled: String = std::iter::once('a')
            .chain(g.bits.iter().map(|b| if b { 'b' } else { 'a' }))
            .collect();
        assert_eq!(g.password, spelled);
        assert_eq!(g.bits.len(), 12);
        assert_eq!(g.bits.to_string(), "000110010100");
        assert_eq!(g.password, "aaaabbaababaa");

        let again = m.generate(12, &mut ChaCha20Rng::seed_from_u64(7)).unwrap();
        assert_eq!(again, g);

        let empty = m.generate(0, &mut rng).unwrap();
        assert_eq!(empty.password, "a");
        assert!(empty.bits.is_empty());
    }

    struct Broken;

    impl TryRngCore for Broken {
        type Error = std::io::Error;
        fn try_next_u32(&mut self) -> Result<u32, Self::Error> {
            Err(std::io::Error::other("no entropy"))
        }
        fn try_next_u64(&mut self) -> Result<u64, Self::Error> {
            Err(std::io::Error::other("no entropy"))
        }
        fn try_fill_bytes(&mut self, _: &mut [u8]) -> Result<(), Self::Error> {
            Err(std::io::Error::other("no entropy"))
        }
    }

    #[test]
    fn rng_failure_is_reported() {
        assert!(matches!(
            aabb().generate(8, &mut Broken),
            Err(CodecError::Rng(msg)) if msg == "no entropy"
        ));
    }

    #[test]
    fn stats_and_fingerprint() {
        let m = aabb();
        let s = m.stats();
        assert_eq!(s.table.states, 2);
        assert!((s.huffman_bits_per_char - 1.0).abs() < 1e-12);
        assert_eq!(m.fingerprint().len(), 64);
        assert_eq!(m.fingerprint(), model("aabb", 2, Some("aa")).fingerprint());
        assert_ne!(m.fingerprint(), model("abab", 1, Some("a")).fingerprint());
    }
}
