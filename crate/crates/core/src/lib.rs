//! Pronounceable passwords with an exact entropy guarantee.
//!
//! A uniformly random bit string is decoded through per-state Huffman trees
//! of an order-k character Markov model. Frequent transitions cost few bits
//! and rare ones cost many, so the output reads like the source text while
//! the map from bit strings to passwords stays a bijection: a password built
//! from `n` random bits is one of exactly `2^n` equally likely outputs.
//!
//! ```
//! use markovpass::{BitString, Corpus, Model};
//!
//! let corpus = Corpus::from_text("The cat sat on the mat. The dog sat too.").unwrap();
//! let model = Model::build(&corpus, 2, None).unwrap();
//! let bits: BitString = "1011001110".parse().unwrap();
//! let password = model.decode(&bits).unwrap();
//! assert!(password.starts_with("Th"));
//! assert!(model.verify_roundtrip(&bits));
//! ```
//!
//! The security argument assumes the attacker knows the corpus. Only the
//! random bits are secret.

pub mod baselines;
pub mod bits;
pub mod cli;
pub mod codec;
pub mod corpus;
pub mod huffman;
pub mod markov;

pub use bits::{BitSource, BitStream, BitString};
pub use codec::{CodecError, Generated, Model, ModelStats};
pub use corpus::{Corpus, CorpusError};
pub use huffman::{CodeTree, HuffmanError};
pub use markov::{TableStats, TransitionTable};
