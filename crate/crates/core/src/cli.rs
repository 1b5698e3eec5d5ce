//! Command-line front end.
//!
//! Passwords go to stdout, one per line. Everything else (warnings, entropy
//! notes, errors) goes to stderr.
//!
//! Exit codes: 0 success, 2 bad configuration or input, 3 generation failure.

use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::baselines::{self, BaselineError, SyllableScheme, Wordlist};
use crate::codec::{CodecError, Model};
use crate::corpus::{Corpus, CorpusError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_CODEC: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    /// Huffman-decoded character Markov model
    Markov,
    /// Uniform characters from a 77-symbol set
    Chars,
    /// Uniform words from a wordlist, each followed by a separator
    Words,
    /// Template-driven syllable words
    Syllables,
}

/// Generate pronounceable passwords with an exact number of random bits.
#[derive(Debug, Clone, Parser)]
#[command(name = "markovpass", version)]
pub struct RunConfig {
    /// Plain UTF-8 text to build the model from
    #[arg(long, env = "MARKOVPASS_CORPUS")]
    pub corpus: Option<PathBuf>,

    /// Characters of context per Markov state
    #[arg(short = 'k', long, default_value_t = 2)]
    pub order: usize,

    /// Random bits per password
    #[arg(short = 'n', long, default_value_t = 56)]
    pub bits: u32,

    /// Number of passwords to print
    #[arg(short, long, default_value_t = 1)]
    pub count: usize,

    #[arg(long, value_enum, default_value_t = Scheme::Markov)]
    pub scheme: Scheme,

    /// Initial state; required for orders above 4
    #[arg(long)]
    pub start_state: Option<String>,

    /// One word per line, for --scheme words
    #[arg(long)]
    pub wordlist: Option<PathBuf>,

    /// TESTING ONLY: derive all randomness from this seed. Output is
    /// predictable and must never be used as a real password.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Print the random bits before each password, tab separated
    #[arg(long)]
    pub show_bits: bool,

    /// Print model statistics before the passwords
    #[arg(long)]
    pub stats: bool,

    /// Print the Huffman tree of one state and exit
    #[arg(long, value_name = "STATE")]
    pub dump_state: Option<String>,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("output error: {0}")]
    Io(#[from] io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) | RunError::Corpus(_) | RunError::Baseline(_) => EXIT_CONFIG,
            RunError::Codec(e) => match e {
                CodecError::Corpus(_)
                | CodecError::ZeroOrder
                | CodecError::OrderExceedsDefaultStart(_)
                | CodecError::StartStateNotFound(_) => EXIT_CONFIG,
                _ => EXIT_CODEC,
            },
            RunError::Io(_) => EXIT_CODEC,
        }
    }
}

/// Run with explicit output handles and return the process exit code.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    match execute(config, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn rng_for(config: &RunConfig, err: &mut dyn Write) -> Result<ChaCha20Rng, RunError> {
    match config.seed {
        Some(seed) => {
            writeln!(
                err,
                "warning: --seed makes output predictable; NOT FOR REAL USE"
            )?;
            Ok(ChaCha20Rng::seed_from_u64(seed))
        }
        None => ChaCha20Rng::try_from_os_rng()
            .map_err(|e| RunError::Codec(CodecError::Rng(e.to_string()))),
    }
}

fn execute(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), RunError> {
    match config.scheme {
        Scheme::Markov => run_markov(config, out, err),
        Scheme::Chars => {
            let units = units_for(&baselines::chars_scheme(), config.bits)?;
            let mut rng = rng_for(config, err)?;
            for _ in 0..config.count {
                let p = baselines::random_chars(units as usize, &mut rng);
                emit_baseline(config, &p, out, err)?;
            }
            Ok(())
        }
        Scheme::Words => {
            let path = config
                .wordlist
                .as_ref()
                .ok_or_else(|| RunError::Config("--scheme words needs --wordlist".into()))?;
            let list = Wordlist::load(path)?;
            let units = units_for(&list.scheme(), config.bits)?;
            let mut rng = rng_for(config, err)?;
            for _ in 0..config.count {
                let p = baselines::random_words(units as usize, &list, &mut rng);
                emit_baseline(config, &p, out, err)?;
            }
            Ok(())
        }
        Scheme::Syllables => {
            let scheme = SyllableScheme::reconstructed();
            let units = units_for(&scheme.scheme(), config.bits)?;
            let mut rng = rng_for(config, err)?;
            for _ in 0..config.count {
                let p = baselines::random_syllable_words(units as usize, &scheme, &mut rng);
                emit_baseline(config, &p, out, err)?;
            }
            Ok(())
        }
    }
}

fn units_for(spec: &baselines::SchemeSpec, bits: u32) -> Result<u64, RunError> {
    spec.units_needed(bits).ok_or_else(|| {
        RunError::Config(format!(
            "scheme {} carries no entropy per unit; cannot reach {bits} bits",
            spec.name
        ))
    })
}

fn emit_baseline(
    config: &RunConfig,
    p: &baselines::Passphrase,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), RunError> {
    if config.show_bits {
        writeln!(err, "entropy: {:.2} bits", p.entropy_bits)?;
    }
    writeln!(out, "{}", p.text)?;
    Ok(())
}

fn run_markov(
    config: &RunConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), RunError> {
    let path = config
        .corpus
        .as_ref()
        .ok_or_else(|| RunError::Config("--corpus (or MARKOVPASS_CORPUS) is required".into()))?;
    let corpus = Corpus::load(path)?;
    let model = Model::build(&corpus, config.order, config.start_state.as_deref())?;

    if let Some(state) = &config.dump_state {
        let tree = model
            .tree(state)
            .ok_or_else(|| RunError::Config(format!("state {state:?} is not in the model")))?;
        write!(out, "{}", tree.dump())?;
        return Ok(());
    }

    if config.stats {
        let s = model.stats();
        writeln!(out, "order: {}", s.table.order)?;
        writeln!(out, "initial state: {:?}", s.initial_state)?;
        writeln!(out, "corpus sha256: {}", s.fingerprint)?;
        writeln!(out, "states: {}", s.table.states)?;
        writeln!(out, "transitions: {}", s.table.transitions)?;
        writeln!(
            out,
            "branching: min {} max {} mean {:.3}",
            s.table.min_branching, s.table.max_branching, s.table.mean_branching
        )?;
        writeln!(
            out,
            "entropy bits/char: {:.4}",
            s.table.entropy_bits_per_char
        )?;
        writeln!(out, "huffman bits/char: {:.4}", s.huffman_bits_per_char)?;
    }

    let mut rng = rng_for(config, err)?;
    for _ in 0..config.count {
        // generate() re-encodes and checks the bits before returning.
        let g = model.generate(config.bits as usize, &mut rng)?;
        if config.show_bits {
            writeln!(out, "{}\t{}", g.bits, g.password)?;
        } else {
            writeln!(out, "{}", g.password)?;
        }
    }
    Ok(())
}
