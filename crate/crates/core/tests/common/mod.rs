#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use markovpass::{BitString, Corpus, Model};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Where the acceptance suite looks for the novel: `MARKOVPASS_NOVEL`, or
/// `tests/data/tale-of-two-cities.txt` inside this crate.
pub fn novel_path() -> PathBuf {
    std::env::var_os("MARKOVPASS_NOVEL")
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/tale-of-two-cities.txt")
        })
}

/// Cut a Project Gutenberg file down to the text between its START and END
/// markers. Files without markers are returned unchanged.
pub fn strip_gutenberg(text: &str) -> &str {
    let start = text
        .find("*** START OF")
        .and_then(|i| text[i..].find('\n').map(|j| i + j + 1))
        .unwrap_or(0);
    let end = text[start..]
        .find("*** END OF")
        .map(|j| start + j)
        .unwrap_or(text.len());
    &text[start..end]
}

pub fn load_novel() -> Result<Corpus, String> {
    let path = novel_path();
    let raw = std::fs::read_to_string(&path)
        .map_err(|e| format!("novel corpus unavailable at {} ({e})", path.display()))?;
    Corpus::from_text(strip_gutenberg(&raw)).map_err(|e| e.to_string())
}

pub fn sample_corpus() -> Corpus {
    Corpus::from_text(include_str!("../data/harbour.txt")).unwrap()
}

/// `count` reproducible random bit strings of length `n`.
pub fn random_bits(seed: u64, count: usize, n: usize) -> Vec<BitString> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut bytes = vec![0u8; n.div_ceil(8)];
            rng.fill_bytes(&mut bytes);
            BitString::from_bytes(&bytes, n)
        })
        .collect()
}

pub fn mean_len(model: &Model, inputs: &[BitString]) -> f64 {
    let total: usize = inputs
        .iter()
        .map(|b| model.decode(b).unwrap().chars().count())
        .sum();
    total as f64 / inputs.len() as f64
}

/// Minimum weighted path length over all full binary trees with the given
/// leaf weights, by exhaustive recursive bipartition.
pub fn brute_force_min_wpl(weights: &[u64]) -> u64 {
    fn cost(ws: &[u64], memo: &mut BTreeMap<Vec<u64>, u64>) -> u64 {
        if ws.len() == 1 {
            return 0;
        }
        if let Some(&c) = memo.get(ws) {
            return c;
        }
        let total: u64 = ws.iter().sum();
        let mut best = u64::MAX;
        for mask in 0..(1u32 << (ws.len() - 1)) {
            let mut left = vec![ws[0]];
            let mut right = Vec::new();
            for (i, &w) in ws.iter().enumerate().skip(1) {
                if mask >> (i - 1) & 1 == 1 {
                    left.push(w);
                } else {
                    right.push(w);
                }
            }
            if !right.is_empty() {
                best = best.min(cost(&left, memo) + cost(&right, memo) + total);
            }
        }
        memo.insert(ws.to_vec(), best);
        best
    }
    cost(weights, &mut BTreeMap::new())
}
