//! Order-k character transition counts.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::corpus::{Corpus, CorpusError};

/// Next-character counts for one state.
pub type Distribution = BTreeMap<char, u64>;

/// Raw transition counts of an order-k character model.
///
/// Rows are keyed by the k-character state and hold exact integer counts.
/// Nothing is smoothed or pruned; a successor seen once keeps its count of 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionTable {
    order: usize,
    rows: BTreeMap<String, Distribution>,
}

/// Summary numbers for `--stats`.
#[derive(Debug, Clone, PartialEq)]
pub struct TableStats {
    pub order: usize,
    pub states: usize,
    pub transitions: u64,
    pub min_branching: usize,
    pub max_branching: usize,
    pub mean_branching: f64,
    /// Conditional entropy of the next character given the state, in bits.
    pub entropy_bits_per_char: f64,
}

impl TransitionTable {
    /// Count `(state, next)` pairs. `windows` should come from
    /// [`Corpus::circular_windows`] with the same order.
    pub fn build<I>(windows: I, order: usize) -> Self
    where
        I: IntoIterator<Item = (String, char)>,
    {
        let mut rows: BTreeMap<String, Distribution> = BTreeMap::new();
        for (state, next) in windows {
            debug_assert_eq!(state.chars().count(), order);
            *rows.entry(state).or_default().entry(next).or_insert(0) += 1;
        }
        Self { order, rows }
    }

    pub fn from_corpus(corpus: &Corpus, order: usize) -> Result<Self, CorpusError> {
        Ok(Self::build(corpus.circular_windows(order)?, order))
    }

    /// Wrap hand-built rows without any checks.
    pub fn from_rows(order: usize, rows: BTreeMap<String, Distribution>) -> Self {
        Self { order, rows }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> &BTreeMap<String, Distribution> {
        &self.rows
    }

    pub fn row(&self, state: &str) -> Option<&Distribution> {
        self.rows.get(state)
    }

    pub fn contains_state(&self, state: &str) -> bool {
        self.rows.contains_key(state)
    }

    pub fn count(&self, state: &str, next: char) -> u64 {
        self.row(state)
            .and_then(|d| d.get(&next))
            .copied()
            .unwrap_or(0)
    }

    pub fn state_total(&self, state: &str) -> u64 {
        self.row(state).map_or(0, |d| d.values().sum())
    }

    /// Sum of every count. Equals the corpus length for circular windows.
    pub fn total(&self) -> u64 {
        self.rows.values().flat_map(|d| d.values()).sum()
    }

    /// True iff every successor of every state leads to a state that has a
    /// row of its own, so a walk can never get stuck.
    pub fn is_closed(&self) -> bool {
        self.open_state().is_none()
    }

    /// The first state (in key order) that is empty or has a successor
    /// leading outside the table.
    pub fn open_state(&self) -> Option<&str> {
        self.rows
            .iter()
            .find(|(state, dist)| {
                dist.is_empty()
                    || dist
                        .iter()
                        .any(|(&next, &n)| n > 0 && !self.contains_state(&shift(state, next)))
            })
            .map(|(state, _)| state.as_str())
    }

    pub fn stats(&self) -> TableStats {
        let total = self.total();
        let branching = self.rows.values().map(BTreeMap::len);
        let mut entropy = 0.0;
        for dist in self.rows.values() {
            let row_total: u64 = dist.values().sum();
            for &n in dist.values() {
                let p_joint = n as f64 / total as f64;
                entropy -= p_joint * (n as f64 / row_total as f64).log2();
            }
        }
        let states = self.rows.len();
        TableStats {
            order: self.order,
            states,
            transitions: total,
            min_branching: branching.clone().min().unwrap_or(0),
            max_branching: branching.clone().max().unwrap_or(0),
            mean_branching: if states == 0 {
                0.0
            } else {
                branching.sum::<usize>() as f64 / states as f64
            },
            entropy_bits_per_char: entropy,
        }
    }

    /// Canonical text form: one line per transition, `state<TAB>next<TAB>count`,
    /// in sorted order. Identical tables serialize to identical bytes.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (state, dist) in &self.rows {
            for (next, n) in dist {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}",
                    state.escape_debug(),
                    next.escape_debug(),
                    n
                );
            }
        }
        out
    }
}

/// Drop the first character of `state` and append `next`.
pub fn shift(state: &str, next: char) -> String {
    let mut chars = state.chars();
    chars.next();
    let mut out = String::with_capacity(state.len() + next.len_utf8());
    out.push_str(chars.as_str());
    out.push(next);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(text: &str, k: usize) -> TransitionTable {
        TransitionTable::from_corpus(&Corpus::from_text(text).unwrap(), k).unwrap()
    }

    fn dist(pairs: &[(char, u64)]) -> Distribution {
        pairs.iter().copied().collect()
    }

    #[test]
    fn tiny_fixture_counts() {
        let t = table("aabb", 1);
        let expected: BTreeMap<String, Distribution> = [
            ("a".to_string(), dist(&[('a', 1), ('b', 1)])),
            ("b".to_string(), dist(&[('a', 1), ('b', 1)])),
        ]
        .into_iter()
        .collect();
        assert_eq!(t.rows(), &expected);
        assert_eq!(t.total(), 4);

        let t = table("ab", 1);
        assert_eq!(t.row("a"), Some(&dist(&[('b', 1)])));
        assert_eq!(t.row("b"), Some(&dist(&[('a', 1)])));
    }

    #[test]
    fn closure_check() {
        assert!(table("aabb", 1).is_closed());
        assert!(table("abc", 2).is_closed());
        let broken = TransitionTable::from_rows(
            1,
            [("a".to_string(), dist(&[('b', 1)]))].into_iter().collect(),
        );
        assert!(!broken.is_closed());
    }

    #[test]
    fn shift_handles_multibyte() {
        assert_eq!(shift("ab", 'c'), "bc");
        assert_eq!(shift("\u{e9}x", '\u{2014}'), "x\u{2014}");
        assert_eq!(shift("a", 'b'), "b");
    }

    #[test]
    fn stats_on_fixture() {
        let s = table("aabb", 1).stats();
        assert_eq!(s.states, 2);
        assert_eq!(s.transitions, 4);
        assert_eq!(s.min_branching, 2);
        assert_eq!(s.max_branching, 2);
        assert!((s.entropy_bits_per_char - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn counts_conserve_and_close(s in "[a-e ,.]{2,60}", k in 1usize..5) {
            let c = Corpus::from_text(&s).unwrap();
            prop_assume!(k < c.len());
            let t = TransitionTable::from_corpus(&c, k).unwrap();
            prop_assert_eq!(t.total(), c.len() as u64);
            prop_assert!(t.is_closed());
            prop_assert!(t.rows().values().all(|d| d.values().sum::<u64>() >= 1));
            // Determinism.
            let again = TransitionTable::from_corpus(&c, k).unwrap();
            prop_assert_eq!(t.to_tsv(), again.to_tsv());
        }
    }
}
