//! Uniform-choice password schemes for comparison, and entropy arithmetic.
//!
//! Each scheme makes a fixed number of independent uniform choices from
//! fixed sets, so every output is equally likely and the entropy is the log2
//! of the number of distinct outputs.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num::{BigUint, One, ToPrimitive};
use rand::Rng;
use thiserror::Error;

/// 26 lowercase, 26 uppercase, 10 digits and 15 punctuation marks.
pub const CHARACTER_SET: &str =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ1234567890!^-=+[]@#$%&*()";

/// Four separators, two bits each.
pub const SEPARATORS: [char; 4] = [',', ';', '.', '-'];

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("wordlist is empty")]
    EmptyWordlist,
    #[error("wordlist file not found: {}", .0.display())]
    NotFound(PathBuf),
    #[error("could not read wordlist {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("wordlist {} is not valid UTF-8", .0.display())]
    InvalidEncoding(PathBuf),
    #[error("invalid syllable scheme: {0}")]
    InvalidScheme(String),
}

/// `choices × log2(set_size)`.
pub fn entropy_bits(set_size: u64, choices: u64) -> f64 {
    assert!(set_size >= 1, "set size must be positive");
    choices as f64 * (set_size as f64).log2()
}

/// A scheme built from repeated uniform draws of one unit (a character, a
/// word with its separator, a syllable word) from a set of known size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeSpec {
    pub name: &'static str,
    pub unit_set_size: BigUint,
}

impl SchemeSpec {
    pub fn new(name: &'static str, unit_set_size: impl Into<BigUint>) -> Self {
        Self {
            name,
            unit_set_size: unit_set_size.into(),
        }
    }

    pub fn bits_per_unit(&self) -> f64 {
        log2_big(&self.unit_set_size)
    }

    /// Smallest `u` with `size^u >= 2^target_bits`, compared exactly.
    /// `None` when the unit carries no entropy and the target is positive.
    pub fn units_needed(&self, target_bits: u32) -> Option<u64> {
        let goal = BigUint::one() << target_bits;
        if self.unit_set_size <= BigUint::one() {
            return (target_bits == 0).then_some(0);
        }
        let mut units = 0u64;
        let mut space = BigUint::one();
        while space < goal {
            space *= &self.unit_set_size;
            units += 1;
        }
        Some(units)
    }

    pub fn entropy_bits(&self, units: u64) -> f64 {
        units as f64 * self.bits_per_unit()
    }
}

fn log2_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 53 {
        return n.to_f64().unwrap().log2();
    }
    // Keep the top 53 bits for the mantissa.
    let shift = bits - 53;
    (n >> shift).to_f64().unwrap().log2() + shift as f64
}

/// A generated baseline password and its entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct Passphrase {
    pub text: String,
    pub entropy_bits: f64,
}

pub fn chars_scheme() -> SchemeSpec {
    SchemeSpec::new("chars", CHARACTER_SET.chars().count() as u64)
}

/// `n` uniform draws from [`CHARACTER_SET`].
pub fn random_chars<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Passphrase {
    let set: Vec<char> = CHARACTER_SET.chars().collect();
    let text = (0..n)
        .map(|_| set[rng.random_range(0..set.len())])
        .collect();
    Passphrase {
        text,
        entropy_bits: entropy_bits(set.len() as u64, n as u64),
    }
}

/// One word per line; blank lines and surrounding whitespace are dropped,
/// and repeated words are kept once so the entropy is not overstated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wordlist {
    words: Vec<String>,
}

impl Wordlist {
    pub fn from_text(text: &str) -> Result<Self, BaselineError> {
        let mut seen = std::collections::HashSet::new();
        let words: Vec<String> = text
            .lines()
            .map(str::trim)
            .filter(|w| !w.is_empty() && seen.insert(*w))
            .map(str::to_owned)
            .collect();
        if words.is_empty() {
            return Err(BaselineError::EmptyWordlist);
        }
        Ok(Self { words })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, BaselineError> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|source| match source.kind() {
            io::ErrorKind::NotFound => BaselineError::NotFound(path.to_owned()),
            _ => BaselineError::Io {
                path: path.to_owned(),
                source,
            },
        })?;
        let text = String::from_utf8(bytes)
            .map_err(|_| BaselineError::InvalidEncoding(path.to_owned()))?;
        Self::from_text(&text)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    /// A unit is one word plus one separator.
    pub fn scheme(&self) -> SchemeSpec {
        SchemeSpec::new("words", self.words.len() as u64 * SEPARATORS.len() as u64)
    }
}

/// `count` uniform words, each followed by a uniform separator.
pub fn random_words<R: Rng + ?Sized>(count: usize, wordlist: &Wordlist, rng: &mut R) -> Passphrase {
    let mut text = String::new();
    for _ in 0..count {
        text.push_str(&wordlist.words[rng.random_range(0..wordlist.len())]);
        text.push(SEPARATORS[rng.random_range(0..SEPARATORS.len())]);
    }
    Passphrase {
        text,
        entropy_bits: count as f64 * (log2_big(&BigUint::from(wordlist.len())) + 2.0),
    }
}

/// Template-driven syllable words. In a template `a` marks a vowel slot and
/// `b` a consonant slot; every template must have the same number of each so
/// all words carry the same entropy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyllableScheme {
    templates: Vec<String>,
    vowels: Vec<String>,
    consonants: Vec<String>,
    vowel_slots: usize,
    consonant_slots: usize,
}

/// The one template given in the original description is `abbabbaa`; the
/// other twelve are reconstructed with the same 4 + 4 slot balance.
pub const RECONSTRUCTED_TEMPLATES: [&str; 13] = [
    "abbabbaa", "babababa", "abababab", "babaabab", "bababaab", "abbababa", "babbabaa", "ababbaba",
    "baabbaba", "abbaabab", "babaabba", "ababbaab", "baababab",
];

pub const VOWELS: [&str; 5] = ["a", "e", "i", "o", "u"];

/// 19 single letters plus three `h` digraphs. `h` never stands alone, so a
/// word still splits into its consonant units in exactly one way.
pub const CONSONANTS: [&str; 22] = [
    "b", "c", "d", "f", "g", "j", "k", "l", "m", "n", "p", "r", "s", "t", "v", "w", "x", "y", "z",
    "ch", "sh", "th",
];

impl SyllableScheme {
    pub fn new<T, V, C>(templates: T, vowels: V, consonants: C) -> Result<Self, BaselineError>
    where
        T: IntoIterator,
        T::Item: Into<String>,
        V: IntoIterator,
        V::Item: Into<String>,
        C: IntoIterator,
        C::Item: Into<String>,
    {
        let templates: Vec<String> = templates.into_iter().map(Into::into).collect();
        let vowels: Vec<String> = vowels.into_iter().map(Into::into).collect();
        let consonants: Vec<String> = consonants.into_iter().map(Into::into).collect();
        let invalid = |m: &str| Err(BaselineError::InvalidScheme(m.to_string()));

        if templates.is_empty() || vowels.is_empty() || consonants.is_empty() {
            return invalid("templates, vowels and consonants must all be non-empty");
        }
        let slots = |t: &str| (t.matches('a').count(), t.matches('b').count());
        let (vowel_slots, consonant_slots) = slots(&templates[0]);
        for t in &templates {
            if t.chars().any(|c| c != 'a' && c != 'b') {
                return invalid("templates may only contain 'a' and 'b'");
            }
            if slots(t) != (vowel_slots, consonant_slots) {
                return invalid("every template needs the same vowel and consonant counts");
            }
        }
        let distinct =
            |v: &[String]| v.iter().collect::<std::collections::HashSet<_>>().len() == v.len();
        if !distinct(&templates) || !distinct(&vowels) || !distinct(&consonants) {
            return invalid("templates, vowels and consonants must not repeat");
        }
        Ok(Self {
            templates,
            vowels,
            consonants,
            vowel_slots,
            consonant_slots,
        })
    }

    pub fn reconstructed() -> Self {
        Self::new(RECONSTRUCTED_TEMPLATES, VOWELS, CONSONANTS).expect("built-in scheme is valid")
    }

    pub fn templates(&self) -> &[String] {
        &self.templates
    }

    /// Number of distinct choice sequences for one word.
    pub fn word_space(&self) -> BigUint {
        BigUint::from(self.templates.len())
            * BigUint::from(self.vowels.len()).pow(self.vowel_slots as u32)
            * BigUint::from(self.consonants.len()).pow(self.consonant_slots as u32)
    }

    pub fn bits_per_word(&self) -> f64 {
        log2_big(&self.word_space())
    }

    pub fn scheme(&self) -> SchemeSpec {
        SchemeSpec::new("syllables", self.word_space())
    }

    /// Spell out one word from explicit choices: a template index, then one
    /// index per vowel slot and one per consonant slot, in slot order.
    pub fn word_from_choices(
        &self,
        template: usize,
        vowels: &[usize],
        consonants: &[usize],
    ) -> String {
        assert_eq!(vowels.len(), self.vowel_slots);
        assert_eq!(consonants.len(), self.consonant_slots);
        let (mut v, mut c) = (vowels.iter(), consonants.iter());
        self.templates[template]
            .chars()
            .map(|slot| match slot {
                'a' => self.vowels[*v.next().unwrap()].as_str(),
                _ => self.consonants[*c.next().unwrap()].as_str(),
            })
            .collect()
    }

    pub fn random_word<R: Rng + ?Sized>(&self, rng: &mut R) -> String {
        let template = rng.random_range(0..self.templates.len());
        let vowels: Vec<usize> = (0..self.vowel_slots)
            .map(|_| rng.random_range(0..self.vowels.len()))
            .collect();
        let consonants: Vec<usize> = (0..self.consonant_slots)
            .map(|_| rng.random_range(0..self.consonants.len()))
            .collect();
        self.word_from_choices(template, &vowels, &consonants)
    }
}

/// `count` syllable words separated by spaces.
pub fn random_syllable_words<R: Rng + ?Sized>(
    count: usize,
    scheme: &SyllableScheme,
    rng: &mut R,
) -> Passphrase {
    let words: Vec<String> = (0..count).map(|_| scheme.random_word(rng)).collect();
    Passphrase {
        text: words.join(" "),
        entropy_bits: count as f64 * scheme.bits_per_word(),
    }
}
