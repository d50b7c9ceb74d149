use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::whitehead::Relabeling;

use super::count_reduced_words;
use super::cyclic::CyclicWord;
use super::letter::{Alphabet, Letter};
use super::word::ReducedWord;

/// How many missing words a coverage report lists before truncating.
pub const MISSING_LIST_LIMIT: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Directed,
    Undirected,
}

impl std::str::FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "directed" => Ok(Orientation::Directed),
            "undirected" => Ok(Orientation::Undirected),
            _ => Err(Error::Parse {
                what: "orientation",
                token: s.to_string(),
                reason: "expected directed or undirected".into(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub covered: bool,
    pub length: usize,
    /// `γ_L`.
    pub total: BigUint,
    pub missing_count: BigUint,
    /// The first missing words in letter order, at most [`MISSING_LIST_LIMIT`].
    pub missing: Vec<ReducedWord>,
}

impl CoverageReport {
    pub fn truncated(&self) -> bool {
        BigUint::from(self.missing.len()) < self.missing_count
    }
}

/// Cyclic windows of length `len` of `g` (wrapping around as often as needed).
fn cyclic_windows(letters: &[Letter], len: usize) -> Vec<Vec<Letter>> {
    let n = letters.len();
    if n == 0 {
        return Vec::new();
    }
    (0..n)
        .map(|s| (0..len).map(|i| letters[(s + i) % n]).collect())
        .collect()
}

/// Whether every reduced word of length `len` is a subword of the cyclic word `g`.
///
/// Windows wrap around; if `len > |g|` they wrap more than once. In undirected
/// mode a word also counts when its inverse occurs.
pub fn covers_all_subwords(
    g: &CyclicWord,
    len: usize,
    orientation: Orientation,
) -> Result<CoverageReport> {
    if len == 0 {
        return Err(Error::InvalidParams("coverage length must be at least 1".into()));
    }
    let alphabet = g.alphabet();
    let mut present = cyclic_windows(g.letters(), len);
    if orientation == Orientation::Undirected {
        let inv = g.invert();
        present.extend(cyclic_windows(inv.letters(), len));
    }
    present.sort();
    present.dedup();
    let total = count_reduced_words(alphabet.rank(), len);
    let missing_count = &total - BigUint::from(present.len());
    let missing = if missing_count.is_zero() {
        Vec::new()
    } else {
        first_missing(alphabet, len, &present, MISSING_LIST_LIMIT)
    };
    Ok(CoverageReport {
        covered: missing_count.is_zero(),
        length: len,
        total,
        missing_count,
        missing,
    })
}

/// Depth-first search in letter order over reduced words of length `len`,
/// pruning prefixes whose whole subtree is present. `present` is sorted.
fn first_missing(
    alphabet: Alphabet,
    len: usize,
    present: &[Vec<Letter>],
    limit: usize,
) -> Vec<ReducedWord> {
    let branch = alphabet.size() as u64 - 1;
    let subtree = |depth: usize| -> Option<u64> {
        // words extending a nonempty prefix of length `depth`
        let mut s = 1u64;
        for _ in depth..len {
            s = s.checked_mul(branch)?;
        }
        Some(s)
    };
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(len);
    dfs(alphabet, len, present, limit, &subtree, &mut prefix, &mut out);
    out
}

fn dfs(
    alphabet: Alphabet,
    len: usize,
    present: &[Vec<Letter>],
    limit: usize,
    subtree: &dyn Fn(usize) -> Option<u64>,
    prefix: &mut Vec<Letter>,
    out: &mut Vec<ReducedWord>,
) {
    if out.len() >= limit {
        return;
    }
    if prefix.len() == len {
        if present.is_empty() {
            out.push(ReducedWord::from_reduced_unchecked(alphabet, prefix.clone()));
        }
        return;
    }
    for l in alphabet.letters() {
        if prefix.last() == Some(&l.inverse()) {
            continue;
        }
        prefix.push(l);
        let lo = present.partition_point(|w| w[..prefix.len()] < prefix[..]);
        let hi = present.partition_point(|w| w[..prefix.len()] <= prefix[..]);
        let full = subtree(prefix.len()).is_some_and(|s| (hi - lo) as u64 == s);
        if !full {
            dfs(alphabet, len, &present[lo..hi], limit, subtree, prefix, out);
        }
        prefix.pop();
        if out.len() >= limit {
            return;
        }
    }
}

/// A window position inside the collection `w_1, w_1⁻¹, .., w_p, w_p⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordPosition {
    pub word: usize,
    pub inverted: bool,
    pub offset: usize,
}

impl fmt::Display for WordPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.inverted { "^-1" } else { "" };
        write!(f, "w{}{}@{}", self.word + 1, sign, self.offset)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collision {
    pub subword: ReducedWord,
    pub first: WordPosition,
    pub second: WordPosition,
}

/// The 2p words `w_i^{±1}` in order.
fn signed_collection(words: &[ReducedWord]) -> Vec<(WordPosition, ReducedWord)> {
    let mut out = Vec::with_capacity(2 * words.len());
    for (i, w) in words.iter().enumerate() {
        for inverted in [false, true] {
            let word = if inverted { w.invert() } else { w.clone() };
            let pos = WordPosition {
                word: i,
                inverted,
                offset: 0,
            };
            out.push((pos, word));
        }
    }
    out
}

fn window_index(
    collection: &[(WordPosition, ReducedWord)],
    m: usize,
) -> std::result::Result<(), (WordPosition, WordPosition)> {
    let mut seen: HashMap<&[Letter], WordPosition> = HashMap::new();
    for (base, w) in collection {
        let letters = w.letters();
        if letters.len() < m {
            continue;
        }
        for offset in 0..=letters.len() - m {
            let pos = WordPosition { offset, ..*base };
            let key = &letters[offset..offset + m];
            if let Some(prev) = seen.get(key) {
                return Err((*prev, pos));
            }
            seen.insert(key, pos);
        }
    }
    Ok(())
}

fn subword_at(words: &[ReducedWord], pos: WordPosition, m: usize) -> ReducedWord {
    let w = &words[pos.word];
    let w = if pos.inverted { w.invert() } else { w.clone() };
    ReducedWord::from_reduced_unchecked(
        w.alphabet(),
        w.letters()[pos.offset..pos.offset + m].to_vec(),
    )
}

/// Whether all length-`m` windows of the words and their inverses are distinct.
///
/// Returns the first collision found (scanning `w_1, w_1⁻¹, w_2, ..`).
pub fn all_subwords_distinct(words: &[ReducedWord], m: usize) -> Result<Option<Collision>> {
    if m == 0 {
        return Err(Error::InvalidParams("window length must be at least 1".into()));
    }
    let collection = signed_collection(words);
    match window_index(&collection, m) {
        Ok(_) => Ok(None),
        Err((first, second)) => Ok(Some(Collision {
            subword: subword_at(words, first, m),
            first,
            second,
        })),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelabelMatch {
    pub subword: ReducedWord,
    pub image: ReducedWord,
    pub at: WordPosition,
    pub image_at: WordPosition,
}

/// Whether some length-`m` window `u` of the words and their inverses has its
/// image `φ(u)` occurring as a window too. `φ(u) = u` counts.
pub fn relabel_match_exists(
    words: &[ReducedWord],
    m: usize,
    phi: &Relabeling,
) -> Result<Option<RelabelMatch>> {
    if m == 0 {
        return Err(Error::InvalidParams("window length must be at least 1".into()));
    }
    if phi.is_identity() {
        return Err(Error::IdentityRelabeling);
    }
    let collection = signed_collection(words);
    let mut index: HashMap<Vec<Letter>, WordPosition> = HashMap::new();
    for (base, w) in &collection {
        let letters = w.letters();
        if letters.len() < m {
            continue;
        }
        for offset in 0..=letters.len() - m {
            index
                .entry(letters[offset..offset + m].to_vec())
                .or_insert(WordPosition { offset, ..*base });
        }
    }
    let mut image = vec![Letter::new(1); m];
    for (base, w) in &collection {
        let letters = w.letters();
        if letters.len() < m {
            continue;
        }
        for offset in 0..=letters.len() - m {
            for (dst, src) in image.iter_mut().zip(&letters[offset..offset + m]) {
                *dst = phi.apply_letter(*src);
            }
            if let Some(&image_at) = index.get(&image) {
                let at = WordPosition { offset, ..*base };
                let alphabet = w.alphabet();
                return Ok(Some(RelabelMatch {
                    subword: ReducedWord::from_reduced_unchecked(
                        alphabet,
                        letters[offset..offset + m].to_vec(),
                    ),
                    image: ReducedWord::from_reduced_unchecked(alphabet, image.clone()),
                    at,
                    image_at,
                }));
            }
        }
    }
    Ok(None)
}
