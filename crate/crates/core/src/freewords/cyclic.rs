use std::fmt;

use crate::error::{Error, Result};

use super::letter::{Alphabet, Letter};
use super::word::ReducedWord;

/// A conjugacy class, stored as the least rotation of a cyclically reduced word
/// under the letter order `a < A < b < B < ..`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclicWord {
    representative: ReducedWord,
}

impl CyclicWord {
    pub fn new(word: ReducedWord) -> Result<Self> {
        if !word.is_cyclically_reduced() {
            return Err(Error::NotCyclicallyReduced);
        }
        let shift = least_rotation(word.letters());
        let alphabet = word.alphabet();
        let letters = word.into_letters();
        let rotated = rotate(&letters, shift);
        Ok(CyclicWord {
            representative: ReducedWord::from_reduced_unchecked(alphabet, rotated),
        })
    }

    /// Conjugacy class of an arbitrary reduced word.
    pub fn of(word: &ReducedWord) -> CyclicWord {
        let (_, core) = word.cyclic_split();
        CyclicWord::new(core).expect("cyclic core is cyclically reduced")
    }

    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        CyclicWord::new(ReducedWord::parse(alphabet, text)?)
    }

    pub fn representative(&self) -> &ReducedWord {
        &self.representative
    }

    pub fn letters(&self) -> &[Letter] {
        self.representative.letters()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.representative.alphabet()
    }

    pub fn len(&self) -> usize {
        self.representative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representative.is_empty()
    }

    /// The representative rotated left by `shift` positions.
    pub fn rotation(&self, shift: usize) -> ReducedWord {
        let letters = self.letters();
        if letters.is_empty() {
            return self.representative.clone();
        }
        ReducedWord::from_reduced_unchecked(self.alphabet(), rotate(letters, shift % letters.len()))
    }

    /// Some `r` with `rotation(r)` equal to `word`, if `word` lies in this class.
    pub fn rotation_of(&self, word: &ReducedWord) -> Option<usize> {
        let n = self.len();
        if word.len() != n || word.alphabet() != self.alphabet() {
            return None;
        }
        if n == 0 {
            return Some(0);
        }
        let rep = self.letters();
        let target = word.letters();
        (0..n).find(|&r| (0..n).all(|i| rep[(r + i) % n] == target[i]))
    }

    pub fn invert(&self) -> CyclicWord {
        CyclicWord::new(self.representative.invert()).expect("inverse stays cyclically reduced")
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.representative, f)
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicWord({self})")
    }
}

fn rotate(letters: &[Letter], shift: usize) -> Vec<Letter> {
    let mut out = Vec::with_capacity(letters.len());
    out.extend_from_slice(&letters[shift..]);
    out.extend_from_slice(&letters[..shift]);
    out
}

/// Start index of the lexicographically least rotation (two-pointer scan, linear time).
pub(crate) fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    if n < 2 {
        return 0;
    }
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    #[test]
    fn least_rotation_matches_naive_minimum() {
        let alpha = f2();
        let letters: Vec<Letter> = alpha.letters().collect();
        for len in 1..=8u32 {
            for code in 0..4usize.pow(len) {
                let mut c = code;
                let s: Vec<Letter> = (0..len)
                    .map(|_| {
                        let l = letters[c % 4];
                        c /= 4;
                        l
                    })
                    .collect();
                let naive = (0..s.len()).map(|r| rotate(&s, r)).min().unwrap();
                assert_eq!(rotate(&s, least_rotation(&s)), naive);
            }
        }
    }

    #[test]
    fn rotations_compare_equal() {
        let a = CyclicWord::parse(f2(), "abAB").unwrap();
        let b = CyclicWord::parse(f2(), "BabA").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "abAB");
        let rot = ReducedWord::parse(f2(), "ABab").unwrap();
        let r = a.rotation_of(&rot).unwrap();
        assert_eq!(a.rotation(r), rot);
    }

    #[test]
    fn rejects_non_cyclically_reduced() {
        assert!(matches!(
            CyclicWord::parse(f2(), "abA"),
            Err(Error::NotCyclicallyReduced)
        ));
        let c = CyclicWord::of(&ReducedWord::parse(f2(), "abA").unwrap());
        assert_eq!(c.to_string(), "b");
    }
}
