use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A free-group alphabet `X = {x_1, .., x_k}` together with its inverses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    rank: usize,
}

impl Alphabet {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidRank(rank));
        }
        Ok(Alphabet { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of letters in `X^{±1}`.
    pub fn size(&self) -> usize {
        2 * self.rank
    }

    pub fn letter(&self, index: usize, inverse: bool) -> Result<Letter> {
        if index == 0 || index > self.rank {
            return Err(Error::LetterOutOfRange {
                index,
                rank: self.rank,
            });
        }
        let l = Letter(index as i32);
        Ok(if inverse { l.inverse() } else { l })
    }

    pub fn contains(&self, l: Letter) -> bool {
        l.index() <= self.rank
    }

    /// All letters of `X^{±1}` in the fixed order `a < A < b < B < ..`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + Clone {
        (0..self.size()).map(Letter::from_slot)
    }

    pub fn generators(&self) -> impl Iterator<Item = Letter> + Clone {
        (1..=self.rank as i32).map(Letter)
    }

    /// Parses a letter sequence in the word text format. No reduction is performed.
    pub fn parse_letters(&self, text: &str) -> Result<Vec<Letter>> {
        let trimmed = text.trim();
        if trimmed == "1" || trimmed.is_empty() {
            return Ok(Vec::new());
        }
        if self.rank > 26 {
            return trimmed
                .split_whitespace()
                .map(|tok| self.parse_token(tok))
                .collect();
        }
        let mut out = Vec::with_capacity(trimmed.len());
        for c in trimmed.chars() {
            if c.is_whitespace() {
                continue;
            }
            let l = Letter::from_char(c).ok_or_else(|| Error::Parse {
                what: "word",
                token: c.to_string(),
                reason: "expected a letter a..z or A..Z".into(),
            })?;
            if !self.contains(l) {
                return Err(Error::LetterOutOfRange {
                    index: l.index(),
                    rank: self.rank,
                });
            }
            out.push(l);
        }
        Ok(out)
    }

    fn parse_token(&self, tok: &str) -> Result<Letter> {
        let bad = |reason: &str| Error::Parse {
            what: "word",
            token: tok.to_string(),
            reason: reason.into(),
        };
        let (inverse, digits) = match tok.as_bytes().first() {
            Some(b'x') => (false, &tok[1..]),
            Some(b'X') => (true, &tok[1..]),
            _ => return Err(bad("expected a token xN or XN")),
        };
        let index: usize = digits.parse().map_err(|_| bad("expected a generator index"))?;
        self.letter(index, inverse)
    }

    pub fn format_letters(&self, letters: &[Letter]) -> String {
        if letters.is_empty() {
            return "1".to_string();
        }
        if self.rank > 26 {
            letters
                .iter()
                .map(|l| l.token())
                .collect::<Vec<_>>()
                .join(" ")
        } else {
            letters.iter().map(|l| l.to_char()).collect()
        }
    }

    /// Smallest alphabet (of rank at least `min_rank`) containing every letter of `text`.
    pub fn infer(text: &str, min_rank: usize) -> Result<Alphabet> {
        let trimmed = text.trim();
        let mut rank = min_rank.max(1);
        if trimmed.contains(char::is_whitespace) && trimmed.starts_with(['x', 'X']) {
            for tok in trimmed.split_whitespace() {
                let idx: usize = tok
                    .get(1..)
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| Error::Parse {
                        what: "word",
                        token: tok.to_string(),
                        reason: "expected a token xN or XN".into(),
                    })?;
                rank = rank.max(idx);
            }
        } else {
            for c in trimmed.chars().filter(|c| c.is_ascii_alphabetic()) {
                rank = rank.max((c.to_ascii_lowercase() as u8 - b'a') as usize + 1);
            }
        }
        Alphabet::new(rank)
    }
}

/// A letter of `X^{±1}`, encoded as a signed generator index.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i32);

impl Letter {
    /// Builds a letter from its signed index. Panics on zero.
    pub fn new(signed_index: i32) -> Letter {
        assert!(signed_index != 0, "letter index must be nonzero");
        Letter(signed_index)
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    /// Generator index in `1..=k`.
    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Position in the order `a, A, b, B, ..`; dense in `0..2k`.
    pub fn slot(self) -> usize {
        (self.index() - 1) * 2 + usize::from(self.0 < 0)
    }

    pub fn from_slot(slot: usize) -> Letter {
        let l = Letter((slot / 2 + 1) as i32);
        if slot % 2 == 1 {
            l.inverse()
        } else {
            l
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        if c.is_ascii_lowercase() {
            Some(Letter((c as u8 - b'a') as i32 + 1))
        } else if c.is_ascii_uppercase() {
            Some(Letter(-((c as u8 - b'A') as i32 + 1)))
        } else {
            None
        }
    }

    /// Character form, valid for generator indices up to 26.
    pub fn to_char(self) -> char {
        let base = if self.is_positive() { b'a' } else { b'A' };
        (base + (self.index() - 1) as u8) as char
    }

    pub fn token(self) -> String {
        if self.is_positive() {
            format!("x{}", self.index())
        } else {
            format!("X{}", self.index())
        }
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.slot().cmp(&other.slot())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index() <= 26 {
            write!(f, "{}", self.to_char())
        } else {
            write!(f, "{}", self.token())
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
