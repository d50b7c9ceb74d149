use std::fmt;

use crate::error::{Error, Result};

use super::letter::{Alphabet, Letter};

/// A freely reduced word: no letter is immediately followed by its inverse.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn empty(alphabet: Alphabet) -> Self {
        ReducedWord {
            alphabet,
            letters: Vec::new(),
        }
    }

    /// Wraps letters that are already known to be reduced.
    pub(crate) fn from_reduced_unchecked(alphabet: Alphabet, letters: Vec<Letter>) -> Self {
        debug_assert!(is_reduced(&letters));
        ReducedWord { alphabet, letters }
    }

    /// Wraps `letters` if they form a reduced word, without reducing.
    pub fn from_reduced(alphabet: Alphabet, letters: Vec<Letter>) -> Result<Self> {
        check_alphabet(alphabet, &letters)?;
        if !is_reduced(&letters) {
            return Err(Error::Parse {
                what: "reduced word",
                token: alphabet.format_letters(&letters),
                reason: "word contains a cancelling pair".into(),
            });
        }
        Ok(ReducedWord { alphabet, letters })
    }

    /// Parses the word text format and freely reduces the result.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        free_reduce(alphabet, &alphabet.parse_letters(text)?)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    pub fn invert(&self) -> ReducedWord {
        ReducedWord {
            alphabet: self.alphabet,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Group product, freely reduced.
    pub fn concat(&self, other: &ReducedWord) -> Result<ReducedWord> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.rank(),
                right: other.alphabet.rank(),
            });
        }
        let mut cancel = 0;
        while cancel < self.len()
            && cancel < other.len()
            && self.letters[self.len() - 1 - cancel] == other.letters[cancel].inverse()
        {
            cancel += 1;
        }
        let mut letters = Vec::with_capacity(self.len() + other.len() - 2 * cancel);
        letters.extend_from_slice(&self.letters[..self.len() - cancel]);
        letters.extend_from_slice(&other.letters[cancel..]);
        Ok(ReducedWord {
            alphabet: self.alphabet,
            letters,
        })
    }

    pub fn pow(&self, exponent: i64) -> ReducedWord {
        let base = if exponent < 0 { self.invert() } else { self.clone() };
        let mut acc = ReducedWord::empty(self.alphabet);
        for _ in 0..exponent.unsigned_abs() {
            acc = acc.concat(&base).expect("same alphabet");
        }
        acc
    }

    /// The `m`-prefix `a_1 .. a_m`.
    pub fn prefix(&self, m: usize) -> Result<ReducedWord> {
        if m > self.len() {
            return Err(Error::PrefixOutOfRange { m, len: self.len() });
        }
        Ok(ReducedWord {
            alphabet: self.alphabet,
            letters: self.letters[..m].to_vec(),
        })
    }

    /// Splits `w = c · core · c⁻¹` with `core` cyclically reduced and `c` maximal.
    pub fn cyclic_split(&self) -> (ReducedWord, ReducedWord) {
        let n = self.len();
        let mut i = 0;
        while 2 * i + 1 < n && self.letters[i] == self.letters[n - 1 - i].inverse() {
            i += 1;
        }
        let conj = ReducedWord {
            alphabet: self.alphabet,
            letters: self.letters[..i].to_vec(),
        };
        let core = ReducedWord {
            alphabet: self.alphabet,
            letters: self.letters[i..n - i].to_vec(),
        };
        (conj, core)
    }

    /// Length of the cyclic reduction.
    pub fn cyclic_length(&self) -> usize {
        let n = self.len();
        let mut i = 0;
        while 2 * i + 1 < n && self.letters[i] == self.letters[n - 1 - i].inverse() {
            i += 1;
        }
        n - 2 * i
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.format_letters(&self.letters))
    }
}

impl fmt::Debug for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ReducedWord({self})")
    }
}

pub(crate) fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| w[1] != w[0].inverse())
}

fn check_alphabet(alphabet: Alphabet, letters: &[Letter]) -> Result<()> {
    match letters.iter().find(|l| !alphabet.contains(**l)) {
        Some(l) => Err(Error::LetterOutOfRange {
            index: l.index(),
            rank: alphabet.rank(),
        }),
        None => Ok(()),
    }
}

/// Appends `l` to a reduced stack, cancelling against the top if possible.
#[inline]
pub(crate) fn push_reduced(stack: &mut Vec<Letter>, l: Letter) {
    if stack.last() == Some(&l.inverse()) {
        stack.pop();
    } else {
        stack.push(l);
    }
}

/// Free reduction of an arbitrary letter sequence.
pub fn free_reduce(alphabet: Alphabet, letters: &[Letter]) -> Result<ReducedWord> {
    check_alphabet(alphabet, letters)?;
    let mut stack = Vec::with_capacity(letters.len());
    for &l in letters {
        push_reduced(&mut stack, l);
    }
    Ok(ReducedWord {
        alphabet,
        letters: stack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn w(s: &str) -> ReducedWord {
        ReducedWord::parse(f2(), s).unwrap()
    }

    /// Repeatedly deletes the leftmost cancelling pair; independent of the stack pass.
    fn rewrite_oracle(letters: &[Letter]) -> Vec<Letter> {
        let mut cur = letters.to_vec();
        loop {
            match cur.windows(2).position(|p| p[1] == p[0].inverse()) {
                Some(i) => {
                    cur.drain(i..i + 2);
                }
                None => return cur,
            }
        }
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w("aAb").to_string(), "b");
        assert_eq!(w("abBa").to_string(), "aa");
        assert_eq!(w("abBA").to_string(), "1");
        assert!(ReducedWord::parse(f2(), "abc").is_err());
    }

    #[test]
    fn reduce_matches_rewriting_on_all_short_sequences() {
        let alpha = f2();
        let letters: Vec<Letter> = alpha.letters().collect();
        for len in 0..=10u32 {
            let total = 4usize.pow(len);
            for code in 0..total {
                let mut c = code;
                let seq: Vec<Letter> = (0..len)
                    .map(|_| {
                        let l = letters[c % 4];
                        c /= 4;
                        l
                    })
                    .collect();
                let reduced = free_reduce(alpha, &seq).unwrap();
                assert_eq!(reduced.letters(), rewrite_oracle(&seq).as_slice());
                assert_eq!(reduced.len() % 2, seq.len() % 2);
            }
        }
    }

    #[test]
    fn concat_examples() {
        assert_eq!(w("ab").concat(&w("Ba")).unwrap(), w("aa"));
        assert_eq!(w("a").concat(&w("b")).unwrap(), w("ab"));
        let x = w("abAAb");
        assert!(x.concat(&x.invert()).unwrap().is_empty());
        let other = ReducedWord::parse(Alphabet::new(3).unwrap(), "c").unwrap();
        assert!(matches!(
            x.concat(&other),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w("ab").invert(), w("BA"));
        assert_eq!(w("1").invert(), w("1"));
    }

    #[test]
    fn prefix_examples() {
        let x = w("abab");
        assert_eq!(x.prefix(2).unwrap(), w("ab"));
        assert_eq!(x.prefix(0).unwrap(), w("1"));
        assert_eq!(x.prefix(4).unwrap(), x);
        assert!(matches!(
            x.prefix(5),
            Err(Error::PrefixOutOfRange { m: 5, len: 4 })
        ));
    }

    #[test]
    fn cyclic_split_examples() {
        let (c, core) = w("abA").cyclic_split();
        assert_eq!((c, core), (w("a"), w("b")));
        let x = w("abab");
        assert_eq!(x.cyclic_split(), (w("1"), x.clone()));
        let (c, core) = w("abaBA").cyclic_split();
        assert_eq!((c, core), (w("ab"), w("a")));
        assert_eq!(w("abaBA").cyclic_length(), 1);
    }

    #[test]
    fn cyclic_split_agrees_with_conjugator_search() {
        // For every reduced word of length <= 6 the split is the shortest
        // conjugator c for which c⁻¹ w c is cyclically reduced.
        let alpha = f2();
        let mut words = vec![Vec::<Letter>::new()];
        for _ in 0..6 {
            let mut next = Vec::new();
            for wd in &words {
                for l in alpha.letters() {
                    if wd.last() != Some(&l.inverse()) {
                        let mut e = wd.clone();
                        e.push(l);
                        next.push(e);
                    }
                }
            }
            for wd in &next {
                let word = ReducedWord::from_reduced(alpha, wd.clone()).unwrap();
                let (conj, core) = word.cyclic_split();
                // every conjugator up to |w|, shortest first
                let mut found = None;
                'search: for len in 0..=word.len() {
                    for cand in all_words(alpha, len) {
                        let conj_core = cand.invert().concat(&word).unwrap().concat(&cand).unwrap();
                        if conj_core.is_cyclically_reduced()
                            && word.len() == conj_core.len() + 2 * cand.len()
                        {
                            found = Some((cand, conj_core));
                            break 'search;
                        }
                    }
                }
                let (c2, core2) = found.expect("some conjugator works");
                assert_eq!(conj, c2, "word {word}");
                assert_eq!(core, core2);
            }
            words = next;
        }
    }

    fn all_words(alpha: Alphabet, len: usize) -> Vec<ReducedWord> {
        let mut words = vec![Vec::<Letter>::new()];
        for _ in 0..len {
            words = words
                .into_iter()
                .flat_map(|wd| {
                    alpha
                        .letters()
                        .filter(|l| wd.last() != Some(&l.inverse()))
                        .map(|l| {
                            let mut e = wd.clone();
                            e.push(l);
                            e
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        words
            .into_iter()
            .map(|l| ReducedWord::from_reduced(alpha, l).unwrap())
            .collect()
    }
}
