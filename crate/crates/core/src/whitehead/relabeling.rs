use std::fmt;

use crate::error::{Error, Result};
use crate::freewords::{Alphabet, Letter, ReducedWord};

/// Largest rank for which all `2^k · k!` relabelings are enumerated.
pub const MAX_ENUMERATION_RANK: usize = 8;

/// An automorphism permuting `X^{±1}`: given by the images of `x_1, .., x_k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relabeling {
    alphabet: Alphabet,
    /// `images[i]` is the image of `x_{i+1}`.
    images: Vec<Letter>,
}

impl Relabeling {
    pub fn identity(alphabet: Alphabet) -> Self {
        Relabeling {
            alphabet,
            images: alphabet.generators().collect(),
        }
    }

    pub fn from_images(alphabet: Alphabet, images: &[Letter]) -> Result<Self> {
        if images.len() != alphabet.rank() {
            return Err(Error::InvalidRelabeling(format!(
                "expected {} images, got {}",
                alphabet.rank(),
                images.len()
            )));
        }
        let mut hit = vec![false; alphabet.rank()];
        for &l in images {
            if !alphabet.contains(l) {
                return Err(Error::LetterOutOfRange {
                    index: l.index(),
                    rank: alphabet.rank(),
                });
            }
            if std::mem::replace(&mut hit[l.index() - 1], true) {
                return Err(Error::InvalidRelabeling(format!(
                    "generator {} is hit twice",
                    Letter::new(l.index() as i32)
                )));
            }
        }
        Ok(Relabeling {
            alphabet,
            images: images.to_vec(),
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn images(&self) -> &[Letter] {
        &self.images
    }

    #[inline]
    pub fn apply_letter(&self, l: Letter) -> Letter {
        let img = self.images[l.index() - 1];
        if l.is_positive() {
            img
        } else {
            img.inverse()
        }
    }

    pub fn apply(&self, w: &ReducedWord) -> Result<ReducedWord> {
        super::check_same(self.alphabet, w)?;
        let letters = w.letters().iter().map(|&l| self.apply_letter(l)).collect();
        ReducedWord::from_reduced(self.alphabet, letters)
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, l)| l.signed() == i as i32 + 1)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Relabeling) -> Relabeling {
        Relabeling {
            alphabet: self.alphabet,
            images: other.images.iter().map(|&l| self.apply_letter(l)).collect(),
        }
    }

    pub fn inverse(&self) -> Relabeling {
        let mut images = vec![Letter::new(1); self.alphabet.rank()];
        for (i, &l) in self.images.iter().enumerate() {
            let x = Letter::new(i as i32 + 1);
            images[l.index() - 1] = if l.is_positive() { x } else { x.inverse() };
        }
        Relabeling {
            alphabet: self.alphabet,
            images,
        }
    }

    /// All `2^k · k!` relabelings; the identity comes first.
    pub fn enumerate(alphabet: Alphabet) -> Result<Vec<Relabeling>> {
        let k = alphabet.rank();
        if k > MAX_ENUMERATION_RANK {
            return Err(Error::RankTooLarge(k));
        }
        let mut perms = Vec::new();
        let mut current: Vec<usize> = (1..=k).collect();
        permutations(&mut current, 0, &mut perms);
        perms.sort();
        let mut out = Vec::with_capacity(perms.len() << k);
        for p in perms {
            for signs in 0..(1u32 << k) {
                let images = p
                    .iter()
                    .enumerate()
                    .map(|(i, &g)| {
                        let l = Letter::new(g as i32);
                        if signs >> i & 1 == 1 {
                            l.inverse()
                        } else {
                            l
                        }
                    })
                    .collect();
                out.push(Relabeling { alphabet, images });
            }
        }
        Ok(out)
    }

    /// Parses `R(a->b,b->A)`; generators not mentioned are fixed.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Parse {
            what: "relabeling",
            token: text.to_string(),
            reason: reason.into(),
        };
        let body = text
            .trim()
            .strip_prefix("R(")
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| bad("expected R(..)"))?;
        let mut images: Vec<Letter> = alphabet.generators().collect();
        let mut set = vec![false; alphabet.rank()];
        for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (from, to) = part.split_once("->").ok_or_else(|| bad("expected x->y"))?;
            let from = single_letter(alphabet, from).ok_or_else(|| bad("bad source letter"))?;
            let to = single_letter(alphabet, to).ok_or_else(|| bad("bad image letter"))?;
            let (from, to) = if from.is_positive() {
                (from, to)
            } else {
                (from.inverse(), to.inverse())
            };
            if std::mem::replace(&mut set[from.index() - 1], true) {
                return Err(bad("generator mapped twice"));
            }
            images[from.index() - 1] = to;
        }
        Relabeling::from_images(alphabet, &images)
    }
}

fn single_letter(alphabet: Alphabet, s: &str) -> Option<Letter> {
    match alphabet.parse_letters(s).ok()?.as_slice() {
        [l] => Some(*l),
        _ => None,
    }
}

fn permutations(current: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if start == current.len() {
        out.push(current.clone());
        return;
    }
    for i in start..current.len() {
        current.swap(start, i);
        permutations(current, start + 1, out);
        current.swap(start, i);
    }
}

impl fmt::Display for Relabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                let x = Letter::new(i as i32 + 1);
                format!(
                    "{}->{}",
                    self.alphabet.format_letters(&[x]),
                    self.alphabet.format_letters(&[l])
                )
            })
            .collect();
        write!(f, "R({})", parts.join(","))
    }
}

impl fmt::Debug for Relabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    #[test]
    fn counts() {
        for (k, n) in [(1, 2), (2, 8), (3, 48), (4, 384)] {
            let all = Relabeling::enumerate(Alphabet::new(k).unwrap()).unwrap();
            assert_eq!(all.len(), n);
            assert!(all[0].is_identity());
            assert_eq!(all.iter().filter(|r| r.is_identity()).count(), 1);
            let distinct: std::collections::BTreeSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), n);
        }
        assert!(matches!(
            Relabeling::enumerate(Alphabet::new(9).unwrap()),
            Err(Error::RankTooLarge(9))
        ));
    }

    #[test]
    fn swap_acts_letterwise() {
        let swap = Relabeling::parse(f2(), "R(a->b,b->a)").unwrap();
        let w = ReducedWord::parse(f2(), "abab").unwrap();
        assert_eq!(swap.apply(&w).unwrap().to_string(), "baba");
        assert_eq!(swap.to_string(), "R(a->b,b->a)");
    }

    #[test]
    fn group_laws() {
        let all = Relabeling::enumerate(Alphabet::new(3).unwrap()).unwrap();
        let w = ReducedWord::parse(Alphabet::new(3).unwrap(), "abCAcB").unwrap();
        for r in &all {
            assert!(r.compose(&r.inverse()).is_identity());
            assert!(r.inverse().compose(r).is_identity());
            assert_eq!(Relabeling::parse(r.alphabet(), &r.to_string()).unwrap(), *r);
            for s in all.iter().step_by(7) {
                let lhs = r.compose(s).apply(&w).unwrap();
                let rhs = r.apply(&s.apply(&w).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Relabeling::from_images(f2(), &[Letter::new(1), Letter::new(-1)]).is_err());
        assert!(Relabeling::parse(f2(), "R(a->b)").is_err());
        assert!(Relabeling::parse(f2(), "R(A->b,b->a)").is_ok());
    }
}
