use std::fmt;

use crate::error::{Error, Result};
use crate::freewords::{push_reduced, Alphabet, CyclicWord, FrequencyProfile, Letter, ReducedWord};

/// Largest rank supported by the cut-set bitmask.
pub const MAX_WHITEHEAD_RANK: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WhiteheadKind {
    /// `A = {a}`.
    Identity,
    /// `A = X^{±1} ∖ {a⁻¹}`: conjugation `g ↦ a⁻¹ g a`.
    Inner,
    Proper,
}

/// The Whitehead automorphism `(A, a)` with `a ∈ A`, `a⁻¹ ∉ A`.
///
/// For `x ∉ {a, a⁻¹}`: `x ↦ xa` if only `x ∈ A`, `x ↦ a⁻¹x` if only `x⁻¹ ∈ A`,
/// `x ↦ a⁻¹xa` if both, and `x ↦ x` otherwise; `a ↦ a`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WhiteheadAuto {
    alphabet: Alphabet,
    multiplier: Letter,
    /// Bit `slot(x)` is set iff `x ∈ A`.
    cut: u64,
}

impl WhiteheadAuto {
    pub fn new(alphabet: Alphabet, multiplier: Letter, cut_set: &[Letter]) -> Result<Self> {
        let mut cut = 0u64;
        if alphabet.rank() > MAX_WHITEHEAD_RANK {
            return Err(Error::InvalidWhitehead(format!(
                "rank {} exceeds {MAX_WHITEHEAD_RANK}",
                alphabet.rank()
            )));
        }
        for &l in cut_set {
            if !alphabet.contains(l) {
                return Err(Error::LetterOutOfRange {
                    index: l.index(),
                    rank: alphabet.rank(),
                });
            }
            cut |= 1 << l.slot();
        }
        Self::from_mask(alphabet, multiplier, cut)
    }

    pub(crate) fn from_mask(alphabet: Alphabet, multiplier: Letter, cut: u64) -> Result<Self> {
        if !alphabet.contains(multiplier) {
            return Err(Error::LetterOutOfRange {
                index: multiplier.index(),
                rank: alphabet.rank(),
            });
        }
        if cut >> multiplier.slot() & 1 == 0 {
            return Err(Error::InvalidWhitehead("the multiplier must lie in the cut set".into()));
        }
        if cut >> multiplier.inverse().slot() & 1 == 1 {
            return Err(Error::InvalidWhitehead(
                "the inverse of the multiplier must not lie in the cut set".into(),
            ));
        }
        Ok(WhiteheadAuto {
            alphabet,
            multiplier,
            cut,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn multiplier(&self) -> Letter {
        self.multiplier
    }

    #[inline]
    pub fn in_cut(&self, x: Letter) -> bool {
        self.cut >> x.slot() & 1 == 1
    }

    /// `A` in letter order.
    pub fn cut_set(&self) -> Vec<Letter> {
        self.alphabet.letters().filter(|&l| self.in_cut(l)).collect()
    }

    pub fn cut_size(&self) -> usize {
        self.cut.count_ones() as usize
    }

    pub fn kind(&self) -> WhiteheadKind {
        let m = self.cut_size();
        if m == 1 {
            WhiteheadKind::Identity
        } else if m == self.alphabet.size() - 1 {
            WhiteheadKind::Inner
        } else {
            WhiteheadKind::Proper
        }
    }

    /// `φ(x)` as at most three letters.
    #[inline]
    pub fn image_letters(&self, x: Letter, out: &mut Vec<Letter>) {
        let a = self.multiplier;
        if x == a || x == a.inverse() {
            out.push(x);
            return;
        }
        if self.in_cut(x.inverse()) {
            out.push(a.inverse());
        }
        out.push(x);
        if self.in_cut(x) {
            out.push(a);
        }
    }

    pub fn apply(&self, w: &ReducedWord) -> Result<ReducedWord> {
        super::check_same(self.alphabet, w)?;
        let mut stack = Vec::with_capacity(w.len() + w.len() / 2);
        let mut img = Vec::with_capacity(3);
        for &x in w.letters() {
            img.clear();
            self.image_letters(x, &mut img);
            for &l in &img {
                push_reduced(&mut stack, l);
            }
        }
        ReducedWord::from_reduced(self.alphabet, stack)
    }

    /// `(A ∖ {a}) ∪ {a⁻¹}` with multiplier `a⁻¹` inverts `(A, a)`.
    pub fn inverse(&self) -> WhiteheadAuto {
        let a = self.multiplier;
        let cut = (self.cut & !(1 << a.slot())) | 1 << a.inverse().slot();
        WhiteheadAuto {
            alphabet: self.alphabet,
            multiplier: a.inverse(),
            cut,
        }
    }

    /// Coefficient `c_uv` of the cyclic pair count `N_uv` in `|φ(g)| − |g|`:
    /// `[u ∈ A xor v⁻¹ ∈ A] − [u = a] − [v = a⁻¹]`.
    #[inline]
    pub fn pair_coefficient(&self, u: Letter, v: Letter) -> i64 {
        let a = self.multiplier;
        i64::from(self.in_cut(u) != self.in_cut(v.inverse()))
            - i64::from(u == a)
            - i64::from(v == a.inverse())
    }

    /// Change of cyclic length `|φ(g)| − |g|`, from the cyclic pair counts of `g`.
    pub fn cyclic_length_change(&self, profile: &FrequencyProfile) -> i64 {
        debug_assert!(profile.is_cyclic());
        let mut total = 0i64;
        for u in self.alphabet.letters() {
            for v in self.alphabet.letters() {
                let n = profile.pair_count(u, v);
                if n != 0 {
                    total += self.pair_coefficient(u, v) * n as i64;
                }
            }
        }
        total
    }

    /// `|φ(g)|` for a cyclic word, computed by applying `φ` and cyclically reducing.
    pub fn cyclic_image_length(&self, g: &CyclicWord) -> usize {
        self.apply(g.representative())
            .expect("same alphabet")
            .cyclic_length()
    }

    /// Parses `W(a;{a,b,B})`.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Parse {
            what: "Whitehead automorphism",
            token: text.to_string(),
            reason: reason.into(),
        };
        let body = text
            .trim()
            .strip_prefix("W(")
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| bad("expected W(a;{..})"))?;
        let (mult, set) = body.split_once(';').ok_or_else(|| bad("expected ';'"))?;
        let mult = match alphabet.parse_letters(mult)?.as_slice() {
            [l] => *l,
            _ => return Err(bad("multiplier must be one letter")),
        };
        let set = set
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| bad("expected {..}"))?;
        let mut cut = Vec::new();
        for part in set.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match alphabet.parse_letters(part)?.as_slice() {
                [l] => cut.push(*l),
                _ => return Err(bad("cut set entries must be single letters")),
            }
        }
        WhiteheadAuto::new(alphabet, mult, &cut)
    }
}

impl fmt::Display for WhiteheadAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt1 = |l: Letter| self.alphabet.format_letters(&[l]);
        let set: Vec<String> = self.cut_set().into_iter().map(fmt1).collect();
        write!(f, "W({};{{{}}})", fmt1(self.multiplier), set.join(","))
    }
}

impl fmt::Debug for WhiteheadAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All `2k · 2^{2k−2}` Whitehead automorphisms `(A, a)`, ordered by multiplier
/// (letter order) and then by the bitmask of `A ∖ {a}` over the remaining letters.
pub fn enumerate_whitehead(alphabet: Alphabet) -> Result<Vec<WhiteheadAuto>> {
    if alphabet.rank() > MAX_WHITEHEAD_RANK / 2 {
        return Err(Error::InvalidWhitehead(format!(
            "enumeration for rank {} is too large",
            alphabet.rank()
        )));
    }
    let mut out = Vec::new();
    for a in alphabet.letters() {
        let others: Vec<Letter> = alphabet
            .letters()
            .filter(|&l| l != a && l != a.inverse())
            .collect();
        for bits in 0u64..(1 << others.len()) {
            let mut cut = 1u64 << a.slot();
            for (i, l) in others.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    cut |= 1 << l.slot();
                }
            }
            out.push(WhiteheadAuto::from_mask(alphabet, a, cut)?);
        }
    }
    Ok(out)
}

/// The proper members of [`enumerate_whitehead`].
pub fn proper_whitehead(alphabet: Alphabet) -> Result<Vec<WhiteheadAuto>> {
    Ok(enumerate_whitehead(alphabet)?
        .into_iter()
        .filter(|w| w.kind() == WhiteheadKind::Proper)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freewords::free_reduce;
    use rand::{Rng, SeedableRng};

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn w(s: &str) -> ReducedWord {
        ReducedWord::parse(f2(), s).unwrap()
    }

    #[test]
    fn definitional_cases() {
        let phi = WhiteheadAuto::parse(f2(), "W(a;{a,b})").unwrap();
        assert_eq!(phi.apply(&w("b")).unwrap(), w("ba"));
        assert_eq!(phi.apply(&w("B")).unwrap(), w("AB"));
        assert_eq!(phi.apply(&w("a")).unwrap(), w("a"));
        let inner = WhiteheadAuto::parse(f2(), "W(a;{a,b,B})").unwrap();
        assert_eq!(inner.apply(&w("b")).unwrap(), w("Aba"));
        assert_eq!(inner.kind(), WhiteheadKind::Inner);
        assert_eq!(phi.to_string(), "W(a;{a,b})");
    }

    #[test]
    fn rejects_bad_cut_sets() {
        assert!(WhiteheadAuto::parse(f2(), "W(a;{b})").is_err());
        assert!(WhiteheadAuto::parse(f2(), "W(a;{a,A})").is_err());
        assert!(WhiteheadAuto::parse(f2(), "W(a;{a,c})").is_err());
    }

    #[test]
    fn enumeration_counts() {
        let all = enumerate_whitehead(f2()).unwrap();
        assert_eq!(all.len(), 16);
        let count = |k: WhiteheadKind| all.iter().filter(|w| w.kind() == k).count();
        assert_eq!(count(WhiteheadKind::Identity), 4);
        assert_eq!(count(WhiteheadKind::Inner), 4);
        assert_eq!(count(WhiteheadKind::Proper), 8);

        let one = enumerate_whitehead(Alphabet::new(1).unwrap()).unwrap();
        assert_eq!(one.len(), 2);
        assert!(one.iter().all(|w| w.kind() == WhiteheadKind::Identity && w.cut_size() == 1));

        for k in 1..=4 {
            let all = enumerate_whitehead(Alphabet::new(k).unwrap()).unwrap();
            assert_eq!(all.len(), 2 * k * (1 << (2 * k - 2)));
            let distinct: std::collections::BTreeSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
        }
    }

    #[test]
    fn inverse_undoes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for k in 1..=3 {
            let alpha = Alphabet::new(k).unwrap();
            for phi in enumerate_whitehead(alpha).unwrap() {
                let inv = phi.inverse();
                assert_eq!(inv.inverse(), phi);
                for _ in 0..20 {
                    let seq: Vec<Letter> = (0..rng.random_range(0..30))
                        .map(|_| Letter::from_slot(rng.random_range(0..alpha.size())))
                        .collect();
                    let x = free_reduce(alpha, &seq).unwrap();
                    assert_eq!(inv.apply(&phi.apply(&x).unwrap()).unwrap(), x);
                }
            }
        }
    }

    #[test]
    fn inner_members_are_conjugation_by_inverse_multiplier() {
        for k in 1..=3 {
            let alpha = Alphabet::new(k).unwrap();
            for phi in enumerate_whitehead(alpha).unwrap() {
                if phi.kind() != WhiteheadKind::Inner {
                    continue;
                }
                let a = ReducedWord::from_reduced(alpha, vec![phi.multiplier()]).unwrap();
                for x in alpha.generators() {
                    let xw = ReducedWord::from_reduced(alpha, vec![x]).unwrap();
                    let expect = a.invert().concat(&xw).unwrap().concat(&a).unwrap();
                    assert_eq!(phi.apply(&xw).unwrap(), expect);
                }
            }
        }
    }

    /// The pair-count formula against direct application, on every cyclic word
    /// of length ≤ 7 (k = 2) and random longer words for k = 2, 3.
    #[test]
    fn length_change_formula_is_exact() {
        let check = |phi: &WhiteheadAuto, g: &CyclicWord| {
            let p = FrequencyProfile::of_cyclic(g).unwrap();
            let direct = phi.cyclic_image_length(g) as i64 - g.len() as i64;
            assert_eq!(phi.cyclic_length_change(&p), direct, "{phi} on {g}");
        };
        let all2 = enumerate_whitehead(f2()).unwrap();
        for len in 1..=7 {
            for x in crate::freewords::enumerate_reduced_words(f2(), len) {
                if x.is_cyclically_reduced() {
                    let g = CyclicWord::new(x).unwrap();
                    for phi in &all2 {
                        check(phi, &g);
                    }
                }
            }
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for k in 2..=3 {
            let alpha = Alphabet::new(k).unwrap();
            let all = enumerate_whitehead(alpha).unwrap();
            for _ in 0..200 {
                let seq: Vec<Letter> = (0..rng.random_range(1..200))
                    .map(|_| Letter::from_slot(rng.random_range(0..alpha.size())))
                    .collect();
                let g = CyclicWord::of(&free_reduce(alpha, &seq).unwrap());
                if g.is_empty() {
                    continue;
                }
                for phi in all.iter().step_by(3) {
                    check(phi, &g);
                }
            }
        }
    }

    #[test]
    fn f2_coefficients_by_hand() {
        // (A, a) = ({a, b}, a)
        let phi = WhiteheadAuto::parse(f2(), "W(a;{a,b})").unwrap();
        let l = |s: &str| Letter::from_char(s.chars().next().unwrap()).unwrap();
        let mut nonzero = Vec::new();
        for u in f2().letters() {
            for v in f2().letters() {
                if v != u.inverse() && phi.pair_coefficient(u, v) != 0 {
                    nonzero.push((u, v, phi.pair_coefficient(u, v)));
                }
            }
        }
        let expect = vec![
            (l("a"), l("B"), -1),
            (l("A"), l("B"), 1),
            (l("b"), l("a"), 1),
            (l("b"), l("A"), -1),
            (l("b"), l("b"), 1),
            (l("B"), l("B"), 1),
        ];
        let mut e = expect.clone();
        e.sort();
        let mut n = nonzero.clone();
        n.sort();
        assert_eq!(n, e);
    }
}
