use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::freewords::{Alphabet, Letter, ReducedWord};
use crate::stallings::StallingsGraph;

use super::auto::{enumerate_whitehead, WhiteheadAuto};
use super::relabeling::Relabeling;

/// Anything that acts on reduced words as an automorphism of `F_k`.
pub trait Automorphism {
    fn alphabet(&self) -> Alphabet;

    fn apply(&self, w: &ReducedWord) -> Result<ReducedWord>;

    /// Image of the generator `x_i` (1-based).
    fn image_of_generator(&self, i: usize) -> ReducedWord {
        let alpha = self.alphabet();
        let x = ReducedWord::from_reduced(alpha, vec![Letter::new(i as i32)]).expect("generator");
        self.apply(&x).expect("same alphabet")
    }
}

impl Automorphism for Relabeling {
    fn alphabet(&self) -> Alphabet {
        Relabeling::alphabet(self)
    }

    fn apply(&self, w: &ReducedWord) -> Result<ReducedWord> {
        Relabeling::apply(self, w)
    }
}

impl Automorphism for WhiteheadAuto {
    fn alphabet(&self) -> Alphabet {
        WhiteheadAuto::alphabet(self)
    }

    fn apply(&self, w: &ReducedWord) -> Result<ReducedWord> {
        WhiteheadAuto::apply(self, w)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Factor {
    Whitehead(WhiteheadAuto),
    Relabel(Relabeling),
    /// `ad_w : g ↦ w g w⁻¹`.
    Inner(ReducedWord),
}

impl Factor {
    fn apply(&self, w: &ReducedWord) -> Result<ReducedWord> {
        match self {
            Factor::Whitehead(phi) => phi.apply(w),
            Factor::Relabel(r) => r.apply(w),
            Factor::Inner(c) => c.concat(w)?.concat(&c.invert()),
        }
    }

    fn inverse(&self) -> Factor {
        match self {
            Factor::Whitehead(phi) => Factor::Whitehead(phi.inverse()),
            Factor::Relabel(r) => Factor::Relabel(r.inverse()),
            Factor::Inner(c) => Factor::Inner(c.invert()),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Whitehead(phi) => write!(f, "{phi}"),
            Factor::Relabel(r) => write!(f, "{r}"),
            Factor::Inner(c) => write!(f, "I({c})"),
        }
    }
}

/// A composition of factors, applied right to left.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AutoWord {
    alphabet: Alphabet,
    factors: Vec<Factor>,
}

impl AutoWord {
    pub fn identity(alphabet: Alphabet) -> Self {
        AutoWord {
            alphabet,
            factors: Vec::new(),
        }
    }

    pub fn new(alphabet: Alphabet, factors: Vec<Factor>) -> Result<Self> {
        for f in &factors {
            let a = match f {
                Factor::Whitehead(phi) => phi.alphabet(),
                Factor::Relabel(r) => r.alphabet(),
                Factor::Inner(c) => c.alphabet(),
            };
            if a != alphabet {
                return Err(Error::AlphabetMismatch {
                    left: alphabet.rank(),
                    right: a.rank(),
                });
            }
        }
        Ok(AutoWord { alphabet, factors })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// `factor ∘ self`.
    pub fn then(mut self, factor: Factor) -> Self {
        self.factors.insert(0, factor);
        self
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AutoWord) -> AutoWord {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        AutoWord {
            alphabet: self.alphabet,
            factors,
        }
    }

    pub fn inverse(&self) -> AutoWord {
        AutoWord {
            alphabet: self.alphabet,
            factors: self.factors.iter().rev().map(Factor::inverse).collect(),
        }
    }

    /// Parses `;`-separated factors, e.g. `W(a;{a,b});R(a->b,b->a);I(ab)`.
    /// `id` or an empty string is the identity.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() || t == "id" {
            return Ok(AutoWord::identity(alphabet));
        }
        let mut factors = Vec::new();
        for part in split_top_level(t) {
            let part = part.trim();
            let factor = if part.starts_with("W(") {
                Factor::Whitehead(WhiteheadAuto::parse(alphabet, part)?)
            } else if part.starts_with("R(") {
                Factor::Relabel(Relabeling::parse(alphabet, part)?)
            } else if let Some(body) = part.strip_prefix("I(").and_then(|b| b.strip_suffix(')')) {
                Factor::Inner(ReducedWord::parse(alphabet, body)?)
            } else {
                return Err(Error::Parse {
                    what: "automorphism",
                    token: part.to_string(),
                    reason: "expected W(..), R(..) or I(..)".into(),
                });
            };
            factors.push(factor);
        }
        Ok(AutoWord { alphabet, factors })
    }
}

fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ';' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

impl Automorphism for AutoWord {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn apply(&self, w: &ReducedWord) -> Result<ReducedWord> {
        super::check_same(self.alphabet, w)?;
        let mut cur = w.clone();
        for f in self.factors.iter().rev() {
            cur = f.apply(&cur)?;
        }
        Ok(cur)
    }
}

impl fmt::Display for AutoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("id");
        }
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(";"))
    }
}

impl fmt::Debug for AutoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AutoWord({self})")
    }
}

/// `g` with `α(x) = g x g⁻¹` for every generator `x`, if `α` is inner.
pub fn is_inner(alpha: &impl Automorphism) -> Option<ReducedWord> {
    let alphabet = alpha.alphabet();
    let x1 = Letter::new(1);
    let y1 = alpha.image_of_generator(1);
    let (c, core) = y1.cyclic_split();
    if core.letters() != [x1] {
        return None;
    }
    let g = if alphabet.rank() == 1 {
        c
    } else {
        let z = c.invert().concat(&alpha.image_of_generator(2)).ok()?.concat(&c).ok()?;
        let lead = z.letters().first().copied();
        let run = z
            .letters()
            .iter()
            .take_while(|&&l| Some(l) == lead && l.index() == 1)
            .count() as i64;
        let j = match lead {
            Some(l) if l == x1 => run,
            Some(l) if l == x1.inverse() => -run,
            _ => 0,
        };
        let x1w = ReducedWord::from_reduced(alphabet, vec![x1]).expect("generator");
        c.concat(&x1w.pow(j)).ok()?
    };
    for i in 1..=alphabet.rank() {
        let x = ReducedWord::from_reduced(alphabet, vec![Letter::new(i as i32)]).expect("generator");
        let expect = g.concat(&x).ok()?.concat(&g.invert()).ok()?;
        if alpha.image_of_generator(i) != expect {
            return None;
        }
    }
    Some(g)
}

/// Stallings graph of `α(H)`, from the images of a free basis of `H`.
pub fn subgroup_image(alpha: &impl Automorphism, g: &StallingsGraph) -> Result<StallingsGraph> {
    let images = g
        .free_basis()
        .iter()
        .map(|w| alpha.apply(w))
        .collect::<Result<Vec<_>>>()?;
    StallingsGraph::from_generators(g.alphabet(), &images)
}

/// A random composition of `factors` factors, each a uniform Whitehead
/// automorphism, a uniform relabeling, or conjugation by a uniform reduced word
/// of length at most `inner_len`.
pub fn random_autoword<R: Rng + ?Sized>(
    rng: &mut R,
    alphabet: Alphabet,
    factors: usize,
    inner_len: usize,
) -> Result<AutoWord> {
    let whitehead = enumerate_whitehead(alphabet)?;
    let relabelings = Relabeling::enumerate(alphabet)?;
    let mut out = Vec::with_capacity(factors);
    for _ in 0..factors {
        let f = match rng.random_range(0..3) {
            0 => Factor::Whitehead(whitehead[rng.random_range(0..whitehead.len())]),
            1 => Factor::Relabel(relabelings[rng.random_range(0..relabelings.len())].clone()),
            _ => {
                let len = rng.random_range(0..=inner_len);
                Factor::Inner(crate::sampling::sphere_with(rng, alphabet, len))
            }
        };
        out.push(f);
    }
    AutoWord::new(alphabet, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn w(s: &str) -> ReducedWord {
        ReducedWord::parse(f2(), s).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let text = "W(a;{a,b,B});R(a->b,b->A);I(ab)";
        let alpha = AutoWord::parse(f2(), text).unwrap();
        assert_eq!(alpha.len(), 3);
        assert_eq!(alpha.to_string(), text);
        assert_eq!(AutoWord::parse(f2(), "id").unwrap(), AutoWord::identity(f2()));
        assert!(AutoWord::parse(f2(), "X(a)").is_err());
    }

    #[test]
    fn factors_apply_right_to_left() {
        let alpha = AutoWord::parse(f2(), "R(a->b,b->a);I(a)").unwrap();
        // first conjugate by a, then swap: b ↦ aba⁻¹ ↦ bab⁻¹
        assert_eq!(alpha.apply(&w("b")).unwrap(), w("baB"));
    }

    #[test]
    fn is_inner_examples() {
        let ad = AutoWord::parse(f2(), "I(ab)").unwrap();
        assert_eq!(is_inner(&ad), Some(w("ab")));
        let swap = AutoWord::parse(f2(), "R(a->b,b->a)").unwrap();
        assert_eq!(is_inner(&swap), None);
        let inner_wh = WhiteheadAuto::parse(f2(), "W(a;{a,b,B})").unwrap();
        assert_eq!(is_inner(&inner_wh), Some(w("A")));
        assert_eq!(is_inner(&AutoWord::identity(f2())), Some(w("1")));
        let proper = WhiteheadAuto::parse(f2(), "W(a;{a,b})").unwrap();
        assert_eq!(is_inner(&proper), None);
    }

    #[test]
    fn is_inner_recovers_conjugators() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in 1..=3 {
            let alpha = Alphabet::new(k).unwrap();
            for _ in 0..100 {
                let len = rng.random_range(0..15);
                let g = crate::sampling::sphere_with(&mut rng, alpha, len);
                let ad = AutoWord::new(alpha, vec![Factor::Inner(g.clone())]).unwrap();
                if k == 1 {
                    assert!(is_inner(&ad).is_some());
                } else {
                    assert_eq!(is_inner(&ad), Some(g));
                }
            }
        }
    }

    #[test]
    fn inverse_undoes_random_autowords() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let alpha = random_autoword(&mut rng, f2(), 5, 4).unwrap();
            let inv = alpha.inverse();
            let x = crate::sampling::sphere_with(&mut rng, f2(), 12);
            assert_eq!(inv.apply(&alpha.apply(&x).unwrap()).unwrap(), x);
            assert_eq!(AutoWord::parse(f2(), &alpha.to_string()).unwrap(), alpha);
        }
    }

    #[test]
    fn subgroup_image_examples() {
        let h = StallingsGraph::from_generators(f2(), &[w("ab"), w("aaB")]).unwrap();
        assert_eq!(subgroup_image(&AutoWord::identity(f2()), &h).unwrap(), h);
        let ad = AutoWord::parse(f2(), "I(bab)").unwrap();
        assert_eq!(subgroup_image(&ad, &h).unwrap().rank(), h.rank());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let alpha = random_autoword(&mut rng, f2(), 5, 4).unwrap();
            let img = subgroup_image(&alpha, &h).unwrap();
            assert_eq!(img.rank(), h.rank());
            for _ in 0..5 {
                let mut x = ReducedWord::empty(f2());
                for _ in 0..4 {
                    let b = if rng.random_bool(0.5) { w("ab") } else { w("aaB") };
                    x = x.concat(&b).unwrap();
                }
                assert!(img.contains(&alpha.apply(&x).unwrap()));
            }
        }
    }
}
