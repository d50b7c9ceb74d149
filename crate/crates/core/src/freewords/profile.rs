use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};

use super::cyclic::CyclicWord;
use super::letter::{Alphabet, Letter};
use super::word::ReducedWord;

/// Exact single-letter and two-letter frequencies of a word.
///
/// Counts are stored as integers; frequencies are `count / denominator`. A
/// linear word of length `ℓ` divides pair counts by `ℓ − 1`; a cyclic word
/// wraps around (`s_{ℓ+1} = s_1`) and divides both by `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyProfile {
    alphabet: Alphabet,
    cyclic: bool,
    length: usize,
    single: Vec<u64>,
    pair: Vec<u64>,
}

impl FrequencyProfile {
    pub fn of_word(word: &ReducedWord) -> Result<Self> {
        if word.len() < 2 {
            return Err(Error::WordTooShort {
                len: word.len(),
                min: 2,
            });
        }
        Ok(Self::count(word.alphabet(), word.letters(), false))
    }

    pub fn of_cyclic(word: &CyclicWord) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::WordTooShort { len: 0, min: 1 });
        }
        Ok(Self::count(word.alphabet(), word.letters(), true))
    }

    pub(crate) fn count(alphabet: Alphabet, letters: &[Letter], cyclic: bool) -> Self {
        let size = alphabet.size();
        let mut single = vec![0u64; size];
        let mut pair = vec![0u64; size * size];
        for l in letters {
            single[l.slot()] += 1;
        }
        for w in letters.windows(2) {
            pair[w[0].slot() * size + w[1].slot()] += 1;
        }
        if cyclic {
            if let (Some(last), Some(first)) = (letters.last(), letters.first()) {
                pair[last.slot() * size + first.slot()] += 1;
            }
        }
        FrequencyProfile {
            alphabet,
            cyclic,
            length: letters.len(),
            single,
            pair,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn single_denominator(&self) -> u64 {
        self.length as u64
    }

    pub fn pair_denominator(&self) -> u64 {
        if self.cyclic {
            self.length as u64
        } else {
            self.length as u64 - 1
        }
    }

    pub fn single_count(&self, u: Letter) -> u64 {
        self.single[u.slot()]
    }

    pub fn pair_count(&self, u: Letter, v: Letter) -> u64 {
        self.pair[u.slot() * self.alphabet.size() + v.slot()]
    }

    /// `P_u`.
    pub fn single_frequency(&self, u: Letter) -> BigRational {
        ratio(self.single_count(u), self.single_denominator())
    }

    /// `P_uv`.
    pub fn pair_frequency(&self, u: Letter, v: Letter) -> BigRational {
        ratio(self.pair_count(u, v), self.pair_denominator())
    }

    pub fn single_frequencies(&self) -> BTreeMap<Letter, BigRational> {
        self.alphabet
            .letters()
            .map(|u| (u, self.single_frequency(u)))
            .collect()
    }

    /// Frequencies of all pairs `(u, v)` with `v ≠ u⁻¹`.
    pub fn pair_frequencies(&self) -> BTreeMap<(Letter, Letter), BigRational> {
        let mut out = BTreeMap::new();
        for u in self.alphabet.letters() {
            for v in self.alphabet.letters() {
                if v != u.inverse() {
                    out.insert((u, v), self.pair_frequency(u, v));
                }
            }
        }
        out
    }

    /// Largest deviation of a single-letter frequency from `1/2k`.
    pub fn single_deviation(&self) -> Deviation {
        let two_k = self.alphabet.size() as u128;
        let mut worst = Deviation::zero(DeviationWitness::Single(Letter::from_slot(0)));
        let sd = self.single_denominator() as u128;
        if sd == 0 {
            return worst;
        }
        for u in self.alphabet.letters() {
            let d = deviation(self.single_count(u) as u128, sd, two_k);
            worst.take_max(d, DeviationWitness::Single(u));
        }
        worst
    }

    /// Largest deviation of a pair frequency from `1/2k(2k−1)`; zero when the
    /// word has no pairs.
    pub fn pair_deviation(&self) -> Deviation {
        let two_k = self.alphabet.size() as u128;
        let pair_target = two_k * (two_k - 1);
        let first = Letter::from_slot(0);
        let mut worst = Deviation::zero(DeviationWitness::Pair(first, first));
        let pd = self.pair_denominator() as u128;
        if pd == 0 || pair_target == 0 {
            return worst;
        }
        for u in self.alphabet.letters() {
            for v in self.alphabet.letters() {
                if v == u.inverse() {
                    continue;
                }
                let d = deviation(self.pair_count(u, v) as u128, pd, pair_target);
                worst.take_max(d, DeviationWitness::Pair(u, v));
            }
        }
        worst
    }

    /// Largest deviation from the uniform targets `1/2k` and `1/2k(2k−1)`.
    pub fn max_deviation(&self) -> Deviation {
        let mut worst = self.single_deviation();
        let pair = self.pair_deviation();
        worst.take_max((pair.num, pair.den), pair.witness);
        worst
    }

    /// Checks both ε-equidistribution conditions exactly.
    pub fn equidistribution(&self, epsilon: &BigRational) -> Equidistribution {
        let worst = self.max_deviation();
        Equidistribution {
            equidistributed: worst.value() <= *epsilon,
            worst,
        }
    }
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `|count/den − 1/target|` as an unreduced fraction.
fn deviation(count: u128, den: u128, target: u128) -> (u128, u128) {
    let a = count * target;
    (a.abs_diff(den), den * target)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeviationWitness {
    Single(Letter),
    Pair(Letter, Letter),
}

impl fmt::Display for DeviationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeviationWitness::Single(u) => write!(f, "P_{u}"),
            DeviationWitness::Pair(u, v) => write!(f, "P_{u}{v}"),
        }
    }
}

/// A frequency deviation `num/den` together with the letter or pair attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deviation {
    num: u128,
    den: u128,
    pub witness: DeviationWitness,
}

impl Deviation {
    fn zero(witness: DeviationWitness) -> Self {
        Deviation {
            num: 0,
            den: 1,
            witness,
        }
    }

    fn take_max(&mut self, (num, den): (u128, u128), witness: DeviationWitness) {
        if num * self.den > self.num * den {
            self.num = num;
            self.den = den;
            self.witness = witness;
        }
    }

    pub fn value(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equidistribution {
    pub equidistributed: bool,
    pub worst: Deviation,
}

/// ε-equidistribution of a linear reduced word (`|g| ≥ 2`).
pub fn is_equidistributed(word: &ReducedWord, epsilon: &BigRational) -> Result<Equidistribution> {
    Ok(FrequencyProfile::of_word(word)?.equidistribution(epsilon))
}

/// ε-equidistribution of a cyclic word, with wraparound pairs.
pub fn is_cyclically_equidistributed(
    word: &CyclicWord,
    epsilon: &BigRational,
) -> Result<Equidistribution> {
    Ok(FrequencyProfile::of_cyclic(word)?.equidistribution(epsilon))
}

/// Rational from a decimal or `p/q` string, exact.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = |reason: &str| Error::Parse {
        what: "rational",
        token: text.to_string(),
        reason: reason.into(),
    };
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad("bad numerator"))?;
        let q: BigInt = q.trim().parse().map_err(|_| bad("bad denominator"))?;
        if q == BigInt::from(0) {
            return Err(bad("zero denominator"));
        }
        return Ok(BigRational::new(p, q));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("empty number"));
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad("expected digits"));
    }
    let num: BigInt = digits.parse().map_err(|_| bad("expected digits"))?;
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = BigRational::new(num, den);
    Ok(if neg { -r } else { r })
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}
