//! Reproducible random words: simple random walks, uniform spheres and balls,
//! and random subgroups generated by independent samples.
//!
//! Every sample is a function of `(seed, label, index)` alone. The three are
//! combined by [`derive_seed`] and the result seeds a ChaCha8 stream.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freewords::{push_reduced, Alphabet, Letter, ReducedWord};
use crate::stallings::StallingsGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Walk,
    Sphere,
    Ball,
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "walk" => Ok(Model::Walk),
            "sphere" => Ok(Model::Sphere),
            "ball" => Ok(Model::Ball),
            _ => Err(Error::Parse {
                what: "model",
                token: s.to_string(),
                reason: "expected walk, sphere or ball".into(),
            }),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Walk => "walk",
            Model::Sphere => "sphere",
            Model::Ball => "ball",
        })
    }
}

/// splitmix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// `mix64(mix64(mix64(seed) ^ fnv1a(label)) ^ index)`.
pub fn derive_seed(seed: u64, label: &str, index: u64) -> u64 {
    mix64(mix64(mix64(seed) ^ fnv1a(label)) ^ index)
}

pub fn trial_rng(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, label, index))
}

/// Free reduction of `n` independent uniform letters of `X^{±1}`.
pub fn walk_with<R: Rng + ?Sized>(rng: &mut R, alphabet: Alphabet, n: usize) -> ReducedWord {
    let size = alphabet.size();
    let mut stack = Vec::with_capacity(n);
    for _ in 0..n {
        push_reduced(&mut stack, Letter::from_slot(rng.random_range(0..size)));
    }
    ReducedWord::from_reduced_unchecked(alphabet, stack)
}

/// Uniform reduced word of length exactly `len`.
pub fn sphere_with<R: Rng + ?Sized>(rng: &mut R, alphabet: Alphabet, len: usize) -> ReducedWord {
    let size = alphabet.size();
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    for i in 0..len {
        let slot = if i == 0 {
            rng.random_range(0..size)
        } else {
            let forbidden = letters[i - 1].inverse().slot();
            let s = rng.random_range(0..size - 1);
            if s >= forbidden {
                s + 1
            } else {
                s
            }
        };
        letters.push(Letter::from_slot(slot));
    }
    ReducedWord::from_reduced_unchecked(alphabet, letters)
}

/// Uniform reduced word of length at most `n`.
pub fn ball_with<R: Rng + ?Sized>(rng: &mut R, alphabet: Alphabet, n: usize) -> ReducedWord {
    let len = ball_length(rng, alphabet.rank(), n);
    sphere_with(rng, alphabet, len)
}

/// A length `A ≤ n` drawn with probability `γ_A / Σ_{B ≤ n} γ_B`.
fn ball_length<R: Rng + ?Sized>(rng: &mut R, k: usize, n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let total: BigUint = (0..=n)
        .map(|a| crate::freewords::count_reduced_words(k, a))
        .sum();
    let mut r = biguint_below(rng, &total);
    let ratio = BigUint::from(2 * k - 1);
    let mut gamma = crate::freewords::count_reduced_words(k, n);
    for a in (1..=n).rev() {
        if r < gamma {
            return a;
        }
        r -= &gamma;
        gamma = if a == 1 { BigUint::from(1u32) } else { &gamma / &ratio };
    }
    0
}

/// Uniform integer in `[0, bound)` by rejection on the bit length of `bound`.
fn biguint_below<R: Rng + ?Sized>(rng: &mut R, bound: &BigUint) -> BigUint {
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let top_mask = if bits % 8 == 0 { 0xff } else { (1u8 << (bits % 8)) - 1 };
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill(&mut buf[..]);
        if let Some(last) = buf.last_mut() {
            *last &= top_mask;
        }
        let r = BigUint::from_bytes_le(&buf);
        if &r < bound {
            return r;
        }
    }
}

/// Parameters of a random subgroup: `p` independent samples of size `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub model: Model,
    pub k: usize,
    pub n: usize,
    pub p: usize,
    pub seed: u64,
}

impl SamplerSpec {
    pub fn new(model: Model, k: usize, n: usize, p: usize, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidRank(k));
        }
        if p == 0 {
            return Err(Error::InvalidParams("p must be at least 1".into()));
        }
        Ok(SamplerSpec { model, k, n, p, seed })
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.k).expect("k >= 1")
    }

    /// Generator `j` of trial `trial`.
    pub fn sample(&self, trial: u64, j: usize) -> ReducedWord {
        let sub = derive_seed(self.seed, "subgroup", trial);
        let mut rng = trial_rng(sub, "generator", j as u64);
        sample_model(&mut rng, self.model, self.alphabet(), self.n)
    }

    pub fn generators(&self, trial: u64) -> Vec<ReducedWord> {
        (0..self.p).map(|j| self.sample(trial, j)).collect()
    }

    pub fn random_subgroup(&self, trial: u64) -> Result<(Vec<ReducedWord>, StallingsGraph)> {
        let gens = self.generators(trial);
        let graph = StallingsGraph::from_generators(self.alphabet(), &gens)?;
        Ok((gens, graph))
    }
}

pub fn sample_model<R: Rng + ?Sized>(rng: &mut R, model: Model, alphabet: Alphabet, n: usize) -> ReducedWord {
    match model {
        Model::Walk => walk_with(rng, alphabet, n),
        Model::Sphere => sphere_with(rng, alphabet, n),
        Model::Ball => ball_with(rng, alphabet, n),
    }
}

pub fn walk(alphabet: Alphabet, n: usize, seed: u64, trial: u64) -> ReducedWord {
    walk_with(&mut trial_rng(seed, "walk", trial), alphabet, n)
}

pub fn uniform_sphere(alphabet: Alphabet, len: usize, seed: u64, trial: u64) -> ReducedWord {
    sphere_with(&mut trial_rng(seed, "sphere", trial), alphabet, len)
}

pub fn uniform_ball(alphabet: Alphabet, n: usize, seed: u64, trial: u64) -> ReducedWord {
    ball_with(&mut trial_rng(seed, "ball", trial), alphabet, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    #[test]
    fn walk_basics() {
        assert!(walk(f2(), 0, 1, 0).is_empty());
        for t in 0..200 {
            let w = walk(f2(), 37, 3, t);
            assert_eq!(w.len() % 2, 1);
            assert!(w.len() <= 37);
        }
        assert_eq!(walk(f2(), 100, 9, 4), walk(f2(), 100, 9, 4));
        assert_ne!(walk(f2(), 100, 9, 4), walk(f2(), 100, 9, 5));
    }

    #[test]
    fn two_step_walk_cancels_a_quarter_of_the_time() {
        let trials = 40_000;
        let empty = (0..trials).filter(|&t| walk(f2(), 2, 11, t).is_empty()).count();
        let p = empty as f64 / trials as f64;
        assert!((p - 0.25).abs() < 0.01, "{p}");
    }

    #[test]
    fn sphere_is_uniform_on_length_two() {
        let trials = 120_000;
        let mut counts: HashMap<ReducedWord, usize> = HashMap::new();
        for t in 0..trials {
            let w = uniform_sphere(f2(), 2, 5, t);
            assert_eq!(w.len(), 2);
            *counts.entry(w).or_default() += 1;
        }
        assert_eq!(counts.len(), 12);
        for (w, c) in counts {
            let f = c as f64 / trials as f64;
            assert!((f - 1.0 / 12.0).abs() < 0.01, "{w}: {f}");
        }
    }

    #[test]
    fn ball_length_distribution() {
        let trials = 50_000;
        let mut n1 = [0usize; 2];
        let mut long = 0;
        for t in 0..trials {
            let w = uniform_ball(f2(), 1, 6, t);
            n1[w.len()] += 1;
            let v = uniform_ball(f2(), 2, 7, t);
            assert!(v.len() <= 2);
            if v.len() == 2 {
                long += 1;
            }
        }
        let p_empty = n1[0] as f64 / trials as f64;
        assert!((p_empty - 0.2).abs() < 0.01, "{p_empty}");
        let p_long = long as f64 / trials as f64;
        assert!((p_long - 12.0 / 17.0).abs() < 0.01, "{p_long}");
        assert!(uniform_ball(f2(), 0, 1, 1).is_empty());
    }

    #[test]
    fn random_subgroups_are_reproducible() {
        let spec = SamplerSpec::new(Model::Walk, 2, 400, 2, 17).unwrap();
        let (g1, h1) = spec.random_subgroup(3).unwrap();
        let (g2, h2) = spec.random_subgroup(3).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(h1, h2);
        assert_ne!(g1[0], g1[1]);
        let trivial = SamplerSpec::new(Model::Walk, 2, 0, 1, 1).unwrap();
        assert_eq!(trivial.random_subgroup(0).unwrap().1.rank(), 0);
        assert!(SamplerSpec::new(Model::Walk, 2, 10, 0, 1).is_err());
    }

    #[test]
    fn model_names() {
        for m in [Model::Walk, Model::Sphere, Model::Ball] {
            assert_eq!(m.to_string().parse::<Model>().unwrap(), m);
        }
        assert!("lattice".parse::<Model>().is_err());
    }
}
