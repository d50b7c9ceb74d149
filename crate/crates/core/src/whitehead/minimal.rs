use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::freewords::{Alphabet, CyclicWord, FrequencyProfile, Letter, ReducedWord};

use super::auto::{proper_whitehead, WhiteheadAuto};
use super::autoword::{AutoWord, Factor};
use super::relabeling::{Relabeling, MAX_ENUMERATION_RANK};

/// Nonzero cyclic pair counts `(u, v, N_uv)` of `g`.
fn sparse_pairs(g: &CyclicWord) -> Vec<(Letter, Letter, i64)> {
    let alphabet = g.alphabet();
    let profile = FrequencyProfile::count(alphabet, g.letters(), true);
    let mut out = Vec::new();
    for u in alphabet.letters() {
        for v in alphabet.letters() {
            let n = profile.pair_count(u, v);
            if n != 0 {
                out.push((u, v, n as i64));
            }
        }
    }
    out
}

fn length_change(phi: &WhiteheadAuto, pairs: &[(Letter, Letter, i64)]) -> i64 {
    pairs
        .iter()
        .map(|&(u, v, n)| phi.pair_coefficient(u, v) * n)
        .sum()
}

/// A proper Whitehead automorphism that does not lengthen `g`, if any.
///
/// The first such automorphism in enumeration order is returned.
pub fn whitehead_minimality_witness(g: &CyclicWord) -> Result<Option<WhiteheadAuto>> {
    let pairs = sparse_pairs(g);
    Ok(proper_whitehead(g.alphabet())?
        .into_iter()
        .find(|phi| length_change(phi, &pairs) <= 0))
}

/// Whether every proper Whitehead automorphism strictly lengthens `g`.
pub fn is_strictly_whitehead_minimal(g: &CyclicWord) -> Result<bool> {
    Ok(whitehead_minimality_witness(g)?.is_none())
}

/// Greedy steepest descent by proper Whitehead automorphisms.
///
/// Returns a cyclic word of minimal length in the `Aut(F_k)`-orbit of `w` and an
/// automorphism taking `w` to a conjugate of it.
pub fn minimize(w: &ReducedWord) -> Result<(CyclicWord, AutoWord)> {
    if w.is_empty() {
        return Err(Error::TrivialWord);
    }
    let alphabet = w.alphabet();
    let autos = proper_whitehead(alphabet)?;
    let mut g = CyclicWord::of(w);
    let mut path = AutoWord::identity(alphabet);
    loop {
        let pairs = sparse_pairs(&g);
        let mut best: Option<(i64, &WhiteheadAuto)> = None;
        for phi in &autos {
            let d = length_change(phi, &pairs);
            if d < 0 && best.is_none_or(|(b, _)| d < b) {
                best = Some((d, phi));
            }
        }
        let Some((_, phi)) = best else {
            return Ok((g, path));
        };
        g = CyclicWord::of(&phi.apply(g.representative())?);
        path = path.then(Factor::Whitehead(*phi));
    }
}

/// For strictly Whitehead minimal `g` and `h`, a relabeling `r` and a shift `s`
/// with `r(g)` equal to the rotation of `h` by `s`, if they lie in one orbit.
pub fn minimal_orbit_equal(g: &CyclicWord, h: &CyclicWord) -> Result<Option<(usize, Relabeling)>> {
    if g.alphabet() != h.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: g.alphabet().rank(),
            right: h.alphabet().rank(),
        });
    }
    for (name, x) in [("first", g), ("second", h)] {
        if let Some(phi) = whitehead_minimality_witness(x)? {
            return Err(Error::NotStrictlyMinimal(format!(
                "{name} word {} is not lengthened by {phi}",
                x.representative()
            )));
        }
    }
    if g.len() != h.len() {
        return Ok(None);
    }
    let alphabet = g.alphabet();
    if alphabet.rank() <= MAX_ENUMERATION_RANK {
        for r in Relabeling::enumerate(alphabet)? {
            let image = r.apply(g.representative())?;
            if let Some(s) = h.rotation_of(&image) {
                return Ok(Some((s, r)));
            }
        }
        return Ok(None);
    }
    for s in 0..h.len() {
        let rotated = h.rotation(s);
        if let Some(r) = letterwise_relabeling(alphabet, g.letters(), rotated.letters()) {
            return Ok(Some((s, r)));
        }
    }
    Ok(None)
}

fn letterwise_relabeling(alphabet: Alphabet, from: &[Letter], to: &[Letter]) -> Option<Relabeling> {
    let k = alphabet.rank();
    let mut image: Vec<Option<Letter>> = vec![None; k];
    let mut hit: Vec<bool> = vec![false; k];
    for (&x, &y) in from.iter().zip(to) {
        let (x, y) = if x.is_positive() { (x, y) } else { (x.inverse(), y.inverse()) };
        match image[x.index() - 1] {
            Some(old) if old != y => return None,
            Some(_) => {}
            None => {
                if std::mem::replace(&mut hit[y.index() - 1], true) {
                    return None;
                }
                image[x.index() - 1] = Some(y);
            }
        }
    }
    let mut free = (1..=k).filter(|&i| !hit[i - 1]);
    let images: Vec<Letter> = image
        .into_iter()
        .map(|m| m.unwrap_or_else(|| Letter::new(free.next().expect("bijection") as i32)))
        .collect();
    Relabeling::from_images(alphabet, &images).ok()
}

/// Every `ε₀`-equidistributed cyclic word of rank `k` is strictly Whitehead
/// minimal; `ε₀ = 3σ/10` with `σ = 1/(2k(2k−1))`.
///
/// For a proper `φ = (A, a)` with `|A| = m`, `2 ≤ m ≤ 2k−2`, and a cyclic word
/// of length `ℓ` with pair frequencies `P_uv = σ + e_uv`, `|e_uv| ≤ ε`:
///
/// `|φ(g)| − |g| = ℓ Σ c_uv P_uv ≥ ℓ (σ Σ c_uv − ε Σ |c_uv|)`,
///
/// sums over the `2k(2k−1)` reduced pairs. Counting the pairs entering and
/// leaving the cut, `Σ c_uv = 2(m−1)(2k−m−1)` and `Σ |c_uv| ≤ 2(m−1)(2k−m+1)`,
/// so the change is positive once `ε < σ(2k−m−1)/(2k−m+1)`. The worst case is
/// `m = 2k−2`, giving `ε < σ/3`. The bound holds for every length, so no length
/// threshold is needed.
pub fn epsilon0(k: usize) -> Result<BigRational> {
    if k < 2 {
        return Err(Error::InvalidParams(format!("epsilon0 needs k >= 2, got {k}")));
    }
    let k = k as i64;
    Ok(BigRational::new(
        BigInt::from(3),
        BigInt::from(10 * 2 * k * (2 * k - 1)),
    ))
}
