use std::collections::HashMap;
use std::fmt;

use crate::error::Error;
use crate::freewords::{
    all_subwords_distinct, relabel_match_exists, Alphabet, Collision, Letter, RelabelMatch,
    ReducedWord, WordPosition,
};
use crate::whitehead::{Relabeling, MAX_ENUMERATION_RANK};

/// Rank up to which [`check_matching`] enumerates relabelings one by one.
const BRUTE_FORCE_RANK: usize = 3;

#[derive(Debug)]
pub enum MatchingFailure {
    Repeated(Collision),
    Relabeled {
        phi: Relabeling,
        found: RelabelMatch,
    },
    Unsupported(Error),
}

impl fmt::Display for MatchingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingFailure::Repeated(c) => {
                write!(f, "subword {} occurs at {} and {}", c.subword, c.first, c.second)
            }
            MatchingFailure::Relabeled { phi, found } => write!(
                f,
                "{phi} maps the subword {} at {} to {} at {}",
                found.subword, found.at, found.image, found.image_at
            ),
            MatchingFailure::Unsupported(e) => write!(f, "{e}"),
        }
    }
}

/// All length-`m` windows of `w_i^{±1}` are distinct, and no non-identity
/// relabeling maps one of them onto another (or onto itself).
///
/// Up to rank 3 every relabeling is tried. Above that, windows are grouped by
/// their pattern (letters renamed in order of first appearance) and a match is
/// read off a group directly; both agree exactly.
pub fn check_matching(gens: &[ReducedWord], m: usize) -> std::result::Result<(), MatchingFailure> {
    let Some(alphabet) = gens.first().map(ReducedWord::alphabet) else {
        return Ok(());
    };
    if alphabet.rank() > MAX_ENUMERATION_RANK {
        return Err(MatchingFailure::Unsupported(Error::RankTooLarge(alphabet.rank())));
    }
    match all_subwords_distinct(gens, m) {
        Err(e) => return Err(MatchingFailure::Unsupported(e)),
        Ok(Some(c)) => return Err(MatchingFailure::Repeated(c)),
        Ok(None) => {}
    }
    if alphabet.rank() <= BRUTE_FORCE_RANK {
        brute_force(gens, m)
    } else {
        by_pattern(alphabet, gens, m)
    }
}

fn brute_force(gens: &[ReducedWord], m: usize) -> std::result::Result<(), MatchingFailure> {
    let alphabet = gens[0].alphabet();
    let all = Relabeling::enumerate(alphabet).map_err(MatchingFailure::Unsupported)?;
    for phi in all.into_iter().filter(|r| !r.is_identity()) {
        match relabel_match_exists(gens, m, &phi) {
            Err(e) => return Err(MatchingFailure::Unsupported(e)),
            Ok(Some(found)) => return Err(MatchingFailure::Relabeled { phi, found }),
            Ok(None) => {}
        }
    }
    Ok(())
}

/// `u` with generators renamed `x_1, x_2, ..` in order of first appearance,
/// each with the sign of its first occurrence made positive.
fn pattern(k: usize, u: &[Letter]) -> Vec<Letter> {
    let mut rename: Vec<Option<Letter>> = vec![None; k];
    let mut next = 1;
    u.iter()
        .map(|&l| {
            let slot = &mut rename[l.index() - 1];
            let img = *slot.get_or_insert_with(|| {
                let x = Letter::new(next);
                next += 1;
                if l.is_positive() {
                    x
                } else {
                    x.inverse()
                }
            });
            if l.is_positive() {
                img
            } else {
                img.inverse()
            }
        })
        .collect()
}

/// A relabeling with `φ(u) = v`, non-identity, if one exists.
fn relabeling_between(alphabet: Alphabet, u: &[Letter], v: &[Letter]) -> Option<Relabeling> {
    let k = alphabet.rank();
    let mut images: Vec<Option<Letter>> = vec![None; k];
    for (&x, &y) in u.iter().zip(v) {
        let (x, y) = if x.is_positive() { (x, y) } else { (x.inverse(), y.inverse()) };
        match images[x.index() - 1] {
            Some(old) if old != y => return None,
            _ => images[x.index() - 1] = Some(y),
        }
    }
    let mut hit = vec![false; k];
    for y in images.iter().flatten() {
        hit[y.index() - 1] = true;
    }
    let mut free: Vec<usize> = (1..=k).filter(|&i| !hit[i - 1]).collect();
    let unassigned: Vec<usize> = (0..k).filter(|&i| images[i].is_none()).collect();
    if u == v {
        // identity on the letters of u: flip one unused generator
        let &i = unassigned.first()?;
        images[i] = Some(Letter::new(-(i as i32 + 1)));
        free.retain(|&g| g != i + 1);
    }
    for i in 0..k {
        if images[i].is_none() {
            let g = if free.contains(&(i + 1)) { i + 1 } else { free[0] };
            free.retain(|&h| h != g);
            images[i] = Some(Letter::new(g as i32));
        }
    }
    let images: Vec<Letter> = images.into_iter().map(|l| l.expect("assigned")).collect();
    let phi = Relabeling::from_images(alphabet, &images).ok()?;
    (!phi.is_identity()).then_some(phi)
}

fn by_pattern(alphabet: Alphabet, gens: &[ReducedWord], m: usize) -> std::result::Result<(), MatchingFailure> {
    let k = alphabet.rank();
    let mut groups: HashMap<Vec<Letter>, (WordPosition, Vec<Letter>)> = HashMap::new();
    for (i, w) in gens.iter().enumerate() {
        for inverted in [false, true] {
            let word = if inverted { w.invert() } else { w.clone() };
            let letters = word.letters();
            if letters.len() < m {
                continue;
            }
            for offset in 0..=letters.len() - m {
                let u = &letters[offset..offset + m];
                let at = WordPosition {
                    word: i,
                    inverted,
                    offset,
                };
                let found = |phi: Relabeling, from: &[Letter], from_at, to: &[Letter], to_at| {
                    MatchingFailure::Relabeled {
                        phi,
                        found: RelabelMatch {
                            subword: ReducedWord::from_reduced(alphabet, from.to_vec()).expect("window"),
                            image: ReducedWord::from_reduced(alphabet, to.to_vec()).expect("window"),
                            at: from_at,
                            image_at: to_at,
                        },
                    }
                };
                if let Some(phi) = relabeling_between(alphabet, u, u) {
                    return Err(found(phi, u, at, u, at));
                }
                match groups.get(&pattern(k, u)) {
                    Some((first_at, v)) => {
                        if let Some(phi) = relabeling_between(alphabet, v, u) {
                            return Err(found(phi, v, *first_at, u, at));
                        }
                    }
                    None => {
                        groups.insert(pattern(k, u), (at, u.to_vec()));
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pattern_and_brute_force_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for k in 2..=4 {
            let alpha = Alphabet::new(k).unwrap();
            for _ in 0..300 {
                let p = rng.random_range(1..=2);
                let gens: Vec<ReducedWord> = (0..p)
                    .map(|_| {
                        let len = rng.random_range(1..10);
                        crate::sampling::sphere_with(&mut rng, alpha, len)
                    })
                    .collect();
                let m = rng.random_range(1..5);
                let brute = brute_force(&gens, m).is_ok();
                let pat = by_pattern(alpha, &gens, m);
                assert_eq!(brute, pat.is_ok(), "{gens:?} m={m}");
                if let Err(MatchingFailure::Relabeled { phi, found }) = pat {
                    assert_eq!(phi.apply(&found.subword).unwrap(), found.image);
                    assert!(!phi.is_identity());
                }
            }
        }
    }

    #[test]
    fn examples() {
        let f2 = Alphabet::new(2).unwrap();
        let w = |s: &str| ReducedWord::parse(f2, s).unwrap();
        assert!(matches!(check_matching(&[w("abab")], 2), Err(MatchingFailure::Repeated(_))));
        let g = w("a").pow(40).concat(&w("b").pow(40)).unwrap();
        match check_matching(&[g], 40) {
            Err(MatchingFailure::Relabeled { found, .. }) => assert!(found.subword == w("a").pow(40) || found.subword == w("A").pow(40)),
            other => panic!("{other:?}"),
        }
    }
}
