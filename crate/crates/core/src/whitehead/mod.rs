//! Automorphisms of `F_k`: Whitehead automorphisms, relabelings, inner
//! automorphisms and their compositions; strict Whitehead minimality and
//! minimization of cyclic length over an automorphism orbit.

mod auto;
mod autoword;
mod minimal;
mod relabeling;

pub use auto::{enumerate_whitehead, proper_whitehead, WhiteheadAuto, WhiteheadKind, MAX_WHITEHEAD_RANK};
pub use autoword::{is_inner, random_autoword, subgroup_image, AutoWord, Automorphism, Factor};
pub use minimal::{
    epsilon0, is_strictly_whitehead_minimal, minimal_orbit_equal, minimize,
    whitehead_minimality_witness,
};
pub use relabeling::{Relabeling, MAX_ENUMERATION_RANK};

use crate::error::{Error, Result};
use crate::freewords::{Alphabet, ReducedWord};

pub(crate) fn check_same(alphabet: Alphabet, w: &ReducedWord) -> Result<()> {
    if w.alphabet() != alphabet {
        return Err(Error::AlphabetMismatch {
            left: alphabet.rank(),
            right: w.alphabet().rank(),
        });
    }
    Ok(())
}
