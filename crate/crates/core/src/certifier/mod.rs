//! Certification of Aut-malnormality for subgroups given by generators.
//!
//! [`certify`] runs a fixed sequence of checks. Each either passes, fails with
//! a witness, or is skipped with a reason, and the verdict is `certified` only if
//! all of them pass.

mod matching;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freewords::{
    rational_to_f64, Alphabet, CyclicWord, FrequencyProfile, Letter,
    ReducedWord,
};
use crate::stallings::{central_decomposition, fiber_product, CentralDecomposition, StallingsGraph};
use crate::whitehead::{epsilon0, is_inner, proper_whitehead, subgroup_image, AutoWord};

pub use matching::{check_matching, MatchingFailure};

/// Names of the checks, in the order [`certify`] runs them.
pub const CHECK_NAMES: [&str; 8] = [
    "free-basis",
    "malnormal",
    "prefixes",
    "subgroup-shape",
    "matching",
    "equidistribution",
    "whitehead-minimal",
    "constraint-chain",
];

mod rational_text {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        crate::freewords::parse_rational(&text).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&r.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|t| crate::freewords::parse_rational(&t).map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}

/// Thresholds of the certificate. Window lengths are rescaled by the shortest
/// generator: `m_λ = ⌈λ·min|w_i|⌉`, `m_β = ⌈β·min|w_i|⌉`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertParams {
    #[serde(with = "rational_text")]
    pub lambda: BigRational,
    #[serde(with = "rational_text")]
    pub beta: BigRational,
    /// Defaults to `ε₀(k)`.
    #[serde(default, with = "rational_text::option")]
    pub epsilon_target: Option<BigRational>,
    /// Defaults to `3·m_β`.
    #[serde(default)]
    pub min_outer: Option<usize>,
}

impl Default for CertParams {
    fn default() -> Self {
        CertParams {
            lambda: BigRational::new(1.into(), 20.into()),
            beta: BigRational::new(1.into(), 5.into()),
            epsilon_target: None,
            min_outer: None,
        }
    }
}

impl CertParams {
    pub fn validate(&self) -> Result<()> {
        let zero = BigRational::from_integer(0.into());
        if self.lambda <= zero || self.beta <= zero {
            return Err(Error::InvalidParams("lambda and beta must be positive".into()));
        }
        if let Some(e) = &self.epsilon_target {
            if *e <= zero {
                return Err(Error::InvalidParams("epsilon_target must be positive".into()));
            }
        }
        Ok(())
    }
}

/// `⌈r·n⌉` for a nonnegative rational `r`.
pub fn scaled_length(r: &BigRational, n: usize) -> usize {
    let x = r * BigInt::from(n);
    let (q, rem) = x.numer().div_rem(x.denom());
    let q = if rem == BigInt::from(0) { q } else { q + 1 };
    q.try_into().unwrap_or(usize::MAX)
}

/// `(m_λ, m_β)`: `⌈λ·min|w_i|⌉` and `⌈β·min|w_i|⌉`, each at least 1.
pub fn scaled_lengths(params: &CertParams, gens: &[ReducedWord]) -> (usize, usize) {
    let min_length = gens.iter().map(ReducedWord::len).min().unwrap_or(0);
    (
        scaled_length(&params.lambda, min_length).max(1),
        scaled_length(&params.beta, min_length).max(1),
    )
}

/// The generators are non-trivial and freely generate the subgroup of `graph`.
pub fn is_free_basis(graph: &StallingsGraph, gens: &[ReducedWord]) -> bool {
    !gens.is_empty() && gens.iter().all(|w| !w.is_empty()) && graph.rank() == gens.len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail { witness: String },
    Skipped { reason: String },
}

impl CheckStatus {
    pub fn passed(&self) -> bool {
        matches!(self, CheckStatus::Pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    #[serde(flatten)]
    pub status: CheckStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Inconclusive,
}

/// Quantities measured while certifying.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Measurements {
    pub rank: usize,
    pub min_length: usize,
    pub m_lambda: usize,
    pub m_beta: usize,
    pub min_outer: usize,
    pub tree_diameter: Option<usize>,
    pub loop_lengths: Vec<usize>,
    /// `ε_H` as an exact fraction, when computed.
    pub epsilon_h: Option<String>,
    pub epsilon_h_f64: Option<f64>,
    pub epsilon_bound: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub rank_k: usize,
    pub generators: Vec<String>,
    pub checks: Vec<CheckResult>,
    pub params: CertParams,
    pub measurements: Measurements,
    pub verdict: Verdict,
}

impl CertificateReport {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    pub fn check(&self, name: &str) -> Option<&CheckStatus> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.status)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// All `2p` words `w_i^{±1}` have length `≥ m` and pairwise distinct
/// `m`-prefixes. On failure, describes the offending word or pair.
pub fn check_prefixes(gens: &[ReducedWord], m: usize) -> std::result::Result<(), String> {
    let mut seen: HashMap<&[Letter], String> = HashMap::new();
    let inverses: Vec<ReducedWord> = gens.iter().map(ReducedWord::invert).collect();
    for (i, (w, winv)) in gens.iter().zip(&inverses).enumerate() {
        for (name, word) in [(format!("w{}", i + 1), w), (format!("w{}^-1", i + 1), winv)] {
            if word.len() < m {
                return Err(format!("{name} has length {} < {m}", word.len()));
            }
            let prefix = &word.letters()[..m];
            if let Some(prev) = seen.get(prefix) {
                return Err(format!(
                    "{prev} and {name} share the prefix {}",
                    word.alphabet().format_letters(prefix)
                ));
            }
            seen.insert(prefix, name);
        }
    }
    Ok(())
}

/// The central decomposition of `graph` with `p` loops, provided its tree has
/// diameter `≤ 2m` and every outer loop has length `≥ min_outer`.
pub fn check_subgroup_shape(
    graph: &StallingsGraph,
    p: usize,
    m: usize,
    min_outer: usize,
) -> std::result::Result<CentralDecomposition, String> {
    let dec = central_decomposition(graph, p).map_err(|e| e.to_string())?;
    if dec.diameter > 2 * m {
        return Err(format!("central tree diameter {} exceeds {}", dec.diameter, 2 * m));
    }
    if dec.min_loop_length() < min_outer {
        return Err(format!(
            "outer loop of length {} is shorter than {min_outer}",
            dec.min_loop_length()
        ));
    }
    Ok(dec)
}

/// A bound `ε_H` such that every nontrivial cyclic word of `H` is
/// `ε_H`-equidistributed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquidistributionBound {
    pub epsilon: BigRational,
    /// Largest single-letter deviation inside an outer loop.
    pub loop_single: BigRational,
    /// Largest pair deviation inside an outer loop.
    pub loop_pair: BigRational,
}

/// Bounds the frequency deviation of every cyclic word of `H` from the outer
/// loops and the central tree.
///
/// A cyclically reduced element reads a cyclic sequence of full outer-loop
/// traversals separated by geodesics of the tree, each of length at most the
/// diameter `D`. With `ℓ` the shortest loop, `δ` and `η` the largest single and
/// pair deviations within loops, the single frequencies deviate by at most
/// `δ + (1−δ)·D/(ℓ+D)` and the pair frequencies by at most
/// `η + (1−η)·(D+1)/(ℓ+D)`: every letter outside the loops, and every pair
/// touching a junction, is charged the full deviation of one. For rank one the
/// only cyclic words are powers of the loop, so its exact deviation is returned.
pub fn bound_equidistribution_all(
    graph: &StallingsGraph,
    dec: &CentralDecomposition,
) -> Result<EquidistributionBound> {
    let alphabet = graph.alphabet();
    if dec.outer_loops.is_empty() {
        return Err(Error::Decomposition("no outer loops".into()));
    }
    if dec.outer_loops.len() == 1 {
        let g = CyclicWord::of(&ReducedWord::from_reduced(
            alphabet,
            dec.outer_loops[0].letters.clone(),
        )?);
        let profile = FrequencyProfile::of_cyclic(&g)?;
        let single = profile.single_deviation().value();
        let pair = profile.pair_deviation().value();
        let epsilon = single.clone().max(pair.clone());
        return Ok(EquidistributionBound {
            epsilon,
            loop_single: single,
            loop_pair: pair,
        });
    }
    let zero = BigRational::from_integer(0.into());
    let one = BigRational::from_integer(1.into());
    let (mut delta, mut eta) = (zero.clone(), zero);
    for arc in &dec.outer_loops {
        let profile = FrequencyProfile::count(alphabet, &arc.letters, false);
        delta = delta.max(profile.single_deviation().value());
        eta = eta.max(profile.pair_deviation().value());
    }
    let d = BigInt::from(dec.diameter);
    let l = BigInt::from(dec.min_loop_length());
    let single = &delta + (&one - &delta) * BigRational::new(d.clone(), &l + &d);
    let pair = &eta + (&one - &eta) * BigRational::new(&d + 1, &l + &d);
    Ok(EquidistributionBound {
        epsilon: single.max(pair),
        loop_single: delta,
        loop_pair: eta,
    })
}

/// Runs every check on `H = ⟨gens⟩` and assembles the report.
pub fn certify(alphabet: Alphabet, gens: &[ReducedWord], params: &CertParams) -> Result<CertificateReport> {
    params.validate()?;
    for w in gens {
        crate::whitehead::check_same(alphabet, w)?;
    }
    let k = alphabet.rank();
    let p = gens.len();
    let mut checks: Vec<CheckResult> = Vec::with_capacity(CHECK_NAMES.len());
    let mut push = |name: &str, status: CheckStatus| {
        checks.push(CheckResult {
            name: name.to_string(),
            status,
        })
    };
    let skip = |reason: &str| CheckStatus::Skipped {
        reason: reason.to_string(),
    };
    let fail = |witness: String| CheckStatus::Fail { witness };

    let graph = StallingsGraph::from_generators(alphabet, gens)?;
    let min_length = gens.iter().map(ReducedWord::len).min().unwrap_or(0);
    let (m_lambda, m_beta) = scaled_lengths(params, gens);
    let min_outer = params.min_outer.unwrap_or(3 * m_beta);
    let mut meas = Measurements {
        rank: graph.rank(),
        min_length,
        m_lambda,
        m_beta,
        min_outer,
        ..Measurements::default()
    };

    // free basis
    let nontrivial = p > 0 && gens.iter().all(|w| !w.is_empty());
    if !nontrivial {
        push(CHECK_NAMES[0], fail("the generating tuple is empty or contains the trivial word".into()));
    } else if !is_free_basis(&graph, gens) {
        push(CHECK_NAMES[0], fail(format!("rank {} differs from {p} generators", graph.rank())));
    } else {
        push(CHECK_NAMES[0], CheckStatus::Pass);
    }

    match graph.malnormality_witness() {
        None => push(CHECK_NAMES[1], CheckStatus::Pass),
        Some(c) => {
            let (c1, c2) = c.conjugators(&graph, &graph);
            let g = c1.concat(&c2.invert())?;
            push(
                CHECK_NAMES[1],
                fail(format!("H meets its conjugate by {g} in a subgroup of rank {}", c.rank)),
            )
        }
    }

    match check_prefixes(gens, m_lambda) {
        Ok(()) => push(CHECK_NAMES[2], CheckStatus::Pass),
        Err(w) => push(CHECK_NAMES[2], fail(w)),
    }

    let dec = if graph.rank() == p && p > 0 {
        match check_subgroup_shape(&graph, p, m_lambda, min_outer) {
            Ok(dec) => {
                meas.tree_diameter = Some(dec.diameter);
                meas.loop_lengths = dec.loop_lengths.clone();
                push(CHECK_NAMES[3], CheckStatus::Pass);
                Some(dec)
            }
            Err(w) => {
                if let Ok(dec) = central_decomposition(&graph, p) {
                    meas.tree_diameter = Some(dec.diameter);
                    meas.loop_lengths = dec.loop_lengths.clone();
                }
                push(CHECK_NAMES[3], fail(w));
                None
            }
        }
    } else {
        push(CHECK_NAMES[3], skip("rank differs from the number of generators"));
        None
    };

    if !nontrivial {
        push(CHECK_NAMES[4], skip("trivial generator"));
    } else {
        match check_matching(gens, m_beta) {
            Ok(()) => push(CHECK_NAMES[4], CheckStatus::Pass),
            Err(MatchingFailure::Unsupported(e)) => push(CHECK_NAMES[4], skip(&e.to_string())),
            Err(f) => push(CHECK_NAMES[4], fail(f.to_string())),
        }
    }

    match (&dec, epsilon0(k)) {
        (_, Err(e)) => push(CHECK_NAMES[5], skip(&e.to_string())),
        (None, _) => push(CHECK_NAMES[5], skip("no valid central decomposition")),
        (Some(dec), Ok(e0)) => {
            let bound = bound_equidistribution_all(&graph, dec)?;
            let limit = match &params.epsilon_target {
                Some(t) => t.clone().min(e0),
                None => e0,
            };
            meas.epsilon_h = Some(bound.epsilon.to_string());
            meas.epsilon_h_f64 = Some(rational_to_f64(&bound.epsilon));
            meas.epsilon_bound = Some(limit.to_string());
            if bound.epsilon <= limit {
                push(CHECK_NAMES[5], CheckStatus::Pass);
            } else {
                push(
                    CHECK_NAMES[5],
                    fail(format!("epsilon_H = {} exceeds {limit}", bound.epsilon)),
                );
            }
        }
    }

    if !nontrivial {
        push(CHECK_NAMES[6], skip("trivial generator"));
    } else {
        match proper_whitehead(alphabet) {
            Err(e) => push(CHECK_NAMES[6], skip(&e.to_string())),
            Ok(autos) => {
                let mut failure = None;
                'gens: for (i, w) in gens.iter().enumerate() {
                    let g = CyclicWord::of(w);
                    for phi in &autos {
                        let l = phi.cyclic_image_length(&g);
                        if l <= g.len() {
                            failure = Some(format!(
                                "{phi} maps the cyclic reduction of w{} to length {l} <= {}",
                                i + 1,
                                g.len()
                            ));
                            break 'gens;
                        }
                    }
                }
                match failure {
                    None => push(CHECK_NAMES[6], CheckStatus::Pass),
                    Some(w) => push(CHECK_NAMES[6], fail(w)),
                }
            }
        }
    }

    let three = BigRational::from_integer(3.into());
    if &three * &params.lambda >= params.beta {
        push(CHECK_NAMES[7], fail(format!("3*lambda = {} is not below beta = {}", &three * &params.lambda, params.beta)));
    } else if 3 * m_beta > min_outer {
        push(CHECK_NAMES[7], fail(format!("3*m_beta = {} exceeds min_outer = {min_outer}", 3 * m_beta)));
    } else {
        push(CHECK_NAMES[7], CheckStatus::Pass);
    }

    let verdict = if checks.iter().all(|c| c.status.passed()) {
        Verdict::Certified
    } else {
        Verdict::Inconclusive
    };
    Ok(CertificateReport {
        rank_k: k,
        generators: gens.iter().map(|w| w.to_string()).collect(),
        checks,
        params: params.clone(),
        measurements: meas,
        verdict,
    })
}

/// Checks one instance of the Aut-malnormality contract.
///
/// If `α(H)` meets a conjugate `tHt⁻¹` nontrivially then, for Aut-malnormal
/// `H`, `α = ad_g` with `t⁻¹g ∈ H` (`t = 1` for the basepointed component).
/// Returns a description of the first violation.
pub fn aut_malnormality_violation(graph: &StallingsGraph, alpha: &AutoWord) -> Result<Option<String>> {
    let image = subgroup_image(alpha, graph)?;
    let inner = is_inner(alpha);
    for c in fiber_product(&image, graph)? {
        if c.rank == 0 {
            continue;
        }
        let (c1, c2) = c.conjugators(&image, graph);
        let t = c1.concat(&c2.invert())?;
        let ok = match &inner {
            Some(g) => graph.contains(&t.invert().concat(g)?),
            None => false,
        };
        if !ok {
            let inner_text = inner.as_ref().map_or("not inner".to_string(), |g| format!("ad_{g}"));
            return Ok(Some(format!(
                "{alpha} ({inner_text}) maps H onto a subgroup meeting tHt^-1 in rank {}, t = {t}",
                c.rank
            )));
        }
    }
    Ok(None)
}
