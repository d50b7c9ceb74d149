//! Monte-Carlo estimates of event probabilities for random subgroups, with a
//! log-linear fit of the failure probability against `n`, and the command-line
//! front end in [`cli`].

pub mod cli;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certifier::{certify, check_matching, check_prefixes, is_free_basis, scaled_lengths, CertParams};
use crate::error::{Error, Result};
use crate::freewords::{
    all_subwords_distinct, covers_all_subwords, is_cyclically_equidistributed, parse_rational,
    Alphabet, CyclicWord, Orientation, ReducedWord,
};
use crate::sampling::{derive_seed, SamplerSpec};
use crate::stallings::StallingsGraph;
use crate::whitehead::{is_strictly_whitehead_minimal, MAX_ENUMERATION_RANK, MAX_WHITEHEAD_RANK};

/// A property of a tuple of generators, each backed by one library predicate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Event {
    /// [`check_prefixes`] at `m_λ`.
    Prefixes,
    /// [`all_subwords_distinct`] at `m_β`.
    DistinctSubwords,
    /// [`check_matching`] at `m_β`.
    RelabelMatchFree,
    /// Every generator is cyclically ε-equidistributed.
    Equidistributed(BigRational),
    /// Every generator is strictly Whitehead minimal.
    WhiteheadMinimal,
    /// Every generator contains all reduced words of length `L` as cyclic subwords.
    Coverage(usize),
    Certified,
    FreeBasis,
    Malnormal,
}

pub const EVENT_NAMES: [&str; 9] = [
    "prefixes",
    "distinct-subwords",
    "relabel-match-free",
    "equidistributed",
    "whitehead-minimal",
    "coverage",
    "certified",
    "free-basis",
    "malnormal",
];

impl Event {
    /// Parses a bare name, taking the parameters of `equidistributed` and
    /// `coverage` from `epsilon` and `coverage_length` when not given inline.
    pub fn parse_with(name: &str, epsilon: Option<&BigRational>, coverage_length: Option<usize>) -> Result<Event> {
        match name {
            "equidistributed" => epsilon
                .cloned()
                .map(Event::Equidistributed)
                .ok_or_else(|| Error::InvalidParams("equidistributed needs an epsilon".into())),
            "coverage" => coverage_length
                .map(Event::Coverage)
                .ok_or_else(|| Error::InvalidParams("coverage needs a length L".into())),
            _ => name.parse(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Event::Prefixes => EVENT_NAMES[0],
            Event::DistinctSubwords => EVENT_NAMES[1],
            Event::RelabelMatchFree => EVENT_NAMES[2],
            Event::Equidistributed(_) => EVENT_NAMES[3],
            Event::WhiteheadMinimal => EVENT_NAMES[4],
            Event::Coverage(_) => EVENT_NAMES[5],
            Event::Certified => EVENT_NAMES[6],
            Event::FreeBasis => EVENT_NAMES[7],
            Event::Malnormal => EVENT_NAMES[8],
        }
    }

    /// Rejects parameters the predicate cannot handle.
    pub fn check_feasible(&self, k: usize) -> Result<()> {
        match self {
            Event::RelabelMatchFree if k > MAX_ENUMERATION_RANK => Err(Error::RankTooLarge(k)),
            Event::WhiteheadMinimal if k > MAX_WHITEHEAD_RANK => Err(Error::RankTooLarge(k)),
            Event::Coverage(0) => Err(Error::InvalidParams("coverage length must be at least 1".into())),
            Event::Equidistributed(e) if *e <= BigRational::from_integer(0.into()) => {
                Err(Error::InvalidParams("epsilon must be positive".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn holds(&self, alphabet: Alphabet, gens: &[ReducedWord], params: &CertParams) -> Result<bool> {
        let (m_lambda, m_beta) = scaled_lengths(params, gens);
        let cyclic = || gens.iter().map(CyclicWord::of);
        Ok(match self {
            Event::Prefixes => check_prefixes(gens, m_lambda).is_ok(),
            Event::DistinctSubwords => all_subwords_distinct(gens, m_beta)?.is_none(),
            Event::RelabelMatchFree => check_matching(gens, m_beta).is_ok(),
            Event::Equidistributed(eps) => {
                for g in cyclic() {
                    if g.is_empty() || !is_cyclically_equidistributed(&g, eps)?.equidistributed {
                        return Ok(false);
                    }
                }
                true
            }
            Event::WhiteheadMinimal => {
                for g in cyclic() {
                    if g.is_empty() || !is_strictly_whitehead_minimal(&g)? {
                        return Ok(false);
                    }
                }
                true
            }
            Event::Coverage(len) => {
                for g in cyclic() {
                    if g.is_empty() || !covers_all_subwords(&g, *len, Orientation::Directed)?.covered {
                        return Ok(false);
                    }
                }
                true
            }
            Event::Certified => certify(alphabet, gens, params)?.is_certified(),
            Event::FreeBasis => is_free_basis(&StallingsGraph::from_generators(alphabet, gens)?, gens),
            Event::Malnormal => StallingsGraph::from_generators(alphabet, gens)?.is_malnormal(),
        })
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Equidistributed(e) => write!(f, "equidistributed({e})"),
            Event::Coverage(l) => write!(f, "coverage({l})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Event {
    type Err = Error;

    fn from_str(s: &str) -> Result<Event> {
        let s = s.trim();
        if let Some(arg) = s.strip_prefix("equidistributed(").and_then(|r| r.strip_suffix(')')) {
            return Ok(Event::Equidistributed(parse_rational(arg)?));
        }
        if let Some(arg) = s.strip_prefix("coverage(").and_then(|r| r.strip_suffix(')')) {
            let len = arg.trim().parse().map_err(|_| Error::Parse {
                what: "coverage length",
                token: arg.to_string(),
                reason: "expected a positive integer".into(),
            })?;
            return Ok(Event::Coverage(len));
        }
        Ok(match s {
            "prefixes" => Event::Prefixes,
            "distinct-subwords" => Event::DistinctSubwords,
            "relabel-match-free" => Event::RelabelMatchFree,
            "whitehead-minimal" => Event::WhiteheadMinimal,
            "certified" => Event::Certified,
            "free-basis" => Event::FreeBasis,
            "malnormal" => Event::Malnormal,
            _ => return Err(Error::UnknownEvent(s.to_string())),
        })
    }
}

impl TryFrom<String> for Event {
    type Error = Error;

    fn try_from(s: String) -> Result<Event> {
        s.parse()
    }
}

impl From<Event> for String {
    fn from(e: Event) -> String {
        e.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub event: Event,
    /// Model, rank and number of generators; its `n` and `seed` are ignored.
    pub sampler: SamplerSpec,
    pub n_grid: Vec<usize>,
    pub trials: usize,
    pub params: CertParams,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be at least 1".into()));
        }
        if self.n_grid.is_empty() || self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams("n_grid must be non-empty and strictly increasing".into()));
        }
        self.params.validate()?;
        self.event.check_feasible(self.sampler.k)?;
        SamplerSpec::new(self.sampler.model, self.sampler.k, 0, self.sampler.p, 0)?;
        Ok(())
    }

    /// The sampler for one grid point; trial `t` is its subgroup `t`.
    pub fn sampler_at(&self, n: usize) -> SamplerSpec {
        SamplerSpec {
            n,
            seed: derive_seed(self.seed, "n", n as u64),
            ..self.sampler
        }
    }

    pub fn trial_holds(&self, n: usize, trial: u64) -> Result<bool> {
        let sampler = self.sampler_at(n);
        self.event.holds(sampler.alphabet(), &sampler.generators(trial), &self.params)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub n: usize,
    pub trials: usize,
    pub successes: usize,
    pub p_hat: f64,
    pub standard_error: f64,
    pub wall_ms: u64,
}

impl EstimateRow {
    pub fn new(n: usize, trials: usize, successes: usize, wall_ms: u64) -> Self {
        let p_hat = successes as f64 / trials as f64;
        EstimateRow {
            n,
            trials,
            successes,
            p_hat,
            standard_error: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
            wall_ms,
        }
    }

    /// `1 − p̂`, clamped below at `1/trials`.
    pub fn clamped_failure(&self) -> f64 {
        (1.0 - self.p_hat).max(1.0 / self.trials as f64)
    }

    pub fn censored(&self) -> bool {
        self.successes == self.trials
    }
}

/// Least-squares line through `(n, log(clamped failure))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    /// Grid points whose failure estimate was clamped.
    pub censored: Vec<usize>,
}

pub fn fit_decay(rows: &[EstimateRow]) -> Option<DecayFit> {
    if rows.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.clamped_failure().ln()).collect();
    let len = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some(DecayFit {
        slope,
        intercept: my - slope * mx,
        censored: rows.iter().filter(|r| r.censored()).map(|r| r.n).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub rows: Vec<EstimateRow>,
    pub fit: Option<DecayFit>,
}

/// `x` rounded to six significant digits, in shortest form.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float");
    format!("{rounded}")
}

impl ExperimentResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,trials,successes,p_hat,stderr,wall_ms\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.n,
                r.trials,
                r.successes,
                sig6(r.p_hat),
                sig6(r.standard_error),
                r.wall_ms
            ));
        }
        if let Some(fit) = &self.fit {
            out.push_str(&format!("#fit slope={} intercept={}\n", sig6(fit.slope), sig6(fit.intercept)));
            if !fit.censored.is_empty() {
                let ns: Vec<String> = fit.censored.iter().map(ToString::to_string).collect();
                out.push_str(&format!("#censored n={}\n", ns.join(",")));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Record wall-clock time per grid point (otherwise `wall_ms` is 0).
    pub timing: bool,
}

/// Estimates the event probability at every grid point.
///
/// Trials are independent and reduced in index order, so the rows do not
/// depend on the number of workers.
pub fn run_experiment(spec: &ExperimentSpec, options: RunOptions) -> Result<ExperimentResult> {
    spec.validate()?;
    let run = || -> Result<Vec<EstimateRow>> {
        spec.n_grid
            .iter()
            .map(|&n| {
                let start = Instant::now();
                let outcomes = (0..spec.trials as u64)
                    .into_par_iter()
                    .map(|t| spec.trial_holds(n, t))
                    .collect::<Result<Vec<bool>>>()?;
                let successes = outcomes.iter().filter(|&&b| b).count();
                let wall_ms = if options.timing { start.elapsed().as_millis() as u64 } else { 0 };
                Ok(EstimateRow::new(n, spec.trials, successes, wall_ms))
            })
            .collect()
    };
    let rows = match options.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidParams(format!("cannot start {w} workers: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let fit = fit_decay(&rows);
    Ok(ExperimentResult { rows, fit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Model;

    fn spec(event: Event, model: Model, grid: &[usize], trials: usize) -> ExperimentSpec {
        ExperimentSpec {
            event,
            sampler: SamplerSpec::new(model, 2, 0, 2, 0).unwrap(),
            n_grid: grid.to_vec(),
            trials,
            params: CertParams::default(),
            seed: 7,
        }
    }

    #[test]
    fn event_names_round_trip() {
        let events = [
            Event::Prefixes,
            Event::DistinctSubwords,
            Event::RelabelMatchFree,
            Event::Equidistributed(BigRational::new(1.into(), 20.into())),
            Event::WhiteheadMinimal,
            Event::Coverage(3),
            Event::Certified,
            Event::FreeBasis,
            Event::Malnormal,
        ];
        for e in events {
            assert_eq!(e.to_string().parse::<Event>().unwrap(), e);
            assert!(EVENT_NAMES.contains(&e.name()));
        }
        assert_eq!("equidistributed(0.05)".parse::<Event>().unwrap().to_string(), "equidistributed(1/20)");
        assert!(matches!("lottery".parse::<Event>(), Err(Error::UnknownEvent(_))));
        assert_eq!(Event::parse_with("coverage", None, Some(2)).unwrap(), Event::Coverage(2));
        assert!(Event::parse_with("coverage", None, None).is_err());
    }

    #[test]
    fn infeasible_specs_are_rejected() {
        let mut s = spec(Event::RelabelMatchFree, Model::Walk, &[10], 5);
        s.sampler.k = 9;
        assert!(matches!(run_experiment(&s, RunOptions::default()), Err(Error::RankTooLarge(9))));
        let s = spec(Event::Prefixes, Model::Walk, &[20, 10], 5);
        assert!(run_experiment(&s, RunOptions::default()).is_err());
        let s = spec(Event::Prefixes, Model::Walk, &[10], 0);
        assert!(run_experiment(&s, RunOptions::default()).is_err());
    }

    #[test]
    fn rows_do_not_depend_on_workers() {
        let s = spec(Event::Coverage(2), Model::Walk, &[20, 40, 80], 60);
        let one = run_experiment(&s, RunOptions { workers: Some(1), timing: false }).unwrap();
        let three = run_experiment(&s, RunOptions { workers: Some(3), timing: false }).unwrap();
        assert_eq!(one.to_csv(), three.to_csv());
        let ps: Vec<f64> = one.rows.iter().map(|r| r.p_hat).collect();
        assert!(ps[2] >= ps[0], "{ps:?}");
    }

    #[test]
    fn row_statistics() {
        let r = EstimateRow::new(100, 1000, 990, 0);
        assert_eq!(r.p_hat, 0.99);
        assert!((r.standard_error - (0.99f64 * 0.01 / 1000.0).sqrt()).abs() < 1e-15);
        let full = EstimateRow::new(200, 1000, 1000, 0);
        assert!(full.censored());
        assert_eq!(full.clamped_failure(), 0.001);
    }

    #[test]
    fn fit_recovers_an_exponential() {
        let rows: Vec<EstimateRow> = [100usize, 200, 300]
            .iter()
            .map(|&n| {
                let fail = (-0.01 * n as f64).exp();
                let successes = ((1.0 - fail) * 1e6).round() as usize;
                EstimateRow::new(n, 1_000_000, successes, 0)
            })
            .collect();
        let fit = fit_decay(&rows).unwrap();
        assert!((fit.slope + 0.01).abs() < 1e-4, "{}", fit.slope);
        assert!(fit.intercept.abs() < 1e-2);
        assert!(fit_decay(&rows[..1]).is_none());
    }

    #[test]
    fn csv_layout() {
        let result = ExperimentResult {
            rows: vec![EstimateRow::new(10, 3, 1, 0), EstimateRow::new(20, 3, 3, 0)],
            fit: None,
        };
        let mut result = result;
        result.fit = fit_decay(&result.rows);
        let csv = result.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,trials,successes,p_hat,stderr,wall_ms");
        assert_eq!(lines[1], "10,3,1,0.333333,0.272166,0");
        assert_eq!(lines[2], "20,3,3,1,0,0");
        assert!(lines[3].starts_with("#fit slope="));
        assert_eq!(lines[4], "#censored n=20");
    }

    #[test]
    fn significant_digits() {
        assert_eq!(sig6(0.123456789), "0.123457");
        assert_eq!(sig6(1234567.0), "1234570");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(-0.000123456789), "-0.000123457");
    }

    #[test]
    fn spec_serializes() {
        let s = spec(Event::Equidistributed(BigRational::new(1.into(), 20.into())), Model::Sphere, &[10, 20], 4);
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"equidistributed(1/20)\""));
        let back: ExperimentSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
