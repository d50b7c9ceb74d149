//! The `freegroup` command line.
//!
//! Exit codes: 0 on success, 1 when a `--strict` query has a negative answer,
//! 2 on usage, input or format errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certifier::{certify, CertParams};
use crate::error::{Error, Result};
use crate::freewords::{covers_all_subwords, parse_rational, Alphabet, CyclicWord, Orientation, ReducedWord};
use crate::sampling::{Model, SamplerSpec};
use crate::sharpness::{build_tower, verify_sharpness};
use crate::stallings::{fiber_product, StallingsGraph};
use crate::whitehead::minimize;

use super::{run_experiment, Event, ExperimentSpec, RunOptions};

#[derive(Debug, Parser)]
#[command(name = "freegroup", version, about = "Free-group words, Stallings graphs, Whitehead minimization and certification")]
pub struct Cli {
    /// Master seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Trials per grid point for `stats`.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// TOML file whose keys are flag names; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GensArgs {
    /// Rank of the ambient free group (inferred from the words if omitted).
    #[arg(long)]
    pub k: Option<usize>,
    /// Comma-separated generators.
    #[arg(long, value_delimiter = ',')]
    pub gens: Vec<String>,
    /// File with one generator per line; blank lines and `#` comments are skipped.
    #[arg(long)]
    pub gens_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    /// Equidistribution target (defaults to epsilon0(k)).
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Minimal outer-loop length (defaults to 3 m_beta).
    #[arg(long)]
    pub min_outer: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Freely reduce a word.
    Reduce {
        word: String,
        #[arg(long)]
        k: Option<usize>,
        /// Print the cyclic reduction instead.
        #[arg(long)]
        cyclic: bool,
    },
    /// Minimize the cyclic length of a word over its automorphism orbit.
    Minimize {
        word: String,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Stallings graph of a subgroup.
    Fold {
        #[command(flatten)]
        gens: GensArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Graph of the intersection of two subgroups given as graph documents.
    Intersect {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Malnormality by the fiber product.
    Malnormal {
        #[command(flatten)]
        gens: GensArgs,
        /// Read the subgroup from a graph document instead.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        strict: bool,
    },
    /// Run the Aut-malnormality certificate.
    Certify {
        #[command(flatten)]
        gens: GensArgs,
        #[command(flatten)]
        params: ParamArgs,
        /// Exit 1 unless certified.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Random generators, one per line.
    Sample {
        #[arg(long)]
        model: Option<Model>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = 0)]
        trial: u64,
    },
    /// Monte-Carlo event frequencies over a grid of n, as CSV.
    Stats {
        #[arg(long)]
        event: Option<String>,
        /// Word length for the coverage event.
        #[arg(long = "L")]
        coverage_length: Option<usize>,
        #[arg(long)]
        model: Option<Model>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        /// Comma-separated grid of n values.
        #[arg(long)]
        n: Option<String>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        workers: Option<usize>,
        /// Fill in wall_ms (makes the output time-dependent).
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Tower level, splitting and witness for the sharp examples.
    Sharpness {
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        i: Option<usize>,
        /// Print the whole tower instead of the report.
        #[arg(long)]
        tower: bool,
        /// Exit 1 unless rank(C_i) equals the proposition's value.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Whether a cyclic word contains every reduced word of length L.
    Coverage {
        word: String,
        #[arg(long = "L")]
        coverage_length: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        undirected: bool,
        #[arg(long)]
        strict: bool,
    },
}

/// Grid of n values, as a TOML array or a comma-separated string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridValue {
    List(Vec<usize>),
    Text(String),
}

/// Config document; keys are flag names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub event: Option<String>,
    #[serde(rename = "L")]
    pub coverage_length: Option<usize>,
    pub model: Option<Model>,
    pub k: Option<usize>,
    pub p: Option<usize>,
    pub n: Option<GridValue>,
    pub i: Option<usize>,
    pub lambda: Option<String>,
    pub beta: Option<String>,
    pub epsilon: Option<String>,
    pub min_outer: Option<usize>,
    pub workers: Option<usize>,
    pub timing: Option<bool>,
    pub gens: Option<Vec<String>>,
    pub gens_file: Option<PathBuf>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Parse {
            what: "config",
            token: path.display().to_string(),
            reason: e.to_string(),
        })
    }
}

pub fn parse_grid(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse().map_err(|_| Error::Parse {
                what: "n grid",
                token: t.to_string(),
                reason: "expected a non-negative integer".into(),
            })
        })
        .collect()
}

fn alphabet_for(k: Option<usize>, words: &[String]) -> Result<Alphabet> {
    match k {
        Some(k) => Alphabet::new(k),
        None => {
            let mut rank = 2;
            for w in words {
                rank = rank.max(Alphabet::infer(w, 1)?.rank());
            }
            Alphabet::new(rank)
        }
    }
}

fn read_gens(args: &GensArgs, config: &Config) -> Result<(Alphabet, Vec<ReducedWord>)> {
    let mut texts: Vec<String> = args.gens.iter().map(|s| s.trim().to_string()).collect();
    let file = args.gens_file.clone().or_else(|| config.gens_file.clone());
    if texts.is_empty() && file.is_none() {
        texts = config.gens.clone().unwrap_or_default();
    }
    if let Some(path) = file {
        let body = fs::read_to_string(&path)?;
        texts.extend(
            body.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from),
        );
    }
    if texts.is_empty() {
        return Err(Error::InvalidParams("no generators given (use --gens or --gens-file)".into()));
    }
    let alphabet = alphabet_for(args.k.or(config.k), &texts)?;
    let gens = texts
        .iter()
        .map(|t| ReducedWord::parse(alphabet, t))
        .collect::<Result<Vec<_>>>()?;
    Ok((alphabet, gens))
}

fn rational(text: Option<&String>) -> Result<Option<BigRational>> {
    text.map(|t| parse_rational(t)).transpose()
}

fn cert_params(args: &ParamArgs, config: &Config) -> Result<CertParams> {
    let mut p = CertParams::default();
    if let Some(l) = rational(args.lambda.as_ref().or(config.lambda.as_ref()))? {
        p.lambda = l;
    }
    if let Some(b) = rational(args.beta.as_ref().or(config.beta.as_ref()))? {
        p.beta = b;
    }
    p.epsilon_target = rational(args.epsilon.as_ref().or(config.epsilon.as_ref()))?;
    p.min_outer = args.min_outer.or(config.min_outer);
    p.validate()?;
    Ok(p)
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

/// Runs one command; `Ok(false)` means a strict query failed.
fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let seed = cli.seed.or(config.seed).unwrap_or(0);
    match &cli.command {
        Command::Reduce { word, k, cyclic } => {
            let alphabet = alphabet_for(k.or(config.k), std::slice::from_ref(word))?;
            let w = ReducedWord::parse(alphabet, word)?;
            let text = if *cyclic { CyclicWord::of(&w).to_string() } else { w.to_string() };
            emit(out, None, &text)?;
        }
        Command::Minimize { word, k } => {
            let alphabet = alphabet_for(k.or(config.k), std::slice::from_ref(word))?;
            let w = ReducedWord::parse(alphabet, word)?;
            let (minimal, length, auto) = if w.is_empty() {
                (String::from("1"), 0, String::from("id"))
            } else {
                let (m, a) = minimize(&w)?;
                (m.to_string(), m.len(), a.to_string())
            };
            let doc = json!({
                "input": w.to_string(),
                "minimal": minimal,
                "length": length,
                "automorphism": auto,
            });
            emit(out, None, &pretty(&doc))?;
        }
        Command::Fold { gens, output } => {
            let (alphabet, gens) = read_gens(gens, &config)?;
            let g = StallingsGraph::from_generators(alphabet, &gens)?;
            emit(out, output.as_ref(), &g.to_json_pretty())?;
        }
        Command::Intersect { left, right, output } => {
            let g1 = StallingsGraph::from_json(&fs::read_to_string(left)?)?;
            let g2 = StallingsGraph::from_json(&fs::read_to_string(right)?)?;
            let components = fiber_product(&g1, &g2)?;
            let base = components
                .iter()
                .find(|c| c.basepointed)
                .expect("the basepointed component is always returned");
            emit(out, output.as_ref(), &base.to_graph(&g1).to_json_pretty())?;
        }
        Command::Malnormal { gens, graph, strict } => {
            let g = match graph {
                Some(path) => StallingsGraph::from_json(&fs::read_to_string(path)?)?,
                None => {
                    let (alphabet, gens) = read_gens(gens, &config)?;
                    StallingsGraph::from_generators(alphabet, &gens)?
                }
            };
            let witness = g.malnormality_witness().map(|c| {
                let (c1, c2) = c.conjugators(&g, &g);
                c1.concat(&c2.invert()).expect("same alphabet").to_string()
            });
            let malnormal = witness.is_none();
            emit(out, None, &pretty(&json!({ "malnormal": malnormal, "witness": witness })))?;
            return Ok(malnormal || !strict);
        }
        Command::Certify {
            gens,
            params,
            strict,
            output,
        } => {
            let (alphabet, gens) = read_gens(gens, &config)?;
            let params = cert_params(params, &config)?;
            let report = certify(alphabet, &gens, &params)?;
            emit(out, output.as_ref(), &report.to_json_pretty())?;
            return Ok(report.is_certified() || !strict);
        }
        Command::Sample { model, k, n, p, trial } => {
            let spec = SamplerSpec::new(
                model.or(config.model).unwrap_or(Model::Walk),
                k.or(config.k).unwrap_or(2),
                n.or(match &config.n {
                    Some(GridValue::List(v)) if v.len() == 1 => Some(v[0]),
                    _ => None,
                })
                .ok_or_else(|| Error::InvalidParams("sample needs --n".into()))?,
                p.or(config.p).unwrap_or(1),
                seed,
            )?;
            let words: Vec<String> = spec.generators(*trial).iter().map(ToString::to_string).collect();
            emit(out, None, &words.join("\n"))?;
        }
        Command::Stats {
            event,
            coverage_length,
            model,
            k,
            p,
            n,
            params,
            workers,
            timing,
            output,
        } => {
            let cert = cert_params(params, &config)?;
            let name = event
                .clone()
                .or(config.event.clone())
                .ok_or_else(|| Error::InvalidParams("stats needs --event".into()))?;
            let epsilon = rational(params.epsilon.as_ref().or(config.epsilon.as_ref()))?;
            let event = Event::parse_with(&name, epsilon.as_ref(), coverage_length.or(config.coverage_length))?;
            let n_grid = match (n, &config.n) {
                (Some(text), _) => parse_grid(text)?,
                (None, Some(GridValue::Text(text))) => parse_grid(text)?,
                (None, Some(GridValue::List(v))) => v.clone(),
                (None, None) => return Err(Error::InvalidParams("stats needs --n".into())),
            };
            let spec = ExperimentSpec {
                event,
                sampler: SamplerSpec::new(
                    model.or(config.model).unwrap_or(Model::Walk),
                    k.or(config.k).unwrap_or(2),
                    0,
                    p.or(config.p).unwrap_or(2),
                    seed,
                )?,
                n_grid,
                trials: cli.trials.or(config.trials).unwrap_or(100),
                params: cert,
                seed,
            };
            let options = RunOptions {
                workers: workers.or(config.workers),
                timing: *timing || config.timing.unwrap_or(false),
            };
            let result = run_experiment(&spec, options)?;
            emit(out, output.as_ref(), &result.to_csv())?;
        }
        Command::Sharpness {
            k,
            i,
            tower,
            strict,
            output,
        } => {
            let k = k.or(config.k).unwrap_or(2);
            let i = i.or(config.i).unwrap_or(1);
            if *tower {
                let t = build_tower(k, i)?;
                let text = serde_json::to_string_pretty(&t.to_doc())?;
                emit(out, output.as_ref(), &text)?;
            } else {
                let report = verify_sharpness(k, i)?;
                emit(out, output.as_ref(), &report.to_json_pretty())?;
                return Ok(report.equality || !strict);
            }
        }
        Command::Coverage {
            word,
            coverage_length,
            k,
            undirected,
            strict,
        } => {
            let alphabet = alphabet_for(k.or(config.k), std::slice::from_ref(word))?;
            let w = CyclicWord::parse(alphabet, word)?;
            let orientation = if *undirected { Orientation::Undirected } else { Orientation::Directed };
            let r = covers_all_subwords(&w, *coverage_length, orientation)?;
            let missing: Vec<String> = r.missing.iter().map(ToString::to_string).collect();
            let doc = json!({
                "covered": r.covered,
                "length": r.length,
                "total": r.total.to_string(),
                "missing_count": r.missing_count.to_string(),
                "missing": missing,
            });
            emit(out, None, &pretty(&doc))?;
            return Ok(r.covered || !strict);
        }
    }
    Ok(true)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
