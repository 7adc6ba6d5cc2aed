//! Command-line front end. Every command prints one JSON document (or CSV
//! for sweeps); failures print `{"code": ..., "message": ...}` on stderr.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::merger::{self, OneViLabel, TwoViLabel};
use crate::analysis::sweep::{sweep, Axis, Quantity};
use crate::analysis::welfare;
use crate::bargain::{nash_fee, oracle_nash_fee, BargainInputs, DEFAULT_FEE_STEP};
use crate::error::{Error, Result};
use crate::game::{pure_nash, DEFAULT_TOL};
use crate::hotelling::{downstream_equilibrium, oracle_price_equilibrium, Carriers, ContentAllocation, OracleConfig};
use crate::model::{ModelParams, VerticalStructure};
use crate::{one_vi, separation, two_vi, verify};

#[derive(Debug, Parser)]
#[command(name = "exclusivity", version, about = "Exclusive content provision in vertically related media markets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Base gross utility of a platform.
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<f64>,
    /// Utility of the first premium title.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Additional utility of the second premium title.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Transport cost.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Advertising revenue per subscriber reached.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<f64>,
    /// Bargaining weight of the content provider.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// JSON file with any of the fields above; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StructureArg {
    Separation,
    OneIntegration,
    TwoIntegrations,
}

impl From<StructureArg> for VerticalStructure {
    fn from(s: StructureArg) -> Self {
        match s {
            StructureArg::Separation => VerticalStructure::Separation,
            StructureArg::OneIntegration => VerticalStructure::OneIntegration,
            StructureArg::TwoIntegrations => VerticalStructure::TwoIntegrations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MergerKind {
    /// A and platform 1 merge out of separation.
    A1,
    /// B and platform 2 counter-merge after A1.
    Counter,
    /// A1 merges anticipating the counter-merger.
    A1First,
    /// B2 merges first, A1 may counter-merge.
    B2First,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check parameter constraints.
    Validate {
        #[command(flatten)]
        params: ParamArgs,
        /// Also require 3t >= (1 + sqrt 2)(alpha + beta).
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Subscriber-market equilibrium for a content allocation.
    Downstream {
        #[command(flatten)]
        params: ParamArgs,
        /// Platforms carrying A's content: none, 1, 2 or 12.
        #[arg(long, default_value = "1")]
        a_carriers: Carriers,
        /// Platforms carrying B's content: none, 1, 2 or 12.
        #[arg(long, default_value = "1")]
        b_carriers: Carriers,
        /// Also run the best-response oracle.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Nash-bargained fee from the two parties' gains from trade.
    Bargain {
        #[arg(long, allow_hyphen_values = true)]
        upstream_gain: f64,
        #[arg(long, allow_hyphen_values = true)]
        downstream_gain: f64,
        #[arg(long)]
        lambda: f64,
        /// Also maximize the Nash product on a fee grid.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Payoff matrix and pure equilibria of a contracting game.
    Game {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        structure: StructureArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Equilibrium region of a contracting game.
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        structure: StructureArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Bargaining-weight thresholds and sign conditions.
    Thresholds {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Consumer surplus and welfare of an equilibrium (r = 0).
    Welfare {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        structure: StructureArg,
        /// Equilibrium label, e.g. "(N,E2)".
        #[arg(long)]
        label: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Merger and counter-merger incentives.
    Merger {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        kind: MergerKind,
        #[arg(long, default_value = "(N,E2)")]
        one_vi_label: String,
        #[arg(long, default_value = "(N,E)")]
        two_vi_label: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate a quantity over a one- or two-dimensional grid.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        /// Grid axis as field:start:stop:step; give once or twice.
        #[arg(long, required = true)]
        vary: Vec<String>,
        #[arg(long)]
        quantity: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Randomized check of closed forms against oracles.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        draws: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialParams {
    v: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    t: Option<f64>,
    r: Option<f64>,
    lambda: Option<f64>,
}

const DEFAULT_V: f64 = 10.0;
const DEFAULT_R: f64 = 0.0;

impl ParamArgs {
    /// Resolve flags over the config file. `v` and `r` have defaults; fields
    /// listed in `free` may be missing (a sweep sets them per point).
    fn resolve(&self, free: &[&str]) -> Result<ModelParams> {
        let file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                serde_json::from_str::<PartialParams>(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
            }
            None => PartialParams::default(),
        };
        let pick = |flag: Option<f64>, from_file: Option<f64>, default: Option<f64>, name: &str| {
            flag.or(from_file)
                .or(default)
                .or(free.contains(&name).then_some(0.0))
                .ok_or_else(|| Error::Config(format!("missing --{name}")))
        };
        Ok(ModelParams::new(
            pick(self.v, file.v, Some(DEFAULT_V), "v")?,
            pick(self.alpha, file.alpha, None, "alpha")?,
            pick(self.beta, file.beta, None, "beta")?,
            pick(self.t, file.t, None, "t")?,
            pick(self.r, file.r, Some(DEFAULT_R), "r")?,
            pick(self.lambda, file.lambda, None, "lambda")?,
        ))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

fn emit(text: String, output: &Option<PathBuf>) -> Result<String> {
    match output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn json_only(out: &OutputArgs) -> Result<()> {
    if out.format == Format::Csv {
        return Err(Error::Config("csv output is only available for sweep".into()));
    }
    Ok(())
}

fn game_for(params: &ModelParams, structure: VerticalStructure) -> Result<crate::game::NormalFormGame> {
    match structure {
        VerticalStructure::Separation => separation::assemble_general_game(params),
        VerticalStructure::OneIntegration => one_vi::one_vi_game(params),
        VerticalStructure::TwoIntegrations => two_vi::two_vi_game(params),
    }
}

fn classify(params: &ModelParams, structure: VerticalStructure) -> Result<Value> {
    let v = match structure {
        VerticalStructure::Separation => serde_json::to_value(separation::classify_region(params, DEFAULT_TOL)?),
        VerticalStructure::OneIntegration => {
            serde_json::to_value(one_vi::classify_one_vi_general(params, DEFAULT_TOL)?)
        }
        VerticalStructure::TwoIntegrations => {
            serde_json::to_value(two_vi::classify_two_vi(params, DEFAULT_TOL)?)
        }
    };
    let mut v = v.expect("classification serializes");
    v["structure"] = json!(structure);
    Ok(v)
}

fn merger_report(
    params: &ModelParams,
    kind: MergerKind,
    one: &str,
    two: &str,
) -> Result<Value> {
    let bad = |e: String| Error::UnknownLabel {
        label: e,
        structure: "merger".into(),
    };
    let one: OneViLabel = one.parse().map_err(bad)?;
    let two: TwoViLabel = two.parse().map_err(bad)?;
    let value = match kind {
        MergerKind::A1 => serde_json::to_value(merger::merger_a1(params, one)?),
        MergerKind::Counter => serde_json::to_value(merger::counter_merger_b2(params, one, two)?),
        MergerKind::A1First => serde_json::to_value(merger::a1_first_sequence(params, one, two)?),
        MergerKind::B2First => serde_json::to_value(merger::merger_b2_first(params, two)?),
    };
    Ok(value.expect("merger report serializes"))
}

/// Execute a parsed command and return what goes to standard output.
pub fn execute(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Validate { params, strict, out } => {
            json_only(&out)?;
            let p = params.resolve(&[])?.validate(strict)?;
            emit(to_json(&json!({ "valid": true, "params": p })), &out.output)
        }
        Command::Downstream {
            params,
            a_carriers,
            b_carriers,
            oracle,
            out,
        } => {
            json_only(&out)?;
            let p = params.resolve(&["lambda"])?;
            separation::require_valid(&p)?;
            let alloc = ContentAllocation::new(a_carriers, b_carriers);
            let exact = downstream_equilibrium(&p, &alloc)?;
            let mut report = json!({ "allocation": alloc, "outcome": exact });
            if oracle {
                let o = oracle_price_equilibrium(&p, &alloc, &OracleConfig::default())?;
                report["oracle"] = json!(o);
                report["max_abs_diff"] = json!(exact.max_abs_diff(&o));
            }
            emit(to_json(&report), &out.output)
        }
        Command::Bargain {
            upstream_gain,
            downstream_gain,
            lambda,
            oracle,
            out,
        } => {
            json_only(&out)?;
            if !(0.0..=1.0).contains(&lambda) {
                return Err(Error::Config(format!("lambda = {lambda} is outside [0, 1]")));
            }
            let inp = BargainInputs::from_gains(upstream_gain, downstream_gain, lambda);
            let mut report = json!({ "inputs": inp, "fee": nash_fee(&inp) });
            if oracle {
                report["oracle_fee"] = json!(oracle_nash_fee(&inp, DEFAULT_FEE_STEP)?);
            }
            emit(to_json(&report), &out.output)
        }
        Command::Game {
            params,
            structure,
            out,
        } => {
            json_only(&out)?;
            let p = params.resolve(&[])?;
            let structure = VerticalStructure::from(structure);
            let game = game_for(&p, structure)?;
            let eq = pure_nash(&game, DEFAULT_TOL);
            emit(
                to_json(&json!({ "structure": structure, "game": game, "equilibria": eq })),
                &out.output,
            )
        }
        Command::Classify {
            params,
            structure,
            out,
        } => {
            json_only(&out)?;
            let p = params.resolve(&[])?;
            emit(to_json(&classify(&p, structure.into())?), &out.output)
        }
        Command::Thresholds { params, out } => {
            json_only(&out)?;
            let p = params.resolve(&["lambda"])?;
            let th = separation::thresholds(&p)?;
            emit(
                to_json(&json!({
                    "separation": th,
                    "two_vi_threshold": two_vi::exclusivity_threshold(&p),
                    "one_vi_condition": one_vi::exclusivity_condition(&p),
                    "a1_merger_threshold": merger::a1_threshold(&p),
                })),
                &out.output,
            )
        }
        Command::Welfare {
            params,
            structure,
            label,
            out,
        } => {
            json_only(&out)?;
            let p = params.resolve(&["lambda"])?;
            emit(to_json(&welfare::welfare(&p, structure.into(), &label)?), &out.output)
        }
        Command::Merger {
            params,
            kind,
            one_vi_label,
            two_vi_label,
            out,
        } => {
            json_only(&out)?;
            let p = params.resolve(&[])?;
            separation::require_valid(&p)?;
            emit(to_json(&merger_report(&p, kind, &one_vi_label, &two_vi_label)?), &out.output)
        }
        Command::Sweep {
            params,
            vary,
            quantity,
            format,
            output,
        } => {
            let axes = vary.iter().map(|s| s.parse()).collect::<Result<Vec<Axis>>>()?;
            let free: Vec<&str> = axes.iter().map(|a| a.field.as_str()).collect();
            let base = params.resolve(&free)?;
            let table = sweep(&base, &axes, quantity.parse::<Quantity>()?)?;
            let text = match format {
                Format::Csv => table.to_csv()?,
                Format::Json => table.to_json() + "\n",
            };
            emit(text, &output)
        }
        Command::Verify { seed, draws, out } => {
            json_only(&out)?;
            let report = verify::run(seed, draws);
            let text = emit(to_json(&report), &out.output)?;
            if report.passed {
                return Ok(text);
            }
            // the report is the useful part of a failure
            print!("{text}");
            let failed: Vec<&str> = report.checks.iter().filter(|c| !c.ok()).map(|c| c.name).collect();
            Err(Error::VerificationFailed(failed.join(", ")))
        }
    }
}

pub fn error_json(code: &str, message: &str) -> String {
    serde_json::to_string(&json!({ "code": code, "message": message })).expect("error serializes")
}

/// Parse `args`, run, and return the process exit code. Standard output and
/// error are written here.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", error_json("ConfigError", first));
            return 2;
        }
    };
    match execute(cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("{}", error_json(e.code(), &e.to_string()));
            if matches!(e, Error::Config(_)) {
                2
            } else {
                1
            }
        }
    }
}
