//! The `ltm` command line.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 for data errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::data::{ingest_triples, ClaimDatabase};
use crate::error::Error;
use crate::eval::{metrics, voting};
use crate::io::{
    self, read_labels_csv, read_truth_csv, write_quality_csv, write_truth_csv, FactKey, OutputSet,
};
use crate::oracle::exact_marginals;
use crate::priors::{BetaPrior, Hyperparameters};
use crate::quality::{
    carried_priors, estimate_quality, incremental_predict, quality_to_prior, QualityModel,
    QualitySnapshot,
};
use crate::sampler::{run_chains, SamplerConfig, TruthResult};
use crate::synth::{generate, quality_sweep, QualityAxis, SynthSpec};
use crate::ModelPriors;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Data(e)
    }
}

trait UsageExt<T> {
    fn usage(self) -> Result<T, CliError>;
}

impl<T> UsageExt<T> for Result<T, Error> {
    fn usage(self) -> Result<T, CliError> {
        self.map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ltm",
    version,
    about = "Truth discovery from conflicting sources with a latent truth model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the fact and claim tables from a triples CSV.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Fit the model and write truth, quality, snapshot and run metadata.
    Run {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out_dir: PathBuf,
        /// Record per-sweep wall clock in the run metadata.
        #[arg(long)]
        emit_timing: bool,
    },
    /// Estimate source quality from an existing truth CSV.
    Quality {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Truth CSV as written by `run`.
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Predict truth for new claims from a quality snapshot.
    Predict {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long, value_enum, default_value_t = PredictMode::Frozen)]
        mode: PredictMode,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Generate a synthetic corpus with known truth.
    Synth {
        #[arg(long)]
        facts: usize,
        #[arg(long)]
        sources: usize,
        /// Generating false-positive-rate prior.
        #[arg(long, value_parser = parse_pair, default_value = "10,90")]
        alpha0: BetaPrior,
        /// Generating sensitivity prior.
        #[arg(long, value_parser = parse_pair, default_value = "90,10")]
        alpha1: BetaPrior,
        #[arg(long, value_parser = parse_pair, default_value = "10,10")]
        beta: BetaPrior,
        #[arg(long, default_value_t = 1.0)]
        coverage: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generate one corpus per value of this quality measure.
        #[arg(long, value_enum, requires = "values")]
        sweep: Option<SweepAxis>,
        /// Expected quality values for `--sweep`, comma separated.
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Score predictions (or the voting baseline) against labeled truth.
    Eval {
        /// Truth CSV as written by `run` or `predict`.
        #[arg(long, conflicts_with = "baseline")]
        predictions: Option<PathBuf>,
        #[arg(long, value_enum)]
        baseline: Option<Baseline>,
        #[command(flatten)]
        input: InputArgs,
        /// `entity,attribute,truth` or `fact_id,truth`.
        #[arg(long)]
        labels: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Exact marginals by enumeration (at most 20 facts).
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Also write every assignment's log joint.
        #[arg(long)]
        dump: bool,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PredictMode {
    Frozen,
    Refit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Baseline {
    Voting,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    Sensitivity,
    Specificity,
}

/// Either a triples CSV or a pair of fact/claim tables.
#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    #[arg(long, conflicts_with_all = ["facts", "claims"])]
    pub input: Option<PathBuf>,
    #[arg(long, requires = "claims")]
    pub facts: Option<PathBuf>,
    #[arg(long, requires = "facts")]
    pub claims: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// JSON file with any of the fields below; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = parse_pair)]
    pub alpha0: Option<BetaPrior>,
    #[arg(long, value_parser = parse_pair)]
    pub alpha1: Option<BetaPrior>,
    #[arg(long, value_parser = parse_pair)]
    pub beta: Option<BetaPrior>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    #[arg(long)]
    pub thin: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Independent chains run concurrently and averaged.
    #[arg(long)]
    pub chains: Option<usize>,
}

/// Optional settings read from `--config`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha0: Option<[f64; 2]>,
    pub alpha1: Option<[f64; 2]>,
    pub beta: Option<[f64; 2]>,
    pub iterations: Option<usize>,
    pub burn_in: Option<usize>,
    pub thin: Option<usize>,
    pub seed: Option<u64>,
    pub threshold: Option<f64>,
    pub chains: Option<usize>,
}

fn parse_pair(s: &str) -> Result<BetaPrior, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => {
            let a = a.parse::<f64>().map_err(|e| e.to_string())?;
            let b = b.parse::<f64>().map_err(|e| e.to_string())?;
            Ok(BetaPrior::new(a, b))
        }
        _ => Err(format!("expected two comma-separated numbers, got `{s}`")),
    }
}

/// Resolved model settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub hyperparameters: Hyperparameters,
    pub sampler: SamplerConfig,
    pub chains: usize,
}

impl ModelArgs {
    fn file_config(&self) -> Result<RunConfig, CliError> {
        match &self.config {
            None => Ok(RunConfig::default()),
            Some(p) => {
                let f = io::open(p)?;
                serde_json::from_reader(f)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
            }
        }
    }

    /// Merges flags over the config file over the defaults for `num_facts`.
    pub fn resolve(&self, num_facts: usize) -> Result<Resolved, CliError> {
        let file = self.file_config()?;
        let defaults = Hyperparameters::default_for(num_facts);
        let pick = |flag: Option<BetaPrior>, file: Option<[f64; 2]>, default: BetaPrior| {
            flag.or(file.map(|[a, b]| BetaPrior::new(a, b)))
                .unwrap_or(default)
        };
        let hyperparameters = Hyperparameters::new(
            pick(self.alpha0, file.alpha0, defaults.alpha0()),
            pick(self.alpha1, file.alpha1, defaults.alpha1()),
            pick(self.beta, file.beta, defaults.beta()),
        )
        .usage()?;

        let d = SamplerConfig::default();
        let sampler = SamplerConfig {
            iterations: self.iterations.or(file.iterations).unwrap_or(d.iterations),
            burn_in: self.burn_in.or(file.burn_in).unwrap_or(d.burn_in),
            thin: self.thin.or(file.thin).unwrap_or(d.thin),
            seed: self.seed.or(file.seed).unwrap_or(d.seed),
            threshold: self.threshold.or(file.threshold).unwrap_or(d.threshold),
        };
        sampler.validate().usage()?;
        let chains = self.chains.or(file.chains).unwrap_or(1);
        if chains == 0 {
            return Err(CliError::Usage("--chains must be positive".into()));
        }
        Ok(Resolved {
            hyperparameters,
            sampler,
            chains,
        })
    }
}

impl InputArgs {
    fn load(&self) -> Result<ClaimDatabase, CliError> {
        match (&self.input, &self.facts, &self.claims) {
            (Some(p), None, None) => {
                Ok(ClaimDatabase::from_triples(&ingest_triples(io::open(p)?)?)?)
            }
            (None, Some(f), Some(c)) => Ok(ClaimDatabase::read_tables(io::open(f)?, io::open(c)?)?),
            _ => Err(CliError::Usage(
                "give either --input or both --facts and --claims".into(),
            )),
        }
    }

    /// Like [`load`](Self::load) but an input without rows yields `None`.
    fn load_maybe_empty(&self) -> Result<Option<ClaimDatabase>, CliError> {
        if let Some(p) = &self.input {
            let triples = ingest_triples(io::open(p)?)?;
            if triples.is_empty() {
                return Ok(None);
            }
            return Ok(Some(ClaimDatabase::from_triples(&triples)?));
        }
        self.load().map(Some)
    }
}

#[derive(Debug, Serialize)]
struct RunMetadata<'a> {
    hyperparameters: &'a Hyperparameters,
    config: &'a SamplerConfig,
    seed: u64,
    iterations: usize,
    chains: usize,
    retained_samples: usize,
    num_facts: usize,
    num_sources: usize,
    num_claims: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep_seconds: Option<&'a [Vec<f64>]>,
}

fn truth_output(
    out: &mut OutputSet,
    dir: &Path,
    db: &ClaimDatabase,
    truth: &TruthResult,
) -> Result<(), CliError> {
    out.render(dir.join("truth.csv"), |w| write_truth_csv(db, truth, w))?;
    Ok(())
}

fn cmd_ingest(input: &Path, out_dir: &Path) -> Result<(), CliError> {
    let db = ClaimDatabase::from_triples(&ingest_triples(io::open(input)?)?)?;
    let mut out = OutputSet::new();
    out.render(out_dir.join("facts.csv"), |w| db.write_facts_csv(w))?;
    out.render(out_dir.join("claims.csv"), |w| db.write_claims_csv(w))?;
    out.commit()?;
    Ok(())
}

fn cmd_run(
    input: &InputArgs,
    model: &ModelArgs,
    out_dir: &Path,
    emit_timing: bool,
) -> Result<(), CliError> {
    let db = input.load()?;
    let r = model.resolve(db.num_facts())?;
    let fit = run_chains(
        &db,
        &ModelPriors::shared(&r.hyperparameters),
        &r.sampler,
        r.chains,
    )?;
    let quality = estimate_quality(&db, &fit.truth.probabilities, &r.hyperparameters)?;

    let meta = RunMetadata {
        hyperparameters: &r.hyperparameters,
        config: &r.sampler,
        seed: r.sampler.seed,
        iterations: r.sampler.iterations,
        chains: r.chains,
        retained_samples: fit.retained_samples,
        num_facts: db.num_facts(),
        num_sources: db.num_sources(),
        num_claims: db.num_claims(),
        sweep_seconds: emit_timing.then_some(fit.sweep_seconds.as_slice()),
    };

    let mut out = OutputSet::new();
    truth_output(&mut out, out_dir, &db, &fit.truth)?;
    out.render(out_dir.join("quality.csv"), |w| {
        write_quality_csv(&quality, w)
    })?;
    out.add_json(
        out_dir.join("quality_snapshot.json"),
        &QualitySnapshot::new(&quality, &r.hyperparameters),
    )?;
    out.add_json(out_dir.join("run_metadata.json"), &meta)?;
    out.commit()?;
    Ok(())
}

fn cmd_quality(
    input: &InputArgs,
    model: &ModelArgs,
    truth: &Path,
    out_dir: &Path,
) -> Result<(), CliError> {
    let db = input.load()?;
    let r = model.resolve(db.num_facts())?;
    let rows = read_truth_csv(io::open(truth)?)?;
    let mut probabilities = vec![None; db.num_facts()];
    for row in rows {
        let id = db.fact_id(&row.entity, &row.attribute).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "truth row for unknown fact {}",
                FactKey::new(&row.entity, &row.attribute)
            ))
        })?;
        probabilities[id] = Some(row.probability);
    }
    let probabilities = probabilities
        .into_iter()
        .enumerate()
        .map(|(f, p)| {
            p.ok_or_else(|| Error::InvalidArgument(format!("no truth probability for fact {f}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let quality = estimate_quality(&db, &probabilities, &r.hyperparameters)?;

    let mut out = OutputSet::new();
    out.render(out_dir.join("quality.csv"), |w| {
        write_quality_csv(&quality, w)
    })?;
    out.add_json(
        out_dir.join("quality_snapshot.json"),
        &QualitySnapshot::new(&quality, &r.hyperparameters),
    )?;
    out.commit()?;
    Ok(())
}

fn cmd_predict(
    input: &InputArgs,
    model: &ModelArgs,
    snapshot: &Path,
    mode: PredictMode,
    out_dir: &Path,
) -> Result<(), CliError> {
    let snapshot: QualitySnapshot =
        serde_json::from_reader(io::open(snapshot)?).map_err(Error::from)?;
    let h = snapshot.hyperparameters;
    let Some(db) = input.load_maybe_empty()? else {
        let mut out = OutputSet::new();
        out.add(
            out_dir.join("truth.csv"),
            b"fact_id,entity,attribute,probability,label\n".to_vec(),
        );
        out.commit()?;
        return Ok(());
    };

    let truth = match mode {
        PredictMode::Frozen => {
            let threshold = model.resolve(db.num_facts())?.sampler.threshold;
            let qm = QualityModel::new(&snapshot.quality(), &h);
            incremental_predict(&db, &qm, h.beta(), threshold)
        }
        PredictMode::Refit => {
            let r = model.resolve(db.num_facts())?;
            let carried = quality_to_prior(&snapshot.quality(), &h);
            let priors = carried_priors(&db, &h, &carried);
            run_chains(&db, &priors, &r.sampler, r.chains)?.truth
        }
    };

    let mut out = OutputSet::new();
    truth_output(&mut out, out_dir, &db, &truth)?;
    out.commit()?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_synth(
    facts: usize,
    sources: usize,
    priors: (BetaPrior, BetaPrior, BetaPrior),
    coverage: f64,
    seed: u64,
    sweep: Option<SweepAxis>,
    values: &[f64],
    out_dir: &Path,
) -> Result<(), CliError> {
    let h = Hyperparameters::new(priors.0, priors.1, priors.2).usage()?;
    let spec = SynthSpec {
        num_facts: facts,
        num_sources: sources,
        hyperparameters: h,
        seed,
        coverage,
    };
    let corpora = match sweep {
        None => vec![(out_dir.to_path_buf(), generate(&spec).usage()?)],
        Some(axis) => {
            let (axis, name) = match axis {
                SweepAxis::Sensitivity => (QualityAxis::Sensitivity, "sensitivity"),
                SweepAxis::Specificity => (QualityAxis::Specificity, "specificity"),
            };
            let corpora = quality_sweep(&spec, axis, values).usage()?;
            values
                .iter()
                .zip(corpora)
                .map(|(q, c)| (out_dir.join(format!("{name}_{q}")), c))
                .collect()
        }
    };

    let mut out = OutputSet::new();
    for (dir, c) in &corpora {
        out.render(dir.join("facts.csv"), |w| c.db.write_facts_csv(w))?;
        out.render(dir.join("claims.csv"), |w| c.db.write_claims_csv(w))?;
        out.render(dir.join("ground_truth.csv"), |w| {
            c.write_ground_truth_csv(w)
        })?;
        out.render(dir.join("true_quality.csv"), |w| {
            c.write_true_quality_csv(w)
        })?;
    }
    out.commit()?;
    Ok(())
}

fn cmd_eval(
    predictions: Option<&Path>,
    baseline: Option<Baseline>,
    input: &InputArgs,
    labels: &Path,
    threshold: f64,
    out_dir: &Path,
) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(CliError::Usage(format!(
            "threshold {threshold} outside [0, 1]"
        )));
    }
    let labels = read_labels_csv(io::open(labels)?)?;

    let scores: std::collections::BTreeMap<FactKey, f64> = match (predictions, baseline) {
        (Some(p), None) => read_truth_csv(io::open(p)?)?
            .into_iter()
            .map(|r| (FactKey::new(r.entity, r.attribute), r.probability))
            .collect(),
        (None, Some(Baseline::Voting)) => {
            let db = input.load()?;
            db.facts()
                .iter()
                .zip(voting(&db))
                .map(|(f, v)| (FactKey::new(&f.entity, &f.attribute), v))
                .collect()
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --predictions or --baseline".into(),
            ))
        }
    };

    let labels = match labels {
        io::Labels::ByKey(m) => m,
        by_id => {
            let db = input.load()?;
            by_id.into_keys(&db)?
        }
    };
    // Only labeled facts are evaluated.
    let scored: std::collections::BTreeMap<FactKey, f64> = labels
        .keys()
        .filter_map(|k| scores.get(k).map(|s| (k.clone(), *s)))
        .collect();
    let report = metrics(&scored, &labels, threshold)?;

    let mut out = OutputSet::new();
    out.add_json(out_dir.join("report.json"), &report)?;
    out.render(out_dir.join("curve.csv"), |w| report.write_curve_csv(w))?;
    out.commit()?;
    Ok(())
}

fn cmd_oracle(
    input: &InputArgs,
    model: &ModelArgs,
    dump: bool,
    out_dir: &Path,
) -> Result<(), CliError> {
    let db = input.load()?;
    let r = model.resolve(db.num_facts())?;
    let post = exact_marginals(&db, &r.hyperparameters)?;
    let truth = TruthResult::from_probabilities(post.marginals.clone(), r.sampler.threshold);

    let mut out = OutputSet::new();
    out.render(out_dir.join("marginals.csv"), |w| {
        write_truth_csv(&db, &truth, w)
    })?;
    if dump {
        out.render(out_dir.join("assignments.csv"), |w| post.write_dump_csv(w))?;
    }
    out.commit()?;
    Ok(())
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Ingest { input, out_dir } => cmd_ingest(input, out_dir),
        Command::Run {
            input,
            model,
            out_dir,
            emit_timing,
        } => cmd_run(input, model, out_dir, *emit_timing),
        Command::Quality {
            input,
            model,
            truth,
            out_dir,
        } => cmd_quality(input, model, truth, out_dir),
        Command::Predict {
            input,
            model,
            snapshot,
            mode,
            out_dir,
        } => cmd_predict(input, model, snapshot, *mode, out_dir),
        Command::Synth {
            facts,
            sources,
            alpha0,
            alpha1,
            beta,
            coverage,
            seed,
            sweep,
            values,
            out_dir,
        } => cmd_synth(
            *facts,
            *sources,
            (*alpha0, *alpha1, *beta),
            *coverage,
            *seed,
            *sweep,
            values,
            out_dir,
        ),
        Command::Eval {
            predictions,
            baseline,
            input,
            labels,
            threshold,
            out_dir,
        } => cmd_eval(
            predictions.as_deref(),
            *baseline,
            input,
            labels,
            *threshold,
            out_dir,
        ),
        Command::Oracle {
            input,
            model,
            dump,
            out_dir,
        } => cmd_oracle(input, model, *dump, out_dir),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
/// Diagnostics go to standard error.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("ltm: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_parse_with_spaces() {
        assert_eq!(parse_pair("3, 0.5").unwrap(), BetaPrior::new(3.0, 0.5));
        assert!(parse_pair("3").is_err());
        assert!(parse_pair("1,2,3").is_err());
        assert!(parse_pair("a,1").is_err());
    }

    #[test]
    fn unset_settings_take_defaults() {
        let r = ModelArgs::default().resolve(2420).unwrap();
        assert_eq!(r.hyperparameters, Hyperparameters::default_for(2420));
        assert_eq!(r.sampler, SamplerConfig::default());
        assert_eq!(r.chains, 1);
    }

    #[test]
    fn flags_replace_single_components() {
        let args = ModelArgs {
            beta: Some(BetaPrior::new(2.0, 3.0)),
            thin: Some(5),
            ..ModelArgs::default()
        };
        let r = args.resolve(10).unwrap();
        assert_eq!(r.hyperparameters.beta(), BetaPrior::new(2.0, 3.0));
        assert_eq!(
            r.hyperparameters.alpha1(),
            Hyperparameters::default_for(10).alpha1()
        );
        assert_eq!(r.sampler.thin, 5);
    }

    #[test]
    fn invalid_settings_are_usage_errors() {
        let bad_prior = ModelArgs {
            alpha0: Some(BetaPrior::new(0.0, 1.0)),
            ..ModelArgs::default()
        };
        assert_eq!(bad_prior.resolve(10).unwrap_err().exit_code(), EXIT_USAGE);
        let no_chains = ModelArgs {
            chains: Some(0),
            ..ModelArgs::default()
        };
        assert_eq!(no_chains.resolve(10).unwrap_err().exit_code(), EXIT_USAGE);
    }

    #[test]
    fn parse_failures_map_to_exit_codes() {
        assert_eq!(run_from_args(["ltm"]), EXIT_USAGE);
        assert_eq!(run_from_args(["ltm", "oracle", "--nope"]), EXIT_USAGE);
        assert_eq!(run_from_args(["ltm", "--help"]), EXIT_OK);
    }
}
