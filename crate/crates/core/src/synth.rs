//! Synthetic claim databases drawn from the generative model.

use std::io::Write;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::data::{Claim, ClaimDatabase, Fact};
use crate::error::{Error, Result};
use crate::priors::{BetaPrior, Hyperparameters};

/// Beta mass used when a sweep maps an expected quality to a prior.
pub const SWEEP_PRIOR_MASS: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub num_facts: usize,
    pub num_sources: usize,
    /// Generating priors: false-positive rate, sensitivity, truth probability.
    pub hyperparameters: Hyperparameters,
    pub seed: u64,
    /// Fraction of (fact, source) pairs that carry a claim.
    pub coverage: f64,
}

impl SynthSpec {
    pub fn new(
        num_facts: usize,
        num_sources: usize,
        hyperparameters: Hyperparameters,
        seed: u64,
    ) -> Self {
        SynthSpec {
            num_facts,
            num_sources,
            hyperparameters,
            seed,
            coverage: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.num_facts == 0 || self.num_sources == 0 {
            return Err(Error::InvalidArgument(
                "need at least one fact and one source".into(),
            ));
        }
        if !(self.coverage > 0.0 && self.coverage <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "coverage {} outside (0, 1]",
                self.coverage
            )));
        }
        Ok(())
    }

    /// Number of claims a corpus from this spec carries.
    pub fn num_claims(&self) -> usize {
        let pairs = self.num_facts * self.num_sources;
        if self.coverage >= 1.0 {
            pairs
        } else {
            ((self.coverage * pairs as f64).ceil() as usize).min(pairs)
        }
    }
}

/// Quality actually drawn for one source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrawnQuality {
    pub fpr: f64,
    pub sensitivity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub db: ClaimDatabase,
    pub ground_truth: Vec<bool>,
    pub true_quality: Vec<DrawnQuality>,
}

fn beta_dist(p: BetaPrior) -> Beta<f64> {
    Beta::new(p.one, p.zero).expect("validated prior is a valid Beta")
}

/// Samples sources, facts and claims from the generative process.
pub fn generate(spec: &SynthSpec) -> Result<SynthCorpus> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let h = &spec.hyperparameters;

    let (fpr, sens) = (beta_dist(h.alpha0()), beta_dist(h.alpha1()));
    let true_quality: Vec<DrawnQuality> = (0..spec.num_sources)
        .map(|_| DrawnQuality {
            fpr: fpr.sample(&mut rng),
            sensitivity: sens.sample(&mut rng),
        })
        .collect();

    let theta = beta_dist(h.beta());
    let ground_truth: Vec<bool> = (0..spec.num_facts)
        .map(|_| {
            let p = theta.sample(&mut rng);
            rng.random::<f64>() < p
        })
        .collect();

    let pairs = spec.num_facts * spec.num_sources;
    let chosen: Vec<usize> = if spec.coverage >= 1.0 {
        (0..pairs).collect()
    } else {
        let mut v = index::sample(&mut rng, pairs, spec.num_claims()).into_vec();
        v.sort_unstable();
        v
    };

    let claims = chosen
        .into_iter()
        .map(|pair| {
            let (f, s) = (pair / spec.num_sources, pair % spec.num_sources);
            let q = true_quality[s];
            let p = if ground_truth[f] {
                q.sensitivity
            } else {
                q.fpr
            };
            Claim {
                fact_id: f as u32,
                source_id: s as u32,
                observation: rng.random::<f64>() < p,
            }
        })
        .collect();

    let width = (spec.num_sources - 1).to_string().len();
    let sources = (0..spec.num_sources)
        .map(|s| format!("s{s:0width$}"))
        .collect();
    let facts = (0..spec.num_facts)
        .map(|i| Fact {
            id: i,
            entity: format!("e{i}"),
            attribute: format!("a{i}"),
        })
        .collect();

    Ok(SynthCorpus {
        db: ClaimDatabase::from_parts(facts, sources, claims)?,
        ground_truth,
        true_quality,
    })
}

/// Which quality measure a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QualityAxis {
    Sensitivity,
    Specificity,
}

impl std::str::FromStr for QualityAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sensitivity" => Ok(QualityAxis::Sensitivity),
            "specificity" => Ok(QualityAxis::Specificity),
            other => Err(Error::InvalidArgument(format!(
                "unknown quality axis `{other}`"
            ))),
        }
    }
}

/// Generating priors with expected quality `q` on `axis`, mass 100.
pub fn swept_hyperparameters(
    base: &Hyperparameters,
    axis: QualityAxis,
    q: f64,
) -> Result<Hyperparameters> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "expected quality {q} outside (0, 1)"
        )));
    }
    let hit = SWEEP_PRIOR_MASS * q;
    let miss = SWEEP_PRIOR_MASS - hit;
    match axis {
        QualityAxis::Sensitivity => {
            Hyperparameters::new(base.alpha0(), BetaPrior::new(hit, miss), base.beta())
        }
        // alpha0 is over the false-positive rate, so specificity q means (1-q, q)
        QualityAxis::Specificity => {
            Hyperparameters::new(BetaPrior::new(miss, hit), base.alpha1(), base.beta())
        }
    }
}

/// One corpus per expected value; corpus `i` uses seed `base.seed + i`.
pub fn quality_sweep(
    base: &SynthSpec,
    axis: QualityAxis,
    expected_values: &[f64],
) -> Result<Vec<SynthCorpus>> {
    let specs = expected_values
        .iter()
        .enumerate()
        .map(|(i, &q)| {
            Ok(SynthSpec {
                hyperparameters: swept_hyperparameters(&base.hyperparameters, axis, q)?,
                seed: base.seed.wrapping_add(i as u64),
                ..*base
            })
        })
        .collect::<Result<Vec<_>>>()?;
    specs.iter().map(generate).collect()
}

impl SynthCorpus {
    /// Writes `fact_id,truth`.
    pub fn write_ground_truth_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["fact_id", "truth"])?;
        for (f, t) in self.ground_truth.iter().enumerate() {
            w.write_record([f.to_string(), t.to_string()])?;
        }
        w.flush().map_err(|e| Error::io("<ground truth>", e))?;
        Ok(())
    }

    /// Writes `source,fpr,sensitivity`.
    pub fn write_true_quality_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["source", "fpr", "sensitivity"])?;
        for (name, q) in self.db.sources().iter().zip(&self.true_quality) {
            w.write_record([
                name.clone(),
                format!("{:.6}", q.fpr),
                format!("{:.6}", q.sensitivity),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<true quality>", e))?;
        Ok(())
    }
}
