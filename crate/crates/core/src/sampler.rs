//! Collapsed Gibbs sampling over latent truth labels.
//!
//! Source quality and per-fact truth probabilities are integrated out; the
//! chain state is one boolean per fact plus, per source, the 2x2 table
//! `n[s][truth][observation]` of claim counts under the current labels.
//! Each fact is resampled from
//!
//! ```text
//! p(t_f = i | rest) ∝ β_i · Π_{c ∈ C_f} (n⁻ᶠ[s_c][i][o_c] + α_{i,o_c}) / (n⁻ᶠ[s_c][i][1] + n⁻ᶠ[s_c][i][0] + α_{i,1} + α_{i,0})
//! ```
//!
//! where `n⁻ᶠ` excludes the claims on `f`. The product is accumulated in log
//! space.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`): the run seed
//! keys the generator through `SeedableRng::seed_from_u64` and chain `c`
//! draws from stream `c`. Both steps are platform independent, so a given
//! `(database, priors, config)` reproduces the same chain everywhere.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{Claim, ClaimDatabase};
use crate::error::{Error, Result};
use crate::priors::{Hyperparameters, ModelPriors};

/// Iteration budget and prediction threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Total sweeps K.
    pub iterations: usize,
    /// Sweeps discarded before averaging.
    pub burn_in: usize,
    /// Keep sweep `i` only when `i % thin == 0`.
    pub thin: usize,
    pub seed: u64,
    pub threshold: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            iterations: 500,
            burn_in: 100,
            thin: 10,
            seed: 0,
            threshold: 0.5,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("iterations must be positive".into()));
        }
        if self.thin == 0 {
            return Err(Error::InvalidConfig("thin must be positive".into()));
        }
        if self.burn_in >= self.iterations {
            return Err(Error::InvalidConfig(format!(
                "burn_in ({}) must be below iterations ({})",
                self.burn_in, self.iterations
            )));
        }
        if (self.iterations - self.burn_in) / self.thin == 0 {
            return Err(Error::InvalidConfig(
                "no sample survives burn-in and thinning".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::InvalidConfig(format!(
                "threshold {} outside [0, 1]",
                self.threshold
            )));
        }
        Ok(())
    }

    /// Sweeps `i` in `burn_in+1..=iterations` with `i % thin == 0`.
    pub fn retained_samples(&self) -> usize {
        self.iterations / self.thin - self.burn_in / self.thin
    }

    #[inline]
    fn keeps(&self, sweep: usize) -> bool {
        sweep > self.burn_in && sweep.is_multiple_of(self.thin)
    }
}

/// Per-source claim counts `n[s][truth][observation]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualityCounts {
    counts: Vec<[[u32; 2]; 2]>,
}

impl QualityCounts {
    pub fn zeros(num_sources: usize) -> Self {
        QualityCounts {
            counts: vec![[[0; 2]; 2]; num_sources],
        }
    }

    #[inline]
    pub fn get(&self, source: usize, truth: bool, observation: bool) -> u32 {
        self.counts[source][truth as usize][observation as usize]
    }

    pub fn source(&self, source: usize) -> [[u32; 2]; 2] {
        self.counts[source]
    }

    pub fn num_sources(&self) -> usize {
        self.counts.len()
    }

    /// Sets a source's table directly.
    pub fn set_source(&mut self, source: usize, table: [[u32; 2]; 2]) {
        self.counts[source] = table;
    }

    #[inline]
    pub(crate) fn add_claims(&mut self, claims: &[Claim], truth: bool) {
        for c in claims {
            self.counts[c.source_id as usize][truth as usize][c.observation as usize] += 1;
        }
    }

    #[inline]
    pub(crate) fn remove_claims(&mut self, claims: &[Claim], truth: bool) {
        for c in claims {
            let n = &mut self.counts[c.source_id as usize][truth as usize][c.observation as usize];
            debug_assert!(*n > 0);
            *n -= 1;
        }
    }
}

/// Posterior truth probability and thresholded label per fact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthResult {
    pub probabilities: Vec<f64>,
    pub labels: Vec<bool>,
    pub threshold: f64,
}

impl TruthResult {
    /// Labels each fact true when its probability is at or above `threshold`.
    pub fn from_probabilities(probabilities: Vec<f64>, threshold: f64) -> Self {
        let labels = probabilities.iter().map(|&p| p >= threshold).collect();
        TruthResult {
            probabilities,
            labels,
            threshold,
        }
    }

    pub fn relabel(&self, threshold: f64) -> Self {
        Self::from_probabilities(self.probabilities.clone(), threshold)
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

/// Recomputes counts from scratch for a full truth assignment.
pub fn sweep_counts_audit(db: &ClaimDatabase, assignment: &[bool]) -> QualityCounts {
    assert_eq!(
        assignment.len(),
        db.num_facts(),
        "assignment must cover every fact"
    );
    let mut counts = QualityCounts::zeros(db.num_sources());
    for c in db.claims() {
        counts.counts[c.source_id as usize][assignment[c.fact_id as usize] as usize]
            [c.observation as usize] += 1;
    }
    counts
}

#[inline]
fn log_weight(claims: &[Claim], counts: &QualityCounts, priors: &ModelPriors, truth: bool) -> f64 {
    let i = truth as usize;
    let mut lw = priors.beta().count(truth).ln();
    for c in claims {
        let s = c.source_id as usize;
        let alpha = priors.source(s).alpha(truth);
        let n = &counts.counts[s][i];
        let num = n[c.observation as usize] as f64 + alpha.count(c.observation);
        let den = (n[0] + n[1]) as f64 + alpha.total();
        lw += num.ln() - den.ln();
    }
    lw
}

/// Normalized conditional `[p(t_f = 0), p(t_f = 1)]` given leave-fact-out counts.
#[inline]
pub(crate) fn conditional_weights(
    claims: &[Claim],
    counts: &QualityCounts,
    priors: &ModelPriors,
) -> [f64; 2] {
    let lw0 = log_weight(claims, counts, priors, false);
    let lw1 = log_weight(claims, counts, priors, true);
    // logistic of the log-odds, stable in both tails
    // both entries are computed directly so their ratio stays exact
    let d = lw1 - lw0;
    if d >= 0.0 {
        let e = (-d).exp();
        [e / (1.0 + e), 1.0 / (1.0 + e)]
    } else {
        let e = d.exp();
        [1.0 / (1.0 + e), e / (1.0 + e)]
    }
}

/// Conditional distribution of fact `fact`'s truth label.
///
/// `counts` must already exclude the claims on `fact`. Returns the
/// normalized pair `[p(t=0), p(t=1)]`.
pub fn conditional_truth_weights(
    fact: usize,
    counts: &QualityCounts,
    db: &ClaimDatabase,
    h: &Hyperparameters,
) -> Result<[f64; 2]> {
    let claims = db.checked_claims_of(fact)?;
    Ok(conditional_weights(claims, counts, &ModelPriors::shared(h)))
}

/// A single Gibbs chain over one database.
pub struct GibbsChain<'a> {
    db: &'a ClaimDatabase,
    priors: &'a ModelPriors,
    assignment: Vec<bool>,
    counts: QualityCounts,
    rng: ChaCha8Rng,
}

impl<'a> GibbsChain<'a> {
    /// Initializes every label with a fair coin from stream `stream` of `seed`.
    pub fn new(
        db: &'a ClaimDatabase,
        priors: &'a ModelPriors,
        seed: u64,
        stream: u64,
    ) -> Result<Self> {
        if !priors.covers(db.num_sources()) {
            return Err(Error::InvalidPrior(format!(
                "per-source priors do not cover {} sources",
                db.num_sources()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let assignment: Vec<bool> = (0..db.num_facts())
            .map(|_| rng.random::<f64>() >= 0.5)
            .collect();
        let counts = sweep_counts_audit(db, &assignment);
        Ok(GibbsChain {
            db,
            priors,
            assignment,
            counts,
            rng,
        })
    }

    /// Resamples one fact's label; returns the new label.
    #[inline]
    pub fn resample(&mut self, fact: usize) -> bool {
        let claims = self.db.claims_of(fact);
        let current = self.assignment[fact];
        self.counts.remove_claims(claims, current);
        let [_, p1] = conditional_weights(claims, &self.counts, self.priors);
        let next = self.rng.random::<f64>() < p1;
        self.counts.add_claims(claims, next);
        self.assignment[fact] = next;
        next
    }

    /// Resamples every fact once, in id order.
    pub fn sweep(&mut self) {
        for f in 0..self.db.num_facts() {
            self.resample(f);
        }
    }

    pub fn assignment(&self) -> &[bool] {
        &self.assignment
    }

    pub fn counts(&self) -> &QualityCounts {
        &self.counts
    }
}

/// Output of a sampling run.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsOutput {
    pub truth: TruthResult,
    pub retained_samples: usize,
    /// Wall-clock seconds of every sweep, one vector per chain.
    pub sweep_seconds: Vec<Vec<f64>>,
}

fn run_chain(
    db: &ClaimDatabase,
    priors: &ModelPriors,
    cfg: &SamplerConfig,
    stream: u64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut chain = GibbsChain::new(db, priors, cfg.seed, stream)?;
    let mut sums = vec![0u32; db.num_facts()];
    let mut timings = Vec::with_capacity(cfg.iterations);
    for sweep in 1..=cfg.iterations {
        let start = Instant::now();
        chain.sweep();
        timings.push(start.elapsed().as_secs_f64());
        if cfg.keeps(sweep) {
            for (s, &t) in sums.iter_mut().zip(chain.assignment()) {
                *s += t as u32;
            }
        }
    }
    let retained = cfg.retained_samples() as f64;
    Ok((
        sums.into_iter().map(|s| s as f64 / retained).collect(),
        timings,
    ))
}

/// Runs `chains` independent chains (streams `0..chains`) concurrently and
/// averages their retained samples.
pub fn run_chains(
    db: &ClaimDatabase,
    priors: &ModelPriors,
    cfg: &SamplerConfig,
    chains: usize,
) -> Result<GibbsOutput> {
    cfg.validate()?;
    if chains == 0 {
        return Err(Error::InvalidConfig(
            "at least one chain is required".into(),
        ));
    }
    let results: Vec<Result<(Vec<f64>, Vec<f64>)>> = if chains == 1 {
        vec![run_chain(db, priors, cfg, 0)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..chains as u64)
                .map(|stream| scope.spawn(move || run_chain(db, priors, cfg, stream)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sampler thread panicked"))
                .collect()
        })
    };

    let mut probabilities = vec![0.0; db.num_facts()];
    let mut sweep_seconds = Vec::with_capacity(chains);
    for r in results {
        let (p, t) = r?;
        for (acc, x) in probabilities.iter_mut().zip(p) {
            *acc += x;
        }
        sweep_seconds.push(t);
    }
    if chains > 1 {
        for p in &mut probabilities {
            *p /= chains as f64;
        }
    }
    Ok(GibbsOutput {
        truth: TruthResult::from_probabilities(probabilities, cfg.threshold),
        retained_samples: cfg.retained_samples() * chains,
        sweep_seconds,
    })
}

/// Fits the model with shared priors on one chain.
pub fn gibbs_run(
    db: &ClaimDatabase,
    h: &Hyperparameters,
    cfg: &SamplerConfig,
) -> Result<TruthResult> {
    if !h.is_proper() {
        return Err(Error::InvalidPrior(
            "sampler requires strictly positive priors".into(),
        ));
    }
    Ok(run_chains(db, &ModelPriors::shared(h), cfg, 1)?.truth)
}
