//! Beta pseudo-count priors of the latent truth model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pseudo-counts of a Beta prior over a Bernoulli parameter: `one` is the
/// prior count of outcome 1, `zero` the prior count of outcome 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaPrior {
    pub one: f64,
    pub zero: f64,
}

impl BetaPrior {
    pub const fn new(one: f64, zero: f64) -> Self {
        BetaPrior { one, zero }
    }

    /// Pseudo-count for outcome `j` (0 or 1).
    #[inline]
    pub fn count(&self, outcome: bool) -> f64 {
        if outcome {
            self.one
        } else {
            self.zero
        }
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.one + self.zero
    }

    /// Prior mean of the outcome-1 probability.
    pub fn mean(&self) -> f64 {
        self.one / self.total()
    }

    fn validate(&self, name: &str) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(self.one) && ok(self.zero) {
            Ok(())
        } else {
            Err(Error::InvalidPrior(format!(
                "{name} = ({}, {}) must have both components finite and > 0",
                self.one, self.zero
            )))
        }
    }
}

/// Priors over false-positive rate (`alpha0`), sensitivity (`alpha1`) and
/// per-fact truth probability (`beta`).
///
/// `alpha0 = (false-positive count, true-negative count)`,
/// `alpha1 = (true-positive count, false-negative count)`,
/// `beta = (true count, false count)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHyperparameters", into = "RawHyperparameters")]
pub struct Hyperparameters {
    alpha0: BetaPrior,
    alpha1: BetaPrior,
    beta: BetaPrior,
}

#[derive(Serialize, Deserialize)]
struct RawHyperparameters {
    alpha0: [f64; 2],
    alpha1: [f64; 2],
    beta: [f64; 2],
}

impl TryFrom<RawHyperparameters> for Hyperparameters {
    type Error = Error;

    fn try_from(raw: RawHyperparameters) -> Result<Self> {
        Hyperparameters::new(
            BetaPrior::new(raw.alpha0[0], raw.alpha0[1]),
            BetaPrior::new(raw.alpha1[0], raw.alpha1[1]),
            BetaPrior::new(raw.beta[0], raw.beta[1]),
        )
    }
}

impl From<Hyperparameters> for RawHyperparameters {
    fn from(h: Hyperparameters) -> Self {
        RawHyperparameters {
            alpha0: [h.alpha0.one, h.alpha0.zero],
            alpha1: [h.alpha1.one, h.alpha1.zero],
            beta: [h.beta.one, h.beta.zero],
        }
    }
}

/// Default sensitivity prior, uniform-ish and weak.
pub const DEFAULT_ALPHA1: BetaPrior = BetaPrior::new(50.0, 50.0);
/// Default per-fact truth prior.
pub const DEFAULT_BETA: BetaPrior = BetaPrior::new(10.0, 10.0);
/// Expected specificity encoded by the default false-positive prior.
pub const DEFAULT_SPECIFICITY: f64 = 0.99;

impl Hyperparameters {
    pub fn new(alpha0: BetaPrior, alpha1: BetaPrior, beta: BetaPrior) -> Result<Self> {
        alpha0.validate("alpha0")?;
        alpha1.validate("alpha1")?;
        beta.validate("beta")?;
        Ok(Hyperparameters {
            alpha0,
            alpha1,
            beta,
        })
    }

    /// Defaults scaled to a database with `num_facts` facts: the
    /// false-positive prior has mean 0.01 and total mass
    /// `max(100, ceil(num_facts / 3))`.
    pub fn default_for(num_facts: usize) -> Self {
        let mass = (100.0f64).max((num_facts as f64 / 3.0).ceil());
        Hyperparameters {
            alpha0: BetaPrior::new(
                (1.0 - DEFAULT_SPECIFICITY) * mass,
                DEFAULT_SPECIFICITY * mass,
            ),
            alpha1: DEFAULT_ALPHA1,
            beta: DEFAULT_BETA,
        }
    }

    /// All-zero pseudo-counts. MAP quality estimates under this prior are the
    /// empirical confusion-matrix ratios. Not a proper prior; the sampler
    /// must never see it.
    #[cfg(any(test, feature = "test-priors"))]
    pub fn degenerate_zero() -> Self {
        let zero = BetaPrior::new(0.0, 0.0);
        Hyperparameters {
            alpha0: zero,
            alpha1: zero,
            beta: zero,
        }
    }

    pub fn alpha0(&self) -> BetaPrior {
        self.alpha0
    }

    pub fn alpha1(&self) -> BetaPrior {
        self.alpha1
    }

    pub fn beta(&self) -> BetaPrior {
        self.beta
    }

    /// Quality prior for truth value `truth`: `alpha1` when true, `alpha0` otherwise.
    #[inline]
    pub fn alpha(&self, truth: bool) -> BetaPrior {
        if truth {
            self.alpha1
        } else {
            self.alpha0
        }
    }

    pub(crate) fn is_proper(&self) -> bool {
        [self.alpha0, self.alpha1, self.beta]
            .iter()
            .all(|p| p.one > 0.0 && p.zero > 0.0)
    }
}

/// Quality prior of one source: `[alpha0, alpha1]`, indexed by truth value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourcePrior {
    pub alpha0: BetaPrior,
    pub alpha1: BetaPrior,
}

impl SourcePrior {
    #[inline]
    pub fn alpha(&self, truth: bool) -> BetaPrior {
        if truth {
            self.alpha1
        } else {
            self.alpha0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum SourcePriors {
    Shared(SourcePrior),
    PerSource(Vec<SourcePrior>),
}

/// Priors as consumed by the sampler: one truth prior plus either a shared
/// or a per-source quality prior.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPriors {
    beta: BetaPrior,
    sources: SourcePriors,
}

impl ModelPriors {
    pub fn shared(h: &Hyperparameters) -> Self {
        ModelPriors {
            beta: h.beta,
            sources: SourcePriors::Shared(SourcePrior {
                alpha0: h.alpha0,
                alpha1: h.alpha1,
            }),
        }
    }

    /// Per-source quality priors, aligned with the database's source ids.
    pub fn per_source(beta: BetaPrior, sources: Vec<SourcePrior>) -> Result<Self> {
        beta.validate("beta")?;
        for (i, s) in sources.iter().enumerate() {
            s.alpha0.validate(&format!("alpha0 of source {i}"))?;
            s.alpha1.validate(&format!("alpha1 of source {i}"))?;
        }
        Ok(ModelPriors {
            beta,
            sources: SourcePriors::PerSource(sources),
        })
    }

    #[inline]
    pub fn beta(&self) -> BetaPrior {
        self.beta
    }

    #[inline]
    pub fn source(&self, source: usize) -> &SourcePrior {
        match &self.sources {
            SourcePriors::Shared(p) => p,
            SourcePriors::PerSource(v) => &v[source],
        }
    }

    pub(crate) fn covers(&self, num_sources: usize) -> bool {
        match &self.sources {
            SourcePriors::Shared(_) => true,
            SourcePriors::PerSource(v) => v.len() == num_sources,
        }
    }
}
