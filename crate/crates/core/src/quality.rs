//! Source quality read off posterior truth probabilities, and truth
//! prediction for new claims from frozen quality.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::ClaimDatabase;
use crate::error::{Error, Result};
use crate::priors::{BetaPrior, Hyperparameters, ModelPriors, SourcePrior};
use crate::sampler::TruthResult;

/// Quality values are kept inside this margin of 0 and 1 when predicting.
pub const QUALITY_CLAMP: f64 = 1e-6;

/// Expected confusion counts of one source.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ExpectedCounts {
    /// E[n(truth=1, obs=1)]
    pub tp: f64,
    /// E[n(truth=0, obs=1)]
    pub fp: f64,
    /// E[n(truth=1, obs=0)]
    pub fn_: f64,
    /// E[n(truth=0, obs=0)]
    pub tn: f64,
}

impl ExpectedCounts {
    /// Count for truth `i` and observation `j`.
    pub fn get(&self, truth: bool, observation: bool) -> f64 {
        match (truth, observation) {
            (true, true) => self.tp,
            (false, true) => self.fp,
            (true, false) => self.fn_,
            (false, false) => self.tn,
        }
    }
}

/// MAP quality of one source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceQuality {
    pub source: String,
    pub sensitivity: f64,
    pub specificity: f64,
    pub precision: f64,
    pub expected: ExpectedCounts,
}

impl SourceQuality {
    /// Derives the three measures from expected counts and the prior.
    pub fn from_counts(source: String, e: ExpectedCounts, h: &Hyperparameters) -> Self {
        let (a0, a1) = (h.alpha0(), h.alpha1());
        SourceQuality {
            source,
            sensitivity: (e.tp + a1.one) / (e.fn_ + e.tp + a1.zero + a1.one),
            specificity: (e.tn + a0.zero) / (e.tn + e.fp + a0.zero + a0.one),
            precision: (e.tp + a1.one) / (e.fp + e.tp + a0.one + a1.one),
            expected: e,
        }
    }

    /// False-positive rate, `1 - specificity`.
    pub fn false_positive_rate(&self) -> f64 {
        1.0 - self.specificity
    }
}

/// Computes expected confusion counts and MAP quality for every source.
///
/// `truth[f]` is the posterior probability that fact `f` is true.
pub fn estimate_quality(
    db: &ClaimDatabase,
    truth: &[f64],
    h: &Hyperparameters,
) -> Result<Vec<SourceQuality>> {
    if truth.len() != db.num_facts() {
        return Err(Error::InvalidArgument(format!(
            "{} truth probabilities for {} facts",
            truth.len(),
            db.num_facts()
        )));
    }
    if let Some((f, p)) = truth
        .iter()
        .enumerate()
        .find(|(_, p)| !(0.0..=1.0).contains(*p))
    {
        return Err(Error::InvalidArgument(format!(
            "probability {p} of fact {f} outside [0, 1]"
        )));
    }

    let mut expected = vec![ExpectedCounts::default(); db.num_sources()];
    for c in db.claims() {
        let p = truth[c.fact_id as usize];
        let e = &mut expected[c.source_id as usize];
        if c.observation {
            e.tp += p;
            e.fp += 1.0 - p;
        } else {
            e.fn_ += p;
            e.tn += 1.0 - p;
        }
    }

    Ok(db
        .sources()
        .iter()
        .zip(expected)
        .map(|(name, e)| SourceQuality::from_counts(name.clone(), e, h))
        .collect())
}

/// Replaces each source's quality prior with `E[n] + α`. The truth prior is
/// carried over unchanged.
pub fn quality_to_prior(
    quality: &[SourceQuality],
    h: &Hyperparameters,
) -> Vec<(String, Hyperparameters)> {
    quality
        .iter()
        .map(|q| {
            let e = &q.expected;
            let (a0, a1) = (h.alpha0(), h.alpha1());
            let carried = Hyperparameters::new(
                BetaPrior::new(a0.one + e.fp, a0.zero + e.tn),
                BetaPrior::new(a1.one + e.tp, a1.zero + e.fn_),
                h.beta(),
            )
            .expect("adding non-negative counts keeps a proper prior proper");
            (q.source.clone(), carried)
        })
        .collect()
}

/// Aligns carried per-source priors with a new database's source ids;
/// sources without a carried prior fall back to `h`.
pub fn carried_priors(
    db: &ClaimDatabase,
    h: &Hyperparameters,
    carried: &[(String, Hyperparameters)],
) -> ModelPriors {
    let by_name: BTreeMap<&str, &Hyperparameters> =
        carried.iter().map(|(n, p)| (n.as_str(), p)).collect();
    let sources = db
        .sources()
        .iter()
        .map(|name| {
            let p = by_name.get(name.as_str()).copied().unwrap_or(h);
            SourcePrior {
                alpha0: p.alpha0(),
                alpha1: p.alpha1(),
            }
        })
        .collect();
    ModelPriors::per_source(h.beta(), sources).expect("priors validated on construction")
}

/// Serialized quality state for incremental runs: the prior plus per-source
/// expected counts, from which every ratio can be recomputed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualitySnapshot {
    pub hyperparameters: Hyperparameters,
    pub sources: Vec<SnapshotEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotEntry {
    pub source: String,
    pub e_tp: f64,
    pub e_fp: f64,
    pub e_fn: f64,
    pub e_tn: f64,
}

impl QualitySnapshot {
    pub fn new(quality: &[SourceQuality], h: &Hyperparameters) -> Self {
        QualitySnapshot {
            hyperparameters: *h,
            sources: quality
                .iter()
                .map(|q| SnapshotEntry {
                    source: q.source.clone(),
                    e_tp: q.expected.tp,
                    e_fp: q.expected.fp,
                    e_fn: q.expected.fn_,
                    e_tn: q.expected.tn,
                })
                .collect(),
        }
    }

    pub fn quality(&self) -> Vec<SourceQuality> {
        self.sources
            .iter()
            .map(|s| {
                let e = ExpectedCounts {
                    tp: s.e_tp,
                    fp: s.e_fp,
                    fn_: s.e_fn,
                    tn: s.e_tn,
                };
                SourceQuality::from_counts(s.source.clone(), e, &self.hyperparameters)
            })
            .collect()
    }
}

/// Frozen per-source `(false-positive rate, sensitivity)` used for direct
/// prediction, with a prior-mean fallback for sources never seen in training.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityModel {
    rates: BTreeMap<String, (f64, f64)>,
    cold_start: (f64, f64),
}

impl QualityModel {
    pub fn new(quality: &[SourceQuality], h: &Hyperparameters) -> Self {
        QualityModel {
            rates: quality
                .iter()
                .map(|q| (q.source.clone(), (q.false_positive_rate(), q.sensitivity)))
                .collect(),
            cold_start: (h.alpha0().mean(), h.alpha1().mean()),
        }
    }

    /// A model with explicit `(fpr, sensitivity)` per source.
    pub fn from_rates(
        rates: impl IntoIterator<Item = (String, f64, f64)>,
        cold_start: (f64, f64),
    ) -> Self {
        QualityModel {
            rates: rates
                .into_iter()
                .map(|(s, fpr, sens)| (s, (fpr, sens)))
                .collect(),
            cold_start,
        }
    }

    /// `(fpr, sensitivity)` for a source name.
    pub fn rates(&self, source: &str) -> (f64, f64) {
        self.rates.get(source).copied().unwrap_or(self.cold_start)
    }
}

fn clamp_quality(x: f64) -> f64 {
    x.clamp(QUALITY_CLAMP, 1.0 - QUALITY_CLAMP)
}

/// Posterior truth probability of every fact of `db` with source quality
/// held fixed:
///
/// ```text
/// p(t_f = 1) = β1 Π φ¹^o (1-φ¹)^(1-o) / Σ_i β_i Π φⁱ^o (1-φⁱ)^(1-o)
/// ```
pub fn incremental_predict(
    db: &ClaimDatabase,
    model: &QualityModel,
    beta: BetaPrior,
    threshold: f64,
) -> TruthResult {
    let rates: Vec<(f64, f64)> = db
        .sources()
        .iter()
        .map(|s| {
            let (fpr, sens) = model.rates(s);
            (clamp_quality(fpr), clamp_quality(sens))
        })
        .collect();

    let probabilities = (0..db.num_facts())
        .map(|f| {
            let mut lw0 = beta.zero.ln();
            let mut lw1 = beta.one.ln();
            for c in db.claims_of(f) {
                let (phi0, phi1) = rates[c.source_id as usize];
                if c.observation {
                    lw0 += phi0.ln();
                    lw1 += phi1.ln();
                } else {
                    lw0 += (1.0 - phi0).ln();
                    lw1 += (1.0 - phi1).ln();
                }
            }
            let d = lw1 - lw0;
            if d >= 0.0 {
                1.0 / (1.0 + (-d).exp())
            } else {
                let e = d.exp();
                e / (1.0 + e)
            }
        })
        .collect();
    TruthResult::from_probabilities(probabilities, threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{ingest_triples, Claim, Fact};

    fn table1() -> ClaimDatabase {
        ClaimDatabase::from_triples(&ingest_triples(crate::TABLE1_CSV.as_bytes()).unwrap()).unwrap()
    }

    fn by_name<'a>(q: &'a [SourceQuality], name: &str) -> &'a SourceQuality {
        q.iter().find(|s| s.source == name).unwrap()
    }

    #[test]
    fn zero_priors_recover_empirical_ratios() {
        let db = table1();
        let truth: Vec<f64> = db
            .facts()
            .iter()
            .map(|f| {
                if f.entity == "Harry Potter" && f.attribute == "Johnny Depp" {
                    0.0
                } else {
                    1.0
                }
            })
            .collect();
        let q = estimate_quality(&db, &truth, &Hyperparameters::degenerate_zero()).unwrap();
        let m = |n: &str| {
            let s = by_name(&q, n);
            (s.sensitivity, s.specificity, s.precision)
        };
        assert_eq!(m("IMDB"), (1.0, 1.0, 1.0));
        assert_eq!(m("Netflix"), (1.0 / 3.0, 1.0, 1.0));
        assert_eq!(m("BadSource.com"), (2.0 / 3.0, 0.0, 2.0 / 3.0));
    }

    #[test]
    fn claimless_source_gets_prior_mean() {
        let facts = vec![Fact {
            id: 0,
            entity: "e".into(),
            attribute: "a".into(),
        }];
        let db = ClaimDatabase::from_parts(
            facts,
            vec!["busy".into(), "idle".into()],
            vec![Claim {
                fact_id: 0,
                source_id: 0,
                observation: true,
            }],
        )
        .unwrap();
        let h = Hyperparameters::default_for(1);
        let q = estimate_quality(&db, &[0.7], &h).unwrap();
        assert_eq!(q[1].sensitivity, 0.5);
        assert_eq!(q[1].expected, ExpectedCounts::default());
    }

    #[test]
    fn half_probability_splits_expected_counts() {
        let facts = vec![Fact {
            id: 0,
            entity: "e".into(),
            attribute: "a".into(),
        }];
        let db = ClaimDatabase::from_parts(
            facts,
            vec!["s".into()],
            vec![Claim {
                fact_id: 0,
                source_id: 0,
                observation: true,
            }],
        )
        .unwrap();
        let q = estimate_quality(&db, &[0.5], &Hyperparameters::degenerate_zero()).unwrap();
        assert_eq!(q[0].expected.tp, 0.5);
        assert_eq!(q[0].expected.fp, 0.5);
        assert_eq!(q[0].expected.fn_, 0.0);
    }

    #[test]
    fn rejects_bad_probabilities() {
        let db = table1();
        let h = Hyperparameters::default_for(5);
        assert!(estimate_quality(&db, &[0.5; 4], &h).is_err());
        assert!(estimate_quality(&db, &[0.5, 0.5, 1.2, 0.5, 0.5], &h).is_err());
    }

    #[test]
    fn prior_carrying_is_additive() {
        let h = Hyperparameters::default_for(10);
        let zero = SourceQuality::from_counts("s".into(), ExpectedCounts::default(), &h);
        assert_eq!(quality_to_prior(&[zero], &h)[0].1, h);

        let e = ExpectedCounts {
            tp: 10.0,
            ..Default::default()
        };
        let q = SourceQuality::from_counts("s".into(), e, &h);
        assert_eq!(quality_to_prior(&[q], &h)[0].1.alpha1().one, 60.0);
    }

    fn one_claim_db(observation: bool) -> ClaimDatabase {
        let facts = vec![Fact {
            id: 0,
            entity: "e".into(),
            attribute: "a".into(),
        }];
        ClaimDatabase::from_parts(
            facts,
            vec!["s".into()],
            vec![Claim {
                fact_id: 0,
                source_id: 0,
                observation,
            }],
        )
        .unwrap()
    }

    #[test]
    fn direct_prediction_worked_example() {
        let model = QualityModel::from_rates([("s".to_string(), 0.1, 0.9)], (0.5, 0.5));
        let t = incremental_predict(&one_claim_db(true), &model, BetaPrior::new(10.0, 10.0), 0.5);
        assert!((t.probabilities[0] - 0.9).abs() < 1e-12);
        assert!(t.labels[0]);
    }

    #[test]
    fn equal_rates_cancel() {
        let model = QualityModel::from_rates([("s".to_string(), 0.3, 0.3)], (0.5, 0.5));
        let t = incremental_predict(&one_claim_db(false), &model, BetaPrior::new(3.0, 1.0), 0.5);
        assert!((t.probabilities[0] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn perfect_sources_are_clamped() {
        let model = QualityModel::from_rates([("s".to_string(), 0.0, 1.0)], (0.5, 0.5));
        let t = incremental_predict(&one_claim_db(false), &model, BetaPrior::new(1.0, 1.0), 0.5);
        assert!(t.probabilities[0].is_finite());
        assert!(t.probabilities[0] < 1e-5);
    }

    #[test]
    fn unseen_sources_use_prior_means() {
        let h = Hyperparameters::default_for(10);
        let model = QualityModel::new(&[], &h);
        assert_eq!(model.rates("new"), (h.alpha0().mean(), 0.5));
    }

    #[test]
    fn snapshot_rederives_quality_exactly() {
        let db = table1();
        let h = Hyperparameters::default_for(5);
        let q = estimate_quality(&db, &[0.91, 0.33, 0.1234567890123, 0.0, 1.0], &h).unwrap();
        let snap = QualitySnapshot::new(&q, &h);
        let json = serde_json::to_string(&snap).unwrap();
        let back: QualitySnapshot = serde_json::from_str(&json).unwrap();
        assert_eq!(back, snap);
        assert_eq!(back.quality(), q);
    }
}
