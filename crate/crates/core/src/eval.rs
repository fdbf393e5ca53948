//! Predictor evaluation against labeled truth, and the voting baseline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::data::ClaimDatabase;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// Zero when nothing is predicted true.
    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn specificity(&self) -> f64 {
        ratio(self.tn, self.tn + self.fp)
    }

    pub fn accuracy(&self) -> f64 {
        ratio(self.tp + self.tn, self.total())
    }

    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }

    fn add(&mut self, predicted: bool, actual: bool) {
        match (predicted, actual) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }
}

fn check_same_keys<K: Ord + Display, A, B>(
    left: &BTreeMap<K, A>,
    right: &BTreeMap<K, B>,
) -> Result<()> {
    if left.len() == right.len() && left.keys().zip(right.keys()).all(|(a, b)| a == b) {
        return Ok(());
    }
    let l: BTreeSet<&K> = left.keys().collect();
    let r: BTreeSet<&K> = right.keys().collect();
    let join = |s: BTreeSet<&&K>| {
        s.into_iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    Err(Error::MismatchedFacts {
        only_left: join(l.difference(&r).collect()),
        only_right: join(r.difference(&l).collect()),
    })
}

/// Counts agreement between predicted and true labels over the same facts.
pub fn confusion<K: Ord + Display>(
    pred: &BTreeMap<K, bool>,
    truth: &BTreeMap<K, bool>,
) -> Result<ConfusionMatrix> {
    check_same_keys(pred, truth)?;
    let mut m = ConfusionMatrix::default();
    for (p, t) in pred.values().zip(truth.values()) {
        m.add(*p, *t);
    }
    Ok(m)
}

/// Thresholds used for the accuracy/F1 curve: 0.00, 0.05, ..., 1.00.
pub fn threshold_grid() -> impl Iterator<Item = f64> {
    (0..=20).map(|i| i as f64 / 20.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub threshold: f64,
    pub accuracy: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub threshold: f64,
    pub confusion: ConfusionMatrix,
    pub precision: f64,
    pub recall: f64,
    pub specificity: f64,
    pub fpr: f64,
    pub accuracy: f64,
    pub f1: f64,
    /// Absent when the labels are all true or all false.
    pub auc: Option<f64>,
    pub threshold_curve: Vec<CurvePoint>,
}

impl MetricsReport {
    pub fn write_curve_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["threshold", "accuracy", "f1"])?;
        for p in &self.threshold_curve {
            w.write_record([
                format!("{:.2}", p.threshold),
                format!("{:.6}", p.accuracy),
                format!("{:.6}", p.f1),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<curve>", e))?;
        Ok(())
    }
}

fn confusion_at(scores: &[f64], truth: &[bool], threshold: f64) -> ConfusionMatrix {
    let mut m = ConfusionMatrix::default();
    for (&s, &t) in scores.iter().zip(truth) {
        m.add(s >= threshold, t);
    }
    m
}

/// Area under the ROC curve in Mann-Whitney form: the probability that a
/// random true fact scores above a random false one, ties counting half.
pub fn auc(scores: &[f64], truth: &[bool]) -> Option<f64> {
    let positives = truth.iter().filter(|&&t| t).count();
    let negatives = truth.len() - positives;
    if positives == 0 || negatives == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // sum of mid-ranks (1-based) of the true facts
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let mid_rank = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += mid_rank * order[i..=j].iter().filter(|&&k| truth[k]).count() as f64;
        i = j + 1;
    }
    let (p, n) = (positives as f64, negatives as f64);
    Some((rank_sum - p * (p + 1.0) / 2.0) / (p * n))
}

/// Scores facts against labels: confusion-derived metrics at `threshold`,
/// AUC and the accuracy/F1 threshold curve.
pub fn metrics<K: Ord + Display>(
    scores: &BTreeMap<K, f64>,
    truth: &BTreeMap<K, bool>,
    threshold: f64,
) -> Result<MetricsReport> {
    check_same_keys(scores, truth)?;
    if let Some((k, s)) = scores.iter().find(|(_, s)| !(0.0..=1.0).contains(*s)) {
        return Err(Error::InvalidArgument(format!(
            "score {s} of {k} outside [0, 1]"
        )));
    }
    let s: Vec<f64> = scores.values().copied().collect();
    let t: Vec<bool> = truth.values().copied().collect();

    let m = confusion_at(&s, &t, threshold);
    let threshold_curve = threshold_grid()
        .map(|th| {
            let c = confusion_at(&s, &t, th);
            CurvePoint {
                threshold: th,
                accuracy: c.accuracy(),
                f1: c.f1(),
            }
        })
        .collect();

    Ok(MetricsReport {
        threshold,
        confusion: m,
        precision: m.precision(),
        recall: m.recall(),
        specificity: m.specificity(),
        fpr: 1.0 - m.specificity(),
        accuracy: m.accuracy(),
        f1: m.f1(),
        auc: auc(&s, &t),
        threshold_curve,
    })
}

/// Fraction of each fact's claims that are positive.
pub fn voting(db: &ClaimDatabase) -> Vec<f64> {
    (0..db.num_facts())
        .map(|f| {
            let claims = db.claims_of(f);
            if claims.is_empty() {
                0.0
            } else {
                claims.iter().filter(|c| c.observation).count() as f64 / claims.len() as f64
            }
        })
        .collect()
}

/// Accuracy of thresholded scores against a label vector.
pub fn accuracy(scores: &[f64], truth: &[bool], threshold: f64) -> f64 {
    confusion_at(scores, truth, threshold).accuracy()
}
