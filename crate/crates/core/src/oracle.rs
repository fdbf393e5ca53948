//! Exact posterior over truth labels by enumerating every assignment.
//!
//! With θ, φ⁰ and φ¹ integrated out, the joint probability of the
//! observations and a truth assignment `t` is, up to a constant,
//!
//! ```text
//! Σ_f [ln B(β1 + t_f, β0 + 1 - t_f) - ln B(β1, β0)]
//!   + Σ_s Σ_i [ln B(n_{s,i,1} + α_{i,1}, n_{s,i,0} + α_{i,0}) - ln B(α_{i,1}, α_{i,0})]
//! ```
//!
//! with counts taken under `t`. This is an independent route to the
//! sampler's conditional: the ratio of two joints that differ in one label
//! must equal the conditional odds.

use std::io::Write;

use statrs::function::gamma::ln_gamma;

use crate::data::ClaimDatabase;
use crate::error::{Error, Result};
use crate::priors::{BetaPrior, Hyperparameters};

/// Largest fact count the enumerator accepts.
pub const MAX_ENUMERATED_FACTS: usize = 20;

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

fn prior_term(p: BetaPrior, ones: f64, zeros: f64) -> f64 {
    ln_beta(ones + p.one, zeros + p.zero) - ln_beta(p.one, p.zero)
}

/// Collapsed log joint of the claims and a full truth assignment.
pub fn collapsed_log_joint(
    assignment: &[bool],
    db: &ClaimDatabase,
    h: &Hyperparameters,
) -> Result<f64> {
    if assignment.len() != db.num_facts() {
        return Err(Error::InvalidArgument(format!(
            "assignment covers {} of {} facts",
            assignment.len(),
            db.num_facts()
        )));
    }
    Ok(log_joint_unchecked(
        assignment,
        db,
        h,
        &mut vec![[[0u32; 2]; 2]; db.num_sources()],
    ))
}

fn log_joint_unchecked(
    assignment: &[bool],
    db: &ClaimDatabase,
    h: &Hyperparameters,
    counts: &mut [[[u32; 2]; 2]],
) -> f64 {
    counts.iter_mut().for_each(|c| *c = [[0; 2]; 2]);
    for c in db.claims() {
        counts[c.source_id as usize][assignment[c.fact_id as usize] as usize]
            [c.observation as usize] += 1;
    }

    let beta = h.beta();
    let fact_true = prior_term(beta, 1.0, 0.0);
    let fact_false = prior_term(beta, 0.0, 1.0);
    let mut total: f64 = assignment
        .iter()
        .map(|&t| if t { fact_true } else { fact_false })
        .sum();

    for table in counts.iter() {
        for truth in [false, true] {
            let n = table[truth as usize];
            total += prior_term(h.alpha(truth), n[1] as f64, n[0] as f64);
        }
    }
    total
}

/// Exact posterior over the free (unclamped) facts of a database.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPosterior {
    /// Facts that were enumerated; bit `k` of an assignment index is the
    /// label of `free_facts[k]`.
    pub free_facts: Vec<usize>,
    /// Unnormalized log joint per assignment index.
    pub log_weights: Vec<f64>,
    /// `p(t_f = 1 | observations)` for every fact of the database.
    pub marginals: Vec<f64>,
    pub log_normalizer: f64,
}

fn log_sum_exp(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.map(|v| (v - max).exp()).sum::<f64>().ln()
}

impl ExactPosterior {
    fn position(&self, fact: usize) -> Option<usize> {
        self.free_facts.iter().position(|&f| f == fact)
    }

    /// `1 - p(t_f = 0)`, summed over the assignments with `t_f = 0`.
    pub fn marginal_via_false(&self, fact: usize) -> f64 {
        match self.position(fact) {
            None => self.marginals[fact],
            Some(k) => {
                let lse = log_sum_exp(
                    self.log_weights
                        .iter()
                        .enumerate()
                        .filter(move |(a, _)| a & (1 << k) == 0)
                        .map(|(_, w)| *w),
                );
                1.0 - (lse - self.log_normalizer).exp()
            }
        }
    }

    /// Normalized probability of every enumerated assignment.
    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.log_weights
            .iter()
            .map(move |w| (w - self.log_normalizer).exp())
    }

    /// Writes `assignment,log_joint` rows; assignments are bit strings over
    /// `free_facts` in order.
    pub fn write_dump_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["assignment", "log_joint"])?;
        for (a, lw) in self.log_weights.iter().enumerate() {
            let bits: String = (0..self.free_facts.len())
                .map(|k| if a & (1 << k) != 0 { '1' } else { '0' })
                .collect();
            w.write_record([bits, format!("{lw:.12}")])?;
        }
        w.flush().map_err(|e| Error::io("<oracle dump>", e))?;
        Ok(())
    }
}

/// Exact marginals over all `2^F` truth assignments.
pub fn exact_marginals(db: &ClaimDatabase, h: &Hyperparameters) -> Result<ExactPosterior> {
    exact_marginals_clamped(db, h, &vec![None; db.num_facts()])
}

/// Exact marginals with some labels held fixed. `clamp[f] = Some(v)` pins
/// fact `f` to `v`; the remaining facts are enumerated.
pub fn exact_marginals_clamped(
    db: &ClaimDatabase,
    h: &Hyperparameters,
    clamp: &[Option<bool>],
) -> Result<ExactPosterior> {
    if clamp.len() != db.num_facts() {
        return Err(Error::InvalidArgument("clamp must cover every fact".into()));
    }
    let free_facts: Vec<usize> = (0..db.num_facts())
        .filter(|&f| clamp[f].is_none())
        .collect();
    if free_facts.len() > MAX_ENUMERATED_FACTS {
        return Err(Error::TooLarge {
            facts: free_facts.len(),
            limit: MAX_ENUMERATED_FACTS,
        });
    }

    let total = 1usize << free_facts.len();
    let base: Vec<bool> = clamp.iter().map(|c| c.unwrap_or(false)).collect();
    let mut log_weights = vec![0.0; total];

    let threads = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(total.div_ceil(4096))
        .max(1);
    let chunk = total.div_ceil(threads);
    std::thread::scope(|scope| {
        for (i, out) in log_weights.chunks_mut(chunk).enumerate() {
            let (free_facts, base) = (&free_facts, &base);
            scope.spawn(move || {
                let mut assignment = base.clone();
                let mut counts = vec![[[0u32; 2]; 2]; db.num_sources()];
                for (j, slot) in out.iter_mut().enumerate() {
                    let a = i * chunk + j;
                    for (k, &f) in free_facts.iter().enumerate() {
                        assignment[f] = a & (1 << k) != 0;
                    }
                    *slot = log_joint_unchecked(&assignment, db, h, &mut counts);
                }
            });
        }
    });

    let log_normalizer = log_sum_exp(log_weights.iter().copied());
    let mut marginals: Vec<f64> = clamp
        .iter()
        .map(|c| if c == &Some(true) { 1.0 } else { 0.0 })
        .collect();
    for (k, &f) in free_facts.iter().enumerate() {
        let lse = log_sum_exp(
            log_weights
                .iter()
                .enumerate()
                .filter(|(a, _)| a & (1 << k) != 0)
                .map(|(_, w)| *w),
        );
        marginals[f] = (lse - log_normalizer).exp();
    }

    Ok(ExactPosterior {
        free_facts,
        log_weights,
        marginals,
        log_normalizer,
    })
}
