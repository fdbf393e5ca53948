//! Property bodies and input strategies shared by the property suite and
//! the acceptance run.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use latent_truth::data::{ClaimDatabase, Fact, RawTriple};
use latent_truth::eval::{auc, metrics, voting};
use latent_truth::oracle::{collapsed_log_joint, exact_marginals};
use latent_truth::quality::{estimate_quality, incremental_predict, QualityModel};
use latent_truth::sampler::{
    conditional_truth_weights, gibbs_run, run_chains, sweep_counts_audit, QualityCounts,
};
use latent_truth::synth::{generate, SynthSpec};
use latent_truth::{BetaPrior, Claim, GibbsChain, Hyperparameters, ModelPriors, SamplerConfig};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub type PropResult = Result<(), TestCaseError>;

pub fn prior(lo: f64, hi: f64) -> impl Strategy<Value = BetaPrior> {
    (lo..hi, lo..hi).prop_map(|(a, b)| BetaPrior::new(a, b))
}

/// Hyperparameters with every pseudo-count in `[0.5, 50)`.
pub fn hyperparameters() -> impl Strategy<Value = Hyperparameters> {
    (prior(0.5, 50.0), prior(0.5, 50.0), prior(0.5, 50.0))
        .prop_map(|(a0, a1, b)| Hyperparameters::new(a0, a1, b).unwrap())
}

/// Builds a database from a dense `facts x sources` grid of optional claims.
pub fn grid_db(num_facts: usize, num_sources: usize, grid: &[Option<bool>]) -> ClaimDatabase {
    let facts = (0..num_facts)
        .map(|i| Fact {
            id: i,
            entity: format!("e{i}"),
            attribute: "a".into(),
        })
        .collect();
    let sources = (0..num_sources).map(|s| format!("s{s}")).collect();
    let claims = grid
        .iter()
        .enumerate()
        .filter_map(|(k, o)| {
            o.map(|observation| Claim {
                fact_id: (k / num_sources) as u32,
                source_id: (k % num_sources) as u32,
                observation,
            })
        })
        .collect();
    ClaimDatabase::from_parts(facts, sources, claims).unwrap()
}

/// Random claim databases with up to `max_facts` facts and `max_sources` sources.
pub fn database(max_facts: usize, max_sources: usize) -> impl Strategy<Value = ClaimDatabase> {
    (1..=max_facts, 1..=max_sources).prop_flat_map(|(f, s)| {
        proptest::collection::vec(proptest::option::weighted(0.7, any::<bool>()), f * s)
            .prop_map(move |g| grid_db(f, s, &g))
    })
}

/// Raw triples over small vocabularies so entities share sources.
pub fn triples() -> impl Strategy<Value = BTreeSet<RawTriple>> {
    proptest::collection::btree_set((0..5u8, 0..4u8, 0..4u8), 1..30).prop_map(|set| {
        set.into_iter()
            .map(|(e, a, s)| {
                RawTriple::new(&format!("e{e}"), &format!("a{a}"), &format!("s{s}")).unwrap()
            })
            .collect()
    })
}

pub fn scored_labels(max: usize) -> impl Strategy<Value = (Vec<f64>, Vec<bool>)> {
    proptest::collection::vec((0..=1000u32, any::<bool>()), 1..max)
        .prop_map(|v| v.into_iter().map(|(s, t)| (s as f64 / 1000.0, t)).unzip())
}

fn short_config(seed: u64) -> SamplerConfig {
    SamplerConfig {
        iterations: 20,
        burn_in: 5,
        thin: 1,
        seed,
        threshold: 0.5,
    }
}

/// Incremental counts equal a from-scratch recount after every single flip.
pub fn count_conservation(db: &ClaimDatabase, h: &Hyperparameters, seed: u64) -> PropResult {
    let priors = ModelPriors::shared(h);
    let mut chain = GibbsChain::new(db, &priors, seed, 0).unwrap();
    prop_assert_eq!(chain.counts(), &sweep_counts_audit(db, chain.assignment()));
    for _ in 0..3 {
        for f in 0..db.num_facts() {
            chain.resample(f);
            prop_assert_eq!(chain.counts(), &sweep_counts_audit(db, chain.assignment()));
        }
    }
    Ok(())
}

/// The four cells of every source sum to its claim count; all cells sum to
/// the claim total.
pub fn count_partition(db: &ClaimDatabase, assignment: &[bool]) -> PropResult {
    let counts = sweep_counts_audit(db, assignment);
    let mut total = 0usize;
    for s in 0..db.num_sources() {
        let per: u32 = counts.source(s).iter().flatten().sum();
        prop_assert_eq!(per as usize, db.claims_by_source(s));
        total += per as usize;
    }
    prop_assert_eq!(total, db.num_claims());
    Ok(())
}

/// Conditional weights of any fact under any counts sum to one.
pub fn weight_normalization(
    db: &ClaimDatabase,
    h: &Hyperparameters,
    tables: &[[[u32; 2]; 2]],
) -> PropResult {
    let mut counts = QualityCounts::zeros(db.num_sources());
    for (s, t) in tables.iter().take(db.num_sources()).enumerate() {
        counts.set_source(s, *t);
    }
    for f in 0..db.num_facts() {
        let [w0, w1] = conditional_truth_weights(f, &counts, db, h).unwrap();
        prop_assert!((0.0..=1.0).contains(&w0) && (0.0..=1.0).contains(&w1));
        prop_assert!((w0 + w1 - 1.0).abs() <= 1e-12, "w0 + w1 = {}", w0 + w1);
    }
    Ok(())
}

/// Relative error between the joint-likelihood ratio of a single-fact flip
/// and the ratio of the sampler's conditional weights.
pub fn flip_ratio_error(
    db: &ClaimDatabase,
    h: &Hyperparameters,
    assignment: &[bool],
    fact: usize,
) -> f64 {
    let mut a = assignment.to_vec();
    a[fact] = true;
    let l1 = collapsed_log_joint(&a, db, h).unwrap();
    a[fact] = false;
    let l0 = collapsed_log_joint(&a, db, h).unwrap();

    // leave-fact-out counts from the other facts
    let rest: Vec<usize> = (0..db.num_facts()).filter(|&g| g != fact).collect();
    let others = db.select_facts(rest.iter().copied()).unwrap();
    let rest_assignment: Vec<bool> = rest.iter().map(|&g| assignment[g]).collect();
    let counts = sweep_counts_audit(&others, &rest_assignment);
    let [w0, w1] = conditional_truth_weights(fact, &counts, db, h).unwrap();

    ((l1 - l0) - (w1.ln() - w0.ln())).exp_m1().abs()
}

pub fn appendix_consistency(
    db: &ClaimDatabase,
    h: &Hyperparameters,
    assignment: &[bool],
    fact: usize,
) -> PropResult {
    let err = flip_ratio_error(db, h, assignment, fact);
    prop_assert!(err <= 1e-9, "relative error {err:e}");
    Ok(())
}

/// Exact marginals are probabilities, the assignment weights sum to one and
/// both marginal routes agree.
pub fn oracle_normalization(db: &ClaimDatabase, h: &Hyperparameters) -> PropResult {
    let post = exact_marginals(db, h).unwrap();
    let total: f64 = post.probabilities().sum();
    prop_assert!((total - 1.0).abs() < 1e-12, "total {total}");
    for f in 0..db.num_facts() {
        let p = post.marginals[f];
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!((p - post.marginal_via_false(f)).abs() < 1e-12);
    }
    Ok(())
}

pub fn auc_invariance(scores: &[f64], truth: &[bool]) -> PropResult {
    let base = auc(scores, truth);
    let cubed: Vec<f64> = scores.iter().map(|s| s * s * s).collect();
    let shifted: Vec<f64> = scores.iter().map(|s| 0.5 * s + 0.25).collect();
    for other in [cubed, shifted] {
        match (base, auc(&other, truth)) {
            (None, None) => {}
            (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-12, "{a} vs {b}"),
            (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
        }
    }
    if let Some(a) = base {
        prop_assert!((0.0..=1.0).contains(&a));
    }
    Ok(())
}

/// Raising the threshold never raises recall and never lowers specificity.
pub fn threshold_monotonicity(scores: &[f64], truth: &[bool]) -> PropResult {
    let s: BTreeMap<usize, f64> = scores.iter().copied().enumerate().collect();
    let t: BTreeMap<usize, bool> = truth.iter().copied().enumerate().collect();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=40 {
        let r = metrics(&s, &t, i as f64 / 40.0).unwrap();
        if let Some((recall, spec)) = prev {
            prop_assert!(r.recall <= recall);
            prop_assert!(r.specificity >= spec);
        }
        prev = Some((r.recall, r.specificity));
    }
    Ok(())
}

pub fn voting_bounds(db: &ClaimDatabase) -> PropResult {
    for (f, v) in voting(db).into_iter().enumerate() {
        let claims = db.claims_of(f);
        prop_assert!((0.0..=1.0).contains(&v));
        let positives = claims.iter().filter(|c| c.observation).count();
        let expected = if claims.is_empty() {
            0.0
        } else {
            positives as f64 / claims.len() as f64
        };
        prop_assert_eq!(v, expected);
    }
    Ok(())
}

/// Claims per fact equal the number of sources mentioning its entity and
/// positive claims reproduce the input triples.
pub fn claim_identity(triples: &BTreeSet<RawTriple>) -> PropResult {
    let db = ClaimDatabase::from_triples(triples).unwrap();
    let mut mentions: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for t in triples {
        mentions.entry(&t.entity).or_default().insert(&t.source);
    }
    let expected: usize = db
        .facts()
        .iter()
        .map(|f| mentions[f.entity.as_str()].len())
        .sum();
    prop_assert_eq!(db.num_claims(), expected);
    prop_assert_eq!(
        db.claims().iter().filter(|c| c.observation).count(),
        triples.len()
    );
    for f in db.facts() {
        prop_assert_eq!(db.claims_of(f.id).len(), mentions[f.entity.as_str()].len());
    }
    Ok(())
}

pub fn ingest_idempotence(triples: &BTreeSet<RawTriple>) -> PropResult {
    let db = ClaimDatabase::from_triples(triples).unwrap();
    let back = db.positive_triples();
    prop_assert_eq!(&back, triples);
    prop_assert_eq!(ClaimDatabase::from_triples(&back).unwrap(), db);
    Ok(())
}

/// Every seeded pipeline gives identical results when rerun.
pub fn seed_determinism(db: &ClaimDatabase, h: &Hyperparameters, seed: u64) -> PropResult {
    let cfg = short_config(seed);
    prop_assert_eq!(
        gibbs_run(db, h, &cfg).unwrap(),
        gibbs_run(db, h, &cfg).unwrap()
    );
    let priors = ModelPriors::shared(h);
    let a = run_chains(db, &priors, &cfg, 3).unwrap();
    let b = run_chains(db, &priors, &cfg, 3).unwrap();
    prop_assert_eq!(a.truth, b.truth);

    let truth = gibbs_run(db, h, &cfg).unwrap();
    let q1 = estimate_quality(db, &truth.probabilities, h).unwrap();
    let q2 = estimate_quality(db, &truth.probabilities, h).unwrap();
    prop_assert_eq!(&q1, &q2);
    let model = QualityModel::new(&q1, h);
    prop_assert_eq!(
        incremental_predict(db, &model, h.beta(), 0.5),
        incremental_predict(db, &model, h.beta(), 0.5)
    );

    let spec = SynthSpec::new(db.num_facts(), db.num_sources(), *h, seed);
    prop_assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
    Ok(())
}

/// Frozen-quality prediction rises with a positive claimant's sensitivity
/// and falls with a negative claimant's sensitivity.
pub fn frozen_monotonicity(fpr: f64, sens_lo: f64, sens_hi: f64, beta: BetaPrior) -> PropResult {
    let db = grid_db(2, 2, &[Some(true), Some(true), Some(false), Some(true)]);
    let predict = |sens: f64| {
        let model = QualityModel::from_rates(
            [("s0".to_string(), fpr, sens), ("s1".to_string(), 0.2, 0.8)],
            (0.1, 0.9),
        );
        incremental_predict(&db, &model, beta, 0.5).probabilities
    };
    let (lo, hi) = (predict(sens_lo), predict(sens_hi));
    prop_assert!(hi[0] >= lo[0], "positive claim: {} < {}", hi[0], lo[0]);
    prop_assert!(hi[1] <= lo[1], "negative claim: {} > {}", hi[1], lo[1]);
    Ok(())
}
