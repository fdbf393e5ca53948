use std::ffi::{c_char, CStr, CString};
use std::ptr;

use latent_truth::oracle::exact_marginals;
use latent_truth::quality::estimate_quality;
use latent_truth::sampler::run_chains;
use latent_truth::{ClaimDatabase, Hyperparameters, ModelPriors, SamplerConfig};
use latent_truth_ffi::*;

const TABLE1: &[(&str, &str, &str)] = &[
    ("Harry Potter", "Daniel Radcliffe", "IMDB"),
    ("Harry Potter", "Emma Watson", "IMDB"),
    ("Harry Potter", "Rupert Grint", "IMDB"),
    ("Harry Potter", "Daniel Radcliffe", "Netflix"),
    ("Harry Potter", "Daniel Radcliffe", "BadSource.com"),
    ("Harry Potter", "Emma Watson", "BadSource.com"),
    ("Harry Potter", "Johnny Depp", "BadSource.com"),
    ("Pirates 4", "Johnny Depp", "Hulu.com"),
];

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = ltm_last_error_message();
    assert!(!p.is_null(), "no error message");
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn table1() -> *mut LtmDatabase {
    unsafe {
        let t = ltm_triples_new();
        for (e, a, s) in TABLE1 {
            assert_eq!(
                ltm_triples_add(t, c(e).as_ptr(), c(a).as_ptr(), c(s).as_ptr()),
                LtmStatus::Ok
            );
        }
        let mut db = ptr::null_mut();
        assert_eq!(ltm_database_from_triples(t, &mut db), LtmStatus::Ok);
        ltm_triples_free(t);
        db
    }
}

fn core_table1() -> ClaimDatabase {
    let triples = TABLE1
        .iter()
        .map(|(e, a, s)| latent_truth::RawTriple::new(e, a, s).unwrap())
        .collect();
    ClaimDatabase::from_triples(&triples).unwrap()
}

fn probabilities(truth: *const LtmTruth) -> Vec<f64> {
    unsafe {
        let n = ltm_truth_len(truth);
        let mut p = vec![0.0; n];
        assert_eq!(
            ltm_truth_copy(truth, p.as_mut_ptr(), ptr::null_mut(), n),
            LtmStatus::Ok
        );
        p
    }
}

fn fact(db: *const LtmDatabase, e: &str, a: &str) -> usize {
    let mut id = usize::MAX;
    assert_eq!(
        unsafe { ltm_database_fact_id(db, c(e).as_ptr(), c(a).as_ptr(), &mut id) },
        LtmStatus::Ok
    );
    id
}

#[test]
fn builds_tables_and_votes() {
    let db = table1();
    unsafe {
        assert_eq!(ltm_database_num_facts(db), 5);
        assert_eq!(ltm_database_num_claims(db), 13);
        assert_eq!(ltm_database_num_sources(db), 4);

        let mut truth = ptr::null_mut();
        assert_eq!(ltm_voting(db, 0.5, &mut truth), LtmStatus::Ok);
        let n = ltm_truth_len(truth);
        let (mut p, mut labels) = (vec![0.0; n], vec![true; n]);
        assert_eq!(
            ltm_truth_copy(truth, p.as_mut_ptr(), labels.as_mut_ptr(), n),
            LtmStatus::Ok
        );
        let rupert = fact(db, "Harry Potter", "Rupert Grint");
        assert_eq!(p[rupert], 1.0 / 3.0);
        assert!(!labels[rupert]);
        ltm_truth_free(truth);
        ltm_database_free(db);
    }
}

#[test]
fn run_matches_core_sampler() {
    let db = table1();
    let mut cfg = ltm_default_sampler_config();
    cfg.seed = 9;
    cfg.iterations = 200;
    cfg.burn_in = 20;
    let h = ltm_default_hyperparameters(5);
    let mut truth = ptr::null_mut();
    assert_eq!(
        unsafe { ltm_run(db, &h, &cfg, 2, &mut truth) },
        LtmStatus::Ok
    );
    let got = probabilities(truth);

    let core_cfg = SamplerConfig {
        iterations: 200,
        burn_in: 20,
        thin: 10,
        seed: 9,
        threshold: 0.5,
    };
    let expected = run_chains(
        &core_table1(),
        &ModelPriors::shared(&Hyperparameters::default_for(5)),
        &core_cfg,
        2,
    )
    .unwrap();
    assert_eq!(got, expected.truth.probabilities);

    // null hyperparameters and config select the defaults
    let mut again = ptr::null_mut();
    assert_eq!(
        unsafe { ltm_run(db, ptr::null(), ptr::null(), 1, &mut again) },
        LtmStatus::Ok
    );
    assert_eq!(probabilities(again).len(), 5);
    unsafe {
        ltm_truth_free(truth);
        ltm_truth_free(again);
        ltm_database_free(db);
    }
}

#[test]
fn quality_and_frozen_prediction() {
    let db = table1();
    let h = LtmHyperparameters {
        alpha0_one: 1.0,
        alpha0_zero: 9.0,
        alpha1_one: 5.0,
        alpha1_zero: 5.0,
        beta_one: 1.0,
        beta_zero: 1.0,
    };
    unsafe {
        let mut exact = ptr::null_mut();
        assert_eq!(ltm_exact_marginals(db, &h, 0.5, &mut exact), LtmStatus::Ok);
        let mut quality = ptr::null_mut();
        assert_eq!(
            ltm_estimate_quality(db, exact, &h, &mut quality),
            LtmStatus::Ok
        );
        assert_eq!(ltm_quality_len(quality), 4);

        let core_h = Hyperparameters::new(
            latent_truth::BetaPrior::new(1.0, 9.0),
            latent_truth::BetaPrior::new(5.0, 5.0),
            latent_truth::BetaPrior::new(1.0, 1.0),
        )
        .unwrap();
        let core_db = core_table1();
        let marginals = exact_marginals(&core_db, &core_h).unwrap().marginals;
        assert_eq!(probabilities(exact), marginals);
        let core_q = estimate_quality(&core_db, &marginals, &core_h).unwrap();
        for (i, q) in core_q.iter().enumerate() {
            let name = CStr::from_ptr(ltm_quality_source_name(quality, i))
                .to_str()
                .unwrap();
            assert_eq!(name, q.source);
            let mut got = std::mem::zeroed::<LtmSourceQuality>();
            assert_eq!(ltm_quality_get(quality, i, &mut got), LtmStatus::Ok);
            assert_eq!(
                (got.sensitivity, got.specificity, got.precision),
                (q.sensitivity, q.specificity, q.precision)
            );
            assert_eq!(got.expected_fn, q.expected.fn_);
        }
        assert!(ltm_quality_source_name(quality, 4).is_null());
        let mut out = std::mem::zeroed::<LtmSourceQuality>();
        assert_eq!(
            ltm_quality_get(quality, 4, &mut out),
            LtmStatus::InvalidArgument
        );

        let mut predicted = ptr::null_mut();
        assert_eq!(
            ltm_predict_frozen(db, quality, &h, 0.5, &mut predicted),
            LtmStatus::Ok
        );
        let p = probabilities(predicted);
        assert_eq!(p.len(), 5);
        assert!(p.iter().all(|x| (0.0..=1.0).contains(x)));

        ltm_truth_free(predicted);
        ltm_quality_free(quality);
        ltm_truth_free(exact);
        ltm_database_free(db);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut db = ptr::null_mut();
        assert_eq!(
            ltm_database_from_triples(ptr::null(), &mut db),
            LtmStatus::NullPointer
        );
        assert!(last_error().contains("null"));

        let t = ltm_triples_new();
        assert_eq!(
            ltm_triples_add(t, c(" ").as_ptr(), c("a").as_ptr(), c("s").as_ptr()),
            LtmStatus::InvalidArgument
        );
        assert_eq!(
            ltm_triples_add(t, ptr::null(), c("a").as_ptr(), c("s").as_ptr()),
            LtmStatus::NullPointer
        );
        let bad: [c_char; 3] = [0xff_u8 as c_char, 0x41, 0];
        assert_eq!(
            ltm_triples_add(t, bad.as_ptr(), c("a").as_ptr(), c("s").as_ptr()),
            LtmStatus::InvalidArgument
        );
        assert_eq!(ltm_database_from_triples(t, &mut db), LtmStatus::DataError);
        ltm_triples_free(t);

        assert_eq!(
            ltm_database_from_csv(c("/nonexistent/x.csv").as_ptr(), &mut db),
            LtmStatus::IoError
        );
        assert!(last_error().contains("/nonexistent/x.csv"));

        let dir = std::env::temp_dir().join(format!("ltm-ffi-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let bad_csv = dir.join("bad.csv");
        std::fs::write(&bad_csv, "entity,attribute,source\ne,a\n").unwrap();
        assert_eq!(
            ltm_database_from_csv(c(bad_csv.to_str().unwrap()).as_ptr(), &mut db),
            LtmStatus::ParseError
        );

        let db = table1();
        let mut h = ltm_default_hyperparameters(5);
        h.beta_one = -1.0;
        let mut truth = ptr::null_mut();
        assert_eq!(
            ltm_run(db, &h, ptr::null(), 1, &mut truth),
            LtmStatus::InvalidArgument
        );
        assert!(truth.is_null());
        assert_eq!(
            ltm_run(db, ptr::null(), ptr::null(), 0, &mut truth),
            LtmStatus::InvalidArgument
        );
        assert_eq!(ltm_voting(db, 0.5, ptr::null_mut()), LtmStatus::NullPointer);

        assert_eq!(ltm_voting(db, 0.5, &mut truth), LtmStatus::Ok);
        assert!(ltm_last_error_message().is_null());
        let mut p = [0.0; 4];
        assert_eq!(
            ltm_truth_copy(truth, p.as_mut_ptr(), ptr::null_mut(), 4),
            LtmStatus::InvalidArgument
        );

        let mut id = 0;
        assert_eq!(
            ltm_database_fact_id(db, c("Nope").as_ptr(), c("x").as_ptr(), &mut id),
            LtmStatus::DataError
        );

        ltm_truth_free(truth);
        ltm_database_free(db);
        ltm_database_free(ptr::null_mut());
        ltm_truth_free(ptr::null_mut());
        ltm_quality_free(ptr::null_mut());
        ltm_triples_free(ptr::null_mut());
        std::fs::remove_dir_all(dir).unwrap();
    }
}

#[test]
fn enumeration_guard_is_reported() {
    unsafe {
        let t = ltm_triples_new();
        for i in 0..21 {
            let a = c(&format!("a{i}"));
            assert_eq!(
                ltm_triples_add(t, c("e").as_ptr(), a.as_ptr(), c("s").as_ptr()),
                LtmStatus::Ok
            );
        }
        let mut db = ptr::null_mut();
        assert_eq!(ltm_database_from_triples(t, &mut db), LtmStatus::Ok);
        let mut truth = ptr::null_mut();
        assert_eq!(
            ltm_exact_marginals(db, ptr::null(), 0.5, &mut truth),
            LtmStatus::TooLarge
        );
        ltm_triples_free(t);
        ltm_database_free(db);
    }
}
