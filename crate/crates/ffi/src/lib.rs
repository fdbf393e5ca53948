//! C interface to the truth discovery engine.
//!
//! Every handle is opaque and owned by the caller once returned; release it
//! with the matching `ltm_*_free`. Functions return an [`LtmStatus`]; on
//! failure a description is available from [`ltm_last_error_message`] on the
//! same thread.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use latent_truth::data::{ingest_triples, RawTriple};
use latent_truth::eval::voting;
use latent_truth::oracle::exact_marginals;
use latent_truth::quality::{estimate_quality, incremental_predict, QualityModel};
use latent_truth::sampler::run_chains;
use latent_truth::{
    BetaPrior, ClaimDatabase, Error, Hyperparameters, ModelPriors, SamplerConfig, SourceQuality,
    TruthResult,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    DataError = 4,
    IoError = 5,
    TooLarge = 6,
    Panic = 7,
}

/// Beta pseudo-counts; `*_one` counts the outcome 1 (positive claim or true fact).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LtmHyperparameters {
    pub alpha0_one: f64,
    pub alpha0_zero: f64,
    pub alpha1_one: f64,
    pub alpha1_zero: f64,
    pub beta_one: f64,
    pub beta_zero: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LtmSamplerConfig {
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    pub threshold: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LtmSourceQuality {
    pub sensitivity: f64,
    pub specificity: f64,
    pub precision: f64,
    pub expected_tp: f64,
    pub expected_fp: f64,
    pub expected_fn: f64,
    pub expected_tn: f64,
}

/// Accumulates raw triples before the tables are built.
pub struct LtmTriples {
    triples: BTreeSet<RawTriple>,
}

pub struct LtmDatabase {
    db: ClaimDatabase,
}

pub struct LtmTruth {
    truth: TruthResult,
}

pub struct LtmQuality {
    quality: Vec<SourceQuality>,
    names: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(LtmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } | Error::Csv(_) | Error::Json(_) => LtmStatus::ParseError,
            Error::InvalidPrior(_)
            | Error::InvalidConfig(_)
            | Error::InvalidArgument(_)
            | Error::OutOfRange { .. } => LtmStatus::InvalidArgument,
            Error::Malformed(_) | Error::MismatchedFacts { .. } => LtmStatus::DataError,
            Error::TooLarge { .. } => LtmStatus::TooLarge,
            Error::Io { .. } => LtmStatus::IoError,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(LtmStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LtmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LtmStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            LtmStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(LtmStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

fn hyperparameters(h: &LtmHyperparameters) -> Result<Hyperparameters, Failure> {
    Ok(Hyperparameters::new(
        BetaPrior::new(h.alpha0_one, h.alpha0_zero),
        BetaPrior::new(h.alpha1_one, h.alpha1_zero),
        BetaPrior::new(h.beta_one, h.beta_zero),
    )?)
}

/// Null selects the defaults for the corpus size.
unsafe fn hyperparameters_or_default(
    p: *const LtmHyperparameters,
    db: &ClaimDatabase,
) -> Result<Hyperparameters, Failure> {
    match p.as_ref() {
        Some(h) => hyperparameters(h),
        None => Ok(Hyperparameters::default_for(db.num_facts())),
    }
}

impl From<Hyperparameters> for LtmHyperparameters {
    fn from(h: Hyperparameters) -> Self {
        LtmHyperparameters {
            alpha0_one: h.alpha0().one,
            alpha0_zero: h.alpha0().zero,
            alpha1_one: h.alpha1().one,
            alpha1_zero: h.alpha1().zero,
            beta_one: h.beta().one,
            beta_zero: h.beta().zero,
        }
    }
}

/// Message of the last failed call on this thread, or null after a
/// success. Valid until the next `ltm_*` call on the same thread.
#[no_mangle]
pub extern "C" fn ltm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Default priors for a corpus of `num_facts` facts.
#[no_mangle]
pub extern "C" fn ltm_default_hyperparameters(num_facts: usize) -> LtmHyperparameters {
    Hyperparameters::default_for(num_facts).into()
}

/// 500 sweeps, burn-in 100, thinning 10, seed 0, threshold 0.5.
#[no_mangle]
pub extern "C" fn ltm_default_sampler_config() -> LtmSamplerConfig {
    let c = SamplerConfig::default();
    LtmSamplerConfig {
        iterations: c.iterations,
        burn_in: c.burn_in,
        thin: c.thin,
        seed: c.seed,
        threshold: c.threshold,
    }
}

#[no_mangle]
pub extern "C" fn ltm_triples_new() -> *mut LtmTriples {
    Box::into_raw(Box::new(LtmTriples {
        triples: BTreeSet::new(),
    }))
}

/// Adds one assertion. Fields are trimmed and must be non-empty.
///
/// # Safety
/// `triples` must come from [`ltm_triples_new`]; the strings must be
/// NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ltm_triples_add(
    triples: *mut LtmTriples,
    entity: *const c_char,
    attribute: *const c_char,
    source: *const c_char,
) -> LtmStatus {
    guard(|| {
        let t = triples.as_mut().ok_or_else(|| null("triples"))?;
        let (e, a, s) = (
            str_arg(entity, "entity")?,
            str_arg(attribute, "attribute")?,
            str_arg(source, "source")?,
        );
        let triple = RawTriple::new(e, a, s)
            .ok_or_else(|| Failure(LtmStatus::InvalidArgument, "empty field".into()))?;
        t.triples.insert(triple);
        Ok(())
    })
}

/// # Safety
/// `triples` must be null or come from [`ltm_triples_new`].
#[no_mangle]
pub unsafe extern "C" fn ltm_triples_free(triples: *mut LtmTriples) {
    free(triples)
}

/// Builds the fact and claim tables.
///
/// # Safety
/// `triples` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ltm_database_from_triples(
    triples: *const LtmTriples,
    out: *mut *mut LtmDatabase,
) -> LtmStatus {
    guard(|| {
        let t = as_ref(triples, "triples")?;
        put(
            out,
            LtmDatabase {
                db: ClaimDatabase::from_triples(&t.triples)?,
            },
        )
    })
}

/// Reads an `entity,attribute,source` CSV file.
///
/// # Safety
/// `path` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ltm_database_from_csv(
    path: *const c_char,
    out: *mut *mut LtmDatabase,
) -> LtmStatus {
    guard(|| {
        let path = std::path::Path::new(str_arg(path, "path")?);
        let file = std::fs::File::open(path)
            .map_err(|e| Failure(LtmStatus::IoError, format!("{}: {e}", path.display())))?;
        put(
            out,
            LtmDatabase {
                db: ClaimDatabase::from_triples(&ingest_triples(file)?)?,
            },
        )
    })
}

/// # Safety
/// `db` must be null or a live database handle.
#[no_mangle]
pub unsafe extern "C" fn ltm_database_num_facts(db: *const LtmDatabase) -> usize {
    db.as_ref().map_or(0, |d| d.db.num_facts())
}

/// # Safety
/// `db` must be null or a live database handle.
#[no_mangle]
pub unsafe extern "C" fn ltm_database_num_sources(db: *const LtmDatabase) -> usize {
    db.as_ref().map_or(0, |d| d.db.num_sources())
}

/// # Safety
/// `db` must be null or a live database handle.
#[no_mangle]
pub unsafe extern "C" fn ltm_database_num_claims(db: *const LtmDatabase) -> usize {
    db.as_ref().map_or(0, |d| d.db.num_claims())
}

/// Looks up the id of `(entity, attribute)`; returns `DataError` when absent.
///
/// # Safety
/// `db` must be a live handle, the strings NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ltm_database_fact_id(
    db: *const LtmDatabase,
    entity: *const c_char,
    attribute: *const c_char,
    out: *mut usize,
) -> LtmStatus {
    guard(|| {
        let d = as_ref(db, "database")?;
        let (e, a) = (str_arg(entity, "entity")?, str_arg(attribute, "attribute")?);
        let id =
            d.db.fact_id(e, a)
                .ok_or_else(|| Failure(LtmStatus::DataError, format!("no fact ({e}, {a})")))?;
        *out.as_mut().ok_or_else(|| null("output pointer"))? = id;
        Ok(())
    })
}

/// # Safety
/// `db` must be null or a live database handle.
#[no_mangle]
pub unsafe extern "C" fn ltm_database_free(db: *mut LtmDatabase) {
    free(db)
}

/// Fits the model by collapsed Gibbs sampling with `chains` concurrent
/// chains. A null `hyperparameters` selects the defaults for the corpus
/// size and a null `config` the default sampler settings.
///
/// # Safety
/// `db` must be live, the optional pointers null or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ltm_run(
    db: *const LtmDatabase,
    hyperparameters: *const LtmHyperparameters,
    config: *const LtmSamplerConfig,
    chains: usize,
    out: *mut *mut LtmTruth,
) -> LtmStatus {
    guard(|| {
        let d = as_ref(db, "database")?;
        let h = hyperparameters_or_default(hyperparameters, &d.db)?;
        let cfg = config
            .as_ref()
            .map_or_else(SamplerConfig::default, |c| SamplerConfig {
                iterations: c.iterations,
                burn_in: c.burn_in,
                thin: c.thin,
                seed: c.seed,
                threshold: c.threshold,
            });
        let fit = run_chains(&d.db, &ModelPriors::shared(&h), &cfg, chains)?;
        put(out, LtmTruth { truth: fit.truth })
    })
}

/// Exact posterior marginals by enumeration; `TooLarge` above 20 facts.
///
/// # Safety
/// `db` must be live, `hyperparameters` null or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ltm_exact_marginals(
    db: *const LtmDatabase,
    hyperparameters: *const LtmHyperparameters,
    threshold: f64,
    out: *mut *mut LtmTruth,
) -> LtmStatus {
    guard(|| {
        let d = as_ref(db, "database")?;
        let h = hyperparameters_or_default(hyperparameters, &d.db)?;
        let post = exact_marginals(&d.db, &h)?;
        put(
            out,
            LtmTruth {
                truth: TruthResult::from_probabilities(post.marginals, threshold),
            },
        )
    })
}

/// Fraction of positive claims per fact.
///
/// # Safety
/// `db` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ltm_voting(
    db: *const LtmDatabase,
    threshold: f64,
    out: *mut *mut LtmTruth,
) -> LtmStatus {
    guard(|| {
        let d = as_ref(db, "database")?;
        put(
            out,
            LtmTruth {
                truth: TruthResult::from_probabilities(voting(&d.db), threshold),
            },
        )
    })
}

/// # Safety
/// `truth` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ltm_truth_len(truth: *const LtmTruth) -> usize {
    truth.as_ref().map_or(0, |t| t.truth.len())
}

/// Copies probabilities and labels into caller buffers of length `len`,
/// which must equal [`ltm_truth_len`]. Either buffer may be null.
///
/// # Safety
/// Non-null buffers must hold `len` writable elements.
#[no_mangle]
pub unsafe extern "C" fn ltm_truth_copy(
    truth: *const LtmTruth,
    probabilities: *mut f64,
    labels: *mut bool,
    len: usize,
) -> LtmStatus {
    guard(|| {
        let t = &as_ref(truth, "truth")?.truth;
        if len != t.len() {
            return Err(Failure(
                LtmStatus::InvalidArgument,
                format!("buffer length {len}, expected {}", t.len()),
            ));
        }
        if !probabilities.is_null() {
            ptr::copy_nonoverlapping(t.probabilities.as_ptr(), probabilities, len);
        }
        if !labels.is_null() {
            ptr::copy_nonoverlapping(t.labels.as_ptr(), labels, len);
        }
        Ok(())
    })
}

/// # Safety
/// `truth` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ltm_truth_free(truth: *mut LtmTruth) {
    free(truth)
}

/// MAP source quality given per-fact truth probabilities.
///
/// # Safety
/// Handles must be live, `hyperparameters` null or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ltm_estimate_quality(
    db: *const LtmDatabase,
    truth: *const LtmTruth,
    hyperparameters: *const LtmHyperparameters,
    out: *mut *mut LtmQuality,
) -> LtmStatus {
    guard(|| {
        let d = as_ref(db, "database")?;
        let t = as_ref(truth, "truth")?;
        let h = hyperparameters_or_default(hyperparameters, &d.db)?;
        let quality = estimate_quality(&d.db, &t.truth.probabilities, &h)?;
        let names = quality
            .iter()
            .map(|q| {
                CString::new(q.source.as_str())
                    .map_err(|_| Failure(LtmStatus::DataError, "source name contains NUL".into()))
            })
            .collect::<Result<_, _>>()?;
        put(out, LtmQuality { quality, names })
    })
}

/// # Safety
/// `quality` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ltm_quality_len(quality: *const LtmQuality) -> usize {
    quality.as_ref().map_or(0, |q| q.quality.len())
}

/// Quality of source `index`.
///
/// # Safety
/// `quality` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ltm_quality_get(
    quality: *const LtmQuality,
    index: usize,
    out: *mut LtmSourceQuality,
) -> LtmStatus {
    guard(|| {
        let q = as_ref(quality, "quality")?;
        let s = q.quality.get(index).ok_or_else(|| {
            Failure(
                LtmStatus::InvalidArgument,
                format!("source index {index} out of range ({})", q.quality.len()),
            )
        })?;
        *out.as_mut().ok_or_else(|| null("output pointer"))? = LtmSourceQuality {
            sensitivity: s.sensitivity,
            specificity: s.specificity,
            precision: s.precision,
            expected_tp: s.expected.tp,
            expected_fp: s.expected.fp,
            expected_fn: s.expected.fn_,
            expected_tn: s.expected.tn,
        };
        Ok(())
    })
}

/// Name of source `index`, owned by the handle; null when out of range.
///
/// # Safety
/// `quality` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ltm_quality_source_name(
    quality: *const LtmQuality,
    index: usize,
) -> *const c_char {
    quality
        .as_ref()
        .and_then(|q| q.names.get(index))
        .map_or(ptr::null(), |c| c.as_ptr())
}

/// # Safety
/// `quality` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ltm_quality_free(quality: *mut LtmQuality) {
    free(quality)
}

/// Truth of the facts in `db` with source quality frozen at `quality`.
/// Sources absent from `quality` use the prior means of `hyperparameters`.
///
/// # Safety
/// Handles must be live, `hyperparameters` valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ltm_predict_frozen(
    db: *const LtmDatabase,
    quality: *const LtmQuality,
    hyperparameters: *const LtmHyperparameters,
    threshold: f64,
    out: *mut *mut LtmTruth,
) -> LtmStatus {
    guard(|| {
        let d = as_ref(db, "database")?;
        let q = as_ref(quality, "quality")?;
        let h = self::hyperparameters(as_ref(hyperparameters, "hyperparameters")?)?;
        let model = QualityModel::new(&q.quality, &h);
        put(
            out,
            LtmTruth {
                truth: incremental_predict(&d.db, &model, h.beta(), threshold),
            },
        )
    })
}
