//! Truth discovery over conflicting multi-source claims.
//!
//! Sources assert `(entity, attribute)` values; the engine turns those
//! assertions into positive and negative claims, fits a latent truth model
//! with per-source sensitivity and specificity by collapsed Gibbs sampling,
//! and reports a posterior truth probability per fact together with MAP
//! source quality.
//!
//! ```no_run
//! use latent_truth::{data, priors::Hyperparameters, sampler};
//!
//! let triples = data::ingest_triples(std::fs::File::open("triples.csv")?)?;
//! let db = data::ClaimDatabase::from_triples(&triples)?;
//! let h = Hyperparameters::default_for(db.num_facts());
//! let truth = sampler::gibbs_run(&db, &h, &sampler::SamplerConfig::default())?;
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod cli;
pub mod data;
pub mod error;
pub mod eval;
pub mod io;
pub mod oracle;
pub mod priors;
pub mod quality;
pub mod sampler;
pub mod synth;

pub use data::{Claim, ClaimDatabase, Fact, RawTriple};
pub use error::{Error, Result};
pub use priors::{BetaPrior, Hyperparameters, ModelPriors};
pub use quality::{QualityModel, QualitySnapshot, SourceQuality};
pub use sampler::{GibbsChain, QualityCounts, SamplerConfig, TruthResult};

#[cfg(test)]
pub(crate) const TABLE1_CSV: &str = include_str!("../tests/data/table1.csv");
