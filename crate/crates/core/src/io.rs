//! File formats and all-or-nothing output writing.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::ClaimDatabase;
use crate::error::{Error, Result};
use crate::quality::SourceQuality;
use crate::sampler::TruthResult;

/// `(entity, attribute)` key used to join predictions with labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FactKey {
    pub entity: String,
    pub attribute: String,
}

impl FactKey {
    pub fn new(entity: impl Into<String>, attribute: impl Into<String>) -> Self {
        FactKey {
            entity: entity.into(),
            attribute: attribute.into(),
        }
    }
}

impl fmt::Display for FactKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.entity, self.attribute)
    }
}

/// Writes `fact_id,entity,attribute,probability,label`.
pub fn write_truth_csv<W: Write>(db: &ClaimDatabase, truth: &TruthResult, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["fact_id", "entity", "attribute", "probability", "label"])?;
    for (f, (p, l)) in db
        .facts()
        .iter()
        .zip(truth.probabilities.iter().zip(&truth.labels))
    {
        w.write_record([
            f.id.to_string().as_str(),
            &f.entity,
            &f.attribute,
            &format!("{p:.6}"),
            if *l { "true" } else { "false" },
        ])?;
    }
    w.flush().map_err(|e| Error::io("<truth>", e))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct TruthRow {
    pub fact_id: usize,
    pub entity: String,
    pub attribute: String,
    pub probability: f64,
    pub label: bool,
}

pub fn read_truth_csv<R: Read>(reader: R) -> Result<Vec<TruthRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// Writes `source,sensitivity,specificity,precision,e_tp,e_fp,e_fn,e_tn`.
pub fn write_quality_csv<W: Write>(quality: &[SourceQuality], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "source",
        "sensitivity",
        "specificity",
        "precision",
        "e_tp",
        "e_fp",
        "e_fn",
        "e_tn",
    ])?;
    for q in quality {
        let e = &q.expected;
        w.write_record(
            std::iter::once(q.source.clone()).chain(
                [
                    q.sensitivity,
                    q.specificity,
                    q.precision,
                    e.tp,
                    e.fp,
                    e.fn_,
                    e.tn,
                ]
                .iter()
                .map(|x| format!("{x:.6}")),
            ),
        )?;
    }
    w.flush().map_err(|e| Error::io("<quality>", e))?;
    Ok(())
}

/// Labeled truth, either keyed by `(entity, attribute)` (header
/// `entity,attribute,truth`) or by fact id (header `fact_id,truth`).
#[derive(Debug, Clone, PartialEq)]
pub enum Labels {
    ByKey(BTreeMap<FactKey, bool>),
    ById(BTreeMap<usize, bool>),
}

impl Labels {
    /// Resolves labels to `(entity, attribute)` keys using the fact table.
    pub fn into_keys(self, db: &ClaimDatabase) -> Result<BTreeMap<FactKey, bool>> {
        match self {
            Labels::ByKey(m) => Ok(m),
            Labels::ById(m) => m
                .into_iter()
                .map(|(id, t)| {
                    let f = db.facts().get(id).ok_or(Error::OutOfRange {
                        kind: "fact",
                        index: id,
                        len: db.num_facts(),
                    })?;
                    Ok((FactKey::new(&f.entity, &f.attribute), t))
                })
                .collect(),
        }
    }
}

pub fn read_labels_csv<R: Read>(reader: R) -> Result<Labels> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_owned()).collect();
    match headers
        .iter()
        .map(String::as_str)
        .collect::<Vec<_>>()
        .as_slice()
    {
        ["entity", "attribute", "truth"] => {
            #[derive(Deserialize)]
            struct Row {
                entity: String,
                attribute: String,
                truth: bool,
            }
            let mut out = BTreeMap::new();
            for r in rdr.deserialize() {
                let r: Row = r?;
                out.insert(FactKey::new(r.entity.trim(), r.attribute.trim()), r.truth);
            }
            Ok(Labels::ByKey(out))
        }
        ["fact_id", "truth"] => {
            #[derive(Deserialize)]
            struct Row {
                fact_id: usize,
                truth: bool,
            }
            let mut out = BTreeMap::new();
            for r in rdr.deserialize() {
                let r: Row = r?;
                out.insert(r.fact_id, r.truth);
            }
            Ok(Labels::ById(out))
        }
        other => Err(Error::Parse {
            line: 1,
            message: format!(
                "expected `entity,attribute,truth` or `fact_id,truth`, found `{}`",
                other.join(",")
            ),
        }),
    }
}

/// A batch of output files written together: every file goes to a
/// temporary in the target directory first and is renamed into place only
/// after all of them were written.
#[derive(Debug, Default)]
pub struct OutputSet {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl OutputSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, path: impl Into<PathBuf>, contents: Vec<u8>) {
        self.files.push((path.into(), contents));
    }

    /// Renders a file through a writer closure.
    pub fn render(
        &mut self,
        path: impl Into<PathBuf>,
        f: impl FnOnce(&mut Vec<u8>) -> Result<()>,
    ) -> Result<()> {
        let mut buf = Vec::new();
        f(&mut buf)?;
        self.add(path, buf);
        Ok(())
    }

    pub fn add_json<T: Serialize>(&mut self, path: impl Into<PathBuf>, value: &T) -> Result<()> {
        let mut buf = serde_json::to_vec_pretty(value)?;
        buf.push(b'\n');
        self.add(path, buf);
        Ok(())
    }

    pub fn commit(self) -> Result<Vec<PathBuf>> {
        let mut staged = Vec::with_capacity(self.files.len());
        for (path, contents) in &self.files {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
                _ => PathBuf::from("."),
            };
            fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| Error::io(&dir, e))?;
            tmp.write_all(contents).map_err(|e| Error::io(path, e))?;
            tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
            staged.push((tmp, path.clone()));
        }
        let mut written = Vec::with_capacity(staged.len());
        for (tmp, path) in staged {
            tmp.persist(&path).map_err(|e| Error::io(&path, e.error))?;
            written.push(path);
        }
        Ok(written)
    }
}

pub fn open(path: &Path) -> Result<fs::File> {
    fs::File::open(path).map_err(|e| Error::io(path, e))
}
