//! Raw triples, the fact table and the claim table.
//!
//! A raw database is a set of `(entity, attribute, source)` rows. Each
//! distinct `(entity, attribute)` pair becomes a [`Fact`]. For every fact and
//! every source that mentions the fact's entity, a [`Claim`] is generated:
//! positive when the source asserted that exact pair, negative when it
//! asserted other values of the entity but not this one. Sources that never
//! mention the entity make no claim about its facts.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One `(entity, attribute, source)` assertion of the raw database.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RawTriple {
    pub entity: String,
    pub attribute: String,
    pub source: String,
}

impl RawTriple {
    /// Builds a triple, trimming whitespace. Returns `None` if any field is
    /// empty after trimming.
    pub fn new(entity: &str, attribute: &str, source: &str) -> Option<Self> {
        let (e, a, s) = (entity.trim(), attribute.trim(), source.trim());
        if e.is_empty() || a.is_empty() || s.is_empty() {
            return None;
        }
        Some(RawTriple {
            entity: e.to_owned(),
            attribute: a.to_owned(),
            source: s.to_owned(),
        })
    }
}

/// A distinct entity-attribute pair with a dense id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact {
    pub id: usize,
    pub entity: String,
    pub attribute: String,
}

/// A source's boolean assertion about one fact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Claim {
    pub fact_id: u32,
    pub source_id: u32,
    pub observation: bool,
}

/// Immutable fact table plus claim table.
///
/// Claims are stored sorted by `(fact_id, source_id)` so the claims of one
/// fact form a contiguous slice. Facts of one entity are contiguous as well.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimDatabase {
    facts: Vec<Fact>,
    sources: Vec<String>,
    claims: Vec<Claim>,
    claim_offsets: Vec<usize>,
    entities: Vec<(String, Range<usize>)>,
    claims_per_source: Vec<usize>,
}

/// Parses a triples CSV (`entity,attribute,source` header, RFC-4180 quoting).
///
/// Exact duplicate rows collapse into one triple.
pub fn ingest_triples<R: Read>(reader: R) -> Result<BTreeSet<RawTriple>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);

    let headers = rdr.headers()?.clone();
    if headers.is_empty() {
        return Ok(BTreeSet::new());
    }
    let expected = ["entity", "attribute", "source"];
    if headers.len() != 3 || headers.iter().zip(expected).any(|(h, e)| h.trim() != e) {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected header `entity,attribute,source`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }

    let mut triples = BTreeSet::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected 3 columns, found {}", record.len()),
            });
        }
        let triple =
            RawTriple::new(&record[0], &record[1], &record[2]).ok_or_else(|| Error::Parse {
                line,
                message: "empty field".to_owned(),
            })?;
        triples.insert(triple);
    }
    Ok(triples)
}

impl ClaimDatabase {
    /// Constructs the fact and claim tables from a set of triples.
    ///
    /// Facts are numbered in lexicographic `(entity, attribute)` order and
    /// sources in lexicographic name order.
    pub fn from_triples(triples: &BTreeSet<RawTriple>) -> Result<Self> {
        if triples.is_empty() {
            return Err(Error::Malformed("no triples".to_owned()));
        }

        let source_names: BTreeSet<&str> = triples.iter().map(|t| t.source.as_str()).collect();
        let sources: Vec<String> = source_names.iter().map(|s| s.to_string()).collect();
        let source_id: BTreeMap<&str, u32> = source_names
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, i as u32))
            .collect();

        // entity -> attribute -> asserting sources
        let mut by_entity: BTreeMap<&str, BTreeMap<&str, BTreeSet<u32>>> = BTreeMap::new();
        for t in triples {
            by_entity
                .entry(&t.entity)
                .or_default()
                .entry(&t.attribute)
                .or_default()
                .insert(source_id[t.source.as_str()]);
        }

        let mut facts = Vec::new();
        let mut claims = Vec::new();
        for (entity, attributes) in &by_entity {
            let entity_sources: BTreeSet<u32> = attributes.values().flatten().copied().collect();
            for (attribute, asserting) in attributes {
                let fact_id = facts.len();
                facts.push(Fact {
                    id: fact_id,
                    entity: entity.to_string(),
                    attribute: attribute.to_string(),
                });
                for &s in &entity_sources {
                    claims.push(Claim {
                        fact_id: fact_id as u32,
                        source_id: s,
                        observation: asserting.contains(&s),
                    });
                }
            }
        }

        Self::from_parts(facts, sources, claims)
    }

    /// Assembles a database from explicit tables, validating ids and the
    /// one-claim-per-(fact, source) rule. Claims may be given in any order.
    pub fn from_parts(
        facts: Vec<Fact>,
        sources: Vec<String>,
        mut claims: Vec<Claim>,
    ) -> Result<Self> {
        for (i, f) in facts.iter().enumerate() {
            if f.id != i {
                return Err(Error::Malformed(format!(
                    "fact ids must be contiguous, found {} at position {i}",
                    f.id
                )));
            }
        }
        {
            let mut seen = BTreeSet::new();
            for f in &facts {
                if !seen.insert((f.entity.as_str(), f.attribute.as_str())) {
                    return Err(Error::Malformed(format!(
                        "duplicate fact ({}, {})",
                        f.entity, f.attribute
                    )));
                }
            }
            let mut names = BTreeSet::new();
            for s in &sources {
                if !names.insert(s.as_str()) {
                    return Err(Error::Malformed(format!("duplicate source {s}")));
                }
            }
        }
        if facts.len() > u32::MAX as usize || sources.len() > u32::MAX as usize {
            return Err(Error::Malformed("table too large".to_owned()));
        }

        claims.sort_unstable_by_key(|c| (c.fact_id, c.source_id));
        for c in &claims {
            if c.fact_id as usize >= facts.len() {
                return Err(Error::OutOfRange {
                    kind: "fact",
                    index: c.fact_id as usize,
                    len: facts.len(),
                });
            }
            if c.source_id as usize >= sources.len() {
                return Err(Error::OutOfRange {
                    kind: "source",
                    index: c.source_id as usize,
                    len: sources.len(),
                });
            }
        }
        if let Some(w) = claims
            .windows(2)
            .find(|w| (w[0].fact_id, w[0].source_id) == (w[1].fact_id, w[1].source_id))
        {
            return Err(Error::Malformed(format!(
                "source {} has two claims on fact {}",
                sources[w[0].source_id as usize], w[0].fact_id
            )));
        }

        let mut claim_offsets = vec![0usize; facts.len() + 1];
        for c in &claims {
            claim_offsets[c.fact_id as usize + 1] += 1;
        }
        for i in 0..facts.len() {
            claim_offsets[i + 1] += claim_offsets[i];
        }

        let mut claims_per_source = vec![0usize; sources.len()];
        for c in &claims {
            claims_per_source[c.source_id as usize] += 1;
        }

        // Group facts by entity; facts of one entity are expected to be
        // contiguous, which holds for both table builders in this crate.
        let mut entities: Vec<(String, Range<usize>)> = Vec::new();
        for f in &facts {
            match entities.last_mut() {
                Some((e, r)) if *e == f.entity => r.end = f.id + 1,
                _ => entities.push((f.entity.clone(), f.id..f.id + 1)),
            }
        }
        let distinct: BTreeSet<&str> = entities.iter().map(|(e, _)| e.as_str()).collect();
        if distinct.len() != entities.len() {
            return Err(Error::Malformed(
                "facts of an entity must have contiguous ids".to_owned(),
            ));
        }

        Ok(ClaimDatabase {
            facts,
            sources,
            claims,
            claim_offsets,
            entities,
            claims_per_source,
        })
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn sources(&self) -> &[String] {
        &self.sources
    }

    pub fn claims(&self) -> &[Claim] {
        &self.claims
    }

    pub fn num_facts(&self) -> usize {
        self.facts.len()
    }

    pub fn num_sources(&self) -> usize {
        self.sources.len()
    }

    pub fn num_claims(&self) -> usize {
        self.claims.len()
    }

    /// Claims on fact `f` (the set C_f), ordered by source id.
    #[inline]
    pub fn claims_of(&self, fact: usize) -> &[Claim] {
        &self.claims[self.claim_offsets[fact]..self.claim_offsets[fact + 1]]
    }

    pub fn checked_claims_of(&self, fact: usize) -> Result<&[Claim]> {
        if fact >= self.facts.len() {
            return Err(Error::OutOfRange {
                kind: "fact",
                index: fact,
                len: self.facts.len(),
            });
        }
        Ok(self.claims_of(fact))
    }

    /// Number of claims made by source `s`.
    pub fn claims_by_source(&self, source: usize) -> usize {
        self.claims_per_source[source]
    }

    /// Entities with the id range of their facts.
    pub fn entities(&self) -> impl Iterator<Item = (&str, Range<usize>)> {
        self.entities.iter().map(|(e, r)| (e.as_str(), r.clone()))
    }

    pub fn source_id(&self, name: &str) -> Option<usize> {
        self.sources.iter().position(|s| s == name)
    }

    pub fn fact_id(&self, entity: &str, attribute: &str) -> Option<usize> {
        let (_, range) = self.entities.iter().find(|(e, _)| e == entity)?;
        range
            .clone()
            .find(|&i| self.facts[i].attribute == attribute)
    }

    /// Recovers the raw triples encoded by the positive claims.
    pub fn positive_triples(&self) -> BTreeSet<RawTriple> {
        self.claims
            .iter()
            .filter(|c| c.observation)
            .map(|c| {
                let f = &self.facts[c.fact_id as usize];
                RawTriple {
                    entity: f.entity.clone(),
                    attribute: f.attribute.clone(),
                    source: self.sources[c.source_id as usize].clone(),
                }
            })
            .collect()
    }

    /// Restriction to the given facts (renumbered in ascending id order),
    /// keeping every source. Used to hold out part of a corpus.
    pub fn select_facts(&self, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let ids: BTreeSet<usize> = ids.into_iter().collect();
        let mut facts = Vec::with_capacity(ids.len());
        let mut claims = Vec::new();
        for (new_id, old) in ids.into_iter().enumerate() {
            let f = self.facts.get(old).ok_or(Error::OutOfRange {
                kind: "fact",
                index: old,
                len: self.facts.len(),
            })?;
            facts.push(Fact {
                id: new_id,
                ..f.clone()
            });
            claims.extend(self.claims_of(old).iter().map(|c| Claim {
                fact_id: new_id as u32,
                ..*c
            }));
        }
        Self::from_parts(facts, self.sources.clone(), claims)
    }

    /// Writes `fact_id,entity,attribute`.
    pub fn write_facts_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["fact_id", "entity", "attribute"])?;
        for f in &self.facts {
            w.write_record([f.id.to_string().as_str(), &f.entity, &f.attribute])?;
        }
        w.flush().map_err(|e| Error::io("<facts>", e))?;
        Ok(())
    }

    /// Writes `fact_id,source,observation`.
    pub fn write_claims_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["fact_id", "source", "observation"])?;
        for c in &self.claims {
            w.write_record([
                c.fact_id.to_string().as_str(),
                &self.sources[c.source_id as usize],
                if c.observation { "true" } else { "false" },
            ])?;
        }
        w.flush().map_err(|e| Error::io("<claims>", e))?;
        Ok(())
    }

    /// Loads the pair of tables written by [`write_facts_csv`](Self::write_facts_csv)
    /// and [`write_claims_csv`](Self::write_claims_csv). Source ids follow
    /// lexicographic name order.
    pub fn read_tables<R1: Read, R2: Read>(facts: R1, claims: R2) -> Result<Self> {
        #[derive(Deserialize)]
        struct FactRow {
            fact_id: usize,
            entity: String,
            attribute: String,
        }
        #[derive(Deserialize)]
        struct ClaimRow {
            fact_id: u32,
            source: String,
            observation: bool,
        }

        let mut fact_rows = Vec::new();
        let mut rdr = csv::Reader::from_reader(facts);
        for row in rdr.deserialize() {
            let row: FactRow = row?;
            fact_rows.push(Fact {
                id: row.fact_id,
                entity: row.entity,
                attribute: row.attribute,
            });
        }
        fact_rows.sort_by_key(|f| f.id);

        let mut claim_rows = Vec::new();
        let mut rdr = csv::Reader::from_reader(claims);
        for row in rdr.deserialize() {
            let row: ClaimRow = row?;
            claim_rows.push(row);
        }
        let names: BTreeSet<&str> = claim_rows.iter().map(|c| c.source.as_str()).collect();
        let sources: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let claims = claim_rows
            .iter()
            .map(|c| Claim {
                fact_id: c.fact_id,
                source_id: sources
                    .binary_search(&c.source)
                    .expect("source collected above") as u32,
                observation: c.observation,
            })
            .collect();
        Self::from_parts(fact_rows, sources, claims)
    }
}
