//! Counting over an annotation dump: occurrences and distinct entities per
//! population, qualifier terms common to or absent from the ontology, and
//! typing rates under several typing configurations.

use anyhow::{bail, Context, Result};
use ontoloom::ontology::{Ontology, TermIndex};
use ontoloom::spatial::{type_entity_with_index, EsaAnnotation};
use ontoloom::thesaurus::normalize_term;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

/// One row of the annotation dump.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DumpRow {
    pub doc: String,
    pub start: usize,
    pub end: usize,
    pub kind: String,
    /// Introducer lemma for ESA rows, relation marker for ESR rows.
    pub introducer: String,
    pub toponym: String,
    pub validated: bool,
    pub gazetteer_type: Option<String>,
    pub concept: Option<String>,
}

impl DumpRow {
    pub fn is_esa(&self) -> bool {
        self.kind == "ESA"
    }

    /// The annotation as needed for typing.
    pub fn to_esa(&self) -> EsaAnnotation {
        EsaAnnotation {
            first: 0,
            last: 0,
            start: self.start,
            end: self.end,
            introducer: Some(self.introducer.clone()).filter(|i| !i.is_empty() && self.is_esa()),
            toponym: self.toponym.clone(),
            validated: self.validated,
            gazetteer_type: self.gazetteer_type.clone(),
            position: None,
            alternatives: vec![],
        }
    }

    /// Distinct-entity key: normalized introducer and toponym.
    pub fn entity_key(&self) -> (String, String) {
        (normalize_term(&self.introducer), self.toponym.clone())
    }
}

pub fn parse_dump(text: &str) -> Result<Vec<DumpRow>> {
    let opt = |s: &str| Some(s.to_string()).filter(|s| !s.is_empty());
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            let f: Vec<&str> = l.split('\t').collect();
            let [doc, start, end, kind, intro, toponym, validated, ty, concept] = f.as_slice() else {
                bail!("annotation dump line {}: expected 9 fields, got {}", i + 1, f.len());
            };
            let ctx = || format!("annotation dump line {}", i + 1);
            Ok(DumpRow {
                doc: doc.to_string(),
                start: start.parse().with_context(ctx)?,
                end: end.parse().with_context(ctx)?,
                kind: kind.to_string(),
                introducer: intro.to_string(),
                toponym: toponym.to_string(),
                validated: validated.parse().with_context(ctx)?,
                gazetteer_type: opt(ty),
                concept: opt(concept),
            })
        })
        .collect()
}

/// How entities get typed.
#[derive(Debug, Clone, Copy)]
pub enum Configuration<'a> {
    /// Validated with a determined gazetteer type.
    GazetteerOnly,
    /// Gazetteer typing, or a concept matched in the named ontology.
    WithOntology(&'static str, &'a Ontology),
}

impl Configuration<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            Configuration::GazetteerOnly => "gazetteer",
            Configuration::WithOntology(name, _) => name,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PopulationStats {
    pub occurrences: usize,
    pub distinct: usize,
    pub term_occurrences_common: usize,
    pub term_occurrences_different: usize,
    pub term_distinct_common: usize,
    pub term_distinct_different: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypingStats {
    pub configuration: String,
    pub typed_occurrences: usize,
    pub typed_distinct: usize,
    pub typed_occurrence_rate: f64,
    pub typed_distinct_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    pub esa_occurrences: usize,
    pub esa_distinct: usize,
    pub validated_occurrences: usize,
    pub validated_distinct: usize,
    pub candidates: PopulationStats,
    pub validated: PopulationStats,
    /// Over the candidate population, one entry per configuration.
    pub typing: Vec<TypingStats>,
}

fn ratio(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

fn population(rows: &[&DumpRow], index: Option<&TermIndex>) -> PopulationStats {
    let distinct: BTreeSet<(String, String)> = rows.iter().map(|r| r.entity_key()).collect();
    let mut s = PopulationStats {
        occurrences: rows.len(),
        distinct: distinct.len(),
        ..Default::default()
    };
    let mut terms: BTreeMap<String, bool> = BTreeMap::new();
    for r in rows.iter().filter(|r| !r.introducer.is_empty()) {
        let common = index.is_some_and(|i| i.contains(&r.introducer));
        if common {
            s.term_occurrences_common += 1;
        } else {
            s.term_occurrences_different += 1;
        }
        terms.insert(normalize_term(&r.introducer), common);
    }
    s.term_distinct_common = terms.values().filter(|c| **c).count();
    s.term_distinct_different = terms.len() - s.term_distinct_common;
    s
}

fn typing(rows: &[&DumpRow], config: &Configuration<'_>) -> TypingStats {
    let index = match config {
        Configuration::WithOntology(_, o) => Some((*o, TermIndex::new(o))),
        Configuration::GazetteerOnly => None,
    };
    let mut typed_occurrences = 0;
    let mut entities: BTreeMap<(String, String), bool> = BTreeMap::new();
    for r in rows {
        let by_gazetteer = r.validated && r.gazetteer_type.is_some();
        let typed = by_gazetteer
            || index
                .as_ref()
                .is_some_and(|(o, i)| type_entity_with_index(&r.to_esa(), o, i).typed);
        typed_occurrences += usize::from(typed);
        *entities.entry(r.entity_key()).or_default() |= typed;
    }
    let typed_distinct = entities.values().filter(|t| **t).count();
    TypingStats {
        configuration: config.name().to_string(),
        typed_occurrences,
        typed_distinct,
        typed_occurrence_rate: ratio(typed_occurrences, rows.len()),
        typed_distinct_rate: ratio(typed_distinct, entities.len()),
    }
}

/// Counts over the ESA rows of a dump. Terms are compared with `reference`
/// (the ontology before enrichment) after normalization.
pub fn compute_stats(rows: &[DumpRow], reference: Option<&Ontology>, configs: &[Configuration<'_>]) -> CorpusStats {
    let esas: Vec<&DumpRow> = rows.iter().filter(|r| r.is_esa()).collect();
    let validated: Vec<&DumpRow> = esas.iter().copied().filter(|r| r.validated).collect();
    let index = reference.map(TermIndex::new);
    let candidates = population(&esas, index.as_ref());
    let validated_pop = population(&validated, index.as_ref());
    CorpusStats {
        esa_occurrences: candidates.occurrences,
        esa_distinct: candidates.distinct,
        validated_occurrences: validated_pop.occurrences,
        validated_distinct: validated_pop.distinct,
        typing: configs.iter().map(|c| typing(&esas, c)).collect(),
        candidates,
        validated: validated_pop,
    }
}

impl CorpusStats {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "candidate entities: {} occurrences ({} distinct)",
            self.esa_occurrences, self.esa_distinct
        );
        let _ = writeln!(
            s,
            "validated entities: {} occurrences ({} distinct)",
            self.validated_occurrences, self.validated_distinct
        );
        for (name, p) in [("candidate", &self.candidates), ("validated", &self.validated)] {
            let _ = writeln!(
                s,
                "{name} terms: {} common / {} different occurrences, {} common / {} different distinct",
                p.term_occurrences_common, p.term_occurrences_different, p.term_distinct_common, p.term_distinct_different
            );
        }
        for t in &self.typing {
            let _ = writeln!(
                s,
                "typing [{}]: {}/{} distinct ({:.4}), {}/{} occurrences ({:.4})",
                t.configuration,
                t.typed_distinct,
                self.esa_distinct,
                t.typed_distinct_rate,
                t.typed_occurrences,
                self.esa_occurrences,
                t.typed_occurrence_rate
            );
        }
        s
    }

    /// `section<TAB>name<TAB>key<TAB>value` lines.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for (name, p) in [("candidates", &self.candidates), ("validated", &self.validated)] {
            for (k, v) in [
                ("occurrences", p.occurrences),
                ("distinct", p.distinct),
                ("term_occurrences_common", p.term_occurrences_common),
                ("term_occurrences_different", p.term_occurrences_different),
                ("term_distinct_common", p.term_distinct_common),
                ("term_distinct_different", p.term_distinct_different),
            ] {
                let _ = writeln!(s, "population\t{name}\t{k}\t{v}");
            }
        }
        for t in &self.typing {
            let _ = writeln!(s, "typing\t{}\ttyped_occurrences\t{}", t.configuration, t.typed_occurrences);
            let _ = writeln!(s, "typing\t{}\ttyped_distinct\t{}", t.configuration, t.typed_distinct);
            let _ = writeln!(s, "typing\t{}\ttyped_occurrence_rate\t{:.6}", t.configuration, t.typed_occurrence_rate);
            let _ = writeln!(s, "typing\t{}\ttyped_distinct_rate\t{:.6}", t.configuration, t.typed_distinct_rate);
        }
        s
    }
}
