use super::{EsaAnnotation, EsrAnnotation, Gazetteer};
use crate::ontology::{ConceptId, Ontology, TermIndex};
use crate::thesaurus::normalize_term;
use std::collections::BTreeMap;

/// Looks the toponym up in the gazetteer. A unique hit fixes type and
/// position; several hits are settled by agreement with the introducer
/// (directly, or through a shared ontology concept), else kept as
/// alternatives.
pub fn validate_esa(esa: &EsaAnnotation, gazetteer: &Gazetteer, ontology: Option<&Ontology>) -> EsaAnnotation {
    let mut out = esa.clone();
    out.validated = false;
    out.gazetteer_type = None;
    out.position = None;
    out.alternatives.clear();
    let hits = gazetteer.lookup(&esa.toponym);
    if hits.is_empty() {
        return out;
    }
    out.validated = true;
    let chosen = if hits.len() == 1 {
        Some(hits[0])
    } else {
        esa.introducer.as_deref().and_then(|intro| {
            let intro_key = normalize_term(intro);
            let index = ontology.map(TermIndex::new);
            let agrees = |feature: &str| {
                if normalize_term(feature) == intro_key {
                    return true;
                }
                index.as_ref().is_some_and(|idx| {
                    let a = idx.lookup(intro);
                    idx.lookup(feature).iter().any(|c| a.contains(c))
                })
            };
            hits.iter().copied().find(|h| agrees(&h.feature_type))
        })
    };
    match chosen {
        Some(h) => {
            out.gazetteer_type = Some(h.feature_type.clone());
            out.position = Some((h.lat, h.lon));
        }
        None => {
            let mut alts: Vec<String> = hits.iter().map(|h| h.feature_type.clone()).collect();
            alts.dedup();
            out.alternatives = alts;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TermAssociation {
    pub toponym: String,
    pub term: String,
    pub occurrences: usize,
    pub toponym_validated: bool,
}

/// Counts (toponym, introducer) pairs, keeping validated and unvalidated
/// toponyms apart. ESAs without an introducer contribute nothing.
pub fn extract_term_associations<'a>(esas: impl IntoIterator<Item = &'a EsaAnnotation>) -> Vec<TermAssociation> {
    let mut counts: BTreeMap<(String, String, bool), usize> = BTreeMap::new();
    for e in esas {
        if let Some(intro) = &e.introducer {
            *counts.entry((e.toponym.clone(), intro.clone(), e.validated)).or_default() += 1;
        }
    }
    counts
        .into_iter()
        .map(|((toponym, term, toponym_validated), occurrences)| TermAssociation {
            toponym,
            term,
            occurrences,
            toponym_validated,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Typing {
    pub typed: bool,
    pub concept: Option<ConceptId>,
    /// Several concepts tied at the greatest depth.
    pub ambiguous: bool,
}

pub fn type_entity(esa: &EsaAnnotation, ontology: &Ontology) -> Typing {
    type_entity_with_index(esa, ontology, &TermIndex::new(ontology))
}

/// Matches the introducer, then the gazetteer type, against concept names and
/// associated terms; the deepest match wins, ties going to the smallest id.
pub fn type_entity_with_index(esa: &EsaAnnotation, ontology: &Ontology, index: &TermIndex) -> Typing {
    let keys = esa.introducer.iter().chain(esa.gazetteer_type.iter().filter(|_| esa.validated));
    for key in keys {
        let hits = index.lookup(key);
        let Some(best_depth) = hits.iter().filter_map(|c| ontology.depth(c)).max() else {
            continue;
        };
        let mut deepest: Vec<&ConceptId> = hits.iter().filter(|c| ontology.depth(c) == Some(best_depth)).collect();
        deepest.sort();
        return Typing {
            typed: true,
            concept: Some(deepest[0].clone()),
            ambiguous: deepest.len() > 1,
        };
    }
    Typing::default()
}

fn tsv_field(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

/// `doc start end kind introducer toponym validated type concept`.
/// For relative entities the introducer column carries the relation marker.
pub fn dump_row(doc: &str, esa: Option<&EsaAnnotation>, esr: Option<&EsrAnnotation>, typing: &Typing) -> String {
    let (kind, start, end, intro, inner) = match (esr, esa) {
        (Some(r), _) => ("ESR", r.start, r.end, r.relation_marker.clone(), &r.inner),
        (None, Some(e)) => ("ESA", e.start, e.end, e.introducer.clone().unwrap_or_default(), e),
        (None, None) => return String::new(),
    };
    format!(
        "{}\t{start}\t{end}\t{kind}\t{}\t{}\t{}\t{}\t{}\n",
        tsv_field(doc),
        tsv_field(&intro),
        tsv_field(&inner.toponym),
        inner.validated,
        tsv_field(inner.gazetteer_type.as_deref().unwrap_or("")),
        typing.concept.as_ref().map_or("", |c| c.as_str()),
    )
}
