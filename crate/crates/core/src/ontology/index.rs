use super::{ConceptId, Ontology};
use crate::thesaurus::normalize_term;
use std::collections::BTreeMap;

/// Normalized display names and associated terms mapped to the concepts
/// carrying them. Top is not indexed.
#[derive(Debug, Clone, Default)]
pub struct TermIndex {
    terms: BTreeMap<String, Vec<ConceptId>>,
}

impl TermIndex {
    pub fn new(ontology: &Ontology) -> Self {
        let mut terms: BTreeMap<String, Vec<ConceptId>> = BTreeMap::new();
        for c in ontology.concepts().filter(|c| !c.id.is_top()) {
            let names = std::iter::once(&c.display_name).chain(&c.associated_terms);
            for name in names {
                let key = normalize_term(name);
                if key.is_empty() {
                    continue;
                }
                let slot = terms.entry(key).or_default();
                if !slot.contains(&c.id) {
                    slot.push(c.id.clone());
                }
            }
        }
        TermIndex { terms }
    }

    pub fn lookup(&self, term: &str) -> &[ConceptId] {
        self.terms
            .get(&normalize_term(term))
            .map_or(&[], Vec::as_slice)
    }

    pub fn contains(&self, term: &str) -> bool {
        !self.lookup(term).is_empty()
    }
}
