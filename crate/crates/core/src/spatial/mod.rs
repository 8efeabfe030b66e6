//! Spatial named entities in narrative text: absolute entities (a toponym,
//! optionally introduced by a common noun, "le lac d'Artouste") and relative
//! ones built on them with a relation marker ("au sud de la vallée d'Ossau").

mod gazetteer;
mod recognize;
mod typing;

pub use gazetteer::{Gazetteer, GazetteerEntry};
pub use recognize::{
    annotate_document, mark_candidates, recognize_esa, recognize_esr, Annotator, Candidate, DocumentAnnotations,
    INTRODUCER_WINDOW, RELATION_SET,
};
pub use typing::{
    dump_row, extract_term_associations, type_entity, type_entity_with_index, validate_esa, TermAssociation,
    Typing,
};

use std::collections::BTreeSet;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SpatialError {
    #[error("gazetteer line {line}: {message}")]
    MalformedGazetteer { line: usize, message: String },
}

/// Lemmas of common nouns that introduce toponyms (lac, pic, col, …).
#[derive(Debug, Clone, Default)]
pub struct IntroducerLexicon {
    lemmas: BTreeSet<String>,
}

impl IntroducerLexicon {
    pub fn parse(text: &str) -> Self {
        IntroducerLexicon {
            lemmas: crate::resources::lines(text).map(str::to_lowercase).collect(),
        }
    }

    pub fn french_default() -> Self {
        Self::parse(crate::resources::INTRODUCERS)
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.lemmas.contains(&lemma.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.lemmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lemmas.is_empty()
    }
}

/// An absolute spatial entity.
#[derive(Debug, Clone, PartialEq)]
pub struct EsaAnnotation {
    /// Inclusive token range, determiner and introducer included.
    pub first: usize,
    pub last: usize,
    /// Byte span in the document.
    pub start: usize,
    pub end: usize,
    /// Introducer lemma ("lac").
    pub introducer: Option<String>,
    pub toponym: String,
    pub validated: bool,
    pub gazetteer_type: Option<String>,
    /// (lat, lon) in degrees.
    pub position: Option<(f64, f64)>,
    /// Feature types of every gazetteer hit when none could be chosen.
    pub alternatives: Vec<String>,
}

/// A relative spatial entity wrapping exactly one absolute entity.
#[derive(Debug, Clone, PartialEq)]
pub struct EsrAnnotation {
    pub first: usize,
    pub last: usize,
    pub start: usize,
    pub end: usize,
    pub relation_marker: String,
    pub inner: EsaAnnotation,
}
