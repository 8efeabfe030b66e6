//! Domain ontology construction from structured specification documents,
//! spatial named-entity annotation of French narrative text, and
//! controlled-vocabulary driven enrichment of the ontology.
//!
//! The pipeline stages live in separate modules:
//!
//! * [`ingest`] turns XML specification documents into concepts and relations
//!   through declarative tag rules;
//! * [`pattern`] compiles lexico-syntactic patterns and folds definition text
//!   back into the ontology;
//! * [`nlp`] tokenizes, tags and chunks French text;
//! * [`spatial`] recognizes absolute and relative spatial entities, validates
//!   them against a gazetteer and collects their qualifier terms;
//! * [`thesaurus`] parses vocabulary records and attaches qualifier terms as
//!   new leaf concepts.

pub mod ingest;
pub mod nlp;
pub mod ontology;
pub mod pattern;
pub mod spatial;
pub mod thesaurus;

/// Shipped configuration resources.
pub mod resources {
    pub const LEXICON: &str = include_str!("../data/lexicon.tsv");
    pub const STOPWORDS: &str = include_str!("../data/stopwords.txt");
    pub const INTRODUCERS: &str = include_str!("../data/introducers.txt");
    pub const RELATION_MARKERS: &str = include_str!("../data/relation_markers.txt");
    pub const PARTIE_DE_MARKERS: &str = include_str!("../data/partie_de.txt");
    pub const PATTERNS: &str = include_str!("../data/patterns.txt");
    pub const RULES: &str = include_str!("../data/rules.tsv");
    pub const GEO_MARKERS: &str = include_str!("../data/geo_markers.txt");

    /// Non-empty, non-comment lines, trimmed.
    pub fn lines(text: &str) -> impl Iterator<Item = &str> {
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
    }
}
