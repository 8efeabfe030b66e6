//! Tokenization, lexicon-based tagging and term chunking for French text.

mod chunk;
mod lexicon;
mod tokenize;

pub use chunk::{chunk_terms, TermChunk};
pub use lexicon::{tag, Lexicon, LexiconError};
pub use tokenize::tokenize;

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pos {
    Noun,
    ProperNoun,
    Verb,
    Det,
    Prep,
    Adj,
    Adv,
    Punct,
    Other,
}

impl Pos {
    pub fn parse(s: &str) -> Option<Pos> {
        Some(match s.to_ascii_lowercase().as_str() {
            "noun" | "nom" => Pos::Noun,
            "propernoun" | "proper" | "npr" => Pos::ProperNoun,
            "verb" | "ver" => Pos::Verb,
            "det" => Pos::Det,
            "prep" | "pre" => Pos::Prep,
            "adj" => Pos::Adj,
            "adv" => Pos::Adv,
            "punct" | "pun" => Pos::Punct,
            "other" => Pos::Other,
            _ => return None,
        })
    }

    pub fn is_nominal(self) -> bool {
        matches!(self, Pos::Noun | Pos::ProperNoun)
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pos::Noun => "noun",
            Pos::ProperNoun => "propernoun",
            Pos::Verb => "verb",
            Pos::Det => "det",
            Pos::Prep => "prep",
            Pos::Adj => "adj",
            Pos::Adv => "adv",
            Pos::Punct => "punct",
            Pos::Other => "other",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// Byte offsets into the source text, end exclusive.
    pub start: usize,
    pub end: usize,
    pub lemma: Option<String>,
    pub pos: Option<Pos>,
    pub capitalized: bool,
    /// First token of the text or of a sentence.
    pub sentence_initial: bool,
}

impl Token {
    pub fn lower(&self) -> String {
        normalize_apostrophe(&self.surface.to_lowercase())
    }

    pub fn lemma(&self) -> &str {
        self.lemma.as_deref().unwrap_or(&self.surface)
    }

    pub fn is(&self, pos: Pos) -> bool {
        self.pos == Some(pos)
    }

    pub fn is_word(&self) -> bool {
        self.surface.chars().next().is_some_and(char::is_alphanumeric)
    }
}

pub(crate) fn normalize_apostrophe(s: &str) -> String {
    s.replace(['\u{2019}', '\u{02bc}'], "'")
}

/// Source text covered by tokens `first..=last`.
pub fn span_text<'a>(source: &'a str, tokens: &[Token], first: usize, last: usize) -> &'a str {
    &source[tokens[first].start..tokens[last].end]
}

/// Lower-cased words with French contractions and elisions expanded
/// (`du` → `de le`, `au` → `à le`, `d'` → `de`), each tagged with the index of
/// the token it came from.
pub fn expand_contractions(tokens: &[Token]) -> Vec<(String, usize)> {
    let mut out = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        let lower = t.lower();
        let parts: &[&str] = match lower.as_str() {
            "du" => &["de", "le"],
            "des" => &["de", "les"],
            "au" => &["à", "le"],
            "aux" => &["à", "les"],
            "d'" => &["de"],
            "l'" => &["le"],
            "qu'" => &["que"],
            "jusqu'" => &["jusque"],
            _ => {
                out.push((lower, i));
                continue;
            }
        };
        out.extend(parts.iter().map(|p| (p.to_string(), i)));
    }
    out
}

/// Splits a multiword expression the same way `expand_contractions` does.
pub fn expand_phrase(phrase: &str) -> Vec<String> {
    let tokens = tokenize(phrase);
    expand_contractions(&tokens).into_iter().map(|(w, _)| w).collect()
}
