use super::{normalize_apostrophe, Pos, Token};
use std::collections::{HashMap, HashSet};

const DEFAULT_LEXICON: &str = include_str!("../../data/lexicon.tsv");
const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("lexicon line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// Surface form → (lemma, part of speech), plus a stopword list.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<String, (String, Pos)>,
    stopwords: HashSet<String>,
}

impl Lexicon {
    /// The shipped French function-word and geographic-noun lexicon.
    pub fn french_default() -> Self {
        let mut lex = Lexicon::parse_tsv(DEFAULT_LEXICON).expect("shipped lexicon is well-formed");
        lex.load_stopwords(DEFAULT_STOPWORDS);
        lex
    }

    /// `surface<TAB>lemma<TAB>pos` lines; `#` comments and blank lines skipped.
    /// Later lines override earlier ones.
    pub fn parse_tsv(text: &str) -> Result<Self, LexiconError> {
        let mut lex = Lexicon::default();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [surface, lemma, pos] = fields.as_slice() else {
                return Err(LexiconError::Malformed {
                    line: line_no,
                    message: format!("expected 3 fields, got {}", fields.len()),
                });
            };
            let pos = Pos::parse(pos.trim()).ok_or_else(|| LexiconError::Malformed {
                line: line_no,
                message: format!("unknown part of speech `{pos}`"),
            })?;
            lex.insert(surface, lemma, pos);
        }
        Ok(lex)
    }

    pub fn insert(&mut self, surface: &str, lemma: &str, pos: Pos) {
        let key = normalize_apostrophe(&surface.trim().to_lowercase());
        self.entries.insert(key, (lemma.trim().to_string(), pos));
    }

    /// One stopword per line.
    pub fn load_stopwords(&mut self, text: &str) {
        self.stopwords.extend(
            text.lines()
                .map(|l| normalize_apostrophe(&l.trim().to_lowercase()))
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        );
    }

    pub fn lookup(&self, surface: &str) -> Option<(&str, Pos)> {
        let key = normalize_apostrophe(&surface.to_lowercase());
        self.entries.get(&key).map(|(l, p)| (l.as_str(), *p))
    }

    pub fn is_stopword(&self, surface: &str) -> bool {
        self.stopwords.contains(&normalize_apostrophe(&surface.to_lowercase()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Fills lemma and part of speech on every token.
///
/// Lexicon hits win. Unknown words get their lower-cased surface as lemma and
/// are proper nouns when capitalized and either not sentence-initial or seen
/// capitalized at a non-initial position elsewhere in the same token stream.
pub fn tag(tokens: &[Token], lexicon: &Lexicon) -> Vec<Token> {
    let capitalized_inside: HashSet<String> = tokens
        .iter()
        .filter(|t| t.capitalized && !t.sentence_initial)
        .map(Token::lower)
        .collect();
    tokens
        .iter()
        .map(|t| {
            let mut t = t.clone();
            let lower = t.lower();
            let (lemma, pos) = if !t.is_word() {
                (t.surface.clone(), Pos::Punct)
            } else if let Some((lemma, pos)) = lexicon.lookup(&t.surface) {
                (lemma.to_string(), pos)
            } else if t.capitalized && (!t.sentence_initial || capitalized_inside.contains(&lower)) {
                (lower, Pos::ProperNoun)
            } else {
                (lower, Pos::Other)
            };
            t.lemma = Some(lemma);
            t.pos = Some(pos);
            t
        })
        .collect()
}
