//! Lexico-syntactic patterns over tagged tokens, and the definition-field
//! grammar that turns short definitions into ontology edits.
//!
//! Pattern source syntax, one pattern per line:
//!
//! ```text
//! slot+ -> LABEL [KIND [RULE]]
//! slot  := atom ('?' | '*')?
//! atom  := TERM | lemma=WORD | pos=POS | MARKER(set)
//! ```
//!
//! `TERM lemma=est lemma=un TERM -> HYPONYMIE est-un R0` annotates
//! "X est un Y" sentences.

mod definition;

use crate::nlp::{expand_contractions, expand_phrase, Pos, TermChunk, Token};
use std::collections::{BTreeMap, HashMap};

pub use definition::{
    integrate_definition, parse_definition, DefinitionParse, IntegrateOptions, IntegrationCase,
    IntegrationReport, PARTIE_DE,
};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern syntax error at column {column}: {message}")]
    PatternSyntax { column: usize, message: String },
    #[error("definition could not be parsed: `{0}`")]
    NoParse(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slot {
    LemmaIs(String),
    PosIs(Pos),
    TermSlot,
    MarkerIn(String),
    Optional(Box<Slot>),
    Star(Box<Slot>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub name: String,
    pub sequence: Vec<Slot>,
    pub annotation_label: String,
    pub kind: Option<String>,
    pub rule_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternMatch {
    pub pattern_name: String,
    pub annotation_label: String,
    /// Inclusive token range.
    pub first: usize,
    pub last: usize,
    /// Lemma forms bound by `TERM` slots, in order.
    pub terms: Vec<String>,
}

/// Named sets of multiword markers (e.g. `partie_de` = "portion de", …).
#[derive(Debug, Clone, Default)]
pub struct MarkerSets {
    sets: BTreeMap<String, Vec<(String, Vec<String>)>>,
}

impl MarkerSets {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one marker per non-empty, non-comment line of `text` to `name`.
    pub fn load(&mut self, name: &str, text: &str) {
        for line in crate::resources::lines(text) {
            self.insert(name, line);
        }
    }

    pub fn insert(&mut self, name: &str, marker: &str) {
        let words = expand_phrase(marker);
        if words.is_empty() {
            return;
        }
        let set = self.sets.entry(name.to_string()).or_default();
        if !set.iter().any(|(m, _)| m == marker) {
            set.push((marker.to_string(), words));
            // longest first so that the first hit is the longest
            set.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| a.0.cmp(&b.0)));
        }
    }

    pub fn contains_set(&self, name: &str) -> bool {
        self.sets.contains_key(name)
    }

    /// Longest marker of `name` starting at token `start`; returns the marker
    /// text and the index one past its last token.
    pub fn match_at(&self, name: &str, tokens: &[Token], start: usize) -> Option<(&str, usize)> {
        let set = self.sets.get(name)?;
        let window = &tokens[start.min(tokens.len())..tokens.len().min(start + 8)];
        let words = expand_contractions(window);
        set.iter().find_map(|(marker, mw)| {
            if words.len() < mw.len() || words[..mw.len()].iter().zip(mw).any(|((w, _), m)| w != m) {
                return None;
            }
            let last_tok = words[mw.len() - 1].1;
            // a marker must end on a token boundary
            let ends_cleanly = words.get(mw.len()).is_none_or(|(_, t)| *t != last_tok);
            ends_cleanly.then_some((marker.as_str(), start + last_tok + 1))
        })
    }

    /// Like [`MarkerSets::match_at`], but a marker may also end inside a
    /// contraction whose remaining words are determiners (`au cœur du` for
    /// "au cœur de" + "le").
    pub fn match_at_absorbing_det(&self, name: &str, tokens: &[Token], start: usize) -> Option<(&str, usize)> {
        const DETS: &[&str] = &["le", "la", "les"];
        let set = self.sets.get(name)?;
        let window = &tokens[start.min(tokens.len())..tokens.len().min(start + 8)];
        let words = expand_contractions(window);
        set.iter().find_map(|(marker, mw)| {
            if words.len() < mw.len() || words[..mw.len()].iter().zip(mw).any(|((w, _), m)| w != m) {
                return None;
            }
            let last_tok = words[mw.len() - 1].1;
            let rest_ok = words[mw.len()..]
                .iter()
                .take_while(|(_, t)| *t == last_tok)
                .all(|(w, _)| DETS.contains(&w.as_str()));
            rest_ok.then_some((marker.as_str(), start + last_tok + 1))
        })
    }
}

fn syntax(column: usize, message: impl Into<String>) -> PatternError {
    PatternError::PatternSyntax {
        column,
        message: message.into(),
    }
}

fn parse_atom(word: &str, column: usize) -> Result<Slot, PatternError> {
    if word == "TERM" {
        return Ok(Slot::TermSlot);
    }
    if let Some(lemma) = word.strip_prefix("lemma=") {
        if lemma.is_empty() {
            return Err(syntax(column, "empty lemma"));
        }
        return Ok(Slot::LemmaIs(lemma.to_lowercase()));
    }
    if let Some(pos) = word.strip_prefix("pos=") {
        return Pos::parse(pos)
            .map(Slot::PosIs)
            .ok_or_else(|| syntax(column, format!("unknown part of speech `{pos}`")));
    }
    if let Some(rest) = word.strip_prefix("MARKER(") {
        let name = rest
            .strip_suffix(')')
            .ok_or_else(|| syntax(column, "unterminated MARKER("))?;
        if name.is_empty() {
            return Err(syntax(column, "empty marker set name"));
        }
        return Ok(Slot::MarkerIn(name.to_string()));
    }
    Err(syntax(column, format!("unknown slot `{word}`")))
}

/// Whitespace-separated words with their 1-based character columns.
fn words_with_columns(source: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (byte, ch) in source.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(byte),
            (true, Some(s)) => {
                let col = source[..s].chars().count() + 1;
                out.push((col, &source[s..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((source[..s].chars().count() + 1, &source[s..]));
    }
    out
}

pub fn compile_pattern(source: &str) -> Result<Pattern, PatternError> {
    let words = words_with_columns(source);
    if words.is_empty() {
        return Err(syntax(1, "empty pattern"));
    }
    let arrow = words
        .iter()
        .position(|(_, w)| *w == "->")
        .ok_or_else(|| syntax(source.chars().count() + 1, "missing `->` annotation"))?;
    if arrow == 0 {
        return Err(syntax(words[0].0, "pattern has no slots"));
    }
    let mut sequence = Vec::new();
    let mut optional_markers = 0;
    for &(col, word) in &words[..arrow] {
        let (atom, wrap) = match word.char_indices().last() {
            Some((i, '?')) if i > 0 => (&word[..i], Some('?')),
            Some((i, '*')) if i > 0 => (&word[..i], Some('*')),
            _ => (word, None),
        };
        let slot = parse_atom(atom, col)?;
        let slot = match wrap {
            Some('?') => {
                if matches!(slot, Slot::MarkerIn(_)) {
                    optional_markers += 1;
                    if optional_markers > 1 {
                        return Err(syntax(col, "at most one optional marker per pattern"));
                    }
                }
                Slot::Optional(Box::new(slot))
            }
            Some(_) => Slot::Star(Box::new(slot)),
            None => slot,
        };
        sequence.push(slot);
    }
    let annotation = &words[arrow + 1..];
    let Some(&(_, label)) = annotation.first() else {
        return Err(syntax(source.chars().count() + 1, "missing annotation label"));
    };
    if annotation.len() > 3 {
        return Err(syntax(annotation[3].0, "unexpected text after rule id"));
    }
    let kind = annotation.get(1).map(|(_, k)| k.to_string());
    let rule_id = annotation.get(2).map(|(_, r)| r.to_string());
    Ok(Pattern {
        name: kind.clone().unwrap_or_else(|| label.to_string()),
        sequence,
        annotation_label: label.to_string(),
        kind,
        rule_id,
    })
}

/// Compiles every non-empty, non-comment line.
pub fn compile_patterns(text: &str) -> Result<Vec<Pattern>, (usize, PatternError)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| compile_pattern(l).map_err(|e| (i + 1, e)))
        .collect()
}

/// Every token index covered by a chunk, mapped to that chunk.
fn index_chunks(chunks: &[TermChunk]) -> HashMap<usize, &TermChunk> {
    chunks.iter().flat_map(|c| (c.first..=c.last).map(move |i| (i, c))).collect()
}

struct MatchContext<'a> {
    tokens: &'a [Token],
    /// token index -> chunk covering it
    chunk_at: HashMap<usize, &'a TermChunk>,
    markers: &'a MarkerSets,
}

/// (end, bound term lemma forms with their start tokens)
type Partial = (usize, Vec<(usize, String)>);

impl MatchContext<'_> {
    fn step(&self, slot: &Slot, pos: usize) -> Vec<Partial> {
        let tok = self.tokens.get(pos);
        match slot {
            Slot::LemmaIs(l) => tok
                .filter(|t| t.lemma().to_lowercase() == *l)
                .map(|_| vec![(pos + 1, vec![])])
                .unwrap_or_default(),
            Slot::PosIs(p) => tok
                .filter(|t| t.pos == Some(*p))
                .map(|_| vec![(pos + 1, vec![])])
                .unwrap_or_default(),
            Slot::TermSlot => {
                let Some(c) = self.chunk_at.get(&pos) else {
                    return vec![];
                };
                if c.first == pos {
                    return vec![(c.last + 1, vec![(pos, c.lemma_form.clone())])];
                }
                // the tail of a chunk, when it starts on a noun ("portion de | route")
                if !tok.is_some_and(|t| t.pos.is_some_and(Pos::is_nominal)) {
                    return vec![];
                }
                let lemma = self.tokens[pos..=c.last].iter().map(Token::lemma).collect::<Vec<_>>().join(" ");
                vec![(c.last + 1, vec![(pos, lemma)])]
            }
            Slot::MarkerIn(set) => self
                .markers
                .match_at(set, self.tokens, pos)
                .map(|(_, end)| vec![(end, vec![])])
                .unwrap_or_default(),
            Slot::Optional(inner) => {
                let mut out = self.step(inner, pos);
                out.push((pos, vec![]));
                out
            }
            Slot::Star(inner) => {
                let mut out = vec![(pos, vec![])];
                let mut frontier = vec![(pos, vec![])];
                while let Some((p, terms)) = frontier.pop() {
                    for (e, t) in self.step(inner, p) {
                        if e > p {
                            let mut all = terms.clone();
                            all.extend(t);
                            out.push((e, all.clone()));
                            frontier.push((e, all));
                        }
                    }
                }
                out
            }
        }
    }

    fn longest_at(&self, slots: &[Slot], start: usize) -> Option<Partial> {
        let mut states: Vec<Partial> = vec![(start, vec![])];
        for slot in slots {
            let mut next = Vec::new();
            for (p, terms) in &states {
                for (e, t) in self.step(slot, *p) {
                    let mut all = terms.clone();
                    all.extend(t);
                    next.push((e, all));
                }
            }
            if next.is_empty() {
                return None;
            }
            states = next;
        }
        // longest; ties keep the first alternative explored
        states
            .into_iter()
            .filter(|(e, _)| *e > start)
            .fold(None, |best: Option<Partial>, cand| match &best {
                Some(b) if b.0 >= cand.0 => best,
                _ => Some(cand),
            })
    }
}

/// Leftmost-longest matches of `pattern`, scanning left to right.
///
/// When the pattern ends with a `TERM` slot and binds several terms, scanning
/// resumes at that final term so that chained statements ("X est un Y est un
/// Z") yield one match per link; matches then share at most that term.
pub fn match_pattern(
    pattern: &Pattern,
    tokens: &[Token],
    chunks: &[TermChunk],
    markers: &MarkerSets,
) -> Vec<PatternMatch> {
    let ctx = MatchContext {
        tokens,
        chunk_at: index_chunks(chunks),
        markers,
    };
    let ends_with_term = matches!(pattern.sequence.last(), Some(Slot::TermSlot));
    let mut matches = Vec::new();
    let mut start = 0;
    while start < tokens.len() {
        let Some((end, terms)) = ctx.longest_at(&pattern.sequence, start) else {
            start += 1;
            continue;
        };
        let resume = match terms.last() {
            Some((term_start, _)) if ends_with_term && terms.len() > 1 && *term_start > start => *term_start,
            _ => end,
        };
        matches.push(PatternMatch {
            pattern_name: pattern.name.clone(),
            annotation_label: pattern.annotation_label.clone(),
            first: start,
            last: end - 1,
            terms: terms.into_iter().map(|(_, t)| t).collect(),
        });
        start = resume;
    }
    matches
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nlp::{chunk_terms, tag, tokenize, Lexicon};

    const EST_UN: &str = "TERM lemma=est lemma=un TERM -> HYPONYMIE est-un R0";

    fn run(pattern: &Pattern, text: &str) -> Vec<PatternMatch> {
        let lex = Lexicon::french_default();
        let toks = tag(&tokenize(text), &lex);
        let chunks = chunk_terms(&toks, &lex);
        let mut markers = MarkerSets::new();
        markers.load("partie_de", crate::resources::PARTIE_DE_MARKERS);
        match_pattern(pattern, &toks, &chunks, &markers)
    }

    #[test]
    fn compiles_hyponymy_pattern() {
        let p = compile_pattern(EST_UN).unwrap();
        assert_eq!(
            p.sequence,
            vec![
                Slot::TermSlot,
                Slot::LemmaIs("est".into()),
                Slot::LemmaIs("un".into()),
                Slot::TermSlot
            ]
        );
        assert_eq!(p.annotation_label, "HYPONYMIE");
        assert_eq!(p.kind.as_deref(), Some("est-un"));
        assert_eq!(p.rule_id.as_deref(), Some("R0"));
        assert_eq!(p.name, "est-un");
    }

    #[test]
    fn optional_marker_pattern_matches_hand_built_ast() {
        let p = compile_pattern("MARKER(partie_de)? TERM -> X y R1").unwrap();
        let expected = Pattern {
            name: "y".into(),
            sequence: vec![
                Slot::Optional(Box::new(Slot::MarkerIn("partie_de".into()))),
                Slot::TermSlot,
            ],
            annotation_label: "X".into(),
            kind: Some("y".into()),
            rule_id: Some("R1".into()),
        };
        assert_eq!(p, expected);
        let p = compile_pattern("pos=adj* TERM -> P").unwrap();
        assert_eq!(p.sequence[0], Slot::Star(Box::new(Slot::PosIs(Pos::Adj))));
    }

    #[test]
    fn syntax_errors_carry_columns() {
        assert_eq!(compile_pattern(""), Err(syntax(1, "empty pattern")));
        assert!(matches!(compile_pattern("   "), Err(PatternError::PatternSyntax { column: 1, .. })));
        assert!(matches!(
            compile_pattern("TERM bogus -> X"),
            Err(PatternError::PatternSyntax { column: 6, .. })
        ));
        assert!(matches!(
            compile_pattern("TERM pos=zzz -> X"),
            Err(PatternError::PatternSyntax { column: 6, .. })
        ));
        assert!(matches!(compile_pattern("TERM TERM"), Err(PatternError::PatternSyntax { .. })));
        assert!(matches!(compile_pattern("-> X"), Err(PatternError::PatternSyntax { column: 1, .. })));
        assert!(matches!(
            compile_pattern("MARKER(a)? MARKER(b)? TERM -> X"),
            Err(PatternError::PatternSyntax { column: 12, .. })
        ));
        assert!(matches!(
            compile_pattern("MARKER(a TERM -> X"),
            Err(PatternError::PatternSyntax { column: 1, .. })
        ));
    }

    #[test]
    fn hyponymy_sentence() {
        let p = compile_pattern(EST_UN).unwrap();
        let m = run(&p, "Un aven est une grotte");
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].annotation_label, "HYPONYMIE");
        assert_eq!(m[0].terms, vec!["aven", "grotte"]);
        assert_eq!((m[0].first, m[0].last), (1, 4));
    }

    #[test]
    fn no_copula_no_match() {
        let p = compile_pattern(EST_UN).unwrap();
        assert!(run(&p, "Le gouffre domine la vallée").is_empty());
    }

    /// All start positions at which the pattern aligns, by exhaustive search.
    fn all_alignments(p: &Pattern, text: &str) -> Vec<usize> {
        let lex = Lexicon::french_default();
        let toks = tag(&tokenize(text), &lex);
        let chunks = chunk_terms(&toks, &lex);
        let markers = MarkerSets::new();
        let ctx = MatchContext {
            tokens: &toks,
            chunk_at: index_chunks(&chunks),
            markers: &markers,
        };
        (0..toks.len()).filter(|&s| ctx.longest_at(&p.sequence, s).is_some()).collect()
    }

    #[test]
    fn chained_statements_give_one_match_per_link() {
        let p = compile_pattern(EST_UN).unwrap();
        let text = "Torrent est un gave est un cours";
        assert_eq!(all_alignments(&p, text), vec![0, 3]);
        let m = run(&p, text);
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].terms, vec!["torrent", "gave"]);
        assert_eq!(m[1].terms, vec!["gave", "cours"]);
        assert!(m[0].first < m[1].first);
        // the only shared token is the boundary term
        assert_eq!(m[0].last, m[1].first);
    }

    #[test]
    fn optional_marker_and_star() {
        let p = compile_pattern("MARKER(partie_de)? TERM -> MERONYMIE partie-de R1").unwrap();
        let m = run(&p, "portion de route");
        assert_eq!(m.len(), 1);
        assert_eq!((m[0].first, m[0].last), (0, 2));
        assert_eq!(m[0].terms, vec!["route"]);

        let p = compile_pattern("TERM pos=adj* lemma=et TERM -> COORD").unwrap();
        let m = run(&p, "sommet et crête");
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn markers_match_longest_on_token_boundaries() {
        let mut ms = MarkerSets::new();
        ms.insert("rel", "au sud de");
        ms.insert("rel", "au sud");
        let lex = Lexicon::french_default();
        let toks = tag(&tokenize("au sud de la vallée"), &lex);
        assert_eq!(ms.match_at("rel", &toks, 0), Some(("au sud de", 3)));
        let toks = tag(&tokenize("au sud du lac"), &lex);
        // "du" expands to "de le": the marker ends inside that token
        assert_eq!(ms.match_at("rel", &toks, 0), Some(("au sud", 2)));
        assert_eq!(ms.match_at("missing", &toks, 0), None);
    }

    #[test]
    fn compile_many() {
        let ps = compile_patterns(crate::resources::PATTERNS).unwrap();
        assert_eq!(ps.len(), 1);
        let err = compile_patterns("TERM -> A\n\nnope -> B\n").unwrap_err();
        assert_eq!(err.0, 3);
    }
}
