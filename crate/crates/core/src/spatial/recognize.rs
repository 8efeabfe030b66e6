use super::{validate_esa, EsaAnnotation, EsrAnnotation, Gazetteer, IntroducerLexicon};
use crate::nlp::{span_text, tag, tokenize, Lexicon, Pos, Token};
use crate::ontology::Ontology;
use crate::pattern::MarkerSets;

/// How many tokens before a toponym an introducer may sit
/// ("la vallée de la Garonne": vallée is 3 tokens back).
pub const INTRODUCER_WINDOW: usize = 3;

/// Marker set name holding relation markers ("au sud de", …).
pub const RELATION_SET: &str = "relation";

/// A run of name tokens, with the introducer found before it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub first: usize,
    pub last: usize,
    pub introducer: Option<usize>,
}

fn is_connector(t: &Token) -> bool {
    t.is(Pos::Prep) || t.is(Pos::Det)
}

fn is_introducer(t: &Token, introducers: &IntroducerLexicon) -> bool {
    t.is(Pos::Noun) && introducers.contains(t.lemma())
}

/// True when a capitalized word at `i` introduces a following name
/// ("le Lac d'Artouste") rather than being one.
fn introduces_name(tokens: &[Token], i: usize, introducers: &IntroducerLexicon) -> bool {
    if !is_introducer(&tokens[i], introducers) {
        return false;
    }
    let mut k = i + 1;
    while k < tokens.len() && k <= i + 2 && is_connector(&tokens[k]) {
        k += 1;
    }
    tokens.get(k).is_some_and(|t| t.capitalized && t.is_word())
}

fn is_name(tokens: &[Token], i: usize, introducers: &IntroducerLexicon) -> bool {
    let t = &tokens[i];
    if !t.capitalized || !t.is_word() {
        return false;
    }
    let nominal = t.is(Pos::ProperNoun) || (t.is(Pos::Noun) && !t.sentence_initial);
    nominal && !introduces_name(tokens, i, introducers)
}

/// Capitalized name runs, each with the introducer noun found at most
/// [`INTRODUCER_WINDOW`] tokens before it, across prepositions and
/// determiners only.
pub fn mark_candidates(tokens: &[Token], introducers: &IntroducerLexicon) -> Vec<Candidate> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        if !is_name(tokens, i, introducers) {
            i += 1;
            continue;
        }
        let first = i;
        while i + 1 < tokens.len() && is_name(tokens, i + 1, introducers) {
            i += 1;
        }
        let floor = out.last().map_or(0, |c: &Candidate| c.last + 1);
        let mut introducer = None;
        for k in (first.saturating_sub(INTRODUCER_WINDOW).max(floor)..first).rev() {
            if is_introducer(&tokens[k], introducers) {
                introducer = Some(k);
                break;
            }
            if !is_connector(&tokens[k]) {
                break;
            }
        }
        out.push(Candidate {
            first,
            last: i,
            introducer,
        });
        i += 1;
    }
    out
}

/// `Det? Introducer (Prep Det?)? Name` or a bare `Name`.
pub fn recognize_esa(text: &str, tokens: &[Token], candidates: &[Candidate]) -> Vec<EsaAnnotation> {
    let mut out: Vec<EsaAnnotation> = Vec::new();
    for c in candidates {
        let mut first = c.introducer.unwrap_or(c.first);
        let floor = out.last().map_or(0, |e| e.last + 1);
        if first > floor && tokens[first - 1].is(Pos::Det) && c.introducer.is_some() {
            first -= 1;
        }
        out.push(EsaAnnotation {
            first,
            last: c.last,
            start: tokens[first].start,
            end: tokens[c.last].end,
            introducer: c.introducer.map(|k| tokens[k].lemma().to_lowercase()),
            toponym: span_text(text, tokens, c.first, c.last).to_string(),
            validated: false,
            gazetteer_type: None,
            position: None,
            alternatives: vec![],
        });
    }
    out
}

/// Wraps every ESA immediately preceded by a relation marker.
pub fn recognize_esr(tokens: &[Token], esas: &[EsaAnnotation], markers: &MarkerSets) -> Vec<EsrAnnotation> {
    let mut out: Vec<EsrAnnotation> = Vec::new();
    let mut floor = 0;
    for esa in esas {
        // earliest start wins, i.e. the longest marker
        let lo = esa.first.saturating_sub(8).max(floor);
        let hit = (lo..esa.first).find_map(|s| {
            markers
                .match_at_absorbing_det(RELATION_SET, tokens, s)
                .filter(|&(_, end)| end == esa.first)
                .map(|(m, _)| (s, m.to_string()))
        });
        if let Some((s, marker)) = hit {
            out.push(EsrAnnotation {
                first: s,
                last: esa.last,
                start: tokens[s].start,
                end: esa.end,
                relation_marker: marker,
                inner: esa.clone(),
            });
        }
        floor = esa.last + 1;
    }
    out
}

/// Everything needed to annotate a document.
#[derive(Debug, Clone)]
pub struct Annotator {
    pub lexicon: Lexicon,
    pub introducers: IntroducerLexicon,
    pub markers: MarkerSets,
    pub gazetteer: Gazetteer,
}

impl Annotator {
    /// Shipped lexicons and markers with the given gazetteer.
    pub fn french_default(gazetteer: Gazetteer) -> Self {
        let mut markers = MarkerSets::new();
        markers.load(RELATION_SET, crate::resources::RELATION_MARKERS);
        Annotator {
            lexicon: Lexicon::french_default(),
            introducers: IntroducerLexicon::french_default(),
            markers,
            gazetteer,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocumentAnnotations {
    pub tokens: Vec<Token>,
    pub esas: Vec<EsaAnnotation>,
    pub esrs: Vec<EsrAnnotation>,
}

/// Tokenize, tag, mark, recognize and validate one document.
pub fn annotate_document(text: &str, annotator: &Annotator, ontology: Option<&Ontology>) -> DocumentAnnotations {
    let tokens = tag(&tokenize(text), &annotator.lexicon);
    let candidates = mark_candidates(&tokens, &annotator.introducers);
    let esas: Vec<EsaAnnotation> = recognize_esa(text, &tokens, &candidates)
        .into_iter()
        .map(|e| validate_esa(&e, &annotator.gazetteer, ontology))
        .collect();
    let esrs = recognize_esr(&tokens, &esas, &annotator.markers);
    DocumentAnnotations { tokens, esas, esrs }
}
