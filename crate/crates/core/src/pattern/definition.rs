use super::{MarkerSets, PatternError};
use crate::nlp::{chunk_terms, span_text, tag, tokenize, Lexicon, Pos, Token};
use crate::ontology::{ConceptId, Ontology, OntologyError, Origin, RelationKind, RelationOutcome};
use crate::thesaurus::normalize_term;

/// Marker set consulted for meronymy.
pub const PARTIE_DE: &str = "partie_de";

const COORDINATORS: &[&str] = &["ou", "et", ","];

/// `{Concept} {Propriete}* ({M_PartieDe})? {Terme} {Propriete}*`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitionParse {
    pub concept: ConceptId,
    pub leading_properties: Vec<String>,
    pub meronymy_marker: Option<String>,
    pub term: Option<String>,
    pub trailing_properties: Vec<String>,
    /// Conjuncts of a bare coordination ("X ou Y"); each becomes an
    /// associated term of the concept.
    pub coordinated_terms: Vec<String>,
}

impl DefinitionParse {
    pub fn properties(&self) -> impl Iterator<Item = &str> {
        self.leading_properties
            .iter()
            .chain(&self.trailing_properties)
            .map(String::as_str)
    }

    pub fn has_properties(&self) -> bool {
        !self.leading_properties.is_empty() || !self.trailing_properties.is_empty()
    }
}

fn is_coordinator(t: &Token) -> bool {
    COORDINATORS.contains(&t.lower().as_str())
}

/// Splits `tokens[from..to]` into property strings at punctuation and
/// coordinators, keeping each piece's source text verbatim.
fn split_properties(source: &str, tokens: &[Token], from: usize, to: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut seg_start: Option<usize> = None;
    for i in from..=to {
        let boundary = i == to || tokens[i].is(Pos::Punct) || is_coordinator(&tokens[i]);
        if boundary {
            if let Some(s) = seg_start.take() {
                out.push(span_text(source, tokens, s, i - 1).to_string());
            }
        } else if seg_start.is_none() {
            seg_start = Some(i);
        }
    }
    out
}

/// Reads a definition belonging to `owner`.
pub fn parse_definition(
    text: &str,
    owner: &ConceptId,
    ontology: &Ontology,
    markers: &MarkerSets,
    lexicon: &Lexicon,
) -> Result<DefinitionParse, PatternError> {
    let no_parse = || PatternError::NoParse(text.trim().to_string());
    if !ontology.contains(owner) {
        return Err(no_parse());
    }
    let mut tokens = tag(&tokenize(text), lexicon);
    while tokens.last().is_some_and(|t| t.is(Pos::Punct)) {
        tokens.pop();
    }
    if tokens.is_empty() {
        return Err(no_parse());
    }
    let end = tokens.len();
    let mut parse = DefinitionParse {
        concept: owner.clone(),
        leading_properties: vec![],
        meronymy_marker: None,
        term: None,
        trailing_properties: vec![],
        coordinated_terms: vec![],
    };
    let lower = |a: usize, b: usize| span_text(text, &tokens, a, b).to_lowercase();

    let mut i = 0;
    let skip_det = |i: &mut usize| {
        while tokens.get(*i).is_some_and(|t| t.is(Pos::Det)) {
            *i += 1;
        }
    };
    skip_det(&mut i);
    while i < end && tokens[i].is(Pos::Adj) {
        parse.leading_properties.push(span_text(text, &tokens, i, i).to_string());
        i += 1;
        skip_det(&mut i);
    }
    if let Some((marker, after)) = markers.match_at(PARTIE_DE, &tokens, i) {
        parse.meronymy_marker = Some(marker.to_string());
        i = after;
        skip_det(&mut i);
    }
    if i >= end {
        return Err(no_parse());
    }

    let rest = &tokens[i..];
    let chunks = chunk_terms(rest, lexicon);
    let Some(first) = chunks.first().filter(|c| c.first == 0) else {
        return Err(no_parse());
    };

    // bare coordination of terms covering the whole remainder
    if parse.meronymy_marker.is_none() && parse.leading_properties.is_empty() && chunks.len() > 1 {
        let mut pos = 0;
        let mut covered = true;
        for (n, c) in chunks.iter().enumerate() {
            if n > 0 {
                let mut saw_coord = false;
                while pos < c.first && (is_coordinator(&rest[pos]) || rest[pos].is(Pos::Det)) {
                    saw_coord |= is_coordinator(&rest[pos]);
                    pos += 1;
                }
                if !saw_coord {
                    covered = false;
                    break;
                }
            }
            if pos != c.first {
                covered = false;
                break;
            }
            pos = c.last + 1;
        }
        if covered && pos == rest.len() {
            parse.coordinated_terms = chunks
                .iter()
                .map(|c| lower(i + c.first, i + c.last))
                .collect();
            return Ok(parse);
        }
    }

    // adjectives closing the chunk qualify C rather than name T
    let mut term_last = first.last;
    while term_last > first.first && rest[term_last].is(Pos::Adj) {
        term_last -= 1;
    }
    parse.term = Some(lower(i + first.first, i + term_last));
    parse.trailing_properties = (i + term_last + 1..=i + first.last)
        .map(|k| span_text(text, &tokens, k, k).to_string())
        .collect();
    let after_term = i + first.last + 1;
    parse
        .trailing_properties
        .extend(split_properties(text, &tokens, after_term, end));
    Ok(parse)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegrateOptions {
    /// When T already exists as a concept, still add the C is-a T edge.
    /// Off means the strict "no new relations" reading.
    pub link_existing_term: bool,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            link_existing_term: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrationCase {
    /// C and T only: T becomes an associated term.
    Synonymy,
    /// C, T and properties: C is-a T.
    Hyponymy,
    /// C, marker, T and properties: C part-of T.
    Meronymy,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntegrationReport {
    pub case: Option<IntegrationCase>,
    pub created: Vec<ConceptId>,
    pub relations: Vec<(ConceptId, RelationKind, ConceptId)>,
    pub properties: Vec<String>,
    pub associated_terms: Vec<String>,
    pub warnings: Vec<String>,
}

/// Singular, case-folded words used for lexical inclusion tests.
pub(crate) fn lexical_words(text: &str) -> Vec<String> {
    crate::nlp::expand_phrase(text)
        .into_iter()
        .filter(|w| w.chars().next().is_some_and(char::is_alphanumeric))
        .map(|w| normalize_term(&w))
        .collect()
}

fn contains_run(hay: &[String], needle: &[String]) -> bool {
    !needle.is_empty() && hay.windows(needle.len()).any(|w| w == needle)
}

fn capitalize(term: &str) -> String {
    let mut chars = term.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Locates T, or creates it under Top and hangs lexically more specific
/// concepts beneath it. Returns the id and whether it already existed.
fn resolve_term(
    term: &str,
    ontology: &mut Ontology,
    report: &mut IntegrationReport,
) -> Result<(ConceptId, bool), OntologyError> {
    let words = lexical_words(term);
    let existing = ontology
        .concepts()
        .filter(|c| !c.id.is_top() && lexical_words(&c.display_name) == words)
        .map(|c| c.id.clone())
        .min();
    if let Some(id) = existing {
        return Ok((id, true));
    }
    let id = ontology.add_concept(&ConceptId::top(), &capitalize(term), Origin::Language, None)?;
    report.created.push(id.clone());
    let specific: Vec<ConceptId> = ontology
        .concepts()
        .filter(|c| !c.id.is_top() && c.id != id)
        .filter(|c| {
            let w = lexical_words(&c.display_name);
            w.len() > words.len() && contains_run(&w, &words)
        })
        .map(|c| c.id.clone())
        .collect();
    for st in specific {
        link(ontology, report, &st, RelationKind::IsA, &id);
    }
    Ok((id, false))
}

fn link(
    ontology: &mut Ontology,
    report: &mut IntegrationReport,
    source: &ConceptId,
    kind: RelationKind,
    target: &ConceptId,
) {
    match ontology.add_relation(source, target, kind.clone(), Origin::Language) {
        Ok(RelationOutcome::Added) => report.relations.push((source.clone(), kind, target.clone())),
        Ok(RelationOutcome::Duplicate) => {}
        Ok(RelationOutcome::PartOfCycleSkipped) => report
            .warnings
            .push(format!("part-of {source} -> {target} skipped: cycle")),
        Err(e) => report.warnings.push(format!("{kind} {source} -> {target} skipped: {e}")),
    }
}

/// Folds a parsed definition into the ontology. Never removes anything;
/// replaying the same parse is a no-op.
pub fn integrate_definition(
    parse: &DefinitionParse,
    ontology: &mut Ontology,
    options: IntegrateOptions,
) -> IntegrationReport {
    let mut report = IntegrationReport::default();
    let c = &parse.concept;
    if !ontology.contains(c) {
        report.warnings.push(format!("unknown concept {c}"));
        return report;
    }
    let own_name = ontology.concept(c).map(|x| x.display_name.to_lowercase()).unwrap_or_default();

    let mut synonyms: Vec<&str> = parse.coordinated_terms.iter().map(String::as_str).collect();
    let term = match &parse.term {
        Some(t) if parse.has_properties() || parse.meronymy_marker.is_some() => Some(t),
        Some(t) => {
            synonyms.push(t);
            None
        }
        None => None,
    };

    if !synonyms.is_empty() {
        report.case = Some(IntegrationCase::Synonymy);
        for s in synonyms {
            if s.to_lowercase() == own_name {
                report.warnings.push(format!("term `{s}` is the concept's own name"));
                continue;
            }
            if let Ok(true) = ontology.add_associated_term(c, s) {
                report.associated_terms.push(s.to_string());
            }
        }
        return report;
    }
    let Some(term) = term else {
        report.warnings.push(format!("definition of {c} has no term"));
        return report;
    };

    let (t, existed) = match resolve_term(term, ontology, &mut report) {
        Ok(r) => r,
        Err(e) => {
            report.warnings.push(format!("term `{term}` not integrated: {e}"));
            return report;
        }
    };
    if &t == c {
        report.warnings.push(format!("term `{term}` resolves to the concept itself"));
        return report;
    }
    if parse.meronymy_marker.is_some() {
        report.case = Some(IntegrationCase::Meronymy);
        link(ontology, &mut report, c, RelationKind::PartOf, &t);
    } else {
        report.case = Some(IntegrationCase::Hyponymy);
        if !existed || options.link_existing_term {
            link(ontology, &mut report, c, RelationKind::IsA, &t);
        }
    }
    for p in parse.properties() {
        if let Ok(true) = ontology.add_property(c, p) {
            report.properties.push(p.to_string());
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn markers() -> MarkerSets {
        let mut m = MarkerSets::new();
        m.load(PARTIE_DE, crate::resources::PARTIE_DE_MARKERS);
        m
    }

    fn road_section() -> (Ontology, ConceptId) {
        let mut o = Ontology::new();
        let v = o
            .add_concept(&ConceptId::top(), "Voies de communication routière", Origin::Structure, None)
            .unwrap();
        let t = o.add_concept(&v, "Tronçon de route", Origin::Structure, None).unwrap();
        (o, t)
    }

    fn objets_divers() -> (Ontology, ConceptId) {
        let mut o = Ontology::new();
        let d = o.add_concept(&ConceptId::top(), "Objets Divers", Origin::Structure, None).unwrap();
        let r = o.add_concept(&d, "Oronyme", Origin::Structure, None).unwrap();
        let g = o.add_concept(&r, "Grotte", Origin::Structure, None).unwrap();
        (o, g)
    }

    fn parse(text: &str, o: &Ontology, owner: &ConceptId) -> Result<DefinitionParse, PatternError> {
        parse_definition(text, owner, o, &markers(), &Lexicon::french_default())
    }

    #[test]
    fn meronymy_definition() {
        let (o, t) = road_section();
        let p = parse("Portion de voie de communication\n      destinée aux automobiles", &o, &t).unwrap();
        assert_eq!(p.meronymy_marker.as_deref(), Some("portion de"));
        assert_eq!(p.term.as_deref(), Some("voie de communication"));
        assert_eq!(p.trailing_properties, vec!["destinée aux automobiles"]);
        assert!(p.leading_properties.is_empty());
        assert!(p.coordinated_terms.is_empty());
    }

    #[test]
    fn coordination_definition() {
        let (o, g) = objets_divers();
        let p = parse("grotte naturelle ou excavation", &o, &g).unwrap();
        assert_eq!(p.term, None);
        assert_eq!(p.coordinated_terms, vec!["grotte naturelle", "excavation"]);
    }

    #[test]
    fn punctuation_only_is_no_parse() {
        let (o, g) = objets_divers();
        assert!(matches!(parse(".", &o, &g), Err(PatternError::NoParse(_))));
        assert!(matches!(parse("", &o, &g), Err(PatternError::NoParse(_))));
        assert!(matches!(parse("destinée aux automobiles", &o, &g), Err(PatternError::NoParse(_))));
        assert!(matches!(parse("portion de", &o, &g), Err(PatternError::NoParse(_))));
        let missing = ConceptId::new("Nope");
        assert!(matches!(parse("grotte", &o, &missing), Err(PatternError::NoParse(_))));
    }

    #[test]
    fn leading_adjective_properties() {
        let (o, g) = objets_divers();
        let p = parse("Profonde cavité, humide", &o, &g).unwrap();
        assert_eq!(p.leading_properties, vec!["Profonde"]);
        assert_eq!(p.term.as_deref(), Some("cavité"));
        assert_eq!(p.trailing_properties, vec!["humide"]);
    }

    #[test]
    fn integrate_meronymy_worked_example() {
        let (mut o, t) = road_section();
        let p = parse("Portion de voie de communication destinée aux automobiles", &o, &t).unwrap();
        let r = integrate_definition(&p, &mut o, IntegrateOptions::default());
        let voie = ConceptId::new("Voie de communication");
        let routiere = ConceptId::new("Voies de communication routière");
        assert_eq!(r.case, Some(IntegrationCase::Meronymy));
        assert_eq!(r.created, vec![voie.clone()]);
        assert!(o.has_relation(&voie, &RelationKind::IsA, &ConceptId::top()));
        assert!(o.has_relation(&routiere, &RelationKind::IsA, &voie));
        assert!(o.has_relation(&t, &RelationKind::PartOf, &voie));
        assert_eq!(o.properties_of(&t).collect::<Vec<_>>(), vec!["destinée aux automobiles"]);
        assert_eq!(o.concept(&voie).unwrap().origin, Origin::Language);
    }

    #[test]
    fn integrate_synonymy() {
        let (mut o, g) = objets_divers();
        let p = parse("grotte naturelle ou excavation", &o, &g).unwrap();
        let before = o.len();
        integrate_definition(&p, &mut o, IntegrateOptions::default());
        let terms: Vec<&String> = o.concept(&g).unwrap().associated_terms.iter().collect();
        assert_eq!(terms, ["excavation", "grotte naturelle"]);
        assert_eq!(o.len(), before);

        let p = parse("excavation", &o, &g).unwrap();
        assert_eq!(p.term.as_deref(), Some("excavation"));
        let r = integrate_definition(&p, &mut o, IntegrateOptions::default());
        assert_eq!(r.case, Some(IntegrationCase::Synonymy));
    }

    #[test]
    fn existing_term_with_properties() {
        let (mut o, g) = objets_divers();
        let cav = o.add_concept(&ConceptId::top(), "Cavité", Origin::Structure, None).unwrap();
        let p = parse("cavité humide", &o, &g).unwrap();
        let before = o.len();
        let r = integrate_definition(&p, &mut o, IntegrateOptions::default());
        assert_eq!(r.case, Some(IntegrationCase::Hyponymy));
        assert_eq!(o.len(), before);
        assert!(r.created.is_empty());
        assert!(o.has_relation(&g, &RelationKind::IsA, &cav));
        assert_eq!(o.properties_of(&g).collect::<Vec<_>>(), vec!["humide"]);

        let (mut o, g) = objets_divers();
        let cav = o.add_concept(&ConceptId::top(), "Cavité", Origin::Structure, None).unwrap();
        let rels = o.relation_count();
        integrate_definition(&p, &mut o, IntegrateOptions { link_existing_term: false });
        assert_eq!(o.relation_count(), rels);
        assert!(!o.has_relation(&g, &RelationKind::IsA, &cav));
    }

    #[test]
    fn replay_is_idempotent() {
        let (mut o, t) = road_section();
        let p = parse("Portion de voie de communication destinée aux automobiles", &o, &t).unwrap();
        integrate_definition(&p, &mut o, IntegrateOptions::default());
        let once = crate::ontology::serialize(&o);
        let r = integrate_definition(&p, &mut o, IntegrateOptions::default());
        assert_eq!(crate::ontology::serialize(&o), once);
        assert!(r.created.is_empty() && r.relations.is_empty() && r.properties.is_empty());
    }

    #[test]
    fn hyponymy_case_creates_isa_path_not_synonym() {
        let (mut o, g) = objets_divers();
        let p = parse("cavité souterraine", &o, &g).unwrap();
        integrate_definition(&p, &mut o, IntegrateOptions::default());
        let t = ConceptId::new("Cavité");
        assert!(o.is_a_path(&g, &t));
        assert!(!o.concept(&g).unwrap().associated_terms.contains("cavité"));
    }

    #[test]
    fn lexical_inclusion() {
        assert_eq!(lexical_words("Voies de communication routière"), ["voie", "de", "communication", "routière"]);
        assert!(contains_run(
            &lexical_words("Voies de communication routière"),
            &lexical_words("voie de communication")
        ));
        assert!(!contains_run(&lexical_words("Voies navigables"), &lexical_words("voie de communication")));
    }
}
