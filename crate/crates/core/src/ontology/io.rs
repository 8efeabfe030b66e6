//! Line-oriented ontology file format.
//!
//! ```text
//! C<TAB>qualified_path<TAB>origin<TAB>definition[<TAB>reference]
//! T<TAB>qualified_path<TAB>associated_term
//! R<TAB>source_path<TAB>kind<TAB>target_path<TAB>origin
//! P<TAB>qualified_path<TAB>property_label
//! ```
//!
//! Records are emitted grouped by type (C, T, R, P) and sorted inside each
//! group. Tabs, newlines and backslashes inside fields are escaped as `\t`,
//! `\n` and `\\`.

use super::{ConceptId, Ontology, OntologyError, Origin, RelationKind, TOP};
use std::fmt::Write as _;

fn escape(field: &str) -> String {
    let mut out = String::with_capacity(field.len());
    for ch in field.chars() {
        match ch {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(field: &str, line: usize) -> Result<String, OntologyError> {
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(ch) = chars.next() {
        if ch != '\\' {
            out.push(ch);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => {
                return Err(OntologyError::MalformedInput {
                    line,
                    message: format!("bad escape sequence `\\{}`", other.map(String::from).unwrap_or_default()),
                })
            }
        }
    }
    Ok(out)
}

pub fn serialize(ontology: &Ontology) -> Vec<u8> {
    let mut out = String::new();
    for c in ontology.concepts() {
        let _ = write!(
            out,
            "C\t{}\t{}\t{}",
            escape(c.id.as_str()),
            c.origin.as_str(),
            escape(c.definition.as_deref().unwrap_or(""))
        );
        if let Some(r) = &c.reference {
            let _ = write!(out, "\t{}", escape(r));
        }
        out.push('\n');
    }
    for c in ontology.concepts() {
        for t in &c.associated_terms {
            let _ = writeln!(out, "T\t{}\t{}", escape(c.id.as_str()), escape(t));
        }
    }
    for r in ontology.relations() {
        let _ = writeln!(
            out,
            "R\t{}\t{}\t{}\t{}",
            escape(r.source.as_str()),
            escape(&r.kind.to_string()),
            escape(r.target.as_str()),
            r.origin.as_str()
        );
    }
    for p in ontology.properties() {
        let _ = writeln!(out, "P\t{}\t{}", escape(p.concept.as_str()), escape(&p.label));
    }
    out.into_bytes()
}

/// Plain `source<TAB>kind<TAB>target` lines, one per relation.
pub fn export_triples(ontology: &Ontology) -> String {
    let mut out = String::new();
    for r in ontology.relations() {
        let _ = writeln!(out, "{}\t{}\t{}", r.source, r.kind, r.target);
    }
    out
}

fn malformed(line: usize, message: impl Into<String>) -> OntologyError {
    OntologyError::MalformedInput {
        line,
        message: message.into(),
    }
}

pub fn deserialize(bytes: &[u8]) -> Result<Ontology, OntologyError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|b| **b == b'\n').count() + 1;
        malformed(line, "invalid UTF-8")
    })?;

    struct Parsed {
        line: usize,
        fields: Vec<String>,
    }
    let mut concepts = Vec::new();
    let mut terms = Vec::new();
    let mut relations = Vec::new();
    let mut props = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.is_empty() {
            continue;
        }
        let mut parts = raw.split('\t');
        let tag = parts.next().unwrap_or_default();
        let fields = parts
            .map(|f| unescape(f, line))
            .collect::<Result<Vec<_>, _>>()?;
        let (bucket, arity): (&mut Vec<Parsed>, &[usize]) = match tag {
            "C" => (&mut concepts, &[3, 4]),
            "T" => (&mut terms, &[2]),
            "R" => (&mut relations, &[4]),
            "P" => (&mut props, &[2]),
            other => return Err(malformed(line, format!("unknown record type `{other}`"))),
        };
        if !arity.contains(&fields.len()) {
            return Err(malformed(line, format!("{tag} record has {} fields", fields.len())));
        }
        bucket.push(Parsed { line, fields });
    }

    let mut ontology = Ontology::new();
    let mut saw_top = false;
    for p in &concepts {
        let path = &p.fields[0];
        let origin = Origin::parse(&p.fields[1])
            .ok_or_else(|| malformed(p.line, format!("unknown origin `{}`", p.fields[1])))?;
        if path.is_empty() {
            return Err(malformed(p.line, "empty concept path"));
        }
        let id = ConceptId::new(path.clone());
        if id.is_top() {
            saw_top = true;
        } else {
            if ontology.contains(&id) {
                return Err(malformed(p.line, format!("duplicate concept `{path}`")));
            }
            if id.display_name().trim().is_empty() || id.display_name() == TOP {
                return Err(malformed(p.line, format!("invalid concept path `{path}`")));
            }
            ontology.concepts.insert(
                id.clone(),
                super::Concept {
                    id: id.clone(),
                    display_name: id.display_name().to_string(),
                    definition: None,
                    associated_terms: Default::default(),
                    origin,
                    reference: None,
                },
            );
        }
        let concept = ontology.concepts.get_mut(&id).expect("inserted above");
        concept.origin = origin;
        concept.definition = Some(p.fields[2].clone()).filter(|d| !d.is_empty());
        concept.reference = p.fields.get(3).cloned();
    }
    if !saw_top {
        return Err(malformed(0, "missing Top concept record"));
    }
    for p in &concepts {
        let id = ConceptId::new(p.fields[0].clone());
        if let Some(parent) = id.qualifying_parent() {
            if !ontology.contains(&parent) {
                return Err(malformed(p.line, format!("qualifying parent of `{id}` does not exist")));
            }
        }
    }
    for p in &terms {
        let id = ConceptId::new(p.fields[0].clone());
        ontology
            .add_associated_term(&id, &p.fields[1])
            .map_err(|e| malformed(p.line, e.to_string()))?;
    }
    for p in &relations {
        let source = ConceptId::new(p.fields[0].clone());
        let kind = RelationKind::parse(&p.fields[1])
            .ok_or_else(|| malformed(p.line, format!("unknown relation kind `{}`", p.fields[1])))?;
        let target = ConceptId::new(p.fields[2].clone());
        let origin = Origin::parse(&p.fields[3])
            .ok_or_else(|| malformed(p.line, format!("unknown origin `{}`", p.fields[3])))?;
        ontology
            .add_relation(&source, &target, kind, origin)
            .map_err(|e| malformed(p.line, e.to_string()))?;
    }
    for p in &concepts {
        let id = ConceptId::new(p.fields[0].clone());
        if let Some(parent) = id.qualifying_parent() {
            if !ontology.has_relation(&id, &RelationKind::IsA, &parent) {
                return Err(malformed(p.line, format!("`{id}` lacks an is-a edge to `{parent}`")));
            }
        }
    }
    for p in &props {
        let id = ConceptId::new(p.fields[0].clone());
        if p.fields[1].is_empty() {
            return Err(malformed(p.line, "empty property label"));
        }
        ontology
            .add_property(&id, &p.fields[1])
            .map_err(|e| malformed(p.line, e.to_string()))?;
    }
    Ok(ontology)
}
