//! XML specification documents and the tag-configuration rules that turn
//! them into ontology concepts and relations.
//!
//! A rule names a scope tag O and two tags A and B under it; when both carry
//! text, the concepts they label are related according to the rule's action.

use crate::ontology::{ConceptId, Ontology, Origin, RelationKind, RelationOutcome};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum IngestError {
    #[error("XML syntax error at {line}:{column}: {message}")]
    XmlSyntax {
        line: u32,
        column: u32,
        message: String,
    },
    #[error("rule file line {line}: {message}")]
    MalformedRule { line: usize, message: String },
    #[error("more than one definition rule for scope `{0}`")]
    DuplicateDefinitionRule(String),
}

/// Element tree with whitespace-collapsed text; attributes are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureNode {
    pub tag: String,
    pub text: String,
    pub children: Vec<StructureNode>,
    /// Byte offset of the element's start tag.
    pub offset: usize,
}

impl StructureNode {
    pub fn child(&self, tag: &str) -> Option<&StructureNode> {
        self.children.iter().find(|c| c.tag == tag)
    }
}

fn collapse_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn convert(node: roxmltree::Node) -> StructureNode {
    let mut text = String::new();
    let mut children = Vec::new();
    for c in node.children() {
        if c.is_element() {
            children.push(convert(c));
        } else if let Some(t) = c.text().filter(|_| c.is_text()) {
            text.push(' ');
            text.push_str(t);
        }
    }
    StructureNode {
        tag: node.tag_name().name().to_string(),
        text: collapse_ws(&text),
        children,
        offset: node.range().start,
    }
}

pub fn parse_spec(xml: &[u8]) -> Result<StructureNode, IngestError> {
    let text = std::str::from_utf8(xml).map_err(|e| IngestError::XmlSyntax {
        line: 1,
        column: 1,
        message: format!("invalid UTF-8 at byte {}", e.valid_up_to()),
    })?;
    let doc = roxmltree::Document::parse(text).map_err(|e| {
        let pos = e.pos();
        IngestError::XmlSyntax {
            line: pos.row,
            column: pos.col,
            message: e.to_string(),
        }
    })?;
    Ok(convert(doc.root_element()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleAction {
    /// B is-a A.
    Hyponymy,
    /// B's text becomes an associated term of A's concept.
    AssociatedTerm,
    /// B's text is the definition of A's concept.
    DefinitionField,
    NamedRelation(String),
}

impl fmt::Display for RuleAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleAction::Hyponymy => f.write_str("hyponymy"),
            RuleAction::AssociatedTerm => f.write_str("associated_term"),
            RuleAction::DefinitionField => f.write_str("definition"),
            RuleAction::NamedRelation(l) => write!(f, "named:{l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionRule {
    pub scope: String,
    /// Alternatives for A, tried in order; the first present tag wins.
    pub sources: Vec<String>,
    pub target: String,
    pub action: RuleAction,
}

/// `scope<TAB>source<TAB>target<TAB>action`; `source` may list alternatives
/// separated by `|`.
pub fn parse_rules(text: &str) -> Result<Vec<ExtractionRule>, IngestError> {
    let mut rules = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let bad = |message: String| IngestError::MalformedRule { line: line_no, message };
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let [scope, source, target, action] = fields.as_slice() else {
            return Err(bad(format!("expected 4 fields, got {}", fields.len())));
        };
        let sources: Vec<String> = source.split('|').map(|s| s.trim().to_string()).collect();
        if scope.is_empty() || target.is_empty() || sources.iter().any(String::is_empty) {
            return Err(bad("empty tag name".into()));
        }
        let action = match *action {
            "hyponymy" => RuleAction::Hyponymy,
            "associated_term" => RuleAction::AssociatedTerm,
            "definition" => RuleAction::DefinitionField,
            a => match a.strip_prefix("named:") {
                Some(label) if !label.is_empty() => RuleAction::NamedRelation(label.to_string()),
                _ => return Err(bad(format!("unknown action `{a}`"))),
            },
        };
        rules.push(ExtractionRule {
            scope: scope.to_string(),
            sources,
            target: target.to_string(),
            action,
        });
    }
    validate_rules(&rules)?;
    Ok(rules)
}

pub fn validate_rules(rules: &[ExtractionRule]) -> Result<(), IngestError> {
    let mut seen = BTreeSet::new();
    for r in rules.iter().filter(|r| r.action == RuleAction::DefinitionField) {
        if !seen.insert(&r.scope) {
            return Err(IngestError::DuplicateDefinitionRule(r.scope.clone()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    Concept,
    Relation,
    AssociatedTerm,
    Definition,
}

impl EntryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntryKind::Concept => "concept",
            EntryKind::Relation => "relation",
            EntryKind::AssociatedTerm => "term",
            EntryKind::Definition => "definition",
        }
    }
}

/// Something created, with the element it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportEntry {
    pub kind: EntryKind,
    pub description: String,
    pub tag_path: String,
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestWarning {
    pub tag_path: String,
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueuedDefinition {
    pub concept: ConceptId,
    pub text: String,
    pub offset: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub entries: Vec<ReportEntry>,
    pub warnings: Vec<IngestWarning>,
    pub definitions: Vec<QueuedDefinition>,
}

impl IngestReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && self.warnings.is_empty() && self.definitions.is_empty()
    }

    /// `kind<TAB>description<TAB>tag_path<TAB>offset`, warnings last.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!("{}\t{}\t{}\t{}\n", e.kind.as_str(), e.description, e.tag_path, e.offset));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning\t{}\t{}\t{}\n", w.message, w.tag_path, w.offset));
        }
        out
    }

    pub fn merge(&mut self, other: IngestReport) {
        self.entries.extend(other.entries);
        self.warnings.extend(other.warnings);
        self.definitions.extend(other.definitions);
    }
}

/// Descendants tagged `tag`, not looking inside nested `scope` elements.
fn find_tagged<'a>(node: &'a StructureNode, tag: &str, scope: &str, path: &str, out: &mut Vec<(&'a StructureNode, String)>) {
    for c in &node.children {
        let p = format!("{path}/{}", c.tag);
        if c.tag == tag {
            out.push((c, p));
        } else if c.tag != scope {
            find_tagged(c, tag, scope, &p, out);
        }
    }
}

struct Walker<'o> {
    ontology: &'o mut Ontology,
    rules: &'o [ExtractionRule],
    report: IngestReport,
    /// concept named by each tag element, keyed by byte offset
    bindings: BTreeMap<usize, ConceptId>,
}

impl Walker<'_> {
    fn warn(&mut self, path: &str, offset: usize, message: impl Into<String>) {
        self.report.warnings.push(IngestWarning {
            tag_path: path.to_string(),
            offset,
            message: message.into(),
        });
    }

    fn record(&mut self, kind: EntryKind, description: String, path: &str, offset: usize) {
        self.report.entries.push(ReportEntry {
            kind,
            description,
            tag_path: path.to_string(),
            offset,
        });
    }

    /// Concept labelled by a tag element, created under `parent` if unbound.
    fn concept_for(&mut self, node: &StructureNode, path: &str, parent: &ConceptId) -> Option<ConceptId> {
        if let Some(id) = self.bindings.get(&node.offset) {
            return Some(id.clone());
        }
        let existed_before = self.ontology.len();
        match self.ontology.add_concept(parent, &node.text, Origin::Structure, None) {
            Ok(id) => {
                if self.ontology.len() > existed_before {
                    self.record(EntryKind::Concept, id.to_string(), path, node.offset);
                    self.record(
                        EntryKind::Relation,
                        format!("{id}\tisa\t{parent}"),
                        path,
                        node.offset,
                    );
                }
                self.bindings.insert(node.offset, id.clone());
                Some(id)
            }
            Err(e) => {
                self.warn(path, node.offset, format!("`{}` skipped: {e}", node.text));
                None
            }
        }
    }

    fn relate(&mut self, s: &ConceptId, t: &ConceptId, kind: RelationKind, path: &str, offset: usize) {
        match self.ontology.add_relation(s, t, kind.clone(), Origin::Structure) {
            Ok(RelationOutcome::Added) => {
                self.record(EntryKind::Relation, format!("{s}\t{kind}\t{t}"), path, offset)
            }
            Ok(RelationOutcome::Duplicate) => {}
            Ok(RelationOutcome::PartOfCycleSkipped) => self.warn(path, offset, "part-of cycle skipped"),
            Err(e) => self.warn(path, offset, e.to_string()),
        }
    }

    fn walk(&mut self, node: &StructureNode, path: &str, enclosing: &ConceptId) {
        let mut own: Option<ConceptId> = None;
        let rules = self.rules;
        for rule in rules.iter().filter(|r| r.scope == node.tag) {
            if let Some(id) = self.apply(rule, node, path, enclosing) {
                own.get_or_insert(id);
            }
        }
        let inner = own.unwrap_or_else(|| enclosing.clone());
        for c in &node.children {
            self.walk(c, &format!("{path}/{}", c.tag), &inner);
        }
    }

    /// Returns the source concept when the rule is hyponymy and fired.
    fn apply(&mut self, rule: &ExtractionRule, node: &StructureNode, path: &str, enclosing: &ConceptId) -> Option<ConceptId> {
        let mut source = None;
        for tag in &rule.sources {
            let mut found = Vec::new();
            find_tagged(node, tag, &rule.scope, path, &mut found);
            if let Some(first) = found.into_iter().find(|(n, _)| !n.text.is_empty()) {
                source = Some(first);
                break;
            }
        }
        let Some((src_node, src_path)) = source else {
            self.warn(path, node.offset, format!("rule {} / {}: source tag missing", rule.scope, rule.sources.join("|")));
            return None;
        };
        let mut targets = Vec::new();
        find_tagged(node, &rule.target, &rule.scope, path, &mut targets);
        targets.retain(|(n, _)| !n.text.is_empty());
        if targets.is_empty() {
            self.warn(path, node.offset, format!("rule {} / {}: target tag missing", rule.scope, rule.target));
        }
        let src = self.concept_for(src_node, &src_path, enclosing)?;
        for (t, t_path) in targets {
            match &rule.action {
                RuleAction::Hyponymy => {
                    if let Some(child) = self.concept_for(t, &t_path, &src) {
                        self.relate(&child, &src, RelationKind::IsA, &t_path, t.offset);
                    }
                }
                RuleAction::AssociatedTerm => match self.ontology.add_associated_term(&src, &t.text) {
                    Ok(true) => self.record(EntryKind::AssociatedTerm, format!("{src}\t{}", t.text), &t_path, t.offset),
                    Ok(false) => {}
                    Err(e) => self.warn(&t_path, t.offset, e.to_string()),
                },
                RuleAction::DefinitionField => {
                    if let Err(e) = self.ontology.set_definition(&src, &t.text) {
                        self.warn(&t_path, t.offset, e.to_string());
                        continue;
                    }
                    self.record(EntryKind::Definition, format!("{src}\t{}", t.text), &t_path, t.offset);
                    self.report.definitions.push(QueuedDefinition {
                        concept: src.clone(),
                        text: t.text.clone(),
                        offset: t.offset,
                    });
                }
                RuleAction::NamedRelation(label) => {
                    if let Some(other) = self.concept_for(t, &t_path, enclosing) {
                        self.relate(&src, &other, RelationKind::Named(label.clone()), &t_path, t.offset);
                    }
                }
            }
        }
        (rule.action == RuleAction::Hyponymy).then_some(src)
    }
}

/// Runs every rule over every matching scope element, outermost first.
/// Elements whose source or target tag is missing are reported as warnings.
pub fn apply_rules(tree: &StructureNode, rules: &[ExtractionRule], ontology: &mut Ontology) -> IngestReport {
    let mut w = Walker {
        ontology,
        rules,
        report: IngestReport::default(),
        bindings: BTreeMap::new(),
    };
    w.walk(tree, &tree.tag, &ConceptId::top());
    w.report
}

/// Convenience: parse, then apply.
pub fn ingest(xml: &[u8], rules: &[ExtractionRule], ontology: &mut Ontology) -> Result<IngestReport, IngestError> {
    let tree = parse_spec(xml)?;
    Ok(apply_rules(&tree, rules, ontology))
}
