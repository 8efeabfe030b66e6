//! In-memory ontology: concepts addressed by qualified paths, typed relations,
//! documentation properties, and leaf clusters used during enrichment.

mod cluster;
mod index;
mod io;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

pub use cluster::{leaf_clusters, leaf_clusters_with, ClusterOptions, LeafCluster};
pub use index::TermIndex;
pub use io::{deserialize, export_triples, serialize};

/// Separator between ancestor names in a qualified path.
pub const PATH_SEPARATOR: char = '/';

/// Reserved identifier of the root concept.
pub const TOP: &str = "Top";

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OntologyError {
    #[error("unknown parent concept `{0}`")]
    UnknownParent(ConceptId),
    #[error("unknown concept `{0}`")]
    UnknownConcept(ConceptId),
    #[error("concept name is empty")]
    EmptyName,
    #[error("concept name `{0}` is reserved or contains `/`")]
    InvalidName(String),
    #[error("is-a edge {0} -> {1} would create a cycle")]
    IsACycle(ConceptId, ConceptId),
    #[error("relation from `{0}` to itself")]
    SelfRelation(ConceptId),
    #[error("malformed ontology file at line {line}: {message}")]
    MalformedInput { line: usize, message: String },
}

/// Qualified path of a concept, e.g. `Objets Divers/Oronyme/Grotte`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConceptId(String);

impl ConceptId {
    pub fn top() -> Self {
        ConceptId(TOP.to_string())
    }

    /// Wraps an existing path. No validation beyond non-emptiness is done here;
    /// ontology operations check that the path resolves.
    pub fn new(path: impl Into<String>) -> Self {
        ConceptId(path.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_top(&self) -> bool {
        self.0 == TOP
    }

    /// Last path segment.
    pub fn display_name(&self) -> &str {
        self.0.rsplit(PATH_SEPARATOR).next().unwrap_or(&self.0)
    }

    /// Path of the parent the id was qualified under, `None` for root children.
    pub fn qualifying_parent(&self) -> Option<ConceptId> {
        self.0
            .rfind(PATH_SEPARATOR)
            .map(|i| ConceptId(self.0[..i].to_string()))
    }

    fn child(&self, name: &str) -> ConceptId {
        if self.is_top() {
            ConceptId(name.to_string())
        } else {
            ConceptId(format!("{}{}{}", self.0, PATH_SEPARATOR, name))
        }
    }
}

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Where a concept or relation came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    /// Document structure (tag hierarchy).
    Structure,
    /// Definition text or lexico-syntactic patterns.
    Language,
    /// Thesaurus-driven enrichment.
    Enrichment,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Structure => "structure",
            Origin::Language => "language",
            Origin::Enrichment => "enrichment",
        }
    }

    pub fn parse(s: &str) -> Option<Origin> {
        match s {
            "structure" => Some(Origin::Structure),
            "language" => Some(Origin::Language),
            "enrichment" => Some(Origin::Enrichment),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concept {
    pub id: ConceptId,
    pub display_name: String,
    pub definition: Option<String>,
    pub associated_terms: BTreeSet<String>,
    pub origin: Origin,
    pub reference: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationKind {
    IsA,
    PartOf,
    Named(String),
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationKind::IsA => f.write_str("isa"),
            RelationKind::PartOf => f.write_str("partof"),
            RelationKind::Named(label) => write!(f, "named:{label}"),
        }
    }
}

impl RelationKind {
    pub fn parse(s: &str) -> Option<RelationKind> {
        match s {
            "isa" => Some(RelationKind::IsA),
            "partof" => Some(RelationKind::PartOf),
            _ => s
                .strip_prefix("named:")
                .filter(|l| !l.is_empty())
                .map(|l| RelationKind::Named(l.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub source: ConceptId,
    pub target: ConceptId,
    pub kind: RelationKind,
    pub origin: Origin,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropertyAttachment {
    pub concept: ConceptId,
    pub label: String,
}

/// Result of a relation insertion that did not fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationOutcome {
    Added,
    Duplicate,
    /// A part-of edge closing a part-of cycle is dropped with a warning.
    PartOfCycleSkipped,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct RelationKey {
    source: ConceptId,
    kind: RelationKind,
    target: ConceptId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ontology {
    concepts: BTreeMap<ConceptId, Concept>,
    relations: BTreeMap<RelationKey, Origin>,
    properties: BTreeSet<PropertyAttachment>,
    isa_parents: HashMap<ConceptId, BTreeSet<ConceptId>>,
    partof_parents: HashMap<ConceptId, BTreeSet<ConceptId>>,
    // children through is-a or part-of
    children: HashMap<ConceptId, BTreeSet<ConceptId>>,
}

impl Default for Ontology {
    fn default() -> Self {
        Self::new()
    }
}

impl Ontology {
    /// An ontology holding only Top.
    pub fn new() -> Self {
        let top = ConceptId::top();
        let mut concepts = BTreeMap::new();
        concepts.insert(
            top.clone(),
            Concept {
                id: top,
                display_name: TOP.to_string(),
                definition: None,
                associated_terms: BTreeSet::new(),
                origin: Origin::Structure,
                reference: None,
            },
        );
        Ontology {
            concepts,
            relations: BTreeMap::new(),
            properties: BTreeSet::new(),
            isa_parents: HashMap::new(),
            partof_parents: HashMap::new(),
            children: HashMap::new(),
        }
    }

    pub fn top(&self) -> ConceptId {
        ConceptId::top()
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.len() <= 1
    }

    pub fn contains(&self, id: &ConceptId) -> bool {
        self.concepts.contains_key(id)
    }

    pub fn concept(&self, id: &ConceptId) -> Option<&Concept> {
        self.concepts.get(id)
    }

    /// Concepts in id order, Top included.
    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.concepts.values()
    }

    /// Relations in (source, kind, target) order.
    pub fn relations(&self) -> impl Iterator<Item = Relation> + '_ {
        self.relations.iter().map(|(k, origin)| Relation {
            source: k.source.clone(),
            target: k.target.clone(),
            kind: k.kind.clone(),
            origin: *origin,
        })
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn has_relation(&self, source: &ConceptId, kind: &RelationKind, target: &ConceptId) -> bool {
        self.relations.contains_key(&RelationKey {
            source: source.clone(),
            kind: kind.clone(),
            target: target.clone(),
        })
    }

    pub fn properties(&self) -> impl Iterator<Item = &PropertyAttachment> {
        self.properties.iter()
    }

    pub fn properties_of<'a>(&'a self, id: &'a ConceptId) -> impl Iterator<Item = &'a str> + 'a {
        self.properties
            .iter()
            .filter(move |p| &p.concept == id)
            .map(|p| p.label.as_str())
    }

    pub fn isa_parents(&self, id: &ConceptId) -> impl Iterator<Item = &ConceptId> {
        self.isa_parents.get(id).into_iter().flatten()
    }

    /// Direct children through is-a or part-of.
    pub fn children(&self, id: &ConceptId) -> impl Iterator<Item = &ConceptId> {
        self.children.get(id).into_iter().flatten()
    }

    pub fn is_leaf(&self, id: &ConceptId) -> bool {
        self.children.get(id).is_none_or(|c| c.is_empty())
    }

    /// Creates (or locates) the concept `display_name` under `parent` and
    /// records the is-a edge to it.
    pub fn add_concept(
        &mut self,
        parent: &ConceptId,
        display_name: &str,
        origin: Origin,
        definition: Option<&str>,
    ) -> Result<ConceptId, OntologyError> {
        if !self.contains(parent) {
            return Err(OntologyError::UnknownParent(parent.clone()));
        }
        let name = display_name.trim();
        if name.is_empty() {
            return Err(OntologyError::EmptyName);
        }
        if name.contains(PATH_SEPARATOR) || name == TOP {
            return Err(OntologyError::InvalidName(name.to_string()));
        }
        let id = parent.child(name);
        if self.contains(&id) {
            return Ok(id);
        }
        self.concepts.insert(
            id.clone(),
            Concept {
                id: id.clone(),
                display_name: name.to_string(),
                definition: definition.filter(|d| !d.is_empty()).map(str::to_string),
                associated_terms: BTreeSet::new(),
                origin,
                reference: None,
            },
        );
        self.insert_relation_unchecked(id.clone(), RelationKind::IsA, parent.clone(), origin);
        Ok(id)
    }

    pub fn add_relation(
        &mut self,
        source: &ConceptId,
        target: &ConceptId,
        kind: RelationKind,
        origin: Origin,
    ) -> Result<RelationOutcome, OntologyError> {
        for id in [source, target] {
            if !self.contains(id) {
                return Err(OntologyError::UnknownConcept(id.clone()));
            }
        }
        if source == target {
            return Err(OntologyError::SelfRelation(source.clone()));
        }
        if self.has_relation(source, &kind, target) {
            return Ok(RelationOutcome::Duplicate);
        }
        match kind {
            RelationKind::IsA if self.reaches(&self.isa_parents, target, source) => {
                return Err(OntologyError::IsACycle(source.clone(), target.clone()));
            }
            RelationKind::PartOf if self.reaches(&self.partof_parents, target, source) => {
                return Ok(RelationOutcome::PartOfCycleSkipped);
            }
            _ => {}
        }
        self.insert_relation_unchecked(source.clone(), kind, target.clone(), origin);
        Ok(RelationOutcome::Added)
    }

    fn insert_relation_unchecked(
        &mut self,
        source: ConceptId,
        kind: RelationKind,
        target: ConceptId,
        origin: Origin,
    ) {
        match kind {
            RelationKind::IsA => {
                self.isa_parents.entry(source.clone()).or_default().insert(target.clone());
                self.children.entry(target.clone()).or_default().insert(source.clone());
            }
            RelationKind::PartOf => {
                self.partof_parents.entry(source.clone()).or_default().insert(target.clone());
                self.children.entry(target.clone()).or_default().insert(source.clone());
            }
            RelationKind::Named(_) => {}
        }
        self.relations.insert(RelationKey { source, kind, target }, origin);
    }

    /// True when `to` is reachable from `from` following `edges` upward.
    fn reaches(
        &self,
        edges: &HashMap<ConceptId, BTreeSet<ConceptId>>,
        from: &ConceptId,
        to: &ConceptId,
    ) -> bool {
        let mut stack = vec![from];
        let mut seen = BTreeSet::new();
        while let Some(id) = stack.pop() {
            if id == to {
                return true;
            }
            if !seen.insert(id) {
                continue;
            }
            stack.extend(edges.get(id).into_iter().flatten());
        }
        false
    }

    /// Adds `term` to the concept's associated terms. Returns false when it was
    /// already present or equals the display name.
    pub fn add_associated_term(&mut self, id: &ConceptId, term: &str) -> Result<bool, OntologyError> {
        let concept = self
            .concepts
            .get_mut(id)
            .ok_or_else(|| OntologyError::UnknownConcept(id.clone()))?;
        let term = term.trim();
        if term.is_empty() || term == concept.display_name {
            return Ok(false);
        }
        Ok(concept.associated_terms.insert(term.to_string()))
    }

    pub fn set_definition(&mut self, id: &ConceptId, text: &str) -> Result<(), OntologyError> {
        let concept = self
            .concepts
            .get_mut(id)
            .ok_or_else(|| OntologyError::UnknownConcept(id.clone()))?;
        concept.definition = Some(text.to_string()).filter(|d| !d.is_empty());
        Ok(())
    }

    pub fn set_reference(&mut self, id: &ConceptId, reference: &str) -> Result<(), OntologyError> {
        let concept = self
            .concepts
            .get_mut(id)
            .ok_or_else(|| OntologyError::UnknownConcept(id.clone()))?;
        concept.reference = Some(reference.to_string());
        Ok(())
    }

    pub fn add_property(&mut self, id: &ConceptId, label: &str) -> Result<bool, OntologyError> {
        if !self.contains(id) {
            return Err(OntologyError::UnknownConcept(id.clone()));
        }
        if label.is_empty() {
            return Ok(false);
        }
        Ok(self.properties.insert(PropertyAttachment {
            concept: id.clone(),
            label: label.to_string(),
        }))
    }

    /// Length of the shortest is-a path to Top, `None` when unreachable.
    pub fn depth(&self, id: &ConceptId) -> Option<usize> {
        let top = ConceptId::top();
        let mut queue = VecDeque::from([(id, 0usize)]);
        let mut seen = BTreeSet::new();
        while let Some((cur, d)) = queue.pop_front() {
            if *cur == top {
                return Some(d);
            }
            if !seen.insert(cur) {
                continue;
            }
            for p in self.isa_parents(cur) {
                queue.push_back((p, d + 1));
            }
        }
        None
    }

    /// True when an is-a path leads from `from` to `to`.
    pub fn is_a_path(&self, from: &ConceptId, to: &ConceptId) -> bool {
        from != to && self.reaches(&self.isa_parents, from, to)
    }

    /// Concepts whose display name equals `name` exactly.
    pub fn find_by_name<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a ConceptId> + 'a {
        self.concepts
            .values()
            .filter(move |c| c.display_name == name)
            .map(|c| &c.id)
    }
}
