use super::{ConceptId, Ontology};
use crate::thesaurus::normalize_term;
use std::collections::BTreeSet;

/// A parent concept grouped with its leaf children; the unit compared against
/// thesaurus term lists during enrichment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafCluster {
    pub representative: ConceptId,
    pub members: Vec<ConceptId>,
    pub member_terms: BTreeSet<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterOptions {
    /// Count associated terms of leaf members as cluster terms.
    pub include_member_terms: bool,
}

impl Default for ClusterOptions {
    fn default() -> Self {
        ClusterOptions {
            include_member_terms: true,
        }
    }
}

pub fn leaf_clusters(ontology: &Ontology) -> Vec<LeafCluster> {
    leaf_clusters_with(ontology, ClusterOptions::default())
}

/// One cluster per non-Top concept having at least one leaf child (is-a or
/// part-of), ordered by representative id.
pub fn leaf_clusters_with(ontology: &Ontology, options: ClusterOptions) -> Vec<LeafCluster> {
    let mut clusters = Vec::new();
    for concept in ontology.concepts() {
        if concept.id.is_top() {
            continue;
        }
        let members: Vec<ConceptId> = ontology
            .children(&concept.id)
            .filter(|c| ontology.is_leaf(c))
            .cloned()
            .collect();
        if members.is_empty() {
            continue;
        }
        let mut member_terms = BTreeSet::new();
        member_terms.insert(normalize_term(&concept.display_name));
        member_terms.extend(concept.associated_terms.iter().map(|t| normalize_term(t)));
        for m in &members {
            let Some(mc) = ontology.concept(m) else { continue };
            member_terms.insert(normalize_term(&mc.display_name));
            if options.include_member_terms {
                member_terms.extend(mc.associated_terms.iter().map(|t| normalize_term(t)));
            }
        }
        member_terms.remove("");
        clusters.push(LeafCluster {
            representative: concept.id.clone(),
            members,
            member_terms,
        });
    }
    clusters
}
