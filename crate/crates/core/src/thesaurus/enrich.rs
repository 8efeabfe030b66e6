use super::{current_term_list, normalize_term, Thesaurus};
use crate::ontology::{
    leaf_clusters_with, ClusterOptions, ConceptId, LeafCluster, Ontology, Origin, RelationKind, TermIndex,
};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnrichOptions {
    /// Smallest equivalence count that allows an attachment.
    pub min_equivalences: usize,
    /// Compute leaf clusters once instead of after every attachment.
    pub static_clusters: bool,
    pub clusters: ClusterOptions,
}

impl Default for EnrichOptions {
    fn default() -> Self {
        EnrichOptions {
            min_equivalences: 1,
            static_clusters: false,
            clusters: ClusterOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Attached,
    NoVedette,
    NoEquivalence,
    AlreadyConcept,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Attached => "attached",
            Outcome::NoVedette => "no-vedette",
            Outcome::NoEquivalence => "no-equivalence",
            Outcome::AlreadyConcept => "already-concept",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnrichmentDecision {
    pub qualifier: String,
    pub resolved_vedette: Option<String>,
    pub best_cluster: Option<ConceptId>,
    pub equivalence_count: usize,
    pub outcome: Outcome,
    pub new_concept: Option<ConceptId>,
}

impl EnrichmentDecision {
    fn rejected(qualifier: &str, outcome: Outcome) -> Self {
        EnrichmentDecision {
            qualifier: qualifier.to_string(),
            resolved_vedette: None,
            best_cluster: None,
            equivalence_count: 0,
            outcome,
            new_concept: None,
        }
    }

    /// `qualifier<TAB>outcome<TAB>vedette<TAB>cluster<TAB>count`
    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.qualifier,
            self.outcome.as_str(),
            self.resolved_vedette.as_deref().unwrap_or(""),
            self.best_cluster.as_ref().map_or("", |c| c.as_str()),
            self.equivalence_count
        )
    }
}

/// Qualifiers merged by normalized form (counts summed, lexicographically
/// smallest surface kept), ordered by descending count then normalized form.
pub(crate) fn order_qualifiers(qualifiers: &[(String, usize)]) -> Vec<(String, usize)> {
    let mut merged: BTreeMap<String, (String, usize)> = BTreeMap::new();
    for (term, count) in qualifiers {
        let key = normalize_term(term);
        if key.is_empty() {
            continue;
        }
        let surface = term.trim().to_string();
        merged
            .entry(key)
            .and_modify(|(s, c)| {
                *c += count;
                if surface < *s {
                    *s = surface.clone();
                }
            })
            .or_insert((surface, *count));
    }
    let mut ordered: Vec<(String, String, usize)> =
        merged.into_iter().map(|(k, (s, c))| (k, s, c)).collect();
    ordered.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(&b.0)));
    ordered.into_iter().map(|(_, s, c)| (s, c)).collect()
}

struct Candidate<'a> {
    vedette_index: usize,
    cluster: &'a LeafCluster,
    count: usize,
    depth: usize,
}

/// Higher count, then deeper representative, then smaller representative id,
/// then earlier vedette.
fn better(a: &Candidate<'_>, b: &Candidate<'_>) -> bool {
    let ord = b
        .count
        .cmp(&a.count)
        .then(b.depth.cmp(&a.depth))
        .then_with(|| a.cluster.representative.cmp(&b.cluster.representative))
        .then(a.vedette_index.cmp(&b.vedette_index));
    ord == Ordering::Less
}

/// Attaches qualifier terms as new leaf concepts under the leaf cluster
/// sharing the most terms with one of the qualifier's vedette term lists.
pub fn enrich(
    ontology: &mut Ontology,
    qualifiers: &[(String, usize)],
    thesaurus: &Thesaurus,
    options: EnrichOptions,
) -> Vec<EnrichmentDecision> {
    let min = options.min_equivalences.max(1);
    let mut clusters = leaf_clusters_with(ontology, options.clusters);
    let mut decisions = Vec::new();

    for (qualifier, _) in order_qualifiers(qualifiers) {
        let index = TermIndex::new(ontology);
        if index.contains(&qualifier) {
            decisions.push(EnrichmentDecision::rejected(&qualifier, Outcome::AlreadyConcept));
            continue;
        }
        let vedettes = thesaurus.resolve_vedette(&qualifier);
        if vedettes.is_empty() {
            decisions.push(EnrichmentDecision::rejected(&qualifier, Outcome::NoVedette));
            continue;
        }

        let term_lists: Vec<BTreeSet<String>> = vedettes.iter().map(|v| current_term_list(v)).collect();
        let mut best: Option<Candidate<'_>> = None;
        for (vi, list) in term_lists.iter().enumerate() {
            for cluster in &clusters {
                let cand = Candidate {
                    vedette_index: vi,
                    cluster,
                    count: list.intersection(&cluster.member_terms).count(),
                    depth: ontology.depth(&cluster.representative).unwrap_or(0),
                };
                if best.as_ref().is_none_or(|b| better(&cand, b)) {
                    best = Some(cand);
                }
            }
        }

        let Some(best) = best.filter(|b| b.count >= min) else {
            let mut d = EnrichmentDecision::rejected(&qualifier, Outcome::NoEquivalence);
            d.resolved_vedette = Some(vedettes[0].label.clone());
            decisions.push(d);
            continue;
        };
        let vedette = vedettes[best.vedette_index];
        let representative = best.cluster.representative.clone();
        let count = best.count;

        let child = match ontology.add_concept(&representative, &qualifier, Origin::Enrichment, None) {
            Ok(id) => id,
            Err(_) => {
                let mut d = EnrichmentDecision::rejected(&qualifier, Outcome::NoEquivalence);
                d.resolved_vedette = Some(vedette.label.clone());
                decisions.push(d);
                continue;
            }
        };
        debug_assert!(ontology.has_relation(&child, &RelationKind::IsA, &representative));
        let own = normalize_term(&qualifier);
        // vedette terms not yet carried by any concept become the new
        // concept's associated terms
        for term in &term_lists[best.vedette_index] {
            if *term != own && !index.contains(term) {
                let _ = ontology.add_associated_term(&child, term);
            }
        }
        let _ = ontology.set_reference(&child, &format!("vedette:{}", vedette.label));

        decisions.push(EnrichmentDecision {
            qualifier: qualifier.clone(),
            resolved_vedette: Some(vedette.label.clone()),
            best_cluster: Some(representative),
            equivalence_count: count,
            outcome: Outcome::Attached,
            new_concept: Some(child),
        });
        if !options.static_clusters {
            clusters = leaf_clusters_with(ontology, options.clusters);
        }
    }
    decisions
}
