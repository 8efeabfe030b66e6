//! Controlled vocabulary records (preferred term, employed-for terms, generic
//! terms) and thesaurus-driven ontology enrichment.

mod enrich;

use std::collections::{BTreeMap, BTreeSet};

pub use enrich::{enrich, EnrichOptions, EnrichmentDecision, Outcome};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ThesaurusError {
    #[error("malformed thesaurus record at line {line}: {message}")]
    MalformedRecord { line: usize, message: String },
}

/// Case-folds, trims and collapses whitespace, then strips one trailing
/// French plural mark (`s` or `x`) when the remaining word keeps at least
/// three letters. Diacritics are preserved.
pub fn normalize_term(text: &str) -> String {
    let mut out = text
        .split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ");
    let last_word_len = out.rsplit(' ').next().map_or(0, |w| w.chars().count());
    if (out.ends_with('s') || out.ends_with('x')) && last_word_len > 3 {
        out.pop();
    }
    out
}

/// One controlled-vocabulary record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VedetteEntry {
    pub label: String,
    pub employed_for: BTreeSet<String>,
    pub generic_terms: BTreeSet<String>,
    pub geographic_subdivision: bool,
}

impl VedetteEntry {
    pub fn new(label: impl Into<String>) -> Self {
        VedetteEntry {
            label: label.into(),
            employed_for: BTreeSet::new(),
            generic_terms: BTreeSet::new(),
            geographic_subdivision: false,
        }
    }
}

/// Normalized label plus normalized employed-for terms.
pub fn current_term_list(entry: &VedetteEntry) -> BTreeSet<String> {
    std::iter::once(&entry.label)
        .chain(&entry.employed_for)
        .map(|t| normalize_term(t))
        .filter(|t| !t.is_empty())
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Thesaurus {
    entries: Vec<VedetteEntry>,
    // normalized term -> entry indices, labels and employed-for terms alike
    reverse_index: BTreeMap<String, Vec<usize>>,
}

impl Thesaurus {
    pub fn from_entries(entries: Vec<VedetteEntry>) -> Self {
        let mut reverse_index: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, e) in entries.iter().enumerate() {
            for term in current_term_list(e) {
                let slot = reverse_index.entry(term).or_default();
                if slot.last() != Some(&i) {
                    slot.push(i);
                }
            }
        }
        Thesaurus {
            entries,
            reverse_index,
        }
    }

    /// Parses blank-line separated records:
    ///
    /// ```text
    /// V<TAB>label<TAB>geo_flag(0|1)
    /// EP<TAB>term
    /// TG<TAB>term
    /// ```
    ///
    /// Lines starting with `#` are ignored.
    pub fn parse(bytes: &[u8]) -> Result<Self, ThesaurusError> {
        let malformed = |line: usize, message: String| ThesaurusError::MalformedRecord { line, message };
        let text = std::str::from_utf8(bytes).map_err(|e| {
            let line = bytes[..e.valid_up_to()].iter().filter(|b| **b == b'\n').count() + 1;
            malformed(line, "invalid UTF-8".into())
        })?;
        let mut entries = Vec::new();
        let mut current: Option<VedetteEntry> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let raw = raw.trim_end_matches('\r');
            if raw.trim().is_empty() {
                entries.extend(current.take());
                continue;
            }
            if raw.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').collect();
            match fields.as_slice() {
                ["V", label, flag] => {
                    if current.is_some() {
                        return Err(malformed(line, "record without blank-line separator".into()));
                    }
                    let label = label.trim();
                    if label.is_empty() {
                        return Err(malformed(line, "empty vedette label".into()));
                    }
                    let geo = match flag.trim() {
                        "0" => false,
                        "1" => true,
                        other => return Err(malformed(line, format!("geo flag must be 0 or 1, got `{other}`"))),
                    };
                    let mut e = VedetteEntry::new(label);
                    e.geographic_subdivision = geo;
                    current = Some(e);
                }
                [kind @ ("EP" | "TG"), term] => {
                    let entry = current
                        .as_mut()
                        .ok_or_else(|| malformed(line, format!("{kind} line outside a record")))?;
                    let term = term.trim();
                    if term.is_empty() {
                        return Err(malformed(line, format!("empty {kind} term")));
                    }
                    if *kind == "EP" {
                        if term != entry.label {
                            entry.employed_for.insert(term.to_string());
                        }
                    } else {
                        entry.generic_terms.insert(term.to_string());
                    }
                }
                _ => return Err(malformed(line, format!("unrecognized line `{raw}`"))),
            }
        }
        entries.extend(current);
        Ok(Thesaurus::from_entries(entries))
    }

    pub fn entries(&self) -> &[VedetteEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries whose label or employed-for list contains the qualifier.
    pub fn resolve_vedette(&self, qualifier: &str) -> Vec<&VedetteEntry> {
        self.reverse_index
            .get(&normalize_term(qualifier))
            .into_iter()
            .flatten()
            .map(|&i| &self.entries[i])
            .collect()
    }

    fn entries_labelled(&self, term: &str) -> impl Iterator<Item = &VedetteEntry> {
        let key = normalize_term(term);
        self.entries
            .iter()
            .filter(move |e| normalize_term(&e.label) == key)
    }

    /// Labels of vedettes carrying a geographic sense: the geographic
    /// subdivision flag is set, or a generic term reachable within three
    /// generic links is in `markers`.
    pub fn geographic_sense_filter(&self, markers: &BTreeSet<String>) -> BTreeSet<String> {
        const MAX_DEPTH: usize = 3;
        let markers: BTreeSet<String> = markers.iter().map(|m| normalize_term(m)).collect();
        let mut flagged = BTreeSet::new();
        for entry in &self.entries {
            if entry.geographic_subdivision {
                flagged.insert(entry.label.clone());
                continue;
            }
            let mut frontier: Vec<&str> = entry.generic_terms.iter().map(String::as_str).collect();
            let mut seen = BTreeSet::new();
            'depth: for _ in 0..MAX_DEPTH {
                let mut next = Vec::new();
                for term in frontier {
                    let key = normalize_term(term);
                    if markers.contains(&key) {
                        flagged.insert(entry.label.clone());
                        break 'depth;
                    }
                    if !seen.insert(key) {
                        continue;
                    }
                    for broader in self.entries_labelled(term) {
                        next.extend(broader.generic_terms.iter().map(String::as_str));
                    }
                }
                frontier = next;
            }
        }
        flagged
    }
}
