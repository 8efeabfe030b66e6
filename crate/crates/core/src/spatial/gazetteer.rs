use super::SpatialError;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
pub struct GazetteerEntry {
    pub name: String,
    pub feature_type: String,
    pub lat: f64,
    pub lon: f64,
}

/// Place names with feature types and coordinates, looked up case-insensitively.
#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    entries: Vec<GazetteerEntry>,
    by_name: BTreeMap<String, Vec<usize>>,
}

fn key(name: &str) -> String {
    name.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

impl Gazetteer {
    pub fn from_entries(entries: Vec<GazetteerEntry>) -> Self {
        let mut by_name: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, e) in entries.iter().enumerate() {
            by_name.entry(key(&e.name)).or_default().push(i);
        }
        Gazetteer { entries, by_name }
    }

    /// `name<TAB>feature_type<TAB>lat<TAB>lon` lines; `#` comments skipped.
    pub fn parse(text: &str) -> Result<Self, SpatialError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let bad = |message: String| SpatialError::MalformedGazetteer { line: i + 1, message };
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            let [name, feature_type, lat, lon] = fields.as_slice() else {
                return Err(bad(format!("expected 4 fields, got {}", fields.len())));
            };
            if name.is_empty() {
                return Err(bad("empty name".into()));
            }
            let coord = |s: &str, limit: f64| -> Result<f64, SpatialError> {
                let v: f64 = s.parse().map_err(|_| bad(format!("bad coordinate `{s}`")))?;
                if !(-limit..=limit).contains(&v) {
                    return Err(bad(format!("coordinate {v} out of range")));
                }
                Ok(v)
            };
            entries.push(GazetteerEntry {
                name: name.to_string(),
                feature_type: feature_type.to_string(),
                lat: coord(lat, 90.0)?,
                lon: coord(lon, 180.0)?,
            });
        }
        Ok(Self::from_entries(entries))
    }

    pub fn lookup(&self, name: &str) -> Vec<&GazetteerEntry> {
        self.by_name
            .get(&key(name))
            .into_iter()
            .flatten()
            .map(|&i| &self.entries[i])
            .collect()
    }

    pub fn entries(&self) -> &[GazetteerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
