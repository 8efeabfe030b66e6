//! `key = value` pipeline configuration. Relative paths in a config file are
//! resolved against the file's directory; overrides given on the command
//! line are resolved against the working directory.

use anyhow::{bail, Context, Result};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    /// Specification documents; directories expand to their `*.xml` files.
    pub spec: Vec<PathBuf>,
    pub rules: Option<PathBuf>,
    pub patterns: Option<PathBuf>,
    pub partie_de: Option<PathBuf>,
    pub relation_markers: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub introducers: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub thesaurus: Option<PathBuf>,
    pub geo_markers: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
    /// Ontology written by `build`, read by the other commands.
    pub ontology: Option<PathBuf>,
    /// Ontology written by `enrich`; `stats` adds it as a third configuration.
    pub enriched: Option<PathBuf>,
    pub annotations: Option<PathBuf>,
    pub associations: Option<PathBuf>,
    pub decisions: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub stats: Option<PathBuf>,
    pub triples: Option<PathBuf>,
    pub static_clusters: bool,
    pub include_unvalidated: bool,
    pub min_equivalences: usize,
    pub link_existing_term: bool,
    pub include_member_terms: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            spec: vec![],
            rules: None,
            patterns: None,
            partie_de: None,
            relation_markers: None,
            lexicon: None,
            stopwords: None,
            introducers: None,
            gazetteer: None,
            thesaurus: None,
            geo_markers: None,
            corpus: None,
            ontology: None,
            enriched: None,
            annotations: None,
            associations: None,
            decisions: None,
            report: None,
            stats: None,
            triples: None,
            static_clusters: false,
            include_unvalidated: false,
            min_equivalences: 1,
            link_existing_term: true,
            include_member_terms: true,
        }
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => bail!("`{key}` expects a boolean, got `{value}`"),
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("")).to_path_buf();
        let mut cfg = PipelineConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("{}:{}: expected `key = value`", path.display(), i + 1))?;
            cfg.set(key.trim(), value.trim(), &base)
                .with_context(|| format!("{}:{}", path.display(), i + 1))?;
        }
        Ok(cfg)
    }

    /// Sets one key; relative paths are joined onto `base`.
    pub fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<()> {
        let path = || -> PathBuf {
            let p = PathBuf::from(value);
            if p.is_absolute() {
                p
            } else {
                base.join(p)
            }
        };
        let slot = match key {
            "spec" => {
                self.spec = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| base.join(s))
                    .collect();
                return Ok(());
            }
            "static_clusters" => return parse_bool(key, value).map(|b| self.static_clusters = b),
            "include_unvalidated" => return parse_bool(key, value).map(|b| self.include_unvalidated = b),
            "link_existing_term" => return parse_bool(key, value).map(|b| self.link_existing_term = b),
            "include_member_terms" => return parse_bool(key, value).map(|b| self.include_member_terms = b),
            "min_equivalences" => {
                self.min_equivalences = value
                    .parse()
                    .with_context(|| format!("`min_equivalences` expects a count, got `{value}`"))?;
                return Ok(());
            }
            "rules" => &mut self.rules,
            "patterns" => &mut self.patterns,
            "partie_de" => &mut self.partie_de,
            "relation_markers" => &mut self.relation_markers,
            "lexicon" => &mut self.lexicon,
            "stopwords" => &mut self.stopwords,
            "introducers" => &mut self.introducers,
            "gazetteer" => &mut self.gazetteer,
            "thesaurus" => &mut self.thesaurus,
            "geo_markers" => &mut self.geo_markers,
            "corpus" => &mut self.corpus,
            "ontology" => &mut self.ontology,
            "enriched" => &mut self.enriched,
            "annotations" => &mut self.annotations,
            "associations" => &mut self.associations,
            "decisions" => &mut self.decisions,
            "report" => &mut self.report,
            "stats" => &mut self.stats,
            "triples" => &mut self.triples,
            _ => bail!("unknown configuration key `{key}`"),
        };
        *slot = Some(path());
        Ok(())
    }

    /// Specification files in order: listed files as given, directory
    /// contents sorted by name.
    pub fn spec_files(&self) -> Result<Vec<PathBuf>> {
        let mut out = Vec::new();
        for p in &self.spec {
            if p.is_dir() {
                let mut files: Vec<PathBuf> = fs::read_dir(p)
                    .with_context(|| format!("listing {}", p.display()))?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|f| f.extension().is_some_and(|x| x == "xml"))
                    .collect();
                files.sort();
                out.extend(files);
            } else {
                out.push(p.clone());
            }
        }
        Ok(out)
    }
}

/// An input path that must be configured and exist.
pub fn require<'a>(path: &'a Option<PathBuf>, key: &str) -> Result<&'a Path> {
    let p = path.as_deref().with_context(|| format!("missing `{key}` in configuration"))?;
    if !p.exists() {
        bail!("`{key}` path {} does not exist", p.display());
    }
    Ok(p)
}

/// An output path that must be configured.
pub fn output<'a>(path: &'a Option<PathBuf>, key: &str) -> Result<&'a Path> {
    path.as_deref().with_context(|| format!("missing output `{key}` in configuration"))
}

/// Reads an optional resource, falling back to the shipped default.
pub fn read_or(path: &Option<PathBuf>, key: &str, default: &str) -> Result<String> {
    match path {
        Some(_) => {
            let p = require(path, key)?;
            fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
        }
        None => Ok(default.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_relative_paths_and_flags() {
        let dir = tempfile::tempdir().unwrap();
        let cfg_path = dir.path().join("pipeline.conf");
        fs::write(
            &cfg_path,
            "# comment\nrules = rules.tsv\nspec = a.xml, b.xml\nstatic_clusters = yes\nmin_equivalences = 2\nontology=/abs/o.txt\n",
        )
        .unwrap();
        let cfg = PipelineConfig::load(&cfg_path).unwrap();
        assert_eq!(cfg.rules, Some(dir.path().join("rules.tsv")));
        assert_eq!(cfg.spec, vec![dir.path().join("a.xml"), dir.path().join("b.xml")]);
        assert!(cfg.static_clusters);
        assert_eq!(cfg.min_equivalences, 2);
        assert_eq!(cfg.ontology, Some(PathBuf::from("/abs/o.txt")));
        assert!(!cfg.include_unvalidated);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.conf");
        fs::write(&p, "colour = blue\n").unwrap();
        assert!(PipelineConfig::load(&p).is_err());
        fs::write(&p, "static_clusters = maybe\n").unwrap();
        assert!(PipelineConfig::load(&p).is_err());
        fs::write(&p, "no equals sign\n").unwrap();
        let err = format!("{:#}", PipelineConfig::load(&p).unwrap_err());
        assert!(err.contains(":1"), "{err}");
    }

    #[test]
    fn require_checks_existence() {
        assert!(require(&None, "rules").is_err());
        assert!(require(&Some(PathBuf::from("/definitely/not/here")), "rules").is_err());
    }
}
