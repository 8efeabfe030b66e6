#![allow(dead_code)]

use ontoloom_cli::commands::load_ontology;
use ontoloom_cli::PipelineConfig;
use ontoloom::ontology::Ontology;
use std::path::{Path, PathBuf};
use tempfile::TempDir;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

/// A fixture config with every output redirected into a fresh temp dir.
pub struct Workspace {
    pub dir: TempDir,
    pub cfg: PipelineConfig,
}

const OUTPUTS: [(&str, &str); 8] = [
    ("ontology", "ontology.txt"),
    ("enriched", "enriched.txt"),
    ("annotations", "annotations.tsv"),
    ("associations", "associations.tsv"),
    ("decisions", "decisions.tsv"),
    ("report", "report.tsv"),
    ("stats", "stats.tsv"),
    ("triples", "triples.tsv"),
];

impl Workspace {
    pub fn from_config(relative: &str) -> Self {
        let cfg = PipelineConfig::load(&fixtures().join(relative)).expect("fixture config loads");
        Self::with(cfg)
    }

    /// Builds from a single spec file with the fixture rules.
    pub fn for_spec(spec: &str) -> Self {
        let cfg = PipelineConfig {
            spec: vec![fixtures().join(spec)],
            rules: Some(fixtures().join("rules.tsv")),
            ..PipelineConfig::default()
        };
        Self::with(cfg)
    }

    fn with(mut cfg: PipelineConfig) -> Self {
        let dir = tempfile::tempdir().expect("temp dir");
        for (key, file) in OUTPUTS {
            cfg.set(key, dir.path().join(file).to_str().unwrap(), Path::new("")).unwrap();
        }
        Workspace { dir, cfg }
    }

    pub fn path(&self, file: &str) -> PathBuf {
        self.dir.path().join(file)
    }

    pub fn read(&self, file: &str) -> String {
        std::fs::read_to_string(self.path(file)).unwrap_or_else(|e| panic!("{file}: {e}"))
    }

    pub fn ontology(&self) -> Ontology {
        load_ontology(&self.path("ontology.txt")).unwrap()
    }

    pub fn enriched(&self) -> Ontology {
        load_ontology(&self.path("enriched.txt")).unwrap()
    }
}
