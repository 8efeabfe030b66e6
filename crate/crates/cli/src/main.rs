use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use ontoloom_cli::{annotate, build, enrich_cmd, export_triples_cmd, stats_cmd, CommandOutput, PipelineConfig};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ontoloom", version, about = "Ontology building, spatial annotation and enrichment")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an ontology from specification documents and extraction rules.
    Build(Common),
    /// Annotate a corpus with spatial entities and collect qualifier terms.
    Annotate(Common),
    /// Enrich an ontology with qualifier terms through a thesaurus.
    Enrich(Common),
    /// Report occurrence counts and typing rates for an annotation dump.
    Stats(Common),
    /// Print the ontology as source/kind/target triples.
    ExportTriples(Common),
}

#[derive(Args)]
struct Common {
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override any configuration key (repeatable), e.g. `--set corpus=texts`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    spec: Option<String>,
    #[arg(long)]
    rules: Option<String>,
    #[arg(long)]
    corpus: Option<String>,
    #[arg(long)]
    gazetteer: Option<String>,
    #[arg(long)]
    thesaurus: Option<String>,
    #[arg(long)]
    ontology: Option<String>,
    #[arg(long)]
    enriched: Option<String>,
    #[arg(long)]
    annotations: Option<String>,
    #[arg(long)]
    associations: Option<String>,
    /// Compute leaf clusters once instead of after each attachment.
    #[arg(long)]
    static_clusters: bool,
    /// Feed qualifiers of unvalidated toponyms to enrichment too.
    #[arg(long)]
    include_unvalidated: bool,
    #[arg(long)]
    min_equivalences: Option<usize>,
}

impl Common {
    fn config(&self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(p) => PipelineConfig::load(p)?,
            None => PipelineConfig::default(),
        };
        let here = Path::new("");
        let named = [
            ("spec", &self.spec),
            ("rules", &self.rules),
            ("corpus", &self.corpus),
            ("gazetteer", &self.gazetteer),
            ("thesaurus", &self.thesaurus),
            ("ontology", &self.ontology),
            ("enriched", &self.enriched),
            ("annotations", &self.annotations),
            ("associations", &self.associations),
        ];
        for (key, value) in named {
            if let Some(v) = value {
                cfg.set(key, v, here)?;
            }
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| anyhow::anyhow!("--set expects KEY=VALUE, got `{kv}`"))?;
            cfg.set(k.trim(), v.trim(), here)?;
        }
        cfg.static_clusters |= self.static_clusters;
        cfg.include_unvalidated |= self.include_unvalidated;
        if let Some(n) = self.min_equivalences {
            cfg.min_equivalences = n;
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<CommandOutput> {
    match cli.command {
        Command::Build(c) => build(&c.config()?),
        Command::Annotate(c) => annotate(&c.config()?),
        Command::Enrich(c) => enrich_cmd(&c.config()?),
        Command::Stats(c) => stats_cmd(&c.config()?),
        Command::ExportTriples(c) => export_triples_cmd(&c.config()?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", out.stdout);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
