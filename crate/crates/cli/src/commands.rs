use crate::config::{output, read_or, require, PipelineConfig};
use crate::stats::{compute_stats, parse_dump, Configuration};
use anyhow::{bail, Context, Result};
use ontoloom::ingest::{apply_rules, parse_rules, parse_spec, IngestReport};
use ontoloom::nlp::{chunk_terms, tag, tokenize, Lexicon};
use ontoloom::ontology::{deserialize, export_triples, serialize, ClusterOptions, Ontology, Origin, RelationKind, TermIndex};
use ontoloom::pattern::{
    compile_patterns, integrate_definition, match_pattern, parse_definition, IntegrateOptions, MarkerSets, PatternError,
};
use ontoloom::resources;
use ontoloom::spatial::{
    annotate_document, dump_row, extract_term_associations, type_entity_with_index, Annotator, Gazetteer,
    IntroducerLexicon, TermAssociation, Typing, RELATION_SET,
};
use ontoloom::thesaurus::{enrich, EnrichOptions, Thesaurus};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

/// What a command prints: a summary for stdout and warnings for stderr.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub stdout: String,
    pub warnings: Vec<String>,
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_ontology(path: &Path) -> Result<Ontology> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    deserialize(&bytes).with_context(|| format!("loading ontology {}", path.display()))
}

pub fn load_lexicon(cfg: &PipelineConfig) -> Result<Lexicon> {
    let mut lex = Lexicon::parse_tsv(&read_or(&cfg.lexicon, "lexicon", resources::LEXICON)?)?;
    lex.load_stopwords(&read_or(&cfg.stopwords, "stopwords", resources::STOPWORDS)?);
    Ok(lex)
}

pub fn load_annotator(cfg: &PipelineConfig) -> Result<Annotator> {
    let gaz_path = require(&cfg.gazetteer, "gazetteer")?;
    let gazetteer = Gazetteer::parse(&read_text(gaz_path)?).with_context(|| format!("loading {}", gaz_path.display()))?;
    let mut markers = MarkerSets::new();
    markers.load(RELATION_SET, &read_or(&cfg.relation_markers, "relation_markers", resources::RELATION_MARKERS)?);
    Ok(Annotator {
        lexicon: load_lexicon(cfg)?,
        introducers: IntroducerLexicon::parse(&read_or(&cfg.introducers, "introducers", resources::INTRODUCERS)?),
        markers,
        gazetteer,
    })
}

/// Ingests every specification document, then folds each queued definition
/// back into the ontology.
pub fn build(cfg: &PipelineConfig) -> Result<CommandOutput> {
    let mut out = CommandOutput::default();
    let rules_path = require(&cfg.rules, "rules")?;
    let rules = parse_rules(&read_text(rules_path)?).with_context(|| format!("loading {}", rules_path.display()))?;
    if rules.is_empty() {
        out.warnings.push(format!("{}: no extraction rules", rules_path.display()));
    }
    let specs = cfg.spec_files()?;
    if specs.is_empty() {
        out.warnings.push("no specification documents configured".into());
    }
    for s in &specs {
        if !s.exists() {
            bail!("`spec` path {} does not exist", s.display());
        }
    }
    let target = output(&cfg.ontology, "ontology")?;

    let lexicon = load_lexicon(cfg)?;
    let mut markers = MarkerSets::new();
    markers.load(
        ontoloom::pattern::PARTIE_DE,
        &read_or(&cfg.partie_de, "partie_de", resources::PARTIE_DE_MARKERS)?,
    );
    let patterns = compile_patterns(&read_or(&cfg.patterns, "patterns", resources::PATTERNS)?)
        .map_err(|(line, e)| anyhow::anyhow!("patterns line {line}: {e}"))?;

    let mut ontology = Ontology::new();
    let mut report = IngestReport::default();
    for spec in &specs {
        let tree = parse_spec(&fs::read(spec)?).with_context(|| format!("parsing {}", spec.display()))?;
        let r = apply_rules(&tree, &rules, &mut ontology);
        for w in &r.warnings {
            out.warnings.push(format!("{}: {} at byte {}: {}", spec.display(), w.tag_path, w.offset, w.message));
        }
        report.merge(r);
    }

    let options = IntegrateOptions {
        link_existing_term: cfg.link_existing_term,
    };
    let mut unparsed = 0;
    let mut pattern_edges = 0;
    for def in &report.definitions {
        match parse_definition(&def.text, &def.concept, &ontology, &markers, &lexicon) {
            Ok(parse) => {
                let r = integrate_definition(&parse, &mut ontology, options);
                out.warnings.extend(r.warnings.into_iter().map(|w| format!("{}: {w}", def.concept)));
            }
            Err(PatternError::NoParse(_)) => {
                unparsed += 1;
                out.warnings.push(format!("{}: definition not parsed: {}", def.concept, def.text));
            }
            Err(e) => return Err(e.into()),
        }
        pattern_edges += apply_hyponymy_patterns(&def.text, &patterns, &lexicon, &markers, &mut ontology, &mut out);
    }

    write(target, serialize(&ontology))?;
    if let Some(path) = &cfg.report {
        write(path, report.to_tsv())?;
    }
    out.stdout = format!(
        "concepts\t{}\nrelations\t{}\nproperties\t{}\ndefinitions\t{}\nunparsed_definitions\t{unparsed}\npattern_relations\t{pattern_edges}\n",
        ontology.len(),
        ontology.relation_count(),
        ontology.properties().count(),
        report.definitions.len(),
    );
    Ok(out)
}

/// "X est un Y" statements between two known concepts become is-a edges.
fn apply_hyponymy_patterns(
    text: &str,
    patterns: &[ontoloom::pattern::Pattern],
    lexicon: &Lexicon,
    markers: &MarkerSets,
    ontology: &mut Ontology,
    out: &mut CommandOutput,
) -> usize {
    let tokens = tag(&tokenize(text), lexicon);
    let chunks = chunk_terms(&tokens, lexicon);
    let mut added = 0;
    for p in patterns.iter().filter(|p| p.annotation_label == "HYPONYMIE") {
        for m in match_pattern(p, &tokens, &chunks, markers) {
            let [specific, generic] = m.terms.as_slice() else { continue };
            let index = TermIndex::new(ontology);
            let (Some(s), Some(g)) = (index.lookup(specific).first(), index.lookup(generic).first()) else {
                continue;
            };
            let (s, g) = (s.clone(), g.clone());
            match ontology.add_relation(&s, &g, RelationKind::IsA, Origin::Language) {
                Ok(ontoloom::ontology::RelationOutcome::Added) => added += 1,
                Ok(_) => {}
                Err(e) => out.warnings.push(format!("pattern {}: {e}", p.name)),
            }
        }
    }
    added
}

fn corpus_documents(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut docs: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing corpus {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
        .collect();
    docs.sort();
    Ok(docs)
}

/// Association table line: `toponym<TAB>term<TAB>occurrences<TAB>validated`.
pub fn association_row(a: &TermAssociation) -> String {
    format!("{}\t{}\t{}\t{}\n", a.toponym, a.term, a.occurrences, a.toponym_validated)
}

pub fn parse_associations(text: &str) -> Result<Vec<TermAssociation>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            let f: Vec<&str> = l.split('\t').collect();
            let [toponym, term, occ, validated] = f.as_slice() else {
                bail!("associations line {}: expected 4 fields", i + 1);
            };
            Ok(TermAssociation {
                toponym: toponym.to_string(),
                term: term.to_string(),
                occurrences: occ.parse().with_context(|| format!("associations line {}", i + 1))?,
                toponym_validated: validated.parse().with_context(|| format!("associations line {}", i + 1))?,
            })
        })
        .collect()
}

/// Annotates every `*.txt` document of the corpus directory.
pub fn annotate(cfg: &PipelineConfig) -> Result<CommandOutput> {
    let mut out = CommandOutput::default();
    let corpus = require(&cfg.corpus, "corpus")?;
    let annotator = load_annotator(cfg)?;
    let ontology = match &cfg.ontology {
        Some(_) => Some(load_ontology(require(&cfg.ontology, "ontology")?)?),
        None => None,
    };
    let dump_path = output(&cfg.annotations, "annotations")?;
    let assoc_path = output(&cfg.associations, "associations")?;
    let index = ontology.as_ref().map(TermIndex::new);

    let docs = corpus_documents(corpus)?;
    let mut dump = String::new();
    let mut all_esas = Vec::new();
    let mut failures = 0;
    let (mut n_esa, mut n_esr) = (0, 0);
    for doc in &docs {
        let text = match fs::read_to_string(doc) {
            Ok(t) => t,
            Err(e) => {
                failures += 1;
                out.warnings.push(format!("{}: skipped: {e}", doc.display()));
                continue;
            }
        };
        let name = doc.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let ann = annotate_document(&text, &annotator, ontology.as_ref());
        let typing = |e| match (&ontology, &index) {
            (Some(o), Some(i)) => type_entity_with_index(e, o, i),
            _ => Typing::default(),
        };
        let mut rows: Vec<(usize, u8, String)> = Vec::new();
        for r in &ann.esrs {
            rows.push((r.start, 0, dump_row(&name, None, Some(r), &typing(&r.inner))));
        }
        for e in &ann.esas {
            rows.push((e.start, 1, dump_row(&name, Some(e), None, &typing(e))));
        }
        rows.sort();
        dump.extend(rows.into_iter().map(|(_, _, r)| r));
        n_esa += ann.esas.len();
        n_esr += ann.esrs.len();
        all_esas.extend(ann.esas);
    }
    if !docs.is_empty() && failures == docs.len() {
        bail!("no corpus document could be read");
    }
    let assoc: String = extract_term_associations(&all_esas).iter().map(association_row).collect();
    write(dump_path, dump)?;
    write(assoc_path, assoc)?;
    out.stdout = format!("documents\t{}\nesa\t{n_esa}\nesr\t{n_esr}\n", docs.len() - failures);
    Ok(out)
}

/// Qualifier counts for enrichment, from the chosen population.
pub fn qualifiers(assocs: &[TermAssociation], include_unvalidated: bool) -> Vec<(String, usize)> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for a in assocs.iter().filter(|a| include_unvalidated || a.toponym_validated) {
        *counts.entry(a.term.clone()).or_default() += a.occurrences;
    }
    counts.into_iter().collect()
}

pub fn enrich_options(cfg: &PipelineConfig) -> EnrichOptions {
    EnrichOptions {
        min_equivalences: cfg.min_equivalences,
        static_clusters: cfg.static_clusters,
        clusters: ClusterOptions {
            include_member_terms: cfg.include_member_terms,
        },
    }
}

/// Writes an enriched copy of the ontology; the input file is left as is.
pub fn enrich_cmd(cfg: &PipelineConfig) -> Result<CommandOutput> {
    let mut out = CommandOutput::default();
    let thesaurus_path = require(&cfg.thesaurus, "thesaurus")?;
    let mut ontology = load_ontology(require(&cfg.ontology, "ontology")?)?;
    let assoc_path = require(&cfg.associations, "associations")?;
    let target = output(&cfg.enriched, "enriched")?;
    let thesaurus = Thesaurus::parse(&fs::read(thesaurus_path)?)
        .with_context(|| format!("loading {}", thesaurus_path.display()))?;
    let assocs = parse_associations(&read_text(assoc_path)?)?;
    let quals = qualifiers(&assocs, cfg.include_unvalidated);

    let decisions = enrich(&mut ontology, &quals, &thesaurus, enrich_options(cfg));
    write(target, serialize(&ontology))?;
    let report: String = decisions.iter().map(|d| d.to_tsv() + "\n").collect();
    if let Some(path) = &cfg.decisions {
        write(path, &report)?;
    }
    if let Some(path) = &cfg.geo_markers {
        let markers = read_text(path)?;
        let geo = thesaurus.geographic_sense_filter(&resources::lines(&markers).map(str::to_string).collect());
        for d in &decisions {
            if let Some(v) = d.resolved_vedette.as_ref().filter(|v| !geo.contains(*v)) {
                out.warnings.push(format!("{}: vedette {v} carries no geographic sense", d.qualifier));
            }
        }
    }
    out.stdout = report;
    Ok(out)
}

/// Typing rates per configuration: gazetteer only, then with each ontology.
pub fn stats_cmd(cfg: &PipelineConfig) -> Result<CommandOutput> {
    let dump = parse_dump(&read_text(require(&cfg.annotations, "annotations")?)?)?;
    let base = match &cfg.ontology {
        Some(_) => Some(load_ontology(require(&cfg.ontology, "ontology")?)?),
        None => None,
    };
    let enriched = match &cfg.enriched {
        Some(p) if p.exists() => Some(load_ontology(p)?),
        _ => None,
    };
    let mut configs = vec![Configuration::GazetteerOnly];
    if let Some(o) = &base {
        configs.push(Configuration::WithOntology("ontology", o));
    }
    if let Some(o) = &enriched {
        configs.push(Configuration::WithOntology("enriched", o));
    }
    let stats = compute_stats(&dump, base.as_ref(), &configs);
    if let Some(path) = &cfg.stats {
        write(path, stats.to_tsv())?;
    }
    Ok(CommandOutput {
        stdout: stats.to_text(),
        warnings: vec![],
    })
}

pub fn export_triples_cmd(cfg: &PipelineConfig) -> Result<CommandOutput> {
    let ontology = load_ontology(require(&cfg.ontology, "ontology")?)?;
    let triples = export_triples(&ontology);
    match &cfg.triples {
        Some(path) => {
            write(path, &triples)?;
            Ok(CommandOutput::default())
        }
        None => Ok(CommandOutput {
            stdout: triples,
            warnings: vec![],
        }),
    }
}
