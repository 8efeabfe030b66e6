mod common;

use common::{fixtures, Workspace};
use ontoloom::ontology::{ConceptId, RelationKind};
use ontoloom_cli::stats::{compute_stats, parse_dump, Configuration};
use ontoloom_cli::{annotate, build, enrich_cmd, export_triples_cmd, stats_cmd};
use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ontoloom"))
}

#[test]
fn empty_rules_give_top_only_with_warning() {
    let mut ws = Workspace::for_spec("class_value.xml");
    let rules = ws.path("empty.tsv");
    fs::write(&rules, "# nothing\n").unwrap();
    ws.cfg.rules = Some(rules);
    let out = build(&ws.cfg).unwrap();
    assert!(out.warnings.iter().any(|w| w.contains("no extraction rules")));
    let o = ws.ontology();
    assert_eq!(o.len(), 1);
    assert!(o.contains(&ConceptId::top()));
}

#[test]
fn build_is_deterministic() {
    let ws = Workspace::from_config("synthetic/pipeline.conf");
    build(&ws.cfg).unwrap();
    let first = fs::read(ws.path("ontology.txt")).unwrap();
    build(&ws.cfg).unwrap();
    assert_eq!(fs::read(ws.path("ontology.txt")).unwrap(), first);
}

#[test]
fn relative_entity_row() {
    let mut ws = Workspace::from_config("small/pipeline.conf");
    let corpus = ws.path("corpus");
    fs::create_dir(&corpus).unwrap();
    fs::write(corpus.join("a.txt"), "au sud de la vallée d'Ossau").unwrap();
    ws.cfg.corpus = Some(corpus);
    ws.cfg.ontology = None;
    annotate(&ws.cfg).unwrap();
    let rows = parse_dump(&ws.read("annotations.tsv")).unwrap();
    let kinds: Vec<&str> = rows.iter().map(|r| r.kind.as_str()).collect();
    assert_eq!(kinds, ["ESR", "ESA"]);
    assert_eq!(rows[0].introducer, "au sud de");
    assert_eq!((rows[1].introducer.as_str(), rows[1].toponym.as_str()), ("vallée", "Ossau"));
}

#[test]
fn empty_corpus_gives_empty_outputs() {
    let mut ws = Workspace::from_config("small/pipeline.conf");
    let corpus = ws.path("empty");
    fs::create_dir(&corpus).unwrap();
    ws.cfg.corpus = Some(corpus);
    ws.cfg.ontology = None;
    let out = annotate(&ws.cfg).unwrap();
    assert!(out.stdout.starts_with("documents\t0"));
    assert_eq!(ws.read("annotations.tsv"), "");
    assert_eq!(ws.read("associations.tsv"), "");
}

#[test]
fn unreadable_documents_are_skipped() {
    let mut ws = Workspace::from_config("small/pipeline.conf");
    let corpus = ws.path("mixed");
    fs::create_dir(&corpus).unwrap();
    fs::write(corpus.join("bad.txt"), [0xff, 0xfe, 0x00]).unwrap();
    fs::write(corpus.join("good.txt"), "le village de Gabas").unwrap();
    ws.cfg.corpus = Some(corpus.clone());
    ws.cfg.ontology = None;
    let out = annotate(&ws.cfg).unwrap();
    assert_eq!(out.warnings.len(), 1);
    assert!(out.warnings[0].contains("bad.txt"));

    fs::remove_file(corpus.join("good.txt")).unwrap();
    assert!(annotate(&ws.cfg).is_err());
}

#[test]
fn enrich_needs_a_thesaurus() {
    let mut ws = Workspace::from_config("crabioules/pipeline.conf");
    build(&ws.cfg).unwrap();
    annotate(&ws.cfg).unwrap();
    ws.cfg.thesaurus = None;
    let err = enrich_cmd(&ws.cfg).unwrap_err();
    assert!(format!("{err:#}").contains("thesaurus"));
    assert!(!ws.path("enriched.txt").exists());
}

#[test]
fn enrich_leaves_input_untouched_and_only_adds() {
    let ws = Workspace::from_config("crabioules/pipeline.conf");
    build(&ws.cfg).unwrap();
    annotate(&ws.cfg).unwrap();
    let before = fs::read(ws.path("ontology.txt")).unwrap();
    enrich_cmd(&ws.cfg).unwrap();
    assert_eq!(fs::read(ws.path("ontology.txt")).unwrap(), before);

    let (base, enriched) = (ws.ontology(), ws.enriched());
    for c in base.concepts() {
        assert_eq!(enriched.concept(&c.id), Some(c));
    }
    for r in base.relations() {
        assert!(enriched.has_relation(&r.source, &r.kind, &r.target));
    }
    let abime = ConceptId::new("Orographie/Grottes/abîme");
    assert!(enriched.has_relation(&abime, &RelationKind::IsA, &ConceptId::new("Orographie/Grottes")));
    assert_eq!(enriched.concept(&abime).unwrap().reference.as_deref(), Some("vedette:Grottes"));
}

#[test]
fn known_qualifiers_copy_the_ontology() {
    let ws = Workspace::from_config("crabioules/pipeline.conf");
    build(&ws.cfg).unwrap();
    fs::write(ws.path("associations.tsv"), "Crabioules\tcol\t2\ttrue\nCrabioules\tmont\t1\ttrue\n").unwrap();
    let out = enrich_cmd(&ws.cfg).unwrap();
    assert!(out.stdout.lines().all(|l| l.contains("already-concept")));
    assert_eq!(fs::read(ws.path("enriched.txt")).unwrap(), fs::read(ws.path("ontology.txt")).unwrap());
}

#[test]
fn qualifiers_processed_by_descending_count() {
    let ws = Workspace::from_config("crabioules/pipeline.conf");
    build(&ws.cfg).unwrap();
    let rows = [
        "Aaa\tpromenade\t1\ttrue",
        "Bbb\tabîme\t5\ttrue",
        "Ccc\tcol\t2\ttrue",
        "Ddd\tcorniche\t3\ttrue",
        "Eee\tabîme\t1\ttrue",
    ];
    let mut orders = Vec::new();
    for perm in [[0, 1, 2, 3, 4], [4, 3, 2, 1, 0], [2, 0, 4, 1, 3]] {
        let text: String = perm.iter().map(|&i| format!("{}\n", rows[i])).collect();
        fs::write(ws.path("associations.tsv"), text).unwrap();
        let out = enrich_cmd(&ws.cfg).unwrap();
        orders.push(out.stdout.lines().map(|l| l.split('\t').next().unwrap().to_string()).collect::<Vec<_>>());
    }
    assert_eq!(orders[0], ["abîme", "corniche", "col", "promenade"]);
    assert!(orders.iter().all(|o| *o == orders[0]));
}

#[test]
fn unvalidated_population_is_opt_in() {
    let mut ws = Workspace::from_config("crabioules/pipeline.conf");
    build(&ws.cfg).unwrap();
    fs::write(ws.path("associations.tsv"), "Nulle\tabîme\t1\tfalse\n").unwrap();
    assert_eq!(enrich_cmd(&ws.cfg).unwrap().stdout, "");
    ws.cfg.include_unvalidated = true;
    assert!(enrich_cmd(&ws.cfg).unwrap().stdout.starts_with("abîme\tattached"));
}

#[test]
fn hand_counted_stats() {
    let ws = Workspace::from_config("small/pipeline.conf");
    for step in [build, annotate, enrich_cmd] {
        step(&ws.cfg).unwrap();
    }
    let rows = parse_dump(&ws.read("annotations.tsv")).unwrap();
    assert_eq!(rows.iter().filter(|r| !r.is_esa()).count(), 1);
    let (base, enriched) = (ws.ontology(), ws.enriched());
    let s = compute_stats(
        &rows,
        Some(&base),
        &[
            Configuration::GazetteerOnly,
            Configuration::WithOntology("ontology", &base),
            Configuration::WithOntology("enriched", &enriched),
        ],
    );
    assert_eq!((s.esa_occurrences, s.esa_distinct), (20, 18));
    assert_eq!((s.validated_occurrences, s.validated_distinct), (9, 9));
    let c = &s.candidates;
    assert_eq!((c.term_occurrences_common, c.term_occurrences_different), (11, 6));
    assert_eq!((c.term_distinct_common, c.term_distinct_different), (7, 6));
    let v = &s.validated;
    assert_eq!((v.term_occurrences_common, v.term_occurrences_different), (5, 2));
    assert_eq!((v.term_distinct_common, v.term_distinct_different), (4, 2));
    let typed: Vec<(usize, usize)> = s.typing.iter().map(|t| (t.typed_occurrences, t.typed_distinct)).collect();
    assert_eq!(typed, [(7, 7), (13, 11), (15, 13)]);
    assert_eq!(s.typing[1].typed_distinct_rate, 11.0 / 18.0);
    assert_eq!(s.typing[2].typed_occurrence_rate, 0.75);

    // the command's own TSV agrees with the library counters
    stats_cmd(&ws.cfg).unwrap();
    let tsv = ws.read("stats.tsv");
    assert!(tsv.contains("population\tcandidates\tdistinct\t18\n"));
    assert!(tsv.contains("typing\tenriched\ttyped_distinct\t13\n"));
    assert_eq!(tsv, s.to_tsv());
}

#[test]
fn export_triples_lists_edges() {
    let ws = Workspace::for_spec("class_value.xml");
    build(&ws.cfg).unwrap();
    export_triples_cmd(&ws.cfg).unwrap();
    assert!(ws.read("triples.tsv").contains("Oronyme/Grotte\tisa\tOronyme"));
}

#[test]
fn binary_exit_codes_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let onto = dir.path().join("o.txt");
    let ok = bin()
        .args(["build", "--spec"])
        .arg(fixtures().join("class_value.xml"))
        .arg("--rules")
        .arg(fixtures().join("rules.tsv"))
        .arg("--ontology")
        .arg(&onto)
        .output()
        .unwrap();
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("concepts\t3"));

    let triples = bin().arg("export-triples").arg("--set").arg(format!("ontology={}", onto.display())).output().unwrap();
    assert!(triples.status.success());
    assert!(String::from_utf8_lossy(&triples.stdout).contains("Oronyme\tisa\tTop"));

    let bad = dir.path().join("bad.xml");
    fs::write(&bad, "<class><className>x</class>").unwrap();
    let fail = bin()
        .args(["build", "--spec"])
        .arg(&bad)
        .arg("--rules")
        .arg(fixtures().join("rules.tsv"))
        .arg("--ontology")
        .arg(&onto)
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&fail.stderr).starts_with("error:"));

    let unknown = bin().args(["stats", "--set", "colour=blue"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(1));
}
