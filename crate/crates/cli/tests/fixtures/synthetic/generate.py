#!/usr/bin/env python3
"""Writes the synthetic travel-narrative corpus, its gazetteer and the
expected typing counts.

Every distinct entity belongs to one category, which fixes how it can be
typed:

  A  toponym listed once in the gazetteer       typed in every configuration
  B  introducer is an ontology concept          typed once the ontology is used
  C  toponym listed twice with clashing types;  typed only after enrichment
     introducer resolves through the thesaurus
  D  introducer unknown to ontology/thesaurus   never typed
  E  bare toponym, no introducer                never typed

Run from this directory: python3 generate.py
"""

import random
from pathlib import Path

SEED = 20090401
SENTENCES = 200
DOCUMENTS = 4
PER_CATEGORY = 10

INTRODUCERS = {
    "A": ["ville", "village", "lac", "pic", "hameau"],
    "B": ["torrent", "gave", "étang", "chemin", "sentier", "falaise", "escarpement", "col", "mont", "crête"],
    "C": ["gouffre", "caverne", "abîme", "corniche", "promenade"],
    "D": ["chapelle", "cabane", "bergerie", "fontaine", "moulin"],
}
FEMININE = {"ville", "crête", "falaise", "caverne", "corniche", "promenade", "chapelle", "cabane", "bergerie", "fontaine"}

WITH_INTRODUCER = [
    "Nous longeons {det} {intro} de {name} avant la pluie.",
    "Le guide nous montre {det} {intro} de {name} au loin.",
    "Ce matin, nous rejoignons {det} {intro} de {name}.",
    "On devine {det} {intro} de {name} sous les nuages.",
    "Nous campons près {pdet} {intro} de {name}.",
]
BARE = [
    "Nous marchons vers {name} sans hâte.",
    "Le guide parle souvent de {name}.",
    "On arrive enfin à {name} pour la nuit.",
]

ONSETS = ["b", "c", "d", "g", "l", "m", "n", "p", "r", "s", "t", "v"]
NUCLEI = ["a", "e", "i", "o", "ou", "au", "ei"]
CODAS = ["", "", "n", "r", "s", "t", "l"]


def names(rng, count, taken):
    out = []
    while len(out) < count:
        word = "".join(rng.choice(ONSETS) + rng.choice(NUCLEI) + rng.choice(CODAS) for _ in range(3))
        word = word.capitalize()
        if word.lower() not in taken:
            taken.add(word.lower())
            out.append(word)
    return out


def occurrence_counts(rng, entities, total):
    counts = {e: total // len(entities) for e in entities}
    for _ in range(200):
        a, b = rng.sample(entities, 2)
        if counts[a] > 1 and counts[b] < 7:
            counts[a] -= 1
            counts[b] += 1
    assert sum(counts.values()) == total
    return counts


def main():
    here = Path(__file__).resolve().parent
    rng = random.Random(SEED)
    lexicon = here.parents[3] / "core" / "data" / "lexicon.tsv"
    taken = {line.split("\t")[0].lower() for line in lexicon.read_text(encoding="utf-8").splitlines()}

    entities = []  # (category, introducer or None, toponym)
    for cat in "ABCDE":
        for i, name in enumerate(names(rng, PER_CATEGORY, taken)):
            intro = None if cat == "E" else INTRODUCERS[cat][i % len(INTRODUCERS[cat])]
            entities.append((cat, intro, name))

    gazetteer = ["# name\tfeature_type\tlat\tlon"]
    for cat, intro, name in entities:
        lat, lon = round(rng.uniform(42.6, 43.1), 4), round(rng.uniform(-0.8, 0.9), 4)
        if cat == "A":
            gazetteer.append(f"{name}\t{intro}\t{lat}\t{lon}")
        elif cat == "C":
            gazetteer.append(f"{name}\tpic\t{lat}\t{lon}")
            gazetteer.append(f"{name}\tlac\t{lat + 0.01}\t{lon}")

    counts = occurrence_counts(rng, entities, SENTENCES)
    mentions = [e for e in entities for _ in range(counts[e])]
    rng.shuffle(mentions)

    sentences = []
    for cat, intro, name in mentions:
        if intro is None:
            sentences.append(rng.choice(BARE).format(name=name))
        else:
            fem = intro in FEMININE
            det = "la" if fem else "le"
            pdet = "de la" if fem else "du"
            sentences.append(rng.choice(WITH_INTRODUCER).format(det=det, pdet=pdet, intro=intro, name=name))

    corpus = here / "corpus"
    corpus.mkdir(exist_ok=True)
    per_doc = SENTENCES // DOCUMENTS
    for d in range(DOCUMENTS):
        chunk = sentences[d * per_doc:(d + 1) * per_doc]
        paragraphs = [" ".join(chunk[i:i + 5]) for i in range(0, len(chunk), 5)]
        (corpus / f"recit_{d + 1:02}.txt").write_text("\n\n".join(paragraphs) + "\n", encoding="utf-8")
    (here / "gazetteer.tsv").write_text("\n".join(gazetteer) + "\n", encoding="utf-8")

    typed_in = {
        "gazetteer": {"A"},
        "ontology": {"A", "B"},
        "enriched": {"A", "B", "C"},
    }
    rows = ["# configuration\ttyped_occurrences\ttyped_distinct\toccurrences\tdistinct"]
    for config, cats in typed_in.items():
        occ = sum(counts[e] for e in entities if e[0] in cats)
        dist = sum(1 for e in entities if e[0] in cats)
        rows.append(f"{config}\t{occ}\t{dist}\t{SENTENCES}\t{len(entities)}")
    (here / "expected.tsv").write_text("\n".join(rows) + "\n", encoding="utf-8")

    entity_rows = ["# category\tintroducer\ttoponym\toccurrences"]
    entity_rows += [f"{c}\t{i or ''}\t{n}\t{counts[(c, i, n)]}" for c, i, n in entities]
    (here / "entities.tsv").write_text("\n".join(entity_rows) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
