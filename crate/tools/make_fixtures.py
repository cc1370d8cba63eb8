#!/usr/bin/env python3
"""Regenerate the bundled corpus and lexicon fixtures.

Inputs: the JSON files of the `world-english-bible` npm package
(`npm pack world-english-bible && tar xzf world-english-bible-*.tgz`)
and the verse file of the `kjv` npm package.

    python3 tools/make_fixtures.py web/package/json kjv/package/json/verses-1769.json data/

Writes `web5.tsv` (Matthew, Mark, Luke, John, Acts) and `names.txt`.

The name list is derived from the King James text (the `kjv` npm package,
`json/verses-1769.json`): a token is a name candidate when it appears
capitalized somewhere other than the start of a clause, is not all-caps,
and never appears in lower case in either translation. Curated lists below add names that
collide with ordinary words and drop capitalized non-names (feasts,
titles, transliterated words, demonyms).
"""
import json
import re
import sys
from pathlib import Path

BOOKS = [("Matthew", "matthew"), ("Mark", "mark"), ("Luke", "luke"),
         ("John", "john"), ("Acts", "acts")]

TOKEN = re.compile(r"[^\W_]+(?:['’-][^\W_]+)*")

# Names that also occur as ordinary lower-case words.
EXTRA_NAMES = ["Mark", "Lot", "Legion", "Mammon", "Dan", "Gad", "Rock",
               "Jesus Christ"]

# Capitalized words that are not names of people, places or spirits.
NOT_NAMES = {
    "Passover", "Sabbath", "Sabbaths", "Scripture", "Scriptures", "Pentecost",
    "Hosanna", "Rabbi", "Rabboni", "Amen", "Baptizer", "Praetorium", "Raca",
    "Corban", "Talitha", "Ephphatha", "Eloi", "Farewell", "Stooping",
    "Extort", "Crucifying", "Ha", "Latin", "Hebrew", "Greek", "Jewish",
    "Jewess", "Zealot", "Hallelujah", "Selah", "Jubilee", "Urim", "Thummim",
    "Shibboleth", "Sheol", "Hellenists", "Nazarene", "Nazarenes",
    "Pharisee", "Pharisees", "Sadducees", "Herodians", "Jews", "Jew",
    "Gentiles", "Gentile", "Greeks", "Romans", "Roman", "Samaritans",
    "Samaritan", "Galileans", "Galilean", "Egyptian", "Egyptians",
    "Levite", "Levites", "Canaanite", "Syrophoenician", "Ephesians",
    "Gadarenes", "Gergesenes", "Hebrews", "Israelite", "Israelites",
    "Epicurean", "Stoic", "Libertines", "Cyrenians", "Alexandrians",
    "Parthians", "Medes", "Elamites", "Cretans", "Arabians", "Athenians",
    "Thessalonians", "Chaldeans", "Ethiopians", "Macedonians", "Asians",
    "Barbarians", "Lycaonian", "Jewesses", "Maranatha", "Lama", "Sabachthani",
    "Lema", "Sabachthani", "Eli",
}

DEMONYM = re.compile(r"(ians?|ites?|itish|eans?)$")

# Name dictionaries print the Latin digraph in its anglicized form
# (Alpheus, Thaddeus, Idumea); the modern text keeps "ae".
DIGRAPH = re.compile(r"ae(?!l|n$)")

# Stop-names: genuine list entries that are indistinguishable from common
# English words.
STOP_NAMES = ["So", "On", "No"]


def strip_possessive(tok):
    for suffix in ("'s", "’s"):
        if tok.endswith(suffix):
            tok = tok[: -len(suffix)]
            break
    return tok.rstrip("'’")


def verses(path):
    out = {}
    for item in json.loads(Path(path).read_text()):
        if "verseNumber" in item:
            key = (item["chapterNumber"], item["verseNumber"])
            out.setdefault(key, []).append(item["value"])
    return {k: " ".join(" ".join(v).split()) for k, v in sorted(out.items())}


def main(src, kjv_path, dst):
    src, dst = Path(src), Path(dst)
    dst.mkdir(parents=True, exist_ok=True)

    with open(dst / "web5.tsv", "w", encoding="utf-8") as fh:
        fh.write("# World English Bible (public domain): Matthew, Mark, Luke, John, Acts\n")
        fh.write("# book\tchapter\tverse\ttext\n")
        for label, stem in BOOKS:
            for (ch, vs), text in verses(src / f"{stem}.json").items():
                if text:
                    fh.write(f"{label}\t{ch}\t{vs}\t{text}\n")

    seen_upper, seen_lower = set(), set()
    kjv = json.loads(Path(kjv_path).read_text())
    for text in kjv.values():
        text = text.replace("#", " ").replace("[", " ").replace("]", " ")
        # Sentence-initial capitals say nothing about proper nouns.
        for clause in re.split(r"[.!?:;]", text):
            for i, raw in enumerate(TOKEN.findall(clause)):
                tok = strip_possessive(raw)
                if not tok or "-" in tok:
                    continue
                if tok[0].islower():
                    seen_lower.add(tok)
                elif i > 0 and tok[0].isupper() and not tok.isupper() and len(tok) > 1:
                    seen_upper.add(tok)
    # Modern-English words the older text never uses in lower case.
    for path in sorted(src.glob("*.json")):
        for text in verses(path).values():
            for raw in TOKEN.findall(text):
                tok = strip_possessive(raw)
                if tok and tok[0].islower():
                    seen_lower.add(tok)
    names = {t for t in seen_upper
             if t.lower() not in seen_lower and "’" not in t and "'" not in t}
    names = {t for t in names if not DEMONYM.search(t)}
    names -= NOT_NAMES
    names -= set(STOP_NAMES)
    names = {DIGRAPH.sub("e", t) for t in names}
    names |= set(EXTRA_NAMES)

    with open(dst / "names.txt", "w", encoding="utf-8") as fh:
        fh.write("# Biblical personal names, place names and named spiritual entities.\n")
        fh.write("# One entry per line; '!' marks an excluded stop-name.\n")
        for name in sorted(names):
            fh.write(name + "\n")
        for name in STOP_NAMES:
            fh.write("!" + name + "\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2], sys.argv[3])
