#!/usr/bin/env python3
"""Convert a Brill-format lexicon (``word TAG`` per line) into the seed lexicon
format read by speechgen (``word tag count`` per line, lowercased).

Usage: make_lexicon.py <en-lexicon.txt> <out.txt>

The source lexicon only lists the preferred tag of each surface form, so every
emitted entry carries count 1. When several case variants of a word exist, the
lowercase variant wins; otherwise the first variant seen is kept.
"""
import sys

TAGSET = set("""CC CD DT EX FW IN JJ JJR JJS LS MD NN NNS NNP NNPS PDT POS PRP PRP$
RB RBR RBS RP SYM TO UH VB VBD VBG VBN VBP VBZ WDT WP WP$ WRB , . : ( ) `` '' # $""".split())


def main(src, dst):
    chosen = {}
    exact = set()
    with open(src, encoding="utf-8") as f:
        for line in f:
            if line.startswith(";;;"):
                continue
            parts = line.split()
            if len(parts) != 2:
                continue
            word, tag = parts
            tag = tag.split("|")[0]
            if tag == "NP":
                tag = "NNP"
            if tag == '"':
                tag = "``"
            if tag not in TAGSET:
                continue
            key = word.lower()
            if word == key:
                chosen[key] = tag
                exact.add(key)
            elif key not in chosen:
                chosen[key] = tag
    with open(dst, "w", encoding="utf-8", newline="\n") as out:
        out.write("# Seed lexicon derived from the Brill tagger lexicon (v1.14) as\n")
        out.write("# redistributed with TextBlob (MIT license). Copyright 1993 MIT and\n")
        out.write("# University of Pennsylvania. Format: word tag count\n")
        for word in sorted(chosen):
            out.write(f"{word} {chosen[word]} 1\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
