"""Tokenize plain-text books into the one-sentence-per-line corpus used by the smoke test.

Usage: python3 make_corpus.py book1.txt book2.txt ... > corpus.txt

Lowercases, keeps alphabetic words (with inner apostrophes), and splits
sentences on . ! ? ; : and paragraph breaks. Project Gutenberg header and
footer blocks are dropped when present.
"""
import re
import sys

WORD = re.compile(r"[a-z]+(?:'[a-z]+)*")
SPLIT = re.compile(r"[.!?;:]+|\n\s*\n")


def strip_gutenberg(text):
    start = re.search(r"\*\*\* ?START OF.*?\*\*\*", text)
    end = re.search(r"\*\*\* ?END OF", text)
    if start:
        text = text[start.end():]
    if end:
        text = text[: end.start() - (start.end() if start else 0)]
    return text


def main(paths):
    for path in paths:
        with open(path, encoding="utf-8", errors="ignore") as f:
            text = strip_gutenberg(f.read()).replace("\r", "").lower()
        for chunk in SPLIT.split(text):
            words = WORD.findall(chunk)
            if len(words) >= 2:
                print(" ".join(words))


if __name__ == "__main__":
    main(sys.argv[1:])
