#!/usr/bin/env python3
"""Regenerate the committed mini-pipeline fixture and its golden report.

Writes tests/data/mini_corpus.jsonl, tests/data/mini_annotations.log and
tests/data/expected_report.json by running the full pipeline once. Rerun
only when the fixture definition or the report schema changes, and review
the diff: the golden file is what the end-to-end CLI test compares against,
byte for byte.
"""

import subprocess
import sys
import tempfile
from pathlib import Path

from rumourkit.fixtures import mini_annotation_events, mini_corpus_lines

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def main() -> int:
    DATA.mkdir(parents=True, exist_ok=True)
    corpus_path = DATA / "mini_corpus.jsonl"
    corpus_path.write_text("\n".join(mini_corpus_lines()) + "\n", encoding="utf-8")
    log_path = DATA / "mini_annotations.log"
    if log_path.exists():
        log_path.unlink()
    mini_annotation_events(log_path)

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)

        def run(*args):
            result = subprocess.run(
                [sys.executable, "-m", "rumourkit.cli", *args],
                capture_output=True,
                text=True,
                check=True,
            )
            return result.stdout

        run("ingest", "--input", str(corpus_path), "--keywords", "#ferguson",
            "--languages", "en", "--store", str(tmp / "corpus"))
        run("sample", "--store", str(tmp / "corpus"), "--min-retweets", "100",
            "--out", str(tmp / "sample.jsonl"))
        run("threads", "--store", str(tmp / "corpus"), "--sample", str(tmp / "sample.jsonl"),
            "--out", str(tmp / "threads"))
        report = run("report", "--threads-dir", str(tmp / "threads"), "--log", str(log_path))
        (DATA / "expected_report.json").write_text(report, encoding="utf-8")
    print(f"wrote fixture + golden under {DATA}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
