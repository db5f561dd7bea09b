#!/usr/bin/env python3
"""Sweep the verification corpus and merge the per-group reports.

Runs the identity checks over every proper subgroup of GL(2,2), GL(2,3),
SL(2,3) and GL(3,2), writes one JSON-lines report per group plus a merged
CSV table, and exits nonzero if any identity failed.

Usage: python3 scripts/run_corpus.py [output_dir]
"""

import pathlib
import sys

from mobius_lattice.cli import main as cli_main

CORPUS = [("GL", 2, 2), ("GL", 2, 3), ("SL", 2, 3), ("GL", 3, 2)]


def run(out_dir: pathlib.Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    reports = []
    for kind, n, q in CORPUS:
        path = out_dir / f"{kind.lower()}_{n}_{q}.jsonl"
        code = cli_main(["verify", "--preset", kind, "--n", str(n),
                         "--q", str(q), "--subgroups", "all",
                         "--out", str(path)])
        print(f"{kind}({n},{q}) -> {path} (exit {code})")
        if code != 0:
            return code
        reports.append(str(path))
    merged = out_dir / "corpus.csv"
    code = cli_main(["report", *reports, "--format", "csv",
                     "--out", str(merged)])
    print(f"merged table -> {merged} (exit {code})")
    return code


if __name__ == "__main__":
    target = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "reports")
    sys.exit(run(target))
