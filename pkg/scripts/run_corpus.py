#!/usr/bin/env python3
"""Run the bundled fan corpus end to end and compare against the frozen
expected outputs.

Usage:
    python3 scripts/run_corpus.py [--perversity middle|top|bottom]
"""

import argparse
import json
import pathlib
import sys
import time

import toric_ic
from toric_ic.cohom import (
    NotSimplicial,
    generalized_h_vector,
    h_vector_oracle,
    ih_betti,
    serre_duality_report,
)
from toric_ic.fan import fan_from_json
from toric_ic.ic import Perversity

CORPUS = pathlib.Path(toric_ic.__file__).parent / "corpus"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--perversity", default="middle",
                    choices=("middle", "top", "bottom"))
    args = ap.parse_args()

    with open(CORPUS / "expected.json") as f:
        expected = json.load(f)

    failures = 0
    for name in sorted(expected):
        with open(CORPUS / f"{name}.json") as f:
            fan = fan_from_json(json.load(f))
        start = time.monotonic()
        p = Perversity.preset(fan, args.perversity)
        betti = list(ih_betti(fan, p))
        duality = serre_duality_report(fan, p).ok
        gh = list(generalized_h_vector(fan))
        try:
            h = list(h_vector_oracle(fan))
        except NotSimplicial:
            h = None
        elapsed = time.monotonic() - start
        line = (f"{name:16s} rank {fan.rank}  betti {betti}  "
                f"gh {gh}  duality {'ok' if duality else 'FAIL'}  "
                f"{elapsed:5.1f}s")
        if args.perversity == "middle":
            want = expected[name]
            ok = (betti == want["betti_middle"] and gh == want["generalized_h"]
                  and h == want["h"] and duality)
            line += "  " + ("match" if ok else "MISMATCH")
            if not ok:
                failures += 1
        elif not duality:
            failures += 1
        print(line)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
