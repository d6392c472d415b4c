#!/usr/bin/env python3
"""Validate gmq --format json output against schemas/ and check exit codes."""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema

CASES = [
    ("verdict", ["extendable", "-g", "4", "t_{a_1}"], 0),
    ("verdict", ["extendable", "-g", "5", "t_{a_1} t_{a_3} t_{c_1}"], 0),
    ("eval_form", ["eval-form", "-g", "5", "x1+x3"], 0),
    ("act", ["act", "-g", "4", "t_{d_1}", "x1", "x2+x3"], 0),
    ("table", ["enumerate", "-g", "4", "--elements"], 0),
    ("table", ["enumerate", "-g", "5", "--closure", "--elements"], 0),
    ("table", ["enumerate", "-g", "6", "--closure", "--cap", "10"], 3),
    ("factorization", ["factorize", "-g", "4", "t_{d_2}"], 0),
    ("factorization", ["factorize", "-g", "4", "t_{a_1}"], 0),
    ("factorization", ["factorize", "-g", "6", "t_{a_1}", "--cap", "3"], 3),
    ("factorization", ["factorize", "-g", "3", "--matrix", "001,010,100"], 0),
    ("lemma", ["verify-lemma", "4.8", "-g", "5"], 0),
    ("lemma", ["verify-lemma", "4.4", "-g", "5"], 0),
    ("lemma", ["verify-lemma", "4.6", "-g", "5"], 0),
    ("lemma", ["verify-lemma", "4.10", "-g", "7"], 0),
    ("lemma", ["verify-lemma", "thm4.1", "-g", "5"], 0),
    ("path", ["reduce-rseq", "[+ − ⊕]"], 0),
    ("path", ["reduce-rseq", "-g", "7", "pMPmpMP"], 0),
    ("alpha", ["reduce-alpha", "3", "5", "7"], 0),
    ("alpha", ["reduce-alpha", "-g", "9", "2", "4", "9"], 0),
    ("vector_reduction", ["reduce-q2", "-g", "6", "x2+x4+x5+x6"], 0),
    ("pair_reduction", ["reduce-q2", "-g", "6", "x3+x4", "x1+x2"], 0),
    ("pair_reduction", ["reduce-q2", "-g", "6", "x1+x2+x3+x4+x5+x6", "x1+x2"], 0),
    ("classification", ["classify-rseq", "-g", "5", "--members"], 0),
    ("rules", ["rules"], 0),
]

USAGE = [
    [],
    ["eval-form", "x1"],
    ["extendable", "-g", "4", "t_{b_1}"],
    ["verify-lemma", "9.9", "-g", "4"],
    ["reduce-rseq", "[× ⊗]"],
    ["reduce-alpha", "3", "2", "5"],
]

DETERMINISM = [
    ["enumerate", "-g", "5", "--closure", "--elements"],
    ["verify-lemma", "4.8", "-g", "6"],
    ["classify-rseq", "-g", "6", "--members"],
]


def run(binary, args):
    return subprocess.run([binary, *args], capture_output=True, text=True)


def main():
    binary, schema_dir = sys.argv[1], Path(sys.argv[2])
    schemas = {p.name.removesuffix(".schema.json"): json.loads(p.read_text())
               for p in schema_dir.glob("*.schema.json")}
    failures = []

    for name, args, code in CASES:
        r = run(binary, [*args, "--format", "json"])
        label = " ".join(args)
        if r.returncode != code:
            failures.append(f"{label}: exit {r.returncode}, expected {code}")
            continue
        try:
            doc = json.loads(r.stdout)
            jsonschema.validate(doc, schemas[name], cls=jsonschema.Draft202012Validator)
        except (ValueError, jsonschema.ValidationError) as e:
            failures.append(f"{label}: {e}")

    for args in USAGE:
        r = run(binary, args)
        if r.returncode != 2 or not r.stderr:
            failures.append(f"{' '.join(args) or '<none>'}: exit {r.returncode}, expected 2")

    for args in DETERMINISM:
        one = run(binary, [*args, "--format", "json", "--workers", "1"])
        four = run(binary, [*args, "--format", "json", "--workers", "4"])
        if one.stdout != four.stdout:
            failures.append(f"{' '.join(args)}: output differs between worker counts")

    for f in failures:
        print("FAIL", f)
    print(f"{len(CASES)} schema cases, {len(USAGE)} usage cases, "
          f"{len(DETERMINISM)} determinism cases, {len(failures)} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
