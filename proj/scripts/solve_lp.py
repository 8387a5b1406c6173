#!/usr/bin/env python3
"""Solve an exported sizing model with scipy's HiGHS MILP and print the result.

Reads the LP subset written by `mgplan --mode export-milp`. With --expect-npc,
exits non-zero unless the optimum matches the given value.
"""
import argparse
import json
import re
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import lil_matrix

SECTIONS = {"minimize", "subject to", "bounds", "generals", "binaries", "end"}
TOKEN = re.compile(r"<=|>=|=|[+-]|[^\s+\-<>=]+")


def number(tok):
    if tok in ("+inf", "inf"):
        return np.inf
    if tok == "-inf":
        return -np.inf
    return float(tok)


def parse_terms(tokens, i, index):
    """Reads "[sign] coef name ..." until a comparison or the end."""
    terms = []
    sign = 1.0
    while i < len(tokens) and tokens[i] not in ("<=", ">=", "="):
        tok = tokens[i]
        if tok in "+-":
            sign = -1.0 if tok == "-" else 1.0
            i += 1
            continue
        coef = 1.0
        try:
            coef = float(tok)
            i += 1
            tok = tokens[i]
        except ValueError:
            pass
        terms.append((index(tok), sign * coef))
        sign = 1.0
        i += 1
    return terms, i


def read_lp(text):
    sections = {}
    current = None
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].rstrip()
        if not line.strip():
            continue
        key = line.strip().lower()
        if key in SECTIONS:
            current = key
            sections.setdefault(current, [])
            continue
        sections[current].append(line)

    names, pos = [], {}

    def index(name):
        if name not in pos:
            pos[name] = len(names)
            names.append(name)
        return pos[name]

    bounds = {}
    for line in sections.get("bounds", []):
        tok = line.split()
        if len(tok) == 2 and tok[1] == "free":
            bounds[index(tok[0])] = (-np.inf, np.inf)
        elif len(tok) == 3 and tok[1] == "=":
            v = number(tok[2])
            bounds[index(tok[0])] = (v, v)
        elif len(tok) == 3 and tok[1] == ">=":
            bounds[index(tok[0])] = (number(tok[2]), np.inf)
        elif len(tok) == 5:
            bounds[index(tok[2])] = (number(tok[0]), number(tok[4]))
        else:
            raise ValueError(f"unsupported bound: {line}")

    obj_tokens = TOKEN.findall(" ".join(sections["minimize"]).split(":", 1)[1])
    objective, _ = parse_terms(obj_tokens, 0, index)

    rows = []
    tokens = TOKEN.findall(" ".join(sections.get("subject to", [])))
    i = 0
    while i < len(tokens):
        name = tokens[i].rstrip(":")
        terms, i = parse_terms(tokens, i + 1, index)
        sense, rhs = tokens[i], number(tokens[i + 1])
        rows.append((name, terms, sense, rhs))
        i += 2

    integer = set()
    for sec in ("generals", "binaries"):
        for line in sections.get(sec, []):
            for name in line.split():
                integer.add(index(name))
                if sec == "binaries":
                    bounds[pos[name]] = (0.0, 1.0)
    return names, bounds, objective, rows, integer


def solve(text, time_limit):
    names, bounds, objective, rows, integer = read_lp(text)
    n = len(names)
    c = np.zeros(n)
    for j, v in objective:
        c[j] += v
    a = lil_matrix((len(rows), n))
    lo = np.full(len(rows), -np.inf)
    hi = np.full(len(rows), np.inf)
    for r, (_, terms, sense, rhs) in enumerate(rows):
        for j, v in terms:
            a[r, j] += v
        if sense in ("<=", "="):
            hi[r] = rhs
        if sense in (">=", "="):
            lo[r] = rhs
    lb = np.array([bounds.get(j, (0.0, np.inf))[0] for j in range(n)])
    ub = np.array([bounds.get(j, (0.0, np.inf))[1] for j in range(n)])
    kinds = np.array([1 if j in integer else 0 for j in range(n)])
    res = milp(c, constraints=LinearConstraint(a.tocsr(), lo, hi), integrality=kinds,
               bounds=Bounds(lb, ub), options={"time_limit": time_limit, "mip_rel_gap": 0.0})
    return names, res


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("model")
    ap.add_argument("--expect-npc", type=float)
    ap.add_argument("--rel-tol", type=float, default=1e-6)
    ap.add_argument("--time-limit", type=float, default=600.0)
    ap.add_argument("--values", help="write the solution as JSON {\"values\": {...}}")
    args = ap.parse_args()

    with open(args.model) as f:
        names, res = solve(f.read(), args.time_limit)
    if res.x is None:
        print(f"no solution: {res.message}")
        return 3
    sizing = {k: round(res.x[names.index(k)]) for k in ("n_pv", "n_wt", "n_bess")}
    print(f"objective {res.fun:.6f} sizing {sizing} status {res.status}")
    if args.values:
        with open(args.values, "w") as f:
            json.dump({"values": dict(zip(names, res.x.tolist()))}, f)
    if args.expect_npc is not None:
        err = abs(res.fun - args.expect_npc) / max(1.0, abs(args.expect_npc))
        if res.status != 0 or err > args.rel_tol:
            print(f"mismatch: expected {args.expect_npc:.6f}, rel diff {err:.2e}")
            return 1
        print("match")
    return 0


if __name__ == "__main__":
    sys.exit(main())
