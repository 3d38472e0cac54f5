#!/usr/bin/env python3
"""Solve free-format MPS files with scipy's HiGHS binding.

Prints "<file> <status> <objective>" per file. The objective includes the
constant stored as the negated RHS of the objective row. Kept independent of
the C++ reader on purpose.
"""
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import coo_matrix

BIG = 1e30


def parse(path):
    rows, sense, obj_row = {}, [], None
    cols, integer, cost = {}, [], []
    ent_r, ent_c, ent_v = [], [], []
    rhs = {}
    lb, ub = [], []
    section, in_int = None, False
    with open(path) as f:
        for line in f:
            if not line.strip() or line.startswith("*"):
                continue
            tok = line.split()
            if not line[0].isspace():
                section = tok[0]
                if section == "ENDATA":
                    break
                continue
            if section == "ROWS":
                if tok[0] == "N":
                    obj_row = obj_row or tok[1]
                else:
                    rows[tok[1]] = len(sense)
                    sense.append(tok[0])
            elif section == "COLUMNS":
                if len(tok) >= 3 and tok[1] == "'MARKER'":
                    in_int = tok[2] == "'INTORG'"
                    continue
                if tok[0] not in cols:
                    cols[tok[0]] = len(cost)
                    cost.append(0.0)
                    integer.append(1 if in_int else 0)
                    lb.append(0.0)
                    ub.append(np.inf)
                j = cols[tok[0]]
                for k in range(1, len(tok) - 1, 2):
                    v = float(tok[k + 1])
                    if tok[k] == obj_row:
                        cost[j] += v
                    else:
                        ent_r.append(rows[tok[k]])
                        ent_c.append(j)
                        ent_v.append(v)
            elif section == "RHS":
                start = 0 if len(tok) % 2 == 0 else 1
                for k in range(start, len(tok) - 1, 2):
                    rhs[tok[k]] = float(tok[k + 1])
            elif section == "BOUNDS":
                j = cols[tok[2]]
                v = float(tok[3]) if len(tok) > 3 else 0.0
                v = np.inf if v >= BIG else (-np.inf if v <= -BIG else v)
                kind = tok[0]
                if kind == "UP":
                    ub[j] = v
                elif kind == "LO":
                    lb[j] = v
                elif kind == "FX":
                    lb[j] = ub[j] = v
                elif kind == "FR":
                    lb[j], ub[j] = -np.inf, np.inf
                elif kind == "MI":
                    lb[j] = -np.inf
                elif kind == "PL":
                    ub[j] = np.inf
                elif kind == "BV":
                    integer[j], lb[j], ub[j] = 1, 0.0, 1.0
                else:
                    raise ValueError("bound type " + kind)
    m, n = len(sense), len(cost)
    a = coo_matrix((ent_v, (ent_r, ent_c)), shape=(m, n)).tocsr()
    lo = np.full(m, -np.inf)
    hi = np.full(m, np.inf)
    for name, i in rows.items():
        b = rhs.get(name, 0.0)
        if sense[i] in ("L", "E"):
            hi[i] = b
        if sense[i] in ("G", "E"):
            lo[i] = b
    const = -rhs.get(obj_row, 0.0)
    return np.array(cost), a, lo, hi, np.array(lb), np.array(ub), np.array(integer), const


def solve(path, gap=1e-9):
    c, a, lo, hi, lb, ub, integ, const = parse(path)
    cons = [LinearConstraint(a, lo, hi)] if a.shape[0] else []
    res = milp(c, constraints=cons, bounds=Bounds(lb, ub), integrality=integ,
               options={"mip_rel_gap": gap, "presolve": True})
    if res.status == 0:
        return "optimal", float(res.fun) + const
    return {2: "infeasible", 3: "unbounded"}.get(res.status, "error"), float("nan")


if __name__ == "__main__":
    for p in sys.argv[1:]:
        st, val = solve(p)
        print(f"{p} {st} {val:.17g}")
