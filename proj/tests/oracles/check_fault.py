#!/usr/bin/env python3
"""Compare the C++ fault analysis against scc_reference.py.

    check_fault.py <oracle_dump> <grid.json>

Checks the all-on admittance entrywise, every commitment at alpha = 1, and
random commitment/availability states.
"""
import json
import os
import subprocess
import sys

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
import scc_reference as ref  # noqa: E402


def run(exe, *args):
    return json.loads(subprocess.check_output([exe, *args]))


def main():
    exe, path = sys.argv[1], sys.argv[2]
    grid = ref.load(path)
    bus_ids = [b["id"] for b in grid["buses"]]
    failures = 0

    y_cpp = np.array([[complex(re, im) for re, im in row] for row in run(exe, path, "admittance")])
    y_ref, _ = ref.admittance(grid, [1] * len(grid["generators"]))
    dy = np.max(np.abs(y_cpp - y_ref))
    print(f"admittance max entry difference {dy:.3e}")
    if dy > 1e-9 * max(1.0, np.max(np.abs(y_ref))):
        failures += 1

    for label, args in (("exhaustive", ("exhaustive",)), ("random", ("random", "300", "11"))):
        worst = 0.0
        rows = run(exe, path, *args)
        for s in rows:
            for b, got in zip(bus_ids, s["currents"]):
                want = ref.scc(grid, s["u"], s["alpha"], b)
                worst = max(worst, abs(got - want) / max(1.0, abs(want)))
        print(f"{label}: {len(rows)} states, worst relative difference {worst:.3e}")
        if worst > 1e-9:
            failures += 1
    print("PASS" if failures == 0 else "FAIL")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
