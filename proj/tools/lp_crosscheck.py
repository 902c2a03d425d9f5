#!/usr/bin/env python3
"""Solve exported LP models with HiGHS and compare against the exact solver.

    pip install highspy
    python3 tools/lp_crosscheck.py build/tools/fogplace --seeds 20
"""

import argparse
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import highspy


def run(cmd):
    return subprocess.run(cmd, capture_output=True, text=True)


def highs_objective(lp_path):
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.readModel(str(lp_path))
    h.run()
    status = h.modelStatusToString(h.getModelStatus())
    if status != "Optimal":
        return status, None
    return status, h.getInfo().objective_function_value


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("cli")
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--apps", type=int, default=7)
    ap.add_argument("--max-qos", type=float, default=1.5)
    args = ap.parse_args()

    relaxations = {"none": [], "drop_qos": ["--no-qos"], "drop_security": ["--no-security"],
                   "both": ["--no-qos", "--no-security"]}
    failures = 0
    checked = 0
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        for seed in range(args.seeds):
            inst = tmp / f"inst{seed}.json"
            r = run([args.cli, "generate", "-s", str(seed), "--apps", str(args.apps),
                     "--max-qos", str(args.max_qos), "-o", str(inst)])
            if r.returncode != 0:
                sys.exit(r.stderr)
            for name, flags in relaxations.items():
                lp = tmp / f"m{seed}_{name}.lp"
                report = tmp / f"r{seed}_{name}.json"
                r = run([args.cli, "solve", str(inst), *flags, "--export-lp", str(lp), "-o", str(report)])
                ours = json.loads(report.read_text())
                status, obj = highs_objective(lp)
                checked += 1
                if ours["status"] == "infeasible":
                    ok = status == "Infeasible"
                    line = f"seed {seed:2d} {name:13s} infeasible / HiGHS {status}"
                else:
                    total = ours["cost"]["total"]
                    ok = obj is not None and abs(obj - total) <= 1e-6 * max(1.0, abs(total))
                    line = f"seed {seed:2d} {name:13s} exact {total:.9f} / HiGHS {obj}"
                print(("ok   " if ok else "DIFF ") + line)
                failures += not ok
    print(f"{checked - failures}/{checked} agree")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
