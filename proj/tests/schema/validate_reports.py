#!/usr/bin/env python3
"""Runs the CLI on small scenarios and checks reports against the schema,
exit codes, CSV shape and byte-determinism across worker counts."""

import csv
import io
import json
import os
import subprocess
import sys

import jsonschema

cli, root = sys.argv[1], sys.argv[2]
schema = json.load(open(os.path.join(root, "schema", "report.schema.json")))
failures = []


def run(args, workers=None):
    env = dict(os.environ)
    if workers is not None:
        env["HJLAB_WORKERS"] = str(workers)
    p = subprocess.run([cli] + args, capture_output=True, text=True, env=env)
    return p.returncode, p.stdout, p.stderr


def expect(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


quick = os.path.join(root, "scenarios", "quick.yaml")
controls = os.path.join(root, "scenarios", "negative-controls.yaml")

rc, out1, _ = run(["verify", "--scenario", quick], workers=1)
expect(rc == 0, "quick scenario passes (rc %d)" % rc)
report = json.loads(out1)
try:
    jsonschema.validate(report, schema)
    expect(True, "quick report matches schema")
except jsonschema.ValidationError as e:
    expect(False, "quick report matches schema: %s" % e.message)

rc, out3, _ = run(["verify", "--scenario", quick], workers=3)
expect(out1 == out3, "report bytes identical for 1 and 3 workers")

rc, out, _ = run(["verify", "--scenario", controls, "--resolution", "16x32", "--per-node"])
rep = json.loads(out)
jsonschema.validate(rep, schema)
comps = [c for r in rep["results"] for c in r["components"]]
expect(rc == 0 and comps and all(c["kind"] == "expected-nonzero" and c["status"] == "pass" for c in comps),
       "negative controls report expected-nonzero: pass")
expect(all(len(c.get("per_node", [])) > 0 for c in comps), "per-node residuals present")

rc, out, _ = run(["verify", "--case", "identity-s2", "--case", "squash-s2", "--check", "tension",
                  "--check", "jacobi", "--resolution", "12x24", "--format", "csv", "--timing"])
rows = list(csv.reader(io.StringIO(out)))
expect(rows[0] == ["check", "case", "statistic", "value", "status"], "csv header")
expect(len(rows) - 1 == 2 * 2 * 4, "csv has one row per check x case x statistic")

rc, out, _ = run(["verify", "--case", "identity-s2", "--check", "tension", "--resolution", "12x24", "--timing"])
rep = json.loads(out)
jsonschema.validate(rep, schema)
expect(all("wall_time" in r for r in rep["results"]), "--timing records wall time")

rc, _, _ = run(["verify", "--check", "tension", "--case", "nope"])
expect(rc == 4, "unknown case exits 4 (rc %d)" % rc)
rc, _, _ = run(["verify", "--rmax", "9"])
expect(rc == 4, "rmax out of range exits 4 (rc %d)" % rc)
rc, _, _ = run(["verify", "--bogus"])
expect(rc == 4, "unknown flag exits 4 (rc %d)" % rc)
rc, _, _ = run(["verify", "--case", "identity-s2", "--check", "tension", "--resolution", "12x24",
                "--out", "/nonexistent-dir/r.json"])
expect(rc == 3, "unwritable output exits 3 (rc %d)" % rc)
rc, out, _ = run(["verify", "--case", "squash-s2", "--check", "tension", "--resolution", "12x24"])
expect(rc == 0, "designed controls do not fail the run (rc %d)" % rc)
rc, out, _ = run(["list"])
expect(rc == 0 and "veronese-s4" in out and "theta-span" in out, "list enumerates cases and checks")

sys.exit(1 if failures else 0)
