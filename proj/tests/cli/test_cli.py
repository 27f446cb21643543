"""End-to-end checks of the polylab command-line tool."""

import csv
import io
import json
import math
import os
import subprocess
import sys
import tempfile

EXE = sys.argv[1]
failures = []


def run(*args, env=None):
    return subprocess.run([EXE, *args], capture_output=True, text=True, env=env)


def expect(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


# eval
r = run("eval", "g", "--tau", "i", "--z", "0.3+0.4i")
v = json.loads(r.stdout)
expect(r.returncode == 0 and abs(v["value"] + 0.530637530952517826) < 1e-12, "eval g regression anchor")

r = run("eval", "sigma", "--tau", "i", "--z", "1e-8")
v = json.loads(r.stdout)
expect(abs(v["value"]["re"] - 1e-8) < 1e-20 and abs(v["ratio_to_z"]["re"] - 1) < 1e-12, "sigma near zero")

r = run("eval", "g", "--tau", "i", "--z", "0")
expect(r.returncode == 2 and json.loads(r.stdout)["signal"] == "SingularInput", "singular input exits with 2")

r = run("eval", "phi", "--tau", "i", "--z", "0.5", "--z0", "0.5", "--N", "2")
expect(r.returncode == 2 and json.loads(r.stdout)["signal"] == "ZeroSignal", "phi zero signal")

r = run("eval", "eta", "--tau", "i")
v = json.loads(r.stdout)
expect(abs(v["eta1"]["re"] - math.pi) < 1e-13, "eta1 at tau = i")

for text, want in [("i", (0, 1)), ("-i", (0, -1)), ("2.5e-3+1e-2i", (2.5e-3, 1e-2)), ("-1-2i", (-1, -2)),
                   ("3", (3, 0)), ("1e-2i", (0, 1e-2))]:
    r = run("eval", "eta", "--tau", "i", "--z", text)
    z = json.loads(r.stdout)["z"]
    expect(r.returncode == 0 and z.endswith("i"), "parse " + text)
    re_s, im_s = z[:-1].rsplit("+", 1) if "+" in z[1:] else z[:-1].rsplit("-", 1)
    im = float(im_s) * (1 if "+" in z[1:] else -1)
    expect(abs(float(re_s) - want[0]) < 1e-15 and abs(im - want[1]) < 1e-15, "value of " + text)

r = run("eval", "g", "--z", "1+")
expect(r.returncode != 0 and r.returncode != 2, "parse error is a usage failure")
r = run("check", "nonsense")
expect(r.returncode != 0, "unknown suite rejected")

# check
r = run("check", "theorem", "--tau", "i", "--N", "2", "--samples", "100", "--seed", "7")
rep = json.loads(r.stdout)
expect(r.returncode == 0 and rep["pass"] and rep["max_abs_residual"] < 1e-6, "theorem example")
expect(list(rep) == ["check", "params", "max_abs_residual", "pass", "runtime_ms", "engine_version"],
       "report keys")
expect(rep["params"]["master_seed"] == 7 and rep["params"]["samples"] == 100, "report echoes inputs")

r = run("check", "product-formula", "--gA", "1", "--gB", "1")
rep = json.loads(r.stdout)
expect(r.returncode == 0 and rep["pass"] and rep["params"]["lemmas"][0]["trace_steps"] <= 40, "product formula")

r = run("check", "all", "--N", "1")
reps = [json.loads(l) for l in r.stdout.splitlines()]
by = {x["check"]: x for x in reps}
expect(r.returncode == 0 and all(x["pass"] for x in reps), "check all --N 1 passes")
expect(by["distribution"]["max_abs_residual"] == 0 and by["pushforward"]["max_abs_residual"] == 0,
       "N = 1 residuals are exactly zero")

a = run("check", "legendre", "--seed", "3").stdout
b = run("check", "legendre", "--seed", "3").stdout
expect(a == b and a, "identical config gives identical reports")

r = run("check", "legendre", "--tol-legendre", "1e-30")
expect(r.returncode == 1 and not json.loads(r.stdout)["pass"], "exit status follows failing report")

r = run("check", "cohomology", "--g", "2", "--n", "2", "--N", "3", "--budget", "1000")
reps = [json.loads(l) for l in r.stdout.splitlines()]
expect(r.returncode == 1 and reps[0]["max_abs_residual"] is None and "budget" in reps[0]["reason"],
       "budget overflow becomes a failed report")

r = run("check", "periodicity", "--format", "csv")
rows = list(csv.reader(io.StringIO(r.stdout)))
expect(rows[0][0] == "check" and len(rows) == 3 and rows[1][0] == "periodicity", "csv reports")

with tempfile.TemporaryDirectory() as d:
    env = dict(os.environ, POLYLAB_OUTPUT_DIR=d)
    r = run("check", "legendre", env=env)
    path = os.path.join(d, "check-legendre.jsonl")
    expect(r.returncode == 0 and r.stdout == "" and os.path.exists(path), "output directory from environment")
    r = run("table", "--grid", "3x3", env=env)
    expect(os.path.exists(os.path.join(d, "table.csv")), "table to output directory")

# table
r = run("table", "--tau", "i", "--grid", "10x10")
rows = list(csv.reader(io.StringIO(r.stdout)))
expect(rows[0] == ["re_z", "im_z", "g"] and len(rows) == 101, "table header and 100 rows")
vals = [float(x[2]) for x in rows[1:]]
# Cell centres: (i, j) and (9 - i, 9 - j) are z and -z modulo the lattice.
sym = max(abs(vals[i * 10 + j] - vals[(9 - i) * 10 + (9 - j)]) for i in range(10) for j in range(10))
expect(sym < 1e-9, "table parity")

r = run("table", "--grid", "2x2", "--radius", "0.4")
expect(r.stdout.count("singular") == 4, "singular marker")
r = run("table", "--grid", "4by4")
expect(r.returncode != 0, "bad grid rejected")

means = []
for m in (0.05, 0.02, 0.01):
    rows = list(csv.reader(io.StringIO(run("table", "--grid", "40x40", "--margin", str(m), "--radius", "1e-9").stdout)))
    means.append(sum(float(x[2]) for x in rows[1:]) / 1600)
expect(all(math.isfinite(x) for x in means) and abs(means[2] - means[1]) < abs(means[1] - means[0]) + 0.05,
       "grid averages stay finite as the margin shrinks")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
