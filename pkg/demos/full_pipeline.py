"""End to end on a synthetic city: files in, comparison report out.

Runs the same subcommands a user would, on a scene written by `synth`.
"""
import csv
import json
import tempfile
from pathlib import Path

from verdant.cli import main

root = Path(tempfile.mkdtemp(prefix="verdant-demo-"))
main(["synth", "--scenario", "random", "--seed", "3", "--output-dir", str(root)])
cfg = str(root / "config.json")
for cmd in ("sgvi", "ndvi", "compare"):
    code = main([cmd, "--config", cfg])
    print(f"verdant {cmd}: exit {code}")

res = root / "results"
truth = json.loads((root / "truth.json").read_text())["truth_network_mean"]

print("\nzone    sGVI   mean   truth")
with open(res / "zones.csv") as f:
    for r in list(csv.DictReader(f))[:6]:
        print(f"{r['zone_id']}  {float(r['sgvi']):5.1f}  {float(r['gvi_mean']):5.1f}  {truth[r['zone_id']]:6.1f}")

print("\nSpearman matrix")
with open(res / "correlation_matrix.csv") as f:
    for r in csv.reader(f):
        print("".join(f"{c:>11}" if i == 0 or not c[0].isdigit() and c[0] != "-" else f"{float(c):11.4f}" for i, c in enumerate(r)))

with open(res / "regression.csv") as f:
    reg = next(csv.DictReader(f))
print(f"\nNDVI = {float(reg['intercept']):.3f} + {float(reg['slope']):.4f} * sGVI, r2 = {float(reg['r2']):.2f}")
print("outputs in", res)
