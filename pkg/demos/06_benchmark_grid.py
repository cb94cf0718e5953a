"""Drive the benchmark harness on a small grid and read its reports.
The same grid is reachable from the shell via `sparseconv run`.

Run: python demos/06_benchmark_grid.py
"""

import json
import tempfile
from pathlib import Path

from sparseconv import run_benchmark

config = {
    "schema_version": 1,
    "delta": 0.1,
    "c1": 0.5,
    "engines": ["naive", "dense-fft", "approx", "exact"],
    "seeds": [0, 1, 2, 3, 4],
    "instances": [
        {"id": "n1k", "n": 1024, "s_a": 4, "s_b": 4, "k": 16},
        {"id": "n8k", "n": 8192, "s_a": 8, "s_b": 8, "k": 64},
    ],
}

out_dir = Path(tempfile.mkdtemp(prefix="sparseconv-bench-"))
summary = run_benchmark(config, out_dir, jobs=2)

print(f"reports under {out_dir}\n")
print("success rate per (instance, engine):")
for cell in summary["cells"]:
    print(f"  {cell['instance']:4s} {cell['engine']:7s} "
          f"{cell['successes']}/{cell['runs']} (failures: {cell['failures']})")

rows = (out_dir / "runs.csv").read_text().splitlines()
print(f"\nruns.csv holds {len(rows) - 1} rows; first three:")
for line in rows[:4]:
    print("  " + line)

print("\nthe summary lives in", out_dir / "summary.json")
print("note:", json.loads((out_dir / "summary.json").read_text())["non_deterministic_fields"],
      "are excluded from reproducibility guarantees")
