"""Operator applications and wall time, monolithic versus split."""
import json

from aftkit import bench

for n in (4, 16, 64):
    r = bench.run("chain", n, 4, "wf", repeat=3)
    print(n, r["monolithic"]["applications"], r["split"]["applications"], r["speedup"])

print(json.dumps(bench.run("grid", 4, 2, "wf"), indent=2, sort_keys=True))
