"""
Datasets used by the demo configs
=================================

Writes the 128-point IRIS, MOONS and CIRCLES sets and a 16-point blob set
into ``demos/data``. Re-running gives byte-identical files.
"""

from pathlib import Path

from vqasc.datasets import generate, iris_binary, save_csv

here = Path(__file__).resolve().parent / "data"
here.mkdir(exist_ok=True)

# IRIS: setosa against the other two species, 150 -> 128 points
save_csv(iris_binary().subsample(128, 0), here / "iris.csv")

# two interleaved half circles and two concentric rings, light noise
save_csv(generate("moons", 128, 0.05, seed=0), here / "moons.csv")
save_csv(generate("circles", 128, 0.05, seed=0, factor=0.5), here / "circles.csv")

# a small, well separated set for the oracle comparison
save_csv(generate("blobs", 16, seed=0), here / "blobs16.csv")

for p in sorted(here.glob("*.csv")):
    print(p.name, sum(1 for _ in p.open()) - 1, "rows")
