"""Degree one and two counts on the twisted P1 bundles, n = 0, 1, 2."""

from gwrubber.cli import run

for n in (0, 1, 2):
    print(f"== n = {n}", flush=True)
    run(["hirzebruch", "--n", str(n), "--connected"])
