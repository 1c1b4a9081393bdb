#!/usr/bin/env python3
"""Regenerate the golden sweep CSV consumed by the frontend plot tests."""

import pathlib

from driftlink.harness import sweep, write_sweep_csv

OUT = pathlib.Path(__file__).resolve().parent.parent / "frontend" / "golden" / "sweep.csv"


def main() -> None:
    rows = sweep(
        {"K": [1, 2, 4, 8], "h": [0.2, 1.0, 5.0]},
        trials=40,
        M=8,
        Nprime=512,
        seed=1234,
        defaults={"N": 32, "sigma2": 0.1, "g": 1.0},
    )
    OUT.parent.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(rows, str(OUT))
    print(f"wrote {len(rows)} rows to {OUT}")


if __name__ == "__main__":
    main()
