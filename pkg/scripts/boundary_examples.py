"""Print the canonical near/far boundary numbers and sweep the numeric one.

Covers the worked examples the library is sanity-checked against: a 2 m x 3 m
panel at 2.4 GHz, a 0.36 m array at 28 GHz (alone, MIMO, and behind a relay
surface), plus a sweep comparing the closed form against the phase-threshold
bisection and the gain-floor boundary for growing half-wave arrays.
"""

import argparse
import math
from pathlib import Path

from nearfield import (
    SPEED_OF_LIGHT,
    build_ula,
    effective_rayleigh_distance,
    mimo_rayleigh_distance,
    numeric_phase_boundary,
    rayleigh_distance,
    ris_boundary_d2,
)
from nearfield.cli import emit_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    lam24 = SPEED_OF_LIGHT / 2.4e9
    lam28 = SPEED_OF_LIGHT / 28e9
    panel = math.hypot(2.0, 3.0)
    print(f"panel {panel:.3f} m @ 2.4 GHz : {rayleigh_distance(panel, lam24):8.1f} m")
    print(f"0.36 m @ 28 GHz            : {rayleigh_distance(0.36, lam28):8.1f} m")
    print(f"0.36 m both ends @ 28 GHz  : {mimo_rayleigh_distance(0.36, 0.36, lam28):8.1f} m")
    for d1 in (30.0, 50.0, 100.0, 300.0):
        d2 = ris_boundary_d2(0.36, lam28, d1)
        label = "unbounded" if math.isinf(d2) else f"{d2:8.1f} m"
        print(f"relay 0.36 m @ 28 GHz, d1 = {d1:5.0f} m -> d2 boundary {label}")

    rows = [("n", "aperture_m", "closed_form_m", "phase_numeric_m", "gain_floor_m")]
    for n in (32, 64, 128, 256, 512):
        geom = build_ula(n, lam28 / 2)
        closed = rayleigh_distance(geom.aperture, lam28)
        numeric = numeric_phase_boundary(geom, 28e9, 0.0)
        erd = effective_rayleigh_distance(geom, 28e9, 0.0)
        rows.append((n, geom.aperture, closed, numeric, erd))
        print(f"n={n:4d} closed {closed:9.2f}  numeric {numeric:9.2f}  gain-floor {erd:9.2f}")
    emit_csv(rows, out / "boundary_sweep.csv")
    print(f"wrote {out / 'boundary_sweep.csv'}")


if __name__ == "__main__":
    main()
