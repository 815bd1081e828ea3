"""Gain maps contrasting a focused beam with a steered one.

Writes two CSV heatmaps over (angle, distance).  The focused design
concentrates energy around a single cell; the steered design lights up the
whole target angle beyond the boundary but falls apart close in.
"""

import argparse
import math
from pathlib import Path

import numpy as np

from nearfield import (
    PolarPoint,
    build_ula,
    focus_weights,
    gain_map,
    SPEED_OF_LIGHT,
    rayleigh_distance,
    steer_weights,
)
from nearfield.cli import emit_csv


def dump(path, thetas, rs, m):
    table = [["theta_deg\\r_m"] + [float(r) for r in rs]]
    for ti, row in zip(thetas, m):
        table.append([math.degrees(float(ti))] + [float(g) for g in row])
    emit_csv(table, path)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--elements", type=int, default=256)
    ap.add_argument("--freq", type=float, default=28e9)
    ap.add_argument("--theta-deg", type=float, default=10.0)
    ap.add_argument("--r", type=float, default=20.0)
    ap.add_argument("--grid", type=int, default=200)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    lam = SPEED_OF_LIGHT / args.freq
    geom = build_ula(args.elements, lam / 2)
    r_ray = rayleigh_distance(geom.aperture, lam)
    thetas = np.linspace(-math.pi / 3, math.pi / 3, args.grid)
    rs = np.geomspace(max(geom.aperture, 1.0), 2.0 * r_ray, args.grid)
    # snap the target onto the grid so the focal cell is actually sampled
    # (the focused spot is much narrower than a coarse grid step)
    theta = float(thetas[np.argmin(np.abs(thetas - math.radians(args.theta_deg)))])
    r_focus = float(rs[np.argmin(np.abs(rs - args.r))])

    m_focus = gain_map(geom, args.freq, focus_weights(geom, args.freq, PolarPoint(theta, r_focus)), thetas, rs)
    m_steer = gain_map(geom, args.freq, steer_weights(geom, args.freq, theta), thetas, rs)
    dump(out / "fieldmap_focus.csv", thetas, rs, m_focus)
    dump(out / "fieldmap_steer.csv", thetas, rs, m_steer)

    i, j = np.unravel_index(int(np.argmax(m_focus)), m_focus.shape)
    print(f"rayleigh distance  : {r_ray:.2f} m")
    print(f"focus peak         : {m_focus[i, j]:.4f} at "
          f"({math.degrees(thetas[i]):.2f} deg, {rs[j]:.2f} m)")
    k = int(np.argmin(np.abs(thetas - theta)))
    print(f"steer gain on-angle: min {m_steer[k].min():.4f}, max {m_steer[k].max():.4f}")
    print(f"wrote {out / 'fieldmap_focus.csv'} and {out / 'fieldmap_steer.csv'}")


if __name__ == "__main__":
    main()
