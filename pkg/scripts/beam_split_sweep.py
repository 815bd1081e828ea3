"""Beam split across the band: phase shifters vs. per-subarray delay lines.

Sweeps the number of delay-line subarrays L and the fractional bandwidth,
recording the minimum gain over the band at a fixed near-field target.  L=1
with zero delay is the pure phase-shifter baseline; L=N is one delay per
element.
"""

import argparse
import math
from pathlib import Path

from nearfield import (
    CarrierConfig,
    PolarPoint,
    build_ula,
    min_band_gain,
    ps_wideband,
    SPEED_OF_LIGHT,
    ttd_pdf,
)
from nearfield.cli import emit_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--elements", type=int, default=256)
    ap.add_argument("--fc", type=float, default=100e9)
    ap.add_argument("--bandwidth", type=float, default=10e9)
    ap.add_argument("--subcarriers", type=int, default=128)
    ap.add_argument("--theta-deg", type=float, default=30.0)
    ap.add_argument("--r", type=float, default=10.0)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    geom = build_ula(args.elements, SPEED_OF_LIGHT / args.fc / 2)
    target = PolarPoint(math.radians(args.theta_deg), args.r)
    carrier = CarrierConfig(args.fc, args.bandwidth, args.subcarriers)

    rows = [("num_subarrays", "min_band_gain")]
    ps_min = min_band_gain(geom, carrier, ps_wideband(geom, carrier, target), target)
    rows.append((0, ps_min))  # 0 = no delay lines at all
    print(f"phase shifters only      : min gain {ps_min:.4f}")
    sweep = [l for l in (2, 4, 8, 16, 32, 64, 128, 256) if args.elements % l == 0]
    for l in sweep:
        g = min_band_gain(geom, carrier, ttd_pdf(geom, carrier, target, l), target)
        rows.append((l, g))
        print(f"delay lines, L = {l:4d}    : min gain {g:.4f}")
    emit_csv(rows, out / "beamsplit_subarrays.csv")

    rows = [("bandwidth_hz", "ps_min_gain", "ttd16_min_gain")]
    for frac in (0.01, 0.02, 0.05, 0.1, 0.15, 0.2):
        bw = frac * args.fc
        cc = CarrierConfig(args.fc, bw, args.subcarriers)
        g_ps = min_band_gain(geom, cc, ps_wideband(geom, cc, target), target)
        g_ttd = min_band_gain(geom, cc, ttd_pdf(geom, cc, target, 16), target)
        rows.append((bw, g_ps, g_ttd))
        print(f"B/fc = {frac:4.2f}: ps {g_ps:.4f}  ttd16 {g_ttd:.4f}")
    emit_csv(rows, out / "beamsplit_bandwidth.csv")
    print(f"wrote CSVs under {out}/")


if __name__ == "__main__":
    main()
