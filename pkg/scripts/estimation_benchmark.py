"""Monte-Carlo NMSE of sparse channel estimation: angular vs. polar dictionary.

Users are dropped at controlled distances (in units of the Rayleigh distance)
with random angles; recovery runs greedy matching pursuit from compressed
pilot measurements. The polar dictionary should win deep inside the boundary
and tie in the far field.
"""

import argparse
import time
from pathlib import Path

from nearfield import (
    COMPARE_HEADER,
    CarrierConfig,
    ScenarioConfig,
    angular_codebook,
    build_ula,
    compare_codebooks,
    polar_codebook,
    SPEED_OF_LIGHT,
    rayleigh_distance,
)
from nearfield.cli import emit_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--elements", type=int, default=128)
    ap.add_argument("--freq", type=float, default=28e9)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--snrs", default="10,20")
    ap.add_argument("--distance-fracs", default="0.05,0.1,0.3,1.0,100.0",
                    help="user distances in units of the Rayleigh distance")
    ap.add_argument("--seed", type=int, default=11)
    ap.add_argument("--threads", type=int, default=4)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    lam = SPEED_OF_LIGHT / args.freq
    geom = build_ula(args.elements, lam / 2)
    r_ray = rayleigh_distance(geom.aperture, lam)
    scenario = ScenarioConfig(arrays={"bs": geom}, carrier=CarrierConfig(args.freq),
                              users=(), paths=(), seed=args.seed)

    cb_far = angular_codebook(geom, args.freq, args.elements)
    t0 = time.perf_counter()
    cb_polar = polar_codebook(geom, args.freq, args.elements, r_min=1.0)
    print(f"polar dictionary: {cb_polar.size} atoms "
          f"({time.perf_counter() - t0:.1f} s to build)")

    distances = [float(x) * r_ray for x in args.distance_fracs.split(",")]
    snrs = [float(x) for x in args.snrs.split(",")]
    t0 = time.perf_counter()
    rows = compare_codebooks(scenario, cb_far, cb_polar, args.trials, distances,
                             snrs, pilot_count=args.elements // 4,
                             threads=args.threads)
    print(f"{args.trials} trials x {len(distances) * len(snrs)} cells "
          f"in {time.perf_counter() - t0:.1f} s")

    emit_csv([list(COMPARE_HEADER)] + [list(r) for r in rows], out / "estimation_nmse.csv")
    for r in rows:
        print(f"r = {r[0] / r_ray:6.2f} R, snr = {r[1]:4.0f} dB, "
              f"{r[2]:7s}: {r[3]:7.2f} dB")
    print(f"wrote {out / 'estimation_nmse.csv'}")


if __name__ == "__main__":
    main()
