"""Command-line front end: scenario loading, subcommand dispatch, CSV/JSON
emission.

Every run writes its outputs plus a ``<subcommand>_manifest.json`` listing
them.  CSV bodies are deterministic: floats printed to 12 significant digits,
LF line endings, fixed-order reductions everywhere -- identical (subcommand,
config, seed) runs produce byte-identical files at any thread count.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .beamforming import (
    focus_weights,
    gain_map,
    gain_vs_frequency,
    ps_wideband,
    steer_weights,
    ttd_pdf,
)
from .boundaries import (
    BoundaryCriterion,
    mimo_rayleigh_distance,
    phase_boundary_report,
    rayleigh_distance,
    ris_boundary_d2,
)
from .capacity import dof_vs_distance, sdma_compare
from .carrier import SPEED_OF_LIGHT, CarrierConfig
from .codebook import (
    CodebookKind,
    angular_codebook,
    codebook_coherence_profile,
    polar_codebook,
    save_codebook,
)
from .errors import (
    ConfigError,
    DomainError,
    InvalidArgumentError,
    NumericError,
    UnsupportedModelError,
)
from .estimation import COMPARE_HEADER, compare_codebooks
from .geometry import PolarPoint, build_ula
from .scenario import load_scenario


@dataclass
class RunManifest:
    subcommand: str
    config_path: str | None
    seed: int
    outputs: list[str]
    tool_version: str
    duration_seconds: float


def _fmt_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.12g" % float(v)
    return str(v)


def emit_csv(table, path) -> None:
    """RFC-4180-style CSV: header row required, LF endings, %.12g floats."""
    rows = [list(r) for r in table]
    if not rows:
        raise InvalidArgumentError("table must include a header row")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InvalidArgumentError("table must be rectangular")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for r in rows:
            writer.writerow([_fmt_cell(v) for v in r])


def _require_flag(args, name: str):
    v = getattr(args, name.lstrip("-").replace("-", "_"))
    if v is None:
        raise ConfigError(f"missing required flag '{name}'", key=name)
    return v


def _parse_floats(text: str, flag: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise ConfigError(f"flag '{flag}' must be a comma-separated float list", key=flag) from None
    if not vals:
        raise ConfigError(f"flag '{flag}' must name at least one value", key=flag)
    return vals


def _resolve_geometry(args):
    """Geometry + carrier either from --config or from --elements/--spacing/--freq."""
    if getattr(args, "config", None):
        scenario = load_scenario(args.config)
        name = getattr(args, "array", None)
        if name is None:
            name = next(iter(scenario.arrays))
        if name not in scenario.arrays:
            raise ConfigError(f"array '{name}' not present in config", key=f"arrays.{name}")
        return scenario, scenario.arrays[name], scenario.carrier
    for flag in ("--elements", "--spacing", "--freq"):
        _require_flag(args, flag)
    geom = build_ula(args.elements, args.spacing)
    carrier = CarrierConfig(
        center_frequency=args.freq,
        bandwidth=getattr(args, "bandwidth", 0.0) or 0.0,
        num_subcarriers=getattr(args, "subcarriers", 1) or 1,
    )
    return None, geom, carrier


# --- subcommand handlers -------------------------------------------------------


def _cmd_boundary(args, out_dir: Path) -> list[str]:
    speed = args.speed
    freq = _require_flag(args, "--freq")
    lam = speed / freq
    info: dict = {"mode": args.mode, "frequency_hz": freq, "propagation_speed_mps": speed}

    if args.mode == "simo":
        aperture = _require_flag(args, "--aperture")
        value = rayleigh_distance(aperture, lam)
        info.update(criterion=BoundaryCriterion.PHASE_PI_OVER_8.value,
                    aperture_m=aperture, closed_form_m=value)
        print("rayleigh_distance_m = %.12g" % value)
    elif args.mode == "mimo":
        aperture = _require_flag(args, "--aperture")
        aperture_rx = _require_flag(args, "--aperture-rx")
        value = mimo_rayleigh_distance(aperture, aperture_rx, lam)
        info.update(criterion=BoundaryCriterion.PHASE_PI_OVER_8.value,
                    aperture_tx_m=aperture, aperture_rx_m=aperture_rx, closed_form_m=value)
        print("mimo_rayleigh_distance_m = %.12g" % value)
    elif args.mode == "ris":
        aperture = _require_flag(args, "--aperture")
        d1 = _require_flag(args, "--d1")
        value = ris_boundary_d2(aperture, lam, d1)
        info.update(aperture_m=aperture, d1_m=d1,
                    rayleigh_distance_m=rayleigh_distance(aperture, lam),
                    d2_boundary_m=value)
        print("d2_boundary_m = %s" % ("unbounded" if math.isinf(value) else "%.12g" % value))
    else:  # numeric
        elements = _require_flag(args, "--elements")
        spacing = _require_flag(args, "--spacing")
        geom = build_ula(elements, spacing)
        rep = phase_boundary_report(geom, freq, math.radians(args.theta_deg), speed=speed)
        info.update(criterion=rep.criterion.value, aperture_m=geom.aperture,
                    closed_form_m=rep.closed_form, numeric_m=rep.numeric,
                    theta_deg=args.theta_deg)
        print("closed_form_m = %.12g" % rep.closed_form)
        print("numeric_boundary_m = %.12g" % rep.numeric)

    csv_path = out_dir / "boundary.csv"
    emit_csv(
        [("quantity", "value")] + [(k, v) for k, v in info.items()],
        csv_path,
    )
    json_path = out_dir / "boundary.json"
    json_path.write_text(json.dumps(info, indent=2, sort_keys=True) + "\n")
    return [str(csv_path), str(json_path)]


def _gain_map_threaded(geom, f, w, thetas, rs, speed, threads: int):
    if threads <= 1 or rs.size < 2:
        return gain_map(geom, f, w, thetas, rs, speed=speed)
    chunks = np.array_split(np.arange(rs.size), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda idx: gain_map(geom, f, w, thetas, rs[idx], speed=speed), chunks))
    return np.concatenate(parts, axis=1)


def _cmd_fieldmap(args, out_dir: Path) -> list[str]:
    _, geom, carrier = _resolve_geometry(args)
    f = carrier.center_frequency
    speed = carrier.propagation_speed
    theta = math.radians(_require_flag(args, "--theta-deg"))
    if args.design == "focus":
        r = _require_flag(args, "--r")
        w = focus_weights(geom, f, PolarPoint(theta, r), speed=speed)
    else:
        w = steer_weights(geom, f, theta, speed=speed)

    lam = speed / f
    r_lo = args.r_min if args.r_min is not None else max(geom.aperture, 1e-3)
    r_hi = args.r_max if args.r_max is not None else 2.0 * rayleigh_distance(geom.aperture, lam)
    thetas = np.radians(np.linspace(args.theta_min_deg, args.theta_max_deg, args.theta_count))
    rs = np.geomspace(r_lo, r_hi, args.r_count)

    m = _gain_map_threaded(geom, f, w, thetas, rs, speed, args.threads)
    i, j = np.unravel_index(int(np.argmax(m)), m.shape)
    print("peak_gain = %.12g at theta_deg = %.6g, r_m = %.6g"
          % (m[i, j], math.degrees(thetas[i]), rs[j]))

    table = [["theta_deg\\r_m"] + [float(r) for r in rs]]
    for ti, row in zip(thetas, m):
        table.append([math.degrees(float(ti))] + [float(g) for g in row])
    csv_path = out_dir / "fieldmap.csv"
    emit_csv(table, csv_path)
    return [str(csv_path)]


def _cmd_codebook(args, out_dir: Path) -> list[str]:
    _, geom, carrier = _resolve_geometry(args)
    f = carrier.center_frequency
    if args.kind == "angular":
        size = args.size if args.size is not None else geom.num_elements
        cb = angular_codebook(geom, f, size)
    else:
        angles = args.angles if args.angles is not None else geom.num_elements
        r_min = _require_flag(args, "--r-min")
        cb = polar_codebook(geom, f, angles, mu_target=args.mu, r_min=r_min)
    labels_path = out_dir / "codebook_labels.csv"
    entries_path = out_dir / "codebook_entries.csv"
    save_codebook(cb, labels_path, entries_path)
    outputs = [str(labels_path), str(entries_path)]
    print("codewords = %d" % cb.size)
    if cb.kind is CodebookKind.POLAR:
        profile = codebook_coherence_profile(cb)
        profile_path = out_dir / "codebook_profile.json"
        profile_path.write_text(json.dumps(profile, indent=2, sort_keys=True) + "\n")
        outputs.append(str(profile_path))
        print("max_adjacent_ring_coherence = %.12g" % profile["max_adjacent_ring_coherence"])
    return outputs


def _cmd_estimate(args, out_dir: Path) -> list[str]:
    if not args.config:
        raise ConfigError("missing required flag '--config'", key="--config")
    scenario, geom, carrier = _resolve_geometry(args)
    if args.seed is not None:
        scenario = type(scenario)(
            arrays=scenario.arrays, carrier=scenario.carrier, users=scenario.users,
            paths=scenario.paths, seed=args.seed, amplitude_model=scenario.amplitude_model,
        )
    distances = _parse_floats(_require_flag(args, "--distances"), "--distances")
    snrs = _parse_floats(_require_flag(args, "--snrs"), "--snrs")
    n = geom.num_elements
    pilots = args.pilots if args.pilots is not None else max(1, n // 4)
    angular_size = args.angular_size if args.angular_size is not None else n
    polar_angles = args.polar_angles if args.polar_angles is not None else n
    r_min = args.r_min if args.r_min is not None else min(distances) / 4.0
    f = carrier.center_frequency

    cb_far = angular_codebook(geom, f, angular_size, speed=carrier.propagation_speed)
    cb_polar = polar_codebook(
        geom, f, polar_angles, mu_target=args.mu, r_min=r_min, speed=carrier.propagation_speed
    )
    rows = compare_codebooks(
        scenario, cb_far, cb_polar, args.trials, distances, snrs,
        pilot_count=pilots, sparsity=args.sparsity, threads=args.threads,
    )
    csv_path = out_dir / "estimate.csv"
    emit_csv([list(COMPARE_HEADER)] + [list(r) for r in rows], csv_path)
    for r in rows:
        print("distance_m = %g, snr_db = %g, %s mean_nmse_db = %.4f" % (r[0], r[1], r[2], r[3]))
    return [str(csv_path)]


def _cmd_beamsplit(args, out_dir: Path) -> list[str]:
    fc = _require_flag(args, "--fc")
    bandwidth = _require_flag(args, "--bandwidth")
    elements = _require_flag(args, "--elements")
    spacing = args.spacing if args.spacing is not None else SPEED_OF_LIGHT / (2.0 * fc)
    geom = build_ula(elements, spacing)
    carrier = CarrierConfig(fc, bandwidth, args.subcarriers)
    p = PolarPoint(math.radians(_require_flag(args, "--theta-deg")), _require_flag(args, "--r"))

    wb_ps = ps_wideband(geom, carrier, p)
    wb_ttd = ttd_pdf(geom, carrier, p, args.subarrays)
    ps_curve = gain_vs_frequency(geom, carrier, wb_ps, p)
    ttd_curve = gain_vs_frequency(geom, carrier, wb_ttd, p)

    table = [("frequency_hz", "ps_gain", "ttd_gain")]
    for (f, g_ps), (_, g_ttd) in zip(ps_curve, ttd_curve):
        table.append((f, g_ps, g_ttd))
    csv_path = out_dir / "beamsplit.csv"
    emit_csv(table, csv_path)
    print("ps_min_gain = %.12g" % min(g for _, g in ps_curve))
    print("ttd_min_gain = %.12g" % min(g for _, g in ttd_curve))
    return [str(csv_path)]


def _cmd_dof(args, out_dir: Path) -> list[str]:
    tx = build_ula(_require_flag(args, "--tx-elements"), _require_flag(args, "--tx-spacing"), name="tx")
    rx = build_ula(_require_flag(args, "--rx-elements"), _require_flag(args, "--rx-spacing"), name="rx")
    carrier = CarrierConfig(_require_flag(args, "--freq"))
    distances = sorted(_parse_floats(_require_flag(args, "--distances"), "--distances"))
    reports = dof_vs_distance(tx, rx, carrier, distances, snr_db=args.snr)
    table = [("distance_m", "dof", "capacity_bps_hz")]
    for rep in reports:
        table.append((rep.distance, rep.effective_dof, rep.capacity_bps_hz))
        print("distance_m = %g: dof = %d, capacity_bps_hz = %.6g"
              % (rep.distance, rep.effective_dof, rep.capacity_bps_hz))
    csv_path = out_dir / "dof.csv"
    emit_csv(table, csv_path)
    return [str(csv_path)]


def _cmd_sdma(args, out_dir: Path) -> list[str]:
    _, geom, carrier = _resolve_geometry(args)
    radii = _parse_floats(_require_flag(args, "--radii"), "--radii")
    theta = math.radians(args.theta_deg)
    users = [PolarPoint(theta, r) for r in radii]
    result = sdma_compare(geom, carrier.center_frequency, users, args.snr,
                          speed=carrier.propagation_speed)
    json_path = out_dir / "sdma.json"
    json_path.write_text(json.dumps(result, indent=2, sort_keys=True) + "\n")
    for k in sorted(result):
        print("%s = %.12g" % (k, result[k]))
    return [str(json_path)]


# --- parser / dispatch ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    common.add_argument("--out-dir", default=".", help="directory for output files")
    common.add_argument("--threads", type=int, default=1, help="worker threads (results are thread-count independent)")

    parser = argparse.ArgumentParser(
        prog="nearfield",
        description="Near-field array toolkit: boundaries, field maps, codebooks, "
        "channel estimation, beam-split analysis, DoF and SDMA studies.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("boundary", parents=[common], help="far/near-field boundary calculators")
    p.add_argument("mode", nargs="?", default="simo", choices=["simo", "mimo", "ris", "numeric"])
    p.add_argument("--aperture", type=float)
    p.add_argument("--aperture-rx", type=float)
    p.add_argument("--freq", type=float)
    p.add_argument("--d1", type=float)
    p.add_argument("--elements", type=int)
    p.add_argument("--spacing", type=float)
    p.add_argument("--theta-deg", type=float, default=0.0)
    p.add_argument("--speed", type=float, default=SPEED_OF_LIGHT)
    p.set_defaults(handler=_cmd_boundary)

    p = sub.add_parser("fieldmap", parents=[common], help="narrowband gain map over (angle, distance)")
    p.add_argument("--config")
    p.add_argument("--array")
    p.add_argument("--elements", type=int)
    p.add_argument("--spacing", type=float)
    p.add_argument("--freq", type=float)
    p.add_argument("--design", choices=["focus", "steer"], required=True)
    p.add_argument("--theta-deg", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--theta-min-deg", type=float, default=-60.0)
    p.add_argument("--theta-max-deg", type=float, default=60.0)
    p.add_argument("--theta-count", type=int, default=121)
    p.add_argument("--r-min", type=float)
    p.add_argument("--r-max", type=float)
    p.add_argument("--r-count", type=int, default=101)
    p.set_defaults(handler=_cmd_fieldmap)

    p = sub.add_parser("codebook", parents=[common], help="build and export a codebook")
    p.add_argument("--config")
    p.add_argument("--array")
    p.add_argument("--elements", type=int)
    p.add_argument("--spacing", type=float)
    p.add_argument("--freq", type=float)
    p.add_argument("--kind", choices=["angular", "polar"], required=True)
    p.add_argument("--size", type=int)
    p.add_argument("--angles", type=int)
    p.add_argument("--mu", type=float, default=0.5)
    p.add_argument("--r-min", type=float)
    p.set_defaults(handler=_cmd_codebook)

    p = sub.add_parser("estimate", parents=[common], help="codebook NMSE comparison (OMP)")
    p.add_argument("--config")
    p.add_argument("--array")
    p.add_argument("--distances")
    p.add_argument("--snrs")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--pilots", type=int)
    p.add_argument("--sparsity", type=int, default=3)
    p.add_argument("--angular-size", type=int)
    p.add_argument("--polar-angles", type=int)
    p.add_argument("--mu", type=float, default=0.5)
    p.add_argument("--r-min", type=float)
    p.set_defaults(handler=_cmd_estimate)

    p = sub.add_parser("beamsplit", parents=[common], help="PS vs TTD gain across the band")
    p.add_argument("--elements", type=int)
    p.add_argument("--spacing", type=float)
    p.add_argument("--fc", type=float)
    p.add_argument("--bandwidth", type=float)
    p.add_argument("--subcarriers", type=int, default=128)
    p.add_argument("--theta-deg", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--subarrays", type=int, default=16)
    p.set_defaults(handler=_cmd_beamsplit)

    p = sub.add_parser("dof", parents=[common], help="LoS-MIMO DoF and capacity vs distance")
    p.add_argument("--tx-elements", type=int)
    p.add_argument("--tx-spacing", type=float)
    p.add_argument("--rx-elements", type=int)
    p.add_argument("--rx-spacing", type=float)
    p.add_argument("--freq", type=float)
    p.add_argument("--distances")
    p.add_argument("--snr", type=float, default=10.0)
    p.set_defaults(handler=_cmd_dof)

    p = sub.add_parser("sdma", parents=[common], help="near-field vs far-field multi-user rates")
    p.add_argument("--config")
    p.add_argument("--array")
    p.add_argument("--elements", type=int)
    p.add_argument("--spacing", type=float)
    p.add_argument("--freq", type=float)
    p.add_argument("--theta-deg", type=float, default=0.0)
    p.add_argument("--radii")
    p.add_argument("--snr", type=float, default=10.0)
    p.set_defaults(handler=_cmd_sdma)

    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage
        return int(exc.code) if exc.code else 2

    start = time.perf_counter()
    try:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        outputs = args.handler(args, out_dir)
        manifest = RunManifest(
            subcommand=args.subcommand,
            config_path=getattr(args, "config", None),
            seed=args.seed if args.seed is not None else 0,
            outputs=outputs,
            tool_version=__version__,
            duration_seconds=time.perf_counter() - start,
        )
        manifest_path = out_dir / f"{args.subcommand}_manifest.json"
        manifest_path.write_text(json.dumps(asdict(manifest), indent=2, sort_keys=True) + "\n")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (InvalidArgumentError, DomainError, UnsupportedModelError) as exc:
        print(f"argument error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc} (diagnostics: {exc.diagnostics})", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(dispatch())
