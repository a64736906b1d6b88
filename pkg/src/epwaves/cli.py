"""Command-line front end: ``epwaves {profile,spectrum,crossings,indices,verify}``."""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace
from fractions import Fraction

import numpy as np

from . import acceptance, bloch
from .config import RunConfig, load, serialize
from .crossings import crossing_catalogue, find_crossing, write_crossings_json
from .errors import ConfigError, EPWavesError
from .indices import gamma_asymptotic_fraction, gamma_scalar, sweep_rows, write_sweep_csv
from .profile import make_profile, rho_max, write_profile_csv

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_ACCEPTANCE = 0, 2, 3, 4
REFINE_HALF_WIDTH = 0.1


def _tag(delta: float) -> str:
    return f"d{delta!r}"


def _outdir(config: RunConfig) -> str:
    os.makedirs(config.output_dir, exist_ok=True)
    return config.output_dir


def _dump(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def cmd_profile(config: RunConfig) -> list[str]:
    law, V, out = config.law, config.V, _outdir(config)
    bound = rho_max(law, V)
    files, summary = [], []
    for d in config.delta_list:
        prof = make_profile(law, d, V)
        path = os.path.join(out, f"profile_{_tag(d)}.csv")
        write_profile_csv(prof, path)
        files.append(path)
        summary.append({
            "delta": d,
            "k": prof.k,
            "mu": prof.params.mu,
            "crest_density": prof.crest_density(),
            "delta_max": bound.delta_max,
            "rho_max": bound.rho_max,
            "invariant_residual": prof.invariant_residual(),
            "periodicity_residual": prof.periodicity_residual,
            "file": os.path.basename(path),
        })
    path = os.path.join(out, "profile_summary.json")
    _dump({"T": law.T, "gamma": law.gamma, "V": V, "profiles": summary}, path)
    return files + [path]


def cmd_spectrum(config: RunConfig) -> list[str]:
    law, V, out, N = config.law, config.V, _outdir(config), config.N
    workers = config.workers
    files = []
    for d in config.delta_list:
        prof = make_profile(law, d, V)
        tag = _tag(d)
        full = bloch.scan(prof, bloch.uniform_grid(config.xi_points), N, workers)
        path = os.path.join(out, f"spectrum_{tag}.csv")
        bloch.write_spectrum_csv(full, path)
        files.append(path)
        threshold = 10.0 * bloch.noise_floor(prof, N)
        crossings = {ell: find_crossing(law, V, ell, "+") for ell in (3, 4, 5)}
        local = []
        for ell, c in crossings.items():
            grid = bloch.wrap(c.xi0 + np.linspace(-REFINE_HALF_WIDTH, REFINE_HALF_WIDTH, config.refine_points))
            slices = bloch.scan(prof, grid, N, workers)
            path = os.path.join(out, f"spectrum_{tag}_ell{ell}.csv")
            bloch.write_spectrum_csv(slices, path)
            files.append(path)
            local.extend(slices)
        merged = sorted(full + local, key=lambda s: s.xi)
        radius = bloch.defective_radius(merged)
        records = []
        for b in bloch.bubble_detect(merged, threshold, radius):
            records.append({**b.to_dict(), "ell": None, "source": "scan"})
        if d > 0:
            for ell, c in crossings.items():
                b = bloch.refine_bubble(prof, c, N)
                if b is not None and b.max_growth > threshold:
                    records.append({**b.to_dict(), "ell": ell, "source": "refined"})
        path = os.path.join(out, f"bubbles_{tag}.json")
        _dump(records, path)
        files.append(path)
    return files


def cmd_crossings(config: RunConfig) -> list[str]:
    path = os.path.join(_outdir(config), "crossings.json")
    write_crossings_json(crossing_catalogue(config.law, config.V, config.ell_max), path)
    return [path]


def _fraction_text(g: float) -> str:
    f = gamma_asymptotic_fraction(g)
    if Fraction(g).denominator == 1:
        return f"{f * 6144}/6144 = {f}"
    return str(f)


def cmd_indices(config: RunConfig) -> list[str]:
    law = config.law
    c = math.sqrt(law.sound_speed_sq)
    speeds = np.geomspace(1.05 * c, config.sweep_V_max, config.sweep_points)
    rows = sweep_rows(law, speeds)
    path = os.path.join(_outdir(config), "indices.csv")
    write_sweep_csv(rows, path)
    limit = gamma_asymptotic_fraction(law.gamma)
    last = gamma_scalar(law, config.sweep_V_max)
    jumps = sum(1 for a, b in zip(speeds[:-1], speeds[1:])
                if find_crossing(law, float(a), 3).j != find_crossing(law, float(b), 3).j)
    print(f"swept {len(rows)} speeds in [{speeds[0]:.6g}, {speeds[-1]:.6g}], crossing index jumps: {jumps}")
    print(f"index at V={config.sweep_V_max:g}: {last.gamma_matrix.real:.9f}{last.gamma_matrix.imag:+.3e}i")
    print(f"large-speed limit f({law.gamma:g}) = {_fraction_text(law.gamma)} ~ {float(limit):.9f}")
    return [path]


def cmd_verify(config: RunConfig) -> tuple[bool, str]:
    results = acceptance.run_all()
    for r in results:
        print(r.line())
    path = os.path.join(_outdir(config), "verify.json")
    acceptance.write_report(results, path)
    return all(r.passed for r in results if not r.companion), path


COMMANDS = {
    "profile": cmd_profile,
    "spectrum": cmd_spectrum,
    "crossings": cmd_crossings,
    "indices": cmd_indices,
    "verify": cmd_verify,
}


def _delta_list(text: str) -> tuple:
    try:
        return tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad delta list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--delta", type=_delta_list, help="comma-separated amplitudes")
    speed = common.add_mutually_exclusive_group()
    speed.add_argument("--V", type=float, help="wave speed")
    speed.add_argument("--k0", type=float, help="choose the speed with this base wavenumber")
    common.add_argument("--N", type=int, help="Fourier truncation half-width")
    common.add_argument("--gamma", type=float, help="adiabatic exponent")
    common.add_argument("--T", type=float, help="pressure coefficient")
    parser = argparse.ArgumentParser(prog="epwaves", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def resolve_config(args) -> RunConfig:
    config = load(args.config) if args.config else RunConfig()
    overrides = {}
    if args.out is not None:
        overrides["output_dir"] = args.out
    if args.delta is not None:
        overrides["delta_list"] = args.delta
    if args.V is not None:
        overrides["V_spec"] = repr(args.V)
    if args.k0 is not None:
        overrides["V_spec"] = f"k0={args.k0!r}"
    for attr in ("N", "gamma", "T"):
        if getattr(args, attr) is not None:
            overrides[attr] = getattr(args, attr)
    return replace(config, **overrides).validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
        result = COMMANDS[args.command](config)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EPWavesError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.command == "verify":
        passed, path = result
        print(f"report written to {path}")
        return EXIT_OK if passed else EXIT_ACCEPTANCE
    for path in result:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
