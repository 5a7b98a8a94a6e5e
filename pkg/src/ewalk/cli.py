"""Command-line front end: run a YAML config, emit figure-ready CSV/JSON.

Every mode writes its tables plus a meta.json carrying the config hash, tool
version, evaluated field values, seeds, and the active kernel backend; no
timestamps, so identical configs reproduce byte-identical files. Floats are
written with 16 significant digits.

Exit codes: 0 success, 2 config error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import __version__
from . import kernels
from .analysis import (
    distinguishing_steps,
    fit_two_sided_exponential,
    position_distribution,
    return_probability,
    rms_width,
    time_averaged_distribution,
)
from .config import MODES, load_config, phi_value, spinor_value
from .engine import WalkParams, evolve, evolve_density
from .errors import ConfigError, EwalkError
from .spectral import band_structure, velocity_multiset
from .states import SiteWindow, density_from_pure, new_localized
from .stats import RNG_NAME, empirical_distribution, sample_measurements


def _fmt_float(x):
    return f"{float(x):.15e}"


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        raise TypeError("no boolean table cells")
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _fmt_float(v)
    return str(v)


def _dump_json(v):
    """Deterministic JSON with .15e floats and sorted keys."""
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "NaN"
        if math.isinf(v):
            return "Infinity" if v > 0 else "-Infinity"
        return _fmt_float(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_dump_json(x) for x in v) + "]"
    if isinstance(v, dict):
        items = (f"{json.dumps(str(k))}: {_dump_json(val)}" for k, val in sorted(v.items()))
        return "{" + ", ".join(items) + "}"
    raise TypeError(f"cannot serialize {type(v).__name__}")


class _Writer:
    """Collects output files for one run under a single directory."""

    def __init__(self, outdir, fmt):
        self.outdir = outdir
        self.fmt = fmt
        self.written = []

    def table(self, name, columns, rows):
        if self.fmt == "csv":
            lines = [",".join(columns)]
            lines.extend(",".join(_cell(v) for v in row) for row in rows)
            self._write(f"{name}.csv", "\n".join(lines) + "\n")
        else:
            body = ",\n".join("    [" + ", ".join(_dump_json(
                float(v) if isinstance(v, (float, np.floating)) else v) for v in row) + "]"
                for row in rows)
            text = ('{\n  "columns": ' + _dump_json(list(columns))
                    + ',\n  "rows": [\n' + body + "\n  ]\n}\n")
            self._write(f"{name}.json", text)

    def json(self, name, obj):
        self._write(f"{name}.json", _dump_json(obj) + "\n")

    def _write(self, filename, text):
        path = os.path.join(self.outdir, filename)
        with open(path, "w", newline="") as fh:
            fh.write(text)
        self.written.append(filename)


# ---------------------------------------------------------------------------
# shared run plumbing
# ---------------------------------------------------------------------------

def _walk_params(cfg, phi):
    return WalkParams(
        phi=phi,
        theta=cfg.get("theta", math.pi / 4.0),
        dephase_p=cfg.get("dephase_p", 0.0),
    )


def _initial(cfg, t_max):
    init = cfg.get("initial", {})
    site = init.get("site", 0)
    spinor = spinor_value(init.get("spinor", "up"))
    window = SiteWindow(site - t_max, site + t_max)
    return new_localized(site, spinor, window), site


def _distribution_series(cfg, phi, t_max):
    """Per-step distributions 0..t_max (density path when dephase_p > 0)."""
    params = _walk_params(cfg, phi)
    state, site = _initial(cfg, max(t_max, 1))
    if params.dephase_p == 0.0:
        states = evolve(state, params, t_max)
    else:
        states = evolve_density(density_from_pure(state), params, t_max)
    return [position_distribution(s, t) for t, s in enumerate(states)], site


def _steps_list(steps):
    if isinstance(steps, int):
        return list(range(steps + 1)), steps
    record = sorted(set(steps))
    return record, record[-1]


# ---------------------------------------------------------------------------
# mode runners
# ---------------------------------------------------------------------------

def _run_evolve(cfg, writer, meta):
    record, t_max = _steps_list(cfg["steps"])
    dists, _ = _distribution_series(cfg, meta["phi"]["value"], t_max)
    sites = dists[0].window.sites()
    rows = [(t, int(x), float(p)) for t in record for x, p in zip(sites, dists[t].p)]
    writer.table("distributions", ("step", "site", "probability"), rows)
    writer.table("widths", ("step", "rms_width"),
                 [(t, rms_width(dists[t])) for t in record])


def _run_bands(cfg, writer, meta):
    rational = meta["phi"]["rational"]
    if rational is None:
        raise ConfigError("mode bands: phi must use the {rational: [n, m]} form")
    grid = cfg.get("grid_points", 256)
    bs = band_structure(rational, cfg.get("theta", math.pi / 4.0), grid)
    rows = [
        (float(kappa), b, float(bs.eigenphases[j, b]))
        for j, kappa in enumerate(bs.kappa_grid)
        for b in range(bs.eigenphases.shape[1])
    ]
    writer.table("bands", ("kappa", "band_index", "quasienergy"), rows)


def _run_revival(cfg, writer, meta):
    t_max = cfg["steps"]
    dists, site = _distribution_series(cfg, meta["phi"]["value"], t_max)
    writer.table("revival", ("step", "return_probability"),
                 [(t, return_probability(d, site)) for t, d in enumerate(dists)])


def _run_localize(cfg, writer, meta):
    record, t_max = _steps_list(cfg["steps"])
    dists, _ = _distribution_series(cfg, meta["phi"]["value"], t_max)
    avg = time_averaged_distribution([dists[t] for t in record])
    writer.table("timeavg", ("site", "probability"),
                 list(zip((int(x) for x in avg.window.sites()), (float(p) for p in avg.p))))
    fit = fit_two_sided_exponential(avg)
    writer.json("fit", {
        "xi": fit.xi,
        "amplitude": fit.amplitude,
        "r_squared": fit.r_squared,
        "averaged_steps": record,
    })
    writer.table("widths", ("step", "rms_width"),
                 [(t, rms_width(d)) for t, d in enumerate(dists)])


def _run_compare(cfg, writer, meta):
    t_max = cfg["steps"]
    theta = cfg.get("theta", math.pi / 4.0)
    rationals = []
    for i, spec in enumerate(cfg["phis"]):
        value, rational, _ = phi_value(spec)
        rationals.append(rational)
        dists, _ = _distribution_series(cfg, value, t_max)
        writer.table(f"widths_{i}", ("step", "rms_width"),
                     [(t, rms_width(d)) for t, d in enumerate(dists)])
    base = cfg.get("grid_points", 720)
    pairs = []
    for i in range(len(rationals)):
        for j in range(i + 1, len(rationals)):
            ri, rj = rationals[i], rationals[j]
            if ri is None or rj is None:
                continue
            unit = 4 * ri.m * rj.m
            adjusted = ((base + unit - 1) // unit) * unit
            gi, gj = adjusted // ri.m, adjusted // rj.m
            vi = velocity_multiset(ri, theta, gi)
            vj = velocity_multiset(rj, theta, gj)
            pairs.append({
                "pair": [i, j],
                "grid_points": [gi, gj],
                "max_abs_delta": float(np.max(np.abs(vi - vj))),
            })
    writer.json("velocity_deltas", {"pairs": pairs})


def _run_discriminate(cfg, writer, meta):
    report = distinguishing_steps(
        meta["phi"]["value"],
        meta["phi2"]["value"],
        cfg.get("threshold", 0.2),
        theta=cfg.get("theta", math.pi / 4.0),
        t_max=cfg.get("cap"),
    )
    writer.table("tv", ("step", "tv_distance"),
                 [(t, float(v)) for t, v in enumerate(report.tv_curve)])
    writer.json("report", {
        "heuristic_steps": report.heuristic_steps,
        "empirical_steps": report.empirical_steps,
        "threshold": report.threshold,
        "searched_steps": len(report.tv_curve) - 1,
    })


def _run_sample(cfg, writer, meta):
    t = cfg["steps"]
    sampling = cfg["sampling"]
    dists, _ = _distribution_series(cfg, meta["phi"]["value"], t)
    record = sample_measurements(
        dists[t],
        sampling["shots"],
        sampling["seed"],
        sampling.get("detect_eff", 0.9),
    )
    intervals = empirical_distribution(record, sampling.get("confidence", 0.68))
    rows = [
        (int(x), int(k), iv.p_hat, iv.lower, iv.upper)
        for x, k, iv in zip(record.window.sites(), record.counts, intervals)
    ]
    writer.table("sample", ("site", "count", "p_hat", "lower", "upper"), rows)
    meta["sampling"] = {
        "rng": RNG_NAME,
        "seed": sampling["seed"],
        "shots": sampling["shots"],
        "lost": record.lost,
        "detect_eff": sampling.get("detect_eff", 0.9),
        "confidence": sampling.get("confidence", 0.68),
    }


_RUNNERS = {
    "evolve": _run_evolve,
    "bands": _run_bands,
    "revival": _run_revival,
    "localize": _run_localize,
    "compare": _run_compare,
    "discriminate": _run_discriminate,
    "sample": _run_sample,
}


def run(cfg, raw_text):
    """Execute a validated config; returns the list of files written."""
    out = cfg["output"]
    outdir = out["path"]
    try:
        os.makedirs(outdir, exist_ok=True)
    except OSError as e:
        raise ConfigError(f"cannot create output directory {outdir}: {e}")

    meta = {
        "mode": cfg["mode"],
        "tool_version": __version__,
        "config_sha256": hashlib.sha256(raw_text.encode()).hexdigest(),
        "backend": kernels.BACKEND,
        "theta": float(cfg.get("theta", math.pi / 4.0)),
    }
    for key in ("phi", "phi2"):
        if key in cfg:
            value, rational, echo = phi_value(cfg[key])
            meta[key] = {"value": value, "rational": rational, "spec": echo}
    if "phis" in cfg:
        meta["phis"] = [phi_value(s)[2] for s in cfg["phis"]]
    if "dephase_p" in cfg:
        meta["dephase_p"] = float(cfg["dephase_p"])

    writer = _Writer(outdir, out.get("format", "csv"))
    _RUNNERS[cfg["mode"]](cfg, writer, meta)

    # strip run-internal fields before serializing the echo
    for key in ("phi", "phi2"):
        if key in meta:
            meta[key] = {"spec": meta[key]["spec"], "evaluated": meta[key]["value"]}
    meta["outputs"] = sorted(writer.written + ["meta.json"])
    writer.json("meta", meta)
    return [os.path.join(outdir, name) for name in writer.written]


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="ewalk",
        description="Electric discrete-time quantum walk simulator and band toolkit",
    )
    parser.add_argument("--config", required=True, help="YAML run configuration")
    parser.add_argument("--mode", choices=MODES, help="override the config's mode")
    parser.add_argument("--out", help="override output.path")
    parser.add_argument("--format", choices=["csv", "json"], help="override output.format")
    parser.add_argument("--seed", type=int, help="override sampling.seed (sample mode)")
    args = parser.parse_args(argv)

    try:
        cfg, raw = load_config(args.config, mode=args.mode, out=args.out,
                               fmt=args.format, seed=args.seed)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    try:
        files = run(cfg, raw)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except EwalkError as e:
        print(f"numerical error: {e}", file=sys.stderr)
        return 3
    for path in files:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
