"""Command-line front end.

Every run is described by a single JSON config document; command-line
flags override config fields.  Outputs are deterministic: identical
configs produce bit-identical files.  Exit codes are stable:

    0  success
    2  invalid configuration
    3  series regime violation (use the asym command instead)
    4  admissibility or integrability condition failure
    5  numeric failure (quadrature, integrator, linear algebra)
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import asymptotics, heat
from .curves import BentCurve, Ray
from .errors import (ConditionError, ConfigError, DunklError, NumericError,
                     SeriesRegimeError)
from .groups import (gamma_index, generate_group, group_descriptor,
                     make_root_system, mehta_constant)
from .polyops import eigen_residual, kernel_series_detail

_EXIT_CONFIG = 2
_EXIT_REGIME = 3
_EXIT_CONDITION = 4
_EXIT_NUMERIC = 5


def _fmt(x: float) -> str:
    """17 significant digits: exact round-trip for doubles."""
    return format(float(x), ".17g")


def worker_count() -> int:
    """Parallelism cap from the DUNKL_THREADS environment variable."""
    raw = os.environ.get("DUNKL_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return max(1, n) if n else min(4, os.cpu_count() or 1)


def parallel_map(fn, items):
    """Order-preserving map over independent jobs."""
    n = worker_count()
    items = list(items)
    if n <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def _group_from_config(cfg: dict):
    try:
        spec = cfg["group"]
        family = spec["family"]
        param = spec.get("param", spec.get("n", spec.get("m")))
        mult = spec["multiplicities"]
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"config lacks a valid group section: {exc}") from exc
    rs = make_root_system(family, param, mult)
    return rs, generate_group(rs)


def _vector(cfg_value, dim: int, what: str) -> np.ndarray:
    v = np.asarray(cfg_value, dtype=float).reshape(-1)
    if v.shape != (dim,):
        raise ConfigError(f"{what} must have {dim} coordinates; got {list(v)}")
    return v


def _curve_from_config(spec, dim: int):
    if not isinstance(spec, dict):
        raise ConfigError("curve must be an object with a 'kind' field")
    kind = spec.get("kind", "ray")
    if kind == "ray":
        if "direction" not in spec:
            raise ConfigError("a ray curve needs a direction")
        return Ray(_vector(spec["direction"], dim, "curve direction"))
    if kind == "bent":
        pts = [_vector(p, dim, "waypoint") for p in spec.get("waypoints", [])]
        return BentCurve(waypoints=pts)
    raise ConfigError(f"unknown curve descriptor: {spec!r}")


def _write_output(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_doc(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _csv_doc(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def cmd_group_info(cfg: dict, fmt: str) -> str:
    rs, group = _group_from_config(cfg)
    payload = {
        "schema": 1,
        "group": group_descriptor(rs),
        "order": group.order,
        "gamma": gamma_index(rs),
        "n_orbits": len(rs.multiplicities),
        "mehta_constant": mehta_constant(rs),
    }
    if fmt == "json":
        return _json_doc(payload)
    rows = [["order", group.order], ["gamma", _fmt(payload["gamma"])],
            ["n_orbits", payload["n_orbits"]],
            ["mehta_constant", _fmt(payload["mehta_constant"])]]
    for i, root in enumerate(rs.positive_roots):
        rows.append([f"positive_root_{i}", " ".join(_fmt(v) for v in root)])
    return _csv_doc(["key", "value"], rows)


def cmd_kernel(cfg: dict, fmt: str) -> str:
    rs, group = _group_from_config(cfg)
    tol = float(cfg.get("tol", 1e-12))
    max_degree = int(cfg.get("max_degree", 48))
    if tol <= 0:
        raise ConfigError("tol must be positive")
    pairs = cfg.get("pairs")
    if not pairs:
        raise ConfigError("kernel command needs a 'pairs' list of {x, y}")
    jobs = []
    for p in pairs:
        x = _vector(p["x"], rs.dim, "x")
        y = _vector(p["y"], rs.dim, "y")
        jobs.append((x, y))

    def one(job):
        x, y = job
        try:
            det = kernel_series_detail(rs, x, y, tol, max_degree)
        except SeriesRegimeError as exc:
            raise SeriesRegimeError(
                f"{exc}; evaluate large arguments with the asym command") from exc
        resid = eigen_residual(rs, x, y, np.eye(rs.dim)[0], tol, max_degree)
        return det, resid

    results = parallel_map(one, jobs)
    rows = []
    payload_rows = []
    for (x, y), (det, resid) in zip(jobs, results):
        rows.append([" ".join(_fmt(v) for v in x), " ".join(_fmt(v) for v in y),
                     _fmt(det.value.real), _fmt(det.value.imag),
                     _fmt(det.tail_bound), _fmt(resid)])
        payload_rows.append({
            "x": list(map(float, x)), "y": list(map(float, y)),
            "re": det.value.real, "im": det.value.imag,
            "tail_bound": det.tail_bound, "eigen_residual": resid,
            "degree": det.degree_used,
        })
    if fmt == "json":
        return _json_doc({"schema": 1, "group": group_descriptor(rs),
                          "tol": tol, "rows": payload_rows})
    return _csv_doc(["x", "y", "re_E", "im_E", "tail_bound", "eigen_residual"], rows)


def cmd_asym(cfg: dict, fmt: str) -> str:
    rs, group = _group_from_config(cfg)
    y = _vector(cfg.get("y"), rs.dim, "y")
    curve = _curve_from_config(cfg.get("curve"), rs.dim)
    opts = asymptotics.ExtractOptions(
        T=float(cfg.get("T", 1e4)),
        tol=float(cfg.get("ode_tol", 1e-10)),
        second_order=bool(cfg.get("second_order", True)),
    )
    report = asymptotics.extract_v(curve, group, rs, y, opts)
    doc = report.to_json_dict()
    pred = asymptotics.limit_constant_e(rs)
    doc["identity_component_prediction"] = [pred.real, pred.imag]
    doc["identity_component_deviation"] = abs(report.v[0] - pred)
    doc["inverse_symmetry_deviation"] = float(
        np.max(np.abs(report.v - report.v[group.inverse_index])))
    extra = cfg.get("extra_curves", [])
    if extra:
        dev = 0.0
        for spec_c in extra:
            other = asymptotics.extract_v(_curve_from_config(spec_c, rs.dim),
                                          group, rs, y, opts)
            dev = max(dev, float(np.max(np.abs(report.v - other.v))))
        doc["curve_independence_deviation"] = dev
    if fmt == "json":
        return _json_doc(doc)
    header = ["t"]
    for g in range(group.order):
        header += [f"re_F_{g}", f"im_F_{g}"]
    rows = []
    for t, raw, _ in report.checkpoints:
        row = [_fmt(t)]
        for z in raw:
            row += [_fmt(z.real), _fmt(z.imag)]
        rows.append(row)
    return _csv_doc(header, rows)


def cmd_heat(cfg: dict, fmt: str) -> str:
    rs, group = _group_from_config(cfg)
    x = _vector(cfg.get("x"), rs.dim, "x")
    y = _vector(cfg.get("y"), rs.dim, "y")
    t_grid = [float(t) for t in cfg.get("t_grid", [1e-1, 1e-2, 1e-3, 1e-4])]
    if any(t <= 0 for t in t_grid) or any(b >= a for a, b in zip(t_grid, t_grid[1:])):
        raise ConfigError("t_grid must be positive and strictly decreasing")
    rows = heat.shorttime_ratio_detail(rs, group, x, y, t_grid)
    if fmt == "json":
        return _json_doc({"schema": 1, "group": group_descriptor(rs),
                          "rows": [{"t": t, "ratio": r, "path": p}
                                   for t, r, p in rows]})
    return _csv_doc(["t", "ratio", "eval_path"],
                    [[_fmt(t), _fmt(r), p] for t, r, p in rows])


def cmd_wiener(cfg: dict, fmt: str) -> str:
    rs, group = _group_from_config(cfg)
    x = _vector(cfg.get("x"), rs.dim, "x")
    n_grid = [float(n) for n in cfg.get("n_grid", [4, 8, 16, 32])]
    scan = heat.wiener_scan(rs, group, x, n_grid, tol=float(cfg.get("tol", 1e-9)))
    slope = heat.continuity_slope(scan) if len(n_grid) >= 4 else None
    if fmt == "json":
        return _json_doc({"schema": 1, "group": group_descriptor(rs),
                          "x": list(map(float, x)),
                          "rows": [{"n": n, "average": a} for n, a in scan.rows()],
                          "slope": slope})
    rows = [[_fmt(n), _fmt(a)] for n, a in scan.rows()]
    if slope is not None:
        rows.append(["slope", _fmt(slope)])
    return _csv_doc(["n", "average"], rows)


_COMMANDS = {
    "group-info": cmd_group_info,
    "kernel": cmd_kernel,
    "asym": cmd_asym,
    "heat": cmd_heat,
    "wiener": cmd_wiener,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dunkl",
        description="Dunkl kernel computations and asymptotic diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config document")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", default=None, choices=["csv", "json"])
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config)
        fmt = args.format or cfg.get("format") or "json"
        if fmt not in ("csv", "json"):
            raise ConfigError(f"unknown format {fmt!r}")
        text = _COMMANDS[args.command](cfg, fmt)
        _write_output(text, args.out or cfg.get("out"))
        return 0
    except ConfigError as exc:
        print(f"error (config): {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except SeriesRegimeError as exc:
        print(f"error (regime): {exc}", file=sys.stderr)
        return _EXIT_REGIME
    except ConditionError as exc:
        print(f"error (condition): {exc}", file=sys.stderr)
        return _EXIT_CONDITION
    except (NumericError, DunklError) as exc:
        print(f"error (numeric): {exc}", file=sys.stderr)
        return _EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
