"""Command-line experiment driver.

Subcommands: evaluate, approximate, origin, verify, sweep.  Each reads one
JSON config, writes `points.csv` and `report.json` into the output
directory, and exits 0 on success, 2 on certification failure, 1 on config
or runtime errors.  All numeric output is formatted to 12 significant
digits and all aggregation is deterministic, so identical configs yield
byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .band_profile import Shape, l1_norm_u0, make_profile, spectral_moments
from .errors import ConewaveError
from .moments import (
    golden_variance_scan,
    mean_match_check,
    solution_moments_closed,
    variance_gap,
)
from .symbols import Symbol
from .wavepacket import (
    Region,
    argmin_variance_scan,
    classify_point,
    cone_constants,
    evaluate_solution,
    first_term_H,
    make_cone,
    optimal_origin,
    remainder_bound,
    shifted_lp_check,
    shift_norm_g,
)

__all__ = ["main"]

_DEFAULT_CONFIG = {
    "symbol": {"kind": "free_schrodinger"},
    "profile": {"shape": "bump", "p1": 1.0, "p2": 2.0},
    "cone": {"padding_fraction": 0.1, "origin": "auto"},
    "delta": 0.625,
    "times": {"kind": "log", "count": 16, "lo": 10.0, "hi": 1.0e4},
    "x_samples": 5,
    "tolerances": {"quadrature": 1e-10, "certification_slack": 1e-9},
    "output": {"formats": ["csv", "json"]},
}

_SHAPES = {
    "bump": Shape.BUMP,
    "shifted_bump": Shape.SHIFTED_BUMP,
    "chirped_bump": Shape.CHIRPED_BUMP,
    "quadratic_chirp": Shape.QUADRATIC_CHIRP,
}


def _fmt(v: float) -> str:
    return f"{v + 0.0:.12g}" if v == 0.0 else f"{v:.12g}"


def _threads() -> int:
    raw = os.environ.get("CONEWAVE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _load_config(path: str | None) -> dict:
    cfg = json.loads(json.dumps(_DEFAULT_CONFIG))
    if path is not None:
        with open(path) as fh:
            user = json.load(fh)
        if not isinstance(user, dict):
            raise ValueError("config root must be a JSON object")
        for key, val in user.items():
            if isinstance(val, dict) and isinstance(cfg.get(key), dict):
                cfg[key].update(val)
            else:
                cfg[key] = val
    delta = cfg["delta"]
    if not 0.5 < delta < 0.75:
        raise ValueError(f"delta must lie in (0.5, 0.75), got {delta}")
    prof = cfg["profile"]
    if not prof["p1"] < prof["p2"]:
        raise ValueError(f"profile band needs p1 < p2, got {prof['p1']}, {prof['p2']}")
    if not cfg["cone"]["padding_fraction"] > 0:
        raise ValueError("cone.padding_fraction must be positive")
    if prof["shape"] not in _SHAPES:
        raise ValueError(f"unknown profile shape {prof['shape']!r}")
    return cfg


def _build_scene(cfg: dict):
    """Config -> (symbol, profile, cone, delta, times, tolerances)."""
    sc = cfg["symbol"]
    if sc["kind"] == "free_schrodinger":
        sym = Symbol.free_schrodinger()
    elif sc["kind"] == "klein_gordon":
        sym = Symbol.klein_gordon(float(sc.get("mass", 1.0)))
    else:
        raise ValueError(f"unknown symbol kind {sc['kind']!r} (custom needs the API)")

    pc = cfg["profile"]
    prof = make_profile(
        float(pc["p1"]),
        float(pc["p2"]),
        _SHAPES[pc["shape"]],
        xc=float(pc.get("xc", 0.0)),
        tau=float(pc.get("tau", 0.0)),
        beta=float(pc.get("beta", 0.0)),
        sym=sym,
    )

    origin_cfg = cfg["cone"]["origin"]
    if origin_cfg == "auto":
        res = optimal_origin(sym, prof)
        origin = (res.t_star, res.x_star)
    else:
        origin = (float(origin_cfg[0]), float(origin_cfg[1]))
    cone = make_cone(prof.band, origin=origin, padding_fraction=float(cfg["cone"]["padding_fraction"]))

    tspec = cfg["times"]
    if isinstance(tspec, list):
        elapsed = [float(t) for t in tspec]
    else:
        elapsed = list(
            np.logspace(
                math.log10(float(tspec["lo"])),
                math.log10(float(tspec["hi"])),
                int(tspec["count"]),
            )
        )
    times = [origin[0] + dt for dt in elapsed]
    return sym, prof, cone, float(cfg["delta"]), times, cfg["tolerances"]


def _sample_points(sym, cone, times, x_samples: int, spill: float = 0.25):
    """Deterministic (t, x) grid whose velocity ratios span the padded cone
    plus a fraction `spill` outside each edge."""
    q1, q2 = cone.padded
    v1, v2 = float(sym.df(q1)), float(sym.df(q2))
    vr = v2 - v1
    ratios = np.linspace(v1 - spill * vr, v2 + spill * vr, x_samples)
    t0, x0 = cone.origin
    return [(t, float(x0 + r * (t - t0))) for t in times for r in ratios]


def _approx_rows(sym, prof, cone, delta, points, tol):
    """Rows (t, x, region, u, H, err, bound) for a batch of points."""
    consts = cone_constants(sym, cone, delta)
    t0, x0 = cone.origin
    g = shift_norm_g(sym, prof, t0, x0)
    l1 = l1_norm_u0(prof)

    def one(pt):
        t, x = pt
        region, _ = classify_point(sym, cone, t, x)
        u = evaluate_solution(sym, prof, t, x, tol=tol, origin=cone.origin)
        if region is Region.SLICE:
            return t, x, "slice-excluded", u, 0.0 + 0.0j, abs(u), float("nan")
        H = first_term_H(sym, prof, cone, t, x)
        bound = remainder_bound(consts, g, l1, t, t0, region)
        return t, x, region.value, u, H, abs(u - H), bound

    nthreads = _threads()
    if nthreads > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            return list(pool.map(one, points))
    return [one(pt) for pt in points]


def _write_csv(path: Path, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(cell if isinstance(cell, str) else _fmt(cell) for cell in row) + "\n")


def _write_report(path: Path, report: dict) -> None:
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _cmd_evaluate(scene, out: Path, cfg) -> int:
    sym, prof, cone, delta, times, tols = scene
    points = _sample_points(sym, cone, times, int(cfg["x_samples"]))
    tol = float(tols["quadrature"])
    rows = []
    for t, x in points:
        u = evaluate_solution(sym, prof, t, x, tol=tol, origin=cone.origin)
        rows.append((t, x, u.real, u.imag))
    _write_csv(out / "points.csv", ["t", "x", "re_u", "im_u"], rows)
    _write_report(out / "report.json", {
        "command": "evaluate",
        "n_points": len(rows),
        "max_abs_u": _fmt(max(math.hypot(r[2], r[3]) for r in rows)),
    })
    return 0


def _cmd_approximate(scene, out: Path, cfg) -> int:
    sym, prof, cone, delta, times, tols = scene
    points = _sample_points(sym, cone, times, int(cfg["x_samples"]))
    raw = _approx_rows(sym, prof, cone, delta, points, float(tols["quadrature"]))
    rows, ratios = [], []
    for t, x, region, u, H, err, bound in raw:
        ratio = err / bound if bound == bound and bound > 0 else float("nan")
        if region != "slice-excluded":
            ratios.append(ratio)
        rows.append((t, x, region, u.real, u.imag, H.real, H.imag, err, bound, ratio))
    _write_csv(
        out / "points.csv",
        ["t", "x", "region", "re_u", "im_u", "re_H", "im_H", "abs_err", "bound", "bound_ratio"],
        rows,
    )
    worst = max(ratios) if ratios else float("nan")
    _write_report(out / "report.json", {
        "command": "approximate",
        "n_points": len(rows),
        "worst_bound_ratio": _fmt(worst),
        "certified": bool(worst <= 1.0 + float(tols["certification_slack"])),
    })
    return 0 if worst <= 1.0 + float(tols["certification_slack"]) else 2


def _cmd_origin(scene, out: Path, cfg) -> int:
    sym, prof, cone, delta, times, tols = scene
    closed = optimal_origin(sym, prof)
    lo, hi = closed.t_star - 2.0, closed.t_star + 2.0
    scan = argmin_variance_scan(sym, prof, lo, hi)
    gold = golden_variance_scan(sym, prof, lo, hi)
    taus = [lo, 0.5 * (lo + hi), hi]
    _write_csv(
        out / "points.csv",
        ["tau", "variance"],
        [(tau, solution_moments_closed(sym, prof, tau).v) for tau in taus],
    )
    _write_report(out / "report.json", {
        "command": "origin",
        "closed_form": {
            "t_star": _fmt(closed.t_star),
            "x_star": _fmt(closed.x_star),
            "min_variance": _fmt(closed.min_variance),
        },
        "scan": {
            "t_star": _fmt(scan.t_star),
            "x_star": _fmt(scan.x_star),
            "min_variance": _fmt(scan.min_variance),
        },
        "golden_t_star": _fmt(gold),
        "agreement": bool(
            abs(scan.t_star - closed.t_star) < 1e-9 and abs(gold - closed.t_star) < 1e-5
        ),
    })
    return 0


def _cmd_verify(scene, out: Path, cfg) -> int:
    sym, prof, cone, delta, times, tols = scene
    slack = float(tols["certification_slack"])
    qtol = float(tols["quadrature"])
    checks = []

    points = _sample_points(sym, cone, times, int(cfg["x_samples"]))
    raw = _approx_rows(sym, prof, cone, delta, points, qtol)
    rows = []
    worst = 0.0
    for t, x, region, u, H, err, bound in raw:
        ratio = err / bound if bound == bound and bound > 0 else float("nan")
        if region != "slice-excluded":
            worst = max(worst, ratio)
        rows.append((t, x, region, u.real, u.imag, H.real, H.imag, err, bound, ratio))
    _write_csv(
        out / "points.csv",
        ["t", "x", "region", "re_u", "im_u", "re_H", "im_H", "abs_err", "bound", "bound_ratio"],
        rows,
    )
    checks.append({
        "name": "remainder_bounds_certified",
        "passed": bool(worst <= 1.0 + slack),
        "detail": f"worst bound ratio {_fmt(worst)}",
    })

    closed = optimal_origin(sym, prof)
    scan = argmin_variance_scan(sym, prof, closed.t_star - 2.0, closed.t_star + 2.0)
    checks.append({
        "name": "origin_scan_agreement",
        "passed": bool(abs(scan.t_star - closed.t_star) < 1e-9),
        "detail": f"closed {_fmt(closed.t_star)} vs scan {_fmt(scan.t_star)}",
    })

    sm = spectral_moments(prof, sym)
    mean_ok, gap_ok = True, True
    for dt in (1.0, 10.0, 100.0):
        t = closed.t_star + dt
        lhs, rhs = mean_match_check(sym, prof, cone, t)
        mean_ok &= abs(lhs - rhs) < 1e-9
        gap_ok &= abs(variance_gap(sym, prof, cone, t) - closed.min_variance) < 1e-9
    checks.append({
        "name": "mean_positions_match",
        "passed": bool(mean_ok),
        "detail": "M1(u) = M1(H) at t* + {1,10,100}",
    })
    checks.append({
        "name": "variance_gap_constant",
        "passed": bool(gap_ok),
        "detail": f"gap pinned at min variance {_fmt(closed.min_variance)}",
    })

    g_star = shift_norm_g(sym, prof, closed.t_star, closed.x_star)
    opt_ok = True
    for dt in (0.1, 1.0):
        for dx in (0.1, 1.0):
            g_pert = shift_norm_g(sym, prof, closed.t_star + dt, closed.x_star + dx)
            opt_ok &= g_star <= g_pert + 1e-12
    checks.append({
        "name": "origin_minimizes_shift_norm",
        "passed": bool(opt_ok),
        "detail": f"g(t*, x*) = {_fmt(g_star)}",
    })

    if sym.kind.value == "free_schrodinger":
        lp_ok = True
        details = []
        lhs, rhs = shifted_lp_check(sym, prof, closed.t_star + 1.0, 2)
        lp_ok &= abs(lhs - rhs) < 1e-7
        details.append(f"p=2: {_fmt(lhs)} vs {_fmt(rhs)}")
        for dt in (1.0, 10.0):
            lhs, rhs = shifted_lp_check(sym, prof, closed.t_star + dt, math.inf)
            lp_ok &= lhs <= rhs + slack
            details.append(f"p=inf dt={dt:g}: {_fmt(lhs)} <= {_fmt(rhs)}")
        checks.append({
            "name": "shifted_lp_decay",
            "passed": bool(lp_ok),
            "detail": "; ".join(details),
        })

    all_passed = all(c["passed"] for c in checks)
    _write_report(out / "report.json", {
        "command": "verify",
        "checks": checks,
        "all_passed": all_passed,
        "pass_list": [c["name"] for c in checks if c["passed"]],
    })
    return 0 if all_passed else 2


def _cmd_sweep(scene, out: Path, cfg) -> int:
    sym, prof, cone, delta, times, tols = scene
    qtol = float(tols["quadrature"])
    t0, x0 = cone.origin
    q1, q2 = cone.padded
    v1, v2 = float(sym.df(q1)), float(sym.df(q2))
    vr = v2 - v1
    ratios = np.linspace(v1 + 0.1 * vr, v2 - 0.1 * vr, int(cfg["x_samples"]))
    rows = []
    for t in times:
        errs = []
        for r in ratios:
            x = float(x0 + r * (t - t0))
            u = evaluate_solution(sym, prof, t, x, tol=qtol, origin=cone.origin)
            H = first_term_H(sym, prof, cone, t, x)
            errs.append(abs(u - H))
        rows.append((abs(t - t0), max(errs)))
    _write_csv(out / "points.csv", ["elapsed", "max_cone_error"], rows)
    logs = np.log10(np.array([r[0] for r in rows]))
    loge = np.log10(np.array([max(r[1], 1e-300) for r in rows]))
    slope = float(np.polyfit(logs, loge, 1)[0])
    _write_report(out / "report.json", {
        "command": "sweep",
        "n_times": len(rows),
        "decay_slope": _fmt(slope),
        "slope_certified": bool(slope <= -0.45),
    })
    return 0 if slope <= -0.45 else 2


_COMMANDS = {
    "evaluate": _cmd_evaluate,
    "approximate": _cmd_approximate,
    "origin": _cmd_origin,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="conewave",
        description="Band-limited wave packets: first-term approximations with certified bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="JSON config path (defaults embedded)")
        p.add_argument("--out", default=".", help="output directory for report.json / points.csv")
        p.add_argument("--delta", type=float, default=None, help="override decay exponent")
        p.add_argument("--seed", type=int, default=None, help="reserved; deterministic paths ignore it")
    args = parser.parse_args(argv)

    try:
        cfg = _load_config(args.config)
        if args.delta is not None:
            cfg["delta"] = args.delta
            if not 0.5 < cfg["delta"] < 0.75:
                raise ValueError(f"delta must lie in (0.5, 0.75), got {cfg['delta']}")
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        scene = _build_scene(cfg)
        return _COMMANDS[args.command](scene, out, cfg)
    except (ConewaveError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"conewave: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
