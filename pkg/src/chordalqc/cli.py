"""Deterministic command-line front end.

Every subcommand delegates to one library operation and writes a CSV or
JSON report: identical configuration produces byte-identical output.
Exit codes: 0 success/PASS, 2 computed FAIL (a bound violated, no
horizon at the requested level), 1 usage or evaluation error.

Map specs follow the mini-grammar of :mod:`chordalqc.maps`
(``name[:params]``, ``compose:<outer>,<inner>``); numbers are ``re`` or
``re+imi``.  A JSON file passed through ``--config`` supplies defaults
for any flag not given explicitly; flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import carleson as carleson_mod
from . import extension as ext_mod
from . import loewner as loewner_mod
from .errors import EvaluationError, HorizonError, QuadratureError
from .maps import CATALOG_SPECS, parse_complex, parse_map_spec
from .schwarz import NormProfile, StripGrid, norm_profile

_USAGE_EXIT = 1
_FAIL_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(_USAGE_EXIT)


def _atomic_write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".chordalqc-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _num(v) -> str:
    return repr(float(v))


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_num(v) if not isinstance(v, str) else v for v in row))
    return "\n".join(lines) + "\n"


def _json_doc(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _complex_list(text: str):
    return [parse_complex(part) for part in text.split(";") if part.strip()]


def _grid_from(ns) -> StripGrid:
    return StripGrid(
        x_min=ns.x_min,
        points_per_decade=ns.points_per_decade,
        y_max=ns.y_max,
        y_count=ns.y_count,
    )


def _add_common(p: argparse.ArgumentParser, fmt_choices=("csv", "json"), fmt_default="csv"):
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=fmt_choices, default=fmt_default, help="report format")
    p.add_argument("--config", default=None, help="JSON file with flag defaults (flags win)")


def _add_grid(p: argparse.ArgumentParser):
    p.add_argument("--x-min", type=float, default=1e-4, help="smallest Re level of the strip grid")
    p.add_argument("--points-per-decade", type=int, default=64, help="log-spaced Re levels per decade")
    p.add_argument("--y-max", type=float, default=20.0, help="Im range half-width")
    p.add_argument("--y-count", type=int, default=257, help="number of Im samples")


def _add_variant(p: argparse.ArgumentParser):
    p.add_argument(
        "--variant",
        choices=loewner_mod.VARIANTS,
        default=loewner_mod.VARIANT_SCHWARZIAN,
        help="chain variant",
    )


def build_parser() -> _Parser:
    top = _Parser(prog="chordalqc", description=__doc__.split("\n\n")[0])
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("maps-list", help="list catalog map specs",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    _add_common(p, fmt_choices=("text", "json"), fmt_default="text")

    p = sub.add_parser("eval", help="order-4 jet of a map at points",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--map", required=True, help="map spec")
    p.add_argument("--z", required=True, help="semicolon-separated points, re+imi")
    _add_common(p)

    p = sub.add_parser("norms", help="beta/sigma strip-norm profile",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--map", required=True)
    p.add_argument("--t", required=True, help="comma-separated decreasing t values")
    _add_grid(p)
    _add_common(p)

    p = sub.add_parser("horizon", help="largest grid-certified horizon at level k",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--map", required=True)
    _add_variant(p)
    p.add_argument("--k", type=float, default=0.5, help="disk level in (0,1)")
    p.add_argument("--t-max", type=float, default=1.0, help="scan range maximum")
    _add_grid(p)
    _add_common(p, fmt_default="json")

    p = sub.add_parser("evolve", help="RK4 trace of the evolution flow",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--map", required=True)
    _add_variant(p)
    p.add_argument("--k", type=float, default=0.5, help="disk level in (0,1)")
    p.add_argument("--s", type=float, default=0.0, help="start time")
    p.add_argument("--t", type=float, required=True, help="end time")
    p.add_argument("--z", required=True, help="start point, re+imi")
    p.add_argument("--step", type=float, default=1e-3, help="RK4 step")
    p.add_argument("--tau", type=float, default=None, help="horizon override (skips the scan)")
    _add_grid(p)
    _add_common(p)

    p = sub.add_parser("pde-check", help="closed-form Loewner PDE residuals at random samples",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--map", required=True)
    _add_variant(p)
    p.add_argument("--samples", type=int, default=10000, help="number of random (z, t) samples")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--tol", type=float, default=1e-10, help="residual tolerance")
    p.add_argument("--t-cap", type=float, default=0.05, help="largest sampled time")
    p.add_argument("--k", type=float, default=0.5)
    _add_grid(p)
    _add_common(p, fmt_default="json")

    p = sub.add_parser("extend", help="extension values over the imaginary axis",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--map", required=True)
    _add_variant(p)
    p.add_argument("--z", required=True, help="semicolon-separated points")
    p.add_argument("--k", type=float, default=0.5, help="disk level in (0,1)")
    p.add_argument("--tau", type=float, default=None, help="horizon override (skips the scan)")
    _add_grid(p)
    _add_common(p)

    p = sub.add_parser("verify-mu", help="dilatation identity and bound over the strip",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--map", required=True)
    _add_variant(p)
    p.add_argument("--k", type=float, default=0.5, help="disk level in (0,1)")
    p.add_argument("--fd-step", type=float, default=ext_mod.DEFAULT_FD_STEP, help="Wirtinger difference step")
    p.add_argument("--fd-tol", type=float, default=ext_mod.DEFAULT_FD_TOL, help="identity tolerance")
    p.add_argument("--nx", type=int, default=None, help="override Re level count")
    p.add_argument("--ny", type=int, default=None, help="override Im sample count")
    p.add_argument("--tau", type=float, default=None, help="horizon override (skips the scan)")
    p.add_argument("--summary-only", action="store_true", help="omit per-sample rows")
    _add_grid(p)
    _add_common(p, fmt_default="json")

    p = sub.add_parser("trace-check", help="chain-trace vs closed-form extension equality",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--map", required=True)
    _add_variant(p)
    p.add_argument("--k", type=float, default=0.5, help="disk level in (0,1)")
    p.add_argument("--tol", type=float, default=1e-12, help="equality tolerance")
    p.add_argument("--nx", type=int, default=None, help="override Re level count")
    p.add_argument("--ny", type=int, default=None, help="override Im sample count")
    p.add_argument("--tau", type=float, default=None, help="horizon override (skips the scan)")
    _add_grid(p)
    _add_common(p, fmt_default="json")

    p = sub.add_parser("carleson", help="Carleson box-ratio scan of a density",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--map", required=True)
    p.add_argument("--density", choices=("vmoa", "mu"), default="vmoa")
    _add_variant(p)
    p.add_argument("--k", type=float, default=0.5, help="level for the mu-density horizon")
    p.add_argument("--tau", type=float, default=None, help="horizon override (skips the scan)")
    p.add_argument("--scales", default=None, help="comma-separated |I| values (default dyadic 1..2^-10)")
    p.add_argument("--positions", default=None, help="comma-separated center_y values")
    p.add_argument("--rel-tol", type=float, default=1e-6, help="quadrature relative tolerance")
    p.add_argument("--threshold", type=float, default=carleson_mod.DEFAULT_VANISH_THRESHOLD, help="vanishing verdict threshold (fraction of the norm estimate)")
    _add_grid(p)
    _add_common(p)

    p = sub.add_parser("mu-tilde", help="composite dilatation box decomposition",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--map", required=True)
    p.add_argument("--t", type=float, default=None, help="strip width (default: horizon at --k)")
    p.add_argument("--k", type=float, default=0.5, help="disk level in (0,1)")
    p.add_argument("--outer", choices=("none", "zero"), default="zero",
                   help="outer dilatation beyond the strip")
    p.add_argument("--scales", default=None, help="comma-separated |I| values")
    p.add_argument("--center-y", type=float, default=0.0, help="box center on the imaginary axis")
    p.add_argument("--rel-tol", type=float, default=1e-8, help="quadrature relative tolerance")
    _add_grid(p)
    _add_common(p, fmt_default="json")

    return top


def _apply_config(ns: argparse.Namespace, argv):
    if not getattr(ns, "config", None):
        return
    with open(ns.config) as fh:
        overrides = json.load(fh)
    if not isinstance(overrides, dict):
        raise ValueError("--config must contain a JSON object")
    given = set()
    for token in argv:
        if token.startswith("--"):
            given.add(token.split("=", 1)[0].lstrip("-").replace("-", "_"))
    for key, value in overrides.items():
        dest = key.lstrip("-").replace("-", "_")
        if dest not in given and hasattr(ns, dest):
            setattr(ns, dest, value)


# -- handlers ----------------------------------------------------------------


def _cmd_maps_list(ns) -> int:
    if ns.format == "json":
        doc = [{"spec": s, "description": d} for s, d in CATALOG_SPECS]
        _atomic_write(_json_doc(doc), ns.out)
    else:
        width = max(len(s) for s, _ in CATALOG_SPECS)
        lines = [f"{s.ljust(width)}  {d}" for s, d in CATALOG_SPECS]
        _atomic_write("\n".join(lines) + "\n", ns.out)
    return 0


def _cmd_eval(ns) -> int:
    m = parse_map_spec(ns.map)
    points = _complex_list(ns.z)
    rows = []
    for z in points:
        jet = m.jet(z)
        row = [z.real, z.imag]
        for c in jet.coeffs:
            c = complex(c)
            row.extend((c.real, c.imag))
        rows.append(row)
    header = ["z_re", "z_im"]
    for k in range(5):
        header.extend((f"c{k}_re", f"c{k}_im"))
    if ns.format == "json":
        doc = [
            {"z": [r[0], r[1]], "coeffs": [[r[2 + 2 * k], r[3 + 2 * k]] for k in range(5)]}
            for r in rows
        ]
        _atomic_write(_json_doc({"map": m.name, "jets": doc}), ns.out)
    else:
        _atomic_write(_csv(header, rows), ns.out)
    return 0


def _cmd_norms(ns) -> int:
    m = parse_map_spec(ns.map)
    ts = [float(v) for v in ns.t.split(",") if v.strip()]
    profile = norm_profile(m, ts, grid=_grid_from(ns))
    if ns.format == "json":
        doc = {
            "map": m.name,
            "t": list(profile.t_values),
            "beta": list(profile.beta),
            "sigma": list(profile.sigma),
        }
        _atomic_write(_json_doc(doc), ns.out)
    else:
        _atomic_write(_csv(NormProfile.CSV_HEADER, profile.rows()), ns.out)
    return 0


def _cmd_horizon(ns) -> int:
    m = parse_map_spec(ns.map)
    try:
        res = loewner_mod.tau0_scan(m, ns.variant, ns.k, grid=_grid_from(ns), t_max=ns.t_max)
    except HorizonError as exc:
        _atomic_write(_json_doc({"map": m.name, "variant": ns.variant, "k": ns.k,
                                 "error": str(exc)}), ns.out)
        return _FAIL_EXIT
    if ns.format == "csv":
        _atomic_write(_csv(res.CSV_HEADER, res.profile_rows()), ns.out)
    else:
        _atomic_write(_json_doc({
            "map": m.name,
            "variant": ns.variant,
            "k": ns.k,
            "t_star": res.t_star,
            "levels_scanned": int(res.x_levels.size),
        }), ns.out)
    return 0


def _field_for(ns, m):
    if getattr(ns, "tau", None) is not None:
        return loewner_mod.HerglotzField(m, ns.variant, ns.k, ns.tau)
    return loewner_mod.make_field(m, ns.variant, ns.k, grid=_grid_from(ns))


def _cmd_evolve(ns) -> int:
    m = parse_map_spec(ns.map)
    field = _field_for(ns, m)
    z0 = parse_complex(ns.z)
    states = loewner_mod.evolve_trace(field, ns.s, ns.t, z0, step=ns.step)
    rows = [
        (st.s, st.t, st.z0.real, st.z0.imag, st.z.real, st.z.imag, st.step,
         st.residual_estimate)
        for st in states
    ]
    header = ("s", "t", "z0_re", "z0_im", "z_re", "z_im", "step", "residual_estimate")
    if ns.format == "json":
        doc = {"map": m.name, "variant": ns.variant, "k": ns.k, "tau": field.tau0,
               "trace": [dict(zip(header, r)) for r in rows]}
        _atomic_write(_json_doc(doc), ns.out)
    else:
        _atomic_write(_csv(header, rows), ns.out)
    return 0


def _cmd_pde_check(ns) -> int:
    m = parse_map_spec(ns.map)
    field = loewner_mod.make_field(m, ns.variant, ns.k, grid=_grid_from(ns))
    rng = np.random.default_rng(ns.seed)
    n = ns.samples
    z = rng.uniform(0.01, 5.0, n) + 1j * rng.uniform(-10.0, 10.0, n)
    t_hi = min(ns.t_cap, field.tau0)
    ts = rng.uniform(0.0, t_hi, n)
    worst = float(np.max(loewner_mod.pde_residual(m, ns.variant, z, ts)))
    passed = worst <= ns.tol
    _atomic_write(_json_doc({
        "map": m.name, "variant": ns.variant, "samples": n, "seed": ns.seed,
        "t_cap": t_hi, "max_residual": worst, "tol": ns.tol, "pass": passed,
    }), ns.out)
    return 0 if passed else _FAIL_EXIT


def _cmd_extend(ns) -> int:
    m = parse_map_spec(ns.map)
    tau = ns.tau
    if tau is None:
        tau = loewner_mod.tau0_scan(m, ns.variant, ns.k, grid=_grid_from(ns)).t_star
    rows = []
    for z in _complex_list(ns.z):
        v = complex(ext_mod.extend(m, ns.variant, z, tau=tau))
        rows.append((z.real, z.imag, v.real, v.imag))
    header = ("z_re", "z_im", "value_re", "value_im")
    if ns.format == "json":
        doc = {"map": m.name, "variant": ns.variant, "tau": tau,
               "values": [dict(zip(header, r)) for r in rows]}
        _atomic_write(_json_doc(doc), ns.out)
    else:
        _atomic_write(_csv(header, rows), ns.out)
    return 0


def _cmd_verify_mu(ns) -> int:
    m = parse_map_spec(ns.map)
    report = ext_mod.qc_report(
        m, ns.variant, k=ns.k, fd_step=ns.fd_step, fd_tolerance=ns.fd_tol,
        grid=_grid_from(ns), nx=ns.nx, ny=ns.ny, tau=ns.tau,
    )
    doc = report.to_json_dict(include_samples=not ns.summary_only)
    _atomic_write(_json_doc(doc), ns.out)
    return 0 if report.passed else _FAIL_EXIT


def _cmd_trace_check(ns) -> int:
    m = parse_map_spec(ns.map)
    tau = ns.tau
    if tau is None:
        tau = loewner_mod.tau0_scan(m, ns.variant, ns.k, grid=_grid_from(ns)).t_star
    # pull the deepest level just inside the horizon
    pts = ext_mod.mirror_strip_points(tau, fd_step=1e-9,
                                      grid=_grid_from(ns), nx=ns.nx, ny=ns.ny)
    via_trace = ext_mod.trace_extend(m, ns.variant, pts)
    via_formula = ext_mod.extend(m, ns.variant, pts, tau=tau)
    worst = float(np.max(np.abs(via_trace - via_formula)))
    passed = worst <= ns.tol
    _atomic_write(_json_doc({
        "map": m.name, "variant": ns.variant, "tau": tau,
        "points": int(pts.size), "max_difference": worst, "tol": ns.tol, "pass": passed,
    }), ns.out)
    return 0 if passed else _FAIL_EXIT


def _cmd_carleson(ns) -> int:
    m = parse_map_spec(ns.map)
    scales = [float(v) for v in ns.scales.split(",")] if ns.scales else None
    positions = [float(v) for v in ns.positions.split(",")] if ns.positions else None
    if ns.density == "vmoa":
        dens = carleson_mod.vmoa_density(m)
    else:
        tau = ns.tau
        if tau is None:
            tau = loewner_mod.tau0_scan(m, ns.variant, ns.k, grid=_grid_from(ns)).t_star
        dens = carleson_mod.mu_density(m, ns.variant, tau)
        if scales is None:
            # boxes deeper than the strip have no dilatation values
            scales = [s for s in carleson_mod.DEFAULT_SCALES if s <= tau]
            if not scales:
                raise HorizonError(f"horizon {tau} smaller than every default scale")
    report = carleson_mod.carleson_scan(
        dens, scales=scales, positions=positions,
        rel_tol=ns.rel_tol, vanish_threshold=ns.threshold,
    )
    if ns.format == "json":
        _atomic_write(_json_doc(report.summary()), ns.out)
    else:
        _atomic_write(_csv(report.CSV_HEADER, report.rows()), ns.out)
    return 0


def _cmd_mu_tilde(ns) -> int:
    m = parse_map_spec(ns.map)
    t = ns.t
    if t is None:
        t = loewner_mod.tau0_scan(m, "schwarzian", ns.k, grid=_grid_from(ns)).t_star
    outer = None if ns.outer == "none" else (lambda z: np.zeros(np.shape(z), dtype=complex))
    scales = [float(v) for v in ns.scales.split(",")] if ns.scales else [2 * t, t, t / 2]
    rows = []
    for sc in scales:
        split = carleson_mod.bigbox_decomposition(
            m, t, ns.center_y, sc, outer=outer, rel_tol=ns.rel_tol
        )
        rows.append({
            "scale": sc, "total": split.total, "inner": split.inner_term,
            "outer": split.outer_term, "defect": split.defect,
        })
    _atomic_write(_json_doc({"map": m.name, "t": t, "center_y": ns.center_y,
                             "outer": ns.outer, "boxes": rows}), ns.out)
    return 0


_HANDLERS = {
    "maps-list": _cmd_maps_list,
    "eval": _cmd_eval,
    "norms": _cmd_norms,
    "horizon": _cmd_horizon,
    "evolve": _cmd_evolve,
    "pde-check": _cmd_pde_check,
    "extend": _cmd_extend,
    "verify-mu": _cmd_verify_mu,
    "trace-check": _cmd_trace_check,
    "carleson": _cmd_carleson,
    "mu-tilde": _cmd_mu_tilde,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        _apply_config(ns, argv)
        return _HANDLERS[ns.command](ns)
    except HorizonError as exc:
        sys.stderr.write(f"chordalqc: {exc}\n")
        return _FAIL_EXIT
    except (EvaluationError, QuadratureError, ValueError, OSError) as exc:
        sys.stderr.write(f"chordalqc: error: {exc}\n")
        return _USAGE_EXIT


if __name__ == "__main__":
    raise SystemExit(main())
