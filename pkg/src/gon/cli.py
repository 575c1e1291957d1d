"""Command line driver: one subcommand per operation, plus suite runner.

Every numeric cell in a report is exact: an integer, a rational "a/b", or a
certified interval "lo:hi".  Reports are deterministic for a fixed (config,
seed) pair; randomized sweeps draw from random.Random(seed).  Exit codes:
0 success, 2 bad input, 3 when any row hit an operation budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import counting, figurate, packing, theorems
from .body import AxisBox, QuadraticForm, body_from_json, unit_ball
from .errors import BudgetError, GonError
from .exact import PI, Enclosure, frac_to_str, rational_power, str_to_frac
from .lattice import (
    Lattice,
    lattice_new,
    minimal_vectors,
    reduce_2d,
    successive_minima_sq,
)
from .linalg import det, mat


# ---------------------------------------------------------------------------
# wire format


def _cell(v) -> str:
    """One CSV cell: exact integer, rational a/b, interval lo:hi, or text."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return frac_to_str(v)
    if isinstance(v, Enclosure):
        return f"{frac_to_str(v.lo)}:{frac_to_str(v.hi)}"
    if isinstance(v, (tuple, list)):
        return "(" + " ".join(_cell(x) for x in v) + ")"
    return str(v)


def _json_default(v):
    if isinstance(v, Fraction):
        return frac_to_str(v)
    if isinstance(v, Enclosure):
        return [frac_to_str(v.lo), frac_to_str(v.hi)]
    raise TypeError(f"cannot serialize {v!r}")


def _render(fmt: str, payload, header, rows) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_cell(r.get(h)) for h in header])
        return buf.getvalue()
    return json.dumps(payload, indent=2, default=_json_default) + "\n"


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _enc_pair(e: Enclosure) -> list:
    return [frac_to_str(e.lo), frac_to_str(e.hi)]


def _verdict(cert) -> str:
    return "ok" if cert.ok() else "undecided"


# ---------------------------------------------------------------------------
# input loading


def _load_json(source: str) -> dict:
    """Parse a json argument given inline or as a file path."""
    text = source
    if not source.lstrip().startswith(("{", "[")):
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise GonError(f"cannot read {source}: {e}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise GonError(f"bad json in {source!r}: {e}")


_PRESETS = ("hexagonal", "fcc", "even-sum-2d")


def preset_content(name: str) -> dict:
    """Exact file content for a named lattice or Gram preset."""
    if name == "hexagonal":
        return {"gram": [["1", "1/2"], ["1/2", "1"]]}
    if name == "fcc":
        return {
            "gram": [
                ["1", "1/2", "1/2"],
                ["1/2", "1", "1/2"],
                ["1/2", "1/2", "1"],
            ]
        }
    if name == "even-sum-2d":
        return {"basis": [["2", "0"], ["1", "1"]]}
    m = re.fullmatch(r"zn\((\d+)\)", name)
    if m:
        n = int(m.group(1))
        if not 1 <= n <= 8:
            raise GonError("zn(n) supports 1 <= n <= 8")
        return {"basis": [["1" if i == j else "0" for j in range(n)] for i in range(n)]}
    raise GonError(f"unknown preset {name!r}")


def _carrier_from_json(d: dict):
    if "basis" in d:
        return Lattice.from_json(d)
    return QuadraticForm.from_json(d)


def _carrier(args):
    if getattr(args, "preset", None):
        return _carrier_from_json(preset_content(args.preset))
    if getattr(args, "lattice", None):
        return Lattice.from_json(_load_json(args.lattice))
    if getattr(args, "gram", None):
        return QuadraticForm.from_json(_load_json(args.gram))
    raise GonError("supply --lattice, --gram, or --preset")


def _lattice_arg(args) -> Lattice:
    car = _carrier(args)
    if not isinstance(car, Lattice):
        raise GonError("this operation needs a lattice with a rational basis")
    return car


def _body_arg(spec: Optional[str], dim: int):
    """Body from a json argument; None or "ball" means the unit ball."""
    if spec is None or spec == "ball":
        return unit_ball(dim)
    return body_from_json(_load_json(spec))


def _polygon(path: str):
    d = _load_json(path)
    return [(int(a), int(b)) for a, b in d["vertices"]]


def _alpha(s: str):
    if s == "pi":
        return PI
    if s == "sqrt2":
        return rational_power(2, Fraction(1, 2))
    return str_to_frac(s)


# ---------------------------------------------------------------------------
# figurate


def _cmd_fig_value(args):
    v = figurate.polygonal(args.k, args.n)
    row = {"k": args.k, "n": args.n, "value": v}
    return {"k": args.k, "n": args.n, "value": v}, list(row), [row]


def _cmd_fig_index(args):
    idx = figurate.polygonal_index(args.k, args.value)
    row = {"k": args.k, "value": args.value, "index": idx}
    return row, list(row), [row]


def _cmd_fig_eureka(args):
    w = figurate.eureka_decompose(args.m)
    row = {"m": args.m, "parts": tuple(i for i, _ in w.parts),
           "values": tuple(w.values()),
           "verdict": "ok" if w.verify() else "failed"}
    return w.to_json(), list(row), [row]


def _cmd_fig_decompose(args):
    w = figurate.polygonal_decompose(args.k, args.m)
    row = {"k": args.k, "m": args.m, "parts": tuple(i for i, _ in w.parts),
           "values": tuple(w.values()),
           "verdict": "ok" if w.verify() else "failed"}
    return w.to_json(), list(row), [row]


# ---------------------------------------------------------------------------
# counting


def _scan_rows(report, verdicts=None):
    rows = []
    for i, (x, c, m, e, s) in enumerate(report.rows()):
        rows.append({
            "x": x,
            "count": c,
            "main": m,
            "error": e,
            "normalized": s,
            "verdict": verdicts[i] if verdicts else "ok",
        })
    return rows


def _cmd_count_circle(args):
    rep = counting.ball_volume_limit_scan(2, args.xmax, steps=args.steps)
    verdicts = [_verdict(counting.gauss_circle_bounds_check(x)) for x in rep.xs]
    payload = rep.to_json()
    for r, v in zip(payload["rows"], verdicts):
        r["verdict"] = v
    rows = _scan_rows(rep, verdicts)
    return payload, ["x", "count", "main", "error", "normalized", "verdict"], rows


def _cmd_count_ball(args):
    rep = counting.ball_volume_limit_scan(args.d, args.xmax, steps=args.steps)
    rows = _scan_rows(rep)
    return rep.to_json(), ["x", "count", "main", "error", "normalized", "verdict"], rows


def _cmd_count_divisor(args):
    rep = counting.divisor_error_scan(args.xmax, steps=args.steps)
    rows = _scan_rows(rep)
    return rep.to_json(), ["x", "count", "main", "error", "normalized", "verdict"], rows


def _cmd_count_gauss(args):
    cert = counting.gauss_circle_bounds_check(args.x)
    row = {"x": args.x, "count": counting.circle_count(args.x), "verdict": _verdict(cert)}
    return cert.to_json(), list(row), [row]


def _cmd_count_pick(args):
    res = counting.pick_count(_polygon(args.polygon))
    row = {"interior": res.interior, "boundary": res.boundary, "area": res.area,
           "total": res.total, "identity": res.identity_holds,
           "verified": res.verified, "verdict": "ok" if res.identity_holds else "failed"}
    payload = dict(row)
    payload["area"] = frac_to_str(res.area)
    return payload, list(row), [row]


def _cmd_count_jarnik(args):
    res = counting.jarnik_check(_polygon(args.polygon))
    row = {"enclosed": res.enclosed, "area": res.area, "length": res.length,
           "holds": res.holds, "enclosed_closed": res.enclosed_closed,
           "holds_closed": res.holds_closed,
           "verdict": "ok" if res.holds else "failed"}
    payload = dict(row)
    payload["length"] = _enc_pair(res.length)
    payload["area"] = frac_to_str(res.area)
    return payload, list(row), [row]


def _cmd_count_visible(args):
    d = counting.visible_density(args.n)
    row = {"n": args.n, "density": d, "verdict": "ok"}
    return {"n": args.n, "density": frac_to_str(d)}, list(row), [row]


def _cmd_count_orchard(args):
    res = counting.orchard_visibility(str_to_frac(args.big), str_to_frac(args.radius))
    row = {"blocked": res.blocked,
           "direction": res.direction,
           "verdict": _verdict(res.certificate)}
    payload = {"blocked": res.blocked,
               "direction": None if res.direction is None else list(res.direction),
               "certificate": res.certificate.to_json()}
    return payload, list(row), [row]


# ---------------------------------------------------------------------------
# theorems


def _point_row(p, cert, extra=None):
    row = dict(extra or {})
    row.update({"coeffs": p.coeffs, "norm2": p.norm2, "verdict": _verdict(cert)})
    payload = {"point": {"coeffs": list(p.coeffs), "norm2": frac_to_str(p.norm2)},
               "certificate": cert.to_json()}
    return payload, list(row), [row]


def _cmd_thm_twosquare(args):
    (a, b), cert = theorems.two_square(args.p)
    row = {"p": args.p, "a": a, "b": b, "verdict": _verdict(cert)}
    payload = {"p": args.p, "a": a, "b": b, "certificate": cert.to_json()}
    return payload, list(row), [row]


def _cmd_thm_foursquare(args):
    a, b, c, d = theorems.four_square(args.m)
    row = {"m": args.m, "a": a, "b": b, "c": c, "d": d, "verdict": "ok"}
    return dict(row), list(row), [row]


def _cmd_thm_minkowski(args):
    lat = _lattice_arg(args)
    body = _body_arg(args.body, lat.dim)
    p, cert = theorems.minkowski_point(lat, body, mode=args.mode)
    return _point_row(p, cert, {"dim": lat.dim})


def _cmd_thm_grid(args):
    lat = _lattice_arg(args)
    body = _body_arg(args.body, lat.dim)
    p, cert = theorems.mordell_grid_search(lat, body)
    return _point_row(p, cert, {"dim": lat.dim})


def _cmd_thm_approx(args):
    x, y = theorems.dirichlet_1d(_alpha(args.alpha), args.q)
    row = {"alpha": args.alpha, "q": args.q, "x": x, "y": y, "verdict": "ok"}
    return dict(row), list(row), [row]


# ---------------------------------------------------------------------------
# packing


def _cmd_pack_report(args):
    rep = packing.packing_report(_carrier(args), label=args.label or args.preset)
    row = {"lattice": rep.lattice, "min_norm2": rep.min_norm2, "kissing": rep.kissing,
           "density": rep.density, "hermite_invariant": rep.hermite_invariant,
           "verdict": "ok"}
    return rep.to_json(), list(row), [row]


def _bounds_row(n: int):
    hb = packing.hermite_bounds(n)
    return {"n": n, "hermite": hb.hermite, "minkowski": hb.minkowski,
            "blichfeldt": hb.blichfeldt, "known": hb.known, "note": hb.note,
            "verdict": "ok"}


def _cmd_pack_bounds(args):
    dims = range(2, 9) if args.n is None else [args.n]
    rows = [_bounds_row(n) for n in dims]
    payload = {"bounds": [
        {"n": r["n"],
         "hermite": _enc_pair(r["hermite"]),
         "minkowski": _enc_pair(r["minkowski"]),
         "blichfeldt": _enc_pair(r["blichfeldt"]),
         "known": None if r["known"] is None else _enc_pair(r["known"]),
         "note": r["note"]}
        for r in rows
    ]}
    header = ["n", "hermite", "minkowski", "blichfeldt", "known", "note", "verdict"]
    return payload, header, rows


def _cmd_pack_voronoi(args):
    cell = packing.voronoi_cell_2d(_carrier(args))
    row = {"facets": len(cell.neighbours), "area": cell.area,
           "area_sq": cell.area_sq, "verdict": "ok"}
    return cell.to_json(), list(row), [row]


def _cmd_pack_mordell(args):
    cert = packing.mordell_gamma_check(args.n)
    row = {"n": args.n,
           "corrected": cert.data["corrected"]["verdict"],
           "literal": cert.data["literal"]["verdict"],
           "verdict": _verdict(cert)}
    return cert.to_json(), list(row), [row]


def _cmd_pack_critical(args):
    lat = _lattice_arg(args)
    cert = packing.critical_det_check_2d(_body_arg(args.body, lat.dim), lat)
    row = {"delta_sq": str_to_frac(cert.data["delta_sq"]),
           "det_sq": str_to_frac(cert.data["det_sq"]),
           "relation": cert.data["verdict"], "verdict": _verdict(cert)}
    return cert.to_json(), list(row), [row]


def _cmd_pack_hlawka(args):
    car = _carrier(args)
    cert = packing.hlawka_witness_check(_body_arg(args.body, car.dim), car)
    row = {"within_bound": cert.data["within_bound"],
           "det": cert.data["det"][0] + ":" + cert.data["det"][1],
           "bound": cert.data["bound"][0] + ":" + cert.data["bound"][1],
           "verdict": _verdict(cert)}
    return cert.to_json(), list(row), [row]


# ---------------------------------------------------------------------------
# lattices and bodies


def _cmd_lat_preset(args):
    content = preset_content(args.name)
    return content, ["preset", "content"], [
        {"preset": args.name, "content": json.dumps(content)}
    ]


def _cmd_lat_reduce(args):
    red = reduce_2d(_lattice_arg(args))
    payload = red.to_json()
    row = {"b1": red.vectors[0], "b2": red.vectors[1], "det": red.det_abs,
           "verdict": "ok"}
    return payload, list(row), [row]


def _cmd_lat_shortest(args):
    car = _carrier(args)
    budget_kw = {"budget": args.budget} if args.budget else {}
    m, vecs = minimal_vectors(car, **budget_kw)
    row = {"min_norm2": m, "count": len(vecs), "verdict": "ok"}
    payload = {"min_norm2": frac_to_str(m), "count": len(vecs),
               "vectors": [list(p.coeffs) for p in vecs]}
    return payload, list(row), [row]


def _cmd_lat_minima(args):
    lat = _lattice_arg(args)
    body = _body_arg(args.body, lat.dim)
    sq, wits = successive_minima_sq(lat, body)
    rows = [{"j": j + 1, "lambda_sq": v, "witness": w.coeffs, "verdict": "ok"}
            for j, (v, w) in enumerate(zip(sq, wits))]
    payload = {"minima_sq": [frac_to_str(v) for v in sq],
               "witnesses": [list(w.coeffs) for w in wits]}
    return payload, ["j", "lambda_sq", "witness", "verdict"], rows


def _cmd_body_volume(args):
    body = body_from_json(_load_json(args.body))
    vol = body.volume()
    ex = vol.exact()
    enc = vol.enclose(Fraction(1, 10**12))
    row = {"volume": enc, "exact": ex, "verdict": "ok"}
    payload = {"volume": _enc_pair(enc), "exact": None if ex is None else frac_to_str(ex)}
    return payload, list(row), [row]


def _cmd_body_membership(args):
    body = body_from_json(_load_json(args.body))
    pt = tuple(str_to_frac(t) for t in args.point.split(","))
    m = body.membership(pt)
    row = {"point": pt, "membership": m.value, "verdict": "ok"}
    return {"point": [frac_to_str(c) for c in pt], "membership": m.value}, list(row), [row]


# ---------------------------------------------------------------------------
# experiment suites


@dataclass
class ExperimentConfig:
    """A named suite with parameters, seed, and output routing."""

    suite: str
    parameters: dict = field(default_factory=dict)
    fmt: str = "json"
    out: Optional[str] = None
    seed: int = 0
    budget: Optional[int] = None

    @staticmethod
    def from_json(d: dict) -> "ExperimentConfig":
        cfg = ExperimentConfig(suite=d["suite"])
        cfg.parameters = dict(d.get("parameters", {}))
        cfg.fmt = d.get("format", "json")
        cfg.out = d.get("out")
        cfg.seed = int(d.get("seed", 0))
        if d.get("budget") is not None:
            cfg.budget = int(d["budget"])
        if cfg.fmt not in ("csv", "json"):
            raise GonError("format must be csv or json")
        if cfg.budget is not None and cfg.budget <= 0:
            raise GonError("budget must be positive")
        return cfg


def _suite_two_square(params, rng, budget):
    limit = int(params.get("limit", 1000))
    rows = []
    from .intmath import sieve_primes

    for p in sieve_primes(limit):
        if p % 4 != 1:
            continue
        (a, b), cert = theorems.two_square(p)
        rows.append({"p": p, "a": a, "b": b, "verdict": _verdict(cert)})
    header = ["p", "a", "b", "verdict"]
    return header, rows


def _suite_gauss_circle(params, rng, budget):
    xmax = int(params.get("xmax", 10**4))
    steps = int(params.get("steps", 12))
    rep = counting.ball_volume_limit_scan(2, xmax, steps=steps)
    verdicts = [_verdict(counting.gauss_circle_bounds_check(x)) for x in rep.xs]
    return ["x", "count", "main", "error", "normalized", "verdict"], _scan_rows(rep, verdicts)


def _suite_divisor(params, rng, budget):
    xmax = int(params.get("xmax", 10**4))
    steps = int(params.get("steps", 16))
    rep = counting.divisor_error_scan(xmax, steps=steps)
    return ["x", "count", "main", "error", "normalized", "verdict"], _scan_rows(rep)


def _suite_pack_presets(params, rng, budget):
    names = params.get("presets", ["hexagonal", "fcc", "zn(2)", "zn(4)", "even-sum-2d"])
    rows = []
    kw = {"budget": budget} if budget else {}
    for name in names:
        car = _carrier_from_json(preset_content(name))
        rep = packing.packing_report(car, label=name, **kw)
        rows.append({"lattice": rep.lattice, "min_norm2": rep.min_norm2,
                     "kissing": rep.kissing, "density": rep.density,
                     "hermite_invariant": rep.hermite_invariant, "verdict": "ok"})
    header = ["lattice", "min_norm2", "kissing", "density", "hermite_invariant", "verdict"]
    return header, rows


def _suite_hermite_bounds(params, rng, budget):
    dims = params.get("dims", list(range(2, 9)))
    rows = [_bounds_row(int(n)) for n in dims]
    return ["n", "hermite", "minkowski", "blichfeldt", "known", "note", "verdict"], rows


def _random_basis(rng, n: int, span: int):
    while True:
        rows = [[rng.randint(-span, span) for _ in range(n)] for _ in range(n)]
        if det(mat(rows)) != 0:
            return rows



def _suite_minkowski_random(params, rng, budget):
    count = int(params.get("count", 50))
    dims = [int(d) for d in params.get("dims", [2, 3])]
    span = int(params.get("span", 3))
    rows = []
    kw = {"budget": budget} if budget else {}
    for i in range(count):
        n = dims[i % len(dims)]
        basis = _random_basis(rng, n, span)
        lat = lattice_new(basis)
        h = lat.det_abs + 1  # (2h)^n > 2^n det, so the hypothesis is certified
        box = AxisBox([h] * n)
        try:
            p, cert = theorems.minkowski_point(lat, box, **kw)
            rows.append({"index": i, "dim": n, "det": lat.det_abs,
                         "coeffs": p.coeffs, "norm2": p.norm2,
                         "verdict": _verdict(cert)})
        except BudgetError:
            rows.append({"index": i, "dim": n, "det": lat.det_abs,
                         "coeffs": None, "norm2": None, "verdict": "budget"})
    header = ["index", "dim", "det", "coeffs", "norm2", "verdict"]
    return header, rows


_SUITES = {
    "two-square": _suite_two_square,
    "gauss-circle": _suite_gauss_circle,
    "divisor": _suite_divisor,
    "pack-presets": _suite_pack_presets,
    "hermite-bounds": _suite_hermite_bounds,
    "minkowski-random": _suite_minkowski_random,
}


def run_suite(cfg: ExperimentConfig) -> int:
    """Run a named suite; deterministic for fixed (config, seed)."""
    if cfg.suite not in _SUITES:
        raise GonError(f"unknown suite {cfg.suite!r}; choose from {sorted(_SUITES)}")
    rng = random.Random(cfg.seed)
    header, rows = _SUITES[cfg.suite](cfg.parameters, rng, cfg.budget)
    payload = {
        "suite": cfg.suite,
        "seed": cfg.seed,
        "parameters": cfg.parameters,
        "rows": [{h: _cell(r.get(h)) for h in header} for r in rows],
    }
    _write(_render(cfg.fmt, payload, header, rows), cfg.out)
    if any(r.get("verdict") == "budget" for r in rows):
        return 3
    return 0


def _cmd_run_suite(args) -> int:
    cfg = ExperimentConfig.from_json(_load_json(args.config))
    if args.format:
        cfg.fmt = args.format
    if args.out:
        cfg.out = args.out
    if args.seed is not None:
        cfg.seed = args.seed
    if args.budget is not None:
        cfg.budget = args.budget
    return run_suite(cfg)


# ---------------------------------------------------------------------------
# parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--seed", type=int, default=None, help="seed for randomized sweeps")
    p.add_argument("--budget", type=int, default=None, help="search budget override")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="gon", description=__doc__)
    top = parser.add_subparsers(dest="group", required=True)

    fig = top.add_parser("figurate", help="polygonal numbers").add_subparsers(
        dest="cmd", required=True
    )
    sp = fig.add_parser("value", parents=[common])
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=_cmd_fig_value)
    sp = fig.add_parser("index", parents=[common])
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--value", type=int, required=True)
    sp.set_defaults(func=_cmd_fig_index)
    sp = fig.add_parser("eureka", parents=[common])
    sp.add_argument("--m", type=int, required=True)
    sp.set_defaults(func=_cmd_fig_eureka)
    sp = fig.add_parser("decompose", parents=[common])
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.set_defaults(func=_cmd_fig_decompose)

    cnt = top.add_parser("count", help="lattice point counting").add_subparsers(
        dest="cmd", required=True
    )
    sp = cnt.add_parser("circle", parents=[common])
    sp.add_argument("--xmax", type=int, required=True)
    sp.add_argument("--steps", type=int, default=12)
    sp.set_defaults(func=_cmd_count_circle)
    sp = cnt.add_parser("ball", parents=[common])
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--xmax", type=int, required=True)
    sp.add_argument("--steps", type=int, default=12)
    sp.set_defaults(func=_cmd_count_ball)
    sp = cnt.add_parser("divisor", parents=[common])
    sp.add_argument("--xmax", type=int, required=True)
    sp.add_argument("--steps", type=int, default=16)
    sp.set_defaults(func=_cmd_count_divisor)
    sp = cnt.add_parser("gauss", parents=[common])
    sp.add_argument("--x", type=int, required=True)
    sp.set_defaults(func=_cmd_count_gauss)
    sp = cnt.add_parser("pick", parents=[common])
    sp.add_argument("--polygon", required=True, help="json file with a vertices list")
    sp.set_defaults(func=_cmd_count_pick)
    sp = cnt.add_parser("jarnik", parents=[common])
    sp.add_argument("--polygon", required=True)
    sp.set_defaults(func=_cmd_count_jarnik)
    sp = cnt.add_parser("visible", parents=[common])
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=_cmd_count_visible)
    sp = cnt.add_parser("orchard", parents=[common])
    sp.add_argument("--big", required=True, help="orchard radius R")
    sp.add_argument("--radius", required=True, help="tree radius r < 1/2")
    sp.set_defaults(func=_cmd_count_orchard)

    thm = top.add_parser("thm", help="lattice point theorems").add_subparsers(
        dest="cmd", required=True
    )
    sp = thm.add_parser("twosquare", parents=[common])
    sp.add_argument("p", type=int)
    sp.set_defaults(func=_cmd_thm_twosquare)
    sp = thm.add_parser("foursquare", parents=[common])
    sp.add_argument("m", type=int)
    sp.set_defaults(func=_cmd_thm_foursquare)
    for name, fn in (("minkowski", _cmd_thm_minkowski), ("grid", _cmd_thm_grid)):
        sp = thm.add_parser(name, parents=[common])
        sp.add_argument("--lattice")
        sp.add_argument("--gram")
        sp.add_argument("--preset")
        sp.add_argument("--body", help='json body, or "ball" (the default)')
        if name == "minkowski":
            sp.add_argument("--mode", choices=["strict", "closed"], default="strict")
        sp.set_defaults(func=fn)
    sp = thm.add_parser("approx", parents=[common])
    sp.add_argument("--alpha", required=True, help="rational, or pi, or sqrt2")
    sp.add_argument("--q", type=int, required=True)
    sp.set_defaults(func=_cmd_thm_approx)

    pack = top.add_parser("pack", help="sphere packings").add_subparsers(
        dest="cmd", required=True
    )
    sp = pack.add_parser("report", parents=[common])
    sp.add_argument("--lattice")
    sp.add_argument("--gram")
    sp.add_argument("--preset")
    sp.add_argument("--label")
    sp.set_defaults(func=_cmd_pack_report)
    sp = pack.add_parser("bounds", parents=[common])
    sp.add_argument("--n", type=int, default=None, help="dimension 2..8; default all")
    sp.set_defaults(func=_cmd_pack_bounds)
    sp = pack.add_parser("voronoi", parents=[common])
    sp.add_argument("--lattice")
    sp.add_argument("--gram")
    sp.add_argument("--preset")
    sp.set_defaults(func=_cmd_pack_voronoi)
    sp = pack.add_parser("mordell", parents=[common])
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=_cmd_pack_mordell)
    sp = pack.add_parser("critical", parents=[common])
    sp.add_argument("--body", required=True)
    sp.add_argument("--lattice")
    sp.add_argument("--gram")
    sp.add_argument("--preset")
    sp.set_defaults(func=_cmd_pack_critical)
    sp = pack.add_parser("hlawka", parents=[common])
    sp.add_argument("--body", required=True)
    sp.add_argument("--lattice")
    sp.add_argument("--gram")
    sp.add_argument("--preset")
    sp.set_defaults(func=_cmd_pack_hlawka)

    lat = top.add_parser("lat", help="lattices").add_subparsers(dest="cmd", required=True)
    sp = lat.add_parser("preset", parents=[common])
    sp.add_argument("name", help="hexagonal | fcc | zn(n) | even-sum-2d")
    sp.set_defaults(func=_cmd_lat_preset)
    sp = lat.add_parser("reduce", parents=[common])
    sp.add_argument("--lattice")
    sp.add_argument("--gram")
    sp.add_argument("--preset")
    sp.set_defaults(func=_cmd_lat_reduce)
    sp = lat.add_parser("shortest", parents=[common])
    sp.add_argument("--lattice")
    sp.add_argument("--gram")
    sp.add_argument("--preset")
    sp.set_defaults(func=_cmd_lat_shortest)
    sp = lat.add_parser("minima", parents=[common])
    sp.add_argument("--lattice")
    sp.add_argument("--gram")
    sp.add_argument("--preset")
    sp.add_argument("--body", help='json body, or "ball" (the default)')
    sp.set_defaults(func=_cmd_lat_minima)

    body = top.add_parser("body", help="convex bodies").add_subparsers(
        dest="cmd", required=True
    )
    sp = body.add_parser("volume", parents=[common])
    sp.add_argument("--body", required=True)
    sp.set_defaults(func=_cmd_body_volume)
    sp = body.add_parser("membership", parents=[common])
    sp.add_argument("--body", required=True)
    sp.add_argument("--point", required=True, help="comma-separated rationals")
    sp.set_defaults(func=_cmd_body_membership)

    sp = top.add_parser("run-suite", parents=[common], help="run a configured suite")
    sp.add_argument("--config", required=True)
    sp.set_defaults(func=_cmd_run_suite, suite_runner=True)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    try:
        if getattr(args, "suite_runner", False):
            return args.func(args)
        payload, header, rows = args.func(args)
        fmt = args.format or "json"
        _write(_render(fmt, payload, header, rows), args.out)
        return 0
    except BudgetError as e:
        print(f"gon: budget: {e}", file=sys.stderr)
        return 3
    except GonError as e:
        print(f"gon: {e.code}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
