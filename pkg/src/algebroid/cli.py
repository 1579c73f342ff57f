"""Batch front end: ``algebroid run spec.json``.

A run spec is a JSON document validated against :data:`SPEC_SCHEMA`;
unknown keys are rejected. A run writes ``report.json``, ``curves.csv``
and ``summary.txt`` atomically into the output directory and exits 0 iff
every requested check passed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from . import radcalc
from .branchlab import all_critical_points, cycles, monodromy, puiseux_expand
from .errors import AlgebroidError, ConfigInvalid, ValueAtReference
from .nevan import (
    EUCLIDEAN,
    N_THETA,
    POINCARE,
    DomainModel,
    VolumeProfile,
    gauges,
    geometric_grid,
    sample_grid,
    value_key,
)
from .polyalg import INF, AlgebroidEquation, CPoly, Z, equation, is_inf, poly_zeros, value_polynomial
from .theorems import (
    branch_divisor_bound,
    defect_relation,
    fmt_residual,
    ldl_check,
    sharing_analyzer,
    smt_check,
)

log = logging.getLogger("algebroid")

SCHEMA_VERSION = 1
CHECKS = ("fmt", "bran", "smt", "defect", "ldl", "monodromy", "puiseux", "radical", "gauges", "sharing")
OUT_ENV = "ALGEBROID_OUT"
RADICAL_PRESET = "paper-example-radical"

_complex = {
    "oneOf": [
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    ]
}
_value = {"oneOf": [_complex, {"const": "inf"}]}
_equation = {
    "oneOf": [
        {"type": "string"},
        {
            "type": "object",
            "properties": {
                "nu": {"type": "integer", "minimum": 1},
                "coeffs": {"type": "array", "items": {"type": "array", "items": _complex}},
            },
            "required": ["nu", "coeffs"],
            "additionalProperties": False,
        },
    ]
}

SPEC_SCHEMA: dict = {
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "domain": {"enum": [EUCLIDEAN, POINCARE]},
        "reference_point": _complex,
        "equation": _equation,
        "values": {"type": "array", "items": _value},
        "r-grid": {
            "type": "object",
            "properties": {
                "r_min": {"type": "number", "exclusiveMinimum": 0},
                "r_max": {"type": "number", "exclusiveMinimum": 0},
                "count": {"type": "integer", "minimum": 2},
            },
            "required": ["r_min", "r_max", "count"],
            "additionalProperties": False,
        },
        "n_theta": {"type": "integer", "minimum": 16},
        "seed": {"type": "integer", "minimum": 0},
        "checks": {"type": "array", "items": {"enum": list(CHECKS)}, "uniqueItems": True},
        "out": {"type": "string"},
        "puiseux": {
            "type": "object",
            "properties": {"order": {"type": "integer", "minimum": 1, "maximum": 60}},
            "additionalProperties": False,
        },
        "gauges": {
            "type": "object",
            "properties": {
                "volume_exponent": {"type": "number"},
                "volume_log_exponent": {"type": "number"},
                "dimension": {"type": "integer", "minimum": 1},
                "delta": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "sharing": {
            "type": "object",
            "properties": {
                "other": _equation,
                "candidates": {"type": "array", "items": _value, "minItems": 1},
            },
            "required": ["other", "candidates"],
            "additionalProperties": False,
        },
    },
    "required": ["schema_version", "equation"],
    "additionalProperties": False,
}

REPORT_SCHEMA: dict = {
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "spec": {"type": "object"},
        "equation": {"type": ["object", "null"]},
        "domain": {"type": "object"},
        "samples": {"type": "array", "items": {"type": "object"}},
        "checks": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "properties": {"passed": {"type": "boolean"}, "error": {"type": ["string", "null"]}},
                "required": ["passed"],
            },
        },
        "all_passed": {"type": "boolean"},
    },
    "required": ["schema_version", "spec", "domain", "checks", "all_passed"],
    "additionalProperties": False,
}


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Preset:
    equation: AlgebroidEquation | None
    reference_point: complex = 0j
    values: tuple = (1.0, -1.0, INF)


def _presets() -> dict[str, Preset]:
    return {
        # o is moved off the branch point at 0 so branch counting is defined
        "sqrt-z": Preset(equation(-Z, 0, 1, label="sqrt-z"), 0.5, (1.0, -1.0, 2j)),
        "sqrt-shift": Preset(equation(-(Z - 1), 0, 1, label="sqrt-shift"), 0j, (2.0, -2.0, INF)),
        "cbrt": Preset(equation(-Z, 0, 0, 1, label="cbrt"), 0.5, (1.0, -1.0, INF)),
        "cbrt-shift": Preset(equation(-(Z - 1), 0, 0, 1, label="cbrt-shift"), 0j, (1.0, -2.0, INF)),
        "mobius": Preset(equation(-(Z - 1), Z + 1, label="mobius"), 0j, (1.0, 2.0, INF)),
        "rational-2": Preset(equation(-(Z**2 + 0.5), Z**2 - 3, label="rational-2"), 0j, (INF, 1.0, -1.0)),
        "quartic-2": Preset(
            equation(-(Z**2 - 1) * (Z**2 - 4), 0, 1, label="quartic-2"), 0j, (INF, 0.0 + 0.5j, 3.0, -3.0, 1.0j)
        ),
        "two-point": Preset(equation(-(Z - 1) * (Z - 2), 0, 1, label="two-point"), 0j, (1.0, -1.0, INF)),
        "reducible": Preset(equation(-(Z**2), 0, 1, label="reducible"), 0.5, (1.0, -1.0, INF)),
        "poly-d": Preset(equation(-(Z - 0.3) * (Z + 0.7j) * (Z - 2), 1, label="poly-d"), 0j, (INF, 1.0, -1.0)),
        RADICAL_PRESET: Preset(None, 0j, ()),
    }


PRESETS = _presets()


# ---------------------------------------------------------------------------
# run spec
# ---------------------------------------------------------------------------


def _to_complex(x) -> complex:
    return complex(x[0], x[1]) if isinstance(x, list) else complex(x)


def _to_value(x):
    return INF if x == "inf" else _to_complex(x)


def _equation_from(data, where: str) -> tuple[AlgebroidEquation | None, Preset | None]:
    if isinstance(data, str):
        if data not in PRESETS:
            raise ConfigInvalid(where, f"unknown preset {data!r}; known: {sorted(PRESETS)}")
        p = PRESETS[data]
        return p.equation, p
    if len(data["coeffs"]) != data["nu"] + 1:
        raise ConfigInvalid(f"{where}.coeffs", f"need nu + 1 = {data['nu'] + 1} coefficient lists")
    try:
        return AlgebroidEquation([CPoly([_to_complex(c) for c in cs]) for cs in data["coeffs"]], label="custom"), None
    except ValueError as exc:
        raise ConfigInvalid(f"{where}.coeffs", str(exc)) from None


@dataclass
class RunSpec:
    equation: AlgebroidEquation | None
    domain: DomainModel
    values: list
    r_grid: np.ndarray
    n_theta: int = N_THETA
    seed: int = 0
    checks: list[str] = field(default_factory=list)
    out: str = "out"
    puiseux_order: int = 6
    gauge_params: dict = field(default_factory=dict)
    sharing: dict | None = None
    raw: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: Any) -> "RunSpec":
        validator = jsonschema.Draft202012Validator(SPEC_SCHEMA)
        errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
        if errors:
            err = errors[0]
            path = ".".join(str(p) for p in err.absolute_path)
            if err.validator == "additionalProperties":
                extra = sorted(set(err.instance) - set(err.schema.get("properties", {})))
                path = ".".join(x for x in (path, extra[0] if extra else "") if x)
            elif err.validator == "required":
                missing = err.message.split("'")[1]
                path = ".".join(x for x in (path, missing) if x)
            raise ConfigInvalid(path or "<root>", err.message)

        eq, preset = _equation_from(data["equation"], "equation")
        if "reference_point" in data:
            o = _to_complex(data["reference_point"])
        else:
            o = preset.reference_point if preset else 0j
        kind = data.get("domain", EUCLIDEAN)
        if kind == POINCARE and abs(o) >= 1:
            raise ConfigInvalid("reference_point", "must lie inside the unit disc")
        dom = DomainModel(kind, o)

        grid = data.get("r-grid", {"r_min": math.e, "r_max": math.e**4, "count": 4})
        if not grid["r_min"] < grid["r_max"]:
            raise ConfigInvalid("r-grid.r_max", "r_min must be smaller than r_max")

        if "values" in data:
            values = [_to_value(v) for v in data["values"]]
        else:
            values = list(preset.values) if preset else [INF]
        keys = [value_key(v) for v in values]
        if len(set(keys)) != len(keys):
            raise ConfigInvalid("values", "target values must be distinct")

        checks = list(data.get("checks", []))
        if eq is None and any(c != "radical" for c in checks):
            raise ConfigInvalid("checks", f"preset {RADICAL_PRESET!r} only supports the radical check")
        if "radical" in checks and data["equation"] != RADICAL_PRESET:
            raise ConfigInvalid("checks", f"the radical check needs the {RADICAL_PRESET!r} preset")
        if "defect" in checks and grid["count"] < 8:
            raise ConfigInvalid("r-grid.count", "the defect check needs at least 8 radii")
        if "ldl" in checks and eq.nu != 1:
            raise ConfigInvalid("checks", "the ldl check needs a single-valued (nu = 1) equation")
        sharing = None
        if "sharing" in checks:
            if "sharing" not in data:
                raise ConfigInvalid("sharing", "the sharing check needs a sharing block")
            other, _ = _equation_from(data["sharing"]["other"], "sharing.other")
            if other is None:
                raise ConfigInvalid("sharing.other", "needs an algebroid equation")
            sharing = {"other": other, "candidates": [_to_value(v) for v in data["sharing"]["candidates"]]}

        return cls(
            equation=eq,
            domain=dom,
            values=values,
            r_grid=geometric_grid(grid["r_min"], grid["r_max"], grid["count"]),
            n_theta=data.get("n_theta", N_THETA),
            seed=data.get("seed", 0),
            checks=checks,
            out=data.get("out", "out"),
            puiseux_order=data.get("puiseux", {}).get("order", 6),
            gauge_params=data.get("gauges", {}),
            sharing=sharing,
            raw=data,
        )

    @classmethod
    def load(cls, path: str | os.PathLike) -> "RunSpec":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigInvalid("<root>", f"not valid JSON: {exc}") from None
        return cls.from_dict(data)


# ---------------------------------------------------------------------------
# JSON hygiene
# ---------------------------------------------------------------------------


def _clean(x):
    """Recursively map to plain JSON: complex -> [re, im], non-finite floats -> strings."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_clean(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [_clean(float(x.real)), _clean(float(x.imag))]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x


def validate_report(report: dict) -> None:
    jsonschema.validate(report, REPORT_SCHEMA)


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


SPIRAL_STEP = 0.02
SPIRAL_CLEARANCE = 0.01


def suggest_reference_point(eq: AlgebroidEquation, dom: DomainModel, values, seed: int = 0, tries: int = 400) -> complex | None:
    """Smallest offset of ``o`` on a fixed golden-angle spiral that clears every
    pole, tested a-point and critical point by ``SPIRAL_CLEARANCE``."""
    bad = [z for z, _ in poly_zeros(eq.A[-1], seed)]
    for a in values:
        if not is_inf(a):
            p = value_polynomial(eq, a)
            if not p.is_zero():
                bad += [z for z, _ in poly_zeros(p, seed)]
    bad += [c.location for c in all_critical_points(eq, seed)]
    golden = math.pi * (3 - math.sqrt(5))
    for k in range(1, tries + 1):
        cand = dom.o + SPIRAL_STEP * k * complex(math.cos(k * golden), math.sin(k * golden))
        if dom.hyperbolic and abs(cand) >= 1:
            continue
        if all(abs(cand - b) > SPIRAL_CLEARANCE for b in bad):
            return complex(round(cand.real, 6), round(cand.imag, 6))
    return None


def _describe(exc: AlgebroidError, spec: RunSpec) -> str:
    msg = f"{type(exc).__name__}: {exc}"
    if isinstance(exc, ValueAtReference) and spec.equation is not None:
        o = suggest_reference_point(spec.equation, spec.domain, spec.values, spec.seed)
        if o is not None:
            msg += f"; try \"reference_point\": [{o.real!r}, {o.imag!r}]"
    return msg


def _region(spec: RunSpec):
    return spec.domain.enclosing_disc(float(spec.r_grid[-1]))


def _run_check(name: str, spec: RunSpec, ctx: dict) -> dict:
    eq, dom, grid = spec.equation, spec.domain, spec.r_grid
    kw = {"n_theta": spec.n_theta, "seed": spec.seed}
    if name == "fmt":
        ledgers = {value_key(a): fmt_residual(eq, dom, a, grid, **kw) for a in spec.values if not is_inf(a)}
        for k, led in ledgers.items():
            ctx["margins"][f"margin_fmt_{k}"] = led.margins
        return {"passed": all(l.verdict for l in ledgers.values()), "ledgers": {k: l.to_json() for k, l in ledgers.items()}}
    if name == "bran":
        led = branch_divisor_bound(eq, dom, grid, certificate=ctx.get("certificate"), **kw)
        ctx["margins"]["margin_bran"] = led.margins
        return {"passed": led.verdict, "ledger": led.to_json()}
    if name == "smt":
        led = smt_check(eq, dom, spec.values, grid, **kw)
        ctx["margins"]["margin_smt"] = led.margins
        return {"passed": led.verdict, "ledger": led.to_json()}
    if name == "defect":
        total, ok, per = defect_relation(eq, dom, spec.values, grid, **kw)
        return {"passed": ok, "sum": total, "bound": 2 * eq.nu, "per_value": per}
    if name == "ldl":
        led = ldl_check(eq, dom, grid, **kw)
        ctx["margins"]["margin_ldl"] = led.margins
        return {"passed": led.verdict, "ledger": led.to_json()}
    if name == "monodromy":
        cert = _certificate(spec, ctx)
        return {"passed": cert.complete and cert.product_matches_infinity(), "certificate": cert.to_json()}
    if name == "puiseux":
        cert = _certificate(spec, ctx)
        out, ok = [], True
        for c, perm in zip(cert.critical_points, cert.permutations):
            for cyc in cycles(perm):
                if len(cyc) < 2:
                    continue
                try:
                    exp = puiseux_expand(eq, c.location, cyc, spec.puiseux_order, certificate=cert, seed=spec.seed)
                    out.append(exp.to_json())
                except AlgebroidError as exc:
                    ok = False
                    out.append({"center": c.location, "cycle": list(cyc), "error": f"{type(exc).__name__}: {exc}"})
        return {"passed": ok, "expansions": out}
    if name == "radical":
        expr = radcalc.example_expression()
        orders = {k: radcalc.branch_order(expr, p) for k, p in radcalc.EXAMPLE_POINTS.items()}
        return {
            "passed": True,
            "expression": radcalc.expr_to_json(expr),
            "valence": radcalc.valence(expr),
            "branch_orders": orders,
            "points": {k: list(p) for k, p in radcalc.EXAMPLE_POINTS.items()},
        }
    if name == "gauges":
        g = spec.gauge_params
        V = VolumeProfile(g.get("volume_exponent", 4.0), g.get("volume_log_exponent", 0.0))
        s = 1.0 if dom.hyperbolic else 0.0
        m_dim = g.get("dimension", 1 if dom.hyperbolic else 2)
        delta = g.get("delta", 0.1)
        rows = []
        for r in grid:
            gg = gauges(V, s, s, m_dim, float(r), delta)
            rows.append({"r": float(r), "H": gg.H, "H_delta": gg.H_delta, "chi": gg.chi, "E_delta": gg.E_delta})
        ok = all(math.isfinite(v) and v > 0 for row in rows for v in row.values())
        ctx["gauges"] = rows
        return {"passed": ok, "sigma": s, "tau": s, "dimension": m_dim, "delta": delta, "rows": rows}
    if name == "sharing":
        sh = spec.sharing
        rep = sharing_analyzer(eq, sh["other"], dom, sh["candidates"], grid, seed=spec.seed)
        # the criterion is contradicted only if identity is forced but not observed
        return {"passed": rep.identical or not rep.forced, **rep.to_json()}
    raise ConfigInvalid("checks", f"unknown check {name!r}")


def _certificate(spec: RunSpec, ctx: dict):
    if "certificate" not in ctx:
        ctx["certificate"] = monodromy(spec.equation, _region(spec), seed=spec.seed)
    return ctx["certificate"]


# ---------------------------------------------------------------------------
# artifacts
# ---------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def curves_csv(spec: RunSpec, samples, margins: dict[str, list[float]]) -> str:
    keys = [value_key(a) for a in spec.values]
    header = ["r", "T", "m", "N", "N_bran", "T_ricci"]
    for k in keys:
        header += [f"m_{k}", f"N_{k}", f"Nbar_{k}"]
    header += sorted(margins)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for i, s in enumerate(samples):
        row = [s.r, s.T, s.m, s.N, s.N_bran, s.T_ricci]
        for k in keys:
            v = s.values[k]
            row += [v.m, v.N, v.Nbar]
        row += [margins[name][i] for name in sorted(margins)]
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def summary_text(spec: RunSpec, checks: dict) -> str:
    lines = []
    eq = spec.equation
    lines.append(f"equation: {eq.label if eq else RADICAL_PRESET}" + (f" (nu = {eq.nu})" if eq else ""))
    lines.append(f"domain: {spec.domain.kind}, o = {spec.domain.o}")
    lines.append(f"r-grid: {len(spec.r_grid)} radii in [{spec.r_grid[0]:.6g}, {spec.r_grid[-1]:.6g}]")
    for name, res in checks.items():
        status = "PASS" if res["passed"] else "FAIL"
        detail = ""
        if res.get("error"):
            detail = f" ({res['error']})"
        elif name == "radical":
            orders = ", ".join(f"{k} order {v}" for k, v in res["branch_orders"].items())
            detail = f" valence {res['valence']}; {orders}"
        elif name == "defect":
            detail = f" sum {res['sum']:.6g} <= {res['bound']}"
        elif "ledger" in res:
            detail = f" exceptional fraction {res['ledger']['exceptional_fraction']:.3g}"
        elif "ledgers" in res:
            detail = f" {len(res['ledgers'])} values"
        elif name == "monodromy":
            c = res["certificate"]
            detail = f" {len(c['critical_points'])} critical points, irreducible: {c['irreducible']}"
        elif name == "sharing":
            detail = f" shared {res['shared_count']} (nonempty {res['nonempty_shared']}), forced {res['forced']}, identical {res['identical']}"
        lines.append(f"{name}: {status}{detail}")
    lines.append("overall: " + ("PASS" if all(r["passed"] for r in checks.values()) else "FAIL"))
    return "\n".join(lines) + "\n"


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class RunResult:
    passed: bool
    report: dict
    out_dir: Path


def run(spec: RunSpec, out_dir: str | os.PathLike | None = None) -> RunResult:
    out = Path(out_dir if out_dir is not None else spec.out)
    checks: dict[str, dict] = {}
    ctx: dict = {"margins": {}}
    samples = []
    pending = list(spec.checks)
    if spec.equation is not None:
        log.info("sampling %d radii", len(spec.r_grid))
        try:
            samples = sample_grid(spec.equation, spec.domain, spec.r_grid, spec.values, spec.n_theta, spec.seed)
        except AlgebroidError as exc:
            log.warning("sampling failed: %s", exc)
            checks["sampling"] = {"passed": False, "error": _describe(exc, spec)}
            pending = []
    for name in pending:
        log.info("check %s", name)
        try:
            checks[name] = {"error": None, **_run_check(name, spec, ctx)}
        except AlgebroidError as exc:
            log.warning("check %s failed: %s", name, exc)
            checks[name] = {"passed": False, "error": _describe(exc, spec)}

    report = _clean(
        {
            "schema_version": SCHEMA_VERSION,
            "spec": {**spec.raw, "seed": spec.seed},
            "equation": None if spec.equation is None else {"nu": spec.equation.nu, "coeffs": spec.equation.to_lists(), "label": spec.equation.label},
            "domain": {"kind": spec.domain.kind, "reference_point": spec.domain.o},
            "samples": [
                {
                    "r": s.r,
                    "T": s.T,
                    "m": s.m,
                    "N": s.N,
                    "N_bran": s.N_bran,
                    "T_ricci": s.T_ricci,
                    "values": {k: {"m": v.m, "N": v.N, "Nbar": v.Nbar} for k, v in s.values.items()},
                }
                for s in samples
            ],
            "checks": checks,
            "all_passed": all(c["passed"] for c in checks.values()),
        }
    )
    validate_report(report)
    _atomic_write(out / "report.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
    if samples:
        _atomic_write(out / "curves.csv", curves_csv(spec, samples, ctx["margins"]))
    _atomic_write(out / "summary.txt", summary_text(spec, checks))
    return RunResult(report["all_passed"], report, out)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="algebroid", description="Algebroid function and value-distribution toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="execute a JSON run specification")
    r.add_argument("specfile")
    r.add_argument("--out", help=f"output directory (overrides ${OUT_ENV} and the spec)")
    r.add_argument("--seed", type=int, help="override the spec seed")
    r.add_argument("--verbose", action="store_true")
    sub.add_parser("presets", help="list named equation presets")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "presets":
        for name, p in PRESETS.items():
            nu = p.equation.nu if p.equation else "-"
            print(f"{name}\tnu={nu}\to={p.reference_point}")
        return 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        data = json.loads(Path(args.specfile).read_text())
        if args.seed is not None:
            if args.seed < 0 or args.seed >= 2**64:
                raise ConfigInvalid("seed", "must be an unsigned 64-bit integer")
            data = {**data, "seed": args.seed}
        spec = RunSpec.from_dict(data)
    except json.JSONDecodeError as exc:
        print(f"ConfigInvalid: <root>: not valid JSON: {exc}", file=sys.stderr)
        return 2
    except ConfigInvalid as exc:
        print(f"ConfigInvalid: {exc}", file=sys.stderr)
        return 2
    out = args.out or os.environ.get(OUT_ENV) or spec.out
    result = run(spec, out)
    print(summary_text(spec, result.report["checks"]), end="")
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())
