"""Command-line interface.

    curvature-vanish info "SL(3,R)/SO(3)"
    curvature-vanish check "Sp(2,R)/U(2)" --p 1 --condition all
    curvature-vanish catalog --dim-range 3 6 --csv
    curvature-vanish verify --all-supported
    curvature-vanish paper-cases --json

Exit codes: 0 success or all conditions hold, 1 a condition fails, 2 usage or
data error.  ``CURVATURE_VANISH_CATALOG`` may name a catalog override file.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field

import click
import numpy as np

from . import __version__
from .catalog import BUILTIN, DEFAULT_MAX_PARAM, Catalog, SpaceDescriptor, load_catalog_override
from .curvature import curvature_spectrum, hessian_spectrum, laplacian, pinching, unit_direction
from .errors import ParameterError, VanishError
from .matrixlab import algebra_for, cross_check
from .vanishing import (
    VanishingCertificate,
    check_eigen_sum,
    check_pinching,
    check_root_triple,
    max_vanishing_degree,
    verify_proof_chain,
)

SCHEMA_VERSION = 1
CATALOG_ENV = "CURVATURE_VANISH_CATALOG"

SUPPORTED_SPACES = ("AI(3)", "AIII(2,1)", "BDI(3,2)", "CI(2)", "AI(4)", "AIII(2,2)", "BDI(4,2)", "CI(3)")

# (name as written in the case analysis, expected eigen-sum verdict at p = 1)
WORKED_CASES = (
    ("SL(3,R)/SO(3)", True),
    ("SU(1,2)/S(U(1)xU(2))", True),
    ("SO_0(2,3)/SO(2)xSO(3)", True),
    ("Sp(2,R)/U(2)", True),
    ("SO_0(2,2)/SO(2)xSO(2)", False),
)


@dataclass
class Report:
    """Everything one invocation emits in ``--json`` mode."""

    command: str
    query: dict
    certificates: list[VanishingCertificate] = field(default_factory=list)
    payload: dict = field(default_factory=dict)
    timing: dict | None = None
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        out = {
            "schema_version": self.schema_version,
            "command": self.command,
            "query": self.query,
            "certificates": [c.to_dict() for c in self.certificates],
            "payload": self.payload,
        }
        if self.timing is not None:
            out["timing"] = self.timing
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> Report:
        d = json.loads(text)
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema_version {d.get('schema_version')!r}")
        return cls(
            command=d["command"],
            query=d["query"],
            certificates=[VanishingCertificate.from_dict(c) for c in d["certificates"]],
            payload=d["payload"],
            timing=d.get("timing"),
        )


class _Context:
    def __init__(self, catalog: Catalog, timing: bool):
        self.catalog = catalog
        self.timing = timing
        self.start = time.perf_counter()

    def lookup(self, name: str) -> SpaceDescriptor:
        return self.catalog.lookup(name)

    def finish(self, report: Report) -> Report:
        if self.timing:
            report.timing = {"seconds": round(time.perf_counter() - self.start, 6)}
        return report


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _load_catalog() -> Catalog:
    path = os.environ.get(CATALOG_ENV)
    if not path:
        return BUILTIN
    return load_catalog_override(path)


def _fmt(x: float, digits: int = 6) -> str:
    if x == 0:
        return "0"
    return f"{x:.{digits}g}"


def _parse_vector(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise ParameterError(f"cannot parse direction {text!r}; expected comma-separated numbers") from None


def _default_direction(space: SpaceDescriptor) -> np.ndarray:
    c = space.system.chamber().extreme_rays.sum(axis=0)
    return c / np.linalg.norm(c)


def _emit(report: Report, as_json: bool, text: str) -> None:
    click.echo(report.to_json() if as_json else text)


@click.group()
@click.version_option(__version__, prog_name="curvature-vanish")
@click.option("--timing", is_flag=True, help="Record wall-clock time in JSON reports.")
@click.pass_context
def main(ctx: click.Context, timing: bool):
    """Vanishing conditions for L2 harmonic forms on symmetric spaces of noncompact type."""
    try:
        catalog = _load_catalog()
    except VanishError as exc:
        _fail(str(exc))
    ctx.obj = _Context(catalog, timing)


@main.command()
@click.argument("space")
@click.option("--direction", help="Flat direction as comma-separated orthonormal coordinates.")
@click.option("--radius", type=float, help="Geodesic radius for the distance Hessian.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def info(obj: _Context, space: str, direction: str | None, radius: float | None, as_json: bool):
    """Root data, Ricci constant and pinching of SPACE."""
    try:
        desc = obj.lookup(space)
        if radius is not None and not (radius > 0 and math.isfinite(radius)):
            raise ParameterError("radius must be positive")
        s = desc.system
        roots = [
            {
                "root": list(s.simple_coordinates(r)),
                "orbit_class": c,
                "multiplicity": m,
                "norm_sq": str(s.norm_sq(r)),
            }
            for r, m, c in zip(s.positive_roots, s.multiplicities, s.orbit_classes)
        ]
        roots = [dict(r, root=[str(x) for x in r["root"]]) for r in roots]
        pin = pinching(desc)
        payload = {
            "label": desc.label,
            "quotient": desc.quotient,
            "rank": desc.rank,
            "dim": desc.dim,
            "root_type": desc.root_type,
            "roots": roots,
            "ricci": -float(pin.B),
            "pinching": pin.to_dict(),
            "flags": desc.flags,
        }
        if direction is not None or radius is not None:
            h = unit_direction(desc, _parse_vector(direction)) if direction else _default_direction(desc)
            payload["curvature"] = curvature_spectrum(desc, h).to_dict()
            if radius is not None:
                payload["hessian"] = hessian_spectrum(desc, h, radius).to_dict()
                payload["laplacian"] = laplacian(desc, h, radius)
    except VanishError as exc:
        _fail(str(exc))
    report = obj.finish(Report("info", {"space": space, "direction": direction, "radius": radius}, payload=payload))
    lines = [
        f"{desc.label}  {desc.quotient}",
        f"rank {desc.rank}   dim {desc.dim}   restricted roots {desc.root_type}",
        "",
        f"{'root':<16}{'class':<8}{'m':>4}  |root|^2",
    ]
    for r in roots:
        lines.append(f"{'[' + ','.join(r['root']) + ']':<16}{r['orbit_class']:<8}{r['multiplicity']:>4}  {r['norm_sq']}")
    lines += [
        "",
        f"Ricci constant  -{pin.B}",
        f"A = max |root|^2  {pin.A}",
        f"B/A  {pin.ratio} = {_fmt(float(pin.ratio))}",
    ]
    if "curvature" in payload:
        cur = payload["curvature"]
        lines += ["", "direction " + ", ".join(_fmt(x) for x in cur["direction"]), "curvature spectrum (value x mult)"]
        lines += [f"  {_fmt(v)} x {m}" for v, m in cur["entries"]]
    if "hessian" in payload:
        lines += [f"distance Hessian at r = {_fmt(radius)}"]
        lines += [f"  {_fmt(v)} x {m}" for v, m in payload["hessian"]["entries"]]
        lines += [f"Laplacian of r  {_fmt(payload['laplacian'])}"]
    _emit(report, as_json, "\n".join(lines))


def _certificate_line(c: VanishingCertificate) -> str:
    verdict = "holds" if c.holds else "FAILS"
    tag = "" if c.certified else "  (sampled)"
    return f"{c.condition:<12} p={c.p:<3} {verdict:<6} margin {_fmt(c.margin)}{tag}"


@main.command()
@click.argument("space")
@click.option("--p", "p", type=int, required=True, help="Form degree.")
@click.option("--condition", type=click.Choice(["all", "eigen", "pinching", "triple"]), default="eigen",
              show_default=True)
@click.option("--method", type=click.Choice(["exact", "grid"]), default="exact", show_default=True)
@click.option("--resolution", type=int, default=100_000, show_default=True, help="Grid size for --method grid.")
@click.option("--seed", type=int, default=0, show_default=True, help="Sampling seed for --method grid.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def check(obj: _Context, space: str, p: int, condition: str, method: str, resolution: int, seed: int,
          as_json: bool):
    """Check vanishing conditions for p-forms on SPACE."""
    try:
        desc = obj.lookup(space)
        if condition == "triple" and p != 1:
            raise ParameterError("the root-triple condition is stated for p = 1 only")
        certs = []
        if condition in ("all", "eigen"):
            certs.append(check_eigen_sum(desc, p, method=method, resolution=resolution, seed=seed))
        if condition in ("all", "pinching"):
            certs.append(check_pinching(desc, p))
        if condition == "triple" or (condition == "all" and p == 1):
            certs.append(check_root_triple(desc))
    except VanishError as exc:
        _fail(str(exc))
    query = {"space": space, "p": p, "condition": condition, "method": method}
    if method == "grid":
        query.update(resolution=resolution, seed=seed)
    report = obj.finish(Report("check", query, certificates=certs, payload={"label": desc.label}))
    lines = [f"{desc.label}  {desc.quotient}"] + [_certificate_line(c) for c in certs]
    if not desc.in_theorem_scope:
        lines.append("note: outside the theorem's scope (dim <= 2 or reducible)")
    _emit(report, as_json, "\n".join(lines))
    sys.exit(0 if all(c.holds for c in certs) else 1)


CATALOG_COLUMNS = ("label", "rank", "dim", "B/A", "max_vanishing_degree", "triple")


def catalog_rows(spaces: list[SpaceDescriptor]) -> list[dict]:
    rows = []
    for d in spaces:
        degree, _ = max_vanishing_degree(d)
        rows.append({
            "label": d.label,
            "rank": d.rank,
            "dim": d.dim,
            "B/A": float(pinching(d).ratio),
            "max_vanishing_degree": degree,
            "triple": "holds" if check_root_triple(d).holds else "fails",
        })
    return rows


@main.command()
@click.option("--family", help="Restrict to one Cartan family, e.g. AIII.")
@click.option("--rank-range", type=(int, int), help="Inclusive rank bounds.")
@click.option("--dim-range", type=(int, int), help="Inclusive dimension bounds.")
@click.option("--theorem-1-3", "theorem_only", is_flag=True, help="Only rows flagged in_theorem_1_3_list.")
@click.option("--max-param", type=int, default=DEFAULT_MAX_PARAM, show_default=True)
@click.option("--csv", "as_csv", is_flag=True)
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def catalog(obj: _Context, family, rank_range, dim_range, theorem_only, max_param, as_csv, as_json):
    """Tabulate catalog spaces with their vanishing data."""
    if as_csv and as_json:
        _fail("--csv and --json are mutually exclusive")
    try:
        spaces = obj.catalog.enumerate(family=family, rank_range=rank_range, dim_range=dim_range,
                                       theorem_1_3_only=theorem_only, max_param=max_param)
        rows = catalog_rows(spaces)
    except VanishError as exc:
        _fail(str(exc))
    query = {"family": family, "rank_range": list(rank_range) if rank_range else None,
             "dim_range": list(dim_range) if dim_range else None,
             "theorem_1_3": theorem_only, "max_param": max_param}
    report = obj.finish(Report("catalog", query, payload={"rows": rows}))
    if as_csv:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CATALOG_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(dict(r, **{"B/A": repr(r["B/A"])}))
        click.echo(buf.getvalue(), nl=False)
        return
    lines = [f"{'label':<12}{'rank':>5}{'dim':>6}{'B/A':>10}{'max p':>7}  triple"]
    lines += [
        f"{r['label']:<12}{r['rank']:>5}{r['dim']:>6}{_fmt(r['B/A'], 5):>10}{r['max_vanishing_degree']:>7}  {r['triple']}"
        for r in rows
    ]
    _emit(report, as_json, "\n".join(lines))


@main.command()
@click.argument("space", required=False)
@click.option("--all-supported", is_flag=True, help="Verify the built-in list of matrix-model spaces.")
@click.option("--trials", type=int, default=20, show_default=True, help="Random directions per space.")
@click.option("--samples", type=int, default=1000, show_default=True, help="Proof-chain sample directions.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def verify(obj: _Context, space, all_supported, trials, samples, seed, as_json):
    """Cross-check curvature spectra against matrix models and test the Hessian chain."""
    if bool(space) == bool(all_supported):
        _fail("give either SPACE or --all-supported")
    names = SUPPORTED_SPACES if all_supported else (space,)
    results = []
    try:
        for name in names:
            desc = obj.lookup(name)
            algebra_for(desc)  # fail fast before any work
            cc = cross_check(desc, trials=trials, seed=seed)
            degree, _ = max_vanishing_degree(desc)
            chains = [verify_proof_chain(desc, p, samples=samples, seed=seed) for p in range(1, degree + 1)]
            results.append({
                "label": desc.label,
                "cross_check": cc.to_dict(),
                "proof_chain": [c.to_dict() for c in chains],
                "passed": cc.passed and all(c.passed for c in chains),
            })
    except VanishError as exc:
        _fail(str(exc))
    report = obj.finish(Report("verify", {"space": space, "all_supported": all_supported, "trials": trials,
                                          "samples": samples, "seed": seed}, payload={"results": results}))
    lines = [f"{'space':<12}{'model':<11}{'max discrepancy':>17}{'chain min':>12}  result"]
    for r in results:
        cc = r["cross_check"]
        chain = min((c["minimum"] for c in r["proof_chain"]), default=None)
        chain_s = _fmt(chain, 4) if chain is not None else "n/a"
        lines.append(f"{r['label']:<12}{cc['algebra']:<11}{cc['max_discrepancy']:>17.3e}{chain_s:>12}  "
                     f"{'pass' if r['passed'] else 'FAIL'}")
    _emit(report, as_json, "\n".join(lines))
    sys.exit(0 if all(r["passed"] for r in results) else 1)


def worked_case_rows(catalog: Catalog = BUILTIN) -> list[dict]:
    rows = []
    for name, expected in WORKED_CASES:
        desc = catalog.lookup(name)
        cert = check_eigen_sum(desc, 1)
        rows.append({
            "case": name,
            "label": desc.label,
            "dim": desc.dim,
            "rank": desc.rank,
            "holds": cert.holds,
            "expected": expected,
            "margin": cert.margin,
            "witness": cert.witness["direction"],
            "matches": cert.holds == expected,
        })
    return rows


@main.command("paper-cases")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def paper_cases(obj: _Context, as_json: bool):
    """Eigen-sum verdicts at p = 1 for the low-dimensional worked cases."""
    try:
        rows = worked_case_rows(obj.catalog)
    except VanishError as exc:
        _fail(str(exc))
    report = obj.finish(Report("paper-cases", {"p": 1}, payload={"rows": rows}))
    lines = [f"{'case':<26}{'label':<11}{'dim':>4}  {'verdict':<8}{'margin':>10}  expected"]
    for r in rows:
        lines.append(f"{r['case']:<26}{r['label']:<11}{r['dim']:>4}  {'holds' if r['holds'] else 'fails':<8}"
                     f"{_fmt(r['margin']):>10}  {'ok' if r['matches'] else 'MISMATCH'}")
    _emit(report, as_json, "\n".join(lines))
    sys.exit(0 if all(r["matches"] for r in rows) else 1)


if __name__ == "__main__":
    main()
