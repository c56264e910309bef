"""Irreducible Riemannian symmetric spaces of noncompact type and their restricted root data.

Multiplicities follow Helgason's Table VI.  Every row is checked against the
dimension identity ``dim = rank + sum m_lambda`` and the Ricci identity
(``sum m lambda lambda^T = 1/2 I`` after normalization) when it is built.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable

from .errors import DataError, IdentityViolation, ParameterError, SpaceLookupError
from .rootkit import (
    RestrictedRootSystem,
    attach_multiplicities,
    build_root_system,
    killing_normalize,
    parse_root_type,
)

CLASSICAL = ("AI", "AII", "AIII", "BDI", "DIII", "CI", "CII")
EXCEPTIONAL = ("EI", "EII", "EIII", "EIV", "EV", "EVI", "EVII", "EVIII", "EIX", "FI", "FII", "G")
FAMILY_ORDER = {name: i for i, name in enumerate(CLASSICAL + EXCEPTIONAL)}
DEFAULT_MAX_PARAM = 8

# label: (root type, multiplicities, dim, quotient)
_EXCEPTIONAL_ROWS = {
    "EI": ("E6", {"root": 1}, 42, "E6(6)/Sp(4)"),
    "EII": ("F4", {"short": 2, "long": 1}, 40, "E6(2)/SU(6)xSU(2)"),
    "EIII": ("BC2", {"middle": 6, "short": 8, "long": 1}, 32, "E6(-14)/Spin(10)xU(1)"),
    "EIV": ("A2", {"root": 8}, 26, "E6(-26)/F4"),
    "EV": ("E7", {"root": 1}, 70, "E7(7)/SU(8)"),
    "EVI": ("F4", {"short": 4, "long": 1}, 64, "E7(-5)/Spin(12)xSU(2)"),
    "EVII": ("C3", {"short": 8, "long": 1}, 54, "E7(-25)/E6xU(1)"),
    "EVIII": ("E8", {"root": 1}, 128, "E8(8)/Spin(16)"),
    "EIX": ("F4", {"short": 8, "long": 1}, 112, "E8(-24)/E7xSU(2)"),
    "FI": ("F4", {"short": 1, "long": 1}, 28, "F4(4)/Sp(3)xSU(2)"),
    "FII": ("BC1", {"short": 8, "long": 7}, 16, "F4(-20)/Spin(9)"),
    "G": ("G2", {"short": 1, "long": 1}, 8, "G2(2)/SO(4)"),
}


@dataclass(frozen=True)
class SpaceDescriptor:
    label: str
    family: str
    params: tuple[int, ...]
    rank: int
    dim: int
    system: RestrictedRootSystem = field(repr=False)
    quotient: str = ""
    reducible_exception: bool = False
    in_theorem_1_3_list: bool = False

    @property
    def flags(self) -> dict[str, bool]:
        return {
            "reducible_exception": self.reducible_exception,
            "in_theorem_1_3_list": self.in_theorem_1_3_list,
        }

    @property
    def in_theorem_scope(self) -> bool:
        """Dimension exceeds 2 and the space is not SO_0(2,2)/SO(2)xSO(2)."""
        return self.dim > 2 and not self.reducible_exception

    @property
    def root_type(self) -> str:
        return self.system.family + ("" if self.system.family[-1].isdigit() else str(self.rank))


def validate(desc: SpaceDescriptor) -> SpaceDescriptor:
    """Re-check the identities every row must satisfy."""
    s = desc.system
    if s.rank != desc.rank:
        raise IdentityViolation("dimension identity", f"{desc.label}: rank {desc.rank} but system rank {s.rank}")
    if desc.dim != desc.rank + s.total_multiplicity:
        raise IdentityViolation(
            "dimension identity",
            f"{desc.label}: dim {desc.dim} != rank {desc.rank} + sum m {s.total_multiplicity}",
        )
    try:
        normalized = killing_normalize(s)
    except DataError as exc:
        raise IdentityViolation("Ricci identity", f"{desc.label}: {exc}") from exc
    if normalized.scale_sq != s.scale_sq:
        raise IdentityViolation("Ricci identity", f"{desc.label}: system is not Killing-normalized")
    if not (desc.reducible_exception or s.is_irreducible()):
        raise DataError(f"{desc.label}: reducible root system without the reducible_exception flag")
    return desc


# -- classical families -------------------------------------------------------------


def _classical_data(family: str, params: tuple[int, ...]):
    """(root type, rank, multiplicities, dim, quotient) for a classical family."""
    if family == "AI":
        (n,) = params
        if n < 2:
            raise ParameterError("AI(n) requires n >= 2")
        return "A", n - 1, {"root": 1}, (n - 1) * (n + 2) // 2, f"SL({n},R)/SO({n})"
    if family == "AII":
        (n,) = params
        if n < 2:
            raise ParameterError("AII(n) requires n >= 2")
        return "A", n - 1, {"root": 4}, (n - 1) * (2 * n + 1), f"SU*({2 * n})/Sp({n})"
    if family == "AIII":
        p, q = params
        if not p >= q >= 1:
            raise ParameterError("AIII(p,q) requires p >= q >= 1")
        quot = f"SU({p},{q})/S(U({p})xU({q}))"
        if p > q:
            mults = {"middle": 2, "short": 2 * (p - q), "long": 1}
            if q == 1:
                mults.pop("middle")
            return "BC", q, mults, 2 * p * q, quot
        mults = {"long": 1} if q == 1 else {"short": 2, "long": 1}
        return "C", q, mults, 2 * p * q, quot
    if family == "BDI":
        p, q = params
        if not p >= q >= 1:
            raise ParameterError("BDI(p,q) requires p >= q >= 1")
        if p + q < 3:
            raise ParameterError("BDI(p,q) requires p + q >= 3 (SO_0(1,1) is flat)")
        quot = f"SO_0({p},{q})/SO({p})xSO({q})"
        if p > q:
            if q == 1:
                return "B", 1, {"short": p - q}, p * q, quot
            return "B", q, {"long": 1, "short": p - q}, p * q, quot
        return "D", q, {"root": 1}, p * q, quot
    if family == "DIII":
        (n,) = params
        if n < 2:
            raise ParameterError("DIII(n) requires n >= 2")
        r = n // 2
        quot = f"SO*({2 * n})/U({n})"
        if n % 2 == 0:
            mults = {"long": 1} if r == 1 else {"short": 4, "long": 1}
            return "C", r, mults, n * (n - 1), quot
        mults = {"short": 4, "long": 1} if r == 1 else {"middle": 4, "short": 4, "long": 1}
        return "BC", r, mults, n * (n - 1), quot
    if family == "CI":
        (n,) = params
        if n < 1:
            raise ParameterError("CI(n) requires n >= 1")
        mults = {"long": 1} if n == 1 else {"short": 1, "long": 1}
        return "C", n, mults, n * (n + 1), f"Sp({n},R)/U({n})"
    if family == "CII":
        p, q = params
        if not p >= q >= 1:
            raise ParameterError("CII(p,q) requires p >= q >= 1")
        quot = f"Sp({p},{q})/Sp({p})xSp({q})"
        if p > q:
            mults = {"middle": 4, "short": 4 * (p - q), "long": 3}
            if q == 1:
                mults.pop("middle")
            return "BC", q, mults, 4 * p * q, quot
        mults = {"long": 3} if q == 1 else {"short": 4, "long": 3}
        return "C", q, mults, 4 * p * q, quot
    raise SpaceLookupError(f"unknown family {family!r}")


def _theorem_1_3(family: str, params: tuple[int, ...]) -> bool:
    if family == "AI":
        return params[0] >= 4
    if family in ("AII", "CII") or family in EXCEPTIONAL:
        return True
    if family == "AIII":
        return sum(params) >= 4
    if family == "BDI":
        p, q = params
        return p + q >= 4 if q == 1 else p + q >= 6
    if family in ("DIII", "CI"):
        return params[0] >= 3
    return False


def _normalize_params(family: str, params: tuple[int, ...]) -> tuple[int, ...]:
    if family in ("AIII", "BDI", "CII"):
        if len(params) != 2:
            raise ParameterError(f"{family} takes two parameters (p,q)")
        return (max(params), min(params))
    if family in ("AI", "AII", "DIII", "CI"):
        if len(params) != 1:
            raise ParameterError(f"{family} takes one parameter n")
        return tuple(params)
    if params:
        raise ParameterError(f"{family} takes no parameters")
    return ()


@lru_cache(maxsize=None)
def build_space(family: str, params: tuple[int, ...] = ()) -> SpaceDescriptor:
    """Construct and validate the built-in descriptor for ``family(params)``."""
    family = family.upper()
    if family not in FAMILY_ORDER:
        raise SpaceLookupError(f"unknown symmetric-space family {family!r}")
    params = _normalize_params(family, tuple(int(x) for x in params))
    if family in EXCEPTIONAL:
        root_type, mults, dim, quot = _EXCEPTIONAL_ROWS[family]
        fam, rank = parse_root_type(root_type)
        label = family
    else:
        fam, rank, mults, dim, quot = _classical_data(family, params)
        label = f"{family}({','.join(map(str, params))})"
    system = killing_normalize(attach_multiplicities(build_root_system(fam, rank), mults))
    reducible = family == "BDI" and params == (2, 2)
    return validate(
        SpaceDescriptor(
            label=label,
            family=family,
            params=params,
            rank=rank,
            dim=dim,
            system=system,
            quotient=quot,
            reducible_exception=reducible,
            in_theorem_1_3_list=_theorem_1_3(family, params),
        )
    )


# -- name parsing -------------------------------------------------------------------

_CARTAN_RE = re.compile(r"^(AIII|AII|AI|BDI|DIII|CII|CI|EVIII|EVII|EVI|EV|EIV|EIII|EII|EIX|EI|FII|FI|G)(?:\((\d+(?:,\d+)?)\))?$")
_QUOTIENT_RULES = [
    (re.compile(r"^SL\((\d+),R\)$"), lambda a: ("AI", (a[0],))),
    (re.compile(r"^SU\*\((\d+)\)$"), lambda a: ("AII", (a[0] // 2,)) if a[0] % 2 == 0 else None),
    (re.compile(r"^SU\((\d+),(\d+)\)$"), lambda a: ("AIII", a)),
    (re.compile(r"^SO(?:_?0|_?O)?\((\d+),(\d+)\)$"), lambda a: ("BDI", a)),
    (re.compile(r"^SO\*\((\d+)\)$"), lambda a: ("DIII", (a[0] // 2,)) if a[0] % 2 == 0 else None),
    (re.compile(r"^SP\((\d+),R\)$"), lambda a: ("CI", (a[0],))),
    (re.compile(r"^SP\((\d+),(\d+)\)$"), lambda a: ("CII", a)),
]


def canonical_key(text: str) -> str:
    return re.sub(r"\s+", "", text).upper().replace("×", "X").replace("ℝ", "R")


def parse_name(text: str) -> tuple[str, tuple[int, ...]]:
    """Parse a Cartan label or a group quotient into ``(family, params)``.

    >>> parse_name("SU(1,2)/S(U(1)xU(2))")
    ('AIII', (1, 2))
    >>> parse_name("aiii(2, 1)")
    ('AIII', (2, 1))
    """
    key = canonical_key(text)
    m = _CARTAN_RE.match(key)
    if m:
        params = tuple(int(x) for x in m.group(2).split(",")) if m.group(2) else ()
        return m.group(1), params
    for label, (_, _, _, quot) in _EXCEPTIONAL_ROWS.items():
        if key == canonical_key(quot):
            return label, ()
    numerator = key.split("/", 1)[0]
    for rx, make in _QUOTIENT_RULES:
        m = rx.match(numerator)
        if m:
            result = make(tuple(int(x) for x in m.groups()))
            if result is not None:
                return result
    raise SpaceLookupError(f"unknown symmetric space {text!r}")


# -- catalog ------------------------------------------------------------------------


class Catalog:
    """Built-in spaces plus optional override rows keyed by canonical label."""

    def __init__(self, overrides: dict[str, SpaceDescriptor] | None = None):
        self.overrides = dict(overrides or {})

    def lookup(self, name: str) -> SpaceDescriptor:
        key = canonical_key(name)
        if key in self.overrides:
            return self.overrides[key]
        family, params = parse_name(name)
        params = _normalize_params(family, params)
        if family in EXCEPTIONAL:
            label = family
        else:
            label = f"{family}({','.join(map(str, params))})"
        if canonical_key(label) in self.overrides:
            return self.overrides[canonical_key(label)]
        return build_space(family, params)

    def enumerate(
        self,
        family: str | None = None,
        rank_range: tuple[int, int] | None = None,
        dim_range: tuple[int, int] | None = None,
        theorem_1_3_only: bool = False,
        max_param: int = DEFAULT_MAX_PARAM,
    ) -> list[SpaceDescriptor]:
        rows = {d.label: d for d in _builtin_rows(max_param)}
        for d in self.overrides.values():
            rows[d.label] = d
        out = []
        for d in rows.values():
            if family and d.family.upper() != family.upper():
                continue
            if rank_range and not rank_range[0] <= d.rank <= rank_range[1]:
                continue
            if dim_range and not dim_range[0] <= d.dim <= dim_range[1]:
                continue
            if theorem_1_3_only and not d.in_theorem_1_3_list:
                continue
            out.append(d)
        out.sort(key=lambda d: (FAMILY_ORDER.get(d.family, len(FAMILY_ORDER)), d.params, d.label))
        return out


def _classical_params(family: str, bound: int) -> Iterable[tuple[int, ...]]:
    if family in ("AI", "AII", "DIII"):
        yield from ((n,) for n in range(2, bound + 1))
    elif family == "CI":
        yield from ((n,) for n in range(1, bound + 1))
    else:
        for p in range(1, bound + 1):
            for q in range(1, p + 1):
                if family == "BDI" and p + q < 3:
                    continue
                yield (p, q)


@lru_cache(maxsize=None)
def _builtin_rows(bound: int) -> tuple[SpaceDescriptor, ...]:
    rows = [build_space(f, params) for f in CLASSICAL for params in _classical_params(f, bound)]
    rows += [build_space(f) for f in EXCEPTIONAL]
    return tuple(rows)


BUILTIN = Catalog()


def lookup(name: str, catalog: Catalog | None = None) -> SpaceDescriptor:
    return (catalog or BUILTIN).lookup(name)


def enumerate_catalog(catalog: Catalog | None = None, **filters) -> list[SpaceDescriptor]:
    return (catalog or BUILTIN).enumerate(**filters)


# -- override files -----------------------------------------------------------------


def _row_from_json(obj: dict) -> SpaceDescriptor:
    try:
        label = str(obj["label"])
        family = str(obj.get("family", label))
        rank = int(obj["rank"])
        dim = int(obj["dim"])
        root_fam, root_rank = parse_root_type(str(obj["roots_type"]))
        mults = {str(k): int(v) for k, v in dict(obj["multiplicities"]).items()}
        flags = dict(obj.get("flags", {}))
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed override row {obj!r}: {exc}") from exc
    if root_rank != rank:
        raise IdentityViolation("dimension identity", f"{label}: rank {rank} but roots_type {obj['roots_type']}")
    system = attach_multiplicities(build_root_system(root_fam, root_rank), mults)
    try:
        system = killing_normalize(system)
    except DataError as exc:
        raise IdentityViolation("Ricci identity", f"{label}: {exc}") from exc
    params = tuple(int(x) for x in obj.get("params", ()))
    return validate(
        SpaceDescriptor(
            label=label,
            family=family.upper(),
            params=params,
            rank=rank,
            dim=dim,
            system=system,
            quotient=str(obj.get("quotient", "")),
            reducible_exception=bool(flags.get("reducible_exception", False)),
            in_theorem_1_3_list=bool(flags.get("in_theorem_1_3_list", False)),
        )
    )


def load_catalog_override(path: str | Path, base: Catalog | None = None) -> Catalog:
    """Return a catalog extended/replaced by the JSON rows in ``path``.

    The file holds a JSON array of row objects (or ``{"rows": [...]}``); an
    empty file leaves the catalog unchanged.
    """
    text = Path(path).read_text(encoding="utf-8")
    base = base or BUILTIN
    if not text.strip():
        return Catalog(base.overrides)
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"catalog override {path}: parse error: {exc}") from exc
    rows = payload.get("rows", []) if isinstance(payload, dict) else payload
    if not isinstance(rows, list):
        raise DataError(f"catalog override {path}: expected a list of rows")
    overrides = dict(base.overrides)
    for obj in rows:
        desc = _row_from_json(obj)
        overrides[canonical_key(desc.label)] = desc
    return Catalog(overrides)
