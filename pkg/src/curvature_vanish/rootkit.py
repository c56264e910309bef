"""Exact restricted root systems and Killing-metric normalization.

Roots are stored as rational coefficient vectors on an *orthogonal* (not
orthonormal) rational basis of the flat.  Each axis carries a rational squared
length (``axis_weights``) and the whole system carries one rational
``scale_sq``.  All inner products are therefore exact rationals; the float
coordinates in an orthonormal frame are ``c_k * sqrt(w_k * scale_sq)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping, Sequence

import numpy as np

from .errors import DataError, ParameterError

Vec = tuple[Fraction, ...]

FAMILIES = ("A", "B", "C", "D", "BC", "E6", "E7", "E8", "F4", "G2")
_FIXED_RANK = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "G2": 2}
_MIN_RANK = {"A": 1, "B": 1, "C": 1, "D": 2, "BC": 1}

# Orbit-class aliases written in terms of standard coordinates.
_CLASS_ALIASES = {
    "B": {"e_i": "short", "e_i+-e_j": "long", "e_i±e_j": "long"},
    "C": {"e_i+-e_j": "short", "e_i±e_j": "short", "2e_i": "long"},
    "BC": {"e_i": "short", "e_i+-e_j": "middle", "e_i±e_j": "middle", "2e_i": "long"},
    "D": {"e_i+-e_j": "root", "e_i±e_j": "root"},
    "A": {"e_i-e_j": "root"},
}


@dataclass(frozen=True)
class RootVector:
    """Rational coefficients of a root on the system's orthogonal axis basis."""

    coords: Vec

    def __post_init__(self):
        if not any(self.coords):
            raise DataError("root vector must be nonzero")

    def __neg__(self) -> RootVector:
        return RootVector(tuple(-c for c in self.coords))

    def __add__(self, other: RootVector) -> Vec:
        return tuple(a + b for a, b in zip(self.coords, other.coords))


@dataclass(frozen=True, eq=False)
class ChamberCone:
    """Closed positive Weyl chamber ``{h : <alpha, h> >= 0}`` in orthonormal coordinates."""

    simple_roots: np.ndarray  # (rank, rank), one wall normal per row
    rank: int

    def contains(self, h: np.ndarray, tol: float = 1e-12) -> bool:
        return bool(np.all(self.simple_roots @ h >= -tol))

    @cached_property
    def extreme_rays(self) -> np.ndarray:
        """Unit generators of the chamber (the dual basis to the walls), one per row."""
        rays = np.linalg.inv(self.simple_roots).T
        return rays / np.linalg.norm(rays, axis=1, keepdims=True)

    def fold(self, h: np.ndarray) -> np.ndarray:
        """Map directions into the chamber by simple reflections.

        Works on a single vector or a batch of row vectors; the multiset of
        root values ``|lambda(h)|`` is unchanged by every reflection.
        """
        H = np.array(h, dtype=float, copy=True)
        single = H.ndim == 1
        H = np.atleast_2d(H)
        norms2 = np.einsum("ij,ij->i", self.simple_roots, self.simple_roots)
        for _ in range(10_000):
            moved = False
            for alpha, n2 in zip(self.simple_roots, norms2):
                pair = H @ alpha
                bad = pair < -1e-14
                if bad.any():
                    H[bad] -= np.outer(2.0 * pair[bad] / n2, alpha)
                    moved = True
            if not moved:
                break
        return H[0] if single else H


@dataclass(frozen=True)
class RestrictedRootSystem:
    family: str
    rank: int
    positive_roots: tuple[RootVector, ...]
    multiplicities: tuple[int, ...]
    orbit_classes: tuple[str, ...]
    simple_roots: tuple[RootVector, ...]
    axis_weights: tuple[Fraction, ...]
    scale_sq: Fraction = Fraction(1)
    normalized: bool = False

    # -- exact geometry -------------------------------------------------------
    def inner(self, a: RootVector | Vec, b: RootVector | Vec) -> Fraction:
        ca = a.coords if isinstance(a, RootVector) else a
        cb = b.coords if isinstance(b, RootVector) else b
        return self.scale_sq * sum(
            (x * y * w for x, y, w in zip(ca, cb, self.axis_weights)), Fraction(0)
        )

    def norm_sq(self, root: RootVector | Vec) -> Fraction:
        return self.inner(root, root)

    def multiplicity(self, root: RootVector) -> int:
        return self.multiplicities[self.positive_roots.index(root)]

    @property
    def multiplicity_map(self) -> dict[RootVector, int]:
        return dict(zip(self.positive_roots, self.multiplicities))

    @property
    def total_multiplicity(self) -> int:
        return sum(self.multiplicities)

    @property
    def classes(self) -> tuple[str, ...]:
        """Distinct orbit classes, shortest first."""
        seen: dict[str, Fraction] = {}
        for root, cls in zip(self.positive_roots, self.orbit_classes):
            seen.setdefault(cls, self.norm_sq(root))
        return tuple(sorted(seen, key=seen.__getitem__))

    # -- float boundary -------------------------------------------------------
    @cached_property
    def _axis_scale(self) -> np.ndarray:
        return np.sqrt(np.array([float(w * self.scale_sq) for w in self.axis_weights]))

    def to_array(self, root: RootVector | Vec) -> np.ndarray:
        coords = root.coords if isinstance(root, RootVector) else root
        return np.array([float(c) for c in coords]) * self._axis_scale

    @cached_property
    def root_matrix(self) -> np.ndarray:
        """Positive roots as rows in orthonormal flat coordinates."""
        return np.array([self.to_array(r) for r in self.positive_roots])

    @cached_property
    def mult_array(self) -> np.ndarray:
        return np.array(self.multiplicities, dtype=int)

    def chamber(self) -> ChamberCone:
        walls = np.array([self.to_array(a) for a in self.simple_roots])
        if np.linalg.matrix_rank(walls) < self.rank:
            raise ParameterError("degenerate chamber: simple roots are dependent")
        return ChamberCone(walls, self.rank)

    # -- structure ------------------------------------------------------------
    @cached_property
    def _simple_table(self) -> dict[RootVector, tuple[Fraction, ...]]:
        return {r: self._expand(r) for r in self.positive_roots}

    @cached_property
    def _simple_gram(self) -> list[list[Fraction]]:
        return [[self.inner(a, b) for b in self.simple_roots] for a in self.simple_roots]

    def _expand(self, root: RootVector | Vec) -> tuple[Fraction, ...]:
        gram = self._simple_gram
        rhs = [self.inner(a, root) for a in self.simple_roots]
        return tuple(_solve(gram, rhs))

    def simple_coordinates(self, root: RootVector | Vec) -> tuple[Fraction, ...]:
        """Exact expansion of ``root`` in the simple roots."""
        if isinstance(root, RootVector) and root in self._simple_table:
            return self._simple_table[root]
        return self._expand(root)

    def height(self, root: RootVector) -> Fraction:
        return sum(self.simple_coordinates(root), Fraction(0))

    def is_irreducible(self) -> bool:
        n = len(self.simple_roots)
        adj = {
            i: [j for j in range(n) if j != i and self.inner(self.simple_roots[i], self.simple_roots[j]) != 0]
            for i in range(n)
        }
        seen, stack = {0}, [0]
        while stack:
            for j in adj[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == n

    def reflect(self, h: np.ndarray, root: RootVector) -> np.ndarray:
        a = self.to_array(root)
        return h - 2.0 * (a @ h) / (a @ a) * a

    def scaled(self, factor_sq: Fraction | int) -> RestrictedRootSystem:
        """Same system with every root multiplied by ``sqrt(factor_sq)``."""
        return replace(self, scale_sq=self.scale_sq * Fraction(factor_sq), normalized=False)

    def ricci_matrix(self) -> np.ndarray:
        """``sum m_lambda lambda lambda^T`` in orthonormal coordinates (float)."""
        R = self.root_matrix
        return (R * self.mult_array[:, None]).T @ R


# -- exact helpers ----------------------------------------------------------------


def _solve(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    n = len(matrix)
    aug = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise DataError("singular system in exact solve")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n] for row in aug]


def _dot(a: Vec, b: Vec) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _orthogonal_frame(ambient: list[Vec], span_rank: int, spanning: list[Vec]):
    """Exact Gram-Schmidt; returns (basis, weights) for span(spanning)."""
    dim = len(ambient[0])
    if span_rank == dim:
        basis = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
        return basis, [Fraction(1)] * dim
    basis: list[Vec] = []
    for v in spanning:
        w = list(v)
        for b in basis:
            coef = _dot(v, b) / _dot(b, b)
            w = [x - coef * y for x, y in zip(w, b)]
        if any(w):
            basis.append(tuple(w))
    if len(basis) != span_rank:
        raise DataError("spanning set has wrong rank")
    return basis, [_dot(b, b) for b in basis]


def _vec(*xs) -> Vec:
    return tuple(Fraction(x) for x in xs)


def _unit(n: int, i: int, scale=1) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(scale)
    return v


def _pm_pairs(n: int) -> list[Vec]:
    out = []
    for i, j in itertools.combinations(range(n), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [Fraction(0)] * n
            v[i], v[j] = Fraction(si), Fraction(sj)
            out.append(tuple(v))
    return out


def _e8_roots() -> list[Vec]:
    roots = _pm_pairs(8)
    half = Fraction(1, 2)
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.append(tuple(half * s for s in signs))
    return roots


def _ambient_roots(family: str, n: int) -> tuple[list[Vec], int]:
    """Full (positive and negative) root set and the ambient dimension."""
    if family == "A":
        d = n + 1
        roots = []
        for i, j in itertools.permutations(range(d), 2):
            v = [Fraction(0)] * d
            v[i], v[j] = Fraction(1), Fraction(-1)
            roots.append(tuple(v))
        return roots, d
    if family in ("B", "C", "D", "BC"):
        roots = _pm_pairs(n)
        for i in range(n):
            for s in (1, -1):
                if family in ("B", "BC"):
                    roots.append(tuple(_unit(n, i, s)))
                if family in ("C", "BC"):
                    roots.append(tuple(_unit(n, i, 2 * s)))
        return roots, n
    if family == "G2":
        roots = []
        for i, j in itertools.permutations(range(3), 2):
            v = [Fraction(0)] * 3
            v[i], v[j] = Fraction(1), Fraction(-1)
            roots.append(tuple(v))
        for i in range(3):
            for s in (1, -1):
                v = [Fraction(-s)] * 3
                v[i] = Fraction(2 * s)
                roots.append(tuple(v))
        return roots, 3
    if family == "F4":
        roots = _pm_pairs(4)
        for i in range(4):
            for s in (1, -1):
                roots.append(tuple(_unit(4, i, s)))
        half = Fraction(1, 2)
        for signs in itertools.product((1, -1), repeat=4):
            roots.append(tuple(half * s for s in signs))
        return roots, 4
    if family in ("E6", "E7", "E8"):
        roots = _e8_roots()
        # E7 = centralizer of the root e7+e8; E6 additionally of e6-e7 (an A2 pair).
        cuts = {"E8": [], "E7": [_vec(0, 0, 0, 0, 0, 0, 1, 1)],
                "E6": [_vec(0, 0, 0, 0, 0, 0, 1, 1), _vec(0, 0, 0, 0, 0, 1, -1, 0)]}[family]
        roots = [r for r in roots if all(_dot(r, c) == 0 for c in cuts)]
        return roots, 8
    raise ParameterError(f"unknown root-system family {family!r}")


_EXPECTED_COUNT = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "BC": lambda n: n * n + n,
    "E6": lambda n: 36,
    "E7": lambda n: 63,
    "E8": lambda n: 120,
    "F4": lambda n: 24,
    "G2": lambda n: 6,
}


def _class_names(family: str, lengths: list[Fraction]) -> dict[Fraction, str]:
    distinct = sorted(set(lengths))
    if family == "BC":
        names = ["short", "middle", "long"] if len(distinct) == 3 else ["short", "long"]
    elif family == "B" and len(distinct) == 1:
        names = ["short"]
    elif family == "C" and len(distinct) == 1:
        names = ["long"]
    elif len(distinct) == 1:
        names = ["root"]
    else:
        names = ["short", "long"]
    return dict(zip(distinct, names))


def parse_root_type(text: str) -> tuple[str, int]:
    """``"BC2"`` -> ``("BC", 2)``; ``"E6"`` -> ``("E6", 6)``."""
    t = text.strip().upper().replace("_", "")
    if t in _FIXED_RANK:
        return t, _FIXED_RANK[t]
    for fam in ("BC", "A", "B", "C", "D"):
        if t.startswith(fam) and t[len(fam):].isdigit():
            return fam, int(t[len(fam):])
    raise ParameterError(f"unrecognised root type {text!r}")


def build_root_system(family: str, rank: int | None = None) -> RestrictedRootSystem:
    family = str(family).upper()
    if family in _FIXED_RANK and rank is None:
        rank = _FIXED_RANK[family]
    return _build_root_system(family, rank)


@lru_cache(maxsize=None)
def _build_root_system(family: str, rank: int | None) -> RestrictedRootSystem:
    """Standard positive roots of ``family`` in standard coordinates, all multiplicities 1.

    Positivity is fixed by the functional ``(2^(d-1), ..., 2, 1)`` on the ambient
    coordinates, which gives ``e_i - e_j`` (i<j), ``e_i + e_j``, ``e_i``, ``2e_i``
    positive for the classical families.
    """
    if family not in FAMILIES:
        raise ParameterError(f"unknown root-system family {family!r}")
    if family in _FIXED_RANK:
        if rank not in (None, _FIXED_RANK[family]):
            raise ParameterError(f"{family} has rank {_FIXED_RANK[family]}, not {rank}")
        rank = _FIXED_RANK[family]
    elif rank is None or int(rank) != rank or rank < _MIN_RANK[family]:
        raise ParameterError(f"invalid rank {rank!r} for family {family}")
    rank = int(rank)

    roots, d = _ambient_roots(family, rank)
    functional = tuple(Fraction(2 ** (d - 1 - i)) for i in range(d))
    for r in roots:
        if _dot(r, functional) == 0:  # pragma: no cover - guarded by construction
            raise DataError("positivity functional is not generic")
    positive = sorted((r for r in roots if _dot(r, functional) > 0),
                      key=lambda r: (-_dot(r, functional), r))
    if len(positive) != _EXPECTED_COUNT[family](rank):
        raise DataError(f"{family}{rank}: got {len(positive)} positive roots")

    # ambient coordinates are half-integers; decompose in doubled integer form
    doubled = [tuple(int(2 * x) for x in r) for r in positive]
    sums = {tuple(a + b for a, b in zip(x, y)) for x in doubled for y in doubled}
    simple = [r for r, d2 in zip(positive, doubled) if d2 not in sums]
    simple.sort(key=lambda r: tuple(-x for x in r))
    if len(simple) != rank:
        raise DataError(f"{family}{rank}: found {len(simple)} simple roots")

    basis, weights = _orthogonal_frame([positive[0]], rank, simple)

    def coords(v: Vec) -> RootVector:
        return RootVector(tuple(_dot(v, b) / _dot(b, b) for b in basis))

    lengths = [_dot(r, r) for r in positive]
    names = _class_names(family, lengths)
    return RestrictedRootSystem(
        family=family,
        rank=rank,
        positive_roots=tuple(coords(r) for r in positive),
        multiplicities=tuple(1 for _ in positive),
        orbit_classes=tuple(names[x] for x in lengths),
        simple_roots=tuple(coords(r) for r in simple),
        axis_weights=tuple(weights),
    )


def attach_multiplicities(
    system: RestrictedRootSystem, multiplicity_map: Mapping[str, int] | Mapping[RootVector, int]
) -> RestrictedRootSystem:
    """Assign a multiplicity to every orbit class.

    Keys are class names (``short``/``middle``/``long``/``root``), coordinate
    aliases such as ``e_i`` or ``2e_i``, or ``all``.  Explicit ``RootVector``
    keys override single roots (used to build deliberately corrupted systems).
    """
    aliases = _CLASS_ALIASES.get(system.family, {})
    per_class: dict[str, int] = {}
    per_root: dict[RootVector, int] = {}
    for key, value in multiplicity_map.items():
        if isinstance(key, RootVector):
            per_root[key] = value
            continue
        name = aliases.get(str(key).replace(" ", ""), str(key))
        if name == "all":
            for cls in system.classes:
                per_class.setdefault(cls, value)
        elif name in system.classes:
            per_class[name] = value
        else:
            raise DataError(f"{system.family}{system.rank} has no orbit class {key!r}")
    for v in list(per_class.values()) + list(per_root.values()):
        if int(v) != v or v <= 0:
            raise DataError(f"multiplicity must be a positive integer, got {v!r}")
    missing = [c for c in system.classes if c not in per_class]
    if missing and not per_root:
        raise DataError(f"multiplicity map misses orbit class(es) {missing}")
    mults = []
    for root, cls in zip(system.positive_roots, system.orbit_classes):
        if root in per_root:
            mults.append(int(per_root[root]))
        elif cls in per_class:
            mults.append(int(per_class[cls]))
        else:
            raise DataError(f"no multiplicity for root {root} in class {cls!r}")
    return replace(system, multiplicities=tuple(mults), normalized=False)


def ricci_scalar(system: RestrictedRootSystem) -> Fraction:
    """Exact ``t`` with ``sum m lambda lambda^T = t I``; raises if not scalar."""
    r = system.rank
    acc = [[Fraction(0)] * r for _ in range(r)]
    for root, m in zip(system.positive_roots, system.multiplicities):
        c = root.coords
        for k in range(r):
            for l in range(k, r):
                acc[k][l] += m * c[k] * c[l]
    for k in range(r):
        for l in range(k + 1, r):
            if acc[k][l] != 0:
                raise DataError("Ricci identity: sum m lambda lambda^T is not scalar")
    diag = {system.scale_sq * system.axis_weights[k] * acc[k][k] for k in range(r)}
    if len(diag) != 1:
        raise DataError("Ricci identity: sum m lambda lambda^T is not scalar")
    return diag.pop()


def killing_normalize(system: RestrictedRootSystem) -> RestrictedRootSystem:
    """Rescale so that ``sum m lambda lambda^T = 1/2 I`` exactly."""
    t = ricci_scalar(system)
    return replace(system, scale_sq=system.scale_sq / (2 * t), normalized=True)


def root_system(family: str, rank: int | None, multiplicities: Mapping[str, int]) -> RestrictedRootSystem:
    """Build, attach multiplicities and normalize in one call."""
    return killing_normalize(attach_multiplicities(build_root_system(family, rank), multiplicities))


def above_relation(system: RestrictedRootSystem) -> list[set[int]]:
    """For each positive root, indices of roots strictly above it in the root poset."""
    sc = [system.simple_coordinates(r) for r in system.positive_roots]
    out = []
    for i, ci in enumerate(sc):
        out.append({
            j for j, cj in enumerate(sc)
            if j != i and all(b >= a for a, b in zip(ci, cj))
        })
    return out


def float_norms(system: RestrictedRootSystem) -> np.ndarray:
    return np.array([math.sqrt(system.norm_sq(r)) for r in system.positive_roots])

