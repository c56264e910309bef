"""Maximization of the eigen-sum gap over unit directions in the Weyl chamber.

For a degree ``p`` the gap at a unit direction ``h`` is

    F_p(h) = (sum of the p largest entries) - (sum of the remaining entries)

taken over the multiset ``{|lambda(h)| with multiplicity m_lambda}`` padded with
``rank - 1`` zeros.  ``F_p`` is Weyl invariant, so it suffices to maximize on
the closed chamber, where every ``lambda(h) >= 0`` and each choice of "top p"
sub-multiset ``S`` turns ``F_p`` into the linear functional
``w_S = sum_S lambda - sum_{not S} lambda``.  The maximum of a linear functional
over chamber-intersect-sphere is found exactly by enumerating the faces of the
chamber (active wall sets).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .catalog import SpaceDescriptor
from .errors import ParameterError
from .rootkit import ChamberCone, above_relation

TIE_TOL = 1e-12
WALL_TOL = 1e-10
MAX_SUBSETS = 100_000


@dataclass(frozen=True, eq=False)
class Optimum:
    value: float
    argmax_h: np.ndarray
    method: str  # "exact_cone" | "grid" | "refined"
    active_walls: tuple[int, ...] = ()
    ties: tuple[tuple[float, ...], ...] = ()
    certified: bool = True
    selection: tuple[int, ...] | None = field(default=None)  # copies of each root in the top-p set

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "argmax_h": [float(x) for x in self.argmax_h],
            "method": self.method,
            "active_walls": list(self.active_walls),
            "ties": [list(t) for t in self.ties],
            "certified": self.certified,
        }


# -- linear functionals on the chamber sphere -------------------------------------


class _FaceProjectors:
    """Orthogonal projectors onto every face subspace ``{<alpha_i, h> = 0, i in W}``.

    Faces of dimension >= 2 contribute the normalized projection of ``w``;
    one-dimensional faces are the chamber's extreme rays and are always
    candidates (they carry the optimum when ``w`` points away from the cone).
    """

    def __init__(self, chamber: ChamberCone):
        A = chamber.simple_roots
        r = chamber.rank
        if np.linalg.matrix_rank(A) < r:
            raise ParameterError("degenerate chamber: simple roots are linearly dependent")
        self.chamber = chamber
        self.walls: list[tuple[int, ...]] = []
        projs = []
        for k in range(r - 1):
            for W in itertools.combinations(range(r), k):
                if k == 0:
                    P = np.eye(r)
                else:
                    AW = A[list(W)]
                    P = np.eye(r) - AW.T @ np.linalg.solve(AW @ AW.T, AW)
                self.walls.append(W)
                projs.append(P)
        self.projectors = np.array(projs).reshape(len(projs), r, r)
        self.rays = chamber.extreme_rays
        # ray j is the face where every wall except j is active
        self.ray_walls = [tuple(i for i in range(r) if i != j) for j in range(r)]

    def best(self, W: np.ndarray):
        """Exact maxima for each row of ``W``: (values, argmax rows, candidate index)."""
        W = np.atleast_2d(W)
        n, r = W.shape
        A = self.chamber.simple_roots
        cand_vals = []
        cand_dirs = []
        if len(self.projectors):
            U = np.einsum("kij,nj->nki", self.projectors, W)
            norms = np.linalg.norm(U, axis=2)
            scale = np.maximum(1.0, np.linalg.norm(W, axis=1))[:, None]
            ok = norms > 1e-13 * scale
            U = np.where(ok[..., None], U / np.where(ok, norms, 1.0)[..., None], 0.0)
            feas = np.all(np.einsum("ij,nkj->nki", A, U) >= -1e-12, axis=2) & ok
            vals = np.einsum("nki,ni->nk", U, W)
            cand_vals.append(np.where(feas, vals, -np.inf))
            cand_dirs.append(U)
        ray_vals = W @ self.rays.T
        cand_vals.append(ray_vals)
        cand_dirs.append(np.broadcast_to(self.rays, (n, r, r)))
        vals = np.concatenate(cand_vals, axis=1)
        dirs = np.concatenate(cand_dirs, axis=1)
        return vals, dirs


@lru_cache(maxsize=256)
def _projectors_for(space: SpaceDescriptor) -> _FaceProjectors:
    return _FaceProjectors(space.system.chamber())


def _active(chamber: ChamberCone, h: np.ndarray) -> tuple[int, ...]:
    pairs = chamber.simple_roots @ h
    return tuple(int(i) for i in np.flatnonzero(np.abs(pairs) <= WALL_TOL))


def _lex_key(h: np.ndarray) -> tuple[float, ...]:
    return tuple(float(x) for x in np.round(h, 12))


def _distinct(dirs: list[np.ndarray], tol: float = 1e-9) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for d in dirs:
        if all(np.linalg.norm(d - e) > tol for e in out):
            out.append(d)
    return out


def _pick(vals: np.ndarray, dirs: np.ndarray, chamber: ChamberCone):
    """Best candidate with deterministic tie-break (largest lexicographic direction)."""
    top = float(np.max(vals))
    idx = np.flatnonzero(vals >= top - TIE_TOL)
    tied = _distinct([dirs[i] for i in idx])
    tied.sort(key=_lex_key, reverse=True)
    return top, tied[0], tied[1:]


def maximize_linear_on_chamber_sphere(w, chamber: ChamberCone) -> Optimum:
    """Exact ``max <w, h>`` over unit ``h`` in the closed chamber.

    When ``w`` vanishes every direction is optimal and the normalized sum of the
    extreme rays is returned.
    """
    faces = _FaceProjectors(chamber)
    w = np.asarray(w, dtype=float)
    if w.shape != (chamber.rank,):
        raise ParameterError(f"functional must have {chamber.rank} coordinates")
    if np.linalg.norm(w) <= 1e-14:
        h = faces.rays.sum(axis=0)
        h /= np.linalg.norm(h)
        return Optimum(0.0, h, "exact_cone", _active(chamber, h))
    vals, dirs = faces.best(w[None, :])
    value, h, ties = _pick(vals[0], dirs[0], chamber)
    return Optimum(float(w @ h), h, "exact_cone", _active(chamber, h), tuple(map(_lex_key, ties)))


# -- the eigen-sum gap --------------------------------------------------------------


def _check_degree(space: SpaceDescriptor, p: int) -> int:
    if int(p) != p or not 0 <= p <= space.dim:
        raise ParameterError(f"degree p must be an integer in [0, {space.dim}], got {p!r}")
    return int(p)


def eigen_sum_gap(space: SpaceDescriptor, p: int, H) -> np.ndarray | float:
    """``F_p`` at one direction or at each row of a batch (rows are normalized)."""
    H = np.asarray(H, dtype=float)
    single = H.ndim == 1
    H = np.atleast_2d(H)
    H = H / np.linalg.norm(H, axis=1, keepdims=True)
    s = space.system
    vals = np.abs(H @ s.root_matrix.T)
    vals = np.repeat(vals, s.mult_array, axis=1)
    if space.rank > 1:
        vals = np.concatenate([vals, np.zeros((len(H), space.rank - 1))], axis=1)
    vals = -np.sort(-vals, axis=1)
    k = min(p, vals.shape[1])
    top = vals[:, :k].sum(axis=1)
    out = 2.0 * top - vals.sum(axis=1)
    return float(out[0]) if single else out


def lipschitz_bound(space: SpaceDescriptor) -> float:
    """Euclidean Lipschitz constant of ``F_p`` on the sphere (any ``p``)."""
    s = space.system
    return float(np.sum(s.mult_array * np.linalg.norm(s.root_matrix, axis=1)))


@lru_cache(maxsize=64)
def _poset(space: SpaceDescriptor):
    s = space.system
    above = above_relation(s)
    heights = [s.height(r) for r in s.positive_roots]
    order = sorted(range(len(heights)), key=lambda i: (-heights[i], i))
    return order, above


def top_selections(space: SpaceDescriptor, p: int, limit: int = MAX_SUBSETS):
    """Upward-closed choices of ``p`` entries, as copies-per-root tuples.

    On the chamber, ``mu <= lambda`` in the root order implies
    ``mu(h) <= lambda(h)``, so some top-``p`` set at every chamber point is
    closed upward.  Returns ``None`` if more than ``limit`` selections exist.
    """
    s = space.system
    mults = s.multiplicities
    n = len(mults)
    total = sum(mults)
    if p >= total:
        return [tuple(mults)]
    order, above = _poset(space)
    suffix = [0] * (n + 1)
    for pos in range(n - 1, -1, -1):
        suffix[pos] = suffix[pos + 1] + mults[order[pos]]

    out: list[tuple[int, ...]] = []
    k = [0] * n

    def dfs(pos: int, remaining: int) -> bool:
        if remaining == 0:
            out.append(tuple(k))
            return len(out) <= limit
        if pos == n or suffix[pos] < remaining:
            return True
        i = order[pos]
        full_above = all(k[j] == mults[j] for j in above[i])
        top_choice = min(mults[i], remaining) if full_above else 0
        for c in range(top_choice, -1, -1):
            k[i] = c
            if not dfs(pos + 1, remaining - c):
                k[i] = 0
                return False
        k[i] = 0
        return True

    if not dfs(0, p):
        return None
    return out


def sum_of_p_largest_max(space: SpaceDescriptor, p: int, max_subsets: int = MAX_SUBSETS,
                         grid_resolution: int = 20_000, seed: int = 0) -> Optimum:
    """Exact ``max F_p`` over the unit chamber sphere (grid fallback when enumeration explodes)."""
    p = _check_degree(space, p)
    selections = top_selections(space, p, max_subsets)
    if selections is None:
        opt = grid_oracle(space, p, grid_resolution, seed=seed)
        return Optimum(opt.value, opt.argmax_h, opt.method, opt.active_walls, opt.ties,
                       certified=False)
    s = space.system
    K = np.array(selections, dtype=float)
    coeff = 2.0 * K - s.mult_array[None, :]
    W = coeff @ s.root_matrix
    faces = _projectors_for(space)
    chamber = faces.chamber

    zero = np.linalg.norm(W, axis=1) <= 1e-14
    vals, dirs = faces.best(W)
    if zero.any():
        center = faces.rays.sum(axis=0)
        center /= np.linalg.norm(center)
        vals[zero] = -np.inf
        vals[zero, 0] = 0.0
        dirs = dirs.copy()
        dirs[zero, 0] = center

    per_sel = vals.max(axis=1)
    top = float(per_sel.max())
    tied_rows = np.flatnonzero(per_sel >= top - TIE_TOL)
    cand = []
    for row in tied_rows:
        for j in np.flatnonzero(vals[row] >= top - TIE_TOL):
            cand.append((dirs[row, j], int(row)))
    cand.sort(key=lambda c: (_lex_key(c[0]), -c[1]), reverse=True)
    h, row = cand[0]
    ties = [d for d in _distinct([c[0] for c in cand])[0:] if np.linalg.norm(d - h) > 1e-9]
    value = eigen_sum_gap(space, p, h)
    return Optimum(
        value=float(value),
        argmax_h=np.array(h),
        method="exact_cone",
        active_walls=_active(chamber, h),
        ties=tuple(map(_lex_key, ties)),
        selection=tuple(int(x) for x in K[row]),
    )


# -- independent sampling oracle ----------------------------------------------------


def _golden_max(f, a: float, b: float, tol: float = 1e-13, max_iter: int = 200):
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) < tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    x = (a + b) / 2.0
    return x, f(x)


def _local_search(F, h: np.ndarray, fh: float, rng: np.random.Generator,
                  rho: float = 1e-2, min_rho: float = 1e-12, batch: int = 48):
    """Derivative-free ascent on the sphere with adaptive step (handles kinks)."""
    r = len(h)
    rho_max = rho
    for _ in range(5000):
        if rho < min_rho:
            break
        D = rng.standard_normal((batch, r))
        D -= np.outer(D @ h, h)
        D /= np.linalg.norm(D, axis=1, keepdims=True)
        steps = rho * np.concatenate([np.ones(batch // 2), rng.uniform(0.0, 1.0, batch - batch // 2)])
        C = h[None, :] + steps[:, None] * D
        C /= np.linalg.norm(C, axis=1, keepdims=True)
        fc = F(C)
        j = int(np.argmax(fc))
        if fc[j] > fh + 1e-16:
            h, fh = C[j], float(fc[j])
            rho = min(rho * 1.5, rho_max)
        else:
            rho *= 0.5
    return h, fh


def grid_oracle(space: SpaceDescriptor, p: int, resolution: int, seed: int = 0,
                refine_starts: int = 8) -> Optimum:
    """Sampling estimate of ``max F_p``, independent of the face enumeration.

    Rank 2 uses a uniform angular grid on the chamber arc and golden-section
    refinement; higher ranks sample the sphere uniformly, fold the samples into
    the chamber, add extreme rays and edge midpoints, and refine the best
    samples by adaptive random search.
    """
    p = _check_degree(space, p)
    if resolution < 10:
        raise ParameterError("resolution must be at least 10")
    chamber = space.system.chamber()
    rays = chamber.extreme_rays

    def F(H):
        return eigen_sum_gap(space, p, H)

    if space.rank == 1:
        h = rays[0]
        return Optimum(float(F(h)), h, "grid", _active(chamber, h))

    if space.rank == 2:
        u1, u2 = rays
        T = math.acos(max(-1.0, min(1.0, float(u1 @ u2))))
        f = u2 - (u2 @ u1) * u1
        f /= np.linalg.norm(f)
        ts = np.linspace(0.0, T, resolution)
        H = np.cos(ts)[:, None] * u1 + np.sin(ts)[:, None] * f
        vals = F(H)
        i = int(np.argmax(vals))
        best_v, best_h, method = float(vals[i]), H[i], "grid"
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, resolution - 1)]
        t, v = _golden_max(lambda t: F(math.cos(t) * u1 + math.sin(t) * f), lo, hi)
        if v > best_v:
            best_v, best_h, method = float(v), math.cos(t) * u1 + math.sin(t) * f, "refined"
        return Optimum(best_v, best_h, method, _active(chamber, best_h))

    rng = np.random.default_rng(seed)
    S = rng.standard_normal((resolution, space.rank))
    S /= np.linalg.norm(S, axis=1, keepdims=True)
    extra = [rays]
    for i, j in itertools.combinations(range(space.rank), 2):
        m = rays[i] + rays[j]
        extra.append((m / np.linalg.norm(m))[None, :])
    c = rays.sum(axis=0)
    extra.append((c / np.linalg.norm(c))[None, :])
    S = np.concatenate([chamber.fold(S)] + extra)
    vals = F(S)
    order = np.argsort(-vals, kind="stable")
    best_v, best_h, method = float(vals[order[0]]), S[order[0]], "grid"
    for idx in order[:refine_starts]:
        h, v = _local_search(F, S[idx], float(vals[idx]), rng)
        if v > best_v:
            best_v, best_h, method = v, h, "refined"
    best_h = chamber.fold(best_h)
    best_h /= np.linalg.norm(best_h)
    return Optimum(float(F(best_h)), best_h, method, _active(chamber, best_h))
