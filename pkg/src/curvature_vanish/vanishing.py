"""Vanishing-condition checkers and their certificates.

Three sufficient conditions for the vanishing of L^2 harmonic p-forms are
checked:

* ``eigen_sum``: for every unit direction, the sum of the ``p`` largest
  distance-Hessian eigenvalue rates is at most the sum of the rest;
* ``pinching``: ``p(p+1) <= B/A`` with ``-A`` the sectional-curvature lower
  bound and ``-B`` the Ricci constant;
* ``root_triple`` (``p = 1``): every root, counted with multiplicity, is no
  longer than the sum of the two longest other roots.

Verdicts use the non-strict tolerance ``VERDICT_TOL``; margins are signed and
zero margins mean equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .catalog import SpaceDescriptor
from .chamber import eigen_sum_gap, grid_oracle, sum_of_p_largest_max, _check_degree
from .curvature import hessian_spectrum, lambda_coth_array, pinching
from .errors import ParameterError, PreconditionError

VERDICT_TOL = 1e-9
CONDITIONS = ("eigen_sum", "pinching", "root_triple")


@dataclass(frozen=True)
class VanishingCertificate:
    space_label: str
    p: int
    condition: str
    holds: bool
    margin: float
    witness: dict
    method: str
    in_theorem_scope: bool
    certified: bool = True

    def to_dict(self) -> dict:
        return {
            "space": self.space_label,
            "p": self.p,
            "condition": self.condition,
            "holds": self.holds,
            "margin": self.margin,
            "witness": self.witness,
            "method": self.method,
            "in_theorem_scope": self.in_theorem_scope,
            "certified": self.certified,
        }

    @classmethod
    def from_dict(cls, d: dict) -> VanishingCertificate:
        return cls(d["space"], d["p"], d["condition"], d["holds"], d["margin"], d["witness"],
                   d["method"], d["in_theorem_scope"], d.get("certified", True))


def _clean(x: float) -> float:
    """Snap float noise around an exact tie to zero."""
    return 0.0 if abs(x) < 1e-13 else float(x)


def check_eigen_sum(space: SpaceDescriptor, p: int, method: str = "exact", resolution: int = 100_000,
                    seed: int = 0, **kwargs) -> VanishingCertificate:
    """``method="grid"`` replaces the exact chamber maximization by :func:`grid_oracle`."""
    p = _check_degree(space, p)
    if method == "exact":
        opt = sum_of_p_largest_max(space, p, **kwargs)
    elif method == "grid":
        opt = grid_oracle(space, p, resolution, seed=seed)
        opt = replace(opt, certified=False)
    else:
        raise ParameterError(f"unknown method {method!r}; expected 'exact' or 'grid'")
    margin = _clean(-opt.value)
    witness = {"direction": [float(x) for x in opt.argmax_h], "active_walls": list(opt.active_walls)}
    return VanishingCertificate(
        space_label=space.label,
        p=p,
        condition="eigen_sum",
        holds=margin >= -VERDICT_TOL,
        margin=margin,
        witness=witness,
        method=method if method == "grid" else ("exact" if opt.certified else "sampled"),
        in_theorem_scope=space.in_theorem_scope,
        certified=opt.certified,
    )


def check_pinching(space: SpaceDescriptor, p: int) -> VanishingCertificate:
    p = _check_degree(space, p)
    rep = pinching(space)
    margin = rep.ratio - p * (p + 1)  # exact rational
    return VanishingCertificate(
        space_label=space.label,
        p=p,
        condition="pinching",
        holds=float(margin) >= -VERDICT_TOL,
        margin=float(margin),
        witness={"A": float(rep.A), "B": float(rep.B), "ratio": float(rep.ratio), "ratio_exact": str(rep.ratio)},
        method="exact",
        in_theorem_scope=space.in_theorem_scope,
    )


def _triple_entries(space: SpaceDescriptor) -> list[tuple[int, float]]:
    s = space.system
    norms = [math.sqrt(s.norm_sq(r)) for r in s.positive_roots]
    return [(i, norms[i]) for i, m in enumerate(s.multiplicities) for _ in range(m)]


def check_root_triple(space: SpaceDescriptor) -> VanishingCertificate:
    """Every root (with multiplicity) is dominated by the two longest *other* entries.

    With fewer than three entries the condition cannot hold; the margin is then
    charged the full length of the longest root.
    """
    entries = _triple_entries(space)
    s = space.system
    names = [_root_name(space, i) for i in range(len(s.positive_roots))]
    if len(entries) < 3:
        longest = max(entries, key=lambda e: e[1])
        return VanishingCertificate(
            space.label, 1, "root_triple", False, -longest[1],
            {"reason": "fewer than three root entries", "lambda": names[longest[0]], "entries": len(entries)},
            "exact", space.in_theorem_scope,
        )
    ranked = sorted(entries, key=lambda e: -e[1])
    worst = None
    for i in range(len(s.positive_roots)):
        norm_i = math.sqrt(s.norm_sq(s.positive_roots[i]))
        others = list(ranked)
        others.remove(next(e for e in others if e[0] == i))
        nu, mu = others[0], others[1]
        slack = nu[1] + mu[1] - norm_i
        if worst is None or slack < worst[0] - 1e-15:
            worst = (slack, i, nu, mu)
    slack, i, nu, mu = worst
    margin = _clean(slack)
    return VanishingCertificate(
        space.label, 1, "root_triple", margin >= -VERDICT_TOL, margin,
        {"lambda": names[i], "nu": names[nu[0]], "mu": names[mu[0]],
         "norms": [math.sqrt(s.norm_sq(s.positive_roots[i])), nu[1], mu[1]]},
        "exact", space.in_theorem_scope,
    )


def _root_name(space: SpaceDescriptor, i: int) -> str:
    """Root written in simple-root coordinates, e.g. ``[1,2]``."""
    coeffs = space.system.simple_coordinates(space.system.positive_roots[i])
    return "[" + ",".join(str(c) for c in coeffs) + "]"


def max_vanishing_degree(space: SpaceDescriptor) -> tuple[int, list[VanishingCertificate]]:
    """Largest ``p`` such that the eigen-sum condition holds for every degree ``1..p``."""
    certs = []
    best = 0
    for p in range(1, space.dim):
        cert = check_eigen_sum(space, p)
        certs.append(cert)
        if not cert.holds:
            break
        best = p
    return best, certs


def check(space: SpaceDescriptor, p: int, condition: str) -> VanishingCertificate:
    if condition == "eigen_sum":
        return check_eigen_sum(space, p)
    if condition == "pinching":
        return check_pinching(space, p)
    if condition == "root_triple":
        return check_root_triple(space)
    raise ValueError(f"unknown condition {condition!r}")


# -- proof-chain verification ------------------------------------------------------


@dataclass
class ProofChainReport:
    space_label: str
    p: int
    minimum: float
    argmin_direction: list[float]
    argmin_radius: float
    per_radius_min: dict[float, float]
    evaluations: int
    passed: bool

    def to_dict(self) -> dict:
        return {
            "space": self.space_label,
            "p": self.p,
            "minimum": self.minimum,
            "argmin_direction": self.argmin_direction,
            "argmin_radius": self.argmin_radius,
            "per_radius_min": {str(k): v for k, v in self.per_radius_min.items()},
            "evaluations": self.evaluations,
            "passed": self.passed,
        }


def hessian_chain_value(space: SpaceDescriptor, p: int, h, radius: float) -> float:
    """Sum of the Hessian eigenvalues beyond the ``p`` largest, minus the ``p`` largest."""
    eta = hessian_spectrum(space, h, radius).expanded()
    return math.fsum(eta[p:]) - math.fsum(eta[:p])


def sample_chamber_directions(space: SpaceDescriptor, n: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    H = rng.standard_normal((n, space.rank))
    H /= np.linalg.norm(H, axis=1, keepdims=True)
    H = space.system.chamber().fold(H)
    return H / np.linalg.norm(H, axis=1, keepdims=True)


def verify_proof_chain(space: SpaceDescriptor, p: int, samples: int = 1000,
                       radii: Sequence[float] = (0.1, 1.0, 10.0), seed: int = 0) -> ProofChainReport:
    """Check the finite-radius Hessian inequality wherever the eigen-sum condition holds."""
    cert = check_eigen_sum(space, p)
    if not cert.holds:
        raise PreconditionError(
            f"{space.label}: eigen-sum condition fails at p={p}; the Hessian chain is not claimed"
        )
    H = sample_chamber_directions(space, samples, seed)
    sysm = space.system
    vals = np.repeat(np.abs(H @ sysm.root_matrix.T), sysm.mult_array, axis=1)
    flats = space.rank - 1
    best = (math.inf, None, None)
    per_radius = {}
    for r in radii:
        if not r > 0:
            raise ParameterError("radius must be positive")
        eta = lambda_coth_array(vals, r)
        if flats:
            eta = np.concatenate([eta, np.full((len(H), flats), 1.0 / r)], axis=1)
        eta = -np.sort(-eta, axis=1)
        chain = eta[:, p:].sum(axis=1) - eta[:, :p].sum(axis=1)
        i = int(np.argmin(chain))
        per_radius[float(r)] = float(chain[i])
        if chain[i] < best[0]:
            best = (float(chain[i]), H[i], r)
    return ProofChainReport(
        space_label=space.label,
        p=p,
        minimum=best[0],
        argmin_direction=[float(x) for x in best[1]],
        argmin_radius=float(best[2]),
        per_radius_min=per_radius,
        evaluations=len(H) * len(radii),
        passed=best[0] >= -VERDICT_TOL,
    )


# -- cross-condition properties ----------------------------------------------------


@dataclass
class ImplicationReport:
    checked: int = 0
    vacuous: int = 0
    counterexamples: list[tuple[str, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples


def check_pinching_implies_eigen_sum(spaces: Iterable[SpaceDescriptor], p_range: Iterable[int]) -> ImplicationReport:
    """Wherever pinching holds, the eigen-sum condition must hold too."""
    rep = ImplicationReport()
    p_values = list(p_range)
    for space in spaces:
        for p in p_values:
            if p >= space.dim:
                continue
            rep.checked += 1
            if not check_pinching(space, p).holds:
                rep.vacuous += 1
                continue
            if not check_eigen_sum(space, p).holds:
                rep.counterexamples.append((space.label, p))
    return rep


def compare_root_triple_with_eigen_sum(spaces: Iterable[SpaceDescriptor]) -> list[dict]:
    """Spaces where the root-triple verdict and the p=1 eigen-sum verdict differ."""
    out = []
    for space in spaces:
        if space.dim < 2:
            continue
        t = check_root_triple(space)
        e = check_eigen_sum(space, 1)
        if t.holds != e.holds:
            out.append({"space": space.label, "root_triple": t.holds, "eigen_sum": e.holds,
                        "triple_margin": t.margin, "eigen_margin": e.margin})
    return out


def witness_gap(space: SpaceDescriptor, cert: VanishingCertificate) -> float:
    """Re-evaluate the eigen-sum gap at a certificate's witness direction."""
    return eigen_sum_gap(space, cert.p, np.array(cert.witness["direction"]))
