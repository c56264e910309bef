"""Independent matrix-model oracle for classical noncompact real forms.

Builds sl(n,R), su(p,q), so(p,q) and sp(n,R) as real matrix algebras
(su(p,q) realified as 2n x 2n blocks), computes the Killing form from
structure constants, and eigensolves the curvature operator ``-ad(h)^2`` on
``p`` with a cyclic Jacobi solver.  Nothing here reads root-system data; the
only link to :mod:`rootkit` is :func:`cross_check`, which aligns the two
coordinatizations of the flat by matching simple restricted roots.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .catalog import SpaceDescriptor
from .curvature import curvature_spectrum
from .errors import CrossCheckError, ParameterError

SUPPORTED = ("sl", "su", "so", "sp")
MAX_MATRIX_SIZE = 6


# -- symmetric eigensolver ----------------------------------------------------------


def _round_robin(n: int) -> list[list[tuple[int, int]]]:
    """Tournament schedule: n-1 rounds of disjoint index pairs covering all pairs."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                pairs.append((min(a, b), max(a, b)))
        rounds.append(pairs)
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(a, tol: float = 1e-12, max_sweeps: int = 60):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Rotations in each round act on disjoint index pairs and are applied
    together.  Iterates until the off-diagonal Frobenius norm is at most
    ``tol * max(1, ||a||_F)``.  Returns ``(eigenvalues, eigenvectors)``,
    eigenvalues descending, eigenvectors as columns.
    """
    a = np.array(a, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ParameterError("matrix must be square")
    n = a.shape[0]
    scale = max(1.0, float(np.linalg.norm(a)))
    if np.max(np.abs(a - a.T), initial=0.0) > 1e-8 * scale:
        raise ParameterError("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    rounds = _round_robin(n) if n > 1 else []
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= tol * scale:
            break
        for pairs in rounds:
            if not pairs:
                continue
            P = np.array([x for x, _ in pairs])
            Q = np.array([y for _, y in pairs])
            apq = a[P, Q]
            live = np.abs(apq) > 1e-300
            if not live.any():
                continue
            P, Q, apq = P[live], Q[live], apq[live]
            theta = (a[Q, Q] - a[P, P]) / (2.0 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[theta == 0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            J = np.eye(n)
            J[P, P] = c
            J[Q, Q] = c
            J[P, Q] = s
            J[Q, P] = -s
            a = J.T @ a @ J
            a = 0.5 * (a + a.T)
            v = v @ J
    else:
        raise ArithmeticError("Jacobi iteration did not converge")
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def sym_eigenvalues(matrix) -> list[float]:
    """Full spectrum of a symmetric matrix, sorted descending."""
    return [float(x) for x in jacobi_eigh(matrix)[0]]


# -- matrix algebras ----------------------------------------------------------------


def _E(n: int, i: int, j: int) -> np.ndarray:
    m = np.zeros((n, n))
    m[i, j] = 1.0
    return m


def _realify(re: np.ndarray, im: np.ndarray) -> np.ndarray:
    return np.block([[re, -im], [im, re]])


@dataclass(eq=False)
class MatrixAlgebra:
    """Real matrix basis of a semisimple Lie algebra adapted to a Cartan decomposition.

    The first ``len(k_idx)`` basis elements span ``k``; the rest span ``p``.
    ``a_idx`` indexes commuting elements of ``p`` spanning a maximal flat.
    The Cartan involution is ``X -> -X^T`` in every model here.
    """

    name: str
    basis: list[np.ndarray]
    k_idx: list[int]
    p_idx: list[int]
    a_idx: list[int]
    theta: np.ndarray = field(init=False)

    def __post_init__(self):
        d = len(self.basis)
        self.theta = np.ones(d)
        self.theta[self.p_idx] = -1.0

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def rank(self) -> int:
        return len(self.a_idx)

    @cached_property
    def _flat(self) -> np.ndarray:
        return np.array([b.ravel() for b in self.basis]).T

    @cached_property
    def _pinv(self) -> np.ndarray:
        return np.linalg.pinv(self._flat)

    def coords(self, X: np.ndarray) -> np.ndarray:
        return self._pinv @ X.ravel()

    def residual(self, X: np.ndarray) -> float:
        return float(np.linalg.norm(self._flat @ self.coords(X) - X.ravel()))

    def element(self, c) -> np.ndarray:
        return (self._flat @ np.asarray(c, dtype=float)).reshape(self.basis[0].shape)

    @cached_property
    def structure_constants(self) -> np.ndarray:
        """``c[i, j, :]`` are the coordinates of ``[X_i, X_j]``."""
        d = self.dim
        B = np.array(self.basis)
        prods = np.einsum("iab,jbc->ijac", B, B)
        brackets = prods - prods.transpose(1, 0, 2, 3)
        flat = brackets.reshape(d * d, -1)
        c = flat @ self._pinv.T
        resid = np.linalg.norm(c @ self._flat.T - flat, axis=1)
        if resid.max() > 1e-10:
            raise CrossCheckError(f"{self.name}: basis not closed under bracket (residual {resid.max():.2e})")
        return c.reshape(d, d, d)

    @cached_property
    def ad(self) -> np.ndarray:
        """``ad[i]`` is the matrix of ``ad X_i`` (columns are images of basis vectors)."""
        return self.structure_constants.transpose(0, 2, 1)

    def ad_of(self, c) -> np.ndarray:
        return np.tensordot(np.asarray(c, dtype=float), self.ad, axes=1)

    @cached_property
    def inner_gram(self) -> np.ndarray:
        """Gram matrix of ``<X, Y> = -B(X, theta Y)``."""
        return -killing_form(self) * self.theta[None, :]

    @cached_property
    def p_orthonormal(self) -> np.ndarray:
        """Coefficient columns of an orthonormal basis of ``p`` (flat directions first)."""
        order = self.a_idx + [i for i in self.p_idx if i not in self.a_idx]
        return _orthonormal_columns(self.inner_gram, order, self.dim)

    @cached_property
    def a_orthonormal(self) -> np.ndarray:
        return _orthonormal_columns(self.inner_gram, self.a_idx, self.dim)

    @cached_property
    def g_orthonormal(self) -> np.ndarray:
        return _orthonormal_columns(self.inner_gram, list(range(self.dim)), self.dim)

    def flat_element(self, h) -> np.ndarray:
        """Coefficients of the flat vector with orthonormal coordinates ``h``."""
        h = np.asarray(h, dtype=float)
        if h.shape != (self.rank,):
            raise ParameterError(f"flat direction must have {self.rank} coordinates")
        return self.a_orthonormal @ h


def _orthonormal_columns(gram: np.ndarray, idx: list[int], d: int) -> np.ndarray:
    G = gram[np.ix_(idx, idx)]
    L = np.linalg.cholesky(0.5 * (G + G.T))
    coef = np.linalg.inv(L).T
    out = np.zeros((d, len(idx)))
    out[idx, :] = coef
    return out


def _check_size(n: int):
    if n > MAX_MATRIX_SIZE:
        raise ParameterError(f"matrix models are limited to size {MAX_MATRIX_SIZE}")


def _sl(n: int) -> MatrixAlgebra:
    if n < 2:
        raise ParameterError("sl(n,R) requires n >= 2")
    _check_size(n)
    k = [_E(n, i, j) - _E(n, j, i) for i, j in itertools.combinations(range(n), 2)]
    a = [_E(n, i, i) - _E(n, i + 1, i + 1) for i in range(n - 1)]
    p = a + [_E(n, i, j) + _E(n, j, i) for i, j in itertools.combinations(range(n), 2)]
    return _assemble(f"sl({n},R)", k, p, len(a))


def _so(p: int, q: int) -> MatrixAlgebra:
    p, q = max(p, q), min(p, q)
    n = p + q
    if q < 1 or n < 3:
        raise ParameterError("so(p,q) requires p >= q >= 1 and p + q >= 3")
    _check_size(n)
    k = [_E(n, i, j) - _E(n, j, i) for i, j in itertools.combinations(range(n), 2)
         if (i < p) == (j < p)]
    a = [_E(n, i, p + i) + _E(n, p + i, i) for i in range(q)]
    rest = [_E(n, i, j) + _E(n, j, i) for i in range(p) for j in range(p, n) if j != p + i]
    return _assemble(f"so({p},{q})", k, a + rest, len(a))


def _su(p: int, q: int) -> MatrixAlgebra:
    p, q = max(p, q), min(p, q)
    n = p + q
    if q < 1:
        raise ParameterError("su(p,q) requires p >= q >= 1")
    _check_size(n)
    Z = np.zeros((n, n))
    k = []
    for i, j in itertools.combinations(range(n), 2):
        if (i < p) == (j < p):
            k.append(_realify(_E(n, i, j) - _E(n, j, i), Z))
            k.append(_realify(Z, _E(n, i, j) + _E(n, j, i)))
    for i in range(n - 1):
        k.append(_realify(Z, _E(n, i, i) - _E(n, i + 1, i + 1)))
    a = [_realify(_E(n, i, p + i) + _E(n, p + i, i), Z) for i in range(q)]
    rest = []
    for i in range(p):
        for j in range(p, n):
            if j != p + i:
                rest.append(_realify(_E(n, i, j) + _E(n, j, i), Z))
            rest.append(_realify(Z, _E(n, i, j) - _E(n, j, i)))
    return _assemble(f"su({p},{q})", k, a + rest, len(a))


def _sp(n: int) -> MatrixAlgebra:
    if n < 1:
        raise ParameterError("sp(n,R) requires n >= 1")
    _check_size(n)
    Z = np.zeros((n, n))

    def blk(A, B, C, D):
        return np.block([[A, B], [C, D]])

    sym = [_E(n, i, j) + _E(n, j, i) for i, j in itertools.combinations(range(n), 2)]
    sym += [_E(n, i, i) for i in range(n)]
    anti = [_E(n, i, j) - _E(n, j, i) for i, j in itertools.combinations(range(n), 2)]
    k = [blk(A, Z, Z, A) for A in anti] + [blk(Z, B, -B, Z) for B in sym]
    a = [blk(_E(n, i, i), Z, Z, -_E(n, i, i)) for i in range(n)]
    offdiag = [A for A in sym if not np.count_nonzero(np.diag(A))]
    p = a + [blk(A, Z, Z, -A) for A in offdiag] + [blk(Z, B, B, Z) for B in sym]
    return _assemble(f"sp({n},R)", k, p, len(a))


def _assemble(name: str, k: list, p: list, n_flat: int) -> MatrixAlgebra:
    basis = list(k) + list(p)
    k_idx = list(range(len(k)))
    p_idx = list(range(len(k), len(basis)))
    return MatrixAlgebra(name, basis, k_idx, p_idx, p_idx[:n_flat])


@lru_cache(maxsize=32)
def build_algebra(family: str, params: tuple[int, ...]) -> MatrixAlgebra:
    """``family`` is one of ``sl``, ``su``, ``so``, ``sp``; ``params`` as in the group name."""
    family = family.lower()
    builders = {"sl": _sl, "su": _su, "so": _so, "sp": _sp}
    if family not in builders:
        raise ParameterError(f"unsupported matrix family {family!r}; supported: {', '.join(SUPPORTED)}")
    alg = builders[family](*params)
    alg.structure_constants  # closure check
    return alg


def killing_form(algebra: MatrixAlgebra) -> np.ndarray:
    """``B(X_i, X_j) = tr(ad X_i ad X_j)`` from structure constants."""
    ad = algebra.ad
    B = np.einsum("iab,jba->ij", ad, ad)
    if abs(np.linalg.det(B)) < 1e-12 * max(1.0, np.abs(B).max()) ** B.shape[0]:
        raise ArithmeticError(f"{algebra.name}: singular Killing form")
    return B


def curvature_operator_matrix(algebra: MatrixAlgebra, h) -> np.ndarray:
    """Matrix of ``X -> -[[X, h], h]`` on ``p`` in a Killing-orthonormal basis.

    ``h`` holds orthonormal flat coordinates and must have unit length.
    """
    h = np.asarray(h, dtype=float)
    if h.shape != (algebra.rank,):
        raise ParameterError("h must be given in flat coordinates")
    if abs(np.linalg.norm(h) - 1.0) > 1e-10:
        raise ParameterError("h must be a unit vector")
    adh = algebra.ad_of(algebra.flat_element(h))
    op = -adh @ adh
    U = algebra.p_orthonormal
    M = U.T @ algebra.inner_gram @ op @ U
    return 0.5 * (M + M.T)


# -- oracle roots and cross-check ------------------------------------------------------


def oracle_roots(algebra: MatrixAlgebra, seed: int = 12345, tol: float = 1e-7):
    """Restricted roots read off the matrix model.

    Diagonalizes ``ad h0`` for a generic flat ``h0`` (self-adjoint in the
    Killing metric), groups eigenvectors by eigenvalue and reads each root's
    coordinates from the simultaneous eigenvalues of ``ad`` on the flat basis.
    Returns ``(positive roots as rows, multiplicities)``.
    """
    rng = np.random.default_rng(seed)
    h0 = rng.standard_normal(algebra.rank)
    h0 /= np.linalg.norm(h0)
    U = algebra.g_orthonormal
    G = algebra.inner_gram

    def onb(c):
        return U.T @ G @ algebra.ad_of(c) @ U

    w, V = jacobi_eigh(onb(algebra.flat_element(h0)))
    flat_ops = [onb(algebra.a_orthonormal[:, k]) for k in range(algebra.rank)]
    roots, mults = [], []
    i = 0
    while i < len(w):
        j = i
        while j + 1 < len(w) and abs(w[j + 1] - w[i]) < tol:
            j += 1
        if w[i] > tol:
            block = V[:, i:j + 1]
            m = j - i + 1
            vec = np.array([np.trace(block.T @ F @ block) / m for F in flat_ops])
            roots.append(vec)
            mults.append(m)
        i = j + 1
    return np.array(roots), mults


def _simple_indices(R: np.ndarray, tol: float = 1e-7) -> list[int]:
    out = []
    for i, r in enumerate(R):
        sums = R[:, None, :] + R[None, :, :]
        if not np.any(np.all(np.abs(sums - r) < tol, axis=2)):
            out.append(i)
    return out


@dataclass
class CrossCheckReport:
    space_label: str
    algebra: str
    trials: int
    max_discrepancy: float
    passed: bool
    isometry: list[list[float]]
    trace_error: float

    def to_dict(self) -> dict:
        return {
            "space": self.space_label,
            "algebra": self.algebra,
            "trials": self.trials,
            "max_discrepancy": self.max_discrepancy,
            "trace_error": self.trace_error,
            "passed": self.passed,
        }


def algebra_for(space: SpaceDescriptor) -> MatrixAlgebra:
    """Matrix model for a catalog space, or ``ParameterError`` if none exists."""
    fam, params = space.family, space.params
    try:
        if fam == "AI":
            return build_algebra("sl", params)
        if fam == "AIII":
            return build_algebra("su", params)
        if fam == "BDI":
            return build_algebra("so", params)
        if fam == "CI":
            return build_algebra("sp", params)
    except ParameterError as exc:
        raise ParameterError(f"{space.label}: {exc}") from exc
    raise ParameterError(
        f"no matrix model for {space.label}; supported families: "
        "AI (sl(n,R)), AIII (su(p,q)), BDI (so(p,q)), CI (sp(n,R)) up to size 6"
    )


def flat_isometry(space: SpaceDescriptor, algebra: MatrixAlgebra) -> np.ndarray:
    """Orthogonal map from catalog flat coordinates to matrix-model flat coordinates."""
    R_o, m_o = oracle_roots(algebra)
    sysm = space.system
    R_c = sysm.root_matrix
    if R_o.shape != R_c.shape:
        raise CrossCheckError(
            f"{space.label}: matrix model has {len(R_o)} positive restricted roots, catalog has {len(R_c)}"
        )
    S_c = np.array([sysm.to_array(a) for a in sysm.simple_roots])
    si = _simple_indices(R_o)
    if len(si) != space.rank:
        raise CrossCheckError(f"{space.label}: oracle simple-root extraction failed")
    S_o_all = R_o[si]
    gram_c = S_c @ S_c.T
    scaled_match = False
    for perm in itertools.permutations(range(space.rank)):
        S_o = S_o_all[list(perm)]
        gram_o = S_o @ S_o.T
        # allow a common scale so a wrong multiplicity (which shifts the
        # normalization) is still reported against its orbit class
        c = float(np.trace(gram_o) / np.trace(gram_c))
        if np.max(np.abs(gram_o - c * gram_c)) > 1e-8:
            continue
        Q = S_o.T @ np.linalg.inv(S_c.T)
        if np.max(np.abs(Q.T @ Q - c * np.eye(space.rank))) > 1e-8:
            continue
        mapped = R_c @ Q.T
        match = []
        for row in mapped:
            j = np.flatnonzero(np.all(np.abs(R_o - row) < 1e-7, axis=1))
            if len(j) != 1:
                break
            match.append(int(j[0]))
        if len(match) != len(mapped):
            continue
        for i, j in enumerate(match):
            if m_o[j] != sysm.multiplicities[i]:
                cls = sysm.orbit_classes[i]
                raise CrossCheckError(
                    f"{space.label}: multiplicity mismatch in orbit class {cls!r}: "
                    f"catalog {sysm.multiplicities[i]}, matrix model {m_o[j]}"
                )
        if abs(c - 1.0) <= 1e-8:
            return Q
        scaled_match = True
    reason = "normalization disagrees" if scaled_match else "root type disagrees"
    raise CrossCheckError(
        f"{space.label}: no isometry matches the catalog simple roots to the matrix model ({reason})"
    )


def cross_check(space: SpaceDescriptor, trials: int = 20, seed: int = 0, tol: float = 1e-8) -> CrossCheckReport:
    """Compare matrix-model curvature spectra with the root-theoretic prediction."""
    alg = algebra_for(space)
    Q = flat_isometry(space, alg)
    rng = np.random.default_rng(seed)
    worst = 0.0
    trace_err = 0.0
    for _ in range(trials):
        h = rng.standard_normal(space.rank)
        h /= np.linalg.norm(h)
        M = curvature_operator_matrix(alg, Q @ h)
        got = sym_eigenvalues(M)
        # the matrix acts on all of p, including h itself (eigenvalue 0)
        predicted = sorted(curvature_spectrum(space, h).expanded() + [0.0], reverse=True)
        if len(got) != len(predicted):
            raise CrossCheckError(f"{space.label}: dim p = {len(got)} but catalog dim = {space.dim}")
        worst = max(worst, float(np.max(np.abs(np.array(got) - np.array(predicted)))))
        trace_err = max(trace_err, abs(float(np.trace(M)) + 0.5))
    return CrossCheckReport(space.label, alg.name, trials, worst, worst <= tol, Q.tolist(), trace_err)
