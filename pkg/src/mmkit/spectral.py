"""Weighted Laplacian, spectrum, heat semigroup, and semigroup estimates.

The operator acts as (L f)(x) = (1/mu(x)) * sum_y w(x,y) (f(x) - f(y)),
which is self-adjoint in the mu-weighted inner product. Eigenproblems are
solved densely via the generalized symmetric form K v = lambda M v with K
the conductance stiffness matrix and M = diag(mu).
"""

from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DisconnectedSpaceError, InvalidArgumentError
from .space import MMSpace

DENSE_N_CAP = 2048

_spectrum_cache: "weakref.WeakKeyDictionary[MMSpace, Spectrum]" = weakref.WeakKeyDictionary()
_cache_lock = threading.Lock()


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with mu-orthonormal eigenfunctions (rows)."""

    eigenvalues: np.ndarray
    eigenfunctions: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", np.asarray(self.eigenvalues, dtype=float))
        object.__setattr__(self, "eigenfunctions", np.asarray(self.eigenfunctions, dtype=float))


@dataclass(frozen=True)
class HeatState:
    """Values of P_t f together with the diffusion time."""

    values: np.ndarray
    t: float


def mu_inner(space: MMSpace, f, g) -> float:
    return float(np.sum(space.measure * np.asarray(f, float) * np.asarray(g, float)))


def mu_norm2(space: MMSpace, f) -> float:
    return float(np.sqrt(max(mu_inner(space, f, f), 0.0)))


def mu_norm1(space: MMSpace, f) -> float:
    return float(np.sum(space.measure * np.abs(np.asarray(f, float))))


def connected_components(space: MMSpace) -> list[set[int]]:
    parent = list(range(space.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for (i, j, _w) in space.edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    comps: dict[int, set[int]] = {}
    for v in range(space.n):
        comps.setdefault(find(v), set()).add(v)
    return list(comps.values())


def require_connected(space: MMSpace) -> None:
    comps = connected_components(space)
    if len(comps) > 1:
        raise DisconnectedSpaceError(comps)


def stiffness_matrix(space: MMSpace) -> np.ndarray:
    """Dense conductance Laplacian K with K[i,i] = sum_j w(i,j)."""
    K = np.zeros((space.n, space.n))
    for (i, j, w) in space.edges:
        K[i, j] -= w
        K[j, i] -= w
        K[i, i] += w
        K[j, j] += w
    return K


def assemble_laplacian(space: MMSpace) -> np.ndarray:
    """The weighted Laplacian as a dense matrix, diag(1/mu) @ K."""
    require_connected(space)
    return stiffness_matrix(space) / space.measure[:, None]


def dirichlet_energy(space: MMSpace, f) -> float:
    f = np.asarray(f, dtype=float)
    e = 0.0
    for (i, j, w) in space.edges:
        e += w * (f[i] - f[j]) ** 2
    return float(e)


def rayleigh(space: MMSpace, f) -> float:
    """Dirichlet energy over the squared L2(mu) norm."""
    f = np.asarray(f, dtype=float)
    nrm = mu_inner(space, f, f)
    if nrm <= 0.0:
        raise InvalidArgumentError("Rayleigh quotient of the zero function")
    return dirichlet_energy(space, f) / nrm


def _full_spectrum(space: MMSpace) -> Spectrum:
    with _cache_lock:
        cached = _spectrum_cache.get(space)
    if cached is not None:
        return cached
    require_connected(space)
    if space.n > DENSE_N_CAP:
        raise InvalidArgumentError(f"dense eigensolver capped at n = {DENSE_N_CAP}, got {space.n}")
    K = stiffness_matrix(space)
    M = np.diag(space.measure)
    vals, vecs = scipy.linalg.eigh(K, M)
    vals = np.maximum(vals, 0.0)
    vals[0] = 0.0
    funcs = vecs.T.copy()
    # fix signs for determinism: largest-magnitude entry positive
    for row in funcs:
        pivot = np.argmax(np.abs(row))
        if row[pivot] < 0:
            row *= -1.0
    spec = Spectrum(eigenvalues=vals, eigenfunctions=funcs)
    with _cache_lock:
        _spectrum_cache[space] = spec
    return spec


def eigenpairs(space: MMSpace, m: int) -> Spectrum:
    """First m+1 eigenpairs of the weighted Laplacian, ascending."""
    if m >= space.n:
        raise InvalidArgumentError(f"m must satisfy m < n, got m = {m}, n = {space.n}")
    if m < 0:
        raise InvalidArgumentError("m must be nonnegative")
    full = _full_spectrum(space)
    return Spectrum(full.eigenvalues[: m + 1].copy(), full.eigenfunctions[: m + 1].copy())


def lambda_k(space: MMSpace, k: int) -> float:
    return float(eigenpairs(space, k).eigenvalues[k])


def heat_apply(space: MMSpace, f, t: float) -> HeatState:
    """P_t f through the full eigendecomposition."""
    if t < 0:
        raise InvalidArgumentError("diffusion time must be nonnegative")
    f = np.asarray(f, dtype=float)
    spec = _full_spectrum(space)
    coeffs = spec.eigenfunctions @ (space.measure * f)
    damped = coeffs * np.exp(-spec.eigenvalues * t)
    return HeatState(values=spec.eigenfunctions.T @ damped, t=float(t))


def grad_l1(space: MMSpace, f) -> np.ndarray:
    """Edge-sum local gradient (1/mu(x)) sum_y w d |f(x) - f(y)|.

    Interior mesh points count both incident edges, so on refined 1-D
    models this is about twice the continuum |f'|; the doubling is what
    makes the discrete co-area and chain-rule steps exact (see the
    isoperimetry module). Continuum-facing checks divide by two and
    record that convention.
    """
    f = np.asarray(f, dtype=float)
    g = np.zeros(space.n)
    for (i, j, w) in space.edges:
        c = w * space.dist[i, j] * abs(f[i] - f[j])
        g[i] += c
        g[j] += c
    return g / space.measure


GRAD_CONVENTION_RAW = "edge-sum"
GRAD_CONVENTION_CALIBRATED = "edge-sum-halved"


def grad_calibrated(space: MMSpace, f) -> np.ndarray:
    """grad_l1 / 2: the two-sided calibration used for continuum checks."""
    return 0.5 * grad_l1(space, f)


def bakry_ledoux_c(t: float, K: float) -> float:
    if K > 0:
        raise InvalidArgumentError("curvature parameter must be nonpositive")
    if K == 0:
        return 2.0 * t
    return (1.0 - np.exp(2.0 * K * t)) / (-K)


def check_bakry_ledoux(space: MMSpace, f, t: float, K: float = 0.0):
    """Pointwise margin of c(t) |grad P_t f|^2 <= P_t(f^2) - (P_t f)^2."""
    from .harness import InequalityReport  # local import to avoid a cycle

    if t < 0:
        raise InvalidArgumentError("t must be nonnegative")
    f = np.asarray(f, dtype=float)
    ptf = heat_apply(space, f, t).values
    lhs = bakry_ledoux_c(t, K) * grad_calibrated(space, ptf) ** 2
    rhs = heat_apply(space, f * f, t).values - ptf**2
    scale = max(float(np.max(np.abs(rhs))), float(np.max(np.abs(lhs))), 1e-300)
    margin = float(np.min(rhs - lhs))
    is_model = bool(space.label.get("model_cd0"))
    return InequalityReport(
        id="bakry-ledoux-gradient",
        anchor="c(t)|grad P_t f|^2 <= P_t(f^2) - (P_t f)^2, c(t) = (1 - exp(2Kt))/(-K)",
        lhs=float(np.max(lhs)),
        rhs=float(np.max(rhs)),
        ratio=margin / scale,
        verdict="pass" if margin / scale >= -1e-2 else ("report" if not is_model else "fail"),
        klass="tolerance" if is_model else "report-only",
        params={"t": t, "K": K},
        provenance={"gradient": GRAD_CONVENTION_CALIBRATED},
        slack=1e-2,
        notes=f"worst pointwise margin {margin:.3e} (relative {margin / scale:.3e})",
    )


def check_ledoux_l1(space: MMSpace, f, t: float):
    """||f - P_t f||_L1 <= sqrt(2t) || grad f ||_L1."""
    from .harness import InequalityReport

    if t < 0:
        raise InvalidArgumentError("t must be nonnegative")
    f = np.asarray(f, dtype=float)
    lhs = mu_norm1(space, f - heat_apply(space, f, t).values)
    rhs = float(np.sqrt(2.0 * t)) * mu_norm1(space, grad_calibrated(space, f))
    scale = max(rhs, 1e-300)
    ratio = lhs / scale
    is_model = bool(space.label.get("model_cd0"))
    ok = lhs <= rhs * (1.0 + 1e-9) + 1e-12
    return InequalityReport(
        id="ledoux-l1-smoothing",
        anchor="||f - P_t f||_1 <= sqrt(2t) || |grad f| ||_1",
        lhs=lhs,
        rhs=rhs,
        ratio=ratio,
        verdict="pass" if ok else ("fail" if is_model else "report"),
        klass="tolerance" if is_model else "report-only",
        params={"t": t},
        provenance={"gradient": GRAD_CONVENTION_CALIBRATED},
        slack=1e-9,
    )
