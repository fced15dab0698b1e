"""Optimal transport distances on finite spaces, all solved exactly.

Every program here is a small linear program (n <= 64 for Wasserstein,
n <= 15 for the subset-enumeration Prohorov route), solved with HiGHS and
re-verified against its marginal constraints after the solve. The
partial-transport distance uses a breakpoint analysis over the distinct
pairwise distances: the maximal movable mass is piecewise constant in
the transport radius, so the objective max(eps, deficiency/lambda) is
minimized exactly, never bisected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import linprog

from .errors import CapExceededError, InvalidArgumentError
from .space import MMSpace

W2_CAP = 64
PROHOROV_CAP = 15
MARGINAL_TOL = 1e-9


@dataclass(frozen=True)
class Coupling:
    """Nonnegative matrix with row sums mu and column sums nu."""

    matrix: np.ndarray

    @property
    def mass(self) -> float:
        return float(self.matrix.sum())


@dataclass(frozen=True)
class PartialTransport:
    """Sub-coupling: row sums <= mu, column sums <= nu."""

    matrix: np.ndarray

    @property
    def deficiency(self) -> float:
        return 1.0 - float(self.matrix.sum())


def _check_probability(v, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if np.any(v < -1e-15) or abs(float(v.sum()) - 1.0) > 1e-9:
        raise InvalidArgumentError(f"{name} must be a probability vector")
    return np.maximum(v, 0.0)


def wasserstein2(space: MMSpace, mu, nu) -> tuple[float, Coupling]:
    """Exact L2-Wasserstein distance and an optimal coupling."""
    n = space.n
    if n > W2_CAP:
        raise CapExceededError(f"wasserstein2 capped at n = {W2_CAP}, got {n}")
    mu = _check_probability(mu, "mu")
    nu = _check_probability(nu, "nu")
    cost = (space.dist**2).reshape(-1)
    # equality marginals: row sums = mu, column sums = nu
    a_eq = np.zeros((2 * n, n * n))
    for i in range(n):
        a_eq[i, i * n : (i + 1) * n] = 1.0
        a_eq[n + i, i::n] = 1.0
    b_eq = np.concatenate([mu, nu])
    res = linprog(cost, A_eq=a_eq[:-1], b_eq=b_eq[:-1], bounds=(0, None), method="highs")
    if not res.success:
        raise RuntimeError(f"transport LP failed: {res.message}")
    pi = res.x.reshape(n, n)
    if (
        np.max(np.abs(pi.sum(axis=1) - mu)) > MARGINAL_TOL
        or np.max(np.abs(pi.sum(axis=0) - nu)) > MARGINAL_TOL
    ):
        raise RuntimeError("transport LP returned infeasible marginals")
    value = math.sqrt(max(float(cost @ res.x), 0.0))
    return value, Coupling(matrix=pi)


def _max_movable_mass(space: MMSpace, mu, nu, eps: float) -> tuple[float, np.ndarray]:
    """Max total mass of a sub-coupling supported on pairs with d <= eps."""
    n = space.n
    allowed = space.dist <= eps + 1e-12
    cost = -allowed.reshape(-1).astype(float)  # maximize supported mass
    a_ub = np.zeros((2 * n, n * n))
    for i in range(n):
        a_ub[i, i * n : (i + 1) * n] = 1.0
        a_ub[n + i, i::n] = 1.0
    b_ub = np.concatenate([mu, nu])
    bounds = [(0, None) if ok else (0, 0) for ok in allowed.reshape(-1)]
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        raise RuntimeError(f"partial transport LP failed: {res.message}")
    pi = res.x.reshape(n, n)
    if np.any(pi.sum(axis=1) > mu + MARGINAL_TOL) or np.any(pi.sum(axis=0) > nu + MARGINAL_TOL):
        raise RuntimeError("partial transport LP exceeded marginals")
    return float(pi.sum()), pi


def transportation_distance(space: MMSpace, mu, nu, lam: float) -> float:
    """tra_lambda: least eps admitting an eps-transport with def <= lam*eps.

    The movable mass m(eps) only changes at the distinct pairwise
    distances, so on each interval between consecutive distances the best
    radius is max(d_i, (1 - m(d_i))/lam) clipped to the interval; the
    answer is the minimum over intervals.
    """
    if lam <= 0:
        raise InvalidArgumentError("lambda must be positive")
    mu = _check_probability(mu, "mu")
    nu = _check_probability(nu, "nu")
    if np.max(np.abs(mu - nu)) <= 1e-15:
        return 0.0
    breaks = [0.0] + sorted(
        set(float(d) for d in space.dist[np.triu_indices(space.n, 1)] if d > 0)
    )
    best = math.inf
    for idx, d in enumerate(breaks):
        m, _pi = _max_movable_mass(space, mu, nu, d)
        eps = max(d, (1.0 - m) / lam)
        upper = breaks[idx + 1] if idx + 1 < len(breaks) else math.inf
        if eps < upper - 1e-15 or eps == d:
            best = min(best, eps)
    return float(best)


def prohorov_distance(space: MMSpace, mu, nu, lam: float, cap: int = PROHOROV_CAP) -> float:
    """di_lambda: least eps with mu(C_eps(A)) >= nu(A) - lam*eps for all A.

    Subset-exhaustive: for each A the left side is a step function of eps
    with jumps at the distances to A, so the minimal admissible eps for A
    is found by an interval scan; the distance is the max over A.
    """
    if lam <= 0:
        raise InvalidArgumentError("lambda must be positive")
    n = space.n
    if n > cap:
        raise CapExceededError(
            f"subset enumeration capped at n = {cap}, got {n}",
            "use transportation_distance (equal by duality)",
        )
    mu = _check_probability(mu, "mu")
    nu = _check_probability(nu, "nu")
    worst = 0.0
    for size in range(1, n + 1):
        for A in combinations(range(n), size):
            nu_a = float(nu[list(A)].sum())
            if nu_a <= worst * lam + 1e-15:
                continue  # even eps = worst already satisfies this A
            d_to_a = space.dist[:, list(A)].min(axis=1)
            levels = sorted(set(d_to_a.tolist()))
            eps_a = math.inf
            for idx, t in enumerate(levels):
                mass = float(mu[d_to_a <= t + 1e-12].sum())
                eps = max(t, (nu_a - mass) / lam)
                upper = levels[idx + 1] if idx + 1 < len(levels) else math.inf
                if eps < upper - 1e-15 or eps == t:
                    eps_a = min(eps_a, eps)
            worst = max(worst, eps_a)
    return float(worst)


def relative_entropy(reference, nu) -> float:
    """Ent(nu | reference) = sum nu log(nu/reference); +inf when nu
    charges a reference-null point (an explicit sentinel, never overflow)."""
    mu = _check_probability(reference, "reference")
    nu = _check_probability(nu, "nu")
    total = 0.0
    for m, v in zip(mu, nu):
        if v <= 0.0:
            continue
        if m <= 0.0:
            return math.inf
        total += v * math.log(v / m)
    return max(total, 0.0)
