"""Separation distances, concentration function, and observable diameter.

sep(X; k_0,...,k_k) is the largest d such that k+1 disjoint subsets of
measures >= k_i exist with all pairwise distances >= d. Feasibility is
monotone in d, so the exact value is found by binary search over the
finite set of pairwise distances, with three feasibility engines:

* exhaustive recursive assignment (exact, small n);
* a 1-D contiguous-interval engine for circle / interval geometries
  (exact for the model measures, where an optimal family may be assumed
  contiguous by rearrangement);
* a greedy grower (upper... lower-bound heuristic, flagged non-exact).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .space import MMSpace, Subset, SubsetFamily, dist_to_subset
from .spectral import eigenpairs

SEP_EXHAUSTIVE_CAP = 16
CONC_EXHAUSTIVE_CAP = 15
MASS_TOL = 1e-12


@dataclass(frozen=True)
class SepResult:
    value: float
    witness: Optional[SubsetFamily]
    kappas: tuple[float, ...]
    exact: bool
    feasible: bool


@dataclass(frozen=True)
class ConcSample:
    r: float
    value: float
    exact: bool

    def __float__(self):
        return self.value


# -- geometry detection ----------------------------------------------


def _detect_line(space: MMSpace) -> Optional[np.ndarray]:
    """Coordinates s with dist = |s_i - s_j|, or None."""
    d = space.dist
    a = int(np.argmax(d[0]))
    s = d[a]
    if np.max(np.abs(np.abs(s[:, None] - s[None, :]) - d)) <= 1e-9:
        return s
    return None


def _detect_circle(space: MMSpace) -> Optional[tuple[np.ndarray, float]]:
    """Arc coordinates s in [0, C) with dist = circular gap, or None."""
    d = space.dist
    circ = 2.0 * float(np.max(d))
    d0 = d[0]
    # third anchor roughly a quarter of the way around breaks the
    # reflection ambiguity of distances from a single base point
    c = int(np.argmin(np.abs(d0 - circ / 4.0)))
    s = np.where(np.abs(_circ_gap(d0, d0[c], circ) - d[c]) <= 1e-9, d0, circ - d0)
    gaps = _circ_gap(s[:, None], s[None, :], circ)
    if np.max(np.abs(gaps - d)) <= 1e-9:
        return s, circ
    return None


def _circ_gap(a, b, circ):
    g = np.abs(a - b)
    return np.minimum(g, circ - g)


# -- feasibility engines ---------------------------------------------


def _feasible_exhaustive(space: MMSpace, kappas, d: float):
    """Exact feasibility at threshold d by pruned recursive assignment."""
    n = space.n
    groups = len(kappas)
    order = sorted(range(n), key=lambda i: -space.measure[i])
    measure = space.measure
    dist = space.dist
    deficits = list(kappas)
    members: list[list[int]] = [[] for _ in range(groups)]
    suffix_mass = [0.0] * (n + 1)
    for t in range(n - 1, -1, -1):
        suffix_mass[t] = suffix_mass[t + 1] + measure[order[t]]

    def rec(t: int) -> bool:
        need = sum(x for x in deficits if x > MASS_TOL)
        if need <= MASS_TOL:
            return True
        if t == n or suffix_mass[t] < need - MASS_TOL:
            return False
        p = order[t]
        for g in range(groups):
            ok = True
            for g2 in range(groups):
                if g2 == g:
                    continue
                for q in members[g2]:
                    if dist[p, q] < d - 1e-12:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                members[g].append(p)
                deficits[g] -= measure[p]
                if rec(t + 1):
                    return True
                deficits[g] += measure[p]
                members[g].pop()
        return rec(t + 1)

    if rec(0):
        return [list(m) for m in members]
    return None


def _greedy_fill_line(order_idx, coords, measure, kappas_perm, d, circ=None, start_coord=None):
    """Left-to-right minimal-prefix packing of contiguous groups."""
    groups: list[list[int]] = []
    t = 0
    n = len(order_idx)
    boundary = -math.inf
    for kap in kappas_perm:
        members: list[int] = []
        acc = 0.0
        while t < n:
            p = order_idx[t]
            if coords[p] < boundary - 1e-12:
                t += 1
                continue
            members.append(p)
            acc += measure[p]
            t += 1
            if acc >= kap - MASS_TOL:
                break
        if acc < kap - MASS_TOL:
            return None
        boundary = coords[members[-1]] + d
        groups.append(members)
    if circ is not None and start_coord is not None:
        # wrap-around gap between the last group's end and the first start
        last = coords[groups[-1][-1]]
        if _circ_gap(np.array(last), np.array(start_coord), circ) < d - 1e-12:
            # measured forward around the wrap
            forward = (start_coord - last) % circ
            if forward < d - 1e-12:
                return None
    return groups


def _feasible_line(space: MMSpace, s: np.ndarray, kappas, d: float):
    order = np.argsort(s, kind="stable")
    for perm in set(permutations(kappas)):
        got = _greedy_fill_line(order.tolist(), s, space.measure, perm, d)
        if got is not None:
            return got
    return None


def _feasible_circle(space: MMSpace, s: np.ndarray, circ: float, kappas, d: float):
    order = np.argsort(s, kind="stable").tolist()
    n = len(order)
    for perm in set(permutations(kappas)):
        for rot in range(n):
            rolled = order[rot:] + order[:rot]
            start = s[rolled[0]]
            # unroll coordinates so the sweep is monotone from the start
            coords = np.where(s >= start - 1e-12, s, s + circ)
            got = _greedy_fill_line(rolled, coords, space.measure, perm, d, circ=circ, start_coord=start)
            if got is not None:
                return got
    return None


def _feasible_greedy(space: MMSpace, kappas, d: float):
    """Heuristic feasibility: seed groups at mutually far points, grow greedily."""
    n = space.n
    measure = space.measure
    dist = space.dist
    groups = len(kappas)
    seeds = [int(np.argmax(measure))]
    while len(seeds) < groups:
        far = dist[:, seeds].min(axis=1)
        seeds.append(int(np.argmax(far)))
    members = [[sd] for sd in seeds]
    masses = [float(measure[sd]) for sd in seeds]
    if len(set(seeds)) < groups:
        return None
    free = [p for p in range(n) if p not in set(seeds)]
    free.sort(key=lambda p: -measure[p])
    for g in sorted(range(groups), key=lambda g: -(kappas[g] - masses[g])):
        for p in list(free):
            if masses[g] >= kappas[g] - MASS_TOL:
                break
            ok = all(
                dist[p, q] >= d - 1e-12 for g2 in range(groups) if g2 != g for q in members[g2]
            )
            if ok:
                members[g].append(p)
                masses[g] += measure[p]
                free.remove(p)
        if masses[g] < kappas[g] - MASS_TOL:
            return None
    return members


def sep_exact(space: MMSpace, kappas: Sequence[float], cap: int = SEP_EXHAUSTIVE_CAP) -> SepResult:
    """Supremum of the min pairwise distance of families with measures >= kappas."""
    kappas = tuple(float(x) for x in kappas)
    if len(kappas) < 2 or len(kappas) > 5:
        raise InvalidArgumentError(f"need between 2 and 5 mass thresholds, got {len(kappas)}")
    if any(x <= 0 for x in kappas):
        raise InvalidArgumentError("mass thresholds must be positive")
    if sum(kappas) > 1.0 + 1e-9:
        return SepResult(0.0, None, kappas, exact=True, feasible=False)

    if space.n <= cap:
        engine, exact = _feasible_exhaustive, True
    else:
        s = _detect_line(space)
        if s is not None:
            line = s
            engine = lambda sp, kap, d: _feasible_line(sp, line, kap, d)  # noqa: E731
            exact = bool(space.label.get("model_cd0"))
        else:
            det = _detect_circle(space)
            if det is not None:
                sc, circ = det
                engine = lambda sp, kap, d: _feasible_circle(sp, sc, circ, kap, d)  # noqa: E731
                exact = bool(space.label.get("model_cd0"))
            else:
                engine, exact = _feasible_greedy, False

    thresholds = np.unique(space.dist[np.triu_indices(space.n, 1)])
    thresholds = [0.0] + [float(t) for t in thresholds if t > 0]
    # binary search: feasibility is monotone nonincreasing in d
    lo, hi = 0, len(thresholds) - 1
    if engine(space, kappas, thresholds[0]) is None:
        return SepResult(0.0, None, kappas, exact=exact, feasible=False)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if engine(space, kappas, thresholds[mid]) is not None:
            lo = mid
        else:
            hi = mid - 1
    members = engine(space, kappas, thresholds[lo])
    witness = SubsetFamily(tuple(Subset.of(m) for m in members))
    value = _min_cross_distance(space, witness) if lo > 0 else 0.0
    return SepResult(float(value), witness, kappas, exact=exact, feasible=True)


def _min_cross_distance(space: MMSpace, family: SubsetFamily) -> float:
    best = math.inf
    parts = [list(p.indices) for p in family]
    for a in range(len(parts)):
        for b in range(a + 1, len(parts)):
            best = min(best, float(space.dist[np.ix_(parts[a], parts[b])].min()))
    return best


# -- concentration function ------------------------------------------


def concentration_function(space: MMSpace, r: float, cap: int = CONC_EXHAUSTIVE_CAP) -> ConcSample:
    """alpha(r): worst mass strictly beyond distance r from a half-mass set.

    Threshold convention: "outside" means dist(x, A) > r, i.e. the
    complement of the closed r-neighborhood (ties at the threshold are
    resolved toward the neighborhood, matching the finite perturbation of
    thresholds used throughout this module).
    """
    if r < 0:
        raise InvalidArgumentError("r must be nonnegative")
    n = space.n
    measure = space.measure
    dist = space.dist
    if n <= cap:
        best = 0.0
        for mask in range(1, 1 << n):
            idx = [i for i in range(n) if (mask >> i) & 1]
            if float(measure[idx].sum()) < 0.5 - MASS_TOL:
                continue
            dmin = dist[:, idx].min(axis=1)
            best = max(best, float(measure[dmin > r + 1e-12].sum()))
        return ConcSample(r, best, exact=True)

    # large spaces: candidate half-mass sets are metric balls and, for the
    # 1-D geometries, all minimal contiguous windows
    candidates: list[list[int]] = []
    for c in range(n):
        order = np.argsort(dist[c], kind="stable")
        acc = 0.0
        ball: list[int] = []
        for p in order:
            ball.append(int(p))
            acc += measure[p]
            if acc >= 0.5 - MASS_TOL:
                break
        candidates.append(ball)
    s = _detect_line(space)
    circle = None if s is not None else _detect_circle(space)
    if s is None and circle is not None:
        s = circle[0]
    if s is not None:
        order = np.argsort(s, kind="stable").tolist()
        m = len(order)
        starts = range(m) if circle is not None else [0]
        for rot in starts:
            rolled = order[rot:] + order[:rot]
            acc = 0.0
            win: list[int] = []
            for p in rolled:
                win.append(p)
                acc += measure[p]
                if acc >= 0.5 - MASS_TOL:
                    break
            if acc >= 0.5 - MASS_TOL:
                candidates.append(win)
        if circle is None:
            # right-anchored windows too (half-lines from either end)
            acc = 0.0
            win = []
            for p in reversed(order):
                win.append(p)
                acc += measure[p]
                if acc >= 0.5 - MASS_TOL:
                    break
            candidates.append(win)
    best = 0.0
    for idx in candidates:
        if float(measure[idx].sum()) < 0.5 - MASS_TOL:
            continue
        dmin = dist[:, idx].min(axis=1)
        best = max(best, float(measure[dmin > r + 1e-12].sum()))
    exact = s is not None and bool(space.label.get("model_cd0"))
    return ConcSample(r, best, exact=exact)


# -- observable diameter ---------------------------------------------


def partial_diameter(values, weights, mass: float) -> float:
    """Minimal window length on the line carrying at least `mass`."""
    values = np.asarray(values, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if abs(float(weights.sum()) - 1.0) > 1e-9:
        raise InvalidArgumentError("weights must sum to 1")
    if not (0.0 < mass <= 1.0 + 1e-12):
        raise InvalidArgumentError(f"mass must lie in (0, 1], got {mass}")
    order = np.argsort(values, kind="stable")
    v = values[order]
    w = weights[order]
    best = math.inf
    acc = 0.0
    lo = 0
    for hi in range(len(v)):
        acc += w[hi]
        while acc - w[lo] >= mass - MASS_TOL and lo < hi:
            acc -= w[lo]
            lo += 1
        if acc >= mass - MASS_TOL:
            best = min(best, v[hi] - v[lo])
    return float(best) if best < math.inf else 0.0


def lipschitz_constant(space: MMSpace, f) -> float:
    f = np.asarray(f, dtype=float)
    gaps = np.abs(f[:, None] - f[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(space.dist > 0, gaps / space.dist, 0.0)
    return float(np.max(ratios))


def obs_diameter_lower(
    space: MMSpace,
    kappa: float,
    witnesses: Sequence[Subset] = (),
    n_eigens: int = 4,
) -> float:
    """Certified lower bound on the observable diameter ObsDiam(X; -kappa).

    Maximizes the (1-kappa)-partial diameter of f_*mu over a candidate
    family of 1-Lipschitz functions: distances to points, distances to the
    supplied witness sets, and eigenfunctions rescaled by their exact
    Lipschitz constant.
    """
    if not (0.0 < kappa < 1.0):
        raise InvalidArgumentError("kappa must lie in (0, 1)")
    if space.n == 1:
        return 0.0
    mass = 1.0 - kappa
    best = 0.0
    for x in range(space.n):
        best = max(best, partial_diameter(space.dist[x], space.measure, mass))
    for A in witnesses:
        best = max(best, partial_diameter(dist_to_subset(space, A), space.measure, mass))
    if n_eigens > 0:
        spec = eigenpairs(space, min(n_eigens, space.n - 1))
        for f in spec.eigenfunctions[1:]:
            lip = lipschitz_constant(space, f)
            if lip > 0:
                best = max(best, partial_diameter(f / lip, space.measure, mass))
    return best


# -- profile conversions and the parametrized metric -----------------


def conc_to_sep(c: float, C: float, kappa: float) -> float:
    """Exponential concentration alpha(r) <= c exp(-C r) gives the
    2-separation bound sep(kappa, kappa) <= (2/C) log(c/kappa)."""
    if c <= 0 or C <= 0 or kappa <= 0:
        raise InvalidArgumentError("parameters must be positive")
    return (2.0 / C) * math.log(c / kappa)


def sep_to_conc(c: float, C: float, r: float) -> float:
    """Logarithmic separation bound sep(kappa, kappa) <= (1/C) log(c/kappa)
    gives alpha(r) <= c exp(-C r)."""
    if c <= 0 or C <= 0 or r <= 0:
        raise InvalidArgumentError("parameters must be positive")
    return c * math.exp(-C * r)


def me_distance(f, g, lam: float, weights) -> float:
    """inf{eps > 0 : mu(|f - g| > eps) <= lam * eps} by breakpoint scan."""
    if lam < 0:
        raise InvalidArgumentError("lambda must be nonnegative")
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    w = np.asarray(weights, dtype=float)
    gap = np.abs(f - g)
    levels = sorted(set(gap.tolist()))
    if levels[-1] == 0.0:
        return 0.0
    if lam == 0.0:
        return float(levels[-1])
    breaks = [v for v in levels if v > 0] + [math.inf]
    prev = 0.0
    for nxt in breaks:
        tail = float(w[gap > prev + 1e-15].sum())  # constant on [prev, nxt)
        eps = max(prev, tail / lam)
        if eps < nxt or (eps == nxt == math.inf):
            return float(eps)
        prev = nxt
    return float(levels[-1])
