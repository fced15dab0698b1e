"""Boundary measure, exact multi-way isoperimetric constants, and sweep cuts.

The discrete boundary of a subset is the w*d-weighted cut size. With that
convention the layer-cake (co-area) formula is an exact identity, which is
what lets the sweep-cut bound hold with constant 2 as a theorem of the
discrete calculus rather than an approximation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapExceededError, InvalidArgumentError
from .space import MMSpace, Subset, SubsetFamily
from .spectral import eigenpairs, grad_l1, mu_norm2

HK_EXACT_CAP = 16


@dataclass(frozen=True)
class CutResult:
    """A witness family together with its max boundary-to-mass ratio."""

    witness: SubsetFamily
    value: float
    method: str  # "exact" | "sweep"


def _edge_arrays(space: MMSpace):
    """(ei, ej, w*d) as flat arrays for vectorized cut evaluation."""
    if not space.edges:
        z = np.zeros(0, dtype=np.int64)
        return z, z, np.zeros(0)
    ei = np.array([e[0] for e in space.edges], dtype=np.int64)
    ej = np.array([e[1] for e in space.edges], dtype=np.int64)
    wd = np.array([w * space.dist[i, j] for (i, j, w) in space.edges])
    return ei, ej, wd


def _cut_of_mask(mask: np.ndarray, ei, ej, wd) -> float:
    return float(wd[mask[ei] != mask[ej]].sum())


def boundary_measure(space: MMSpace, A: Subset) -> float:
    """Cut weight sum_{x in A, y not in A} w(x,y) d(x,y)."""
    ei, ej, wd = _edge_arrays(space)
    return _cut_of_mask(A.mask(space.n), ei, ej, wd)


def _all_mask_ratios(space: MMSpace) -> np.ndarray:
    """ratio[m] = cut(S_m) / mu(S_m) for every nonempty bitmask m."""
    n = space.n
    masks = np.arange(1 << n)
    cut = np.zeros(1 << n)
    for (i, j, w) in space.edges:
        cut += (w * space.dist[i, j]) * (((masks >> i) ^ (masks >> j)) & 1)
    mass = np.zeros(1 << n)
    for i in range(n):
        mass += space.measure[i] * ((masks >> i) & 1)
    ratio = np.full(1 << n, np.inf)
    ratio[1:] = cut[1:] / mass[1:]
    return ratio


def hk_exact(space: MMSpace, k: int, cap: int = HK_EXACT_CAP) -> CutResult:
    """Global minimum over families of k+1 disjoint nonempty subsets.

    Subset DP over point bitmasks: layer j holds, for every mask, the best
    achievable max-ratio using j parts drawn from that mask (ratios are
    always measured against the full space). Exponential but exact.
    """
    n = space.n
    if k < 1:
        raise InvalidArgumentError("k must be >= 1")
    if k + 1 > n:
        raise InvalidArgumentError(f"need k + 1 <= n, got k = {k}, n = {n}")
    if n > cap:
        raise CapExceededError(
            f"exact enumeration capped at n = {cap}, got {n}",
            "use hk_sweep for an upper-bound witness",
        )
    ratio = _all_mask_ratios(space)
    full = (1 << n) - 1

    # layer 1: best single part inside each mask, with argmin for recovery
    best1 = ratio.copy()
    arg1 = np.arange(1 << n)
    for mask in range(1, full + 1):
        m = mask
        while m:
            b = m & (-m)
            sub = mask ^ b
            if sub and best1[sub] < best1[mask]:
                best1[mask] = best1[sub]
                arg1[mask] = arg1[sub]
            m ^= b
    layers: list = [None, (best1, arg1)]

    for j in range(2, k + 2):
        prev = layers[j - 1][0]
        best = np.full(full + 1, np.inf)
        choice = np.zeros(full + 1, dtype=np.int64)  # 0 = drop lowest bit
        for mask in range(1, full + 1):
            low = mask & (-mask)
            rest = mask ^ low
            if rest:
                best[mask] = best[rest]
            sub = rest
            while True:
                s = sub | low
                other = mask ^ s
                if other:
                    val = max(ratio[s], prev[other])
                    if val < best[mask]:
                        best[mask] = val
                        choice[mask] = s
                if sub == 0:
                    break
                sub = (sub - 1) & rest
        layers.append((best, choice))

    value = float(layers[k + 1][0][full])
    parts: list[Subset] = []
    mask = full
    for j in range(k + 1, 1, -1):
        _best, choice = layers[j]
        while choice[mask] == 0:
            mask ^= mask & (-mask)
        s = int(choice[mask])
        parts.append(_mask_to_subset(s))
        mask ^= s
    parts.append(_mask_to_subset(int(arg1[mask])))
    witness = SubsetFamily(tuple(parts))
    check = max(boundary_measure(space, p) / space.subset_measure(p) for p in witness)
    assert abs(check - value) <= 1e-9 * max(1.0, abs(value)), (check, value)
    return CutResult(witness=witness, value=value, method="exact")


def _mask_to_subset(mask: int) -> Subset:
    return Subset.of(i for i in range(mask.bit_length()) if (mask >> i) & 1)


def sweep_cut(space: MMSpace, f) -> CutResult:
    """Best superlevel set A_t = {|f|^2 >= t} over the value thresholds.

    Guaranteed ratio <= 2 ||grad f||_2 / ||f||_2 (co-area identity, chain
    rule, Cauchy-Schwarz — all exact under this module's cut convention).
    Ties among thresholds go to the smaller-mass set.
    """
    f = np.asarray(f, dtype=float)
    if not np.any(f != 0.0):
        raise InvalidArgumentError("sweep_cut of the zero function")
    ei, ej, wd = _edge_arrays(space)
    sq = f * f
    best = None
    for t in sorted(set(v for v in sq.tolist() if v > 0.0)):
        sel = sq >= t
        mass = float(space.measure[sel].sum())
        r = _cut_of_mask(sel, ei, ej, wd) / mass
        key = (r, mass)
        if best is None or key < best[0]:
            best = (key, sel)
    (r, _mass), sel = best
    A = Subset.of(np.nonzero(sel)[0].tolist())
    bound = 2.0 * mu_norm2(space, grad_l1(space, f)) / mu_norm2(space, f)
    assert r <= bound + 1e-9 * max(1.0, bound), (r, bound)
    return CutResult(witness=SubsetFamily((A,)), value=float(r), method="sweep")


def coarea_layer_integral(space: MMSpace, g) -> float:
    """Layer-cake integral int_0^inf cut({g >= t}) dt for g >= 0."""
    g = np.asarray(g, dtype=float)
    if np.any(g < 0):
        raise InvalidArgumentError("layer-cake integral needs a nonnegative function")
    ei, ej, wd = _edge_arrays(space)
    total = 0.0
    levels = sorted(set(g.tolist()))
    for lo, hi in zip(levels, levels[1:]):
        total += _cut_of_mask(g >= hi, ei, ej, wd) * (hi - lo)
    return total


def edge_variation(space: MMSpace, g) -> float:
    """sum over edges of w d |g(x) - g(y)| — the co-area counterpart."""
    g = np.asarray(g, dtype=float)
    ei, ej, wd = _edge_arrays(space)
    return float(np.sum(wd * np.abs(g[ei] - g[ej])))


# -- spectral multi-way sweep ----------------------------------------


def _equal_mass_split(order: np.ndarray, measure: np.ndarray, pieces: int) -> list[np.ndarray]:
    """Cut a point ordering into `pieces` consecutive runs of ~equal mass."""
    parts: list[list[int]] = [[] for _ in range(pieces)]
    acc = 0.0
    target = 1.0 / pieces
    slot = 0
    for idx in order:
        if acc >= (slot + 1) * target - 1e-12 and slot + 1 < pieces:
            slot += 1
        parts[slot].append(int(idx))
        acc += measure[idx]
    return [np.array(p, dtype=np.int64) for p in parts if p]


def _family_value(space: MMSpace, parts, ei, ej, wd) -> float:
    worst = 0.0
    for p in parts:
        mask = np.zeros(space.n, dtype=bool)
        mask[p] = True
        worst = max(worst, _cut_of_mask(mask, ei, ej, wd) / float(space.measure[p].sum()))
    return worst


def _refine_part(space: MMSpace, part: np.ndarray, coords, ei, ej, wd):
    """Shrink a part to its best sweep sub-part along each embedding axis."""
    mask = np.zeros(space.n, dtype=bool)
    mask[part] = True
    best_ratio = _cut_of_mask(mask, ei, ej, wd) / float(space.measure[part].sum())
    best = part
    for axis in range(coords.shape[1]):
        sq = coords[part, axis] ** 2
        for t in sorted(set(sq.tolist())):
            keep = part[sq >= t]
            if len(keep) == 0 or len(keep) == len(part):
                continue
            m2 = np.zeros(space.n, dtype=bool)
            m2[keep] = True
            r = _cut_of_mask(m2, ei, ej, wd) / float(space.measure[keep].sum())
            if r < best_ratio - 1e-15:
                best_ratio = r
                best = keep
    return best, best_ratio


def hk_sweep(space: MMSpace, k: int, trials: int = 64, seed: int = 0) -> CutResult:
    """Upper-bound witness for h_k via the spectral embedding.

    Candidate families: equal-mass bands of each of the first k nontrivial
    eigenfunctions, equal-mass angular sectors from consecutive
    eigenfunction pairs (several rotations), and random-direction /
    random-cap partitions. The best candidate gets a per-part sweep
    refinement. Deterministic for a fixed seed, and always a valid
    disjoint family, hence an upper bound on h_k.
    """
    n = space.n
    if k < 1:
        raise InvalidArgumentError("k must be >= 1")
    if k + 1 > n:
        raise InvalidArgumentError(f"need k + 1 <= n, got k = {k}, n = {n}")
    spec = eigenpairs(space, min(k + 1, n - 1))
    coords = spec.eigenfunctions[1 : k + 1].T  # n-by-k embedding
    ei, ej, wd = _edge_arrays(space)
    rng = np.random.default_rng(seed)
    measure = space.measure
    pieces = k + 1

    candidates: list[list[np.ndarray]] = []
    for axis in range(coords.shape[1]):
        order = np.argsort(coords[:, axis], kind="stable")
        candidates.append(_equal_mass_split(order, measure, pieces))
    if coords.shape[1] >= 2:
        for a in range(coords.shape[1] - 1):
            theta = np.arctan2(coords[:, a + 1], coords[:, a])
            order = np.argsort(theta, kind="stable")
            for shift in range(0, n, max(1, n // (4 * pieces))):
                candidates.append(_equal_mass_split(np.roll(order, -shift), measure, pieces))
    for _ in range(trials):
        direction = rng.normal(size=coords.shape[1])
        nrm = np.linalg.norm(direction)
        if nrm > 0:
            proj = coords @ (direction / nrm)
            candidates.append(_equal_mass_split(np.argsort(proj, kind="stable"), measure, pieces))
        center = coords[rng.integers(n)]
        radial = np.linalg.norm(coords - center, axis=1)
        candidates.append(_equal_mass_split(np.argsort(radial, kind="stable"), measure, pieces))

    best_val = np.inf
    best_parts = None
    for cand in candidates:
        if len(cand) != pieces:
            continue
        val = _family_value(space, cand, ei, ej, wd)
        if val < best_val:
            best_val = val
            best_parts = cand
    assert best_parts is not None

    refined = []
    worst = 0.0
    for p in best_parts:
        q, r = _refine_part(space, p, coords, ei, ej, wd)
        refined.append(q)
        worst = max(worst, r)
    if worst < best_val:
        best_parts, best_val = refined, worst

    witness = SubsetFamily(tuple(Subset.of(p.tolist()) for p in best_parts))
    return CutResult(witness=witness, value=float(best_val), method="sweep")
