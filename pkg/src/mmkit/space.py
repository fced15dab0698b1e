"""Finite weighted metric-measure spaces.

A space is a finite point set with an explicit metric matrix, a positive
probability measure, symmetric edge conductances (the Dirichlet-form
weights), and an optional potential recorded for density-weighted models.
Model generators (cycle, Gaussian-weighted interval, dumbbell) calibrate
their conductances so that the discrete weighted Laplacian converges to
the continuum operator at second order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import FormatError, InvalidArgumentError, InvariantViolationError

TRIANGLE_TOL = 1e-9
MEASURE_TOL = 1e-12
# full O(n^3) triangle check up to this size, sampled slices above
TRIANGLE_EXHAUSTIVE_N = 64

FILE_VERSION = 1


@dataclass(frozen=True, eq=False)
class MMSpace:
    """Immutable finite metric-measure space.

    dist is the full symmetric metric matrix (stored explicitly so that
    spaces without geometric structure are first-class), measure a positive
    probability vector, edges a list of (i, j, w) conductances with i < j.
    """

    n: int
    dist: np.ndarray
    measure: np.ndarray
    edges: tuple[tuple[int, int, float], ...]
    psi: Optional[np.ndarray] = None
    label: dict = field(default_factory=dict)

    def __post_init__(self):
        dist = np.ascontiguousarray(np.asarray(self.dist, dtype=float))
        measure = np.ascontiguousarray(np.asarray(self.measure, dtype=float))
        psi = None if self.psi is None else np.ascontiguousarray(np.asarray(self.psi, dtype=float))
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "measure", measure)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "edges", canonical_edges(self.edges))
        self._validate()
        dist.flags.writeable = False
        measure.flags.writeable = False
        if psi is not None:
            psi.flags.writeable = False

    def _validate(self):
        n = self.n
        if n < 1:
            raise InvariantViolationError("empty-space", "n must be >= 1")
        if self.dist.shape != (n, n):
            raise InvariantViolationError("dist-shape", f"expected {(n, n)}, got {self.dist.shape}")
        if self.measure.shape != (n,):
            raise InvariantViolationError("measure-shape", f"expected ({n},), got {self.measure.shape}")
        if self.psi is not None and self.psi.shape != (n,):
            raise InvariantViolationError("psi-shape", f"expected ({n},), got {self.psi.shape}")
        if np.any(self.dist < 0):
            raise InvariantViolationError("negative-distance")
        if np.any(np.abs(np.diag(self.dist)) > 0):
            raise InvariantViolationError("nonzero-diagonal")
        if not np.allclose(self.dist, self.dist.T, atol=TRIANGLE_TOL, rtol=0):
            raise InvariantViolationError("asymmetric-dist")
        if np.any(self.measure <= 0):
            raise InvariantViolationError("nonpositive-measure", "zero-mass points are rejected, not pruned")
        if abs(float(self.measure.sum()) - 1.0) > MEASURE_TOL:
            raise InvariantViolationError("measure-not-normalized", f"sum = {self.measure.sum()!r}")
        for (i, j, w) in self.edges:
            if not (0 <= i < n and 0 <= j < n):
                raise InvariantViolationError("edge-index-out-of-range", f"({i}, {j})")
            if i == j:
                raise InvariantViolationError("self-loop", f"({i}, {j})")
            if w <= 0:
                raise InvariantViolationError("nonpositive-conductance", f"({i}, {j}, {w})")
        self._check_triangle()

    def _check_triangle(self):
        d = self.dist
        n = self.n
        if n <= TRIANGLE_EXHAUSTIVE_N:
            ks = range(n)
        else:
            rng = np.random.default_rng(0)
            ks = rng.choice(n, size=TRIANGLE_EXHAUSTIVE_N, replace=False)
        for k in ks:
            if np.any(d > d[:, k, None] + d[None, k, :] + TRIANGLE_TOL):
                raise InvariantViolationError("triangle-inequality", f"violated through point {int(k)}")

    # -- convenience -------------------------------------------------

    def subset_measure(self, A: "Subset") -> float:
        return float(self.measure[list(A.indices)].sum())

    def edge_array(self) -> np.ndarray:
        """Edges as a float array of rows (i, j, w, d)."""
        rows = [(i, j, w, self.dist[i, j]) for (i, j, w) in self.edges]
        return np.asarray(rows, dtype=float).reshape(-1, 4)


def canonical_edges(edges: Iterable[Sequence]) -> tuple[tuple[int, int, float], ...]:
    """Canonicalize an edge list to sorted (i < j, w) tuples.

    Accepts either one or both orientations per edge; conflicting weights
    for the two orientations are an invariant violation.
    """
    seen: dict[tuple[int, int], float] = {}
    for e in edges:
        i, j, w = int(e[0]), int(e[1]), float(e[2])
        key = (min(i, j), max(i, j))
        if i == j:
            raise InvariantViolationError("self-loop", f"({i}, {j})")
        if key in seen:
            if abs(seen[key] - w) > 1e-12 * max(1.0, abs(w)):
                raise InvariantViolationError("asymmetric-edge-weight", f"{key}")
        else:
            seen[key] = w
    return tuple((i, j, seen[(i, j)]) for (i, j) in sorted(seen))


@dataclass(frozen=True)
class Subset:
    """A subset of the points of a space, as a sorted index tuple."""

    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(sorted(set(int(i) for i in self.indices))))

    @classmethod
    def of(cls, indices: Iterable[int]) -> "Subset":
        return cls(tuple(indices))

    def __len__(self):
        return len(self.indices)

    def __contains__(self, i):
        return i in set(self.indices)

    def mask(self, n: int) -> np.ndarray:
        m = np.zeros(n, dtype=bool)
        m[list(self.indices)] = True
        return m

    def complement(self, n: int) -> "Subset":
        return Subset.of(i for i in range(n) if i not in set(self.indices))


@dataclass(frozen=True)
class SubsetFamily:
    """Pairwise-disjoint nonempty subsets, witnesses for cuts and separation."""

    parts: tuple[Subset, ...]

    def __post_init__(self):
        seen: set[int] = set()
        for p in self.parts:
            if len(p) == 0:
                raise InvalidArgumentError("empty part in subset family")
            overlap = seen.intersection(p.indices)
            if overlap:
                raise InvalidArgumentError(f"subset family not disjoint at points {sorted(overlap)}")
            seen.update(p.indices)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)


# -- generators ------------------------------------------------------


def _mesh_conductance(measure: np.ndarray, i: int, j: int, h: float) -> float:
    # second-order finite-volume calibration: w = (mu_i + mu_j) / (2 h^2)
    return float((measure[i] + measure[j]) / (2.0 * h * h))


def gen_cycle(n: int, circumference: float) -> MMSpace:
    """Uniform discretization of a flat circle (the canonical flat model)."""
    if n < 3:
        raise InvalidArgumentError(f"gen_cycle needs n >= 3, got {n}")
    if circumference <= 0:
        raise InvalidArgumentError("circumference must be positive")
    h = circumference / n
    pos = h * np.arange(n)
    gap = np.abs(pos[:, None] - pos[None, :])
    dist = np.minimum(gap, circumference - gap)
    np.fill_diagonal(dist, 0.0)
    measure = np.full(n, 1.0 / n)
    edges = [(i, (i + 1) % n, _mesh_conductance(measure, i, (i + 1) % n, h)) for i in range(n)]
    label = {"generator": "cycle", "n": n, "circumference": circumference, "model_cd0": True}
    return MMSpace(n=n, dist=dist, measure=measure, edges=tuple(edges), psi=None, label=label)


def gen_gauss_interval(n: int, sigma: float, half_width: float) -> MMSpace:
    """Gaussian-weighted segment with reflecting ends.

    The continuum operator is Ornstein-Uhlenbeck (unit spectral gap for
    sigma = 1) once half_width covers most of the mass.
    """
    if n < 3:
        raise InvalidArgumentError(f"gen_gauss_interval needs n >= 3, got {n}")
    if sigma <= 0 or half_width <= 0:
        raise InvalidArgumentError("sigma and half_width must be positive")
    x = np.linspace(-half_width, half_width, n)
    h = x[1] - x[0]
    psi = x**2 / (2.0 * sigma**2)
    measure = np.exp(-psi)
    measure /= measure.sum()
    dist = np.abs(x[:, None] - x[None, :])
    edges = [(i, i + 1, _mesh_conductance(measure, i, i + 1, h)) for i in range(n - 1)]
    label = {
        "generator": "gauss_interval",
        "n": n,
        "sigma": sigma,
        "half_width": half_width,
        "model_cd0": True,
    }
    return MMSpace(n=n, dist=dist, measure=measure, edges=tuple(edges), psi=psi, label=label)


def gen_dumbbell(clique_size: int, bridge_len: int, bridge_weight: float) -> MMSpace:
    """Two unit-conductance cliques joined by a weak bridge path.

    bridge_len counts the intermediate bridge points, so the port-to-port
    path has bridge_len + 1 edges of length 1. Clique vertices carry unit
    measure weight and bridge vertices carry weight bridge_weight (weak
    bridge, weak mass — otherwise the bridge points host their own slow
    modes and mask the two-clique gap). This is the negative control for
    the curvature hypothesis: the spectral gap collapses with the bridge
    weight while higher eigenvalues stay clique-sized.
    """
    if clique_size < 2:
        raise InvalidArgumentError(f"clique_size must be >= 2, got {clique_size}")
    if bridge_len < 1:
        raise InvalidArgumentError(f"bridge_len must be >= 1, got {bridge_len}")
    if bridge_weight <= 0:
        raise InvalidArgumentError("bridge_weight must be positive")
    m = clique_size
    n = 2 * m + bridge_len
    edges: list[tuple[int, int, float]] = []
    for a in range(m):
        for b in range(a + 1, m):
            edges.append((a, b, 1.0))
            edges.append((m + a, m + b, 1.0))
    port_a, port_b = m - 1, m
    chain = [port_a] + [2 * m + t for t in range(bridge_len)] + [port_b]
    for u, v in zip(chain, chain[1:]):
        edges.append((min(u, v), max(u, v), bridge_weight))
    rows = np.array([e[0] for e in edges])
    cols = np.array([e[1] for e in edges])
    lengths = np.ones(len(edges))
    g = coo_matrix((lengths, (rows, cols)), shape=(n, n))
    dist = shortest_path(g, directed=False, unweighted=False)
    weights = np.ones(n)
    weights[2 * m :] = bridge_weight
    measure = weights / weights.sum()
    label = {
        "generator": "dumbbell",
        "clique_size": clique_size,
        "bridge_len": bridge_len,
        "bridge_weight": bridge_weight,
    }
    return MMSpace(n=n, dist=dist, measure=measure, edges=tuple(edges), psi=None, label=label)


# -- subset operations -----------------------------------------------


def dist_to_subset(space: MMSpace, A: Subset) -> np.ndarray:
    if len(A) == 0:
        raise InvalidArgumentError("distance to the empty set is undefined")
    return space.dist[:, list(A.indices)].min(axis=1)


def neighborhood(space: MMSpace, A: Subset, r: float, mode: str = "closed") -> Subset:
    """Open (< r) or closed (<= r) metric r-neighborhood of A."""
    if r < 0:
        raise InvalidArgumentError("r must be nonnegative")
    d = dist_to_subset(space, A)
    if mode == "open":
        sel = d < r - 1e-12
    elif mode == "closed":
        sel = d <= r + 1e-12
    else:
        raise InvalidArgumentError(f"mode must be 'open' or 'closed', got {mode!r}")
    return Subset.of(np.nonzero(sel)[0].tolist())


def restrict(space: MMSpace, A: Subset) -> MMSpace:
    """Induced metric and renormalized (conditional) measure on A."""
    if len(A) == 0:
        raise InvalidArgumentError("cannot restrict to the empty set")
    idx = list(A.indices)
    lookup = {p: q for q, p in enumerate(idx)}
    mass = space.subset_measure(A)
    edges = tuple(
        (lookup[i], lookup[j], w) for (i, j, w) in space.edges if i in lookup and j in lookup
    )
    label = dict(space.label)
    label["restricted_to"] = idx
    label.pop("model_cd0", None)
    return MMSpace(
        n=len(idx),
        dist=space.dist[np.ix_(idx, idx)],
        measure=space.measure[idx] / mass,
        edges=edges,
        psi=None if space.psi is None else space.psi[idx],
        label=label,
    )


# -- file I/O --------------------------------------------------------


def save_space(space: MMSpace, path) -> None:
    payload = {
        "version": FILE_VERSION,
        "n": space.n,
        "dist": [[float(v) for v in row] for row in space.dist],
        "measure": [float(v) for v in space.measure],
        "edges": [[i, j, float(w)] for (i, j, w) in space.edges],
        "psi": None if space.psi is None else [float(v) for v in space.psi],
        "label": space.label,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_space(path) -> MMSpace:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError("parse-error", str(exc)) from exc
    if not isinstance(payload, dict):
        raise FormatError("parse-error", "top-level value must be an object")
    if payload.get("version") != FILE_VERSION:
        raise FormatError("unsupported-version", repr(payload.get("version")))
    missing = [k for k in ("n", "dist", "measure", "edges") if k not in payload]
    if missing:
        raise FormatError("missing-field", ", ".join(missing))
    try:
        return MMSpace(
            n=int(payload["n"]),
            dist=np.asarray(payload["dist"], dtype=float),
            measure=np.asarray(payload["measure"], dtype=float),
            edges=tuple(tuple(e) for e in payload["edges"]),
            psi=None if payload.get("psi") is None else np.asarray(payload["psi"], dtype=float),
            label=payload.get("label") or {},
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError("parse-error", str(exc)) from exc


def spaces_equal(a: MMSpace, b: MMSpace, tol: float = 1e-12) -> bool:
    if a.n != b.n or len(a.edges) != len(b.edges):
        return False
    if not np.allclose(a.dist, b.dist, atol=tol, rtol=0):
        return False
    if not np.allclose(a.measure, b.measure, atol=tol, rtol=0):
        return False
    for (i, j, w), (i2, j2, w2) in zip(a.edges, b.edges):
        if i != i2 or j != j2 or abs(w - w2) > tol * max(1.0, abs(w)):
            return False
    if (a.psi is None) != (b.psi is None):
        return False
    if a.psi is not None and not np.allclose(a.psi, b.psi, atol=tol, rtol=0):
        return False
    return True
