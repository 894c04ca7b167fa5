"""Randomized generic rigidity tests over random prime fields.

Generic local/redundant/global rigidity are graph properties; they are
decided here by exact linear algebra at randomly sampled integer
configurations:

* local rigidity: rank of the rigidity matrix (one row per edge, the
  edge direction vector written into the two endpoint column blocks)
  equals d*n - d*(d+1)/2;
* global rigidity: a random equilibrium stress (left null vector of the
  rigidity matrix) whose stress matrix has rank n - d - 1 certifies the
  property.

All arithmetic happens modulo a fresh random prime p ~ 2^61 per trial,
so there are no float-tolerance cliffs. A rank can only drop below its
generic value at special points; by Schwartz-Zippel the drop probability
per trial is at most (matrix size)/p, and taking the best outcome of
T=3 independent trials pushes the overall error under 2^-40 by a wide
margin. Graphs with at most d+1 vertices are handled by the
complete-graph rule, where the rank formula does not apply.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .connectivity import is_k_connected
from .graphs import Graph
from .seeding import spawn_seeds

TRIALS = 3

_PRIME_LO = 1 << 60
_PRIME_HI = 1 << 61

# Deterministic Miller-Rabin witness set, exact for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _random_prime(rng: np.random.Generator) -> int:
    while True:
        candidate = int(rng.integers(_PRIME_LO, _PRIME_HI)) | 1
        if _is_prime(candidate):
            return candidate


@dataclass(frozen=True)
class FieldConfig:
    """A configuration with coordinates in Z_p, one residue per axis."""

    prime: int
    points: dict[int, tuple[int, ...]]


def _field_sample(g: Graph, d: int, rng: np.random.Generator) -> FieldConfig:
    p = _random_prime(rng)
    pts = {
        v: tuple(int(x) for x in rng.integers(0, p, size=d)) for v in g.vertices
    }
    return FieldConfig(p, pts)


def sample_generic_config(g: Graph, d: int, seed: int) -> FieldConfig:
    """Uniform random field coordinates; deterministic given the seed."""
    if d < 1:
        raise ValueError("dimension must be positive")
    return _field_sample(g, d, np.random.default_rng(seed))


# ---------------------------------------------------------------------------
# Exact linear algebra mod p
# ---------------------------------------------------------------------------

def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    """Gaussian elimination rank; the input rows are not modified."""
    if not rows:
        return 0
    mat = [[x % p for x in row] for row in rows]
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(mat)):
            if mat[r][col]:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        prow = mat[rank]
        inv = pow(prow[col], -1, p)
        if inv != 1:
            mat[rank] = prow = [(x * inv) % p for x in prow]
        for r in range(rank + 1, len(mat)):
            f = mat[r][col]
            if f:
                row_r = mat[r]
                mat[r] = [(a - f * b) % p for a, b in zip(row_r, prow)]
        rank += 1
        if rank == len(mat):
            break
    return rank


def _rref_mod_p(rows: Sequence[Sequence[int]], p: int) -> tuple[list[list[int]], list[int]]:
    mat = [[x % p for x in row] for row in rows]
    pivots: list[int] = []
    if not mat:
        return [], pivots
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(mat)):
            if mat[r][col]:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        prow = mat[rank]
        inv = pow(prow[col], -1, p)
        if inv != 1:
            mat[rank] = prow = [(x * inv) % p for x in prow]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                f = mat[r][col]
                row_r = mat[r]
                mat[r] = [(a - f * b) % p for a, b in zip(row_r, prow)]
        pivots.append(col)
        rank += 1
        if rank == len(mat):
            break
    return mat[:rank], pivots


def nullspace_mod_p(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of {x : A x = 0 mod p} from the reduced row echelon form."""
    red, pivots = _rref_mod_p(rows, p)
    pivot_set = set(pivots)
    basis = []
    for fc in (c for c in range(ncols) if c not in pivot_set):
        vec = [0] * ncols
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-red[r][fc]) % p
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# Rigidity matrix and equilibrium stresses
# ---------------------------------------------------------------------------

def rigidity_matrix_rows(g: Graph, cfg: FieldConfig, d: int) -> list[list[int]]:
    """One row per edge over Z_p: p(u)-p(v) in u's block, the negation in v's."""
    p = cfg.prime
    col_of = {v: i * d for i, v in enumerate(g.vertices)}
    rows = []
    ncols = d * g.n
    for u, v in g.edges:
        row = [0] * ncols
        pu, pv = cfg.points[u], cfg.points[v]
        cu, cv = col_of[u], col_of[v]
        for a in range(d):
            diff = (pu[a] - pv[a]) % p
            row[cu + a] = diff
            row[cv + a] = (-diff) % p
        rows.append(row)
    return rows


def normal_rank_target(n: int, d: int) -> int:
    """Full rank of the rigidity matrix for n >= d+1 vertices."""
    return d * n - d * (d + 1) // 2


def sample_equilibrium_stress(
    g: Graph, d: int, seed: int
) -> tuple[FieldConfig, list[int]] | None:
    """Random left null vector of the rigidity matrix at a sampled config.

    Returns None when the stress space is trivial (independent edges).
    The stress is indexed by g.edges order.
    """
    rng = np.random.default_rng(seed)
    cfg = _field_sample(g, d, rng)
    rows = rigidity_matrix_rows(g, cfg, d)
    if not rows:
        return None
    p = cfg.prime
    transpose = [[row[c] for row in rows] for c in range(len(rows[0]))]
    basis = nullspace_mod_p(transpose, len(rows), p)
    if not basis:
        return None
    coeffs = [int(c) for c in rng.integers(0, p, size=len(basis))]
    if not any(coeffs):
        coeffs[0] = 1
    stress = [0] * g.m
    for c, vec in zip(coeffs, basis):
        if c:
            for e in range(g.m):
                stress[e] = (stress[e] + c * vec[e]) % p
    return cfg, stress


def stress_matrix_rows(g: Graph, stress: Sequence[int], p: int) -> list[list[int]]:
    """n x n stress matrix: -w_uv off diagonal, row sums forced to zero."""
    idx = {v: i for i, v in enumerate(g.vertices)}
    n = g.n
    omega = [[0] * n for _ in range(n)]
    for w, (u, v) in zip(stress, g.edges):
        iu, iv = idx[u], idx[v]
        omega[iu][iv] = (-w) % p
        omega[iv][iu] = (-w) % p
        omega[iu][iu] = (omega[iu][iu] + w) % p
        omega[iv][iv] = (omega[iv][iv] + w) % p
    return omega


# ---------------------------------------------------------------------------
# Rigidity predicates
# ---------------------------------------------------------------------------

def rigidity_rank(g: Graph, d: int, seed: int = 0) -> int:
    """Exact rank of the rigidity matrix, best of TRIALS random configs."""
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    if g.m == 0:
        return 0
    best = 0
    for trial_seed in spawn_seeds(seed, TRIALS):
        cfg = _field_sample(g, d, np.random.default_rng(trial_seed))
        rows = rigidity_matrix_rows(g, cfg, d)
        best = max(best, rank_mod_p(rows, cfg.prime))
    return best


def is_generically_locally_rigid(g: Graph, d: int, seed: int = 0) -> bool:
    """No continuous edge-length-preserving deformation at generic configs.

    A full-rank certificate is exact; a "false" answer is randomized with
    error probability far below 2^-40.
    """
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    if g.n <= d + 1:
        return g.is_complete()
    return rigidity_rank(g, d, seed) == normal_rank_target(g.n, d)


def is_redundantly_rigid(g: Graph, d: int, seed: int = 0) -> bool:
    """Locally rigid, and still locally rigid after any single edge removal."""
    if not is_generically_locally_rigid(g, d, seed):
        return False
    edge_seeds = spawn_seeds(seed, g.m + 1)[1:]
    for e_seed, (u, v) in zip(edge_seeds, g.edges):
        if not is_generically_locally_rigid(g.without_edge(u, v), d, e_seed):
            return False
    return True


def is_generically_globally_rigid(g: Graph, d: int, seed: int = 0) -> bool:
    """Randomized stress-matrix certificate for generic global rigidity.

    After the local-rigidity gate, each trial samples a configuration,
    draws a random equilibrium stress, and certifies success iff the
    stress matrix reaches rank n-d-1. Any certifying trial wins.
    """
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    if g.n <= d + 1:
        return g.is_complete()
    if not is_generically_locally_rigid(g, d, seed):
        return False
    target = g.n - d - 1
    full = normal_rank_target(g.n, d)
    for trial_seed in spawn_seeds(seed, 2 * TRIALS)[TRIALS:]:
        rng = np.random.default_rng(trial_seed)
        cfg = _field_sample(g, d, rng)
        rows = rigidity_matrix_rows(g, cfg, d)
        p = cfg.prime
        if rank_mod_p(rows, p) < full:
            continue  # unlucky configuration, try again
        transpose = [[row[c] for row in rows] for c in range(len(rows[0]))]
        basis = nullspace_mod_p(transpose, len(rows), p)
        if not basis:
            return False  # minimally rigid: only the zero stress exists
        coeffs = [int(c) for c in rng.integers(0, p, size=len(basis))]
        if not any(coeffs):
            coeffs[0] = 1
        stress = [0] * g.m
        for c, vec in zip(coeffs, basis):
            if c:
                for e in range(g.m):
                    stress[e] = (stress[e] + c * vec[e]) % p
        if rank_mod_p(stress_matrix_rows(g, stress, p), p) == target:
            return True
    return False


@dataclass(frozen=True)
class HendricksonCheck:
    """The two conditions every generically globally rigid graph satisfies.

    Both holding does not imply global rigidity for d >= 3 (H-graphs).
    """

    connected_d_plus_1: bool
    redundantly_rigid: bool

    def to_json_dict(self) -> dict:
        return {
            "connected_d_plus_1": self.connected_d_plus_1,
            "redundantly_rigid": self.redundantly_rigid,
        }


def hendrickson_check(g: Graph, d: int, seed: int = 0) -> HendricksonCheck:
    if g.n < d + 2:
        raise ValueError(f"not applicable: needs at least {d + 2} vertices, got {g.n}")
    return HendricksonCheck(
        connected_d_plus_1=is_k_connected(g, d + 1),
        redundantly_rigid=is_redundantly_rigid(g, d, seed),
    )


# ---------------------------------------------------------------------------
# Graph surgery
# ---------------------------------------------------------------------------

def cone(g: Graph) -> Graph:
    """Add one new vertex adjacent to every existing vertex."""
    new = max(g.vertices) + 1 if g.n else 1
    return Graph(
        g.vertices + (new,), g.edges + tuple((v, new) for v in g.vertices)
    )


def add_vertex_on_clique(g: Graph, clique: Iterable[int]) -> Graph:
    """Attach a new vertex to an existing clique (and nothing else)."""
    members = sorted(set(clique))
    if not members:
        raise ValueError("clique must be nonempty")
    for v in members:
        if not g.has_vertex(v):
            raise ValueError(f"vertex {v} not in graph")
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            if not g.has_edge(members[i], members[j]):
                raise ValueError(
                    f"vertices {members[i]} and {members[j]} are not adjacent: not a clique"
                )
    new = max(g.vertices) + 1
    return Graph(g.vertices + (new,), g.edges + tuple((v, new) for v in members))


# ---------------------------------------------------------------------------
# Float diagnostic (never used for verdicts)
# ---------------------------------------------------------------------------

def float_rigidity_rank(g: Graph, d: int, seed: int = 0) -> int:
    """SVD-based rank at a uniform float configuration, for cross-checks."""
    if g.m == 0:
        return 0
    rng = np.random.default_rng(seed)
    pts = {v: rng.uniform(0.0, 1.0, size=d) for v in g.vertices}
    col_of = {v: i * d for i, v in enumerate(g.vertices)}
    mat = np.zeros((g.m, d * g.n))
    for r, (u, v) in enumerate(g.edges):
        diff = pts[u] - pts[v]
        mat[r, col_of[u]:col_of[u] + d] = diff
        mat[r, col_of[v]:col_of[v] + d] = -diff
    s = np.linalg.svd(mat, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > 1e-9 * s[0]))
