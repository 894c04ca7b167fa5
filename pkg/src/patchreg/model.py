"""Core domain types for patch-based network registration.

An :class:`Instance` captures the full input of the registration problem:
``N`` nodes living in ``R^d``, ``M`` patches (node subsets observed in
their own local coordinate systems), and optionally the local coordinates
themselves, one point per (node, patch) incidence.

From an instance we derive two combinatorial views:

* the bipartite :class:`CorrespondenceGraph` between nodes and patches,
* the :class:`BodyGraph` on the nodes, where two nodes are adjacent

  exactly when they share a patch; each patch induces a clique.

All types are immutable after construction; every operation here is a
pure function.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional

import numpy as np

from .graphs import Graph

# Local coordinates: one point per correspondence edge (node k, patch i),
# keyed as (patch_index, node_id), each value a length-d float tuple.
LocalCoords = Mapping[tuple[int, int], tuple[float, ...]]

# A configuration assigns a point in R^d to every vertex.
Configuration = Mapping[int, tuple[float, ...]]

DEFAULT_REL_TOL = 1e-8
DEGENERACY_REL_TOL = 1e-9


@dataclass(frozen=True)
class Instance:
    """One registration problem: dimension, nodes, patches, optional coords.

    Node ids are 1-based contiguous integers ``1..num_nodes``; patch ids
    are 1-based positions in ``patches``.
    """

    dimension: int
    num_nodes: int
    patches: tuple[frozenset[int], ...]
    local_coords: Optional[dict[tuple[int, int], tuple[float, ...]]] = None

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError("dimension must be a positive integer")
        if self.num_nodes < 0:
            raise ValueError("num_nodes must be nonnegative")
        object.__setattr__(self, "patches", tuple(frozenset(p) for p in self.patches))
        if self.local_coords is not None:
            coords = {
                (int(i), int(k)): tuple(float(c) for c in pt)
                for (i, k), pt in self.local_coords.items()
            }
            object.__setattr__(self, "local_coords", coords)

    @property
    def num_patches(self) -> int:
        return len(self.patches)

    def correspondence_edges(self) -> tuple[tuple[int, int], ...]:
        """All (node, patch) incidences, sorted."""
        return tuple(
            sorted((k, i) for i, patch in enumerate(self.patches, start=1) for k in patch)
        )

    def patch_coords(self, i: int) -> dict[int, tuple[float, ...]]:
        """Local coordinates of patch ``i`` as node -> point."""
        if self.local_coords is None:
            raise ValueError("instance has no local coordinates")
        return {k: self.local_coords[(i, k)] for k in sorted(self.patches[i - 1])}

    def to_json_dict(self) -> dict:
        out: dict = {
            "dimension": self.dimension,
            "num_nodes": self.num_nodes,
            "patches": [sorted(p) for p in self.patches],
        }
        if self.local_coords is not None:
            coords: dict[str, dict[str, list[float]]] = {}
            for (i, k), pt in sorted(self.local_coords.items()):
                coords.setdefault(str(i), {})[str(k)] = list(pt)
            out["local_coords"] = coords
        return out

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent, sort_keys=True)

    @staticmethod
    def from_json_dict(data: Mapping) -> "Instance":
        try:
            dimension = int(data["dimension"])
            num_nodes = int(data["num_nodes"])
            patches = tuple(frozenset(int(k) for k in p) for p in data["patches"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed instance JSON: {exc}") from exc
        coords = None
        if "local_coords" in data and data["local_coords"] is not None:
            coords = {}
            for i, per_patch in data["local_coords"].items():
                for k, pt in per_patch.items():
                    coords[(int(i), int(k))] = tuple(float(c) for c in pt)
        return Instance(dimension, num_nodes, patches, coords)

    @staticmethod
    def from_json(text: str) -> "Instance":
        return Instance.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class CorrespondenceGraph:
    """Bipartite node-patch adjacency: edge (k, i) iff node k is in patch i."""

    num_nodes: int
    patches: tuple[frozenset[int], ...]

    @property
    def num_patches(self) -> int:
        return len(self.patches)

    def nodes_of(self, i: int) -> frozenset[int]:
        return self.patches[i - 1]

    def patches_of(self, k: int) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.patches, start=1) if k in p)

    def participating_nodes(self) -> frozenset[int]:
        """Nodes that belong to at least two patches."""
        count: dict[int, int] = {}
        for p in self.patches:
            for k in p:
                count[k] = count.get(k, 0) + 1
        return frozenset(k for k, c in count.items() if c >= 2)


def build_correspondence_graph(inst: Instance) -> CorrespondenceGraph:
    return CorrespondenceGraph(inst.num_nodes, inst.patches)


@dataclass(frozen=True)
class BodyGraph:
    """Graph on node ids with an edge for every pair sharing a patch.

    ``cliques[i-1]`` is the vertex set H_i induced by patch i; each is
    complete in ``graph`` by construction.
    """

    graph: Graph
    cliques: tuple[frozenset[int], ...]


def build_body_graph(inst: Instance) -> BodyGraph:
    """Union of per-patch cliques over the node set."""
    edges: set[tuple[int, int]] = set()
    for patch in inst.patches:
        members = sorted(patch)
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                edges.add((members[a], members[b]))
    g = Graph(range(1, inst.num_nodes + 1), edges)
    return BodyGraph(g, tuple(frozenset(p) for p in inst.patches))


@dataclass(frozen=True)
class Framework:
    """A graph together with a point in R^d for every vertex."""

    graph: Graph
    config: dict[int, tuple[float, ...]]

    def __post_init__(self) -> None:
        missing = [v for v in self.graph.vertices if v not in self.config]
        if missing:
            raise ValueError(f"configuration missing vertices {missing}")
        dims = {len(pt) for pt in self.config.values()}
        if len(dims) > 1:
            raise ValueError("configuration has mixed dimensions")


class EuclideanTransform:
    """Rigid transform x -> Q x + t with Q orthogonal (reflections allowed)."""

    __slots__ = ("linear", "translation")

    def __init__(self, linear: np.ndarray, translation: np.ndarray, tol: float = 1e-7):
        Q = np.array(linear, dtype=float)
        t = np.array(translation, dtype=float).reshape(-1)
        d = t.shape[0]
        if Q.shape != (d, d):
            raise ValueError(f"linear part must be {d}x{d}, got {Q.shape}")
        if np.abs(Q.T @ Q - np.eye(d)).max() > tol:
            raise ValueError("linear part is not orthogonal within tolerance")
        Q.setflags(write=False)
        t.setflags(write=False)
        self.linear = Q
        self.translation = t

    @property
    def dimension(self) -> int:
        return self.translation.shape[0]

    @property
    def is_reflection(self) -> bool:
        return bool(np.linalg.det(self.linear) < 0)

    @staticmethod
    def identity(d: int) -> "EuclideanTransform":
        return EuclideanTransform(np.eye(d), np.zeros(d))

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Apply to a single point (d,) or a stack of points (n, d)."""
        pts = np.asarray(points, dtype=float)
        return pts @ self.linear.T + self.translation

    def compose(self, other: "EuclideanTransform") -> "EuclideanTransform":
        """self o other: apply ``other`` first."""
        return EuclideanTransform(
            self.linear @ other.linear,
            self.linear @ other.translation + self.translation,
        )

    def inverse(self) -> "EuclideanTransform":
        return EuclideanTransform(self.linear.T, -self.linear.T @ self.translation)

    def to_json_dict(self) -> dict:
        return {
            "linear": [[float(x) for x in row] for row in self.linear],
            "translation": [float(x) for x in self.translation],
        }

    @staticmethod
    def from_json_dict(data: Mapping) -> "EuclideanTransform":
        return EuclideanTransform(np.array(data["linear"]), np.array(data["translation"]))

    def __repr__(self) -> str:
        kind = "reflection" if self.is_reflection else "rotation"
        return f"EuclideanTransform(d={self.dimension}, {kind})"


@dataclass(frozen=True)
class Solution:
    """Candidate answer to the registration problem: global coordinates
    for every node plus one transform per patch."""

    global_coords: dict[int, tuple[float, ...]]
    transforms: tuple[EuclideanTransform, ...]

    def coords_array(self, order: Iterable[int] | None = None) -> np.ndarray:
        keys = list(order) if order is not None else sorted(self.global_coords)
        return np.array([self.global_coords[k] for k in keys], dtype=float)

    def to_json_dict(self) -> dict:
        return {
            "global_coords": {
                str(k): [float(c) for c in pt] for k, pt in sorted(self.global_coords.items())
            },
            "transforms": [t.to_json_dict() for t in self.transforms],
        }


# ---------------------------------------------------------------------------
# Instance validation
# ---------------------------------------------------------------------------

class ProblemKind(str, Enum):
    EMPTY_PATCH = "empty-patch"
    PATCH_TOO_SMALL = "patch-too-small"          # fewer than d+1 nodes
    DEGENERATE_PATCH = "degenerate-patch"        # coords do not span R^d
    ORPHAN_NODE = "orphan-node"
    NODE_OUT_OF_RANGE = "node-out-of-range"
    BAD_LOCAL_COORDS = "bad-local-coords"
    DUPLICATE_PATCH = "duplicate-patch"


# Problems that make the instance structurally unusable, as opposed to
# merely failing the non-degeneracy assumption needed for a verdict.
STRUCTURAL_KINDS = frozenset(
    {ProblemKind.ORPHAN_NODE, ProblemKind.NODE_OUT_OF_RANGE, ProblemKind.BAD_LOCAL_COORDS}
)


@dataclass(frozen=True)
class Problem:
    kind: ProblemKind
    detail: str

    def __str__(self) -> str:
        return f"{self.kind.value}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    problems: tuple[Problem, ...] = field(default_factory=tuple)

    @property
    def is_clean(self) -> bool:
        return not self.problems

    @property
    def a1_satisfied(self) -> bool:
        """True when every patch has at least d+1 non-degenerate nodes."""
        bad = {ProblemKind.EMPTY_PATCH, ProblemKind.PATCH_TOO_SMALL, ProblemKind.DEGENERATE_PATCH}
        return not any(p.kind in bad for p in self.problems)

    @property
    def is_structurally_sound(self) -> bool:
        return not any(p.kind in STRUCTURAL_KINDS for p in self.problems)

    def of_kind(self, kind: ProblemKind) -> tuple[Problem, ...]:
        return tuple(p for p in self.problems if p.kind == kind)


def _affine_rank(points: np.ndarray, rel_tol: float = DEGENERACY_REL_TOL) -> int:
    """Rank of the centered coordinate matrix (dimension of the affine span)."""
    if points.shape[0] <= 1:
        return 0
    centered = points - points.mean(axis=0)
    s = np.linalg.svd(centered, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))


def validate_instance(inst: Instance) -> ValidationReport:
    """Report structural problems and non-degeneracy (A1) violations.

    Nothing is raised: every problem found is collected in the report.
    """
    problems: list[Problem] = []
    d = inst.dimension
    node_range = range(1, inst.num_nodes + 1)

    covered: set[int] = set()
    seen: dict[frozenset[int], int] = {}
    for i, patch in enumerate(inst.patches, start=1):
        if not patch:
            problems.append(Problem(ProblemKind.EMPTY_PATCH, f"patch {i} is empty"))
        elif len(patch) < d + 1:
            problems.append(
                Problem(
                    ProblemKind.PATCH_TOO_SMALL,
                    f"patch {i} has {len(patch)} nodes, needs at least {d + 1}",
                )
            )
        out = sorted(k for k in patch if k not in node_range)
        if out:
            problems.append(
                Problem(ProblemKind.NODE_OUT_OF_RANGE, f"patch {i} references nodes {out}")
            )
        if patch and patch in seen:
            problems.append(
                Problem(ProblemKind.DUPLICATE_PATCH, f"patch {i} duplicates patch {seen[patch]}")
            )
        else:
            seen.setdefault(patch, i)
        covered |= patch

    for k in node_range:
        if k not in covered:
            problems.append(Problem(ProblemKind.ORPHAN_NODE, f"node {k} belongs to no patch"))

    if inst.local_coords is not None:
        expected = set(
            (i, k) for i, patch in enumerate(inst.patches, start=1) for k in patch
        )
        got = set(inst.local_coords.keys())
        for i, k in sorted(expected - got):
            problems.append(
                Problem(ProblemKind.BAD_LOCAL_COORDS, f"missing coordinates for node {k} in patch {i}")
            )
        for i, k in sorted(got - expected):
            problems.append(
                Problem(ProblemKind.BAD_LOCAL_COORDS, f"coordinates for non-edge (node {k}, patch {i})")
            )
        for (i, k), pt in sorted(inst.local_coords.items()):
            if len(pt) != d:
                problems.append(
                    Problem(
                        ProblemKind.BAD_LOCAL_COORDS,
                        f"point for node {k} in patch {i} has {len(pt)} components, expected {d}",
                    )
                )
        if not any(p.kind == ProblemKind.BAD_LOCAL_COORDS for p in problems):
            # Coordinates are well formed: check each patch spans R^d.
            for i, patch in enumerate(inst.patches, start=1):
                if len(patch) < d + 1:
                    continue  # already an A1 violation
                pts = np.array([inst.local_coords[(i, k)] for k in sorted(patch)])
                if _affine_rank(pts) < d:
                    problems.append(
                        Problem(
                            ProblemKind.DEGENERATE_PATCH,
                            f"patch {i} coordinates do not affinely span R^{d}",
                        )
                    )

    return ValidationReport(tuple(problems))


def dedupe_patches(inst: Instance) -> tuple[Instance, tuple[int, ...]]:
    """Drop repeated patch node-sets, keeping first occurrences.

    Returns the reduced instance and the 1-based ids of dropped patches.
    Needed before connectivity analysis: identical patches inflate the
    S-disjoint path count without adding body-graph structure.
    """
    kept: list[frozenset[int]] = []
    kept_ids: list[int] = []
    dropped: list[int] = []
    seen: set[frozenset[int]] = set()
    for i, patch in enumerate(inst.patches, start=1):
        if patch in seen:
            dropped.append(i)
            continue
        seen.add(patch)
        kept.append(patch)
        kept_ids.append(i)
    if not dropped:
        return inst, ()
    coords = None
    if inst.local_coords is not None:
        coords = {}
        for new_i, old_i in enumerate(kept_ids, start=1):
            for k in inst.patches[old_i - 1]:
                if (old_i, k) in inst.local_coords:
                    coords[(new_i, k)] = inst.local_coords[(old_i, k)]
    return Instance(inst.dimension, inst.num_nodes, tuple(kept), coords), tuple(dropped)


# ---------------------------------------------------------------------------
# Framework comparison
# ---------------------------------------------------------------------------

def _config_points(config: Configuration, keys: list[int]) -> np.ndarray:
    return np.array([config[k] for k in keys], dtype=float)


def config_diameter(config: Configuration) -> float:
    """Largest pairwise distance in a configuration."""
    pts = np.array(list(config.values()), dtype=float)
    if pts.shape[0] < 2:
        return 0.0
    diff = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt((diff ** 2).sum(axis=-1)).max())


def _resolve_tol(x: Configuration, y: Configuration, tol: float | None) -> float:
    if tol is not None:
        return tol
    scale = max(config_diameter(x), config_diameter(y), 1.0)
    return DEFAULT_REL_TOL * scale


def frameworks_equivalent(
    bg: BodyGraph, x: Configuration, y: Configuration, tol: float | None = None
) -> bool:
    """True iff every body-graph edge has the same length in x and y.

    Default tolerance is 1e-8 relative to configuration diameter.
    """
    for cfg in (x, y):
        missing = [v for v in bg.graph.vertices if v not in cfg]
        if missing:
            raise ValueError(f"configuration missing vertices {missing}")
    dims = {len(pt) for pt in x.values()} | {len(pt) for pt in y.values()}
    if len(dims) > 1:
        raise ValueError("dimension mismatch between configurations")
    eps = _resolve_tol(x, y, tol)
    for u, v in bg.graph.edges:
        lx = float(np.linalg.norm(np.subtract(x[u], x[v])))
        ly = float(np.linalg.norm(np.subtract(y[u], y[v])))
        if abs(lx - ly) > eps:
            return False
    return True


def configs_congruent(
    x: Configuration, y: Configuration, tol: float | None = None
) -> tuple[bool, Optional[EuclideanTransform]]:
    """Check all pairwise distances agree; if so, return a transform with
    y ~= Q(x), recovered by least-squares alignment."""
    if set(x.keys()) != set(y.keys()):
        raise ValueError("configurations are on different vertex sets")
    dims = {len(pt) for pt in x.values()} | {len(pt) for pt in y.values()}
    if len(dims) > 1:
        raise ValueError("dimension mismatch between configurations")
    keys = sorted(x.keys())
    px = _config_points(x, keys)
    py = _config_points(y, keys)
    eps = _resolve_tol(x, y, tol)
    dx = np.sqrt(((px[:, None, :] - px[None, :, :]) ** 2).sum(axis=-1))
    dy = np.sqrt(((py[:, None, :] - py[None, :, :]) ** 2).sum(axis=-1))
    if np.abs(dx - dy).max() > eps:
        return False, None
    from .harness import align  # deferred: harness owns the alignment op

    return True, align(px, py, allow_reflection=True)
