"""Numerical solver for the registration system and empirical uniqueness probe.

``solve_registration`` recovers global coordinates plus per-patch frames
from local coordinates in two phases:

1. stitch: BFS over the patch-overlap graph, aligning each frontier
   patch onto its already-placed nodes. When the placed overlap is too
   small (or degenerate) to pin the frame down, the undetermined
   orthogonal directions are completed *randomly* (seed-driven). That
   deliberate randomness is what lets repeated solves explore genuinely
   different zero-residual solutions on non-rigid inputs.
2. refine: alternating least squares. Per-patch Procrustes fits onto the
   current global estimate, then each global coordinate is re-estimated
   as the mean of its patch-propagated positions. Both half-steps are
   closed-form and monotone in the stacked least-squares objective.

``probe_uniqueness`` runs many independently seeded solves and checks
whether the near-zero-residual solutions are pairwise congruent. A
non-congruent pair is an empirical witness of non-uniqueness; absence
of a witness is evidence, not proof.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .model import (
    EuclideanTransform,
    Instance,
    Solution,
    config_diameter,
    configs_congruent,
    validate_instance,
)
from .seeding import spawn_seeds

DEFAULT_RESIDUAL_REL_TOL = 1e-6
# Congruence is judged 100x looser than the residual cut: genuine flexes
# move points by order-of-diameter distances, numerical scatter does not.
CONGRUENCE_FACTOR = 100.0

_RANK_REL_TOL = 1e-9


def align(src: np.ndarray, dst: np.ndarray, allow_reflection: bool = True) -> EuclideanTransform:
    """Least-squares Euclidean fit of src onto dst (orthogonal Procrustes).

    Minimizes sum ||Q s_i + t - d_i||^2 via SVD of the centered
    cross-covariance. With allow_reflection=False the orthogonal part is
    constrained to a proper rotation.
    """
    s = np.asarray(src, dtype=float)
    t = np.asarray(dst, dtype=float)
    if s.ndim != 2 or s.shape != t.shape:
        raise ValueError(f"point lists must share shape (n, d); got {s.shape} and {t.shape}")
    if s.shape[0] < 1:
        raise ValueError("need at least one point")
    cs = s.mean(axis=0)
    ct = t.mean(axis=0)
    h = (s - cs).T @ (t - ct)
    u, _, vt = np.linalg.svd(h)
    q = vt.T @ u.T
    if not allow_reflection and np.linalg.det(q) < 0:
        d = s.shape[1]
        flip = np.eye(d)
        flip[-1, -1] = -1.0
        q = vt.T @ flip @ u.T
    return EuclideanTransform(q, ct - q @ cs)


def _haar_orthogonal(rng: np.random.Generator, d: int) -> np.ndarray:
    a = rng.normal(size=(d, d))
    q, r = np.linalg.qr(a)
    return q * np.sign(np.diag(r))


def _constrained_fit(
    src: np.ndarray, dst: np.ndarray, d: int, rng: np.random.Generator
) -> EuclideanTransform:
    """Fit src onto dst; randomize the directions the data leaves free.

    The fitted transform is unique only on the affine span of src. On the
    orthogonal complement we compose with a random orthogonal map fixing
    that span pointwise, so under-determined stitches sample the whole
    solution coset instead of an arbitrary SVD tie-break.
    """
    base = align(src, dst, allow_reflection=True)
    centered = src - src.mean(axis=0)
    _, sing, vt = np.linalg.svd(centered, full_matrices=True)
    if sing.size and sing[0] > 0.0:
        rank = int(np.sum(sing > _RANK_REL_TOL * sing[0]))
    else:
        rank = 0
    if rank >= d:
        return base
    span = vt[:rank].T          # (d, rank) basis of the pinned directions
    free = vt[rank:].T          # (d, d-rank) basis of the free directions
    mix = _haar_orthogonal(rng, d - rank)
    w = span @ span.T + free @ mix @ free.T
    c = src.mean(axis=0)
    spin = EuclideanTransform(w, c - w @ c)
    return base.compose(spin)


@dataclass(frozen=True)
class SolverConfig:
    max_iterations: int = 500
    rel_change_tol: float = 1e-10
    residual_tol: float | None = None  # None: 1e-6 x configuration diameter


@dataclass(frozen=True)
class SolveReport:
    solution: Solution
    residual: float
    iterations: int
    converged: bool
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_json_dict(self) -> dict:
        return {
            "solution": self.solution.to_json_dict(),
            "residual": self.residual,
            "iterations": self.iterations,
            "converged": self.converged,
            "notes": list(self.notes),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent, sort_keys=True)


def registration_residual(
    inst: Instance,
    global_coords: dict[int, np.ndarray],
    transforms: dict[int, EuclideanTransform],
) -> float:
    """Max over correspondences of ||x_k - R_i(x_{k,i})||."""
    assert inst.local_coords is not None
    worst = 0.0
    for i, patch in enumerate(inst.patches, start=1):
        frame = transforms[i]
        for k in patch:
            err = float(
                np.linalg.norm(global_coords[k] - frame.apply(np.array(inst.local_coords[(i, k)])))
            )
            if err > worst:
                worst = err
    return worst


def _overlap_components(inst: Instance) -> list[list[int]]:
    m = inst.num_patches
    adj: dict[int, set[int]] = {i: set() for i in range(1, m + 1)}
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            if inst.patches[i - 1] & inst.patches[j - 1]:
                adj[i].add(j)
                adj[j].add(i)
    seen: set[int] = set()
    components = []
    for start in range(1, m + 1):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in sorted(adj[u]):
                if v not in seen:
                    seen.add(v)
                    comp.append(v)
                    queue.append(v)
        components.append(sorted(comp))
    return components


def solve_registration(
    inst: Instance, seed: int = 0, config: SolverConfig | None = None
) -> SolveReport:
    """Two-phase solve: random-completion stitching, then alternating refit."""
    cfg = config or SolverConfig()
    if inst.local_coords is None:
        raise ValueError("instance has no local coordinates")
    report = validate_instance(inst)
    if not report.is_structurally_sound:
        raise ValueError(f"instance is malformed: {report.problems[0]}")
    d = inst.dimension
    for i, patch in enumerate(inst.patches, start=1):
        if len(patch) < d + 1:
            raise ValueError(f"patch {i} has fewer than {d + 1} nodes; solver requires A1")

    rng = np.random.default_rng(seed)
    notes: list[str] = []

    # Phase 1: stitch patches component by component.
    components = _overlap_components(inst)
    if len(components) > 1:
        notes.append(
            f"patch-overlap graph has {len(components)} components; solved per component"
        )
    placed: dict[int, np.ndarray] = {}
    frames: dict[int, EuclideanTransform] = {}
    locals_of = {
        i: {k: np.array(inst.local_coords[(i, k)]) for k in sorted(patch)}
        for i, patch in enumerate(inst.patches, start=1)
    }
    overlap_adj: dict[int, list[int]] = {i: [] for i in range(1, inst.num_patches + 1)}
    for i in range(1, inst.num_patches + 1):
        for j in range(1, inst.num_patches + 1):
            if i != j and inst.patches[i - 1] & inst.patches[j - 1]:
                overlap_adj[i].append(j)

    for comp in components:
        root = comp[int(rng.integers(len(comp)))]
        frames[root] = EuclideanTransform.identity(d)
        for k, pt in locals_of[root].items():
            placed[k] = pt.copy()
        queue = deque([root])
        done = {root}
        while queue:
            u = queue.popleft()
            order = [overlap_adj[u][int(t)] for t in rng.permutation(len(overlap_adj[u]))]
            for j in order:
                if j in done:
                    continue
                done.add(j)
                anchored = [k for k in sorted(inst.patches[j - 1]) if k in placed]
                src = np.array([locals_of[j][k] for k in anchored])
                dst = np.array([placed[k] for k in anchored])
                frame = _constrained_fit(src, dst, d, rng)
                frames[j] = frame
                for k, pt in locals_of[j].items():
                    if k not in placed:
                        placed[k] = frame.apply(pt)
                queue.append(j)

    membership: dict[int, list[int]] = {k: [] for k in range(1, inst.num_nodes + 1)}
    for i, patch in enumerate(inst.patches, start=1):
        for k in patch:
            membership[k].append(i)

    def snapshot() -> tuple[dict[int, np.ndarray], dict[int, EuclideanTransform]]:
        return {k: v.copy() for k, v in placed.items()}, dict(frames)

    best_residual = registration_residual(inst, placed, frames)
    best_coords, best_frames = snapshot()

    # Phase 2: alternating least squares.
    nodes = sorted(placed)
    iterations = 0
    for _ in range(cfg.max_iterations):
        iterations += 1
        prev = np.array([placed[k] for k in nodes])
        for i in range(1, inst.num_patches + 1):
            members = sorted(inst.patches[i - 1])
            src = np.array([locals_of[i][k] for k in members])
            dst = np.array([placed[k] for k in members])
            frames[i] = align(src, dst, allow_reflection=True)
        res_half = registration_residual(inst, placed, frames)
        if res_half < best_residual:
            best_residual = res_half
            best_coords, best_frames = snapshot()
        for k in nodes:
            props = [frames[i].apply(locals_of[i][k]) for i in membership[k]]
            placed[k] = np.mean(props, axis=0)
        res_full = registration_residual(inst, placed, frames)
        if res_full < best_residual:
            best_residual = res_full
            best_coords, best_frames = snapshot()
        cur = np.array([placed[k] for k in nodes])
        denom = max(float(np.linalg.norm(prev)), 1e-300)
        if float(np.linalg.norm(cur - prev)) / denom < cfg.rel_change_tol:
            break

    solution = Solution(
        {k: tuple(float(c) for c in best_coords[k]) for k in nodes},
        tuple(best_frames[i] for i in range(1, inst.num_patches + 1)),
    )
    diam = config_diameter(solution.global_coords)
    scale = diam if diam > 0 else 1.0
    tol = cfg.residual_tol if cfg.residual_tol is not None else DEFAULT_RESIDUAL_REL_TOL * scale
    return SolveReport(
        solution=solution,
        residual=best_residual,
        iterations=iterations,
        converged=bool(best_residual < tol),
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class ProbeReport:
    trials: int
    solutions_found: int
    pairwise_congruent: bool
    witness: tuple[int, int] | None
    kept: tuple[tuple[int, SolveReport], ...] = field(default_factory=tuple)

    def witness_solutions(self) -> tuple[Solution, Solution] | None:
        if self.witness is None:
            return None
        by_trial = dict(self.kept)
        a, b = self.witness
        return by_trial[a].solution, by_trial[b].solution

    def to_json_dict(self) -> dict:
        out: dict = {
            "trials": self.trials,
            "solutions_found": self.solutions_found,
            "pairwise_congruent": self.pairwise_congruent,
            "witness": None,
        }
        if self.witness is not None:
            sols = self.witness_solutions()
            assert sols is not None
            out["witness"] = {
                "trial_a": self.witness[0],
                "trial_b": self.witness[1],
                "coords_a": sols[0].to_json_dict()["global_coords"],
                "coords_b": sols[1].to_json_dict()["global_coords"],
            }
        return out

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent, sort_keys=True)


def probe_uniqueness(
    inst: Instance,
    trials: int = 20,
    seed: int = 0,
    tol: float | None = None,
    config: SolverConfig | None = None,
) -> ProbeReport:
    """Solve repeatedly with independent seeds; compare kept solutions.

    Solutions with residual under ``tol`` (default 1e-6 x diameter) are
    kept; the first non-congruent pair found is reported as a witness.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    base = config or SolverConfig()
    cfg = SolverConfig(
        max_iterations=base.max_iterations,
        rel_change_tol=base.rel_change_tol,
        residual_tol=tol if tol is not None else base.residual_tol,
    )
    kept: list[tuple[int, SolveReport]] = []
    for trial, trial_seed in enumerate(spawn_seeds(seed, trials)):
        report = solve_registration(inst, seed=trial_seed, config=cfg)
        if report.converged:
            kept.append((trial, report))

    witness: tuple[int, int] | None = None
    congruent = True
    for a in range(len(kept)):
        if witness is not None:
            break
        for b in range(a + 1, len(kept)):
            ta, ra = kept[a]
            tb, rb = kept[b]
            diam = config_diameter(ra.solution.global_coords)
            scale = diam if diam > 0 else 1.0
            keep_tol = tol if tol is not None else DEFAULT_RESIDUAL_REL_TOL * scale
            same, _ = configs_congruent(
                ra.solution.global_coords,
                rb.solution.global_coords,
                CONGRUENCE_FACTOR * keep_tol,
            )
            if not same:
                congruent = False
                witness = (ta, tb)
                break

    return ProbeReport(
        trials=trials,
        solutions_found=len(kept),
        pairwise_congruent=congruent,
        witness=witness,
        kept=tuple(kept),
    )
