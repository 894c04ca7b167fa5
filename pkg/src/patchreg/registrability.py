"""Decide unique registrability of an instance and assemble diagnostics.

The decision logic, in order of precedence:

* If some patch has fewer than d+1 (non-degenerate) nodes, uniqueness of
  coordinates and uniqueness of patch frames come apart, so no verdict
  is well defined: diagnostics are reported and the decision is left
  undetermined.
* A single patch is trivially uniquely registrable.
* In the plane, unique registrability is exactly 3-connectivity of the
  body graph, a deterministic test; the randomized global-rigidity test
  still runs as a shadow cross-check.
* In general dimension, unique registrability is exactly generic global
  rigidity of the body graph (randomized stress-matrix test).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .connectivity import (
    VACUOUS,
    Vacuous,
    is_k_connected,
    quasi_connectivity,
    vertex_connectivity,
)
from .model import (
    Instance,
    _affine_rank,
    build_body_graph,
    build_correspondence_graph,
    dedupe_patches,
    validate_instance,
)
from .rigidity import (
    HendricksonCheck,
    is_generically_globally_rigid,
    is_generically_locally_rigid,
    is_redundantly_rigid,
)
from .seeding import spawn_seeds


class Method(str, Enum):
    D2_CONNECTIVITY = "D2_CONNECTIVITY"
    GENERAL_GHR = "GENERAL_GHR"
    SMALL_COMPLETE = "SMALL_COMPLETE"


@dataclass(frozen=True)
class Verdict:
    a1_satisfied: bool
    quasi_connectivity: int | Vacuous
    body_connectivity: int
    hendrickson: Optional[HendricksonCheck]
    locally_rigid: bool
    redundantly_rigid: bool
    globally_rigid: bool
    uniquely_registrable: Optional[bool]
    method: Optional[Method]
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_json_dict(self) -> dict:
        return {
            "a1_satisfied": self.a1_satisfied,
            "quasi_connectivity": (
                "vacuous" if isinstance(self.quasi_connectivity, Vacuous)
                else self.quasi_connectivity
            ),
            "body_connectivity": self.body_connectivity,
            "hendrickson": (
                None if self.hendrickson is None else self.hendrickson.to_json_dict()
            ),
            "locally_rigid": self.locally_rigid,
            "redundantly_rigid": self.redundantly_rigid,
            "globally_rigid": self.globally_rigid,
            "uniquely_registrable": self.uniquely_registrable,
            "method": None if self.method is None else self.method.value,
            "notes": list(self.notes),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent, sort_keys=True)


def find_laterated_order(inst: Instance) -> tuple[int, ...] | None:
    """Greedy search for a patch order where each patch overlaps the
    union of its predecessors in at least d+1 (non-degenerate) nodes.

    Every patch is tried as the starting point. Success certifies the
    ordering property; failure is heuristic evidence only. Shared-node
    non-degeneracy is checked numerically when coordinates are present,
    otherwise d+1 genuinely distinct nodes are trusted to span.
    """
    d = inst.dimension
    m = inst.num_patches

    def spans(patch_id: int, nodes: frozenset[int] | set[int]) -> bool:
        if len(nodes) < d + 1:
            return False
        if inst.local_coords is None:
            return True
        pts = np.array([inst.local_coords[(patch_id, k)] for k in sorted(nodes)])
        return _affine_rank(pts) >= d

    for start in range(1, m + 1):
        if not spans(start, inst.patches[start - 1]):
            continue
        order = [start]
        union = set(inst.patches[start - 1])
        unused = [i for i in range(1, m + 1) if i != start]
        progress = True
        while unused and progress:
            progress = False
            for j in list(unused):
                shared = inst.patches[j - 1] & union
                if spans(j, shared):
                    order.append(j)
                    union |= inst.patches[j - 1]
                    unused.remove(j)
                    progress = True
        if not unused:
            return tuple(order)
    return None


def analyze(inst: Instance, seed: int = 0) -> Verdict:
    """Full registrability analysis of one instance.

    Raises ValueError for structurally malformed instances (orphan
    nodes, out-of-range ids, inconsistent coordinates). Failing the
    patch-size assumption is not an error: diagnostics are computed and
    the uniqueness decision is reported as undetermined.
    """
    report = validate_instance(inst)
    if not report.is_structurally_sound:
        raise ValueError(f"instance is malformed: {report.problems[0]}")

    notes: list[str] = []
    a1 = report.a1_satisfied
    if not a1:
        for p in report.problems:
            notes.append(str(p))

    work, dropped = dedupe_patches(inst)
    if dropped:
        notes.append(f"duplicate patches removed before analysis: {list(dropped)}")

    d = work.dimension
    cg = build_correspondence_graph(work)
    bg = build_body_graph(work)
    quasi = quasi_connectivity(cg)

    if bg.graph.n >= 2:
        body_conn = vertex_connectivity(bg.graph)
    else:
        body_conn = 0
        notes.append("body graph has fewer than 2 vertices; connectivity reported as 0")

    seeds = spawn_seeds(seed, 3)
    locally = is_generically_locally_rigid(bg.graph, d, seeds[0])
    redundantly = is_redundantly_rigid(bg.graph, d, seeds[1])
    globally = is_generically_globally_rigid(bg.graph, d, seeds[2])

    if bg.graph.n >= d + 2:
        hendrickson: Optional[HendricksonCheck] = HendricksonCheck(
            connected_d_plus_1=is_k_connected(bg.graph, d + 1),
            redundantly_rigid=redundantly,
        )
        if hendrickson.connected_d_plus_1 and hendrickson.redundantly_rigid and not globally:
            notes.append(
                "H-graph: both necessary conditions hold yet the body graph "
                "is not generically globally rigid"
            )
    else:
        hendrickson = None
        notes.append(f"hendrickson check not applicable: fewer than {d + 2} vertices")

    order = find_laterated_order(work)
    if order is not None:
        notes.append(f"laterated patch order found (greedy, heuristic): {list(order)}")
    else:
        notes.append(
            "no laterated patch order found (greedy search is incomplete; "
            "this does not prove non-lateration)"
        )

    method: Optional[Method]
    unique: Optional[bool]
    if not a1:
        unique = None
        method = None
        notes.append("patch-size assumption violated: uniqueness verdict is undetermined")
    elif work.num_patches == 1:
        unique = True
        method = Method.SMALL_COMPLETE
        notes.append("single patch: uniquely registrable by definition")
    elif d == 2:
        unique = body_conn >= 3
        method = Method.D2_CONNECTIVITY
        if unique != globally:
            notes.append(
                "cross-check mismatch: 3-connectivity verdict disagrees with "
                "the randomized global-rigidity test"
            )
    else:
        unique = globally
        method = Method.GENERAL_GHR

    return Verdict(
        a1_satisfied=a1,
        quasi_connectivity=quasi,
        body_connectivity=body_conn,
        hendrickson=hendrickson,
        locally_rigid=locally,
        redundantly_rigid=redundantly,
        globally_rigid=globally,
        uniquely_registrable=unique,
        method=method,
        notes=tuple(notes),
    )
