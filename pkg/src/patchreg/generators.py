"""Built-in networks, parameterized families, and synthetic coordinates.

The fixed instances are small hand-made networks whose connectivity and
rigidity behaviour is fully known; they double as regression anchors.
``gen_ring`` generalizes the 12-node cyclic family; ``gen_random_cover``
is the fuzz source for the property suites; ``synth_reg_instance``
attaches consistent local coordinates plus hidden ground truth so a
solver's output can be scored.
"""

from __future__ import annotations

import numpy as np

from .model import EuclideanTransform, Instance, Solution


def gen_fig1() -> Instance:
    """Three nodes, three 2-node patches, d=2, identity patch frames.

    Every patch is below the d+1 threshold, so patch transforms are not
    pinned down even though the coordinates are.
    """
    truth = {1: (0.0, 0.0), 2: (1.0, 0.0), 3: (1.0, 1.0)}
    patches = (frozenset({1, 2}), frozenset({2, 3}), frozenset({1, 3}))
    coords = {
        (i, k): truth[k] for i, patch in enumerate(patches, start=1) for k in patch
    }
    return Instance(2, 3, patches, coords)


def gen_fig2() -> Instance:
    """Five nodes, three overlapping patches, d=2, no coordinates."""
    return Instance(
        2,
        5,
        (frozenset({1, 2, 3}), frozenset({1, 4, 5}), frozenset({2, 3, 4, 5})),
    )


def _ring_patches(m: int, s: int, o: int) -> tuple[frozenset[int], ...]:
    stride = s - o
    n = m * stride
    patches = []
    for i in range(m):
        start = i * stride
        patches.append(frozenset((start + j) % n + 1 for j in range(s)))
    return tuple(patches)


def gen_ring(m: int, s: int, o: int, dimension: int = 3) -> Instance:
    """m patches of s nodes in a cycle, consecutive patches sharing o nodes.

    gen_ring(6, 4, 2) reproduces the 12-node counterexample family.
    """
    if m < 3:
        raise ValueError("need at least 3 patches")
    if not (1 <= o < s):
        raise ValueError("overlap must satisfy 1 <= o < s")
    if s > m * (s - o):
        raise ValueError("patch size exceeds the number of nodes in the ring")
    return Instance(dimension, m * (s - o), _ring_patches(m, s, o))


def gen_example1() -> Instance:
    """The 12-node, 6-patch ring in d=3.

    Quasi 4-connected, but its body graph is only minimally rigid, so
    the network is not uniquely registrable in R^3.
    """
    return gen_ring(6, 4, 2, dimension=3)


def gen_example2() -> Instance:
    """The 18-node augmentation: one exclusive extra node per patch.

    The body graph becomes redundantly rigid (and stays 4-connected),
    yet is still not generically globally rigid in R^3.
    """
    base = gen_example1()
    patches = tuple(
        patch | {12 + i} for i, patch in enumerate(base.patches, start=1)
    )
    return Instance(3, 18, patches)


def gen_hgraph(d: int) -> Instance:
    """The 18-node network lifted to dimension d by universal nodes.

    Each added node joins every patch, which cones the body graph once;
    d-3 conings keep both necessary conditions satisfied while global
    rigidity keeps failing.
    """
    if d < 3:
        raise ValueError("dimension must be at least 3")
    base = gen_example2()
    extra = range(19, 19 + (d - 3))
    patches = tuple(patch | set(extra) for patch in base.patches)
    return Instance(d, 18 + (d - 3), patches)


def gen_random_cover(
    num_nodes: int,
    num_patches: int,
    dimension: int,
    min_patch: int,
    seed: int = 0,
) -> Instance:
    """Random distinct patches covering every node, each >= min_patch nodes."""
    if num_nodes < 1 or num_patches < 1:
        raise ValueError("need at least one node and one patch")
    if min_patch < 1 or min_patch > num_nodes:
        raise ValueError("min_patch must be in 1..num_nodes")
    rng = np.random.default_rng(seed)
    max_patch = min(num_nodes, min_patch + max(2, min_patch))
    for _ in range(200):
        patches: list[set[int]] = []
        for _ in range(num_patches):
            size = int(rng.integers(min_patch, max_patch + 1))
            members = rng.choice(num_nodes, size=size, replace=False)
            patches.append({int(k) + 1 for k in members})
        uncovered = set(range(1, num_nodes + 1)) - set().union(*patches)
        for k in sorted(uncovered):
            patches[int(rng.integers(num_patches))].add(k)
        frozen = tuple(frozenset(p) for p in patches)
        if len(set(frozen)) == len(frozen):
            return Instance(dimension, num_nodes, frozen)
    raise ValueError("could not draw distinct patches; parameters infeasible")


def _haar_orthogonal(rng: np.random.Generator, d: int) -> np.ndarray:
    """Uniform over the full orthogonal group, reflections included."""
    a = rng.normal(size=(d, d))
    q, r = np.linalg.qr(a)
    return q * np.sign(np.diag(r))


def synth_reg_instance(
    inst: Instance, seed: int = 0, noise: float = 0.0
) -> tuple[Instance, Solution]:
    """Attach consistent local coordinates and return hidden ground truth.

    Global positions are uniform in a box of side num_nodes**(1/d); each
    patch gets a random Euclidean frame (orthogonal part Haar over O(d),
    bounded translation), and local coordinates are the globals pulled
    back through that frame, plus optional isotropic noise.
    """
    if inst.local_coords is not None:
        raise ValueError("instance already has local coordinates")
    if noise < 0:
        raise ValueError("noise must be nonnegative")
    d = inst.dimension
    rng = np.random.default_rng(seed)
    box = float(inst.num_nodes) ** (1.0 / d)
    truth = {
        k: rng.uniform(0.0, box, size=d) for k in range(1, inst.num_nodes + 1)
    }
    transforms = []
    coords: dict[tuple[int, int], tuple[float, ...]] = {}
    for i, patch in enumerate(inst.patches, start=1):
        frame = EuclideanTransform(
            _haar_orthogonal(rng, d), rng.uniform(-box, box, size=d)
        )
        inv = frame.inverse()
        transforms.append(frame)
        for k in sorted(patch):
            local = inv.apply(truth[k])
            if noise > 0.0:
                local = local + rng.normal(0.0, noise, size=d)
            coords[(i, k)] = tuple(float(c) for c in local)
    synth = Instance(d, inst.num_nodes, inst.patches, coords)
    truth_solution = Solution(
        {k: tuple(float(c) for c in pt) for k, pt in truth.items()},
        tuple(transforms),
    )
    return synth, truth_solution
