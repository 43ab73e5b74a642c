"""Flatten a block's 3D points to 2D by walking its minimum spanning tree.

Each MST edge folds the z difference into both planar axes: the child lands
at the parent's 2D position plus sign-preserving distances computed in the
(x,z) and (y,z) planes.  The tree is built with Kruskal over the complete
Euclidean graph; ties are broken lexicographically so results are fully
deterministic.
"""
from __future__ import annotations

import math
import random
import zlib
from dataclasses import dataclass
from typing import Sequence, Tuple

from .core import Block, ColorPoint, ColorPointCloud
from .errors import EmptyBlock

Coord3 = Tuple[float, float, float]


@dataclass(frozen=True)
class MstEdge:
    parent_id: int
    child_id: int
    weight: float


@dataclass(frozen=True)
class FlattenedMesh:
    """Per-block 2D coordinates; entries align with the block's point order."""

    entries: Tuple[Tuple[int, float, float], ...]  # (point_id, x~, y~)
    root_id: int


@dataclass(frozen=True)
class RootPolicy:
    """Root selection: lowest point id (default) or a seeded random pick."""

    kind: str = "deterministic"
    seed: int = 0

    @staticmethod
    def deterministic() -> "RootPolicy":
        return RootPolicy("deterministic")

    @staticmethod
    def seeded_random(seed: int) -> "RootPolicy":
        return RootPolicy("random", seed)


def pairwise_distance(p_i: ColorPoint, p_j: ColorPoint) -> float:
    return math.dist(p_i.coords, p_j.coords)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def build_mst(points: Sequence[Coord3], root: int = 0) -> list[MstEdge]:
    """Kruskal MST of the complete graph, oriented parent->child from `root`.

    Candidate edges are ordered by (weight, smaller id, larger id); the
    orientation comes from a breadth-first walk visiting children in
    ascending id.
    """
    n = len(points)
    if n == 0:
        raise EmptyBlock("cannot build an MST over zero points")
    if n == 1:
        return []

    edges = sorted(
        (math.dist(points[i], points[j]), i, j)
        for i in range(n) for j in range(i + 1, n)
    )
    uf = _UnionFind(n)
    adjacency: dict[int, list[tuple[int, float]]] = {i: [] for i in range(n)}
    accepted = 0
    for w, i, j in edges:
        if uf.union(i, j):
            adjacency[i].append((j, w))
            adjacency[j].append((i, w))
            accepted += 1
            if accepted == n - 1:
                break

    oriented: list[MstEdge] = []
    seen = {root}
    queue = [root]
    while queue:
        node = queue.pop(0)
        for child, w in sorted(adjacency[node]):
            if child not in seen:
                seen.add(child)
                oriented.append(MstEdge(parent_id=node, child_id=child, weight=w))
                queue.append(child)
    return oriented


def _sgn(d: float) -> float:
    # sgn(0) := +1 so a zero planar difference still carries the z fold
    return 1.0 if d >= 0 else -1.0


def fold_deltas(parent: Coord3, child: Coord3) -> Tuple[float, float]:
    dx, dy, dz = (child[0] - parent[0], child[1] - parent[1], child[2] - parent[2])
    return (
        _sgn(dx) * math.sqrt(dx * dx + dz * dz),
        _sgn(dy) * math.sqrt(dy * dy + dz * dz),
    )


def _pick_root(block: Block, policy: RootPolicy) -> int:
    n = len(block.point_ids)
    if policy.kind == "deterministic":
        return 0  # point_ids are ascending, so local 0 is the lowest point id
    salt = zlib.crc32(repr(block.cell_index).encode())
    return random.Random(policy.seed ^ salt).randrange(n)


def flatten_block(
    block: Block, cloud: ColorPointCloud, root_policy: RootPolicy = RootPolicy.deterministic()
) -> FlattenedMesh:
    if not block.point_ids:
        raise EmptyBlock("cannot flatten an empty block")

    coords = [cloud.points[pid].coords for pid in block.point_ids]
    root = _pick_root(block, root_policy)
    edges = build_mst(coords, root=root)

    flat: dict[int, Tuple[float, float]] = {root: (0.0, 0.0)}
    for e in edges:  # BFS order guarantees the parent is already placed
        px, py = flat[e.parent_id]
        dx, dy = fold_deltas(coords[e.parent_id], coords[e.child_id])
        flat[e.child_id] = (px + dx, py + dy)

    entries = tuple(
        (pid, flat[local][0], flat[local][1])
        for local, pid in enumerate(block.point_ids)
    )
    return FlattenedMesh(entries=entries, root_id=block.point_ids[root])
