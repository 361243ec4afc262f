"""Proper colorings of the virtual single-unicast graph and the rate bound they yield.

Two constructions are provided: the general K-color scheme (one occurrence of
each color per column, shifted so that repeats land only on side-information
nodes) and the tighter (a1+a2+2)-color scheme available for two-column
instances whose user count is a multiple of a1+a2+2.  The number of distinct
colors seen in any node's closed anti-outneighborhood upper-bounds the
broadcast rate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .icp import GapVector, Node, SuicpGraph, UnionIcp, require_leading_max, wrap


@dataclass(frozen=True)
class Coloring:
    """Assignment of colors 1..num_colors to every virtual node."""

    assignment: dict[Node, int]
    num_colors: int

    def __post_init__(self) -> None:
        bad = [c for c in self.assignment.values() if not 1 <= c <= self.num_colors]
        if bad:
            raise ValueError(f"colors out of range [1, {self.num_colors}]: {sorted(set(bad))}")

    def color(self, node: Node) -> int:
        return self.assignment[node]

    def color_classes(self) -> dict[int, list[Node]]:
        classes: dict[int, list[Node]] = {}
        for node in sorted(self.assignment):
            classes.setdefault(self.assignment[node], []).append(node)
        return classes

    def to_json(self) -> dict:
        return {
            "colors": self.num_colors,
            "assignment": [[u, t, c] for (u, t), c in sorted(self.assignment.items())],
        }


def theorem1_coloring(icp: UnionIcp) -> Coloring:
    """K-color scheme: color c sits at row <c + a_1 + ... + a_{v-1} + (v-1)L>_K of column v."""
    K, i, L = icp.K, icp.i, icp.spec.L
    shifts = []
    acc = 0
    for v in range(1, i + 1):
        shifts.append(acc)
        acc += icp.spec.gap(v) + L  # a_v joins the shift of column v+1
    assignment = {
        (k, v): wrap(k - shifts[v - 1], K)
        for k in range(1, K + 1)
        for v in range(1, i + 1)
    }
    return Coloring(assignment=assignment, num_colors=K)


def theorem5_coloring(icp: UnionIcp) -> Coloring:
    """(a1+a2+2)-color scheme for two-column instances with (a1+a2+2) | K."""
    if icp.i != 2:
        raise ValueError("this coloring needs exactly two columns")
    a2, a1 = icp.spec.gaps
    n = a1 + a2 + 2
    if icp.K % n != 0:
        raise ValueError(f"user count {icp.K} is not a multiple of {n}")
    assignment: dict[Node, int] = {}
    for k in range(1, icp.K + 1):
        assignment[(k, 1)] = wrap(k, n)
        assignment[(k, 2)] = wrap(k + a2 + 1, n)
    return Coloring(assignment=assignment, num_colors=n)


def verify_proper(graph: SuicpGraph, coloring: Coloring) -> list[tuple[Node, Node]]:
    """Return every ordered pair (u, v) where v interferes with u yet shares u's color.

    An empty list means the coloring is proper.  Within one color class two
    nodes are compatible exactly when each is side information for the other,
    so only same-color pairs need checking.
    """
    nodes = graph.nodes
    missing = [nd for nd in nodes if nd not in coloring.assignment]
    if missing:
        raise ValueError(f"coloring leaves nodes uncovered: {missing[:5]}")
    violations: list[tuple[Node, Node]] = []
    for _, members in sorted(coloring.color_classes().items()):
        for u in members:
            side = graph.side_info(u)
            for v in members:
                if v != u and v not in side:
                    violations.append((u, v))
    return sorted(violations)


def is_proper(graph: SuicpGraph, coloring: Coloring) -> bool:
    return not verify_proper(graph, coloring)


def local_chromatic_value(graph: SuicpGraph, coloring: Coloring) -> int:
    """Max number of distinct colors in any node's closed anti-outneighborhood.

    All nodes of a user share the same closed anti-outneighborhood (the
    complement of the user's side information), so the scan is per user.
    """
    if verify_proper(graph, coloring):
        raise ValueError("coloring is not proper")
    best = 0
    for k in range(1, graph.K + 1):
        colors = {
            coloring.assignment[nd] for nd in graph.user_interferers[k - 1]
        }
        best = max(best, len(colors))
    return best


def upper_bound_Ru(spec: GapVector) -> int:
    """Rate bound min{2(K-(i-1)L)+i-2-a_i, K}; needs the leading gap maximal."""
    require_leading_max(spec)
    K, i, L = spec.K, spec.i, spec.L
    return min(2 * (K - (i - 1) * L) + i - 2 - spec.gaps[0], K)


__all__ = [
    "Coloring",
    "theorem1_coloring",
    "theorem5_coloring",
    "verify_proper",
    "is_proper",
    "local_chromatic_value",
    "upper_bound_Ru",
]
