"""MDS-coded broadcast realization of a proper coloring, with decode simulation.

The server sums the messages inside each color class and transmits chi MDS
combinations of the n per-color aggregates, where chi is the coloring's local
chromatic value.  A node subtracts everything it already knows and is left
with at most chi unknown aggregates, which an invertible Vandermonde
submatrix recovers; properness guarantees the node's own aggregate then
contains nothing but its own message.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coloring import Coloring, local_chromatic_value
from .field import default_field_order, solve_mod, validate_field, vandermonde_rows
from .icp import Node, SuicpGraph


@dataclass(frozen=True)
class TransmissionScheme:
    """chi x n generator over GF(field_order) applied to per-color message sums."""

    coloring: Coloring
    chi: int
    field_order: int
    generator: tuple[tuple[int, ...], ...]

    @property
    def num_colors(self) -> int:
        return self.coloring.num_colors

    def color_members(self) -> dict[int, list[Node]]:
        return self.coloring.color_classes()

    def transmit(self, messages: dict[Node, int]) -> list[int]:
        """The chi broadcast symbols for one symbol of payload per node."""
        q = self.field_order
        aggregates = self._aggregates(messages)
        return [
            sum(row[c] * aggregates[c] for c in range(self.num_colors)) % q
            for row in self.generator
        ]

    def _aggregates(self, messages: dict[Node, int]) -> list[int]:
        q = self.field_order
        sums = [0] * self.num_colors
        for node, value in messages.items():
            sums[self.coloring.color(node) - 1] = (
                sums[self.coloring.color(node) - 1] + value
            ) % q
        return sums


def build_mds_scheme(
    graph: SuicpGraph,
    coloring: Coloring,
    field_order: int | None = None,
    rows: int | None = None,
) -> TransmissionScheme:
    """Vandermonde generator on points 1..n, truncated to chi rows.

    chi defaults to the coloring's local chromatic value, the fewest symbols
    that still decode.  Callers may budget more rows (up to n), e.g. to
    transmit exactly the count a closed-form rate accounts for.
    """
    n = coloring.num_colors
    if field_order is None:
        field_order = default_field_order(n)
    validate_field(field_order, n)
    chi = local_chromatic_value(graph, coloring)
    if rows is not None:
        if not chi <= rows <= n:
            raise ValueError(f"row budget {rows} outside [{chi}, {n}]")
        chi = rows
    points = [c % field_order for c in range(1, n + 1)]
    generator = vandermonde_rows(points, chi, field_order)
    return TransmissionScheme(
        coloring=coloring, chi=chi, field_order=field_order, generator=generator
    )


def decode_node(
    scheme: TransmissionScheme,
    graph: SuicpGraph,
    node: Node,
    messages: dict[Node, int],
    broadcast: list[int],
) -> int:
    """Recover node's own message from the broadcast and its side information."""
    q = scheme.field_order
    n = scheme.num_colors
    coloring = scheme.coloring
    side = graph.side_info(node)

    # Aggregate contributions the node can compute itself.
    known_part = [0] * n
    for other in side:
        known_part[coloring.color(other) - 1] = (
            known_part[coloring.color(other) - 1] + messages[other]
        ) % q
    residual = [
        (broadcast[r] - sum(row[c] * known_part[c] for c in range(n))) % q
        for r, row in enumerate(scheme.generator)
    ]

    # Colors whose aggregates remain unknown: those of the node itself and its
    # interferers.  Pad with the smallest other colors to reach chi columns.
    unknown = {coloring.color(nd) for nd in graph.closed_anti_outneighborhood(node)}
    if len(unknown) > scheme.chi:
        raise ValueError("more unknown colors than transmitted symbols")
    selected = sorted(unknown)
    for c in range(1, n + 1):
        if len(selected) == scheme.chi:
            break
        if c not in unknown:
            selected.append(c)
    selected.sort()

    submatrix = [[row[c - 1] for c in selected] for row in scheme.generator]
    solved = solve_mod(submatrix, residual, q)
    return solved[selected.index(coloring.color(node))]


def simulate_decode(
    scheme: TransmissionScheme, graph: SuicpGraph, messages: dict[Node, int]
) -> dict[Node, int]:
    """Decode every node; the result must reproduce `messages` exactly."""
    if set(messages) != set(graph.nodes):
        raise ValueError("messages must assign exactly one symbol per node")
    broadcast = scheme.transmit(messages)
    return {
        node: decode_node(scheme, graph, node, messages, broadcast)
        for node in graph.nodes
    }


def scheme_to_json(scheme: TransmissionScheme) -> dict:
    return {
        "colors": scheme.num_colors,
        "chi": scheme.chi,
        "field": scheme.field_order,
        "assignment": [
            [u, t, c] for (u, t), c in sorted(scheme.coloring.assignment.items())
        ],
    }


__all__ = [
    "TransmissionScheme",
    "build_mds_scheme",
    "decode_node",
    "simulate_decode",
    "scheme_to_json",
]
