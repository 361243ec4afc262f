"""Cyclic-gap index coding instances and their side-information structure.

An instance is described by a gap pattern (a_i, ..., a_1) and a chunk length
L: arranging the K files on a circle, each user's side information consists
of i-1 chunks of L consecutive files, separated by the gaps.  Taking the
union of such a problem with its i-1 clockwise rotations yields a unicast
problem where every user wants i files; that union is what the coloring and
bound engines operate on, after conversion to a single-unicast graph over
(user, column) virtual nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

Node = tuple[int, int]  # (user, column), both 1-based


def wrap(m: int, n: int) -> int:
    """Cyclic 1-based index: result is in [1, n], with multiples of n mapping to n."""
    r = m % n
    return n if r == 0 else r


def rotate_gaps(gaps: tuple[int, ...], t: int) -> tuple[int, ...]:
    """Rotate the gap tuple clockwise t times (last entry moves to the front)."""
    n = len(gaps)
    t %= n
    return gaps[n - t:] + gaps[:n - t]


def canonical_rotation(gaps: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Return the lexicographically greatest rotation and the shift applied.

    The shift s is the smallest value such that rotating the result clockwise
    s times recovers the input, so the maximum entry always leads the result.
    """
    if not gaps:
        raise ValueError("gaps must be non-empty")
    n = len(gaps)
    best, best_shift = gaps, 0
    for s in range(1, n):
        candidate = gaps[s:] + gaps[:s]  # input rotated counter-clockwise s times
        if candidate > best:
            best, best_shift = candidate, s
    return best, best_shift


def minimal_period(seq: tuple[int, ...]) -> int:
    """Smallest p such that rotating seq by p leaves it unchanged (p divides len)."""
    n = len(seq)
    for p in range(1, n + 1):
        if n % p == 0 and seq == rotate_gaps(seq, p):
            return p
    return n


@dataclass(frozen=True)
class GapVector:
    """Gap pattern (a_i, ..., a_1) plus chunk length L defining an instance family.

    The user count K = (i-1)*L + sum(gaps) + 1 is fully determined; gaps[0]
    corresponds to a_i and gaps[-1] to a_1.
    """

    gaps: tuple[int, ...]
    L: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "gaps", tuple(int(g) for g in self.gaps))
        if not self.gaps:
            raise ValueError("gaps must be non-empty")
        if any(g < 0 for g in self.gaps):
            raise ValueError("gaps must be non-negative")
        if self.L < 1:
            raise ValueError("chunk length L must be >= 1")

    @property
    def i(self) -> int:
        return len(self.gaps)

    @property
    def K(self) -> int:
        return (self.i - 1) * self.L + sum(self.gaps) + 1

    def gap(self, j: int) -> int:
        """a_j with 1-based paper indexing: gap(i) is the leading entry."""
        return self.gaps[self.i - j]

    @property
    def is_leading_max(self) -> bool:
        return self.gaps[0] == max(self.gaps)

    def rotated(self, t: int) -> "GapVector":
        return GapVector(rotate_gaps(self.gaps, t), self.L)

    def canonicalize(self) -> tuple["GapVector", int]:
        canonical, shift = canonical_rotation(self.gaps)
        return GapVector(canonical, self.L), shift


def require_leading_max(spec: GapVector) -> None:
    if not spec.is_leading_max:
        raise ValueError(
            f"gap vector {spec.gaps} is not canonical: the leading gap must be maximal"
        )


def single_known_files(gaps: tuple[int, ...], L: int, K: int, user: int) -> frozenset[int]:
    """Files known by `user` in the single-column instance with the given gaps."""
    i = len(gaps)
    known = set()
    offset = 0
    for v in range(1, i):
        offset += gaps[v - 1]
        base = user + offset + (v - 1) * L
        known.update(wrap(base + r, K) for r in range(1, L + 1))
    return frozenset(known)


@dataclass(frozen=True)
class SingleIcp:
    """Single-column instance: user k wants file k and knows (i-1)*L files."""

    spec: GapVector
    known: tuple[frozenset[int], ...]  # indexed by user-1

    @property
    def K(self) -> int:
        return self.spec.K

    def known_set(self, user: int) -> frozenset[int]:
        return self.known[user - 1]

    def want(self, user: int) -> int:
        return user


def build_structured_icp(spec: GapVector) -> SingleIcp:
    """Construct the single-column instance for a gap vector."""
    K = spec.K
    known = tuple(
        single_known_files(spec.gaps, spec.L, K, k) for k in range(1, K + 1)
    )
    return SingleIcp(spec=spec, known=known)


def _column_known_sets(
    columns: tuple[tuple[int, ...], ...], L: int, K: int
) -> tuple[frozenset[Node], ...]:
    """Per-user union of the columns' single-instance side information."""
    per_user = []
    for k in range(1, K + 1):
        acc: set[Node] = set()
        for t, col_gaps in enumerate(columns, start=1):
            acc.update((b, t) for b in single_known_files(col_gaps, L, K, k))
        per_user.append(frozenset(acc))
    return tuple(per_user)


@dataclass(frozen=True)
class UnionIcp:
    """Union of a gap instance with its i-1 clockwise rotations.

    User k wants the i files (k, 1), ..., (k, i); column p carries the
    (p-1)-th clockwise rotation of the defining gaps.
    """

    spec: GapVector
    columns: tuple[tuple[int, ...], ...]
    known: tuple[frozenset[Node], ...]  # indexed by user-1

    @property
    def K(self) -> int:
        return self.spec.K

    @property
    def i(self) -> int:
        return self.spec.i

    def want_set(self, user: int) -> frozenset[Node]:
        return frozenset((user, t) for t in range(1, self.i + 1))

    def known_set(self, user: int) -> frozenset[Node]:
        return self.known[user - 1]

    def to_json(self) -> dict:
        return {
            "gaps": list(self.spec.gaps),
            "L": self.spec.L,
            "K": self.K,
            "i": self.i,
            "known": [sorted([u, c] for (u, c) in ks) for ks in self.known],
        }


def build_union_icp(spec: GapVector) -> UnionIcp:
    """Construct the union instance: one column per clockwise rotation."""
    columns = tuple(rotate_gaps(spec.gaps, p) for p in range(spec.i))
    known = _column_known_sets(columns, spec.L, spec.K)
    return UnionIcp(spec=spec, columns=columns, known=known)


@dataclass(frozen=True)
class TildeIcp:
    """Union of only the distinct rotation columns of a repeated pattern s * l.

    With s of length m repeated l times, the full rotation union would repeat
    each distinct column l times; this variant keeps one copy of each, so a
    unit file here corresponds to l equal parts of the union instance's files.
    """

    base: tuple[int, ...]
    repeat: int
    L: int
    columns: tuple[tuple[int, ...], ...]
    known: tuple[frozenset[Node], ...]

    @property
    def m(self) -> int:
        return len(self.base)

    @property
    def i(self) -> int:
        return self.repeat * self.m

    @property
    def K(self) -> int:
        return self.repeat * sum(self.base) + (self.i - 1) * self.L + 1

    def known_set(self, user: int) -> frozenset[Node]:
        return self.known[user - 1]

    def bar_equivalent(self) -> UnionIcp:
        """The union instance obtained after splitting each file into l parts."""
        return build_union_icp(GapVector(self.base * self.repeat, self.L))


def build_tilde_icp(s: tuple[int, ...], l: int, L: int) -> TildeIcp:
    """Construct the distinct-rotation union of the pattern s repeated l times."""
    s = tuple(int(x) for x in s)
    if not s:
        raise ValueError("base pattern must be non-empty")
    if any(x < 0 for x in s):
        raise ValueError("pattern entries must be non-negative")
    if l < 1:
        raise ValueError("repeat count must be >= 1")
    full = s * l
    spec = GapVector(full, L)  # validates L and fixes K via the gap identity
    period = minimal_period(full)
    columns = tuple(rotate_gaps(full, t) for t in range(period))
    known = _column_known_sets(columns, L, spec.K)
    return TildeIcp(base=s, repeat=l, L=L, columns=columns, known=known)


@dataclass(frozen=True)
class SuicpGraph:
    """Single-unicast side-information graph over (user, column) virtual nodes.

    There is an edge u -> v exactly when v's requested file is side
    information for u; all nodes of one user share the same side-information
    set.  Interferer sets (the complement) are precomputed per user.
    """

    K: int
    num_columns: int
    user_side: tuple[frozenset[Node], ...]
    user_interferers: tuple[frozenset[Node], ...]

    @property
    def nodes(self) -> tuple[Node, ...]:
        return tuple(
            (k, t)
            for k in range(1, self.K + 1)
            for t in range(1, self.num_columns + 1)
        )

    def __len__(self) -> int:
        return self.K * self.num_columns

    def side_info(self, node: Node) -> frozenset[Node]:
        return self.user_side[node[0] - 1]

    def interferers(self, node: Node) -> frozenset[Node]:
        """All nodes that are neither side information for node's user nor node itself."""
        others = self.user_interferers[node[0] - 1]
        return others - {node}

    def closed_anti_outneighborhood(self, node: Node) -> frozenset[Node]:
        return self.user_interferers[node[0] - 1]


def _graph_from_known(K: int, num_columns: int,
                      known: tuple[frozenset[Node], ...]) -> SuicpGraph:
    all_nodes = frozenset(
        (k, t) for k in range(1, K + 1) for t in range(1, num_columns + 1)
    )
    interferers = tuple(all_nodes - ks for ks in known)
    return SuicpGraph(K=K, num_columns=num_columns,
                      user_side=known, user_interferers=interferers)


def to_suicp(icp: UnionIcp | TildeIcp) -> SuicpGraph:
    """Convert a union-style instance to its virtual single-unicast graph."""
    num_columns = len(icp.columns)
    return _graph_from_known(icp.K, num_columns, icp.known)


def eq2_known_set(spec: GapVector, user: int) -> frozenset[Node]:
    """Side information of `user` computed directly from the union definition.

    Kept as an independent route to the rotation-based construction; the two
    must agree on every instance.
    """
    i, L, K = spec.i, spec.L, spec.K
    out: set[Node] = set()
    for t in range(1, i + 1):
        for v in range(1, i):
            s = sum(spec.gap(wrap(i + t - j, i)) for j in range(1, v + 1))
            for r in range(1, L + 1):
                out.add((wrap(user + s + (v - 1) * L + r, K), t))
    return frozenset(out)


__all__ = [
    "Node",
    "GapVector",
    "SingleIcp",
    "UnionIcp",
    "TildeIcp",
    "SuicpGraph",
    "wrap",
    "rotate_gaps",
    "canonical_rotation",
    "minimal_period",
    "single_known_files",
    "build_structured_icp",
    "build_union_icp",
    "build_tilde_icp",
    "to_suicp",
    "eq2_known_set",
    "require_leading_max",
]
