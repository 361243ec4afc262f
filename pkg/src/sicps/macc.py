"""Multi-access caching: placement, delivery decomposition, and exact rates.

K users each read L consecutive caches (cyclic).  At memory w*N/K every file
is split across the w-subsets of [K] whose elements are pairwise at circular
distance >= L; what a user misses then organizes into a table whose columns
are gap instances indexed by the weak (w+1)-compositions of K-wL-1.  Columns
sharing a rotation orbit are served together by one union-instance broadcast,
which is where the coloring engine's rate bound enters.  All rates are exact
rationals.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .coloring import theorem1_coloring, upper_bound_Ru
from .icp import GapVector, minimal_period, rotate_gaps, to_suicp, build_union_icp, wrap
from .scheme import build_mds_scheme, simulate_decode

RATE_SOURCES = ("NEW", "HKD", "RK", "CLOSED_FORM", "EXTREME", "MEMORY_SHARED")


@dataclass(frozen=True)
class CcdnConfig:
    """(N files, K caches/users, access degree L) with cyclic cache access."""

    N: int
    K: int
    L: int

    def __post_init__(self) -> None:
        if self.N < 1 or self.K < 1:
            raise ValueError("N and K must be positive")
        if not 1 <= self.L <= self.K:
            raise ValueError(f"access degree must satisfy 1 <= L <= K, got {self.L}")

    def max_w(self) -> int:
        return self.K // self.L


def _check_w(K: int, L: int, w: int) -> None:
    if not 1 <= w <= K // L:
        raise ValueError(f"memory multiplier w={w} outside [1, {K // L}]")


def iter_placement_sets(K: int, L: int, w: int):
    """Yield the w-subsets of [K] with pairwise circular separation >= L, in lex order.

    Pairwise separation is equivalent to every cyclically consecutive gap
    being >= L, which the recursion enforces directly.
    """
    _check_w(K, L, w)
    if L == 1:
        yield from itertools.combinations(range(1, K + 1), w)
        return
    if w == 1:
        for a in range(1, K + 1):
            yield (a,)
        return

    def extend(chosen: list[int], last: int):
        remaining = w - len(chosen)
        if remaining == 0:
            yield tuple(chosen)
            return
        # Wrap-around leaves room: the last element may not exceed first+K-L.
        upper = min(K, chosen[0] + K - L - (remaining - 1) * L)
        for nxt in range(last + L, upper + 1):
            chosen.append(nxt)
            yield from extend(chosen, nxt)
            chosen.pop()

    for a1 in range(1, K + 1):
        yield from extend([a1], a1)


def enumerate_placement_sets(K: int, L: int, w: int) -> list[tuple[int, ...]]:
    return list(iter_placement_sets(K, L, w))


def placement_set_count(K: int, L: int, w: int) -> int:
    """Closed form (K/w) * C(K-wL+w-1, w-1) for the family size."""
    _check_w(K, L, w)
    num = K * math.comb(K - w * L + w - 1, w - 1)
    assert num % w == 0
    return num // w


@dataclass(frozen=True)
class PlacementPlan:
    """One subfile of every file per placement set, each of size 1/|sets|."""

    cfg: CcdnConfig
    w: int
    sets: tuple[tuple[int, ...], ...]

    @property
    def subfile_size(self) -> Fraction:
        return Fraction(1, len(self.sets))

    def user_caches(self, user: int) -> tuple[int, ...]:
        K = self.cfg.K
        return tuple(wrap(user + j, K) for j in range(self.cfg.L))

    def available_to_user(self, cache_set: tuple[int, ...], user: int) -> bool:
        window = set(self.user_caches(user))
        return any(c in window for c in cache_set)

    def missing_sets(self, user: int) -> list[tuple[int, ...]]:
        return [s for s in self.sets if not self.available_to_user(s, user)]

    def subfiles_per_cache(self) -> int:
        K, L, w = self.cfg.K, self.cfg.L, self.w
        return math.comb(K - w * L + w - 1, w - 1)

    def per_cache_load(self) -> Fraction:
        """Memory used per cache, in file units: exactly w*N/K."""
        return self.cfg.N * self.subfiles_per_cache() * self.subfile_size


def placement_map(cfg: CcdnConfig, w: int) -> PlacementPlan:
    sets = tuple(iter_placement_sets(cfg.K, cfg.L, w))
    assert len(sets) == placement_set_count(cfg.K, cfg.L, w)
    plan = PlacementPlan(cfg=cfg, w=w, sets=sets)
    assert plan.per_cache_load() == Fraction(w * cfg.N, cfg.K)
    return plan


def iter_weak_compositions(n: int, m: int):
    """All m-tuples of non-negative integers summing to n, lexicographic."""
    if n < 0 or m < 1:
        raise ValueError("need n >= 0 and m >= 1")
    if m == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in iter_weak_compositions(n - first, m - 1):
            yield (first,) + rest


def weak_compositions(n: int, m: int) -> list[tuple[int, ...]]:
    return list(iter_weak_compositions(n, m))


def composition_count_max_below(n: int, m: int, t: int) -> int:
    """Number of weak m-compositions of n with every part strictly below t."""
    if n < 0 or m < 1 or t < 1:
        raise ValueError("need n >= 0, m >= 1, t >= 1")
    total = 0
    for s in range(n // t + 1):
        r = n - t * s
        total += (-1) ** s * math.comb(m, s) * math.comb(m + r - 1, r)
    return total


def composition_count_max_eq(n: int, m: int, t: int) -> int:
    """Number of weak m-compositions of n whose maximum part equals t."""
    if t == 0:
        return 1 if n == 0 else 0
    return composition_count_max_below(n, m, t + 1) - composition_count_max_below(n, m, t)


@dataclass(frozen=True)
class RotationClass:
    """Orbit of a composition under rotation: representative = base pattern x multiplicity."""

    representative: tuple[int, ...]
    base: tuple[int, ...]
    multiplicity: int
    members: tuple[tuple[int, ...], ...]


def group_rotation_classes(compositions) -> list[RotationClass]:
    """Partition a complete composition family into rotation orbits.

    Each orbit is keyed by its lexicographically greatest rotation (so the
    maximum part leads); members are listed in clockwise-rotation order from
    the representative.
    """
    comps = [tuple(c) for c in compositions]
    if not comps:
        return []
    m = len(comps[0])
    n = sum(comps[0])
    if any(len(c) != m or sum(c) != n for c in comps):
        raise ValueError("compositions disagree on length or total")
    if len(set(comps)) != math.comb(n + m - 1, m - 1):
        raise ValueError(f"expected the complete family of {m}-compositions of {n}")

    grouped: dict[tuple[int, ...], None] = {}
    for c in comps:
        rep = max(rotate_gaps(c, t) for t in range(m))
        grouped[rep] = None
    classes = []
    for rep in sorted(grouped, reverse=True):
        period = minimal_period(rep)
        members = tuple(rotate_gaps(rep, t) for t in range(period))
        classes.append(
            RotationClass(
                representative=rep,
                base=rep[:period],
                multiplicity=m // period,
                members=members,
            )
        )
    assert sum(len(c.members) for c in classes) == len(set(comps))
    return classes


def rate_new(K: int, L: int, w: int) -> Fraction:
    """Delivery rate at memory w*N/K from the per-column union-instance bounds."""
    _check_w(K, L, w)
    if w * L == K:
        return Fraction(0)
    n = K - w * L - 1
    m = w + 1
    cap = 2 * (K - w * L) + w - 1
    total = 0
    for t in range(n + 1):
        count = composition_count_max_eq(n, m, t)
        if count:
            total += count * min(cap - t, K)
    return Fraction(total, placement_set_count(K, L, w) * m)


def rate_hkd(K: int, L: int, w: int) -> Fraction:
    _check_w(K, L, w)
    return Fraction(K - w * L, 1 + w)


def rate_rk(N: int, K: int, L: int, M) -> Fraction:
    """K * (1 - L*M/N)^2 for memory M in [0, N/L]."""
    load = Fraction(L) * Fraction(M) / N
    if load < 0 or load > 1:
        raise ValueError("memory must satisfy 0 <= L*M/N <= 1")
    return K * (1 - load) ** 2


def rate_closed_form_large_L(K: int, L: int) -> Fraction:
    """Exact w=1 rate for L >= K/2 (rounded down), odd/even correction on K-L-1.

    Above this threshold every composition's maximum is large enough that the
    per-column bound never saturates at K, which is what the closed form sums.
    """
    if 2 * L < K - 1:
        raise ValueError("closed form needs access degree L >= K/2")
    if L > K:
        raise ValueError("access degree cannot exceed K")
    base = (K - L) * (5 * (K - L) + 2)
    if (K - L - 1) % 2 == 1:
        return Fraction(base, 8 * K)
    return Fraction(base + 1, 8 * K)


@dataclass(frozen=True)
class RatePoint:
    M: Fraction
    rate: Fraction
    source: str

    def __post_init__(self) -> None:
        if self.source not in RATE_SOURCES:
            raise ValueError(f"unknown rate source {self.source!r}")
        if self.rate < 0:
            raise ValueError("rates are non-negative")


def _corner_points(cfg: CcdnConfig) -> list[RatePoint]:
    K, L, N = cfg.K, cfg.L, cfg.N
    points = [RatePoint(Fraction(0), Fraction(K), "EXTREME")]
    for w in range(1, cfg.max_w() + 1):
        points.append(RatePoint(Fraction(w * N, K), rate_new(K, L, w), "NEW"))
    top = Fraction(math.ceil(Fraction(K, L)) * N, K)
    if all(p.M != top for p in points):
        points.append(RatePoint(top, Fraction(0), "EXTREME"))
    return points


def _lower_envelope(points: list[RatePoint]) -> list[RatePoint]:
    pts = sorted(points, key=lambda p: (p.M, p.rate))
    dedup: list[RatePoint] = []
    for p in pts:
        if dedup and dedup[-1].M == p.M:
            continue  # keep the lower-rate point at equal memory
        dedup.append(p)
    hull: list[RatePoint] = []
    for p in dedup:
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            # Drop b when it lies on or above the segment a->p.
            if (b.rate - a.rate) * (p.M - a.M) >= (p.rate - a.rate) * (b.M - a.M):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def interpolate_rate(envelope: list[RatePoint], M) -> Fraction:
    """Exact rate of the piecewise-linear envelope at memory M."""
    M = Fraction(M)
    if not envelope or M < envelope[0].M or M > envelope[-1].M:
        raise ValueError("memory outside the curve's range")
    for a, b in itertools.pairwise(envelope):
        if a.M <= M <= b.M:
            if M == a.M:
                return a.rate
            return a.rate + (b.rate - a.rate) * (M - a.M) / (b.M - a.M)
    return envelope[-1].rate


def tradeoff_curve(cfg: CcdnConfig, samples: int = 0) -> list[RatePoint]:
    """Memory/rate curve: envelope vertices plus evenly spaced shared points.

    Corner points strictly above the lower convex envelope are reachable only
    through memory sharing, so the curve reports the envelope value there.
    """
    corners = _corner_points(cfg)
    envelope = _lower_envelope(corners)
    vertices = {p.M: p for p in envelope}
    out: dict[Fraction, RatePoint] = dict(vertices)
    for p in corners:
        if p.M not in out:
            out[p.M] = RatePoint(p.M, interpolate_rate(envelope, p.M), "MEMORY_SHARED")
    if samples > 1:
        top = envelope[-1].M
        for j in range(samples):
            M = top * j / (samples - 1)
            if M not in out:
                out[M] = RatePoint(M, interpolate_rate(envelope, M), "MEMORY_SHARED")
    return [out[M] for M in sorted(out)]


def tradeoff_csv(points: list[RatePoint]) -> str:
    lines = ["M_exact,M_decimal,rate_exact,rate_decimal,source"]
    for p in points:
        lines.append(
            f"{p.M},{float(p.M):.6g},{p.rate},{float(p.rate):.6g},{p.source}"
        )
    return "\n".join(lines) + "\n"


Subfile = tuple[int, tuple[int, ...]]  # (file id, cache set)


@dataclass(frozen=True)
class DeliveryColumn:
    """One table column: a cyclic shift family of missing subfiles.

    The label is the gap pattern of the column's side information, read from
    user 1; the cells hold (file, cache set) subfile ids for users 1..K.
    """

    anchor: tuple[int, ...]
    label: tuple[int, ...]
    cells: tuple[Subfile, ...]


@dataclass(frozen=True)
class DeliveryTable:
    cfg: CcdnConfig
    w: int
    plan: PlacementPlan
    columns: tuple[DeliveryColumn, ...]


def _column_label(si_flags: list[bool], w: int, L: int) -> tuple[int, ...]:
    """Parse rows 2..K (side-information or not) into the (b_{w+1},...,b_1) gaps."""
    label: list[int] = []
    idx = 0
    while idx < len(si_flags):
        gap = 0
        while idx < len(si_flags) and not si_flags[idx]:
            gap += 1
            idx += 1
        label.append(gap)
        run = 0
        while idx < len(si_flags) and si_flags[idx]:
            run += 1
            idx += 1
        if run:
            if run % L:
                raise AssertionError("side-information run is not chunk-aligned")
            label.extend([0] * (run // L - 1))
    if len(label) == w:  # the scan ended inside a side-information run
        label.append(0)
    if len(label) != w + 1:
        raise AssertionError(f"column parsed into {len(label)} gaps, expected {w + 1}")
    return tuple(label)


def build_delivery_icp(cfg: CcdnConfig, w: int, demands: list[int]) -> DeliveryTable:
    """K x C(K-wL+w-1, w) table of missing subfiles, one labeled column per composition."""
    if len(demands) != cfg.K:
        raise ValueError(f"need exactly {cfg.K} demands, got {len(demands)}")
    if any(not 1 <= d <= cfg.N for d in demands):
        raise ValueError("demands must be file ids in [1, N]")
    plan = placement_map(cfg, w)
    K, L = cfg.K, cfg.L
    columns = []
    for anchor in plan.missing_sets(1):
        cells = []
        si_flags = []
        for row in range(1, K + 1):
            shifted = tuple(sorted(wrap(c + row - 1, K) for c in anchor))
            cells.append((demands[row - 1], shifted))
            if row >= 2:
                si_flags.append(plan.available_to_user(shifted, 1))
        label = _column_label(si_flags, w, L)
        assert sum(label) == K - w * L - 1
        columns.append(DeliveryColumn(anchor=anchor, label=label, cells=tuple(cells)))
    assert len(columns) == math.comb(K - w * L + w - 1, w)
    return DeliveryTable(cfg=cfg, w=w, plan=plan, columns=tuple(columns))


@dataclass(frozen=True)
class ClassReport:
    representative: tuple[int, ...]
    columns: int
    split: int
    chi: int
    field: int


@dataclass(frozen=True)
class SimulationReport:
    decoded_ok: bool
    total_rate: Fraction
    classes: tuple[ClassReport, ...]
    failures: tuple[dict, ...]

    def to_json(self) -> dict:
        return {
            "decoded_ok": self.decoded_ok,
            "total_rate": str(self.total_rate),
            "classes": [
                {
                    "representative": list(c.representative),
                    "columns": c.columns,
                    "split": c.split,
                    "chi": c.chi,
                    "field": c.field,
                }
                for c in self.classes
            ],
            "failures": list(self.failures),
        }


def end_to_end_simulate(
    cfg: CcdnConfig,
    w: int,
    demands: list[int],
    field_order: int | None = None,
    seed: int = 0,
) -> SimulationReport:
    """Place, build the delivery table, broadcast per rotation class, decode all users.

    Periodic class representatives are handled by splitting each affected
    subfile into `multiplicity` equal parts, turning the class's columns into
    a full union instance.  The transmitted size is sum(chi / (split * |sets|))
    over classes, in file units.
    """
    table = build_delivery_icp(cfg, w, demands)
    num_subfiles = len(table.plan.sets)
    if not table.columns:
        return SimulationReport(True, Fraction(0), (), ())

    classes = group_rotation_classes([col.label for col in table.columns])
    column_by_label = {col.label: col for col in table.columns}
    rng = random.Random(f"{seed}")

    total = Fraction(0)
    reports = []
    failures: list[dict] = []
    for cls in classes:
        period = len(cls.base)
        bar_spec = GapVector(cls.representative, cfg.L)
        bar = build_union_icp(bar_spec)
        graph = to_suicp(bar)
        # Budget exactly the rows the closed-form rate accounts for; the
        # coloring occasionally needs fewer, never more.
        scheme = build_mds_scheme(
            graph, theorem1_coloring(bar), field_order, rows=upper_bound_Ru(bar_spec)
        )
        q = scheme.field_order

        # Bar node (k, p) carries part (p-1)//period of the subfile in row k of
        # the class column whose label is the (p-1)-th rotation of the rep.
        symbols: dict[tuple[Subfile, int], int] = {}
        messages = {}
        placement_of = {}
        for p in range(1, bar.i + 1):
            column = column_by_label[cls.members[(p - 1) % period]]
            part = (p - 1) // period
            for k in range(1, cfg.K + 1):
                key = (column.cells[k - 1], part)
                if key not in symbols:
                    symbols[key] = rng.randrange(q)
                messages[(k, p)] = symbols[key]
                placement_of[(k, p)] = key
        decoded = simulate_decode(scheme, graph, messages)
        for node in graph.nodes:
            if decoded[node] != messages[node]:
                subfile, part = placement_of[node]
                failures.append(
                    {
                        "representative": list(cls.representative),
                        "user": node[0],
                        "file": subfile[0],
                        "cache_set": list(subfile[1]),
                        "part": part + 1,
                        "expected": messages[node],
                        "decoded": decoded[node],
                    }
                )
        total += Fraction(scheme.chi, cls.multiplicity * num_subfiles)
        reports.append(
            ClassReport(
                representative=cls.representative,
                columns=period,
                split=cls.multiplicity,
                chi=scheme.chi,
                field=q,
            )
        )
    return SimulationReport(
        decoded_ok=not failures,
        total_rate=total,
        classes=tuple(reports),
        failures=tuple(failures),
    )


__all__ = [
    "CcdnConfig",
    "PlacementPlan",
    "RotationClass",
    "RatePoint",
    "DeliveryColumn",
    "DeliveryTable",
    "ClassReport",
    "SimulationReport",
    "iter_placement_sets",
    "enumerate_placement_sets",
    "placement_set_count",
    "placement_map",
    "iter_weak_compositions",
    "weak_compositions",
    "composition_count_max_below",
    "composition_count_max_eq",
    "group_rotation_classes",
    "rate_new",
    "rate_hkd",
    "rate_rk",
    "rate_closed_form_large_L",
    "interpolate_rate",
    "tradeoff_curve",
    "tradeoff_csv",
    "build_delivery_icp",
    "end_to_end_simulate",
]
