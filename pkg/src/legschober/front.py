"""Legendrian fronts on the cylinder S^1 x R.

A front built from a formal type has one strand per sheet: strand ``(k, j)``
is the graph of ``theta -> Re f_k^{(j)}(eps e^{i theta})`` where ``f_k^{(j)}``
is the ``j``-th deck conjugate of orbit ``k``.  Crossing angles come in closed
form from the leading term of each pairwise difference; heights are compared
numerically only at sector midpoints.

Angles are measured in turns from the seam.  Sector ``k`` lies between
crossing ``k-1`` and crossing ``k``; there are ``len(crossings) + 1``
sectors, and the last one continues into sector 0 across the seam, where
strand ``s`` becomes ``continuation[s]``.  All fronts are co-oriented
downward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactla import I
from .puiseux import (
    Angle,
    Coefficient,
    FormalType,
    PuiseuxClass,
    evaluate_re,
    ramification,
)

TIE_TOLERANCE = 1e-9


class DegenerateFront(ValueError):
    """Crossings coincide, strands tie, or epsilon is too large for the leading-term picture."""


class EqualClasses(ValueError):
    """Two classes of a formal type normalize to the same class."""


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _pieces_arg(pieces: Sequence[Coefficient]) -> Angle:
    """Argument of a sum of rotated coefficients, exact whenever a closed form exists."""
    if len(pieces) == 1:
        return pieces[0].arg()
    if len(pieces) == 2:
        # a e^{2pi i r1} + a e^{2pi i r2} = a e^{pi i (r1+r2)} * 2cos(pi (r1-r2))
        c1, c2 = pieces
        for q in range(4):
            if c2.base == c1.base * (1, I, -1, -I)[q]:
                r1, r2 = c1.turns, c2.turns + Fraction(q, 4)
                x = (r1 - r2) % 2
                if x in (Fraction(1, 2), Fraction(3, 2)):
                    break
                half = (r1 + r2) / 2
                if Fraction(1, 2) < x < Fraction(3, 2):
                    half += Fraction(1, 2)
                return Coefficient.make(c1.base, half).arg()
    total = sum((complex(c) for c in pieces), 0j)
    return Angle(Fraction(0), math.atan2(total.imag, total.real))


def _leading_difference(f: PuiseuxClass, g: PuiseuxClass) -> tuple[Fraction, Angle]:
    diff = f - g
    if not diff:
        raise EqualClasses(f"classes {f.render()} and {g.render()} coincide")
    e, pieces = diff[0]
    total = sum((complex(c) for c in pieces), 0j)
    if abs(total) < 1e-15:
        raise DegenerateFront(f"leading coefficients of {f.render()} and {g.render()} cancel")
    return e, _pieces_arg(pieces)


def _zeros_of_cos(arg: Angle, kappa: Fraction, period_turns: int) -> list[Angle]:
    """Solutions ``theta`` in ``[0, period)`` turns of ``cos(arg - kappa*theta) = 0``.

    ``theta = (arg - pi/2 + m*pi) / kappa``.
    """
    t0 = arg.turns - Fraction(1, 4)
    if arg.exact:
        lo = _ceil(-2 * t0)
        hi = _ceil(2 * kappa * period_turns - 2 * t0)
    else:
        shift = arg.offset / math.pi
        lo = math.ceil(-(2 * float(t0) + shift) - 1e-12)
        hi = math.ceil(2 * float(kappa) * period_turns - 2 * float(t0) - shift - 1e-12)
    return [Angle((t0 + Fraction(m, 2)) / kappa, arg.offset / float(kappa))
            for m in range(lo, hi)]


def stokes_directions(f: PuiseuxClass, g: PuiseuxClass) -> list[Angle]:
    """Stokes directions of the pair on the common ``l``-fold cover.

    With ``c z^(-k/l)`` the leading term of ``f - g``, these are the ``2k``
    angles in ``[0, l)`` turns where ``Re(c e^{-i k theta / l}) = 0``.
    """
    l = math.lcm(ramification(f), ramification(g))
    e, arg = _leading_difference(f, g)
    return sorted(_zeros_of_cos(arg, -e, l), key=lambda a: a.radians)


@dataclass(frozen=True)
class Crossing:
    angle: Angle
    slot: int
    lower: int  # strand at position ``slot`` just west of the crossing
    upper: int  # strand at position ``slot + 1`` just west of the crossing

    def to_json(self) -> dict:
        d = self.angle.to_json()
        d["slot"] = self.slot
        d["strands"] = [self.lower, self.upper]
        return d


@dataclass(frozen=True)
class FrontDiagram:
    strands: int
    crossings: tuple
    sector_orders: tuple
    components: tuple
    continuation: tuple
    strand_class: tuple
    seam_turns: Fraction = Fraction(0)
    zero_strand: int | None = None
    formal_type: FormalType | None = None
    epsilon: Fraction | None = None

    def __post_init__(self):
        check_front(self)

    @property
    def sectors(self) -> int:
        return len(self.crossings) + 1

    def component_of(self, strand: int) -> int:
        return next(i for i, c in enumerate(self.components) if strand in c)

    def to_json(self) -> dict:
        return {
            "strands": self.strands,
            "crossings": [c.to_json() for c in self.crossings],
            "sector_orders": [list(o) for o in self.sector_orders],
            "components": [list(c) for c in self.components],
            "continuation": list(self.continuation),
            "strand_class": [list(c) for c in self.strand_class],
            "seam_turns": str(self.seam_turns),
            "zero_strand": self.zero_strand,
            "epsilon": None if self.epsilon is None else str(self.epsilon),
            "formal_type": None if self.formal_type is None else self.formal_type.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> FrontDiagram:
        try:
            crossings = tuple(
                Crossing(Angle(Fraction(c["angle_turns"]), float(c.get("angle_offset_rad", 0.0))),
                         int(c["slot"]), int(c["strands"][0]), int(c["strands"][1]))
                for c in data["crossings"])
            orders = tuple(tuple(int(s) for s in o) for o in data["sector_orders"])
            n = int(data["strands"])
            cont = data.get("continuation")
            if cont is None:
                # positions are continuous across the seam
                cont = [0] * n
                for p, s in enumerate(orders[-1]):
                    cont[s] = orders[0][p]
            ft = data.get("formal_type")
            eps = data.get("epsilon")
            return cls(
                strands=n,
                crossings=crossings,
                sector_orders=orders,
                components=tuple(tuple(int(s) for s in c) for c in data["components"]),
                continuation=tuple(int(s) for s in cont),
                strand_class=tuple(tuple(c) for c in data.get(
                    "strand_class", [[s, 0] for s in range(n)])),
                seam_turns=Fraction(data.get("seam_turns", "0")),
                zero_strand=data.get("zero_strand"),
                formal_type=None if ft is None else FormalType.from_json(ft),
                epsilon=None if eps is None else Fraction(eps),
            )
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"malformed front JSON: {exc}") from None


def check_front(d: FrontDiagram) -> None:
    """Replay every crossing and the seam; raise if the combinatorics are inconsistent."""
    n = d.strands
    if len(d.sector_orders) != d.sectors:
        raise ValueError(f"{d.sectors} sectors expected, got {len(d.sector_orders)} orders")
    for order in d.sector_orders:
        if sorted(order) != list(range(n)):
            raise ValueError(f"sector order {order} is not a permutation of the strands")
    values = [c.angle.radians for c in d.crossings]
    for a, b in zip(values, values[1:]):
        if b - a < TIE_TOLERANCE:
            raise DegenerateFront("crossing angles must be distinct and increasing")
    for k, c in enumerate(d.crossings):
        if not 0 <= c.slot < n - 1:
            raise ValueError(f"crossing {k} has slot {c.slot} outside 0..{n - 2}")
        west = list(d.sector_orders[k])
        if west[c.slot:c.slot + 2] != [c.lower, c.upper]:
            raise DegenerateFront(
                f"crossing {k}: strands {c.lower},{c.upper} are not adjacent at slot {c.slot}")
        west[c.slot], west[c.slot + 1] = west[c.slot + 1], west[c.slot]
        if tuple(west) != d.sector_orders[k + 1]:
            raise DegenerateFront(f"sector {k + 1} does not follow from sector {k} by the swap")
    if sorted(d.continuation) != list(range(n)):
        raise ValueError("continuation is not a permutation")
    if tuple(d.continuation[s] for s in d.sector_orders[-1]) != d.sector_orders[0]:
        raise DegenerateFront("going around the circle does not return to the initial order")
    if sorted(s for c in d.components for s in c) != list(range(n)):
        raise ValueError("components do not partition the strands")
    if tuple(sorted(map(tuple, map(sorted, d.components)))) != _cycles(d.continuation):
        raise ValueError("components are not the orbits of the continuation map")


def _cycles(perm: Sequence[int]) -> tuple:
    seen: set[int] = set()
    out = []
    for s in range(len(perm)):
        if s in seen:
            continue
        cyc = []
        while s not in seen:
            seen.add(s)
            cyc.append(s)
            s = perm[s]
        out.append(tuple(sorted(cyc)))
    return tuple(sorted(out))


def _sheet_crossings(f: PuiseuxClass, g: PuiseuxClass) -> list[Angle]:
    e, arg = _leading_difference(f, g)
    return _zeros_of_cos(arg, -e, 1)


def _heights(sheets, eps: float, theta: float) -> list[float]:
    return [evaluate_re(cls_, eps, theta) for _, _, cls_ in sheets]


def build_front(T: FormalType, eps: object = Fraction(1, 10)) -> FrontDiagram:
    """Front of ``T`` at radius ``eps``.

    Raises :class:`DegenerateFront` when crossings coincide, when two strands
    are within ``TIE_TOLERANCE`` at a sector midpoint, or when the midpoint
    orders disagree with the leading-term crossings (``eps`` too large).
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    sheets = T.sheets()
    n = len(sheets)
    raw: list[tuple[Angle, int, int]] = []
    for a in range(n):
        for b in range(a + 1, n):
            for ang in _sheet_crossings(sheets[a][2], sheets[b][2]):
                raw.append((ang, a, b))

    seam = Fraction(0)
    if any(abs(ang.radians) < TIE_TOLERANCE or abs(ang.radians - 2 * math.pi) < TIE_TOLERANCE
           for ang, _, _ in raw):
        first = min(ang.radians for ang, _, _ in raw if ang.radians > TIE_TOLERANCE)
        seam = Fraction(first / (4 * math.pi)).limit_denominator(10 ** 6)
    index = {(k, j): s for s, (k, j, _) in enumerate(sheets)}
    sizes = [ramification(rep) for rep in T.orbits]
    continuation = tuple(index[(k, (j + 1) % sizes[k])] for k, j, _ in sheets)
    previous = {t: s for s, t in enumerate(continuation)}
    seam_rad = 2 * math.pi * float(seam)
    placed = []
    for ang, a, b in raw:
        if ang.radians < seam_rad:
            # sheets a, b meeting at theta are their predecessors meeting at theta + 2pi
            ang, a, b = ang.shifted(Fraction(1)), previous[a], previous[b]
        placed.append((ang, a, b))
    placed.sort(key=lambda x: x[0].radians)
    for (x, _, _), (y, _, _) in zip(placed, placed[1:]):
        if y.radians - x.radians < TIE_TOLERANCE or (x.exact and y.exact and x.turns == y.turns):
            raise DegenerateFront(f"crossings coincide near {x.turns} turns")

    cuts = [seam_rad] + [ang.radians for ang, _, _ in placed] + [seam_rad + 2 * math.pi]
    orders = []
    epsf = float(eps)
    for lo, hi in zip(cuts, cuts[1:]):
        h = _heights(sheets, epsf, (lo + hi) / 2)
        order = sorted(range(n), key=lambda s: h[s])
        for s, t in zip(order, order[1:]):
            if h[t] - h[s] < TIE_TOLERANCE:
                raise DegenerateFront(
                    f"strands {s} and {t} tie at angle {(lo + hi) / 2:.6f}; perturb eps or coefficients")
        orders.append(tuple(order))

    crossings = []
    for k, (ang, a, b) in enumerate(placed):
        west = orders[k]
        pa, pb = west.index(a), west.index(b)
        if abs(pa - pb) != 1:
            raise DegenerateFront(
                f"strands {a},{b} are not adjacent before crossing {k}; eps too large")
        lower, upper = (a, b) if pa < pb else (b, a)
        crossings.append(Crossing(ang, min(pa, pb), lower, upper))

    components = tuple(tuple(s for s, (k, _, _) in enumerate(sheets) if k == orb)
                       for orb in range(len(T.orbits)))
    zero = next((s for s, (_, _, c) in enumerate(sheets) if c.is_zero), None)
    try:
        return FrontDiagram(
            strands=n,
            crossings=tuple(crossings),
            sector_orders=tuple(orders),
            components=components,
            continuation=continuation,
            strand_class=tuple((k, j) for k, j, _ in sheets),
            seam_turns=seam,
            zero_strand=zero,
            formal_type=T,
            epsilon=eps,
        )
    except DegenerateFront as exc:
        raise DegenerateFront(f"{exc}; eps too large for the leading-term picture") from None


def crossing_count(T: FormalType, eps: object = Fraction(1, 10)) -> int:
    return len(build_front(T, eps).crossings)


def front_from_braid(strands: int, slots: Sequence[int]) -> FrontDiagram:
    """Closure of a positive braid on the cylinder.

    Crossing ``k`` swaps positions ``slots[k]`` and ``slots[k]+1`` at angle
    ``(k+1)/(len(slots)+1)`` turns; strands keep their position across the
    seam, so components are the cycles of the braid permutation.
    """
    m = len(slots)
    order = list(range(strands))
    orders = [tuple(order)]
    crossings = []
    for k, s in enumerate(slots):
        if not 0 <= s < strands - 1:
            raise ValueError(f"slot {s} out of range for {strands} strands")
        crossings.append(Crossing(Angle(Fraction(k + 1, m + 1)), s, order[s], order[s + 1]))
        order[s], order[s + 1] = order[s + 1], order[s]
        orders.append(tuple(order))
    cont = [0] * strands
    for p, s in enumerate(orders[-1]):
        cont[s] = orders[0][p]
    return FrontDiagram(
        strands=strands,
        crossings=tuple(crossings),
        sector_orders=tuple(orders),
        components=_cycles(cont),
        continuation=tuple(cont),
        strand_class=tuple((s, 0) for s in range(strands)),
    )


@dataclass(frozen=True)
class Segment:
    id: int
    strand: int  # strand id where the segment is first met (sector-major scan)
    below: int
    above: int
    cells: tuple  # (sector, position) pairs covered


@dataclass(frozen=True)
class CrossingCells:
    """Regions and segments around crossing ``k``.

    ``B``/``T`` are below/above both strands, ``L``/``R`` the middle faces
    west/east.  Strand ``lower`` runs from segment ``lower_west`` (B->L) to
    ``lower_east`` (R->T); ``upper`` from ``upper_west`` (L->T) to
    ``upper_east`` (B->R).
    """

    B: int
    L: int
    R: int
    T: int
    lower_west: int
    lower_east: int
    upper_west: int
    upper_east: int


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass(frozen=True)
class FrontTopology:
    regions: int
    bottom: int
    top: int
    region_of: dict  # (sector, gap) -> region id
    segments: tuple
    segment_of: dict  # (sector, position) -> segment id
    cells: tuple  # CrossingCells per crossing


def topology(d: FrontDiagram) -> FrontTopology:
    """Faces and strand segments of the front on the cylinder.

    Gap ``g`` of a sector lies between positions ``g-1`` and ``g``; gap 0 is
    the bottom face and gap ``strands`` the top face.  Ids are assigned in
    sector-major, bottom-to-top order of first appearance.
    """
    n, S = d.strands, d.sectors
    faces, segs = _UnionFind(), _UnionFind()
    for k in range(S):
        for g in range(n + 1):
            faces.find((k, g))
        for p in range(n):
            segs.find((k, p))
    for k, c in enumerate(d.crossings):
        for g in range(n + 1):
            if g != c.slot + 1:
                faces.union((k, g), (k + 1, g))
        for p in range(n):
            if p not in (c.slot, c.slot + 1):
                segs.union((k, p), (k + 1, p))
    for g in range(n + 1):
        faces.union((S - 1, g), (0, g))
    for p in range(n):
        segs.union((S - 1, p), (0, p))

    region_ids: dict = {}
    region_of = {}
    for k in range(S):
        for g in range(n + 1):
            root = faces.find((k, g))
            region_of[(k, g)] = region_ids.setdefault(root, len(region_ids))
    seg_ids: dict = {}
    segment_of = {}
    members: dict[int, list] = {}
    for k in range(S):
        for p in range(n):
            sid = seg_ids.setdefault(segs.find((k, p)), len(seg_ids))
            segment_of[(k, p)] = sid
            members.setdefault(sid, []).append((k, p))
    segments = []
    for sid in range(len(seg_ids)):
        k, p = members[sid][0]
        segments.append(Segment(sid, d.sector_orders[k][p], region_of[(k, p)],
                                region_of[(k, p + 1)], tuple(members[sid])))
    cells = []
    for k, c in enumerate(d.crossings):
        s = c.slot
        cells.append(CrossingCells(
            B=region_of[(k, s)], L=region_of[(k, s + 1)], R=region_of[(k + 1, s + 1)],
            T=region_of[(k, s + 2)],
            lower_west=segment_of[(k, s)], lower_east=segment_of[(k + 1, s + 1)],
            upper_west=segment_of[(k, s + 1)], upper_east=segment_of[(k + 1, s)]))
    return FrontTopology(len(region_ids), region_of[(0, 0)], region_of[(0, n)],
                         region_of, tuple(segments), segment_of, tuple(cells))
