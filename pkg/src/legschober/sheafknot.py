"""Pure sheaves on a front in the cylinder.

A :class:`FrontSheaf` assigns a vector space to every face of the front and
an injective map to every strand segment, from the face below the segment to
the face above it (co-orientation points down).  Around each crossing with
faces ``B`` (below), ``L``/``R`` (west/east middle) and ``T`` (above) the
complex ``B -> L + R -> T`` must be acyclic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .exactla import (
    ExactMatrix,
    QuotientSpace,
    ShapeMismatch,
    SubspaceNotPreserved,
    charpoly,
    cokernel,
    induced_quotient_map,
    inverse,
    is_invertible,
    rank,
)
from .front import FrontDiagram, FrontTopology, topology
from .sheafline import ValidationReport


class UnknownSegment(KeyError):
    pass


class TransportNotIso(ValueError):
    pass


@dataclass(frozen=True)
class FrontSheaf:
    front: FrontDiagram
    region_dims: tuple
    edge_maps: tuple  # indexed by segment id
    stwz_mode: bool = False

    @cached_property
    def topo(self) -> FrontTopology:
        return topology(self.front)

    def edge(self, segment: int) -> ExactMatrix:
        if not 0 <= segment < len(self.edge_maps):
            raise UnknownSegment(segment)
        return self.edge_maps[segment]

    def crossing_maps(self, k: int) -> tuple:
        """``(f_BL, f_LT, f_BR, f_RT)`` at crossing ``k``."""
        c = self.topo.cells[k]
        return (self.edge_maps[c.lower_west], self.edge_maps[c.upper_west],
                self.edge_maps[c.upper_east], self.edge_maps[c.lower_east])

    def to_json(self) -> dict:
        return {"front": self.front.to_json(), "region_dims": list(self.region_dims),
                "edge_maps": {str(i): m.to_json() for i, m in enumerate(self.edge_maps)},
                "stwz_mode": self.stwz_mode}

    @classmethod
    def from_json(cls, data: dict, front: FrontDiagram | None = None) -> FrontSheaf:
        try:
            d = front if front is not None else FrontDiagram.from_json(data["front"])
            raw = data["edge_maps"]
            if isinstance(raw, dict):
                keys = sorted(raw, key=int)
                if [int(k) for k in keys] != list(range(len(keys))):
                    raise ShapeMismatch("edge_maps keys must be the segment ids 0..n-1")
                maps = tuple(ExactMatrix.from_json(raw[k]) for k in keys)
            else:
                maps = tuple(ExactMatrix.from_json(m) for m in raw)
            return cls(d, tuple(int(x) for x in data["region_dims"]), maps,
                       bool(data.get("stwz_mode", False)))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed front sheaf JSON: {exc}") from None


def _check_shapes(s: FrontSheaf) -> None:
    t = s.topo
    if len(s.region_dims) != t.regions:
        raise ShapeMismatch(f"front has {t.regions} regions, got {len(s.region_dims)} dims")
    if any(d < 0 for d in s.region_dims):
        raise ShapeMismatch("region dimensions must be nonnegative")
    if len(s.edge_maps) != len(t.segments):
        raise ShapeMismatch(f"front has {len(t.segments)} segments, got {len(s.edge_maps)} maps")
    for seg in t.segments:
        want = (s.region_dims[seg.above], s.region_dims[seg.below])
        if s.edge_maps[seg.id].shape != want:
            raise ShapeMismatch(
                f"segment {seg.id} map has shape {s.edge_maps[seg.id].shape}, expected {want}")


def crossing_complex(s: FrontSheaf, k: int) -> tuple[ExactMatrix, ExactMatrix]:
    """Differentials ``B -> L + R`` and ``L + R -> T`` at crossing ``k``."""
    f_bl, f_lt, f_br, f_rt = s.crossing_maps(k)
    return f_bl.vstack(f_br), f_lt.hstack(-f_rt)


def crossing_failures(f_bl: ExactMatrix, f_lt: ExactMatrix, f_br: ExactMatrix,
                      f_rt: ExactMatrix) -> list[tuple[str, str]]:
    """``(kind, detail)`` for each way ``B -> L + R -> T`` fails to be an acyclic complex."""
    if (f_bl.cols != f_br.cols or f_lt.rows != f_rt.rows or f_bl.rows != f_lt.cols
            or f_br.rows != f_rt.cols):
        raise ShapeMismatch("crossing maps do not fit together")
    d1, d2 = f_bl.vstack(f_br), f_lt.hstack(-f_rt)
    out = []
    if not (d2 @ d1).is_zero():
        out.append(("not_a_complex", "paths B->L->T and B->R->T differ"))
    r1, r2 = rank(d1), rank(d2)
    if r1 != d1.cols:
        out.append(("not_exact_at_B", f"kernel of dimension {d1.cols - r1}"))
    if d2.cols - r2 != r1:
        out.append(("not_exact_at_middle", f"kernel dimension {d2.cols - r2}, image dimension {r1}"))
    if r2 != d2.rows:
        out.append(("not_exact_at_T", f"cokernel of dimension {d2.rows - r2}"))
    return out


def validate_front_sheaf(s: FrontSheaf) -> ValidationReport:
    """Injectivity of every edge, acyclicity at every crossing, and the stwz bottom condition."""
    _check_shapes(s)
    report = ValidationReport()
    t = s.topo
    for seg in t.segments:
        m = s.edge_maps[seg.id]
        if rank(m) != m.cols:
            report.fail(f"segment {seg.id}", "not_injective", f"rank {rank(m)} < {m.cols}")
    for k in range(len(t.cells)):
        for kind, detail in crossing_failures(*s.crossing_maps(k)):
            report.fail(f"crossing {k}", kind, detail)
    if s.stwz_mode and s.region_dims[t.bottom] != 0:
        report.fail("bottom", "nonzero_bottom", f"dimension {s.region_dims[t.bottom]}")
    return report


def microstalk(s: FrontSheaf, segment: int) -> QuotientSpace:
    return cokernel(s.edge(segment))


def crossing_transport(f_bl: ExactMatrix, f_lt: ExactMatrix, f_br: ExactMatrix,
                       f_rt: ExactMatrix, strand: str) -> ExactMatrix:
    """Transport of microstalks along ``strand`` ("lower" or "upper"), west to east.

    The lower strand uses the map ``L/B -> T/R`` induced by ``L -> T``; the
    upper strand inverts ``R/B -> T/L`` induced by ``R -> T``.
    """
    try:
        if strand == "lower":
            m = induced_quotient_map(f_lt, cokernel(f_bl), cokernel(f_rt))
        elif strand == "upper":
            m = induced_quotient_map(f_rt, cokernel(f_br), cokernel(f_lt))
        else:
            raise ValueError(f"strand must be 'lower' or 'upper', got {strand!r}")
    except SubspaceNotPreserved as exc:
        raise TransportNotIso(str(exc)) from None
    if not is_invertible(m):
        raise TransportNotIso(f"{strand} transport is singular")
    return m if strand == "lower" else inverse(m)


def transport(s: FrontSheaf, crossing: int, strand: str) -> ExactMatrix:
    """:func:`crossing_transport` at crossing ``crossing`` of ``s``."""
    if not 0 <= crossing < len(s.topo.cells):
        raise IndexError(f"no crossing {crossing}")
    try:
        return crossing_transport(*s.crossing_maps(crossing), strand)
    except TransportNotIso as exc:
        raise TransportNotIso(f"crossing {crossing}: {exc}") from None


@dataclass(frozen=True)
class MonodromyResult:
    matrix: ExactMatrix
    base_segment: int
    steps: tuple = field(default=())  # (crossing, "lower"/"upper") in walking order

    @property
    def charpoly(self) -> list:
        return charpoly(self.matrix)


def default_base_segment(s: FrontSheaf, component: int) -> int:
    """Segment of the lowest strand id of ``component`` in sector 0."""
    d = s.front
    if not 0 <= component < len(d.components):
        raise IndexError(f"no component {component}")
    strand = min(d.components[component])
    return s.topo.segment_of[(0, d.sector_orders[0].index(strand))]


def monodromy_walk(s: FrontSheaf, component: int, base_segment: int | None = None) -> MonodromyResult:
    d, t = s.front, s.topo
    if base_segment is None:
        base_segment = default_base_segment(s, component)
    if not 0 <= base_segment < len(t.segments):
        raise UnknownSegment(base_segment)
    seg = t.segments[base_segment]
    k0, p0 = seg.cells[0]
    if d.component_of(d.sector_orders[k0][p0]) != component:
        raise ValueError(f"segment {base_segment} is not on component {component}")
    dim = s.edge_maps[base_segment].rows - rank(s.edge_maps[base_segment])
    m = ExactMatrix.identity(dim)
    steps = []
    k, p = k0, p0
    last = d.sectors - 1
    # walk east one sector at a time; the seam joins sector `last` to sector 0
    for _ in range(d.sectors * d.strands + 1):
        if k < last:
            c = d.crossings[k]
            if p in (c.slot, c.slot + 1):
                which = "lower" if p == c.slot else "upper"
                m = transport(s, k, which) @ m
                steps.append((k, which))
                p = c.slot + 1 if which == "lower" else c.slot
            k += 1
        else:
            k = 0
        if (k, p) == (k0, p0):
            return MonodromyResult(m, base_segment, tuple(steps))
    raise AssertionError("walk did not close")  # unreachable for a checked front


def monodromy(s: FrontSheaf, component: int, base_segment: int | None = None) -> ExactMatrix:
    """Microstalk monodromy once around ``component``, on the base segment's microstalk."""
    return monodromy_walk(s, component, base_segment).matrix


def component_segments(s: FrontSheaf, component: int) -> list[int]:
    d = s.front
    return [seg.id for seg in s.topo.segments if d.component_of(seg.strand) == component]
