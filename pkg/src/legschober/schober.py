"""K0 shadows of Stokes schobers and irregular Beilinson gluing data.

A shadow puts one semi-orthogonal decomposition, as an ordered list of
lattice blocks bottom to top, on every sector of a front.  Crossing a Stokes
direction at slot ``s`` left-mutates blocks ``s`` and ``s+1``.  Taking the
cumulative spans as face spaces gives a pure sheaf on the front.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactla import (
    ExactMatrix,
    ShapeMismatch,
    charpoly,
    coordinates,
    determinant,
    format_scalar,
    is_invertible,
    rank,
    same_span,
    span_basis,
)
from .front import FrontDiagram
from .mutation import EulerLattice, block_left_mutate
from .sheafknot import (
    FrontSheaf,
    TransportNotIso,
    default_base_segment,
    microstalk,
    monodromy_walk,
    transport,
    validate_front_sheaf,
)
from .sheafline import ValidationReport


class FlagMismatch(ValueError):
    pass


class NoZeroStrand(ValueError):
    pass


def _flag(blocks: Sequence[Sequence], dim: int) -> list[list]:
    out, acc = [[]], []
    for b in blocks:
        acc = acc + [list(v) for v in b]
        out.append(span_basis(acc, dim))
    return out


def _same_flag(a: Sequence[Sequence], b: Sequence[Sequence], dim: int) -> bool:
    fa, fb = _flag(a, dim), _flag(b, dim)
    return all(same_span(x, y, dim) for x, y in zip(fa, fb))


@dataclass(frozen=True)
class StokesSchoberShadow:
    front: FrontDiagram
    lattice: EulerLattice
    sector_blocks: tuple  # per sector, blocks bottom to top; each block a tuple of vectors

    def __post_init__(self):
        d, n = self.front, self.lattice.rank
        if len(self.sector_blocks) != d.sectors:
            raise FlagMismatch(f"front has {d.sectors} sectors, got {len(self.sector_blocks)} flags")
        for k, blocks in enumerate(self.sector_blocks):
            if len(blocks) != d.strands:
                raise FlagMismatch(f"sector {k} has {len(blocks)} blocks for {d.strands} strands")
            vecs = [list(v) for b in blocks for v in b]
            if any(len(v) != n for v in vecs):
                raise ShapeMismatch(f"sector {k}: vectors must have length {n}")
            if len(span_basis(vecs, n)) != len(vecs):
                raise FlagMismatch(f"sector {k}: block vectors are linearly dependent")
        for k, c in enumerate(d.crossings):
            before = list(self.sector_blocks[k])
            s = c.slot
            before[s], before[s + 1] = block_left_mutate(self.lattice, before[s], before[s + 1])
            if not _same_flag(before, self.sector_blocks[k + 1], n):
                raise FlagMismatch(f"crossing {k}: flag is not the left mutation at slot {s}")

    @classmethod
    def propagate(cls, front: FrontDiagram, lattice: EulerLattice,
                  blocks: Sequence[Sequence[Sequence[object]]]) -> StokesSchoberShadow:
        """Shadow obtained by mutating ``blocks`` (sector 0) across every crossing."""
        cur = [tuple(tuple(Fraction(x) for x in v) for v in b) for b in blocks]
        sectors = [tuple(cur)]
        for c in front.crossings:
            s = c.slot
            if s + 1 >= len(cur):
                raise FlagMismatch(f"slot {s} needs at least {s + 2} blocks")
            cur[s], cur[s + 1] = block_left_mutate(lattice, cur[s], cur[s + 1])
            sectors.append(tuple(cur))
        return cls(front, lattice, tuple(sectors))

    def closes(self) -> bool:
        """Whether the last sector's flag equals the first one's."""
        return _same_flag(self.sector_blocks[-1], self.sector_blocks[0], self.lattice.rank)

    def to_json(self) -> dict:
        def v(x):
            return [int(a) if a.denominator == 1 else str(a) for a in x]
        return {"gram": [v(r) for r in self.lattice.gram.entries],
                "sectors": [[[v(x) for x in b] for b in blocks] for blocks in self.sector_blocks]}

    @classmethod
    def from_json(cls, data: dict, front: FrontDiagram) -> StokesSchoberShadow:
        try:
            lattice = EulerLattice.from_rows(data["gram"])
            if "sectors" in data:
                return cls(front, lattice, tuple(
                    tuple(tuple(tuple(Fraction(x) for x in v) for v in b) for b in blocks)
                    for blocks in data["sectors"]))
            return cls.propagate(front, lattice, data["blocks"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed flags JSON: {exc}") from None


def sheaf_from_faces(front: FrontDiagram, subspaces: dict, dim: int,
                     stwz_mode: bool = False) -> FrontSheaf:
    """Front sheaf of inclusions from one subspace of ``Q^dim`` per ``(sector, gap)``.

    Cells of the same face must carry the same subspace; faces get the
    echelon basis of their subspace.
    """
    probe = FrontSheaf(front, (), ())
    t = probe.topo
    bases: dict[int, list] = {}
    for key, region in t.region_of.items():
        basis = span_basis([list(v) for v in subspaces[key]], dim)
        if region not in bases:
            bases[region] = basis
        elif not same_span(bases[region], basis, dim):
            raise FlagMismatch(f"face {region} gets different subspaces (sector {key[0]}, gap {key[1]})")
    maps = []
    for seg in t.segments:
        lo, hi = bases[seg.below], bases[seg.above]
        try:
            cols = [coordinates(v, hi) for v in lo]
        except ValueError:
            raise FlagMismatch(f"segment {seg.id}: face below is not inside face above") from None
        maps.append(ExactMatrix.from_columns(cols, len(hi)) if cols else ExactMatrix.zeros(len(hi), 0))
    return FrontSheaf(front, tuple(len(bases[r]) for r in range(t.regions)), tuple(maps), stwz_mode)


def decategorify_schober(s: StokesSchoberShadow) -> FrontSheaf:
    """Face spaces are cumulative block spans; edge maps are inclusions."""
    n = s.lattice.rank
    subspaces = {}
    for k, blocks in enumerate(s.sector_blocks):
        for g, sub in enumerate(_flag(blocks, n)):
            subspaces[(k, g)] = sub
    return sheaf_from_faces(s.front, subspaces, n, stwz_mode=True)


@dataclass(frozen=True)
class IrregularGluing:
    """``f`` goes from the zero-class microstalk to ``V``, ``g`` back."""

    sheaf: FrontSheaf
    zero_strand: int
    V: int
    f: ExactMatrix
    g: ExactMatrix

    def to_json(self) -> dict:
        return {"sheaf": self.sheaf.to_json(), "zero_strand": self.zero_strand,
                "V_dim": self.V, "f": self.f.to_json(), "g": self.g.to_json()}

    @classmethod
    def from_json(cls, data: dict, sheaf: FrontSheaf | None = None) -> IrregularGluing:
        try:
            return cls(sheaf if sheaf is not None else FrontSheaf.from_json(data["sheaf"]),
                       int(data["zero_strand"]), int(data["V_dim"]),
                       ExactMatrix.from_json(data["f"]), ExactMatrix.from_json(data["g"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed gluing JSON: {exc}") from None


def _zero_component(gd: IrregularGluing) -> int:
    d = gd.sheaf.front
    if d.zero_strand is None:
        raise NoZeroStrand("the front's formal type does not contain the zero class")
    if gd.zero_strand != d.zero_strand:
        raise NoZeroStrand(f"strand {gd.zero_strand} is not the zero-class strand {d.zero_strand}")
    return d.component_of(d.zero_strand)


def validate_irregular_gluing(gd: IrregularGluing) -> ValidationReport:
    """Invertibility of ``id - f g`` and ``id - g f``, and ``id - g f = M`` on the zero microstalk."""
    comp = _zero_component(gd)
    s = gd.sheaf
    report = validate_front_sheaf(s)
    base = default_base_segment(s, comp)
    m = microstalk(s, base).quotient_dim
    if gd.V < 0 or gd.f.shape != (gd.V, m) or gd.g.shape != (m, gd.V):
        raise ShapeMismatch(
            f"f must be {gd.V}x{m} and g {m}x{gd.V}, got {gd.f.shape} and {gd.g.shape}")
    id_gf = ExactMatrix.identity(m) - gd.g @ gd.f
    if not is_invertible(id_gf):
        report.fail("E", "id_minus_gf_not_invertible", "id - g f on the zero microstalk is singular")
    if not is_invertible(ExactMatrix.identity(gd.V) - gd.f @ gd.g):
        report.fail("V", "id_minus_fg_not_invertible", "id - f g on V is singular")
    if report.passed:
        M = monodromy_walk(s, comp, base).matrix
        if id_gf != M:
            report.fail("E", "monodromy_mismatch",
                        f"id - g f = {id_gf!r} but the monodromy is {M!r}")
    return report


def _poly(m: ExactMatrix) -> list[str]:
    return [format_scalar(c) for c in charpoly(m)]


def invariants_report(x: FrontSheaf | IrregularGluing) -> dict:
    """Dimensions, transports and monodromy characteristic polynomials of a valid sheaf."""
    gd = x if isinstance(x, IrregularGluing) else None
    s = gd.sheaf if gd else x
    d, t = s.front, s.topo
    out = {
        "strands": d.strands,
        "crossings": len(d.crossings),
        "components": len(d.components),
        "regions": t.regions,
        "region_dims": list(s.region_dims),
        "bottom_dim": s.region_dims[t.bottom],
        "top_dim": s.region_dims[t.top],
        "microstalk_dims": [
            microstalk(s, t.segment_of[(0, d.sector_orders[0].index(k))]).quotient_dim
            for k in range(d.strands)],
    }
    transports = []
    for k in range(len(d.crossings)):
        row = {"crossing": k}
        for which in ("lower", "upper"):
            try:
                row[which] = list(transport(s, k, which).shape)
            except TransportNotIso:
                row[which] = None
        transports.append(row)
    out["transports"] = transports
    mono = []
    for c in range(len(d.components)):
        try:
            w = monodromy_walk(s, c)
        except TransportNotIso:
            mono.append({"component": c, "error": "transport not invertible"})
            continue
        mono.append({"component": c, "base_segment": w.base_segment,
                     "matrix": w.matrix.to_json(), "charpoly": _poly(w.matrix)})
    out["monodromy"] = mono
    if gd is not None:
        m = gd.g.rows
        out["V_dim"] = gd.V
        out["zero_strand"] = gd.zero_strand
        out["det_id_minus_gf"] = format_scalar(determinant(ExactMatrix.identity(m) - gd.g @ gd.f))
        out["rank_f"] = rank(gd.f)
    return out
