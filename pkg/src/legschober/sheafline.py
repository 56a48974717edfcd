"""Pure sheaves on the line with co-oriented points, and Beilinson disk data.

A pure sheaf micro-supported on points ``x_{1/2}, ..., x_{n-1/2}`` is a chain
of spaces ``V_0, ..., V_n`` with one injective map per point.  The map at
``x_{i+1/2}`` goes ``V_i -> V_{i+1}`` when the co-orientation there is ``-``
and ``V_{i+1} -> V_i`` when it is ``+``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .exactla import (
    ExactMatrix,
    QuotientSpace,
    ShapeMismatch,
    coordinates,
    cokernel,
    is_invertible,
    rank,
    span_basis,
)


class NotAFlag(ValueError):
    """Subspaces are not nested in the direction the co-orientations require."""


class IndexOutOfRange(IndexError):
    pass


def point_label(i: int) -> str:
    """Label of the point ``x_{i+1/2}``: ``"1/2"``, ``"3/2"``, ..."""
    return f"{2 * i + 1}/2"


@dataclass
class ValidationReport:
    """Outcome of a validator: ``passed`` plus localized failures."""

    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, where: str, kind: str, detail: str = "") -> None:
        self.failures.append({"where": where, "kind": kind, "detail": detail})

    def to_json(self) -> dict:
        return {"pass": self.passed, "failures": list(self.failures)}


@dataclass(frozen=True)
class LinePoints:
    coorientations: tuple

    def __post_init__(self):
        for c in self.coorientations:
            if c not in ("+", "-"):
                raise ValueError(f"co-orientation must be '+' or '-', got {c!r}")

    @property
    def n(self) -> int:
        return len(self.coorientations)


@dataclass(frozen=True)
class LineSheaf:
    dims: tuple
    maps: tuple
    coorientations: tuple

    @property
    def points(self) -> LinePoints:
        return LinePoints(self.coorientations)

    def to_json(self) -> dict:
        return {"coorientations": list(self.coorientations), "dims": list(self.dims),
                "maps": [m.to_json() for m in self.maps]}

    @classmethod
    def from_json(cls, data: dict) -> LineSheaf:
        try:
            return cls(tuple(int(d) for d in data["dims"]),
                       tuple(ExactMatrix.from_json(m) for m in data["maps"]),
                       tuple(data["coorientations"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed line sheaf JSON: {exc}") from None


def _expected_shape(s: LineSheaf, i: int) -> tuple[int, int]:
    a, b = s.dims[i], s.dims[i + 1]
    return (b, a) if s.coorientations[i] == "-" else (a, b)


def validate_line(points: LinePoints, s: LineSheaf) -> ValidationReport:
    """Check that every map is injective and points the way its co-orientation says.

    Raises :class:`ShapeMismatch` for malformed input (wrong counts, or a map
    whose shape fits neither direction); a reversed map is a validation
    failure, not an error.
    """
    n = points.n
    if tuple(points.coorientations) != tuple(s.coorientations):
        raise ShapeMismatch("sheaf co-orientations differ from the point data")
    if len(s.dims) != n + 1 or len(s.maps) != n:
        raise ShapeMismatch(f"{n} points need {n + 1} spaces and {n} maps")
    if any(d < 0 for d in s.dims):
        raise ShapeMismatch("dimensions must be nonnegative")
    report = ValidationReport()
    for i, m in enumerate(s.maps):
        want = _expected_shape(s, i)
        if m.shape != want:
            if m.shape == want[::-1]:
                report.fail(point_label(i), "direction",
                            f"map goes against co-orientation {s.coorientations[i]}")
                continue
            raise ShapeMismatch(f"map at {point_label(i)} has shape {m.shape}, expected {want}")
        if rank(m) != m.cols:
            report.fail(point_label(i), "not_injective", f"rank {rank(m)} < {m.cols}")
    return report


def microstalk_line(s: LineSheaf, i: int) -> QuotientSpace:
    """Microstalk at ``x_{i+1/2}``: the cokernel of its map."""
    if not 0 <= i < len(s.maps):
        raise IndexOutOfRange(f"no point with index {i}")
    return cokernel(s.maps[i])


def flag_from_blocks(blocks: Sequence[Sequence[Sequence[object]]], dim: int) -> list[list]:
    """Cumulative spans ``<b_0>, <b_0, b_1>, ...`` of a list of blocks."""
    out, acc = [], []
    for b in blocks:
        acc = acc + [list(v) for v in b]
        out.append(span_basis(acc, dim))
    return out


def decategorify_line(filtration: Sequence[Sequence[Sequence[object]]],
                      coorientations: Sequence[str], dim: int) -> LineSheaf:
    """Line sheaf with ``V_i`` the ``i``-th subspace of ``filtration`` and inclusion maps.

    ``filtration[i]`` is a spanning set of a subspace of ``Q^dim``.  Where the
    co-orientation is ``-`` it must lie in ``filtration[i+1]``; where it is
    ``+`` it must contain it.  Use :func:`flag_from_blocks` to turn SOD-style
    blocks into the cumulative flag.
    """
    if len(filtration) != len(coorientations) + 1:
        raise ShapeMismatch("need one more subspace than co-orientations")
    bases = [span_basis([list(v) for v in sub], dim) for sub in filtration]
    maps = []
    for i, sign in enumerate(coorientations):
        src, dst = (bases[i], bases[i + 1]) if sign == "-" else (bases[i + 1], bases[i])
        try:
            cols = [coordinates(v, dst) for v in src]
        except ValueError:
            raise NotAFlag(f"containment fails at {point_label(i)}") from None
        maps.append(ExactMatrix.from_columns(cols, len(dst)) if cols
                    else ExactMatrix.zeros(len(dst), 0))
    return LineSheaf(tuple(len(b) for b in bases), tuple(maps), tuple(coorientations))


@dataclass(frozen=True)
class DiskBeilinson:
    """``f: V -> W`` and ``g: W -> V`` (vanishing and nearby cycles)."""

    V: int
    W: int
    f: ExactMatrix
    g: ExactMatrix

    def check_shapes(self) -> None:
        if self.f.shape != (self.W, self.V) or self.g.shape != (self.V, self.W):
            raise ShapeMismatch(
                f"f must be {self.W}x{self.V} and g {self.V}x{self.W}, "
                f"got {self.f.shape} and {self.g.shape}")


def validate_beilinson(b: DiskBeilinson) -> ValidationReport:
    b.check_shapes()
    report = ValidationReport()
    if not is_invertible(ExactMatrix.identity(b.V) - b.g @ b.f):
        report.fail("V", "id_V - g f not invertible")
    if not is_invertible(ExactMatrix.identity(b.W) - b.f @ b.g):
        report.fail("W", "id_W - f g not invertible")
    return report


def monodromy_beilinson(b: DiskBeilinson) -> ExactMatrix:
    """Monodromy on nearby cycles, ``id_W - f g``, taken counterclockwise."""
    b.check_shapes()
    return ExactMatrix.identity(b.W) - b.f @ b.g
