"""Mutations of exceptional sequences and semi-orthogonal pairs on K0.

Lattice vectors are coordinate lists in a fixed reference basis; the Euler
pairing is ``chi(x, y) = x^T G y`` for the Gram matrix ``G``.  A left
mutation replaces ``(e_i, e_{i+1})`` by ``(e_{i+1} - chi(e_i, e_{i+1}) e_i, e_i)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactla import ExactMatrix, ShapeMismatch, determinant, same_span, solve, span_basis


class PositionOutOfRange(IndexError):
    pass


class NotExceptional(ValueError):
    pass


class SingularBlockGram(ValueError):
    pass


class BraidWordError(ValueError):
    pass


Vector = tuple


def _vec(v: Sequence[object]) -> Vector:
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class EulerLattice:
    gram: ExactMatrix

    def __post_init__(self):
        if self.gram.rows != self.gram.cols:
            raise ShapeMismatch("Gram matrix must be square")
        for row in self.gram.entries:
            for x in row:
                if not isinstance(x, Fraction) or x.denominator != 1:
                    raise ValueError(f"Gram entries must be integers, got {x}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]]) -> EulerLattice:
        return cls(ExactMatrix.from_rows(rows))

    @property
    def rank(self) -> int:
        return self.gram.rows

    def chi(self, x: Sequence[object], y: Sequence[object]) -> Fraction:
        gy = self.gram @ list(y)
        return sum((Fraction(a) * b for a, b in zip(x, gy)), Fraction(0))

    def check(self, v: Sequence[object]) -> Vector:
        if len(v) != self.rank:
            raise ShapeMismatch(f"vector of length {len(v)} in a rank {self.rank} lattice")
        return _vec(v)


@dataclass(frozen=True)
class ExceptionalSequence:
    lattice: EulerLattice
    vectors: tuple

    def __post_init__(self):
        vs = tuple(self.lattice.check(v) for v in self.vectors)
        object.__setattr__(self, "vectors", vs)
        for i, e in enumerate(vs):
            if self.lattice.chi(e, e) != 1:
                raise NotExceptional(f"chi(e_{i + 1}, e_{i + 1}) = {self.lattice.chi(e, e)}, expected 1")
            for j in range(i + 1, len(vs)):
                if self.lattice.chi(vs[j], e) != 0:
                    raise NotExceptional(f"chi(e_{j + 1}, e_{i + 1}) is nonzero")

    def gram(self) -> ExactMatrix:
        vs = self.vectors
        return ExactMatrix.from_rows([[self.lattice.chi(a, b) for b in vs] for a in vs])

    def to_json(self) -> dict:
        return {"gram": _int_rows(self.lattice.gram.entries),
                "vectors": [_int_list(v) for v in self.vectors]}

    @classmethod
    def from_json(cls, data: dict) -> ExceptionalSequence:
        try:
            return cls(EulerLattice.from_rows(data["gram"]), tuple(data["vectors"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed lattice JSON: {exc}") from None


def _int_list(v) -> list:
    return [int(x) if x.denominator == 1 else str(x) for x in v]


def _int_rows(rows) -> list:
    return [_int_list(r) for r in rows]


def _position(seq: ExceptionalSequence, i: int) -> None:
    if not 1 <= i < len(seq.vectors):
        raise PositionOutOfRange(f"position {i} outside 1..{len(seq.vectors) - 1}")


def pair_left_mutation(seq: ExceptionalSequence, i: int) -> ExceptionalSequence:
    """Left mutation at the 1-based position ``i``."""
    _position(seq, i)
    vs = list(seq.vectors)
    a, b = vs[i - 1], vs[i]
    c = seq.lattice.chi(a, b)
    vs[i - 1], vs[i] = tuple(y - c * x for x, y in zip(a, b)), a
    return ExceptionalSequence(seq.lattice, tuple(vs))


def pair_right_mutation(seq: ExceptionalSequence, i: int) -> ExceptionalSequence:
    """Inverse of :func:`pair_left_mutation` at ``i``: ``(x, y) -> (y, x - chi(x, y) y)``."""
    _position(seq, i)
    vs = list(seq.vectors)
    x, y = vs[i - 1], vs[i]
    c = seq.lattice.chi(x, y)
    vs[i - 1], vs[i] = y, tuple(p - c * q for p, q in zip(x, y))
    return ExceptionalSequence(seq.lattice, tuple(vs))


_TOKEN = re.compile(r"([sS])(\d+)$")


def parse_braid_word(word: str) -> list[tuple[int, int]]:
    """``"s1 S2"`` -> ``[(1, 1), (2, -1)]``; capitals are inverses."""
    out = []
    for tok in word.split():
        m = _TOKEN.match(tok)
        if not m or int(m.group(2)) < 1:
            raise BraidWordError(f"bad braid generator {tok!r}")
        out.append((int(m.group(2)), 1 if m.group(1) == "s" else -1))
    return out


def act(seq: ExceptionalSequence, word: str | Sequence[tuple[int, int]]) -> ExceptionalSequence:
    """Apply the generators of ``word`` in reading order, left to right."""
    gens = parse_braid_word(word) if isinstance(word, str) else word
    for i, sign in gens:
        seq = pair_left_mutation(seq, i) if sign > 0 else pair_right_mutation(seq, i)
    return seq


def left_project(lattice: EulerLattice, block: Sequence[Vector], x: Sequence[object]) -> Vector:
    """``x - p_A(x)`` with ``p_A(x)`` in the span of ``block`` and ``chi(a, x - p_A(x)) = 0``."""
    if not block:
        return _vec(x)
    g = ExactMatrix.from_rows([[lattice.chi(aj, ai) for ai in block] for aj in block])
    rhs = [lattice.chi(aj, x) for aj in block]
    if determinant(g) == 0:
        raise SingularBlockGram("the pairing restricted to the block is singular")
    c = solve(g, rhs)
    return tuple(Fraction(xi) - sum((ck * a[n] for ck, a in zip(c, block)), Fraction(0))
                 for n, xi in enumerate(x))


def block_left_mutate(lattice: EulerLattice, a: Sequence[Vector],
                      b: Sequence[Vector]) -> tuple[tuple, tuple]:
    """``(A, B) -> (L_A B, A)`` on bases."""
    a = tuple(_vec(v) for v in a)
    return tuple(left_project(lattice, a, y) for y in b), a


@dataclass(frozen=True)
class SODPair:
    lattice: EulerLattice
    blockA: tuple
    blockB: tuple

    def __post_init__(self):
        a = tuple(self.lattice.check(v) for v in self.blockA)
        b = tuple(self.lattice.check(v) for v in self.blockB)
        object.__setattr__(self, "blockA", a)
        object.__setattr__(self, "blockB", b)
        n = self.lattice.rank
        if len(a) + len(b) != n or len(span_basis(list(a + b), n)) != n:
            raise ValueError("blocks must form a basis of the lattice")
        for name, blk in (("A", a), ("B", b)):
            g = ExactMatrix.from_rows([[self.lattice.chi(x, y) for y in blk] for x in blk])
            if blk and abs(determinant(g)) != 1:
                raise SingularBlockGram(f"pairing on block {name} has determinant {determinant(g)}")

    def same_as(self, other: SODPair) -> bool:
        n = self.lattice.rank
        return (same_span(self.blockA, other.blockA, n) and same_span(self.blockB, other.blockB, n))

    def to_json(self) -> dict:
        return {"gram": _int_rows(self.lattice.gram.entries),
                "blockA": [_int_list(v) for v in self.blockA],
                "blockB": [_int_list(v) for v in self.blockB]}

    @classmethod
    def from_json(cls, data: dict) -> SODPair:
        try:
            return cls(EulerLattice.from_rows(data["gram"]), tuple(data["blockA"]),
                       tuple(data["blockB"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed pair JSON: {exc}") from None


def block_left_mutation(p: SODPair) -> SODPair:
    a, b = block_left_mutate(p.lattice, p.blockA, p.blockB)
    return SODPair(p.lattice, a, b)


def mutation_orbit(p: SODPair, steps: int) -> list[SODPair]:
    out = [p]
    for _ in range(steps):
        out.append(block_left_mutation(out[-1]))
    return out


def mutation_period(p: SODPair, max_iter: int = 100) -> int | None:
    """Least ``k <= max_iter`` with ``k`` left mutations returning the same pair of spans."""
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    q = p
    for k in range(1, max_iter + 1):
        q = block_left_mutation(q)
        if q.same_as(p):
            return k
    return None
