"""Exact linear algebra over the rationals and the Gaussian rationals.

Scalars are :class:`fractions.Fraction` for rational values and
:class:`GaussianRational` for values with a nonzero imaginary part.  Every
function in this module keeps that representation canonical, so two equal
scalars always compare and hash equal.

Matrices act on column vectors: an ``r x c`` matrix is a map from a space of
dimension ``c`` to a space of dimension ``r``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union


class SubspaceNotPreserved(ValueError):
    """A map does not carry the source subspace into the target subspace."""


class ShapeMismatch(ValueError):
    """Matrix or vector dimensions do not agree."""


class GaussianRational:
    """An element ``re + im*i`` of Q(i) with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: object = 0, im: object = 0) -> None:
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return scalar(GaussianRational(self.re + o.re, self.im + o.im))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return scalar(GaussianRational(self.re - o.re, self.im - o.im))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return scalar(GaussianRational(self.re * o.re - self.im * o.im,
                                       self.re * o.im + self.im * o.re))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * GaussianRational(o.re / n, -o.im / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"GaussianRational({format_scalar(self)!r})"


Scalar = Union[Fraction, GaussianRational]
Vector = tuple

I = GaussianRational(0, 1)


def scalar(x: object) -> Scalar:
    """Return the canonical representative of ``x``.

    Integers and fractions become ``Fraction``; Gaussian rationals with zero
    imaginary part collapse to ``Fraction``.
    """
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return x.re
        return x
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        if isinstance(x, str):
            return parse_scalar(x)
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def real_part(x: Scalar) -> Fraction:
    return x.re if isinstance(x, GaussianRational) else x


def imag_part(x: Scalar) -> Fraction:
    return x.im if isinstance(x, GaussianRational) else Fraction(0)


def _parse_fraction(text: str) -> Fraction:
    if not text or text.count("/") > 1:
        raise ValueError(f"malformed rational {text!r}")
    num, _, den = text.partition("/")
    if not num.lstrip("+-").isdigit() or (den and not den.isdigit()):
        raise ValueError(f"malformed rational {text!r}")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def parse_scalar(text: str) -> Scalar:
    """Parse ``"p/q"`` or ``"p/q+r/si"`` (and shorthands like ``"i"``, ``"-2i"``)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    if not s.endswith("i"):
        return _parse_fraction(s)
    body = s[:-1]
    split = max(body.rfind("+"), body.rfind("-"))
    if split <= 0:
        re_txt, im_txt = "0", body
    else:
        re_txt, im_txt = body[:split], body[split:]
    if im_txt in ("", "+"):
        im = Fraction(1)
    elif im_txt == "-":
        im = Fraction(-1)
    else:
        im = _parse_fraction(im_txt)
    return scalar(GaussianRational(_parse_fraction(re_txt), im))


def format_scalar(x: Scalar) -> str:
    """Canonical string form: ``"-3/2"``, ``"0"``, ``"1/2+1/2i"``, ``"-1i"``."""
    x = scalar(x)
    if isinstance(x, Fraction):
        return str(x)
    if x.re == 0:
        return f"{x.im}i"
    sign = "+" if x.im > 0 else "-"
    return f"{x.re}{sign}{abs(x.im)}i"


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ShapeMismatch(
                f"entry grid does not match declared shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], cols: int | None = None) -> ExactMatrix:
        grid = tuple(tuple(scalar(x) for x in r) for r in rows)
        if cols is None:
            if not grid:
                raise ShapeMismatch("cols must be given for a matrix with no rows")
            cols = len(grid[0])
        return cls(len(grid), cols, grid)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[object]], rows: int) -> ExactMatrix:
        for c in columns:
            if len(c) != rows:
                raise ShapeMismatch(f"column of length {len(c)} in a {rows}-row matrix")
        grid = tuple(tuple(scalar(columns[j][i]) for j in range(len(columns)))
                     for i in range(rows))
        return cls(rows, len(columns), grid)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> ExactMatrix:
        z = Fraction(0)
        return cls(rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return cls(n, n, tuple(tuple(Fraction(int(i == j)) for j in range(n))
                               for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> ExactMatrix:
        return ExactMatrix(self.cols, self.rows,
                           tuple(self.column(j) for j in range(self.cols)))

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise ShapeMismatch(f"cannot compose {self.shape} with {other.shape}")
            ocols = other.columns()
            grid = tuple(tuple(_dot(r, c) for c in ocols) for r in self.entries)
            return ExactMatrix(self.rows, other.cols, grid)
        v = tuple(other)
        if len(v) != self.cols:
            raise ShapeMismatch(f"cannot apply {self.shape} matrix to vector of length {len(v)}")
        return tuple(_dot(r, v) for r in self.entries)

    def _zip(self, other: ExactMatrix, op) -> ExactMatrix:
        if self.shape != other.shape:
            raise ShapeMismatch(f"shapes {self.shape} and {other.shape} differ")
        return ExactMatrix(self.rows, self.cols, tuple(
            tuple(scalar(op(a, b)) for a, b in zip(r, s))
            for r, s in zip(self.entries, other.entries)))

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self) -> ExactMatrix:
        return self.scale(-1)

    def scale(self, c: object) -> ExactMatrix:
        c = scalar(c)
        return ExactMatrix(self.rows, self.cols,
                           tuple(tuple(scalar(c * x) for x in r) for r in self.entries))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def hstack(self, other: ExactMatrix) -> ExactMatrix:
        if self.rows != other.rows:
            raise ShapeMismatch("hstack needs equal row counts")
        return ExactMatrix(self.rows, self.cols + other.cols,
                           tuple(a + b for a, b in zip(self.entries, other.entries)))

    def vstack(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.cols:
            raise ShapeMismatch("vstack needs equal column counts")
        return ExactMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def with_entry(self, i: int, j: int, value: object) -> ExactMatrix:
        grid = [list(r) for r in self.entries]
        grid[i][j] = scalar(value)
        return ExactMatrix(self.rows, self.cols, tuple(tuple(r) for r in grid))

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[format_scalar(x) for x in r] for r in self.entries]}

    @classmethod
    def from_json(cls, data: dict) -> ExactMatrix:
        try:
            rows, cols = int(data["rows"]), int(data["cols"])
            grid = data["entries"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed matrix JSON: {exc}") from None
        if len(grid) != rows or any(len(r) != cols for r in grid):
            raise ShapeMismatch(f"matrix JSON entries do not match shape {rows}x{cols}")
        return cls(rows, cols, tuple(tuple(parse_scalar(str(x)) for x in r) for r in grid))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_scalar(x) for x in r) for r in self.entries)
        return f"ExactMatrix({self.rows}x{self.cols}: [{body}])"


def _dot(a: Iterable, b: Iterable) -> Scalar:
    total = Fraction(0)
    for x, y in zip(a, b):
        if x and y:
            total = total + x * y
    return scalar(total)


def rref(m: ExactMatrix) -> tuple[list[list], list[int]]:
    """Reduced row-echelon form of ``m`` and its pivot columns.

    Pivots are chosen as the first nonzero entry at or below the current row;
    no scaling heuristics, so the result is deterministic.
    """
    a = [list(r) for r in m.entries]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        p = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = Fraction(1) / a[r][c]
        a[r] = [scalar(x * inv) for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [scalar(x - f * y) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m: ExactMatrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: ExactMatrix) -> list[Vector]:
    """Basis of the null space of ``m``, returned in reduced row-echelon form.

    The list is empty exactly when ``m`` is injective.
    """
    reduced, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    vecs = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = scalar(-row[f])
        vecs.append(tuple(v))
    return span_basis(vecs, m.cols)


def span_basis(vectors: Sequence[Sequence[object]], dim: int) -> list[Vector]:
    """Canonical (RREF) basis of the span of ``vectors`` inside a space of dimension ``dim``."""
    if not vectors:
        return []
    reduced, _ = rref(ExactMatrix.from_rows(vectors, cols=dim))
    return [tuple(r) for r in reduced]


def same_span(u: Sequence[Sequence[object]], v: Sequence[Sequence[object]], dim: int) -> bool:
    return span_basis(u, dim) == span_basis(v, dim)


def in_span(x: Sequence[object], vectors: Sequence[Sequence[object]], dim: int) -> bool:
    return len(span_basis(list(vectors) + [x], dim)) == len(span_basis(vectors, dim))


@dataclass(frozen=True)
class QuotientSpace:
    """``ambient / span(subspace_basis)`` with an explicit projection.

    The complement is spanned by the standard basis vectors at the non-pivot
    columns of the subspace basis; ``projection`` reads off those coordinates
    after reducing a vector modulo the subspace.
    """

    ambient_dim: int
    subspace_basis: tuple
    quotient_dim: int
    projection: ExactMatrix
    free_columns: tuple

    def section(self) -> ExactMatrix:
        """A right inverse of ``projection`` (lifts quotient coordinates to the ambient space)."""
        cols = []
        for f in self.free_columns:
            e = [Fraction(0)] * self.ambient_dim
            e[f] = Fraction(1)
            cols.append(e)
        return ExactMatrix.from_columns(cols, self.ambient_dim)

    def project(self, v: Sequence[object]) -> Vector:
        return self.projection @ v


def quotient(ambient_dim: int, vectors: Sequence[Sequence[object]]) -> QuotientSpace:
    basis = span_basis(vectors, ambient_dim)
    pivots = [next(j for j, x in enumerate(row) if x != 0) for row in basis]
    free = [c for c in range(ambient_dim) if c not in pivots]
    prow = []
    for f in free:
        row = []
        for c in range(ambient_dim):
            if c == f:
                row.append(Fraction(1))
            elif c in pivots:
                row.append(scalar(-basis[pivots.index(c)][f]))
            else:
                row.append(Fraction(0))
        prow.append(row)
    projection = ExactMatrix.from_rows(prow, cols=ambient_dim)
    return QuotientSpace(ambient_dim, tuple(basis), len(free), projection, tuple(free))


def cokernel(m: ExactMatrix) -> QuotientSpace:
    """Codomain of ``m`` modulo its column span."""
    return quotient(m.rows, m.columns())


def induced_quotient_map(f: ExactMatrix, src: QuotientSpace, dst: QuotientSpace) -> ExactMatrix:
    """The map ``src -> dst`` induced by ``f`` on quotients.

    Raises :class:`SubspaceNotPreserved` unless ``f`` maps the source subspace
    into the target subspace.
    """
    if f.cols != src.ambient_dim or f.rows != dst.ambient_dim:
        raise ShapeMismatch(
            f"map of shape {f.shape} does not go from dim {src.ambient_dim} to dim {dst.ambient_dim}")
    for v in src.subspace_basis:
        if any(x != 0 for x in dst.projection @ (f @ v)):
            raise SubspaceNotPreserved("image of the source subspace leaves the target subspace")
    return dst.projection @ f @ src.section()


def is_invertible(m: ExactMatrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def inverse(m: ExactMatrix) -> ExactMatrix:
    if m.rows != m.cols:
        raise ShapeMismatch("only square matrices can be inverted")
    n = m.rows
    reduced, pivots = rref(m.hstack(ExactMatrix.identity(n)))
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return ExactMatrix.from_rows([row[n:] for row in reduced], cols=n)


def solve(a: ExactMatrix, b: Sequence[object]) -> Vector | None:
    """One solution ``x`` of ``a @ x == b`` (free variables set to zero), or ``None``."""
    aug = a.hstack(ExactMatrix.from_columns([list(b)], a.rows))
    reduced, pivots = rref(aug)
    if a.cols in pivots:
        return None
    x = [Fraction(0)] * a.cols
    for row, p in zip(reduced, pivots):
        x[p] = row[a.cols]
    return tuple(x)


def coordinates(v: Sequence[object], basis: Sequence[Sequence[object]]) -> Vector:
    """Coordinates of ``v`` in a linearly independent family ``basis``."""
    dim = len(v)
    if not basis:
        if any(x != 0 for x in v):
            raise ValueError("vector is not in the zero subspace")
        return ()
    x = solve(ExactMatrix.from_columns(basis, dim), v)
    if x is None:
        raise ValueError("vector is not in the span of the basis")
    return x


def determinant(m: ExactMatrix) -> Scalar:
    if m.rows != m.cols:
        raise ShapeMismatch("determinant of a non-square matrix")
    a = [list(r) for r in m.entries]
    n = m.rows
    det: Scalar = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det = scalar(det * a[c][c])
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [scalar(x - f * y) for x, y in zip(a[i], a[c])]
    return scalar(det)


def charpoly(m: ExactMatrix) -> list[Scalar]:
    """Coefficients of ``det(t*I - m)``, leading coefficient first (Faddeev-LeVerrier)."""
    if m.rows != m.cols:
        raise ShapeMismatch("characteristic polynomial of a non-square matrix")
    n = m.rows
    coeffs: list[Scalar] = [Fraction(1)]
    mk = ExactMatrix.zeros(n, n)
    c = Fraction(1)
    ident = ExactMatrix.identity(n)
    for k in range(1, n + 1):
        mk = m @ (mk + ident.scale(c))
        c = scalar(-sum((mk[i, i] for i in range(n)), Fraction(0)) / k)
        coeffs.append(c)
    return coeffs
