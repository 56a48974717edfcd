"""Puiseux exponential-factor classes and formal types.

A class is stored as its canonical lift: the finitely many terms
``c * z^e`` with negative exponent ``e``.  Terms with ``e >= 0`` only change
the exponential factor by a holomorphic unit and are dropped on construction.

Coefficients live in Q(i) up to a root-of-unity factor.  Deck conjugation
``z^(1/l) -> zeta_l * z^(1/l)`` multiplies the coefficient of ``z^e`` by
``exp(2*pi*i*e)``; when that factor is a power of ``i`` it is absorbed into
the exact base, otherwise it is carried as a rational number of turns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactla import (
    GaussianRational,
    I,
    Scalar,
    format_scalar,
    imag_part,
    parse_scalar,
    real_part,
    scalar,
)

QUARTER = Fraction(1, 4)


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position


class FormalTypeError(ValueError):
    """Formal type data violates distinctness or orbit completeness."""


def _i_power(q: int) -> Scalar:
    return (Fraction(1), I, Fraction(-1), -I)[q % 4]


def _exact_arg_turns(x: Scalar) -> Fraction | None:
    """arg(x) / 2pi when it is a multiple of 1/8, else None."""
    re, im = real_part(x), imag_part(x)
    if im == 0:
        return Fraction(0) if re > 0 else Fraction(1, 2)
    if re == 0:
        return Fraction(1, 4) if im > 0 else Fraction(3, 4)
    if abs(re) == abs(im):
        if re > 0:
            return Fraction(1, 8) if im > 0 else Fraction(7, 8)
        return Fraction(3, 8) if im > 0 else Fraction(5, 8)
    return None


@dataclass(frozen=True)
class Angle:
    """``2*pi*turns + offset`` radians.

    ``offset`` is zero whenever the angle is an exact rational number of
    turns; it is nonzero only for arguments of Gaussian rationals off the
    eighth-turn lattice (e.g. ``arg(1+2i)``).
    """

    turns: Fraction
    offset: float = 0.0

    @property
    def exact(self) -> bool:
        return self.offset == 0.0

    @property
    def radians(self) -> float:
        return 2 * math.pi * float(self.turns) + self.offset

    def shifted(self, turns: Fraction) -> Angle:
        return Angle(self.turns + turns, self.offset)

    def to_json(self) -> dict:
        return {"angle_turns": str(self.turns), "angle_offset_rad": self.offset}


@dataclass(frozen=True)
class Coefficient:
    """``base * exp(2*pi*i*turns)`` with ``0 <= turns < 1/4`` and ``base != 0``."""

    base: Scalar
    turns: Fraction = Fraction(0)

    @classmethod
    def make(cls, base: object, turns: object = 0) -> Coefficient:
        t = Fraction(turns)
        q = math.floor(t / QUARTER)
        return cls(scalar(scalar(base) * _i_power(q)), t - q * QUARTER)

    def rotate(self, turns: Fraction) -> Coefficient:
        return Coefficient.make(self.base, self.turns + turns)

    def __complex__(self) -> complex:
        return complex(self.base) * complex(math.cos(2 * math.pi * self.turns),
                                            math.sin(2 * math.pi * self.turns))

    @property
    def modulus(self) -> float:
        return abs(complex(self.base))

    def arg(self) -> Angle:
        t = _exact_arg_turns(self.base)
        if t is not None:
            return Angle(t + self.turns)
        b = complex(self.base)
        return Angle(self.turns, math.atan2(b.imag, b.real))

    def __str__(self) -> str:
        b = self.base
        if isinstance(b, GaussianRational):
            if b.re == 0:
                body = f"({b.im}*i)"
            else:
                body = f"({b.re}{'+' if b.im > 0 else '-'}{abs(b.im)}*i)"
        else:
            body = f"({b})"
        if self.turns:
            body += f"*zeta({self.turns})"
        return body


@dataclass(frozen=True)
class PuiseuxClass:
    terms: tuple = ()

    def __post_init__(self):
        exps = [e for e, _ in self.terms]
        if any(e >= 0 for e in exps):
            raise ValueError("class terms must have negative exponents")
        if exps != sorted(set(exps)):
            raise ValueError("class exponents must be distinct and increasing")

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[object, object]]) -> PuiseuxClass:
        """Normalize ``(exponent, coefficient)`` pairs into a class.

        Coefficients may be exact scalars or :class:`Coefficient` values.
        Nonnegative exponents are dropped and like terms combined.
        """
        acc: dict[tuple[Fraction, Fraction], Scalar] = {}
        for e, c in terms:
            e = Fraction(e)
            if e >= 0:
                continue
            c = c if isinstance(c, Coefficient) else Coefficient.make(c)
            key = (e, c.turns)
            acc[key] = scalar(acc.get(key, Fraction(0)) + c.base)
        by_exp: dict[Fraction, Coefficient] = {}
        for (e, t), b in sorted(acc.items()):
            if b == 0:
                continue
            if e in by_exp:
                raise ValueError(
                    f"cannot combine terms of z^({e}) with different root-of-unity factors")
            by_exp[e] = Coefficient(b, t)
        return cls(tuple(sorted(by_exp.items())))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __sub__(self, other: PuiseuxClass) -> list[tuple[Fraction, list[Coefficient]]]:
        """Termwise difference, kept as a list of coefficient pieces per exponent.

        A difference of rotated coefficients need not be a single rotated
        coefficient, so the result is not a class.
        """
        pieces: dict[Fraction, dict[Fraction, Scalar]] = {}
        for sign, cls_ in ((1, self), (-1, other)):
            for e, c in cls_.terms:
                slot = pieces.setdefault(e, {})
                slot[c.turns] = scalar(slot.get(c.turns, Fraction(0)) + sign * c.base)
        out = []
        for e in sorted(pieces):
            cs = [Coefficient(b, t) for t, b in sorted(pieces[e].items()) if b != 0]
            if cs:
                out.append((e, cs))
        return out

    def render(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*z^({e})" for e, c in self.terms)

    def __str__(self) -> str:
        return self.render()

    def to_json(self) -> dict:
        terms = []
        for e, c in self.terms:
            t = {"exp": str(e), "coeff": format_scalar(c.base)}
            if c.turns:
                t["turns"] = str(c.turns)
            terms.append(t)
        return {"terms": terms}

    @classmethod
    def from_json(cls, data: dict) -> PuiseuxClass:
        try:
            raw = data["terms"]
            return cls.from_terms(
                (Fraction(t["exp"]), Coefficient.make(parse_scalar(str(t["coeff"])),
                                                      Fraction(t.get("turns", "0"))))
                for t in raw)
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed class JSON: {exc}") from None


ZERO = PuiseuxClass()


# -- parser -----------------------------------------------------------------

_Poly = dict  # (exponent, turns) -> exact base


def _padd(a: _Poly, b: _Poly, sign: int = 1) -> _Poly:
    out = dict(a)
    for k, v in b.items():
        out[k] = scalar(out.get(k, Fraction(0)) + sign * v)
    return {k: v for k, v in out.items() if v != 0}


def _pmul(a: _Poly, b: _Poly) -> _Poly:
    out: _Poly = {}
    for (e1, t1), v1 in a.items():
        for (e2, t2), v2 in b.items():
            c = Coefficient.make(scalar(v1 * v2), t1 + t2)
            k = (e1 + e2, c.turns)
            out[k] = scalar(out.get(k, Fraction(0)) + c.base)
    return {k: v for k, v in out.items() if v != 0}


def _const(x: object, turns: Fraction = Fraction(0)) -> _Poly:
    c = Coefficient.make(x, turns)
    return {(Fraction(0), c.turns): c.base}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str, pos: int | None = None):
        raise ParseError(msg, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def parse(self) -> _Poly:
        value = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return value

    def expr(self) -> _Poly:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            value = _padd(value, self.term(), 1 if op == "+" else -1)
        return value

    def term(self) -> _Poly:
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.text[self.pos]
            at = self.pos
            self.pos += 1
            rhs = self.unary()
            if op == "*":
                value = _pmul(value, rhs)
            else:
                if len(rhs) != 1 or next(iter(rhs))[0] != 0:
                    self.error("division only by nonzero constants", at)
                (_, t), b = next(iter(rhs.items()))
                value = _pmul(value, _const(Fraction(1) / b, -t))
        return value

    def unary(self) -> _Poly:
        ch = self.peek()
        if ch in ("+", "-"):
            self.pos += 1
            v = self.unary()
            return v if ch == "+" else {k: scalar(-x) for k, x in v.items()}
        return self.power()

    def exponent(self) -> Fraction:
        paren = self.peek() == "("
        if paren:
            self.pos += 1
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        num = self.integer()
        den = 1
        if paren and self.peek() == "/":
            self.pos += 1
            at = self.pos
            den = self.integer()
            if den == 0:
                self.error("zero denominator in exponent", at)
        if paren:
            self.expect(")")
        return Fraction(sign * num, den)

    def power(self) -> _Poly:
        start = self.pos
        base = self.primary()
        if self.peek() == "^":
            self.pos += 1
            if len(base) != 1:
                self.error("only monomials can be raised to a power", start)
            (e, t), b = next(iter(base.items()))
            if b != 1 or t != 0:
                self.error("only z can be raised to a rational power", start)
            base = {(e * self.exponent(), Fraction(0)): Fraction(1)}
        return base

    def primary(self) -> _Poly:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            v = self.expr()
            self.expect(")")
            return v
        if ch.isdigit():
            n = self.integer()
            if self.pos < len(self.text) and self.text[self.pos] == "i":
                self.pos += 1
                return _const(scalar(n * I))
            return _const(n)
        if self.text.startswith("zeta", self.pos):
            self.pos += 4
            self.expect("(")
            sign = 1
            if self.peek() in ("+", "-"):
                sign = -1 if self.text[self.pos] == "-" else 1
                self.pos += 1
            num = self.integer()
            den = 1
            if self.peek() == "/":
                self.pos += 1
                at = self.pos
                den = self.integer()
                if den == 0:
                    self.error("zero denominator", at)
            self.expect(")")
            return _const(1, Fraction(sign * num, den))
        if ch == "z":
            self.pos += 1
            return {(Fraction(1), Fraction(0)): Fraction(1)}
        if ch == "i":
            self.pos += 1
            return _const(I)
        if not ch:
            self.error("unexpected end of input")
        self.error(f"unexpected {ch!r}")


def parse_class(text: str) -> PuiseuxClass:
    """Parse an expression like ``"(2/3)*z^(-3/2) - z^(-1) + 5"`` into a class."""
    poly = _Parser(text).parse()
    try:
        return PuiseuxClass.from_terms((e, Coefficient(b, t)) for (e, t), b in poly.items())
    except ValueError as exc:
        raise ParseError(str(exc), 0) from None


def ramification(c: PuiseuxClass) -> int:
    """Least ``l`` with every exponent in ``(1/l) Z``; 1 for the zero class."""
    l = 1
    for e, _ in c.terms:
        l = math.lcm(l, e.denominator)
    return l


def conjugate(c: PuiseuxClass, j: int) -> PuiseuxClass:
    """Image of ``c`` under the ``j``-th deck transformation."""
    return PuiseuxClass(tuple((e, coeff.rotate(j * e)) for e, coeff in c.terms))


def deck_conjugates(c: PuiseuxClass) -> list[PuiseuxClass]:
    """The deck orbit of ``c``, starting with ``c`` itself.

    Its size is exactly ``ramification(c)``: with ``l`` the lcm of the
    exponent denominators, no proper power of the generator fixes every term.
    """
    return [conjugate(c, j) for j in range(ramification(c))]


def evaluate_re(c: PuiseuxClass, eps: object, theta: float) -> float:
    """``Re c(eps * e^{i theta})`` on the branch where ``z^e = eps^e e^{i e theta}``."""
    eps = float(Fraction(eps)) if not isinstance(eps, float) else eps
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    total = 0.0
    for e, coeff in c.terms:
        a = coeff.arg().radians
        total += coeff.modulus * eps ** float(e) * math.cos(a + float(e) * theta)
    return total


# -- formal types -----------------------------------------------------------

@dataclass(frozen=True)
class FormalType:
    """A finite set of distinct classes closed under deck conjugation.

    ``orbits`` lists, per deck orbit, the representative (first class met in
    input order); the sheets of an orbit are its conjugates 0..l-1.
    """

    classes: tuple
    orbits: tuple = field(init=False)

    def __post_init__(self):
        if len(set(self.classes)) != len(self.classes):
            raise FormalTypeError("formal type classes must be pairwise distinct")
        present = set(self.classes)
        seen: set = set()
        orbits = []
        for c in self.classes:
            if c in seen:
                continue
            orbit = deck_conjugates(c)
            missing = [o for o in orbit if o not in present]
            if missing:
                raise FormalTypeError(
                    f"deck orbit of {c.render()} is incomplete; missing {missing[0].render()}")
            seen.update(orbit)
            orbits.append(c)
        object.__setattr__(self, "orbits", tuple(orbits))

    @classmethod
    def closure(cls, classes: Sequence[PuiseuxClass]) -> FormalType:
        """Formal type generated by ``classes``: conjugates added, duplicates dropped."""
        out: list[PuiseuxClass] = []
        for c in classes:
            for o in deck_conjugates(c):
                if o not in out:
                    out.append(o)
        return cls(tuple(out))

    @classmethod
    def parse(cls, exprs: Sequence[str]) -> FormalType:
        return cls.closure([parse_class(x) for x in exprs])

    def sheets(self) -> list[tuple[int, int, PuiseuxClass]]:
        """``(orbit id, sheet index, sheet class)`` per strand, in strand-id order."""
        out = []
        for k, rep in enumerate(self.orbits):
            for j, conj in enumerate(deck_conjugates(rep)):
                out.append((k, j, conj))
        return out

    def to_json(self) -> dict:
        return {"classes": [c.to_json() for c in self.classes]}

    @classmethod
    def from_json(cls, data: dict) -> FormalType:
        try:
            raw = data["classes"]
        except (KeyError, TypeError):
            raise ValueError("formal type JSON needs a 'classes' list") from None
        return cls.closure([PuiseuxClass.from_json(c) for c in raw])
