"""Bundled worked examples: the Airy front, N-spherical fronts and a gluing datum."""

from __future__ import annotations

from fractions import Fraction

from .exactla import ExactMatrix
from .front import FrontDiagram, build_front
from .mutation import EulerLattice, SODPair, mutation_period
from .puiseux import FormalType
from .schober import IrregularGluing, StokesSchoberShadow, decategorify_schober, sheaf_from_faces
from .sheafknot import FrontSheaf

DEMO_EPSILON = Fraction(1, 10)

AIRY_TYPE = ("(2/3)*z^(-3/2)",)


def rank2_lattice(chi12: int) -> EulerLattice:
    return EulerLattice.from_rows([[1, chi12], [0, 1]])


def airy_front(eps: Fraction = DEMO_EPSILON) -> FrontDiagram:
    return build_front(FormalType.parse(AIRY_TYPE), eps)


def airy_shadow(eps: Fraction = DEMO_EPSILON) -> StokesSchoberShadow:
    """Lines ``<e1>``, ``<e2>`` with ``chi(e1, e2) = 1``; three mutations close up."""
    return StokesSchoberShadow.propagate(airy_front(eps), rank2_lattice(1), [[(1, 0)], [(0, 1)]])


def airy_sheaf(eps: Fraction = DEMO_EPSILON) -> FrontSheaf:
    return decategorify_schober(airy_shadow(eps))


def spherical_type(n: int) -> FormalType:
    return FormalType.parse([f"z^(-{n})", f"i*z^(-{n})"])


def spherical_front(n: int, eps: Fraction = DEMO_EPSILON) -> FrontDiagram:
    return build_front(spherical_type(n), eps)


def spherical_pair() -> SODPair:
    """Orthogonal lines; the K0 mutation period is 2, dividing every ``2N``."""
    return SODPair(rank2_lattice(0), ((1, 0),), ((0, 1),))


def spherical_shadow(n: int, eps: Fraction = DEMO_EPSILON) -> StokesSchoberShadow:
    p = spherical_pair()
    return StokesSchoberShadow.propagate(spherical_front(n, eps), p.lattice,
                                         [list(p.blockA), list(p.blockB)])


def spherical_period() -> int | None:
    return mutation_period(spherical_pair(), 100)


GLUING_LINES = ((1, 0), (0, 1), (1, 1), (1, -1))


def gluing_sheaf(eps: Fraction = DEMO_EPSILON) -> FrontSheaf:
    """Type ``{0, z^-2}``: four lines in ``Q^2`` between the strands, monodromy ``[2]``."""
    d = build_front(FormalType.parse(["0", "z^(-2)"]), eps)
    subspaces = {}
    for k in range(d.sectors):
        line = GLUING_LINES[k % len(GLUING_LINES)]
        subspaces[(k, 0)] = []
        subspaces[(k, 1)] = [line]
        subspaces[(k, 2)] = [(1, 0), (0, 1)]
    return sheaf_from_faces(d, subspaces, 2, stwz_mode=True)


def gluing_example(g: int = -1, eps: Fraction = DEMO_EPSILON) -> IrregularGluing:
    """``V = Q``, ``f = [1]``, ``g = [g]``; passes exactly when ``1 - g = 2``."""
    s = gluing_sheaf(eps)
    return IrregularGluing(s, s.front.zero_strand, 1, ExactMatrix.from_rows([[1]]),
                           ExactMatrix.from_rows([[g]]))
