import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from legschober.exactla import ExactMatrix, ShapeMismatch, is_invertible
from legschober.sheafline import (
    DiskBeilinson,
    IndexOutOfRange,
    LinePoints,
    LineSheaf,
    NotAFlag,
    decategorify_line,
    flag_from_blocks,
    microstalk_line,
    monodromy_beilinson,
    validate_beilinson,
    validate_line,
)

M = ExactMatrix.from_rows


def sheaf(signs, dims, maps):
    return LineSheaf(tuple(dims), tuple(maps), tuple(signs))


def check(s):
    return validate_line(LinePoints(s.coorientations), s)


def test_inclusion_passes():
    assert check(sheaf("-", [1, 2], [M([[1], [0]])])).passed


def test_zero_map_fails_at_half():
    r = check(sheaf("-", [1, 2], [M([[0], [0]])]))
    assert not r.passed
    assert [f["where"] for f in r.failures] == ["1/2"]


def test_skyscraper_like():
    s = sheaf("-+", [0, 1, 0], [ExactMatrix.zeros(1, 0), ExactMatrix.zeros(1, 0)])
    assert check(s).passed


def test_direction_and_shape_errors():
    r = check(sheaf("+", [1, 2], [M([[1], [0]])]))
    assert [f["kind"] for f in r.failures] == ["direction"]
    with pytest.raises(ShapeMismatch):
        check(sheaf("-", [1, 2], [M([[1, 0, 0]])]))
    with pytest.raises(ShapeMismatch):
        check(sheaf("--", [1, 2], [M([[1], [0]])]))


def test_microstalks():
    assert microstalk_line(sheaf("-", [1, 2], [M([[1], [0]])]), 0).quotient_dim == 1
    assert microstalk_line(sheaf("-", [2, 2], [M([[1, 1], [0, 1]])]), 0).quotient_dim == 0
    assert microstalk_line(sheaf("-", [0, 2], [ExactMatrix.zeros(2, 0)]), 0).quotient_dim == 2
    with pytest.raises(IndexOutOfRange):
        microstalk_line(sheaf("-", [1, 2], [M([[1], [0]])]), 1)


def test_beilinson_examples():
    one, neg = M([[1]]), M([[-1]])
    assert not validate_beilinson(DiskBeilinson(1, 1, one, one)).passed
    b = DiskBeilinson(1, 1, one, neg)
    assert validate_beilinson(b).passed
    assert monodromy_beilinson(b) == M([[2]])
    assert validate_beilinson(DiskBeilinson(0, 1, ExactMatrix.zeros(1, 0),
                                            ExactMatrix.zeros(0, 1))).passed
    z = DiskBeilinson(2, 2, ExactMatrix.zeros(2, 2), ExactMatrix.zeros(2, 2))
    assert monodromy_beilinson(z) == ExactMatrix.identity(2)


def test_beilinson_rank_one_monodromy():
    # f: V -> W is the column (1, 0), g: W -> V the row (0, 1); the map on W is id - f g
    b = DiskBeilinson(1, 2, M([[1], [0]]), M([[0, 1]]))
    assert monodromy_beilinson(b) == M([[1, -1], [0, 1]])


def test_beilinson_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        validate_beilinson(DiskBeilinson(1, 2, M([[1]]), M([[1]])))


def test_decategorify_examples():
    s = decategorify_line(flag_from_blocks([[[1, 0]], [[0, 1]]], 2), "-", 2)
    assert s.dims == (1, 2) and check(s).passed
    s = decategorify_line(flag_from_blocks([[[1]]], 1), "", 1)
    assert s.dims == (1,) and s.maps == ()
    e = [[[1, 0, 0]], [[0, 1, 0]], [[0, 0, 1]]]
    s = decategorify_line(flag_from_blocks(e, 3), "--", 3)
    assert [microstalk_line(s, i).quotient_dim for i in range(2)] == [1, 1]


def test_not_a_flag():
    with pytest.raises(NotAFlag):
        decategorify_line([[[1, 0]], [[0, 1]]], "-", 2)


def test_json_round_trip():
    s = sheaf("-+", [1, 2, 1], [M([[1], [0]]), M([[0], [1]])])
    assert LineSheaf.from_json(s.to_json()) == s


def random_matrix(rng, r, c):
    return [[rng.randint(-2, 2) for _ in range(c)] for _ in range(r)]


def test_injectivity_agrees_with_sympy():
    rng = random.Random(7)
    for _ in range(200):
        a, b = rng.randint(0, 3), rng.randint(0, 4)
        rows = random_matrix(rng, b, a)
        s = sheaf("-", [a, b], [ExactMatrix.from_rows(rows, a)])
        injective = a == 0 or sympy.Matrix(b, a, [x for r in rows for x in r]).rank() == a
        assert check(s).passed == injective


def random_mixed_flag(rng, n, dim):
    """Subspaces whose nesting follows random co-orientations."""
    signs = "".join(rng.choice("+-") for _ in range(n))
    spans = [[[rng.randint(-2, 2) for _ in range(dim)] for _ in range(rng.randint(0, dim))]]
    for sgn in signs:
        prev = spans[-1]
        if sgn == "-":
            extra = [[rng.randint(-2, 2) for _ in range(dim)] for _ in range(rng.randint(0, 2))]
            spans.append(prev + extra)
        else:
            spans.append(prev[: rng.randint(0, len(prev))])
    return spans, signs


def test_decategorify_round_trip_mixed():
    rng = random.Random(11)
    for _ in range(200):
        dim = rng.randint(1, 4)
        spans, signs = random_mixed_flag(rng, rng.randint(0, 4), dim)
        assert check(decategorify_line(spans, signs, dim)).passed


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 2), min_size=1, max_size=4))
def test_telescoping_all_negative(block_sizes):
    dim = sum(block_sizes)
    basis = [[int(i == j) for j in range(dim)] for i in range(dim)]
    blocks, k = [], 0
    for size in block_sizes:
        blocks.append(basis[k:k + size])
        k += size
    s = decategorify_line(flag_from_blocks(blocks, dim), "-" * (len(blocks) - 1), dim)
    stalks = sum(microstalk_line(s, i).quotient_dim for i in range(len(s.maps)))
    assert s.dims[-1] == s.dims[0] + stalks


def test_monodromy_invertible_when_valid():
    rng = random.Random(3)
    for _ in range(100):
        v, w = rng.randint(0, 2), rng.randint(1, 3)
        b = DiskBeilinson(v, w, ExactMatrix.from_rows(random_matrix(rng, w, v), v),
                          ExactMatrix.from_rows(random_matrix(rng, v, w), w))
        if validate_beilinson(b).passed:
            assert is_invertible(monodromy_beilinson(b))
