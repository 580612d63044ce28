"""Exact scalar arithmetic and fraction-free linear algebra.

The frozen examples come first, then randomized oracles comparing the
exact elimination against float evaluation, then hypothesis properties
for the field axioms and rank invariance.
"""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fusionhom.exactarith import (
    RF_ONE,
    RF_ZERO,
    DimensionMismatch,
    IntPoly,
    PoleAtPoint,
    RatFunc,
    SparseMat,
    eval_float,
    float_rank,
    in_span,
    kernel_basis,
    mat_vec,
    parse_scalar,
    poly_gcd,
    rank,
    ratfunc_arith,
    span_solve,
)

DELTA = RatFunc.delta()


def test_intpoly_zero_degree():
    assert IntPoly([]).degree == -1
    assert IntPoly([0, 0]).degree == -1
    assert IntPoly([3]).degree == 0
    assert IntPoly([0, 1]).degree == 1


def test_intpoly_trims_and_evaluates():
    p = IntPoly([1, 2, 0, 0])
    assert p.degree == 1
    assert p.eval(3) == 7
    q = IntPoly([-1, 0, 1])  # delta^2 - 1
    assert q.eval(2) == 3


def test_divexact_recovers_factor():
    a = IntPoly([-1, 0, 1])
    b = IntPoly([-1, 1])
    assert a.divexact(b) == IntPoly([1, 1])


def test_poly_gcd_common_factor():
    a = IntPoly([-1, 0, 1])          # (delta-1)(delta+1)
    b = IntPoly([1, -2, 1])          # (delta-1)^2
    g = poly_gcd(a, b)
    assert g == IntPoly([-1, 1])


def test_mul_monomials():
    assert ratfunc_arith(DELTA, DELTA, "mul") == RatFunc.delta_power(2)


def test_div_cancels_factor():
    num = RatFunc(IntPoly([-1, 0, 1]))
    den = RatFunc(IntPoly([-1, 1]))
    assert ratfunc_arith(num, den, "div") == DELTA + RF_ONE


def test_reduce_then_add():
    # (delta^2 + delta)/delta + 1 = delta + 2, which is 5 at delta=3
    q = RatFunc(IntPoly([0, 1, 1]), IntPoly([0, 1]))
    total = ratfunc_arith(q, RF_ONE, "add")
    assert total == DELTA + RatFunc.from_int(2)
    assert total.eval_float(3.0) == 5.0


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ratfunc_arith(RF_ONE, RF_ZERO, "div")


def test_eval_float_square():
    assert eval_float(RatFunc.delta_power(2), 2.0) == 4.0


def test_eval_float_pole():
    recip = RF_ONE / (DELTA - RF_ONE)
    with pytest.raises(PoleAtPoint):
        eval_float(recip, 1.0)


def test_eval_float_irrational_point():
    val = eval_float(DELTA + RF_ONE, math.sqrt(2))
    assert abs(val - 2.41421356) < 1e-8


def test_parse_scalar_round_trip():
    for text in ("delta", "delta^2 - 1", "(delta^2-1)/(delta-1)",
                 "1/2", "-3*delta + 7"):
        val = parse_scalar(text)
        assert parse_scalar(str(val)) == val


def test_parse_scalar_reduces():
    assert parse_scalar("(delta^2-1)/(delta-1)") == DELTA + RF_ONE


def _mat(rows):
    data = [[parse_scalar(x) if isinstance(x, str) else RatFunc.from_int(x)
             for x in row] for row in rows]
    return SparseMat.from_dense(data)


def test_rank_identity():
    assert rank(_mat([[1, 0], [0, 1]])) == 2


def test_rank_proportional_rows():
    assert rank(_mat([["delta", "delta^2"], [1, "delta"]])) == 1


def test_kernel_identity_empty():
    assert kernel_basis(_mat([[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == []


def test_kernel_of_row_vector():
    vecs = kernel_basis(_mat([["delta", -1]]))
    assert len(vecs) == 1
    assert vecs[0] == [RF_ONE, DELTA]


def test_in_span_first_column():
    m = _mat([["delta", 1], [0, "delta^2"], [1, 0]])
    first = [m[r, 0] for r in range(3)]
    assert in_span(first, m)


def test_in_span_rejects_new_direction():
    m = _mat([[1, 0], [0, 1], [0, 0]])
    v = [RF_ZERO, RF_ZERO, RF_ONE]
    assert not in_span(v, m)


def test_in_span_dimension_mismatch():
    m = _mat([[1, 0], [0, 1]])
    with pytest.raises(DimensionMismatch):
        in_span([RF_ONE], m)


def test_span_solve_reproduces_combination():
    m = _mat([["delta", 1], [1, 0], [0, "delta"]])
    col0 = [m[r, 0] for r in range(3)]
    col1 = [m[r, 1] for r in range(3)]
    target = [DELTA * a - b for a, b in zip(col0, col1)]
    coeffs = span_solve(m, target)
    assert coeffs == [DELTA, -RF_ONE]


def _random_matrix(rng, rows, cols, degree=3):
    entries = {}
    for r in range(rows):
        for c in range(cols):
            if rng.random() < 0.35:
                continue
            k = rng.randint(0, degree)
            sign = rng.choice((-1, 1))
            poly = IntPoly([0] * k + [sign])
            entries[r, c] = RatFunc(poly)
    return SparseMat(rows, cols, entries)


def test_float_rank_oracle_five_by_five():
    rng = random.Random(7)
    for _ in range(25):
        m = _random_matrix(rng, 5, 5)
        assert rank(m) == float_rank(m, 3.7)


def test_float_rank_three_points():
    rng = random.Random(11)
    for _ in range(30):
        m = _random_matrix(rng, rng.randint(2, 5), rng.randint(2, 5))
        exact = rank(m)
        for _ in range(3):
            assert float_rank(m, rng.uniform(2.1, 9.9)) == exact


def test_kernel_vectors_annihilate():
    rng = random.Random(13)
    for _ in range(20):
        m = _random_matrix(rng, rng.randint(2, 5), rng.randint(2, 6))
        for v in kernel_basis(m):
            assert all(x == RF_ZERO for x in mat_vec(m, v))


# ---------------------------------------------------------------------------
# hypothesis properties
# ---------------------------------------------------------------------------

small_polys = st.lists(st.integers(min_value=-3, max_value=3),
                       min_size=1, max_size=3).map(IntPoly)
nonzero_polys = small_polys.filter(bool)


@st.composite
def ratfuncs(draw):
    return RatFunc(draw(small_polys), draw(nonzero_polys))


@given(ratfuncs(), ratfuncs())
def test_add_then_subtract_is_identity(a, b):
    assert (a + b) - b == a


@given(ratfuncs(), ratfuncs(), ratfuncs())
@settings(max_examples=60)
def test_distributivity(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(ratfuncs())
def test_multiplicative_inverse(a):
    if a == RF_ZERO:
        return
    assert a * (RF_ONE / a) == RF_ONE


@given(ratfuncs(), ratfuncs())
def test_canonical_form_is_hashable_equality(a, b):
    if a == b:
        assert hash(a) == hash(b)


@given(st.integers(min_value=0, max_value=23))
def test_rank_invariant_under_permutation_and_scaling(seed):
    rng = random.Random(seed)
    m = _random_matrix(rng, 4, 4)
    base = rank(m)
    perm = list(range(4))
    rng.shuffle(perm)
    shuffled = SparseMat(4, 4, {(perm[r], c): v
                                for (r, c), v in m.entries.items()})
    assert rank(shuffled) == base
    scaled = SparseMat(4, 4, {(r, c): v * DELTA if r == 0 else v
                              for (r, c), v in m.entries.items()})
    assert rank(scaled) == base
