import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dualcat.linalg import (
    DualMatrix,
    DualScalar,
    Field,
    FieldMismatch,
    dual_unit_pivot_reduce,
    identity,
    inverse,
    matmul,
    random_dual_invertible,
    random_invertible,
    rank,
    solve_affine,
    zeros,
)


def test_gf_values_are_canonical(gf7):
    assert gf7(-1) == 6
    assert gf7(Fraction(1, 2)) == 4
    assert gf7.inv(3) == 5
    assert gf7.pow(3, -1) == 5


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        Field(6)


def test_parse_field():
    assert Field.parse("q").p is None
    assert Field.parse("gf:11").p == 11
    with pytest.raises(ValueError):
        Field.parse("reals")


def test_rationals_are_exact(qq):
    assert qq.div(1, 3) == Fraction(1, 3)
    assert qq.fmt(Fraction(-1, 2)) == "-1/2"


def test_dual_multiplication_kills_eps_squared(gf7):
    e = DualScalar.of(gf7, 0, 1)
    assert (e * e).is_zero()
    x = DualScalar.of(gf7, 2, 3)
    y = DualScalar.of(gf7, 4, 5)
    assert x * y == DualScalar.of(gf7, 8, 2 * 5 + 4 * 3)


def test_dual_inverse(field):
    x = DualScalar.of(field, 3, 5)
    assert x * x.inverse() == DualScalar.of(field, 1, 0)
    assert not DualScalar.of(field, 0, 1).is_unit()


def test_mixing_fields_is_an_error():
    with pytest.raises(FieldMismatch):
        DualScalar.of(Field(7), 1, 0) + DualScalar.of(Field(5), 1, 0)


def test_rank_examples(gf7):
    assert rank(identity(2, gf7), gf7) == 2
    assert rank(zeros(3, 4, gf7), gf7) == 0
    assert rank([[1, 2], [3, 6]], gf7) == 1


def test_solve_affine_examples(qq):
    x, basis = solve_affine(identity(2, qq), [3, 4], qq)
    assert list(x) == [3, 4] and not basis
    x, basis = solve_affine([[0]], [0], qq)
    assert list(x) == [0] and len(basis) == 1
    x, basis = solve_affine([[1, 1]], [1], qq)
    assert list(x) == [1, 0]
    assert len(basis) == 1 and basis[0][0] == -basis[0][1]


def test_solve_affine_inconsistent(qq):
    assert solve_affine([[0]], [1], qq) is None


def test_pivot_reduce_unit(gf7):
    R = dual_unit_pivot_reduce(DualMatrix.from_entries(gf7, [[(1, 0)]]))
    assert R.npivots == 1


def test_pivot_reduce_eps(gf7):
    M = DualMatrix.from_entries(gf7, [[(0, 1)]])
    R = dual_unit_pivot_reduce(M)
    assert R.npivots == 0 and R.reduced == M


def test_pivot_reduce_mixed(gf7):
    M = DualMatrix.from_entries(gf7, [[(1, 1), (0, 1)], [(0, 0), (0, 1)]])
    R = dual_unit_pivot_reduce(M)
    assert R.npivots == 1
    res = R.residual
    assert res.rows == 1 and res.a[0][0] == 0 and res.b[0][0] != 0
    assert R.P @ M @ R.Q == R.reduced


@given(st.integers(0, 10_000), st.integers(1, 5))
def test_random_invertible_has_inverse(seed, n):
    F = Field(7)
    rng = random.Random(seed)
    M = random_invertible(n, F, rng)
    assert matmul(M, inverse(M, F), F) == identity(n, F)
    D = random_dual_invertible(n, F, rng)
    assert D @ D.inverse() == DualMatrix.identity(F, n)


@given(st.integers(0, 10_000))
def test_pivot_reduce_is_a_factorization(seed):
    F = Field(7)
    rng = random.Random(seed)
    r, c = rng.randint(1, 4), rng.randint(1, 4)
    M = DualMatrix(F, r, c, [[F.random(rng) for _ in range(c)] for _ in range(r)],
                   [[F.random(rng) for _ in range(c)] for _ in range(r)])
    R = dual_unit_pivot_reduce(M)
    assert R.P @ M @ R.Q == R.reduced
    assert R.residual.is_minimal()
    assert R.npivots == rank(M.a, F)
