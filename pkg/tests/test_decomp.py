import random

import pytest
from hypothesis import given, settings, strategies as st

from dualcat.acceptance import random_formal, scrambled_sum
from dualcat.complexes import ComplexError, FreeComplex, compose, direct_sum, identity_map, indecomposable
from dualcat.decomp import (
    INF,
    FormalObject,
    barcode,
    cohomology,
    cohomology_direct,
    cohomology_of,
    contractible,
    format_index,
    k_class,
    minimize,
    parse_index,
    realize,
    scramble,
)
from dualcat.linalg import DualMatrix, Field


def test_formal_object_canonical_order():
    a = FormalObject.of([(2, 1), (1, 0), (1, 0)])
    b = FormalObject.of([(1, 0, 2), (2, 1)])
    assert a == b
    assert a.summands == ((1, 0, 2), (2, 1, 1))
    assert str(a) == "2*X_1 + X_2[1]"
    assert not a.is_zero() and a.is_perfect()
    assert not FormalObject.single(INF).is_perfect()


def test_index_parsing():
    assert parse_index("inf") == INF
    assert parse_index("3") == 3
    assert format_index(INF) == "inf"
    with pytest.raises(ValueError):
        parse_index("0")


def test_minimize_contractible(field):
    assert minimize(contractible(field, -2)).complex.is_zero()


def test_minimize_keeps_minimal(field):
    X3 = indecomposable(field, 3)
    assert minimize(X3).complex == X3


def test_minimize_cancels_one_pivot(field):
    C = direct_sum(indecomposable(field, 2), contractible(field, -2))
    M = minimize(C)
    assert barcode(M.complex) == FormalObject.single(2)
    assert M.inclusion.is_chain_map() and M.projection.is_chain_map()
    assert compose(M.projection, M.inclusion).components == identity_map(M.complex).components


def test_minimize_rejects_invalid(gf7):
    one = DualMatrix(gf7, 1, 1, [[1]], [[0]])
    bad = FreeComplex(gf7, {-2: 1, -1: 1, 0: 1}, {-2: one, -1: one})
    with pytest.raises(ComplexError):
        minimize(bad)


def test_barcode_examples(gf7):
    assert barcode(indecomposable(gf7, 3)) == FormalObject.of([(3, 0, 1)])
    split = FreeComplex(gf7, {-2: 1, -1: 1})
    assert barcode(split) == FormalObject.of([(1, 1), (1, 0)])


def test_barcode_of_scrambled_sum(gf7):
    rng = random.Random(5)
    target = FormalObject.of([(1, 0), (2, 0)])
    assert barcode(scramble(realize(target, gf7), rng)) == target


def test_cohomology_examples(gf7):
    assert cohomology(indecomposable(gf7, 1)).as_dict() == {-1: (1, 0)}
    assert cohomology(indecomposable(gf7, 3)).as_dict() == {-3: (0, 1), -1: (0, 1)}
    F = FormalObject.of([(2, 0), (1, 2)])
    assert cohomology_of(F).as_dict() == {-3: (1, 0), -2: (0, 1), -1: (0, 1)}


def test_cohomology_rejects_infinite():
    with pytest.raises(ValueError):
        cohomology_of(FormalObject.single(INF))


def test_k_class_examples():
    assert k_class(FormalObject.single(1)) == 2
    assert k_class(FormalObject.single(2)) == 0
    assert k_class(FormalObject.single(INF, 1)) == -1
    assert k_class(FormalObject.single(3)) == 2


def test_realize_infinite_needs_truncation(gf7):
    with pytest.raises(ValueError):
        realize(FormalObject.single(INF), gf7)
    C = realize(FormalObject.single(INF, 1), gf7, truncate_at=-6)
    assert C.degrees == [-6, -5, -4, -3, -2]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_barcode_roundtrip(seed):
    rng = random.Random(seed)
    F = Field(7)
    Fo = random_formal(rng)
    C = scrambled_sum(Fo, F, rng)
    assert barcode(C) == Fo
    # cohomology from the barcode agrees with the k-model computation
    prof = cohomology_of(Fo)
    direct = cohomology_direct(C)
    for n in set(direct) | {n for n, _ in prof.degrees}:
        assert prof.kdim(n) == direct.get(n, 0)


@given(st.integers(0, 10_000))
def test_k_class_is_additive(seed):
    rng = random.Random(seed)
    a, b = random_formal(rng), random_formal(rng)
    s = rng.randint(-3, 3)
    assert k_class(a + b) == k_class(a) + k_class(b)
    assert k_class(a.shift(s)) == (-1) ** (s % 2) * k_class(a)
