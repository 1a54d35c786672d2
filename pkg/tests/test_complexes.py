import random

import pytest
from hypothesis import given, settings, strategies as st

from dualcat.complexes import (
    ChainMap,
    ComplexError,
    FreeComplex,
    ModuleComplex,
    compose,
    cone,
    cone_inclusion,
    cone_projection,
    direct_sum,
    identity_map,
    indecomposable,
    is_nullhomotopic,
    shift,
    validate,
    zero_complex,
)
from dualcat.decomp import FormalObject, barcode, minimize, realize
from dualcat.homspace import hom_bruteforce
from dualcat.linalg import DualMatrix, Field, zeros


def scalar(F, a, b=0):
    return DualMatrix(F, 1, 1, [[F(a)]], [[F(b)]])


def eps_map(F, X, Y, n):
    return ChainMap(X, Y, {n: scalar(F, 0, 1)})


def test_indecomposable_is_valid(field):
    X3 = indecomposable(field, 3)
    assert validate(X3)
    assert X3.degrees == [-3, -2, -1]


def test_bad_differential_reports_degree(gf7):
    C = FreeComplex(gf7, {-3: 1, -2: 1, -1: 1}, {-3: scalar(gf7, 1, 1), -2: scalar(gf7, 1)})
    v = validate(C)
    assert not v and v.degree == -3


def test_empty_complex_is_valid(gf7):
    assert validate(zero_complex(gf7))


def _module(F, terms, typed):
    # typed: {n: {"ak"|"ka": matrix}}, other blocks zero
    diffs = {}
    for n, blocks in typed.items():
        f0, t0 = terms.get(n, (0, 0))
        f1, t1 = terms.get(n + 1, (0, 0))
        diffs[n] = (DualMatrix(F, f1, f0), blocks.get("ak", zeros(t1, f0, F)),
                    blocks.get("ka", zeros(f1, t0, F)), zeros(t1, t0, F))
    return ModuleComplex(F, terms, diffs)


def test_module_complex_typed_rules(gf7):
    # k -> A -> k composes to proj o incl = 0; A -> k -> A to incl o proj = eps
    ok = _module(gf7, {-2: (0, 1), -1: (1, 0), 0: (0, 1)}, {-2: {"ka": [[1]]}, -1: {"ak": [[1]]}})
    assert validate(ok)
    bad = _module(gf7, {-2: (1, 0), -1: (0, 1), 0: (1, 0)}, {-2: {"ak": [[1]]}, -1: {"ka": [[1]]}})
    v = validate(bad)
    assert not v and v.degree == -2


def test_shift_examples(gf7):
    X1, X2 = indecomposable(gf7, 1), indecomposable(gf7, 2)
    assert shift(X1, 0) == X1
    assert shift(X2, 1).degrees == [-3, -2]
    assert shift(X2, 1) == indecomposable(gf7, 2, 1)


@given(st.integers(1, 4), st.integers(-3, 3), st.integers(-3, 3))
def test_shift_is_additive(i, a, b):
    F = Field(7)
    X = indecomposable(F, i)
    assert shift(shift(X, a), b) == shift(X, a + b)


def test_direct_sum_examples(gf7):
    X1 = indecomposable(gf7, 1)
    assert direct_sum(X1, zero_complex(gf7)) == X1
    assert direct_sum(X1, X1).rank(-1) == 2
    X3 = indecomposable(gf7, 3, -1)
    S = direct_sum(X1, X3)
    assert all(S.rank(n) == X1.rank(n) + X3.rank(n) for n in range(-4, 2))


def test_cone_of_eps_is_x2(field):
    X1 = indecomposable(field, 1)
    assert barcode(cone(eps_map(field, X1, X1, -1))) == FormalObject.single(2)


def test_cone_of_identity_is_contractible(field):
    X = indecomposable(field, 3)
    assert minimize(cone(identity_map(X))).complex.is_zero()


def test_cone_of_zero_splits(gf7):
    X1 = indecomposable(gf7, 1)
    C = cone(ChainMap(X1, X1, {}))
    assert barcode(C) == FormalObject.of([(1, 0), (1, 1)])


def test_cone_rejects_invalid_source(gf7):
    bad = FreeComplex(gf7, {-2: 1, -1: 1, 0: 1}, {-2: scalar(gf7, 1), -1: scalar(gf7, 1)})
    with pytest.raises(ComplexError):
        cone(ChainMap(bad, bad, {}))


def test_zero_map_has_zero_homotopy(gf7):
    X = indecomposable(gf7, 2)
    s = is_nullhomotopic(ChainMap(X, X, {}))
    assert s is not None
    assert all(c.is_zero() for c in s.components.values())


def test_interior_eps_map_is_nullhomotopic(gf7):
    # eps in the interior of X_4, landing in X_1[1]; no generator exists there
    X, Y = indecomposable(gf7, 4), indecomposable(gf7, 1, 1)
    f = eps_map(gf7, X, Y, -2)
    assert f.is_chain_map()
    s = is_nullhomotopic(f)
    assert s is not None
    assert s.boundary().components[-2] == f.components[-2]


def test_eps_endomorphism_is_not_nullhomotopic(field):
    X1 = indecomposable(field, 1)
    assert is_nullhomotopic(eps_map(field, X1, X1, -1)) is None


def test_non_chain_map_detected(gf7):
    X2 = indecomposable(gf7, 2)
    f = ChainMap(X2, X2, {-1: scalar(gf7, 1)})
    assert not f.is_chain_map()


def _random_map(F, rng):
    X = realize(FormalObject.of([(rng.randint(1, 3), rng.randint(-1, 1)) for _ in range(rng.randint(1, 2))]), F)
    Y = realize(FormalObject.of([(rng.randint(1, 3), rng.randint(-1, 1)) for _ in range(rng.randint(1, 2))]), F)
    basis = hom_bruteforce(X, Y).basis
    f = ChainMap(X, Y, {})
    for b in basis:
        f = f + b.scale(F.random(rng))
    return f


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_triangle_composites_vanish(seed):
    F = Field(7)
    f = _random_map(F, random.Random(seed))
    assert f.is_chain_map()
    C = cone(f)
    i = cone_inclusion(f, C)
    p = cone_projection(f, C)
    assert i.is_chain_map() and p.is_chain_map()
    assert is_nullhomotopic(compose(i, f)) is not None
    assert is_nullhomotopic(compose(p, i)) is not None
