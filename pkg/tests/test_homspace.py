import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from dualcat.complexes import compose, indecomposable
from dualcat.decomp import INF, FormalObject
from dualcat.homspace import (
    GeneratorRef,
    Kind,
    MissingGenerator,
    SymMorphism,
    SymMorphismError,
    compose_generators,
    compose_sym,
    cone_symbolic,
    default_truncation,
    generator_rep,
    hom_bruteforce,
    hom_infty,
    hom_table,
    identify,
    truncation_bound,
)
from dualcat.linalg import Field

ONE, EPS = Kind.ONE, Kind.EPS


def gen(s, t, kind):
    return GeneratorRef(s, t, kind)


def test_hom_table_examples():
    d = hom_table(1, 1, 0)
    assert (d.dim, d.has_one_type, d.has_eps_type) == (2, True, True)
    d = hom_table(2, 1, 1)
    assert (d.dim, d.has_one_type, d.has_eps_type) == (1, True, False)
    assert hom_table(5, 3, -3).dim == 0


def test_hom_table_infinite_examples():
    assert hom_table(INF, INF, 1).dim == 1
    assert hom_table(INF, INF, -1).dim == 0
    d = hom_table(INF, 2, 0)
    assert d.dim == 1 and d.has_eps_type
    assert hom_table(3, INF, 3).dim == 0
    assert hom_table(3, INF, 2).has_one_type


def test_bruteforce_examples(field):
    X1 = indecomposable(field, 1)
    assert hom_bruteforce(X1, X1).dim == 2
    assert hom_bruteforce(indecomposable(field, 2), indecomposable(field, 1, 1)).dim == 1


def test_bruteforce_basis_are_chain_maps(gf7):
    res = hom_bruteforce(indecomposable(gf7, 3), indecomposable(gf7, 2, 1))
    assert len(res.basis) == res.dim
    assert all(b.is_chain_map() for b in res.basis)


@pytest.mark.parametrize("i,j", [(1, 4), (3, 2), (4, 4), (2, 5)])
def test_hom_dimension_is_symmetric(i, j):
    # dim hom(X_i, X_j[a]) = dim hom(X_j, X_i[-a])
    for a in range(-6, 7):
        assert hom_table(i, j, a).dim == hom_table(j, i, -a).dim


def test_generator_rep_examples(gf7):
    f = generator_rep(gen((1, 0), (2, 0), ONE), gf7)
    assert set(f.components) == {-1}
    assert f.components[-1].a == [[1]] and f.components[-1].b == [[0]]
    f = generator_rep(gen((2, 0), (1, 0), EPS), gf7)
    assert set(f.components) == {-1}
    assert f.components[-1].a == [[0]] and f.components[-1].b == [[1]]
    f = generator_rep(gen((1, 0), (1, 0), EPS), gf7)
    assert f.components[-1].b == [[1]]


def test_missing_generator_raises(gf7):
    with pytest.raises(MissingGenerator):
        generator_rep(gen((5, 0), (3, -3), ONE), gf7)


def _all_generators(objs):
    for s, t in itertools.product(objs, repeat=2):
        for kind in Kind:
            g = gen(s, t, kind)
            if g.exists():
                yield g


FINITE = [(i, h) for i in (1, 2, 3) for h in (-1, 0, 1)]
MIXED = FINITE + [(INF, h) for h in (-1, 0, 1)]


@pytest.mark.parametrize("field", [Field(7), Field(None)], ids=["gf7", "qq"])
def test_generator_reps_are_chain_maps_and_identify(field):
    for g in _all_generators(MIXED):
        rep = generator_rep(g, field)
        assert rep.is_chain_map(), g
        assert identify(rep, g.source, g.target) == ((1, 0) if g.kind is ONE else (0, 1)), g


def test_identify_is_linear(gf7):
    g = gen((1, 0), (1, 0), EPS)
    assert identify(generator_rep(g, gf7).scale(3), (1, 0), (1, 0)) == (0, 3)


def test_identify_two_one_composite(gf7):
    g1, g2 = gen((2, 0), (3, 1), ONE), gen((3, 1), (4, 1), ONE)
    c = compose(generator_rep(g2, gf7), generator_rep(g1, gf7))
    assert identify(c, (2, 0), (4, 1)) == (1, 0)


def test_compose_sym_examples(gf7):
    one12 = SymMorphism.generator(gf7, gen((1, 0), (2, 0), ONE))
    eps21 = SymMorphism.generator(gf7, gen((2, 0), (1, 0), EPS))
    assert compose_sym(one12, eps21) == SymMorphism.generator(gf7, gen((2, 0), (2, 0), EPS))
    assert compose_sym(eps21, one12) == SymMorphism.generator(gf7, gen((1, 0), (1, 0), EPS))
    e = SymMorphism.generator(gf7, gen((1, 0), (1, 0), EPS))
    assert compose_sym(e, e).is_zero()


def test_compose_sym_identity(gf7):
    X = FormalObject.of([(1, 0), (2, 1)])
    f = SymMorphism(gf7, X, X, {(0, 0): (2, 3), (1, 1): (1, 0)})
    I = SymMorphism.identity(gf7, X)
    assert compose_sym(I, f) == f and compose_sym(f, I) == f


def test_sym_morphism_validates_blocks(gf7):
    X = FormalObject.single(5)
    Y = FormalObject.single(3, -3)
    with pytest.raises(SymMorphismError):
        SymMorphism(gf7, X, Y, {(0, 0): (1, 0)})
    with pytest.raises(SymMorphismError):
        compose_sym(SymMorphism.identity(gf7, X), SymMorphism.identity(gf7, Y))


def test_eps_after_eps_is_always_zero():
    for a, b, c in itertools.product(MIXED, repeat=3):
        assert compose_generators(EPS, EPS, a, b, c) is None


def test_infinite_compositions_match_concrete(gf7):
    # every composable generator pair through X_inf, realized truncated
    seen = 0
    for g1 in _all_generators(MIXED):
        for k2 in Kind:
            for t in MIXED:
                g2 = gen(g1.target, t, k2)
                if not g2.exists() or INF not in (g1.source[0], g1.target[0], t[0]):
                    continue
                L = default_truncation(g1.source, g1.target, t) - 2
                c = compose(generator_rep(g2, gf7, L), generator_rep(g1, gf7, L))
                kind = compose_generators(k2, g1.kind, g1.source, g1.target, t)
                want = (0, 0) if kind is None else ((1, 0) if kind is ONE else (0, 1))
                assert identify(c, g1.source, t, L) == want, (g1, g2)
                seen += 1
    assert seen > 100


def _random_sym(F, rng, src):
    choices = [g for g in _all_generators([src] + FINITE) if g.source == src]
    g = rng.choice(choices)
    return SymMorphism.generator(F, g, F.random(rng, True))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000))
def test_composition_is_associative(seed):
    rng = random.Random(seed)
    F = Field(7)
    f = _random_sym(F, rng, rng.choice(FINITE))
    g = _random_sym(F, rng, f.target.expanded()[0])
    h = _random_sym(F, rng, g.target.expanded()[0])
    assert compose_sym(h, compose_sym(g, f)) == compose_sym(compose_sym(h, g), f)


def test_cone_symbolic_examples(gf7):
    assert cone_symbolic(gen((1, 0), (1, 0), EPS), gf7) == FormalObject.single(2)
    assert cone_symbolic(gen((1, 0), (1, 0), ONE), gf7).is_zero()
    # rotating X_1 -> X_1 -> X_2 -> X_1[1] puts the third vertex at X_1[1]
    assert cone_symbolic(gen((2, 0), (1, 1), ONE), gf7) == FormalObject.single(1, 1)
    assert cone_symbolic(gen((1, 0), (2, 0), ONE), gf7) == FormalObject.single(1, 1)


def test_cone_symbolic_ignores_nonzero_scalar(gf7):
    g = gen((3, 0), (2, 0), EPS)
    assert cone_symbolic(g, gf7, 5) == cone_symbolic(g, gf7)
    with pytest.raises(ValueError):
        cone_symbolic(g, gf7, 0)


def test_cone_symbolic_infinite(gf7):
    assert cone_symbolic(gen((INF, 0), (1, 0), EPS), gf7) == FormalObject.single(INF)
    assert cone_symbolic(gen((1, 0), (INF, 0), ONE), gf7) == FormalObject.single(INF, 1)
    assert cone_symbolic(gen((INF, 0), (INF, 2), ONE), gf7) == FormalObject.single(2, 1)
    assert cone_symbolic(gen((INF, 0), (3, 0), EPS), gf7) == FormalObject.of([(INF, 0), (2, 1)])


def test_hom_infty_examples(gf7):
    assert hom_infty(INF, INF, 1, truncation_bound(INF, 1), gf7) == 1
    assert hom_infty(INF, 2, 0, truncation_bound(2, 0), gf7) == 1
    assert hom_infty(3, INF, 3, 5, gf7) == 0
    assert hom_infty(3, INF, 2, 5, gf7) == 1


def test_hom_infty_below_bound(gf7):
    with pytest.raises(ValueError):
        hom_infty(INF, 2, 3, truncation_bound(2, 3) - 1, gf7)


def test_hom_infty_is_stable():
    for j, a in itertools.product([1, 2, 4, INF], range(-3, 4)):
        N = truncation_bound(j, a)
        assert hom_infty(INF, j, a, N) == hom_infty(INF, j, a, N + 1) == hom_table(INF, j, a).dim
