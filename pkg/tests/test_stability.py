import cmath
import math
import random

import pytest
from hypothesis import given, strategies as st

from dualcat.acceptance import random_object, random_sigma
from dualcat.decomp import INF, FormalObject, k_class
from dualcat.stability import (
    GroupElem,
    StabilityCondition,
    act,
    central_charge,
    chart,
    chart_inv,
    check_heart,
    cone_closure,
    group_chart,
    hn_filtration,
    hn_mass,
    negative_hom_witness,
    positive_hom_witness,
    silting_search,
    survey_hearts,
    transitivity_witness,
)

sigmas = st.builds(
    StabilityCondition,
    st.integers(-5, 5),
    st.floats(0.01, 100.0),
    st.floats(0.001, 1.0),
)
groups = st.builds(GroupElem, st.floats(0.01, 100.0), st.floats(-5.0, 5.0))


def test_cone_closure():
    assert cone_closure({1}) == frozenset({1, 2, 3, 4, 5, 6})
    assert INF in cone_closure({INF}) and 1 in cone_closure({INF})


def test_heart_examples():
    assert check_heart([(1, 0), (INF, 0)])
    v = check_heart([(INF, 0)])
    assert not v and v.stage == "b" and "X_1" in v.reason
    v = check_heart([(1, 0)])
    assert not v and v.stage == "c" and "X_inf" in v.reason


def test_heart_rejects_negative_homs():
    v = check_heart([(1, 0), (1, 1)])
    assert not v and v.stage == "a"
    assert negative_hom_witness((1, 0), (1, 1)) is not None


def test_heart_survey_is_unique_up_to_shift():
    s = survey_hearts(4, 3)
    assert sorted(s.accepted(), key=lambda c: c[0][1]) == [((1, h), (INF, h)) for h in range(-3, 4)]
    assert s.explain([(1, 0), (INF, 1)]).stage in ("a", "b", "c")
    assert not s.explain([(2, 0), (1, 0), (INF, 0)])


def test_sigma_validation():
    with pytest.raises(ValueError):
        StabilityCondition(0, 0.0, 0.5)
    with pytest.raises(ValueError):
        StabilityCondition(0, 1.0, 0.0)
    s = StabilityCondition.from_psi(2.0, 1.0)
    assert (s.h, s.phi) == (1, 1.0)


def test_hn_examples():
    s = StabilityCondition(0, 1.0, 0.5)
    f = hn_filtration(s, FormalObject.single(2, -1))
    assert [(x.phase, x.object) for x in f] == [
        (0.5, FormalObject.single(INF, 0)), (-0.5, FormalObject.single(INF, -1))]
    t = StabilityCondition(2, 3.0, 0.25)
    f = hn_filtration(t, FormalObject.single(1))
    assert len(f) == 1 and f[0].phase == pytest.approx(0.25 - 2)
    f = hn_filtration(StabilityCondition(0, 1.0, 1.0), FormalObject.of([(3, 0), (1, 2)]))
    assert [x.phase for x in f] == [3.0, 1.0]
    assert f[0].object == FormalObject.of([(1, 2), (INF, 2)])


@pytest.mark.parametrize("i", range(2, 9))
def test_hn_of_shifted_indecomposable(i):
    s = StabilityCondition(1, 2.0, 0.75)
    f = hn_filtration(s, FormalObject.single(i, -i + 1))
    psi0 = s.phi - s.h
    assert [(x.phase, x.object) for x in f] == [
        (psi0, FormalObject.single(INF, 0)),
        (psi0 - i + 1, FormalObject.single(INF, -i + 1))]


def test_central_charge_examples():
    s = StabilityCondition(1, 2.0, 0.3)
    assert central_charge(s, FormalObject.single(INF, 1)) == pytest.approx(s.v)
    assert central_charge(s, FormalObject.single(1, 1)) == pytest.approx(2 * s.v)
    assert abs(central_charge(s, FormalObject.single(2, 1))) < 1e-12
    assert hn_mass(s, FormalObject.single(2, 1)) == pytest.approx(2 * s.mass)


@given(st.integers(0, 100_000))
def test_hn_phases_decrease_and_charge_matches(seed):
    rng = random.Random(seed)
    s, F = random_sigma(rng), random_object(rng)
    phases = [f.phase for f in hn_filtration(s, F)]
    assert all(a > b for a, b in zip(phases, phases[1:]))
    central_charge(s, F)


def test_k_class_relation():
    assert k_class(FormalObject.single(1)) == 2 * k_class(FormalObject.single(INF))


def test_group_action_examples():
    s = StabilityCondition(0, 1.0, 0.5)
    assert act(GroupElem.identity(), s) == s
    r = act(GroupElem(1.0, 1.0), s)
    assert (r.h, r.phi) == (-1, 0.5)
    g = transitivity_witness(StabilityCondition(0, 1.0, 1.0), s)
    assert (g.kappa, g.theta) == (1.0, 0.5)
    assert transitivity_witness(s, s) == GroupElem.identity()


def test_chart_example():
    assert chart(StabilityCondition(0, 1.0, 1.0)) == pytest.approx(1j * math.pi)


@given(sigmas, groups, groups)
def test_right_action(s, g1, g2):
    assert act(g2, act(g1, s)).close_to(act(g1 * g2, s), 1e-9)
    assert act(g1.inverse(), act(g1, s)).close_to(s, 1e-9)


@given(sigmas, sigmas)
def test_witness_roundtrip(s1, s2):
    assert act(transitivity_witness(s1, s2), s1).close_to(s2, 1e-9)


@given(sigmas, groups)
def test_chart_is_translation(s, g):
    assert chart_inv(chart(s)).close_to(s, 1e-9)
    lhs = chart(act(g, s))
    rhs = chart(s) - group_chart(g)
    assert cmath.isclose(lhs, rhs, abs_tol=1e-9)


def test_positive_hom_obstructions():
    assert positive_hom_witness((INF, 0), (INF, 0)) is not None
    assert positive_hom_witness((1, 0), (1, 0)) is None
    assert positive_hom_witness((1, 1), (1, 0)) is not None


@pytest.mark.parametrize("imax,hmax", [(2, 1), (3, 2), (5, 4)])
def test_silting_search_is_empty(imax, hmax):
    rep = silting_search(imax, hmax)
    assert rep.empty
    assert sorted(rep.maximal) == sorted(((1, h),) for h in range(-hmax, hmax + 1))
    r = rep.explain([(1, 0)])
    assert r.silting and r.generates_perf and not r.generates
    r = rep.explain([(INF, 0)])
    assert not r.silting and r.witness is not None
    r = rep.explain([(1, 0), (2, 0)])
    assert not r.silting


def test_silting_rejects_bad_window():
    with pytest.raises(ValueError):
        silting_search(0, 1)
