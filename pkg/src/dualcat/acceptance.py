"""Oracle suites shared by the test-suite and ``dualcat selftest``.

Each suite is deterministic given its seed and returns a :class:`SuiteResult`
whose ``line`` is a one-line pass/fail summary.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Dict, List

from .complexes import compose, cone, direct_sum, identity_map, indecomposable
from .decomp import (
    INF,
    FormalObject,
    barcode,
    cohomology_direct,
    contractible,
    k_class,
    realize,
    scramble,
)
from .endofunctors import (
    LambdaFunctor,
    check_functorial,
    check_relations,
    is_exact,
    normalize,
    random_denormalization,
)
from .homspace import (
    GeneratorRef,
    Kind,
    SymMorphism,
    compose_sym,
    generator_rep,
    hom_bruteforce,
    hom_infty,
    hom_table,
    identify,
    truncation_bound,
)
from .linalg import DualScalar, Field
from .stability import (
    GroupElem,
    StabilityCondition,
    act,
    central_charge,
    chart,
    chart_inv,
    group_chart,
    hn_filtration,
    positive_hom_witness,
    silting_search,
    survey_hearts,
    transitivity_witness,
)

GF7 = Field(7)
QQ = Field(None)


@dataclass
class SuiteResult:
    key: str
    title: str
    passed: bool
    summary: str
    failures: List[str] = dc_field(default_factory=list)

    @property
    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} [{self.key}] {self.title}: {self.summary}"

    def as_dict(self) -> Dict:
        return {"suite": self.key, "title": self.title, "passed": self.passed,
                "summary": self.summary, "failures": self.failures[:20]}


def _result(key, title, failures, summary):
    return SuiteResult(key, title, not failures, summary, failures)


# 1 -------------------------------------------------------------------------


def suite_hom_table(seed: int = 0) -> SuiteResult:
    failures = []
    n = 0
    for F in (GF7, QQ):
        for i in range(1, 7):
            X = indecomposable(F, i)
            for j in range(1, 7):
                for a in range(-8, 9):
                    d = hom_bruteforce(X, indecomposable(F, j, a), want_basis=False).dim
                    n += 1
                    if d != hom_table(i, j, a).dim:
                        failures.append(f"{F} hom(X_{i}, X_{j}[{a}]): brute {d}, table {hom_table(i, j, a).dim}")
    return _result("hom-table", "brute-force Hom equals the closed-form table", failures,
                   f"{n} solves over GF(7) and Q, {len(failures)} mismatches")


# 2 -------------------------------------------------------------------------


def suite_infty(seed: int = 0) -> SuiteResult:
    failures = []
    n = 0
    idx = [1, 2, 3, 4, 5, INF]
    for i, j in itertools.product(idx, repeat=2):
        for a in range(-6, 7):
            N = truncation_bound(j, a)
            d0 = hom_infty(i, j, a, N, GF7)
            d1 = hom_infty(i, j, a, N + 1, GF7)
            want = hom_table(i, j, a).dim
            n += 1
            if not d0 == d1 == want:
                failures.append(f"hom(X_{i}, X_{j}[{a}]): N={N} -> {d0}, N+1 -> {d1}, table {want}")
    return _result("infty", "truncated X_inf Homs stabilize and match the table", failures,
                   f"{n} cases at N and N+1, {len(failures)} mismatches")


# 3 -------------------------------------------------------------------------


def _generators_from(src, imax=5):
    i, h = src
    out = []
    for j in range(1, imax + 1):
        for a in range(-imax, imax + 1):
            for kind in (Kind.ONE, Kind.EPS):
                g = GeneratorRef(src, (j, h + a), kind)
                if g.exists():
                    out.append(g)
    return out


def _gen_sym(F, g, c):
    return SymMorphism.generator(F, g, c)


def suite_composition(seed: int = 0, pairs: int = 1000) -> SuiteResult:
    rng = random.Random(seed)
    F = GF7
    failures = []
    kinds = {}
    zeros = 0
    for t in range(pairs):
        src = (rng.randint(1, 5), rng.randint(-2, 2))
        g1 = rng.choice(_generators_from(src))
        g2 = rng.choice(_generators_from(g1.target))
        # make sure the always-zero eps o eps case is well represented
        if t % 4 == 3:
            e1 = [g for g in _generators_from(src) if g.kind is Kind.EPS]
            if e1:
                g1 = rng.choice(e1)
                e2 = [g for g in _generators_from(g1.target) if g.kind is Kind.EPS]
                if e2:
                    g2 = rng.choice(e2)
        c1, c2 = F.random(rng, True), F.random(rng, True)
        concrete = compose(generator_rep(g2, F).scale(c2), generator_rep(g1, F).scale(c1))
        a, b = identify(concrete, g1.source, g2.target)
        sym = compose_sym(_gen_sym(F, g2, c2), _gen_sym(F, g1, c1))
        want = sym.coefficient(0, 0)
        key = f"{g2.kind.value}o{g1.kind.value}"
        kinds[key] = kinds.get(key, 0) + 1
        if (a, b) == (0, 0):
            zeros += 1
        if (a, b) != want:
            failures.append(f"{g2} o {g1}: concrete {(a, b)}, symbolic {want}")
    counts = ", ".join(f"{k}:{v}" for k, v in sorted(kinds.items()))
    if kinds.get("epsoeps", 0) == 0:
        failures.append("no eps o eps pair sampled")
    return _result("composition", "identify(concrete composite) equals compose_sym", failures,
                   f"{pairs} pairs ({counts}; {zeros} zero), {len(failures)} mismatches")


# 4 -------------------------------------------------------------------------


def random_formal(rng, max_rank: int = 8, lo: int = -6, hi: int = 0) -> FormalObject:
    """A random perfect object of total rank <= max_rank supported in [lo, hi]."""
    items = []
    budget = rng.randint(1, max_rank)
    while budget > 0:
        i = rng.randint(1, min(budget, hi - lo + 1))
        h = rng.randint(-1 - hi, -i - lo)
        items.append((i, h))
        budget -= i
    return FormalObject.of(items)


def scrambled_sum(Fo: FormalObject, field: Field, rng, lo: int = -6, hi: int = 0):
    """A scrambled realization of Fo with up to two contractible pieces mixed in."""
    C = realize(Fo, field)
    for _ in range(rng.randint(0, 2)):
        n = rng.randint(lo, hi - 1)
        if max(C.rank(n), C.rank(n + 1)) < 8:
            u = DualScalar(field, field.random(rng, nonzero=True), field.random(rng))
            C = direct_sum(C, contractible(field, n, u))
    return scramble(C, rng)


def suite_cones(seed: int = 0, trials: int = 500) -> SuiteResult:
    failures = []
    F = GF7
    eps = generator_rep(GeneratorRef((1, 0), (1, 0), Kind.EPS), F)
    got = barcode(cone(eps))
    if got != FormalObject.single(2, 0):
        failures.append(f"cone(eps on X_1) = {got}")
    for i in range(1, 6):
        for h in (-1, 0, 2):
            X = indecomposable(F, i, h)
            if not barcode(cone(identity_map(X))).is_zero():
                failures.append(f"cone(id on X_{i}[{h}]) is not zero")
    rng = random.Random(seed)
    for _ in range(trials):
        Fo = random_formal(rng)
        C = scrambled_sum(Fo, F, rng)
        B = barcode(C)
        if B != Fo:
            failures.append(f"scrambled {Fo} decomposed as {B}")
    return _result("cones", "cone facts and barcode roundtrip on scrambled sums", failures,
                   f"cone(eps)=X_2, cone(id)=0, {trials} roundtrips, {len(failures)} failures")


# 5 -------------------------------------------------------------------------

LAMBDAS = ((GF7, [1, 2, 3, 5]), (QQ, [1, 2, -1, Fraction(1, 2)]))


def suite_endofunctors(seed: int = 0, trials: int = 200) -> SuiteResult:
    failures = []
    checked = 0
    for F, lams in LAMBDAS:
        for lam in lams:
            L = LambdaFunctor(F, lam)
            for imax in range(1, 9):
                c = L.assignment(imax)
                rf, rr = check_functorial(c), check_relations(c)
                checked += rf.checked + len(rr.instances)
                if not rf:
                    failures.append(f"{F} lambda={lam} I={imax}: {len(rf.violations)} violations")
                if not rr:
                    failures.append(f"{F} lambda={lam} I={imax}: relations {rr.counts()}")
    rng = random.Random(seed)
    for t in range(trials):
        F, lams = LAMBDAS[t % 2]
        L = LambdaFunctor(F, rng.choice(lams))
        imax = rng.randint(2, 6)
        c, h, mu, psi = random_denormalization(L, imax, rng)
        nf = normalize(c)
        gauge = all(F.mul(nf.phi[i], psi[i]) == F.mul(nf.phi[1], psi[1]) for i in psi)
        if (nf.shift, nf.mu, nf.lam) != (h, mu, L.lam) or not gauge:
            failures.append(f"trial {t}: recovered {(nf.shift, nf.mu, nf.lam)}, expected {(h, mu, L.lam)}")
        if nf.normalized != L.assignment(imax):
            failures.append(f"trial {t}: normalized assignment is not the lambda-form")
    return _result("endofunctors", "lambda-forms are functorial, satisfy R1-R5, normalize exactly",
                   failures, f"{checked} checks on I<=8, {trials} normalize trials, {len(failures)} failures")


# 6 -------------------------------------------------------------------------


def suite_exactness(seed: int = 0) -> SuiteResult:
    failures = []
    cases = [(GF7, lam) for lam in range(1, 7)]
    cases += [(QQ, lam) for lam in (1, 2, 3, -1, Fraction(1, 2), Fraction(-2, 3))]
    for F, lam in cases:
        ex = is_exact(LambdaFunctor(F, lam))
        if ex != (F(lam) == 1):
            failures.append(f"{F} lambda={lam}: is_exact={ex}")
    return _result("exactness", "is_exact(F_lambda) iff lambda = 1", failures,
                   f"{len(cases)} lambdas, {len(failures)} wrong")


# 7 -------------------------------------------------------------------------


def suite_hearts(seed: int = 0) -> SuiteResult:
    failures = []
    S = survey_hearts(4, 3)
    want = {((1, h), (INF, h)) for h in range(-3, 4)}
    got = set(S.accepted())
    if got != want:
        failures.append(f"accepted {sorted(got)}")
    for h in range(-3, 4):
        v1 = S.explain([(1, h)])
        if v1.accepted or v1.stage != "c" or INF in (v1.witness or ()):
            failures.append(f"X_1[{h}] verdict {v1}")
        vi = S.explain([(INF, h)])
        if vi.accepted or vi.stage != "b" or vi.witness[1] != str(FormalObject.single(1, h)):
            failures.append(f"X_inf[{h}] verdict {vi}")
    return _result("hearts", "only add<X_1[h], X_inf[h]> is a heart", failures,
                   f"{len(S.verdicts)} candidates surviving (a), {len(S.incompatible)} incompatible pairs, "
                   f"{len(got)} accepted")


# 8 -------------------------------------------------------------------------


def random_sigma(rng) -> StabilityCondition:
    return StabilityCondition(rng.randint(-3, 3), rng.uniform(0.1, 5.0), 1.0 - rng.random())


def random_object(rng) -> FormalObject:
    items = []
    for _ in range(rng.randint(1, 5)):
        i = rng.choice([1, 2, 3, 4, 5, 6, INF])
        items.append((i, rng.randint(-4, 4), rng.randint(1, 2)))
    return FormalObject.of(items)


def _factor_cohomology(s, F):
    """k-dimension per degree predicted by the HN factors."""
    out: Dict[int, int] = {}
    for fac in hn_filtration(s, F):
        for i, h, m in fac.object.summands:
            out[-1 - h] = out.get(-1 - h, 0) + m * (2 if i == 1 else 1)
    return out


def suite_hn(seed: int = 0, trials: int = 300) -> SuiteResult:
    failures = []
    rng = random.Random(seed)
    for i in range(2, 9):
        s = random_sigma(rng)
        psi0 = s.phi - s.h
        fac = hn_filtration(s, FormalObject.single(i, -i + 1))
        got = [(f.phase, f.object) for f in fac]
        want = [(psi0, FormalObject.single(INF, 0)), (psi0 - i + 1, FormalObject.single(INF, -i + 1))]
        if len(got) != 2 or any(abs(g[0] - w[0]) > 1e-12 or g[1] != w[1] for g, w in zip(got, want)):
            failures.append(f"X_{i}[{-i + 1}]: {got}")
    for _ in range(trials):
        s = random_sigma(rng)
        F = random_object(rng)
        fac = hn_filtration(s, F)
        phases = [f.phase for f in fac]
        if any(a <= b for a, b in zip(phases, phases[1:])):
            failures.append(f"{F}: phases {phases} not strictly decreasing")
        for f in fac:
            if len({h for _, h, _ in f.object.summands}) != 1 or any(i not in (1, INF) for i, _, _ in f.object.summands):
                failures.append(f"{F}: factor {f.object} not semistable")
        try:
            central_charge(s, F)
        except AssertionError as e:
            failures.append(str(e))
        if F.is_perfect():
            direct = cohomology_direct(realize(F, GF7))
            if direct != _factor_cohomology(s, F):
                failures.append(f"{F}: HN factors disagree with cohomology {direct}")
    if k_class(FormalObject.single(1, 0)) != 2 * k_class(FormalObject.single(INF, 0)):
        failures.append("[X_1] != 2[X_inf]")
    s = StabilityCondition(0, 1.0, 0.5)
    z1 = central_charge(s, FormalObject.single(1, 0))
    zi = central_charge(s, FormalObject.single(INF, 0))
    if abs(z1 - 2 * zi) > 1e-12 or abs(zi - s.v) > 1e-12:
        failures.append(f"Z(X_1) = {z1}, Z(X_inf) = {zi}")
    return _result("hn", "HN filtrations: X_i[-i+1] factors, strict phases, K-class", failures,
                   f"7 indecomposables, {trials} random objects, {len(failures)} failures")


# 9 -------------------------------------------------------------------------


def suite_group_action(seed: int = 0, trials: int = 200, tol: float = 1e-9) -> SuiteResult:
    failures = []
    rng = random.Random(seed)
    for t in range(trials):
        s1, s2 = random_sigma(rng), random_sigma(rng)
        g = transitivity_witness(s1, s2)
        if not act(g, s1).close_to(s2, tol):
            failures.append(f"pair {t}: act(witness) = {act(g, s1)} != {s2}")
        e = transitivity_witness(s1, s1)
        if abs(e.kappa - 1) > tol or abs(e.theta) > tol:
            failures.append(f"pair {t}: witness(s, s) = {e}")
        # freeness: any other element misses s2
        other = GroupElem(g.kappa * rng.uniform(1.01, 2.0), g.theta + rng.uniform(0.01, 1.0))
        if act(other, s1).close_to(s2, tol):
            failures.append(f"pair {t}: two distinct elements send s1 to s2")
        back = chart_inv(chart(s1))
        if not back.close_to(s1, tol):
            failures.append(f"pair {t}: chart roundtrip {back}")
        h = GroupElem(rng.uniform(0.2, 5.0), rng.uniform(-3, 3))
        dz = chart(act(h, s1)) - (chart(s1) - group_chart(h))
        if abs(dz) > tol:
            failures.append(f"pair {t}: chart is not a translation ({abs(dz)})")
        g2 = GroupElem(rng.uniform(0.2, 5.0), rng.uniform(-3, 3))
        if not act(g2, act(h, s1)).close_to(act(h * g2, s1), tol):
            failures.append(f"pair {t}: action is not compatible with the product")
    return _result("group-action", "free transitive action, chart is a translation", failures,
                   f"{trials} pairs at tol {tol:g}, {len(failures)} failures")


# 10 ------------------------------------------------------------------------


def suite_silting(seed: int = 0) -> SuiteResult:
    failures = []
    windows = 0
    for imax in range(1, 6):
        for hmax in range(0, 5):
            R = silting_search(imax, hmax)
            windows += 1
            if not R.empty:
                failures.append(f"window ({imax},{hmax}): generating {R.generating}")
            want = sorted(((1, h),) for h in range(-hmax, hmax + 1))
            if sorted(R.maximal) != want:
                failures.append(f"window ({imax},{hmax}): maximal {R.maximal}")
            for c in R.maximal:
                r = R.explain(c)
                if not r.silting or r.generates or INF in r.witness:
                    failures.append(f"window ({imax},{hmax}): {c} -> {r}")
            for (A, B), w in R.obstructions.items():
                (i, h1), (j, h2) = A, B
                if w[2] <= 0 or not hom_table(i, j, h2 + w[2] - h1).dim:
                    failures.append(f"bad obstruction {A}->{B}: {w}")
    # exhaustive explanation on a small window
    R = silting_search(2, 1)
    n_subsets = 0
    for r in range(1, len(R.members) + 1):
        for S in itertools.combinations(R.members, r):
            n_subsets += 1
            why = R.explain(S)
            if why.generates:
                failures.append(f"{S} reported as generating")
            elif why.silting:
                if INF in why.witness:
                    failures.append(f"{S}: closure witness contains X_inf")
            else:
                A, B, n = why.witness
                if positive_hom_witness(A, B) is None:
                    failures.append(f"{S}: unverifiable obstruction {why.witness}")
    x1 = R.explain([(1, 0)])
    if not (x1.silting and x1.generates_perf and not x1.generates):
        failures.append(f"X_1 not reported silting in Perf: {x1}")
    return _result("silting", "no silting subset generates D^b", failures,
                   f"{windows} windows up to (5,4), {n_subsets} subsets explained, {len(failures)} failures")


SUITES: Dict[str, Callable[..., SuiteResult]] = {
    "hom-table": suite_hom_table,
    "infty": suite_infty,
    "composition": suite_composition,
    "cones": suite_cones,
    "endofunctors": suite_endofunctors,
    "exactness": suite_exactness,
    "hearts": suite_hearts,
    "hn": suite_hn,
    "group-action": suite_group_action,
    "silting": suite_silting,
}


def run_suites(names=None, seed: int = 0) -> List[SuiteResult]:
    names = list(SUITES) if not names or names == ["all"] else names
    out = []
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
        out.append(SUITES[name](seed=seed))
    return out
