"""Fully faithful, shift-commuting endofunctors of Perf(A) as coefficient data.

Such a functor fixes every X_i up to one global shift and rescales each
generator ``X_i -> X_j[alpha]`` by a nonzero scalar ``k(i, j, alpha)``.  The
pair ``(i, i, 0)`` carries two generators: the identity, whose coefficient is
always 1, and eps, whose coefficient is the stored value.  Coefficients are
shift invariant, so a generator ``X_i[h1] -> X_j[h2]`` has coefficient
``k(i, j, h2 - h1)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Tuple

from .complexes import cone, cone_inclusion, cone_projection, indecomposable
from .decomp import FormalObject
from .homspace import (
    GeneratorRef,
    Kind,
    SymMorphism,
    _has_eps,
    _has_one,
    compose_generators,
    compose_sym,
    generator_rep,
    identify,
)
from .linalg import Field, solve_affine

Key = Tuple[int, int, int]


class FunctorialityError(ValueError):
    pass


class NormalizationError(ValueError):
    pass


def generator_exists(i: int, j: int, alpha: int) -> bool:
    return _has_one(i, j, alpha) or _has_eps(i, j, alpha)


def window_keys(imax: int, amax: Optional[int] = None) -> List[Key]:
    """Every ``(i, j, alpha)`` carrying a generator, with ``i, j <= imax``."""
    if amax is None:
        amax = imax
    out = []
    for i in range(1, imax + 1):
        for j in range(1, imax + 1):
            for a in range(-amax, amax + 1):
                if generator_exists(i, j, a):
                    out.append((i, j, a))
    return out


def lambda_coefficient(field: Field, lam, i: int, j: int, alpha: int):
    if not generator_exists(i, j, alpha):
        raise ValueError(f"no generator X_{i} -> X_{j}[{alpha}]")
    return field.pow(field(lam), alpha)


@dataclass
class CoeffAssignment:
    field: Field
    imax: int
    amax: int
    coeffs: Dict[Key, object]
    shift: int = 0

    def __post_init__(self):
        clean = {}
        for (i, j, a), v in self.coeffs.items():
            if not generator_exists(i, j, a):
                raise ValueError(f"no generator X_{i} -> X_{j}[{a}]")
            v = self.field(v)
            if v == 0:
                raise ValueError(f"coefficient of ({i}, {j}, {a}) is zero")
            clean[(i, j, a)] = v
        self.coeffs = clean

    def keys(self) -> List[Key]:
        return window_keys(self.imax, self.amax)

    def missing(self) -> List[Key]:
        return [k for k in self.keys() if k not in self.coeffs]

    def coefficient(self, i: int, j: int, alpha: int, kind: Kind):
        if kind is Kind.ONE and i == j and alpha == 0:
            return self.field.one
        return self.coeffs[(i, j, alpha)]

    def __eq__(self, other):
        if not isinstance(other, CoeffAssignment):
            return NotImplemented
        return (self.field, self.imax, self.amax, self.shift, self.coeffs) == (
            other.field, other.imax, other.amax, other.shift, other.coeffs)


@dataclass(frozen=True)
class LambdaFunctor:
    field: Field
    lam: object

    def __post_init__(self):
        if self.field(self.lam) == 0:
            raise ValueError("lambda must be nonzero")
        object.__setattr__(self, "lam", self.field(self.lam))

    def coefficient(self, i, j, alpha: int, kind: Kind = Kind.EPS):
        if kind is Kind.ONE and i == j and alpha == 0:
            return self.field.one
        return self.field.pow(self.lam, alpha)

    def assignment(self, imax: int, amax: Optional[int] = None, shift: int = 0) -> CoeffAssignment:
        amax = imax if amax is None else amax
        F = self.field
        coeffs = {k: F.pow(self.lam, k[2]) for k in window_keys(imax, amax)}
        return CoeffAssignment(F, imax, amax, coeffs, shift)


def apply(F: LambdaFunctor, m: SymMorphism) -> SymMorphism:
    """Image of a symbolic morphism: each block is rescaled by lambda^alpha."""
    K = F.field
    S, T = m.source.expanded(), m.target.expanded()
    out = {}
    for (s, t), (a, b) in m.blocks.items():
        (i, h1), (j, h2) = S[s], T[t]
        alpha = h2 - h1
        ca = F.coefficient(i, j, alpha, Kind.ONE)
        cb = F.coefficient(i, j, alpha, Kind.EPS)
        out[(s, t)] = (K.mul(a, ca), K.mul(b, cb))
    return SymMorphism(K, m.source, m.target, out)


# ---------------------------------------------------------------------------
# functoriality and relations


@dataclass(frozen=True)
class Violation:
    first: Tuple  # (i, j, alpha, kind) of the inner generator
    second: Tuple  # (j, l, beta, kind) of the outer generator
    composite: Tuple
    expected: object
    got: object


@dataclass
class FunctorialityReport:
    ok: bool
    violations: List[Violation] = dc_field(default_factory=list)
    missing: List[Key] = dc_field(default_factory=list)
    checked: int = 0

    def __bool__(self):
        return self.ok


def _generators_from(c: CoeffAssignment):
    by_src: Dict[int, list] = {}
    for i, j, a in c.keys():
        for kind in (Kind.ONE, Kind.EPS):
            ok = _has_one(i, j, a) if kind is Kind.ONE else _has_eps(i, j, a)
            if ok:
                by_src.setdefault(i, []).append((j, a, kind))
    return by_src


def check_functorial(c: CoeffAssignment) -> FunctorialityReport:
    """Multiplicativity of coefficients on every composable generator pair."""
    missing = c.missing()
    if missing:
        return FunctorialityReport(False, [], missing, 0)
    F = c.field
    gens = _generators_from(c)
    violations = []
    checked = 0
    for i, outs in gens.items():
        for j, a, k1 in outs:
            for l, b, k2 in gens.get(j, []):
                beta = a + b
                if abs(beta) > c.amax:
                    continue
                kind = compose_generators(k2, k1, (i, 0), (j, a), (l, beta))
                if kind is None:
                    continue
                checked += 1
                expected = c.coefficient(i, l, beta, kind)
                got = F.mul(c.coefficient(j, l, b, k2), c.coefficient(i, j, a, k1))
                if expected != got:
                    violations.append(Violation((i, j, a, k1.value), (j, l, b, k2.value),
                                                (i, l, beta, kind.value), expected, got))
    return FunctorialityReport(not violations, violations, [], checked)


@dataclass(frozen=True)
class RelationInstance:
    name: str
    indices: Tuple[int, ...]
    lhs: object
    rhs: object

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


def _relation_instances(imax: int, amax: int):
    """Yield ``(name, indices, lhs_keys, rhs_keys)``; each side is a product of coefficients."""
    rng = range(-amax, amax + 1)
    for i in range(1, imax + 1):
        for j in range(1, imax + 1):
            for a in rng:
                if i == j and a == 0:
                    continue
                if -i < a <= min(0, j - i) or max(0, j - i) <= a < j:
                    if abs(a) <= amax:
                        yield "R1", (i, j, a), [(j, i, a), (i, j, -a)], []
    for i in range(2, imax + 1):
        for j in range(1, i + 1):
            for a in range(0, j):
                if (i - j, a) in ((0, 0), (1, 0)) or a > amax:
                    continue
                yield "R2", (i, j, a), [(j, i, a)], [(j, i - 1, a), (i - 1, i, 0)]
        for j in range(1, i - 1):
            for a in range(-i + 1, j - i + 1):
                if abs(a) <= amax:
                    yield "R3", (i, j, a), [(j, i, a)], [(j, i - 1, 0), (i - 1, i, a)]
        for a in range(2 - i, 0):
            if abs(a) <= amax:
                yield "R4", (i, a), [(i - 1, i, a)], [(i - 1, i - 1, a), (i - 1, i, 0)]
        if i > 2 and i - 1 <= amax:
            yield "R5", (i,), [(i - 1, i, 2 - i)], [(i - 1, i - 1, 1), (i - 1, i, 1 - i)]


@dataclass
class RelationReport:
    instances: List[RelationInstance]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.instances)

    def failures(self) -> List[RelationInstance]:
        return [r for r in self.instances if not r.ok]

    def counts(self) -> Dict[str, Tuple[int, int]]:
        out: Dict[str, list] = {}
        for r in self.instances:
            slot = out.setdefault(r.name, [0, 0])
            slot[0 if r.ok else 1] += 1
        return {k: tuple(v) for k, v in sorted(out.items())}

    def __bool__(self):
        return self.ok


def check_relations(c: CoeffAssignment) -> RelationReport:
    """Evaluate R1-R5 (stated for functors fixing the k(i, i, 0)) inside the window."""
    F = c.field

    def prod(keys):
        v = F.one
        for k in keys:
            v = F.mul(v, c.coeffs[k])
        return v

    out = []
    for name, idx, lhs, rhs in _relation_instances(c.imax, c.amax):
        if any(k not in c.coeffs for k in lhs + rhs):
            continue
        out.append(RelationInstance(name, idx, prod(lhs), prod(rhs)))
    return RelationReport(out)


# ---------------------------------------------------------------------------
# normal form


@dataclass
class NormalForm:
    shift: int
    mu: object
    phi: Dict[int, object]
    lam: Optional[object]
    normalized: CoeffAssignment


def normalize(c: CoeffAssignment) -> NormalForm:
    """Reduce to the canonical lambda-form.

    Divides out the push-forward scalar mu on eps-coefficients, then
    conjugates by the natural isomorphism ``phi_i`` (``phi_1 = 1``) that sets
    every ``k(i-1, i, 0)`` to 1.
    """
    rep = check_functorial(c)
    if not rep:
        raise FunctorialityError(
            f"not functorial: {len(rep.violations)} violations, {len(rep.missing)} missing coefficients")
    F = c.field
    mu = c.coeffs[(1, 1, 0)]
    mu_inv = F.inv(mu)
    c1 = {}
    for (i, j, a), v in c.coeffs.items():
        c1[(i, j, a)] = F.mul(v, mu_inv) if _has_eps(i, j, a) else v
    phi = {1: F.one}
    for i in range(2, c.imax + 1):
        phi[i] = F.mul(phi[i - 1], F.inv(c1[(i - 1, i, 0)]))
    norm = {(i, j, a): F.mul(v, F.div(phi[j], phi[i])) for (i, j, a), v in c1.items()}
    lam = norm.get((2, 1, 1))
    for (i, j, a), v in norm.items():
        want = F.one if lam is None else F.pow(lam, a)
        if v != want:
            raise NormalizationError(f"coefficient ({i}, {j}, {a}) is {v}, expected lambda^{a}")
    out = CoeffAssignment(F, c.imax, c.amax, norm, 0)
    return NormalForm(c.shift, mu, phi, lam, out)


def denormalize(F: LambdaFunctor, imax: int, amax: Optional[int] = None, shift: int = 0,
                mu=1, psi: Optional[Dict[int, object]] = None) -> CoeffAssignment:
    """Dress the lambda-form with a shift, a push-forward scalar and a gauge ``psi``."""
    K = F.field
    base = F.assignment(imax, amax, shift)
    mu = K(mu)
    psi = {i: K(v) for i, v in (psi or {}).items()}
    coeffs = {}
    for (i, j, a), v in base.coeffs.items():
        if _has_eps(i, j, a):
            v = K.mul(v, mu)
        gi, gj = psi.get(i, K.one), psi.get(j, K.one)
        coeffs[(i, j, a)] = K.mul(v, K.div(gj, gi))
    return CoeffAssignment(K, base.imax, base.amax, coeffs, shift)


def random_denormalization(F: LambdaFunctor, imax: int, rng, amax: Optional[int] = None):
    """A random dressing of F; returns ``(assignment, shift, mu, psi)``."""
    K = F.field
    shift = rng.randint(-5, 5)
    mu = K.random(rng, nonzero=True)
    psi = {i: K.random(rng, nonzero=True) for i in range(1, imax + 1)}
    return denormalize(F, imax, amax, shift, mu, psi), shift, mu, psi


# ---------------------------------------------------------------------------
# exactness


@dataclass
class ExactnessReport:
    exact: bool
    lam: object
    triangle: Tuple  # symbolic (f, i, p)
    image: Tuple  # F applied to the triangle
    solution: Optional[Tuple]  # (a, b) of a witnessing automorphism of X_2


def _standard_triangle(field: Field):
    """``X_1 -eps-> X_1 -> cone -> X_1[1]`` with the cone identified as X_2."""
    X1 = (1, 0)
    eps = generator_rep(GeneratorRef(X1, X1, Kind.EPS), field)
    C = cone(eps)
    if C != indecomposable(field, 2):
        raise RuntimeError("cone of eps on X_1 is not literally X_2")
    incl = cone_inclusion(eps, C)
    proj = cone_projection(eps, C)
    O1, O2, O1s = (FormalObject.single(1, 0), FormalObject.single(2, 0), FormalObject.single(1, 1))
    ai, bi = identify(incl, X1, (2, 0))
    ap, bp = identify(proj, (2, 0), (1, 1))
    f_sym = SymMorphism(field, O1, O1, {(0, 0): (0, 1)})
    i_sym = SymMorphism(field, O1, O2, {(0, 0): (ai, bi)})
    p_sym = SymMorphism(field, O2, O1s, {(0, 0): (ap, bp)})
    return f_sym, i_sym, p_sym


def exactness_report(F: LambdaFunctor) -> ExactnessReport:
    """Look for an isomorphism between the standard triangle and its image under F.

    The vertices X_1, X_1, X_1[1] are matched by identities; the unknown is an
    endomorphism ``(a, b)`` of X_2, which must satisfy both squares involving
    it and be invertible (a != 0).
    """
    K = F.field
    f, i, p = _standard_triangle(K)
    Ff, Fi, Fp = apply(F, f), apply(F, i), apply(F, p)
    O1 = FormalObject.single(1, 0)
    O2 = FormalObject.single(2, 0)
    O1s = FormalObject.single(1, 1)
    id1 = SymMorphism.identity(K, O1)
    id1s = SymMorphism.identity(K, O1s)

    def phi(a, b):
        return SymMorphism(K, O2, O2, {(0, 0): (a, b)})

    # first square does not involve the unknown: id o F(f) = f o id
    if compose_sym(id1, Ff) != compose_sym(f, id1):
        return ExactnessReport(False, F.lam, (f, i, p), (Ff, Fi, Fp), None)

    # squares 2 and 3 are linear in (a, b): evaluate on the basis
    def residual(a, b):
        s2 = compose_sym(phi(a, b), Fi)  # must equal i o id
        s3 = compose_sym(p, phi(a, b))  # must equal id o F(p)
        return [s2.coefficient(0, 0), s3.coefficient(0, 0)]

    def flat(pairs):
        return [x for ab in pairs for x in ab]

    cols = [flat(residual(K.one, K.zero)), flat(residual(K.zero, K.one))]
    A = [list(r) for r in zip(*cols)]
    rhs = flat([compose_sym(i, id1).coefficient(0, 0), compose_sym(id1s, Fp).coefficient(0, 0)])
    sol = solve_affine(A, rhs, K, cols=2)
    if sol is None:
        return ExactnessReport(False, F.lam, (f, i, p), (Ff, Fi, Fp), None)
    x, null = sol
    if x[0] != 0:
        witness = (x[0], x[1])
    else:
        nz = [v for v in null if v[0] != 0]
        if not nz:
            return ExactnessReport(False, F.lam, (f, i, p), (Ff, Fi, Fp), None)
        witness = (K.add(x[0], nz[0][0]), K.add(x[1], nz[0][1]))
    return ExactnessReport(True, F.lam, (f, i, p), (Ff, Fi, Fp), witness)


def is_exact(F: LambdaFunctor) -> bool:
    return exactness_report(F).exact


__all__ = [
    "CoeffAssignment",
    "ExactnessReport",
    "FunctorialityError",
    "FunctorialityReport",
    "LambdaFunctor",
    "NormalForm",
    "NormalizationError",
    "RelationReport",
    "apply",
    "check_functorial",
    "check_relations",
    "denormalize",
    "exactness_report",
    "generator_exists",
    "is_exact",
    "lambda_coefficient",
    "normalize",
    "random_denormalization",
    "window_keys",
]
