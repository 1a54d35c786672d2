"""t-structures, stability conditions and silting on D^b(A).

Hearts are tested on finite candidate sets of shifted indecomposables.
Stability conditions are stored as ``(h, mass, phi)`` with total phase
``psi = h + phi``; the group of rotations and scalings acts on the right by
``psi -> psi - theta``, ``mass -> mass / kappa``.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .decomp import INF, FormalObject, format_index, k_class, parse_index
from .homspace import GeneratorRef, Kind, cone_symbolic, hom_table
from .linalg import Field

Member = Tuple[float | int, int]
TOL = 1e-9


def _name(m: Member) -> str:
    i, h = m
    return f"X_{format_index(i)}[{h}]"


def _hom_range(i, j) -> range:
    """Relative shifts outside this range have no morphisms X_i -> X_j[alpha]."""
    finite = [x for x in (i, j) if x != INF]
    top = max(finite) if finite else 1
    return range(-top - 1, top + 2)


# ---------------------------------------------------------------------------
# cone closure


@lru_cache(maxsize=None)
def _cone_types(i, j, alpha: int, kind: Kind) -> FrozenSet:
    g = GeneratorRef((i, 0), (j, alpha), kind)
    out = cone_symbolic(g, Field(7))
    return frozenset(t for t, _, _ in out.summands)


def cone_closure(types: Iterable, depth: int = 3, cap: int = 6) -> FrozenSet:
    """Indecomposable types reachable by taking cones of generators ``depth`` times.

    Types are indices i (shifts are irrelevant for closure); finite types
    above ``cap`` are dropped to keep the search bounded.
    """
    S = set(types)
    for _ in range(depth):
        new = set(S)
        for i, j in itertools.product(sorted(S), repeat=2):
            for a in _hom_range(i, j):
                for kind in (Kind.ONE, Kind.EPS):
                    if GeneratorRef((i, 0), (j, a), kind).exists():
                        new |= {t for t in _cone_types(i, j, a, kind) if t == INF or t <= cap}
        if new == S:
            break
        S = new
    return frozenset(S)


# ---------------------------------------------------------------------------
# hearts


@dataclass(frozen=True)
class HeartVerdict:
    accepted: bool
    stage: Optional[str]  # "a", "b", "c" or None when accepted
    reason: str
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.accepted


def negative_hom_witness(A: Member, B: Member):
    """A nonzero ``hom(A[n], B)`` with ``n > 0``, as ``(A, B, n)``, or None."""
    (i, h1), (j, h2) = A, B
    for alpha in _hom_range(i, j):
        n = h2 - h1 - alpha
        if n > 0 and hom_table(i, j, alpha).dim:
            return (A, B, n)
    return None


def check_heart(members: Iterable[Member], depth: int = 3) -> HeartVerdict:
    """Decide whether add(members) is the heart of a bounded t-structure."""
    mem = sorted({(parse_index(i), int(h)) for i, h in members}, key=lambda m: (m[1], m[0]))
    if not mem:
        return HeartVerdict(False, "c", "empty candidate generates nothing")
    # (a) no morphisms to lower shifts
    for A, B in itertools.product(mem, repeat=2):
        w = negative_hom_witness(A, B)
        if w:
            return HeartVerdict(
                False, "a", f"hom({_name((A[0], A[1] + w[2]))}, {_name(B)}) != 0", w)
    # (b) extensions of members by members stay inside
    closure = {(i, h) for i, h in mem}
    for A, B in itertools.product(mem, repeat=2):
        (i, hA), (j, hB) = A, B
        alpha = hA + 1 - hB  # B -> A[1]
        for kind in (Kind.ONE, Kind.EPS):
            g = GeneratorRef((j, hB), (i, hA + 1), kind)
            if not g.exists():
                continue
            E = cone_symbolic(g, Field(7)).shift(-1)
            outside = [(t, s) for t, s, _ in E.summands if (t, s) not in closure]
            if outside:
                return HeartVerdict(
                    False, "b",
                    f"{_name(A)} -> {E} -> {_name(B)} is an extension leaving the candidate",
                    (A, str(E), B, kind.value, alpha))
    # (c) generation
    reach = cone_closure({i for i, _ in mem}, depth)
    lacking = [t for t in (1, INF) if t not in reach]
    if lacking:
        names = ", ".join("X_" + format_index(t) for t in lacking)
        return HeartVerdict(False, "c", f"cone closure never reaches {names}",
                            tuple(sorted(reach, key=lambda t: (t == INF, t))))
    return HeartVerdict(True, None, "accepted")


def heart_window(imax: int = 4, hmax: int = 3) -> List[Member]:
    return [(i, h) for h in range(-hmax, hmax + 1) for i in list(range(1, imax + 1)) + [INF]]


def _cliques(nodes, compatible):
    """All nonempty subsets that are pairwise compatible (self included)."""
    nodes = [n for n in nodes if compatible(n, n)]
    out = []

    def grow(current, rest):
        if current:
            out.append(tuple(current))
        for k, n in enumerate(rest):
            if all(compatible(n, c) for c in current):
                grow(current + [n], rest[k + 1:])

    grow([], nodes)
    return out


@dataclass
class HeartSurvey:
    window: List[Member]
    verdicts: Dict[Tuple[Member, ...], HeartVerdict]
    # candidates containing an incompatible pair are rejected at (a); one witness per pair
    incompatible: Dict[Tuple[Member, Member], tuple]

    def accepted(self) -> List[Tuple[Member, ...]]:
        return [c for c, v in self.verdicts.items() if v.accepted]

    def explain(self, candidate: Iterable[Member]) -> HeartVerdict:
        cand = tuple(sorted(set(candidate), key=lambda m: (m[1], m[0])))
        if cand in self.verdicts:
            return self.verdicts[cand]
        for A, B in itertools.product(cand, repeat=2):
            if (A, B) in self.incompatible:
                w = self.incompatible[(A, B)]
                return HeartVerdict(False, "a", f"hom({_name((A[0], A[1] + w[2]))}, {_name(B)}) != 0", w)
        return check_heart(cand)


def survey_hearts(imax: int = 4, hmax: int = 3) -> HeartSurvey:
    """Verdicts for every candidate in the window that survives criterion (a) pairwise."""
    W = heart_window(imax, hmax)
    inc = {}
    for A, B in itertools.product(W, repeat=2):
        w = negative_hom_witness(A, B)
        if w:
            inc[(A, B)] = w

    def ok(A, B):
        return (A, B) not in inc and (B, A) not in inc

    verdicts = {}
    for c in _cliques(W, ok):
        key = tuple(sorted(c, key=lambda m: (m[1], m[0])))
        verdicts[key] = check_heart(key)
    return HeartSurvey(W, verdicts, inc)


# ---------------------------------------------------------------------------
# stability conditions


@dataclass(frozen=True)
class StabilityCondition:
    h: int
    mass: float
    phi: float

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        if not (0 < self.phi <= 1):
            raise ValueError("phi must lie in (0, 1]")

    @classmethod
    def from_psi(cls, psi: float, mass: float) -> "StabilityCondition":
        h = math.ceil(psi) - 1
        phi = psi - h
        # guard the boundary against rounding
        if phi <= 0:
            h -= 1
            phi += 1
        return cls(int(h), float(mass), float(phi))

    @property
    def psi(self) -> float:
        return self.h + self.phi

    @property
    def v(self) -> complex:
        return self.mass * cmath.exp(1j * math.pi * self.phi)

    def close_to(self, other: "StabilityCondition", tol: float = TOL) -> bool:
        return abs(self.psi - other.psi) <= tol and abs(self.mass - other.mass) <= tol * max(1.0, self.mass)


@dataclass(frozen=True)
class GroupElem:
    kappa: float
    theta: float

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")

    @classmethod
    def identity(cls) -> "GroupElem":
        return cls(1.0, 0.0)

    def __mul__(self, other: "GroupElem") -> "GroupElem":
        return GroupElem(self.kappa * other.kappa, self.theta + other.theta)

    def inverse(self) -> "GroupElem":
        return GroupElem(1.0 / self.kappa, -self.theta)


def act(g: GroupElem, s: StabilityCondition) -> StabilityCondition:
    return StabilityCondition.from_psi(s.psi - g.theta, s.mass / g.kappa)


def transitivity_witness(s1: StabilityCondition, s2: StabilityCondition) -> GroupElem:
    """The unique g with ``act(g, s1) == s2``."""
    return GroupElem(s1.mass / s2.mass, s1.psi - s2.psi)


def chart(s: StabilityCondition) -> complex:
    return complex(math.log(s.mass), math.pi * s.psi)


def chart_inv(z: complex) -> StabilityCondition:
    return StabilityCondition.from_psi(z.imag / math.pi, math.exp(z.real))


def group_chart(g: GroupElem) -> complex:
    """Translation by which g moves the chart: ``chart(act(g, s)) = chart(s) - group_chart(g)``."""
    return complex(math.log(g.kappa), math.pi * g.theta)


# ---------------------------------------------------------------------------
# Harder-Narasimhan


@dataclass(frozen=True)
class HNFactor:
    phase: float
    object: FormalObject

    def shift(self) -> int:
        return self.object.summands[0][1]


def _hn_pieces(F: FormalObject):
    for i, h, m in F.summands:
        if i == 1 or i == INF:
            yield (i, h, m)
        else:
            yield (INF, h + i - 1, m)
            yield (INF, h, m)


def hn_filtration(s: StabilityCondition, F: FormalObject) -> List[HNFactor]:
    """Semistable factors with strictly decreasing phases."""
    groups: Dict[int, list] = {}
    for i, h, m in _hn_pieces(F):
        groups.setdefault(h, []).append((i, h, m))
    out = []
    for h in sorted(groups, reverse=True):
        out.append(HNFactor(s.phi + (h - s.h), FormalObject.of(groups[h])))
    return out


def central_charge(s: StabilityCondition, F: FormalObject) -> complex:
    """Z(F), summed over HN factors and checked against the K-class of F."""
    z = 0j
    for fac in hn_filtration(s, F):
        for i, _, m in fac.object.summands:
            count = 2 if i == 1 else 1
            z += count * m * s.mass * cmath.exp(1j * math.pi * fac.phase)
    expected = k_class(F) * (-1) ** (s.h % 2) * s.v
    if abs(z - expected) > 1e-7 * max(1.0, abs(expected)):
        raise AssertionError(f"central charge {z} disagrees with K-class value {expected}")
    return z


def hn_mass(s: StabilityCondition, F: FormalObject) -> float:
    """Sum of |Z| over the HN factors."""
    total = 0.0
    for fac in hn_filtration(s, F):
        for i, _, m in fac.object.summands:
            total += (2 if i == 1 else 1) * m * s.mass
    return total


# ---------------------------------------------------------------------------
# silting


@dataclass(frozen=True)
class SiltingReason:
    silting: bool
    generates: bool  # generates D^b
    generates_perf: bool
    witness: object
    reason: str


@dataclass
class SiltingReport:
    imax: int
    hmax: int
    members: List[Member]
    # positive-shift Hom witnesses, keyed by ordered pairs (self pairs included)
    obstructions: Dict[Tuple[Member, Member], tuple]
    maximal: List[Tuple[Member, ...]]
    closures: Dict[Tuple[Member, ...], FrozenSet]
    generating: List[Tuple[Member, ...]] = dc_field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.generating

    def explain(self, subset: Iterable[Member]) -> SiltingReason:
        S = tuple(sorted(set(subset), key=lambda m: (m[1], m[0])))
        for A, B in itertools.product(S, repeat=2):
            if (A, B) in self.obstructions:
                w = self.obstructions[(A, B)]
                return SiltingReason(False, False, False, w,
                                     f"hom({_name(A)}, {_name((B[0], B[1] + w[2]))}) != 0")
        if not S:
            return SiltingReason(True, False, False, None, "empty subset generates nothing")
        reach = cone_closure({i for i, _ in S})
        gen_db = INF in reach
        gen_perf = 1 in reach
        if gen_db:
            return SiltingReason(True, True, True, tuple(reach), "generates")
        return SiltingReason(True, False, gen_perf, tuple(sorted(reach)),
                             "cone closure of perfect objects stays perfect; X_inf never appears")


def positive_hom_witness(A: Member, B: Member):
    """A nonzero ``hom(A, B[n])`` with ``n > 0``, as ``(A, B, n)``, or None."""
    (i, h1), (j, h2) = A, B
    for alpha in _hom_range(i, j):
        n = alpha - (h2 - h1)
        if n > 0 and hom_table(i, j, alpha).dim:
            return (A, B, n)
    return None


def silting_search(imax: int, hmax: int) -> SiltingReport:
    """Maximal silting subsets in the window and the D^b generation certificate."""
    if imax < 1 or hmax < 0:
        raise ValueError("window bounds must be positive")
    W = [(i, h) for h in range(-hmax, hmax + 1) for i in list(range(1, imax + 1)) + [INF]]
    obs = {}
    for A, B in itertools.product(W, repeat=2):
        w = positive_hom_witness(A, B)
        if w:
            obs[(A, B)] = w

    def ok(A, B):
        return (A, B) not in obs and (B, A) not in obs

    cliques = _cliques(W, ok)
    sets = [frozenset(c) for c in cliques]
    maximal = [tuple(sorted(c, key=lambda m: (m[1], m[0])))
               for c, s in zip(cliques, sets) if not any(s < t for t in sets)]
    rep = SiltingReport(imax, hmax, W, obs, maximal, {})
    for c in maximal:
        reach = cone_closure({i for i, _ in c})
        rep.closures[c] = reach
        if INF in reach:
            rep.generating.append(c)
    return rep


__all__ = [
    "GroupElem",
    "HNFactor",
    "HeartSurvey",
    "HeartVerdict",
    "SiltingReason",
    "SiltingReport",
    "StabilityCondition",
    "act",
    "central_charge",
    "chart",
    "chart_inv",
    "check_heart",
    "cone_closure",
    "group_chart",
    "heart_window",
    "hn_filtration",
    "hn_mass",
    "negative_hom_witness",
    "positive_hom_witness",
    "silting_search",
    "survey_hearts",
    "transitivity_witness",
]
