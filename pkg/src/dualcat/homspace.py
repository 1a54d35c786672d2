"""Morphisms between indecomposables, up to homotopy.

Two independent routes to ``hom(X_i, X_j[alpha])``: the closed-form table
(:func:`hom_table`) and exact linear algebra on concrete complexes
(:func:`hom_bruteforce`).  On top of the table sits a symbolic layer: a
morphism between formal objects is a block matrix of coefficient pairs
``(a, b)`` on the 1- and eps-generators, composed with :func:`compose_sym`.

Generator representatives
-------------------------
With shifted differentials carrying signs, the representatives are pinned by
an absolute sign rule so that composites of generators are exactly
generators (coefficient +1):

* 1-type ``(i,h1) -> (j,h2)``: ``(-1)^((h1+h2)(m+1))`` in every degree m of
  the overlap of the supports;
* eps-type: ``eps * (-1)^((h1+h2+1)(p+1))`` in the single degree
  ``p = -1-h1`` (top of the source).

For ``h1 = h2 = 0`` this is literally the identity on the overlap and eps at
degree -1.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .complexes import (
    ChainMap,
    FreeComplex,
    MapSpace,
    ModuleComplex,
    cone,
    indecomposable,
)
from .decomp import INF, FormalObject, barcode, format_index, parse_index
from .linalg import DualMatrix, Field, nullspace, rank, solve_affine, zeros


class Kind(enum.Enum):
    ONE = "1"
    EPS = "eps"


@dataclass(frozen=True)
class HomDescriptor:
    dim: int
    has_one_type: bool
    has_eps_type: bool


def _has_eps(i, j, alpha: int) -> bool:
    if i == INF and j == INF:
        return False
    if i == INF:
        return -j < alpha <= 0
    if j == INF:
        return False
    return -j < alpha <= min(0, i - j)


def _has_one(i, j, alpha: int) -> bool:
    if i == INF and j == INF:
        return alpha >= 0
    if i == INF:
        return False
    if j == INF:
        return 0 <= alpha < i
    return max(0, i - j) <= alpha < i


def hom_table(i, j, alpha: int) -> HomDescriptor:
    """Closed-form ``hom(X_i, X_j[alpha])``; ``i``/``j`` may be INF."""
    one, eps = _has_one(i, j, alpha), _has_eps(i, j, alpha)
    return HomDescriptor(int(one) + int(eps), one, eps)


# ---------------------------------------------------------------------------
# brute force


@dataclass
class HomResult:
    dim: int
    basis: List[ChainMap]


def hom_bruteforce(X: FreeComplex, Y, want_basis: bool = True) -> HomResult:
    """``dim Hom_K(X, Y)``: chain maps modulo null-homotopic ones."""
    space = MapSpace(X, Y.kmodel())
    F = X.field
    if space.nmap == 0:
        return HomResult(0, [])
    Z = nullspace(space.chain_equations(), F, cols=space.nmap)
    B = space.homotopy_boundary() if space.nhtp else []
    # columns of B span the null-homotopic maps
    bcols = [list(col) for col in zip(*B)] if B else []
    rb = rank(bcols, F) if bcols else 0
    dim = len(Z) - rb
    basis = []
    if want_basis and dim:
        span = list(bcols)
        r = rb
        for z in Z:
            if rank(span + [z], F) > r:
                span.append(z)
                r += 1
                basis.append(space.to_chain_map(z, Y))
            if len(basis) == dim:
                break
    return HomResult(dim, basis)


# ---------------------------------------------------------------------------
# generators


@dataclass(frozen=True)
class GeneratorRef:
    """The generator of ``hom(X_i[h1], X_j[h2])`` of the given kind."""

    source: Tuple[float | int, int]
    target: Tuple[float | int, int]
    kind: Kind

    @property
    def alpha(self) -> int:
        return self.target[1] - self.source[1]

    def exists(self) -> bool:
        (i, _), (j, _) = self.source, self.target
        if self.kind is Kind.ONE:
            return _has_one(i, j, self.alpha)
        return _has_eps(i, j, self.alpha)

    def __str__(self):
        (i, h1), (j, h2) = self.source, self.target
        sym = "1" if self.kind is Kind.ONE else "eps"
        return f"{sym}: X_{format_index(i)}[{h1}] -> X_{format_index(j)}[{h2}]"


class MissingGenerator(ValueError):
    pass


def _support(i, h, trunc: Optional[int]) -> Tuple[int, int]:
    top = -1 - h
    if i == INF:
        if trunc is None:
            raise ValueError("X_inf needs a truncation degree")
        return trunc, top
    return -i - h, top


def realize_indec(field: Field, i, h: int, trunc: Optional[int] = None) -> FreeComplex:
    lo, top = _support(i, h, trunc)
    return indecomposable(field, top - lo + 1, h)


def default_truncation(*objs: Tuple[float | int, int], margin: int = 4) -> int:
    """A truncation degree safely below every finite support involved."""
    lows = [-1 - h for _, h in objs]
    lows += [-i - h for i, h in objs if i != INF]
    return min(lows) - margin


def generator_rep(g: GeneratorRef, field: Field, trunc: Optional[int] = None) -> ChainMap:
    """A concrete chain map representing ``g`` (X_inf cut at degree ``trunc``)."""
    if not g.exists():
        raise MissingGenerator(f"no generator {g}")
    (i, h1), (j, h2) = g.source, g.target
    if trunc is None and INF in (i, j):
        trunc = default_truncation(g.source, g.target)
    X = realize_indec(field, i, h1, trunc)
    Y = realize_indec(field, j, h2, trunc)
    lo = max(min(X.ranks), min(Y.ranks))
    hi = min(max(X.ranks), max(Y.ranks))
    comps = {}
    if g.kind is Kind.ONE:
        for m in range(lo, hi + 1):
            s = -1 if ((h1 + h2) * (m + 1)) % 2 else 1
            comps[m] = DualMatrix(field, 1, 1, [[field(s)]], [[field.zero]])
    else:
        p = -1 - h1
        s = -1 if ((h1 + h2 + 1) * (p + 1)) % 2 else 1
        comps[p] = DualMatrix(field, 1, 1, [[field.zero]], [[field(s)]])
    return ChainMap(X, Y, comps)


class IdentificationError(RuntimeError):
    pass


def residue_model(field: Field, h: int) -> ModuleComplex:
    """X_inf[h] up to quasi-isomorphism: the module k in degree ``-1-h``."""
    return ModuleComplex(field, {-1 - h: (0, 1)})


def augment(f: ChainMap, h: int) -> ChainMap:
    """Post-compose a map into a truncated X_inf[h] with the augmentation onto k.

    The augmentation is ``a + eps b -> a`` in the top degree ``-1-h``.  Unlike
    the truncated free complex, the residue model has no artificial bottom
    degree, so Homs into it are the true Homs into X_inf[h].
    """
    p = -1 - h
    K = residue_model(f.field, h)
    comps = {}
    if f.source.rank(p) and f.target.rank(p):
        comps[p] = [list(f.component(p).a[0])]
    return ChainMap(f.source, K, comps)


def identify(f: ChainMap, source: Tuple, target: Tuple, trunc: Optional[int] = None):
    """Coefficients ``(a, b)`` of the class of ``f`` on the 1- and eps-generators.

    Maps into X_inf targets (realized truncated at ``trunc``) are identified
    after augmentation onto the residue model.
    """
    F = f.field
    to_inf = target[0] == INF

    def prep(m: ChainMap) -> ChainMap:
        return augment(m, target[1]) if to_inf else m

    model = residue_model(F, target[1]) if to_inf else f.target
    space = MapSpace(f.source, model.kmodel())
    cols = []
    kinds = []
    for kind in (Kind.ONE, Kind.EPS):
        g = GeneratorRef(source, target, kind)
        if g.exists():
            rep = generator_rep(g, F, trunc)
            cols.append(space.vectorize(prep(rep)))
            kinds.append(kind)
    B = space.homotopy_boundary() if space.nhtp else []
    bcols = [list(c) for c in zip(*B)] if B else []
    allcols = cols + bcols
    rhs = space.vectorize(prep(f))
    if not allcols:
        if any(x != 0 for x in rhs):
            raise IdentificationError("nonzero map into a zero Hom space")
        return F.zero, F.zero
    A = [list(r) for r in zip(*allcols)]
    sol = solve_affine(A, rhs, F, cols=len(allcols))
    if sol is None:
        raise IdentificationError(f"map is not a combination of generators of {source}->{target}")
    x = sol[0]
    a = b = F.zero
    for k, kind in enumerate(kinds):
        if kind is Kind.ONE:
            a = x[k]
        else:
            b = x[k]
    return a, b


# ---------------------------------------------------------------------------
# symbolic layer


def compose_generators(outer: Kind, inner: Kind, src, mid, tgt) -> Optional[Kind]:
    """Kind of ``outer o inner`` for generators src->mid->tgt, or None when zero."""
    alpha = tgt[1] - src[1]
    i, k = src[0], tgt[0]
    if outer is Kind.EPS and inner is Kind.EPS:
        return None
    if outer is Kind.ONE and inner is Kind.ONE:
        return Kind.ONE if _has_one(i, k, alpha) else None
    return Kind.EPS if _has_eps(i, k, alpha) else None


class SymMorphismError(ValueError):
    pass


@dataclass
class SymMorphism:
    """A morphism between formal objects in generator coordinates.

    ``blocks[(s, t)] = (a, b)`` for copy ``s`` of the source and copy ``t`` of
    the target (indices into ``FormalObject.expanded()``).
    """

    field: Field
    source: FormalObject
    target: FormalObject
    blocks: Dict[Tuple[int, int], Tuple] = dc_field(default_factory=dict)

    def __post_init__(self):
        S, T = self.source.expanded(), self.target.expanded()
        clean = {}
        for (s, t), (a, b) in self.blocks.items():
            if not (0 <= s < len(S) and 0 <= t < len(T)):
                raise SymMorphismError(f"block ({s},{t}) out of range")
            a, b = self.field(a), self.field(b)
            (i, h1), (j, h2) = S[s], T[t]
            if a != 0 and not _has_one(i, j, h2 - h1):
                raise SymMorphismError(f"no 1-generator from {S[s]} to {T[t]}")
            if b != 0 and not _has_eps(i, j, h2 - h1):
                raise SymMorphismError(f"no eps-generator from {S[s]} to {T[t]}")
            if a != 0 or b != 0:
                clean[(s, t)] = (a, b)
        self.blocks = clean

    @classmethod
    def identity(cls, field: Field, X: FormalObject) -> "SymMorphism":
        n = len(X.expanded())
        return cls(field, X, X, {(s, s): (1, 0) for s in range(n)})

    @classmethod
    def generator(cls, field: Field, g: GeneratorRef, coefficient=1) -> "SymMorphism":
        if not g.exists():
            raise MissingGenerator(f"no generator {g}")
        c = field(coefficient)
        ab = (c, 0) if g.kind is Kind.ONE else (0, c)
        return cls(field, FormalObject.of([g.source]), FormalObject.of([g.target]), {(0, 0): ab})

    def coefficient(self, s: int, t: int):
        F = self.field
        return self.blocks.get((s, t), (F.zero, F.zero))

    def __eq__(self, other):
        if not isinstance(other, SymMorphism):
            return NotImplemented
        return (
            self.field == other.field
            and self.source == other.source
            and self.target == other.target
            and self.blocks == other.blocks
        )

    def __add__(self, other: "SymMorphism") -> "SymMorphism":
        if (self.source, self.target) != (other.source, other.target):
            raise SymMorphismError("cannot add morphisms with different ends")
        F = self.field
        out = dict(self.blocks)
        for key, (a, b) in other.blocks.items():
            a0, b0 = out.get(key, (F.zero, F.zero))
            out[key] = (F.add(a0, a), F.add(b0, b))
        return SymMorphism(F, self.source, self.target, out)

    def scale(self, c) -> "SymMorphism":
        F = self.field
        c = F(c)
        return SymMorphism(
            F, self.source, self.target,
            {k: (F.mul(c, a), F.mul(c, b)) for k, (a, b) in self.blocks.items()},
        )

    def is_zero(self) -> bool:
        return not self.blocks


def compose_sym(g: SymMorphism, f: SymMorphism) -> SymMorphism:
    """``g o f`` via the generator composition rules."""
    if f.target != g.source:
        raise SymMorphismError(f"cannot compose: {f.target} != {g.source}")
    if f.field != g.field:
        raise SymMorphismError("field mismatch")
    F = f.field
    S, M, T = f.source.expanded(), f.target.expanded(), g.target.expanded()
    out: Dict[Tuple[int, int], list] = {}
    by_mid: Dict[int, list] = {}
    for (t, u), ab in g.blocks.items():
        by_mid.setdefault(t, []).append((u, ab))
    for (s, t), (a1, b1) in f.blocks.items():
        for u, (a2, b2) in by_mid.get(t, []):
            acc = out.setdefault((s, u), [F.zero, F.zero])
            for outer, c2 in ((Kind.ONE, a2), (Kind.EPS, b2)):
                if c2 == 0:
                    continue
                for inner, c1 in ((Kind.ONE, a1), (Kind.EPS, b1)):
                    if c1 == 0:
                        continue
                    kind = compose_generators(outer, inner, S[s], M[t], T[u])
                    if kind is None:
                        continue
                    slot = 0 if kind is Kind.ONE else 1
                    acc[slot] = F.add(acc[slot], F.mul(c1, c2))
    return SymMorphism(F, f.source, g.target, {k: tuple(v) for k, v in out.items()})


# ---------------------------------------------------------------------------
# cones


# third vertices of the triangles X_inf -eps-> X_1 -1-> X_inf and its rotation
CONE_CATALOG = {
    ((INF, 0), (1, 0), Kind.EPS): FormalObject.single(INF, 0),
    ((1, 0), (INF, 0), Kind.ONE): FormalObject.single(INF, 1),
}


def _cone_barcode(g: GeneratorRef, field: Field, coefficient, trunc: Optional[int]):
    rep = generator_rep(g, field, trunc).scale(coefficient)
    return barcode(cone(rep))


def _classify_truncated(B: FormalObject, trunc: int) -> FormalObject:
    out = []
    for i, h, m in B.summands:
        bottom = -i - h
        if bottom <= trunc:
            out.append((INF, h, m))
        else:
            out.append((i, h, m))
    return FormalObject.of(out)


@lru_cache(maxsize=None)
def _cone_symbolic_cached(g: GeneratorRef, p: Optional[int], coefficient: str):
    field = Field(p)
    c = field(coefficient)
    if INF not in (g.source[0], g.target[0]):
        return _cone_barcode(g, field, c, None)
    base = default_truncation(g.source, g.target)
    results = []
    for trunc in (base, base - 3):
        B = _cone_barcode(g, field, c, trunc)
        results.append(_classify_truncated(B, trunc))
    if results[0] != results[1]:
        raise RuntimeError(f"cone of {g} did not stabilize under truncation: {results}")
    return results[0]


def cone_symbolic(g: GeneratorRef, field: Field, coefficient=1) -> FormalObject:
    """Third vertex of the triangle on ``coefficient * g`` (coefficient nonzero)."""
    if not g.exists():
        raise MissingGenerator(f"no generator {g}")
    c = field(coefficient)
    if c == 0:
        raise ValueError("coefficient must be nonzero")
    return _cone_symbolic_cached(g, field.p, field.fmt(c))


# ---------------------------------------------------------------------------
# X_inf via truncation


def truncation_bound(j, alpha: int) -> int:
    amp = 1 if j == INF else j
    return amp + abs(alpha) + 2


def hom_infty(i, j, alpha: int, N: int, field: Optional[Field] = None) -> int:
    """Brute-force ``dim hom(X_i, X_j[alpha])`` with X_inf sources cut at length N.

    X_inf targets are modelled by the module k in degree ``-1-alpha``.
    """
    field = field or Field(7)
    i, j = parse_index(i), parse_index(j)
    if i == INF:
        need = truncation_bound(j, alpha)
        if N < need:
            raise ValueError(f"truncation length {N} below bound {need}")
        X = indecomposable(field, N, 0)
    else:
        X = indecomposable(field, i, 0)
    if j == INF:
        Y = residue_model(field, alpha)
    else:
        Y = indecomposable(field, j, alpha)
    return hom_bruteforce(X, Y, want_basis=False).dim


__all__ = [
    "CONE_CATALOG",
    "GeneratorRef",
    "HomDescriptor",
    "HomResult",
    "IdentificationError",
    "Kind",
    "MissingGenerator",
    "SymMorphism",
    "SymMorphismError",
    "augment",
    "compose_generators",
    "compose_sym",
    "cone_symbolic",
    "default_truncation",
    "generator_rep",
    "hom_bruteforce",
    "hom_infty",
    "hom_table",
    "identify",
    "realize_indec",
    "residue_model",
    "truncation_bound",
]
