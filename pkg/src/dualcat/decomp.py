"""Krull-Schmidt decomposition of perfect complexes into the X_i[h].

A complex is first reduced to a minimal one (all differential entries in
eps*k) by cancelling unit pivots.  The eps-parts of a minimal complex form a
representation of an equioriented type-A quiver, whose interval summands are
read off with the usual rank inclusion-exclusion.  An interval on degrees
s..e is the summand X_{e-s+1}[-1-e].
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple

from .complexes import (
    ChainMap,
    ComplexError,
    FreeComplex,
    direct_sum_all,
    indecomposable,
    zero_complex,
)
from .linalg import (
    DualMatrix,
    DualScalar,
    Field,
    _col_axpy,
    _row_axpy,
    matmul,
    random_dual_invertible,
    rank,
)

INF = math.inf


def parse_index(tok) -> float | int:
    """``"inf"`` (or math.inf) for X_inf, otherwise a positive integer."""
    if isinstance(tok, str):
        if tok.strip().lower() in ("inf", "infinity", "∞"):
            return INF
        tok = int(tok)
    if tok == INF:
        return INF
    if int(tok) != tok or tok < 1:
        raise ValueError(f"indecomposable index must be a positive integer or 'inf', got {tok!r}")
    return int(tok)


def format_index(i) -> str:
    return "inf" if i == INF else str(i)


@dataclass(frozen=True)
class FormalObject:
    """A finite direct sum of indecomposables, kept as sorted ``(i, h, m)``."""

    summands: Tuple[Tuple[float | int, int, int], ...] = ()

    @classmethod
    def of(cls, items: Iterable) -> "FormalObject":
        """From ``(i, h)`` or ``(i, h, m)`` tuples; repeated entries add up."""
        c = Counter()
        for t in items:
            i, h = parse_index(t[0]), int(t[1])
            m = int(t[2]) if len(t) > 2 else 1
            if m < 0:
                raise ValueError("negative multiplicity")
            c[(i, h)] += m
        return cls(tuple(sorted(((i, h, m) for (i, h), m in c.items() if m), key=lambda s: (s[1], s[0]))))

    @classmethod
    def single(cls, i, h: int = 0) -> "FormalObject":
        return cls.of([(i, h)])

    def __add__(self, other: "FormalObject") -> "FormalObject":
        return FormalObject.of(list(self.summands) + list(other.summands))

    def shift(self, n: int) -> "FormalObject":
        return FormalObject.of([(i, h + n, m) for i, h, m in self.summands])

    def expanded(self):
        """One ``(i, h)`` per copy, in canonical order."""
        return [(i, h) for i, h, m in self.summands for _ in range(m)]

    def is_zero(self) -> bool:
        return not self.summands

    def is_perfect(self) -> bool:
        return all(i != INF for i, _, _ in self.summands)

    def __len__(self):
        return sum(m for _, _, m in self.summands)

    def __str__(self):
        if not self.summands:
            return "0"
        parts = []
        for i, h, m in self.summands:
            s = f"X_{format_index(i)}" + (f"[{h}]" if h else "")
            parts.append(s if m == 1 else f"{m}*{s}")
        return " + ".join(parts)


@dataclass(frozen=True)
class CohomologyProfile:
    """``degrees[n] = (a_n, b_n)``: H^n is A^a_n + k^b_n."""

    degrees: Tuple[Tuple[int, Tuple[int, int]], ...]

    def as_dict(self) -> Dict[int, Tuple[int, int]]:
        return dict(self.degrees)

    def kdim(self, n: int) -> int:
        a, b = self.as_dict().get(n, (0, 0))
        return 2 * a + b


# ---------------------------------------------------------------------------


def realize(F: FormalObject, field: Field, truncate_at: Optional[int] = None) -> FreeComplex:
    """The canonical complex of a formal object.

    X_inf[h] needs ``truncate_at``: it is cut to the free complex occupying
    degrees ``truncate_at..-1-h``.
    """
    parts = []
    for i, h in F.expanded():
        if i == INF:
            if truncate_at is None:
                raise ValueError("X_inf has no finite realization; pass truncate_at")
            length = -1 - h - truncate_at + 1
            if length < 1:
                raise ValueError(f"truncation degree {truncate_at} is above X_inf[{h}]")
            parts.append(indecomposable(field, length, h))
        else:
            parts.append(indecomposable(field, i, h))
    return direct_sum_all(field, parts)


@dataclass
class MinimalModel:
    complex: FreeComplex
    inclusion: ChainMap  # minimal -> original
    projection: ChainMap  # original -> minimal


def minimize(C: FreeComplex) -> MinimalModel:
    """Cancel unit pivots until every differential entry lies in eps*k."""
    v = C.validate()
    if not v:
        raise ComplexError(v.message, v.degree)
    field = C.field
    degs = C.degrees
    d = {n: C.d(n).copy() for n in degs}
    T = {n: DualMatrix.identity(field, C.rank(n)) for n in degs}
    Tinv = {n: DualMatrix.identity(field, C.rank(n)) for n in degs}
    live = {n: set(range(C.rank(n))) for n in degs}

    def find_pivot():
        for n in degs:
            M = d[n]
            if not C.rank(n + 1):
                continue
            for i in sorted(live[n + 1]):
                for j in sorted(live[n]):
                    if M.a[i][j] != 0:
                        return n, i, j
        return None

    while True:
        piv = find_pivot()
        if piv is None:
            break
        n, r, c = piv
        M = d[n]
        u_inv = M[r, c].inverse()
        # clear column c with row operations in degree n+1
        for i in range(M.rows):
            if i == r or (M.a[i][c] == 0 and M.b[i][c] == 0):
                continue
            s = -(M[i, c] * u_inv)
            _row_axpy(M, i, r, s)
            _row_axpy(T[n + 1], i, r, s)
            _col_axpy(Tinv[n + 1], r, i, -s)
            if (n + 1) in d and C.rank(n + 2):
                _col_axpy(d[n + 1], r, i, -s)
        # clear row r with column operations in degree n
        for j in range(M.cols):
            if j == c or (M.a[r][j] == 0 and M.b[r][j] == 0):
                continue
            s = -(u_inv * M[r, j])
            _col_axpy(M, j, c, s)
            _col_axpy(Tinv[n], j, c, s)
            _row_axpy(T[n], c, j, -s)
            if (n - 1) in d and C.rank(n - 1):
                _row_axpy(d[n - 1], c, j, -s)
        live[n + 1].discard(r)
        live[n].discard(c)

    keep = {n: sorted(live[n]) for n in degs}
    ranks = {n: len(keep[n]) for n in degs}
    diffs = {
        n: d[n].submatrix(keep[n + 1], keep[n])
        for n in degs
        if ranks[n] and ranks.get(n + 1)
    }
    Mc = FreeComplex(field, ranks, diffs)
    incl = {n: Tinv[n].submatrix(range(C.rank(n)), keep[n]) for n in degs if keep[n]}
    proj = {n: T[n].submatrix(keep[n], range(C.rank(n))) for n in degs if keep[n]}
    return MinimalModel(Mc, ChainMap(Mc, C, incl), ChainMap(C, Mc, proj))


def barcode(C: FreeComplex) -> FormalObject:
    """Multiplicities of the indecomposable summands X_i[h] of ``C``."""
    M = minimize(C).complex
    if M.is_zero():
        return FormalObject()
    F = M.field
    lo, hi = min(M.ranks), max(M.ranks)
    dims = {n: M.rank(n) for n in range(lo, hi + 1)}

    # rho[(b, e)] = rank of eps-part composite from degree b to degree e
    rho: Dict[Tuple[int, int], int] = {}
    for b in range(lo, hi + 1):
        if not dims[b]:
            continue
        rho[(b, b)] = dims[b]
        P = None
        for e in range(b + 1, hi + 1):
            if not dims[e]:
                break
            step = M.d(e - 1).b
            P = step if P is None else matmul(step, P, F, dims[e - 1])
            r = rank(P, F)
            if r == 0:
                break
            rho[(b, e)] = r

    def R(b, e):
        return rho.get((b, e), 0)

    out = []
    for b in range(lo, hi + 1):
        for e in range(b, hi + 1):
            m = R(b, e) - R(b - 1, e) - R(b, e + 1) + R(b - 1, e + 1)
            if m < 0:
                raise AssertionError("negative interval multiplicity")
            if m:
                out.append((e - b + 1, -1 - e, m))
    return FormalObject.of(out)


def cohomology(C: FreeComplex) -> CohomologyProfile:
    """Cohomology modules of ``C`` as counts of A- and k-summands per degree."""
    return cohomology_of(barcode(C))


def cohomology_of(F: FormalObject) -> CohomologyProfile:
    prof: Dict[int, list] = {}
    for i, h, m in F.summands:
        if i == INF:
            raise ValueError("cohomology_of is defined for perfect objects only")
        top = -1 - h
        if i == 1:
            prof.setdefault(top, [0, 0])[0] += m
        else:
            prof.setdefault(top, [0, 0])[1] += m
            prof.setdefault(-i - h, [0, 0])[1] += m
    return CohomologyProfile(tuple(sorted((n, tuple(v)) for n, v in prof.items())))


def cohomology_direct(C: FreeComplex) -> Dict[int, int]:
    """k-dimension of each H^n, straight from the k-model (independent of barcode)."""
    K = C.kmodel()
    F = C.field
    out = {}
    for n in C.degrees:
        dn = K.dim(n)
        rk_out = rank(K.D[n], F) if n in K.D else 0
        rk_in = rank(K.D[n - 1], F) if (n - 1) in K.D else 0
        h = dn - rk_out - rk_in
        if h:
            out[n] = h
    return out


def k_class(F: FormalObject) -> int:
    """The integer n with [F] = n [X_inf] in K_0."""
    total = 0
    for i, h, m in F.summands:
        sign = -1 if h % 2 else 1
        if i == INF:
            total += m * sign
        else:
            total += m * sign * (1 + (1 if (i - 1) % 2 == 0 else -1))
    return total


def scramble(C: FreeComplex, rng) -> FreeComplex:
    """Conjugate by random invertible basis changes over A in every degree."""
    field = C.field
    T = {n: random_dual_invertible(r, field, rng) for n, r in C.ranks.items()}
    diffs = {}
    for n in C.degrees:
        if C.rank(n + 1):
            diffs[n] = T[n + 1] @ C.d(n) @ T[n].inverse()
    return FreeComplex(field, dict(C.ranks), diffs)


def contractible(field: Field, n: int, unit: Optional[DualScalar] = None) -> FreeComplex:
    """``A --u--> A`` in degrees n, n+1 (u a unit, default 1)."""
    u = unit or DualScalar(field, field.one, field.zero)
    return FreeComplex(field, {n: 1, n + 1: 1}, {n: DualMatrix.scalar(u)})


__all__ = [
    "INF",
    "FormalObject",
    "CohomologyProfile",
    "MinimalModel",
    "barcode",
    "cohomology",
    "cohomology_of",
    "cohomology_direct",
    "contractible",
    "format_index",
    "k_class",
    "minimize",
    "parse_index",
    "realize",
    "scramble",
    "zero_complex",
]
