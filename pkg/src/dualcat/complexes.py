"""Bounded complexes over A = k[eps]/(eps^2), chain maps and homotopies.

Degree conventions: differentials raise degree, ``d^n : C^n -> C^{n+1}``.
``X_i`` lives in degrees ``-i..-1``; ``C[n]^m = C^{m+n}`` with differentials
multiplied by ``(-1)^n``; the cone of ``f : C -> D`` is
``C^{n+1} + D^n`` with differential ``[[-d_C, 0], [f, d_D]]``.

Every chain-map question is answered on the k-linear model of the target
(:class:`KModel`): a vector space per degree with its k-differential and the
action of eps.  Maps out of a free module are fixed by the images of the
generators, so all equations become plain linear algebra over k.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, Optional, Tuple, Union

from .linalg import (
    DimensionMismatch,
    DualMatrix,
    DualScalar,
    Field,
    FieldMismatch,
    is_zero_matrix,
    matadd,
    matmul,
    matsub,
    solve_affine,
    zeros,
)


class ComplexError(ValueError):
    """A complex failed validation; ``degree`` names the first bad degree."""

    def __init__(self, message: str, degree: Optional[int] = None):
        super().__init__(message)
        self.degree = degree


@dataclass(frozen=True)
class Validation:
    ok: bool
    degree: Optional[int] = None
    message: str = ""

    def __bool__(self):
        return self.ok


@dataclass
class KModel:
    """k-linear model: ``dims[n]``, ``D[n]: V^n -> V^{n+1}``, ``E[n]`` = eps on V^n."""

    field: Field
    dims: Dict[int, int]
    D: Dict[int, list]
    E: Dict[int, list]

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)


class FreeComplex:
    """A bounded complex of finitely generated free A-modules."""

    def __init__(self, field: Field, ranks: Dict[int, int], diffs: Optional[Dict[int, DualMatrix]] = None):
        self.field = field
        self.ranks = {int(n): int(r) for n, r in ranks.items() if r}
        if any(r < 0 for r in self.ranks.values()):
            raise ValueError("negative rank")
        self.diffs: Dict[int, DualMatrix] = {}
        for n, M in (diffs or {}).items():
            n = int(n)
            if M.field != field:
                raise FieldMismatch(f"differential in degree {n} is over {M.field}")
            want = (self.rank(n + 1), self.rank(n))
            if (M.rows, M.cols) != want:
                raise DimensionMismatch(
                    f"differential in degree {n} has shape {M.rows}x{M.cols}, expected {want[0]}x{want[1]}"
                )
            if want[0] and want[1] and not M.is_zero():
                self.diffs[n] = M

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def d(self, n: int) -> DualMatrix:
        M = self.diffs.get(n)
        if M is None:
            return DualMatrix(self.field, self.rank(n + 1), self.rank(n))
        return M

    @property
    def degrees(self):
        return sorted(self.ranks)

    def is_zero(self) -> bool:
        return not self.ranks

    @property
    def amplitude(self) -> int:
        if not self.ranks:
            return 0
        return max(self.ranks) - min(self.ranks) + 1

    def __eq__(self, other):
        if not isinstance(other, FreeComplex):
            return NotImplemented
        return (
            self.field == other.field
            and self.ranks == other.ranks
            and all(self.d(n) == other.d(n) for n in set(self.diffs) | set(other.diffs))
        )

    def __repr__(self):
        return f"FreeComplex(ranks={dict(sorted(self.ranks.items()))})"

    def validate(self) -> Validation:
        for n in self.degrees:
            if self.rank(n + 1) == 0 or self.rank(n + 2) == 0:
                continue
            if not (self.d(n + 1) @ self.d(n)).is_zero():
                return Validation(False, n, f"d^{n + 1} d^{n} != 0")
        return Validation(True)

    def kmodel(self) -> KModel:
        F = self.field
        dims, D, E = {}, {}, {}
        for n, r in self.ranks.items():
            dims[n] = 2 * r
            Em = zeros(2 * r, 2 * r, F)
            for j in range(r):
                Em[r + j][j] = F.one
            E[n] = Em
        for n in self.ranks:
            if self.rank(n + 1):
                D[n] = self.d(n).realify()
        return KModel(F, dims, D, E)


class ModuleComplex:
    """A bounded complex whose terms are ``A^f + k^t``.

    Differential blocks follow the only A-linear options: A->A is a dual
    scalar, A->k is ``c*proj`` (a + eps b -> c a), k->A is ``c*incl``
    (x -> eps c x) and k->k is a scalar.  Hence proj o incl = 0 and
    incl o proj = eps.
    """

    def __init__(self, field: Field, terms: Dict[int, Tuple[int, int]], diffs=None):
        self.field = field
        self.terms = {int(n): (int(f), int(t)) for n, (f, t) in terms.items() if f or t}
        self.diffs = {}
        for n, blocks in (diffs or {}).items():
            n = int(n)
            f0, t0 = self.term(n)
            f1, t1 = self.term(n + 1)
            AA, AK, KA, KK = blocks
            if (AA.rows, AA.cols) != (f1, f0):
                raise DimensionMismatch(f"A->A block in degree {n} has wrong shape")
            for M, shape in ((AK, (t1, f0)), (KA, (f1, t0)), (KK, (t1, t0))):
                if len(M) != shape[0] or any(len(r) != shape[1] for r in M):
                    raise DimensionMismatch(f"typed block in degree {n} has wrong shape")
            self.diffs[n] = (AA, AK, KA, KK)

    def term(self, n: int) -> Tuple[int, int]:
        return self.terms.get(n, (0, 0))

    @property
    def degrees(self):
        return sorted(self.terms)

    @classmethod
    def from_free(cls, C: FreeComplex) -> "ModuleComplex":
        F = C.field
        diffs = {}
        for n, M in C.diffs.items():
            f0, f1 = C.rank(n), C.rank(n + 1)
            diffs[n] = (M, zeros(0, f0, F), zeros(f1, 0, F), zeros(0, 0, F))
        return cls(F, {n: (r, 0) for n, r in C.ranks.items()}, diffs)

    def blocks(self, n: int):
        if n in self.diffs:
            return self.diffs[n]
        F = self.field
        f0, t0 = self.term(n)
        f1, t1 = self.term(n + 1)
        return (DualMatrix(F, f1, f0), zeros(t1, f0, F), zeros(f1, t0, F), zeros(t1, t0, F))

    def kmodel(self) -> KModel:
        # basis of degree n: e_1..e_f, eps e_1..eps e_f, k_1..k_t
        F = self.field
        dims, D, E = {}, {}, {}
        for n, (f, t) in self.terms.items():
            dims[n] = 2 * f + t
            Em = zeros(2 * f + t, 2 * f + t, F)
            for j in range(f):
                Em[f + j][j] = F.one
            E[n] = Em
        for n in self.terms:
            f0, t0 = self.term(n)
            f1, t1 = self.term(n + 1)
            if not (f1 or t1):
                continue
            AA, AK, KA, KK = self.blocks(n)
            M = zeros(2 * f1 + t1, 2 * f0 + t0, F)
            for i in range(f1):
                for j in range(f0):
                    a, b = AA.a[i][j], AA.b[i][j]
                    M[i][j] = a
                    M[f1 + i][j] = b
                    M[f1 + i][f0 + j] = a
            for i in range(t1):
                for j in range(f0):
                    M[2 * f1 + i][j] = AK[i][j]
            for i in range(f1):
                for j in range(t0):
                    M[f1 + i][2 * f0 + j] = KA[i][j]
            for i in range(t1):
                for j in range(t0):
                    M[2 * f1 + i][2 * f0 + j] = KK[i][j]
            D[n] = M
        return KModel(F, dims, D, E)

    def validate(self) -> Validation:
        K = self.kmodel()
        F = self.field
        for n in self.degrees:
            if n in K.D and (n + 1) in K.D:
                if not is_zero_matrix(matmul(K.D[n + 1], K.D[n], F, K.dim(n + 1))):
                    return Validation(False, n, f"d^{n + 1} d^{n} != 0")
        return Validation(True)

    def __repr__(self):
        return f"ModuleComplex(terms={dict(sorted(self.terms.items()))})"


Complex = Union[FreeComplex, ModuleComplex]


def validate(C: Complex) -> Validation:
    """Check boundedness (by construction) and d^2 = 0; report the first bad degree."""
    return C.validate()


# ---------------------------------------------------------------------------
# chain maps


@dataclass
class ChainMap:
    """A chain map out of a free complex.

    For a free target the components are DualMatrix (target rank x source
    rank); for a module target they are generator-image matrices on the
    target's k-model (dim V^n x source rank).
    """

    source: FreeComplex
    target: Complex
    components: Dict[int, object] = dc_field(default_factory=dict)

    @property
    def field(self) -> Field:
        return self.source.field

    def component(self, n: int):
        c = self.components.get(n)
        if c is not None:
            return c
        if isinstance(self.target, FreeComplex):
            return DualMatrix(self.field, self.target.rank(n), self.source.rank(n))
        return zeros(self.target.kmodel().dim(n), self.source.rank(n), self.field)

    def generator_images(self, n: int):
        c = self.component(n)
        if isinstance(c, DualMatrix):
            return c.a + c.b
        return c

    def is_chain_map(self) -> bool:
        K = self.target.kmodel()
        return _chain_residual(self.source, K, {n: self.generator_images(n) for n in self._degrees()}) is None

    def _degrees(self):
        return sorted(set(self.source.ranks))

    def __add__(self, other: "ChainMap") -> "ChainMap":
        comps = {}
        for n in set(self.components) | set(other.components):
            a, b = self.component(n), other.component(n)
            comps[n] = a + b if isinstance(a, DualMatrix) else matadd(a, b, self.field)
        return ChainMap(self.source, self.target, comps)

    def scale(self, c) -> "ChainMap":
        F = self.field
        s = DualScalar(F, F(c), F.zero)
        comps = {}
        for n, m in self.components.items():
            if isinstance(m, DualMatrix):
                comps[n] = DualMatrix.scalar_matrix(s, m.rows) @ m
            else:
                comps[n] = [[F.mul(F(c), x) for x in row] for row in m]
        return ChainMap(self.source, self.target, comps)

    def is_zero(self) -> bool:
        for m in self.components.values():
            if isinstance(m, DualMatrix):
                if not m.is_zero():
                    return False
            elif not is_zero_matrix(m):
                return False
        return True


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """``g o f`` for chain maps between free complexes."""
    if not isinstance(g.target, FreeComplex):
        raise TypeError("composition is only defined between free complexes")
    comps = {}
    for n in f.source.degrees:
        if g.target.rank(n) and f.target.rank(n):
            comps[n] = g.component(n) @ f.component(n)
    return ChainMap(f.source, g.target, comps)


def identity_map(C: FreeComplex) -> ChainMap:
    return ChainMap(C, C, {n: DualMatrix.identity(C.field, r) for n, r in C.ranks.items()})


@dataclass
class Homotopy:
    """``components[n] : X^n -> Y^{n-1}`` (DualMatrix for free targets)."""

    source: FreeComplex
    target: Complex
    components: Dict[int, object]

    def boundary(self) -> ChainMap:
        """The null-homotopic map ``d s + s d``."""
        X, Y = self.source, self.target
        if not isinstance(Y, FreeComplex):
            K = Y.kmodel()
            imgs = _homotopy_images(X, K, {n: self.components.get(n) for n in X.degrees})
            return ChainMap(X, Y, imgs)
        F = X.field
        comps = {}
        for n in X.degrees:
            if not Y.rank(n):
                continue
            acc = DualMatrix(F, Y.rank(n), X.rank(n))
            s_n = self.components.get(n)
            if s_n is not None and Y.rank(n - 1):
                acc = acc + Y.d(n - 1) @ s_n
            s_n1 = self.components.get(n + 1)
            if s_n1 is not None and X.rank(n + 1):
                acc = acc + s_n1 @ X.d(n)
            comps[n] = acc
        return ChainMap(X, Y, comps)


# ---------------------------------------------------------------------------
# constructions


def indecomposable(field: Field, i: int, h: int = 0) -> FreeComplex:
    """``X_i[h]``: i copies of A joined by eps, in degrees -i-h..-1-h."""
    if i < 1:
        raise ValueError("X_i needs i >= 1")
    sign = -1 if h % 2 else 1
    eps = DualMatrix(field, 1, 1, [[field.zero]], [[field(sign)]])
    lo = -i - h
    return FreeComplex(field, {n: 1 for n in range(lo, lo + i)}, {n: eps for n in range(lo, lo + i - 1)})


def zero_complex(field: Field) -> FreeComplex:
    return FreeComplex(field, {})


def shift(C: Complex, n: int) -> Complex:
    """``C[n]``: ``C[n]^m = C^{m+n}``, differentials times ``(-1)^n``."""
    if isinstance(C, ModuleComplex):
        F = C.field
        neg = n % 2 == 1

        def sgn(M):
            return [[F.neg(x) for x in r] for r in M] if neg else M

        diffs = {}
        for m, (AA, AK, KA, KK) in C.diffs.items():
            diffs[m - n] = (-AA if neg else AA, sgn(AK), sgn(KA), sgn(KK))
        return ModuleComplex(F, {m - n: t for m, t in C.terms.items()}, diffs)
    diffs = {m - n: (-M if n % 2 else M) for m, M in C.diffs.items()}
    return FreeComplex(C.field, {m - n: r for m, r in C.ranks.items()}, diffs)


def shift_map(f: ChainMap, n: int) -> ChainMap:
    return ChainMap(shift(f.source, n), shift(f.target, n), {m - n: c for m, c in f.components.items()})


def _block_diag(A: DualMatrix, B: DualMatrix) -> DualMatrix:
    F = A.field
    M = DualMatrix(F, A.rows + B.rows, A.cols + B.cols)
    for i in range(A.rows):
        for j in range(A.cols):
            M.a[i][j], M.b[i][j] = A.a[i][j], A.b[i][j]
    for i in range(B.rows):
        for j in range(B.cols):
            M.a[A.rows + i][A.cols + j], M.b[A.rows + i][A.cols + j] = B.a[i][j], B.b[i][j]
    return M


def direct_sum(C: FreeComplex, D: FreeComplex) -> FreeComplex:
    """Degreewise block-diagonal sum; C's generators come first."""
    if C.field != D.field:
        raise FieldMismatch(f"{C.field} vs {D.field}")
    degs = set(C.ranks) | set(D.ranks)
    ranks = {n: C.rank(n) + D.rank(n) for n in degs}
    diffs = {n: _block_diag(C.d(n), D.d(n)) for n in degs if ranks.get(n + 1)}
    return FreeComplex(C.field, ranks, diffs)


def direct_sum_all(field: Field, parts) -> FreeComplex:
    out = zero_complex(field)
    for P in parts:
        out = direct_sum(out, P)
    return out


def cone(f: ChainMap) -> FreeComplex:
    """Mapping cone with differential ``[[-d_X, 0], [f, d_Y]]``."""
    X, Y = f.source, f.target
    if not isinstance(Y, FreeComplex):
        raise TypeError("cone is only built for maps between free complexes")
    for C in (X, Y):
        v = C.validate()
        if not v:
            raise ComplexError(v.message, v.degree)
    F = X.field
    degs = {n - 1 for n in X.ranks} | set(Y.ranks)
    ranks = {n: X.rank(n + 1) + Y.rank(n) for n in degs}
    diffs = {}
    for n in degs:
        rows = ranks.get(n + 1, 0)
        if not rows:
            continue
        M = DualMatrix(F, rows, ranks[n])
        xr0, xr1 = X.rank(n + 1), X.rank(n + 2)
        # top-left: -d_X^{n+1}
        dX = X.d(n + 1)
        for i in range(xr1):
            for j in range(xr0):
                M.a[i][j], M.b[i][j] = F.neg(dX.a[i][j]), F.neg(dX.b[i][j])
        # bottom-left: f^{n+1}
        if Y.rank(n + 1) and xr0:
            fc = f.component(n + 1)
            for i in range(Y.rank(n + 1)):
                for j in range(xr0):
                    M.a[xr1 + i][j], M.b[xr1 + i][j] = fc.a[i][j], fc.b[i][j]
        # bottom-right: d_Y^n
        dY = Y.d(n)
        for i in range(Y.rank(n + 1)):
            for j in range(Y.rank(n)):
                M.a[xr1 + i][xr0 + j], M.b[xr1 + i][xr0 + j] = dY.a[i][j], dY.b[i][j]
        diffs[n] = M
    C = FreeComplex(F, ranks, diffs)
    v = C.validate()
    if not v:
        raise ComplexError(v.message, v.degree)
    return C


def cone_inclusion(f: ChainMap, C: Optional[FreeComplex] = None) -> ChainMap:
    """The canonical map ``Y -> Cone(f)``."""
    X, Y = f.source, f.target
    C = C or cone(f)
    F = X.field
    comps = {}
    for n in Y.degrees:
        M = DualMatrix(F, C.rank(n), Y.rank(n))
        for j in range(Y.rank(n)):
            M.a[X.rank(n + 1) + j][j] = F.one
        comps[n] = M
    return ChainMap(Y, C, comps)


def cone_projection(f: ChainMap, C: Optional[FreeComplex] = None) -> ChainMap:
    """The canonical map ``Cone(f) -> X[1]``."""
    X = f.source
    C = C or cone(f)
    X1 = shift(X, 1)
    F = X.field
    comps = {}
    for n in C.degrees:
        if not X1.rank(n):
            continue
        M = DualMatrix(F, X1.rank(n), C.rank(n))
        for j in range(X1.rank(n)):
            M.a[j][j] = F.one
        comps[n] = M
    return ChainMap(C, X1, comps)


# ---------------------------------------------------------------------------
# linear systems for maps out of a free complex


def _kron_block(L, R, F, p, q, r, s):
    """Matrix of G -> L G R for G of shape q x r (row-major vec); L is p x q, R is r x s."""
    out = zeros(p * s, q * r, F)
    for i in range(p):
        Li = L[i]
        for k in range(q):
            lk = Li[k]
            if lk == 0:
                continue
            for l in range(r):
                Rl = R[l]
                for j in range(s):
                    if Rl[j] != 0:
                        out[i * s + j][k * r + l] = F.add(out[i * s + j][k * r + l], F.mul(lk, Rl[j]))
    return out


class MapSpace:
    """Coordinates for chain maps and homotopies from a free ``X`` into a model ``K``.

    A chain-map parameter vector concatenates the generator-image matrices
    ``G^n`` (dim V^n x rank X^n, row-major) over the degrees of X.
    """

    def __init__(self, X: FreeComplex, K: KModel):
        self.X, self.K, self.F = X, K, X.field
        self.map_slots = {}
        off = 0
        for n in X.degrees:
            size = K.dim(n) * X.rank(n)
            if size:
                self.map_slots[n] = (off, K.dim(n), X.rank(n))
                off += size
        self.nmap = off
        self.htp_slots = {}
        off = 0
        for n in X.degrees:
            size = K.dim(n - 1) * X.rank(n)
            if size:
                self.htp_slots[n] = (off, K.dim(n - 1), X.rank(n))
                off += size
        self.nhtp = off

    def _place(self, rows, block, roff, coff):
        for i, brow in enumerate(block):
            row = rows[roff + i]
            for j, x in enumerate(brow):
                if x != 0:
                    row[coff + j] = self.F.add(row[coff + j], x)

    def chain_equations(self):
        """Matrix whose kernel is the space of chain maps."""
        X, K, F = self.X, self.K, self.F
        blocks = []
        nrows = 0
        for n in X.degrees:
            dv1 = K.dim(n + 1)
            r0 = X.rank(n)
            if not dv1:
                continue
            blocks.append((n, nrows))
            nrows += dv1 * r0
        rows = zeros(nrows, self.nmap, F)
        for n, roff in blocks:
            dv1, r0, r1 = K.dim(n + 1), X.rank(n), X.rank(n + 1)
            # D^n G^n
            if n in self.map_slots:
                coff, q, r = self.map_slots[n]
                Dn = K.D.get(n) or zeros(dv1, q, F)
                self._place(rows, _kron_block(Dn, _eye(r, F), F, dv1, q, r, r0), roff, coff)
            # - G^{n+1} a^n - E^{n+1} G^{n+1} b^n
            if (n + 1) in self.map_slots and r1:
                coff, q, r = self.map_slots[n + 1]
                dX = X.d(n)
                neg_a = [[F.neg(x) for x in row] for row in dX.a]
                neg_b = [[F.neg(x) for x in row] for row in dX.b]
                self._place(rows, _kron_block(_eye(q, F), neg_a, F, dv1, q, r, r0), roff, coff)
                self._place(rows, _kron_block(K.E[n + 1], neg_b, F, dv1, q, r, r0), roff, coff)
        return rows

    def homotopy_boundary(self):
        """Matrix of ``s -> d s + s d`` from homotopy parameters to map parameters."""
        X, K, F = self.X, self.K, self.F
        M = zeros(self.nmap, self.nhtp, F)
        for n, (roff, dvn, r0) in self.map_slots.items():
            # D^{n-1} S^n
            if n in self.htp_slots:
                coff, q, r = self.htp_slots[n]
                Dm = K.D.get(n - 1) or zeros(dvn, q, F)
                self._place(M, _kron_block(Dm, _eye(r, F), F, dvn, q, r, r0), roff, coff)
            # S^{n+1} a^n + E^n S^{n+1} b^n
            if (n + 1) in self.htp_slots:
                coff, q, r = self.htp_slots[n + 1]
                dX = X.d(n)
                self._place(M, _kron_block(_eye(q, F), dX.a, F, dvn, q, r, r0), roff, coff)
                self._place(M, _kron_block(K.E[n], dX.b, F, dvn, q, r, r0), roff, coff)
        return M

    def vectorize(self, f: ChainMap):
        v = [self.F.zero] * self.nmap
        for n, (off, q, r) in self.map_slots.items():
            G = f.generator_images(n)
            for i in range(q):
                for j in range(r):
                    v[off + i * r + j] = G[i][j]
        return v

    def to_chain_map(self, v, target: Complex) -> ChainMap:
        F = self.F
        comps = {}
        for n, (off, q, r) in self.map_slots.items():
            G = [[v[off + i * r + j] for j in range(r)] for i in range(q)]
            if isinstance(target, FreeComplex):
                t = target.rank(n)
                comps[n] = DualMatrix(F, t, r, G[:t], G[t:])
            else:
                comps[n] = G
        return ChainMap(self.X, target, comps)

    def to_homotopy(self, v, target: Complex) -> Homotopy:
        F = self.F
        comps = {}
        for n, (off, q, r) in self.htp_slots.items():
            G = [[v[off + i * r + j] for j in range(r)] for i in range(q)]
            if isinstance(target, FreeComplex):
                t = target.rank(n - 1)
                comps[n] = DualMatrix(F, t, r, G[:t], G[t:])
            else:
                comps[n] = G
        return Homotopy(self.X, target, comps)


def _eye(n, F):
    return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]


def _chain_residual(X: FreeComplex, K: KModel, images) -> Optional[int]:
    """First degree where the generator images fail the chain condition."""
    F = X.field
    for n in X.degrees:
        dv1 = K.dim(n + 1)
        if not dv1:
            continue
        lhs = zeros(dv1, X.rank(n), F)
        if images.get(n) is not None and K.dim(n):
            lhs = matmul(K.D.get(n) or zeros(dv1, K.dim(n), F), images[n], F, K.dim(n))
        if X.rank(n + 1) and images.get(n + 1) is not None:
            G1 = images[n + 1]
            dX = X.d(n)
            t1 = matmul(G1, dX.a, F, X.rank(n + 1))
            t2 = matmul(matmul(K.E[n + 1], G1, F, dv1), dX.b, F, X.rank(n + 1))
            lhs = matsub(matsub(lhs, t1, F), t2, F)
        if not is_zero_matrix(lhs):
            return n
    return None


def _homotopy_images(X: FreeComplex, K: KModel, comps):
    F = X.field
    out = {}
    for n in X.degrees:
        dvn = K.dim(n)
        if not dvn:
            continue
        acc = zeros(dvn, X.rank(n), F)
        S = comps.get(n)
        if S is not None and K.dim(n - 1):
            acc = matadd(acc, matmul(K.D[n - 1], S, F, K.dim(n - 1)), F)
        S1 = comps.get(n + 1)
        if S1 is not None and X.rank(n + 1):
            dX = X.d(n)
            acc = matadd(acc, matmul(S1, dX.a, F, X.rank(n + 1)), F)
            acc = matadd(acc, matmul(matmul(K.E[n], S1, F, dvn), dX.b, F, X.rank(n + 1)), F)
        out[n] = acc
    return out


def is_nullhomotopic(f: ChainMap) -> Optional[Homotopy]:
    """A homotopy ``s`` with ``f = d s + s d`` if one exists, else None."""
    K = f.target.kmodel()
    space = MapSpace(f.source, K)
    rhs = space.vectorize(f)
    B = space.homotopy_boundary()
    if space.nhtp == 0:
        return Homotopy(f.source, f.target, {}) if all(x == 0 for x in rhs) else None
    sol = solve_affine(B, rhs, f.field, cols=space.nhtp)
    if sol is None:
        return None
    return space.to_homotopy(sol[0], f.target)
