"""Exact arithmetic over k and over the dual numbers A = k[eps]/(eps^2).

Field elements are stored as plain Python values: ``int`` in ``[0, p)`` for
GF(p) and ``fractions.Fraction`` for the rationals.  A :class:`Field` owns
the arithmetic; matrices remember which field they were built over and refuse
to mix with matrices from another one.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence


class FieldMismatch(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class Field:
    """The base field: GF(p) when ``p`` is set, the rationals when it is None."""

    p: Optional[int] = 7

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse ``"q"`` or ``"gf:<p>"``."""
        text = text.strip().lower()
        if text in ("q", "qq", "rationals"):
            return cls(None)
        if text.startswith("gf:"):
            return cls(int(text[3:]))
        raise ValueError(f"unknown field {text!r}; expected 'q' or 'gf:<p>'")

    @property
    def name(self) -> str:
        return "q" if self.p is None else f"gf:{self.p}"

    def __str__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    # scalar arithmetic -------------------------------------------------

    def __call__(self, x) -> int | Fraction:
        if self.p is None:
            if isinstance(x, str):
                return Fraction(x)
            return Fraction(x)
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in {self}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def add(self, x, y):
        return (x + y) % self.p if self.p else x + y

    def sub(self, x, y):
        return (x - y) % self.p if self.p else x - y

    def neg(self, x):
        return (-x) % self.p if self.p else -x

    def mul(self, x, y):
        return (x * y) % self.p if self.p else x * y

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(x, -1, self.p)
        return 1 / Fraction(x)

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def pow(self, x, n: int):
        if n < 0:
            return self.pow(self.inv(x), -n)
        if self.p:
            return pow(x, n, self.p)
        return Fraction(x) ** n

    def random(self, rng, nonzero: bool = False):
        """A random element; over QQ small numerators/denominators are used."""
        while True:
            if self.p:
                x = rng.randrange(self.p)
            else:
                x = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
            if x != 0 or not nonzero:
                return x

    def fmt(self, x) -> str:
        if self.p:
            return str(int(x))
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def elements(self) -> Iterable:
        if self.p is None:
            raise ValueError("QQ is infinite")
        return range(self.p)


# ---------------------------------------------------------------------------
# dual scalars


@dataclass(frozen=True)
class DualScalar:
    """``a + eps*b`` with ``a, b`` in ``field``."""

    field: Field
    a: int | Fraction
    b: int | Fraction

    @classmethod
    def of(cls, field: Field, a=0, b=0) -> "DualScalar":
        return cls(field, field(a), field(b))

    def _check(self, other: "DualScalar"):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "DualScalar") -> "DualScalar":
        self._check(other)
        F = self.field
        return DualScalar(F, F.add(self.a, other.a), F.add(self.b, other.b))

    def __sub__(self, other: "DualScalar") -> "DualScalar":
        self._check(other)
        F = self.field
        return DualScalar(F, F.sub(self.a, other.a), F.sub(self.b, other.b))

    def __neg__(self) -> "DualScalar":
        F = self.field
        return DualScalar(F, F.neg(self.a), F.neg(self.b))

    def __mul__(self, other: "DualScalar") -> "DualScalar":
        self._check(other)
        F = self.field
        a = F.mul(self.a, other.a)
        b = F.add(F.mul(self.a, other.b), F.mul(self.b, other.a))
        return DualScalar(F, a, b)

    def is_unit(self) -> bool:
        return self.a != 0

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def inverse(self) -> "DualScalar":
        # (a + eps b)^-1 = a^-1 - eps b a^-2
        F = self.field
        ai = F.inv(self.a)
        return DualScalar(F, ai, F.neg(F.mul(self.b, F.mul(ai, ai))))

    def __repr__(self):
        F = self.field
        return f"({F.fmt(self.a)}+{F.fmt(self.b)}e)"


# ---------------------------------------------------------------------------
# dense field matrices as lists of rows


def zeros(rows: int, cols: int, F: Field):
    z = F.zero
    return [[z] * cols for _ in range(rows)]


def identity(n: int, F: Field):
    M = zeros(n, n, F)
    for i in range(n):
        M[i][i] = F.one
    return M


def matmul(A, B, F: Field, inner: Optional[int] = None):
    """Product of list-of-rows matrices.  ``inner`` is needed when A has no rows."""
    n = len(B) if inner is None else inner
    if A and len(A[0]) != n:
        raise DimensionMismatch(f"cannot multiply {len(A)}x{len(A[0])} by {n}x?")
    cols = len(B[0]) if B else 0
    out = zeros(len(A), cols, F)
    p = F.p
    for i, row in enumerate(A):
        acc = [0] * cols
        for k, x in enumerate(row):
            if x == 0:
                continue
            Bk = B[k]
            for j in range(cols):
                if Bk[j] != 0:
                    acc[j] += x * Bk[j]
        out[i] = [v % p for v in acc] if p else [Fraction(v) for v in acc]
    return out


def matadd(A, B, F: Field):
    return [[F.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def matsub(A, B, F: Field):
    return [[F.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def is_zero_matrix(A) -> bool:
    return all(x == 0 for row in A for x in row)


def rref(M, F: Field):
    """Reduced row echelon form with first-nonzero pivoting.

    Returns ``(R, pivots)`` where ``pivots`` lists the pivot column of each
    nonzero row of ``R``.
    """
    R = [list(row) for row in M]
    rows = len(R)
    cols = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = F.inv(R[r][c])
        R[r] = [F.mul(inv, x) for x in R[r]]
        pr = R[r]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(R[i], pr)]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M, F: Field) -> int:
    """Rank over ``F`` by exact Gaussian elimination."""
    if not M or not M[0]:
        return 0
    return len(rref(M, F)[1])


def nullspace(M, F: Field, cols: Optional[int] = None):
    """Basis (list of vectors) of ``{x : M x = 0}``."""
    n = cols if cols is not None else (len(M[0]) if M else 0)
    if not M:
        return [[F.one if j == i else F.zero for j in range(n)] for i in range(n)]
    R, pivots = rref(M, F)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [F.zero] * n
        v[f] = F.one
        for row, pc in zip(R, pivots):
            if row[f] != 0:
                v[pc] = F.neg(row[f])
        basis.append(v)
    return basis


def solve_affine(A, b: Sequence, F: Field, cols: Optional[int] = None):
    """Solve ``A x = b``.

    Returns ``None`` when the system is inconsistent, otherwise a pair
    ``(particular, nullspace_basis)``.
    """
    n = cols if cols is not None else (len(A[0]) if A else 0)
    if len(A) != len(b):
        raise DimensionMismatch(f"{len(A)} equations but {len(b)} right-hand sides")
    if any(len(row) != n for row in A):
        raise DimensionMismatch("ragged coefficient matrix")
    aug = [list(row) + [F(bi)] for row, bi in zip(A, b)]
    R, pivots = rref(aug, F) if aug else ([], [])
    if n in pivots:
        return None
    x = [F.zero] * n
    for row, pc in zip(R, pivots):
        x[pc] = row[n]
    return x, nullspace(A, F, cols=n)


def inverse(M, F: Field):
    n = len(M)
    aug = [list(row) + idrow for row, idrow in zip(M, identity(n, F))]
    R, pivots = rref(aug, F)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def random_invertible(n: int, F: Field, rng):
    while True:
        M = [[F.random(rng) for _ in range(n)] for _ in range(n)]
        if rank(M, F) == n:
            return M


# ---------------------------------------------------------------------------
# matrices over A


class DualMatrix:
    """A matrix over A stored as the pair ``(a, b)`` of field matrices: M = a + eps*b."""

    __slots__ = ("field", "rows", "cols", "a", "b")

    def __init__(self, field: Field, rows: int, cols: int, a=None, b=None):
        self.field = field
        self.rows = rows
        self.cols = cols
        self.a = a if a is not None else zeros(rows, cols, field)
        self.b = b if b is not None else zeros(rows, cols, field)
        if len(self.a) != rows or len(self.b) != rows or any(
            len(r) != cols for r in self.a
        ) or any(len(r) != cols for r in self.b):
            raise DimensionMismatch(f"entries do not match shape {rows}x{cols}")

    @classmethod
    def from_entries(cls, field: Field, entries) -> "DualMatrix":
        """Build from nested rows of DualScalar or ``(a, b)`` pairs."""
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        M = cls(field, rows, cols)
        for i, row in enumerate(entries):
            for j, e in enumerate(row):
                if isinstance(e, DualScalar):
                    if e.field != field:
                        raise FieldMismatch(f"{e.field} vs {field}")
                    M.a[i][j], M.b[i][j] = e.a, e.b
                else:
                    M.a[i][j], M.b[i][j] = field(e[0]), field(e[1])
        return M

    @classmethod
    def identity(cls, field: Field, n: int) -> "DualMatrix":
        return cls(field, n, n, identity(n, field))

    @classmethod
    def scalar(cls, s: DualScalar) -> "DualMatrix":
        return cls(s.field, 1, 1, [[s.a]], [[s.b]])

    def copy(self) -> "DualMatrix":
        return DualMatrix(
            self.field, self.rows, self.cols,
            [list(r) for r in self.a], [list(r) for r in self.b],
        )

    def __getitem__(self, ij) -> DualScalar:
        i, j = ij
        return DualScalar(self.field, self.a[i][j], self.b[i][j])

    def __setitem__(self, ij, s: DualScalar):
        i, j = ij
        self.a[i][j], self.b[i][j] = s.a, s.b

    def _check(self, other: "DualMatrix"):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __matmul__(self, other: "DualMatrix") -> "DualMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        F = self.field
        n = self.cols
        if n == 0 or self.rows == 0 or other.cols == 0:
            return DualMatrix(F, self.rows, other.cols)
        aa = matmul(self.a, other.a, F, n)
        b = matadd(matmul(self.a, other.b, F, n), matmul(self.b, other.a, F, n), F)
        return DualMatrix(F, self.rows, other.cols, aa, b)

    def __add__(self, other: "DualMatrix") -> "DualMatrix":
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in addition")
        F = self.field
        return DualMatrix(F, self.rows, self.cols, matadd(self.a, other.a, F), matadd(self.b, other.b, F))

    def __sub__(self, other: "DualMatrix") -> "DualMatrix":
        return self + (-other)

    def __neg__(self) -> "DualMatrix":
        F = self.field
        return DualMatrix(
            F, self.rows, self.cols,
            [[F.neg(x) for x in r] for r in self.a],
            [[F.neg(x) for x in r] for r in self.b],
        )

    def scale(self, s: DualScalar) -> "DualMatrix":
        return DualMatrix.scalar_matrix(s, self.rows) @ self

    @staticmethod
    def scalar_matrix(s: DualScalar, n: int) -> "DualMatrix":
        F = s.field
        M = DualMatrix(F, n, n)
        for i in range(n):
            M.a[i][i], M.b[i][i] = s.a, s.b
        return M

    def is_zero(self) -> bool:
        return is_zero_matrix(self.a) and is_zero_matrix(self.b)

    def __eq__(self, other):
        if not isinstance(other, DualMatrix):
            return NotImplemented
        return (
            self.field == other.field
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(map(tuple, self.a)), tuple(map(tuple, self.b))))

    def is_minimal(self) -> bool:
        """True when no entry is a unit."""
        return is_zero_matrix(self.a)

    def inverse(self) -> "DualMatrix":
        # (P + eps Q)^-1 = P^-1 - eps P^-1 Q P^-1
        F = self.field
        Pi = inverse(self.a, F)
        corr = matmul(matmul(Pi, self.b, F), Pi, F)
        return DualMatrix(F, self.rows, self.cols, Pi, [[F.neg(x) for x in r] for r in corr])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "DualMatrix":
        return DualMatrix(
            self.field, len(rows), len(cols),
            [[self.a[i][j] for j in cols] for i in rows],
            [[self.b[i][j] for j in cols] for i in rows],
        )

    def realify(self):
        """The k-linear matrix on the basis ``(e_1..e_n, eps e_1..eps e_n)``."""
        F = self.field
        r, c = self.rows, self.cols
        M = zeros(2 * r, 2 * c, F)
        for i in range(r):
            for j in range(c):
                x, y = self.a[i][j], self.b[i][j]
                M[i][j] = x
                M[r + i][c + j] = x
                M[r + i][j] = y
        return M

    def __repr__(self):
        rows = [
            "[" + ", ".join(repr(self[i, j]) for j in range(self.cols)) + "]"
            for i in range(self.rows)
        ]
        return f"DualMatrix({self.rows}x{self.cols}, [{', '.join(rows)}])"


def random_dual_invertible(n: int, F: Field, rng) -> DualMatrix:
    a = random_invertible(n, F, rng)
    b = [[F.random(rng) for _ in range(n)] for _ in range(n)]
    return DualMatrix(F, n, n, a, b)


# elementary operations, applied in place -----------------------------------

def _row_axpy(M: DualMatrix, dst: int, src: int, s: DualScalar):
    """row[dst] += s * row[src]"""
    F = M.field
    ra, rb = M.a[src], M.b[src]
    da, db = M.a[dst], M.b[dst]
    for j in range(M.cols):
        x, y = ra[j], rb[j]
        if x == 0 and y == 0:
            continue
        da[j] = F.add(da[j], F.mul(s.a, x))
        db[j] = F.add(db[j], F.add(F.mul(s.a, y), F.mul(s.b, x)))


def _col_axpy(M: DualMatrix, dst: int, src: int, s: DualScalar):
    """col[dst] += col[src] * s"""
    F = M.field
    for i in range(M.rows):
        x, y = M.a[i][src], M.b[i][src]
        if x == 0 and y == 0:
            continue
        M.a[i][dst] = F.add(M.a[i][dst], F.mul(s.a, x))
        M.b[i][dst] = F.add(M.b[i][dst], F.add(F.mul(s.a, y), F.mul(s.b, x)))


def _row_scale(M: DualMatrix, i: int, s: DualScalar):
    F = M.field
    for j in range(M.cols):
        x, y = M.a[i][j], M.b[i][j]
        M.a[i][j] = F.mul(s.a, x)
        M.b[i][j] = F.add(F.mul(s.a, y), F.mul(s.b, x))


def _col_scale(M: DualMatrix, j: int, s: DualScalar):
    F = M.field
    for i in range(M.rows):
        x, y = M.a[i][j], M.b[i][j]
        M.a[i][j] = F.mul(s.a, x)
        M.b[i][j] = F.add(F.mul(s.a, y), F.mul(s.b, x))


def _swap_rows(M: DualMatrix, i: int, j: int):
    M.a[i], M.a[j] = M.a[j], M.a[i]
    M.b[i], M.b[j] = M.b[j], M.b[i]


def _swap_cols(M: DualMatrix, i: int, j: int):
    for r in range(M.rows):
        M.a[r][i], M.a[r][j] = M.a[r][j], M.a[r][i]
        M.b[r][i], M.b[r][j] = M.b[r][j], M.b[r][i]


@dataclass
class PivotReduction:
    P: DualMatrix  # row operations
    Q: DualMatrix  # column operations
    reduced: DualMatrix  # == P @ M @ Q == diag(I_r, residual)
    npivots: int

    @property
    def residual(self) -> DualMatrix:
        r = self.npivots
        return self.reduced.submatrix(
            range(r, self.reduced.rows), range(r, self.reduced.cols)
        )


def dual_unit_pivot_reduce(M: DualMatrix) -> PivotReduction:
    """Clear rows and columns of unit pivots of ``M`` over the local ring A.

    Pivots are moved to the top-left and normalized to 1, so the result is
    ``diag(I_r, N)`` with every entry of ``N`` in eps*k.
    """
    F = M.field
    R = M.copy()
    P = DualMatrix.identity(F, M.rows)
    Q = DualMatrix.identity(F, M.cols)
    r = 0
    while True:
        piv = next(
            ((i, j) for i in range(r, R.rows) for j in range(r, R.cols) if R.a[i][j] != 0),
            None,
        )
        if piv is None:
            break
        i, j = piv
        _swap_rows(R, r, i)
        _swap_rows(P, r, i)
        _swap_cols(R, r, j)
        _swap_cols(Q, r, j)
        u_inv = R[r, r].inverse()
        _row_scale(R, r, u_inv)
        _row_scale(P, r, u_inv)
        for k in range(R.rows):
            if k != r and (R.a[k][r] != 0 or R.b[k][r] != 0):
                s = -R[k, r]
                _row_axpy(R, k, r, s)
                _row_axpy(P, k, r, s)
        for k in range(R.cols):
            if k != r and (R.a[r][k] != 0 or R.b[r][k] != 0):
                s = -R[r, k]
                _col_axpy(R, k, r, s)
                _col_axpy(Q, k, r, s)
        r += 1
    return PivotReduction(P, Q, R, r)
