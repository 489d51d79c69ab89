"""Exact dense linear algebra over the rationals and prime fields GF(p).

Scalars over Q are ``gmpy2.mpq`` rationals (interchangeable with
:class:`fractions.Fraction` for comparison and hashing, and much faster);
scalars over GF(p) are plain ints reduced into ``range(p)``. Matrices are small and dense, so everything
here is straightforward Gaussian elimination with deterministic pivoting
(first nonzero entry, scanning columns left to right and rows top to bottom).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

_ZERO = mpq(0)
_ONE = mpq(1)


class DimensionError(ValueError):
    """Raised when matrix shapes do not fit together."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """A field context: ``Field()`` is Q, ``Field(p)`` is GF(p)."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None and not _is_prime(p):
            raise ValueError(f"GF({p}) is not a prime field")
        self.p = p

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("Field", self.p))

    def __repr__(self) -> str:
        return "Field(Q)" if self.p is None else f"Field(GF({self.p}))"

    def __str__(self) -> str:
        return "Q" if self.p is None else f"GF {self.p}"

    @property
    def zero(self):
        return _ZERO if self.p is None else 0

    @property
    def one(self):
        return _ONE if self.p is None else 1

    def __call__(self, x):
        """Coerce an int, Fraction or string like ``"-3/4"`` into the field."""
        if isinstance(x, str):
            x = mpq(Fraction(x.strip()))
        if self.p is None:
            return mpq(x)
        if isinstance(x, (Fraction, type(_ONE))):
            return (int(x.numerator) * pow(int(x.denominator), -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / x
        return pow(x, -1, self.p)

    def reduce(self, row: list) -> list:
        if self.p is None:
            return row
        p = self.p
        return [v % p for v in row]

    def format(self, x) -> str:
        return str(x)

    def random(self, rng) -> object:
        """A pseudo-random scalar; small integers over Q keep entries tame."""
        if self.p is None:
            return mpq(rng.randint(-3, 3))
        return rng.randrange(self.p)


QQ = Field()


class Mat:
    """A dense ``rows x cols`` matrix with exact entries.

    Treated as immutable once built; every operation returns a new matrix.
    Entries are stored row-major in ``data`` (a list of row lists).
    """

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, rows: int, cols: int, data: list[list] | None = None):
        self.field = field
        self.rows = rows
        self.cols = cols
        if data is None:
            z = field.zero
            data = [[z] * cols for _ in range(rows)]
        elif len(data) != rows or any(len(r) != cols for r in data):
            raise DimensionError(f"entry layout does not match shape {rows}x{cols}")
        self.data = data

    # construction -----------------------------------------------------
    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: int | None = None) -> "Mat":
        rows = [[field(x) for x in r] for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(field, len(rows), cols, rows)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Mat":
        return cls(field, rows, cols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        m = cls(field, n, n)
        for i in range(n):
            m.data[i][i] = field.one
        return m

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int) -> "Mat":
        data = [[col[i] for col in columns] for i in range(rows)]
        return cls(field, rows, len(columns), data)

    # basic accessors --------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self.data[i][j]

    def column(self, j: int) -> list:
        return [r[j] for r in self.data]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return all(not x for r in self.data for x in r)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __repr__(self) -> str:
        return f"Mat({self.rows}x{self.cols}, {[[str(x) for x in r] for r in self.data]})"

    def tolist(self) -> list[list]:
        return [list(r) for r in self.data]

    # arithmetic -------------------------------------------------------
    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        F = self.field
        z = F.zero
        ocols = other.cols
        odata = other.data
        out = []
        for row in self.data:
            acc = [z] * ocols
            for k, a in enumerate(row):
                if a:
                    orow = odata[k]
                    for j in range(ocols):
                        b = orow[j]
                        if b:
                            acc[j] += a * b
            out.append(F.reduce(acc))
        return Mat(F, self.rows, ocols, out)

    def apply(self, vec: Sequence) -> list:
        if len(vec) != self.cols:
            raise DimensionError(f"vector of length {len(vec)} for {self.shape} matrix")
        F = self.field
        z = F.zero
        out = []
        for row in self.data:
            s = z
            for a, b in zip(row, vec):
                if a and b:
                    s += a * b
            out.append(s)
        return F.reduce(out)

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        F = self.field
        return Mat(F, self.rows, self.cols,
                   [F.reduce([a + b for a, b in zip(r, s)]) for r, s in zip(self.data, other.data)])

    def __sub__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {self.shape} and {other.shape}")
        F = self.field
        return Mat(F, self.rows, self.cols,
                   [F.reduce([a - b for a, b in zip(r, s)]) for r, s in zip(self.data, other.data)])

    def __neg__(self) -> "Mat":
        F = self.field
        return Mat(F, self.rows, self.cols, [F.reduce([-a for a in r]) for r in self.data])

    def scale(self, c) -> "Mat":
        F = self.field
        return Mat(F, self.rows, self.cols, [F.reduce([c * a for a in r]) for r in self.data])

    def transpose(self) -> "Mat":
        return Mat(self.field, self.cols, self.rows,
                   [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    @property
    def T(self) -> "Mat":
        return self.transpose()

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        return Mat(self.field, len(rows), len(cols), [[self.data[i][j] for j in cols] for i in rows])

    def select_columns(self, cols: Sequence[int]) -> "Mat":
        return self.submatrix(range(self.rows), cols)

    # elimination ------------------------------------------------------
    def rref(self) -> tuple["Mat", int, list[int]]:
        R, pivots = _rref_rows(self.field, self.tolist(), self.cols)
        return Mat(self.field, self.rows, self.cols, R), len(pivots), pivots

    def rank(self) -> int:
        _, pivots = _rref_rows(self.field, self.tolist(), self.cols, reduce_above=False)
        return len(pivots)

    def kernel_basis(self) -> "Mat":
        return kernel_basis(self)

    def solve(self, b: Sequence) -> list | None:
        return solve(self, b)

    def inverse(self) -> "Mat":
        if self.rows != self.cols:
            raise DimensionError("only square matrices have inverses")
        n = self.rows
        aug = [list(r) + [self.field.one if i == j else self.field.zero for j in range(n)]
               for i, r in enumerate(self.data)]
        R, pivots = _rref_rows(self.field, aug, 2 * n)
        if pivots[:n] != list(range(n)) or len([p for p in pivots if p < n]) != n:
            raise ZeroDivisionError("matrix is singular")
        return Mat(self.field, n, n, [r[n:] for r in R])

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows


def _rref_rows(F: Field, rows: list[list], ncols: int, reduce_above: bool = True):
    """In-place reduced row echelon form of ``rows``; returns (rows, pivots)."""
    nrows = len(rows)
    pivots: list[int] = []
    r = 0
    p = F.p
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = F.inv(prow[c])
        if p is None:
            prow = [x * inv for x in prow]
        else:
            prow = [(x * inv) % p for x in prow]
        rows[r] = prow
        nz = [j for j in range(c, ncols) if prow[j]]
        start = 0 if reduce_above else r + 1
        for i in range(start, nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if f:
                if p is None:
                    for j in nz:
                        row[j] -= f * prow[j]
                else:
                    for j in nz:
                        row[j] = (row[j] - f * prow[j]) % p
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(m: Mat) -> tuple[Mat, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns of ``m``."""
    return m.rref()


def kernel_basis(m: Mat) -> Mat:
    """Columns form a basis of the right null space ``{x : m x = 0}``."""
    F = m.field
    R, pivots = _rref_rows(F, m.tolist(), m.cols)
    free = [j for j in range(m.cols) if j not in set(pivots)]
    basis = []
    for fj in free:
        v = [F.zero] * m.cols
        v[fj] = F.one
        for i, pc in enumerate(pivots):
            v[pc] = F.reduce([-R[i][fj]])[0]
        basis.append(v)
    return Mat.from_columns(F, basis, m.cols)


def sparse_kernel(field: Field, rows: Iterable[dict], ncols: int) -> list[list]:
    """Kernel basis of a sparse system given as ``{column: value}`` rows.

    Rows are reduced incrementally into echelon form (each stored row is
    monic at its smallest column). The basis vector for a free column ``f``
    has ``x_f = 1`` and all other free variables zero, so the result equals
    what :func:`kernel_basis` returns for the dense matrix.
    """
    F = field
    p = F.p
    pivots: dict[int, dict] = {}
    for row in rows:
        row = {c: v for c, v in row.items() if v}
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                inv = F.inv(row[c])
                if p is None:
                    row = {k: v * inv for k, v in row.items()}
                else:
                    row = {k: (v * inv) % p for k, v in row.items()}
                pivots[c] = row
                break
            f = row[c]
            for k, v in prow.items():
                nv = row.get(k, 0) - f * v
                if p is not None:
                    nv %= p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    # back-substitute once: afterwards each pivot row mentions only free columns
    reduced: dict[int, dict] = {}
    for pc in sorted(pivots, reverse=True):
        row = dict(pivots[pc])
        del row[pc]
        for k in [k for k in row if k in reduced]:
            f = row.pop(k)
            for kk, vv in reduced[k].items():
                nv = row.get(kk, 0) - f * vv
                if p is not None:
                    nv %= p
                if nv:
                    row[kk] = nv
                else:
                    row.pop(kk, None)
        reduced[pc] = row
    free = [j for j in range(ncols) if j not in pivots]
    zero, one = F.zero, F.one
    basis = {f: [zero] * ncols for f in free}
    for f in free:
        basis[f][f] = one
    for pc, row in reduced.items():
        for f, v in row.items():
            basis[f][pc] = -v if p is None else (-v) % p
    return [basis[f] for f in free]


def solve(m: Mat, b: Sequence) -> list | None:
    """A solution of ``m x = b`` or ``None`` when the system is inconsistent."""
    if len(b) != m.rows:
        raise DimensionError(f"right-hand side has length {len(b)}, matrix has {m.rows} rows")
    F = m.field
    aug = [list(r) + [F(bi)] for r, bi in zip(m.data, b)]
    R, pivots = _rref_rows(F, aug, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [F.zero] * m.cols
    for i, pc in enumerate(pivots):
        x[pc] = R[i][m.cols]
    return x


def solve_matrix(m: Mat, b: Mat) -> Mat | None:
    """Solve ``m X = b`` column by column in one elimination; ``None`` if inconsistent."""
    if b.rows != m.rows:
        raise DimensionError(f"right-hand side has {b.rows} rows, matrix has {m.rows}")
    F = m.field
    aug = [list(r) + list(s) for r, s in zip(m.data, b.data)]
    R, pivots = _rref_rows(F, aug, m.cols + b.cols)
    if any(pc >= m.cols for pc in pivots):
        return None
    X = Mat.zeros(F, m.cols, b.cols)
    for i, pc in enumerate(pivots):
        X.data[pc] = R[i][m.cols:]
    return X


def column_space(m: Mat) -> Mat:
    """The pivot columns of ``m``: a basis of its column space, in original coordinates."""
    _, _, pivots = m.rref()
    return m.select_columns(pivots)


def left_kernel(m: Mat) -> Mat:
    """Rows form a basis of ``{y : y m = 0}``."""
    return kernel_basis(m.transpose()).transpose()


def hstack(field: Field, mats: Iterable[Mat], rows: int) -> Mat:
    mats = list(mats)
    for m in mats:
        if m.rows != rows:
            raise DimensionError("hstack row mismatch")
    data = [sum((m.data[i] for m in mats), []) for i in range(rows)]
    return Mat(field, rows, sum(m.cols for m in mats), data)


def vstack(field: Field, mats: Iterable[Mat], cols: int) -> Mat:
    mats = list(mats)
    for m in mats:
        if m.cols != cols:
            raise DimensionError("vstack column mismatch")
    data = [list(r) for m in mats for r in m.data]
    return Mat(field, len(data), cols, data)


def block_diag(field: Field, mats: Sequence[Mat]) -> Mat:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = Mat.zeros(field, rows, cols)
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            out.data[r0 + i][c0:c0 + m.cols] = list(m.data[i])
        r0 += m.rows
        c0 += m.cols
    return out


def minimal_polynomial(m: Mat) -> list:
    """Monic minimal polynomial of a square matrix, coefficients lowest degree first."""
    F = m.field
    n = m.rows
    powers = [Mat.identity(F, n)]
    while True:
        flat = [[x for r in P.data for x in r] for P in powers]
        cur = powers[-1] @ m
        target = [x for r in cur.data for x in r]
        A = Mat.from_columns(F, flat, n * n)
        coeffs = solve(A, target)
        if coeffs is not None:
            return [F.reduce([-c])[0] for c in coeffs] + [F.one]
        powers.append(cur)


def poly_eval_matrix(coeffs: Sequence, m: Mat) -> Mat:
    """Evaluate the polynomial with coefficients ``coeffs`` (lowest first) at ``m``."""
    F = m.field
    n = m.rows
    acc = Mat.zeros(F, n, n)
    for c in reversed(coeffs):
        acc = acc @ m + Mat.identity(F, n).scale(F(c))
    return acc


def matrix_power(m: Mat, k: int) -> Mat:
    result = Mat.identity(m.field, m.rows)
    base = m
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result
