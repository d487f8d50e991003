"""Exact dense linear algebra over the rationals and integer lattice kernels.

Matrices are immutable, entries are reduced fractions, and every operation
is exact.  Pivot selection is always "first nonzero" so results are
reproducible across runs.
"""

from .errors import SingularMatrix
from ._rat import RAT, ZERO, ONE, rat, height

__all__ = [
    "QMatrix",
    "IntMatrix",
    "EchelonBasis",
    "height",
    "matrix_height",
    "row_hnf",
    "integer_kernel",
]


class QMatrix:
    """Immutable rational matrix, row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        entries = tuple(rat(e) for e in entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise ValueError("ragged rows")
        return cls(n, m, [e for r in rows for e in r])

    @classmethod
    def identity(cls, n):
        return cls(n, n, [ONE if i == j else ZERO for i in range(n) for j in range(n)])

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols, [ZERO] * (rows * cols))

    @classmethod
    def diagonal(cls, diag):
        diag = list(diag)
        n = len(diag)
        return cls(n, n, [diag[i] if i == j else ZERO for i in range(n) for j in range(n)])

    @classmethod
    def column(cls, entries):
        entries = list(entries)
        return cls(len(entries), 1, entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def row_lists(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def __eq__(self, other):
        return (
            isinstance(other, QMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        rows = [[str(self[i, j]) for j in range(self.cols)] for i in range(self.rows)]
        return "QMatrix(" + "; ".join(" ".join(r) for r in rows) + ")"

    @property
    def is_square(self):
        return self.rows == self.cols

    def is_identity(self):
        return self.is_square and self == QMatrix.identity(self.rows)

    def is_zero(self):
        return all(not e for e in self.entries)

    def transpose(self):
        return QMatrix(
            self.cols,
            self.rows,
            [self[i, j] for j in range(self.cols) for i in range(self.rows)],
        )

    def __add__(self, other):
        self._same_shape(other)
        return QMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._same_shape(other)
        return QMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return QMatrix(self.rows, self.cols, [-a for a in self.entries])

    def _same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def scale(self, c):
        c = rat(c)
        return QMatrix(self.rows, self.cols, [c * a for a in self.entries])

    def __mul__(self, other):
        if not isinstance(other, QMatrix):
            return self.scale(other)
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = []
        for i in range(n):
            arow = a[i * k : (i + 1) * k]
            for j in range(m):
                s = ZERO
                for t in range(k):
                    av = arow[t]
                    if av:
                        s += av * b[t * m + j]
                out.append(s)
        return QMatrix(n, m, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e):
        if not self.is_square:
            raise ValueError("power of a non-square matrix")
        if e < 0:
            return self.inverse() ** (-e)
        result = QMatrix.identity(self.rows)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def trace(self):
        if not self.is_square:
            raise ValueError("trace of a non-square matrix")
        s = ZERO
        for i in range(self.rows):
            s += self[i, i]
        return s

    def det(self):
        """Determinant by rational Gaussian elimination."""
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        m = self.row_lists()
        det = ONE
        for c in range(n):
            pivot = next((r for r in range(c, n) if m[r][c]), None)
            if pivot is None:
                return ZERO
            if pivot != c:
                m[c], m[pivot] = m[pivot], m[c]
                det = -det
            det *= m[c][c]
            inv = ONE / m[c][c]
            prow = m[c]
            for r in range(c + 1, n):
                f = m[r][c] * inv
                if f:
                    mr = m[r]
                    for j in range(c, n):
                        mr[j] -= f * prow[j]
        return det

    def inverse(self):
        """Exact inverse; raises SingularMatrix when det = 0."""
        if not self.is_square:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(self.row(i)) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        for c in range(n):
            pivot = next((r for r in range(c, n) if aug[r][c]), None)
            if pivot is None:
                raise SingularMatrix("matrix is singular")
            if pivot != c:
                aug[c], aug[pivot] = aug[pivot], aug[c]
            inv = ONE / aug[c][c]
            aug[c] = [x * inv for x in aug[c]]
            prow = aug[c]
            for r in range(n):
                if r != c and aug[r][c]:
                    f = aug[r][c]
                    aug[r] = [x - f * y for x, y in zip(aug[r], prow)]
        return QMatrix.from_rows([row[n:] for row in aug])

    def rref(self):
        """Reduced row echelon form and its pivot columns (first-nonzero pivots)."""
        m = self.row_lists()
        nrows, ncols = self.rows, self.cols
        pivots = []
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            pivot = next((i for i in range(r, nrows) if m[i][c]), None)
            if pivot is None:
                continue
            if pivot != r:
                m[r], m[pivot] = m[pivot], m[r]
            inv = ONE / m[r][c]
            m[r] = [x * inv for x in m[r]]
            prow = m[r]
            for i in range(nrows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [x - f * y for x, y in zip(m[i], prow)]
            pivots.append(c)
            r += 1
        return QMatrix.from_rows(m) if m else QMatrix.zero(0, ncols), pivots

    def rank(self):
        return len(self.rref()[1])

    def kernel_basis(self):
        """Basis of the right null space, as column vectors.

        The basis comes from the rref free-variable parametrization, so it is
        deterministic; the count is cols - rank.
        """
        red, pivots = self.rref()
        ncols = self.cols
        free = [c for c in range(ncols) if c not in pivots]
        basis = []
        for fc in free:
            v = [ZERO] * ncols
            v[fc] = ONE
            for r, pc in enumerate(pivots):
                v[pc] = -red[r, fc]
            basis.append(QMatrix.column(v))
        return basis


def matrix_height(m: QMatrix) -> int:
    """Max entry height; 1 for an empty matrix."""
    if not m.entries:
        return 1
    return max(height(e) for e in m.entries)


class IntMatrix:
    """Immutable integer matrix, row-major, arbitrary-precision entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        entries = tuple(int(e) for e in entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise ValueError("ragged rows")
        return cls(n, m, [e for r in rows for e in r])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row_lists(self):
        return [list(self.entries[i * self.cols : (i + 1) * self.cols]) for i in range(self.rows)]

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        rows = [
            [str(self[i, j]) for j in range(self.cols)] for i in range(self.rows)
        ]
        return "IntMatrix(" + "; ".join(" ".join(r) for r in rows) + ")"


def row_hnf(rows):
    """Row Hermite normal form of an integer row list (zero rows dropped).

    Pivots are positive, entries above each pivot are reduced into
    [0, pivot), and the row space (as a lattice) is unchanged: only
    unimodular row operations are used.
    """
    m = [list(r) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        # chase the column to a single nonzero at row r via gcd steps
        while True:
            live = [i for i in range(r, len(m)) if m[i][c]]
            if not live:
                break
            best = min(live, key=lambda i: (abs(m[i][c]), i))
            m[r], m[best] = m[best], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c]:
                    q = m[i][c] // m[r][c]
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if r < len(m) and m[r][c]:
            if m[r][c] < 0:
                m[r] = [-a for a in m[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
            r += 1
            if r == len(m):
                break
    return [row for row in m[:r]]


def integer_kernel(m: IntMatrix) -> IntMatrix:
    """Basis of {k in Z^cols : m @ k = 0}, as rows of the result.

    Row-reduces [m^T | I] with unimodular operations; rows whose left block
    vanishes carry a kernel basis in the right block, so the basis is
    saturated (every integer kernel vector is an integer combination).
    """
    n, c = m.rows, m.cols
    aug = [[m[i, j] for i in range(n)] + [1 if t == j else 0 for t in range(c)] for j in range(c)]
    r = 0
    for col in range(n):
        while True:
            live = [i for i in range(r, c) if aug[i][col]]
            if not live:
                break
            best = min(live, key=lambda i: (abs(aug[i][col]), i))
            aug[r], aug[best] = aug[best], aug[r]
            done = True
            for i in range(r + 1, c):
                if aug[i][col]:
                    q = aug[i][col] // aug[r][col]
                    aug[i] = [a - q * b for a, b in zip(aug[i], aug[r])]
                    if aug[i][col]:
                        done = False
            if done:
                break
        if r < c and aug[r][col]:
            r += 1
            if r == c:
                break
    kernel_rows = [row[n:] for row in aug[r:] if not any(row[:n])]
    basis = row_hnf(kernel_rows)
    return IntMatrix.from_rows(basis) if basis else IntMatrix(0, c, [])


class EchelonBasis:
    """Incremental echelon form over the rationals.

    Feeds the span fixed point: vectors are inserted one at a time; an
    insertion reports whether the vector enlarged the span.  Stored rows are
    normalized to pivot 1 and fully reduced against each other.
    """

    __slots__ = ("length", "rows", "pivots", "_pivot_of")

    def __init__(self, length):
        self.length = length
        self.rows = []
        self.pivots = []
        self._pivot_of = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vector):
        """Remainder of vector against the current rows (new list)."""
        v = list(vector)
        for pivot, row in zip(self.pivots, self.rows):
            f = v[pivot]
            if f:
                for j, b in enumerate(row):
                    if b:
                        v[j] -= f * b
        return v

    def insert(self, vector):
        """Insert a vector; returns True when it was independent."""
        v = self.reduce(vector)
        pivot = next((j for j, x in enumerate(v) if x), None)
        if pivot is None:
            return False
        inv = ONE / v[pivot]
        v = [x * inv for x in v]
        for row in self.rows:
            f = row[pivot]
            if f:
                for j, b in enumerate(v):
                    if b:
                        row[j] -= f * b
        self.rows.append(v)
        self.pivots.append(pivot)
        self._pivot_of[pivot] = len(self.rows) - 1
        return True

    def contains(self, vector):
        return all(not x for x in self.reduce(vector))

    def kernel(self):
        """Basis of {c : c . v = 0 for every v in the span}, as lists.

        Equivalent to kernel_basis of the row matrix, but reuses the
        already-echelonized rows.
        """
        pivots = sorted(self._pivot_of)
        order = [self._pivot_of[p] for p in pivots]
        red = [self.rows[i] for i in order]
        free = [c for c in range(self.length) if c not in self._pivot_of]
        basis = []
        for fc in free:
            v = [ZERO] * self.length
            v[fc] = ONE
            for row, pc in zip(red, pivots):
                v[pc] = -row[fc]
            basis.append(v)
        return basis
