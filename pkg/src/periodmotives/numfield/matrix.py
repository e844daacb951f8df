"""A small immutable dense matrix over any exact ring.

Entries can be ints, Fractions, FieldElems or PeriodScalars; the class only
relies on ``+``, ``-``, ``*`` and ``==``.
"""


class DimensionError(ValueError):
    pass


class Matrix:
    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, nrows=None, ncols=None):
        rows = tuple(tuple(r) for r in rows)
        if nrows is None:
            nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise DimensionError(f"rows do not form a {nrows}x{ncols} rectangle")
        self.rows = rows
        self.nrows = nrows
        self.ncols = ncols

    @classmethod
    def zeros(cls, nrows, ncols, zero=0):
        return cls([[zero] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, n, one=1, zero=0):
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, cols, nrows):
        cols = [tuple(c) for c in cols]
        if any(len(c) != nrows for c in cols):
            raise DimensionError("column length mismatch")
        return cls([[c[i] for c in cols] for i in range(nrows)], nrows, len(cols))

    @classmethod
    def diagonal(cls, entries, zero=0):
        n = len(entries)
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)], n, n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, key):
        i, j = key
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.col(j) for j in range(self.ncols)]

    def tolist(self):
        return [list(r) for r in self.rows]

    def map(self, f):
        return Matrix([[f(x) for x in r] for r in self.rows], self.nrows, self.ncols)

    @property
    def T(self):
        return Matrix([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
                      self.ncols, self.nrows)

    def _same_shape(self, other):
        if not isinstance(other, Matrix) or other.shape != self.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {getattr(other, 'shape', None)}")

    def __add__(self, other):
        self._same_shape(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.nrows, self.ncols)

    def __sub__(self, other):
        self._same_shape(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.nrows, self.ncols)

    def __neg__(self):
        return self.map(lambda x: -x)

    def scale(self, c):
        return self.map(lambda x: c * x)

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        out = []
        for r in self.rows:
            line = []
            for c in cols:
                acc = None
                for a, b in zip(r, c):
                    if a == 0 or b == 0:
                        continue
                    acc = a * b if acc is None else acc + a * b
                line.append(self._zero_like(r, c) if acc is None else acc)
            out.append(line)
        return Matrix(out, self.nrows, other.ncols)

    @staticmethod
    def _zero_like(r, c):
        # zero of the ambient ring, so PeriodScalar matrices stay PeriodScalar
        for x in r + c:
            if hasattr(x, "zero_like"):
                return x.zero_like()
        for x in r + c:
            return x * 0
        return 0

    def kron(self, other):
        rows = []
        for r in self.rows:
            for s in other.rows:
                rows.append([a * b for a in r for b in s])
        return Matrix(rows, self.nrows * other.nrows, self.ncols * other.ncols)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise DimensionError("hstack row mismatch")
        return Matrix([r + s for r, s in zip(self.rows, other.rows)], self.nrows, self.ncols + other.ncols)

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise DimensionError("vstack column mismatch")
        return Matrix(self.rows + other.rows, self.nrows + other.nrows, self.ncols)

    def submatrix(self, rows, cols):
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], len(rows), len(cols))

    def __eq__(self, other):
        if not isinstance(other, Matrix) or other.shape != self.shape:
            return False
        return all(a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    __hash__ = None

    def is_zero(self):
        return all(x == 0 for r in self.rows for x in r)

    def flatten(self):
        """Row-major entries."""
        return [x for r in self.rows for x in r]

    def __repr__(self):
        return f"Matrix({self.tolist()!r})"


def block_matrix(blocks):
    """Assemble a matrix from a grid of blocks (lists of Matrix)."""
    out = None
    for brow in blocks:
        line = brow[0]
        for b in brow[1:]:
            line = line.hstack(b)
        out = line if out is None else out.vstack(line)
    return out
