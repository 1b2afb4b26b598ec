"""Exact linear algebra over the rationals.

Sparse matrices, finite-type chain complexes and chain maps, kernels,
homology with representative cycles, and quasi-isomorphism certification.
Scalars are ``fractions.Fraction`` throughout; every computation is exact.

All values are immutable after construction and all operations are pure,
so anything here can be shared freely between threads or tasks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError, TruncationError

#: Sparse vector: column/row index -> nonzero rational entry.
Vector = dict[int, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def vec_add(u: Vector, v: Vector, scale: Fraction = ONE) -> Vector:
    """u + scale*v with zero entries dropped."""
    out = dict(u)
    for i, x in v.items():
        s = out.get(i, ZERO) + scale * x
        if s:
            out[i] = s
        else:
            out.pop(i, None)
    return out


class Matrix:
    """Immutable sparse matrix with Fraction entries.

    Zero entries are never stored; indices are bounds-checked on
    construction.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise PreconditionError("matrix dimensions must be non-negative")
        self.rows = rows
        self.cols = cols
        clean: dict[tuple[int, int], Fraction] = {}
        for (r, c), x in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise PreconditionError(f"entry ({r},{c}) outside {rows}x{cols}")
            x = Fraction(x)
            if x:
                clean[(r, c)] = x
        self.entries = clean

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @classmethod
    def from_rows(cls, rows_list) -> "Matrix":
        """Dense list-of-lists constructor (rows of numbers)."""
        r = len(rows_list)
        c = len(rows_list[0]) if r else 0
        entries = {}
        for i, row in enumerate(rows_list):
            if len(row) != c:
                raise PreconditionError("ragged rows")
            for j, x in enumerate(row):
                if x:
                    entries[(i, j)] = Fraction(x)
        return cls(r, c, entries)

    @classmethod
    def from_columns(cls, columns: list[Vector], rows: int) -> "Matrix":
        entries = {}
        for j, col in enumerate(columns):
            for i, x in col.items():
                if x:
                    entries[(i, j)] = Fraction(x)
        return cls(rows, len(columns), entries)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(sorted(self.entries.items()))))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {len(self.entries)} nonzero)"

    def is_zero(self) -> bool:
        return not self.entries

    def column(self, j: int) -> Vector:
        return {r: x for (r, c), x in self.entries.items() if c == j}

    def columns(self) -> list[Vector]:
        cols: list[Vector] = [dict() for _ in range(self.cols)]
        for (r, c), x in self.entries.items():
            cols[c][r] = x
        return cols

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, {(c, r): x for (r, c), x in self.entries.items()})

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise PreconditionError("matrix shape mismatch in product")
        by_row: dict[int, Vector] = {}
        for (r, c), x in self.entries.items():
            by_row.setdefault(r, {})[c] = x
        other_rows: dict[int, Vector] = {}
        for (r, c), x in other.entries.items():
            other_rows.setdefault(r, {})[c] = x
        entries: dict[tuple[int, int], Fraction] = {}
        for r, row in by_row.items():
            acc: Vector = {}
            for k, x in row.items():
                orow = other_rows.get(k)
                if not orow:
                    continue
                for c, y in orow.items():
                    s = acc.get(c, ZERO) + x * y
                    if s:
                        acc[c] = s
                    else:
                        acc.pop(c, None)
            for c, s in acc.items():
                entries[(r, c)] = s
        return Matrix(self.rows, other.cols, entries)

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise PreconditionError("matrix shape mismatch in sum")
        entries = dict(self.entries)
        for k, x in other.entries.items():
            s = entries.get(k, ZERO) + x
            if s:
                entries[k] = s
            else:
                entries.pop(k, None)
        return Matrix(self.rows, self.cols, entries)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(Fraction(-1))

    def scale(self, a: Fraction) -> "Matrix":
        a = Fraction(a)
        if not a:
            return Matrix.zero(self.rows, self.cols)
        return Matrix(self.rows, self.cols, {k: a * x for k, x in self.entries.items()})

    def apply(self, v: Vector) -> Vector:
        """Matrix-vector product on sparse vectors."""
        out: Vector = {}
        by_col: dict[int, list[tuple[int, Fraction]]] = {}
        for (r, c), x in self.entries.items():
            by_col.setdefault(c, []).append((r, x))
        for c, a in v.items():
            for r, x in by_col.get(c, ()):
                s = out.get(r, ZERO) + x * a
                if s:
                    out[r] = s
                else:
                    out.pop(r, None)
        return out

    def triplets(self) -> list[tuple[int, int, Fraction]]:
        """Deterministically ordered (row, col, value) list."""
        return [(r, c, self.entries[(r, c)]) for (r, c) in sorted(self.entries)]


def stack_vertical(mats: list[Matrix]) -> Matrix:
    """Stack matrices with equal column counts on top of each other."""
    if not mats:
        raise PreconditionError("nothing to stack")
    cols = mats[0].cols
    entries = {}
    offset = 0
    for m in mats:
        if m.cols != cols:
            raise PreconditionError("column mismatch in vertical stack")
        for (r, c), x in m.entries.items():
            entries[(r + offset, c)] = x
        offset += m.rows
    return Matrix(offset, cols, entries)


class RowReducer:
    """Incremental reduced row echelon form over the rationals.

    Rows are sparse vectors; the pivot of a row is its leftmost nonzero
    column. Stored rows have pivot entry 1 and are fully back-eliminated,
    so they form the canonical RREF basis of the span of everything
    inserted so far. Insertion order therefore does not affect the final
    row set, which keeps downstream bases deterministic.
    """

    def __init__(self):
        self.pivots: dict[int, Vector] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def residual(self, v: Vector) -> Vector:
        """Normal form of v modulo the current row space: no pivot column
        survives in the output."""
        v = dict(v)
        out: Vector = {}
        while v:
            p = min(v)
            row = self.pivots.get(p)
            if row is None:
                out[p] = v.pop(p)
            else:
                v = vec_add(v, row, -v[p])
        return out

    def insert(self, v: Vector) -> bool:
        """Add v to the span; returns True if the rank grew."""
        v = self.residual(v)
        if not v:
            return False
        p = min(v)
        coeff = v[p]
        newrow = {i: x / coeff for i, x in v.items()}
        # back-eliminate the new pivot from existing rows so every stored
        # row keeps entries only at its own pivot and free columns
        for q, qrow in list(self.pivots.items()):
            if p in qrow:
                self.pivots[q] = vec_add(qrow, newrow, -qrow[p])
        self.pivots[p] = newrow
        return True

    def contains(self, v: Vector) -> bool:
        return not self.residual(v)

    def pivot_columns(self) -> list[int]:
        return sorted(self.pivots)


def rank(m: Matrix) -> int:
    red = RowReducer()
    by_row: dict[int, Vector] = {}
    for (r, c), x in m.entries.items():
        by_row.setdefault(r, {})[c] = x
    for r in sorted(by_row):
        red.insert(by_row[r])
    return red.rank


def kernel_basis(m: Matrix) -> list[Vector]:
    """Canonical basis of ker(m) as sparse column vectors.

    The basis is read off the RREF of m: one vector per free column f,
    with entry 1 at f and the negated RREF column entries at the pivot
    columns. Vectors are linearly independent and span the kernel, and
    their count is cols - rank (rank-nullity).
    """
    red = RowReducer()
    by_row: dict[int, Vector] = {}
    for (r, c), x in m.entries.items():
        by_row.setdefault(r, {})[c] = x
    for r in sorted(by_row):
        red.insert(by_row[r])
    pivots = red.pivots
    pivot_cols = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_cols:
            continue
        v: Vector = {f: ONE}
        for p, row in pivots.items():
            if f in row:
                v[p] = -row[f]
        basis.append({i: x for i, x in v.items() if x})
    return basis


def solve_columns(basis: Matrix, targets: Matrix) -> Matrix:
    """Solve basis @ X = targets where basis has full column rank.

    Raises PreconditionError if some target column is outside the span.
    """
    if basis.rows != targets.rows:
        raise PreconditionError("row mismatch in solve")
    n = basis.rows
    k = basis.cols
    # augmented rows: [basis | targets]
    red = RowReducer()
    aug_rows: dict[int, Vector] = {}
    for (r, c), x in basis.entries.items():
        aug_rows.setdefault(r, {})[c] = x
    for (r, c), x in targets.entries.items():
        aug_rows.setdefault(r, {})[c + k] = x
    for r in range(n):
        if r in aug_rows:
            red.insert(aug_rows[r])
    entries = {}
    for p, row in red.pivots.items():
        if p >= k:
            raise PreconditionError("target column outside the span of the basis")
        for c, x in row.items():
            if c >= k and x:
                entries[(p, c - k)] = x
    # sanity: the solution must reproduce the targets exactly
    x = Matrix(k, targets.cols, entries)
    if basis * x != targets:
        raise PreconditionError("inconsistent linear system")
    return x


@dataclass(frozen=True)
class GradedVectorSpace:
    """Dimensions per degree 0..T, with optional basis labels."""

    dims: tuple[int, ...]
    labels: tuple[tuple[str, ...], ...] | None = None

    def __post_init__(self):
        if any(d < 0 for d in self.dims):
            raise PreconditionError("negative dimension")
        if self.labels is not None:
            if len(self.labels) != len(self.dims):
                raise PreconditionError("labels/dims length mismatch")
            for lab, d in zip(self.labels, self.dims):
                if len(lab) != d:
                    raise PreconditionError("label count mismatch")

    @property
    def top(self) -> int:
        return len(self.dims) - 1


class ChainComplex:
    """Finite-type chain complex concentrated in degrees 0..T.

    differentials[k] maps degree k+1 to degree k (so the boundary out of
    degree k is boundary(k) = differentials[k-1]). d o d = 0 is checked
    exactly on construction.
    """

    __slots__ = ("spaces", "differentials", "weights")

    def __init__(self, spaces: GradedVectorSpace, differentials: tuple[Matrix, ...],
                 weights: tuple[tuple[int, ...], ...] | None = None):
        dims = spaces.dims
        if len(differentials) != max(len(dims) - 1, 0):
            raise PreconditionError("need one differential per degree 1..T")
        for k, d in enumerate(differentials):
            if d.rows != dims[k] or d.cols != dims[k + 1]:
                raise PreconditionError(f"differential {k + 1} has wrong shape")
        for k in range(len(differentials) - 1):
            if not (differentials[k] * differentials[k + 1]).is_zero():
                raise PreconditionError(f"d o d != 0 between degrees {k + 2} and {k}")
        if weights is not None:
            if len(weights) != len(dims) or any(len(w) != d for w, d in zip(weights, dims)):
                raise PreconditionError("weights shape mismatch")
        self.spaces = spaces
        self.differentials = tuple(differentials)
        self.weights = weights

    @property
    def dims(self) -> tuple[int, ...]:
        return self.spaces.dims

    @property
    def top(self) -> int:
        return self.spaces.top

    def boundary(self, k: int) -> Matrix:
        """The differential out of degree k (1 <= k <= T)."""
        if not 1 <= k <= self.top:
            raise PreconditionError(f"no boundary out of degree {k}")
        return self.differentials[k - 1]

    def __eq__(self, other):
        return (
            isinstance(other, ChainComplex)
            and self.dims == other.dims
            and self.differentials == other.differentials
        )

    def __repr__(self):
        return f"ChainComplex(dims={self.dims})"


def sphere_complex(k: int, top: int) -> ChainComplex:
    """S^k: the ground field in degree k, zero differentials."""
    if k < 0 or k > top:
        raise PreconditionError("sphere degree outside truncation")
    dims = tuple(1 if i == k else 0 for i in range(top + 1))
    diffs = tuple(Matrix.zero(dims[i], dims[i + 1]) for i in range(top))
    return ChainComplex(GradedVectorSpace(dims), diffs)


def disk_complex(k: int, top: int) -> ChainComplex:
    """D^k: two copies of the ground field in degrees k-1, k and the
    identity differential between them. D^0 is K concentrated in degree 0."""
    if k < 0 or k > top:
        raise PreconditionError("disk degree outside truncation")
    if k == 0:
        return sphere_complex(0, top)
    dims = tuple(1 if i in (k - 1, k) else 0 for i in range(top + 1))
    diffs = []
    for i in range(top):
        if i + 1 == k:
            diffs.append(Matrix.identity(1))
        else:
            diffs.append(Matrix.zero(dims[i], dims[i + 1]))
    return ChainComplex(GradedVectorSpace(dims), tuple(diffs))


def direct_sum(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    if a.top != b.top:
        raise PreconditionError("direct sum requires equal truncation")
    dims = tuple(x + y for x, y in zip(a.dims, b.dims))
    diffs = []
    for k in range(a.top):
        entries = dict(a.differentials[k].entries)
        for (r, c), x in b.differentials[k].entries.items():
            entries[(r + a.dims[k], c + a.dims[k + 1])] = x
        diffs.append(Matrix(dims[k], dims[k + 1], entries))
    return ChainComplex(GradedVectorSpace(dims), tuple(diffs))


@dataclass(frozen=True)
class HomologyResult:
    """Dimension and representative cycle basis of one homology group.

    ``reliable`` is False exactly when the degree equals the truncation
    bound, where boundaries from the unseen next degree could still kill
    classes.
    """

    degree: int
    dimension: int
    representatives: tuple[tuple[tuple[int, Fraction], ...], ...]
    reliable: bool

    def representative_vectors(self) -> list[Vector]:
        return [dict(r) for r in self.representatives]


def homology(c: ChainComplex, k: int) -> HomologyResult:
    """Homology of c in degree k with representative cycles.

    dimension = dim ker boundary(k) - rank boundary(k+1); representatives
    are cycles completing the boundary space to the cycle space.
    """
    if not 0 <= k <= c.top:
        raise PreconditionError(f"degree {k} outside 0..{c.top}")
    if k == 0:
        cycles: list[Vector] = [{j: ONE} for j in range(c.dims[0])]
    else:
        cycles = kernel_basis(c.boundary(k))
    red = RowReducer()
    if k < c.top:
        for col in c.boundary(k + 1).columns():
            red.insert(col)
    reps = []
    for z in cycles:
        if red.insert(z):
            reps.append(tuple(sorted(z.items())))
    return HomologyResult(k, len(reps), tuple(reps), reliable=(k < c.top))


class ChainMap:
    """Degreewise linear map of chain complexes commuting with boundaries."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: ChainComplex, target: ChainComplex, components: tuple[Matrix, ...]):
        top = min(source.top, target.top)
        if len(components) != top + 1:
            raise PreconditionError("need one component per shared degree")
        for k, f in enumerate(components):
            if f.rows != target.dims[k] or f.cols != source.dims[k]:
                raise PreconditionError(f"component {k} has wrong shape")
        for k in range(1, top + 1):
            if components[k - 1] * source.boundary(k) != target.boundary(k) * components[k]:
                raise PreconditionError(f"does not commute with boundaries at degree {k}")
        self.source = source
        self.target = target
        self.components = tuple(components)


@dataclass(frozen=True)
class QuasiIsoReport:
    """Per-degree homology comparison along a chain map."""

    rows: tuple[tuple[int, int, int, int], ...]  # (degree, dim H src, dim H tgt, induced rank)
    verdict: bool


def is_quasi_iso(f: ChainMap, through_degree: int) -> QuasiIsoReport:
    """True iff f induces bijections on homology in degrees 0..through_degree.

    Both complexes must be truncated at T >= through_degree + 1 so that the
    compared homology is reliable.
    """
    d = through_degree
    if f.source.top < d + 1 or f.target.top < d + 1:
        raise TruncationError("truncation too small for requested comparison range")
    rows = []
    ok = True
    for k in range(d + 1):
        hs = homology(f.source, k)
        ht = homology(f.target, k)
        red = RowReducer()
        if k < f.target.top:
            for col in f.target.boundary(k + 1).columns():
                red.insert(col)
        base = red.rank
        for z in hs.representative_vectors():
            red.insert(f.components[k].apply(z))
        induced = red.rank - base
        rows.append((k, hs.dimension, ht.dimension, induced))
        if not (hs.dimension == ht.dimension == induced):
            ok = False
    return QuasiIsoReport(tuple(rows), ok)
