"""Finite-type truncated simplicial vector spaces.

Normalized (Moore) chains, the Dold-Kan inverse built from monotone
surjections, homotopy groups by two independent routes, and shuffle
combinatorics.

Conventions, fixed globally:

- normalized chains in degree k are the joint kernel of the faces
  d_1, ..., d_k, and the surviving differential is d_0;
- the degeneracy-word calculus kills a basis summand unless the
  injective part of the factorization is the identity or omits exactly
  the index 0, in which case the chain differential acts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .linalg import (
    ChainComplex,
    GradedVectorSpace,
    HomologyResult,
    Matrix,
    Vector,
    RowReducer,
    homology,
    kernel_basis,
    solve_columns,
    stack_vertical,
)

ONE = Fraction(1)


# ---------------------------------------------------------------------------
# monotone map combinatorics
# ---------------------------------------------------------------------------

def face_values(n: int, i: int) -> tuple[int, ...]:
    """The injection [n-1] -> [n] skipping i."""
    if not 0 <= i <= n:
        raise PreconditionError("face index out of range")
    return tuple(t if t < i else t + 1 for t in range(n))


def degeneracy_values(n: int, j: int) -> tuple[int, ...]:
    """The surjection [n+1] -> [n] repeating j."""
    if not 0 <= j <= n:
        raise PreconditionError("degeneracy index out of range")
    return tuple(t if t <= j else t - 1 for t in range(n + 2))


def compose_values(outer: tuple[int, ...], inner: tuple[int, ...]) -> tuple[int, ...]:
    """Values of outer o inner."""
    return tuple(outer[v] for v in inner)


@dataclass(frozen=True, order=True)
class Surjection:
    """Monotone surjection [source] ->> [target], encoded by the strictly
    increasing list of indices i with f(i) = f(i+1)."""

    source: int
    target: int
    repeats: tuple[int, ...]

    def __post_init__(self):
        n, k, rep = self.source, self.target, self.repeats
        if not 0 <= k <= n:
            raise PreconditionError("surjection must not raise dimension")
        if len(rep) != n - k:
            raise PreconditionError("repeat count must be source - target")
        if any(not 0 <= r <= n - 1 for r in rep) or list(rep) != sorted(set(rep)):
            raise PreconditionError("repeats must be strictly increasing in 0..source-1")

    @classmethod
    def from_values(cls, values: tuple[int, ...], target: int) -> "Surjection":
        n = len(values) - 1
        if values[0] != 0 or values[-1] != target:
            raise PreconditionError("values are not surjective onto the target")
        repeats = tuple(i for i in range(n) if values[i] == values[i + 1])
        s = cls(n, target, repeats)
        if s.values() != values:
            raise PreconditionError("values are not monotone surjective")
        return s

    @classmethod
    def identity(cls, n: int) -> "Surjection":
        return cls(n, n, ())

    def is_identity(self) -> bool:
        return self.source == self.target

    def values(self) -> tuple[int, ...]:
        out = []
        v = 0
        rep = set(self.repeats)
        for i in range(self.source + 1):
            out.append(v)
            if i not in rep:
                v += 1
        return tuple(out)


def surjections(n: int, k: int) -> list[Surjection]:
    """All monotone surjections [n] ->> [k], in deterministic order."""
    if k > n or k < 0:
        return []
    return [Surjection(n, k, rep) for rep in itertools.combinations(range(n), n - k)]


def epi_mono_factor(values: tuple[int, ...], codomain: int):
    """Factor a monotone map as (epi, image) with image the sorted tuple of
    hit values in [codomain]."""
    image = sorted(set(values))
    pos = {v: i for i, v in enumerate(image)}
    epi = Surjection.from_values(tuple(pos[v] for v in values), len(image) - 1)
    return epi, tuple(image)


def monotone_maps(n: int, m: int) -> list[tuple[int, ...]]:
    """All monotone maps [n] -> [m] as value tuples, deterministic order."""
    return [
        tuple(v)
        for v in itertools.combinations_with_replacement(range(m + 1), n + 1)
    ]


# ---------------------------------------------------------------------------
# simplicial vector spaces
# ---------------------------------------------------------------------------

class SimplicialVectorSpace:
    """Degree-truncated simplicial vector space with explicit structure
    matrices.

    faces[n][i] is d_i at level n (n >= 1), degeneracies[n][j] is s_j at
    level n (n <= T-1). The five simplicial identity families are checked
    exactly on construction wherever both sides are stored.
    """

    __slots__ = ("levels", "faces", "degeneracies")

    def __init__(self, levels: GradedVectorSpace,
                 faces: dict[int, tuple[Matrix, ...]],
                 degeneracies: dict[int, tuple[Matrix, ...]],
                 check: bool = True):
        top = levels.top
        dims = levels.dims
        for n in range(1, top + 1):
            fs = faces.get(n, ())
            if len(fs) != n + 1:
                raise PreconditionError(f"level {n} needs faces d_0..d_{n}")
            for i, m in enumerate(fs):
                if m.rows != dims[n - 1] or m.cols != dims[n]:
                    raise PreconditionError(f"face d_{i} at level {n} has wrong shape")
        for n in range(0, top):
            ss = degeneracies.get(n, ())
            if len(ss) != n + 1:
                raise PreconditionError(f"level {n} needs degeneracies s_0..s_{n}")
            for j, m in enumerate(ss):
                if m.rows != dims[n + 1] or m.cols != dims[n]:
                    raise PreconditionError(f"degeneracy s_{j} at level {n} has wrong shape")
        self.levels = levels
        self.faces = {n: tuple(faces[n]) for n in range(1, top + 1)}
        self.degeneracies = {n: tuple(degeneracies[n]) for n in range(0, top)}
        if check:
            self.check_identities()

    @property
    def top(self) -> int:
        return self.levels.top

    @property
    def dims(self) -> tuple[int, ...]:
        return self.levels.dims

    def face(self, n: int, i: int) -> Matrix:
        return self.faces[n][i]

    def degeneracy(self, n: int, j: int) -> Matrix:
        return self.degeneracies[n][j]

    def check_identities(self):
        """Verify the simplicial identities as exact matrix equations."""
        top = self.top
        for n in range(2, top + 1):
            for j in range(n + 1):
                for i in range(j):
                    lhs = self.face(n - 1, i) * self.face(n, j)
                    rhs = self.face(n - 1, j - 1) * self.face(n, i)
                    if lhs != rhs:
                        raise PreconditionError(f"d_{i} d_{j} identity fails at level {n}")
        for n in range(0, top - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    lhs = self.degeneracy(n + 1, i) * self.degeneracy(n, j)
                    rhs = self.degeneracy(n + 1, j + 1) * self.degeneracy(n, i)
                    if lhs != rhs:
                        raise PreconditionError(f"s_{i} s_{j} identity fails at level {n}")
        for n in range(1, top):
            for j in range(n + 1):
                for i in range(n + 2):
                    lhs = self.face(n + 1, i) * self.degeneracy(n, j)
                    if i < j:
                        rhs = self.degeneracy(n - 1, j - 1) * self.face(n, i)
                    elif i in (j, j + 1):
                        rhs = Matrix.identity(self.dims[n])
                    else:
                        rhs = self.degeneracy(n - 1, j) * self.face(n, i - 1)
                    if lhs != rhs:
                        raise PreconditionError(f"d_{i} s_{j} identity fails at level {n}")


@dataclass(frozen=True)
class NormalizedChains:
    """Normalized chains of a simplicial vector space.

    ``inclusions[k]`` embeds the degree-k chain space into level k of the
    simplicial space (columns are the chosen cycle-intersection basis).
    """

    complex: ChainComplex
    inclusions: tuple[Matrix, ...]


def normalized_chains(v: SimplicialVectorSpace) -> NormalizedChains:
    """Moore complex: degree k is the joint kernel of d_1..d_k, with the
    restriction of d_0 as differential; degree 0 is level 0."""
    top = v.top
    incs = [Matrix.identity(v.dims[0])]
    dims = [v.dims[0]]
    for k in range(1, top + 1):
        if v.dims[k] == 0:
            incs.append(Matrix.zero(0, 0))
            dims.append(0)
            continue
        stacked = stack_vertical([v.face(k, i) for i in range(1, k + 1)])
        basis = kernel_basis(stacked)
        incs.append(Matrix.from_columns(basis, v.dims[k]))
        dims.append(len(basis))
    diffs = []
    for k in range(1, top + 1):
        inside = v.face(k, 0) * incs[k]
        diffs.append(solve_columns(incs[k - 1], inside))
    cx = ChainComplex(GradedVectorSpace(tuple(dims)), tuple(diffs))
    return NormalizedChains(cx, tuple(incs))


def homotopy_normalized(v: SimplicialVectorSpace, k: int) -> HomologyResult:
    """pi_k computed as homology of the normalized chain complex."""
    return homology(normalized_chains(v).complex, k)


def homotopy_moore(v: SimplicialVectorSpace, k: int) -> int:
    """pi_k by the kernel-intersection formula, independently of
    normalized_chains: (ker d_0 .. ker d_k at level k) modulo
    d_0(ker d_1 .. ker d_{k+1} at level k+1)."""
    if not 0 <= k <= v.top - 1:
        raise PreconditionError(f"degree {k} outside 0..{v.top - 1}")
    if v.dims[k] == 0:
        return 0
    if k == 0:
        numerator = [{j: ONE} for j in range(v.dims[0])]
    else:
        stacked = stack_vertical([v.face(k, i) for i in range(0, k + 1)])
        numerator = kernel_basis(stacked)
    red = RowReducer()
    if v.dims[k + 1]:
        stacked_up = stack_vertical([v.face(k + 1, i) for i in range(1, k + 2)])
        d0 = v.face(k + 1, 0)
        for z in kernel_basis(stacked_up):
            red.insert(d0.apply(z))
    boundary_rank = red.rank
    for z in numerator:
        red.insert(z)
    return red.rank - boundary_rank


def degenerate_subspace_dimension(v: SimplicialVectorSpace, k: int) -> int:
    """Dimension of the span of all degeneracy images inside level k."""
    if k == 0:
        return 0
    red = RowReducer()
    for j in range(k):
        for col in v.degeneracy(k - 1, j).columns():
            red.insert(col)
    return red.rank


# ---------------------------------------------------------------------------
# the Dold-Kan inverse
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class GammaBasisElement:
    """Basis bookkeeping for the rebuilt simplicial space: a chain basis
    element in degree ``degree`` spread along ``surjection``."""

    degenerate: bool
    degree: int
    surjection: Surjection
    index: int


@dataclass(frozen=True)
class GammaSpace:
    """A simplicial vector space together with its surjection-indexed basis."""

    space: SimplicialVectorSpace
    basis: tuple[tuple[GammaBasisElement, ...], ...]

    def index_of(self, level: int, degree: int, index: int, surj: Surjection) -> int:
        return self.basis[level].index(
            GammaBasisElement(not surj.is_identity(), degree, surj, index)
        )


def gamma(c: ChainComplex, top: int | None = None) -> GammaSpace:
    """Rebuild a simplicial vector space from a chain complex.

    Level n is one copy of c_k per monotone surjection [n] ->> [k]. A
    simplicial operator acts through the epi-mono factorization of the
    composite: identity injections act by identity, the injection missing
    only 0 acts by the chain differential, every other injection kills the
    summand. Identity-surjection elements are listed first at each level,
    which makes normalized_chains(gamma(c)) reproduce c on the nose.
    """
    if top is None:
        top = c.top
    if top > c.top:
        raise PreconditionError("cannot rebuild beyond the complex truncation")
    basis: list[tuple[GammaBasisElement, ...]] = []
    for n in range(top + 1):
        elems = [
            GammaBasisElement(not s.is_identity(), k, s, x)
            for k in range(n + 1)
            for s in surjections(n, k)
            for x in range(c.dims[k])
        ]
        elems.sort()
        basis.append(tuple(elems))
    index = [{e: i for i, e in enumerate(level)} for level in basis]

    def operator_matrix(n_from: int, n_to: int, op_values: tuple[int, ...]) -> Matrix:
        # op_values: [n_to] -> [n_from]; the action maps level n_from to n_to
        entries: dict[tuple[int, int], Fraction] = {}
        for col, e in enumerate(basis[n_from]):
            composite = compose_values(e.surjection.values(), op_values)
            epi, image = epi_mono_factor(composite, e.degree)
            if len(image) == e.degree + 1:
                row = index[n_to][GammaBasisElement(not epi.is_identity(), e.degree, epi, e.index)]
                entries[(row, col)] = ONE
            elif len(image) == e.degree and image == tuple(range(1, e.degree + 1)):
                for (r, cc), val in c.boundary(e.degree).entries.items():
                    if cc == e.index:
                        row = index[n_to][
                            GammaBasisElement(not epi.is_identity(), e.degree - 1, epi, r)
                        ]
                        entries[(row, col)] = entries.get((row, col), Fraction(0)) + val
            # any other injection acts by zero
        entries = {k: x for k, x in entries.items() if x}
        return Matrix(len(basis[n_to]), len(basis[n_from]), entries)

    faces = {
        n: tuple(operator_matrix(n, n - 1, face_values(n, i)) for i in range(n + 1))
        for n in range(1, top + 1)
    }
    degens = {
        n: tuple(operator_matrix(n, n + 1, degeneracy_values(n, j)) for j in range(n + 1))
        for n in range(0, top)
    }
    dims = tuple(len(level) for level in basis)
    space = SimplicialVectorSpace(GradedVectorSpace(dims), faces, degens)
    return GammaSpace(space, tuple(basis))


# ---------------------------------------------------------------------------
# shuffles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Shuffle:
    """A (p,q)-shuffle: a partition of {0..p+q-1} into an ascending p-set
    and an ascending q-set, signed by the parity of the associated
    permutation."""

    p: int
    q: int
    p_set: tuple[int, ...]
    q_set: tuple[int, ...]
    sign: int


def enumerate_shuffles(p: int, q: int) -> list[Shuffle]:
    """All binomial(p+q, p) shuffles with permutation-parity signs."""
    if p < 0 or q < 0:
        raise PreconditionError("shuffle sizes must be non-negative")
    out = []
    universe = range(p + q)
    for p_set in itertools.combinations(universe, p):
        q_set = tuple(sorted(set(universe) - set(p_set)))
        inversions = sum(1 for a in p_set for b in q_set if a > b)
        out.append(Shuffle(p, q, p_set, q_set, -1 if inversions % 2 else 1))
    return out


# ---------------------------------------------------------------------------
# reduced chains of the standard cell simplicial sets
# ---------------------------------------------------------------------------

def _from_basis_action(top: int, basis: list[list[tuple[int, ...]]],
                       act) -> tuple[SimplicialVectorSpace, tuple[tuple[tuple[int, ...], ...], ...]]:
    """Build a simplicial vector space from level bases of value tuples and
    an action rule mapping (values, op_values) to a value tuple or None."""
    index = [{b: i for i, b in enumerate(level)} for level in basis]

    def op_matrix(n_from, n_to, op_values):
        entries = {}
        for col, b in enumerate(basis[n_from]):
            img = act(b, op_values)
            if img is not None:
                entries[(index[n_to][img], col)] = ONE
        return Matrix(len(basis[n_to]), len(basis[n_from]), entries)

    dims = tuple(len(level) for level in basis)
    faces = {
        n: tuple(op_matrix(n, n - 1, face_values(n, i)) for i in range(n + 1))
        for n in range(1, top + 1)
    }
    degens = {
        n: tuple(op_matrix(n, n + 1, degeneracy_values(n, j)) for j in range(n + 1))
        for n in range(0, top)
    }
    space = SimplicialVectorSpace(GradedVectorSpace(dims), faces, degens)
    return space, tuple(tuple(level) for level in basis)


def reduced_sphere_chains(n: int, top: int):
    """Reduced simplicial chains of the quotient of the n-simplex by its
    boundary: level m has one basis vector per monotone surjection
    [m] ->> [n]; a face whose composite is no longer surjective hits the
    basepoint and acts by zero.

    Returns (space, labels) with labels the per-level value tuples.
    """
    basis = [[s.values() for s in surjections(m, n)] for m in range(top + 1)]

    def act(values, op_values):
        comp = compose_values(values, op_values)
        return comp if len(set(comp)) == n + 1 else None

    return _from_basis_action(top, basis, act)


def reduced_disk_chains(k: int, top: int):
    """Reduced simplicial chains of the quotient of the k-simplex by its
    0-horn: surviving simplices are the monotone maps [m] -> [k] whose
    image contains {1..k}.

    Returns (space, labels) with labels the per-level value tuples.
    """
    def alive(values):
        return set(values) >= set(range(1, k + 1))

    basis = [
        [v for v in monotone_maps(m, k) if alive(v)]
        for m in range(top + 1)
    ]

    def act(values, op_values):
        comp = compose_values(values, op_values)
        return comp if alive(comp) else None

    return _from_basis_action(top, basis, act)
