"""Semifree DG algebras viewed as derived Cartesian spaces.

Classical points are algebra maps to the ground field annihilating the
image of the differential; the tangent complex at a point is the
generator-spanned cochain complex with the differential linearized there.
Weak equivalences of the dual geometric maps are detected by a bijection
of supplied classical points together with tangent quasi-isomorphisms;
fibrations by surjectivity of the linearized maps in every degree.

Weights are optional throughout this module: every operation here is
pointwise in the degree-0 variables. Differential-forms generators are the
exception and require cellular weight data.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .cdga import CDGAMorphism, FreeCDGA, GradedPolynomial, GeneratorSpec
from .linalg import Matrix, RowReducer, Vector, kernel_basis, rank

ZERO = Fraction(0)
ONE = Fraction(1)

#: A classical point: value of every degree-0 generator.
Point = dict[str, Fraction]


@dataclass(frozen=True)
class DerivedCartesianSpace:
    """A semifree algebra read as the function algebra of a derived
    Cartesian space: the degree-0 part is a polynomial algebra, the
    positive-degree generators are the (duals of the) bundle directions,
    and the differential encodes the brackets."""

    algebra: FreeCDGA

    @property
    def amplitude(self) -> int:
        return self.algebra.max_degree()

    def coordinate_names(self) -> list[str]:
        return [g.name for g in self.algebra.generators if g.degree == 0]

    def generator_names(self, degree: int) -> list[str]:
        return sorted(g.name for g in self.algebra.generators if g.degree == degree)


def _check_point(A: FreeCDGA, point: Point) -> Point:
    coords = {g.name for g in A.generators if g.degree == 0}
    missing = coords - set(point)
    if missing:
        raise PreconditionError(f"point misses coordinates {sorted(missing)}")
    extra = set(point) - coords
    if extra:
        raise PreconditionError(f"point assigns non-coordinates {sorted(extra)}")
    return {k: Fraction(v) for k, v in point.items()}


def evaluate(A: FreeCDGA, p: GradedPolynomial, point: Point) -> Fraction:
    """Value at the point of a polynomial in the degree-0 generators."""
    total = ZERO
    for m, c in p.terms.items():
        val = c
        for f in m:
            if A.by_name[f].degree != 0:
                raise PreconditionError("cannot evaluate positive-degree factors")
            val *= point[f]
        total += val
    return total


def is_classical_point(space: DerivedCartesianSpace, point: Point) -> bool:
    """True iff evaluating every degree-1 differential at the point gives 0,
    so the point annihilates the image of the differential."""
    A = space.algebra
    point = _check_point(A, point)
    for g in A.generators:
        if g.degree == 1 and evaluate(A, A.differential[g.name], point):
            return False
    return True


def shift_to_point(A: FreeCDGA, p: GradedPolynomial, point: Point) -> GradedPolynomial:
    """Substitute x -> x + point(x) for every degree-0 generator."""
    images = {}
    for g in A.generators:
        if g.degree == 0:
            images[g.name] = GradedPolynomial(
                {(g.name,): ONE, (): point[g.name]}
            )
        else:
            images[g.name] = GradedPolynomial.generator(g.name)
    out = GradedPolynomial.zero()
    for m, c in p.terms.items():
        acc = GradedPolynomial.unit()
        for f in m:
            acc = A.mul(acc, images[f])
        out = out + acc.scale(c)
    return out


def linear_coefficients(p: GradedPolynomial) -> dict[str, Fraction]:
    """Coefficients of the length-one monomials."""
    return {m[0]: c for m, c in p.terms.items() if len(m) == 1}


@dataclass(frozen=True)
class TangentComplex:
    """Cochain complex indexed 0..amplitude: degree j is spanned by the
    duals of the degree-j generators (degree 0 by the coordinates), and
    the map j -> j+1 is the linearization at the point of the differential
    of the degree-(j+1) generators. Composites vanish because d^2 = 0 and
    the point is classical."""

    bases: tuple[tuple[str, ...], ...]
    maps: tuple[Matrix, ...]     # maps[j]: degree j -> j+1

    @property
    def amplitude(self) -> int:
        return len(self.bases) - 1

    def cohomology_dimension(self, j: int) -> int:
        if not 0 <= j <= self.amplitude:
            return 0
        if j == self.amplitude:
            cycles = len(self.bases[j])
        else:
            cycles = len(kernel_basis(self.maps[j]))
        boundaries = rank(self.maps[j - 1]) if j >= 1 else 0
        return cycles - boundaries

    def cohomology_table(self) -> dict[int, int]:
        return {j: self.cohomology_dimension(j) for j in range(self.amplitude + 1)}


def tangent_complex(space: DerivedCartesianSpace, point: Point) -> TangentComplex:
    """Tangent complex at a classical point.

    The degree-0 variables are shifted by the point before the linear part
    is read off, so the degree-0 to 1 map is the Jacobian of the curvature
    at the point."""
    A = space.algebra
    point = _check_point(A, point)
    if not is_classical_point(space, point):
        raise PreconditionError("tangent complex requires a classical point")
    amp = space.amplitude
    bases = [tuple(space.generator_names(j)) for j in range(amp + 1)]
    maps = []
    for j in range(amp):
        rows = bases[j + 1]
        cols = bases[j]
        cix = {name: i for i, name in enumerate(cols)}
        entries = {}
        for r, gname in enumerate(rows):
            lin = linear_coefficients(shift_to_point(A, A.differential[gname], point))
            for name, c in lin.items():
                if name in cix:
                    entries[(r, cix[name])] = c
        maps.append(Matrix(len(rows), len(cols), entries))
    for j in range(amp - 1):
        if not (maps[j + 1] * maps[j]).is_zero():
            raise PreconditionError("linearized differential fails to square to zero")
    return TangentComplex(tuple(bases), tuple(maps))


def pull_back_point(f: CDGAMorphism, point: Point) -> Point:
    """Compose a classical point of the codomain with the algebra map,
    yielding a point of the domain."""
    A = f.target
    point = _check_point(A, point)
    out = {}
    for g in f.source.generators:
        if g.degree == 0:
            out[g.name] = evaluate(A, f.images[g.name], point)
    return out


def tangent_map(f: CDGAMorphism, point: Point) -> tuple[Matrix, ...]:
    """Degreewise tangent maps at a classical point of the codomain: the
    transpose of the linearization of the generator images, sending the
    tangent complex of the codomain's space to the domain's."""
    A, B = f.target, f.source
    point = _check_point(A, point)
    amp = max(FreeCDGA.max_degree(A), FreeCDGA.max_degree(B))
    sa = DerivedCartesianSpace(A)
    sb = DerivedCartesianSpace(B)
    mats = []
    for j in range(amp + 1):
        rows = sb.generator_names(j)
        cols = sa.generator_names(j)
        cix = {name: i for i, name in enumerate(cols)}
        entries = {}
        for r, bname in enumerate(rows):
            lin = linear_coefficients(shift_to_point(A, f.images[bname], point))
            for name, c in lin.items():
                if name in cix:
                    entries[(r, cix[name])] = c
        mats.append(Matrix(len(rows), len(cols), entries))
    return tuple(mats)


def _cochain_quasi_iso(src: TangentComplex, tgt: TangentComplex,
                       comps: tuple[Matrix, ...]) -> tuple[bool, list[tuple[int, int, int, int]]]:
    """Compare cohomology along degreewise components src -> tgt."""
    amp = max(src.amplitude, tgt.amplitude)
    rows = []
    ok = True

    def maps_at(t: TangentComplex, j: int) -> Matrix | None:
        return t.maps[j] if 0 <= j < len(t.maps) else None

    def basis_dim(t: TangentComplex, j: int) -> int:
        return len(t.bases[j]) if j <= t.amplitude else 0

    for j in range(amp + 1):
        # source cohomology representatives
        smap = maps_at(src, j)
        if smap is None:
            cycles = [{i: ONE} for i in range(basis_dim(src, j))]
        else:
            cycles = kernel_basis(smap)
        red_s = RowReducer()
        prev = maps_at(src, j - 1) if j >= 1 else None
        if prev is not None:
            for col in prev.columns():
                red_s.insert(col)
        reps = [z for z in cycles if red_s.insert(z)]
        dim_s = len(reps)
        # target cohomology dimension and induced rank
        tmap = maps_at(tgt, j)
        if tmap is None:
            tcycles = basis_dim(tgt, j)
        else:
            tcycles = len(kernel_basis(tmap))
        tprev = maps_at(tgt, j - 1) if j >= 1 else None
        tble = rank(tprev) if tprev is not None else 0
        dim_t = tcycles - tble
        red_t = RowReducer()
        if tprev is not None:
            for col in tprev.columns():
                red_t.insert(col)
        base = red_t.rank
        comp = comps[j] if j < len(comps) else Matrix.zero(0, basis_dim(src, j))
        for z in reps:
            red_t.insert(comp.apply(z))
        induced = red_t.rank - base
        rows.append((j, dim_s, dim_t, induced))
        if not (dim_s == dim_t == induced):
            ok = False
    return ok, rows


@dataclass(frozen=True)
class WeakEquivalenceReport:
    """Verdict of the classical-locus bijection plus per-point tangent
    comparisons. Point lists are caller-supplied and asserted complete;
    verdicts are relative to the rational points given."""

    verdict: bool
    point_bijection: bool
    pairs: tuple[tuple[int, int], ...]            # matched (source idx, target idx)
    tangent_rows: tuple[tuple[int, tuple[tuple[int, int, int, int], ...]], ...]
    points_asserted_complete: bool = True


def is_weak_equivalence(f: CDGAMorphism, source_points: list[Point],
                        target_points: list[Point]) -> WeakEquivalenceReport:
    """Check the dual geometric map for: (a) the pullback of the supplied
    classical points of the source space (points of the codomain algebra)
    is a bijection onto the supplied points of the target space, (b) each
    matched pair has quasi-isomorphic tangent complexes.

    Every supplied point must be classical; otherwise an error is raised.
    """
    space_src = DerivedCartesianSpace(f.target)   # geometric source
    space_tgt = DerivedCartesianSpace(f.source)   # geometric target
    src_pts = [_check_point(f.target, p) for p in source_points]
    tgt_pts = [_check_point(f.source, p) for p in target_points]
    for p in src_pts:
        if not is_classical_point(space_src, p):
            raise PreconditionError(f"source point {p} is not classical")
    for p in tgt_pts:
        if not is_classical_point(space_tgt, p):
            raise PreconditionError(f"target point {p} is not classical")
    used: set[int] = set()
    pairs = []
    bijection = True
    for i, p in enumerate(src_pts):
        q = pull_back_point(f, p)
        match = None
        for j, cand in enumerate(tgt_pts):
            if j not in used and cand == q:
                match = j
                break
        if match is None:
            bijection = False
        else:
            used.add(match)
            pairs.append((i, match))
    if len(used) != len(tgt_pts) or len(pairs) != len(src_pts):
        bijection = False
    tangent_rows = []
    ok = bijection
    for (i, j) in pairs:
        t_src = tangent_complex(space_src, src_pts[i])
        t_tgt = tangent_complex(space_tgt, tgt_pts[j])
        comps = tangent_map(f, src_pts[i])
        good, rows = _cochain_quasi_iso(t_src, t_tgt, comps)
        tangent_rows.append((i, tuple(rows)))
        ok = ok and good
    return WeakEquivalenceReport(ok, bijection, tuple(pairs), tuple(tangent_rows))


def is_fibration_at(f: CDGAMorphism, point: Point) -> bool:
    """True iff the linearized map at the (classical) point is surjective
    in every degree: the Jacobian of the degree-0 component together with
    the fiberwise generator maps in positive degrees."""
    space_src = DerivedCartesianSpace(f.target)
    point = _check_point(f.target, point)
    if not is_classical_point(space_src, point):
        raise PreconditionError("fibration check requires a classical point")
    for j, m in enumerate(tangent_map(f, point)):
        if rank(m) != m.rows:
            return False
    return True


# ---------------------------------------------------------------------------
# classical-locus enumeration (restricted shapes)
# ---------------------------------------------------------------------------

def _divisors(n: int) -> list[int]:
    n = abs(n)
    return [d for d in range(1, n + 1) if n % d == 0]


def _rational_roots(coeffs: dict[int, Fraction]) -> list[Fraction] | None:
    """All rational roots of a nonzero univariate polynomial given as
    exponent -> coefficient; None signals the zero polynomial."""
    if not coeffs:
        return None
    denom_lcm = 1
    for c in coeffs.values():
        denom_lcm = denom_lcm * c.denominator // _gcd(denom_lcm, c.denominator)
    ints = {e: int(c * denom_lcm) for e, c in coeffs.items()}
    val = min(e for e, c in ints.items() if c)
    roots = set()
    if val > 0:
        roots.add(Fraction(0))
    shifted = {e - val: c for e, c in ints.items() if c}
    degree = max(shifted)
    if degree == 0:
        return sorted(roots)
    lead = shifted[degree]
    const = shifted.get(0, 0)
    if const == 0:
        return sorted(roots)
    for pnum in _divisors(const):
        for pden in _divisors(lead):
            for sgn in (1, -1):
                cand = Fraction(sgn * pnum, pden)
                if sum(c * cand ** e for e, c in shifted.items()) == 0:
                    roots.add(cand)
    return sorted(roots)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a if a else 1


def enumerate_classical_points(space: DerivedCartesianSpace) -> list[Point] | None:
    """Enumerate the rational classical locus when every degree-1
    differential is univariate or linear in the coordinates; returns None
    when the locus is not enumerable by these means (including when it is
    infinite)."""
    A = space.algebra
    coords = space.coordinate_names()
    cix = {x: i for i, x in enumerate(coords)}
    linear_rows: list[tuple[Vector, Fraction]] = []
    root_sets: dict[str, set[Fraction]] = {}
    for g in A.generators:
        if g.degree != 1:
            continue
        p = A.differential[g.name]
        if p.is_zero():
            continue
        vars_used = sorted({f for m in p.terms for f in m})
        if any(A.by_name[v].degree != 0 for v in vars_used):
            raise PreconditionError("degree-1 differential contains positive-degree factors")
        if all(len(m) <= 1 for m in p.terms):
            row = {cix[name]: c for name, c in linear_coefficients(p).items()}
            linear_rows.append((row, -p.terms.get((), ZERO)))
        elif len(vars_used) == 1:
            x = vars_used[0]
            coeffs: dict[int, Fraction] = {}
            for m, c in p.terms.items():
                coeffs[len(m)] = coeffs.get(len(m), ZERO) + c
            roots = _rational_roots(coeffs)
            if roots is None:
                continue
            if x in root_sets:
                root_sets[x] &= set(roots)
            else:
                root_sets[x] = set(roots)
        else:
            return None
    # solve the linear part; every remaining free direction must then be
    # pinned by a finite root set
    red = RowReducer()
    ncols = len(coords)
    for row, rhs in linear_rows:
        v = dict(row)
        if rhs:
            v[ncols] = -rhs
        red.insert(v)
    if ncols in red.pivots:
        return []  # inconsistent linear system: empty locus
    solved: dict[int, Vector] = dict(red.pivots)
    free_named = [coords[i] for i in range(ncols) if i not in solved]
    for x in free_named:
        if x not in root_sets:
            return None  # an unconstrained direction: infinite locus
    combos = (
        itertools.product(*(sorted(root_sets[x]) for x in free_named))
        if free_named else [()]
    )
    points: list[Point] = []
    for combo in combos:
        full = dict(zip(free_named, combo))
        for p_col in sorted(solved):
            row = solved[p_col]
            # row encodes x_p + sum a_f x_f + b = 0 with b at the augmented column
            total = row.get(ncols, ZERO)
            for c, a in row.items():
                if c not in (p_col, ncols):
                    total += a * full[coords[c]]
            full[coords[p_col]] = -total
        candidate = {x: full[x] for x in coords}
        if is_classical_point(space, candidate):
            points.append(candidate)
    points.sort(key=lambda pt: tuple(pt[x] for x in coords))
    return points


# ---------------------------------------------------------------------------
# differential forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DifferentialFormsReport:
    """Generators of the indecomposables at the origin and the dimension
    table of the free graded-commutative algebra they span."""

    generators: tuple[GeneratorSpec, ...]
    dims: dict[tuple[int, int], int]


def differential_forms_generators(space: DerivedCartesianSpace,
                                  origin: Point | None = None,
                                  max_degree: int = 4,
                                  max_weight: int = 4) -> DifferentialFormsReport:
    """The algebra of differential forms of a derived Cartesian space with
    cellular weight data: the free graded-commutative algebra on the
    augmentation-indecomposables at a fixed origin.

    The origin must be a classical point; the zero point is used when none
    is supplied. Weights are required: the report tabulates dimensions per
    (degree, weight)."""
    A = space.algebra
    if not A.weighted:
        raise PreconditionError("differential forms need cellular weight data")
    if origin is None:
        origin = {x: ZERO for x in space.coordinate_names()}
    origin = _check_point(A, origin)
    if not is_classical_point(space, origin):
        raise PreconditionError("the supplied origin is not a classical point")
    gens = tuple(A.generators)
    model = FreeCDGA(gens)  # zero differential: the free algebra on the layer
    dims = {
        (n, w): len(model.basis(n, w))
        for w in range(max_weight + 1)
        for n in range(max_degree + 1)
    }
    return DifferentialFormsReport(gens, dims)
