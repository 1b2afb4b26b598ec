"""Semifree graded-commutative DG algebras over the rationals.

Generators carry a chain degree and (optionally) a positive weight;
differentials are degree -1 and weight-homogeneous. The weight grading
makes every bidegree finite-dimensional, so bigraded homology, the
word-length filtration, Koszul complexes and Tor are all exact
computations. Algebras without weights support only the degreewise
operations needed by the derived-Cartesian layer.

Monomials are kept in a canonical normal form: factors sorted by
(chain degree, name), odd generators squaring to zero, reordering signs
given by the parity of odd-odd transpositions.
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
    QuasiIsoReport,
    RowReducer,
    homology,
)

ZERO = Fraction(0)
ONE = Fraction(1)

#: A monomial is the tuple of its factor names in canonical order.
Monomial = tuple[str, ...]


@dataclass(frozen=True)
class GeneratorSpec:
    """A named generator with chain degree >= 0 and weight >= 1 (weight may
    be None for algebras used only pointwise)."""

    name: str
    degree: int
    weight: int | None = 1

    def __post_init__(self):
        if self.degree < 0:
            raise PreconditionError("generator degree must be >= 0")
        if self.weight is not None and self.weight < 1:
            raise PreconditionError("generator weight must be >= 1")
        if not self.name or not all(ch.isalnum() or ch == "_" for ch in self.name):
            raise PreconditionError(f"bad generator name {self.name!r}")


class GradedPolynomial:
    """A rational linear combination of canonical monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, Fraction] | None = None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def zero(cls) -> "GradedPolynomial":
        return cls()

    @classmethod
    def unit(cls) -> "GradedPolynomial":
        return cls({(): ONE})

    @classmethod
    def generator(cls, name: str) -> "GradedPolynomial":
        return cls({(name,): ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, GradedPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __add__(self, other: "GradedPolynomial") -> "GradedPolynomial":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, ZERO) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return GradedPolynomial(out)

    def __sub__(self, other: "GradedPolynomial") -> "GradedPolynomial":
        return self + other.scale(Fraction(-1))

    def scale(self, a) -> "GradedPolynomial":
        a = Fraction(a)
        return GradedPolynomial({m: a * c for m, c in self.terms.items()}) if a else GradedPolynomial()

    def monomials(self) -> list[Monomial]:
        return sorted(self.terms)

    def __repr__(self):
        return f"GradedPolynomial({self.terms})"


class FreeCDGA:
    """Semifree graded-commutative DG algebra given by generators and the
    differential on them.

    On construction: generator names must be distinct, each d(g) must be
    homogeneous of chain degree degree(g) - 1 (and of weight weight(g) if
    the algebra is weighted), degree-0 generators must have zero
    differential, and d o d = 0 is checked on every generator.
    """

    def __init__(self, generators, differential: dict[str, GradedPolynomial] | None = None):
        gens = tuple(generators)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise PreconditionError("duplicate generator names")
        self.generators = gens
        self.by_name = {g.name: g for g in gens}
        weighted = [g.weight is not None for g in gens]
        if any(weighted) and not all(weighted):
            raise PreconditionError("either all or no generators carry weights")
        self.weighted = all(weighted) if gens else True
        diff = {name: GradedPolynomial.zero() for name in names}
        for name, p in (differential or {}).items():
            if name not in diff:
                raise PreconditionError(f"differential on unknown generator {name!r}")
            diff[name] = p
        self.differential = diff
        self._slice_cache: dict[int, ChainComplex] = {}
        self._basis_cache: dict[tuple[int, int], list[Monomial]] = {}
        self._validate()

    # -- canonical monomial arithmetic ------------------------------------

    def _key(self, name: str) -> tuple[int, str]:
        return (self.by_name[name].degree, name)

    def degree_of_factor(self, name: str) -> int:
        return self.by_name[name].degree

    def monomial_degree(self, m: Monomial) -> int:
        return sum(self.by_name[f].degree for f in m)

    def monomial_weight(self, m: Monomial) -> int:
        if not self.weighted:
            raise PreconditionError("algebra carries no weights")
        return sum(self.by_name[f].weight for f in m)

    def monomial_length(self, m: Monomial) -> int:
        return len(m)

    def _merge(self, a: Monomial, b: Monomial):
        """Merge two canonical factor tuples; returns (sign, monomial) or
        None when an odd generator squares."""
        out = []
        sign = 1
        odd_left = sum(1 for f in a if self.by_name[f].degree % 2)
        i = j = 0
        while i < len(a) and j < len(b):
            ka, kb = self._key(a[i]), self._key(b[j])
            if ka == kb and self.by_name[a[i]].degree % 2:
                return None
            if ka <= kb:
                if self.by_name[a[i]].degree % 2:
                    odd_left -= 1
                out.append(a[i])
                i += 1
            else:
                if self.by_name[b[j]].degree % 2 and odd_left % 2:
                    sign = -sign
                out.append(b[j])
                j += 1
        out.extend(a[i:])
        out.extend(b[j:])
        return sign, tuple(out)

    def mul(self, p: GradedPolynomial, q: GradedPolynomial) -> GradedPolynomial:
        """Graded-commutative product (bilinear extension of signed merge)."""
        out: dict[Monomial, Fraction] = {}
        for ma, ca in p.terms.items():
            for mb, cb in q.terms.items():
                merged = self._merge(ma, mb)
                if merged is None:
                    continue
                sign, m = merged
                s = out.get(m, ZERO) + sign * ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return GradedPolynomial(out)

    def d(self, p: GradedPolynomial) -> GradedPolynomial:
        """Differential extended by the graded Leibniz rule."""
        total = GradedPolynomial.zero()
        for m, c in p.terms.items():
            deg_prefix = 0
            for i, f in enumerate(m):
                df = self.differential[f]
                if df.is_zero():
                    deg_prefix += self.by_name[f].degree
                    continue
                term = GradedPolynomial({m[:i]: ONE})
                term = self.mul(term, df)
                term = self.mul(term, GradedPolynomial({m[i + 1:]: ONE}))
                sign = -1 if deg_prefix % 2 else 1
                total = total + term.scale(sign * c)
                deg_prefix += self.by_name[f].degree
        return total

    def is_homogeneous(self, p: GradedPolynomial, degree: int, weight: int | None) -> bool:
        for m in p.terms:
            if self.monomial_degree(m) != degree:
                return False
            if weight is not None and self.monomial_weight(m) != weight:
                return False
        return True

    def _validate(self):
        for g in self.generators:
            dg = self.differential[g.name]
            if g.degree == 0 and not dg.is_zero():
                raise PreconditionError(f"degree-0 generator {g.name} must have d = 0")
            if not dg.is_zero():
                w = g.weight if self.weighted else None
                if not self.is_homogeneous(dg, g.degree - 1, w):
                    raise PreconditionError(f"d({g.name}) is not homogeneous of the right bidegree")
            if not self.d(dg).is_zero():
                raise PreconditionError(f"d^2 != 0 on generator {g.name}")

    # -- bases and slices ---------------------------------------------------

    def max_degree(self) -> int:
        return max((g.degree for g in self.generators), default=0)

    def basis(self, degree: int, weight: int) -> list[Monomial]:
        """All canonical monomials of the given chain degree and weight.

        Finite because weights are >= 1. Enumerated in a fixed order
        (lexicographic in the exponent vector over the canonical generator
        order)."""
        if not self.weighted:
            raise PreconditionError("basis enumeration needs a weight grading")
        key = (degree, weight)
        if key in self._basis_cache:
            return self._basis_cache[key]
        gens = sorted(self.generators, key=lambda g: (g.degree, g.name))
        out: list[Monomial] = []

        def rec(i: int, deg: int, wt: int, acc: list[str]):
            if deg == 0 and wt == 0:
                out.append(tuple(acc))
                return
            if i == len(gens) or wt <= 0:
                return
            g = gens[i]
            max_e = wt // g.weight
            if g.degree % 2:
                max_e = min(max_e, 1)
            if g.degree > 0:
                max_e = min(max_e, deg // g.degree)
            for e in range(max_e + 1):
                rec(i + 1, deg - e * g.degree, wt - e * g.weight, acc + [g.name] * e)

        rec(0, degree, weight, [])
        out.sort()
        self._basis_cache[key] = out
        return out

    def weight_complex(self, weight: int) -> ChainComplex:
        """The weight-w slice of the algebra as a finite chain complex.

        The slice is complete (a trailing zero degree is appended), so its
        homology is reliable in every degree."""
        if weight in self._slice_cache:
            return self._slice_cache[weight]
        top = weight * self.max_degree() + 1
        bases = [self.basis(k, weight) for k in range(top + 1)]
        index = [{m: i for i, m in enumerate(b)} for b in bases]
        diffs = []
        for k in range(1, top + 1):
            entries = {}
            for col, m in enumerate(bases[k]):
                dm = self.d(GradedPolynomial({m: ONE}))
                for mm, c in dm.terms.items():
                    entries[(index[k - 1][mm], col)] = c
            diffs.append(Matrix(len(bases[k - 1]), len(bases[k]), entries))
        cx = ChainComplex(GradedVectorSpace(tuple(len(b) for b in bases)), tuple(diffs))
        self._slice_cache[weight] = cx
        return cx

    def homology_bigraded(self, degree: int, weight: int) -> HomologyResult:
        """Exact homology of the weight slice at the given chain degree."""
        cx = self.weight_complex(weight)
        if degree > cx.top:
            return HomologyResult(degree, 0, (), reliable=True)
        return homology(cx, degree)

    def homology_table(self, max_degree: int, max_weight: int) -> dict[tuple[int, int], int]:
        return {
            (n, w): self.homology_bigraded(n, w).dimension
            for w in range(max_weight + 1)
            for n in range(max_degree + 1)
        }

    # -- augmentation-ideal filtration ---------------------------------------

    def augmentation_ideal_basis(self, power: int, degree: int, weight: int) -> list[Monomial]:
        """Monomials of word length >= power in the given bidegree; the
        augmentation annihilates all monomials of positive length."""
        if power < 1:
            raise PreconditionError("ideal power must be >= 1")
        return [m for m in self.basis(degree, weight) if len(m) >= power]

    def gr_component(self, power: int, degree: int, weight: int) -> int:
        """Dimension of the word-length-filtration layer: monomials of
        length exactly ``power`` in the bidegree."""
        if power < 0:
            raise PreconditionError("filtration layer must be >= 0")
        return sum(1 for m in self.basis(degree, weight) if len(m) == power)

    # -- cell attachments -----------------------------------------------------

    def attach_cell(self, gen: GeneratorSpec, boundary: GradedPolynomial) -> "FreeCDGA":
        """Extend the algebra by one generator whose differential is the
        given cycle. The cycle must be homogeneous of chain degree
        degree(gen) - 1 and weight weight(gen); degree-0 cells require a
        zero boundary."""
        if gen.name in self.by_name:
            raise PreconditionError(f"generator {gen.name} already present")
        if gen.degree == 0:
            if not boundary.is_zero():
                raise PreconditionError("degree-0 cells must have zero boundary")
        else:
            w = gen.weight if self.weighted else None
            if self.weighted and gen.weight is None:
                raise PreconditionError("cell weight required for a weighted algebra")
            if not boundary.is_zero() and not self.is_homogeneous(boundary, gen.degree - 1, w):
                raise PreconditionError("attaching cycle has the wrong bidegree")
            if not self.d(boundary).is_zero():
                raise PreconditionError("attaching element is not a cycle")
        diff = dict(self.differential)
        diff[gen.name] = boundary
        return FreeCDGA(self.generators + (gen,), diff)


def free_cdga_on_sphere(k: int, name: str = "x", weight: int = 1) -> FreeCDGA:
    """The graded symmetric algebra on one generator of degree k."""
    return FreeCDGA([GeneratorSpec(name, k, weight)])


def free_cdga_on_disk(k: int, names: tuple[str, str] = ("y", "x"), weight: int = 1) -> FreeCDGA:
    """The graded symmetric algebra on the acyclic two-term complex: a
    degree-k generator mapping onto a degree-(k-1) generator."""
    if k < 1:
        raise PreconditionError("disk degree must be >= 1")
    top, bottom = names
    return FreeCDGA(
        [GeneratorSpec(bottom, k - 1, weight), GeneratorSpec(top, k, weight)],
        {top: GradedPolynomial.generator(bottom)},
    )


# ---------------------------------------------------------------------------
# Koszul complexes and Tor
# ---------------------------------------------------------------------------

def koszul_algebra(m: int) -> FreeCDGA:
    """Polynomial algebra on m even degree-0 generators together with its
    Koszul resolution data: one odd degree-1 generator per variable, each
    mapping onto its variable. Weight-w slices of this algebra are the
    weight-w layers of the Koszul complex."""
    if m < 0:
        raise PreconditionError("generator count must be >= 0")
    gens = []
    diff = {}
    for i in range(1, m + 1):
        gens.append(GeneratorSpec(f"x{i}", 0, 1))
    for i in range(1, m + 1):
        gens.append(GeneratorSpec(f"e{i}", 1, 1))
        diff[f"e{i}"] = GradedPolynomial.generator(f"x{i}")
    return FreeCDGA(gens, diff)


def koszul_complex(m: int, max_weight: int) -> dict[int, ChainComplex]:
    """The Koszul resolution of the ground field over the polynomial
    algebra on m variables, materialized per weight <= max_weight."""
    alg = koszul_algebra(m)
    return {w: alg.weight_complex(w) for w in range(max_weight + 1)}


def tor_dimensions(m: int) -> list[int]:
    """Homology dimensions of the Koszul complex reduced against the
    augmentation: every monomial with a polynomial factor is killed, and
    the homology in degree j must come out binomial(m, j)."""
    alg = koszul_algebra(m)
    e_names = [f"e{i}" for i in range(1, m + 1)]
    bases = [
        [tuple(s) for s in itertools.combinations(e_names, j)]
        for j in range(m + 1)
    ]
    index = [{mm: i for i, mm in enumerate(b)} for b in bases]
    diffs = []
    for j in range(1, m + 1):
        entries = {}
        for col, mono in enumerate(bases[j]):
            dm = alg.d(GradedPolynomial({mono: ONE}))
            for mm, c in dm.terms.items():
                # reduce against the augmentation ideal of the base ring:
                # any x-factor kills the term
                if any(f.startswith("x") for f in mm):
                    continue
                entries[(index[j - 1][mm], col)] = c
        diffs.append(Matrix(len(bases[j - 1]), len(bases[j]), entries))
    dims = tuple(len(b) for b in bases) + (0,)
    diffs.append(Matrix.zero(dims[m], 0))
    cx = ChainComplex(GradedVectorSpace(dims), tuple(diffs))
    return [homology(cx, j).dimension for j in range(m + 1)]


# ---------------------------------------------------------------------------
# algebra morphisms
# ---------------------------------------------------------------------------

class CDGAMorphism:
    """DG algebra map determined by generator images.

    Images must be homogeneous of the generator's bidegree and must
    intertwine the differentials; both are checked on construction.
    """

    def __init__(self, source: FreeCDGA, target: FreeCDGA, images: dict[str, GradedPolynomial]):
        if set(images) != {g.name for g in source.generators}:
            raise PreconditionError("need exactly one image per source generator")
        self.source = source
        self.target = target
        self.images = images
        both_weighted = source.weighted and target.weighted
        for g in source.generators:
            img = images[g.name]
            w = g.weight if both_weighted else None
            if not img.is_zero() and not target.is_homogeneous(img, g.degree, w):
                raise PreconditionError(f"image of {g.name} has the wrong bidegree")
            if self.apply(source.differential[g.name]) != target.d(img):
                raise PreconditionError(f"map does not commute with d on {g.name}")

    def apply(self, p: GradedPolynomial) -> GradedPolynomial:
        out = GradedPolynomial.zero()
        for m, c in p.terms.items():
            acc = GradedPolynomial.unit()
            for f in m:
                acc = self.target.mul(acc, self.images[f])
                if acc.is_zero():
                    break
            out = out + acc.scale(c)
        return out

    def bidegree_matrix(self, degree: int, weight: int) -> Matrix:
        src = self.source.basis(degree, weight)
        tgt = self.target.basis(degree, weight)
        tix = {m: i for i, m in enumerate(tgt)}
        entries = {}
        for col, m in enumerate(src):
            img = self.apply(GradedPolynomial({m: ONE}))
            for mm, c in img.terms.items():
                entries[(tix[mm], col)] = c
        return Matrix(len(tgt), len(src), entries)

    def is_quasi_iso(self, max_weight: int) -> tuple[bool, dict]:
        """Compare homology in every bidegree of weight <= max_weight.

        Weight slices are complete complexes, so the verdict is exact for
        all chain degrees; it is truncated only in the weight direction.
        """
        from .linalg import ChainMap, is_quasi_iso as cx_quasi_iso

        rows = {}
        ok = True
        for w in range(max_weight + 1):
            sc = self.source.weight_complex(w)
            tc = self.target.weight_complex(w)
            top = max(sc.top, tc.top) + 1
            sc = _pad(sc, top)
            tc = _pad(tc, top)
            comps = tuple(self.bidegree_matrix(k, w) for k in range(top + 1))
            report = cx_quasi_iso(ChainMap(sc, tc, comps), top - 1)
            rows[w] = report.rows
            ok = ok and report.verdict
        return ok, rows


def _pad(cx: ChainComplex, top: int) -> ChainComplex:
    """Extend a complex with zero degrees up to the requested truncation."""
    if cx.top >= top:
        return cx
    dims = cx.dims + (0,) * (top - cx.top)
    diffs = list(cx.differentials)
    for k in range(cx.top, top):
        diffs.append(Matrix.zero(dims[k], 0))
    return ChainComplex(GradedVectorSpace(dims), tuple(diffs))


def inclusion_morphism(small: FreeCDGA, big: FreeCDGA) -> CDGAMorphism:
    """The map sending each generator of ``small`` to its namesake."""
    return CDGAMorphism(
        small, big, {g.name: GradedPolynomial.generator(g.name) for g in small.generators}
    )
