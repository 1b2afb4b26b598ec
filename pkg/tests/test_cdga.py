"""Graded-commutative DG algebras: signs, Leibniz, filtration, Koszul."""

import random
from fractions import Fraction

import pytest

from conftest import critical_x2_algebra, disk_algebra, sphere_algebra, two_cell_algebra
from doldkan.errors import PreconditionError
from doldkan.cdga import (
    CDGAMorphism,
    FreeCDGA,
    GeneratorSpec,
    GradedPolynomial,
    free_cdga_on_disk,
    free_cdga_on_sphere,
    inclusion_morphism,
    koszul_complex,
    tor_dimensions,
)
from doldkan.linalg import homology


def gen(name):
    return GradedPolynomial.generator(name)


@pytest.fixture
def mixed_algebra():
    # even and odd generators with a differential hitting products
    return FreeCDGA(
        [
            GeneratorSpec("x", 0, 1),
            GeneratorSpec("xi", 1, 1),
            GeneratorSpec("eta", 1, 2),
            GeneratorSpec("z", 2, 2),
        ],
        {"z": GradedPolynomial({("x", "xi"): Fraction(1)})},
    )


def test_unit_and_odd_squares(mixed_algebra):
    A = mixed_algebra
    p = GradedPolynomial({("x", "xi"): Fraction(2)})
    assert A.mul(GradedPolynomial.unit(), p) == p
    assert A.mul(gen("xi"), gen("xi")).is_zero()
    anti = A.mul(gen("xi"), gen("eta")) + A.mul(gen("eta"), gen("xi"))
    assert anti.is_zero()


def test_sign_coherence_different_association_orders(mixed_algebra, rng):
    A = mixed_algebra
    names = [g.name for g in A.generators]
    for _ in range(120):
        word = [rng.choice(names) for _ in range(rng.randint(2, 5))]
        left = GradedPolynomial.unit()
        for w in word:
            left = A.mul(left, gen(w))
        right = gen(word[-1])
        for w in reversed(word[:-1]):
            right = A.mul(gen(w), right)
        assert left == right


def test_graded_commutativity_random_monomials(mixed_algebra, rng):
    A = mixed_algebra
    names = [g.name for g in A.generators]
    for _ in range(100):
        a = GradedPolynomial.unit()
        for w in [rng.choice(names) for _ in range(rng.randint(1, 3))]:
            a = A.mul(a, gen(w))
        b = GradedPolynomial.unit()
        for w in [rng.choice(names) for _ in range(rng.randint(1, 3))]:
            b = A.mul(b, gen(w))
        if a.is_zero() or b.is_zero():
            continue
        (ma,) = [m for m in list(a.terms)[:1]]
        (mb,) = [m for m in list(b.terms)[:1]]
        da = A.monomial_degree(ma)
        db = A.monomial_degree(mb)
        sign = Fraction(-1) ** (da * db)
        assert A.mul(a, b) == A.mul(b, a).scale(sign)


def test_leibniz_on_random_pairs(mixed_algebra, rng):
    A = mixed_algebra
    names = [g.name for g in A.generators]
    for _ in range(100):
        word_p = [rng.choice(names) for _ in range(rng.randint(1, 3))]
        p = GradedPolynomial.unit()
        for w in word_p:
            p = A.mul(p, gen(w))
        q = GradedPolynomial.unit()
        for w in [rng.choice(names) for _ in range(rng.randint(1, 3))]:
            q = A.mul(q, gen(w))
        if p.is_zero() or q.is_zero():
            continue
        deg_p = A.monomial_degree(next(iter(p.terms)))
        lhs = A.d(A.mul(p, q))
        rhs = A.mul(A.d(p), q) + A.mul(p, A.d(q)).scale(Fraction(-1) ** deg_p)
        assert lhs == rhs


def test_differential_worked_example():
    # A = (x deg 0, y deg 1, dy = x^2): d(y*x) = x^3
    A = FreeCDGA(
        [GeneratorSpec("x", 0, 1), GeneratorSpec("y", 1, 2)],
        {"y": GradedPolynomial({("x", "x"): Fraction(1)})},
    )
    yx = A.mul(gen("y"), gen("x"))
    assert A.d(yx) == GradedPolynomial({("x", "x", "x"): Fraction(1)})
    # odd square differentiates to zero
    assert A.d(A.mul(gen("y"), gen("y"))).is_zero()
    assert A.d(GradedPolynomial.unit()).is_zero()


def test_d_squared_checked_at_construction():
    with pytest.raises(PreconditionError):
        FreeCDGA(
            [GeneratorSpec("x", 0, 1), GeneratorSpec("y", 1, 1),
             GeneratorSpec("z", 2, 1)],
            {"y": gen("x"), "z": gen("y")},
        )


def test_degree_zero_generators_have_zero_differential():
    with pytest.raises(PreconditionError):
        FreeCDGA([GeneratorSpec("x", 0, 1), GeneratorSpec("w", 0, 1)],
                 {"w": gen("x")})


def test_basis_enumeration_examples():
    kx = sphere_algebra(0, "x")
    assert kx.basis(0, 3) == [("x", "x", "x")]
    s1 = sphere_algebra(1, "xi")
    assert s1.basis(1, 1) == [("xi",)]
    assert s1.basis(2, 2) == []
    A = FreeCDGA([GeneratorSpec("x", 0, 1), GeneratorSpec("y", 2, 2)])
    assert A.basis(4, 4) == [("y", "y")]
    assert A.basis(2, 3) == [("x", "y")]


def test_attach_cell_examples():
    base = FreeCDGA([])
    exterior = base.attach_cell(GeneratorSpec("xi", 1, 1), GradedPolynomial.zero())
    assert {k: v for k, v in exterior.homology_table(2, 2).items() if v} == {
        (0, 0): 1, (1, 1): 1}
    kx = sphere_algebra(0, "x")
    acyclic = kx.attach_cell(GeneratorSpec("y", 1, 1), gen("x"))
    table = acyclic.homology_table(2, 3)
    assert {k: v for k, v in table.items() if v} == {(0, 0): 1}
    with pytest.raises(PreconditionError):
        kx.attach_cell(GeneratorSpec("bad", 2, 1), gen("x"))  # x is not a cycle of degree 1
    with pytest.raises(PreconditionError):
        acyclic.attach_cell(GeneratorSpec("z", 2, 1), gen("y"))  # dy = x != 0


def test_bigraded_homology_examples():
    d1 = disk_algebra(1)
    for w in range(1, 4):
        for n in range(0, 3):
            assert d1.homology_bigraded(n, w).dimension == 0
    assert d1.homology_bigraded(0, 0).dimension == 1
    s2 = sphere_algebra(2, "y")
    for w in range(4):
        for n in range(7):
            expected = 1 if n == 2 * w else 0
            assert s2.homology_bigraded(n, w).dimension == expected
    # derived critical locus of x^3, homogenized
    crit = FreeCDGA(
        [GeneratorSpec("x", 0, 1), GeneratorSpec("xi", 1, 3)],
        {"xi": GradedPolynomial({("x", "x", "x"): Fraction(1)})},
    )
    for w in range(5):
        assert crit.homology_bigraded(0, w).dimension == (1 if w <= 2 else 0)
        assert crit.homology_bigraded(1, w).dimension == 0


def test_augmentation_ideal_and_gr():
    kx = sphere_algebra(0, "x")
    assert kx.augmentation_ideal_basis(1, 0, 2) == [("x", "x")]
    assert kx.augmentation_ideal_basis(3, 0, 2) == []
    crit = critical_x2_algebra()
    assert crit.augmentation_ideal_basis(2, 1, 3) == [("x", "xi")]
    assert kx.gr_component(2, 0, 2) == 1
    assert sphere_algebra(1, "xi").gr_component(2, 2, 2) == 0
    assert crit.gr_component(1, 1, 2) == 1  # the generator xi
    # filtration layers exhaust the bidegree
    for A in (kx, crit, two_cell_algebra()):
        for n in range(3):
            for w in range(4):
                total = len(A.basis(n, w))
                assert sum(A.gr_component(r, n, w) for r in range(w + 1)) == total


def test_koszul_exactness_and_tor():
    for m in (1, 2, 3):
        complexes = koszul_complex(m, 4)
        for w, cx in complexes.items():
            for k in range(cx.top + 1):
                expected = 1 if (w == 0 and k == 0) else 0
                assert homology(cx, k).dimension == expected
        dims = tor_dimensions(m)
        binom = [1]
        for j in range(m):
            binom.append(binom[-1] * (m - j) // (j + 1))
        assert dims == binom


def test_koszul_single_variable_two_term_slices():
    complexes = koszul_complex(1, 3)
    for w in range(1, 4):
        cx = complexes[w]
        assert cx.dims[0] == 1 and cx.dims[1] == 1
        assert homology(cx, 0).dimension == 0
        assert homology(cx, 1).dimension == 0


def test_morphism_validation_and_quasi_iso():
    small = sphere_algebra(1, "xi")
    big = small.attach_cell(GeneratorSpec("a", 1, 2), GradedPolynomial.zero())
    big = big.attach_cell(GeneratorSpec("b", 2, 2), gen("a"))
    inc = inclusion_morphism(small, big)
    ok, rows = inc.is_quasi_iso(3)
    assert ok
    # a non-equivalence: the unit of the x^2 critical algebra
    crit = critical_x2_algebra()
    unit = CDGAMorphism(FreeCDGA([]), crit, {})
    ok, rows = unit.is_quasi_iso(3)
    assert not ok
    with pytest.raises(PreconditionError):
        CDGAMorphism(small, big, {"xi": gen("b")})  # wrong bidegree
