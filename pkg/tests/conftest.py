"""Shared builders for the test suite."""

import random
from fractions import Fraction

import pytest

from doldkan.cdga import FreeCDGA, GeneratorSpec, GradedPolynomial
from doldkan.linalg import ChainComplex, GradedVectorSpace, Matrix, kernel_basis


def random_chain_complex(rng: random.Random, top: int = 4, max_dim: int = 3) -> ChainComplex:
    """Random finite-type complex: each differential's columns are drawn
    from the kernel of the previous one, so d o d = 0 by construction."""
    dims = [rng.randint(0, max_dim) for _ in range(top + 1)]
    diffs = []
    for k in range(1, top + 1):
        if k == 1:
            basis = [{i: Fraction(1)} for i in range(dims[0])]
        else:
            basis = kernel_basis(diffs[-1])
        cols = []
        for _ in range(dims[k]):
            v = {}
            for b in basis:
                c = rng.randint(-2, 2)
                if c:
                    for i, x in b.items():
                        s = v.get(i, Fraction(0)) + c * x
                        if s:
                            v[i] = s
                        else:
                            v.pop(i, None)
            cols.append(v)
        diffs.append(Matrix.from_columns(cols, dims[k - 1]))
    return ChainComplex(GradedVectorSpace(tuple(dims)), tuple(diffs))


def sphere_algebra(k: int, name: str = "a") -> FreeCDGA:
    return FreeCDGA([GeneratorSpec(name, k, 1)])


def disk_algebra(k: int, names=("b", "a")) -> FreeCDGA:
    top, bottom = names
    return FreeCDGA(
        [GeneratorSpec(bottom, k - 1, 1), GeneratorSpec(top, k, 1)],
        {top: GradedPolynomial.generator(bottom)},
    )


def critical_x2_algebra() -> FreeCDGA:
    """(x, xi; d xi = x^2), weights homogenized (x: 1, xi: 2)."""
    return FreeCDGA(
        [GeneratorSpec("x", 0, 1), GeneratorSpec("xi", 1, 2)],
        {"xi": GradedPolynomial({("x", "x"): Fraction(1)})},
    )


def two_cell_algebra() -> FreeCDGA:
    """An odd circle cell with a cone cell attached on top of it."""
    base = sphere_algebra(1, "xi")
    return base.attach_cell(GeneratorSpec("y", 2, 1), GradedPolynomial.generator("xi"))


@pytest.fixture
def rng():
    return random.Random(20240811)
