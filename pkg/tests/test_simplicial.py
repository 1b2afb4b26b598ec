"""Simplicial vector spaces: the Dold-Kan pair, homotopy, shuffles."""

import itertools
from fractions import Fraction

import pytest

from conftest import random_chain_complex
from doldkan.errors import PreconditionError
from doldkan.linalg import Matrix, homology, rank, sphere_complex, disk_complex
from doldkan.simplicial import (
    GammaSpace,
    Shuffle,
    Surjection,
    degenerate_subspace_dimension,
    enumerate_shuffles,
    epi_mono_factor,
    gamma,
    homotopy_moore,
    homotopy_normalized,
    monotone_maps,
    normalized_chains,
    reduced_disk_chains,
    reduced_sphere_chains,
    surjections,
)


# -- surjection bookkeeping ---------------------------------------------------

def brute_force_surjections(n, k):
    out = []
    for values in monotone_maps(n, k):
        if sorted(set(values)) == list(range(k + 1)):
            out.append(values)
    return sorted(out)


def test_surjection_enumeration_matches_brute_force():
    for n in range(5):
        for k in range(n + 1):
            ours = sorted(s.values() for s in surjections(n, k))
            assert ours == brute_force_surjections(n, k)


def test_surjection_roundtrip():
    s = Surjection(4, 2, (1, 3))
    assert Surjection.from_values(s.values(), 2) == s
    with pytest.raises(PreconditionError):
        Surjection(3, 2, (0, 1))


def test_epi_mono_factorization():
    epi, image = epi_mono_factor((1, 1, 2), 3)
    assert image == (1, 2)
    assert epi.values() == (0, 0, 1)


# -- constant space and the round trip ---------------------------------------

def test_constant_space_normalizes_to_degree_zero():
    c = sphere_complex(0, 3)
    g = gamma(c)
    assert g.space.dims == (1, 1, 1, 1)
    nc = normalized_chains(g.space).complex
    assert nc.dims == (1, 0, 0, 0)


def test_gamma_dims_count_surjections(rng):
    for _ in range(10):
        c = random_chain_complex(rng, top=4)
        g = gamma(c)
        for n in range(5):
            expected = sum(
                len(surjections(n, k)) * c.dims[k] for k in range(n + 1)
            )
            assert g.space.dims[n] == expected


def test_gamma_sphere_and_disk_level_dims():
    s1 = gamma(sphere_complex(1, 4))
    assert s1.space.dims == (0, 1, 2, 3, 4)
    d1 = gamma(disk_complex(1, 4))
    assert d1.space.dims == (1, 2, 3, 4, 5)


def test_n_gamma_is_identity_on_the_nose(rng):
    for _ in range(25):
        c = random_chain_complex(rng, top=4)
        nc = normalized_chains(gamma(c).space).complex
        assert nc.dims == c.dims
        assert nc.differentials == c.differentials


def test_degenerate_complement_dimension(rng):
    # N_k + (span of degeneracies) fills the whole level
    for _ in range(10):
        c = random_chain_complex(rng, top=4)
        g = gamma(c)
        nc = normalized_chains(g.space)
        for k in range(5):
            assert nc.complex.dims[k] + degenerate_subspace_dimension(g.space, k) \
                == g.space.dims[k]


def test_homotopy_two_routes_agree_and_match_homology(rng):
    for _ in range(15):
        c = random_chain_complex(rng, top=4)
        g = gamma(c)
        for k in range(4):
            moore = homotopy_moore(g.space, k)
            normal = homotopy_normalized(g.space, k)
            assert moore == normal.dimension
            assert moore == homology(c, k).dimension


def test_homotopy_truncation_guard():
    g = gamma(sphere_complex(1, 3))
    with pytest.raises(PreconditionError):
        homotopy_moore(g.space, 3)


# -- reduced chains of spheres and disks --------------------------------------

def test_reduced_sphere_chains_is_the_rebuilt_sphere():
    # the reduced chains of the quotient sphere agree with the rebuilt
    # sphere complex on the nose, after matching bases by surjection values
    for n in (0, 1, 2):
        space, labels = reduced_sphere_chains(n, 4)
        g = gamma(sphere_complex(n, 4))
        assert space.dims == g.space.dims
        perms = []
        for lvl in range(5):
            gvals = [e.surjection.values() for e in g.basis[lvl]]
            perms.append([gvals.index(v) for v in labels[lvl]])
        for lvl in range(1, 5):
            for i in range(lvl + 1):
                a = space.face(lvl, i)
                b = g.space.face(lvl, i)
                moved = {
                    (perms[lvl - 1][r], perms[lvl][c]): x
                    for (r, c), x in a.entries.items()
                }
                assert moved == b.entries
        # the homotopy type is the sphere
        assert homotopy_normalized(space, n).dimension == 1
        for k in range(4):
            if k != n:
                assert homotopy_moore(space, k) == 0


def test_reduced_disk_chains_is_acyclic():
    for k in (1, 2, 3):
        space, _ = reduced_disk_chains(k, 4)
        for q in range(4):
            assert homotopy_moore(space, q) == 0


def test_circle_reduced_chains_direct_ranks():
    # independent oracle: reduced chains of the simplicial circle, with
    # homology from raw face-matrix ranks rather than normalized chains
    space, _ = reduced_sphere_chains(1, 4)
    # chain complex with alternating-sum boundary
    boundary = {}
    for n in (1, 2):
        entries = {}
        for i in range(n + 1):
            m = space.face(n, i)
            for (r, c), x in m.entries.items():
                key = (r, c)
                entries[key] = entries.get(key, Fraction(0)) + (-1) ** i * x
        boundary[n] = Matrix(space.dims[n - 1], space.dims[n],
                             {k: v for k, v in entries.items() if v})
    z1 = len([v for v in range(space.dims[1])]) - rank(boundary[1])
    h1 = z1 - rank(boundary[2])
    assert h1 == 1
    h0 = space.dims[0] - rank(boundary[1])
    assert h0 == 0


# -- shuffles ------------------------------------------------------------------

def permutation_sign_by_cycles(perm):
    """Independent parity oracle: count cycles."""
    n = len(perm)
    seen = [False] * n
    cycles = 0
    for i in range(n):
        if not seen[i]:
            cycles += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
    return 1 if (n - cycles) % 2 == 0 else -1


def test_shuffle_counts_and_signs():
    for p, q in [(0, 0), (1, 1), (2, 1), (2, 2), (3, 1), (3, 0)]:
        shuffles = enumerate_shuffles(p, q)
        binom = 1
        for i in range(p):
            binom = binom * (p + q - i) // (i + 1)
        assert len(shuffles) == binom
        for s in shuffles:
            assert tuple(sorted(s.p_set + s.q_set)) == tuple(range(p + q))
            # oracle: the permutation placing p_set then q_set
            arrangement = list(s.p_set) + list(s.q_set)
            assert s.sign == permutation_sign_by_cycles(arrangement)


def test_shuffle_opposite_pair():
    a, b = enumerate_shuffles(1, 1)
    assert a.sign == -b.sign


def test_shuffle_sign_sums():
    # signed shuffle counts, frozen from the parity oracle above:
    # (1,1) cancels; (2,1) and (2,2) do not
    def signed_sum(p, q):
        return sum(s.sign for s in enumerate_shuffles(p, q))

    assert signed_sum(1, 1) == 0
    assert signed_sum(2, 1) == 1
    assert signed_sum(2, 2) == 2
    assert signed_sum(3, 0) == 1


def test_shuffle_trivial_case():
    (only,) = enumerate_shuffles(2, 0)
    assert only.sign == 1 and only.p_set == (0, 1) and only.q_set == ()
