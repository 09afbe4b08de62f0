"""Tests for global cohomology tables, Betti numbers, and h-vector oracles."""

import pytest

from toric_ic.cohom import (
    DualityReport,
    JOutOfRange,
    NotSimplicial,
    gamma_table,
    generalized_h_vector,
    h_vector_oracle,
    ih_betti,
    omega_betti,
    serre_duality_report,
)
from toric_ic.fan import load_fan
from toric_ic.gem import FanNotComplete, GemComplex
from toric_ic.ic import Perversity, build_ic


@pytest.fixture(scope="module")
def half_line_fan():
    return load_fan(rank=1, rays=[[1]], maximal_cones=[[0]])


def interleave(h):
    out = []
    for i, v in enumerate(h):
        if i:
            out.append(0)
        out.append(v)
    return tuple(out)


# ---------------------------------------------------------------------------
# tables


def test_gamma_table_p1_middle(p1):
    L = build_ic(p1, Perversity.middle(p1))
    assert gamma_table(p1, L) == {(0, -1): 1, (1, 0): 1}


def test_gamma_table_empty_for_zero_complex(p2):
    assert gamma_table(p2, GemComplex(p2, {}, {})) == {}


def test_euler_characteristic_per_internal_degree(p2):
    from toric_ic.gem import gamma
    L = build_ic(p2, Perversity.middle(p2))
    g = gamma(L)
    dims = g.bidegree_dims()
    h = g.cohomology_dims()
    for q in {q for (_, q) in dims} | {q for (_, q) in h}:
        chi_d = sum((-1) ** i * v for (i, qq), v in dims.items() if qq == q)
        chi_h = sum((-1) ** i * v for (i, qq), v in h.items() if qq == q)
        assert chi_d == chi_h


# ---------------------------------------------------------------------------
# Betti numbers


def test_betti_small_corpus(p1, p2, p1xp1):
    assert ih_betti(p1, Perversity.middle(p1)) == (1, 0, 1)
    assert ih_betti(p2, Perversity.middle(p2)) == (1, 0, 1, 0, 1)
    assert ih_betti(p1xp1, Perversity.middle(p1xp1)) == (1, 0, 2, 0, 1)


def test_betti_normalization(p1, p2):
    for fan in (p1, p2):
        for name in ("middle", "top", "bottom"):
            assert ih_betti(fan, Perversity.preset(fan, name))[0] == 1


def test_betti_poincare_and_parity(p1, p2, p1xp1):
    for fan in (p1, p2, p1xp1):
        b = ih_betti(fan, Perversity.middle(fan))
        assert b == tuple(reversed(b))
        assert all(v == 0 for m, v in enumerate(b) if m % 2)


def test_betti_needs_complete_fan(half_line_fan):
    with pytest.raises(FanNotComplete):
        ih_betti(half_line_fan, Perversity.middle(half_line_fan))


# ---------------------------------------------------------------------------
# sheaf-slice Betti numbers


def test_omega_slices_p2(p2):
    p = Perversity.middle(p2)
    table = gamma_table(p2, build_ic(p2, p))
    for j in range(p2.rank + 1):
        assert omega_betti(p2, p, j) == \
            tuple(table.get((i, -j), 0) for i in range(p2.rank + 1))


def test_omega_resums_to_betti(p2):
    p = Perversity.middle(p2)
    r = p2.rank
    betti = ih_betti(p2, p)
    resum = [0] * (2 * r + 1)
    for j in range(r + 1):
        for i, v in enumerate(omega_betti(p2, p, j)):
            resum[i - j + r] += v
    assert tuple(resum) == betti


def test_omega_out_of_range(p2):
    p = Perversity.middle(p2)
    for j in (-1, p2.rank + 1):
        with pytest.raises(JOutOfRange):
            omega_betti(p2, p, j)


def test_omega_needs_complete_fan(half_line_fan):
    with pytest.raises(FanNotComplete):
        omega_betti(half_line_fan, Perversity.middle(half_line_fan), 0)


# ---------------------------------------------------------------------------
# global duality


def test_serre_duality_small_corpus(p1, p2, p1xp1):
    for fan in (p1, p2, p1xp1):
        for name in ("middle", "top", "bottom"):
            rep = serre_duality_report(fan, Perversity.preset(fan, name))
            assert isinstance(rep, DualityReport)
            assert rep.ok, rep.violations[:5]


def test_serre_duality_needs_complete_fan(half_line_fan):
    with pytest.raises(FanNotComplete):
        serre_duality_report(half_line_fan, Perversity.middle(half_line_fan))


# ---------------------------------------------------------------------------
# combinatorial oracles


def test_h_vectors(p1, p2, p1xp1, octahedron):
    assert h_vector_oracle(p1) == (1, 1)
    assert h_vector_oracle(p2) == (1, 1, 1)
    assert h_vector_oracle(p1xp1) == (1, 2, 1)
    assert h_vector_oracle(octahedron) == (1, 3, 3, 1)


def test_h_vector_rejects_non_simplicial(cube):
    with pytest.raises(NotSimplicial):
        h_vector_oracle(cube)


def test_h_vector_needs_complete_fan(half_line_fan):
    with pytest.raises(FanNotComplete):
        h_vector_oracle(half_line_fan)


def test_generalized_h_matches_h_on_simplicial(p1, p2, p1xp1, octahedron):
    for fan in (p1, p2, p1xp1, octahedron):
        assert generalized_h_vector(fan) == h_vector_oracle(fan)


def test_generalized_h_cube(cube):
    assert generalized_h_vector(cube) == (1, 5, 5, 1)


def test_betti_interleaves_h(p1, p2, p1xp1):
    for fan in (p1, p2, p1xp1):
        assert ih_betti(fan, Perversity.middle(fan)) == \
            interleave(h_vector_oracle(fan))
