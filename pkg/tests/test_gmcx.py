"""Tests for complexes of modules: cones, truncations, duals."""

import random

import pytest

from toric_ic.exactq import QMatrix, solve
from toric_ic.extalg import (
    ConeAlgebra,
    ExtModuleHom,
    free_module,
    zero_module,
)
from toric_ic.gmcx import (
    GMComplex,
    GMComplexMap,
    dual_complex,
    gt_ge,
    gt_ge_map,
    gt_le,
    gt_le_map,
    is_quasi_iso,
    mapping_cone,
    shift,
    single_term_complex,
    tgt_ge_map,
    tgt_le,
    tgt_le_map,
    zero_complex,
)
from toric_ic.randgen import random_gm_complex


@pytest.fixture(scope="module")
def algebras(p2, octahedron):
    return [
        ConeAlgebra(p2, p2.zero_cone_id()),
        ConeAlgebra(p2, p2.cone_by_rays({0})),
        ConeAlgebra(p2, p2.cone_by_rays({0, 1})),
        ConeAlgebra(octahedron, octahedron.cone_by_rays({0, 1, 2})),
    ]


def random_complexes(algebras, n_per_alg=4, seed=11):
    rng = random.Random(seed)
    out = []
    for alg in algebras:
        for _ in range(n_per_alg):
            out.append(random_gm_complex(alg, rng))
    return out


def identity_map(c):
    return GMComplexMap(c, c, {
        i: ExtModuleHom(c.term(i), c.term(i),
                        {j: QMatrix.identity(d) for j, d in c.term(i).dims.items()})
        for i in c.degrees()
    })


# ---------------------------------------------------------------------------
# basics


def test_zero_complex(algebras):
    assert zero_complex(algebras[0]).cohomology_dims() == {}


def test_identity_two_term(algebras):
    alg = algebras[0]
    q = free_module(alg)
    c = GMComplex(alg, {0: q, 1: q},
                  {0: ExtModuleHom(q, q, {0: QMatrix.identity(1)})})
    c.validate()
    assert c.cohomology_dims() == {}


def test_random_complexes_valid(algebras):
    for c in random_complexes(algebras, n_per_alg=3):
        c.validate()


def test_shift(algebras):
    for c in random_complexes(algebras, n_per_alg=2, seed=3):
        assert shift(shift(c, 2), -2).cohomology_dims() == c.cohomology_dims()
        h1 = shift(c, 1).cohomology_dims()
        h0 = c.cohomology_dims()
        assert h1 == {(p - 1, q): v for (p, q), v in h0.items()}
        shift(c, 1).validate()


# ---------------------------------------------------------------------------
# mapping cones and quasi-isomorphisms


def test_cone_of_identity_acyclic(algebras):
    for c in random_complexes(algebras, n_per_alg=2, seed=5):
        cone = mapping_cone(identity_map(c))
        cone.validate()
        assert cone.is_acyclic()


def test_cone_of_zero_map_is_shift(algebras):
    for c in random_complexes(algebras, n_per_alg=2, seed=6):
        z = zero_complex(c.algebra)
        cone = mapping_cone(GMComplexMap(c, z, {}))
        assert cone.cohomology_dims() == shift(c, 1).cohomology_dims()


def test_is_quasi_iso(algebras):
    alg = algebras[1]
    q = free_module(alg)
    c = single_term_complex(q)
    assert is_quasi_iso(identity_map(c))
    z = zero_complex(alg)
    assert not is_quasi_iso(GMComplexMap(z, c, {}))


def test_cone_of_truncation_inclusion_vs_quotient(algebras):
    # 0 → tgt_le(k) → V → gt_ge(k+1) → 0; cone of the inclusion ≃ the quotient
    for c in random_complexes(algebras, n_per_alg=2, seed=8):
        for k in (-1, 0, 1):
            sub, incl = tgt_le_map(k, c)
            quot, _ = gt_ge_map(k + 1, c)
            cone = mapping_cone(incl)
            assert cone.cohomology_dims() == quot.cohomology_dims()


# ---------------------------------------------------------------------------
# gradual truncations


def test_gt_le_zero_above(algebras):
    alg = algebras[1]
    a = free_module(alg)
    c = single_term_complex(a, 5)  # total degrees 5 and 4
    assert gt_le(3, c).cohomology_dims() == {}
    assert gt_le(3, c).total_dim() == 0


def test_gt_ge_of_shifted_free_on_ray(p1):
    alg = ConeAlgebra(p1, p1.cone_by_rays({0}))
    c = shift(single_term_complex(free_module(alg)), -1)  # A(σ) in degree 1
    t = gt_ge(1, c)
    assert t.bidegree_dims() == {(1, 0): 1}


def test_truncation_support_identities(algebras):
    for c in random_complexes(algebras, n_per_alg=2, seed=9):
        h = c.cohomology_dims()
        for k in range(-3, 4):
            lo = gt_le(k, c)
            lo.validate()
            assert lo.cohomology_dims() == {
                (p, q): v for (p, q), v in h.items() if p + q <= k
            }
            hi = gt_ge(k, c)
            hi.validate()
            assert hi.cohomology_dims() == {
                (p, q): v for (p, q), v in h.items() if p + q >= k
            }


def test_truncation_exact_sequence_dims(algebras):
    for c in random_complexes(algebras, n_per_alg=2, seed=10):
        for k in (-2, 0, 2):
            sub = tgt_le(k, c)
            quot = gt_ge(k + 1, c)
            full = c.bidegree_dims()
            for key in set(full) | set(sub.bidegree_dims()) | set(quot.bidegree_dims()):
                assert sub.bidegree_dims().get(key, 0) + quot.bidegree_dims().get(key, 0) \
                    == full.get(key, 0)


def test_thick_truncations_quasi_iso_to_plain(algebras):
    for c in random_complexes(algebras, n_per_alg=2, seed=12):
        for k in (-1, 0, 1):
            # natural inclusion gt_le(k) ↪ tgt_le(k)
            g, ig = gt_le_map(k, c)
            t, it = tgt_le_map(k, c)
            mats = {}
            for i in g.degrees():
                m = {}
                for j in g.term(i).degrees():
                    m[j] = solve(it.at(i).mat(j), ig.at(i).mat(j))
                mats[i] = ExtModuleHom(g.term(i), t.term(i), m)
            f = GMComplexMap(g, t, mats).validate()
            assert is_quasi_iso(f)
            # natural surjection tgt_ge(k) ↠ gt_ge(k)
            tq, pt = tgt_ge_map(k, c)
            gq, pg = gt_ge_map(k, c)
            mats = {}
            for i in gq.degrees():
                m = {}
                for j in gq.term(i).degrees():
                    a = pt.at(i).mat(j).transpose()
                    b = pg.at(i).mat(j).transpose()
                    m[j] = solve(a, b).transpose()
                mats[i] = ExtModuleHom(tq.term(i), gq.term(i), m)
            f = GMComplexMap(tq, gq, mats).validate()
            assert is_quasi_iso(f)


# ---------------------------------------------------------------------------
# duality


def test_dual_of_point_complex(algebras):
    alg = algebras[0]
    c = single_term_complex(free_module(alg))
    d = dual_complex(c)
    assert d.bidegree_dims() == {(0, 0): 1}
    assert d.cohomology_dims() == {(0, 0): 1}


def test_dual_complex_dimension_identity(algebras):
    for c in random_complexes(algebras, n_per_alg=3, seed=13):
        d = dual_complex(c)
        d.validate()
        k = c.algebra.k
        hd = d.cohomology_dims()
        h = c.cohomology_dims()
        assert hd == {(-p, -k - q): v for (p, q), v in h.items()}


def test_double_dual_cohomology(algebras):
    for c in random_complexes(algebras, n_per_alg=2, seed=14):
        dd = dual_complex(dual_complex(c))
        assert dd.cohomology_dims() == c.cohomology_dims()


def test_acyclicity_equivalence_of_truncated_duals(algebras):
    for c in random_complexes(algebras, n_per_alg=2, seed=15):
        k_alg = c.algebra.k
        d = dual_complex(c)
        r = c.algebra.fan.rank
        for k in range(-r - 2, r + 3):
            lhs = gt_le(k, d).is_acyclic()
            rhs = gt_ge(-k_alg - k, c).is_acyclic()
            assert lhs == rhs


def test_euler_characteristic_per_internal_degree(algebras):
    for c in random_complexes(algebras, n_per_alg=2, seed=16):
        dims = c.bidegree_dims()
        h = c.cohomology_dims()
        qs = {q for (_, q) in dims} | {q for (_, q) in h}
        for q in qs:
            chi_dims = sum((-1) ** p * v for (p, qq), v in dims.items() if qq == q)
            chi_h = sum((-1) ** p * v for (p, qq), v in h.items() if qq == q)
            assert chi_dims == chi_h
