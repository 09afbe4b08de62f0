"""Tests for fan loading, face lattices, incidence signs and E-complexes."""

import itertools

import pytest

from toric_ic.exactq import QMatrix, decompose, hnf_lattice_basis, rank, solve
from toric_ic.fan import (
    ALPHA,
    DuplicateCone,
    NonPrimitiveRay,
    Not1Complete,
    NotAFan,
    NotFacet,
    NotLocallyStarClosed,
    NotStronglyConvex,
    e_complex,
    fan_from_json,
    fan_to_json,
    incidence_sign,
    is_acyclic_z,
    load_fan,
)


# ---------------------------------------------------------------------------
# brute-force face oracle: all subsets of rays lying on a supporting hyperplane


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def brute_force_facesets(fan, cid):
    """Face lattice of a cone as ray-index sets, via supporting hyperplanes."""
    cone = fan.cone(cid)
    idx = sorted(cone.ray_ids)
    if not idx:
        return {frozenset()}
    gen = QMatrix.from_cols([fan.rays[i] for i in idx], nrows=fan.rank)
    basis = hnf_lattice_basis(gen)
    d = basis.cols
    coords = solve(basis, gen)
    rc = [coords.col(j) for j in range(coords.cols)]
    facets = set()
    for size in range(0, len(idx) + 1):
        for sub in itertools.combinations(range(len(idx)), size):
            m = QMatrix.from_cols([rc[j] for j in sub], nrows=d)
            _, ker, _ = decompose(m.transpose())
            if ker.cols != 1:
                continue
            a = ker.col(0)
            vals = [_dot(a, v) for v in rc]
            if all(v <= 0 for v in vals):
                vals = [-v for v in vals]
            if not all(v >= 0 for v in vals):
                continue
            tight = frozenset(idx[j] for j, v in enumerate(vals) if v == 0)
            if tight != frozenset(idx):
                facets.add(tight)
    faces = set(facets) | {frozenset(idx)}
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(faces), 2):
            if a & b not in faces:
                faces.add(a & b)
                changed = True
    return faces


# ---------------------------------------------------------------------------
# loading and face lattices


def test_p1_fan(p1):
    assert len(p1.cones) == 3
    assert p1.is_complete
    assert p1.cones_of_dim(0) == [p1.zero_cone_id()]
    assert len(p1.cones_of_dim(1)) == 2


def test_p2_fan(p2):
    assert len(p2.cones) == 7
    assert p2.is_complete
    assert len(p2.cones_of_dim(1)) == 3
    assert len(p2.cones_of_dim(2)) == 3
    assert len(p2.maximal_ids) == 3


def test_p1xp1_fan(p1xp1):
    assert len(p1xp1.cones) == 9
    assert p1xp1.is_complete


def test_octahedron_fan(octahedron):
    # 1 + 6 + 12 + 8
    assert len(octahedron.cones) == 27
    assert octahedron.is_complete
    assert len(octahedron.cones_of_dim(2)) == 12


def test_cube_fan_non_simplicial(cube):
    # 1 + 8 + 12 + 6
    assert len(cube.cones) == 27
    assert cube.is_complete
    assert len(cube.cones_of_dim(1)) == 8
    assert len(cube.cones_of_dim(2)) == 12
    assert len(cube.cones_of_dim(3)) == 6
    for cid in cube.cones_of_dim(3):
        assert len(cube.cone(cid).ray_ids) == 4  # square cones


def test_face_lattice_matches_brute_force(all_fans):
    for fan in all_fans.values():
        for cid in fan.maximal_ids:
            dd_faces = {fan.cone(f).ray_ids for f in fan.faces(cid)}
            assert dd_faces == brute_force_facesets(fan, cid)


def test_incomplete_fan():
    fan = load_fan(2, [[1, 0], [0, 1]], [[0, 1]])
    assert not fan.is_complete
    assert len(fan.cones) == 4


def test_nsigma_basis_full_dim_is_identity(p2):
    for cid in p2.cones_of_dim(2):
        assert p2.cone(cid).nsigma_basis == QMatrix.identity(2)


def test_cone_membership(p2):
    quad = p2.cone_by_rays({0, 1})  # cone spanned by e1, e2
    c = p2.cone(quad)
    assert c.contains((1, 1))
    assert c.contains((0, 0))
    assert not c.contains((-1, 0))


# ---------------------------------------------------------------------------
# validation errors


def test_non_primitive_ray():
    with pytest.raises(NonPrimitiveRay):
        load_fan(2, [[2, 0], [0, 1]], [[0, 1]])


def test_not_strongly_convex():
    with pytest.raises(NotStronglyConvex):
        load_fan(2, [[1, 0], [-1, 0]], [[0, 1]])


def test_duplicate_cone():
    with pytest.raises(DuplicateCone):
        load_fan(1, [[1], [-1]], [[0], [0]])


def test_not_a_fan_overlap():
    with pytest.raises(NotAFan):
        load_fan(
            2,
            [[1, 0], [1, 2], [1, 1], [0, 1]],
            [[0, 1], [2, 3]],
        )


def test_not_a_fan_redundant_ray():
    with pytest.raises(NotAFan):
        load_fan(2, [[1, 0], [1, 1], [0, 1]], [[0, 1, 2]])


# ---------------------------------------------------------------------------
# incidence signs


def test_sign_zero_to_positive_ray(p1):
    zero = p1.zero_cone_id()
    plus = p1.cone_by_rays({0})
    minus = p1.cone_by_rays({1})
    assert incidence_sign(p1, zero, plus) == 1
    assert incidence_sign(p1, zero, minus) == -1


def test_sign_not_facet(p2):
    zero = p2.zero_cone_id()
    top = p2.cones_of_dim(2)[0]
    with pytest.raises(NotFacet):
        incidence_sign(p2, zero, top)


def test_codim2_sign_relation(all_fans):
    for fan in all_fans.values():
        for sigma in (c.id for c in fan.cones):
            for rho in fan.star(sigma):
                if fan.dim_of(rho) != fan.dim_of(sigma) + 2:
                    continue
                mids = [
                    m for m in fan.faces(rho)
                    if fan.is_face(sigma, m)
                    and fan.dim_of(m) == fan.dim_of(sigma) + 1
                ]
                assert len(mids) == 2
                total = sum(
                    incidence_sign(fan, sigma, m) * incidence_sign(fan, m, rho)
                    for m in mids
                )
                assert total == 0


def test_codim2_sign_relation_augmented(all_fans):
    for fan in all_fans.values():
        if not fan.is_complete:
            continue
        for w in fan.cones_of_dim(fan.rank - 1):
            tops = [t for t in fan.cones_of_dim(fan.rank) if fan.is_face(w, t)]
            assert len(tops) == 2
            total = sum(
                incidence_sign(fan, w, t) * incidence_sign(fan, t, ALPHA)
                for t in tops
            )
            assert total == 0


def test_alpha_sign_requires_full_dim(p2):
    with pytest.raises(NotFacet):
        incidence_sign(p2, p2.zero_cone_id(), ALPHA)


# ---------------------------------------------------------------------------
# E-complexes


def test_full_face_complex_acyclic(p2):
    top = p2.cones_of_dim(2)[0]
    cx = e_complex(p2, p2.faces(top))
    assert is_acyclic_z(cx)


def test_single_term_complex(p2):
    top = p2.cones_of_dim(2)[0]
    cx = e_complex(p2, [top])
    assert cx.cohomology_dims() == {2: 1}


def test_p1_top_slice_has_h1(p1):
    phi = p1.cones_of_dim(0) + p1.cones_of_dim(1)
    cx = e_complex(p1, phi)
    # d: Z -> Z² is (1, -1)ᵗ up to sign; H¹ has rank 1, killed only by augmentation
    assert cx.cohomology_dims() == {1: 1}
    aug = e_complex(p1, phi, mode="augmented")
    assert is_acyclic_z(aug)


def test_augmented_stars_acyclic(all_fans):
    for fan in all_fans.values():
        if not fan.is_complete:
            continue
        for sigma in (c.id for c in fan.cones):
            cx = e_complex(fan, fan.star(sigma), mode="augmented")
            assert is_acyclic_z(cx), f"star of {sigma} not acyclic"


def test_not_locally_star_closed(p2):
    zero = p2.zero_cone_id()
    top = p2.cones_of_dim(2)[0]
    with pytest.raises(NotLocallyStarClosed):
        e_complex(p2, [zero, top])


def test_not_1_complete():
    fan = load_fan(2, [[1, 0], [0, 1]], [[0, 1]])
    with pytest.raises(Not1Complete):
        e_complex(fan, [c.id for c in fan.cones], mode="augmented")


# ---------------------------------------------------------------------------
# JSON round trip


def test_fan_json_roundtrip(p2):
    obj = fan_to_json(p2)
    fan2 = fan_from_json(obj)
    assert fan_to_json(fan2) == obj
    assert len(fan2.cones) == len(p2.cones)
