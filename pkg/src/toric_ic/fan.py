"""Fans of strongly convex rational polyhedral cones.

Face lattices are computed by the incremental double-description method
(facet enumeration on each maximal cone, recursing on facets), with all
arithmetic exact.  Each cone carries a canonical lattice basis of the
sublattice N(σ) = N ∩ (σ + (−σ)); the ordered wedge of that basis is the
fixed generator of the rank-one determinant lattice of σ, which makes the
incidence signs between a cone and its facets well-defined integers ±1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .exactq import (
    QMatrix,
    decompose,
    ext_gcd_vector,
    hnf_lattice_basis,
    integer_kernel,
    primitive,
    rank,
    solve,
)

#: id of the imaginary top cone adjoined when a complete fan is augmented.
ALPHA = -1


class FanError(ValueError):
    """Base class for fan validation failures."""


class NonPrimitiveRay(FanError):
    pass


class NotStronglyConvex(FanError):
    pass


class NotAFan(FanError):
    pass


class DuplicateCone(FanError):
    pass


class NotFacet(FanError):
    pass


class NotLocallyStarClosed(FanError):
    pass


class Not1Complete(FanError):
    pass


# ---------------------------------------------------------------------------
# double description


def _dot(a, v) -> Fraction:
    return sum(x * y for x, y in zip(a, v))


def _primitive_vec(v) -> tuple:
    lcm = 1
    fv = [Fraction(x) for x in v]
    for x in fv:
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    return primitive([x * lcm for x in fv])


def dd_extreme_rays(constraints: Sequence[Sequence], dim: int):
    """Extreme rays and lineality space of {y in Q^dim : a·y >= 0 for all a}.

    Incremental double description: constraints are imposed one at a time,
    first shrinking the lineality space, then splitting the ray list with the
    algebraic (rank-based) adjacency test.  Returns (lineality_basis, rays)
    as sorted lists of primitive integer tuples.
    """
    lin = [
        tuple(Fraction(1 if i == j else 0) for i in range(dim))
        for j in range(dim)
    ]
    rays: list = []
    processed: list = []
    for a in constraints:
        a = tuple(Fraction(x) for x in a)
        if all(x == 0 for x in a):
            continue
        piv = None
        for idx, l in enumerate(lin):
            if _dot(a, l) != 0:
                piv = idx
                break
        if piv is not None:
            c = _dot(a, lin[piv])
            l0 = tuple(x / c for x in lin[piv])
            lin = [
                tuple(m[i] - _dot(a, m) * l0[i] for i in range(dim))
                for k, m in enumerate(lin)
                if k != piv
            ]
            rays = [
                tuple(v[i] - _dot(a, v) * l0[i] for i in range(dim))
                for v in rays
            ]
            rays.append(l0)
        else:
            plus, zero, minus = [], [], []
            for v in rays:
                s = _dot(a, v)
                (plus if s > 0 else zero if s == 0 else minus).append(v)
            new_rays = plus + zero
            target = dim - len(lin) - 2
            for p, m in itertools.product(plus, minus):
                tight = [
                    c for c in processed
                    if _dot(c, p) == 0 and _dot(c, m) == 0
                ]
                r = rank(QMatrix.from_rows(tight)) if tight else 0
                if r == target:
                    sp, sm = _dot(a, p), _dot(a, m)
                    new_rays.append(
                        tuple(sp * m[i] - sm * p[i] for i in range(dim))
                    )
            rays = new_rays
        processed.append(a)
        # canonicalize and dedupe
        seen = {}
        for v in rays:
            pv = _primitive_vec(v)
            seen.setdefault(pv, None)
        rays = [tuple(Fraction(x) for x in pv) for pv in seen]
    lin_out = sorted(_primitive_vec(l) for l in lin)
    rays_out = sorted(_primitive_vec(v) for v in rays)
    return lin_out, rays_out


# ---------------------------------------------------------------------------
# cones and fans


@dataclass(frozen=True)
class Cone:
    """A face of the fan, identified by the set of fan rays it contains."""

    id: int
    ray_ids: frozenset
    dim: int
    #: canonical lattice basis of N(σ), columns of an ambient-rank matrix
    nsigma_basis: QMatrix
    #: ray sets of the facets (codimension-one faces)
    facet_raysets: tuple
    #: ambient functionals nonnegative on the cone, tight on its facets
    facet_normals: tuple
    #: ambient functionals vanishing on the span of the cone
    span_equations: tuple

    def contains(self, vec) -> bool:
        v = tuple(Fraction(x) for x in vec)
        return all(_dot(e, v) == 0 for e in self.span_equations) and all(
            _dot(n, v) >= 0 for n in self.facet_normals
        )


class Fan:
    """An immutable finite fan with a fully computed face lattice."""

    def __init__(self, rank_: int, rays: tuple, cones: tuple, maximal_ids: tuple,
                 listed_maximal: tuple, is_complete: bool):
        self.rank = rank_
        self.rays = rays
        self.cones = cones
        self.maximal_ids = maximal_ids
        self.listed_maximal = listed_maximal
        self.is_complete = is_complete
        self._by_rayset = {c.ray_ids: c.id for c in cones}
        self._by_dim: dict = {}
        for c in cones:
            self._by_dim.setdefault(c.dim, []).append(c.id)
        for d in self._by_dim:
            self._by_dim[d].sort()

    def cone(self, cid: int) -> Cone:
        return self.cones[cid]

    def cone_by_rays(self, ray_ids: Iterable[int]) -> int | None:
        return self._by_rayset.get(frozenset(ray_ids))

    def cones_of_dim(self, d: int) -> list:
        return list(self._by_dim.get(d, []))

    def is_face(self, sid: int, rid: int) -> bool:
        """σ ≺ ρ (reflexive): after fan validation this is the subset test."""
        if rid == ALPHA:
            return True
        if sid == ALPHA:
            return False
        return self.cones[sid].ray_ids <= self.cones[rid].ray_ids

    def dim_of(self, cid: int) -> int:
        return self.rank + 1 if cid == ALPHA else self.cones[cid].dim

    def faces(self, cid: int) -> list:
        """All faces of cid (including itself and the zero cone), sorted."""
        if cid == ALPHA:
            return sorted(c.id for c in self.cones)
        rs = self.cones[cid].ray_ids
        return sorted(c.id for c in self.cones if c.ray_ids <= rs)

    def star(self, cid: int) -> list:
        """All cones having cid as a face, sorted."""
        rs = self.cones[cid].ray_ids
        return sorted(c.id for c in self.cones if rs <= c.ray_ids)

    def zero_cone_id(self) -> int:
        return self._by_rayset[frozenset()]


def _build_cone_data(rank_: int, rays: tuple, ray_ids: frozenset, cache: dict):
    """Recursively compute the face data of cone(rays[i] for i in ray_ids)."""
    key = frozenset(ray_ids)
    if key in cache:
        return cache[key]
    idx = sorted(key)
    gen = QMatrix.from_cols([rays[i] for i in idx], nrows=rank_)
    d = rank(gen) if idx else 0
    basis = hnf_lattice_basis(gen) if idx else QMatrix.zeros(rank_, 0)
    # functionals vanishing on the span
    _, lker, _ = decompose(basis.transpose())
    span_eqs = tuple(lker.col(j) for j in range(lker.cols))
    if d == 0:
        cache[key] = {
            "ray_ids": key, "dim": 0, "basis": basis,
            "facet_raysets": (), "facet_normals": (), "span_equations": span_eqs,
        }
        return cache[key]
    # coordinates of the generating rays in the span basis
    coords = solve(basis, gen)
    ray_coords = [coords.col(j) for j in range(coords.cols)]
    lin, dual_rays = dd_extreme_rays(ray_coords, d)
    if lin:
        raise NotAFan(f"rays of cone {sorted(key)} do not span their lattice saturation")
    if not dual_rays or rank(QMatrix.from_cols(list(dual_rays), nrows=d)) < d:
        raise NotStronglyConvex(f"cone {sorted(key)} contains a line")
    facet_raysets = []
    facet_normals = []
    for f in dual_rays:
        tight = frozenset(
            idx[j] for j, rc in enumerate(ray_coords) if _dot(f, rc) == 0
        )
        facet_raysets.append(tight)
        # pull the span-coordinate functional back to an ambient functional
        amb = solve(basis.transpose(), QMatrix.from_cols([f], nrows=d))
        facet_normals.append(amb.col(0))
    # every listed ray must be an extreme ray of the cone
    for j, rc in enumerate(ray_coords):
        tight = [f for f in dual_rays if _dot(f, rc) == 0]
        r = rank(QMatrix.from_rows(tight)) if tight else 0
        if r != d - 1:
            raise NotAFan(f"ray {idx[j]} is not an extreme ray of cone {sorted(key)}")
    pairs = sorted(zip(facet_raysets, facet_normals), key=lambda p: sorted(p[0]))
    cache[key] = {
        "ray_ids": key, "dim": d, "basis": basis,
        "facet_raysets": tuple(p[0] for p in pairs),
        "facet_normals": tuple(p[1] for p in pairs),
        "span_equations": span_eqs,
    }
    for fr in facet_raysets:
        _build_cone_data(rank_, rays, fr, cache)
    return cache[key]


def load_fan(rank: int, rays: Sequence[Sequence[int]], maximal_cones: Sequence[Iterable[int]]) -> Fan:
    """Build and fully validate a fan from its rays and maximal cones.

    Computes the complete face lattice, checks the fan axioms (pairwise
    intersections of cones are common faces) and the completeness flag.
    """
    rank_ = int(rank)
    rays = tuple(tuple(int(x) for x in v) for v in rays)
    for v in rays:
        if len(v) != rank_:
            raise FanError(f"ray {v} does not have length {rank_}")
        if all(x == 0 for x in v):
            raise NonPrimitiveRay(f"zero vector listed as a ray")
        if primitive(v) != v:
            raise NonPrimitiveRay(f"ray {v} is not primitive")
    if len(set(rays)) != len(rays):
        raise DuplicateCone("duplicate ray vectors")
    max_sets = []
    for spec in maximal_cones:
        s = frozenset(int(i) for i in spec)
        if not all(0 <= i < len(rays) for i in s):
            raise FanError(f"ray index out of range in cone {sorted(s)}")
        if s in max_sets:
            raise DuplicateCone(f"maximal cone {sorted(s)} listed twice")
        max_sets.append(s)
    cache: dict = {}
    for s in max_sets:
        _build_cone_data(rank_, rays, s, cache)
    _build_cone_data(rank_, rays, frozenset(), cache)  # zero cone always present

    order = sorted(cache, key=lambda k: (cache[k]["dim"], tuple(sorted(k))))
    ids = {k: i for i, k in enumerate(order)}
    cones = tuple(
        Cone(
            id=ids[k],
            ray_ids=k,
            dim=cache[k]["dim"],
            nsigma_basis=cache[k]["basis"],
            facet_raysets=cache[k]["facet_raysets"],
            facet_normals=cache[k]["facet_normals"],
            span_equations=cache[k]["span_equations"],
        )
        for k in order
    )
    ray_index = {rays[i]: i for i in range(len(rays))}

    # fan axioms: the intersection of two maximal cones is a common face
    for sa, sb in itertools.combinations(max_sets, 2):
        ca, cb = cache[sa], cache[sb]
        constraints = []
        for eqs in (ca["span_equations"], cb["span_equations"]):
            for e in eqs:
                constraints.append(e)
                constraints.append(tuple(-x for x in e))
        constraints.extend(ca["facet_normals"])
        constraints.extend(cb["facet_normals"])
        lin, ext = dd_extreme_rays(constraints, rank_)
        if lin:
            raise NotAFan(f"intersection of cones {sorted(sa)} and {sorted(sb)} contains a line")
        inter_ids = set()
        for v in ext:
            vi = ray_index.get(tuple(int(x) for x in v))
            if vi is None:
                raise NotAFan(
                    f"intersection of cones {sorted(sa)} and {sorted(sb)} has extreme ray {v} "
                    "which is not a ray of the fan"
                )
            inter_ids.add(vi)
        fs = frozenset(inter_ids)
        if fs not in cache or not (fs <= sa and fs <= sb):
            raise NotAFan(
                f"intersection of cones {sorted(sa)} and {sorted(sb)} is not a common face"
            )

    maximal_ids = tuple(
        c.id for c in cones
        if not any(c.ray_ids < o.ray_ids for o in cones)
    )
    listed_maximal = tuple(sorted(ids[s] for s in max_sets))
    fan = Fan(rank_, rays, cones, maximal_ids, listed_maximal, False)
    fan.is_complete = _compute_is_complete(fan)
    return fan


def _compute_is_complete(fan: Fan) -> bool:
    r = fan.rank
    top = fan.cones_of_dim(r)
    if not top:
        return False
    walls = fan.cones_of_dim(r - 1)
    adjacency = {t: set() for t in top}
    for w in walls:
        hold = [t for t in top if fan.is_face(w, t)]
        if len(hold) != 2:
            return False
        adjacency[hold[0]].add(hold[1])
        adjacency[hold[1]].add(hold[0])
    # connectivity of the adjacency graph on top-dimensional cones
    seen = {top[0]}
    frontier = [top[0]]
    while frontier:
        t = frontier.pop()
        for u in adjacency[t]:
            if u not in seen:
                seen.add(u)
                frontier.append(u)
    return len(seen) == len(top)


def is_complete(fan: Fan) -> bool:
    return fan.is_complete


# ---------------------------------------------------------------------------
# JSON interchange


def fan_from_json(obj: dict) -> Fan:
    return load_fan(obj["rank"], obj["rays"], obj["maximal_cones"])


def fan_to_json(fan: Fan) -> dict:
    return {
        "rank": fan.rank,
        "rays": [list(v) for v in fan.rays],
        "maximal_cones": sorted(
            sorted(fan.cones[c].ray_ids) for c in fan.listed_maximal
        ),
    }


# ---------------------------------------------------------------------------
# incidence signs


def incidence_sign(fan: Fan, sid: int, tid: int) -> int:
    """Sign ε with a ∧ det_gen(σ) = ε · det_gen(τ) for a facet σ ≺ τ.

    The vector a is the representative in τ of the canonical generator of the
    rank-one quotient N(τ)/N(σ).
    """
    if tid == ALPHA:
        if fan.dim_of(sid) != fan.rank:
            raise NotFacet("only top-dimensional cones are facets of the augmented top")
        # N(τ) = N for a full-dimensional cone, and its canonical basis is the
        # standard one, so the identification with the ambient determinant is +1
        return 1
    sigma, tau = fan.cone(sid), fan.cone(tid)
    if not (sigma.ray_ids < tau.ray_ids and sigma.dim + 1 == tau.dim
            and sigma.ray_ids in tau.facet_raysets):
        raise NotFacet(f"cone {sid} is not a facet of cone {tid}")
    b_tau = tau.nsigma_basis
    c = solve(b_tau, sigma.nsigma_basis)  # coords of N(σ) basis inside N(τ)
    w_mat = integer_kernel(c.transpose())
    assert w_mat.cols == 1
    w = [int(x) for x in w_mat.col(0)]
    g, u = ext_gcd_vector(w)
    assert g == 1
    a = b_tau.mul_vec(u)
    # orient a toward the interior of τ: positive against the facet normal of
    # τ that vanishes on σ (this is well-defined modulo N(σ))
    facet_pos = tau.facet_raysets.index(sigma.ray_ids)
    n = tau.facet_normals[facet_pos]
    val = _dot(n, a)
    assert val != 0
    if val < 0:
        u = [-x for x in u]
    m = QMatrix.from_cols([u], nrows=tau.dim).hstack(c)
    from .exactq import det as _det

    eps = _det(m)
    assert eps in (1, -1)
    return int(eps)


# ---------------------------------------------------------------------------
# the integral complexes built from determinant lattices


@dataclass(frozen=True)
class ZComplex:
    """Cochain complex with one basis element per cone, graded by dimension."""

    degrees: tuple  # tuple of (degree, tuple of cone ids)
    diffs: tuple    # tuple of (degree, QMatrix mapping degree -> degree+1)

    def basis(self, i: int) -> tuple:
        for d, b in self.degrees:
            if d == i:
                return b
        return ()

    def diff(self, i: int) -> QMatrix:
        for d, m in self.diffs:
            if d == i:
                return m
        return QMatrix.zeros(len(self.basis(i + 1)), len(self.basis(i)))

    def cohomology_dims(self) -> dict:
        dims = {}
        degs = sorted(d for d, _ in self.degrees)
        for i in degs:
            n = len(self.basis(i))
            r_out = rank(self.diff(i)) if len(self.basis(i + 1)) else 0
            r_in = rank(self.diff(i - 1)) if len(self.basis(i - 1)) else 0
            h = n - r_out - r_in
            if h:
                dims[i] = h
        return dims


def _check_locally_star_closed(fan: Fan, phi: set):
    ids = sorted(phi - {ALPHA})
    closed = phi
    for sid in ids:
        for rid in ids:
            if sid != rid and fan.is_face(sid, rid):
                for mid in fan.faces(rid):
                    if fan.is_face(sid, mid) and mid not in closed:
                        raise NotLocallyStarClosed(
                            f"cone {mid} lies between members {sid} and {rid} but is absent"
                        )
        if ALPHA in phi and fan.dim_of(sid) == fan.rank:
            pass  # everything is a face of the augmented top


def e_complex(fan: Fan, cone_ids: Iterable[int], mode: str = "plain") -> ZComplex:
    """The complex with one determinant-lattice summand per cone of Φ.

    Coboundary entries are the incidence signs between facet pairs in Φ.
    In augmented mode an extra rank-one term is appended in degree rank+1,
    receiving every top-dimensional cone with coefficient +1; this requires
    every (rank−1)-cone of Φ to be shared by exactly two top cones of Φ.
    """
    phi = set(int(c) for c in cone_ids)
    _check_locally_star_closed(fan, phi)
    by_deg: dict = {}
    for cid in sorted(phi):
        by_deg.setdefault(fan.dim_of(cid), []).append(cid)
    r = fan.rank
    if mode == "augmented":
        top = by_deg.get(r, [])
        for w in by_deg.get(r - 1, []):
            n = sum(1 for t in top if fan.is_face(w, t))
            if n != 2:
                raise Not1Complete(
                    f"cone {w} is a facet of {n} top-dimensional cones of Φ, expected 2"
                )
        by_deg[r + 1] = [ALPHA]
    elif mode != "plain":
        raise ValueError(f"unknown mode {mode!r}")
    degrees = tuple(sorted((d, tuple(sorted(b))) for d, b in by_deg.items()))
    diffs = []
    degs = [d for d, _ in degrees]
    for d, b in degrees:
        if d + 1 not in degs:
            continue
        target = dict(degrees)[d + 1]
        rows = []
        for t in target:
            row = []
            for s in b:
                if t == ALPHA:
                    row.append(incidence_sign(fan, s, ALPHA))
                elif fan.is_face(s, t) and fan.cone(s).ray_ids in fan.cone(t).facet_raysets:
                    row.append(incidence_sign(fan, s, t))
                else:
                    row.append(0)
            rows.append(row)
        diffs.append((d, QMatrix.from_rows(rows) if rows else QMatrix.zeros(0, len(b))))
    cx = ZComplex(degrees=degrees, diffs=tuple(diffs))
    for d, _ in degrees:  # d∘d = 0 sanity check
        if d + 1 in degs and d + 2 in degs:
            assert (cx.diff(d + 1) * cx.diff(d)).is_zero(), f"d² ≠ 0 at degree {d}"
    return cx


def is_acyclic_z(c: ZComplex) -> bool:
    """True iff all cohomology of the complex vanishes over Q."""
    return not c.cohomology_dims()
