"""Finite complexes of graded exterior-algebra modules.

A complex carries a cohomological degree i on top of the internal module
degree j; cohomology is computed per bidegree (p, q).  Besides shifts,
mapping cones and duals, this module implements the four *gradual*
truncations, which cut along the total degree i + j rather than along i:
the boundary slot keeps a kernel, image, cokernel or coimage respectively,
so the result is again a genuine (sub/quotient) complex of modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .exactq import QMatrix, decompose, extend_basis, rank, solve
from .extalg import (
    ConeAlgebra,
    ExtModule,
    ExtModuleHom,
    direct_sum,
    dualize,
    dualize_hom,
    zero_module,
)


class SourceTargetMismatch(ValueError):
    pass


class GMComplex:
    """Finite complex of ExtModules over one algebra."""

    __slots__ = ("algebra", "terms", "diffs")

    def __init__(self, algebra: ConeAlgebra, terms: dict, diffs: dict):
        self.algebra = algebra
        self.terms = {int(i): t for i, t in terms.items() if t.total_dim()}
        self.diffs = {}
        for i, f in diffs.items():
            i = int(i)
            if i in self.terms and (i + 1) in self.terms and f.mats:
                self.diffs[i] = f

    def term(self, i: int) -> ExtModule:
        t = self.terms.get(i)
        return t if t is not None else zero_module(self.algebra)

    def d(self, i: int) -> ExtModuleHom:
        f = self.diffs.get(i)
        if f is not None:
            return f
        return ExtModuleHom(self.term(i), self.term(i + 1), {})

    def degrees(self) -> list:
        return sorted(self.terms)

    def total_dim(self) -> int:
        return sum(t.total_dim() for t in self.terms.values())

    def bidegree_dims(self) -> dict:
        return {
            (i, j): t.dim(j)
            for i, t in sorted(self.terms.items())
            for j in t.degrees()
        }

    def validate(self) -> "GMComplex":
        for t in self.terms.values():
            t.validate()
        for i in self.degrees():
            self.d(i).validate()
            if (i + 1) in self.terms or (i + 2) in self.terms:
                comp = self.d(i + 1).compose(self.d(i))
                for j, m in comp.mats.items():
                    if not m.is_zero():
                        raise ValueError(f"d² ≠ 0 at degree {i}, module degree {j}")
        return self

    def cohomology_dims(self) -> dict:
        """Table (p, q) → dim H^p(complex)_q, nonzero entries only."""
        out = {}
        degs = self.degrees()
        if not degs:
            return out
        qs = sorted({j for t in self.terms.values() for j in t.degrees()})
        for p in range(degs[0], degs[-1] + 1):
            for q in qs:
                n = self.term(p).dim(q)
                if not n and not self.term(p - 1).dim(q):
                    continue
                r_out = rank(self.d(p).mat(q))
                r_in = rank(self.d(p - 1).mat(q))
                h = n - r_out - r_in
                if h:
                    out[(p, q)] = h
        return out

    def is_acyclic(self) -> bool:
        return not self.cohomology_dims()

    def __repr__(self):
        return f"GMComplex(degrees={self.degrees()})"


@dataclass
class GMComplexMap:
    """Degree-zero map of complexes over one algebra."""

    source: GMComplex
    target: GMComplex
    maps: dict  # i → ExtModuleHom

    def at(self, i: int) -> ExtModuleHom:
        f = self.maps.get(i)
        if f is not None:
            return f
        return ExtModuleHom(self.source.term(i), self.target.term(i), {})

    def validate(self) -> "GMComplexMap":
        if self.source.algebra != self.target.algebra:
            raise SourceTargetMismatch("maps must stay over one algebra")
        for i in set(self.source.degrees()) | set(self.target.degrees()):
            self.at(i).validate()
            lhs = self.target.d(i).compose(self.at(i))
            rhs = self.at(i + 1).compose(self.source.d(i))
            for j in set(lhs.mats) | set(rhs.mats):
                if lhs.mat(j) != rhs.mat(j):
                    raise ValueError(f"map does not commute with d at degree {i}")
        return self


def shift(c: GMComplex, n: int) -> GMComplex:
    """c[n]^i = c^{i+n} with differential scaled by (−1)^n."""
    sign = 1 if n % 2 == 0 else -1
    terms = {i - n: t for i, t in c.terms.items()}
    diffs = {i - n: f.scale(sign) for i, f in c.diffs.items()}
    return GMComplex(c.algebra, terms, diffs)


def mapping_cone(f: GMComplexMap) -> GMComplex:
    """cone(f)^i = L^{i+1} ⊕ K^i for f: L → K, d = [[−d_L, 0], [f, d_K]]."""
    if f.source.algebra != f.target.algebra:
        raise SourceTargetMismatch("cone of a map between different algebras")
    src, tgt = f.source, f.target
    degs = sorted(set(i - 1 for i in src.degrees()) | set(tgt.degrees()))
    sums = {}
    for i in degs:
        total, injs, projs = direct_sum([src.term(i + 1), tgt.term(i)])
        sums[i] = (total, injs, projs)
    terms = {i: s[0] for i, s in sums.items()}
    diffs = {}
    for i in degs:
        if i + 1 not in sums:
            continue
        total, injs, projs = sums[i]
        total2, injs2, _ = sums[i + 1]
        d = injs2[0].compose(src.d(i + 1).scale(-1)).compose(projs[0])
        d = d + injs2[1].compose(f.at(i + 1)).compose(projs[0])
        d = d + injs2[1].compose(tgt.d(i)).compose(projs[1])
        diffs[i] = d
    return GMComplex(src.algebra, terms, diffs)


def is_quasi_iso(f: GMComplexMap) -> bool:
    return mapping_cone(f).is_acyclic()


# ---------------------------------------------------------------------------
# gradual truncations


def _subcomplex_from_bases(c: GMComplex, bases: dict):
    """Subcomplex with basis columns bases[(i, j)] inside c^i_j.

    Bases must be closed under the module action and the differential;
    returns (complex, inclusion map).
    """
    terms = {}
    incls = {}
    k = c.algebra.k
    for i in c.degrees():
        t = c.term(i)
        dims = {}
        inc = {}
        for j in t.degrees():
            b = bases.get((i, j))
            if b is not None and b.cols:
                dims[j] = b.cols
                inc[j] = b
        actions = {}
        for t_gen in range(k):
            for j in dims:
                if not dims.get(j - 1):
                    continue
                actions[(t_gen, j)] = solve(inc[j - 1], t.act(t_gen, j) * inc[j])
        terms[i] = ExtModule(c.algebra, dims, actions)
        incls[i] = inc
    diffs = {}
    for i in c.degrees():
        if i + 1 not in terms:
            continue
        mats = {}
        for j in terms[i].degrees():
            if not terms[i + 1].dim(j):
                continue
            mats[j] = solve(incls[i + 1][j], c.d(i).mat(j) * incls[i][j])
        diffs[i] = ExtModuleHom(terms[i], terms[i + 1], mats)
    sub = GMComplex(c.algebra, terms, diffs)
    inclusion = GMComplexMap(sub, c, {
        i: ExtModuleHom(sub.term(i), c.term(i), incls[i])
        for i in sub.degrees()
    })
    return sub, inclusion


def _quotient_by_bases(c: GMComplex, subbases: dict):
    """Quotient of c by the subcomplex spanned by subbases; returns (complex, projection)."""
    terms = {}
    comps = {}
    projs = {}
    k = c.algebra.k
    for i in c.degrees():
        t = c.term(i)
        dims = {}
        comp_i = {}
        proj_i = {}
        for j in t.degrees():
            sub = subbases.get((i, j))
            if sub is None:
                sub = QMatrix.zeros(t.dim(j), 0)
            comp = extend_basis(sub, t.dim(j))
            if not comp.cols:
                continue
            fullb = sub.hstack(comp)
            inv = solve(fullb, QMatrix.identity(t.dim(j)))
            proj = QMatrix(comp.cols, t.dim(j),
                           [inv.data[sub.cols + r] for r in range(comp.cols)])
            dims[j] = comp.cols
            comp_i[j] = comp
            proj_i[j] = proj
        actions = {}
        for t_gen in range(k):
            for j in dims:
                if not dims.get(j - 1):
                    continue
                actions[(t_gen, j)] = proj_i[j - 1] * t.act(t_gen, j) * comp_i[j]
        terms[i] = ExtModule(c.algebra, dims, actions)
        comps[i] = comp_i
        projs[i] = proj_i
    diffs = {}
    for i in c.degrees():
        if i + 1 not in terms:
            continue
        mats = {}
        for j in terms[i].degrees():
            if not terms[i + 1].dim(j):
                continue
            mats[j] = projs[i + 1][j] * c.d(i).mat(j) * comps[i][j]
        diffs[i] = ExtModuleHom(terms[i], terms[i + 1], mats)
    quot = GMComplex(c.algebra, terms, diffs)
    projection = GMComplexMap(c, quot, {
        i: ExtModuleHom(c.term(i), quot.term(i), projs[i])
        for i in quot.degrees()
    })
    return quot, projection


def _kernel_basis(c: GMComplex, i: int, j: int) -> QMatrix:
    _, ker, _ = decompose(c.d(i).mat(j))
    return ker


def _image_basis(c: GMComplex, i: int, j: int) -> QMatrix:
    """Image of d^{i−1} inside c^i_j."""
    _, _, im = decompose(c.d(i - 1).mat(j))
    return im


def gt_le_map(k: int, c: GMComplex):
    """Gradual truncation below: full for i+j<k, Ker d at i+j=k, zero above."""
    bases = {}
    for i in c.degrees():
        t = c.term(i)
        for j in t.degrees():
            if i + j < k:
                bases[(i, j)] = QMatrix.identity(t.dim(j))
            elif i + j == k:
                bases[(i, j)] = _kernel_basis(c, i, j)
    return _subcomplex_from_bases(c, bases)


def tgt_le_map(k: int, c: GMComplex):
    """Thick variant: full for i+j≤k, Im d^{i−1} at i+j=k+1, zero above."""
    bases = {}
    for i in c.degrees():
        t = c.term(i)
        for j in t.degrees():
            if i + j <= k:
                bases[(i, j)] = QMatrix.identity(t.dim(j))
            elif i + j == k + 1:
                bases[(i, j)] = _image_basis(c, i, j)
    return _subcomplex_from_bases(c, bases)


def gt_ge_map(k: int, c: GMComplex):
    """Gradual truncation above: full for i+j>k, Coker d^{i−1} at i+j=k, zero below."""
    sub = {}
    for i in c.degrees():
        t = c.term(i)
        for j in t.degrees():
            if i + j < k:
                sub[(i, j)] = QMatrix.identity(t.dim(j))
            elif i + j == k:
                sub[(i, j)] = _image_basis(c, i, j)
    return _quotient_by_bases(c, sub)


def tgt_ge_map(k: int, c: GMComplex):
    """Thick variant: full for i+j≥k, coimage of d at i+j=k−1, zero below."""
    sub = {}
    for i in c.degrees():
        t = c.term(i)
        for j in t.degrees():
            if i + j < k - 1:
                sub[(i, j)] = QMatrix.identity(t.dim(j))
            elif i + j == k - 1:
                sub[(i, j)] = _kernel_basis(c, i, j)
    return _quotient_by_bases(c, sub)


def gt_le(k: int, c: GMComplex) -> GMComplex:
    return gt_le_map(k, c)[0]


def gt_ge(k: int, c: GMComplex) -> GMComplex:
    return gt_ge_map(k, c)[0]


def tgt_le(k: int, c: GMComplex) -> GMComplex:
    return tgt_le_map(k, c)[0]


def tgt_ge(k: int, c: GMComplex) -> GMComplex:
    return tgt_ge_map(k, c)[0]


# ---------------------------------------------------------------------------
# duality


def dual_complex(c: GMComplex) -> GMComplex:
    """Term-wise dual: D^i = dual(c^{−i}), d_D^i = (−1)^{i+1}·dual(d^{−i−1})."""
    terms = {-i: dualize(t) for i, t in c.terms.items()}
    diffs = {}
    for i in terms:
        if (i + 1) not in terms:
            continue
        f = c.d(-i - 1)  # c^{−i−1} → c^{−i}
        df = dualize_hom(f, dual_target=terms[i], dual_source=terms[i + 1])
        sign = 1 if (i + 1) % 2 == 0 else -1
        diffs[i] = df.scale(sign)
    return GMComplex(c.algebra, terms, diffs)


# ---------------------------------------------------------------------------
# small constructors


def single_term_complex(module: ExtModule, i: int = 0) -> GMComplex:
    return GMComplex(module.algebra, {i: module}, {})


def zero_complex(algebra: ConeAlgebra) -> GMComplex:
    return GMComplex(algebra, {}, {})
