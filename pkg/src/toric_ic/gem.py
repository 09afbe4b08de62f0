"""Complexes of exterior modules spread over a fan, with mixing maps.

A fan-spread complex assigns to every cone σ a finite complex of modules
over the exterior algebra A(σ) of the cone's lattice, together with
*mixing maps* d(σ/τ): L(σ)^i → L(τ)^{i+1} for proper face pairs σ ≺ τ.
Each mixing map is linear over the smaller algebra A(σ), with the target
viewed over A(σ) by restriction.  The defining compatibility is the
interval sum rule: for every face pair ρ ≼ μ and every degree i,

    Σ_{σ, ρ ≼ σ ≼ μ}  d^{i+1}(σ/μ) ∘ d^i(ρ/σ)  =  0,

where d(σ/σ) is the internal differential of L(σ)•.

On top of this category the module implements the per-cone restriction
and section functors (i_star, i_shriek, i_circ, and gamma = i_star at
the augmented top), extension by zero across a maximal cone
(j_shriek_extend), cone-local gradual truncation (gt_pi_ge), a shallow
resolution together with its per-cone quasi-isomorphism
(shallow_resolve), and the two dualizing constructions (dualize_D and
dualize_Dhat_gamma).  All determinant-line twists are trivialized by
the canonical lattice bases of the cones, so they appear only as ±1
incidence signs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactq import QMatrix
from .extalg import (
    ConeAlgebra,
    ExtModule,
    ExtModuleHom,
    InductionMeta,
    _sign,
    direct_sum,
    dualize,
    dualize_hom,
    free_module,
    induce_dual_iso,
    induce_hom,
    induce_meta,
)
from .fan import ALPHA, Fan, incidence_sign
from .gmcx import GMComplex, GMComplexMap, dual_complex, gt_ge_map, mapping_cone, shift, single_term_complex, zero_complex


class ConeNotInFan(ValueError):
    pass


class NotMaximal(ValueError):
    pass


class FanNotComplete(ValueError):
    pass


# ---------------------------------------------------------------------------
# cross homs: maps over the smaller algebra of a face pair


class CrossHom:
    """Graded-degree-zero map V → W where V lives over A(σ), W over A(τ)
    with σ ≼ τ, and W is viewed over A(σ) by restriction."""

    __slots__ = ("source", "target", "mats")

    def __init__(self, source: ExtModule, target: ExtModule, mats: dict):
        self.source = source
        self.target = target
        self.mats = {}
        for j, m in mats.items():
            if m.rows != target.dim(j) or m.cols != source.dim(j):
                raise ValueError(f"cross-hom matrix at degree {j} has shape "
                                 f"{m.rows}x{m.cols}, expected "
                                 f"{target.dim(j)}x{source.dim(j)}")
            if m.rows and m.cols and not m.is_zero():
                self.mats[j] = m

    def mat(self, j: int) -> QMatrix:
        m = self.mats.get(j)
        if m is None:
            return QMatrix.zeros(self.target.dim(j), self.source.dim(j))
        return m

    def is_zero(self) -> bool:
        return not self.mats

    def validate(self) -> "CrossHom":
        src_alg = self.source.algebra
        tgt_alg = self.target.algebra
        fan = src_alg.fan
        if fan is not tgt_alg.fan:
            raise ValueError("cross hom between different fans")
        if not fan.is_face(src_alg.cone_id, tgt_alg.cone_id):
            raise ValueError("cross hom requires a face pair of cones")
        from .exactq import solve

        coords = solve(tgt_alg.basis, src_alg.basis)
        degs = set(self.source.dims) | set(self.target.dims)
        for t in range(src_alg.k):
            c = coords.col(t)
            for j in degs:
                lhs = self.mat(j - 1) * self.source.act(t, j)
                rhs = self.target.act_by_coords(c, j) * self.mat(j)
                if lhs != rhs:
                    raise ValueError(
                        f"cross hom not linear over generator {t} at degree {j}")
        return self

    def compose(self, other) -> "CrossHom":
        """self ∘ other; `other` may be a CrossHom or an ExtModuleHom."""
        degs = set(self.mats) | set(other.mats)
        return CrossHom(other.source, self.target,
                        {j: self.mat(j) * other.mat(j) for j in degs})

    def __add__(self, other) -> "CrossHom":
        degs = set(self.mats) | set(other.mats)
        return CrossHom(self.source, self.target,
                        {j: self.mat(j) + other.mat(j) for j in degs})

    def scale(self, c) -> "CrossHom":
        return CrossHom(self.source, self.target,
                        {j: m.scale(c) for j, m in self.mats.items()})

    def __repr__(self):
        return (f"CrossHom({self.source.algebra.cone_id}→"
                f"{self.target.algebra.cone_id}, degrees={sorted(self.mats)})")


def as_cross(f: ExtModuleHom) -> CrossHom:
    return CrossHom(f.source, f.target, dict(f.mats))


def as_hom(f: CrossHom) -> ExtModuleHom:
    """Reinterpret a cross hom whose endpoints share one algebra."""
    return ExtModuleHom(f.source, f.target, dict(f.mats))


def identity_cross(v: ExtModule) -> CrossHom:
    return CrossHom(v, v, {j: QMatrix.identity(d) for j, d in v.dims.items()})


def unit_inclusion(meta: InductionMeta) -> CrossHom:
    """The canonical inclusion v ↦ v⊗1 into an induced module."""
    v = meta.source
    mats = {}
    for j in v.degrees():
        entries = [[Fraction(0)] * v.dim(j) for _ in range(meta.module.dim(j))]
        for idx in range(v.dim(j)):
            _, pos = meta.index[(j, idx, ())]
            entries[pos][idx] = Fraction(1)
        mats[j] = QMatrix(meta.module.dim(j), v.dim(j), entries)
    return CrossHom(v, meta.module, mats)


def induce_cross(f, src_meta: InductionMeta, tgt_meta: InductionMeta) -> CrossHom:
    """Induce a cross map f: V → W to V_{A(ρ)} → W_{A(μ)} for ρ ≼ μ.

    src_meta is the induction of V to ρ, tgt_meta the induction of W to μ.
    On the standard basis the map is v⊗h_T ↦ (−1)^{deg(v)·|T|}·h_T·(f(v)⊗1),
    applying the complement generators h_T in decreasing order through the
    module structure of the target.
    """
    from .exactq import solve

    src = src_meta.module
    tgt = tgt_meta.module
    w = tgt_meta.source
    # complement generators of the source induction, in μ-coordinates
    if src_meta.m:
        h_mu = solve(tgt.algebra.basis, src.algebra.basis * src_meta.h)
    else:
        h_mu = None
    mats = {}
    for j, lst in src_meta.basis.items():
        if not tgt.dim(j):
            continue
        cols = []
        for (i, idx, mon) in lst:
            vec = [Fraction(0)] * tgt.dim(i)
            fm = f.mat(i)
            for w_idx in range(w.dim(i)):
                val = fm.entry(w_idx, idx)
                if val:
                    _, pos = tgt_meta.index[(i, w_idx, ())]
                    vec[pos] += val
            deg = i
            for t in sorted(mon, reverse=True):
                act = tgt.act_by_coords(h_mu.col(t), deg)
                vec = list(act.mul_vec(vec))
                deg -= 1
            s = _sign(i * len(mon))
            cols.append([s * x for x in vec])
        mats[j] = QMatrix.from_cols(cols, nrows=tgt.dim(j))
    return CrossHom(src, tgt, mats)


# ---------------------------------------------------------------------------
# fan-spread complexes


@dataclass
class GemReport:
    valid: bool
    violations: list = field(default_factory=list)


class GemComplex:
    """Per-cone complexes of exterior modules plus sparse mixing maps.

    `terms` maps cone id → GMComplex over that cone's algebra; `mixing`
    maps (σ, τ) for proper face pairs σ ≺ τ to {i: CrossHom L(σ)^i → L(τ)^{i+1}}.
    """

    __slots__ = ("fan", "terms", "mixing")

    def __init__(self, fan: Fan, terms: dict, mixing: dict | None = None):
        self.fan = fan
        self.terms = {int(s): c for s, c in terms.items() if c.total_dim()}
        self.mixing = {}
        for (sid, tid), by_i in (mixing or {}).items():
            if sid not in self.terms or tid not in self.terms:
                continue
            clean = {int(i): f for i, f in by_i.items() if not f.is_zero()}
            if clean:
                self.mixing[(sid, tid)] = clean

    def support(self) -> list:
        return sorted(self.terms)

    def component(self, sid: int) -> GMComplex:
        c = self.terms.get(sid)
        if c is not None:
            return c
        return zero_complex(ConeAlgebra(self.fan, sid))

    def mix(self, sid: int, tid: int, i: int) -> CrossHom:
        f = self.mixing.get((sid, tid), {}).get(i)
        if f is not None:
            return f
        return CrossHom(self.component(sid).term(i),
                        self.component(tid).term(i + 1), {})

    def total_dim(self) -> int:
        return sum(c.total_dim() for c in self.terms.values())

    def validate(self) -> GemReport:
        violations = []
        fan = self.fan
        for sid in self.support():
            if not (0 <= sid < len(fan.cones)):
                violations.append(("cone", sid, None, "cone id not in fan"))
                continue
            try:
                self.terms[sid].validate()
            except ValueError as e:
                violations.append(("component", sid, None, str(e)))
        for (sid, tid) in sorted(self.mixing):
            if sid == tid or not fan.is_face(sid, tid):
                violations.append(("mixing-pair", sid, tid, "not a proper face pair"))
                continue
            for i, f in sorted(self.mixing[(sid, tid)].items()):
                try:
                    if (f.source != self.component(sid).term(i)
                            or f.target != self.component(tid).term(i + 1)):
                        raise ValueError("mixing endpoints do not match the components")
                    f.validate()
                except ValueError as e:
                    violations.append(("mixing", sid, tid, f"degree {i}: {e}"))
        if violations:
            return GemReport(False, violations)
        supp = self.support()
        for rid in supp:
            for mid in supp:
                if rid == mid or not fan.is_face(rid, mid):
                    continue
                between = [s for s in supp
                           if s not in (rid, mid)
                           and fan.is_face(rid, s) and fan.is_face(s, mid)]
                for i in self.component(rid).degrees():
                    src = self.component(rid).term(i)
                    tgt = self.component(mid).term(i + 2)
                    if not src.total_dim() or not tgt.total_dim():
                        continue
                    acc = CrossHom(src, tgt, {})
                    acc = acc + self.mix(rid, mid, i + 1).compose(self.component(rid).d(i))
                    acc = acc + as_cross(self.component(mid).d(i + 1)).compose(self.mix(rid, mid, i))
                    for s in between:
                        acc = acc + self.mix(s, mid, i + 1).compose(self.mix(rid, s, i))
                    if not acc.is_zero():
                        violations.append(
                            ("interval-sum", rid, mid, f"nonzero at degree {i}"))
                        return GemReport(False, violations)
        return GemReport(not violations, violations)

    def __repr__(self):
        return f"GemComplex(support={self.support()})"


@dataclass
class GemHom:
    """Degree-zero map of fan-spread complexes.

    `components` maps (σ, τ) with σ ≼ τ to {i: CrossHom L(σ)^i → K(τ)^i};
    the diagonal entries (σ, σ) are the per-cone maps.
    """

    source: GemComplex
    target: GemComplex
    components: dict

    def at(self, sid: int, tid: int, i: int) -> CrossHom:
        f = self.components.get((sid, tid), {}).get(i)
        if f is not None:
            return f
        return CrossHom(self.source.component(sid).term(i),
                        self.target.component(tid).term(i), {})

    @property
    def unmixed(self) -> bool:
        return all(sid == tid or all(f.is_zero() for f in by_i.values())
                   for (sid, tid), by_i in self.components.items())

    def validate(self) -> "GemHom":
        fan = self.source.fan
        for (sid, tid), by_i in self.components.items():
            if not fan.is_face(sid, tid):
                raise ValueError(f"component ({sid},{tid}) is not a face pair")
            for i, f in by_i.items():
                if (f.source != self.source.component(sid).term(i)
                        or f.target != self.target.component(tid).term(i)):
                    raise ValueError(f"component ({sid},{tid}) at {i} has wrong endpoints")
                f.validate()
        cones = sorted(set(self.source.support()) | set(self.target.support()))
        for sid in cones:
            for mid in cones:
                if not fan.is_face(sid, mid):
                    continue
                between = [t for t in cones
                           if fan.is_face(sid, t) and fan.is_face(t, mid)]
                degs = set(self.source.component(sid).degrees())
                for i in sorted(degs):
                    src = self.source.component(sid).term(i)
                    tgt = self.target.component(mid).term(i + 1)
                    if not src.total_dim() or not tgt.total_dim():
                        continue
                    lhs = CrossHom(src, tgt, {})
                    rhs = CrossHom(src, tgt, {})
                    for t in between:
                        lhs = lhs + self._d_target(t, mid, i).compose(self.at(sid, t, i))
                        rhs = rhs + self.at(t, mid, i + 1).compose(self._d_source(sid, t, i))
                    diff = lhs + rhs.scale(-1)
                    if not diff.is_zero():
                        raise ValueError(
                            f"hom does not intertwine differentials at ({sid},{mid}), degree {i}")
        return self

    def _d_source(self, sid, tid, i):
        if sid == tid:
            return as_cross(self.source.component(sid).d(i))
        return self.source.mix(sid, tid, i)

    def _d_target(self, sid, tid, i):
        if sid == tid:
            return as_cross(self.target.component(sid).d(i))
        return self.target.mix(sid, tid, i)

    def compose(self, other: "GemHom") -> "GemHom":
        """self ∘ other, with interval-sum components."""
        fan = self.source.fan
        comps = {}
        cones = sorted(set(other.source.support()) | set(self.target.support())
                       | set(other.target.support()))
        for sid in cones:
            for mid in cones:
                if not fan.is_face(sid, mid):
                    continue
                by_i = {}
                for i in other.source.component(sid).degrees():
                    acc = CrossHom(other.source.component(sid).term(i),
                                   self.target.component(mid).term(i), {})
                    for t in cones:
                        if fan.is_face(sid, t) and fan.is_face(t, mid):
                            acc = acc + self.at(t, mid, i).compose(other.at(sid, t, i))
                    if not acc.is_zero():
                        by_i[i] = acc
                if by_i:
                    comps[(sid, mid)] = by_i
        return GemHom(other.source, self.target, comps)

    def diagonal_map(self, sid: int) -> GMComplexMap:
        src = self.source.component(sid)
        tgt = self.target.component(sid)
        maps = {i: as_hom(self.at(sid, sid, i))
                for i in set(src.degrees()) | set(tgt.degrees())}
        return GMComplexMap(src, tgt, maps)


def is_gem_quasi_iso(f: GemHom) -> bool:
    """Per-cone criterion: every diagonal component is a quasi-isomorphism."""
    for sid in sorted(set(f.source.support()) | set(f.target.support())):
        if not mapping_cone(f.diagonal_map(sid)).is_acyclic():
            return False
    return True


# ---------------------------------------------------------------------------
# constructors


def single_cone_gem(fan: Fan, sid: int, cx: GMComplex) -> GemComplex:
    if not (0 <= sid < len(fan.cones)):
        raise ConeNotInFan(f"cone {sid} not in fan")
    return GemComplex(fan, {sid: cx})


def q_point(fan: Fan) -> GemComplex:
    """Q in bidegree (0, 0) on the zero cone."""
    zid = fan.zero_cone_id()
    alg = ConeAlgebra(fan, zid)
    return single_cone_gem(fan, zid, single_term_complex(free_module(alg)))


# ---------------------------------------------------------------------------
# restriction / section functors


def _check_cone(fan: Fan, rho_id: int, allow_alpha: bool = False):
    if rho_id == ALPHA:
        if allow_alpha:
            return
        raise ConeNotInFan("augmented top not allowed here")
    if not (0 <= rho_id < len(fan.cones)):
        raise ConeNotInFan(f"cone {rho_id} not in fan")


def _face_offsets(metas: dict, faces, i: int) -> dict:
    """Per-face starting offsets inside ⊕_σ metas[(σ,i)].module, per degree."""
    out = {}
    run: dict = {}
    for sid in faces:
        out[sid] = dict(run)
        meta = metas.get((sid, i))
        if meta is None:
            continue
        for j, d in meta.module.dims.items():
            run[j] = run.get(j, 0) + d
    return out


def _blocks_to_hom(src: ExtModule, tgt: ExtModule, blocks) -> ExtModuleHom:
    """Assemble a hom from blocks (row_offsets, col_offsets, mats) without
    forming the dense injection/projection products."""
    grids: dict = {}
    for row_off, col_off, mats in blocks:
        for j, m in mats.items():
            if not (m.rows and m.cols):
                continue
            g = grids.get(j)
            if g is None:
                g = [[Fraction(0)] * src.dim(j) for _ in range(tgt.dim(j))]
                grids[j] = g
            ro = row_off.get(j, 0)
            co = col_off.get(j, 0)
            for r, row in enumerate(m.data):
                grow = g[ro + r]
                for c, val in enumerate(row):
                    if val:
                        grow[co + c] += val
    return ExtModuleHom(src, tgt, {
        j: QMatrix._raw(tgt.dim(j), src.dim(j), tuple(tuple(r) for r in g))
        for j, g in grids.items()
    })


def _i_star_data(rho_id: int, L: GemComplex, include_rho: bool = True):
    """Assemble ⊕_{σ≼ρ} L(σ)_{A(ρ)}; returns (complex, metas, injs, projs, faces)."""
    fan = L.fan
    _check_cone(fan, rho_id, allow_alpha=True)
    alg = ConeAlgebra(fan, rho_id)
    faces = [sid for sid in L.support() if fan.is_face(sid, rho_id)]
    if not include_rho:
        faces = [sid for sid in faces if sid != rho_id]
    if not faces:
        return zero_complex(alg), {}, {}, {}, []
    degs = sorted({i for sid in faces for i in L.component(sid).degrees()})
    metas = {}
    for sid in faces:
        comp = L.component(sid)
        for i in degs:
            metas[(sid, i)] = induce_meta(comp.term(i), rho_id)
        metas[(sid, degs[-1] + 1)] = induce_meta(comp.term(degs[-1] + 1), rho_id)
    terms, injs, projs = {}, {}, {}
    for i in degs:
        total, inj, proj = direct_sum([metas[(sid, i)].module for sid in faces])
        terms[i] = total
        injs[i] = dict(zip(faces, inj))
        projs[i] = dict(zip(faces, proj))
    offs = {i: _face_offsets(metas, faces, i) for i in degs}
    diffs = {}
    for i in degs:
        if i + 1 not in terms:
            continue
        blocks = []
        for sid in faces:
            comp = L.component(sid)
            f = induce_hom(comp.d(i), rho_id,
                           src_meta=metas[(sid, i)], tgt_meta=metas[(sid, i + 1)])
            blocks.append((offs[i + 1][sid], offs[i][sid], f.mats))
            for tid in faces:
                if tid == sid or not fan.is_face(sid, tid):
                    continue
                g = L.mix(sid, tid, i)
                if g.is_zero():
                    continue
                cf = induce_cross(g, metas[(sid, i)], metas[(tid, i + 1)])
                blocks.append((offs[i + 1][tid], offs[i][sid], cf.mats))
        diffs[i] = _blocks_to_hom(terms[i], terms[i + 1], blocks)
    return GMComplex(alg, terms, diffs), metas, injs, projs, faces


def _check_d2(cx: GMComplex):
    for i in cx.degrees():
        comp = cx.d(i + 1).compose(cx.d(i))
        for j, m in comp.mats.items():
            if not m.is_zero():
                raise ValueError(f"d² ≠ 0 at degree {i}, module degree {j}")


def i_star(rho_id: int, L: GemComplex, check: bool = True) -> GMComplex:
    """Restriction to the closed star below ρ, induced and summed over A(ρ)."""
    cx = _i_star_data(rho_id, L)[0]
    if check:
        _check_d2(cx)
    return cx


def gamma(L: GemComplex, check: bool = True) -> GMComplex:
    """Global sections: i_star at the augmented top, over the full algebra."""
    return i_star(ALPHA, L, check=check)


def i_shriek(rho_id: int, L: GemComplex) -> GMComplex:
    _check_cone(L.fan, rho_id)
    return L.component(rho_id)


def i_circ(rho_id: int, L: GemComplex, check: bool = True) -> GMComplex:
    """i_star of the restriction to the proper faces of ρ."""
    _check_cone(L.fan, rho_id)
    cx = _i_star_data(rho_id, L, include_rho=False)[0]
    if check:
        _check_d2(cx)
    return cx


def i_star_hom(rho_id: int, f: GemHom) -> GMComplexMap:
    """Functoriality of i_star on homs of fan-spread complexes."""
    fan = f.source.fan
    src_cx, src_metas, src_injs, src_projs, src_faces = _i_star_data(rho_id, f.source)
    tgt_cx, tgt_metas, tgt_injs, tgt_projs, tgt_faces = _i_star_data(rho_id, f.target)
    maps = {}
    for i in src_cx.degrees():
        src_offs = _face_offsets(src_metas, src_faces, i)
        tgt_offs = _face_offsets(tgt_metas, tgt_faces, i)
        blocks = []
        for sid in src_faces:
            for tid in tgt_faces:
                if not fan.is_face(sid, tid):
                    continue
                comp = f.at(sid, tid, i)
                if comp.is_zero():
                    continue
                cf = induce_cross(comp, src_metas[(sid, i)], tgt_metas[(tid, i)])
                blocks.append((tgt_offs[tid], src_offs[sid], cf.mats))
        maps[i] = _blocks_to_hom(src_cx.term(i), tgt_cx.term(i), blocks)
    return GMComplexMap(src_cx, tgt_cx, maps)


# ---------------------------------------------------------------------------
# extension by zero across a maximal cone, and cone-local truncation


def _check_maximal(L: GemComplex, pi_id: int):
    """π must be maximal relative to the complex: nothing lives above it."""
    fan = L.fan
    _check_cone(fan, pi_id)
    for tid in fan.star(pi_id):
        if tid != pi_id and L.component(tid).total_dim():
            raise NotMaximal(
                f"cone {pi_id} is a proper face of cone {tid} in the support")


def j_shriek_extend(L: GemComplex, pi_id: int) -> GemComplex:
    """Extend a complex supported off π by the shifted boundary sections at π.

    The π-component is i_circ(π, L)[−1]; the mixing map of each face into π
    is the canonical inclusion of its induced summand.
    """
    fan = L.fan
    _check_maximal(L, pi_id)
    if L.component(pi_id).total_dim():
        raise ValueError(f"complex already has a component on cone {pi_id}")
    cx, metas, injs, projs, faces = _i_star_data(pi_id, L, include_rho=False)
    comp_pi = shift(cx, -1)
    terms = dict(L.terms)
    terms[pi_id] = comp_pi
    mixing = {pair: dict(by_i) for pair, by_i in L.mixing.items()}
    for sid in faces:
        by_i = {}
        for i in L.component(sid).degrees():
            if (sid, i) not in metas or i not in injs:
                continue
            emb = unit_inclusion(metas[(sid, i)])
            f = as_cross(injs[i][sid]).compose(emb)
            if not f.is_zero():
                by_i[i] = CrossHom(L.component(sid).term(i), comp_pi.term(i + 1), f.mats)
        if by_i:
            mixing[(sid, pi_id)] = by_i
    return GemComplex(fan, terms, mixing)


def gt_pi_ge(k: int, pi_id: int, L: GemComplex) -> GemComplex:
    """Replace only the π-component by its gradual quotient truncation ≥ k."""
    fan = L.fan
    _check_maximal(L, pi_id)
    comp = L.component(pi_id)
    quot, proj = gt_ge_map(k, comp)
    terms = dict(L.terms)
    terms[pi_id] = quot
    mixing = {}
    for (sid, tid), by_i in L.mixing.items():
        if sid == pi_id:
            raise NotMaximal(f"cone {pi_id} has outgoing mixing maps")
        if tid != pi_id:
            mixing[(sid, tid)] = dict(by_i)
            continue
        new = {}
        for i, f in by_i.items():
            g = as_cross(proj.at(i + 1)).compose(f)
            if not g.is_zero():
                new[i] = g
        if new:
            mixing[(sid, tid)] = new
    return GemComplex(fan, terms, mixing)


# ---------------------------------------------------------------------------
# shallow resolution


def _star_closure(fan: Fan, supp) -> list:
    return [c.id for c in fan.cones if any(fan.is_face(s, c.id) for s in supp)]


def shallow_resolve(L: GemComplex):
    """Resolve L by a complex whose mixing maps only drop one codimension.

    The ρ-component collects, for every chain η ≼ σ ≼ ρ with η in the
    support, the module L(η)^{r_σ−r_ρ+i} induced to A(ρ); the internal
    differential moves η inside a fixed σ (with sign (−1)^{r_ρ−r_σ}) or
    drops σ to one of its facets (with sign (−1)^{r_ρ−r_σ−1} times the
    incidence sign).  Mixing maps between adjacent ρ ≺ μ transport each
    chain by the incidence sign.  Returns (resolution, hom from L) where
    the hom is a per-cone quasi-isomorphism.
    """
    fan = L.fan
    supp = set(L.support())
    rho_ids = _star_closure(fan, supp)
    meta_cache: dict = {}

    def meta(eid, rid, n):
        key = (eid, rid, n)
        if key not in meta_cache:
            meta_cache[key] = induce_meta(L.component(eid).term(n), rid)
        return meta_cache[key]

    comps = {}
    index_of = {}
    inj_of = {}
    proj_of = {}
    for rid in rho_ids:
        r_rho = fan.dim_of(rid)
        pairs = sorted((sid, eid)
                       for sid in fan.faces(rid)
                       for eid in fan.faces(sid) if eid in supp)
        index_of[rid] = pairs
        slots = sorted({n + r_rho - fan.dim_of(sid)
                        for (sid, eid) in pairs
                        for n in L.component(eid).degrees()})
        terms, injs, projs = {}, {}, {}
        for i in slots:
            mods = [meta(eid, rid, i - r_rho + fan.dim_of(sid)).module
                    for (sid, eid) in pairs]
            total, inj, proj = direct_sum(mods)
            terms[i] = total
            injs[i] = dict(zip(pairs, inj))
            projs[i] = dict(zip(pairs, proj))
            inj_of[(rid, i)] = injs[i]
            proj_of[(rid, i)] = projs[i]
        diffs = {}
        for i in slots:
            if i + 1 not in terms:
                continue
            d = ExtModuleHom(terms[i], terms[i + 1], {})
            for (sid, eid) in pairs:
                r_sig = fan.dim_of(sid)
                s = i - r_rho + r_sig
                if not L.component(eid).term(s).total_dim():
                    continue
                # move η inside a fixed middle cone σ
                sign_a = _sign(r_rho - r_sig)
                for (sid2, zid) in pairs:
                    if sid2 != sid or not fan.is_face(eid, zid):
                        continue
                    if zid == eid:
                        g = as_cross(L.component(eid).d(s))
                    else:
                        g = L.mix(eid, zid, s)
                    if g.is_zero():
                        continue
                    ind = induce_cross(g, meta(eid, rid, s), meta(zid, rid, s + 1))
                    d = d + injs[i + 1][(sid, zid)].compose(as_hom(ind)) \
                        .compose(projs[i][(sid, eid)]).scale(sign_a)
                # drop the middle cone σ to one of its facets
                for (tid, eid2) in pairs:
                    if (eid2 != eid or not fan.is_face(tid, sid)
                            or fan.dim_of(tid) != r_sig - 1
                            or not fan.is_face(eid, tid)):
                        continue
                    eps = incidence_sign(fan, tid, sid)
                    m = meta(eid, rid, s)
                    ident = as_hom(identity_cross(m.module))
                    d = d + injs[i + 1][(tid, eid)].compose(ident) \
                        .compose(projs[i][(sid, eid)]).scale(_sign(r_rho - r_sig - 1) * eps)
            diffs[i] = d
        comps[rid] = GMComplex(ConeAlgebra(fan, rid), terms, diffs)
    mixing = {}
    for rid in rho_ids:
        for mid in rho_ids:
            if (rid == mid or not fan.is_face(rid, mid)
                    or fan.dim_of(mid) != fan.dim_of(rid) + 1):
                continue
            eps = incidence_sign(fan, rid, mid)
            by_i = {}
            for i in comps[rid].degrees():
                if not comps[mid].term(i + 1).total_dim():
                    continue
                f = CrossHom(comps[rid].term(i), comps[mid].term(i + 1), {})
                for (sid, eid) in index_of[rid]:
                    s = i - fan.dim_of(rid) + fan.dim_of(sid)
                    if not L.component(eid).term(s).total_dim():
                        continue
                    ident = identity_cross(L.component(eid).term(s))
                    ind = induce_cross(ident, meta(eid, rid, s), meta(eid, mid, s))
                    f = f + as_cross(inj_of[(mid, i + 1)][(sid, eid)]).compose(ind) \
                        .compose(proj_of[(rid, i)][(sid, eid)])
                if not f.is_zero():
                    by_i[i] = f.scale(eps)
            if by_i:
                mixing[(rid, mid)] = by_i
    tilde = GemComplex(fan, comps, mixing)
    fcomp = {}
    for eid in sorted(supp):
        for rid in rho_ids:
            if not fan.is_face(eid, rid):
                continue
            by_i = {}
            for i in L.component(eid).degrees():
                m = meta(eid, rid, i)
                h = as_cross(inj_of[(rid, i)][(rid, eid)]).compose(unit_inclusion(m))
                if not h.is_zero():
                    by_i[i] = CrossHom(L.component(eid).term(i),
                                       tilde.component(rid).term(i), h.mats)
            if by_i:
                fcomp[(eid, rid)] = by_i
    return tilde, GemHom(L, tilde, fcomp)


# ---------------------------------------------------------------------------
# duality


def _i_dual_mix(L: GemComplex, n: int, rho_data, mu_id: int, mu_data) -> CrossHom:
    """The canonical map dual(i_star(ρ,L)^{−n}) → dual(i_star(μ,L)^{−n}).

    Composite of the unit inclusion into the μ-induction, the canonical
    isomorphism between the induced dual and the dual of the induction,
    and the dual of the summand-collapse projection i_star(μ) → (i_star(ρ))_{A(μ)}.
    """
    g_rho, metas_r, injs_r, projs_r, faces_r = rho_data
    g_mu, metas_m, injs_m, projs_m, faces_m = mu_data
    v = g_rho.term(-n)
    w = g_mu.term(-n)
    dv = dualize(v)
    dw = dualize(w)
    if not v.total_dim() or not w.total_dim():
        return CrossHom(dv, dw, {})
    phi = induce_dual_iso(v, mu_id)
    w_meta = induce_meta(v, mu_id)
    iota = unit_inclusion(induce_meta(dv, mu_id))
    p = ExtModuleHom(w, w_meta.module, {})
    for sid in faces_r:
        if -n not in injs_r or sid not in injs_r[-n]:
            continue
        u = as_cross(injs_r[-n][sid]).compose(
            unit_inclusion(metas_r[(sid, -n)]))
        ind = induce_cross(u, metas_m[(sid, -n)], w_meta)
        p = p + as_hom(ind).compose(projs_m[-n][sid])
    dp = dualize_hom(p, dual_target=dualize(w_meta.module), dual_source=dw)
    return as_cross(dp).compose(as_cross(phi)).compose(iota)


def dualize_D(L: GemComplex, check: bool = False) -> GemComplex:
    """The dualizing construction: per cone the dual of i_star(ρ,L), shifted
    down by the cone dimension; mixing between adjacent cones is the
    canonical comparison map scaled by the incidence sign."""
    fan = L.fan
    rho_ids = _star_closure(fan, L.support())
    data = {rid: _i_star_data(rid, L) for rid in rho_ids}
    comps = {rid: shift(dual_complex(data[rid][0]), -fan.dim_of(rid))
             for rid in rho_ids}
    mixing = {}
    for rid in rho_ids:
        for mid in rho_ids:
            if (rid == mid or not fan.is_face(rid, mid)
                    or fan.dim_of(mid) != fan.dim_of(rid) + 1):
                continue
            eps = incidence_sign(fan, rid, mid)
            by_i = {}
            for i in comps[rid].degrees():
                if not comps[mid].term(i + 1).total_dim():
                    continue
                n = i - fan.dim_of(rid)
                f = _i_dual_mix(L, n, data[rid], mid, data[mid])
                if not f.is_zero():
                    by_i[i] = f.scale(eps)
            if by_i:
                mixing[(rid, mid)] = by_i
    out = GemComplex(fan, comps, mixing)
    if check:
        report = out.validate()
        if not report.valid:
            raise ValueError(f"dual complex fails validation: {report.violations[0]}")
    return out


def dualize_Dhat_gamma(L: GemComplex, check: bool = True,
                       dual: GemComplex | None = None) -> GMComplex:
    """Global sections of the augmented dual over a complete fan.

    Extends the dual construction by one extra component for the augmented
    top: the full-lattice dual of the global sections of L, shifted down by
    rank+1.  Every top-dimensional cone maps into it by the canonical
    comparison map (the augmented incidence sign being +1)."""
    fan = L.fan
    if not fan.is_complete:
        raise FanNotComplete("the augmented dual needs a complete fan")
    r = fan.rank
    d_cx = dual if dual is not None else dualize_D(L)
    gd_cx, gd_metas, gd_injs, gd_projs, gd_faces = _i_star_data(ALPHA, d_cx)
    gl_data = _i_star_data(ALPHA, L)
    gl_cx = gl_data[0]
    t_cx = shift(dual_complex(gl_cx), -(r + 1))
    alg = ConeAlgebra(fan, ALPHA)
    tops = [c.id for c in fan.cones if c.dim == r]
    top_data = {rid: _i_star_data(rid, L) for rid in tops if rid in gd_faces}
    degs = sorted(set(gd_cx.degrees()) | set(t_cx.degrees()))
    sums = {}
    for i in degs:
        sums[i] = direct_sum([gd_cx.term(i), t_cx.term(i)])
    terms = {i: s[0] for i, s in sums.items()}
    def _pair_offsets(i):
        # summand 0 (sections of the dual) sits first, the shifted dual of
        # the global sections second
        return {}, {j: gd_cx.term(i).dim(j) for j in t_cx.term(i).degrees()}

    diffs = {}
    for i in degs:
        if i + 1 not in sums:
            continue
        off_gd_i, off_t_i = _pair_offsets(i)
        off_gd_i1, off_t_i1 = _pair_offsets(i + 1)
        blocks = [
            (off_gd_i1, off_gd_i, gd_cx.d(i).mats),
            (off_t_i1, off_t_i, t_cx.d(i).mats),
        ]
        # comparison maps from the top-dimensional summands
        if t_cx.term(i + 1).total_dim():
            for rid in sorted(top_data):
                if i not in gd_projs or rid not in gd_projs[i]:
                    continue
                n = i - r
                f = _i_dual_mix(L, n, top_data[rid], ALPHA, gl_data)
                if f.is_zero():
                    continue
                # the A-induction of a top-dimensional component is itself,
                # but it lives over the augmented-top algebra: compose as
                # cross maps and reinterpret at the end
                chain = f.compose(as_cross(gd_projs[i][rid]))
                blocks.append((off_t_i1, off_gd_i, chain.mats))
        diffs[i] = _blocks_to_hom(terms[i], terms[i + 1], blocks)
    out = GMComplex(alg, terms, diffs)
    if check:
        _check_d2(out)
    return out


# ---------------------------------------------------------------------------
# debug dump


def _mat_json(m: QMatrix) -> list:
    return [[str(m.entry(r, c)) for c in range(m.cols)] for r in range(m.rows)]


def debug_dump(L: GemComplex) -> dict:
    """Deterministic JSON-friendly dump: per cone, per degree, graded
    dimensions, differentials and mixing matrices as rational strings."""
    cones = {}
    for sid in L.support():
        comp = L.component(sid)
        terms = {}
        for i in comp.degrees():
            t = comp.term(i)
            terms[str(i)] = {
                "dims": {str(j): t.dim(j) for j in t.degrees()},
                "d": {str(j): _mat_json(m) for j, m in sorted(comp.d(i).mats.items())},
            }
        cones[str(sid)] = terms
    mixing = {}
    for (sid, tid) in sorted(L.mixing):
        by_i = {}
        for i, f in sorted(L.mixing[(sid, tid)].items()):
            by_i[str(i)] = {str(j): _mat_json(m) for j, m in sorted(f.mats.items())}
        mixing[f"{sid}->{tid}"] = by_i
    return {"rank": L.fan.rank, "cones": cones, "mixing": mixing}
