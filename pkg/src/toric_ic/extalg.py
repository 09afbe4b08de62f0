"""Graded modules over the exterior algebras attached to cones.

The exterior algebra of a cone's lattice is graded negatively: the wedge of
i generators sits in degree −i.  Modules are presented concretely, by a
dimension per degree and one action matrix per algebra generator per degree
(left multiplication, lowering degree by one).  The right action is the
left action twisted by the parity rule x·a = (−1)^{pq} a·x, so degree-zero
left-module maps are automatically two-sided and no separate right-action
data is stored.

The two nontrivial functors here are induction along a face inclusion
σ ≺ ρ (tensoring with the exterior algebra of a chosen complement of
N(σ) in N(ρ)) and duality into the determinant line of the cone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactq import QMatrix, decompose, det, extend_basis, solve
from .fan import ALPHA, Fan


class NotAFace(ValueError):
    pass


def _sign(n: int) -> int:
    return 1 if n % 2 == 0 else -1


def wedge_monomials(m: int) -> list:
    """All strictly increasing index tuples from range(m), sorted by (size, lex)."""
    out = []
    for size in range(m + 1):
        out.extend(itertools.combinations(range(m), size))
    return out


def insertion_sign(t: int, mon: tuple) -> int:
    """Sign of x_t ∧ x_mon relative to the sorted monomial, 0 if t ∈ mon."""
    if t in mon:
        return 0
    return _sign(sum(1 for s in mon if s < t))


# ---------------------------------------------------------------------------
# algebras and modules


class ConeAlgebra:
    """The exterior algebra of N(σ)_Q, generators in degree −1.

    The augmented top cone (ALPHA) carries the exterior algebra of the full
    lattice, with the standard basis.
    """

    __slots__ = ("fan", "cone_id", "basis", "k")

    def __init__(self, fan: Fan, cone_id: int):
        self.fan = fan
        self.cone_id = cone_id
        if cone_id == ALPHA:
            self.basis = QMatrix.identity(fan.rank)
        else:
            self.basis = fan.cone(cone_id).nsigma_basis
        self.k = self.basis.cols

    def __eq__(self, other):
        return (
            isinstance(other, ConeAlgebra)
            and self.fan is other.fan
            and self.cone_id == other.cone_id
        )

    def __hash__(self):
        return hash((id(self.fan), self.cone_id))

    def __repr__(self):
        return f"ConeAlgebra(cone={self.cone_id}, k={self.k})"


class ExtModule:
    """Finitely generated graded module over a ConeAlgebra.

    `dims` maps degree → dimension (zero entries dropped); `actions` maps
    (generator index t, degree j) → matrix V_j → V_{j−1}.
    """

    __slots__ = ("algebra", "dims", "actions")

    def __init__(self, algebra: ConeAlgebra, dims: dict, actions: dict | None = None):
        self.algebra = algebra
        self.dims = {int(j): int(d) for j, d in dims.items() if d}
        self.actions = {}
        for (t, j), m in (actions or {}).items():
            if m.rows != self.dim(j - 1) or m.cols != self.dim(j):
                raise ValueError(f"action ({t},{j}) has shape {m.rows}x{m.cols}, "
                                 f"expected {self.dim(j-1)}x{self.dim(j)}")
            if m.rows and m.cols and not m.is_zero():
                self.actions[(t, j)] = m

    def dim(self, j: int) -> int:
        return self.dims.get(j, 0)

    def degrees(self) -> list:
        return sorted(self.dims)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def act(self, t: int, j: int) -> QMatrix:
        m = self.actions.get((t, j))
        if m is None:
            return QMatrix.zeros(self.dim(j - 1), self.dim(j))
        return m

    def act_by_coords(self, coords: Sequence, j: int) -> QMatrix:
        """Action of the lattice vector with the given generator coordinates."""
        out = QMatrix.zeros(self.dim(j - 1), self.dim(j))
        for t, c in enumerate(coords):
            c = Fraction(c)
            if c:
                out = out + self.act(t, j).scale(c)
        return out

    def validate(self) -> "ExtModule":
        k = self.algebra.k
        for j in self.degrees():
            for t in range(k):
                sq = self.act(t, j - 1) * self.act(t, j)
                if not sq.is_zero():
                    raise ValueError(f"x_{t}² ≠ 0 at degree {j}")
                for s in range(t):
                    anti = self.act(s, j - 1) * self.act(t, j) + \
                        self.act(t, j - 1) * self.act(s, j)
                    if not anti.is_zero():
                        raise ValueError(f"x_{s}, x_{t} do not anticommute at degree {j}")
        return self

    def __eq__(self, other):
        if not isinstance(other, ExtModule):
            return NotImplemented
        if self.algebra != other.algebra or self.dims != other.dims:
            return False
        keys = set(self.actions) | set(other.actions)
        return all(self.act(t, j) == other.act(t, j) for t, j in keys)

    def __repr__(self):
        return f"ExtModule(cone={self.algebra.cone_id}, dims={dict(sorted(self.dims.items()))})"


class ExtModuleHom:
    """Degree-zero module homomorphism, stored as one matrix per degree."""

    __slots__ = ("source", "target", "mats")

    def __init__(self, source: ExtModule, target: ExtModule, mats: dict):
        if source.algebra != target.algebra:
            raise ValueError("source and target live over different algebras")
        self.source = source
        self.target = target
        self.mats = {}
        for j, m in mats.items():
            if m.rows != target.dim(j) or m.cols != source.dim(j):
                raise ValueError(f"hom matrix at degree {j} has shape {m.rows}x{m.cols}, "
                                 f"expected {target.dim(j)}x{source.dim(j)}")
            if m.rows and m.cols:
                self.mats[j] = m

    def mat(self, j: int) -> QMatrix:
        m = self.mats.get(j)
        if m is None:
            return QMatrix.zeros(self.target.dim(j), self.source.dim(j))
        return m

    def validate(self) -> "ExtModuleHom":
        k = self.source.algebra.k
        degs = set(self.source.dims) | set(self.target.dims)
        for j in degs:
            for t in range(k):
                lhs = self.mat(j - 1) * self.source.act(t, j)
                rhs = self.target.act(t, j) * self.mat(j)
                if lhs != rhs:
                    raise ValueError(f"hom does not commute with x_{t} at degree {j}")
        return self

    def compose(self, other: "ExtModuleHom") -> "ExtModuleHom":
        """self ∘ other."""
        if other.target is not self.source and other.target != self.source:
            raise ValueError("composition mismatch")
        degs = set(other.mats) | set(self.mats)
        return ExtModuleHom(
            other.source, self.target,
            {j: self.mat(j) * other.mat(j) for j in degs},
        )

    def __add__(self, other: "ExtModuleHom") -> "ExtModuleHom":
        degs = set(self.mats) | set(other.mats)
        return ExtModuleHom(self.source, self.target,
                            {j: self.mat(j) + other.mat(j) for j in degs})

    def scale(self, c) -> "ExtModuleHom":
        return ExtModuleHom(self.source, self.target,
                            {j: m.scale(c) for j, m in self.mats.items()})

    def is_iso(self) -> bool:
        from .exactq import rank as _rank

        degs = set(self.source.dims) | set(self.target.dims)
        for j in degs:
            if self.source.dim(j) != self.target.dim(j):
                return False
            if _rank(self.mat(j)) != self.source.dim(j):
                return False
        return True

    def __repr__(self):
        return f"ExtModuleHom(degrees={sorted(self.mats)})"


# ---------------------------------------------------------------------------
# constructors


def zero_module(alg: ConeAlgebra) -> ExtModule:
    return ExtModule(alg, {})


def free_module(alg: ConeAlgebra) -> ExtModule:
    """The algebra as a module over itself; wedge monomial basis, (size, lex) order."""
    k = alg.k
    by_deg: dict = {}
    for mon in wedge_monomials(k):
        by_deg.setdefault(-len(mon), []).append(mon)
    dims = {j: len(v) for j, v in by_deg.items()}
    actions = {}
    for t in range(k):
        for j, mons in by_deg.items():
            tgt = by_deg.get(j - 1, [])
            if not tgt:
                continue
            pos = {m: i for i, m in enumerate(tgt)}
            entries = [[Fraction(0)] * len(mons) for _ in tgt]
            for col, mon in enumerate(mons):
                s = insertion_sign(t, mon)
                if s:
                    entries[pos[tuple(sorted(mon + (t,)))]][col] = Fraction(s)
            actions[(t, j)] = QMatrix(len(tgt), len(mons), entries)
    return ExtModule(alg, dims, actions)


def det_space(alg: ConeAlgebra) -> ExtModule:
    """The determinant line of the cone: one dimension in degree −k."""
    return ExtModule(alg, {-alg.k: 1})


def degree_shift(v: ExtModule, s: int) -> ExtModule:
    """Shift all internal degrees by s; the action matrices are unchanged."""
    return ExtModule(
        v.algebra,
        {j + s: d for j, d in v.dims.items()},
        {(t, j + s): m for (t, j), m in v.actions.items()},
    )


# ---------------------------------------------------------------------------
# induction


@dataclass
class InductionMeta:
    """Bookkeeping for V ↦ V ⊗ ⋀•(complement) along a face inclusion."""

    source: ExtModule
    module: ExtModule
    rho_id: int
    c: QMatrix      # coordinates of the N(σ) basis inside the N(ρ) basis
    h: QMatrix      # complement generator coordinates in the N(ρ) basis
    m: int          # number of complement generators
    basis: dict     # degree j → ordered list of (source degree i, source index, monomial)
    index: dict     # (i, idx, monomial) → (j, position)

    @property
    def kappa(self) -> Fraction:
        """det[C|H]: ratio between det(σ)∧(full complement wedge) and det(ρ)."""
        return det(self.c.hstack(self.h))


def induce_meta(v: ExtModule, rho_id: int, complement: QMatrix | None = None) -> InductionMeta:
    fan = v.algebra.fan
    sid = v.algebra.cone_id
    if not fan.is_face(sid, rho_id):
        raise NotAFace(f"cone {sid} is not a face of cone {rho_id}")
    alg_rho = ConeAlgebra(fan, rho_id)
    big_k = alg_rho.k
    k = v.algebra.k
    c = solve(alg_rho.basis, v.algebra.basis)
    h = extend_basis(c, big_k) if complement is None else complement
    m = big_k - k
    if h.cols != m:
        raise ValueError("complement has wrong dimension")
    full = c.hstack(h)
    coords = solve(full, QMatrix.identity(big_k))  # [a; b] decomposition per generator
    mons = wedge_monomials(m)
    basis: dict = {}
    for i in sorted(v.dims):
        for idx in range(v.dim(i)):
            for mon in mons:
                basis.setdefault(i - len(mon), []).append((i, idx, mon))
    for j in basis:
        basis[j].sort()
    index = {key: (j, p) for j, lst in basis.items() for p, key in enumerate(lst)}
    dims = {j: len(lst) for j, lst in basis.items()}
    actions = {}
    for t in range(big_k):
        a = [coords.entry(s, t) for s in range(k)]
        b = [coords.entry(k + l, t) for l in range(m)]
        for j, lst in basis.items():
            tgt = basis.get(j - 1, [])
            if not tgt:
                continue
            entries = [[Fraction(0)] * len(lst) for _ in tgt]
            for col, (i, idx, mon) in enumerate(lst):
                # lattice part: (n_σ v) ⊗ h_mon
                for s in range(k):
                    if a[s]:
                        va = v.act(s, i)
                        for idx2 in range(v.dim(i - 1)):
                            val = a[s] * va.entry(idx2, idx)
                            if val:
                                _, p = index[(i - 1, idx2, mon)]
                                entries[p][col] += val
                # complement part: (−1)^p v ⊗ (n_H ∧ h_mon)
                par = _sign(i)
                for l in range(m):
                    if b[l]:
                        s2 = insertion_sign(l, mon)
                        if s2:
                            mon2 = tuple(sorted(mon + (l,)))
                            _, p = index[(i, idx, mon2)]
                            entries[p][col] += par * s2 * b[l]
            actions[(t, j)] = QMatrix(len(tgt), len(lst), entries)
    module = ExtModule(alg_rho, dims, actions)
    return InductionMeta(source=v, module=module, rho_id=rho_id,
                         c=c, h=h, m=m, basis=basis, index=index)


def induce(v: ExtModule, rho_id: int) -> ExtModule:
    return induce_meta(v, rho_id).module


def induce_hom(f: ExtModuleHom, rho_id: int,
               src_meta: InductionMeta | None = None,
               tgt_meta: InductionMeta | None = None) -> ExtModuleHom:
    """Functoriality of induction: f ⊗ id on the complement factor."""
    sm = src_meta or induce_meta(f.source, rho_id)
    tm = tgt_meta or induce_meta(f.target, rho_id)
    mats = {}
    for j, lst in sm.basis.items():
        tgt_lst = tm.basis.get(j, [])
        if not tgt_lst:
            continue
        entries = [[Fraction(0)] * len(lst) for _ in tgt_lst]
        for col, (i, idx, mon) in enumerate(lst):
            fm = f.mat(i)
            for idx2 in range(f.target.dim(i)):
                val = fm.entry(idx2, idx)
                if val:
                    _, p = tm.index[(i, idx2, mon)]
                    entries[p][col] = val
        mats[j] = QMatrix(len(tgt_lst), len(lst), entries)
    return ExtModuleHom(sm.module, tm.module, mats)


# ---------------------------------------------------------------------------
# duality


def dualize(v: ExtModule) -> ExtModule:
    """Dual module into the determinant line: dim d(V)_j = dim V_{−k−j}.

    Action convention (frozen by the pairing and double-dual tests):
    ⟨x_t·y, x⟩ = (−1)^{deg y} ⟨y, x_t·x⟩.
    """
    k = v.algebra.k
    dims = {-k - i: d for i, d in v.dims.items()}
    actions = {}
    for t in range(v.algebra.k):
        for j in dims:
            m = v.act(t, -k - j + 1)
            if m.rows and m.cols:
                actions[(t, j)] = m.transpose().scale(_sign(j))
    return ExtModule(v.algebra, dims, actions)


def dualize_hom(f: ExtModuleHom,
                dual_target: ExtModule | None = None,
                dual_source: ExtModule | None = None) -> ExtModuleHom:
    """Contravariant duality on homs: d(f)_j = (f_{−k−j})ᵗ."""
    k = f.source.algebra.k
    dt = dual_target if dual_target is not None else dualize(f.target)
    ds = dual_source if dual_source is not None else dualize(f.source)
    mats = {}
    for j in set(dt.dims) | set(ds.dims):
        m = f.mat(-k - j)
        if m.rows and m.cols:
            mats[j] = m.transpose()
    return ExtModuleHom(dt, ds, mats)


def double_dual_iso(v: ExtModule) -> ExtModuleHom:
    """Canonical isomorphism V → d(d(V)); diagonal signs (−1)^{p(k+1)}."""
    k = v.algebra.k
    dd = dualize(dualize(v))
    mats = {
        p: QMatrix.identity(d).scale(_sign(p * (k + 1)))
        for p, d in v.dims.items()
    }
    return ExtModuleHom(v, dd, mats)


def induce_dual_iso(v: ExtModule, rho_id: int) -> ExtModuleHom:
    """The canonical isomorphism (dual of V) induced ≅ dual of (V induced).

    Returned as a hom from induce(dualize(V), ρ) to dualize(induce(V, ρ)),
    determined on d_σ(V)⊗1 by pairing against the full complement wedge and
    extended by the module structure.
    """
    dv = dualize(v)
    src_meta = induce_meta(dv, rho_id)
    w_meta = induce_meta(v, rho_id)
    target = dualize(w_meta.module)
    k = v.algebra.k
    m = w_meta.m
    kappa = w_meta.kappa
    full = tuple(range(m))
    mats = {}
    for j, lst in src_meta.basis.items():
        cols = []
        for (q, a_idx, mon) in lst:
            i = -k - q  # the V-degree paired with d_σ(V)_q
            vec = [Fraction(0)] * target.dim(q)
            _, pos = w_meta.index[(i, a_idx, full)]
            vec[pos] = kappa
            deg = q
            # y ⊗ h_mon = (−1)^{q·|mon|} · (ordered left action of h_mon on y⊗1)
            for t in sorted(mon, reverse=True):
                act = target.act_by_coords(w_meta.h.col(t), deg)
                vec = list(act.mul_vec(vec))
                deg -= 1
            s = _sign(q * len(mon))
            cols.append([s * x for x in vec])
        mats[j] = QMatrix.from_cols(cols, nrows=target.dim(j))
    return ExtModuleHom(src_meta.module, target, mats)


# ---------------------------------------------------------------------------
# kernels, images, quotients, sums, hom spaces


def kernel_module(f: ExtModuleHom):
    """Kernel submodule of a hom; returns (module, inclusion)."""
    v = f.source
    bases = {}
    for j in v.degrees():
        _, ker, _ = decompose(f.mat(j))
        bases[j] = ker
    dims = {j: b.cols for j, b in bases.items()}
    actions = {}
    for t in range(v.algebra.k):
        for j, b in bases.items():
            if not b.cols or not dims.get(j - 1):
                continue
            actions[(t, j)] = solve(bases[j - 1], v.act(t, j) * b)
    mod = ExtModule(v.algebra, dims, actions)
    incl = ExtModuleHom(mod, v, {j: b for j, b in bases.items() if b.cols})
    return mod, incl


def image_module(f: ExtModuleHom):
    """Image submodule inside the target; returns (module, inclusion, projection).

    The projection is the corestriction of f onto its image.
    """
    w = f.target
    bases = {}
    for j in set(f.source.dims):
        _, _, im = decompose(f.mat(j))
        bases[j] = im
    dims = {j: b.cols for j, b in bases.items()}
    actions = {}
    for t in range(w.algebra.k):
        for j, b in bases.items():
            if not b.cols or not dims.get(j - 1):
                continue
            actions[(t, j)] = solve(bases[j - 1], w.act(t, j) * b)
    mod = ExtModule(w.algebra, dims, actions)
    incl = ExtModuleHom(mod, w, {j: b for j, b in bases.items() if b.cols})
    proj = ExtModuleHom(f.source, mod,
                        {j: solve(b, f.mat(j)) for j, b in bases.items() if b.cols})
    return mod, incl, proj


def quotient_module(v: ExtModule, incl: ExtModuleHom):
    """Quotient of v by the submodule given by an inclusion; returns (module, projection)."""
    comps = {}
    projs = {}
    for j in v.degrees():
        sub = incl.mat(j)
        comp = extend_basis(sub, v.dim(j))
        comps[j] = comp
        fullb = sub.hstack(comp)
        inv = solve(fullb, QMatrix.identity(v.dim(j)))
        projs[j] = QMatrix(comp.cols, v.dim(j),
                           [inv.data[sub.cols + i] for i in range(comp.cols)])
    dims = {j: c.cols for j, c in comps.items()}
    actions = {}
    for t in range(v.algebra.k):
        for j, c in comps.items():
            if not c.cols or not dims.get(j - 1):
                continue
            actions[(t, j)] = projs[j - 1] * v.act(t, j) * c
    mod = ExtModule(v.algebra, dims, actions)
    proj = ExtModuleHom(v, mod, {j: p for j, p in projs.items() if p.rows})
    return mod, proj


def direct_sum(mods: Sequence[ExtModule]):
    """Direct sum; returns (module, injections, projections)."""
    if not mods:
        raise ValueError("need at least one summand")
    alg = mods[0].algebra
    degs = sorted({j for m in mods for j in m.dims})
    dims = {j: sum(m.dim(j) for m in mods) for j in degs}
    offsets = {}
    for j in degs:
        off = 0
        for i, m in enumerate(mods):
            offsets[(i, j)] = off
            off += m.dim(j)
    actions = {}
    for t in range(alg.k):
        for j in degs:
            if not dims.get(j - 1):
                continue
            entries = [[Fraction(0)] * dims[j] for _ in range(dims[j - 1])]
            for i, m in enumerate(mods):
                a = m.act(t, j)
                ro, co = offsets[(i, j - 1)], offsets[(i, j)]
                for r in range(a.rows):
                    for c in range(a.cols):
                        entries[ro + r][co + c] = a.entry(r, c)
            actions[(t, j)] = QMatrix(dims[j - 1], dims[j], entries)
    total = ExtModule(alg, dims, actions)
    injections, projections = [], []
    for i, m in enumerate(mods):
        inj, prj = {}, {}
        for j in m.degrees():
            off = offsets[(i, j)]
            inj[j] = QMatrix(dims[j], m.dim(j),
                             [[1 if r == off + c else 0 for c in range(m.dim(j))]
                              for r in range(dims[j])])
            prj[j] = inj[j].transpose()
        injections.append(ExtModuleHom(m, total, inj))
        projections.append(ExtModuleHom(total, m, prj))
    return total, injections, projections


def hom_space(v: ExtModule, w: ExtModule) -> list:
    """Basis of the space of degree-zero module homs V → W."""
    degs = sorted(set(v.dims) | set(w.dims))
    var_index = {}
    nvars = 0
    for j in degs:
        for r in range(w.dim(j)):
            for c in range(v.dim(j)):
                var_index[(j, r, c)] = nvars
                nvars += 1
    if nvars == 0:
        return []
    rows = []
    k = v.algebra.k
    for t in range(k):
        for j in degs:
            # constraint: w.act(t,j) f_j − f_{j−1} v.act(t,j) = 0
            wa = w.act(t, j)
            va = v.act(t, j)
            for r in range(w.dim(j - 1)):
                for c in range(v.dim(j)):
                    row = [Fraction(0)] * nvars
                    used = False
                    for x in range(w.dim(j)):
                        val = wa.entry(r, x)
                        if val:
                            row[var_index[(j, x, c)]] += val
                            used = True
                    for y in range(v.dim(j - 1)):
                        val = va.entry(y, c)
                        if val:
                            row[var_index[(j - 1, r, y)]] -= val
                            used = True
                    if used:
                        rows.append(row)
    if rows:
        _, ker, _ = decompose(QMatrix.from_rows(rows))
    else:
        ker = QMatrix.identity(nvars)
    homs = []
    for col in range(ker.cols):
        mats = {}
        for j in degs:
            if v.dim(j) and w.dim(j):
                mats[j] = QMatrix(
                    w.dim(j), v.dim(j),
                    [[ker.entry(var_index[(j, r, c)], col) for c in range(v.dim(j))]
                     for r in range(w.dim(j))],
                )
        homs.append(ExtModuleHom(v, w, mats))
    return homs
