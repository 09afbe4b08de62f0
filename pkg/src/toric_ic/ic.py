"""Perversities and the inductive construction of the intersection complex.

A perversity is an integer function on the nonzero cones of a fan.  The
intersection complex ic_p(Δ) is built by induction over the cones in any
order refining dimension order: start from Q in bidegree (0,0) on the zero
cone, and at each cone π extend by zero across π and then apply the
cone-local gradual truncation gt_π^{≥ p(π)+1}.

Verification routines check the characterizing vanishing conditions, the
bidegree support boxes, and the dimension-level consequences of the
duality between ic_p and ic_{−p}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fan import ALPHA, Fan
from .gem import (
    GemComplex,
    dualize_D,
    gamma,
    gt_pi_ge,
    i_circ,
    i_star,
    j_shriek_extend,
    q_point,
)


class InvalidPerversity(ValueError):
    """Perversity specification is malformed or incomplete."""


@dataclass(frozen=True)
class Perversity:
    """Integer function on the nonzero cones of a fan.

    `values` maps cone id → integer for every nonzero cone; `name` records
    the preset, if any.
    """

    values: dict
    name: str | None = None

    def __call__(self, sid: int) -> int:
        return self.values[sid]

    def __neg__(self) -> "Perversity":
        flip = {"top": "bottom", "bottom": "top", "middle": "middle"}
        return Perversity({s: -v for s, v in self.values.items()},
                          flip.get(self.name))

    @classmethod
    def by_dimension(cls, fan: Fan, by_dim, name: str | None = None) -> "Perversity":
        vals = {}
        for c in fan.cones:
            if c.dim == 0:
                continue
            if c.dim not in by_dim:
                raise InvalidPerversity(f"no value for dimension {c.dim}")
            vals[c.id] = int(by_dim[c.dim])
        return cls(vals, name)

    @classmethod
    def middle(cls, fan: Fan) -> "Perversity":
        return cls.by_dimension(fan, {d: 0 for d in range(1, fan.rank + 1)}, "middle")

    @classmethod
    def top(cls, fan: Fan) -> "Perversity":
        return cls.by_dimension(fan, {d: d - 1 for d in range(1, fan.rank + 1)}, "top")

    @classmethod
    def bottom(cls, fan: Fan) -> "Perversity":
        return cls.by_dimension(fan, {d: 1 - d for d in range(1, fan.rank + 1)}, "bottom")

    @classmethod
    def preset(cls, fan: Fan, name: str) -> "Perversity":
        try:
            return {"middle": cls.middle, "top": cls.top, "bottom": cls.bottom}[name](fan)
        except KeyError:
            raise InvalidPerversity(f"unknown preset {name!r}") from None

    @classmethod
    def from_json(cls, fan: Fan, obj: dict) -> "Perversity":
        if not isinstance(obj, dict):
            raise InvalidPerversity("perversity spec must be an object")
        if "name" in obj:
            return cls.preset(fan, obj["name"])
        if "by_dimension" in obj:
            try:
                by_dim = {int(d): int(v) for d, v in obj["by_dimension"].items()}
            except (TypeError, ValueError) as e:
                raise InvalidPerversity(str(e)) from None
            return cls.by_dimension(fan, by_dim)
        if "by_cone" in obj:
            vals = {}
            for entry in obj["by_cone"]:
                cid = fan.cone_by_rays(entry["cone"])
                if cid is None:
                    raise InvalidPerversity(f"no cone with rays {entry['cone']}")
                vals[cid] = int(entry["value"])
            missing = [c.id for c in fan.cones if c.dim and c.id not in vals]
            if missing:
                raise InvalidPerversity(f"missing values for cones {missing}")
            return cls(vals)
        raise InvalidPerversity("expected one of name / by_dimension / by_cone")

    def to_json(self, fan: Fan) -> dict:
        if self.name:
            return {"name": self.name}
        return {"by_cone": [{"cone": sorted(fan.cone(s).ray_ids), "value": v}
                            for s, v in sorted(self.values.items())]}


def build_ic(fan: Fan, p: Perversity) -> GemComplex:
    """Inductive construction of the intersection complex for perversity p."""
    if not isinstance(fan, Fan):
        raise TypeError("build_ic needs a validated fan")
    L = q_point(fan)
    for c in sorted(fan.cones, key=lambda c: (c.dim, c.id)):
        if c.dim == 0:
            continue
        L = gt_pi_ge(p(c.id) + 1, c.id, j_shriek_extend(L, c.id))
    return L


@dataclass
class IcReport:
    """Outcome of a verification pass; violations are (tag, cone, i, j)."""

    ok: bool
    violations: list = field(default_factory=list)


def verify_conditions(L: GemComplex, p: Perversity) -> IcReport:
    """The three vanishing conditions that characterize the intersection
    complex up to quasi-isomorphism:

    (1) the zero-cone component has cohomology Q exactly in bidegree (0,0);
    (2) H^i(L(σ))_j = 0 whenever i + j ≤ p(σ), for every nonzero σ;
    (3) H^i(i_σ^*(L))_j = 0 whenever i + j ≥ p(σ), for every nonzero σ.
    """
    fan = L.fan
    violations = []
    zid = fan.zero_cone_id()
    h0 = L.component(zid).cohomology_dims()
    if h0 != {(0, 0): 1}:
        for (i, j), v in sorted(h0.items()):
            if (i, j) != (0, 0) and v:
                violations.append(("condition1", zid, i, j))
        if h0.get((0, 0)) != 1:
            violations.append(("condition1", zid, 0, 0))
    for c in sorted(fan.cones, key=lambda c: (c.dim, c.id)):
        if c.dim == 0:
            continue
        bound = p(c.id)
        for (i, j), v in sorted(L.component(c.id).cohomology_dims().items()):
            if v and i + j <= bound:
                violations.append(("condition2", c.id, i, j))
        for (i, j), v in sorted(i_star(c.id, L, check=False).cohomology_dims().items()):
            if v and i + j >= bound:
                violations.append(("condition3", c.id, i, j))
    return IcReport(not violations, violations)


def _box_violations(tag, sid, dims, i_lo, i_hi, j_lo, j_hi):
    out = []
    for (i, j), v in sorted(dims.items()):
        if v and not (i_lo <= i <= i_hi and j_lo <= j <= j_hi):
            out.append((tag, sid, i, j))
    return out


def support_box(L: GemComplex) -> IcReport:
    """Bidegree support boxes of the intersection complex:

    L(σ) lives in [1, r_σ]×[−r_σ, 0] for nonzero σ, i_σ^° in
    [0, r_σ−1]×[−r_σ, 0], i_σ^* in [0, r_σ]×[−r_σ, 0], and the global
    sections in [0, r]×[−r, 0].
    """
    fan = L.fan
    violations = []
    for c in sorted(fan.cones, key=lambda c: (c.dim, c.id)):
        r = c.dim
        if r:
            violations += _box_violations(
                "component-box", c.id, L.component(c.id).bidegree_dims(),
                1, r, -r, 0)
        violations += _box_violations(
            "circ-box", c.id, i_circ(c.id, L, check=False).bidegree_dims(),
            0, r - 1, -r, 0)
        violations += _box_violations(
            "star-box", c.id, i_star(c.id, L, check=False).bidegree_dims(),
            0, r, -r, 0)
    violations += _box_violations(
        "sections-box", ALPHA, gamma(L, check=False).bidegree_dims(),
        0, fan.rank, -fan.rank, 0)
    return IcReport(not violations, violations)


def duality_pairing_check(fan: Fan, p: Perversity) -> IcReport:
    """Dimension-level consequences of D(ic_p) ≃ ic_{−p}.

    Checks that the dual of ic_p satisfies the characterizing conditions
    for −p, and that its per-cone cohomology tables (components and
    i_σ^* alike) coincide with those of ic_{−p}.
    """
    lp = build_ic(fan, p)
    ln = build_ic(fan, -p)
    d = dualize_D(lp)
    rep = verify_conditions(d, -p)
    violations = list(rep.violations)
    for c in sorted(fan.cones, key=lambda c: (c.dim, c.id)):
        hd = d.component(c.id).cohomology_dims()
        hn = ln.component(c.id).cohomology_dims()
        if hd != hn:
            violations.append(("component-table", c.id, hd, hn))
        sd = i_star(c.id, d, check=False).cohomology_dims()
        sn = i_star(c.id, ln, check=False).cohomology_dims()
        if sd != sn:
            violations.append(("star-table", c.id, sd, sn))
    return IcReport(not violations, violations)
