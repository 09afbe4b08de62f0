"""Global cohomology tables, intersection cohomology Betti numbers, and
h-vector oracles.

The (p,q) table of the global-section complex of a fan-spread complex is
computed exactly; on complete fans its antidiagonals give the middle
(resp. chosen) perversity intersection cohomology Betti numbers of the
associated toric variety, via B_m = Σ_{p+q=m−r} dim H^p(Γ)_q.

Two independent oracles are provided for acceptance testing: the ordinary
h-vector of a complete simplicial fan, and Stanley's recursive generalized
h-vector on the face lattice, valid for arbitrary complete fans.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fan import Fan
from .gem import FanNotComplete, GemComplex, gamma
from .ic import Perversity, build_ic


class JOutOfRange(ValueError):
    """Internal-degree index outside [0, rank]."""


class NotSimplicial(ValueError):
    """The h-vector oracle needs every cone to be simplicial."""


def gamma_table(fan: Fan, L: GemComplex) -> dict:
    """Exact dimension table (p, q) → dim H^p(Γ(L))_q."""
    return gamma(L, check=False).cohomology_dims()


def ih_betti(fan: Fan, p: Perversity) -> tuple:
    """Betti numbers B_0..B_{2r} from the antidiagonals of the Γ table."""
    if not fan.is_complete:
        raise FanNotComplete("Betti numbers need a complete fan")
    r = fan.rank
    table = gamma_table(fan, build_ic(fan, p))
    betti = [0] * (2 * r + 1)
    for (i, q), v in table.items():
        m = i + q + r
        if not 0 <= m <= 2 * r:
            raise ValueError(f"cohomology at ({i},{q}) outside the expected range")
        betti[m] += v
    return tuple(betti)


def omega_betti(fan: Fan, p: Perversity, j: int) -> tuple:
    """Column slice of the Γ table at internal degree −j, for 0 ≤ j ≤ r."""
    if not fan.is_complete:
        raise FanNotComplete("sheaf cohomology slices need a complete fan")
    r = fan.rank
    if not 0 <= j <= r:
        raise JOutOfRange(f"j = {j} outside [0, {r}]")
    table = gamma_table(fan, build_ic(fan, p))
    return tuple(table.get((i, -j), 0) for i in range(r + 1))


@dataclass
class DualityReport:
    """Outcome of the global duality comparison; violations are (i, j, lhs, rhs)."""

    ok: bool
    violations: list = field(default_factory=list)


def serre_duality_report(fan: Fan, p: Perversity) -> DualityReport:
    """dim H^i(Ω_j(p)) = dim H^{r−i}(Ω_{r−j}(−p)) at all (i, j)."""
    if not fan.is_complete:
        raise FanNotComplete("the duality comparison needs a complete fan")
    r = fan.rank
    t1 = gamma_table(fan, build_ic(fan, p))
    t2 = gamma_table(fan, build_ic(fan, -p))
    violations = []
    for i in range(r + 1):
        for j in range(r + 1):
            lhs = t1.get((i, -j), 0)
            rhs = t2.get((r - i, -(r - j)), 0)
            if lhs != rhs:
                violations.append((i, j, lhs, rhs))
    return DualityReport(not violations, violations)


# ---------------------------------------------------------------------------
# combinatorial oracles


def _poly_add(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
            for i in range(n)]


def _poly_mul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _t_minus_1_pow(n: int) -> list:
    out = [1]
    for _ in range(n):
        out = _poly_mul(out, [-1, 1])
    return out


def h_vector_oracle(fan: Fan) -> tuple:
    """h-vector of a complete simplicial fan: h(t) = Σ_i f_{i−1} (t−1)^{r−i}."""
    if not fan.is_complete:
        raise FanNotComplete("h-vectors are defined for complete fans")
    r = fan.rank
    for c in fan.cones:
        if len(c.ray_ids) != c.dim:
            raise NotSimplicial(f"cone {c.id} has {len(c.ray_ids)} rays in dimension {c.dim}")
    h = [0]
    for i in range(r + 1):
        f = len(fan.cones_of_dim(i))
        h = _poly_add(h, [f * c for c in _t_minus_1_pow(r - i)])
    return tuple(h)


def _g_poly(fan: Fan, sid: int, cache: dict) -> list:
    """g-polynomial of a cone's face lattice (Stanley's recursion)."""
    if sid in cache:
        return cache[sid]
    d = fan.dim_of(sid)
    if d == 0:
        cache[sid] = [1]
        return cache[sid]
    h = [0]
    for tid in fan.faces(sid):
        if tid == sid:
            continue
        term = _poly_mul(_g_poly(fan, tid, cache),
                         _t_minus_1_pow(d - 1 - fan.dim_of(tid)))
        h = _poly_add(h, term)
    half = (d - 1) // 2
    g = [h[0] if h else 1]
    for i in range(1, half + 1):
        g.append((h[i] if i < len(h) else 0) - (h[i - 1] if i - 1 < len(h) else 0))
    while len(g) > 1 and g[-1] == 0:
        g.pop()
    cache[sid] = g
    return g


def generalized_h_vector(fan: Fan) -> tuple:
    """Generalized h-vector of a complete fan by Stanley's recursion.

    Agrees with h_vector_oracle on simplicial fans and computes the
    expected middle-perversity Betti numbers on arbitrary complete fans.
    """
    if not fan.is_complete:
        raise FanNotComplete("generalized h-vectors are defined for complete fans")
    r = fan.rank
    cache: dict = {}
    h = [0]
    for c in fan.cones:
        term = _poly_mul(_g_poly(fan, c.id, cache), _t_minus_1_pow(r - c.dim))
        h = _poly_add(h, term)
    h += [0] * (r + 1 - len(h))
    return tuple(h[: r + 1])
