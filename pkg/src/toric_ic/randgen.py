"""Seeded random generators for modules, complexes and sheaf-like families.

Everything here is built compositionally from constructions that preserve
validity (free modules, duals, kernels, quotients, chained cokernel maps),
so the outputs always satisfy the module and complex axioms by construction
rather than by rejection sampling.  All randomness flows through an explicit
`random.Random` instance, so runs are reproducible from the seed.
"""

from __future__ import annotations

import random
from typing import Sequence

from .extalg import (
    ConeAlgebra,
    ExtModule,
    ExtModuleHom,
    degree_shift,
    det_space,
    direct_sum,
    dualize,
    free_module,
    hom_space,
    image_module,
    kernel_module,
    quotient_module,
    zero_module,
)
from .gmcx import GMComplex, GMComplexMap


def random_hom(v: ExtModule, w: ExtModule, rng: random.Random) -> ExtModuleHom:
    """Random integer combination of a basis of Hom(v, w)."""
    basis = hom_space(v, w)
    out = ExtModuleHom(v, w, {})
    for h in basis:
        c = rng.randint(-2, 2)
        if c:
            out = out + h.scale(c)
    return out


def random_module(alg: ConeAlgebra, rng: random.Random) -> ExtModule:
    """Small random module over alg, valid by construction."""
    blocks = []
    for _ in range(rng.randint(1, 2)):
        kind = rng.randrange(4)
        if kind == 0:
            b = free_module(alg)
        elif kind == 1:
            b = det_space(alg)
        elif kind == 2:
            b = dualize(free_module(alg))
        else:
            b = degree_shift(free_module(alg), rng.randint(-1, 1))
        if rng.random() < 0.3:
            b = degree_shift(b, rng.randint(-1, 1))
        blocks.append(b)
    total = blocks[0] if len(blocks) == 1 else direct_sum(blocks)[0]
    # occasionally pass to a kernel or cokernel of a random self-map
    if rng.random() < 0.5 and total.total_dim():
        f = random_hom(total, total, rng)
        if rng.random() < 0.5:
            total, _ = kernel_module(f)
        else:
            _, incl, _ = image_module(f)
            total, _ = quotient_module(incl.target, incl)
    if not total.total_dim():
        total = free_module(alg)
    return total


def random_gem_complex(fan, rng: random.Random):
    """Random valid fan-spread complex over the fan.

    Built bottom-up in cone dimension so every step preserves the interval
    sum rule: some cones receive a fresh unmixed random complex over their
    own algebra, others are filled by extension-by-zero (which creates the
    mixing maps), optionally followed by a cone-local gradual truncation.
    """
    from .gem import GemComplex, gt_pi_ge, j_shriek_extend, q_point

    L = q_point(fan)
    for c in sorted(fan.cones, key=lambda c: (c.dim, c.id)):
        if c.dim == 0:
            continue
        u = rng.random()
        if u < 0.30:
            continue
        if u < 0.85:
            L = j_shriek_extend(L, c.id)
            if rng.random() < 0.75:
                L = gt_pi_ge(rng.randint(0, c.dim), c.id, L)
        else:
            terms = dict(L.terms)
            terms[c.id] = random_gm_complex(ConeAlgebra(fan, c.id), rng,
                                            length=rng.randint(1, 2))
            L = GemComplex(fan, terms, L.mixing)
    return L


def random_gm_complex(alg: ConeAlgebra, rng: random.Random,
                      length: int | None = None) -> GMComplex:
    """Random complex with d² = 0 by chained factor-through-cokernel maps."""
    if length is None:
        length = rng.randint(1, 4)
    start = rng.randint(-2, 1)
    terms = {start: random_module(alg, rng)}
    diffs = {}
    prev_proj = None  # projection of terms[i−1] onto coker(d^{i−2})
    for i in range(start, start + length):
        nxt = random_module(alg, rng)
        terms[i + 1] = nxt
        if prev_proj is None:
            d = random_hom(terms[i], nxt, rng)
        else:
            h = random_hom(prev_proj.target, nxt, rng)
            d = h.compose(prev_proj)
        diffs[i] = d
        # cokernel of d, as a quotient of nxt
        im, incl, _ = image_module(d)
        _, prev_proj = quotient_module(nxt, incl)
    return GMComplex(alg, terms, diffs)
