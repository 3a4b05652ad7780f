"""Shared generators for the property suites."""

from __future__ import annotations

import random
from typing import List, Optional, Tuple

from crystal_forge import (
    DiagramAutomorphism,
    ModpCrystal,
    MonomialCrystal,
    ShimuraTypeSpec,
    minuscule_nodes,
    witt_ring,
)

TYPE_POOL = ["A", "B", "C", "D", "E6", "E7"]


def random_spec(rng: random.Random, lie_type: str) -> ShimuraTypeSpec:
    """A random valid classification tuple of the given Lie type."""
    if lie_type == "A":
        rank = rng.randint(1, 6)
    elif lie_type == "B":
        rank = rng.randint(1, 5)
    elif lie_type == "C":
        rank = rng.randint(3, 5)
    elif lie_type == "D":
        rank = rng.randint(4, 6)
    else:
        rank = 6 if lie_type == "E6" else 7
    n = rng.randint(1, 4)

    taus = [DiagramAutomorphism.identity(lie_type, rank)]
    if (lie_type == "A" and rank >= 2) or lie_type in ("D", "E6"):
        taus.append(DiagramAutomorphism.flip(lie_type, rank))
    if (lie_type, rank) == ("D", 4):
        taus.append(DiagramAutomorphism.triality(lie_type, rank))
    tau = rng.choice(taus)

    nodes = sorted(minuscule_nodes(lie_type, rank))
    while True:
        eta = tuple(rng.choice([0] + nodes) for _ in range(n))
        if any(eta):
            break
    return ShimuraTypeSpec(lie_type, rank, n, tau, eta)


def random_monomial_crystal(
    rng: random.Random, size: int, exp_range: Tuple[int, int] = (0, 1)
) -> MonomialCrystal:
    labels = list(range(size))
    perm = labels[:]
    rng.shuffle(perm)
    step = {l: perm[i] for i, l in enumerate(labels)}
    exp = {l: rng.randint(*exp_range) for l in labels}
    return MonomialCrystal(labels, step, exp)


def random_modp_unit(rng: random.Random, p: int, r: int, d: int) -> List[List[int]]:
    """A random invertible d x d matrix over F_{p^r} (as integer coeff lists)."""
    from crystal_forge.modp import _rref

    ring = witt_ring(p, r, 1)
    while True:
        M = [
            [ring.element([rng.randrange(p) for _ in range(r)]) for _ in range(d)]
            for _ in range(d)
        ]
        if len(_rref(ring, [list(row) for row in M])) == d:
            return [[list(e) for e in row] for row in M]


def random_dieudonne_modp(
    rng: random.Random, p: int, d: int, r: int = 1
) -> ModpCrystal:
    """A mod-p crystal with verschiebung: a random 0/1-exponent monomial
    lift at precision 2, conjugated by a random unit."""
    from crystal_forge.modp import ModpCrystal

    mc = random_monomial_crystal(rng, d)
    lift = mc.lift_to_witt(p, 2, r)
    c = ModpCrystal.from_lift(lift)
    U = random_modp_unit(rng, p, r, d)
    return c.conjugate(U)
