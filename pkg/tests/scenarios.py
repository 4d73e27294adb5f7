"""Seeded generators of exact rational scenarios shared by the test modules."""

import random
from fractions import Fraction

from summexp.exponents import PartitionScenario


def rational_in(rng: random.Random, lo: Fraction, hi: Fraction, den: int = 24, closed_hi: bool = False) -> Fraction:
    """A rational strictly above ``lo`` and below (or at) ``hi``."""
    while True:
        d = rng.randint(1, den)
        x = Fraction(rng.randint(0, 10 * d * 4), d * 4) * (hi - lo) / 10 + lo
        if lo < x < hi or (closed_hi and x == hi):
            return x


def dps_scenario(rng: random.Random) -> PartitionScenario:
    m = rng.randint(2, 6)
    q = rational_in(rng, Fraction(2), Fraction(4), closed_hi=True) if rng.random() < 0.9 else Fraction(2)
    r = 1 / rational_in(rng, 1 / q, Fraction(1), closed_hi=True)
    return PartitionScenario.singletons(q, [r] * m, [1] * m)


def common_theta_scenario(rng: random.Random) -> tuple[int, Fraction, list, list, Fraction]:
    """Singleton blocks with ``1/r_k - 1/p_k = theta < 0`` and ``r_k in [1, q)``."""
    m = rng.randint(2, 6)
    q = rational_in(rng, Fraction(2), Fraction(4), closed_hi=True)
    theta = -rational_in(rng, Fraction(0), Fraction(1, 2))
    lo, hi = max(1 / q - theta, Fraction(0)), min(1 - theta, Fraction(1))
    inv_p = [rational_in(rng, lo, hi, closed_hi=True) for _ in range(m)]
    p = [1 / x for x in inv_p]
    r = [1 / (x + theta) for x in inv_p]
    return m, q, r, p, theta


def block_scenario(rng: random.Random, max_m: int = 6) -> PartitionScenario:
    """Random partition, ``r_k in [1, q)``, ``p_k >= 1``."""
    m = rng.randint(2, max_m)
    labels = [rng.randint(0, m - 1) for _ in range(m)]
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(labels, 1):
        groups.setdefault(lab, []).append(i)
    blocks = list(groups.values())
    if len(blocks) < 2:
        blocks = [[1], list(range(2, m + 1))]
    q = rational_in(rng, Fraction(2), Fraction(4), closed_hi=True)
    r = [1 / rational_in(rng, 1 / q, Fraction(1), closed_hi=True) for _ in blocks]
    p = [1 / rational_in(rng, Fraction(0), Fraction(1), closed_hi=True) for _ in blocks]
    return PartitionScenario(m, blocks, q, r, p)
