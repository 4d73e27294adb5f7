"""Walsh polynomials, fattened product sets and Riesz products on ``{-1,1}^G``.

Generators are bit positions; a monomial (Walsh function ``w_A``) is the
bitmask of ``A`` and multiplication is XOR. A point ``omega`` of the group is
also a bitmask, with bit ``1`` meaning ``omega_n = -1``, so that
``w_A(omega) = (-1)^popcount(A & omega)``. Under this convention the vector
of values of ``f = sum c_A w_A`` over all ``2^G`` points is the unnormalized
Walsh-Hadamard transform of the coefficient array.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping

import numpy as np

from .errors import BudgetError, DomainError
from .extrational import as_ext, fmt

DEFAULT_EXACT_CAP = 2**24
DEFAULT_ALPHABET_BUDGET = 64
DEFAULT_TERM_CAP = 2**20
MAX_EXPAND_FACTORS = 20
_CHUNK_BITS = 20
_MC_BATCH = 4096


# --------------------------------------------------------------------------
# polynomials
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class WalshPolynomial:
    """``sum_A c_A w_A`` over generators ``0..G-1``; keys are bitmasks."""

    G: int
    terms: Mapping[int, float]

    def __post_init__(self):
        if self.G < 0:
            raise DomainError("alphabet size must be nonnegative")
        terms = {}
        for mask, c in dict(self.terms).items():
            mask = int(mask)
            if mask < 0 or mask >> self.G:
                raise DomainError(f"monomial {mask:#x} uses generators outside 0..{self.G - 1}")
            if c != 0:
                terms[mask] = c
        object.__setattr__(self, "terms", terms)

    @classmethod
    def character(cls, G: int, generators=()) -> WalshPolynomial:
        return cls(G, {monomial(generators): 1})

    def __len__(self) -> int:
        return len(self.terms)

    def scale(self, c) -> WalshPolynomial:
        return WalshPolynomial(self.G, {a: c * v for a, v in self.terms.items()})

    def __mul__(self, other: WalshPolynomial) -> WalshPolynomial:
        out: dict[int, float] = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                out[a ^ b] = out.get(a ^ b, 0) + x * y
        return WalshPolynomial(max(self.G, other.G), out)

    def coefficient(self, mask: int):
        return self.terms.get(mask, 0)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if self.G > 64:
            raise BudgetError(f"numerical evaluation supports G <= 64, got {self.G}")
        masks = np.fromiter(self.terms.keys(), dtype=np.uint64, count=len(self.terms))
        coefs = np.fromiter((float(c) for c in self.terms.values()), dtype=np.float64, count=len(self.terms))
        return masks, coefs

    def evaluate(self, points) -> np.ndarray:
        """Values at the given points (bitmasks)."""
        masks, coefs = self.arrays()
        pts = np.asarray(points, dtype=np.uint64).reshape(-1)
        out = np.empty(pts.size)
        for lo in range(0, pts.size, _MC_BATCH):
            chunk = pts[lo:lo + _MC_BATCH]
            parity = np.bitwise_count(chunk[:, None] & masks[None, :]) & 1
            out[lo:lo + _MC_BATCH] = (1.0 - 2.0 * parity) @ coefs
        return out

    def coefficient_norm(self, e: float) -> float:
        """``l_e`` norm of the coefficient sequence."""
        return _lp(np.abs(self.arrays()[1]) if self.G <= 64 else np.array([abs(float(c)) for c in self.terms.values()]), e)


def monomial(generators) -> int:
    mask = 0
    for g in generators:
        mask ^= 1 << int(g)
    return mask


def _lp(x: np.ndarray, e: float) -> float:
    if x.size == 0:
        return 0.0
    if math.isinf(e):
        return float(x.max())
    top = float(x.max())
    if top == 0:
        return 0.0
    return top * float(np.sum((x / top) ** e)) ** (1.0 / e)


# --------------------------------------------------------------------------
# fattened product sets
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaSpec:
    """Parameters ``(m, k, N)`` of one fattened set; ``p = 2m/(m+k)``."""

    m: int
    k: int
    N: int = 1

    def __post_init__(self):
        if self.m < 1 or not 1 <= self.k <= self.m or self.N < 1:
            raise DomainError(f"need m >= 1, 1 <= k <= m, N >= 1; got {self}")

    @property
    def p(self) -> Fraction:
        return Fraction(2 * self.m, self.m + self.k)

    @property
    def n(self) -> int:
        return math.comb(self.m, self.k)

    @property
    def subsets(self) -> list[tuple[int, ...]]:
        return list(itertools.combinations(range(self.m), self.k))

    @property
    def alphabet(self) -> int:
        """Generators used: one per (block, point of ``{1..N}^k``)."""
        return self.n * self.N**self.k


def _rank(idx: tuple[int, ...], N: int) -> int:
    r = 0
    for i in idx:
        r = r * N + (i - 1)
    return r


def build_lambda(spec: LambdaSpec, offset: int = 0, alphabet_budget: int = DEFAULT_ALPHABET_BUDGET) -> dict[tuple[int, ...], int]:
    """Map each ``j`` in ``{1..N}^m`` (1-based) to the monomial ``prod_l g_{l, j restricted to S_l}``.

    Generator ``(l, i)`` sits at bit ``offset + l * N^k + rank(i)``.
    """
    need = offset + spec.alphabet
    if need > alphabet_budget:
        raise BudgetError(f"alphabet size {need} exceeds budget {alphabet_budget}")
    if spec.N**spec.m > DEFAULT_TERM_CAP:
        raise BudgetError(f"{spec.N**spec.m} monomials exceed cap {DEFAULT_TERM_CAP}")
    block = spec.N**spec.k
    subsets = spec.subsets
    out = {}
    for j in itertools.product(range(1, spec.N + 1), repeat=spec.m):
        mask = 0
        for l, S in enumerate(subsets):
            mask |= 1 << (offset + l * block + _rank(tuple(j[i] for i in S), spec.N))
        out[j] = mask
    if len(set(out.values())) != len(out):
        raise AssertionError("monomial map is not injective")
    return out


def group_specs(spec1: LambdaSpec, spec2: LambdaSpec) -> tuple[LambdaSpec, LambdaSpec]:
    """Specs with the ranges ``N1 = N^k2`` and ``N2 = N^k1`` from a common base ``N``."""
    if spec1.N != spec2.N:
        raise DomainError(f"both groups need the same base N, got {spec1.N} and {spec2.N}")
    N = spec1.N
    return replace(spec1, N=N**spec2.k), replace(spec2, N=N**spec1.k)


def build_fN(
    spec1: LambdaSpec,
    spec2: LambdaSpec,
    alphabet_budget: int = DEFAULT_ALPHABET_BUDGET,
    term_cap: int = DEFAULT_TERM_CAP,
) -> WalshPolynomial:
    """Sum of all products of one group-1 and one group-2 monomial, coefficients 1."""
    g1, g2 = group_specs(spec1, spec2)
    count = g1.N**g1.m * g2.N**g2.m
    if count > term_cap:
        raise BudgetError(f"{count} terms exceed cap {term_cap}")
    lam1 = build_lambda(g1, 0, alphabet_budget)
    lam2 = build_lambda(g2, g1.alphabet, alphabet_budget)
    terms = {a ^ b: 1 for a in lam1.values() for b in lam2.values()}
    if len(terms) != count:
        raise AssertionError("product monomials collide")
    return WalshPolynomial(g1.alphabet + g2.alphabet, terms)


# --------------------------------------------------------------------------
# Riesz products
# --------------------------------------------------------------------------


def _gf2_basis(vectors) -> dict[int, int]:
    """Reduced basis keyed by leading bit; raises if the vectors are dependent."""
    basis: dict[int, int] = {}
    for v in vectors:
        x = v
        while x:
            top = x.bit_length() - 1
            if top not in basis:
                basis[top] = x
                break
            x ^= basis[top]
        else:
            raise DomainError(f"factor character {v:#x} is a product of earlier factors")
    return basis


def _in_span(basis: Mapping[int, int], x: int) -> bool:
    while x:
        top = x.bit_length() - 1
        if top not in basis:
            return False
        x ^= basis[top]
    return True


@dataclass(frozen=True)
class RieszProduct:
    """``prod_i (1 + w_{factors[i]})`` kept in factored form.

    Factors must be GF(2)-independent, so the expansion has ``2^M`` distinct
    characters, each with coefficient 1.
    """

    G: int
    factors: tuple[int, ...]
    _basis: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        factors = tuple(int(f) for f in self.factors)
        if any(f <= 0 or f >> self.G for f in factors):
            raise DomainError("factors must be nonempty monomials inside the alphabet")
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "_basis", _gf2_basis(factors))

    @property
    def M(self) -> int:
        return len(self.factors)

    def coefficient(self, mask: int) -> int:
        return 1 if _in_span(self._basis, mask) else 0

    def expand(self, max_factors: int = MAX_EXPAND_FACTORS) -> WalshPolynomial:
        if self.M > max_factors:
            raise BudgetError(f"expanding {self.M} factors gives 2^{self.M} terms (cap 2^{max_factors})")
        terms = {0: 1}
        for f in self.factors:
            terms.update({a ^ f: 1 for a in list(terms)})
        return WalshPolynomial(self.G, terms)

    def evaluate(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.uint64).reshape(-1)
        out = np.ones(pts.size)
        for f in self.factors:
            parity = np.bitwise_count(pts & np.uint64(f)) & 1
            out *= 2.0 - 2.0 * parity
        return out


def build_riesz(spec1: LambdaSpec, spec2: LambdaSpec, alphabet_budget: int = DEFAULT_ALPHABET_BUDGET) -> RieszProduct:
    """One factor ``1 + g`` per generator of both groups."""
    g1, g2 = group_specs(spec1, spec2)
    G = g1.alphabet + g2.alphabet
    if G > alphabet_budget:
        raise BudgetError(f"alphabet size {G} exceeds budget {alphabet_budget}")
    return RieszProduct(G, tuple(1 << g for g in range(G)))


def riesz_l2_norm(R: RieszProduct) -> float:
    """``2^(M/2)`` by Parseval: ``2^M`` distinct characters with coefficient 1."""
    return 2.0 ** (R.M / 2)


def riesz_integral(R: RieszProduct) -> int:
    return R.coefficient(0)


def inner_product(R: RieszProduct, f: WalshPolynomial):
    """``int R f = sum_A f^(A) R^(A)``, exact for exact coefficients."""
    total = 0
    for mask, c in f.terms.items():
        if R.coefficient(mask):
            total += c
    return total


# --------------------------------------------------------------------------
# L^s norms on the group
# --------------------------------------------------------------------------


def _fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along a power-of-two axis (in place)."""
    n = a.size
    h = 1
    while h < n:
        v = a.reshape(-1, 2, h)
        x = v[:, 0, :].copy()
        v[:, 0, :] += v[:, 1, :]
        v[:, 1, :] = x - v[:, 1, :]
        h *= 2
    return a


def values_on_group(f: WalshPolynomial, cap: int = DEFAULT_EXACT_CAP) -> np.ndarray:
    """All ``2^G`` values, indexed by the point bitmask."""
    if 2**f.G > cap:
        raise BudgetError(f"2^{f.G} points exceed exact cap {cap}")
    return np.concatenate(list(_value_chunks(f)))


def _chunk_values(masks, coefs, low_bits: int, high: int) -> np.ndarray:
    sign = 1.0 - 2.0 * (np.bitwise_count((masks >> np.uint64(low_bits)) & np.uint64(high)) & 1)
    low = (masks & np.uint64((1 << low_bits) - 1)).astype(np.int64)
    d = np.bincount(low, weights=coefs * sign, minlength=1 << low_bits).astype(np.float64)
    return _fwht(d)


def _value_chunks(f: WalshPolynomial, workers: int = 1):
    masks, coefs = f.arrays()
    low_bits = min(f.G, _CHUNK_BITS)
    highs = range(1 << (f.G - low_bits))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            yield from pool.map(lambda h: _chunk_values(masks, coefs, low_bits, h), highs)
    else:
        for h in highs:
            yield _chunk_values(masks, coefs, low_bits, h)


@dataclass(frozen=True)
class NormEstimate:
    value: float
    stderr: float | None
    method: str
    points: int

    def to_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "method": self.method, "points": self.points}


def _power_mean(chunks, s: float) -> tuple[float, int]:
    """``(mean |v|^s)^(1/s)`` over streamed chunks, with a running max rescale."""
    top, acc, count = 0.0, 0.0, 0
    for v in chunks:
        v = np.abs(v)
        count += v.size
        if math.isinf(s):
            top = max(top, float(v.max()))
            continue
        m = float(v.max())
        if m == 0:
            continue
        if m > top:
            acc = acc * (top / m) ** s if top > 0 else 0.0
            top = m
        acc += float(np.sum((v / top) ** s))
    if math.isinf(s) or top == 0:
        return top, count
    return top * (acc / count) ** (1.0 / s), count


def lp_norm_on_group(
    f: WalshPolynomial,
    s: float,
    method: str = "exact",
    samples: int = 100_000,
    seed: int = 0,
    cap: int = DEFAULT_EXACT_CAP,
    workers: int = 1,
) -> NormEstimate:
    """``||f||_{L^s}`` for the Haar probability on ``{-1,1}^G``.

    ``exact`` enumerates all points with a chunked fast Walsh-Hadamard
    transform; ``montecarlo`` samples uniform points and propagates the
    standard error of the ``s``-th moment (delta method).
    """
    if not s >= 1:
        raise DomainError(f"need s >= 1, got {s}")
    if method == "exact":
        if 2**f.G > cap:
            raise BudgetError(f"2^{f.G} points exceed exact cap {cap}; use montecarlo")
        value, count = _power_mean(_value_chunks(f, workers), s)
        return NormEstimate(value, None, "exact", count)
    if method != "montecarlo":
        raise DomainError(f"unknown method {method!r}")
    if math.isinf(s):
        raise DomainError("Monte Carlo needs finite s")
    if samples < 2:
        raise DomainError("need at least two samples")
    rng = np.random.default_rng(seed)
    pts = rng.integers(0, 2**f.G, size=samples, dtype=np.uint64)
    v = np.abs(f.evaluate(pts))
    top = float(v.max())
    if top == 0:
        return NormEstimate(0.0, 0.0, "montecarlo", samples)
    y = (v / top) ** s
    mu = float(y.mean())
    se_mu = float(y.std(ddof=1)) / math.sqrt(samples)
    value = top * mu ** (1.0 / s)
    stderr = top * mu ** (1.0 / s - 1.0) * se_mu / s
    return NormEstimate(value, stderr, "montecarlo", samples)


def sidon_ratio(f: WalshPolynomial, s: float, p: float, **norm_kw) -> float:
    """``||f||_{L^s} / (sqrt(s) ||f^||_{2p/(3p-2)})``."""
    p = float(p)
    if not 1 <= p < 2:
        raise DomainError(f"need p in [1, 2), got {p}")
    num = lp_norm_on_group(f, s, **norm_kw).value
    return num / (math.sqrt(s) * f.coefficient_norm(2 * p / (3 * p - 2)))


def sidon_margin(p, m1: int, k1: int, m2: int, k2: int):
    """``(1/p - 1/2)(m1 k2 + m2 k1) - k1 k2 / 2``; exact for rational ``p``."""
    if isinstance(p, float):
        inv, half, corner = 1.0 / p, 0.5, k1 * k2 / 2
    else:
        inv, half, corner = as_ext(p).recip(), Fraction(1, 2), Fraction(k1 * k2, 2)
    if not half < inv <= 1:
        raise DomainError(f"need p in [1, 2), got {p}")
    return (inv - half) * (m1 * k2 + m2 * k1) - corner


def sidon_threshold(m1: int, k1: int, m2: int, k2: int) -> Fraction:
    """Exponent with ``1/p = 1/2 + 1/(2R)``, ``R = m1/k1 + m2/k2``."""
    R = Fraction(m1, k1) + Fraction(m2, k2)
    return 1 / (Fraction(1, 2) + 1 / (2 * R))


# --------------------------------------------------------------------------
# witness report
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessReport:
    N: int
    m1: int
    k1: int
    m2: int
    k2: int
    p: Fraction
    s: int
    alphabet: int
    terms: int
    inner: int
    riesz_integral: int
    riesz_l2: float
    f_l2: float
    coef_norm: float
    riesz_dual_bound: float
    ls_lower: float
    ratio_lower: float
    ls: NormEstimate | None
    ratio: float | None
    margin: Fraction

    @property
    def interpretation(self) -> str:
        if self.margin > 0:
            return "margin > 0: ratio lower bound grows with N, the product set is not p-Sidon"
        if self.margin == 0:
            return "margin = 0: ratio lower bound stays bounded (threshold exponent)"
        return "margin < 0: ratio lower bound decays with N, no obstruction from this witness"

    def to_dict(self) -> dict:
        return {
            "N": self.N, "m1": self.m1, "k1": self.k1, "m2": self.m2, "k2": self.k2,
            "p": fmt(self.p), "s": self.s, "alphabet": self.alphabet, "terms": self.terms,
            "inner_product": self.inner, "riesz_integral": self.riesz_integral,
            "riesz_l2": self.riesz_l2, "f_l2": self.f_l2, "coef_norm": self.coef_norm,
            "riesz_dual_bound": self.riesz_dual_bound, "ls_lower_bound": self.ls_lower,
            "ratio_lower_bound": self.ratio_lower,
            "ls": self.ls.to_dict() if self.ls else None, "ratio": self.ratio,
            "margin": fmt(self.margin), "margin_decimal": float(self.margin),
            "interpretation": self.interpretation,
        }


def witness_report(
    N: int,
    spec1: LambdaSpec,
    spec2: LambdaSpec,
    p,
    exact_cap: int = DEFAULT_EXACT_CAP,
    mc_samples: int | None = None,
    seed: int = 0,
    alphabet_budget: int = DEFAULT_ALPHABET_BUDGET,
) -> WitnessReport:
    """The whole pipeline at ``s = N^(k1 k2)``.

    Hoelder against the Riesz product and interpolation between ``L^1`` and
    ``L^2`` give ``||f_N||_s >= <R_N, f_N> / 2^(M/s)``.
    """
    p = as_ext(p)
    pf = p.fraction
    spec1, spec2 = replace(spec1, N=N), replace(spec2, N=N)
    f = build_fN(spec1, spec2, alphabet_budget)
    R = build_riesz(spec1, spec2, alphabet_budget)
    s = N ** (spec1.k * spec2.k)
    inner = inner_product(R, f)
    dual = 2.0 ** (R.M / s)
    ls_lower = inner / dual
    coef = f.coefficient_norm(float(2 * pf / (3 * pf - 2)))
    denom = math.sqrt(s) * coef
    ls = None
    if 2**f.G <= exact_cap:
        ls = lp_norm_on_group(f, s, "exact", cap=exact_cap)
    elif mc_samples:
        ls = lp_norm_on_group(f, s, "montecarlo", samples=mc_samples, seed=seed)
    return WitnessReport(
        N=N, m1=spec1.m, k1=spec1.k, m2=spec2.m, k2=spec2.k, p=pf, s=s,
        alphabet=f.G, terms=len(f), inner=inner, riesz_integral=riesz_integral(R),
        riesz_l2=riesz_l2_norm(R), f_l2=f.coefficient_norm(2.0), coef_norm=coef,
        riesz_dual_bound=dual, ls_lower=ls_lower, ratio_lower=ls_lower / denom,
        ls=ls, ratio=(ls.value / denom) if ls else None,
        margin=sidon_margin(p, spec1.m, spec1.k, spec2.m, spec2.k),
    )
