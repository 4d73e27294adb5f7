import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from summexp import sidon_lab as sl
from summexp.errors import BudgetError, DomainError

L = sl.LambdaSpec


def brute_values(f: sl.WalshPolynomial) -> np.ndarray:
    """Direct evaluation of every character at every point; no transforms."""
    out = []
    for x in range(2**f.G):
        total = 0.0
        for mask, c in f.terms.items():
            sign = 1
            for g in range(f.G):
                if mask >> g & 1 and x >> g & 1:
                    sign = -sign
            total += c * sign
        out.append(total)
    return np.array(out)


def brute_norm(f, s):
    v = np.abs(brute_values(f))
    return float(np.mean(v**s) ** (1 / s))


polys = st.integers(1, 9).flatmap(
    lambda G: st.dictionaries(st.integers(0, 2**G - 1), st.floats(-3, 3, allow_nan=False), min_size=1, max_size=12).map(
        lambda d: sl.WalshPolynomial(G, d)
    )
)


# -- fattened sets ---------------------------------------------------------------


def test_build_lambda_examples():
    lam = sl.build_lambda(L(1, 1, 2))
    assert lam == {(1,): 0b01, (2,): 0b10}
    lam = sl.build_lambda(L(2, 1, 2))
    assert len(lam) == 4
    assert all(bin(mask).count("1") == 2 for mask in lam.values())
    assert len(set(sl.build_lambda(L(2, 1, 3)).values())) == 9


def test_build_lambda_offset_and_budget():
    lam = sl.build_lambda(L(2, 1, 2), offset=10)
    assert min(m.bit_length() - 1 for m in lam.values()) >= 10
    with pytest.raises(BudgetError, match="70"):
        sl.build_lambda(L(1, 1, 10), offset=60)


@pytest.mark.parametrize("m, k, N", [(1, 1, 4), (2, 1, 3), (2, 2, 2), (3, 2, 2), (3, 1, 2)])
def test_lambda_injective(m, k, N):
    lam = sl.build_lambda(L(m, k, N))
    assert len(set(lam.values())) == N**m
    assert all(bin(mask).count("1") == math.comb(m, k) for mask in lam.values())


def test_lambda_spec_derived():
    spec = L(3, 2)
    assert spec.p == Fraction(6, 5)
    assert spec.n == 3
    with pytest.raises(DomainError):
        L(1, 2)


def test_build_fN_basic():
    f = sl.build_fN(L(1, 1, 2), L(1, 1, 2))
    assert f.G == 4 and len(f) == 4
    assert all(bin(a & 0b0011).count("1") == 1 and bin(a & 0b1100).count("1") == 1 for a in f.terms)
    assert f.coefficient_norm(2) == pytest.approx(2)


@pytest.mark.parametrize("m1, k1, m2, k2, N", [(1, 1, 1, 1, 3), (2, 1, 1, 1, 2), (2, 2, 1, 1, 2), (2, 1, 2, 1, 2)])
def test_fN_counts_and_norms(m1, k1, m2, k2, N):
    f = sl.build_fN(L(m1, k1, N), L(m2, k2, N))
    e = m1 * k2 + m2 * k1
    assert len(f) == N**e
    p = 4 / 3
    assert f.coefficient_norm(2 * p / (3 * p - 2)) == pytest.approx(N ** (e * (3 * p - 2) / (2 * p)), rel=1e-12)


def test_fN_needs_common_base():
    with pytest.raises(DomainError):
        sl.build_fN(L(1, 1, 2), L(1, 1, 3))


# -- Riesz products --------------------------------------------------------------


def test_riesz_basic():
    R = sl.build_riesz(L(1, 1, 2), L(1, 1, 2))
    assert R.M == 4
    assert sl.riesz_l2_norm(R) == 4
    assert sl.riesz_integral(R) == 1
    vals = R.evaluate(np.arange(2**R.G))
    assert vals.min() >= 0
    assert math.sqrt(np.mean(vals**2)) == pytest.approx(4, rel=1e-12)
    assert np.mean(vals) == 1


def test_riesz_small_products():
    assert sl.riesz_l2_norm(sl.RieszProduct(1, (1,))) == pytest.approx(math.sqrt(2))
    assert sl.riesz_l2_norm(sl.RieszProduct(0, ())) == 1


def test_riesz_rejects_dependent_factors():
    with pytest.raises(DomainError):
        sl.RieszProduct(3, (0b011, 0b110, 0b101))


def test_riesz_expansion_matches_evaluation():
    R = sl.RieszProduct(5, (0b00011, 0b00110, 0b11000))
    E = R.expand()
    assert len(E) == 8 and set(E.terms.values()) == {1}
    pts = np.arange(32)
    assert np.allclose(E.evaluate(pts), R.evaluate(pts))
    assert all(R.coefficient(a) == 1 for a in E.terms)
    assert R.coefficient(0b00001) == 0


@pytest.mark.parametrize("N", [2, 3, 4])
def test_riesz_positive_with_unit_mean(N):
    R = sl.build_riesz(L(1, 1, N), L(1, 1, N))
    vals = R.evaluate(np.arange(2**R.G))
    assert vals.min() >= -1e-12
    assert np.mean(vals) == pytest.approx(1, abs=1e-12)
    assert math.sqrt(np.mean(vals**2)) == pytest.approx(sl.riesz_l2_norm(R), rel=1e-12)


@pytest.mark.parametrize("m1, k1, m2, k2, N", [(1, 1, 1, 1, 2), (1, 1, 1, 1, 4), (2, 1, 1, 1, 2), (2, 2, 1, 1, 2), (2, 1, 2, 2, 2)])
def test_inner_product_count(m1, k1, m2, k2, N):
    s1, s2 = L(m1, k1, N), L(m2, k2, N)
    f, R = sl.build_fN(s1, s2), sl.build_riesz(s1, s2)
    assert sl.inner_product(R, f) == N ** (m1 * k2 + m2 * k1)


def test_inner_product_against_enumeration():
    s1, s2 = L(2, 1, 2), L(1, 1, 2)
    f, R = sl.build_fN(s1, s2), sl.build_riesz(s1, s2)
    pts = np.arange(2**f.G)
    assert sl.inner_product(R, f) == 8
    assert np.mean(R.evaluate(pts) * f.evaluate(pts)) == pytest.approx(8, abs=1e-9)
    assert sl.inner_product(R, sl.WalshPolynomial.character(R.G)) == 1


# -- norms on the group ------------------------------------------------------------


def test_lp_norm_examples():
    chi = sl.WalshPolynomial.character(5, [0, 3])
    for s in (1, 2, 7.5):
        assert sl.lp_norm_on_group(chi, s).value == pytest.approx(1)
    f = sl.WalshPolynomial(1, {0: 1, 1: 1})
    assert sl.lp_norm_on_group(f, 2).value == pytest.approx(math.sqrt(2))
    fN = sl.build_fN(L(1, 1, 2), L(1, 1, 2))
    assert sl.lp_norm_on_group(fN, 2).value == pytest.approx(2, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(polys, st.sampled_from([1.0, 2.0, 3.0, 6.5]))
def test_exact_norm_matches_brute_force(f, s):
    assert sl.lp_norm_on_group(f, s).value == pytest.approx(brute_norm(f, s), rel=1e-10, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(polys)
def test_parseval(f):
    l2 = sl.lp_norm_on_group(f, 2).value
    assert l2 == pytest.approx(f.coefficient_norm(2), rel=1e-12)


def test_chunked_transform_matches_single_pass(monkeypatch):
    rng = np.random.default_rng(0)
    f = sl.WalshPolynomial(11, {int(a): float(c) for a, c in zip(rng.integers(0, 2**11, 30), rng.standard_normal(30))})
    full = sl.values_on_group(f)
    assert np.allclose(full, brute_values(f))
    monkeypatch.setattr(sl, "_CHUNK_BITS", 4)
    assert np.allclose(sl.values_on_group(f), full)
    assert sl.lp_norm_on_group(f, 3.0, workers=3).value == pytest.approx(brute_norm(f, 3.0), rel=1e-12)


def test_large_s_is_stable():
    fN = sl.build_fN(L(1, 1, 4), L(1, 1, 4))
    big = sl.lp_norm_on_group(fN, 400.0).value
    assert np.isfinite(big)
    assert big <= len(fN) + 1e-9
    assert sl.lp_norm_on_group(fN, math.inf).value == len(fN)


def test_exact_cap():
    f = sl.WalshPolynomial.character(30, [29])
    with pytest.raises(BudgetError):
        sl.lp_norm_on_group(f, 2)
    est = sl.lp_norm_on_group(f, 2, "montecarlo", samples=100)
    assert est.value == pytest.approx(1)


def test_montecarlo_within_four_stderr():
    rng = np.random.default_rng(9)
    hits, trials = 0, 40
    for trial in range(trials):
        f = sl.WalshPolynomial(10, {int(a): float(c) for a, c in zip(rng.integers(0, 1024, 6), rng.standard_normal(6))})
        exact = sl.lp_norm_on_group(f, 3.0).value
        mc = sl.lp_norm_on_group(f, 3.0, "montecarlo", samples=4000, seed=trial)
        hits += abs(mc.value - exact) <= 4 * mc.stderr
    assert hits >= 0.95 * trials


def test_montecarlo_is_seeded():
    f = sl.build_fN(L(1, 1, 3), L(1, 1, 3))
    a = sl.lp_norm_on_group(f, 3, "montecarlo", samples=500, seed=4)
    b = sl.lp_norm_on_group(f, 3, "montecarlo", samples=500, seed=4)
    assert a == b


# -- ratio, margin, witness --------------------------------------------------------


def test_sidon_ratio_examples():
    chi = sl.WalshPolynomial.character(3, [1])
    assert sl.sidon_ratio(chi, 4.0, 4 / 3) == pytest.approx(0.5)
    f = sl.build_fN(L(1, 1, 2), L(1, 1, 2))
    assert sl.sidon_ratio(f.scale(3.7), 2.0, 4 / 3) == pytest.approx(sl.sidon_ratio(f, 2.0, 4 / 3))
    with pytest.raises(DomainError):
        sl.sidon_ratio(chi, 2.0, 2.0)


def test_sidon_margin_examples():
    assert sl.sidon_margin(Fraction(4, 3), 1, 1, 1, 1) == 0
    assert sl.sidon_margin(Fraction(5, 4), 1, 1, 1, 1) == Fraction(1, 10)
    assert sl.sidon_margin("6/5", 1, 1, 1, 1) == Fraction(1, 6)
    assert sl.sidon_margin("3/2", 1, 1, 1, 1) == Fraction(-1, 6)
    assert sl.sidon_margin(4 / 3, 1, 1, 1, 1) == pytest.approx(0, abs=1e-15)


@pytest.mark.parametrize("m1, k1, m2, k2", [(1, 1, 1, 1), (2, 1, 1, 1), (3, 2, 2, 1), (4, 4, 5, 2)])
def test_margin_vanishes_at_threshold(m1, k1, m2, k2):
    from summexp.exponents import sidon_product_exponent

    p = sl.sidon_threshold(m1, k1, m2, k2)
    assert sl.sidon_margin(p, m1, k1, m2, k2) == 0
    assert p == sidon_product_exponent([Fraction(2 * m1, m1 + k1), Fraction(2 * m2, m2 + k2)])


def test_witness_exact_small_case():
    rep = sl.witness_report(2, L(1, 1), L(1, 1), "4/3")
    assert rep.inner == 4 and rep.riesz_integral == 1 and rep.margin == 0 and rep.s == 2
    assert rep.ls is not None and rep.ls.stderr is None
    assert rep.ls.value >= rep.ls_lower * (1 - 1e-12)
    d = rep.to_dict()
    assert d["margin"] == "0" and "threshold" in d["interpretation"]


@pytest.mark.parametrize("p, sign", [("6/5", 1), ("3/2", -1), ("4/3", 0)])
def test_witness_trend_follows_margin(p, sign):
    seq = [sl.witness_report(N, L(1, 1), L(1, 1), p).ratio_lower for N in (2, 3, 4)]
    steps = np.diff(np.log(seq))
    if sign == 0:
        assert np.allclose(steps, 0, atol=1e-12)
    else:
        assert np.all(np.sign(steps) == sign)


def test_witness_lower_bound_below_exact_norm():
    for N in (2, 3, 4):
        rep = sl.witness_report(N, L(1, 1), L(1, 1), "3/2")
        assert rep.ls.value >= rep.ls_lower * (1 - 1e-12)


def test_witness_montecarlo_fallback():
    rep = sl.witness_report(3, L(1, 1), L(1, 1), "4/3", exact_cap=16, mc_samples=2000)
    assert rep.ls.method == "montecarlo" and rep.ls.stderr is not None
    rep = sl.witness_report(3, L(1, 1), L(1, 1), "4/3", exact_cap=16)
    assert rep.ls is None and rep.ratio is None
