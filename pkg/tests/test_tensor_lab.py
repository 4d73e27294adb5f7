import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from summexp import tensor_lab as tl
from summexp.errors import DomainError

positive = st.floats(min_value=1e-3, max_value=1.0, allow_nan=False)


def tensors(max_axes=3, max_side=4):
    shapes = hnp.array_shapes(min_dims=2, max_dims=max_axes, min_side=1, max_side=max_side)
    return hnp.arrays(np.float64, shapes, elements=positive).map(tl.NonnegTensor)


# -- construction ------------------------------------------------------------


def test_tensor_rejects_bad_entries():
    with pytest.raises(DomainError):
        tl.NonnegTensor(np.array([[1.0, -1.0]]))
    with pytest.raises(DomainError):
        tl.NonnegTensor(np.array([np.nan]))
    with pytest.raises(DomainError):
        tl.NonnegTensor(np.zeros((0, 2)))
    with pytest.raises(DomainError):
        tl.NonnegTensor.from_flat([2, 2], [1, 2, 3])


def test_tensor_is_immutable_row_major():
    t = tl.NonnegTensor.from_flat([2, 3], [0, 1, 2, 3, 4, 5])
    assert t.data[1, 0] == 3
    with pytest.raises(ValueError):
        t.data[0, 0] = 7


# -- mixed norms ---------------------------------------------------------------


def test_mixed_norm_examples():
    t = tl.NonnegTensor(np.ones((2, 2)))
    assert tl.mixed_norm(t, tl.MixedNormSpec(((0,), (1,)), (1, 2))) == pytest.approx(2 * math.sqrt(2), rel=1e-15)
    one = tl.NonnegTensor(np.array([[[3.5]]]))
    assert tl.mixed_norm(one, tl.MixedNormSpec(((2,), (0, 1)), (1, math.inf))) == 3.5
    arr = np.arange(6.0).reshape(2, 3)
    spec = tl.MixedNormSpec(((1,), (0,)), (math.inf, 1))
    assert tl.mixed_norm(arr, spec) == 7  # max over columns of column sums


def test_mixed_norm_rejects_bad_groups():
    t = tl.NonnegTensor(np.ones((2, 2)))
    with pytest.raises(DomainError):
        tl.mixed_norm(t, tl.MixedNormSpec(((0,),), (2,)))
    with pytest.raises(DomainError):
        tl.MixedNormSpec(((0,), (1,)), (0, 2))


@settings(max_examples=50, deadline=None)
@given(tensors(), st.floats(min_value=0.5, max_value=7))
def test_single_group_is_plain_norm(t, e):
    spec = tl.MixedNormSpec((tuple(range(t.ndim)),), (e,))
    assert tl.mixed_norm(t, spec) == pytest.approx(np.sum(t.data**e) ** (1 / e), rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(tensors(), st.floats(min_value=1, max_value=5), st.floats(min_value=1, max_value=5), st.data())
def test_mixed_norm_monotone_in_entries(t, e1, e2, data):
    spec = tl.MixedNormSpec(((0,), tuple(range(1, t.ndim))), (e1, e2))
    idx = tuple(data.draw(st.integers(0, d - 1)) for d in t.dims)
    bumped = np.array(t.data)
    bumped[idx] += data.draw(st.floats(min_value=1e-3, max_value=2))
    assert tl.mixed_norm(bumped, spec) >= tl.mixed_norm(t, spec) * (1 - 1e-14)


def test_mixed_norm_nesting_collapses():
    rng = np.random.default_rng(0)
    t = tl.NonnegTensor.random((3, 4, 2), rng)
    spec = tl.MixedNormSpec(((0,), (1,), (2,)), (3, 3, 3))
    assert tl.mixed_norm(t, spec) == pytest.approx(tl.lp_norm(t.data, 3), rel=1e-13)


# -- mixed-norm inequality -------------------------------------------------------


def test_popa_constant_tensor_equality():
    rep = tl.popa_check(tl.NonnegTensor(np.ones((2, 2))), 2, (1, 1))
    assert rep.lhs == pytest.approx(2 * math.sqrt(2), rel=1e-14)
    assert rep.ratio == pytest.approx(1, abs=1e-12)
    assert rep.holds and rep.certified


def test_popa_single_entry():
    t = np.zeros((2, 2))
    t[0, 0] = 1
    rep = tl.popa_check(tl.NonnegTensor(t), 2, (1, 1))
    assert rep.lhs == pytest.approx(1) and rep.rhs == pytest.approx(1)


def test_popa_domain():
    t = tl.NonnegTensor(np.ones((2, 2)))
    with pytest.raises(DomainError):
        tl.popa_check(t, 2, (1, 2))
    with pytest.raises(DomainError):
        tl.popa_check(t, 2, (1,))
    with pytest.raises(DomainError):
        tl.popa_check(tl.NonnegTensor(np.ones(3)), 2, (1,))


@settings(max_examples=150, deadline=None)
@given(tensors(max_axes=4), st.floats(min_value=1.2, max_value=4), st.data())
def test_popa_inequality_property(t, q, data):
    r = [data.draw(st.floats(min_value=0.1, max_value=q * 0.95)) for _ in range(t.ndim)]
    assert tl.popa_check(t, q, r).holds


# -- nonnegative forms -----------------------------------------------------------


@pytest.mark.parametrize("n", [2, 5, 8])
def test_diagonal_form_norm(n):
    assert tl.nonneg_form_norm(tl.NonnegTensor.diagonal(n, 2), (4, 4)) == pytest.approx(math.sqrt(n), rel=1e-9)
    assert tl.diagonal_form_norm(n, (4, 4)) == pytest.approx(math.sqrt(n))


def test_single_entry_form():
    t = np.zeros((3, 2, 2))
    t[1, 0, 1] = 2.5
    assert tl.nonneg_form_norm(tl.NonnegTensor(t), (1, 3, math.inf)) == pytest.approx(2.5)


def test_rank_one_form_is_product_of_dual_norms():
    rng = np.random.default_rng(1)
    u, v = 1 - rng.random(4), 1 - rng.random(3)
    t = tl.NonnegTensor(np.outer(u, v))
    p = (3.0, 1.5)
    expected = tl.lp_norm(u, 1.5) * tl.lp_norm(v, 3.0)
    assert tl.nonneg_form_norm(t, p) == pytest.approx(expected, rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(hnp.arrays(np.float64, hnp.array_shapes(min_dims=2, max_dims=2, max_side=5), elements=positive))
def test_bilinear_l2_norm_is_spectral_norm(a):
    # nonnegative matrices attain their spectral norm at nonnegative vectors
    got = tl.nonneg_form_norm(tl.NonnegTensor(a), (2, 2))
    assert got == pytest.approx(np.linalg.norm(a, 2), rel=1e-7)
    assert got <= np.linalg.norm(a, 2) * (1 + 1e-12)


@settings(max_examples=40, deadline=None)
@given(tensors(max_axes=3), st.lists(st.sampled_from([1.0, 1.5, 2.0, 4.0, math.inf]), min_size=3, max_size=3))
def test_ascent_is_monotone(t, p):
    res = tl.maximize_nonneg_form(t, p[: t.ndim], restarts=4)
    assert res.monotone
    assert all(b >= a * (1 - 1e-12) for a, b in zip(res.trace, res.trace[1:]))


def test_praciano_sharpness_and_random():
    for m in (2, 3):
        for n in range(2, 9):
            rep = tl.praciano_sharpness(n, m, [2.0 * m + 0.25] * m)
            assert abs(rep.ratio - 1) <= 1e-6
    rng = np.random.default_rng(3)
    for _ in range(10):
        rep = tl.praciano_check(tl.NonnegTensor.random((3, 2, 4), rng), (6, 6, 6))
        assert rep.holds


def test_praciano_needs_rho():
    with pytest.raises(DomainError):
        tl.praciano_check(tl.NonnegTensor(np.ones((2, 2))), (2, 2))


def test_praciano_numerical_diagonal():
    rep = tl.praciano_check(tl.NonnegTensor.diagonal(6, 2), (4, 4))
    assert rep.ratio == pytest.approx(1, abs=1e-6)


# -- two-block inequality ---------------------------------------------------------


def test_hl_identity_2x2():
    rep = tl.hl_check(tl.NonnegTensor(np.eye(2)), 1, 2, 1, 1, 2, 2)
    assert rep.lhs == pytest.approx(math.sqrt(2))
    assert rep.rhs >= 1
    assert rep.holds


def test_hl_large_p_degenerates():
    rng = np.random.default_rng(4)
    rep = tl.hl_check(tl.NonnegTensor.random((3, 3), rng), 1, 2, 1, 1, 1e6, 1e6, restarts=3)
    assert rep.holds


def test_hl_random_small_campaign():
    camp = tl.hl_campaign(15, 0, 1, 2, 1, 1, 2, 2, dims=(4, 4), restarts=5)
    assert all(r.report.status == "HOLDS" for r in camp.rows)


def test_hl_undefined_gamma():
    with pytest.raises(DomainError):
        tl.hl_check(tl.NonnegTensor(np.eye(2)), 1, 2, 2, 2, 2, 2)


# -- weak norms and summing ratios ------------------------------------------------


@pytest.mark.parametrize("n", [1, 3, 8])
def test_weak_norm_anchors(n):
    assert tl.weak_norm(tl.VectorFamily.canonical(n, 2), 2) == 1
    assert tl.weak_norm(tl.VectorFamily.canonical(n, 2), 1) == pytest.approx(math.sqrt(n))


def test_weak_norm_scalar_family():
    fam = tl.VectorFamily.explicit(np.array([3.0, -4.0, 1.0]), u=2)
    assert tl.weak_norm(fam, 2) == pytest.approx(math.sqrt(26))
    assert tl.weak_norm(fam, 1) == pytest.approx(8)


@pytest.mark.parametrize("u", [1.0, 4 / 3, 2.0, 4.0])
@pytest.mark.parametrize("p", [1.0, 4 / 3, 2.0])
def test_weak_norm_closed_form_vs_numeric(u, p):
    for n in range(1, 9):
        fam = tl.VectorFamily.canonical(n, u)
        closed, numeric = tl.weak_norm(fam, p), tl.weak_norm(fam.materialize(), p)
        assert abs(closed - numeric) <= 1e-4 * closed


def test_weak_norm_l2_is_spectral_norm():
    rng = np.random.default_rng(5)
    for _ in range(5):
        V = rng.standard_normal((5, 3))
        assert tl.weak_norm(tl.VectorFamily.explicit(V, 2), 2) == pytest.approx(np.linalg.norm(V, 2), rel=1e-6)


def test_weak_norm_domain():
    with pytest.raises(DomainError):
        tl.weak_norm(tl.VectorFamily.canonical(3), 0.5)
    with pytest.raises(DomainError):
        tl.VectorFamily.canonical(3, 0.5)


@pytest.mark.parametrize("s", [1.0, 1.5, 2.0, 3.0])
def test_summing_ratio_diagonal(s):
    n = 64
    rep = tl.diagonal_witness(n, s, 2.0)
    assert rep.lhs == pytest.approx(n ** (1 / s), rel=1e-13)


def test_summing_ratio_trivial_cases():
    fam = tl.VectorFamily.canonical(1)
    assert tl.summing_ratio(np.ones((1, 1)), [fam, fam], 2, [2, 2]).ratio == 1
    T = np.zeros((3, 3))
    T[0, 0] = 1
    f3 = tl.VectorFamily.canonical(3)
    assert tl.summing_ratio(T, [f3, f3], 1.5, [2, 2]).lhs == 1


def test_summing_ratio_vector_valued_and_signed():
    rng = np.random.default_rng(6)
    T = rng.standard_normal((2, 3, 4))
    X = rng.standard_normal((5, 2))
    Y = rng.standard_normal((2, 3))
    fams = [tl.VectorFamily.explicit(X, 2), tl.VectorFamily.explicit(Y, 2)]
    rep = tl.summing_ratio(T, fams, 2.0, [2, 2], v=2.0)
    images = np.einsum("ia,jb,abk->ijk", X, Y, T)
    assert rep.lhs == pytest.approx(np.sqrt(np.sum(images**2)), rel=1e-12)
    assert not rep.certified


def test_summing_ratio_shape_mismatch():
    fam = tl.VectorFamily.explicit(np.ones((2, 3)))
    with pytest.raises(DomainError):
        tl.summing_ratio(np.ones((2, 2)), [fam, fam], 2, [2, 2])
    with pytest.raises(DomainError):
        tl.summing_ratio(np.ones((2, 2)), [tl.VectorFamily.canonical(3)] * 2, 2, [2, 2])


# -- growth fits -----------------------------------------------------------------


def test_growth_fit_exact_power_law():
    fit = tl.growth_fit(lambda n: (n**0.4, n**-0.25), [3, 10, 40, 200])
    assert fit.lhs_slope == pytest.approx(0.4, abs=1e-12)
    assert fit.rhs_slope == pytest.approx(-0.25, abs=1e-12)


def test_growth_fit_errors():
    with pytest.raises(DomainError):
        tl.growth_fit(lambda n: (n, n), [2, 4])
    with pytest.raises(DomainError):
        tl.growth_fit(lambda n: (0.0, n), [2, 4, 8])


@pytest.mark.parametrize("q, rhs", [(4 / 3, 0.5), (2.0, 0.0)])
def test_diagonal_growth(q, rhs):
    fit = tl.diagonal_growth(2.0, q, [2**k for k in range(4, 9)])
    assert fit.lhs_slope == pytest.approx(0.5, abs=1e-9)
    assert fit.rhs_slope == pytest.approx(rhs, abs=1e-9)


# -- campaigns -----------------------------------------------------------------


def test_campaign_is_deterministic_across_workers():
    a = tl.popa_campaign(40, 123, 2, (1, 1, 1), max_dims=(4, 4, 4))
    b = tl.popa_campaign(40, 123, 2, (1, 1, 1), max_dims=(4, 4, 4), workers=4)
    assert a.to_csv() == b.to_csv()
    assert a.to_csv().splitlines()[0] == "trial,seed,lhs,rhs,ratio,holds"
    assert a.summary()["violations"] == 0


def test_trial_seeds_depend_on_master_and_index():
    seeds = {tl.trial_seed(m, i) for m in (0, 1) for i in range(50)}
    assert len(seeds) == 100


def test_campaign_needs_one_shape_rule():
    with pytest.raises(DomainError):
        tl.popa_campaign(2, 0, 2, (1, 1), dims=(2, 2), max_dims=(2, 2))


def test_report_status():
    rep = tl.CheckReport.compare(2.0, 1.0, 1e-9, certified=False)
    assert rep.status == "INCONCLUSIVE" and rep.slack < 0
    rep = tl.CheckReport.compare(2.0, 1.0, 1e-9, certified=True)
    assert rep.status == "VIOLATED"
    assert tl.CheckReport.compare(0.0, 0.0, 1e-9, True).ratio == 1.0
