"""Finite-tensor checks of the mixed-norm inequalities behind the exponents.

Everything here is double precision and counting measure on finite index
sets. Suprema of norms (operator norms of nonnegative forms, weak norms) are
computed by ascent methods and are therefore certified *lower* bounds only; a
check whose right-hand side is such a lower bound reports ``INCONCLUSIVE``
rather than ``VIOLATED`` when it misses.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import DomainError
from .exponents import hl_gamma
from .extrational import ExtRational

DEFAULT_RESTARTS = 20
DEFAULT_ASCENT_TOL = 1e-10
DEFAULT_MAX_ITER = 500
CLOSED_FORM_TOL = 1e-9
OPTIMIZER_TOL = 1e-6


# --------------------------------------------------------------------------
# data types
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NonnegTensor:
    """Dense array of nonnegative reals, row-major (last index fastest)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.float64, order="C")
        if arr.ndim == 0:
            arr = arr.reshape(1)
        if arr.size == 0:
            raise DomainError("empty tensor")
        if not np.all(np.isfinite(arr)):
            raise DomainError("tensor entries must be finite")
        if np.any(arr < 0):
            raise DomainError("tensor entries must be nonnegative")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @classmethod
    def from_flat(cls, dims: Sequence[int], data: Sequence[float]) -> NonnegTensor:
        dims = [int(d) for d in dims]
        if any(d < 1 for d in dims):
            raise DomainError(f"dims must be positive, got {dims}")
        if len(data) != math.prod(dims):
            raise DomainError(f"{len(data)} entries for dims {dims}")
        return cls(np.asarray(data, dtype=np.float64).reshape(dims))

    @classmethod
    def diagonal(cls, n: int, m: int, value: float = 1.0) -> NonnegTensor:
        arr = np.zeros((n,) * m)
        idx = np.arange(n)
        arr[(idx,) * m] = value
        return cls(arr)

    @classmethod
    def random(cls, dims: Sequence[int], rng: np.random.Generator) -> NonnegTensor:
        # uniform on (0, 1]: exact zeros would put 0**negative into the formulas
        return cls(1.0 - rng.random(tuple(dims)))

    def to_dict(self) -> dict:
        return {"dims": list(self.dims), "data": self.data.ravel().tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> NonnegTensor:
        return cls.from_flat(d["dims"], d["data"])


def load_tensor(path) -> NonnegTensor:
    with open(path) as fh:
        return NonnegTensor.from_dict(json.load(fh))


def save_tensor(t: NonnegTensor, path) -> None:
    with open(path, "w") as fh:
        json.dump(t.to_dict(), fh)


@dataclass(frozen=True)
class MixedNormSpec:
    """Nested norm: ``groups[0]`` is outermost; the last group is applied first."""

    groups: tuple[tuple[int, ...], ...]
    exponents: tuple[float, ...]

    def __post_init__(self):
        groups = tuple(tuple(int(a) for a in g) for g in self.groups)
        exps = tuple(float(e) for e in self.exponents)
        if len(groups) != len(exps):
            raise DomainError("one exponent per group")
        if any(not g for g in groups):
            raise DomainError("groups must be nonempty")
        if any(not (e > 0) for e in exps):
            raise DomainError("mixed-norm exponents must be positive (or inf)")
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "exponents", exps)


@dataclass(frozen=True, eq=False)
class VectorFamily:
    """A finite sequence of vectors in ``l_u^d``.

    ``kind == "canonical"`` stands for the unit vectors ``e_1..e_n``.
    """

    kind: str
    u: float
    n: int
    vectors: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("canonical", "explicit"):
            raise DomainError(f"unknown family kind {self.kind!r}")
        if not self.u >= 1:
            raise DomainError(f"host exponent u must be >= 1, got {self.u}")
        if self.kind == "explicit":
            v = np.array(self.vectors, dtype=np.float64)
            if v.ndim == 1:
                v = v.reshape(-1, 1)
            if v.ndim != 2 or v.size == 0 or not np.all(np.isfinite(v)):
                raise DomainError("explicit family needs a finite n x d array")
            v.setflags(write=False)
            object.__setattr__(self, "vectors", v)
            object.__setattr__(self, "n", v.shape[0])
        elif self.n < 1:
            raise DomainError("canonical family needs n >= 1")

    @classmethod
    def canonical(cls, n: int, u: float = 2.0) -> VectorFamily:
        return cls("canonical", float(u), int(n))

    @classmethod
    def explicit(cls, vectors, u: float = 2.0) -> VectorFamily:
        return cls("explicit", float(u), 0, vectors)

    def matrix(self, d: int | None = None) -> np.ndarray:
        """Rows are the vectors, as an ``n x d`` array."""
        if self.kind == "explicit":
            return self.vectors
        d = self.n if d is None else d
        if d < self.n:
            raise DomainError(f"{self.n} unit vectors do not fit in dimension {d}")
        return np.eye(self.n, d)

    def materialize(self) -> VectorFamily:
        return VectorFamily.explicit(self.matrix(), self.u)


@dataclass(frozen=True)
class CheckReport:
    """``lhs <= rhs * (1 + tol)`` evaluated on one instance.

    ``certified`` means ``rhs`` is closed-form, so a miss is a genuine
    violation; otherwise ``rhs`` is an optimizer lower bound and a miss is
    inconclusive.
    """

    lhs: float
    rhs: float
    tol: float
    holds: bool
    certified: bool
    seed: int | None = None
    restarts: int | None = None
    note: str = ""

    @classmethod
    def compare(cls, lhs: float, rhs: float, tol: float, certified: bool, **kw) -> CheckReport:
        return cls(float(lhs), float(rhs), tol, bool(lhs <= rhs * (1 + tol)), certified, **kw)

    @property
    def ratio(self) -> float:
        if self.rhs == 0:
            return 1.0 if self.lhs == 0 else math.inf
        return self.lhs / self.rhs

    @property
    def slack(self) -> float:
        """Relative margin ``(rhs - lhs) / rhs``; negative when the check misses."""
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else -math.inf
        return (self.rhs - self.lhs) / self.rhs

    @property
    def status(self) -> str:
        if self.holds:
            return "HOLDS"
        return "VIOLATED" if self.certified else "INCONCLUSIVE"

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(ratio=self.ratio, slack=self.slack, status=self.status)
        return d


# --------------------------------------------------------------------------
# norms
# --------------------------------------------------------------------------


def _power_norm(x: np.ndarray, e: float, axis: int = -1) -> np.ndarray:
    x = np.abs(x)
    if math.isinf(e):
        return x.max(axis=axis)
    scale = x.max(axis=axis, keepdims=True)
    safe = np.where(scale > 0, scale, 1.0)
    total = np.sum((x / safe) ** e, axis=axis)
    return np.squeeze(safe, axis=axis) * total ** (1.0 / e)


def lp_norm(x, e: float) -> float:
    """``(sum |x|^e)^(1/e)`` over all entries; ``e = inf`` gives the max."""
    return float(_power_norm(np.asarray(x, dtype=np.float64).ravel(), float(e)))


def _as_array(t) -> np.ndarray:
    return t.data if isinstance(t, NonnegTensor) else np.asarray(t, dtype=np.float64)


def mixed_norm(t, spec: MixedNormSpec) -> float:
    arr = _as_array(t)
    if arr.size == 0:
        raise DomainError("empty tensor")
    order = [a for g in spec.groups for a in g]
    if sorted(order) != list(range(arr.ndim)):
        raise DomainError(f"groups {spec.groups} do not partition axes 0..{arr.ndim - 1}")
    shape = [math.prod(arr.shape[a] for a in g) for g in spec.groups]
    x = np.transpose(arr, order).reshape(shape)
    for e in reversed(spec.exponents):
        x = _power_norm(x, e, axis=-1)
    return float(x)


# --------------------------------------------------------------------------
# mixed-norm inequality of Popa-Sinnamon / Blei type
# --------------------------------------------------------------------------


def _log_power_sum(x: np.ndarray, e: float) -> float:
    """``log(sum x^e)`` for ``x >= 0``, stable for large ``e``."""
    top = float(x.max())
    if top == 0:
        return -math.inf
    return e * math.log(top) + math.log(float(np.sum((x / top) ** e)))


def popa_check(t: NonnegTensor, q: float, r: Sequence[float], tol: float = CLOSED_FORM_TOL) -> CheckReport:
    """``||h||_Q <= prod_j (sum_{i_j} (sum_rest h^q)^{r_j/q})^{1/(R (q - r_j))}``."""
    h = _as_array(t)
    n = h.ndim
    r = [float(x) for x in r]
    if n < 2:
        raise DomainError("need at least two axes")
    if len(r) != n:
        raise DomainError(f"need one r_j per axis: {n} axes, {len(r)} exponents")
    if not q > 0 or any(not (0 < x < q) for x in r):
        raise DomainError("need 0 < r_j < q")
    R = sum(x / (q - x) for x in r)
    Q = q * R / (1 + R)
    lhs = lp_norm(h, Q)
    log_rhs = 0.0
    for j, rj in enumerate(r):
        inner = _power_norm(np.moveaxis(h, j, 0).reshape(h.shape[j], -1), q, axis=-1)
        log_rhs += _log_power_sum(inner, rj) / (R * (q - rj))
    rhs = math.exp(log_rhs) if log_rhs > -math.inf else 0.0
    return CheckReport.compare(lhs, rhs, tol, certified=True, note=f"Q={Q:.12g}, R={R:.12g}")


# --------------------------------------------------------------------------
# norms of nonnegative multilinear forms
# --------------------------------------------------------------------------


def _contract_except(a: np.ndarray, xs: Sequence[np.ndarray], skip: int) -> np.ndarray:
    out = a
    for ax in reversed(range(a.ndim)):
        if ax != skip:
            out = np.tensordot(out, xs[ax], axes=([ax], [0]))
    return out


def _form_value(a: np.ndarray, xs: Sequence[np.ndarray]) -> float:
    return float(np.tensordot(_contract_except(a, xs, 0), xs[0], axes=1))


def _unit(x: np.ndarray, p: float) -> np.ndarray:
    nrm = lp_norm(x, p)
    return x / nrm if nrm > 0 else x


def _best_nonneg(c: np.ndarray, p: float, current: np.ndarray) -> np.ndarray:
    """Maximizer of ``<c, x>`` over the nonnegative part of the unit ball of ``l_p``."""
    if math.isinf(p):
        return np.ones_like(c)
    top = c.max()
    if top <= 0:
        return current
    if p == 1:
        x = np.zeros_like(c)
        x[int(np.argmax(c))] = 1.0  # lowest-index argmax
        return x
    return _unit((c / top) ** (1.0 / (p - 1.0)), p)


@dataclass(frozen=True)
class AscentResult:
    value: float
    vectors: tuple[np.ndarray, ...]
    trace: tuple[float, ...]
    monotone: bool
    starts: int


def maximize_nonneg_form(
    t: NonnegTensor,
    p: Sequence[float],
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    tol: float = DEFAULT_ASCENT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> AscentResult:
    """Alternating maximization of ``sum t_i x_i(1)...x_i(m)`` over ``prod B_{l_{p_j}}^+``.

    The first start is the normalized all-ones point; the others are random.
    ``trace`` is the per-sweep value of the best start, and ``monotone``
    records whether every start ascended.
    """
    a = _as_array(t)
    p = [float(x) for x in p]
    if len(p) != a.ndim:
        raise DomainError(f"need one p_j per axis: {a.ndim} axes, {len(p)} exponents")
    if any(not x >= 1 for x in p):
        raise DomainError("need p_j >= 1")
    rng = np.random.default_rng(seed)
    best: AscentResult | None = None
    monotone = True
    for start in range(max(1, restarts)):
        if start == 0:
            xs = [_unit(np.ones(d), pj) for d, pj in zip(a.shape, p)]
        else:
            xs = [_unit(1.0 - rng.random(d), pj) for d, pj in zip(a.shape, p)]
        value = _form_value(a, xs)
        trace = [value]
        for _ in range(max_iter):
            for j in range(a.ndim):
                xs[j] = _best_nonneg(_contract_except(a, xs, j), p[j], xs[j])
            new = _form_value(a, xs)
            if new < trace[-1] * (1 - 1e-12) - 1e-300:
                monotone = False
            trace.append(new)
            if new - value <= tol * max(abs(new), 1e-300):
                value = new
                break
            value = new
        if best is None or value > best.value:
            best = AscentResult(value, tuple(x.copy() for x in xs), tuple(trace), True, start + 1)
    return AscentResult(best.value, best.vectors, best.trace, monotone, max(1, restarts))


def nonneg_form_norm(t: NonnegTensor, p: Sequence[float], **kw) -> float:
    """Lower bound on ``||A||`` for the nonnegative form with coefficients ``t``."""
    return maximize_nonneg_form(t, p, **kw).value


def diagonal_form_norm(n: int, p: Sequence[float]) -> float:
    """Exact norm of ``sum_{i<=n} x_i(1)...x_i(m)`` on ``prod l_{p_j}``."""
    return float(n) ** max(1.0 - sum(1.0 / x for x in p), 0.0)


def _rho(p: Sequence[float]) -> float:
    inv = 1.0 - sum(1.0 / float(x) for x in p)
    if not inv > 0:
        raise DomainError(f"1 - sum 1/p_j = {inv} <= 0: no admissible rho")
    return 1.0 / inv


def praciano_check(
    t: NonnegTensor,
    p: Sequence[float],
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    tol: float = OPTIMIZER_TOL,
) -> CheckReport:
    """``(sum t_i^rho)^(1/rho) <= ||A||`` with ``||A||`` replaced by an ascent lower bound.

    Holding against a lower bound is a stronger statement than the inequality.
    """
    rho = _rho(p)
    lhs = lp_norm(_as_array(t), rho)
    res = maximize_nonneg_form(t, p, restarts=restarts, seed=seed)
    return CheckReport.compare(
        lhs, res.value, tol, certified=False, seed=seed, restarts=restarts,
        note=f"rho={rho:.12g}; rhs is a lower bound on the form norm",
    )


def praciano_sharpness(n: int, m: int, p: Sequence[float], tol: float = OPTIMIZER_TOL) -> CheckReport:
    """Diagonal ones tensor against its analytic norm: ratio is exactly 1."""
    rho = _rho(p)
    lhs = lp_norm(np.ones(n), rho)
    return CheckReport.compare(lhs, diagonal_form_norm(n, p), tol, certified=True, note=f"rho={rho:.12g}")


# --------------------------------------------------------------------------
# two-block mixed inequality
# --------------------------------------------------------------------------


def _weighted_mixed(a: np.ndarray, weights: Sequence[np.ndarray], m1: int, q: float, outer: float, weight_first: bool) -> float:
    """``(sum_out (sum_in w^q a^q)^{outer/q})^{1/outer}`` with weights on one block."""
    w = a.copy()
    axes = range(m1) if weight_first else range(m1, a.ndim)
    for wt, ax in zip(weights, axes):
        shape = [1] * a.ndim
        shape[ax] = -1
        w = w * wt.reshape(shape)
    inner_axes = tuple(range(m1)) if weight_first else tuple(range(m1, a.ndim))
    outer_axes = tuple(a for a in range(a.ndim) if a not in inner_axes)
    return mixed_norm(w, MixedNormSpec((outer_axes, inner_axes), (outer, q)))


def _weighted_objective(a, k, q, outer, p):
    """Negative log of the weighted mixed norm as a function of unnormalized weights.

    ``a`` has the ``k`` weighted axes first; weights are ``u = |z| / ||z||_p``
    per axis. Returns ``(f, grad)`` with an analytic gradient for finite ``outer``.
    """
    dims = a.shape[:k]
    splits = np.cumsum(dims)[:-1]
    aq = a.reshape(dims + (-1,)) ** q

    def f(z):
        parts = np.split(z, splits)
        norms = [lp_norm(part, p) for part in parts]
        if not np.all(np.isfinite(z)) or min(norms) == 0:
            return math.inf, np.zeros_like(z)
        us = [np.abs(part) / nrm for part, nrm in zip(parts, norms)]
        w = aq
        for j, u in enumerate(us):
            shape = [1] * w.ndim
            shape[j] = -1
            w = w * (u ** q).reshape(shape)
        sums = w.reshape(-1, w.shape[-1]).sum(axis=0)
        if math.isinf(outer):
            top = float(sums.max())
            return (-math.log(top) / q if top > 0 else math.inf), None
        total = float(np.sum(sums ** (outer / q)))
        if total <= 0:
            return math.inf, np.zeros_like(z)
        coef = np.where(sums > 0, sums ** (outer / q - 1.0), 0.0) / total
        g = w * coef
        grads = []
        for j, (part, nrm, u) in enumerate(zip(parts, norms, us)):
            h = g.sum(axis=tuple(ax for ax in range(g.ndim) if ax != j))
            du = np.divide(h, u, out=np.zeros_like(h), where=u > 0)
            grads.append(np.sign(part) / nrm * (du - u ** (p - 1.0) * h.sum()))
        return -math.log(total) / outer, -np.concatenate(grads)

    return f


def _sup_weighted(a, m1, q, outer, p, weight_first, restarts, rng) -> float:
    if not weight_first:
        a = np.moveaxis(a, list(range(m1, a.ndim)), list(range(a.ndim - m1)))
    k = m1 if weight_first else a.ndim - m1
    top = float(a.max())
    if top == 0:
        return 0.0
    dims = a.shape[:k]
    if math.isinf(p):
        return _weighted_mixed(a, [np.ones(d) for d in dims], k, q, outer, True)
    obj = _weighted_objective(a / top, k, q, outer, p)
    jac = not math.isinf(outer)
    fun = obj if jac else (lambda z: obj(z)[0])
    total = int(sum(dims))
    starts = [np.ones(total)]
    starts += [1.0 - rng.random(total) for _ in range(max(0, restarts - 1))]
    best = -math.inf
    for z0 in starts:
        val0 = -obj(z0)[0]
        res = minimize(fun, z0, jac=jac, method="L-BFGS-B", options={"maxiter": DEFAULT_MAX_ITER, "ftol": 1e-15, "gtol": 1e-12})
        best = max(best, val0, -float(res.fun) if np.isfinite(res.fun) else -math.inf)
    return top * math.exp(best)


def hl_check(
    t: NonnegTensor,
    m1: int,
    q: float,
    alpha: float,
    beta: float,
    p1: float,
    p2: float,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    tol: float = OPTIMIZER_TOL,
) -> CheckReport:
    """Two-block inequality: the first ``m1`` axes are the ``i`` block, the rest the ``j`` block.

    ``kappa`` is the larger of the two hypothesis suprema, each estimated
    from below by multistart L-BFGS over nonnegative unit weights.
    """
    a = _as_array(t)
    if not 1 <= m1 < a.ndim:
        raise DomainError(f"need 1 <= m1 < {a.ndim}")
    m2 = a.ndim - m1
    gamma = hl_gamma(
        m1, m2, ExtRational.from_float(p1), ExtRational.from_float(p2),
        ExtRational.from_float(q), ExtRational.from_float(alpha), ExtRational.from_float(beta),
    )
    if gamma is None:
        raise DomainError("gamma is undefined for these parameters")
    g = float(gamma)
    lhs = mixed_norm(a, MixedNormSpec((tuple(range(m1, a.ndim)), tuple(range(m1))), (g, q)))
    rng = np.random.default_rng(seed)
    k1 = _sup_weighted(a, m1, q, alpha, p1, True, restarts, rng)
    k2 = _sup_weighted(a, m1, q, beta, p2, False, restarts, rng)
    return CheckReport.compare(
        lhs, max(k1, k2), tol, certified=False, seed=seed, restarts=restarts,
        note=f"gamma={g:.12g}; kappa1={k1:.12g}; kappa2={k2:.12g}",
    )


# --------------------------------------------------------------------------
# weak norms and summing ratios
# --------------------------------------------------------------------------


def _conj(u: float) -> float:
    if u == 1:
        return math.inf
    if math.isinf(u):
        return 1.0
    return u / (u - 1.0)


def _dual_ball_argmax(g: np.ndarray, u: float) -> np.ndarray:
    """Maximizer of ``<g, x>`` over the unit ball of ``l_{u*}`` (dual of host ``l_u``)."""
    if u == 1:
        return np.where(g >= 0, 1.0, -1.0)
    if math.isinf(u):
        x = np.zeros_like(g)
        k = int(np.argmax(np.abs(g)))
        x[k] = 1.0 if g[k] >= 0 else -1.0
        return x
    top = np.abs(g).max()
    if top == 0:
        return g
    x = np.sign(g) * (np.abs(g) / top) ** (u - 1.0)
    return x / lp_norm(x, _conj(u))


def _p_gradient(y: np.ndarray, p: float) -> np.ndarray:
    if p == 1:
        return np.where(y >= 0, 1.0, -1.0)
    top = np.abs(y).max()
    if top == 0:
        return np.zeros_like(y)
    return np.sign(y) * (np.abs(y) / top) ** (p - 1.0)


def weak_norm(
    f: VectorFamily,
    p: float,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    tol: float = DEFAULT_ASCENT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> float:
    """``w_p(x) = sup_{||x*|| <= 1} (sum_i |<x*, x_i>|^p)^(1/p)``.

    Canonical families use the closed form ``n^max(1/p - 1/u*, 0)``. Explicit
    families run a conditional-gradient ascent (each step jumps to the dual-ball
    maximizer of the current gradient, which never decreases a convex
    objective) from random, coordinate and sign-vector starts.
    """
    if not p >= 1:
        raise DomainError(f"need p >= 1, got {p}")
    if f.kind == "canonical":
        return float(f.n) ** max(1.0 / p - 1.0 / _conj(f.u), 0.0)

    V = f.vectors
    d = V.shape[1]
    u_dual = _conj(f.u)
    rng = np.random.default_rng(seed)
    starts = [np.eye(d)[k] for k in range(d)]
    for _ in range(max(1, restarts)):
        starts.append(np.where(rng.random(d) < 0.5, -1.0, 1.0))
        starts.append(rng.standard_normal(d))
    best = 0.0
    for x in starts:
        x = x / lp_norm(x, u_dual)
        value = lp_norm(V @ x, p)
        for _ in range(max_iter):
            x = _dual_ball_argmax(V.T @ _p_gradient(V @ x, p), f.u)
            new = lp_norm(V @ x, p)
            if new - value <= tol * max(new, 1e-300):
                value = max(value, new)
                break
            value = new
        best = max(best, value)
    return best


def _apply_family(out: np.ndarray, axis: int, f: VectorFamily) -> np.ndarray:
    d = out.shape[axis]
    if f.kind == "canonical":
        if f.n > d:
            raise DomainError(f"{f.n} unit vectors do not fit axis {axis} of size {d}")
        return out if f.n == d else np.take(out, np.arange(f.n), axis=axis)
    X = f.vectors
    if X.shape[1] != d:
        raise DomainError(f"family vectors have dimension {X.shape[1]}, axis {axis} has {d}")
    return np.moveaxis(np.tensordot(out, X, axes=([axis], [1])), -1, axis)


def summing_ratio(
    T,
    families: Sequence[VectorFamily],
    s: float,
    p: Sequence[float],
    v: float | None = None,
    tol: float = CLOSED_FORM_TOL,
    **weak_kw,
) -> CheckReport:
    """``(sum_i ||T(x_i)||^s)^(1/s)`` against ``prod_j w_{p_j}(x(j))``.

    ``T`` has one axis per argument, plus a trailing axis when ``v`` is given
    (values in ``l_v^d``). The ratio is an empirical lower bound on the
    multiple summing norm.
    """
    arr = np.asarray(_as_array(T), dtype=np.float64)
    m = len(families)
    if len(p) != m:
        raise DomainError("need one p_j per family")
    expected = m + (1 if v is not None else 0)
    if arr.ndim != expected:
        raise DomainError(f"tensor has {arr.ndim} axes, expected {expected}")
    out = arr
    for j, f in enumerate(families):
        out = _apply_family(out, j, f)
    vals = _power_norm(out, v, axis=-1) if v is not None else np.abs(out)
    lhs = lp_norm(vals, s)
    rhs = math.prod(weak_norm(f, pj, **weak_kw) for f, pj in zip(families, p))
    certified = all(f.kind == "canonical" for f in families)
    return CheckReport.compare(lhs, rhs, tol, certified=certified, note="ratio is a lower bound on pi_mult")


def diagonal_witness(n: int, s: float, q: float) -> CheckReport:
    """The diagonal bilinear form on ``l_2 x l_2`` tested on unit vectors."""
    fam = VectorFamily.canonical(n, 2.0)
    return summing_ratio(np.eye(n), [fam, fam], s, [q, q])


@dataclass(frozen=True)
class GrowthFit:
    lhs_slope: float
    rhs_slope: float
    n_grid: tuple[int, ...] = field(default=())


def growth_fit(experiment: Callable[[int], tuple[float, float]], n_grid: Sequence[int]) -> GrowthFit:
    """Least-squares slopes of ``log lhs`` and ``log rhs`` against ``log n``."""
    n_grid = [int(n) for n in n_grid]
    if len(n_grid) < 3:
        raise DomainError("need at least three grid points")
    pts = [experiment(n) for n in n_grid]
    lhs = np.array([a for a, _ in pts], dtype=float)
    rhs = np.array([b for _, b in pts], dtype=float)
    if np.any(lhs <= 0) or np.any(rhs <= 0):
        raise DomainError("growth fit needs positive values")
    x = np.log(n_grid)
    return GrowthFit(float(np.polyfit(x, np.log(lhs), 1)[0]), float(np.polyfit(x, np.log(rhs), 1)[0]), tuple(n_grid))


def diagonal_growth(s: float, q: float, n_grid: Iterable[int]) -> GrowthFit:
    def exp(n):
        rep = diagonal_witness(n, s, q)
        return rep.lhs, rep.rhs

    return growth_fit(exp, list(n_grid))


# --------------------------------------------------------------------------
# campaigns
# --------------------------------------------------------------------------


def trial_seed(master: int, trial: int) -> int:
    """Sub-seed for one trial; independent of scheduling."""
    return int(np.random.SeedSequence([int(master), int(trial)]).generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class CampaignRow:
    trial: int
    seed: int
    dims: tuple[int, ...]
    report: CheckReport


@dataclass
class Campaign:
    kind: str
    master_seed: int
    rows: list[CampaignRow]

    def summary(self) -> dict:
        ratios = [r.report.ratio for r in self.rows]
        return {
            "kind": self.kind,
            "seed": self.master_seed,
            "trials": len(self.rows),
            "min_ratio": min(ratios) if ratios else None,
            "max_ratio": max(ratios) if ratios else None,
            "mean_ratio": float(np.mean(ratios)) if ratios else None,
            "violations": sum(r.report.status == "VIOLATED" for r in self.rows),
            "inconclusive": sum(r.report.status == "INCONCLUSIVE" for r in self.rows),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["trial", "seed", "lhs", "rhs", "ratio", "holds"])
        for r in self.rows:
            rep = r.report
            w.writerow([r.trial, r.seed, repr(rep.lhs), repr(rep.rhs), repr(rep.ratio), rep.holds])
        return buf.getvalue()


def run_campaign(
    kind: str,
    trials: int,
    seed: int,
    check: Callable[[NonnegTensor, int], CheckReport],
    dims: Sequence[int] | None = None,
    max_dims: Sequence[int] | None = None,
    workers: int = 1,
) -> Campaign:
    """Run ``check`` on ``trials`` random tensors with entries in ``(0, 1]``.

    Either ``dims`` fixes every shape, or each axis size is drawn from
    ``1..max_dims[axis]``. ``check`` receives the tensor and the trial seed.
    """
    if (dims is None) == (max_dims is None):
        raise DomainError("give exactly one of dims, max_dims")

    def one(trial: int) -> CampaignRow:
        sub = trial_seed(seed, trial)
        rng = np.random.default_rng(sub)
        shape = tuple(dims) if dims is not None else tuple(int(rng.integers(1, d + 1)) for d in max_dims)
        t = NonnegTensor.random(shape, rng)
        return CampaignRow(trial, sub, shape, check(t, sub))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, range(trials)))
    else:
        rows = [one(i) for i in range(trials)]
    return Campaign(kind, seed, rows)


def popa_campaign(trials: int, seed: int, q: float, r: Sequence[float], dims=None, max_dims=None, workers: int = 1, tol: float = CLOSED_FORM_TOL) -> Campaign:
    return run_campaign("popa", trials, seed, lambda t, _: popa_check(t, q, r, tol), dims, max_dims, workers)


def praciano_campaign(trials: int, seed: int, p: Sequence[float], dims=None, max_dims=None, restarts: int = DEFAULT_RESTARTS, workers: int = 1, tol: float = OPTIMIZER_TOL) -> Campaign:
    return run_campaign(
        "praciano", trials, seed,
        lambda t, sub: praciano_check(t, p, restarts=restarts, seed=sub, tol=tol),
        dims, max_dims, workers,
    )


def hl_campaign(trials: int, seed: int, m1: int, q: float, alpha: float, beta: float, p1: float, p2: float, dims=None, max_dims=None, restarts: int = DEFAULT_RESTARTS, workers: int = 1, tol: float = OPTIMIZER_TOL) -> Campaign:
    return run_campaign(
        "hl", trials, seed,
        lambda t, sub: hl_check(t, m1, q, alpha, beta, p1, p2, restarts=restarts, seed=sub, tol=tol),
        dims, max_dims, workers,
    )


def fraction_or_float(x) -> float:
    """Parse ``"a/b"``, decimals and ``inf`` into a float."""
    if isinstance(x, str):
        t = x.strip().lower()
        if t in ("inf", "+inf", "infinity"):
            return math.inf
        return float(Fraction(t))
    return float(x)
