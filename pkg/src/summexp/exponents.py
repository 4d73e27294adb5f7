"""Exact exponent calculus for coordinatewise -> multiple summability.

All exponents are :class:`~summexp.extrational.ExtRational`; all intermediate
quantities are reciprocals held as signed :class:`~fractions.Fraction`. Block
and coordinate indices in the public API are 1-based, matching the scenario
file format.

Hypothesis failures of a theorem are data: they come back as an
:class:`ExponentResult` with ``s is None`` and the failing :class:`Condition`.
Malformed inputs raise :class:`~summexp.errors.DomainError`.
"""

from __future__ import annotations

import itertools
import operator
import warnings
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError, InapplicableError, ProvenanceWarning
from .extrational import INF, ExtRational, as_ext, conjugate, dual_recip, fmt

__all__ = [
    "Theorem",
    "Condition",
    "ExponentResult",
    "PartitionScenario",
    "conjugate",
    "inv_gamma_block",
    "gamma_block",
    "main1_exponent",
    "main2_exponent",
    "main3_exponent",
    "best_exponent",
    "cor_main_exponent",
    "intro_exponent",
    "inclusion_exponent",
    "compare_perez_garcia",
    "hardy_littlewood_exponent",
    "praciano_rho",
    "popa_exponents",
    "hl_inv_gamma",
    "hl_gamma",
    "hl_gamma_result",
    "displike_exponent",
    "displike_result",
    "sidon_product_exponent",
    "rider_product_exponent",
    "opti1_optimal_s",
    "opti1_rho",
    "opti2_predicate",
]


class Theorem(str, Enum):
    MAIN1 = "MAIN1"
    MAIN2 = "MAIN2"
    MAIN3 = "MAIN3"
    COR_MAIN = "COR_MAIN"
    INTRO = "INTRO"
    INCLUSION = "INCLUSION"
    HL = "HL"
    HL_GAMMA = "HL_GAMMA"
    PRACIANO = "PRACIANO"
    POPA = "POPA"
    DISPLIKE = "DISPLIKE"
    SIDON = "SIDON"
    RIDER = "RIDER"
    OPTI1 = "OPTI1"
    OPTI2 = "OPTI2"
    COMPARE_PG = "COMPARE_PG"


_RELATIONS = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "==": operator.eq,
}


@dataclass(frozen=True)
class Condition:
    """One hypothesis of a theorem, evaluated exactly."""

    name: str
    lhs: object
    rel: str
    rhs: object
    passed: bool

    @classmethod
    def check(cls, name: str, lhs, rel: str, rhs) -> Condition:
        return cls(name, lhs, rel, rhs, bool(_RELATIONS[rel](lhs, rhs)))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": fmt(self.lhs),
            "rel": self.rel,
            "rhs": fmt(self.rhs),
            "pass": self.passed,
        }

    def __str__(self) -> str:
        mark = "ok  " if self.passed else "FAIL"
        return f"[{mark}] {self.name}: {fmt(self.lhs)} {self.rel} {fmt(self.rhs)}"


@dataclass(frozen=True)
class ExponentResult:
    """An exponent together with the certificate that produced it.

    ``s`` is set exactly when every listed condition passed. ``witness`` holds
    theorem-specific parameters, e.g. ``J`` and ``k0`` for MAIN2.
    """

    s: ExtRational | None
    theorem: Theorem | None
    witness: dict = field(default_factory=dict)
    conditions: tuple[Condition, ...] = ()
    notes: tuple[str, ...] = ()
    alternatives: tuple[ExponentResult, ...] = ()

    @property
    def ok(self) -> bool:
        return self.s is not None

    def failed(self) -> list[Condition]:
        return [c for c in self.conditions if not c.passed]

    def to_dict(self) -> dict:
        out = {
            "s": None if self.s is None else str(self.s),
            "s_decimal": None if self.s is None else float(self.s),
            "theorem": None if self.theorem is None else self.theorem.value,
            "witness": _jsonable(self.witness),
            "conditions": [c.to_dict() for c in self.conditions],
        }
        if self.notes:
            out["notes"] = list(self.notes)
        if self.alternatives:
            out["alternatives"] = [a.to_dict() for a in self.alternatives]
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (ExtRational, Fraction)):
        return fmt(obj)
    if isinstance(obj, Enum):
        return obj.value
    return obj


def _ext_list(xs: Iterable) -> tuple[ExtRational, ...]:
    return tuple(as_ext(x) for x in xs)


def _cotype_note(q: ExtRational, warn: bool = True) -> tuple[str, ...]:
    if q < 2:
        if warn:
            warnings.warn(
                f"cotype q = {q} < 2: no infinite-dimensional Banach space has such cotype",
                ProvenanceWarning,
                stacklevel=3,
            )
        return (f"q = {q} < 2 is below any Banach-space cotype",)
    return ()


# --------------------------------------------------------------------------
# scenarios
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PartitionScenario:
    """Coordinates ``1..m`` split into blocks, with per-block ``(r_k, p_k)``.

    ``q`` is the cotype of the target space.
    """

    m: int
    blocks: tuple[tuple[int, ...], ...]
    q: ExtRational
    r: tuple[ExtRational, ...]
    p: tuple[ExtRational, ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(i) for i in b)) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "q", as_ext(self.q))
        object.__setattr__(self, "r", _ext_list(self.r))
        object.__setattr__(self, "p", _ext_list(self.p))

        if self.m < 1:
            raise DomainError(f"m must be positive, got {self.m}")
        seen: list[int] = []
        for b in blocks:
            if not b:
                raise DomainError("blocks must be nonempty")
            seen.extend(b)
        if sorted(seen) != list(range(1, self.m + 1)):
            raise DomainError(f"blocks {blocks} do not partition 1..{self.m}")
        if len(self.r) != len(blocks) or len(self.p) != len(blocks):
            raise DomainError(
                f"need one r and one p per block: {len(blocks)} blocks, "
                f"{len(self.r)} r, {len(self.p)} p"
            )
        if self.q.is_infinite or self.q < 1:
            raise DomainError(f"cotype q must be finite and >= 1, got {self.q}")
        for name, xs in (("r", self.r), ("p", self.p)):
            for i, x in enumerate(xs, 1):
                if x < 1:
                    raise DomainError(f"{name}_{i} = {x} < 1")

    @classmethod
    def singletons(cls, q, r: Sequence, p: Sequence) -> PartitionScenario:
        m = len(r)
        return cls(m, tuple((i,) for i in range(1, m + 1)), q, r, p)

    @property
    def n(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    @property
    def qvector(self) -> tuple[ExtRational, ...]:
        """Per-coordinate weak exponents: ``q_j = p_k`` for ``j`` in block ``k``."""
        out: list[ExtRational] = [INF] * self.m
        for b, pk in zip(self.blocks, self.p):
            for j in b:
                out[j - 1] = pk
        return tuple(out)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "blocks": [list(b) for b in self.blocks],
            "q": str(self.q),
            "r": [str(x) for x in self.r],
            "p": [str(x) for x in self.p],
        }

    @classmethod
    def from_dict(cls, d: dict) -> PartitionScenario:
        try:
            m = int(d["m"])
            blocks = d.get("blocks") or [[i] for i in range(1, m + 1)]
            return cls(
                m,
                blocks,
                ExtRational.parse(str(d["q"])),
                [ExtRational.parse(str(x)) for x in d["r"]],
                [ExtRational.parse(str(x)) for x in d["p"]],
            )
        except KeyError as exc:
            raise DomainError(f"scenario is missing field {exc}") from None


# --------------------------------------------------------------------------
# the gamma recursion
# --------------------------------------------------------------------------


def _inv_p(p: ExtRational, dualize: bool) -> Fraction:
    return dual_recip(p) if dualize else p.recip()


class _Blocks:
    """Precomputed reciprocals for one scenario (0-based internally)."""

    def __init__(self, sc: PartitionScenario, dualize: bool):
        self.sc = sc
        self.q = sc.q.fraction
        self.inv_q = 1 / self.q
        self.inv_r = [x.recip() for x in sc.r]
        self.ip = [_inv_p(x, dualize) for x in sc.p]
        self.ipc = [dual_recip(x) for x in sc.p]
        self.size = list(sc.sizes)
        self.den = [
            1 - self.q * ir - self.q * c * ip
            for ir, c, ip in zip(self.inv_r, self.size, self.ip)
        ]

    def require_below_q(self, idx: Iterable[int]) -> None:
        for j in idx:
            if self.sc.r[j] >= self.sc.q:
                raise InapplicableError(
                    f"r_{j + 1} = {self.sc.r[j]} >= q = {self.sc.q}: gamma recursion needs r_j < q"
                )
            if self.den[j] == 0:
                raise InapplicableError(f"zero denominator for block {j + 1}")

    def term(self, k: int, j: int) -> Fraction:
        return self.size[j] * self.ip[j] * self.den[k] / self.den[j]


def _check_block_index(sc: PartitionScenario, k: int) -> int:
    if not 1 <= k <= sc.n:
        raise DomainError(f"block index {k} outside 1..{sc.n}")
    return k - 1


def inv_gamma_block(k: int, J: Iterable[int], sc: PartitionScenario, dualize: bool = True) -> Fraction:
    """Reciprocal ``1/gamma_{k,J}`` (may be zero or negative).

    With ``dualize`` on the weights are ``|C_j|/p_j*``; off, ``|C_j|/p_j``.
    """
    k0 = _check_block_index(sc, k)
    Jz = {_check_block_index(sc, j) for j in J}
    if k0 in Jz:
        raise DomainError(f"J must exclude k = {k}")
    b = _Blocks(sc, dualize)
    summed = [j for j in range(sc.n) if j != k0 and j not in Jz]
    b.require_below_q([k0, *summed])
    return b.inv_r[k0] - sum((b.term(k0, j) for j in summed), Fraction(0))


def gamma_block(k: int, J: Iterable[int], sc: PartitionScenario, dualize: bool = True) -> ExtRational | None:
    """``gamma_{k,J}``, or ``None`` when its reciprocal is not positive."""
    inv = inv_gamma_block(k, J, sc, dualize)
    return ExtRational.from_reciprocal(inv) if inv > 0 else None


def _preconditions(sc: PartitionScenario, strict_r: bool) -> list[Condition]:
    conds = [Condition.check("n >= 2", sc.n, ">=", 2)]
    if strict_r:
        for k, rk in enumerate(sc.r, 1):
            conds.append(Condition.check(f"r_{k} < q", rk, "<", sc.q))
    return conds


def _label(k: int, J: Iterable[int] = ()) -> str:
    J = sorted(J)
    if not J:
        return f"gamma_{k}"
    return f"gamma_{{{k};{','.join(map(str, J))}}}"


def _gamma_of(inv: Fraction) -> ExtRational:
    return ExtRational.from_reciprocal(inv)


def main1_exponent(sc: PartitionScenario, warn: bool = True) -> ExponentResult:
    """Multiple ``(s, q)``-summability when every ``gamma_k`` lies in ``(0, q)``."""
    notes = _cotype_note(sc.q, warn)
    conds = _preconditions(sc, strict_r=True)
    if not all(c.passed for c in conds):
        return ExponentResult(None, Theorem.MAIN1, conditions=tuple(conds), notes=notes)

    b = _Blocks(sc, dualize=True)
    n, q = sc.n, sc.q
    inv_g = [b.inv_r[k] - sum((b.term(k, j) for j in range(n) if j != k), Fraction(0)) for k in range(n)]
    witness: dict = {"qvector": list(sc.qvector)}

    for k in range(n):
        lab = _label(k + 1)
        conds.append(Condition.check(f"1/{lab} > 0", inv_g[k], ">", 0))
        if inv_g[k] > 0:
            g = _gamma_of(inv_g[k])
            witness[lab] = g
            conds.append(Condition.check(f"{lab} < q", g, "<", q))

    for k, l in itertools.permutations(range(n), 2):
        lab = _label(k + 1, [l + 1])
        inv_kl = inv_g[k] + b.term(k, l)
        conds.append(Condition.check(f"1/{lab} > 0", inv_kl, ">", 0))
        if inv_kl > 0:
            g = _gamma_of(inv_kl)
            witness[lab] = g
            conds.append(Condition.check(f"{lab} <= q", g, "<=", q))
            conds.append(
                Condition.check(f"|C_{l + 1}| {lab} / p_{l + 1}* <= 1", b.size[l] * b.ipc[l] / inv_kl, "<=", 1)
            )

    if not all(c.passed for c in conds):
        return ExponentResult(None, Theorem.MAIN1, witness, tuple(conds), notes)

    qf = q.fraction
    gammas = [1 / x for x in inv_g]
    R = sum((g / (qf - g) for g in gammas), Fraction(0))
    witness["R"] = R
    s = ExtRational(qf * R / (1 + R))
    return ExponentResult(s, Theorem.MAIN1, witness, tuple(conds), notes)


def main2_exponent(sc: PartitionScenario, warn: bool = True) -> ExponentResult:
    """Exhaustive search over ``(J, k0)`` with ``gamma_{k0,J} >= q``; minimal ``s`` wins."""
    notes = _cotype_note(sc.q, warn)
    conds = _preconditions(sc, strict_r=True)
    if not all(c.passed for c in conds):
        return ExponentResult(None, Theorem.MAIN2, conditions=tuple(conds), notes=notes)

    b = _Blocks(sc, dualize=True)
    n, q = sc.n, sc.q
    best = None  # (inv_s, J, k0, conditions, gamma_k0J)
    rejected: list[Condition] = []

    for size in range(n):
        for J in itertools.combinations(range(n), size):
            Jset = set(J)
            out = [k for k in range(n) if k not in Jset]
            base = {
                k: b.inv_r[k] - sum((b.term(k, j) for j in out if j != k), Fraction(0))
                for k in out
            }
            offset = sum((b.size[j] * b.ipc[j] for j in J), Fraction(0))
            Jlab = [j + 1 for j in J]

            pair_conds: list[Condition] = []
            for k, l in itertools.permutations(out, 2):
                lab = _label(k + 1, sorted(Jlab + [l + 1]))
                inv_kl = base[k] + b.term(k, l)
                pair_conds.append(Condition.check(f"1/{lab} > 0", inv_kl, ">", 0))
                if inv_kl > 0:
                    g = _gamma_of(inv_kl)
                    pair_conds.append(Condition.check(f"{lab} <= q", g, "<=", q))
                    pair_conds.append(
                        Condition.check(
                            f"|C_{l + 1}| {lab} / p_{l + 1}* <= 1", b.size[l] * b.ipc[l] / inv_kl, "<=", 1
                        )
                    )

            for k0 in out:
                lab = _label(k0 + 1, Jlab)
                tag = f"J={{{','.join(map(str, Jlab))}}}, k0={k0 + 1}: "
                inv0 = base[k0]
                cs = [Condition.check(f"1/{lab} > 0", inv0, ">", 0)]
                if inv0 > 0:
                    cs.append(Condition.check(f"{lab} >= q", _gamma_of(inv0), ">=", q))
                cs.extend(pair_conds)
                inv_s = inv0 - offset
                cs.append(Condition.check("1/s > 0", inv_s, ">", 0))
                if all(c.passed for c in cs):
                    if best is None or inv_s > best[0]:
                        best = (inv_s, Jlab, k0 + 1, cs, _gamma_of(inv0))
                else:
                    first = next(c for c in cs if not c.passed)
                    rejected.append(
                        Condition(tag + first.name, first.lhs, first.rel, first.rhs, False)
                    )

    if best is None:
        return ExponentResult(None, Theorem.MAIN2, {}, tuple(conds + rejected), notes)

    inv_s, Jlab, k0, cs, g0 = best
    witness = {"J": Jlab, "k0": k0, _label(k0, Jlab): g0, "qvector": list(sc.qvector)}
    return ExponentResult(ExtRational.from_reciprocal(inv_s), Theorem.MAIN2, witness, tuple(conds + cs), notes)


def main3_exponent(sc: PartitionScenario, warn: bool = True) -> ExponentResult:
    """Multiple summability from a block with ``r_k >= q``."""
    notes = _cotype_note(sc.q, warn)
    conds = _preconditions(sc, strict_r=False)
    if not conds[0].passed:
        return ExponentResult(None, Theorem.MAIN3, conditions=tuple(conds), notes=notes)

    ipc = [dual_recip(x) for x in sc.p]
    best = None
    rejected: list[Condition] = []
    for k in range(sc.n):
        cs = [Condition.check(f"r_{k + 1} >= q", sc.r[k], ">=", sc.q)]
        inv_s = sc.r[k].recip() - sum((sc.sizes[j] * ipc[j] for j in range(sc.n) if j != k), Fraction(0))
        cs.append(Condition.check("1/s > 0", inv_s, ">", 0))
        if all(c.passed for c in cs):
            if best is None or inv_s > best[0]:
                best = (inv_s, k + 1, cs)
        else:
            first = next(c for c in cs if not c.passed)
            rejected.append(Condition(f"k={k + 1}: {first.name}", first.lhs, first.rel, first.rhs, False))

    if best is None:
        return ExponentResult(None, Theorem.MAIN3, {}, tuple(conds + rejected), notes)
    inv_s, k, cs = best
    witness = {"k": k, "qvector": list(sc.qvector)}
    return ExponentResult(ExtRational.from_reciprocal(inv_s), Theorem.MAIN3, witness, tuple(conds + cs), notes)


def best_exponent(sc: PartitionScenario) -> ExponentResult:
    """Strongest (smallest) ``s`` among the three main theorems.

    Ties go to the earlier theorem (MAIN1, then MAIN2, then MAIN3).
    """
    runs = (main1_exponent(sc, warn=False), main2_exponent(sc, warn=False), main3_exponent(sc, warn=False))
    notes = _cotype_note(sc.q)
    winner = None
    for res in runs:
        if res.ok and (winner is None or res.s < winner.s):
            winner = res
    if winner is None:
        conds = tuple(
            Condition(f"{res.theorem.value}: {c.name}", c.lhs, c.rel, c.rhs, c.passed)
            for res in runs
            for c in res.conditions
        )
        return ExponentResult(None, None, {}, conds, notes, alternatives=runs)
    return ExponentResult(
        winner.s, winner.theorem, winner.witness, winner.conditions, notes or winner.notes, alternatives=runs
    )


# --------------------------------------------------------------------------
# corollaries and the introductory theorem
# --------------------------------------------------------------------------


def _cor_main(m: int, q, r: Sequence, p: Sequence, warn: bool) -> ExponentResult:
    q = as_ext(q)
    r, p = _ext_list(r), _ext_list(p)
    if len(r) != m or len(p) != m:
        raise DomainError(f"need m = {m} values of r and p")
    if q.is_infinite or q < 1:
        raise DomainError(f"cotype q must be finite and >= 1, got {q}")
    for x in (*r, *p):
        if x < 1:
            raise DomainError(f"exponent {x} < 1")
    thetas = {x.recip() - y.recip() for x, y in zip(r, p)}
    if len(thetas) != 1:
        raise DomainError(f"1/r_k - 1/p_k is not constant: {sorted(thetas)}")
    (theta,) = thetas
    if theta > 0:
        raise DomainError(f"theta = {fmt(theta)} > 0 (need r_k >= p_k)")
    notes: list[str] = []
    if theta == 0:
        notes.append("theta = 0: corollary stated for theta < 0, used here at the boundary")
        if warn:
            warnings.warn(notes[-1], ProvenanceWarning, stacklevel=3)
    notes.extend(_cotype_note(q, warn))

    inv_g = 1 + theta - sum((dual_recip(x) for x in p), Fraction(0))
    conds = [Condition.check("1/gamma > 0", inv_g, ">", 0)]
    witness: dict = {"theta": theta}
    if inv_g <= 0:
        return ExponentResult(None, Theorem.COR_MAIN, witness, tuple(conds), tuple(notes))
    gamma = ExtRational.from_reciprocal(inv_g)
    witness["gamma"] = gamma
    qf = q.fraction
    if gamma < q:
        witness["case"] = 1
        conds.append(Condition.check("gamma < q", gamma, "<", q))
        inv_s = Fraction(m - 1, m) / qf + inv_g / m
        s = ExtRational.from_reciprocal(inv_s)
    else:
        witness["case"] = 2
        conds.append(Condition.check("gamma >= q", gamma, ">=", q))
        s = gamma
    return ExponentResult(s, Theorem.COR_MAIN, witness, tuple(conds), tuple(notes))


def cor_main_exponent(m: int, q, r: Sequence, p: Sequence) -> ExponentResult:
    """Separately ``(r_k, p_k)``-summing with common ``theta = 1/r_k - 1/p_k <= 0``."""
    return _cor_main(m, q, r, p, warn=True)


def intro_exponent(m: int, q, r, p, t) -> ExponentResult:
    """Separately ``(r, p)``-summing into cotype ``q`` implies multiple ``(s, t)``-summing.

    The direct closed form is cross-checked against the route through
    :func:`cor_main_exponent` with ``1/rho = 1/r + 1/t - 1/p``.
    """
    q, r, p, t = map(as_ext, (q, r, p, t))
    if m < 1:
        raise DomainError("m must be positive")
    if p < 1 or r < 1 or q < 1 or q.is_infinite:
        raise DomainError("need p, r, q >= 1 and q finite")
    if t < p:
        raise DomainError(f"need t >= p, got t = {t}, p = {p}")
    if r < p:
        raise DomainError(f"need r >= p (a separately (r,p)-summing map has r >= p), got r = {r}")

    qf = q.fraction
    ipc, itc = dual_recip(p), dual_recip(t)
    delta = r.recip() + ipc - m * itc
    conds = [Condition.check("Delta > 0", delta, ">", 0)]
    witness: dict = {"Delta": delta}
    if delta > 1 / qf:
        witness["case"] = 1
        inv_s = Fraction(m - 1, m) / qf + r.recip() / m + ipc / m - itc
    elif delta > 0:
        witness["case"] = 2
        inv_s = delta
    else:
        inv_s = None
    s = None if inv_s is None else ExtRational.from_reciprocal(inv_s)

    inv_rho = r.recip() + t.recip() - p.recip()
    if inv_rho < 0:
        routed = None
    else:
        rho = ExtRational.from_reciprocal(inv_rho)
        witness["rho"] = rho
        routed = _cor_main(m, q, [rho] * m, [t] * m, warn=False).s
    if routed != s:
        raise AssertionError(f"intro routes disagree: direct {s}, via corollary {routed}")
    notes = _cotype_note(q)
    return ExponentResult(s, Theorem.INTRO, witness, tuple(conds), notes)


def hardy_littlewood_exponent(p: Sequence) -> ExponentResult:
    """Multiple ``(s, p)``-summability of every scalar ``m``-linear form."""
    p = _ext_list(p)
    if not p:
        raise DomainError("need at least one exponent")
    for x in p:
        if x < 1:
            raise DomainError(f"p_k = {x} < 1")
    m = len(p)
    inv_g = 1 - sum((dual_recip(x) for x in p), Fraction(0))
    conds = [Condition.check("1/gamma > 0", inv_g, ">", 0)]
    witness: dict = {}
    if inv_g <= 0:
        return ExponentResult(None, Theorem.HL, witness, tuple(conds))
    gamma = ExtRational.from_reciprocal(inv_g)
    witness["gamma"] = gamma
    if gamma < 2:
        witness["case"] = 1
        s = ExtRational.from_reciprocal(Fraction(m - 1, 2 * m) + inv_g / m)
    else:
        witness["case"] = 2
        s = gamma
    return ExponentResult(s, Theorem.HL, witness, tuple(conds))


# --------------------------------------------------------------------------
# inclusion
# --------------------------------------------------------------------------


def inclusion_exponent(r, p: Sequence, qv: Sequence) -> ExponentResult:
    """Multiple ``(r, p)`` implies multiple ``(s, q)`` with
    ``1/s - sum 1/q_j = 1/r - sum 1/p_j``."""
    r = as_ext(r)
    p, qv = _ext_list(p), _ext_list(qv)
    if len(p) != len(qv):
        raise DomainError("p and q must have the same length")
    if r < 1:
        raise DomainError(f"r = {r} < 1")
    for k, (pk, qk) in enumerate(zip(p, qv), 1):
        if pk < 1:
            raise DomainError(f"p_{k} = {pk} < 1")
        if qk < pk:
            raise DomainError(f"need q_{k} >= p_{k}, got {qk} < {pk}")
    val = r.recip() - sum((x.recip() for x in p), Fraction(0)) + sum((x.recip() for x in qv), Fraction(0))
    conds = (Condition.check("1/r - sum 1/p_j + sum 1/q_j > 0", val, ">", 0),)
    if val <= 0:
        return ExponentResult(None, Theorem.INCLUSION, {}, conds)
    return ExponentResult(ExtRational.from_reciprocal(val), Theorem.INCLUSION, {}, conds)


@dataclass(frozen=True)
class PerezGarciaComparison:
    t_inclusion: ExtRational
    t_pg: ExtRational
    inclusion_better: bool


def compare_perez_garcia(m: int, s) -> PerezGarciaComparison:
    """Weak exponent reachable from multiple ``(2m/(m+1), 1)``-summing at target ``s``.

    Accepts ``s`` in ``(2m/(m+1), 2]``.
    """
    s = as_ext(s)
    if m < 1:
        raise DomainError("m must be positive")
    lo = Fraction(2 * m, m + 1)
    if not (s > lo and s <= 2):
        raise DomainError(f"s = {s} outside ({fmt(lo)}, 2]")
    sf = s.fraction
    t = ExtRational(2 * m * m * sf / (2 * m + (2 * m * m - m - 1) * sf))
    return PerezGarciaComparison(t, s, t < s)


# --------------------------------------------------------------------------
# lemmas
# --------------------------------------------------------------------------


def praciano_rho(p: Sequence) -> ExtRational | None:
    """``rho`` with ``1/rho = 1 - sum 1/p_j``, or ``None`` if that is not positive."""
    p = _ext_list(p)
    for x in p:
        if x < 1:
            raise DomainError(f"p_j = {x} < 1")
    inv = 1 - sum((x.recip() for x in p), Fraction(0))
    return ExtRational.from_reciprocal(inv) if inv > 0 else None


@dataclass(frozen=True)
class PopaExponents:
    R: ExtRational
    Q: ExtRational


def popa_exponents(q, r: Sequence) -> PopaExponents:
    """``R = sum r_j/(q - r_j)`` and ``Q = qR/(1+R)``."""
    q = as_ext(q)
    r = _ext_list(r)
    if q.is_infinite or q == 0:
        raise DomainError(f"need 0 < q < inf, got {q}")
    if not r:
        raise DomainError("need at least one r_j")
    for j, x in enumerate(r, 1):
        if not (x > 0 and x < q):
            raise DomainError(f"need 0 < r_{j} < q, got {x}")
    qf = q.fraction
    R = sum((x.fraction / (qf - x.fraction) for x in r), Fraction(0))
    return PopaExponents(ExtRational(R), ExtRational(qf * R / (1 + R)))


def hl_inv_gamma(m1: int, m2: int, p1, p2, q, inv_alpha: Fraction, inv_beta: Fraction) -> Fraction:
    """Raw ``1/gamma`` of the two-block mixed inequality, from ``1/alpha`` and ``1/beta``.

    No domain checks beyond nonzero denominator; used for algebraic identities.
    """
    qf = as_ext(q).fraction
    a1 = m1 * as_ext(p1).recip()
    a2 = m2 * as_ext(p2).recip()
    den = 1 - qf * Fraction(inv_beta) - qf * a1
    if den == 0:
        raise InapplicableError("zero denominator 1 - q/beta - m1 q/p1")
    return Fraction(inv_alpha) - a1 * (1 - qf * Fraction(inv_alpha) - qf * a2) / den


def hl_gamma_result(m1: int, m2: int, p1, p2, q, alpha, beta) -> ExponentResult:
    p1, p2, q, alpha, beta = map(as_ext, (p1, p2, q, alpha, beta))
    if m1 < 1 or m2 < 1:
        raise DomainError("m1, m2 must be positive")
    if q.is_infinite or q < 1 or p1 < 1 or p2 < 1:
        raise DomainError("need q finite and p1, p2, q >= 1")
    for name, x in (("alpha", alpha), ("beta", beta)):
        if not (x > 0 and x <= q):
            raise DomainError(f"need 0 < {name} <= q, got {x}")
    inv = hl_inv_gamma(m1, m2, p1, p2, q, alpha.recip(), beta.recip())
    conds = [
        Condition.check("1/gamma > 0", inv, ">", 0),
        Condition.check("m1 alpha / p1 <= 1", m1 * alpha.fraction * p1.recip(), "<=", 1),
        Condition.check("m2 beta / p2 <= 1", m2 * beta.fraction * p2.recip(), "<=", 1),
    ]
    ok = all(c.passed for c in conds)
    s = ExtRational.from_reciprocal(inv) if ok else None
    return ExponentResult(s, Theorem.HL_GAMMA, {"inv_gamma": inv}, tuple(conds))


def hl_gamma(m1: int, m2: int, p1, p2, q, alpha, beta) -> ExtRational | None:
    """Exponent ``gamma`` of the two-block mixed inequality, ``None`` if a proviso fails."""
    return hl_gamma_result(m1, m2, p1, p2, q, alpha, beta).s


def displike_result(r, qv: Sequence, cbar: Iterable[int], cotype=None) -> ExponentResult:
    """``1/s = 1/r - sum_{j in Cbar} 1/q_j*``.

    The side conditions ``r >= q`` and ``s >= q_k`` are reported in the witness
    as advisory flags, not enforced.
    """
    r = as_ext(r)
    qv = _ext_list(qv)
    if r < 1:
        raise DomainError(f"r = {r} < 1")
    cbar = sorted(set(cbar))
    for j in cbar:
        if not 1 <= j <= len(qv):
            raise DomainError(f"index {j} outside 1..{len(qv)}")
    inv_s = r.recip() - sum((dual_recip(qv[j - 1]) for j in cbar), Fraction(0))
    conds = (Condition.check("1/s > 0", inv_s, ">", 0),)
    s = ExtRational.from_reciprocal(inv_s) if inv_s > 0 else None
    flags: dict = {}
    if cotype is not None:
        flags["r >= q"] = bool(r >= as_ext(cotype))
    if s is not None:
        flags["s >= q_k for all k"] = all(s >= x for x in qv)
    return ExponentResult(s, Theorem.DISPLIKE, {"flags": flags}, conds)


def displike_exponent(r, qv: Sequence, cbar: Iterable[int]) -> ExtRational | None:
    return displike_result(r, qv, cbar).s


# --------------------------------------------------------------------------
# harmonic analysis
# --------------------------------------------------------------------------


def sidon_product_exponent(p: Sequence) -> ExtRational:
    """Exponent ``p`` with ``1/p = 1/2 + 1/(2R)``, ``R = sum p_k/(2 - p_k)``."""
    p = _ext_list(p)
    if not p:
        raise DomainError("need at least one factor")
    for k, x in enumerate(p, 1):
        if x < 1 or x >= 2:
            raise DomainError(f"p_{k} = {x} outside [1, 2)")
    R = sum((x.fraction / (2 - x.fraction) for x in p), Fraction(0))
    return ExtRational.from_reciprocal(Fraction(1, 2) + 1 / (2 * R))


rider_product_exponent = sidon_product_exponent


# --------------------------------------------------------------------------
# optimality
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Opti1Result:
    s: ExtRational | None
    case: int | None


def opti1_optimal_s(m: int, r, p) -> Opti1Result:
    """Optimal ``s`` for separately ``(r, p)``-summing maps into ``l_2``, ``1 <= p <= 2``."""
    r, p = as_ext(r), as_ext(p)
    if m < 1:
        raise DomainError("m must be positive")
    if p < 1 or p > 2:
        raise DomainError(f"need p in [1, 2], got {p}")
    if r < p:
        raise DomainError(f"need r >= p, got r = {r}")
    ipc = dual_recip(p)
    if r.recip() < p.recip() - Fraction(1, 2):
        raise DomainError("need 1/r >= 1/p - 1/2")
    a = r.recip() - (m - 1) * ipc
    if a > Fraction(1, 2):
        inv_s = Fraction(m - 1, 2 * m) + r.recip() / m - (m - 1) * ipc / m
        return Opti1Result(ExtRational.from_reciprocal(inv_s), 1)
    if a > 0:
        return Opti1Result(ExtRational.from_reciprocal(a), 2)
    return Opti1Result(None, None)


def opti1_rho(u, p, m: int) -> Opti1Result:
    """Best ``rho`` making ``I_{u,2} o A`` multiple ``(rho, p)``-summing, ``1 <= u <= 2``."""
    u, p = as_ext(u), as_ext(p)
    if u < 1 or u > 2:
        raise DomainError(f"need u in [1, 2], got {u}")
    if p < 1:
        raise DomainError(f"p = {p} < 1")
    ipc = dual_recip(p)
    iu = u.recip()
    if m * ipc < iu - Fraction(1, 2):
        inv = Fraction(1, 2) + (iu - Fraction(1, 2) - m * ipc) / m
        return Opti1Result(ExtRational.from_reciprocal(inv), 1)
    if m * ipc < iu:
        return Opti1Result(ExtRational.from_reciprocal(iu - m * ipc), 2)
    return Opti1Result(None, None)


def opti2_predicate(r, p, s, q) -> bool:
    """Whether the diagonal bilinear form is ``(s, q)``-summing: ``1/s - 2/q <= 1/r - 2/p``."""
    r, p, s, q = map(as_ext, (r, p, s, q))
    if r < 2:
        raise DomainError(f"need r >= 2, got {r}")
    expected = ExtRational(2) if r.is_infinite else ExtRational(2 * r.fraction / (r.fraction + 1))
    if p != expected:
        raise DomainError(f"need p = 2r/(r+1) = {expected}, got {p}")
    if s < 2:
        raise DomainError(f"need s >= 2, got {s}")
    if q < p:
        raise DomainError(f"need q >= p, got q = {q}")
    return s.recip() - 2 * q.recip() <= r.recip() - 2 * p.recip()
