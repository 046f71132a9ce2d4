"""Continuous cohomology of Z_p^x with rank-one weight coefficients.

The unit group splits as (torsion) x (principal units): {+-1} x (1 + 4 Z_2)
at p = 2, mu_(p-1) x (1 + p Z_p) at odd p.  The principal units are
procyclic, topologically generated by 5 (p = 2) or 1 + p, and a weight-w
module Z_p(w) is rank one with a unit g acting by g^w.

Two independent computational routes live here.

* ``units_cohomology`` (structured): the total complex of the two-term
  complex M --(gamma^w - 1)--> M for the procyclic factor against the
  2-periodic resolution of the torsion factor; exact p-adic linear algebra
  throughout, so free ranks and torsion exponents come out certified.

* ``continuous_via_quotients`` (brute): cohomology of the finite quotients
  (Z/p^r)^x with coefficients Z/p^N(w), stabilized along inflation in r,
  then resolved in N through the coefficient sequence
  0 -> Z_p(w) --p^N--> Z_p(w) -> Z/p^N(w) -> 0, whose long exact sequence
  pins |H^s(Z/p^N)| = |H^s(Z_p)/p^N| * |H^(s+1)(Z_p)[p^N]|.  Growth in N
  (order slopes) detects Z_p summands; the bounded remainder unfolds into
  the torsion of consecutive degrees starting from the torsion-free H^0.

Raw finite-level cohomology does *not* equal the continuous answer (for
instance H^2((Z/2^r)^x, Z/2) has rank 3 for every r >= 4 while the
continuous rank is 2), which is why inflation images, not raw groups, are
stabilized.  Classes are also born late: a homomorphism onto Z/2^N only
exists from level r = N + 2 on, so levels must grow with the coefficient
precision.  Finite quotients are realized through the standard splitting
(Z/p^r)^x = (torsion) x (cyclic); the bar complex of the same quotient,
``bar_cohomology_finite``, is checked against this model in the test suite
on every instance small enough to afford it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BudgetExceeded, NoStabilization, PrecisionExhausted
from .exact_linalg import (
    DEFAULT_PRECISION,
    PRECISION_CEILING,
    BaseZMod,
    BaseZpTrunc,
    CochainComplex,
    IntMatrix,
    PadicScalar,
    TruncMatrix,
    complex_cohomology,
    lattice_quotient_exponents,
    snf_mod,
    vp,
)
from .modules import ModuleExpr, zero_module

__all__ = [
    "WeightModule",
    "FiniteGroupData",
    "CohomologyResult",
    "procyclic_generator",
    "torsion_order",
    "teichmuller",
    "primitive_root",
    "weight_scalar",
    "procyclic_cohomology",
    "cyclic_cohomology",
    "units_cohomology",
    "bar_cohomology_finite",
    "continuous_via_quotients",
    "cyclic_group_data",
    "units_group_data",
    "quotient_level_cohomology",
    "DEFAULT_BAR_BUDGET",
]

DEFAULT_BAR_BUDGET = 10**6


def procyclic_generator(p: int) -> int:
    """Topological generator of the principal units: 5 at p = 2, else 1+p."""
    return 5 if p == 2 else p + 1


def torsion_order(p: int) -> int:
    return 2 if p == 2 else p - 1


def primitive_root(p: int) -> int:
    """Smallest primitive root mod an odd prime."""
    for g in range(2, p):
        seen = {pow(g, k, p) for k in range(1, p)}
        if len(seen) == p - 1:
            return g
    raise ValueError(f"{p} has no primitive root; is it prime?")


def teichmuller(p: int, N: int) -> int:
    """The Teichmueller lift mod p^N of the smallest primitive root:
    the unique (p-1)-st root of unity congruent to it mod p."""
    if p == 2:
        return (-1) % 2**N
    x = primitive_root(p)
    M = p**N
    for _ in range(N + 1):
        x = pow(x, p, M)
    assert pow(x, p - 1, M) == 1
    return x


def weight_scalar(p: int, w: int, N: int, g: int) -> int:
    """g^w mod p^N; negative weights act through the modular inverse."""
    return pow(g, w, p**N)


@dataclass(frozen=True)
class WeightModule:
    """The rank-one module Z_p(w) or Z/p^N(w): a unit g acts by g^w."""

    p: int
    w: int
    base: BaseZMod | BaseZpTrunc

    def action(self, g: int) -> int:
        return weight_scalar(self.p, self.w, self.base.N, g)


@dataclass(frozen=True)
class CohomologyResult:
    p: int
    w: Optional[int]
    groups: tuple[tuple[int, ModuleExpr], ...]
    route: str
    certificate: dict = field(default_factory=dict, compare=False)

    def group(self, s: int) -> ModuleExpr:
        for deg, expr in self.groups:
            if deg == s:
                return expr
        return zero_module()

    def degrees(self) -> list[int]:
        return [deg for deg, _ in self.groups]


def _result(p, w, exprs: dict[int, ModuleExpr], route, certificate) -> CohomologyResult:
    return CohomologyResult(
        p, w, tuple(sorted(exprs.items())), route, certificate
    )


# ---------------------------------------------------------------------------
# procyclic factor


def _procyclic_scalar(p: int, w: int) -> int:
    """gamma^w - 1 as an exact integer, up to a unit.

    For negative w the honest value (gamma^w - 1) is not an integer; the
    two-term complex is rescaled by the unit gamma^|w|, replacing it with
    1 - gamma^|w|, which has the same kernel and cokernel.
    """
    g = procyclic_generator(p)
    if w == 0:
        return 0
    if w > 0:
        return g**w - 1
    return 1 - g ** (-w)


def procyclic_cohomology(p: int, w: int, precision: int = DEFAULT_PRECISION) -> CohomologyResult:
    """H^0 and H^1 of the procyclic factor of the units on Z_p(w), from the
    two-term complex multiplication-by-(gamma^w - 1)."""
    c = _procyclic_scalar(p, w)
    if w == 0:
        from .modules import padic

        groups = {0: padic(p), 1: padic(p)}
        return _result(p, w, groups, "procyclic", {"precision": precision})
    v = vp(c, p)
    if precision <= v:
        raise PrecisionExhausted(
            f"v_p(gamma^w - 1) = {v} needs precision > {v}, got {precision}"
        )
    from .modules import cyclic

    groups = {0: zero_module(), 1: cyclic(p, v)}
    return _result(p, w, groups, "procyclic", {"precision": precision})


# ---------------------------------------------------------------------------
# finite cyclic groups via the 2-periodic resolution


def cyclic_cohomology(m: int, a: int, base: BaseZMod | BaseZpTrunc, s_max: int) -> CohomologyResult:
    """H^s of a cyclic group of order m acting on the rank-one base module
    through the unit a (so a^m = 1 in the base).

    H^0 is the fixed points; in odd degrees ker(norm)/im(a-1); in positive
    even degrees fixed-points/im(norm), with norm = 1 + a + ... + a^(m-1).
    """
    p, N = base.p, base.N
    M = p**N
    if m < 1:
        raise ValueError("group order must be positive")
    if isinstance(base, BaseZMod):
        if pow(a, m, M) != 1:
            raise ValueError(f"action unit {a} does not have order dividing {m} mod {M}")
        d1 = (a - 1) % M
        norm = sum(pow(a, i, M) for i in range(m)) % M

        def val(x):
            return N if x == 0 else min(vp(x, p), N)

        va, vn = val(d1), val(norm)

        def subquotient(ker_v, im_v):
            from .modules import cyclic as cyc

            e = ker_v + im_v - N
            return cyc(p, e) if e >= 1 else zero_module()

        groups = {0: subquotient(va, N)}
        for s in range(1, s_max + 1):
            groups[s] = subquotient(vn, va) if s % 2 else subquotient(va, vn)
        return _result(p, None, groups, "cyclic", {"precision": N})
    # truncated Z_p base: the action unit must be exact (typically +-1)
    if a**m != 1:
        raise ValueError("over Z_p the action unit must satisfy a^m = 1 exactly")
    from .modules import cyclic as cyc, padic

    d1 = a - 1
    norm = sum(a**i for i in range(m))

    def kernel_expr(x):
        return None if x == 0 else zero_module()  # None marks a full kernel

    def quotient_of_zp(by):
        if by == 0:
            return padic(p)
        v = vp(by, p)
        if v >= N:
            raise PrecisionExhausted("torsion exponent at or beyond precision")
        return cyc(p, v) if v >= 1 else zero_module()

    groups = {0: padic(p) if d1 == 0 else zero_module()}
    for s in range(1, s_max + 1):
        ker_scalar, im_scalar = (norm, d1) if s % 2 else (d1, norm)
        if ker_scalar != 0:
            groups[s] = zero_module()
        else:
            groups[s] = quotient_of_zp(im_scalar)
    return _result(p, None, groups, "cyclic", {"precision": N})


# ---------------------------------------------------------------------------
# structured route: torsion x procyclic total complex over truncated Z_p


def _torsion_scalars(p: int, w: int, N: int):
    """(t - 1, norm) for the torsion generator acting by its w-th power.
    Entries are exact integers whenever the acting root of unity is +-1;
    otherwise they are Teichmueller residues (odd p only)."""
    m = torsion_order(p)
    wm = w % m
    if wm == 0:
        return 0, m, True
    if 2 * wm == m:
        return -2, 0, True
    om = teichmuller(p, N)
    t = pow(om, wm, p**N)
    # a nontrivial root of unity: t - 1 is a unit, and the full norm sum
    # (t^m - 1)/(t - 1) vanishes exactly
    h_even = PadicScalar.from_residue(t - 1, p, N)
    h_odd = PadicScalar.exact_zero(p)
    return h_even, h_odd, False


def _units_total_complex(p: int, w: int, s_top: int, N: int) -> CochainComplex:
    """Total complex of (2-periodic torsion resolution) x (two-term
    procyclic complex) on Z_p(w), degrees 0..s_top.

    Tot^0 is one copy of the base; Tot^s for s >= 1 has cells
    (s, 0) and (s-1, 1), cyclic degree second.  The s-th differential is
    [[h_s, 0], [(-1)^s c, h_(s-1)]] with h alternating (t-1, norm) and
    c = gamma^w - 1 (unit-rescaled for negative w)."""
    h_even, h_odd, exact = _torsion_scalars(p, w, N)
    c = _procyclic_scalar(p, w)

    def h(i):
        return h_even if i % 2 == 0 else h_odd

    ranks = tuple(1 if s == 0 else 2 for s in range(s_top + 1))
    diffs = []
    if exact:
        for s in range(s_top):
            if s == 0:
                diffs.append(IntMatrix.from_rows([[h(0)], [c]]))
            else:
                diffs.append(
                    IntMatrix.from_rows([[h(s), 0], [(-1) ** s * c, h(s - 1)]])
                )
    else:
        zero = PadicScalar.exact_zero(p)

        def sc(x):
            return x if isinstance(x, PadicScalar) else PadicScalar.from_int(x, p, N)

        for s in range(s_top):
            if s == 0:
                diffs.append(TruncMatrix.from_rows([[sc(h(0))], [sc(c)]]))
            else:
                diffs.append(
                    TruncMatrix.from_rows(
                        [[sc(h(s)), zero], [sc((-1) ** s * c), sc(h(s - 1))]]
                    )
                )
    return CochainComplex(BaseZpTrunc(p, N), 0, ranks, tuple(diffs))


def units_cohomology(
    p: int,
    w: int,
    s_max: int,
    precision: int = DEFAULT_PRECISION,
    precision_ceiling: int = PRECISION_CEILING,
) -> CohomologyResult:
    """H^s(Z_p^x, Z_p(w)) for 0 <= s <= s_max by the structured route.

    Starts at the given working precision and doubles on
    PrecisionExhausted up to the ceiling.
    """
    if s_max < 0:
        raise ValueError("s_max must be >= 0")
    N = precision
    while True:
        try:
            cx = _units_total_complex(p, w, s_max + 1, N)
            groups = {s: complex_cohomology(cx, s) for s in range(s_max + 1)}
            return _result(p, w, groups, "structured", {"precision": N})
        except PrecisionExhausted:
            if N >= precision_ceiling:
                raise
            N = min(2 * N, precision_ceiling)


# ---------------------------------------------------------------------------
# bar complexes of finite groups


@dataclass(frozen=True)
class FiniteGroupData:
    """A finite group with an action on Z/p^N by units.

    table[i][j] is the index of g_i g_j; index 0 must be the identity.
    Group axioms and multiplicativity of the action are checked on
    construction.
    """

    p: int
    N: int
    table: tuple[tuple[int, ...], ...]
    action: tuple[int, ...]

    def __post_init__(self):
        n = len(self.table)
        tbl = np.array(self.table, dtype=np.int64)
        if tbl.shape != (n, n) or len(self.action) != n:
            raise ValueError("table/action shape mismatch")
        if not (tbl[0] == np.arange(n)).all() or not (tbl[:, 0] == np.arange(n)).all():
            raise ValueError("index 0 is not an identity")
        if not all(sorted(row) == list(range(n)) for row in self.table):
            raise ValueError("rows are not permutations; inverses missing")
        left = tbl[tbl]  # (i,j,k) -> (g_i g_j) g_k
        right = tbl[:, tbl]  # (i,j,k) -> g_i (g_j g_k)
        if not (left == right).all():
            raise ValueError("multiplication table is not associative")
        M = self.p**self.N
        act = np.array(self.action, dtype=np.int64) % M
        if any(a % self.p == 0 for a in act.tolist()):
            raise ValueError("action values must be units")
        if ((act[tbl] - act[:, None] * act[None, :]) % M).any():
            raise ValueError("action is not multiplicative")

    def __len__(self) -> int:
        return len(self.table)


def cyclic_group_data(m: int, a: int, p: int, N: int) -> FiniteGroupData:
    """Cyclic group of order m, generator acting by the unit a."""
    M = p**N
    if pow(a, m, M) != 1:
        raise ValueError("a^m must be 1 mod p^N")
    table = tuple(tuple((i + j) % m for j in range(m)) for i in range(m))
    action = tuple(pow(a, i, M) for i in range(m))
    return FiniteGroupData(p, N, table, action)


def units_group_data(p: int, r: int, w: int, N: int) -> FiniteGroupData:
    """(Z/p^r)^x acting on Z/p^N by w-th powers.

    The action must factor through the quotient: the principal unit
    1 + p^r has to act trivially mod p^N, otherwise ValueError.
    """
    pr = p**r
    M = p**N
    units = [u for u in range(1, pr) if u % p != 0]
    units.sort(key=lambda u: u != 1)
    if pow((1 + pr) % M if pr >= M else 1 + pr, w, M) != 1:
        raise ValueError(f"weight {w} does not descend to level r={r} at precision {N}")
    index = {u: i for i, u in enumerate(units)}
    table = tuple(tuple(index[(u * v) % pr] for v in units) for u in units)
    action = tuple(pow(u, w, M) for u in units)
    return FiniteGroupData(p, N, table, action)


def _bar_differential(g: FiniteGroupData, k: int) -> np.ndarray:
    """Matrix of d : C^k -> C^(k+1) for inhomogeneous cochains G^k -> M,
    (df)(g_1..g_(k+1)) = g_1 f(g_2..) + sum_j (-1)^j f(.., g_j g_(j+1), ..)
    + (-1)^(k+1) f(g_1..g_k)."""
    n = len(g)
    M = g.p**g.N
    rows, cols = n ** (k + 1), n**k
    tbl = np.array(g.table, dtype=np.int64)
    act = np.array(g.action, dtype=np.int64)
    d = np.zeros((rows, cols), dtype=np.int64)
    R = np.arange(rows, dtype=np.int64)
    digits = [(R // n ** (k - i)) % n for i in range(k + 1)]
    weights = [n ** (k - 1 - i) for i in range(k)]
    np.add.at(d, (R, R % cols), act[digits[0]])
    for j in range(1, k + 1):
        merged = tbl[digits[j - 1], digits[j]]
        col = np.zeros(rows, dtype=np.int64)
        pos = 0
        for i in range(k + 1):
            if i == j - 1:
                col += merged * weights[pos]
                pos += 1
            elif i != j:
                col += digits[i] * weights[pos]
                pos += 1
        np.add.at(d, (R, col), (-1) ** j)
    np.add.at(d, (R, R // n), (-1) ** (k + 1))
    return d % M


def bar_cohomology_finite(
    g: FiniteGroupData, s_max: int, budget: int = DEFAULT_BAR_BUDGET
) -> CohomologyResult:
    """Cohomology of the full function-space cochain complex of a finite
    group, degrees 0..s_max.  The budget caps the dense differential
    matrix sizes |G|^(2k+1)."""
    n = len(g)
    for k in range(s_max + 1):
        if n ** (2 * k + 1) > budget:
            raise BudgetExceeded(
                f"bar differential d^{k} needs {n ** (2 * k + 1)} entries "
                f"(budget {budget})"
            )
    ranks = tuple(n**k for k in range(s_max + 2))
    diffs = tuple(_bar_differential(g, k) for k in range(s_max + 1))
    cx = CochainComplex(BaseZMod(g.p, g.N), 0, ranks, diffs)
    groups = {s: complex_cohomology(cx, s) for s in range(s_max + 1)}
    return _result(g.p, None, groups, "bar", {"precision": g.N, "order": n})


# ---------------------------------------------------------------------------
# brute route: finite quotients, inflation stabilization, N-unfolding


def _geometric_sum(a: int, count: int, M: int) -> int:
    """1 + a + ... + a^(count-1) mod M by binary splitting."""
    total, power, length = 0, 1, 0  # power = a^length
    add_total, add_power, add_len = 1, a % M, 1
    bits = count
    while bits:
        if bits & 1:
            total = (total + power * add_total) % M
            power = (power * add_power) % M
            length += add_len
        add_total = (add_total + add_power * add_total) % M
        add_power = (add_power * add_power) % M
        add_len *= 2
        bits >>= 1
    return total


@dataclass
class _LevelData:
    r: int
    cocycles: list[list[np.ndarray]]  # per degree: generator vectors
    boundaries: list[list[np.ndarray]]


def _cyclic_order_at_level(p: int, r: int) -> int:
    return p ** max(r - 2, 0) if p == 2 else p ** max(r - 1, 0)


def _min_level(p: int, w: int, N: int) -> int:
    r = 2 if p == 2 else 1
    gamma = procyclic_generator(p)
    M = p**N
    while pow(gamma, w * _cyclic_order_at_level(p, r), M) != 1:
        r += 1
    return r


def _level_complex_matrices(p: int, w: int, r: int, N: int, s_top: int):
    """Differentials of the (torsion x cyclic)-periodic total complex of
    (Z/p^r)^x on Z/p^N(w); Tot^s has s+1 cells ordered by torsion degree."""
    M = p**N
    m0 = torsion_order(p)
    t = pow(teichmuller(p, N), w % m0, M)
    ht = [(t - 1) % M, _geometric_sum(t, m0, M)]
    q = _cyclic_order_at_level(p, r)
    a = pow(procyclic_generator(p), w, M)
    if pow(a, q, M) != 1:
        raise ValueError(f"action does not descend to level {r}")
    hc = [(a - 1) % M, _geometric_sum(a, q, M)]
    diffs = []
    for s in range(s_top + 1):
        d = np.zeros((s + 2, s + 1), dtype=np.int64)
        for i in range(s + 1):  # cell (i, s - i)
            d[i + 1, i] = ht[i % 2]
            sign = 1 if i % 2 == 0 else M - 1
            d[i, i] = (sign * hc[(s - i) % 2]) % M
        diffs.append(d)
    return diffs


def _level_data(p: int, w: int, r: int, N: int, s_top: int) -> _LevelData:
    diffs = _level_complex_matrices(p, w, r, N, s_top)
    M = p**N
    cocycles, boundaries = [], []
    for s in range(s_top + 1):
        n = s + 1
        vals, _, _, V, _ = snf_mod(diffs[s].copy(), p, N, want_cols=True)
        avals = [min(v, N) for v in vals] + [N] * (n - len(vals))
        gens = [(V[:, i] * p ** (N - avals[i])) % M for i in range(n)]
        cocycles.append(gens)
        if s == 0:
            boundaries.append([])
        else:
            b = diffs[s - 1] % M
            boundaries.append([b[:, j].copy() for j in range(b.shape[1])])
    return _LevelData(r, cocycles, boundaries)


def _inflation_scalars(p: int, s: int) -> np.ndarray:
    """Cellwise multiplier of one inflation step on Tot^s: the cyclic
    factor's index grows by p, contributing p^floor(j/2) in cyclic
    degree j; the torsion factor is untouched."""
    return np.array([p ** ((s - i) // 2) for i in range(s + 1)], dtype=np.int64)


def _image_exponents(levels: dict[int, _LevelData], p: int, N: int, s: int, r_from: int, r_to: int):
    """Exponents of im(H^s(level r_from) -> H^s(level r_to))."""
    M = p**N
    scalar = np.ones(s + 1, dtype=object)
    for _ in range(r_to - r_from):
        scalar = scalar * _inflation_scalars(p, s)
    scalar = np.array([int(x) % M for x in scalar], dtype=np.int64)
    pushed = [(z * scalar) % M for z in levels[r_from].cocycles[s]]
    return lattice_quotient_exponents(
        pushed, levels[r_to].boundaries[s], s + 1, p, N
    )


def _stable_colimit_exponents(p, w, N, s_top, level_ceiling):
    """For each degree s <= s_top, the stabilized inflation image of
    H^s((Z/p^r)^x, Z/p^N(w)): stop once the image exponents agree for two
    consecutive lags and three consecutive base levels."""
    r0 = _min_level(p, w, N)
    levels: dict[int, _LevelData] = {}

    def level(r):
        if r not in levels:
            levels[r] = _level_data(p, w, r, N, s_top)
        return levels[r]

    out = []
    for s in range(s_top + 1):
        stable_run: list[tuple] = []
        answer = None
        base = r0
        while answer is None:
            # image from this base, pushed until two consecutive lags agree
            lag_prev = None
            lag_val = None
            for lag in range(1, level_ceiling - base + 1):
                if base + lag > level_ceiling:
                    break
                level(base), level(base + lag)
                cur = _image_exponents(levels, p, N, s, base, base + lag)
                if lag_prev is not None and cur == lag_prev:
                    lag_val = cur
                    break
                lag_prev = cur
            if lag_val is None:
                raise NoStabilization(
                    f"no lag stabilization for s={s}, w={w}, N={N} "
                    f"within level ceiling {level_ceiling}"
                )
            stable_run.append(lag_val)
            if len(stable_run) >= 3 and stable_run[-1] == stable_run[-2] == stable_run[-3]:
                answer = lag_val
            base += 1
            if base > level_ceiling:
                raise NoStabilization(
                    f"no base stabilization for s={s}, w={w}, N={N} "
                    f"within level ceiling {level_ceiling}"
                )
        out.append(answer)
    return out, max(levels)


def _bar_crosscheck(p: int, w: int, s_top: int, bar_budget: int) -> None:
    """Confirm the periodic quotient model against the honest bar complex
    of the smallest usable quotient, when the budget affords it."""
    N = 2
    r = _min_level(p, w, N)
    try:
        g = units_group_data(p, r, w, N)
    except ValueError:
        return
    n = len(g)
    s_chk = min(s_top, 2)
    while s_chk >= 0 and n ** (2 * s_chk + 1) > bar_budget:
        s_chk -= 1
    if s_chk < 0:
        return
    bar = bar_cohomology_finite(g, s_chk, budget=bar_budget)
    small = quotient_level_cohomology(p, w, r, N, s_chk)
    for s in range(s_chk + 1):
        if bar.group(s) != small[s]:
            raise AssertionError(
                f"quotient model disagrees with the bar complex at level {r}, "
                f"degree {s}"
            )


def continuous_via_quotients(
    p: int,
    w: int,
    s_max: int,
    precision_ceiling: int = 24,
    level_ceiling: int = 0,
    bar_budget: int = DEFAULT_BAR_BUDGET,
    _s_top: Optional[int] = None,
) -> CohomologyResult:
    """H^s(Z_p^x, Z_p(w)) for 0 <= s <= s_max by finite-quotient descent.

    Per coefficient precision N the finite-level answers A^s_N are
    stabilized along inflation; across N the orders
    log_p |A^s_N| = rho_s N + m_s(N) + m_(s+1)(N) unfold into the free
    ranks rho_s (order slopes, the Z_p detection rule) and the torsion
    partitions m_s, seeded by the torsion-freeness of H^0.  The chain is
    accepted once slopes repeat over two N increments and every torsion
    part saturates; otherwise the precision grows until the ceiling.

    Finite levels run on the periodic product model of (Z/p^r)^x; before
    the sweep the model is cross-checked against the bar complex of the
    smallest usable quotient whenever that fits in bar_budget.
    """
    if s_max < 0:
        raise ValueError("s_max must be >= 0")
    s_top = s_max if _s_top is None else _s_top
    _bar_crosscheck(p, w, s_top, bar_budget)
    gamma = procyclic_generator(p)
    v_anchor = 0 if w == 0 else vp(gamma ** abs(w) - 1, p)
    n_top = max(4, v_anchor + 2)
    while True:
        if n_top > precision_ceiling:
            raise NoStabilization(
                f"precision ceiling {precision_ceiling} hit for w={w}"
            )
        ceiling = level_ceiling or (2 * n_top + 10)
        orders: dict[int, list[int]] = {}
        max_level = 0
        try:
            for N in range(1, n_top + 1):
                exps, used = _stable_colimit_exponents(p, w, N, s_top, ceiling)
                max_level = max(max_level, used)
                orders[N] = [sum(e) for e in exps]
        except NoStabilization:
            n_top += 2
            continue
        unfolded = _unfold_orders(orders, s_top, n_top)
        if unfolded is None:
            n_top += 2
            continue
        rho, tau = unfolded
        groups = {
            s: ModuleExpr(p, padics=rho[s], cyclics=tuple(tau[s]))
            for s in range(s_max + 1)
        }
        return _result(
            p,
            w,
            groups,
            "brute",
            {"precision": n_top, "max_level": max_level},
        )


def _unfold_orders(orders: dict[int, list[int]], s_top: int, n_top: int):
    """Resolve a_s(N) = rho_s N + m_s(N) + m_(s+1)(N) with m_0 = 0.

    Returns (rho, tau) or None when the data has not saturated: slopes
    must repeat over the top two increments and each torsion count must be
    flat at the top, non-negative, monotone, with non-increasing
    increments (a partition's counting function).
    """
    if n_top < 4:
        return None
    a = {s: {N: orders[N][s] for N in orders} for s in range(s_top + 1)}
    rho = []
    for s in range(s_top + 1):
        d1 = a[s][n_top] - a[s][n_top - 1]
        d2 = a[s][n_top - 1] - a[s][n_top - 2]
        if d1 != d2 or d1 < 0:
            return None
        rho.append(d1)
    m_prev = {N: 0 for N in range(0, n_top + 1)}
    tau = []
    for s in range(s_top + 1):
        tau.append(_partition_from_counts(m_prev, n_top))
        if tau[-1] is None:
            return None
        m_next = {0: 0}
        for N in range(1, n_top + 1):
            m_next[N] = a[s][N] - rho[s] * N - m_prev[N]
            if m_next[N] < 0:
                return None
        if m_next[n_top] != m_next[n_top - 1]:
            return None
        m_prev = m_next
    return rho, [t for t in tau]


def _partition_from_counts(m: dict[int, int], n_top: int):
    """Partition with sum-of-min profile m(N) = sum_j min(e_j, N)."""
    counts = [m[k] - m[k - 1] for k in range(1, n_top + 1)]
    if any(c < 0 for c in counts):
        return None
    if any(counts[i] < counts[i + 1] for i in range(len(counts) - 1)):
        return None
    if counts and counts[-1] != 0:
        return None  # not saturated
    parts = []
    for k in range(1, len(counts) + 1):
        nxt = counts[k] if k < len(counts) else 0
        parts.extend([k] * (counts[k - 1] - nxt))
    return tuple(sorted(parts, reverse=True))


def quotient_level_cohomology(p: int, w: int, r: int, N: int, s_max: int) -> list[ModuleExpr]:
    """Raw H^s((Z/p^r)^x, Z/p^N(w)) for s <= s_max from the periodic
    product model (no inflation stabilization); used to cross-check the
    model against the bar complex of the same finite group."""
    diffs = _level_complex_matrices(p, w, r, N, s_max + 1)
    ranks = tuple(s + 1 for s in range(s_max + 3))
    cx = CochainComplex(BaseZMod(p, N), 0, ranks[: s_max + 2], tuple(diffs[: s_max + 1]))
    return [complex_cohomology(cx, s) for s in range(s_max + 1)]
