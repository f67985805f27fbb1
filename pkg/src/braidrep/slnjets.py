"""The vector representation of U_t(sl_N) over Q(u), t = u^N, and its jet
degeneration at u = exp(n k h / N).

Operators act on V^(x)n (x) V_aux with V_aux = V, slots indexed n..1 from
the left and the auxiliary slot 0 on the right.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .blocks import CheckResult
from .linalg import SparseMat, compose, kron_all, permutation
from .scalars import Jet, RatFunc, jet_cosh, jet_exp, jet_sinh

U = RatFunc.gen("u")


def upow(e: int) -> RatFunc:
    return RatFunc.monomial(e, var="u")


# ---------------------------------------------------------------------------
# The R-matrix


@dataclass(frozen=True)
class VectorRepR:
    """sigma = u^-1 Rhat on V (x) V, V the defining representation of sl_N."""

    N: int
    Rhat: SparseMat


@lru_cache(maxsize=None)
def rhat(N: int) -> VectorRepR:
    """Hecke roots are u^(N-1) (symmetric) and -u^(-N-1) (antisymmetric)."""
    if N < 2:
        raise ValueError("N must be at least 2")
    t = upow(N)
    gap = t - t ** -1
    inv_u = upow(-1)
    data = {}
    for i in range(N):
        data[(i * N + i, i * N + i)] = t * inv_u
        for j in range(i + 1, N):
            # e_i (x) e_j -> e_j (x) e_i ;  e_j (x) e_i -> e_i (x) e_j + (t - t^-1) e_j (x) e_i
            data[(j * N + i, i * N + j)] = inv_u
            data[(i * N + j, j * N + i)] = inv_u
            data[(j * N + i, j * N + i)] = gap * inv_u
    return VectorRepR(N, SparseMat(N * N, N * N, data))


def hecke_check(N: int) -> bool:
    s = rhat(N).Rhat
    one = SparseMat.identity(N * N, RatFunc.const(1, "u"))
    a = s - one.scale(upow(N - 1))
    b = s + one.scale(upow(-N - 1))
    return compose(a, b).is_zero()


def ybe_check(N: int) -> bool:
    s = rhat(N).Rhat
    I = SparseMat.identity(N, RatFunc.const(1, "u"))
    s1, s2 = kron_all([s, I]), kron_all([I, s])
    return compose(s1, compose(s2, s1)) == compose(s2, compose(s1, s2))


# ---------------------------------------------------------------------------
# Classical tensors


@dataclass(frozen=True)
class ClassicalTensors:
    N: int
    P: SparseMat
    Omega: SparseMat


def flip_matrix(N: int) -> SparseMat:
    return permutation([j * N + i for i in range(N) for j in range(N)], Fraction(1))


def elementary(N: int, a: int, b: int) -> SparseMat:
    return SparseMat(N, N, {(a, b): Fraction(1)})


def casimir_omega(N: int) -> SparseMat:
    """(Delta(C) - C (x) 1 - 1 (x) C) / 2 on V (x) V for the trace-form Casimir of sl_N."""
    I = SparseMat.identity(N, Fraction(1))
    II = SparseMat.identity(N * N, Fraction(1))
    pairs = [(elementary(N, a, b), elementary(N, b, a)) for a in range(N) for b in range(N)]
    # the gl_N Casimir minus its central part (1/N) I (x) I is the sl_N one
    C = SparseMat.zeros(N, N)
    dC = SparseMat.zeros(N * N, N * N)
    for x, y in pairs:
        C = C + compose(x, y)
        dx, dy = kron_all([x, I]) + kron_all([I, x]), kron_all([y, I]) + kron_all([I, y])
        dC = dC + compose(dx, dy)
    C = C - I.scale(Fraction(1, N))
    dC = dC - II.scale(Fraction(4, N))
    return (dC - kron_all([C, I]) - kron_all([I, C])).scale(Fraction(1, 2))


@lru_cache(maxsize=None)
def classical_tensors(N: int) -> ClassicalTensors:
    P = flip_matrix(N)
    return ClassicalTensors(N, P, P - SparseMat.identity(N * N, Fraction(1)).scale(Fraction(1, N)))


def omega_commutes_with_sl_N(N: int) -> bool:
    om = classical_tensors(N).Omega
    I = SparseMat.identity(N, Fraction(1))
    for a in range(N):
        for b in range(N):
            if a == b:
                continue
            x = elementary(N, a, b)
            d = kron_all([x, I]) + kron_all([I, x])
            if compose(om, d) != compose(d, om):
                return False
    return True


# ---------------------------------------------------------------------------
# Jet substitution


def _k_value(k) -> RatFunc:
    if k is None:
        return RatFunc.gen("k")
    if isinstance(k, RatFunc):
        return k
    return RatFunc.const(Fraction(k), "k")


def _jet_poly(coeffs, x: Jet) -> Jet:
    out = Jet.const(0, x.order)
    for c in reversed(coeffs):
        out = out * x + int(c)
    return out


def jet_substitute_scalar(f: RatFunc, u_jet: Jet) -> Jet:
    return _jet_poly(f.num.coeffs(), u_jet) / _jet_poly(f.den.coeffs(), u_jet)


def jet_substitute(m: VectorRepR, n: int, k, order: int) -> SparseMat:
    """sigma with u = exp(n k h / N), entrywise modulo h^order."""
    uj = jet_exp(Jet.h(order, _k_value(k) * Fraction(n, m.N)))
    return m.Rhat.map_entries(lambda f: jet_substitute_scalar(f, uj))


def _jet_identity(dim: int, order: int) -> SparseMat:
    return SparseMat.identity(dim, Jet.const(1, order))


def _place(op: SparseMat, N: int, total: int, left: int, unit) -> SparseMat:
    """op on two adjacent positions starting at ``left`` among ``total`` slots."""
    mats = []
    if left:
        mats.append(SparseMat.identity(N ** left, unit))
    mats.append(op)
    right = total - left - 2
    if right:
        mats.append(SparseMat.identity(N ** right, unit))
    return kron_all(mats)


@dataclass
class FormalOps:
    N: int
    n: int
    k: RatFunc
    order: int
    T: dict
    Y: dict


def build_formal_ops(N: int, n: int, k=None, order: int = 3) -> FormalOps:
    """T_i and Y_i as jet matrices on V^(x)n (x) V_aux."""
    sig = jet_substitute(rhat(N), n, k, order)
    total = n + 1
    unit = Jet.const(1, order)
    T = {i: _place(sig, N, total, n - i - 1, unit) for i in range(1, n)}
    Y = {1: _place(compose(sig, sig), N, total, n - 1, unit)}
    for i in range(1, n):
        Y[i + 1] = compose(T[i], compose(Y[i], T[i]))
    return FormalOps(N, n, _k_value(k), order, T, Y)


def coefficient_matrix(mat: SparseMat, power: int) -> SparseMat:
    """The h^power coefficient of a jet matrix (entries in Q(k))."""
    return SparseMat(mat.rows, mat.cols, {(r, c): v.coeffs[power] for r, c, v in mat.items()})


class PreconditionError(ValueError):
    pass


def jet_matrix_log(mat: SparseMat) -> SparseMat:
    """log(1 + Z) = sum (-1)^(j+1) Z^j / j for Z = mat - 1 divisible by h."""
    order = next(iter(mat.items()))[2].order
    one = _jet_identity(mat.rows, order)
    Z = mat - one
    out = SparseMat.zeros(mat.rows, mat.cols)
    power = one
    for j in range(1, order):
        power = compose(power, Z)
        out = out + power.scale(Fraction((-1) ** (j + 1), j))
    return out


@dataclass
class Degenerate:
    s: dict
    y: dict


def extract_degenerate(ops: FormalOps) -> Degenerate:
    """s_i = h^0 part of (q T_i - sinh(hk)) / cosh(hk); y_i = h^0 part of log(Y_i) / h."""
    order = ops.order
    dim = ops.N ** (ops.n + 1)
    one = _jet_identity(dim, order)
    hk = Jet.h(order, ops.k)
    q = jet_exp(Jet.h(order))
    sh, ch_inv = jet_sinh(hk), jet_cosh(hk).inverse()
    s = {}
    for i, t in ops.T.items():
        expr = (t.scale(q) - one.scale(sh)).scale(ch_inv)
        s[i] = coefficient_matrix(expr, 0)
    y = {}
    for i, Yi in ops.Y.items():
        const = coefficient_matrix(Yi, 0)
        if const != SparseMat.identity(dim, RatFunc.const(1, "k")):
            raise PreconditionError(f"Y_{i} is not 1 mod h")
        logY = jet_matrix_log(Yi)
        y[i] = coefficient_matrix(logY, 1)
    return Degenerate(s, y)


# ---------------------------------------------------------------------------
# Checks


def slot_flip(N: int, total: int, a: int, b: int, unit) -> SparseMat:
    """Flip of slots a and b (slot indices n..0 left to right, total = n + 1)."""
    pa, pb = total - 1 - a, total - 1 - b
    perm = []
    for idx in range(N ** total):
        digits = []
        x = idx
        for _ in range(total):
            digits.append(x % N)
            x //= N
        digits.reverse()
        digits[pa], digits[pb] = digits[pb], digits[pa]
        y = 0
        for dgt in digits:
            y = y * N + dgt
        perm.append(y)
    return permutation(perm, unit)


def yis_target(N: int, n: int, i: int) -> SparseMat:
    """Omega_{i,0} + sum_{j<i} s_{ij} - (i-1)/N on V^(x)n (x) V."""
    total = n + 1
    unit = RatFunc.const(1, "k")
    dim = N ** total
    I = SparseMat.identity(dim, unit)
    out = slot_flip(N, total, i, 0, unit) - I.scale(RatFunc.const(Fraction(1, N), "k"))
    for j in range(1, i):
        out = out + slot_flip(N, total, i, j, unit)
    return out - I.scale(RatFunc.const(Fraction(i - 1, N), "k"))


def proportionality(a: SparseMat, b: SparseMat):
    """alpha with a == alpha * b, or None."""
    items = list(b.items())
    if not items:
        return None if not a.is_zero() else RatFunc.const(0, "k")
    r, c, v = items[0]
    alpha = a[r, c] / v
    return alpha if a == b.scale(alpha) else None


@dataclass
class DegenerationReport:
    results: list
    constants: dict


def check_degeneration(N: int, n: int, k=None, order: int = 3) -> DegenerationReport:
    """Hecke, YBE, and the degenerate s_i, y_i against the expected shapes."""
    res = []
    consts = {}
    t0 = time.perf_counter()
    res.append(CheckResult(f"Hecke (sigma - u^{N-1})(sigma + u^{-N-1}) = 0, N={N}", hecke_check(N), None,
                           time.perf_counter() - t0))
    t0 = time.perf_counter()
    res.append(CheckResult(f"YBE for sigma, N={N}", ybe_check(N), None, time.perf_counter() - t0))

    t0 = time.perf_counter()
    kv = _k_value(k)
    sig = jet_substitute(rhat(N), n, k, order)
    sig2 = compose(sig, sig)
    omega = classical_tensors(N).Omega.map_entries(lambda x: RatFunc.const(x, "k"))
    c = proportionality(coefficient_matrix(sig2, 1), omega)
    consts["c (sigma^2 = 1 + c h Omega)"] = c
    ok = c is not None and coefficient_matrix(sig2, 0) == SparseMat.identity(N * N, RatFunc.const(1, "k"))
    res.append(CheckResult("sigma^2 = 1 + c h Omega mod h^2", ok, None, time.perf_counter() - t0,
                           f"c = {c}; reference k = {kv}"))

    t0 = time.perf_counter()
    ops = build_formal_ops(N, n, k, order)
    try:
        deg = extract_degenerate(ops)
        res.append(CheckResult("Y_i = 1 mod h", True, None, time.perf_counter() - t0))
    except PreconditionError as exc:
        res.append(CheckResult("Y_i = 1 mod h", False, None, time.perf_counter() - t0, str(exc)))
        return DegenerationReport(res, consts)

    unit = RatFunc.const(1, "k")
    total = n + 1
    t0 = time.perf_counter()
    for i, si in deg.s.items():
        flip = slot_flip(N, total, i + 1, i, unit)
        res.append(CheckResult(f"s_{i} = flip of slots ({i+1},{i})", si == flip, None, time.perf_counter() - t0))
    t0 = time.perf_counter()
    c1 = proportionality(deg.y[1], slot_flip(N, total, 1, 0, unit) - SparseMat.identity(N ** total, unit).scale(
        RatFunc.const(Fraction(1, N), "k")))
    consts["c' (y_1 = c' Omega_10)"] = c1
    res.append(CheckResult("y_1 proportional to Omega_10", c1 is not None, None, time.perf_counter() - t0,
                           f"c' = {c1}"))
    alphas = []
    for i in range(1, n + 1):
        t0 = time.perf_counter()
        a = proportionality(deg.y[i], yis_target(N, n, i))
        alphas.append(a)
        res.append(CheckResult(f"y_{i} = alpha (Omega_{i}0 + sum_j<{i} s_{i}j - {i-1}/{N})", a is not None, None,
                               time.perf_counter() - t0, f"alpha = {a}"))
    same = all(a is not None for a in alphas) and len(set(alphas)) == 1
    consts["alpha"] = alphas[0] if same else None
    res.append(CheckResult("single global alpha", same, None, 0.0,
                           f"alpha = {alphas[0] if same else alphas}; reference k = {kv}"))
    return DegenerationReport(res, consts)
