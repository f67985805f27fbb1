"""Acceptance suite: one test and one summary line per criterion."""

import functools
import itertools
import time

from conftest import record_acceptance

from braidrep import elliptic, rea, slnjets
from braidrep.cli import main
from braidrep.linalg import compose, kron, kron_all, probably_equal
from braidrep.uqsl2 import COPRODUCT, braiding, coproduct_action, eval_R, irrep, ribbon_candidates, spow

MODES = ("exact", "probabilistic-then-exact")
C_KEY = "c (sigma^2 = 1 + c h Omega)"
C1_KEY = "c' (y_1 = c' Omega_10)"


def _equal(a, b, mode):
    if mode == "probabilistic-then-exact" and not probably_equal(a, b):
        return False
    return a == b


def _summary(results):
    return [(r.name, r.passed, r.skipped) for r in results]


def _all_ok(results):
    return all(r.ok for r in results)


# ---------------------------------------------------------------------------
# Outcome builders, cached per mode so criterion 10 can compare them


@functools.lru_cache(maxsize=None)
def outcome_1(mode):
    out = []
    for a, b in itertools.product(range(4), repeat=2):
        A, B = irrep(a), irrep(b)
        R = eval_R(A, B)
        for x in ("E", "F", "K"):
            # R Delta(x) = Delta^op(x) R, with Delta^op(x) read off the flipped pair
            lhs = compose(R, coproduct_action(x, A, B))
            rhs = compose(_delta_op(x, A, B), R)
            out.append((f"QT x={x} V{a}(x)V{b}", _equal(lhs, rhs, mode)))
    for a, b, c in itertools.product(range(3), repeat=3):
        A, B, C = irrep(a), irrep(b), irrep(c)
        Ia, Ib, Ic = A.identity(), B.identity(), C.identity()
        lhs = compose(kron(braiding(B, C), Ia),
                      compose(kron(Ib, braiding(A, C)), kron(braiding(A, B), Ic)))
        rhs = compose(kron(Ic, braiding(A, B)),
                      compose(kron(braiding(A, C), Ib), kron(Ia, braiding(B, C))))
        out.append((f"YBE V{a}(x)V{b}(x)V{c}", _equal(lhs, rhs, mode)))
    return tuple(out)


def _delta_op(x, A, B):
    """Delta^op(x) on A (x) B."""
    total = None
    for left, right in COPRODUCT[x]:
        term = kron(A.act(right), B.act(left))
        total = term if total is None else total + term
    return total


@functools.lru_cache(maxsize=None)
def outcome_2(mode):
    return (rea.reflection_check(4, mode=mode), rea.reflection_check(4, mutate=True, mode=mode))


@functools.lru_cache(maxsize=None)
def outcome_3(mode):
    return (rea.dmodule_axiom_check(4, mode=mode),)


ELLIPTIC_CASES = ((2, 4), (2, 6), (4, 3))


@functools.lru_cache(maxsize=None)
def outcome_4(mode):
    t0 = time.perf_counter()
    res = tuple(r for n, K in ELLIPTIC_CASES for r in elliptic.check_elliptic(n, K, mode=mode))
    return res, time.perf_counter() - t0


SCALAR_CASES = ((2, 4), (2, 6), (4, 5))


@functools.lru_cache(maxsize=None)
def outcome_5(mode):
    return tuple(elliptic.check_scalars(n, K, mode=mode) for n, K in SCALAR_CASES)


@functools.lru_cache(maxsize=None)
def outcome_6(mode):
    good = tuple(r for n, K in ((2, 4), (4, 3)) for r in elliptic.check_daha(n, K, mode=mode))
    bad = tuple(r for n, K in ((2, 4), (4, 3))
                for r in elliptic.check_daha(n, K, spow(1), spow(4), mode=mode, expect_fail=True))
    return good, bad


@functools.lru_cache(maxsize=None)
def outcome_7(mode):
    out = []
    for N in (2, 3, 4):
        s = slnjets.rhat(N).Rhat
        one = s.identity(N * N, slnjets.upow(0))
        hecke = compose(s - one.scale(slnjets.upow(N - 1)), s + one.scale(slnjets.upow(-N - 1)))
        out.append((f"Hecke N={N}", _equal(hecke, hecke - hecke, mode)))
        I = s.identity(N, slnjets.upow(0))
        s1, s2 = kron_all([s, I]), kron_all([I, s])
        out.append((f"YBE N={N}", _equal(compose(s1, compose(s2, s1)), compose(s2, compose(s1, s2)), mode)))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def outcome_8(mode):
    # jets over Q(k) are compared exactly in both modes; there is no randomized path
    return tuple(slnjets.check_degeneration(N, n) for N in (2, 3) for n in (2, 3))


@functools.lru_cache(maxsize=None)
def outcome_9(mode):
    return tuple(r for n, m in ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2))
                 for r in elliptic.check_affine_hecke(n, m, mode=mode))


# ---------------------------------------------------------------------------
# Criteria


def test_criterion_01_quasi_triangularity_and_ybe():
    t0 = time.perf_counter()
    out = outcome_1("exact")
    bad = [name for name, ok in out if not ok]
    secs = time.perf_counter() - t0
    ok = not bad and secs < 60
    record_acceptance(1, ok, f"R Delta = Delta^op R for a,b <= 3 and YBE for a,b,c <= 2 "
                             f"({len(out)} identities, {secs:.1f}s){' failing: ' + ', '.join(bad) if bad else ''}")
    assert ok


def test_criterion_02_reflection_equation():
    t0 = time.perf_counter()
    good, control = outcome_2("exact")
    secs = time.perf_counter() - t0
    ok = good.passed and not control.passed and secs < 120
    record_acceptance(2, ok, f"reflection equation on V1(x)V1(x)A_<=4 input layers <= {good.window}: "
                             f"{'holds' if good.passed else 'FAILS'}; R21 -> R12 control "
                             f"{'fails as required' if not control.passed else 'PASSES (bad)'} ({secs:.1f}s)")
    assert ok


def test_criterion_03_dmodule_axiom():
    t0 = time.perf_counter()
    (res,) = outcome_3("exact")
    secs = time.perf_counter() - t0
    ok = res.passed and secs < 120
    record_acceptance(3, ok, f"D-module axiom for E, F, K, K^-1 against all layer-1 coefficients on A_<=4 "
                             f"({secs:.1f}s) {res.detail}")
    assert ok


def test_criterion_04_elliptic_relations():
    res, secs = outcome_4("exact")
    pre, pre_secs = outcome_4("probabilistic-then-exact")
    names = {"X1Y2 = Y2X1T1^2", "Ytilde X1 = X1 Ytilde"}
    present = {r.name for r in res}
    ok = _all_ok(res) and names <= present and secs < 900 and pre_secs < 60 and _all_ok(pre)
    failing = [r.name for r in res if not r.ok]
    record_acceptance(4, ok, f"elliptic relations on W for (n,K) in {list(ELLIPTIC_CASES)}: "
                             f"{sum(r.ok for r in res)}/{len(res)} lines as expected, exact {secs:.1f}s, "
                             f"probabilistic-then-exact {pre_secs:.1f}s"
                             f"{' failing: ' + ', '.join(failing) if failing else ''}")
    assert ok


def test_criterion_05_scalar_identities():
    reports = outcome_5("exact")
    theta1, theta1_inv = ribbon_candidates(1)
    lines = []
    ok = True
    for (n, K), rep in zip(SCALAR_CASES, reports):
        case_ok = _all_ok(rep.results) and not any(r.skipped for r in rep.results) and rep.c_V is not None
        ok &= case_ok
        lines.append(f"(n={n},K={K}) c_V={rep.c_V}")
    # one ribbon scalar serves every case and both Ytilde and Xtilde
    same = {str(rep.c_V) for rep in reports}
    ok &= len(same) == 1 and reports[0].c_V in (theta1, theta1_inv)
    label = "theta_1^-1" if reports[0].c_V == theta1_inv else "theta_1"
    record_acceptance(5, ok, f"Ytilde = Xtilde = c_V^n with one c_V = {label} (theta_1 = {theta1}); "
                             f"both Xtilde constructions agree; normalized X', Y' = Id; {'; '.join(lines)}")
    assert ok


def test_criterion_06_daha_quotient():
    good, bad = outcome_6("exact")
    ok = all(r.passed for r in good) and not any(r.passed for r in bad)
    record_acceptance(6, ok, f"(T_i - s)(T_i + s^-3) = 0 on W for (2,4), (4,3): "
                             f"{sum(r.passed for r in good)}/{len(good)}; (qD,tD) = (s,s^4) control fails on "
                             f"{sum(not r.passed for r in bad)}/{len(bad)}")
    assert ok


def test_criterion_07_sl_n_hecke():
    t0 = time.perf_counter()
    out = outcome_7("exact")
    secs = time.perf_counter() - t0
    ok = all(v for _, v in out) and secs < 60
    record_acceptance(7, ok, f"(sigma - u^(N-1))(sigma + u^(-N-1)) = 0 and YBE for N = 2, 3, 4 ({secs:.2f}s)")
    assert ok


def test_criterion_08_degeneration():
    t0 = time.perf_counter()
    reports = outcome_8("exact")
    secs = time.perf_counter() - t0
    ok = all(_all_ok(rep.results) for rep in reports) and secs < 180
    consts = []
    for (N, n), rep in zip(itertools.product((2, 3), (2, 3)), reports):
        c = rep.constants
        consts.append(f"N={N},n={n}: c={c[C_KEY]}, c'={c[C1_KEY]}, alpha={c['alpha']}")
    record_acceptance(8, ok, f"s_i = flip, y_i = alpha(Omega_i0 + sum s_ij - (i-1)/N), Y_i = 1 mod h; "
                             f"measured against reference k: {'; '.join(consts)} ({secs:.1f}s)")
    assert ok


def test_criterion_09_affine_hecke_single_layer():
    res = outcome_9("exact")
    ok = all(r.passed for r in res)
    record_acceptance(9, ok, f"T_i, Y_i relations on single layers V1^(x)n (x) V_m* (x) V_m "
                             f"(n,m) in (2,1..3), (3,1..2): {sum(r.passed for r in res)}/{len(res)}")
    assert ok


def test_criterion_10_mode_consistency_and_byte_stable_exports(tmp_path):
    mismatches = []
    pairs = {
        1: lambda m: outcome_1(m),
        2: lambda m: [(r.name, r.passed) for r in outcome_2(m)],
        3: lambda m: [(r.name, r.passed) for r in outcome_3(m)],
        4: lambda m: _summary(outcome_4(m)[0]),
        5: lambda m: [(_summary(rep.results), str(rep.c_V)) for rep in outcome_5(m)],
        6: lambda m: [_summary(part) for part in outcome_6(m)],
        7: lambda m: outcome_7(m),
        8: lambda m: [(_summary(rep.results), sorted((k, str(v)) for k, v in rep.constants.items()))
                      for rep in outcome_8(m)],
        9: lambda m: _summary(outcome_9(m)),
    }
    for number, get in pairs.items():
        if get(MODES[0]) != get(MODES[1]):
            mismatches.append(number)
    stable = True
    for n, K in ((2, 2), (2, 4), (4, 2)):
        a, b = tmp_path / f"a{n}{K}", tmp_path / f"b{n}{K}"
        assert main(["export", "--n", str(n), "--K", str(K), "--out", str(a), "--eval", "s=3/2"]) == 0
        assert main(["export", "--n", str(n), "--K", str(K), "--out", str(b), "--eval", "s=3/2"]) == 0
        files = sorted(p.name for p in a.iterdir())
        stable &= files == sorted(p.name for p in b.iterdir())
        stable &= all((a / f).read_bytes() == (b / f).read_bytes() for f in files)
    ok = not mismatches and stable
    record_acceptance(10, ok, f"exact and probabilistic-then-exact agree on criteria 1-9"
                              f"{' except ' + str(mismatches) if mismatches else ''}; "
                              f"exports byte-stable: {stable}")
    assert ok
