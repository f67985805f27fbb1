import pytest

from braidrep.blocks import compare
from braidrep.elliptic import (
    EllipticOperators,
    ambient_Y1,
    check_affine_hecke,
    check_daha,
    check_elliptic,
    check_invariance,
    check_scalars,
    hom_dimension,
    invariants,
)
from braidrep.linalg import SparseMat, compose
from braidrep.uqsl2 import ONE, spow


def test_invariants_known_dimensions():
    assert invariants(2, 2).layer_sizes == (1, 2, 2)
    assert invariants(2, 2).dim == 5
    assert invariants(4, 2).layer_sizes == (2, 5, 6)
    assert invariants(4, 2).dim == 13
    for K in range(4):
        assert invariants(1, K).dim == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_invariant_dimensions_match_cg_counting(n):
    W = invariants(n, 3)
    assert list(W.layer_sizes) == [hom_dimension(n, m) for m in range(4)]


def test_invariant_vectors_are_invariant():
    from braidrep.elliptic import ambient_module

    W = invariants(2, 3)
    for m in range(4):
        mod = ambient_module(2, m)
        for v in W.vectors[m]:
            assert not mod.E.apply(v)
            assert not mod.F.apply(v)
            assert mod.K.apply(v) == v


def test_T_eigenvalues_on_W():
    ops = EllipticOperators(2, 2)
    T = ops.T(1)
    for m, d in ops.sizes.items():
        b = T.blocks[(m, m)]
        I = SparseMat.identity(d, ONE)
        assert compose(b - I.scale(spow(1)), b + I.scale(spow(-3))).is_zero()


def test_Y_commute_and_X_inverse():
    ops = EllipticOperators(2, 4)
    Y1, Y2 = ops.Y(1), ops.Y(2)
    assert compare(Y1 @ Y2, Y2 @ Y1, ops.sizes, 4) is None
    assert compare(ops.X_inv(1) @ ops.X(1), ops.identity(), ops.sizes, 2) is None


def test_grading_discipline():
    ops = EllipticOperators(2, 4)
    for op in (ops.T(1), ops.Y(1), ops.Y(2)):
        assert all(mo == mi for mo, mi in op.support())
    for op in (ops.X(1), ops.X(2), ops.X_inv(1)):
        assert all(abs(mo - mi) == 1 for mo, mi in op.support())


def test_check_elliptic_2_4():
    res = check_elliptic(2, 4)
    assert all(r.ok for r in res)
    control = [r for r in res if r.expect_fail]
    assert control and not control[0].passed


def test_odd_n_is_vacuous():
    res = check_elliptic(3, 4)
    assert len(res) == 1 and res[0].passed and "vacuous" in res[0].detail


def test_invariance():
    assert all(r.passed for r in check_invariance(2, 3))


def test_single_R_Y1_is_not_an_intertwiner():
    from braidrep.elliptic import NotInvariant, restrict

    with pytest.raises(NotInvariant):
        restrict(ambient_Y1(2, 3, mode="single"), invariants(2, 3))


def test_cross_relation_on_ambient_space():
    res = check_elliptic(2, 3, ambient=True, controls=False)
    cross = [r for r in res if r.name.startswith("X1Y2")]
    assert cross[0].passed


def test_scalars_2_4():
    rep = check_scalars(2, 4)
    assert all(r.ok for r in rep.results)
    assert rep.c_V == spow(-3)
    assert rep.theta1 == spow(3)


def test_daha_and_control():
    assert all(r.passed for r in check_daha(2, 4))
    assert not any(r.passed for r in check_daha(2, 4, spow(1), spow(4), expect_fail=True))


def test_daha_at_s_equal_1_is_symmetric_group():
    from braidrep.linalg import evaluate

    ops = EllipticOperators(2, 2)
    for m, d in ops.sizes.items():
        t = evaluate(ops.T(1).blocks[(m, m)], 1)
        assert compose(t, t) == SparseMat.identity(d, 1).map_entries(lambda x: x)


def test_affine_hecke_single_layer():
    for n, m in [(2, 2), (3, 1), (3, 2)]:
        assert all(r.passed for r in check_affine_hecke(n, m))
