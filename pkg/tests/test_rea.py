import itertools

import pytest
from braidrep.linalg import SparseMat, compose, evaluate, kernel, kron as _kron
from braidrep.rea import (
    LayeredElement,
    WindowExhausted,
    act_left,
    act_right,
    ad_action,
    antipode_coeff,
    antipode_layer1,
    coefficient,
    dmodule_axiom_check,
    identity_coefficient,
    invariant_coefficient,
    layer_dim,
    mult_coeff,
    multiply,
    product_matrices,
    reflection_check,
)
from braidrep.uqsl2 import COPRODUCT, ONE, ZERO, irrep, spow

WORDS = ("E", "F", "K", "Ki")


def basis(K, m):
    return [LayeredElement.basis(K, m, i) for i in range(layer_dim(m))]


def ad(x, e):
    return LayeredElement(e.K, {m: ad_action(x, m).apply(v) for m, v in e.layers.items()}, e.window)


def test_act_examples():
    for m in range(4):
        v = irrep(m)
        assert act_right("K", m) == _kron(v.identity(), v.K)
        assert act_left("K", m) == _kron(v.Kinv.transpose(), v.identity())




def test_left_and_right_actions_commute():
    for m in range(4):
        for x, y in itertools.product(WORDS, WORDS):
            assert compose(act_left(x, m), act_right(y, m)) == compose(act_right(y, m), act_left(x, m))


def test_invariant_coefficient():
    for m in range(5):
        vec = invariant_coefficient(m)
        assert ad_action("K", m).apply(vec) == vec
        assert not ad_action("E", m).apply(vec)
        assert not ad_action("F", m).apply(vec)


def test_plain_identity_coefficient_is_only_weight_zero():
    # sum e_i* (x) e_i is K-fixed but not E-invariant once s != 1
    for m in range(1, 4):
        vec = identity_coefficient(m)
        assert ad_action("K", m).apply(vec) == vec
        assert ad_action("E", m).apply(vec)
        at1 = evaluate(ad_action("E", m), 1).apply({k: 1 for k in vec})
        assert not at1


def test_ad_invariants_one_dimensional_per_layer():
    for m in range(5):
        d = layer_dim(m)
        stacked = SparseMat(2 * d, d, {})
        for (r, c, v) in ad_action("E", m).items():
            stacked.data.setdefault(r, {})[c] = v
        for (r, c, v) in ad_action("F", m).items():
            stacked.data.setdefault(d + r, {})[c] = v
        Kmat = ad_action("K", m) - SparseMat.identity(d, ONE)
        for (r, c, v) in Kmat.items():
            stacked.data.setdefault(2 * d + r, {})[c] = v
        stacked.rows = 3 * d
        assert len(kernel(stacked, ONE)) == 1


def test_unit():
    for m in range(3):
        for b in basis(4, m):
            assert multiply(LayeredElement.unit(4), b) == b
            assert multiply(b, LayeredElement.unit(4)) == b


def test_identity_coefficient_times_unit():
    c = LayeredElement(4, {1: identity_coefficient(1)})
    out = mult_coeff(c, LayeredElement.unit(4))
    assert out.layers == {1: identity_coefficient(1)}
    assert out.window == 3


@pytest.mark.parametrize("layers", [(1, 1, 1), (1, 2, 1), (1, 1, 2)])
def test_associativity(layers):
    p, q, r = layers
    for a in basis(6, p):
        for b in basis(6, q):
            for c in basis(6, r):
                assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


def test_coefficient_associativity_through_mult_coeff():
    e = LayeredElement.basis(4, 1, 1)
    for f1, v1, f2, v2 in itertools.product(range(2), repeat=4):
        c1, c2 = coefficient(f1, v1, 4), coefficient(f2, v2, 4)
        lhs = multiply(multiply(c1, c2), e)
        rhs = mult_coeff(c1, mult_coeff(c2, e))
        assert lhs.restricted(rhs.window) == rhs.restricted(rhs.window)


def test_module_algebra_property():
    for x in ("E", "F", "K"):
        for a in basis(4, 1):
            for b in basis(4, 1) + basis(4, 2):
                lhs = ad(x, multiply(a, b))
                rhs = None
                for left, right in COPRODUCT[x]:
                    aa = a if left == "1" else ad(left, a)
                    bb = b if right == "1" else ad(right, b)
                    term = multiply(aa, bb)
                    rhs = term if rhs is None else rhs + term
                assert lhs == rhs


def test_grading_of_product():
    for m in range(5):
        assert set(product_matrices(1, m)) == ({m - 1, m + 1} if m else {1})


def test_commutative_at_s_equal_1():
    for j, mat in product_matrices(1, 1).items():
        at1 = evaluate(mat, 1)
        for a, b in itertools.product(range(4), range(4)):
            assert at1.column(a * 4 + b) == at1.column(b * 4 + a)


def test_antipode_at_s_equal_1_is_adjugate():
    # L = [[a, b], [c, d]] stored as indices 0..3; S(L) = adj(L) since det = 1
    S = evaluate(antipode_layer1(), 1)
    assert S.to_dense() == [[0, 0, 0, 1], [0, -1, 0, 0], [0, 0, -1, 0], [1, 0, 0, 0]]


def test_antipode_is_two_sided_inverse():
    S = antipode_layer1()
    for j, v in itertools.product(range(2), repeat=2):
        right = LayeredElement(2, {})
        left = LayeredElement(2, {})
        for i in range(2):
            Siv = LayeredElement(2, {1: S.column(i * 2 + v)})
            Sji = LayeredElement(2, {1: S.column(j * 2 + i)})
            right = right + multiply(coefficient(j, i, 2), Siv)
            left = left + multiply(Sji, coefficient(i, v, 2))
        expected = LayeredElement.unit(2) if j == v else LayeredElement(2, {})
        assert right == expected
        assert left == expected


def test_antipode_squared_fixture():
    s = spow(1)
    S2 = compose(antipode_layer1(), antipode_layer1())
    expected = [
        [s ** 4, ZERO, ZERO, s ** 4 - s ** 8],
        [ZERO, s ** 8, ZERO, ZERO],
        [ZERO, ZERO, s ** 8, ZERO],
        [1 - s ** 4, ZERO, ZERO, s ** 8 - s ** 4 + 1],
    ]
    assert S2 == SparseMat.from_dense(expected)


def test_antipode_coeff_stays_in_layer_1():
    out = antipode_coeff(coefficient(0, 1, 3))
    assert set(out.layers) == {1}


def test_window_exhaustion():
    e = LayeredElement(2, {0: {0: ONE}}, window=0)
    with pytest.raises(WindowExhausted):
        mult_coeff(coefficient(0, 0, 2), e)


def test_window_shrinks():
    e = LayeredElement.unit(3)
    for expected in (2, 1, 0):
        e = mult_coeff(coefficient(0, 0, 3), e)
        assert e.window == expected


def test_layered_element_json_roundtrip():
    e = mult_coeff(coefficient(1, 0, 3), LayeredElement.basis(3, 1, 2))
    assert LayeredElement.from_json(e.to_json()) == e
    assert e.to_json() == LayeredElement.from_json(e.to_json()).to_json()


def test_reflection_equation_and_control():
    assert reflection_check(3).passed
    assert not reflection_check(3, mutate=True).passed


def test_dmodule_axiom():
    assert dmodule_axiom_check(3).passed


def test_dmodule_axiom_group_like_case():
    assert dmodule_axiom_check(3, generators=("K",)).passed


def test_dmodule_axiom_fails_for_v_slot_action(monkeypatch):
    import braidrep.rea as rea

    monkeypatch.setattr(rea, "act_left", rea.act_right)
    assert not rea.dmodule_axiom_check(3, generators=("E",)).passed


def test_cache_dir_roundtrip(tmp_path, monkeypatch):
    import braidrep.rea as rea

    monkeypatch.setenv("BRAIDREP_CACHE_DIR", str(tmp_path))
    fresh = rea.product_matrices.__wrapped__(1, 2)
    assert (tmp_path / "product_1_2.json").exists()
    again = rea.product_matrices.__wrapped__(1, 2)
    assert fresh == again
