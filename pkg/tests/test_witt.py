import random
from fractions import Fraction

import pytest

from charp.errors import ShapeMismatch
from charp.fields import FunctionField, ValuedField
from charp.witt import (
    GhostCalculus,
    WittVector,
    asw_layer_equations,
    witt_add,
    witt_frobenius,
    witt_neg,
    witt_sub,
    witt_verschiebung,
    witt_zero,
)


def ghost_sum_oracle(p, n, av, bv):
    """Independent oracle: add ghost components over Z, solve back over Q."""

    def ghost(v):
        return [
            sum(p ** j * v[j] ** (p ** (i - j)) for j in range(i + 1))
            for i in range(n)
        ]

    target = [x + y for x, y in zip(ghost([Fraction(c) for c in av]),
                                    ghost([Fraction(c) for c in bv]))]
    out = []
    for i in range(n):
        acc = target[i]
        for j in range(i):
            acc -= p ** j * out[j] ** (p ** (i - j))
        q = acc / p ** i
        assert q.denominator == 1
        out.append(q)
    return [int(q) % p for q in out]


def constants(field, vec):
    return [c.num.constant_value() if not c.is_zero() else 0 for c in vec.components]


def test_frozen_example_one_plus_one():
    # ghost oracle gives (2, 2) -> (2, -1) -> mod 2 = (0, 1)
    assert ghost_sum_oracle(2, 2, [1, 0], [1, 0]) == [0, 1]
    k = FunctionField(2, ())
    s = witt_add(WittVector(k, [k.one(), k.zero()]), WittVector(k, [k.one(), k.zero()]))
    assert constants(k, s) == [0, 1]


def test_identity_element():
    k = FunctionField(3, ("a",))
    a = WittVector(k, [k.var("a"), k.zero(), k.zero()])
    assert witt_add(a, witt_zero(k, 3)) == a


def test_symbolic_sum_p2():
    sym = FunctionField(2, ("a1", "a2", "b1", "b2"))
    a1, a2, b1, b2 = sym.gens()
    s = witt_add(WittVector(sym, [a1, a2]), WittVector(sym, [b1, b2]))
    assert s.components[0] == a1 + b1
    assert s.components[1] == a2 + b2 + a1 * b1


def test_negation_and_subtraction():
    sym = FunctionField(2, ("a1", "a2"))
    a1, a2 = sym.gens()
    w = WittVector(sym, [a1, a2])
    assert witt_add(w, witt_neg(w)).is_zero()
    # the ghost oracle forces neg(a1, a2) = (a1, a1^2 + a2) in char 2
    assert witt_neg(w).components == (a1, a1 ** 2 + a2)
    k3 = FunctionField(3, ("c",))
    assert witt_neg(WittVector(k3, [k3.var("c")])).components[0] == -k3.var("c")
    rng = random.Random(0)
    k = FunctionField(3, ("u1", "u2"))
    for _ in range(10):
        x = WittVector(k, [k.random_element(rng) for _ in range(3)])
        assert witt_sub(x, x).is_zero()


def test_random_vectors_against_integer_ghost_oracle():
    rng = random.Random(7)
    for p, n in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        k = FunctionField(p, ())
        for _ in range(15):
            av = [rng.randrange(p) for _ in range(n)]
            bv = [rng.randrange(p) for _ in range(n)]
            got = constants(
                k,
                witt_add(
                    WittVector(k, [k.from_int(x) for x in av]),
                    WittVector(k, [k.from_int(x) for x in bv]),
                ),
            )
            assert got == ghost_sum_oracle(p, n, av, bv)


def test_ghost_identity_symbolic():
    for p, n in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)]:
        assert GhostCalculus.get(p, n).ghost_identity_holds()


def test_group_laws_random():
    rng = random.Random(1)
    for p in (2, 3):
        k = FunctionField(p, ("u1", "u2"))
        for n in (1, 2, 3):
            for _ in range(8):
                a = WittVector(k, [k.random_element(rng) for _ in range(n)])
                b = WittVector(k, [k.random_element(rng) for _ in range(n)])
                c = WittVector(k, [k.random_element(rng) for _ in range(n)])
                assert witt_add(witt_add(a, b), c) == witt_add(a, witt_add(b, c))
                assert witt_add(a, b) == witt_add(b, a)
                assert witt_add(a, witt_neg(a)).is_zero()


def test_frobenius_examples():
    k = FunctionField(2, ("u1", "u2"))
    u1, u2 = k.gens()
    w = WittVector(k, [u1, u2])
    assert witt_frobenius(w).components == (u1 ** 2, u2 ** 2)
    kc = FunctionField(3, ())
    w2 = WittVector(kc, [kc.from_int(2), kc.zero()])
    assert witt_frobenius(w2) == w2
    rng = random.Random(2)
    for _ in range(10):
        a = WittVector(k, [k.random_element(rng), k.random_element(rng)])
        b = WittVector(k, [k.random_element(rng), k.random_element(rng)])
        assert witt_frobenius(witt_add(a, b)) == witt_add(
            witt_frobenius(a), witt_frobenius(b)
        )


def test_verschiebung_frobenius_identity():
    rng = random.Random(3)
    for p in (2, 3):
        k = FunctionField(p, ("u1",))
        for n in (2, 3):
            for _ in range(6):
                a = WittVector(k, [k.random_element(rng) for _ in range(n)])
                fv = witt_frobenius(witt_verschiebung(a))
                vf = witt_verschiebung(witt_frobenius(a))
                p_fold = witt_zero(k, n)
                for _ in range(p):
                    p_fold = witt_add(p_fold, a)
                assert fv == vf == p_fold


def test_shape_mismatch():
    k = FunctionField(2, ())
    a = WittVector(k, [k.one()])
    b = WittVector(k, [k.one(), k.zero()])
    with pytest.raises(ShapeMismatch):
        witt_add(a, b)


def test_length_bound():
    with pytest.raises(ValueError):
        GhostCalculus.get(2, 5)
    with pytest.raises(ValueError):
        GhostCalculus.get(2, 0)


def test_layer_equations_length_one():
    K = ValuedField(2, ("u1",))
    omega = WittVector(K, [K.parse("u1/t^2")])
    system = asw_layer_equations(omega)
    assert system.right_hand_sides[0] == system.ring.from_coeff(omega.components[0])


def test_layer_equations_substitute_back():
    K = ValuedField(2, ("u1",))
    omega = WittVector(K, [K.parse("u1/t^2"), K.parse("u1*t")])
    system = asw_layer_equations(omega)
    # g_2 is w_2 plus terms in the first generator only
    g2 = system.right_hand_sides[1]
    assert g2.degree_in(1) == 0 and g2.degree_in(0) > 0
    assert all(r.is_zero() for r in system.witt_relation_residual())
    assert system.sigma_shifts[0].is_one()


def test_layer_equations_zero_symbol():
    K = ValuedField(3, ("u1",))
    omega = witt_zero(K, 2)
    system = asw_layer_equations(omega)
    # with omega = 0 every g_i is the pure carry, and substituting the
    # relations still zeroes the Witt relation
    assert all(r.is_zero() for r in system.witt_relation_residual())


def test_disk_cache_round_trip(tmp_path, monkeypatch):
    import charp.witt as witt_mod

    monkeypatch.setenv(witt_mod.CACHE_ENV, str(tmp_path))
    witt_mod._CACHE.pop((3, 2), None)
    first = GhostCalculus._derive(3, 2)
    first._store()
    assert (tmp_path / "witt_p3_n2.json").exists()
    loaded = GhostCalculus._load(3, 2)
    assert loaded is not None
    assert loaded.add_polys[1] == first.add_polys[1]
    assert loaded.ghost_identity_holds()
