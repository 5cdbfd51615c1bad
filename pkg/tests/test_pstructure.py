import itertools
import random

import pytest

from charp.errors import EmptyList, PIndependenceFailed, Undecided
from charp.fields import FunctionField
from charp.pstructure import (
    is_pth_power,
    not_in_AS_image,
    p_independent,
    p_rank,
    subfield_intersection_trivial,
)


@pytest.fixture
def k2():
    return FunctionField(2, ("u1", "u2"))


def test_is_pth_power_examples(k2):
    u1, u2 = k2.gens()
    assert is_pth_power(u1 ** 2) == u1
    assert is_pth_power(u1) is None
    k3 = FunctionField(3, ("u1", "u2"))
    a, b = k3.gens()
    # oracle: cube the expected root
    expected = (a + b) / a
    assert is_pth_power(expected ** 3) == expected
    assert is_pth_power(k2.zero()) == k2.zero()


def test_is_pth_power_of_frobenius(k2):
    rng = random.Random(0)
    for _ in range(25):
        x = k2.random_element(rng, fraction=True)
        assert is_pth_power(x.frobenius()) == x


def test_p_independent_examples(k2):
    u1, u2 = k2.gens()
    cert = p_independent(k2, [u1, u2])
    assert cert.verdict and cert.verify(k2)
    assert cert.report["monomial_rank"] == 4

    dep = p_independent(k2, [u1, u1 ** 2 * u2 ** 2])
    assert not dep.verdict and dep.verify(k2)

    cert2 = p_independent(k2, [u1 * u2, u1])
    assert cert2.verdict and cert2.verify(k2)
    assert cert2.witness["kind"] == "jacobian_minor"


def test_p_independent_errors(k2):
    with pytest.raises(EmptyList):
        p_independent(k2, [])
    with pytest.raises(ValueError):
        p_independent(k2, [k2.zero()])


def test_p_independent_monotone_on_sublists():
    k4 = FunctionField(2, ("u1", "u2", "u3", "u4"))
    gens = k4.gens()
    base = [gens[0] * gens[1], gens[2], gens[1] + gens[3]]
    assert p_independent(k4, base).verdict
    for size in (1, 2):
        for sub in itertools.combinations(base, size):
            assert p_independent(k4, list(sub)).verdict


def test_certificates_reverify_from_witness_alone(k2):
    u1, u2 = k2.gens()
    for elems in ([u1, u2], [u1, u1 ** 2], [u1 + u2, u1]):
        cert = p_independent(k2, elems)
        assert cert.verify(k2)
        # round trip through the serialized form
        d = cert.to_dict(k2)
        from charp.serialize import _p_certificate_from_dict

        assert _p_certificate_from_dict(k2, d).verify(k2)


def test_as_image_examples(k2):
    u1 = k2.var("u1")
    cert = not_in_AS_image(k2, u1)
    assert not cert.member and cert.verify(k2)
    assert cert.witness == 1  # degree obstruction

    member = not_in_AS_image(k2, u1 ** 2 - u1)
    assert member.member and member.verify(k2)
    assert member.witness ** 2 - member.witness == u1 ** 2 - u1

    zero = not_in_AS_image(k2, k2.zero())
    assert zero.member and zero.witness.is_zero()


def test_as_image_exhaustive_oracle():
    # independent re-check of f = u1 by brute force over low-degree polys
    k = FunctionField(2, ("u1",))
    u1 = k.var("u1")
    for bits in itertools.product((0, 1), repeat=3):
        g = sum((k.var("u1") ** i for i, b in enumerate(bits) if b), k.zero())
        assert g ** 2 - g != u1


def test_as_image_fragment_limits(k2):
    with pytest.raises(Undecided):
        not_in_AS_image(k2, (k2.var("u1") + 1) / k2.var("u2"))
    with pytest.raises(Undecided):
        not_in_AS_image(k2, k2.one())  # nonzero constants are outside the fragment


def test_as_image_coset_invariance(k2):
    rng = random.Random(3)
    u1 = k2.var("u1")
    for _ in range(15):
        g = k2.random_element(rng, degree=2, terms=2)
        f2 = u1 + (g ** 2 - g)
        verdicts = set()
        for f in (u1, f2):
            try:
                verdicts.add("member" if not_in_AS_image(k2, f).member else "nonmember")
            except Undecided:
                verdicts.add("undecided")
        assert not {"member", "nonmember"} <= verdicts


def test_subfield_intersection_examples(k2):
    u1, u2 = k2.gens()
    ok, rep = subfield_intersection_trivial(k2, [u1], [u2])
    assert ok and rep["dim_intersection"] == 1

    same, rep2 = subfield_intersection_trivial(k2, [u1], [u1])
    assert not same and rep2["dim_intersection"] == 2

    k4 = FunctionField(2, ("u1", "u2", "u3", "u4"))
    g = k4.gens()
    ok3, rep3 = subfield_intersection_trivial(k4, [g[0], g[1]], [g[2], g[3]])
    assert ok3 and rep3["dim_span1"] == rep3["dim_span2"] == 4


def test_subfield_intersection_requires_independence(k2):
    u1 = k2.var("u1")
    with pytest.raises(PIndependenceFailed):
        subfield_intersection_trivial(k2, [u1], [u1 ** 2])


def test_p_rank(k2):
    assert p_rank(k2) == 2
    assert p_rank(FunctionField(3, ())) == 0
