import random

import pytest

from charp.errors import ExprSyntaxError, UnknownVariable
from charp.fields import FunctionField, ValuedField


def test_precedence_and_parentheses():
    K = ValuedField(3, ("u1",))
    assert K.parse("1 + 2*u1^2") == 1 + 2 * K.var("u1") ** 2
    assert K.parse("(1+u1)*t") == (1 + K.var("u1")) * K.uniformizer()
    assert K.parse("-u1 + u1").is_zero()
    assert K.parse("2^3") == K.from_int(8)
    assert K.parse("t^-2") == K.uniformizer() ** (-2)
    assert K.parse("t^(-2)") == K.uniformizer() ** (-2)


def test_syntax_error_positions():
    K = ValuedField(2, ("u1",))
    with pytest.raises(ExprSyntaxError) as err:
        K.parse("u1 + ")
    assert err.value.position == 5
    with pytest.raises(ExprSyntaxError) as err:
        K.parse("u1 $ 2")
    assert err.value.position == 3
    with pytest.raises(UnknownVariable) as err:
        K.parse("u1 + w3")
    assert err.value.position == 5
    with pytest.raises(ExprSyntaxError):
        K.parse("u1 / (t - t)")
    with pytest.raises(ExprSyntaxError):
        K.parse("u1 ^ t")


def test_round_trip_is_bit_exact():
    K = ValuedField(3, ("u1", "u2"))
    rng = random.Random(9)
    for _ in range(50):
        x = K.random_element(rng, degree=3, terms=3)
        assert K.parse(x.to_string()) == x
    k0 = FunctionField(5, ())
    for n in range(5):
        assert k0.parse(k0.from_int(n).to_string()) == k0.from_int(n)


def test_canonical_strings_are_stable():
    K = ValuedField(2, ("u1", "u2"))
    x = K.parse("(u2 + u1*t)/(t^2 + u1)")
    again = K.parse(x.to_string())
    assert again.to_string() == x.to_string()
