import pytest
from hypothesis import given, strategies as st

from adjhier.numstr import decimal_str, parse_decimal


def test_basics():
    assert decimal_str(0) == "0"
    assert decimal_str(12345) == "12345"
    assert parse_decimal("0012") == 12
    with pytest.raises(ValueError):
        decimal_str(-1)
    for bad in ("", "-3", "1.5", "1e5", "abc"):
        with pytest.raises(ValueError):
            parse_decimal(bad)


def test_beyond_interpreter_guard():
    n = 7 ** 12000  # ~10k digits
    s = decimal_str(n)
    assert len(s) > 4300
    assert parse_decimal(s) == n
    with pytest.raises(ValueError):
        str(n)  # the guard this module exists to sidestep


@given(st.integers(min_value=0, max_value=10 ** 200))
def test_roundtrip(n):
    assert parse_decimal(decimal_str(n)) == n


@given(st.integers(min_value=0, max_value=10 ** 60))
def test_agrees_with_builtin(n):
    assert decimal_str(n) == str(n)
    assert parse_decimal(str(n)) == n
