import pytest

from core.groups.group_spec import parse_group_spec
from core.validator.input_validator import InputValidator, get_validator


def test_group_validation():
    ok, message = InputValidator.validate_group("Torus: 2, 3")
    assert ok, message
    assert InputValidator.validate_group("")[0] is False
    assert InputValidator.validate_group("torus:2,3!")[0] is False
    assert InputValidator.validate_group("free:2,2")[0] is False
    assert InputValidator.validate_group("free:2,2", allow_degenerate=True)[0] is True


def test_word_validation():
    spec = parse_group_spec("free:2,3")
    assert InputValidator.validate_words(["x1*x2", "(x1 x2)^-2"], spec) == (True, "")
    ok, message = InputValidator.validate_words(["x1*x3"], spec)
    assert not ok and message
    assert InputValidator.validate_words(["x1 # x2"], spec)[0] is False
    assert InputValidator.validate_words(["   "], spec)[0] is False


@pytest.mark.parametrize("check,args,expected", [
    (InputValidator.validate_degree, (None,), False),
    (InputValidator.validate_degree, (0,), False),
    (InputValidator.validate_degree, (1,), True),
    (InputValidator.validate_samples, (0,), False),
    (InputValidator.validate_seed, (-1,), False),
    (InputValidator.validate_seed, (2**64,), False),
    (InputValidator.validate_seed, (2**64 - 1,), True),
    (InputValidator.validate_workers, (0,), False),
    (InputValidator.validate_caps, (None, 0), False),
    (InputValidator.validate_caps, (10, None), True),
])
def test_numeric_checks(check, args, expected):
    assert check(*args)[0] is expected


def test_sanitize():
    assert InputValidator.sanitize("  x1   *  x2 ") == "x1 * x2"
    assert InputValidator.sanitize(None) == ""


def test_singleton():
    assert get_validator() is get_validator()
