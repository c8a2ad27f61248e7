import pytest

from policy.parser import And, Leaf, Or, Threshold, attribute_names, evaluate, parse_policy, policy_to_text
from scheme.errors import ParameterError, PolicySyntaxError


def test_mixed_policy_parses():
    expr = parse_policy("(a AND b) OR 2of(c,d,e)")
    assert expr == Or((
        And((Leaf("a"), Leaf("b"))),
        Threshold(2, (Leaf("c"), Leaf("d"), Leaf("e"))),
    ))


def test_and_binds_tighter_than_or():
    assert parse_policy("a OR b AND c") == Or((Leaf("a"), And((Leaf("b"), Leaf("c")))))


def test_keywords_are_case_insensitive():
    assert parse_policy("a and b or c") == parse_policy("(a AND b) OR c")
    assert parse_policy("2 OF (a, b)") == Threshold(2, (Leaf("a"), Leaf("b")))


def test_unclosed_parenthesis_reports_position():
    with pytest.raises(PolicySyntaxError) as info:
        parse_policy("(a AND")
    assert (info.value.line, info.value.column) == (1, 7)
    assert "line 1, column 7" in str(info.value)


def test_error_position_on_later_line():
    with pytest.raises(PolicySyntaxError) as info:
        parse_policy("a AND\n  (b OR )")
    assert info.value.line == 2
    assert info.value.column == 9


def test_unexpected_character():
    with pytest.raises(PolicySyntaxError) as info:
        parse_policy("a & b")
    assert info.value.column == 3


@pytest.mark.parametrize("text", ["3 of (a, b)", "0 of (a, b)", "1 of (a)", "a b", "", "AND a"])
def test_malformed_policies(text):
    with pytest.raises(PolicySyntaxError):
        parse_policy(text)


def test_threshold_node_validates_k():
    with pytest.raises(ParameterError):
        Threshold(3, (Leaf("a"), Leaf("b")))


@pytest.mark.parametrize("text", [
    "a",
    "(a AND (b OR c))",
    "2 of (a, b AND c, 1 of (d, e))",
    "(x OR y) AND z AND w",
])
def test_canonical_text_parses_back(text):
    expr = parse_policy(text)
    assert parse_policy(policy_to_text(expr)) == expr


def test_evaluate_is_monotone_threshold():
    expr = parse_policy("2 of (a, b, c) AND d")
    assert evaluate(expr, {"a", "c", "d"})
    assert not evaluate(expr, {"a", "b"})
    assert not evaluate(expr, {"a", "d"})
    assert attribute_names(expr) == {"a", "b", "c", "d"}
