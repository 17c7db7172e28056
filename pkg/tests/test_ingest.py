from fractions import Fraction
import logging

import pytest
from hypothesis import given, settings

from conftest import fixture_text, sessions
from fcausal import AnalysisError, ParseError, parse_config_list, parse_model
from fcausal.ingest import (
    EffectSpec,
    effect_set,
    load_measurements,
    parse_decimal,
    read_config_list,
    render_config_list,
)


def email():
    return parse_model(fixture_text("email.fm"))


def test_email_model():
    space, valid = email()
    assert list(space.names) == ["m", "s", "e", "c", "a", "r"]
    listed = parse_config_list("m\nm e c\nm e a\nm e r\nm s\nm s e c\nm s e a\nm s e r\n", space)
    assert valid == listed and valid.count() == 8


def test_small_models():
    space, valid = parse_model("features: x\nvalid: true\n")
    assert valid.count() == 2
    space, valid = parse_model("features: x, y\r\n# no constraint line\r\n")
    assert valid.count() == 4
    with pytest.raises(AnalysisError, match="empty-valid"):
        parse_model("features: x\nvalid: x & !x\n")


@pytest.mark.parametrize(
    "text, line, col, code",
    [
        ("features: x y\nvalid: x &\n  & y\n", 3, 3, "syntax"),
        ("features: x y\nvalid: x & q # comment\n", 2, 12, "unknown-feature"),
        ("features: x 9y\n", 1, 13, "syntax"),
        ("valid: true\n", 1, 1, "syntax"),
        ("# header\n  bogus: x\n", 2, 3, "syntax"),
        ("features: x\nfeatures: y\n", 2, 1, "syntax"),
    ],
)
def test_model_errors(text, line, col, code):
    with pytest.raises(ParseError) as err:
        parse_model(text)
    assert (err.value.line, err.value.column, err.value.code) == (line, col, code)


def test_config_lists():
    space, valid = email()
    assert [str(c) for c in read_config_list("m e a\n", space)] == ["m e a"]
    assert [str(c) for c in read_config_list("-\n", space)] == ["-"]
    with pytest.raises(ParseError, match="unknown-feature") as err:
        read_config_list("m\nm q\n", space)
    assert (err.value.line, err.value.column) == (2, 3)
    with pytest.raises(ParseError, match="duplicate-feature"):
        read_config_list("m e m\n", space)


def test_expression_effect():
    space, valid = email()
    e4 = effect_set(EffectSpec.from_expression("(a | r)", space), None, valid)
    assert sorted(str(c) for c in e4) == ["m e a", "m e r", "m s e a", "m s e r"]
    assert effect_set(EffectSpec.from_expression("false", space), None, valid).is_empty()


def test_config_list_effect_warns(caplog):
    space, valid = email()
    spec = EffectSpec.from_config_list("m e a\nm a\n", space)
    with caplog.at_level(logging.WARNING):
        e = effect_set(spec, None, valid)
    assert [str(c) for c in e] == ["m e a"]
    assert "not valid" in caplog.text


def test_measurements():
    space, valid = email()
    table = load_measurements(fixture_text("email_decipher.csv"), space)
    assert table.value(space.config(["m", "e", "a"]), "decipher_years") == 1
    assert table.value(space.config(["m", "e", "r"]), "decipher_years") == 2
    assert table.value(space.config(["m", "e", "c"]), "decipher_years") == Fraction(1, 10**7)
    assert table.value(space.config(["m"]), "decipher_years") == 0
    e = effect_set(EffectSpec.threshold("decipher_years > 0.25"), table, valid)
    assert sorted(str(c) for c in e) == ["m e a", "m e r", "m s e a", "m s e r"]
    assert effect_set(EffectSpec.threshold("decipher_years > -1"), table, valid) == valid
    assert effect_set(EffectSpec.threshold("decipher_years ≠ 1"), table, valid).count() == 6
    assert effect_set(EffectSpec.threshold("decipher_years = 0.0000001"), table, valid).count() == 2


def test_measurement_errors():
    space, valid = email()
    header = "r,a,c,e,s,m,t\n"
    assert len(load_measurements(header, space)) == 0
    with pytest.raises(AnalysisError, match="missing-feature-column"):
        load_measurements("m,s,e,t\n", space)
    with pytest.raises(AnalysisError, match="non-binary-feature"):
        load_measurements(header + "0,0,0,0,0,2,1\n", space)
    with pytest.raises(AnalysisError, match="bad-decimal"):
        load_measurements(header + "0,0,0,0,0,1,abc\n", space)
    with pytest.raises(AnalysisError, match="bad-decimal"):
        load_measurements(header + "0,0,0,0,0,1,0.0000000001\n", space)
    with pytest.raises(AnalysisError, match="duplicate-config"):
        load_measurements(header + "0,0,0,0,0,1,1\n0,0,0,0,0,1,2\n", space)
    partial = load_measurements(header + "0,0,0,0,0,1,1\n", space)
    with pytest.raises(AnalysisError, match="incomplete-table"):
        effect_set(EffectSpec.threshold("t > 0"), partial, valid)
    with pytest.raises(AnalysisError, match="unknown-metric"):
        effect_set(EffectSpec.threshold("speed > 0"), partial, valid)
    with pytest.raises(AnalysisError, match="bad-threshold"):
        EffectSpec.threshold("t >> 0")


def test_decimals_are_exact():
    assert parse_decimal("0.1") + parse_decimal("0.2") == parse_decimal("0.3")
    assert parse_decimal("1.500000000") == Fraction(3, 2)
    assert parse_decimal("2e3") == 2000


@settings(max_examples=40, deadline=None)
@given(sessions(max_n=5))
def test_config_list_round_trip(s):
    for cs in (s.valid, s.effect):
        assert parse_config_list(render_config_list(cs), s.space) == cs
