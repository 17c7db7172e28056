import pytest
from hypothesis import given, settings

from conftest import sessions
from fcausal import (
    AnalysisError,
    AnalysisSession,
    FeatureSpace,
    interaction_necessity,
    is_tway_witness,
    min_support_size,
    parse_expression,
    tway_witnesses,
)
from fcausal.formula import to_configset
from fcausal.interactions import witnesses_by_definition


def session(names, expr, valid="true"):
    sp = FeatureSpace(names)
    v = to_configset(parse_expression(valid, sp), sp)
    return AnalysisSession(v, to_configset(parse_expression(expr, sp), sp) & v)


def test_email_witnesses(email):
    assert min_support_size(email) == 1
    t, ws = tway_witnesses(email)
    assert t == 1 and ws.strings() == ["a", "r"]
    sp = email.space
    assert is_tway_witness(sp.partial(a=True), email)
    assert not is_tway_witness(sp.partial(e=True, c=False), email)
    assert not interaction_necessity(email)


def test_no_causes(email):
    s = AnalysisSession(email.valid, email.space.empty())
    assert min_support_size(s) is None
    assert not interaction_necessity(s)
    with pytest.raises(AnalysisError, match="no-causes"):
        tway_witnesses(s)


def test_conjunction_only():
    s = session(["x", "y", "z"], "x & y")
    assert s.causes.strings() == ["x & y"]
    assert min_support_size(s) == 2
    assert interaction_necessity(s)
    s3 = session(["x", "y", "z"], "x & y & !z")
    t, ws = tway_witnesses(s3)
    assert (t, ws.strings()) == (3, ["x & y & !z"])


def test_size_two_fails_when_a_literal_suffices():
    s = session(["x", "y", "z"], "x | y & z")
    assert not is_tway_witness(s.space.partial(y=True, z=True), s)
    assert is_tway_witness(s.space.partial(x=True), s)


def test_oracle_limit():
    s = session([f"f{i}" for i in range(13)], "f0")
    with pytest.raises(AnalysisError, match="oracle-too-large"):
        is_tway_witness(s.space.partial(f0=True), s)


@settings(max_examples=60, deadline=None)
@given(sessions(max_n=5))
def test_witnesses_match_definition(s):
    direct = witnesses_by_definition(s)
    if not len(s.causes):
        assert len(direct) == 0
        return
    t, ws = tway_witnesses(s)
    assert ws == direct
    assert set(ws) <= set(s.causes)
    assert all(len(w) == t for w in ws)
    for w in ws:
        assert is_tway_witness(w, s)
    for p in s.causes:
        assert is_tway_witness(p, s) == (len(p) == t)
