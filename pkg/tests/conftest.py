from __future__ import annotations

import itertools
from importlib import resources
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from fcausal import AnalysisSession, ConfigSet, FeatureSpace, PartialConfig, parse_model
from fcausal.ingest import EffectSpec, effect_set, load_measurements

FIXTURES = Path(str(resources.files("fcausal") / "fixtures"))


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text()


def email_session() -> AnalysisSession:
    space, valid = parse_model(fixture_text("email.fm"))
    table = load_measurements(fixture_text("email_decipher.csv"), space)
    effect = effect_set(EffectSpec.threshold("decipher_years > 0.25"), table, valid)
    return AnalysisSession(valid, effect)


@pytest.fixture
def email():
    return email_session()


def names(n: int) -> list[str]:
    return [f"x{i}" for i in range(n)]


def session_from_masks(n: int, valid_mask, effect_mask) -> AnalysisSession:
    space = FeatureSpace(names(n))
    valid = space.bdd.from_dense(valid_mask)
    effect = space.bdd.from_dense(np.asarray(effect_mask) & np.asarray(valid_mask))
    return AnalysisSession(ConfigSet(space, valid), ConfigSet(space, effect))


def random_session(rng: np.random.Generator, n: int) -> AnalysisSession:
    density = rng.uniform(0.2, 1.0)
    valid = rng.random(1 << n) < density
    if not valid.any():
        valid[rng.integers(1 << n)] = True
    effect = valid & (rng.random(1 << n) < rng.uniform(0.0, 1.0))
    return session_from_masks(n, valid, effect)


@st.composite
def sessions(draw, min_n: int = 1, max_n: int = 5):
    n = draw(st.integers(min_n, max_n))
    size = 1 << n
    valid = draw(st.lists(st.booleans(), min_size=size, max_size=size).filter(any))
    effect = draw(st.lists(st.booleans(), min_size=size, max_size=size))
    return session_from_masks(n, np.array(valid), np.array(effect))


@st.composite
def partials(draw, space: FeatureSpace):
    n = len(space)
    digits = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    pos = sum(1 << i for i, d in enumerate(digits) if d == 1)
    neg = sum(1 << i for i, d in enumerate(digits) if d == 0)
    return PartialConfig(space, pos, neg)


def all_partials(space: FeatureSpace):
    n = len(space)
    for digits in itertools.product((0, 1, 2), repeat=n):
        pos = sum(1 << i for i, d in enumerate(digits) if d == 1)
        neg = sum(1 << i for i, d in enumerate(digits) if d == 0)
        yield PartialConfig(space, pos, neg)


def cube_members(p: PartialConfig) -> set[int]:
    n = len(p.space)
    return {b for b in range(1 << n) if b & p.pos == p.pos and not b & p.neg}
