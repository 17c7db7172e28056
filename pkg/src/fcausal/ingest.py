"""Input formats: model files, configuration lists and measurement tables.

Model file::

    # the email system
    features: m s e c a r
    valid: m & (e <-> (c | a | r))
           & !(c & a) & !(c & r) & !(a & r)

Configuration list: one configuration per line, listing the selected
features separated by spaces; ``-`` is the empty selection.

Measurement CSV: a header with one 0/1 column per feature (any order) and
one column per metric holding decimals.
"""

from __future__ import annotations

import csv
import io
import logging
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction

from .configspace import ConfigSet, FeatureSpace, TotalConfig
from .errors import AnalysisError, ParseError
from .formula import Formula, parse_expression, to_configset

log = logging.getLogger(__name__)

_KEY = re.compile(r"^\s*(features|valid)\s*:", re.IGNORECASE)


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i] + " " * (len(line) - i)


def parse_model(text: str) -> tuple[FeatureSpace, ConfigSet]:
    """Parse a model file into its feature space and valid configurations."""
    sections: dict[str, list] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw.rstrip("\r"))
        m = _KEY.match(line)
        if m:
            current = m.group(1).lower()
            if current in sections:
                raise ParseError(f"duplicate '{current}:' line", lineno, 1)
            sections[current] = [(lineno, m.end() + 1, line[m.end():])]
        elif line.strip():
            if current is None:
                raise ParseError("expected 'features:' or 'valid:'", lineno, len(line) - len(line.lstrip()) + 1)
            sections[current].append((lineno, 1, line))
    if "features" not in sections:
        raise ParseError("missing 'features:' line", 1, 1)
    names = []
    for lineno, col, chunk in sections["features"]:
        for m in re.finditer(r"[^\s,]+", chunk):
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", m.group()) or m.group() in ("true", "false"):
                raise ParseError(f"invalid feature identifier {m.group()!r}", lineno, col + m.start())
            names.append(m.group())
    if not names:
        raise ParseError("no features declared", sections["features"][0][0], 1)
    try:
        space = FeatureSpace(names)
    except AnalysisError as e:
        raise ParseError(str(e), sections["features"][0][0], 1) from None
    if "valid" in sections:
        chunks = sections["valid"]
        expr_text = "\n".join(chunk for _, _, chunk in chunks)
        formula = parse_expression(expr_text, space, line=chunks[0][0], column=chunks[0][1])
    else:
        formula = parse_expression("true")
    valid = to_configset(formula, space)
    if valid.is_empty():
        raise AnalysisError("empty-valid", "the validity constraint admits no configuration")
    return space, valid


def parse_config_list(text: str, space: FeatureSpace) -> ConfigSet:
    return space.from_configs(read_config_list(text, space))


def read_config_list(text: str, space: FeatureSpace) -> list[TotalConfig]:
    configs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw.rstrip("\r"))
        if not line.strip():
            continue
        tokens = list(re.finditer(r"\S+", line))
        if len(tokens) == 1 and tokens[0].group() == "-":
            configs.append(TotalConfig(space, 0))
            continue
        bits = 0
        for m in tokens:
            name = m.group()
            if name not in space:
                raise ParseError(f"unknown feature {name!r}", lineno, m.start() + 1, code="unknown-feature")
            bit = 1 << space.index[name]
            if bits & bit:
                raise ParseError(f"feature {name!r} listed twice", lineno, m.start() + 1, code="duplicate-feature")
            bits |= bit
        configs.append(TotalConfig(space, bits))
    return configs


def render_config_list(configs: ConfigSet) -> str:
    return "".join(f"{c}\n" for c in configs)


# -- measurements ----------------------------------------------------------------------


def parse_decimal(text: str) -> Fraction:
    """Exact value of a decimal literal with at most 9 fractional digits."""
    try:
        d = Decimal(text.strip())
    except InvalidOperation:
        raise AnalysisError("bad-decimal", f"unparsable decimal {text!r}") from None
    if not d.is_finite():
        raise AnalysisError("bad-decimal", f"non-finite value {text!r}")
    if d.as_tuple().exponent < -9 and d != d.quantize(Decimal("1e-9")):
        raise AnalysisError("bad-decimal", f"{text!r} has more than 9 fractional digits")
    return Fraction(d)


@dataclass
class MeasurementTable:
    space: FeatureSpace
    metrics: list[str]
    rows: dict[TotalConfig, dict[str, Fraction]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.rows)

    def value(self, config: TotalConfig, metric: str) -> Fraction | None:
        return self.rows.get(config, {}).get(metric)


def load_measurements(text: str, space: FeatureSpace) -> MeasurementTable:
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise AnalysisError("bad-table", "measurement table has no header") from None
    missing = [f for f in space.names if f not in header]
    if missing:
        raise AnalysisError("missing-feature-column", f"missing feature columns: {', '.join(missing)}")
    cols = {name: header.index(name) for name in space.names}
    metrics = [h for h in header if h not in space.index]
    mcols = {m: header.index(m) for m in metrics}
    table = MeasurementTable(space, metrics)
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise AnalysisError("bad-table", f"row {lineno}: expected {len(header)} cells, got {len(row)}")
        bits = 0
        for name, j in cols.items():
            cell = row[j].strip()
            if cell not in ("0", "1"):
                raise AnalysisError("non-binary-feature", f"row {lineno}: {name}={cell!r} is not 0 or 1")
            if cell == "1":
                bits |= 1 << space.index[name]
        config = TotalConfig(space, bits)
        if config in table.rows:
            raise AnalysisError("duplicate-config", f"row {lineno}: configuration {config} appears twice")
        values = {}
        for m, j in mcols.items():
            cell = row[j].strip()
            if cell:
                try:
                    values[m] = parse_decimal(cell)
                except AnalysisError as e:
                    raise AnalysisError(e.code, f"row {lineno}, column {m}: {e}") from None
        table.rows[config] = values
    return table


# -- effect sets ---------------------------------------------------------------------------

RELATIONS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}
_REL_ALIASES = {"≤": "<=", "≥": ">=", "≠": "!=", "==": "="}
_THRESHOLD = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_.\-]*)\s*(<=|>=|!=|==|<|>|=|≤|≥|≠)\s*(\S+)\s*$")


@dataclass(frozen=True)
class EffectSpec:
    """How to obtain an effect set: by expression, explicit list, or threshold."""

    kind: str
    expression: Formula | None = None
    configs: tuple[TotalConfig, ...] = ()
    metric: str | None = None
    relation: str | None = None
    tau: Fraction | None = None

    @classmethod
    def from_expression(cls, text: str, space: FeatureSpace) -> EffectSpec:
        return cls("expression", expression=parse_expression(text, space))

    @classmethod
    def from_config_list(cls, text: str, space: FeatureSpace) -> EffectSpec:
        return cls("configList", configs=tuple(read_config_list(text, space)))

    @classmethod
    def threshold(cls, spec: str) -> EffectSpec:
        """Parse ``"metric REL value"``, e.g. ``"decipher_years > 0.25"``."""
        m = _THRESHOLD.match(spec)
        if not m:
            raise AnalysisError("bad-threshold", f"cannot parse threshold {spec!r}; expected 'metric REL value'")
        rel = _REL_ALIASES.get(m.group(2), m.group(2))
        return cls("threshold", metric=m.group(1), relation=rel, tau=parse_decimal(m.group(3)))


def effect_set(spec: EffectSpec, table: MeasurementTable | None, valid: ConfigSet) -> ConfigSet:
    space = valid.space
    if spec.kind == "expression":
        return to_configset(spec.expression, space) & valid
    if spec.kind == "configList":
        listed = space.from_configs(spec.configs)
        outside = listed - valid
        if not outside.is_empty():
            log.warning("%d listed configuration(s) are not valid and were dropped", outside.count())
        return listed & valid
    if spec.kind == "threshold":
        if table is None:
            raise AnalysisError("missing-table", "a threshold effect needs a measurement table")
        if spec.metric not in table.metrics:
            raise AnalysisError("unknown-metric", f"metric {spec.metric!r} is not in the table")
        cmp = RELATIONS[spec.relation]
        hits = []
        for config in valid:
            value = table.value(config, spec.metric)
            if value is None:
                raise AnalysisError(
                    "incomplete-table", f"no {spec.metric} value for valid configuration {config}"
                )
            if cmp(value, spec.tau):
                hits.append(config)
        return space.from_configs(hits)
    raise AnalysisError("bad-effect", f"unknown effect kind {spec.kind!r}")
