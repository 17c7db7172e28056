"""Assemble analysis results into a plain report dict and render it.

The dict uses only strings, ints, bools, lists, dicts and ``None``; exact
rationals are strings ``"p/q"``.  JSON output is that dict with sorted keys.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .accountability import (
    Distribution,
    ResponsibilityTable,
    as_fraction,
    blame,
    interaction_blame,
    uniform_over_effects,
    uniform_over_valid,
)
from .causes import AnalysisSession
from .configspace import PartialConfig, TotalConfig
from .errors import AnalysisError, InvariantError
from .explications import (
    EXACT_COVER_LIMIT,
    cause_effect_cover,
    characteristic_formula,
    dls_simplify,
    is_cover,
    most_general_causes,
)
from .formula import length, render
from .interactions import interaction_necessity, tway_witnesses

SECTIONS = ("causes", "explicate", "account", "interactions")


def rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass
class Options:
    cover: str = "greedy"
    dist: str = "uniform-effects"
    weights: Distribution | None = None
    features: list[str] | None = None
    pairs: list[PartialConfig] = field(default_factory=list)
    per_instance: bool = False


def build_report(s: AnalysisSession, sections, opts: Options) -> tuple[dict, dict[str, float]]:
    """Return the report and per-section wall-clock seconds."""
    timings: dict[str, float] = {}
    out: dict = {
        "model": {"features": len(s.space), "valid": s.valid.count(), "effects": s.effect.count()},
    }
    builders = {
        "causes": _causes,
        "explicate": _explicate,
        "account": _account,
        "interactions": _interactions,
    }
    for name in SECTIONS:
        if name in sections:
            t0 = time.perf_counter()
            out[name] = builders[name](s, opts)
            timings[name] = time.perf_counter() - t0
    return out, timings


def _causes(s: AnalysisSession, opts: Options) -> dict:
    return {"count": len(s.causes), "primes": len(s.primes), "items": s.causes.strings()}


def _explicate(s: AnalysisSession, opts: Options) -> dict:
    causes = s.causes
    if not causes:
        return {
            "characteristic": None,
            "dls": None,
            "dls_ratio": None,
            "most_general": [],
            "most_general_dls": None,
            "cover": {"selected": opts.cover, "greedy": [], "exact": []},
        }
    order = s.space.names
    chi = characteristic_formula(causes)
    dls = dls_simplify(chi, order)
    mc = most_general_causes(s)
    greedy = cause_effect_cover(s, "greedy")
    exact = None
    if opts.cover == "exact" or len(causes) <= EXACT_COVER_LIMIT:
        exact = cause_effect_cover(s, "exact")
    for chosen in (mc, greedy, exact):
        if chosen is not None and not is_cover(list(chosen), s):
            raise InvariantError("explication result does not cover the effect set")
    return {
        "characteristic": render(chi),
        "characteristic_length": length(chi),
        "dls": render(dls),
        "dls_length": length(dls),
        "dls_ratio": rational(Fraction(length(dls), length(chi))),
        "most_general": mc.strings(),
        "most_general_dls": render(dls_simplify(characteristic_formula(mc), order)),
        "cover": {
            "selected": opts.cover,
            "greedy": greedy.strings(),
            "exact": exact.strings() if exact is not None else None,
        },
    }


def _distribution(s: AnalysisSession, opts: Options) -> Distribution:
    if opts.weights is not None:
        return opts.weights
    if opts.dist == "uniform-valid":
        return uniform_over_valid(s)
    return uniform_over_effects(s)


def _account(s: AnalysisSession, opts: Options) -> dict:
    features = opts.features or list(s.space.names)
    for x in features:
        s.space.position(x)
    out: dict = {"distribution": "file" if opts.weights is not None else opts.dist, "blame": {}, "pairs": []}
    if opts.per_instance:
        out["per_instance"] = []
    if s.effect.is_empty():
        return out
    pi = _distribution(s, opts)
    table = ResponsibilityTable(s)
    feature_dens = {x: table.feature(x) for x in features}
    out["blame"] = {x: rational(blame(x, pi, s, table)) for x in features}
    pair_dens = []
    for p in opts.pairs:
        pair_dens.append(table.partial(p))
        out["pairs"].append({"partial": str(p), "blame": rational(interaction_blame(p, pi, s, table))})
    if opts.per_instance:
        for k, bits in enumerate(table.effects):
            row = {
                "config": str(TotalConfig(s.space, bits)),
                "resp": {x: rational(as_fraction(int(d[k]))) for x, d in feature_dens.items()},
            }
            if opts.pairs:
                row["pairs"] = {str(p): rational(as_fraction(int(d[k]))) for p, d in zip(opts.pairs, pair_dens)}
            out["per_instance"].append(row)
    return out


def _interactions(s: AnalysisSession, opts: Options) -> dict:
    if not s.causes:
        return {"t": None, "witnesses": [], "necessity": False}
    t, witnesses = tway_witnesses(s)
    return {"t": t, "witnesses": witnesses.strings(), "necessity": interaction_necessity(s)}


# -- rendering ----------------------------------------------------------------


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _decimal(text: str, digits: int) -> str:
    num, den = text.split("/")
    q = Fraction(int(num), int(den))
    return f"{float(q):.{digits}g}"


def _short(text: str) -> str:
    return text[:-2] if text.endswith("/1") else text


def to_text(report: dict, timings: dict[str, float] | None = None, digits: int = 4) -> str:
    lines = []
    m = report["model"]
    lines.append(f"features: {m['features']}  valid: {m['valid']}  effects: {m['effects']}")
    c = report.get("causes")
    if c is not None:
        lines.append("")
        if not c["items"]:
            lines.append("no causes (empty effect set)")
        else:
            lines.append(f"causes ({c['count']} of {c['primes']} primes):")
            lines.extend(f"  {item}" for item in c["items"])
    e = report.get("explicate")
    if e is not None:
        lines.append("")
        if e["characteristic"] is None:
            lines.append("explication: no causes (empty effect set)")
        else:
            ratio = _decimal(e["dls_ratio"], 6)
            lines.append(f"characteristic formula (length {e['characteristic_length']}): {e['characteristic']}")
            lines.append(
                f"DLS (length {e['dls_length']}, {float(ratio) * 100:.{digits}g}% of original): {e['dls']}"
            )
            lines.append(f"most general causes ({len(e['most_general'])}): {e['most_general_dls']}")
            lines.extend(f"  {item}" for item in e["most_general"])
            cov = e["cover"]
            lines.append(f"greedy cover ({len(cov['greedy'])}): " + ", ".join(cov["greedy"]))
            if cov["exact"] is None:
                lines.append(f"exact cover: skipped (more than {EXACT_COVER_LIMIT} causes)")
            else:
                lines.append(f"exact cover ({len(cov['exact'])}): " + ", ".join(cov["exact"]))
    a = report.get("account")
    if a is not None:
        lines.append("")
        lines.append(f"blame ({a['distribution']}):")
        if not a["blame"]:
            lines.append("  (empty effect set)")
        rows = list(a["blame"].items()) + [(f"[{r['partial']}]", r["blame"]) for r in a["pairs"]]
        width = max((len(x) for x, _ in rows), default=0)
        for x, v in rows:
            lines.append(f"  {x:<{width}}  {_short(v):>9}  {_decimal(v, digits)}")
        if "per_instance" in a and a["per_instance"]:
            lines.append("responsibility per effect instance:")
            for row in a["per_instance"]:
                cells = " ".join(f"{x}={_short(v)}" for x, v in row["resp"].items())
                extra = "".join(f" [{p}]={_short(v)}" for p, v in row.get("pairs", {}).items())
                lines.append(f"  {row['config']}: {cells}{extra}")
    i = report.get("interactions")
    if i is not None:
        lines.append("")
        if i["t"] is None:
            lines.append("interactions: no causes (empty effect set)")
        else:
            lines.append(f"{i['t']}-way interaction witnesses: " + ", ".join(i["witnesses"]))
            verdict = "yes" if i["necessity"] else "no"
            lines.append(f"interaction necessary: {verdict}")
    if timings:
        lines.append("")
        lines.append("time: " + "  ".join(f"{k} {v:.3f}s" for k, v in timings.items()))
    return "\n".join(lines) + "\n"


def to_csv(report: dict) -> str:
    """Long-format table: ``section,name,context,value``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["section", "name", "context", "value"])
    for key, value in report["model"].items():
        w.writerow(["model", key, "", value])
    if "causes" in report:
        for item in report["causes"]["items"]:
            w.writerow(["cause", item, "", len(item.split("&"))])
    e = report.get("explicate")
    if e is not None and e["characteristic"] is not None:
        w.writerow(["dls", e["dls"], "", e["dls_ratio"]])
        for item in e["most_general"]:
            w.writerow(["most_general", item, "", ""])
        for strategy in ("greedy", "exact"):
            for item in e["cover"][strategy] or []:
                w.writerow([f"cover_{strategy}", item, "", ""])
    a = report.get("account")
    if a is not None:
        for x, v in a["blame"].items():
            w.writerow(["blame", x, "", v])
        for row in a["pairs"]:
            w.writerow(["pair_blame", row["partial"], "", row["blame"]])
        for row in a.get("per_instance", []):
            for x, v in row["resp"].items():
                w.writerow(["resp", x, row["config"], v])
            for p, v in row.get("pairs", {}).items():
                w.writerow(["pair_resp", p, row["config"], v])
    i = report.get("interactions")
    if i is not None:
        for item in i["witnesses"]:
            w.writerow(["witness", item, "", i["t"]])
        w.writerow(["necessity", "", "", int(i["necessity"])])
    return buf.getvalue()


def parse_pairs_spec(spec: str, s: AnalysisSession) -> PartialConfig:
    """Parse ``name=1,other=0`` into a partial configuration."""
    lits = {}
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        name, sep, value = part.partition("=")
        name, value = name.strip(), value.strip() if sep else "1"
        if value not in ("0", "1"):
            raise AnalysisError("bad-pairs", f"value for {name!r} must be 0 or 1 in {spec!r}")
        s.space.position(name)
        if name in lits:
            raise AnalysisError("bad-pairs", f"feature {name!r} repeated in {spec!r}")
        lits[name] = value == "1"
    if not lits:
        raise AnalysisError("bad-pairs", f"empty partial configuration {spec!r}")
    return s.space.partial(lits)
