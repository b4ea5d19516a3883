"""JSON report schema shared by ``run`` and ``explain``."""

from __future__ import annotations

import datetime as _dt
import json
from fractions import Fraction

SCHEMA_VERSION = 1
REQUIRED = ("schema_version", "suite", "config", "counts", "items", "timestamp")

CONDITION_NAMES = {
    "C": "complement condition (C)",
    "2T": "double transitivity on clopen pairs (2T)",
    "3T": "weak triple transitivity (3T)",
    "L": "locality / gluing (L)",
    "6T": "six-point transitivity on the circle",
    "P1": "Property (1): bounded generation by A",
    "P2": "Property (2): commuting chains through B",
    "P3": "Property (3): conjugates of A land in products fixing P, M, N",
    "EP": "extreme proximality",
    "laws": "group laws",
    "clopen": "clopen boolean identities",
    "coneoff": "cone-off checks for one radius",
    "coneoff-monotone": "cone-off edge sets shrink as R grows",
    "delta": "four-point hyperbolicity of a random tree",
    "delta-cycle": "four-point hyperbolicity of a cycle",
    "defect": "quasimorphism defect",
    "homogenize": "homogenization bracket",
    "quasicocycle": "sign-twisted quasicocycle extension",
    "quasiline": "quasi-line generating set",
    "wreath": "wreath-product lift",
    "busemann": "Busemann quasimorphism versus translation length",
}


class SchemaError(ValueError):
    pass


def _default(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if hasattr(x, "item"):  # numpy scalars
        return x.item()
    return str(x)


def counts_of(items: list[dict]) -> dict:
    counts: dict = {}
    for it in items:
        c = counts.setdefault(it["condition"], {"pass": 0, "fail": 0, "inconclusive": 0})
        c[it["verdict"]] += 1
    return dict(sorted(counts.items()))


def build(suite: str, config: dict, items: list[dict], timestamp: str | None = None) -> dict:
    if timestamp is None:
        timestamp = _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": suite,
        "config": config,
        "counts": counts_of(items),
        "items": items,
        "timestamp": timestamp,
    }


def dumps(report: dict) -> str:
    """Sorted keys and fixed indentation: equal inputs give equal bytes except the timestamp."""
    return json.dumps(report, sort_keys=True, indent=2, default=_default) + "\n"


def normalize(report: dict) -> dict:
    """Round-trip through JSON so in-memory values compare like the written file."""
    return json.loads(dumps(report))


def load(text: str) -> dict:
    try:
        rep = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not JSON: {exc}") from exc
    if not isinstance(rep, dict):
        raise SchemaError("report must be a JSON object")
    missing = [k for k in REQUIRED if k not in rep]
    if missing:
        raise SchemaError(f"missing keys: {', '.join(missing)}")
    if rep["schema_version"] != SCHEMA_VERSION:
        raise SchemaError(f"schema_version {rep['schema_version']!r} is not {SCHEMA_VERSION}")
    return rep


def failed(report: dict) -> int:
    return sum(c["fail"] for c in report["counts"].values())


def explain(report: dict) -> str:
    lines = [f"suite {report['suite']} (seed {report['config'].get('seed')}, {report['timestamp']})"]
    for cond, c in report["counts"].items():
        name = CONDITION_NAMES.get(cond, cond)
        lines.append(f"  {cond:<16} {name}: {c['pass']} pass, {c['fail']} fail, {c['inconclusive']} inconclusive")
    for it in report["items"]:
        if it["verdict"] == "pass":
            continue
        tag = "INCONCLUSIVE" if it["verdict"] == "inconclusive" else "FAIL"
        bad = [k for k, v in sorted(it.get("checks", {}).items()) if not v]
        why = it.get("note") or ", ".join(bad) or "no checks recorded"
        lines.append(f"  {tag} {it['condition']}#{it['seed']}: {why}")
    return "\n".join(lines)
