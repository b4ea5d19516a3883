"""Command line: ``nlkit run``, ``nlkit list`` and ``nlkit explain``.

Exit codes: 0 all checks passed, 1 some check failed, 2 usage or config
error, 3 input/output error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass, field

from . import report as rp
from .suites import SUITES, ConfigError, suite_coneoff

OK, VERIFY_FAIL, USAGE, IO_ERROR = 0, 1, 2, 3
FAMILIES = ("V", "sV", "SVG", "T")
TOLERANCES = {"min_rate"}


@dataclass
class RunConfig:
    suite: str
    seed: int
    budget: int = 20
    family: str = "V"
    n: int = 2
    r: int = 1
    s: int = 2
    depth: int = 2
    graph: str | None = None
    orbit: list | None = None
    R: list = field(default_factory=lambda: [1, 2, 3, 4, 5])
    pairs: list = field(default_factory=list)
    tolerance: dict = field(default_factory=dict)
    out: str | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(d) - names)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        if d.get("seed") is None:
            raise ConfigError("a seed is required")
        if "suite" not in d:
            raise ConfigError("a suite is required")
        cfg = cls(**d)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; available: {', '.join(SUITES)}")
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}; available: {', '.join(FAMILIES)}")
        for key in ("seed", "budget", "n", "r", "s", "depth"):
            if not isinstance(getattr(self, key), int) or isinstance(getattr(self, key), bool):
                raise ConfigError(f"{key} must be an integer")
        if self.budget < 0:
            raise ConfigError("budget must be >= 0")
        if self.n < 2 or self.r < 1 or self.s < 1 or self.depth < 1:
            raise ConfigError("need n >= 2, r >= 1, s >= 1, depth >= 1")
        unknown = sorted(set(self.tolerance) - TOLERANCES) if isinstance(self.tolerance, dict) else ["<not an object>"]
        if unknown:
            raise ConfigError(f"unknown tolerance keys: {', '.join(unknown)}")
        if not isinstance(self.R, list) or not self.R or not all(isinstance(x, int) and x >= 0 for x in self.R):
            raise ConfigError("R must be a nonempty list of nonnegative integers")

    def to_dict(self) -> dict:
        """Config as embedded in the report; the output path is left out so reports compare across paths."""
        d = dataclasses.asdict(self)
        d.pop("out")
        return d


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nlkit", description="Seeded verification suites with JSON witness reports.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a suite and write a report")
    run.add_argument("--suite")
    run.add_argument("--seed", type=int)
    run.add_argument("--budget", type=int)
    run.add_argument("--family", choices=FAMILIES)
    run.add_argument("--n", type=int)
    run.add_argument("--r", type=int)
    run.add_argument("--s", type=int, help="dimension for sV / SVG")
    run.add_argument("--depth", type=int, help="grid depth for the clopen suite")
    run.add_argument("--graph", help="edge-list file, or path:K, cycle:K, tree:DEPTH")
    run.add_argument("--R", type=int, nargs="+", help="cone-off radii")
    run.add_argument("--config", help="JSON file with config keys; flags override it")
    run.add_argument("--out", help="report file (default stdout); DOT files go next to it")
    run.add_argument("--format", choices=("json", "text"), default="json")

    ls = sub.add_parser("list", help="list the suite catalog")
    ls.add_argument("--format", choices=("text", "json"), default="text")

    ex = sub.add_parser("explain", help="summarize a report file")
    ex.add_argument("report")
    return p


def _catalog() -> str:
    return "\n".join(f"{name:<12} {doc}" for name, (_, doc) in SUITES.items())


def _config_from_args(args) -> RunConfig:
    d: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}") from exc
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
    for key in ("suite", "seed", "budget", "family", "n", "r", "s", "depth", "graph", "R", "out"):
        v = getattr(args, key)
        if v is not None:
            d[key] = v
    if d.get("suite") is not None and d["suite"] not in SUITES:
        raise ConfigError(f"unknown suite {d['suite']!r}; available suites:\n{_catalog()}")
    return RunConfig.from_dict(d)


def run_suite(cfg: RunConfig, artifacts: dict | None = None, timestamp: str | None = None) -> dict:
    fn = SUITES[cfg.suite][0]
    if cfg.budget == 0:
        items = []
    elif fn is suite_coneoff:
        items = suite_coneoff(cfg, artifacts)
    else:
        items = fn(cfg)
    items = [it if isinstance(it, dict) else it.to_dict() for it in items]
    return rp.normalize(rp.build(cfg.suite, cfg.to_dict(), items, timestamp))


def _write(path: str, text: str) -> None:
    with open(path, "w") as fh:
        fh.write(text)


def _cmd_run(args, out, err) -> int:
    cfg = _config_from_args(args)
    artifacts: dict = {}
    report = run_suite(cfg, artifacts)
    text = rp.dumps(report) if args.format == "json" else rp.explain(report) + "\n"
    if cfg.out:
        _write(cfg.out, text)
        folder = os.path.dirname(os.path.abspath(cfg.out))
        for name, body in sorted(artifacts.items()):
            _write(os.path.join(folder, name), body)
    else:
        out.write(text)
    return VERIFY_FAIL if rp.failed(report) else OK


def _cmd_explain(args, out, err) -> int:
    with open(args.report) as fh:
        text = fh.read()
    try:
        report = rp.load(text)
    except rp.SchemaError as exc:
        err.write(f"error: {exc}\n")
        return USAGE
    out.write(rp.explain(report) + "\n")
    return VERIFY_FAIL if rp.failed(report) else OK


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        if args.command == "list":
            if args.format == "json":
                out.write(json.dumps({k: doc for k, (_, doc) in SUITES.items()}, indent=2) + "\n")
            else:
                out.write(_catalog() + "\n")
            return OK
        if args.command == "explain":
            return _cmd_explain(args, out, err)
        return _cmd_run(args, out, err)
    except ConfigError as exc:
        err.write(f"error: {exc}\n")
        return USAGE
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
