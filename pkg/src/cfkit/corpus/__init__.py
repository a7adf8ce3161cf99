"""Bundled fixtures and golden reports for the worked examples.

Each fixture directory holds ``input.cfk`` (declarations), ``params.txt``
(one CLI invocation per line, run with the fixture directory's files copied
into a scratch directory), and ``expected.json`` with the golden reports.
Reports are compared after dropping the ``timings`` field; everything else,
including exit codes and the serialized output algebras, must match byte for
byte.  ``python -m cfkit.corpus --regen`` rewrites the goldens, preserving
each fixture's ``notes``.
"""

from __future__ import annotations

import argparse
import json
import os
import shlex
import shutil
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .. import cli

_ROOT = Path(__file__).resolve().parent


def fixture_names() -> list[str]:
    return sorted(
        p.name for p in _ROOT.iterdir() if p.is_dir() and (p / "input.cfk").exists()
    )


def fixture_dir(name: str) -> Path:
    path = _ROOT / name
    if not (path / "input.cfk").exists():
        raise KeyError(f"no fixture named {name!r}")
    return path


def fixture_lines(name: str) -> list[list[str]]:
    lines = []
    for raw in (fixture_dir(name) / "params.txt").read_text().splitlines():
        raw = raw.strip()
        if raw and not raw.startswith("#"):
            lines.append(shlex.split(raw))
    return lines


@dataclass
class FixtureResult:
    name: str
    reports: list[dict]
    diffs: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.diffs


@dataclass
class CorpusSummary:
    results: list[FixtureResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def describe(self) -> str:
        lines = []
        for r in self.results:
            lines.append(f"{r.name}: {'pass' if r.passed else 'FAIL'}")
            lines.extend(f"  {d}" for d in r.diffs)
        return "\n".join(lines)


def _run_line(workdir: Path, argv: list[str]) -> dict:
    report_path = workdir / "report.json"
    if report_path.exists():
        report_path.unlink()
    cwd = os.getcwd()
    os.chdir(workdir)
    try:
        code = cli.main(argv + ["--json", "report.json"])
    finally:
        os.chdir(cwd)
    report = {}
    if report_path.exists():
        report = json.loads(report_path.read_text())
        report.pop("timings", None)
    return {"args": argv, "exit": code, "report": report}


def run_fixture(name: str, regen: bool = False) -> FixtureResult:
    directory = fixture_dir(name)
    collected = []
    with tempfile.TemporaryDirectory() as tmp:
        workdir = Path(tmp)
        shutil.copy(directory / "input.cfk", workdir / "input.cfk")
        for argv in fixture_lines(name):
            collected.append(_run_line(workdir, argv))
    expected_path = directory / "expected.json"
    notes = []
    if expected_path.exists():
        notes = json.loads(expected_path.read_text()).get("notes", [])
    if regen:
        payload = {"notes": notes, "reports": collected}
        expected_path.write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        return FixtureResult(name, collected)
    result = FixtureResult(name, collected)
    if not expected_path.exists():
        result.diffs.append("expected.json is missing (run --regen)")
        return result
    golden = json.loads(expected_path.read_text())["reports"]
    if len(golden) != len(collected):
        result.diffs.append(
            f"command count changed: golden {len(golden)}, got {len(collected)}"
        )
        return result
    for i, (want, got) in enumerate(zip(golden, collected)):
        if want != got:
            result.diffs.append(f"command {i} ({' '.join(got['args'])}) differs")
    return result


def fixture_notes(name: str) -> list[str]:
    data = json.loads((fixture_dir(name) / "expected.json").read_text())
    return data.get("notes", [])


def fixture_reports(name: str) -> list[dict]:
    data = json.loads((fixture_dir(name) / "expected.json").read_text())
    return data["reports"]


def run_corpus(names: list[str] | None = None, regen: bool = False) -> CorpusSummary:
    results = [run_fixture(name, regen=regen) for name in (names or fixture_names())]
    return CorpusSummary(results)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="python -m cfkit.corpus")
    parser.add_argument("names", nargs="*", help="fixtures to run (default: all)")
    parser.add_argument("--regen", action="store_true", help="rewrite the goldens")
    args = parser.parse_args(argv)
    summary = run_corpus(args.names or None, regen=args.regen)
    print(summary.describe())
    return 0 if summary.passed else 1
