"""
Golden expectation files.

A golden file is a JSON object with a ``provenance`` string and an ``expect``
object. ``expect`` is a subset of a run bundle: every key it names must be
present in the bundle with an equal value, lists must match element by
element, and keys it leaves out are ignored.
"""

import json
import logging
import pathlib
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Any

from spencer_super import config

LOG = logging.getLogger(__name__)
SCHEMA_VERSION = 1


class GoldenMismatch(ValueError):
    def __init__(self, name: str, diffs: list["GoldenDiff"]):
        self.name = name
        self.diffs = diffs
        first = diffs[0] if diffs else None
        super().__init__(
            f"Golden mismatch - golden:{name} diffs:{len(diffs)} first:{first}"
        )


@dataclass(frozen=True)
class GoldenDiff:
    path: str
    expected: Any
    actual: Any

    def __str__(self) -> str:
        return f"{self.path}: expected {self.expected!r} got {self.actual!r}"


_MISSING = "<missing>"


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def golden_path(golden_id: str, directory: pathlib.Path | None = None) -> pathlib.Path:
    return (directory or config.golden_dir()) / f"{golden_id}.json"


def load_golden(
    golden_id: str, directory: pathlib.Path | None = None
) -> dict[str, Any]:
    path = golden_path(golden_id, directory)
    with path.open("r", encoding="utf-8") as f:
        data = json.load(f)
    if "provenance" not in data or "expect" not in data:
        raise ValueError(f"Golden file lacks provenance or expect - path:{path}")
    return data


def diff_subset(expected: Any, actual: Any, path: str = "") -> list[GoldenDiff]:
    if isinstance(expected, Mapping):
        if not isinstance(actual, Mapping):
            return [GoldenDiff(path or "/", expected, actual)]
        diffs = []
        for key, value in expected.items():
            child = f"{path}/{key}"
            if key not in actual:
                diffs.append(GoldenDiff(child, value, _MISSING))
            else:
                diffs.extend(diff_subset(value, actual[key], child))
        return diffs
    if isinstance(expected, list):
        if not isinstance(actual, list) or len(actual) != len(expected):
            return [GoldenDiff(path or "/", expected, actual)]
        diffs = []
        for i, (e, a) in enumerate(zip(expected, actual)):
            diffs.extend(diff_subset(e, a, f"{path}[{i}]"))
        return diffs
    if expected != actual:
        return [GoldenDiff(path or "/", expected, actual)]
    return []


def check_golden(
    bundle: Mapping[str, Any],
    golden_id: str,
    directory: pathlib.Path | None = None,
) -> dict[str, Any]:
    """Compare ``bundle`` with the golden file; raises ``GoldenMismatch``."""
    golden = load_golden(golden_id, directory)
    diffs = diff_subset(golden["expect"], bundle)
    if diffs:
        for d in diffs:
            LOG.warning("Golden difference - golden:%s %s", golden_id, d)
        raise GoldenMismatch(golden_id, diffs)
    LOG.info("Golden match - golden:%s provenance:%s", golden_id, golden["provenance"])
    return golden
