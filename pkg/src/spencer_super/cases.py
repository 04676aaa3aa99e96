"""
The case registry.

Cases live in the packaged ``cases.toml``: a ``[defaults]`` table and one
``[cases."<name>"]`` table per case. A case is the defaults merged with its
own table and any per-run overrides, in that order.
"""

import copy
import fnmatch
import functools
import logging
import pathlib
from collections.abc import Mapping
from dataclasses import dataclass, field, fields
from typing import Annotated, Any

import tomlkit
import typer
from mergedeep import merge

LOG = logging.getLogger(__name__)
FILE_NAME = "cases.toml"


class UnknownCase(ValueError):
    pass


@dataclass
class CaseSpec:
    name: str
    grading: dict[str, Any]
    k_max: int = 3
    orders_s: list[int] = field(default_factory=lambda: [2])
    alphas: list[str] = field(default_factory=list)
    max_degree: int | None = None
    golden: str | None = None
    provenance: str = ""
    anchor: str = ""
    module: bool = False
    borel: str = "full"
    renames: dict[str, str] = field(default_factory=dict)
    weight_sign: int = 1
    involutivity: bool = False
    scan: list[int] = field(default_factory=lambda: [3, 4])
    cocycles: list[dict[str, Any]] = field(default_factory=list)
    slow: bool = False
    use_prolong: bool = False
    notes: str = ""

    def __post_init__(self):
        if self.borel not in ("full", "even"):
            raise UnknownCase(
                f"Unknown Borel choice - case:{self.name} borel:{self.borel}"
            )
        if self.weight_sign not in (1, -1):
            raise UnknownCase(
                "Weight sign must be 1 or -1 - "
                f"case:{self.name} weight_sign:{self.weight_sign}"
            )


_FIELDS = {f.name for f in fields(CaseSpec)}


def registry_path() -> pathlib.Path:
    return pathlib.Path(__file__).parent / FILE_NAME


@functools.cache
def _document() -> dict[str, Any]:
    path = registry_path()
    with path.open("r", encoding="utf-8") as f:
        data = tomlkit.load(f).unwrap()
    LOG.debug(
        "Case registry loaded - path:%s cases:%s", path, len(data.get("cases", {}))
    )
    return data


def case_names() -> list[str]:
    return sorted(_document().get("cases", {}))


def resolve_case(name: str, overrides: Mapping[str, Any] | None = None) -> CaseSpec:
    """The registered case ``name`` with ``overrides`` merged over it."""
    document = _document()
    table = document.get("cases", {}).get(name)
    if table is None:
        raise UnknownCase(f"Unknown case - name:{name}")
    data: dict[str, Any] = {}
    merge(
        data,
        copy.deepcopy(document.get("defaults", {})),
        copy.deepcopy(table),
        copy.deepcopy(dict(overrides or {})),
    )
    unknown = sorted(set(data) - _FIELDS)
    if unknown:
        raise UnknownCase(f"Unknown case fields - name:{name} fields:{unknown}")
    data.pop("name", None)
    return CaseSpec(name=name, **data)


def load_cases() -> dict[str, CaseSpec]:
    return {name: resolve_case(name) for name in case_names()}


app = typer.Typer()


@app.callback(invoke_without_command=True)
def list_cases(
    pattern: Annotated[
        str, typer.Option("--filter", "-f", help="Glob over case names.")
    ] = "*",
):
    """List the registered cases with their anchors."""
    for name in case_names():
        if not fnmatch.fnmatchcase(name, pattern):
            continue
        spec = resolve_case(name)
        flags = " [slow]" if spec.slow else ""
        LOG.info("%s%s - %s", name, flags, spec.anchor or "-")
