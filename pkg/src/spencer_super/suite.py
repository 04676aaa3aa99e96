"""
Batch runs over the case registry.

Cases run in worker processes and every case is checked against its golden
file. Results are reported in registry order regardless of completion order.
"""

import fnmatch
import logging
import pathlib
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass
from multiprocessing import cpu_count
from typing import Annotated

import typer

from spencer_super import golden
from spencer_super.cases import case_names, resolve_case
from spencer_super.run import RunOptions, run_case

LOG = logging.getLogger(__name__)

app = typer.Typer()

PASS = "pass"
FAIL = "fail"
ERROR = "error"
SKIP = "skip"


class NoCasesMatched(ValueError):
    pass


@dataclass(frozen=True)
class CaseResult:
    name: str
    status: str
    seconds: float
    message: str = ""


def select_cases(pattern: str = "*", slow: bool = False) -> tuple[list[str], list[str]]:
    """Names matching ``pattern`` split into (selected, skipped slow)."""
    matched = [name for name in case_names() if fnmatch.fnmatchcase(name, pattern)]
    if not matched:
        raise NoCasesMatched(f"No cases match - pattern:{pattern}")
    selected, skipped = [], []
    for name in matched:
        (skipped if resolve_case(name).slow and not slow else selected).append(name)
    return selected, skipped


def _run_one(name: str, golden_dir: pathlib.Path | None) -> CaseResult:
    start = time.monotonic()
    try:
        run_case(name, RunOptions(golden_dir=golden_dir, check_golden=True))
    except golden.GoldenMismatch as e:
        return CaseResult(name, FAIL, time.monotonic() - start, str(e))
    except Exception as e:  # noqa: BLE001
        message = f"{type(e).__name__}: {e}"
        return CaseResult(name, ERROR, time.monotonic() - start, message)
    return CaseResult(name, PASS, time.monotonic() - start)


def run_suite(
    pattern: str = "*",
    threads: int | None = None,
    golden_dir: pathlib.Path | None = None,
    slow: bool = False,
) -> list[CaseResult]:
    selected, skipped = select_cases(pattern, slow)
    jobs = max(1, min(threads or cpu_count(), len(selected) or 1))
    LOG.info(
        "Running suite - pattern:%s cases:%s skipped:%s jobs:%s",
        pattern,
        len(selected),
        len(skipped),
        jobs,
    )
    results: dict[str, CaseResult] = {
        name: CaseResult(name, SKIP, 0.0, "slow") for name in skipped
    }
    if jobs == 1:
        for name in selected:
            results[name] = _run_one(name, golden_dir)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = {
                executor.submit(_run_one, name, golden_dir): name for name in selected
            }
            for future in as_completed(futures):
                result = future.result()
                LOG.debug("Case done - name:%s status:%s", result.name, result.status)
                results[result.name] = result
    return [results[name] for name in sorted(results)]


def format_table(results: list[CaseResult]) -> str:
    width = max((len(r.name) for r in results), default=4)
    lines = [f"{'case':<{width}}  status  seconds  message"]
    for r in results:
        lines.append(f"{r.name:<{width}}  {r.status:<6}  {r.seconds:7.1f}  {r.message}")
    counts = {s: sum(r.status == s for r in results) for s in (PASS, FAIL, ERROR, SKIP)}
    lines.append(" ".join(f"{s}:{n}" for s, n in counts.items()))
    return "\n".join(lines)


def exit_code(results: list[CaseResult]) -> int:
    return 1 if any(r.status in (FAIL, ERROR) for r in results) else 0


@app.callback(invoke_without_command=True)
def suite(
    pattern: Annotated[
        str, typer.Option("--suite", "-s", help="Glob over case names.")
    ] = "*",
    threads: Annotated[
        int | None,
        typer.Option(help="Worker processes (defaults to the cpu count)."),
    ] = None,
    golden_dir: Annotated[
        pathlib.Path | None,
        typer.Option(
            "--golden", help="Golden directory (defaults to the packaged goldens)."
        ),
    ] = None,
    json_path: Annotated[
        pathlib.Path | None,
        typer.Option("--json", help="Write the summary to this path."),
    ] = None,
    slow: Annotated[bool, typer.Option(help="Include cases marked slow.")] = False,
):
    """Run every matching case against its golden file."""
    try:
        results = run_suite(pattern, threads, golden_dir, slow)
    except NoCasesMatched as e:
        LOG.error("%s", e)
        raise typer.Exit(2) from e
    LOG.info("%s", format_table(results))
    if json_path is not None:
        summary = {"pattern": pattern, "results": [asdict(r) for r in results]}
        json_path.write_text(golden.dumps(summary), encoding="utf-8")
        LOG.info("Summary written - path:%s", json_path)
    code = exit_code(results)
    if code:
        raise typer.Exit(code)
