"""
Run one registered case: grade, prolong, compute the Spencer cohomology of
the requested orders on the realized algebra of the grading (on the prolong
when there is none or the case asks for it), analyze the nonzero groups as
g0-modules and collect everything in a JSON bundle. Parametric cases are run
over the rational functions in ``a`` and then at each listed value of ``a``;
the bundle records whether every specialization agrees with the symbolic
result.
"""

import logging
import pathlib
import time
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Annotated, Any

import typer

from spencer_super import golden
from spencer_super.cases import CaseSpec, resolve_case
from spencer_super.exactfield import Vector, evaluate_alpha, format_element
from spencer_super.grading import GradedAlgebra, build_grading
from spencer_super.involutivity import (
    cartan_bound,
    compare_orders,
    is_involutive,
    vanishing_scan,
)
from spencer_super.modstruct import (
    ModuleAction,
    apply_map,
    check_weyl_invariance,
    composition_report,
    even_reflections,
    format_raw,
    format_weight,
    parse_cocycle,
    translate_weight,
    weight_multiset,
)
from spencer_super.prolong import cartan_prolong, compare_graded
from spencer_super.spencer import (
    CohomologyReport,
    MissingComponent,
    cohomology,
    cohomology_module,
    spencer_differential,
)
from spencer_super.superlinalg import format_sdim

LOG = logging.getLogger(__name__)

app = typer.Typer()


@dataclass
class RunOptions:
    alphas: list[str] | None = None
    max_degree: int | None = None
    golden_dir: pathlib.Path | None = None
    check_golden: bool = False
    overrides: dict[str, Any] = field(default_factory=dict)


@dataclass
class _Evaluation:
    bundle: dict[str, Any]
    sdims: dict[str, str]
    weights: dict[str, list[tuple]]


def run_case(name: str, options: RunOptions | None = None) -> dict[str, Any]:
    """
    The JSON bundle of a case. With ``check_golden`` the bundle is compared
    with the case's golden file and ``GoldenMismatch`` is raised on a
    difference.
    """
    options = options or RunOptions()
    spec = resolve_case(name, options.overrides)
    start = time.monotonic()
    alphas = spec.alphas if options.alphas is None else options.alphas
    symbolic = _evaluate(spec, None, options.max_degree)
    bundle: dict[str, Any] = {
        "case": name,
        "schema": golden.SCHEMA_VERSION,
        "anchor": spec.anchor,
        **symbolic.bundle,
    }
    if alphas:
        bundle["specializations"] = {
            str(a): _specialize(spec, symbolic, a, options.max_degree) for a in alphas
        }
    LOG.info("Case finished - name:%s seconds:%.1f", name, time.monotonic() - start)
    if options.check_golden:
        if spec.golden is None:
            LOG.info("No golden file - case:%s", name)
        else:
            golden.check_golden(bundle, spec.golden, options.golden_dir)
    return bundle


def _evaluate(spec: CaseSpec, alpha, max_degree: int | None) -> _Evaluation:
    cutoff = max_degree if max_degree is not None else spec.max_degree
    grading = build_grading(spec.grading, alpha, cutoff)
    base = grading.base
    prolong = cartan_prolong(base, cutoff, name=spec.name)
    on_prolong = spec.use_prolong or grading.realized is None
    graded = prolong.graded if on_prolong else grading.realized
    bundle: dict[str, Any] = {
        "grading": {
            "g-1": format_sdim(base.sdim_of(-1)),
            "g0": format_sdim(base.sdim_of(0)),
            "faithful": base.is_faithful,
        },
        "algebra": "prolong" if on_prolong else "realized",
        "prolong": prolong.summary(),
    }
    if grading.full is not None:
        comparison = compare_graded(prolong.graded, grading.full, cutoff)
        bundle["prolong"]["matches_full"] = comparison.agree
        if comparison.mismatches:
            bundle["prolong"]["mismatches"] = comparison.mismatches
    reports: dict[str, CohomologyReport] = {}
    cohomology_out: dict[str, Any] = {}
    for s in spec.orders_s:
        for k in range(1, spec.k_max + 1):
            key = f"{k},{s}"
            try:
                reports[key] = cohomology(graded, k, s)
            except MissingComponent:
                cohomology_out[key] = {"missing": True}
                continue
            cohomology_out[key] = reports[key].summary()
    bundle["cohomology"] = cohomology_out
    sdims = {
        key: value["sdim"] for key, value in cohomology_out.items() if "sdim" in value
    }
    weights: dict[str, list[tuple]] = {}
    actions: dict[str, ModuleAction] = {}
    if spec.module:
        modules = {}
        for key, report in reports.items():
            if not report.dim:
                continue
            action = _module_action(spec, graded, report)
            actions[key] = action
            modules[key], weights[key] = _module_summary(spec, graded, action)
        bundle["modules"] = modules
    if spec.cocycles:
        bundle["cocycles"] = [
            _check_cocycle(graded, reports, actions, entry, alpha)
            for entry in spec.cocycles
        ]
    if spec.involutivity:
        bundle["involutivity"] = _involutivity(spec, graded)
    return _Evaluation(bundle, sdims, weights)


def _module_action(
    spec: CaseSpec, graded: GradedAlgebra, report: CohomologyReport
) -> ModuleAction:
    one = graded.domain.one
    elements = [{i: one} for i in graded.component(0)]
    return cohomology_module(
        report, elements, graded.g0_cartan(), graded.g0_raising(spec.borel)
    )


def _label_values(graded: GradedAlgebra) -> dict[str, tuple]:
    g = graded.algebra
    zero = set(graded.component(0))
    kept = [k for k, h in enumerate(g.cartan) if set(h) <= zero]
    return {
        lab: tuple(values[k] for k in kept) for lab, values in g.weight_labels.items()
    }


def _module_summary(
    spec: CaseSpec, graded: GradedAlgebra, action: ModuleAction
) -> tuple[dict[str, Any], list[tuple]]:
    report = composition_report(action)
    labels = _label_values(graded)

    def describe(weight: tuple) -> dict[str, Any]:
        entry: dict[str, Any] = {"raw": format_raw(weight, spec.weight_sign)}
        if labels:
            translated = translate_weight(
                weight, labels, spec.renames, spec.weight_sign, graded.domain
            )
            entry["weight"] = format_weight(translated)
        return entry

    g = graded.algebra
    reflections = even_reflections(
        g, graded.g0_cartan(), graded.g0_raising(spec.borel), graded.component(0)
    )
    hwvs = [
        {**describe(w.weight), "parity": w.parity, "generated": format_sdim(gen)}
        for w, gen in zip(report.hwvs, report.generated)
    ]
    layers = []
    for layer in report.layers:
        components = [
            {
                **describe(c.weight),
                "parity": c.parity,
                "sdim": format_sdim(c.sdim),
                "kind": c.kind,
            }
            for c in layer.components
        ]
        layers.append({"sdim": format_sdim(layer.sdim), "components": components})
    weyl = None
    if reflections:
        weyl = check_weyl_invariance(weight_multiset(action), reflections)
    summary = {
        "sdim": format_sdim(report.sdim),
        "hwvs": hwvs,
        "layers": layers,
        "split": report.split,
        "weyl": weyl,
    }
    return summary, [w.weight for w in report.hwvs]


def _check_cocycle(
    graded: GradedAlgebra,
    reports: Mapping[str, CohomologyReport],
    actions: Mapping[str, ModuleAction],
    entry: Mapping[str, Any],
    alpha,
) -> dict[str, Any]:
    k, s = int(entry["k"]), int(entry.get("s", 2))
    key = f"{k},{s}"
    report = reports[key]
    v = parse_cocycle(entry["text"], report.space, alpha)
    closed = not spencer_differential(graded, k, s).apply(v)
    exact = report.is_exact(v)
    out: dict[str, Any] = {"k": k, "s": s, "closed": closed, "exact": exact}
    if closed and not exact:
        coords: Vector = {
            i: c for i, c in enumerate(report.coordinates(v)) if c
        }
        out["proportional"] = report.dim == 1
        action = actions.get(key)
        if action is not None:
            out["highest"] = all(not apply_map(op, coords) for op in action.raising)
    return out


def _involutivity(spec: CaseSpec, graded: GradedAlgebra) -> dict[str, Any]:
    report = is_involutive(graded)
    out = report.summary()
    out["orders"] = compare_orders(graded)
    if graded.has_component(1):
        bound = cartan_bound(graded)
        out["cartan_bound"] = {
            "dim_g1": bound.dim_g1,
            "bound": bound.bound,
            "equality": bound.equality,
        }
    i_max, k_max = spec.scan
    table = vanishing_scan(graded, i_max, k_max)
    out["scan"] = {
        f"{i},{k}": None if v is None else format_sdim(v)
        for (i, k), v in sorted(table.items())
    }
    vanishing = all(v is None or v == (0, 0) for v in table.values())
    out["scan_vanishes"] = vanishing
    if report.involutive and not vanishing:
        raise ValueError(
            "Involutive algebra with nonvanishing cohomology - "
            f"case:{spec.name} scan:{out['scan']}"
        )
    return out


def _specialize(
    spec: CaseSpec, symbolic: _Evaluation, alpha: str, max_degree: int | None
) -> dict[str, Any]:
    special = _evaluate(spec, alpha, max_degree)
    mismatches = []
    for key, sdim in symbolic.sdims.items():
        if special.sdims.get(key) != sdim:
            mismatches.append(f"sdim {key}: {sdim} vs {special.sdims.get(key)}")
    for key, weights in symbolic.weights.items():
        expected = sorted(
            tuple(format_element(evaluate_alpha(x, alpha)) for x in w)
            for w in weights
        )
        actual = sorted(
            tuple(format_element(x) for x in w)
            for w in special.weights.get(key, [])
        )
        if expected != actual:
            mismatches.append(f"weights {key}: {expected} vs {actual}")
    if mismatches:
        LOG.warning(
            "Specialization differs - case:%s alpha:%s first:%s",
            spec.name,
            alpha,
            mismatches[0],
        )
    return {"agree": not mismatches, "mismatches": mismatches, **special.bundle}


@app.callback(invoke_without_command=True)
def run(
    case: Annotated[str, typer.Option("--case", "-c", help="Registered case name.")],
    alpha: Annotated[
        list[str] | None,
        typer.Option(
            "--alpha",
            help="Rational value of the parameter a; repeatable. "
            "Replaces the case's list.",
        ),
    ] = None,
    max_degree: Annotated[int | None, typer.Option(help="Prolong cutoff.")] = None,
    json_path: Annotated[
        pathlib.Path | None,
        typer.Option("--json", help="Write the bundle to this path."),
    ] = None,
    golden_dir: Annotated[
        pathlib.Path | None,
        typer.Option(
            "--golden", help="Compare with the golden file from this directory."
        ),
    ] = None,
):
    """Run a single case."""
    options = RunOptions(
        alphas=alpha,
        max_degree=max_degree,
        golden_dir=golden_dir,
        check_golden=golden_dir is not None,
    )
    try:
        bundle = run_case(case, options)
    except golden.GoldenMismatch as e:
        for d in e.diffs:
            LOG.error("Mismatch - %s", d)
        raise typer.Exit(1) from e
    text = golden.dumps(bundle)
    if json_path is not None:
        json_path.write_text(text, encoding="utf-8")
        LOG.info("Bundle written - path:%s", json_path)
    else:
        typer.echo(text, nl=False)
