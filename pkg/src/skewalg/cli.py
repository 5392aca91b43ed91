"""``skewalg`` command-line front end.

Every subcommand reads one JSON input document (see :mod:`skewalg.io`) and
prints a JSON report with sorted keys.  Reports carry the sha256 of the input
bytes and no wall-clock data unless ``--timing`` is given, so re-running a
command on the same file reproduces the report byte for byte.

Exit codes: 0 when a report was computed (an ``unknown`` verdict included),
2 for invalid input, 3 when a resource cap was hit.
"""

from __future__ import annotations

import json
import sys
import time
from typing import Callable, Optional

import click
import numpy as np

from .algebra import Algebra, fingerprint, is_local, morita_fingerprint, simple_dims, truncated_polynomial_iso
from .errors import ActionError, ResourceCapExceeded, SkewAlgError
from .groups import fixed_subalgebra, is_free_on_idempotents, trivial_action, trivial_group, verify_action
from .io import InputError, Problem, digest, jsonable, load, load_oracle, module_from_json
from .koszul import (
    abar_reduction,
    degree_zero_skew_module,
    ext_dim_table,
    grade_algebra,
    grade_skew,
    is_koszul_up_to,
    koszul_transfer_check,
)
from .modules import DEFAULT_DEPTH
from .oracle import RepTypeOracle
from .skew import (
    build_skew,
    classify_auslander,
    classify_gldim,
    classify_reptype,
    field_block,
    fixed_vs_corner_check,
    morita_reduce,
    skew_radical,
)
from .transporter import (
    build_transporter,
    category_algebra,
    classify_transporter,
    ei_check,
    free_action_certificate,
    fork_witness,
    is_free,
    skeleton_report,
    verify_transporter_verdict,
)

DEFAULT_DEGREE = 8
# category tables above these sizes are summarised without the quadratic checks
CATEGORY_CHECK_LIMIT = 400
COMPARE_DIM_LIMIT = 200


# ----------------------------------------------------------------------
# report helpers
# ----------------------------------------------------------------------


def vector_terms(alg: Algebra, v) -> dict:
    return {alg.labels[i]: v[i] for i in np.nonzero(v)[0]}


def algebra_summary(alg: Algebra) -> dict:
    out = {"dim": alg.dim, "fingerprint": fingerprint(alg)}
    if is_local(alg) and truncated_polynomial_iso(alg) is not None:
        out["isomorphic_to"] = f"k[X]/(X^{alg.dim})"
    return out


def _group_and_action(prob: Problem):
    if prob.has_group:
        return prob.group, prob.action
    grp = trivial_group()
    return grp, trivial_action(prob.algebra, grp)


def _oracle(prob: Problem, path: Optional[str]) -> RepTypeOracle:
    if path:
        return load_oracle(path, ".")
    return prob.oracle or RepTypeOracle()


def render_pretty(report: dict) -> str:
    """Two-column text table; nested values are shown as compact JSON."""
    rows = []

    def walk(prefix, val):
        if isinstance(val, dict) and val and len(prefix.split(".")) < 3:
            for k in sorted(val):
                walk(f"{prefix}.{k}" if prefix else k, val[k])
        else:
            rows.append((prefix, val if isinstance(val, str) else json.dumps(val, sort_keys=True)))

    walk("", report)
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows) + "\n"


def emit(report: dict, pretty: bool) -> None:
    report = jsonable(report)
    if pretty:
        click.echo(render_pretty(report), nl=False)
    else:
        click.echo(json.dumps(report, sort_keys=True, indent=2))


def run(command: str, input_path: str, pretty: bool, timing: bool, body: Callable[[Problem], dict]) -> None:
    start = time.perf_counter()
    report: dict = {"command": command}
    with open(input_path, "rb") as fh:
        report["input_sha256"] = digest(fh.read())
    try:
        prob = load(input_path)
        report["field"] = field_block(prob.char)
        report.update(body(prob))
        code = 0
    except ResourceCapExceeded as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = 3
    except SkewAlgError as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = 2
    except (KeyError, TypeError, ValueError) as exc:
        report["error"] = {"type": "InputError", "message": f"{type(exc).__name__}: {exc}"}
        code = 2
    if timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
    emit(report, pretty)
    sys.exit(code)


def common(f):
    f = click.argument("input_path", metavar="INPUT.json", type=click.Path(exists=True, dir_okay=False))(f)
    f = click.option("--timing", is_flag=True, help="Add wall-clock time (reports are then not reproducible).")(f)
    f = click.option("--pretty", is_flag=True, help="Render a text table instead of JSON.")(f)
    f = click.option("--oracle", "oracle_path", type=click.Path(exists=True, dir_okay=False),
                     help="Representation-type data file (overrides the document's oracle).")(f)
    f = click.option("--degree", type=int, default=DEFAULT_DEGREE, show_default=True,
                     help="Koszul linearity bound.")(f)
    f = click.option("--depth", type=int, default=DEFAULT_DEPTH, show_default=True,
                     help="Resolution depth bound.")(f)
    return f


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Skew group algebras, transporter categories and Koszul checks."""


# ----------------------------------------------------------------------
# check
# ----------------------------------------------------------------------


def check_body(prob: Problem) -> dict:
    alg = prob.algebra
    alg.validate(associativity=True)
    out: dict = {
        "valid": True,
        "algebra": {"source": prob.kind, "dim": alg.dim, "idempotents": len(alg.idempotents),
                    "radical_dim": int(alg.rad.shape[1])},
    }
    if prob.group is not None:
        out["group"] = {"order": prob.group.order, "generators": len(prob.group.generators),
                        "trivial": prob.group.order == 1}
        problems = verify_action(prob.action, prob.group)
        if problems:
            raise ActionError(problems[0])
        act = {"e_closed": prob.action.e_closed}
        if prob.action.e_closed:
            act["free_on_idempotents"] = is_free_on_idempotents(prob.action)[0]
        out["action"] = act
    if prob.grading is not None:
        ga = grade_algebra(alg, prob.grading)
        out["grading"] = {"component_dims": ga.component_dims}
    if prob.modules:
        out["modules"] = [{"name": m.get("name", f"M{i}"), "dim": module_from_json(m, alg).dim}
                          for i, m in enumerate(prob.modules)]
    return out


@main.command("check")
@common
def check_cmd(input_path, depth, degree, oracle_path, pretty, timing):
    """Validate an input document."""
    run("check", input_path, pretty, timing, check_body)


# ----------------------------------------------------------------------
# skew
# ----------------------------------------------------------------------


def skew_body(prob: Problem, fixed: bool, morita: bool, radical: bool) -> dict:
    if not (fixed or morita or radical):
        fixed = morita = radical = True
    base = prob.algebra
    grp, act = _group_and_action(prob)
    sa = build_skew(base, grp, act)
    out: dict = {"skew": {"dim": sa.algebra.dim, "base_dim": base.dim, "group_order": grp.order,
                          "e_closed": act.e_closed,
                          "simple_dims": sorted(simple_dims(sa.algebra))}}
    free = is_free_on_idempotents(act)[0] if act.e_closed else None
    out["skew"]["free_on_idempotents"] = free
    if fixed:
        fx, emb = fixed_subalgebra(act)
        out["fixed"] = {**algebra_summary(fx),
                        "basis": [vector_terms(base, emb[:, c]) for c in range(emb.shape[1])]}
    if morita:
        if not act.e_closed:
            out["morita"] = {"skipped": "E is not closed under the group"}
        else:
            red = morita_reduce(sa)
            out["morita"] = {**algebra_summary(red),
                             "orbit_representatives": [str(r) for r in red.meta["orbit_representatives"]],
                             "morita_fingerprint": morita_fingerprint(sa.algebra)}
            if free:
                out["morita"]["corner_isomorphic_to_fixed"] = fixed_vs_corner_check(sa)
    if radical:
        rad = skew_radical(sa)
        out["radical"] = {k: v for k, v in rad.items() if k != "radical"}
    return out


@main.command("skew")
@common
@click.option("--fixed", is_flag=True, help="Report the fixed subalgebra.")
@click.option("--morita", is_flag=True, help="Report the Morita-reduced corner algebra.")
@click.option("--radical", is_flag=True, help="Compare the radical with rad(L) tensor kG.")
def skew_cmd(input_path, depth, degree, oracle_path, pretty, timing, fixed, morita, radical):
    """Build the skew group algebra (all sections unless some are selected)."""
    run("skew", input_path, pretty, timing, lambda prob: skew_body(prob, fixed, morita, radical))


# ----------------------------------------------------------------------
# classify
# ----------------------------------------------------------------------


def classify_body(prob: Problem, question: str, depth: int, oracle_path: Optional[str]) -> dict:
    oracle = _oracle(prob, oracle_path)
    if question == "transporter":
        if prob.poset is None:
            raise InputError("the transporter question needs a poset document")
        grp = prob.group or trivial_group(prob.poset.elements)
        v = classify_transporter(prob.poset, grp, prob.char, oracle).to_json()
        v["recheck_problems"] = verify_transporter_verdict(prob.poset, grp, prob.char, v)
        return {"question": question, "result": v}
    grp, act = _group_and_action(prob)
    if question == "gldim":
        v = classify_gldim(prob.algebra, grp, act, depth)
    elif question == "auslander":
        v = classify_auslander(prob.algebra, grp, act, depth)
    else:
        v = classify_reptype(prob.algebra, grp, act, oracle)
    return {"question": question, "result": v.to_json()}


@main.command("classify")
@common
@click.option("--question", type=click.Choice(["gldim", "auslander", "reptype", "transporter"]),
              required=True)
def classify_cmd(input_path, depth, degree, oracle_path, pretty, timing, question):
    """Decide a property of the skew group algebra with a certificate."""
    run("classify", input_path, pretty, timing, lambda prob: classify_body(prob, question, depth, oracle_path))


# ----------------------------------------------------------------------
# transporter
# ----------------------------------------------------------------------


def transporter_body(prob: Problem, oracle_path: Optional[str]) -> dict:
    if prob.poset is None:
        raise InputError("transporter needs a poset document")
    p = prob.poset
    grp = prob.group or trivial_group(p.elements)
    t = build_transporter(p, grp)
    cat: dict = {"objects": len(t.objects), "morphisms": len(t.morphisms), "ei": ei_check(t)}
    if len(t.morphisms) <= CATEGORY_CHECK_LIMIT:
        cat["table_problems"] = t.problems()
    out: dict = {"category": cat}
    _, alg_report = category_algebra(t, prob.char, compare=len(t.morphisms) <= COMPARE_DIM_LIMIT)
    out["category_algebra"] = alg_report
    out["skeleton"] = skeleton_report(t, prob.char)
    free = is_free(t.sigma)
    wit: dict = {"free_action": free}
    if free and grp.order > 1 and p.is_connected():
        fw = fork_witness(p, grp)
        wit["fork"] = fw.to_json(p, grp) if fw else None
        wit["certificate"] = free_action_certificate(p, grp).to_json(p, grp)
    out["witnesses"] = wit
    v = classify_transporter(p, grp, prob.char, _oracle(prob, oracle_path)).to_json()
    v["recheck_problems"] = verify_transporter_verdict(p, grp, prob.char, v)
    out["classification"] = v
    return out


@main.command("transporter")
@common
def transporter_cmd(input_path, depth, degree, oracle_path, pretty, timing):
    """Transporter category of a group acting on a poset."""
    run("transporter", input_path, pretty, timing, lambda prob: transporter_body(prob, oracle_path))


# ----------------------------------------------------------------------
# koszul
# ----------------------------------------------------------------------


def koszul_body(prob: Problem, degree: int, ext: Optional[int], abar: bool) -> dict:
    if prob.grading is None:
        raise InputError("koszul needs a grading")
    ga = grade_algebra(prob.algebra, prob.grading)
    out: dict = {"component_dims": ga.component_dims}
    if prob.has_group:
        out["transfer"] = koszul_transfer_check(ga, prob.group, prob.action, degree)
    else:
        out["base"] = is_koszul_up_to(ga, degree).to_json()
    if abar:
        out["abar"] = abar_reduction(ga, degree)[1]
    if ext is not None:
        grp, act = _group_and_action(prob)
        gs = grade_skew(ga, grp, act)
        m = degree_zero_skew_module(gs)
        out["ext"] = ext_dim_table(ga, gs, m, m, ext)
    return out


@main.command("koszul")
@common
@click.option("--ext", "ext_smax", type=int, default=None,
              help="Also tabulate Ext dimensions of the degree-zero part up to this degree.")
@click.option("--abar", is_flag=True, help="Report the reduction modulo the radical of the degree-zero part.")
def koszul_cmd(input_path, depth, degree, oracle_path, pretty, timing, ext_smax, abar):
    """Bounded Koszulity of a graded algebra and of its skew group algebra."""
    run("koszul", input_path, pretty, timing, lambda prob: koszul_body(prob, degree, ext_smax, abar))


if __name__ == "__main__":  # pragma: no cover
    main()
