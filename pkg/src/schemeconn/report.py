"""Per-relation analysis reports and the parallel survey harness.

Reports are plain dicts with a stable field order so serialized output is
byte-identical run to run.  The survey fans (scheme, relation) tasks over a
process pool; workers return report dicts and the parent writes everything
in canonical order, so the output does not depend on the schedule.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import comb
from typing import Optional

import numpy as np

from . import audits
from .connectivity import (CutReport, edge_connectivity, enumerate_min_cuts,
                           twins, vertex_connectivity)
from .diagram import distribution_diagram, h_prime_connected, \
    p_polynomial_generator
from .errors import (CapExceeded, DetectorDisagreement, Disconnected,
                     HypothesisNotMet, HypothesisViolation)
from .scheme import (SchemeDescriptor, is_complete_multipartite,
                     relation_graph, symmetrized_scheme)
from .spectral import (SpectralData, compute_spectral, primitivity,
                       second_eigenvalue, spec_cut_audit)

TOOL_VERSION = "0.1.0"


@dataclass(frozen=True)
class AnalysisConfig:
    seed: int = audits.DEFAULT_SEED
    grouping_tol: float = 1e-9
    qp_tol: float = 1e-8
    column_tol: float = 1e-8
    multiplicity_tol: float = 1e-6
    clique_cap: int = 100_000
    cut_enum_budget: int = 200_000
    spectral_max_v: int = 1024

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_CONFIG = AnalysisConfig()


def _fmt(x: float) -> str:
    # 12 significant digits; -0.0 normalized so output is reproducible
    if x == 0.0:
        x = 0.0
    return f"{x:.12g}"


def _matrix_strings(m: np.ndarray) -> list[list[str]]:
    return [[_fmt(float(x)) for x in row] for row in m]


def spectral_section(scheme: SchemeDescriptor, spectral: SpectralData,
                     config: AnalysisConfig = DEFAULT_CONFIG) -> dict:
    """Scheme-level spectral block shared by every relation report."""
    v = scheme.v
    qp = spectral.q @ spectral.p
    resid = float(np.abs(qp - v * np.eye(scheme.d + 1)).max())
    rowsum = float(np.abs(spectral.q[1:, :].sum(axis=1)).max()) \
        if scheme.d >= 1 else 0.0
    findings = []
    if resid >= config.qp_tol:
        findings.append(f"QP=vI residual {resid:.3e} over {config.qp_tol}")
    if rowsum >= config.qp_tol:
        findings.append(f"Q row sum residual {rowsum:.3e}")
    traces = [float(np.trace(e)) for e in spectral.idempotents]
    for j, tr in enumerate(traces):
        if abs(tr - round(tr)) > config.multiplicity_tol or round(tr) <= 0:
            findings.append(f"trace(E_{j}) = {tr!r} is not a positive integer")
    if sum(spectral.multiplicities) != v:
        findings.append("multiplicities do not sum to v")
    try:
        verdict = primitivity(scheme, spectral)
        prim = {
            "primitive": verdict.primitive,
            "disconnected_relations": list(verdict.disconnected_relations),
            "repeated_column_idempotents":
                list(verdict.repeated_column_idempotents),
        }
    except DetectorDisagreement as e:
        prim = {"primitive": None, "error": str(e)}
        findings.append(f"primitivity detectors disagree: {e}")
    return {
        "multiplicities": list(spectral.multiplicities),
        "P": _matrix_strings(spectral.p),
        "Q": _matrix_strings(spectral.q),
        "qp_residual": _fmt(resid),
        "q_rowsum_residual": _fmt(rowsum),
        "primitivity": prim,
        "findings": findings,
    }


def analyze_relation(scheme: SchemeDescriptor, i: int,
                     config: AnalysisConfig = DEFAULT_CONFIG,
                     spectral: Optional[SpectralData] = None,
                     spectral_block: Optional[dict] = None,
                     symmetrized: bool = False) -> dict:
    """Full audit report for one basis relation.  `spectral`/
    `spectral_block` can be shared across the relations of one scheme."""
    graph = relation_graph(scheme, i)
    v = scheme.v
    v1 = int(scheme.valencies[i])
    connected = graph.is_connected()
    complete = graph.is_complete()
    findings: list[str] = []
    skipped: list[str] = []

    diameter = graph.diameter()
    twin_count = len(twins(graph).pairs)
    hp = h_prime_connected(distribution_diagram(scheme, i))
    bound = Fraction(v1 * v, 2 * (v - 1))

    kappa = lam = None
    whitney_ok = godsil_ok = conjecture_ok = None
    if connected and v >= 2:
        kappa = vertex_connectivity(graph)
        lam = edge_connectivity(graph)
        whitney_ok = kappa <= lam <= v1
        godsil_ok = Fraction(lam) >= bound
        conjecture_ok = kappa == lam == v1
        if not whitney_ok:
            findings.append(f"whitney chain fails: {kappa} <= {lam} <= {v1}")
        if not godsil_ok:
            findings.append(f"edge connectivity {lam} below bound {bound}")
        if not conjecture_ok:
            findings.append(
                f"connectivity conjecture counterexample: kappa={kappa} "
                f"lambda={lam} valency={v1}")
    else:
        skipped.append("connectivity: disconnected relation")

    try:
        t1 = audits.theorem1_audit(scheme, i)
        theorem1 = {
            "status": "ok",
            "exists_a_connected": t1.exists_a_connected,
            "forall_a_connected": t1.forall_a_connected,
            "h_prime_connected": t1.h_prime_connected,
            "twin_free": t1.twin_free,
            "equivalent": t1.equivalent,
            "disconnected_basepoints": t1.disconnected_basepoints,
        }
        if not t1.equivalent:
            findings.append("theorem1 conditions disagree")
    except HypothesisViolation as e:
        theorem1 = {"status": "skipped", "reason": e.reason}
        skipped.append(f"theorem1: {e.reason}")

    try:
        ca = audits.corollary_audits(scheme, i, kappa=kappa, seed=config.seed)
        corollaries = {
            "status": "ok",
            "c1_ok": ca.c1_ok, "c2_ok": ca.c2_ok, "c3_ok": ca.c3_ok,
            "c1_mode": ca.c1_mode, "c1_checked": ca.c1_checked,
            "c3_clique_count": ca.c3_clique_count, "c3_capped": ca.c3_capped,
            "seed": ca.seed,
        }
        for tag, ok, wit in (("C1", ca.c1_ok, ca.c1_witness),
                             ("C2", ca.c2_ok, ca.c2_witness),
                             ("C3", ca.c3_ok, ca.c3_witness)):
            if not ok:
                findings.append(f"corollary {tag} fails: witness {wit}")
    except Disconnected:
        corollaries = {"status": "skipped", "reason": "disconnected"}
        skipped.append("corollaries: disconnected")
    except CapExceeded as e:
        corollaries = {"status": "skipped", "reason": str(e)}
        skipped.append(f"corollaries: {e}")

    dec = audits.iuw_decompose(scheme, i, 0)
    iuw = {
        "h_prime_connected": dec.h_prime_connected,
        "i_classes": list(dec.i_classes),
        "u_classes": list(dec.u_classes),
        "w_classes": list(dec.w_classes),
        "sizes": [len(dec.i_vertices), len(dec.u_vertices),
                  len(dec.w_vertices)],
    }

    if connected:
        we = audits.w_empty_audit(scheme, i)
        w_empty = {
            "status": "ok",
            "ok": we.ok,
            "w_classes": list(we.w_classes),
            "distance2_ok": we.distance2_ok,
            "distance2_vacuous": we.distance2_vacuous,
        }
        if not we.ok:
            findings.append(f"W classes nonempty on connected relation: "
                            f"{we.w_classes}")
        if not we.distance2_ok:
            findings.append(f"U_a vertex not at distance 2: "
                            f"{we.distance2_witness}")
    else:
        w_empty = {"status": "skipped", "reason": "disconnected"}
        skipped.append("w_empty: disconnected")

    if connected:
        sc = audits.small_cut_theorems_audit(scheme, i, kappa=kappa)
        small_cut = {
            "status": "ok",
            "tcut2_applicable": sc.tcut2_applicable, "tcut2_ok": sc.tcut2_ok,
            "tdiam2_applicable": sc.tdiam2_applicable,
            "tdiam2_ok": sc.tdiam2_ok,
            "tdiam2_best_t": sc.tdiam2_best_t,
            "tdiam2_t_equals_valency": sc.tdiam2_t_equals_valency,
            "tcut3_applicable": sc.tcut3_applicable, "tcut3_ok": sc.tcut3_ok,
            "tcut3_match": sc.tcut3_match,
        }
        for tag, app, ok in (("size-2 cut", sc.tcut2_applicable, sc.tcut2_ok),
                             ("diameter-2 bound", sc.tdiam2_applicable,
                              sc.tdiam2_ok),
                             ("size-3 classification", sc.tcut3_applicable,
                              sc.tcut3_ok)):
            if app and not ok:
                findings.append(f"small-cut theorem fails: {tag}")
    else:
        small_cut = {"status": "skipped", "reason": "disconnected"}
        skipped.append("small_cut: disconnected")

    min_cut_count = None
    min_cuts_are_neighborhoods = None
    if connected and not complete and kappa is not None:
        if comb(v, kappa) <= config.cut_enum_budget:
            mc = enumerate_min_cuts(graph, budget=config.cut_enum_budget)
            min_cut_count = len(mc.cuts)
            min_cuts_are_neighborhoods = mc.all_neighborhoods
        else:
            skipped.append("min cut enumeration: over budget")

    if connected:
        bd = audits.ball_deletion_audit(scheme, i, 1)
        ball = {
            "status": "ok", "t": 1,
            "h_minus_ball_connected": bd.h_minus_ball_connected,
            "triggered_basepoints": bd.triggered_basepoints,
            "part_a_ok": bd.part_a_ok, "part_b_ok": bd.part_b_ok,
        }
        if not bd.part_a_ok:
            findings.append(f"ball deletion part (a) fails: {bd.part_a_witness}")
        if not bd.part_b_ok:
            findings.append(f"ball deletion part (b) fails: {bd.part_b_witness}")
    else:
        ball = {"status": "skipped", "reason": "disconnected"}

    if spectral_block is None and scheme.v <= config.spectral_max_v:
        if spectral is None:
            spectral = compute_spectral(scheme, grouping_tol=config.grouping_tol)
        spectral_block = spectral_section(scheme, spectral, config)
    if spectral_block is not None:
        spec = dict(spectral_block)
        findings.extend(spec.pop("findings"))
        prim = spec.get("primitivity", {})
        if twin_count > 0 and prim.get("primitive") is True:
            findings.append("twins present but scheme judged primitive")
        if connected and spectral is not None:
            theta = second_eigenvalue(scheme, spectral, i)
            spec["second_eigenvalue"] = _fmt(theta)
            cm = is_complete_multipartite(graph)
            spec["second_eigenvalue_positive"] = bool(theta > 1e-6)
            if not cm and theta <= 1e-6:
                findings.append(
                    f"second eigenvalue {theta!r} not positive on "
                    f"non-complete-multipartite relation")
        else:
            spec["second_eigenvalue"] = None
            spec["second_eigenvalue_positive"] = None
        if connected and kappa is not None:
            report_for_cut = CutReport(
                kappa=kappa, lam=lam, valency=v1, complete=complete,
                whitney_ok=bool(whitney_ok), godsil_bound=bound,
                godsil_ok=bool(godsil_ok), min_cut_count=min_cut_count,
                min_cuts_are_neighborhoods=min_cuts_are_neighborhoods,
                min_cuts=None)
            try:
                sca = spec_cut_audit(scheme, i, report_for_cut)
                spec["cut_size_lemma"] = {
                    "applicable": True, "ok": sca.ok,
                    "p_local": sca.p_local, "slack": sca.slack,
                }
                if not sca.ok:
                    findings.append(
                        f"cut-size lemma fails: kappa {sca.kappa} <= "
                        f"p_local {sca.p_local}")
            except HypothesisNotMet as e:
                spec["cut_size_lemma"] = {"applicable": False,
                                          "reason": str(e)}
        else:
            spec["cut_size_lemma"] = {"applicable": False,
                                      "reason": "disconnected"}
    else:
        spec = {"status": "skipped", "reason": "scheme too large"}
        skipped.append("spectral: scheme too large")

    return {
        "scheme": scheme.name,
        "relation": i,
        "v": v,
        "d": scheme.d,
        "valency": v1,
        "connected": connected,
        "complete": complete,
        "symmetrized": symmetrized,
        "diameter": diameter,
        "kappa": kappa,
        "lambda": lam,
        "godsil_bound_num": bound.numerator,
        "godsil_bound_den": bound.denominator,
        "whitney_ok": whitney_ok,
        "godsil_ok": godsil_ok,
        "conjecture_ok": conjecture_ok,
        "twin_pairs": twin_count,
        "h_prime_connected": hp,
        "theorem1": theorem1,
        "corollaries": corollaries,
        "iuw": iuw,
        "w_empty": w_empty,
        "small_cut": small_cut,
        "min_cut_count": min_cut_count,
        "min_cuts_are_neighborhoods": min_cuts_are_neighborhoods,
        "ball_deletion": ball,
        "spectral": spec,
        "p_polynomial_generator": p_polynomial_generator(scheme, i),
        "findings": findings,
        "skipped": skipped,
        "ok": not findings,
        "tool_version": TOOL_VERSION,
        "config": config.as_dict(),
    }


def analyze_scheme(scheme: SchemeDescriptor, relations=None,
                   config: AnalysisConfig = DEFAULT_CONFIG,
                   symmetrize: bool = True) -> list[dict]:
    """Reports for the chosen relations (default: all nontrivial ones).
    Non-symmetric schemes are symmetrized first when allowed."""
    symmetrized = False
    if not scheme.symmetric:
        if not symmetrize:
            raise ValueError("scheme is not symmetric; enable symmetrization")
        scheme = symmetrized_scheme(scheme)
        symmetrized = True
    if relations is None:
        relations = list(range(1, scheme.d + 1))
    spectral = None
    block = None
    if scheme.v <= config.spectral_max_v:
        spectral = compute_spectral(scheme, grouping_tol=config.grouping_tol)
        block = spectral_section(scheme, spectral, config)
    return [analyze_relation(scheme, i, config=config, spectral=spectral,
                             spectral_block=block, symmetrized=symmetrized)
            for i in relations]


# -- survey --------------------------------------------------------------

def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _survey_task(arg):
    """Worker: build one scheme and analyze the requested relations."""
    idx, source, relations, config = arg
    from .catalog import build_family, load_scheme
    try:
        if source[0] == "file":
            scheme = load_scheme(source[1])
        else:
            scheme = build_family(source[0], tuple(source[1]))
        reports = analyze_scheme(scheme, relations=relations, config=config)
        return idx, scheme.name, reports, None
    except Exception as e:                      # noqa: BLE001 - fail-isolated
        return idx, None, [], f"{type(e).__name__}: {e}"


def run_survey(entries, out_dir: str, jobs: int = 1,
               config: AnalysisConfig = DEFAULT_CONFIG) -> dict:
    """entries: list of (source, relations) where source is ("file", path)
    or (family_kind, params); relations is None for all.  Writes one JSON
    per (scheme, relation) plus summary.json; output is byte-identical for
    any jobs value."""
    os.makedirs(out_dir, exist_ok=True)
    tasks = [(idx, source, relations, config)
             for idx, (source, relations) in enumerate(entries)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_survey_task, tasks))
    else:
        results = [_survey_task(t) for t in tasks]
    results.sort(key=lambda r: r[0])

    audits_run = audits_passed = audits_skipped = 0
    counterexamples = []
    all_findings = []
    errors = []
    n_reports = 0
    for idx, name, reports, err in results:
        if err is not None:
            errors.append({"entry": idx, "error": err})
            continue
        for rep in reports:
            n_reports += 1
            path = os.path.join(out_dir, f"{name}-r{rep['relation']}.json")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(_dump(rep))
            for section in ("theorem1", "corollaries", "w_empty",
                            "small_cut", "ball_deletion"):
                st = rep[section].get("status")
                if st == "ok":
                    audits_run += 1
                elif st == "skipped":
                    audits_skipped += 1
            if rep["conjecture_ok"] is False:
                counterexamples.append(
                    {"scheme": name, "relation": rep["relation"],
                     "kappa": rep["kappa"], "lambda": rep["lambda"],
                     "valency": rep["valency"]})
            if rep["findings"]:
                all_findings.append({"scheme": name,
                                     "relation": rep["relation"],
                                     "findings": rep["findings"]})
            else:
                audits_passed += 1
    summary = {
        "tool_version": TOOL_VERSION,
        "config": config.as_dict(),
        "entries": len(tasks),
        "reports": n_reports,
        "audit_sections_run": audits_run,
        "audit_sections_skipped": audits_skipped,
        "reports_clean": audits_passed,
        "counterexamples": counterexamples,
        "findings": all_findings,
        "errors": errors,
        "ok": not counterexamples and not all_findings and not errors,
    }
    with open(os.path.join(out_dir, "summary.json"), "w",
              encoding="utf-8") as fh:
        fh.write(_dump(summary))
    return summary


def builtin_entries() -> list[tuple]:
    """(source, relations) pairs for the whole built-in catalog."""
    from .catalog import BUILTIN_FAMILIES
    return [((kind, params), None) for kind, params in BUILTIN_FAMILIES]
