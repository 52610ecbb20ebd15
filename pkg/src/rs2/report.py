"""Deterministic JSON reports and versioned CSV summaries.

Reports must be byte-identical across repeated runs, so they carry no wall
time or host information; keys are sorted and all numbers are exact (means
serialize as numerator/denominator pairs).
"""

from __future__ import annotations

import json
from typing import Optional

from .graph import Graph, verify_ruling_set
from .linear import LinearRunResult
from .sublinear import SublinearRunResult

REPORT_SCHEMA = "rs2-report-1"
CSV_SCHEMA = "rs2-csv-1"
CSV_COLUMNS = (
    "schema",
    "algorithm",
    "n",
    "m",
    "delta",
    "total_rounds",
    "core_rounds",
    "mis_rounds",
    "set_size",
    "valid",
    "c_edges",
    "eps_prime",
    "c_cap",
    "error",
)


def _seed_step(stage: str, rep, spec_p: int, spec_k: int) -> dict:
    d = rep.to_dict()
    d.update({"stage": stage, "p": spec_p, "k": spec_k})
    return d


def linear_report(g: Graph, result: LinearRunResult, params, algorithm: str = "linear") -> dict:
    samp_spec, mis_spec = params.specs_for(g.n)
    steps = []
    for it in result.iterations:
        steps.append(_seed_step(f"iter{it.index}-sampling", it.sampling, samp_spec.p, samp_spec.k))
        steps.append(_seed_step(f"iter{it.index}-mis", it.mis, mis_spec.p, mis_spec.k))
    return {
        "schema": REPORT_SCHEMA,
        "algorithm": algorithm,
        "graph": {"n": g.n, "m": g.m, "max_degree": g.max_degree()},
        "params": {
            "epsilon": [params.epsilon.numerator, params.epsilon.denominator],
            "d0_exp": params.d0_exp,
            "k_sample": samp_spec.k,
            "k_mis": mis_spec.k,
            "max_iter": params.max_iter,
        },
        "ruling_set": {"size": len(result.members), "members": sorted(result.members)},
        "valid": result.valid,
        "derand_steps": steps,
        "survival_tables": [
            {"before": {str(k): v for k, v in t["before"].items()},
             "after": {str(k): v for k, v in t["after"].items()}}
            for t in result.survival_table
        ],
        "iterations": [
            {
                "index": it.index,
                "v_star_size": it.v_star_words,
                "degree_sum_v_star": it.degree_sum_v_star,
                "mis_size": it.mis_size,
                "removed": it.removed,
                "x_d": {str(k): v for k, v in it.x_d.items()},
                "bad_star_ok": it.bad_star_ok,
            }
            for it in result.iterations
        ],
        "constants": {
            "c_edges": result.c_edges,
            "eps_prime": result.eps_prime,
            "residual_words": result.residual_words,
        },
        "ledger": result.ledger.to_dict(),
    }


def sublinear_report(g: Graph, result: SublinearRunResult, params, algorithm: str = "sublinear") -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "algorithm": algorithm,
        "graph": {"n": g.n, "m": g.m, "max_degree": g.max_degree()},
        "params": {"alpha": params.alpha, "f": result.f, "c_cap": result.c_cap,
                   "eps_hd": [params.eps_hd.numerator, params.eps_hd.denominator]},
        "ruling_set": {"size": len(result.members), "members": sorted(result.members)},
        "valid": result.valid,
        "classes": [
            {
                "index": c.index,
                "class_lo": c.class_lo,
                "class_hi": c.class_hi,
                "u_size": c.u_size,
                "removed": c.removed,
                "k_steps": c.sparsify.k_steps if c.sparsify else None,
                "c_cap": c.sparsify.c_cap if c.sparsify else None,
            }
            for c in result.classes
        ],
        "constants": {"f": result.f, "c_cap": result.c_cap, "mis_rounds": result.mis_rounds,
                      "core_rounds": result.core_rounds},
        "ledger": result.ledger.to_dict(),
    }


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def write_json(path: str, report: dict) -> None:
    with open(path, "w") as fh:
        fh.write(render_json(report))


def reverify(g: Graph, report: dict) -> bool:
    """Recompute the verdict from the serialized set; must match 'valid'."""
    return verify_ruling_set(g, report["ruling_set"]["members"], beta=2).valid == report["valid"]


def csv_header() -> str:
    return ",".join(CSV_COLUMNS)


def csv_row(
    algorithm: str,
    g: Graph,
    *,
    total_rounds: int = 0,
    core_rounds: int = 0,
    mis_rounds: int = 0,
    set_size: int = 0,
    valid: bool = False,
    c_edges: Optional[float] = None,
    eps_prime: Optional[float] = None,
    c_cap: Optional[int] = None,
    error: str = "",
) -> str:
    vals = {
        "schema": CSV_SCHEMA,
        "algorithm": algorithm,
        "n": g.n,
        "m": g.m,
        "delta": g.max_degree(),
        "total_rounds": total_rounds,
        "core_rounds": core_rounds,
        "mis_rounds": mis_rounds,
        "set_size": set_size,
        "valid": int(valid),
        "c_edges": "" if c_edges is None else f"{c_edges:.6g}",
        "eps_prime": "" if eps_prime is None else f"{eps_prime:.6g}",
        "c_cap": "" if c_cap is None else c_cap,
        "error": error.replace(",", ";"),
    }
    return ",".join(str(vals[c]) for c in CSV_COLUMNS)


def result_to_csv_row(algorithm: str, g: Graph, result) -> str:
    if isinstance(result, LinearRunResult):
        return csv_row(
            algorithm,
            g,
            total_rounds=result.ledger.total_rounds,
            core_rounds=result.ledger.total_rounds,
            set_size=len(result.members),
            valid=result.valid,
            c_edges=result.c_edges if result.iterations else None,
            eps_prime=result.eps_prime,
        )
    if isinstance(result, SublinearRunResult):
        return csv_row(
            algorithm,
            g,
            total_rounds=result.ledger.total_rounds,
            core_rounds=result.core_rounds,
            mis_rounds=result.mis_rounds,
            set_size=len(result.members),
            valid=result.valid,
            c_cap=result.c_cap,
        )
    raise TypeError(f"unknown result type {type(result)!r}")
