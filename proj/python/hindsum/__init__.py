"""Finite approximations of idempotent ultrafilters on the naturals."""

import json as _json

from hindsum._core import (  # noqa: F401
    Coloring,
    EngineError,
    Filter,
    Horizon,
    Verdict,
    VerdictRecord,
    extract_tail,
    frechet,
    fs_sums,
    hat_monotone,
    k_prime,
    member,
    run_program_json,
    solve_ht,
    solve_iht,
    star_set,
    translate_down,
)


def run_program(text, **kwargs):
    """Run a program text through staged elimination.

    Keyword arguments mirror the CLI flags: ss, horizon, min_tail,
    trans_bound, param_range, max_nodes.  Returns the trace document as a
    dict with config, stages, final, goal, reports, and (for ss) tails.
    """
    return _json.loads(run_program_json(text, **kwargs))


__all__ = [
    "Coloring",
    "EngineError",
    "Filter",
    "Horizon",
    "Verdict",
    "VerdictRecord",
    "extract_tail",
    "frechet",
    "fs_sums",
    "hat_monotone",
    "k_prime",
    "member",
    "run_program",
    "run_program_json",
    "solve_ht",
    "solve_iht",
    "star_set",
    "translate_down",
]
