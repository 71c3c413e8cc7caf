"""Convex-hull relaxations of mixed-integer multilinear functions."""

import json as _json

from ._core import (
    BenchError,
    Formulation,
    Instance,
    IoError,
    LinearModel,
    ModelError,
    RelaxationError,
    build_relaxed_milp,
    compare_models,
    generate_instance,
    instance_from_json,
    instance_to_json,
    lp_gap,
    read_mps,
    run_single,
    sample_term_bounds,
    solve_lp,
    solve_milp,
    write_mps,
)
from ._core import check_projection_conjecture as _check_projection_conjecture


def check_projection_conjecture(bounds, num_binaries, directions=100, seed=1,
                                formulation=Formulation.FLAMBDA):
    """Hull probe report as a dict."""
    text = _check_projection_conjecture(list(bounds), num_binaries, directions, seed, formulation)
    return _json.loads(text)


__all__ = [
    "BenchError",
    "Formulation",
    "Instance",
    "IoError",
    "LinearModel",
    "ModelError",
    "RelaxationError",
    "build_relaxed_milp",
    "check_projection_conjecture",
    "compare_models",
    "generate_instance",
    "instance_from_json",
    "instance_to_json",
    "lp_gap",
    "read_mps",
    "run_single",
    "sample_term_bounds",
    "solve_lp",
    "solve_milp",
    "write_mps",
]
