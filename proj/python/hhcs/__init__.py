"""Hadamard-Haar compressive sensing: transforms, coherence, sampling and recovery."""

import json

from ._hhcs import (
    Error,
    __version__,
    apply_basis,
    default_config,
    dense_basis,
    draw_sample,
    effective_sparsity,
    fwht,
    generate,
    levels,
    local_coherence,
    mds_allocate,
    me_reconstruct,
    measure,
    multilevel_coherence,
    preset,
    solve_bpdn,
    structure_check,
    vds_pmf,
)
from ._hhcs import run_experiment as _run_experiment


def run_experiment(config, threads=1):
    """Run an experiment from a config dict or JSON string; returns one dict per ratio."""
    if not isinstance(config, str):
        config = json.dumps(config)
    return _run_experiment(config, threads)


__all__ = [
    "Error",
    "__version__",
    "apply_basis",
    "default_config",
    "dense_basis",
    "draw_sample",
    "effective_sparsity",
    "fwht",
    "generate",
    "levels",
    "local_coherence",
    "mds_allocate",
    "me_reconstruct",
    "measure",
    "multilevel_coherence",
    "preset",
    "run_experiment",
    "solve_bpdn",
    "structure_check",
    "vds_pmf",
]
