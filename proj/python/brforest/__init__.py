"""Random forests with adjustable bootstrap rates.

Thin wrapper over the C++ core: forest fitting/prediction, the
expected-distinct closed forms, synthetic generators, dataset
characterization metrics, statistical tests, and the BR sweep harness.
"""

import json as _json

from ._brforest import (
    DomainError,
    Forest,
    bootstrap_sample_size,
    characterize,
    cohens_d,
    expected_distinct,
    expected_distinct_limit,
    fit,
    gen_pure_noise,
    gen_regions,
    mann_whitney,
    paired_t,
    preset_names,
    spearman,
)
from ._brforest import sweep as _sweep_json


def sweep(x, y, *, configs, br_values=(), folds=2, repeats=50, seed=0, threads=1):
    """Run the repeated-CV bootstrap-rate sweep; returns a dict."""
    return _json.loads(
        _sweep_json(
            x,
            y,
            configs=list(configs),
            br_values=list(br_values),
            folds=folds,
            repeats=repeats,
            seed=seed,
            threads=threads,
        )
    )


__all__ = [
    "DomainError",
    "Forest",
    "bootstrap_sample_size",
    "characterize",
    "cohens_d",
    "expected_distinct",
    "expected_distinct_limit",
    "fit",
    "gen_pure_noise",
    "gen_regions",
    "mann_whitney",
    "paired_t",
    "preset_names",
    "spearman",
    "sweep",
]
