"""Tunable desk-scale limits, overridable via a JSON config file.

The environment variable GENLAT_CONFIG may point at a JSON object whose
keys match the dataclass fields below.
"""

import json
import os
from dataclasses import dataclass, fields, replace

ENV_VAR = "GENLAT_CONFIG"


@dataclass(frozen=True)
class BuildLimits:
    growth_cap: int = 200  # max stage size before the builder stops
    schedule_set_cap: int = 8000  # closed sets visited per stage when scheduling
    automorphism_cap: int = 64  # orbit dedup uses Aut(C_n) only below this
    witness_node_budget: int = 50_000  # backtracking nodes for witness searches
    product_materialize_cap: int = 2048  # product completions built as tables below this
    poly_depth: int = 3  # polynomial interpolation search depth
    poly_vector_cap: int = 100_000  # distinct evaluation vectors per stage
    census_max: int = 7  # hard bound for lattice enumeration


def load_limits(path=None):
    """Limits from an explicit path, from $GENLAT_CONFIG, or the defaults."""
    limits = BuildLimits()
    if path is None:
        path = os.environ.get(ENV_VAR)
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        known = {f.name for f in fields(BuildLimits)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        limits = replace(limits, **raw)
    return limits
