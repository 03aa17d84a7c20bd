"""Exciton counting by spectral flow of the vertex-scattering loop."""

import json

from ._core import (
    Crossing,
    EigenphaseTrace,
    ExcitonError,
    IndexReport,
    Instance,
    Tolerances,
    TrigPhase,
    UnitaryLoop,
    dense_scan_crossings,
    diagonal_loop,
    index_report,
    load_instance,
    long_arm_sweep,
    monomial_loop,
    multiplicity_at,
    parse_instance,
    random_instance,
    trace_eigenphases,
    winding_number,
)


def report_dict(loop, **kwargs):
    """index_report(loop) as plain Python data, same layout as the CLI JSON."""
    return json.loads(index_report(loop, **kwargs).to_json())


__all__ = [name for name in dir() if not name.startswith("_")]
