import math
import pathlib

import numpy as np
import pytest

import exciton_index as ei

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


def test_path_report():
    loop = ei.load_instance(DATA / "path.json").loop()
    assert loop.kind == "graph-backed"
    assert loop.dimension == 2
    r = ei.index_report(loop)
    assert (r.alpha, r.q, r.m, r.d0, r.dpi, r.N, r.lower_bound) == (6, 6, 6, -2, 2, 3, 6)
    ks = [c.k_star for c in r.crossings]
    assert ks == pytest.approx([math.pi / 3, math.pi, 5 * math.pi / 3], abs=1e-8)
    assert all(c.multiplicity == 2 for c in r.crossings)


def test_eval_is_unitary():
    loop = ei.random_instance(3).loop()
    u = loop.eval(0.7)
    assert u.dtype == np.complex128
    assert np.allclose(u @ u.conj().T, np.eye(loop.dimension), atol=1e-10)
    h = 1e-6
    fd = (loop.eval(0.7 + h) - loop.eval(0.7 - h)) / (2 * h)
    assert np.abs(fd - loop.derivative(0.7)).max() < 1e-7


def test_diagonal_and_tangential():
    assert ei.winding_number(ei.monomial_loop([2, 3])) == 5
    touch = ei.diagonal_loop([ei.TrigPhase(0, 1.0, cosines=[-1.0])])
    d = ei.report_dict(touch)
    assert d["alpha"] == 0 and d["m"] == 1
    assert d["crossings"][0]["iota"] == 0


def test_trace_total():
    loop = ei.monomial_loop([1, -3, 2])
    trace = ei.trace_eigenphases(loop)
    assert trace.grid[0] == 0.0
    assert len(trace.branches) == 3
    assert trace.total_increment == pytest.approx(0.0, abs=1e-9)


def test_round_trip_and_errors():
    inst = ei.random_instance(11)
    assert ei.parse_instance(inst.to_json()) == inst
    with pytest.raises(ei.ExcitonError) as err:
        ei.load_instance(DATA / "bad_constant.json")
    assert err.value.kind == "ParseError"
    assert err.value.exit_code == 1
    with pytest.raises(ei.ExcitonError) as err:
        ei.index_report(ei.load_instance(DATA / "degenerate.json").loop())
    assert err.value.kind == "DiscretenessViolated"


def test_sweep_and_oracle():
    loop = ei.load_instance(DATA / "star_k_dependent.json").loop()
    rows = ei.long_arm_sweep(loop, [1, 2])
    assert [r[0] for r in rows] == [1, 2]
    assert all(r[4] >= 0 for r in rows)
    star = ei.load_instance(DATA / "star.json").loop()
    assert sum(m for _, m in ei.dense_scan_crossings(star, 20000)) == 12
