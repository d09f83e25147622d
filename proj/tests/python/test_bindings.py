import math

import numpy as np
import pytest

import henon_lab as hl


def test_constants():
    assert hl.hardy_constant(3, 0.5) == pytest.approx(2 / math.pi, rel=1e-12)
    assert hl.power_symbol(3, 0.5, 0.5) == pytest.approx(0.5, rel=1e-12)
    assert hl.critical_exponent(3, 0.5, 0.0) == pytest.approx(2.0)
    p = hl.Params(3, 0.5)
    assert p.p == pytest.approx(2.0)
    assert hl.A_via_integral(p) == pytest.approx(2 / math.pi, rel=1e-6)


def test_invalid_params():
    with pytest.raises(ValueError):
        hl.Params(3, 1.5)


def test_operator_and_symbol():
    p = hl.Params(3, 0.5)
    grid = hl.LogGrid(12.0, 301)
    T = hl.assemble_T(p, grid)
    assert T.shape == (301, 301)
    assert np.allclose(T, T.T)
    assert hl.symbol_error(p, grid, [0.0, 0.5]) < 1e-3


def test_bubble():
    grid = hl.LogGrid(14.0, 601)
    gs = hl.solve_ground_state(hl.Params(3, 0.5, 0.0, 2.0), grid)
    assert gs["residual"] < 1e-6
    assert np.max(np.abs(gs["Q"] - 1 / np.cosh(gs["kappa"]))) < 1e-3


def test_spectrum():
    rep = hl.spectrum(hl.Params(3, 0.5), hl.LogGrid(14.0, 601), k=3)
    assert rep["morse_index"] == 1
    assert rep["even"][0]["value"] < 0
    assert abs(min((e["value"] for e in rep["odd"]), key=abs)) < 1e-3 * abs(rep["even"][0]["value"])


def test_branch_and_soliton():
    grid = hl.LogGrid(14.0, 601)
    b = hl.continue_branch(3, 3.0, 0.9, 0.999, grid)
    assert b["reached_end"]
    assert all(pt["morse_index_even"] == 1 for pt in b["points"])
    sol = hl.endpoint_soliton(3.0, 0.25, grid)
    assert sol.max() == pytest.approx(math.sqrt(0.5), rel=1e-6)
    dist = math.sqrt(grid.h * np.sum((sol - b["points"][-1]["Q"]) ** 2))
    assert dist < 1e-2
