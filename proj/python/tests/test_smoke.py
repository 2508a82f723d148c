import math

import numpy as np
import pytest

import dhym


def test_theta_and_f0():
    assert dhym.theta([1.0, 1.0]) == pytest.approx(math.pi / 2, abs=1e-15)
    assert dhym.f0([3.0, 1.0], math.pi / 2) == pytest.approx(2 - math.sqrt(2), abs=1e-12)


def test_relative_eigenvalues_sorted_descending():
    lam = dhym.relative_eigenvalues(np.eye(2), np.diag([-1.0, 3.0]))
    assert lam == pytest.approx([3.0, -1.0])


def test_subsolution_forms_agree():
    a = dhym.c_subsolution_test([5.0, 0.0], math.pi / 2 + 0.1)
    assert a["is_subsolution"] is False
    assert a["slack"] == pytest.approx(-0.1, abs=1e-12)
    assert dhym.form_positivity_test([5.0, 0.0], math.pi / 2 + 0.1)["positive"] is False
    assert dhym.argument_pairing_test([1.0, 1.0], math.pi / 2, 1)["passes"] is True


def test_input_error_maps_to_value_error():
    with pytest.raises(ValueError):
        dhym.c_subsolution_test([1.0, 1.0], -0.1)


def test_manufactured_solve():
    N = 64
    x = np.arange(N) / N
    ustar = 0.3 * np.cos(2 * math.pi * x)
    h = dhym.theta_field(ustar, np.eye(1))
    r = dhym.solve(h, np.eye(1))
    assert r["report"]["converged"]
    assert np.max(np.abs(r["u"] - ustar)) <= 1e-8


def test_continuity_n2():
    N = 16
    x1, x2 = np.meshgrid(np.arange(N) / N, np.arange(N) / N, indexing="ij")
    chi = 0.03 * np.cos(2 * math.pi * x1) + 0.02 * np.sin(2 * math.pi * (x1 + x2))
    r = dhym.run_continuity(chi, np.eye(2))
    assert r["success"]
    assert r["u"].shape == (N, N)
    assert -1e-8 <= -r["c1"] <= -r["b1"] + 1e-8


def test_stability_example():
    data = {"n": 2, "m": [2, 1, 0], "subvarieties": [{"label": "C", "dim": 1, "v": [1, -2]}]}
    r = dhym.stability_check(data)
    assert r["theta_x"] == pytest.approx(math.pi / 4)
    assert r["all_stable"] is False
    assert r["subvarieties"][0]["margin"] == pytest.approx(-(math.pi / 4 - abs(math.atan(2) - math.pi / 2)))
    assert dhym.central_charge([1.0, 1.0], 1) == pytest.approx(complex(-1.0, 1.0))
