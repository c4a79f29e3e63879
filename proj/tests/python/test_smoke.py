# SPDX-License-Identifier: Apache-2.0
import math
import os

import numpy as np
import pytest

import masc


def test_version_and_figures():
    assert masc.__version__
    assert "pareto_fronts" in masc.figure_names()


def test_config_roundtrip():
    cfg = masc.parse_config("dust.preset = severe\nseed.master = 5\n")
    assert cfg.dust_preset == "severe"
    assert cfg.master_seed == 5
    again = masc.parse_config(cfg.canonical_text())
    assert again.hash() == cfg.hash()
    with pytest.raises(ValueError):
        masc.parse_config("no.such.key = 1\n")


def test_propagation_values():
    x = 4 * math.pi * 400e3 / 0.15
    assert masc.fspl_one_way(400e3, 0.15) == pytest.approx(x * x, rel=1e-14)
    assert masc.dust_alpha_db_per_km("severe", 0.15) == pytest.approx(1.395e-3, rel=1e-3)
    assert masc.fresnel_reflection(4.0, 0.0) == pytest.approx(1.0 / 3.0)
    assert masc.upa_array_factor(0.0, 0.3, 0.15) == pytest.approx(10 ** 2.8, rel=1e-12)
    assert masc.map_doppler_sens_to_comm(40280.0, 1.0, 0.15) == pytest.approx(20126.6667, rel=1e-6)


def test_bounds():
    assert masc.crlb_alpha(1.0, 1, 1.0) == pytest.approx(0.125)
    assert masc.crlb_doppler(10.0, 100, 1.0) == pytest.approx(3 / (8 * math.pi ** 2 * 1000))
    assert math.isinf(masc.delta_alpha(0.0, 0.5))


def test_kernels():
    rng = np.random.default_rng(0)
    t = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
    p = masc.project_constant_modulus(t)
    assert np.allclose(np.abs(p), 1.0)
    assert np.allclose(np.angle(p), np.angle(t))

    r = masc.admm_capacity_covariance(np.eye(2, dtype=complex), 10.0, 1.0)
    assert np.allclose(r, 5.0 * np.eye(2), atol=1e-5)

    assert masc.pareto_front([(0.3, 1.0), (0.5, 0.8), (0.4, 0.7)]) == [0, 1]


def test_figure_run(tmp_path):
    cfg = masc.parse_config(
        "estimation.trials = 100\nestimation.n_obs = 32\ngrid.n_theta = 8\ngrid.n_phi = 8\n"
    )
    m = masc.run_figure("est_error_vs_snr", cfg, str(tmp_path), workers=2)
    assert m.flagged_rows == 0
    assert len(m.outputs) == 1
    assert os.path.exists(m.outputs[0].path)
    assert (tmp_path / "est_error_vs_snr_manifest.json").exists()
