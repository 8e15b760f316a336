"""Python-surface smoke tests for the pabeam extension."""

import math

import numpy as np
import pytest

import pabeam


def test_geometry_and_grid():
    geom = pabeam.build_linear_array(128, 0.15625e-3, 0.0)
    assert geom.num_elements == 128
    positions = geom.element_positions
    assert positions.shape == (128, 2)
    assert positions[0, 0] == pytest.approx(-9.921875e-3)
    assert positions[-1, 0] == pytest.approx(9.921875e-3)

    grid = pabeam.build_grid(-10e-3, 10e-3, 0.0, 60e-3, 0.1e-3, 0.1e-3)
    assert (grid.nx, grid.nz) == (201, 601)
    assert grid.nearest_z_index(25e-3) == 250

    with pytest.raises(ValueError):
        pabeam.build_linear_array(128, 0.0, 0.0)


def test_kernel_values():
    assert pabeam.das_pixel([1.0, 2.0, 3.0]) == 6.0
    assert pabeam.dmas_pixel([1.0, -4.0]) == pytest.approx(-2.0)
    assert pabeam.mdmas_pixel([1.0, 1.0, 4.0]) == pytest.approx(math.sqrt(6.0))
    assert pabeam.coherence_factor([0.0, 0.0, 0.0, 5.0]) == pytest.approx(0.25)
    assert pabeam.signed_sqrt(-9.0) == -3.0


def test_pipeline_localizes_a_point():
    geom = pabeam.build_linear_array(64, 0.3e-3, 0.0)
    phantom = pabeam.Phantom([pabeam.Absorber(0.0, 20e-3, 1.0, 0.1e-3)])
    frame = pabeam.simulate_frame(phantom, geom, 50e6, 1540.0, 1500,
                                  pabeam.PulseSpec())
    noisy = pabeam.add_gaussian_noise(frame, pabeam.NoiseSpec(50.0, 1))
    assert pabeam.validate_frame(noisy, geom).ok

    grid = pabeam.build_grid(-3e-3, 3e-3, 18e-3, 22e-3, 0.1e-3, 0.1e-3)
    raw = pabeam.beamform_image(noisy, geom, grid,
                                pabeam.MethodSpec("mdmas-cf"), 1540.0)
    db = pabeam.log_compress(pabeam.envelope(raw), 60.0)
    values = db.values
    ix, iz = np.unravel_index(np.argmax(values), values.shape)
    assert abs(grid.x_at(ix)) <= 0.2e-3
    assert abs(grid.z_at(iz) - 20e-3) <= 0.2e-3


def test_metrics_on_synthetic_profile():
    geom = pabeam.build_linear_array(64, 0.3e-3, 0.0)
    phantom = pabeam.preset_phantom("fig3")
    assert len(phantom.absorbers) == 8
    frame = pabeam.simulate_frame(phantom, geom, 50e6, 1540.0, 2500,
                                  pabeam.PulseSpec())
    grid = pabeam.build_grid(-5e-3, 5e-3, 18e-3, 22e-3, 0.1e-3, 0.1e-3)
    raw = pabeam.beamform_image(frame, geom, grid, pabeam.MethodSpec("das"),
                                1540.0)
    db = pabeam.log_compress(pabeam.envelope(raw), 60.0)
    profile = pabeam.lateral_profile(db, grid, 20e-3)
    assert max(profile.values_db) == 0.0
    peaks = pabeam.find_peaks(profile, 2)
    assert peaks[0].position == pytest.approx(-2.3e-3, abs=0.4e-3)
    assert peaks[1].position == pytest.approx(2.3e-3, abs=0.4e-3)
    assert pabeam.valley_depth(profile, peaks[0], peaks[1]) > 0.0


def test_dataset_roundtrip(tmp_path):
    geom = pabeam.build_linear_array(8, 0.3e-3, 0.0)
    samples = np.random.default_rng(0).normal(size=(8, 128))
    frame = pabeam.RfFrame(samples, 50e6, 1540.0)
    meta = pabeam.DatasetMetadata()
    meta.noise = pabeam.NoiseSpec(50.0, 7)

    prefix = str(tmp_path / "ds")
    pabeam.write_dataset(prefix, frame, geom, meta)
    back = pabeam.read_dataset(prefix)
    assert back.frame.num_channels == 8
    np.testing.assert_array_equal(back.frame.samples,
                                  samples.astype(np.float32).astype(np.float64))
    assert back.metadata.noise.seed == 7
