"""Scan engine tests: grids, determinism, table IO, peak analysis."""

import numpy as np
import pytest

from zeemanprobe.errors import InputError
from zeemanprobe.scan import (
    ScanConfig,
    SpectrumTable,
    find_peak_and_width,
    run_scan,
)
from zeemanprobe.system import FieldSpec, TransitionSpec


def _cfg(**overrides):
    base = dict(
        transition=TransitionSpec(fg=1, fe=2, gamma=1e-3),
        pump=FieldSpec(rabi=0.4, pol="lin_x"),
        probe=FieldSpec(rabi=1e-3, pol="lin_y"),
        scan_variable="delta",
        lo=-0.01,
        hi=0.01,
        points=21,
        observables=("absorption", "linear_absorption"),
    )
    base.update(overrides)
    return ScanConfig(**base)


def test_config_validation():
    with pytest.raises(InputError, match="scan_variable"):
        _cfg(scan_variable="frequency")
    with pytest.raises(InputError, match="lo < hi"):
        _cfg(lo=1.0, hi=-1.0)
    with pytest.raises(InputError, match="points"):
        _cfg(points=1)
    with pytest.raises(InputError, match="observable"):
        _cfg(observables=())
    with pytest.raises(InputError, match="unknown"):
        _cfg(observables=("absorbance",))
    with pytest.raises(InputError, match="log-spaced"):
        _cfg(log_grid=True, lo=-1.0, hi=1.0)


def test_config_round_trip():
    cfg = _cfg(bfield=0.02, delta=0.005, observables=("absorption", "fwm_power"))
    again = ScanConfig.from_dict(cfg.to_dict())
    assert again.to_dict() == cfg.to_dict()


def test_delta_scan_columns():
    table = run_scan(_cfg())
    assert table.scan_variable == "delta"
    assert set(table.columns) == {"absorption", "linear_absorption"}
    assert table.scan_values.size == 21
    assert np.all(np.diff(table.scan_values) > 0)
    assert table.max_residual <= 1e-10


def test_delta_scan_peak_at_line_center():
    table = run_scan(_cfg(points=201))
    rep = find_peak_and_width(table, "absorption")
    step = table.scan_values[1] - table.scan_values[0]
    assert abs(rep.center) <= step


def test_steady_state_reuse_matches_pointwise():
    # a multi-point scan (steady state solved once) must reproduce
    # single-point scans (steady state solved per point)
    table = run_scan(_cfg(points=11))
    for idx in (0, 3, 7, 10):
        d = table.scan_values[idx]
        single = run_scan(_cfg(lo=d, hi=d + 1e-9, points=2))
        assert table.columns["absorption"][idx] == pytest.approx(
            single.columns["absorption"][0], rel=1e-12
        )


def test_bfield_scan():
    cfg = _cfg(
        scan_variable="bfield",
        lo=-0.02,
        hi=0.02,
        points=9,
        delta=0.005,
        observables=("absorption", "mag_dipole_modulus"),
    )
    table = run_scan(cfg)
    assert table.scan_values.size == 9
    assert np.all(np.isfinite(table.columns["mag_dipole_modulus"]))


def test_bfield_scan_raman_positions():
    # scanning B at a fixed offset large enough to separate the features:
    # crossed linear fields resonate where 2 beta B = +-delta
    delta = 0.02
    cfg = _cfg(
        scan_variable="bfield",
        lo=-0.02,
        hi=0.02,
        points=161,
        delta=delta,
        pump=FieldSpec(rabi=0.25, pol="lin_x"),
        observables=("absorption",),
    )
    table = run_scan(cfg)
    step = table.scan_values[1] - table.scan_values[0]
    for window, expected in [
        ((-0.016, -0.004), -delta / 2),
        ((0.004, 0.016), +delta / 2),
    ]:
        rep = find_peak_and_width(table, "absorption", window)
        assert abs(rep.center - expected) <= 2 * step


def test_saturation_scan_log_grid():
    cfg = _cfg(
        scan_variable="saturation",
        lo=1e-3,
        hi=1e-1,
        points=7,
        log_grid=True,
        observables=("absorption", "linear_absorption", "incoherent_absorption"),
    )
    table = run_scan(cfg)
    ratios = np.diff(np.log(table.scan_values))
    np.testing.assert_allclose(ratios, ratios[0], rtol=1e-12)
    # the pump-off reference does not depend on the pump intensity
    np.testing.assert_allclose(
        table.columns["linear_absorption"],
        table.columns["linear_absorption"][0],
        rtol=1e-12,
    )
    # the incoherent part never exceeds the linear absorption here
    assert np.all(
        table.columns["incoherent_absorption"]
        <= table.columns["linear_absorption"] * (1 + 1e-9)
    )


def test_repeated_runs_bit_identical():
    cfg = _cfg(points=31)
    assert run_scan(cfg).to_csv() == run_scan(cfg).to_csv()


def test_worker_pool_matches_sequential():
    cfg_seq = _cfg(points=12)
    cfg_par = _cfg(points=12, workers=2)
    seq = run_scan(cfg_seq)
    par = run_scan(cfg_par)
    for name in seq.columns:
        np.testing.assert_array_equal(seq.columns[name], par.columns[name])


def test_csv_round_trip(tmp_path):
    cfg = _cfg(points=11, observables=("absorption", "dispersion"))
    table = run_scan(cfg)
    path = tmp_path / "spectrum.csv"
    table.write_csv(path)
    back = SpectrumTable.read_csv(path)
    assert back.scan_variable == "delta"
    np.testing.assert_array_equal(back.scan_values, table.scan_values)
    for name in table.columns:
        np.testing.assert_array_equal(back.columns[name], table.columns[name])
    assert "config" in back.metadata


def test_read_csv_rejects_non_table(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("# nothing here\n")
    with pytest.raises(InputError):
        SpectrumTable.read_csv(path)


def _lorentzian_table(width=0.002, center=0.0, amp=1.0, baseline=0.3,
                      span=0.02, points=801, sign=1.0):
    x = np.linspace(-span, span, points)
    y = baseline + sign * amp * (width / 2) ** 2 / (
        (width / 2) ** 2 + (x - center) ** 2
    )
    return SpectrumTable("delta", x, {"y": y})


def test_peak_width_synthetic_lorentzian():
    width = 0.002
    table = _lorentzian_table(width=width)
    rep = find_peak_and_width(table, "y")
    assert rep.fwhm == pytest.approx(width, rel=0.01)
    assert rep.center == pytest.approx(0.0, abs=1e-6)
    assert rep.height == pytest.approx(1.3, rel=1e-3)
    assert rep.baseline == pytest.approx(0.3, abs=5e-3)


def test_peak_analysis_handles_dips():
    rep = find_peak_and_width(_lorentzian_table(sign=-1.0), "y")
    assert rep.fwhm == pytest.approx(0.002, rel=0.01)
    assert rep.height < rep.baseline


def test_peak_analysis_off_center():
    rep = find_peak_and_width(_lorentzian_table(center=0.004), "y")
    assert rep.center == pytest.approx(0.004, abs=1e-5)


def test_peak_analysis_window_restriction():
    table = _lorentzian_table(center=0.004)
    rep = find_peak_and_width(table, "y", window=(0.0, 0.012))
    assert rep.center == pytest.approx(0.004, abs=1e-5)


def test_peak_analysis_errors():
    flat = SpectrumTable(
        "delta", np.linspace(-1, 1, 101), {"y": np.ones(101)}
    )
    with pytest.raises(InputError, match="noise"):
        find_peak_and_width(flat, "y")
    ramp = SpectrumTable(
        "delta", np.linspace(-1, 1, 101), {"y": np.linspace(0, 1, 101)}
    )
    with pytest.raises(InputError, match="edge|crossing"):
        find_peak_and_width(ramp, "y")
    with pytest.raises(InputError, match="column"):
        find_peak_and_width(flat, "absorption")


def test_peak_analysis_window_too_small():
    table = _lorentzian_table(width=0.01)
    with pytest.raises(InputError, match="fewer than 5"):
        find_peak_and_width(table, "y", window=(-1e-5, 1e-5))
