import numpy as np
import pytest

from fibwalk.sequence import DEFAULT_ENSEMBLE, Phason, PrefixOverride, Standard
from fibwalk.sweep import (
    GridSpec,
    STATUS_ERROR,
    STATUS_OK,
    sweep_mcd,
    sweep_winding,
    sweep_winding_average,
)

FLAGSHIP = dict(
    theta_a_lo=np.pi / 2 - 0.3, theta_a_hi=np.pi / 2 + 0.3,
    theta_b_lo=-0.3, theta_b_hi=0.3,
)


def test_grid_cells_are_row_major_theta_b_fastest():
    grid = GridSpec(0.0, 1.0, 10.0, 11.0, resolution=2)
    cells = grid.cells()
    assert len(cells) == 4
    assert cells == [(0.25, 10.25), (0.25, 10.75), (0.75, 10.25), (0.75, 10.75)]


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(resolution=1)
    with pytest.raises(ValueError):
        GridSpec(theta_a_lo=1.0, theta_a_hi=1.0)


def test_grid_center_cell_hits_the_window_center():
    grid = GridSpec(**FLAGSHIP, resolution=3)
    assert grid.cells()[4] == (pytest.approx(np.pi / 2), pytest.approx(0.0))


def test_sweep_mcd_flagship_center_cell():
    grid = GridSpec(**FLAGSHIP, resolution=3)
    diagram = sweep_mcd(grid, n_sites=610, steps=250)
    assert diagram.statuses == [STATUS_OK] * 9
    center = diagram.values[4]
    assert -1.2 < center < -0.8
    assert diagram.provenance["display_clamp"] == -12.0


def test_sweep_mcd_identity_cell_is_exact():
    grid = GridSpec(-0.5, 0.5, -0.5, 0.5, resolution=3)  # center cell at (0, 0)
    diagram = sweep_mcd(grid, n_sites=64, steps=20)
    assert diagram.values[4] == pytest.approx(-21.0, abs=1e-12)


def test_sweep_mcd_rejects_long_windows():
    with pytest.raises(ValueError):
        sweep_mcd(GridSpec(resolution=2), n_sites=64, steps=40)


def test_sweep_winding_flagship_quartet():
    grid = GridSpec(**FLAGSHIP, resolution=3)
    expected = {"ABA": 2, "AAB": 4, "BAA": 0, "BAB": 0}
    for prefix, w in expected.items():
        diagram = sweep_winding(grid, PrefixOverride(prefix))
        center = 4
        assert diagram.statuses[center] == STATUS_OK
        assert diagram.values[center] == w


def test_masking_line_for_b_first_terminations():
    # theta_b = 0 makes the leading B a perfect mirror: W = 0 along the line.
    grid = GridSpec(-3.0, 3.0, -1e-9, 1e-9, resolution=3)
    diagram = sweep_winding(grid, PrefixOverride("BAA"), n_sites=89)
    assert all(s == STATUS_OK for s in diagram.statuses)
    assert np.all(diagram.values == 0.0)


def test_all_transparent_cell_reports_error_status():
    # A pure-A word at theta = pi/2 has every |gamma| ~ 1e-16: no reflection.
    grid = GridSpec(np.pi / 2 - 1e-12, np.pi / 2 + 1e-12,
                    np.pi / 2 - 1e-12, np.pi / 2 + 1e-12, resolution=2)
    diagram = sweep_winding(grid, Phason(0.0), n_sites=34)
    # cells evaluate the standard word; at (pi/2, pi/2) all gammas vanish
    assert all(s == STATUS_ERROR for s in diagram.statuses)
    assert np.all(np.isnan(diagram.values))


def test_winding_average_flagship_value():
    grid = GridSpec(**FLAGSHIP, resolution=3)
    diagram = sweep_winding_average(grid)
    assert diagram.statuses[4] == STATUS_OK
    assert diagram.values[4] == 1.5


def test_singleton_ensemble_matches_plain_sweep():
    grid = GridSpec(**FLAGSHIP, resolution=2)
    single = sweep_winding_average(grid, ensemble=(PrefixOverride("ABA"),))
    plain = sweep_winding(grid, PrefixOverride("ABA"))
    ok = [s == STATUS_OK for s in plain.statuses]
    assert all(
        (not o) or single.values[i] == plain.values[i] for i, o in enumerate(ok)
    )


def test_average_bound_and_quarter_multiples():
    grid = GridSpec(**FLAGSHIP, resolution=3)
    members = [sweep_winding(grid, t) for t in DEFAULT_ENSEMBLE]
    avg = sweep_winding_average(grid)
    for i, status in enumerate(avg.statuses):
        if status != STATUS_OK:
            continue
        values = [m.values[i] for m in members]
        assert min(values) <= avg.values[i] <= max(values)
        assert (4 * avg.values[i]) == pytest.approx(round(4 * avg.values[i]))


def test_deep_trivial_cell_averages_to_zero():
    # center cell sits at (0, 0): every site is a perfect mirror, so all
    # four terminations are masked and give exactly W = 0.
    grid = GridSpec(-0.5, 0.5, -0.5, 0.5, resolution=3)
    diagram = sweep_winding_average(grid, n_sites=55)
    assert diagram.statuses[4] == STATUS_OK
    assert diagram.values[4] == 0.0


def test_empty_ensemble_rejected():
    with pytest.raises(ValueError):
        sweep_winding_average(GridSpec(resolution=2), ensemble=())


def test_serial_and_parallel_runs_are_bitwise_identical():
    grid = GridSpec(**FLAGSHIP, resolution=3)
    serial = sweep_winding(grid, Standard(), n_sites=89)
    parallel = sweep_winding(grid, Standard(), n_sites=89, workers=4)
    assert serial.values.tobytes() == parallel.values.tobytes()
    assert serial.statuses == parallel.statuses

    mcd_serial = sweep_mcd(grid, n_sites=64, steps=20)
    mcd_parallel = sweep_mcd(grid, n_sites=64, steps=20, workers=4)
    assert mcd_serial.values.tobytes() == mcd_parallel.values.tobytes()


@pytest.mark.slow
def test_winding_plateaus_are_quantized_on_a_coarse_grid():
    grid = GridSpec(resolution=21)
    for termination in DEFAULT_ENSEMBLE:
        diagram = sweep_winding(grid, termination)
        values = diagram.values.reshape(21, 21)
        ok = np.array([s == STATUS_OK for s in diagram.statuses]).reshape(21, 21)
        for i in range(19):
            for j in range(19):
                block = values[i:i + 3, j:j + 3]
                if ok[i:i + 3, j:j + 3].all() and (block == block[0, 0]).all():
                    assert block[0, 0] in (0.0, 2.0, 4.0)
