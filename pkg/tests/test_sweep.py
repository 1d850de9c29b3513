import math

import pytest

from wgschwarz.errors import ConfigError, DomainError
from wgschwarz.modal import Family
from wgschwarz.sweep import (
    SweepConfig,
    dictionary_report,
    nilpotency_sweep,
    parse_section,
    scalability_table,
    sigma_value,
    simulate,
    sweep_finite_N,
    sweep_limiting_spectrum,
)
from wgschwarz.transmission import TransmissionSpec


def test_defaults():
    c = SweepConfig()
    assert c.k == 10 and c.L == 1 and c.delta == 0.1
    assert c.families == (Family.TE, Family.TM)
    assert c.N_list == (5, 10, 15, 20, 25, 30, 35)
    grid = c.r_grid()
    assert len(grid) == 401 and grid[0] == 0.0 and grid[-1] == 20.0 and grid[3] == 0.15


def test_limspec_rows_and_skips():
    res = sweep_limiting_spectrum(SweepConfig(r_step=0.5))
    assert len(res.rows) == 2 * 41
    skipped = [r for r in res.rows if r["skipped"]]
    assert [r["r"] for r in skipped] == [10.0, 10.0]
    assert all(math.isnan(r["rho_limit"]) for r in skipped)
    evanescent = [r["rho_limit"] for r in res.rows if not r["skipped"] and r["r"] > 10]
    assert max(evanescent) < 1


def test_dtn_rows_outside_theorem():
    res = sweep_limiting_spectrum(SweepConfig(transmission=TransmissionSpec.dtn(), r_step=1.0))
    assert all(r["outside_theorem"] and r["a"] == 0 for r in res.rows if not r["skipped"])


def test_damped_max_below_one():
    res = sweep_limiting_spectrum(SweepConfig(k=10 + 1j, r_step=0.25))
    assert max(r["rho_limit"] for r in res.rows) < 1 - 1e-3


def test_finite_N_limit_column_constant():
    res = sweep_finite_N(SweepConfig(r_min=12, r_max=12, N_list=(5, 10, 35)))
    for fam in ("te", "tm"):
        rows = [r for r in res.rows if r["family"] == fam]
        assert len({r["rho_limit"] for r in rows}) == 1
        gaps = [abs(r["rho"] - r["rho_limit"]) for r in rows]
        assert gaps[0] > gaps[1] > gaps[2]


def test_finite_N_envelope():
    res = sweep_finite_N(SweepConfig(r_step=2.5, N_list=(5, 15, 25)))
    keys = {(r["family"], r["r"]) for r in res.rows if not r["skipped"]}
    for key in keys:
        rows = [r for r in res.rows if (r["family"], r["r"]) == key]
        bound = max(rows[0]["rho_limit"], rows[0]["rho"]) + 0.1
        assert all(r["rho"] <= bound for r in rows)


def test_pml_near_nilpotent_flag():
    res = sweep_finite_N(SweepConfig(transmission=TransmissionSpec.pml(10, 1), r_min=2, r_max=2, N_list=(5,)))
    assert all(r["near_nilpotent"] for r in res.rows)


def test_dense_cap_precondition():
    with pytest.raises(DomainError):
        sweep_finite_N(SweepConfig(N_list=(5, 1200)))


def test_table_trends():
    c = SweepConfig(sigma_list=("0", "k"), N_list=(5, 10, 20))
    rows = scalability_table(c).rows
    undamped = [r["iterations"] for r in rows if r["sigma"] == "0"]
    damped = [r["iterations"] for r in rows if r["sigma"] == "k"]
    assert undamped == sorted(set(undamped))
    assert max(damped) - min(damped) <= 2


def test_table_dtn_bounded_by_N():
    c = SweepConfig(transmission=TransmissionSpec.dtn(), N_list=(5, 10, 20), initial="random", seed=3)
    assert all(r["iterations"] <= r["N"] for r in scalability_table(c).rows)


def test_strong_scaling():
    c = SweepConfig(scaling="strong", total_length=24.0, N_list=(5, 10, 20))
    rows = scalability_table(c).rows
    assert [r["L"] for r in rows] == pytest.approx([24 / N - 0.2 for N in (5, 10, 20)])
    with pytest.raises(DomainError):
        scalability_table(SweepConfig(scaling="strong", total_length=3.0, N_list=(5, 20)))


def test_dictionary_report():
    rows = dictionary_report(SweepConfig(r_step=0.5)).rows
    good = [r for r in rows if not r["skipped"]]
    assert max(r["rho_difference"] for r in good) < 1e-12
    tem = rows[-1]
    assert tem["pair"] == "tem/te" and tem["a_residual"] == 0 and tem["b_residual"] == 0
    pml = dictionary_report(SweepConfig(transmission=TransmissionSpec.pml(5, 0.1), r_step=0.5)).rows
    assert max(r["a_residual"] for r in pml if not r["skipped"]) < 1e-12
    with pytest.raises(ConfigError):
        dictionary_report(SweepConfig(families=("te",)))


def test_nilpotency_sweep_dtn():
    rows = nilpotency_sweep(SweepConfig(transmission=TransmissionSpec.dtn(), r_step=2.0, N_list=(3, 7))).rows
    assert all(r["degree"] is not None and r["degree"] <= r["N"] for r in rows)


def test_simulate_metadata():
    res = simulate(SweepConfig(transmission=TransmissionSpec.dtn(), N_list=(6,)))
    meta = res.metadata[6]
    assert meta["fixed_point_converged"] and meta["fixed_point_iterations"] <= 6
    assert meta["gmres_iterations"] <= 6


def test_section_modes_replace_grid():
    c = SweepConfig(section="rect:1,1", max_modes=3)
    rows = sweep_limiting_spectrum(c).rows
    assert [r["r"] for r in rows if r["family"] == "te"] == pytest.approx([math.pi, math.pi, math.pi * 2**0.5])


def test_parse_section_and_sigma():
    assert parse_section("disk:2").radius == 2
    assert parse_section("annulus:0.5,1").outer == 1
    for bad in ("rect:1", "hex:1", "disk:x"):
        with pytest.raises(ConfigError):
            parse_section(bad)
    assert sigma_value("inv_k", 10) == 0.1 and sigma_value("k", 10) == 10 and sigma_value("2.5", 10) == 2.5
    with pytest.raises(ConfigError):
        sigma_value("-1", 10)


def test_config_validation():
    for kw in ({"k": 10 - 1j}, {"N_list": (1,)}, {"r_step": 0}, {"scaling": "medium"}, {"families": ()}):
        with pytest.raises((ConfigError, ValueError)):
            SweepConfig(**kw)
