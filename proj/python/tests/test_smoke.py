import math

import pytest

import mimf


def test_generate_and_json_round_trip():
    inst = mimf.generate_instance(8, 2, seed=3)
    assert inst.n == 8 and inst.k == 2
    assert inst.num_terms() == 7
    assert all(u == pytest.approx(10 * l) for l, u in zip(inst.lower, inst.upper))
    assert mimf.instance_from_json(mimf.instance_to_json(inst)) == inst


def test_strict_json():
    with pytest.raises(ValueError, match="missing field"):
        mimf.instance_from_json('{"version": "1"}')


def test_relax_and_solve():
    inst = mimf.generate_instance(10, 2, seed=1)
    model = mimf.build_relaxed_milp(inst, mimf.Formulation.FLAMBDA)
    assert model.num_binaries == 10
    lp = mimf.solve_lp(model)
    ip = mimf.solve_milp(model)
    assert lp["status"] == "optimal"
    assert ip["status"] == "optimal"
    assert lp["objective"] <= ip["objective"] + 1e-9
    assert len(ip["point"]) == model.num_variables


def test_bilinear_bounds_agree():
    inst = mimf.generate_instance(12, 2, seed=4)
    a = mimf.solve_lp(mimf.build_relaxed_milp(inst, mimf.Formulation.FLAMBDA))
    b = mimf.solve_lp(mimf.build_relaxed_milp(inst, mimf.Formulation.FRMC))
    assert a["objective"] == pytest.approx(b["objective"], abs=1e-6)


def test_mps_round_trip():
    model = mimf.build_relaxed_milp(mimf.generate_instance(6, 3, seed=2), mimf.Formulation.FRMC)
    text = mimf.write_mps(model)
    back = mimf.read_mps(text)
    assert mimf.compare_models(model, back) is None
    assert back.variable_names == model.variable_names
    with pytest.raises(ValueError, match="line"):
        mimf.read_mps("NAME x\nROWS\n N  OBJ\n")


def test_hull_probe():
    bounds = mimf.sample_term_bounds(2, 5)
    report = mimf.check_projection_conjecture(bounds, 1, directions=25)
    assert report["holds"]
    assert report["directions_tested"] == 25
    assert report["vertices_lifted"] == report["vertices_total"] == 8


def test_gap_and_bench_row():
    assert mimf.lp_gap(100.0, 97.0) == pytest.approx(3.0)
    assert mimf.lp_gap(0.0, 1.0) is None
    row = mimf.run_single(mimf.generate_instance(10, 4, seed=2), mimf.Formulation.FLAMBDA)
    assert row["status"] == "optimal"
    assert row["lp_gap_percent"] == pytest.approx(
        (row["milp_objective"] - row["lp_bound"]) / row["milp_objective"] * 100)
    assert not math.isnan(row["lp_time"])
