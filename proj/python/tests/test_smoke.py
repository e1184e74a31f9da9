import json

import pytest

import oddata


def instance_a():
    return oddata.Instance.parse("2 2\n0 2 1 2\n1 1 0 3\n")


def instance_a_plus():
    return oddata.Instance.parse("2 2\n0 3 1 2\n1 1 0 5\n")


def test_instance_roundtrip():
    inst = instance_a()
    assert (inst.jobs, inst.machines) == (2, 2)
    assert inst.durations() == [2, 2, 1, 3]
    assert oddata.Instance.parse(inst.serialize()) == inst
    assert oddata.Instance([[(0, 2), (1, 2)], [(1, 1), (0, 3)]]) == inst


def test_bad_instance_raises():
    with pytest.raises(ValueError):
        oddata.Instance.parse("2 2\n0 2 0 2\n1 1 0 3\n")


def test_solve_makespan():
    res = oddata.solve_makespan(instance_a(), oddata.SolveBudget(seed=7))
    assert res.optimal
    assert res.objective == 5
    assert oddata.is_feasible(instance_a(), res.schedule)


def test_od_worked_example():
    ds = oddata.generate_od([instance_a(), instance_a_plus()])
    assert ds.mode == "od"
    assert [s.rows() for s in ds.solutions()] == [[[0, 3], [0, 2]], [[0, 3], [0, 3]]]
    assert oddata.total_variation(ds) == pytest.approx(0.5)
    assert oddata.lipschitz_constant(ds) == pytest.approx(1 / 3)
    assert oddata.Dataset.from_jsonl(ds.to_jsonl()).to_jsonl() == ds.to_jsonl()


def test_projection_is_feasible():
    inst = instance_a()
    s = oddata.project_feasible(inst, [0.0, 0.0, 0.0, 0.0])
    assert s.rows() == [[0, 2], [4, 5]]
    assert oddata.is_feasible(inst, s)


def test_train_and_evaluate():
    base = oddata.Instance.random(3, 3, seed=4)
    family = oddata.perturb_family(base, oddata.PerturbationSpec(steps=6))
    ds = oddata.generate_od(family)
    cfg = oddata.TrainConfig()
    cfg.epochs = 5
    res = oddata.train(oddata.Model(base, seed=1), ds, cfg)
    assert len(res.history) == 5
    metrics = oddata.evaluate(res.model, ds, res.normalizer)
    assert metrics.entries == 6
    text = res.model.to_json(res.normalizer)
    model, norm = oddata.Model.from_json(text)
    assert model.forward([1.0] * 9) == res.model.forward([1.0] * 9)
    assert norm.output == res.normalizer.output


def test_pwl_worked_example():
    fp = oddata.PwlFunction([0, 1, 2], [0, 0, 1])
    fq = oddata.PwlFunction([0, 2], [0, 0])
    b = oddata.approximation_bound(fp, fq)
    assert b.bound == pytest.approx(0.5)
    assert b.actual == pytest.approx(0.5)
    assert oddata.lipschitz_capacity(2, 2, 1) == 28


def test_run_experiment(tmp_path):
    cfg = oddata.ExperimentConfig.parse("jobs = 3\nsteps = 4\nod.epochs = 2\nstandard.epochs = 2\n")
    cfg.output_dir = str(tmp_path)
    cfg.record_timing = False
    report = oddata.run_experiment(cfg)
    assert [r.mode for r in report.rows] == ["standard", "od"]
    assert json.loads(report.to_json())["version"] == 1
    assert (tmp_path / "report.json").exists()
