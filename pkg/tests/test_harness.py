import json

import pytest

from conftest import gd_direct
from reesalg.harness import (
    InstanceSpec,
    generate_instance,
    random_matrix,
    run_batch,
    run_instance,
    stream_value,
)
from reesalg.matfile import parse_matrix_file
from reesalg.polyring import FieldSpec


def test_spec_ranges():
    for bad in [dict(d=1, m=2, n=1), dict(d=2, m=5, n=1), dict(d=2, m=3, n=4), dict(d=2, m=3, n=1, trials=-1)]:
        with pytest.raises(ValueError):
            InstanceSpec(**bad)


def test_stream_is_deterministic():
    assert stream_value(1, 2, 3, 4, 1000) == stream_value(1, 2, 3, 4, 1000)
    assert len({stream_value(1, 2, 0, k, 32003) for k in range(20)}) > 15


def test_same_seed_and_index_give_same_matrix():
    spec = InstanceSpec(3, 4, 2, seed=9)
    assert random_matrix(spec, 5) == random_matrix(spec, 5)
    assert random_matrix(spec, 5) != random_matrix(spec, 6)


def test_generated_shape_matches_example_class():
    spec = InstanceSpec(3, 4, 2, seed=1)
    inp = generate_instance(spec, 0)
    assert (inp.phi.rows, inp.phi.cols, inp.n, inp.d) == (4, 3, 2, 3)
    for i in range(4):
        assert inp.phi[i, 0].total_degree() <= 1 and inp.phi[i, 2].total_degree() in (0, 2)


def test_generated_instances_pass_gd_independently():
    spec = InstanceSpec(2, 3, 2, seed=4)
    for k in range(5):
        inp = generate_instance(spec, k)
        assert gd_direct(inp.phi, spec.d)


def test_rational_field_generation():
    spec = InstanceSpec(2, 3, 1, field=FieldSpec.rational(), seed=2)
    inp = generate_instance(spec, 0)
    assert inp.ring.field.p is None


def test_empty_batch():
    s = run_batch(InstanceSpec(2, 3, 1, trials=0))
    assert s.trials_run == 0 and s.sat_index_histogram == {} and not s.failed


def test_linear_case_batch_has_expected_form():
    s = run_batch(InstanceSpec(2, 3, 1, seed=3, trials=50), workers=1)
    assert s.trials_run == 50 and s.forms_equal_count == 50
    assert s.sat_index_histogram == {1: 50}


def test_almost_linear_batch_concentrates_at_n():
    s = run_batch(InstanceSpec(3, 4, 2, seed=8, trials=20), workers=1)
    assert s.sat_index_histogram == {2: 20}
    assert s.height_violation_count == 0 and s.theorem_violation_count == 0


def test_summary_is_reproducible_and_worker_independent():
    spec = InstanceSpec(2, 3, 2, seed=12, trials=4)
    a = json.dumps(run_batch(spec, workers=1).to_json())
    b = json.dumps(run_batch(spec, workers=2).to_json())
    assert a == b


def test_budget_exceeded_is_counted():
    s = run_batch(InstanceSpec(3, 4, 2, seed=1, trials=2), workers=1, max_pairs=5)
    assert s.budget_exceeded_count == 2 and s.trials_run == 0


def test_dump_is_a_readable_matrix_file(tmp_path, monkeypatch):
    import reesalg.harness as h

    monkeypatch.setattr(h, "theorem_violations", lambda r: ["forced for the test"])
    out = run_instance(InstanceSpec(2, 3, 1, seed=5), 0, dump_dir=str(tmp_path))
    assert out.status == "violation" and out.dump
    text = open(out.dump).read()
    assert "forced for the test" in text and "index 0" in text
    mf = parse_matrix_file(text, out.dump)
    assert mf.matrix == generate_instance(InstanceSpec(2, 3, 1, seed=5), 0).phi
