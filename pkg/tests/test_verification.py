import numpy as np
import pytest

import obsnet.verification as verification
from obsnet import (
    InfeasibleError,
    ProblemInstance,
    StructuredMatrix,
    ValidationError,
    WeightedDigraph,
    build_measurement_gram,
    design_instance,
    generate_instance,
    kalman_rank_observable,
    make_row_stochastic,
    observability_trial,
    realize_numeric,
    rng_for,
    verify_design_numeric,
)
from oracles import observability_matrix_rank


def test_realize_numeric_respects_structure():
    pattern = StructuredMatrix(3, 3, frozenset({(0, 1), (2, 2)}))
    a = realize_numeric(pattern, rng_for(0, "t"))
    assert a.shape == (3, 3)
    for i in range(3):
        for j in range(3):
            if (i, j) in pattern.nonzeros:
                assert 0.5 <= a[i, j] < 1.5
            else:
                assert a[i, j] == 0.0


def test_realize_numeric_deterministic_per_stream():
    pattern = StructuredMatrix(4, 4, frozenset({(i, i) for i in range(4)}))
    a = realize_numeric(pattern, rng_for(9, "x"))
    b = realize_numeric(pattern, rng_for(9, "x"))
    c = realize_numeric(pattern, rng_for(9, "y"))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_realize_numeric_empty_pattern():
    assert np.array_equal(
        realize_numeric(StructuredMatrix(2, 3, frozenset()), rng_for(0, "e")),
        np.zeros((2, 3)),
    )


def test_make_row_stochastic_single_sensor():
    w = make_row_stochastic(StructuredMatrix(1, 1, frozenset()), rng_for(0, "w"))
    assert np.array_equal(w, np.array([[1.0]]))


def test_make_row_stochastic_rows_sum_to_one():
    rng = np.random.default_rng(3)
    for trial in range(25):
        m = int(rng.integers(1, 7))
        nz = {
            (i, j)
            for i in range(m)
            for j in range(m)
            if i != j and rng.random() < 0.4
        }
        w = make_row_stochastic(
            StructuredMatrix(m, m, frozenset(nz)), rng_for(trial, "w")
        )
        assert np.allclose(w.sum(axis=1), 1.0, atol=1e-12)
        # self-weights always present, structure respected elsewhere
        assert all(w[i, i] > 0 for i in range(m))
        for i in range(m):
            for j in range(m):
                if i != j:
                    assert (w[i, j] > 0) == ((i, j) in nz)


def test_make_row_stochastic_rejects_nonsquare():
    from obsnet import ShapeError

    with pytest.raises(ShapeError):
        make_row_stochastic(StructuredMatrix(2, 3, frozenset()), rng_for(0, "w"))


def test_measurement_gram_hand_example():
    gram = build_measurement_gram(np.array([[1.0, 0.0], [0.0, 1.0]]))
    assert gram.shape == (4, 4)
    assert np.array_equal(np.diag(gram), np.array([1.0, 0.0, 0.0, 1.0]))
    assert np.count_nonzero(gram) == 2


def test_measurement_gram_scalar():
    gram = build_measurement_gram(np.array([[3.0]]))
    assert np.array_equal(gram, np.array([[9.0]]))


def test_measurement_gram_is_psd_with_rank_m():
    rng = np.random.default_rng(5)
    for _ in range(20):
        m, n = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        h = np.zeros((m, n))
        for i in range(m):
            h[i, int(rng.integers(n))] = float(rng.uniform(0.5, 1.5))
        gram = build_measurement_gram(h)
        eigs = np.linalg.eigvalsh(gram)
        assert eigs.min() > -1e-12
        assert np.linalg.matrix_rank(gram) == m


def test_measurement_gram_rejects_bad_rows():
    with pytest.raises(ValidationError):
        build_measurement_gram(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(ValidationError):
        build_measurement_gram(np.array([[0.0, 0.0], [0.0, 1.0]]))


def test_kalman_scalar_observable():
    assert kalman_rank_observable(np.array([[2.0]]), np.array([[1.0]])) == (True, 1)


def test_kalman_decoupled_mode_unobservable():
    ok, rank = kalman_rank_observable(np.diag([1.0, 2.0]), np.array([[1.0, 0.0]]))
    assert not ok
    assert rank == 1


def test_kalman_zero_output():
    ok, rank = kalman_rank_observable(np.eye(2), np.zeros((1, 2)))
    assert not ok
    assert rank == 0


def test_kalman_three_cycle_single_measurement():
    pattern = StructuredMatrix(3, 3, frozenset({(1, 0), (2, 1), (0, 2)}))
    a = realize_numeric(pattern, rng_for(12, "cycle"))
    c = np.array([[1.0, 0.0, 0.0]])
    ok, rank = kalman_rank_observable(a, c)
    assert ok and rank == 3
    assert observability_matrix_rank(a, c) == 3


def test_kalman_matches_explicit_observability_matrix():
    rng = np.random.default_rng(7)
    for _ in range(120):
        n = int(rng.integers(1, 7))
        a = np.where(rng.random((n, n)) < 0.4, rng.uniform(0.5, 1.5, (n, n)), 0.0)
        p = int(rng.integers(1, 3))
        c = np.where(rng.random((p, n)) < 0.5, rng.uniform(0.5, 1.5, (p, n)), 0.0)
        ok, rank = kalman_rank_observable(a, c)
        assert rank == observability_matrix_rank(a, c)
        assert ok == (rank == n)


def test_kalman_rank_monotone_in_measurements():
    rng = np.random.default_rng(19)
    for _ in range(40):
        n = int(rng.integers(2, 6))
        a = rng.uniform(0.5, 1.5, (n, n)) * (rng.random((n, n)) < 0.5)
        c1 = rng.uniform(0.5, 1.5, (1, n)) * (rng.random((1, n)) < 0.6)
        extra = rng.uniform(0.5, 1.5, (1, n)) * (rng.random((1, n)) < 0.6)
        _, r1 = kalman_rank_observable(a, c1)
        _, r2 = kalman_rank_observable(a, np.vstack([c1, extra]))
        assert r2 >= r1


def test_kalman_shape_errors():
    from obsnet import ShapeError

    with pytest.raises(ShapeError):
        kalman_rank_observable(np.zeros((2, 3)), np.zeros((1, 2)))
    with pytest.raises(ShapeError):
        kalman_rank_observable(np.eye(2), np.zeros((1, 3)))


# --- end-to-end verification -------------------------------------------------


def decoupled_instance(links) -> ProblemInstance:
    return ProblemInstance(
        n=2,
        m=2,
        system_pattern=StructuredMatrix(2, 2, frozenset({(0, 0), (1, 1)})),
        sensing_cost={(0, 0): 1.0, (1, 1): 1.0},
        network=WeightedDigraph(2, links),
    )


def test_verify_accepts_generated_designs():
    for seed in range(12):
        n = 2 + seed % 5
        m = 1 + seed % min(3, n)
        instance = generate_instance(n, m, density=0.35, seed=seed)
        design = design_instance(instance)
        report = verify_design_numeric(instance, design, trials=8, seed=seed)
        assert report.trials == 8
        assert report.passes == 8
        assert report.rank_deficits == ()
        assert report.all_passed


def test_verify_report_json_shape():
    instance = generate_instance(3, 2, density=0.4, seed=4)
    design = design_instance(instance)
    report = verify_design_numeric(instance, design, trials=3, seed=1, tolerance=1e-8)
    doc = report.to_json_dict()
    assert doc["trials"] == 3 and doc["passes"] == 3
    assert doc["tolerance"] == 1e-8
    assert doc["rank_deficits"] == []


def test_verify_refuses_structurally_bad_design():
    from obsnet.graphs import DesignResult

    instance = decoupled_instance({(0, 1): 1.0})
    bad = DesignResult(
        measurement_pattern=StructuredMatrix(2, 2, frozenset({(0, 0), (1, 1)})),
        network_pattern=StructuredMatrix(2, 2, frozenset({(0, 1)})),
        sensing_cost=2.0,
        networking_cost=1.0,
        network_optimality="exact",
    )
    with pytest.raises(InfeasibleError, match="structural gate"):
        verify_design_numeric(instance, bad, trials=3, seed=0)


def test_verify_needs_positive_trials():
    instance = generate_instance(2, 1, seed=0)
    design = design_instance(instance)
    with pytest.raises(ValidationError):
        verify_design_numeric(instance, design, trials=0)


def test_non_sc_counterexample_fails_every_trial():
    # two decoupled parent components, each sensor sees one, but information
    # flows only one way between the sensors: sensor 0 never learns state 1
    instance = decoupled_instance({(0, 1): 1.0})
    h = StructuredMatrix(2, 2, frozenset({(0, 0), (1, 1)}))
    w = StructuredMatrix(2, 2, frozenset({(0, 1)}))
    for trial in range(40):
        ok, rank = observability_trial(instance, h, w, rng_for(77, "cx", trial))
        assert not ok
        assert instance.m * instance.n - rank >= 1


def test_trial_implicit_operator_matches_dense(monkeypatch):
    instance = generate_instance(4, 3, density=0.4, seed=21)
    design = design_instance(instance)
    h, w = design.measurement_pattern, design.network_pattern
    dense = [
        observability_trial(instance, h, w, rng_for(1, "cmp", t)) for t in range(6)
    ]
    monkeypatch.setattr(verification, "DENSE_JOINT_LIMIT", 0)
    implicit = [
        observability_trial(instance, h, w, rng_for(1, "cmp", t)) for t in range(6)
    ]
    assert dense == implicit


def test_scalar_design_verifies():
    instance = ProblemInstance(
        n=1,
        m=1,
        system_pattern=StructuredMatrix(1, 1, frozenset({(0, 0)})),
        sensing_cost={(0, 0): 2.0},
        network=WeightedDigraph(1, {}),
    )
    design = design_instance(instance)
    report = verify_design_numeric(instance, design, trials=5, seed=3)
    assert report.passes == 5
