"""Grid construction, evaluation, and CSV export contracts."""

import numpy as np
import pytest

from paretoscape import (BiObjectiveProblem, DomainError, EvaluationError,
                         build_grid, evaluate_grid, make_aspar, make_bisphere)
from paretoscape.grid import export_points_csv, flatten_indices


def test_coordinates_small_grid_exact():
    g = build_grid((0.0, 0.0), (1.0, 1.0), 3, 3)
    assert list(g.x1) == [0.0, 0.5, 1.0]
    assert list(g.x2) == [0.0, 0.5, 1.0]
    assert g.s1 == 0.5 and g.s2 == 0.5
    assert g.shape == (3, 3)


def test_spacing_frozen_example():
    g = build_grid((-2.0, -1.0), (2.0, 3.0), 1001, 1001)
    assert g.s1 == 0.004
    assert g.s2 == 0.004


def test_endpoints_exact_even_when_spacing_inexact():
    # 1/6 is not representable in binary; the last coordinate must still
    # be exactly the upper bound
    g = build_grid((0.0, 0.0), (1.0, 1.0), 7, 7)
    assert g.x1[0] == 0.0 and g.x1[-1] == 1.0
    assert g.x2[0] == 0.0 and g.x2[-1] == 1.0


def test_rectangular_grid_axes_independent():
    g = build_grid((0.0, -1.0), (2.0, 1.0), 5, 11)
    assert g.shape == (5, 11)
    assert g.s1 == 0.5 and g.s2 == 0.2
    X1, X2 = g.meshes()
    assert X1.shape == (5, 11) and X2.shape == (5, 11)
    assert X1[3, 0] == g.x1[3] and X2[0, 7] == g.x2[7]


def test_build_grid_validation():
    with pytest.raises(ValueError, match="at least 2"):
        build_grid((0, 0), (1, 1), 1, 5)
    with pytest.raises(ValueError, match="at least 2"):
        build_grid((0, 0), (1, 1), 5, 0)
    with pytest.raises(ValueError, match="below"):
        build_grid((1, 0), (0, 1), 5, 5)
    with pytest.raises(ValueError, match="finite"):
        build_grid((0, float("nan")), (1, 1), 5, 5)


def test_evaluate_grid_matches_pointwise():
    p = make_aspar()
    g = build_grid(p.lower, p.upper, 13, 9)
    f1, f2 = evaluate_grid(p, g)
    for i in (0, 5, 12):
        for j in (0, 4, 8):
            e1, e2 = p.evaluate((g.x1[i], g.x2[j]))
            assert f1[i, j] == e1 and f2[i, j] == e2


def test_evaluate_grid_worker_count_does_not_change_output():
    p = make_bisphere()
    g = build_grid(p.lower, p.upper, 101, 101)
    f1a, f2a = evaluate_grid(p, g, workers=1)
    f1b, f2b = evaluate_grid(p, g, workers=3)
    assert np.array_equal(f1a, f1b)
    assert np.array_equal(f2a, f2b)


def test_evaluate_grid_rejects_grid_outside_problem_box():
    p = make_bisphere()  # box [-2,2]^2
    g = build_grid((-3.0, 0.0), (0.0, 1.0), 5, 5)
    with pytest.raises(DomainError):
        evaluate_grid(p, g)


def test_non_finite_objective_raises_evaluation_error():
    bad = BiObjectiveProblem(
        name="bad",
        lower=(0.0, 0.0),
        upper=(1.0, 1.0),
        fn=lambda x1, x2: (np.where(x1 > 0.6, np.nan, x1), x2 * 0.0),
    )
    g = build_grid((0.0, 0.0), (1.0, 1.0), 5, 5)
    with pytest.raises(EvaluationError, match=r"j1=4.*j2=1"):
        evaluate_grid(bad, g)


def test_flatten_indices_column_major_one_based():
    g = build_grid((0.0, 0.0), (1.0, 1.0), 3, 2)
    j1, j2 = flatten_indices(g)
    assert list(j1) == [1, 2, 3, 1, 2, 3]
    assert list(j2) == [1, 1, 1, 2, 2, 2]


def test_export_points_csv_golden(tmp_path):
    p = BiObjectiveProblem(
        name="tiny",
        lower=(0.0, 0.0),
        upper=(1.0, 1.0),
        fn=lambda x1, x2: (x1 + 2.0 * x2, x1 * 0.0 + 7.0),
    )
    g = build_grid((0.0, 0.0), (1.0, 1.0), 2, 2)
    f1, f2 = evaluate_grid(p, g)
    out = tmp_path / "points.csv"
    export_points_csv(out, g, f1, f2)
    lines = out.read_text().splitlines()
    assert lines[0] == "j1,j2,x1,x2,f1,f2"
    assert lines[1] == "1,1,0.0,0.0,0.0,7.0"
    assert lines[2] == "2,1,1.0,0.0,1.0,7.0"
    assert lines[3] == "1,2,0.0,1.0,2.0,7.0"
    assert lines[4] == "2,2,1.0,1.0,3.0,7.0"
    assert len(lines) == 5
