import numpy as np
import pytest
import scipy.linalg
from conftest import weighted_instance
from scipy.optimize import linprog, minimize

from jointnet.exceptions import (
    ConvergenceWarning,
    InfeasibleEpsilon,
    MaxItersExceeded,
)
from jointnet.experiment import recovery_error_l1
from jointnet.graphs import CovarianceSet, pairwise_distances
from jointnet.operators import (
    build_Phi,
    build_Psi,
    build_Psi_weighted,
    build_reduced,
)
from jointnet.solvers import (
    NoiselessSolver,
    RobustSolver,
    SolverConfig,
    SolverNotFoundError,
    anchored_geometry,
    choose_epsilon,
    combine_solutions,
    get_solver,
    minimal_epsilon_point,
    project_ball,
    soft_threshold,
    solve_noiseless,
    solve_robust,
    solve_separate,
)


def lp_noiseless(psi, phi, b):
    """Optimal value of ``min ||Psi s||_1, Phi s = b`` by HiGHS."""
    n_rows, n_var = psi.shape
    eye = np.eye(n_rows)
    result = linprog(
        np.concatenate((np.zeros(n_var), np.ones(n_rows))),
        A_ub=np.block([[psi, -eye], [-psi, -eye]]),
        b_ub=np.zeros(2 * n_rows),
        A_eq=np.hstack((phi, np.zeros((phi.shape[0], n_rows)))),
        b_eq=b,
        bounds=[(None, None)] * n_var + [(0, None)] * n_rows,
        method="highs",
    )
    assert result.status == 0
    return result.fun, result.x[:n_var]


def slsqp_robust(reduced, epsilon, x_start):
    """Objective of the robust program at an SLSQP solution, or None if
    SLSQP ends outside the feasible set."""
    r_mat, m_mat, anchor = reduced.R, reduced.M, reduced.anchor
    n_rows, n_var = r_mat.shape
    eye = np.eye(n_rows)
    constraints = [
        {
            "type": "ineq",
            "fun": lambda z: z[n_var:] - r_mat @ z[:n_var],
            "jac": lambda z: np.hstack((-r_mat, eye)),
        },
        {
            "type": "ineq",
            "fun": lambda z: z[n_var:] + r_mat @ z[:n_var],
            "jac": lambda z: np.hstack((r_mat, eye)),
        },
        {
            "type": "ineq",
            "fun": lambda z: np.array(
                [epsilon**2 - np.sum((m_mat @ z[:n_var]) ** 2)]
            ),
            "jac": lambda z: np.concatenate(
                (-2.0 * m_mat.T @ (m_mat @ z[:n_var]), np.zeros(n_rows))
            )[None, :],
        },
        {
            "type": "eq",
            "fun": lambda z: anchor @ z[:n_var] - 1.0,
            "jac": lambda z: np.hstack(
                (anchor, np.zeros((anchor.shape[0], n_rows)))
            ),
        },
    ]
    start = np.concatenate((x_start, np.abs(r_mat @ x_start) + 1e-3))
    result = minimize(
        lambda z: z[n_var:].sum(),
        start,
        jac=lambda z: np.concatenate((np.zeros(n_var), np.ones(n_rows))),
        constraints=constraints,
        method="SLSQP",
        options={"maxiter": 2000, "ftol": 1e-12},
    )
    x = result.x[:n_var]
    feasible = (
        reduced.commutator_norm(x) <= epsilon * (1 + 1e-6)
        and np.abs(anchor @ x - 1.0).max() < 1e-8
    )
    return reduced.objective(x) if feasible else None


def lp_reduced_unconstrained(reduced):
    """``min ||R x||_1`` subject to the anchor only, by HiGHS."""
    n_rows, n_var = reduced.R.shape
    eye = np.eye(n_rows)
    result = linprog(
        np.concatenate((np.zeros(n_var), np.ones(n_rows))),
        A_ub=np.block([[reduced.R, -eye], [-reduced.R, -eye]]),
        b_ub=np.zeros(2 * n_rows),
        A_eq=np.hstack(
            (reduced.anchor, np.zeros((reduced.anchor.shape[0], n_rows)))
        ),
        b_eq=np.ones(reduced.anchor.shape[0]),
        bounds=[(None, None)] * n_var + [(0, None)] * n_rows,
        method="highs",
    )
    assert result.status == 0
    return result.fun, result.x[:n_var]


def test_soft_threshold():
    values = np.array([-3.0, -0.5, 0.0, 0.5, 3.0])
    np.testing.assert_array_equal(
        soft_threshold(values, 1.0), [-2.0, 0.0, 0.0, 0.0, 2.0]
    )


def test_project_ball():
    values = np.array([3.0, 4.0])
    np.testing.assert_allclose(project_ball(values, 1.0), [0.6, 0.8])
    np.testing.assert_array_equal(project_ball(values, 10.0), values)
    np.testing.assert_array_equal(project_ball(values, 0.0), [0.0, 0.0])


def test_solver_config_validation():
    with pytest.raises(ValueError, match="rho"):
        SolverConfig(rho=0.0)
    with pytest.raises(ValueError, match="max_iters"):
        SolverConfig(max_iters=0)
    with pytest.raises(ValueError, match="tol_primal"):
        SolverConfig(tol_primal=-1.0)
    with pytest.raises(ValueError, match="relaxation"):
        SolverConfig(relaxation=2.0)


def test_get_solver():
    assert isinstance(get_solver("noiseless"), NoiselessSolver)
    assert isinstance(get_solver("Robust"), RobustSolver)
    assert get_solver().tol_primal == 1e-10
    assert get_solver("robust").tol_primal == 1e-8
    with pytest.raises(SolverNotFoundError, match="Got: lasso"):
        get_solver("lasso")


def test_noiseless_identity_covariance(identity_covariance):
    problem = build_Phi(identity_covariance)
    solution = solve_noiseless(problem)
    # first column sums to one; both triangles count
    assert solution.objective == pytest.approx(2.0, abs=1e-8)
    assert solution.feasibility.scale_residual < 1e-8
    shift = solution.matrices[0]
    np.testing.assert_array_equal(shift, shift.T)
    assert np.all(np.diag(shift) == 0.0)


def test_noiseless_matches_linear_program(rewired_pair):
    truth, model = rewired_pair
    psi = build_Psi([1.0, 2.0], {(0, 1): 0.5}, 2, 6)
    problem = build_Phi(model, psi, anchor="each")
    lp_value, _ = lp_noiseless(problem.Psi, problem.Phi, problem.b)
    solution = solve_noiseless(problem)
    assert solution.objective == pytest.approx(
        lp_value, rel=1e-5, abs=1e-8
    )
    assert solution.feasibility.commutator_residual < 1e-6
    assert solution.feasibility.scale_residual < 1e-6
    # the ground truth is feasible, so it cannot beat the optimum
    assert problem.objective(truth.stack()) >= lp_value - 1e-8


def test_singleton_feasible_set_is_recovered():
    recovered = 0
    rng = np.random.default_rng(0)
    for seed in range(5):
        truth, covs = weighted_instance(seed, n_nodes=6, k_graphs=2)
        psi = build_Psi(rng.uniform(0.5, 2.0, 2), rng.uniform(0, 2, 1), 2, 6)
        problem = build_Phi(covs, psi, anchor="each")
        if scipy.linalg.null_space(problem.Phi, rcond=1e-9).shape[1]:
            continue
        solution = solve_noiseless(problem)
        assert recovery_error_l1(solution.shifts, truth) < 1e-8
        recovered += 1
    assert recovered >= 1


def test_noiseless_strict_raises(identity_covariance):
    problem = build_Phi(identity_covariance)
    config = SolverConfig(max_iters=1, strict=True)
    with pytest.raises(MaxItersExceeded) as info:
        solve_noiseless(problem, config)
    assert info.value.solution is not None
    assert not info.value.solution.converged


def test_noiseless_warns_when_not_converged(identity_covariance):
    problem = build_Phi(identity_covariance)
    with pytest.warns(ConvergenceWarning):
        solution = solve_noiseless(problem, SolverConfig(max_iters=1))
    assert not solution.converged
    assert solution.iterations == 1


def test_robust_identity_covariance(identity_covariance):
    reduced = build_reduced(identity_covariance, build_Psi([1.0], [], 1, 4))
    solution = solve_robust(reduced, epsilon=1.0)
    assert solution.objective == pytest.approx(1.0, abs=1e-5)
    assert solution.epsilon == 1.0
    assert solution.feasibility.scale_residual < 1e-6


def test_robust_rejects_small_epsilon(sampled_pair):
    _, _, sample, psi = sampled_pair
    reduced = build_reduced(sample, psi, "each")
    _, eps_min = minimal_epsilon_point(reduced)
    assert eps_min > 0
    with pytest.raises(InfeasibleEpsilon) as info:
        solve_robust(reduced, epsilon=0.5 * eps_min)
    assert info.value.minimal_epsilon == pytest.approx(eps_min, rel=1e-9)
    assert "Minimal feasible epsilon" in str(info.value)


def test_robust_with_inactive_ball_matches_linear_program(sampled_pair):
    _, _, sample, psi = sampled_pair
    reduced = build_reduced(sample, psi, "each")
    lp_value, x_lp = lp_reduced_unconstrained(reduced)
    epsilon = 2.0 * reduced.commutator_norm(x_lp) + 1.0
    solution = solve_robust(reduced, epsilon=epsilon)
    assert solution.objective == pytest.approx(lp_value, rel=1e-4)


def test_robust_between_oracle_bounds(sampled_pair):
    _, _, sample, psi = sampled_pair
    reduced = build_reduced(sample, psi, "each")
    x_ls, eps_min = minimal_epsilon_point(reduced)
    epsilon = 2.0 * eps_min
    solution = solve_robust(reduced, epsilon=epsilon)
    assert solution.feasibility.commutator_residual <= epsilon * (1 + 1e-9)
    assert solution.feasibility.scale_residual < 1e-8

    lower, _ = lp_reduced_unconstrained(reduced)
    assert solution.objective >= lower * (1 - 1e-6)
    upper = slsqp_robust(reduced, epsilon, x_ls)
    if upper is None:
        upper = reduced.objective(x_ls)
    assert solution.objective <= upper * (1 + 1e-3) + 1e-8


def test_choose_epsilon_strategies(sampled_pair):
    _, _, sample, psi = sampled_pair
    reduced = build_reduced(sample, psi, "each")
    _, eps_min = minimal_epsilon_point(reduced)
    chosen = choose_epsilon(reduced, "min-feasible")
    assert chosen == pytest.approx(eps_min * (1 + 1e-3), rel=1e-12)
    assert choose_epsilon(reduced, rel_tol=0.0) == eps_min
    solve_robust(reduced, epsilon=chosen)
    assert choose_epsilon(reduced, "scaled-min") == pytest.approx(
        1.5 * eps_min
    )
    theory = choose_epsilon(
        reduced, "theorem5", covariances=sample, n_total=400
    )
    assert theory > 0
    with pytest.raises(ValueError):
        choose_epsilon(reduced, "theorem5")
    with pytest.raises(ValueError):
        choose_epsilon(reduced, "largest")


def test_separate_single_graph_equals_joint(sampled_pair):
    _, _, sample, _ = sampled_pair
    cov = sample.matrices[0]
    psi = build_Psi([1.0], [], 1, 5)
    reduced = build_reduced([cov], psi, "each")
    epsilon = choose_epsilon(reduced)
    joint = solve_robust(reduced, epsilon=epsilon)
    (separate,) = solve_separate([cov], epsilons=[epsilon])
    np.testing.assert_array_equal(separate.matrices[0], joint.matrices[0])
    combined = combine_solutions([separate])
    assert combined.objective == joint.objective
    assert combined.epsilon == joint.epsilon
    assert combined.feasibility == joint.feasibility


def test_separate_noiseless_equals_joint(identity_covariance):
    psi = build_Psi([1.0], [], 1, 4)
    joint = solve_noiseless(build_Phi(identity_covariance, psi))
    (separate,) = solve_separate(identity_covariance, mode="noiseless")
    np.testing.assert_array_equal(separate.matrices[0], joint.matrices[0])


def test_combine_two_solutions(sampled_pair):
    _, _, sample, _ = sampled_pair
    epsilons = [
        choose_epsilon(build_reduced([cov], build_Psi([1.0], [], 1, 5)))
        for cov in sample.matrices
    ]
    solutions = solve_separate(sample, epsilons=epsilons)
    combined = combine_solutions(solutions)
    assert combined.shifts.k_graphs == 2
    assert combined.objective == pytest.approx(
        solutions[0].objective + solutions[1].objective
    )
    assert combined.epsilon == pytest.approx(np.hypot(*epsilons))
    assert combined.iterations == max(s.iterations for s in solutions)
    with pytest.raises(ValueError):
        combine_solutions([])


def test_separate_validates_lengths(sampled_pair):
    _, _, sample, _ = sampled_pair
    with pytest.raises(ValueError, match="alpha"):
        solve_separate(sample, alpha=[1.0])


def test_two_node_singleton_recovers_the_edge():
    covs = CovarianceSet((np.array([[2.0, 1.0], [1.0, 2.0]]),))
    expected = np.array([[0.0, 1.0], [1.0, 0.0]])
    noiseless = solve_noiseless(build_Phi(covs))
    np.testing.assert_allclose(noiseless.matrices[0], expected, atol=1e-12)
    reduced = build_reduced(covs, build_Psi([1.0], [], 1, 2))
    robust = solve_robust(reduced, epsilon=choose_epsilon(reduced))
    np.testing.assert_allclose(robust.matrices[0], expected, atol=1e-12)
    assert robust.converged


def test_anchored_geometry_whitens_commutator(sampled_pair):
    _, _, sample, psi = sampled_pair
    reduced = build_reduced(sample, psi, "each")
    geometry = anchored_geometry(reduced)
    rng = np.random.default_rng(5)
    for _ in range(5):
        y = rng.standard_normal(geometry.basis.shape[1])
        x = geometry.x_ls + geometry.basis @ y
        np.testing.assert_allclose(reduced.anchor @ x, 1.0, atol=1e-10)
        ball = y[: geometry.rank]
        expected = geometry.eps_min**2 + ball @ ball
        assert reduced.commutator_norm(x) ** 2 == pytest.approx(
            expected, rel=1e-8
        )


def test_robust_min_feasible_converges(sampled_pair):
    _, _, sample, psi = sampled_pair
    reduced = build_reduced(sample, psi, "each")
    x_ls, _ = minimal_epsilon_point(reduced)
    epsilon = choose_epsilon(reduced)
    solution = solve_robust(reduced, epsilon=epsilon)
    assert solution.converged
    assert solution.feasibility.commutator_residual <= epsilon
    assert solution.objective <= reduced.objective(x_ls) + 1e-12


def test_robust_converges_with_plain_admm(sampled_pair):
    _, _, sample, psi = sampled_pair
    reduced = build_reduced(sample, psi, "each")
    epsilon = 2.0 * minimal_epsilon_point(reduced)[1]
    relaxed = solve_robust(reduced, epsilon=epsilon)
    plain = solve_robust(reduced, SolverConfig(relaxation=1.0), epsilon)
    assert relaxed.converged and plain.converged
    assert plain.objective == pytest.approx(relaxed.objective, rel=1e-6)


def test_solutions_keep_objective_weights(rewired_pair, sampled_pair):
    _, model = rewired_pair
    psi = build_Psi([1.0, 2.0], {(0, 1): 0.5}, 2, 6)
    solution = solve_noiseless(build_Phi(model, psi, anchor="each"))
    np.testing.assert_array_equal(solution.shifts.alpha, [1.0, 2.0])
    assert solution.shifts.beta == {(0, 1): 0.5}

    _, _, sample, _ = sampled_pair
    rng = np.random.default_rng(1)
    distances = [pairwise_distances(rng.standard_normal((5, 30)))] * 2
    psi = build_Psi_weighted([3.0, 0.5], [2.0], distances, eta=0.7)
    reduced = build_reduced(sample, psi, "each")
    solution = solve_robust(reduced, epsilon=choose_epsilon(reduced))
    np.testing.assert_allclose(solution.shifts.alpha, [3.0, 0.5])
    assert solution.shifts.beta == {(0, 1): 2.0}
    epsilons = [
        choose_epsilon(build_reduced([cov], build_Psi([1.0], [], 1, 5)))
        for cov in sample.matrices
    ]
    separate = combine_solutions(
        solve_separate(sample, alpha=[3.0, 0.5], epsilons=epsilons)
    )
    np.testing.assert_array_equal(separate.shifts.alpha, [3.0, 0.5])
    assert separate.shifts.beta == {}


def test_doubling_weights_doubles_objective(rewired_pair, sampled_pair):
    _, model = rewired_pair
    single = build_Psi([1.0, 2.0], [0.5], 2, 6)
    double = build_Psi([2.0, 4.0], [1.0], 2, 6)
    base = solve_noiseless(build_Phi(model, single, anchor="each"))
    scaled = solve_noiseless(build_Phi(model, double, anchor="each"))
    assert scaled.objective == pytest.approx(2.0 * base.objective, rel=1e-6)

    _, _, sample, psi = sampled_pair
    reduced = build_reduced(sample, psi, "each")
    epsilon = 1.5 * minimal_epsilon_point(reduced)[1]
    base = solve_robust(reduced, epsilon=epsilon)
    doubled = build_reduced(sample, 2.0 * psi, "each")
    scaled = solve_robust(doubled, epsilon=epsilon)
    assert scaled.objective == pytest.approx(2.0 * base.objective, rel=1e-6)


def test_zero_similarity_joint_equals_separate(rewired_pair):
    _, model = rewired_pair
    psi = build_Psi([1.0, 2.0], [0.0], 2, 6)
    joint = solve_noiseless(build_Phi(model, psi, anchor="each"))
    separate = combine_solutions(
        solve_separate(model, mode="noiseless", alpha=[1.0, 2.0])
    )
    assert joint.objective == pytest.approx(separate.objective, rel=1e-6)
    assert joint.feasibility.commutator_residual < 1e-6
