import math

import pytest

import proxmom


def test_exports():
    for name in ("nnpca", "quadratic", "quartic", "run", "trace_csv", "run_checks"):
        assert name in proxmom.__all__


def test_nnpca_problem_shape():
    prob = proxmom.nnpca(n=30, d=10, gamma=4.0, seed=7)
    assert prob.dim == 10
    assert prob.n_components == 30
    assert prob.lipschitz > 0.0
    assert math.isnan(prob.f_star)
    x0 = prob.initial_point(seed=3)
    assert len(x0) == 10
    assert min(x0) >= 0.0
    assert abs(sum(v * v for v in x0) - 1.0) < 1e-12


def test_quadratic_known_minimum():
    prob = proxmom.quadratic([1.0, 3.0, 9.0], seed=2)
    assert prob.lipschitz == 9.0
    assert prob.f_star == 0.0
    x0 = prob.initial_point(seed=1)
    tr = proxmom.run(prob, "apgnc", x0, eta=0.05 / prob.lipschitz, max_iters=2000)
    assert tr.final_F < 1e-10


def test_run_deterministic():
    prob = proxmom.nnpca(n=30, d=10, gamma=4.0, seed=7)
    x0 = prob.initial_point(seed=3)
    eta = 0.05 / prob.lipschitz
    a = proxmom.run(prob, "apgnc", x0, eta=eta, max_iters=100, seed=11)
    b = proxmom.run(prob, "apgnc", x0, eta=eta, max_iters=100, seed=11)
    assert proxmom.trace_csv("apgnc", 11, a) == proxmom.trace_csv("apgnc", 11, b)
    assert len(a.F_x) == 100
    assert a.terminated_by == "max_iters"


def test_descent_chain():
    prob = proxmom.nnpca(n=30, d=10, gamma=4.0, seed=7)
    x0 = prob.initial_point(seed=3)
    tr = proxmom.run(prob, "apgnc", x0, eta=0.05 / prob.lipschitz, max_iters=200)
    for k in range(len(tr.F_x)):
        assert tr.F_x[k] <= tr.F_y[k] + 1e-10
        if k + 1 < len(tr.F_y):
            assert tr.F_y[k + 1] <= tr.F_x[k] + 1e-10


def test_frozen_constants():
    assert proxmom.t_update(1.0) == 1.6180339887498949
    d1, _ = proxmom.theorem_constants(1.0, 0.25, theta=0.5, c=1.0)
    assert abs(d1 - 50.0 / 3.0) < 1e-12
    _, d2 = proxmom.theorem_constants(1.0, 0.2, theta=0.5, c=1.0)
    assert abs(d2 - 1.0 / 36.0) < 1e-14
    d, contraction = proxmom.svrg_constants(1.0, 0.25, 1, c=1.0)
    assert abs(d - 25.25) < 1e-12
    assert abs(contraction - 25.25 / 26.25) < 1e-12
    assert proxmom.check_rho_condition(0.25, 1)
    assert not proxmom.check_rho_condition(0.25, 2)
    assert proxmom.check_rho_condition(0.1, 2, inexact=True)


def test_svrg_pass_accounting():
    prob = proxmom.nnpca(n=10, d=6, gamma=4.0, seed=9)
    x0 = prob.initial_point(seed=2)
    tr = proxmom.run(prob, "svrg_apgnc", x0, eta=0.01, max_iters=0,
                     m=10, max_epochs=5, seed=4)
    assert tr.passes == [3.0 * (k + 1) for k in range(5)]


def test_rate_fits():
    fit = proxmom.fit_power_rate([1.0 / k ** 2 for k in range(1, 61)])
    assert abs(fit.parameter - 2.0) < 1e-9
    assert fit.model == "power"
    fit2 = proxmom.fit_linear_rate([3.0 * 0.5 ** k for k in range(50)])
    assert abs(fit2.parameter - 0.5) < 1e-12
    assert fit2.r_squared > 1.0 - 1e-12


def test_diagnostics():
    assert proxmom.residual_bound(1.0, 2.0, [1.0, 1.0], [0.7, 1.0]) == pytest.approx(0.45)
    assert proxmom.kkt_residual_nonneg([0.5, -0.3], [2.0, 0.0]) == pytest.approx(0.5)
    prob = proxmom.quadratic([1.0, 2.0], seed=3)
    lhs, rhs, holds = proxmom.descent_lemma(prob, [1.0, 0.5], eta=0.1)
    assert holds
    assert lhs <= rhs + 1e-12


def test_error_paths():
    prob = proxmom.quadratic([1.0, 2.0], seed=3)
    x0 = prob.initial_point(seed=1)
    with pytest.raises(ValueError):
        proxmom.run(prob, "sgd", x0, eta=0.1, max_iters=10)
    unbounded = proxmom.nnpca(n=20, d=8, gamma=0.0, seed=5)
    with pytest.raises(proxmom.DivergedError):
        proxmom.run(unbounded, "apgnc", unbounded.initial_point(seed=1),
                    eta=0.3 / unbounded.lipschitz, max_iters=20000)


def test_self_checks():
    results = proxmom.run_checks(full=False)
    assert results
    failed = [name for name, ok, detail in results if not ok]
    assert failed == []
