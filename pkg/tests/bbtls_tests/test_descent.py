import math

import numpy as np
import pytest

from bbtls.basetypes import SecantPair
from bbtls.descent import (Method, RunStatus, Safeguard, SafeguardKind, SolverConfig, StopKind, StoppingRule,
                           check_stop, first_step, propose_steplength, replay_trace, run)
from bbtls.exceptions import ConfigError, DegenerateStep, DomainError, MissingMinimizer
from bbtls.problems import Problem, QuadraticSpec, quadratic, rosenbrock
from bbtls.steplengths import bb1, bb2, bb3

GOLDEN = (math.sqrt(5) - 1) / 2


def _linear_f(x):
    return float(np.sum(x))

def _linear_grad(x):
    return np.ones_like(x)


def linear_problem():
    """Constant gradient, so every secant pair has y = 0"""
    return Problem(name="linear", dim=2, f=_linear_f, grad=_linear_grad, start=np.zeros(2))


def pair(s, y):
    return SecantPair(np.array(s, dtype=float), np.array(y, dtype=float))


def test_propose_steplength():
    config = SolverConfig()
    assert propose_steplength(Method.bb1, pair([1, 1], [1, 1]), 0.3, config) == 1
    assert propose_steplength("bb3", pair([1, 0], [1, 1]), 0.3, config) == pytest.approx(GOLDEN, rel=1e-12)
    assert propose_steplength("bb2", pair([1, 0], [1, 1]), 0.3, config) == 1
    assert propose_steplength("fixed", pair([1, 0], [1, 1]), 0.3, SolverConfig(alpha0=0.25)) == 0.25


def test_propose_degenerate():
    orthogonal = pair([1, 0], [0, 1])
    with pytest.raises(DegenerateStep):
        propose_steplength("bb2", orthogonal, 0.01, SolverConfig(safeguard="none"))
    assert propose_steplength("bb2", orthogonal, 0.01, SolverConfig(safeguard="fallback-on-degenerate")) == 0.01
    assert propose_steplength("bb3", orthogonal, 0.01, SolverConfig(safeguard="fallback")) == 0.01
    assert propose_steplength("bb1", orthogonal, 0.01, SolverConfig(safeguard="clamp:0.1,1")) == 0.1


def test_propose_negative_curvature():
    negative = pair([1, 0], [-1, 0])
    assert propose_steplength("bb1", negative, 0.01, SolverConfig(safeguard="none")) == -1
    assert propose_steplength("bb1", negative, 0.01, SolverConfig(safeguard="fallback")) == 0.01
    assert propose_steplength("bb1", negative, 0.01, SolverConfig(safeguard="clamp:1e-3,10")) == 1e-3


def test_propose_clamp():
    config = SolverConfig(safeguard=Safeguard(SafeguardKind.clamp, 0.1, 0.5))
    assert propose_steplength("bb2", pair([1, 0], [1, 1]), 0.3, config) == 0.5
    assert propose_steplength("bb1", pair([1, 0], [1, 1]), 0.3, config) == 0.5
    assert propose_steplength("bb1", pair([1, 0], [10, 0]), 0.3, config) == 0.1


def test_safeguard_parse():
    assert Safeguard.parse("none").kind is SafeguardKind.none
    assert Safeguard.parse("fallback").kind is SafeguardKind.fallback
    clamp = Safeguard.parse("clamp:1e-3,1e3")
    assert (clamp.kind, clamp.alpha_min, clamp.alpha_max) == (SafeguardKind.clamp, 1e-3, 1e3)
    assert str(clamp) == "clamp:0.001,1000.0"
    for bad in "clamp:1,0.1", "clamp:0,1", "clamp:a,b", "sometimes":
        with pytest.raises(ConfigError):
            Safeguard.parse(bad)


def test_solver_config():
    config = SolverConfig(method="bb1", safeguard="clamp:0.1,1",
                          stopping=StoppingRule("gradnorm", 1e-6))
    assert config.method is Method.bb1
    assert config.safeguard.kind is SafeguardKind.clamp
    assert config.stopping.kind is StopKind.gradnorm
    with pytest.raises(ConfigError):
        SolverConfig(method="bb4")
    with pytest.raises(ConfigError):
        SolverConfig(alpha0=0)
    with pytest.raises(ConfigError):
        SolverConfig(max_iter=0)
    with pytest.raises(ConfigError):
        StoppingRule(epsilon=0)


def test_first_step():
    assert first_step([0, 0], [1, 1], 1).tolist() == [-1, -1]
    assert first_step([-1.2, 1], [-215.6, -88], 1e-3).tolist() == pytest.approx([-0.9844, 1.088], rel=1e-12)
    with pytest.raises(DomainError):
        first_step([0, 0], [1, 1], 0)


def test_check_stop():
    problem = rosenbrock()
    target = StoppingRule(StopKind.target, 1e-8)
    assert check_stop([1, 1], [0, 0], target, problem)
    assert check_stop([1.05, 1], [0, 0], StoppingRule(StopKind.target, 0.1), problem)
    assert not check_stop([1.05, 1], [0, 0], StoppingRule(StopKind.target, 0.01), problem)
    assert check_stop([0, 0], [3, 4], StoppingRule(StopKind.gradnorm, 5), problem)
    assert not check_stop([0, 0], [3, 4], StoppingRule(StopKind.gradnorm, 4.9), problem)
    with pytest.raises(MissingMinimizer):
        check_stop([0, 0], [1, 1], target, linear_problem())


def test_two_iteration_run():
    """On f = |x|^2/2 the first BB1 step is exact"""
    problem = quadratic(QuadraticSpec(np.array([1.0, 1.0])))
    config = SolverConfig(method="bb1", alpha0=0.5, stopping=StoppingRule(StopKind.gradnorm, 1e-12))
    result = run(problem, config, x0=[1, 1])
    assert result.status is RunStatus.converged
    assert result.iterations == 2
    assert [record.k for record in result.trace] == [0, 1, 2]
    assert result.trace[0].alpha is None
    assert result.trace[1].x.tolist() == [0.5, 0.5]
    assert result.trace[2].alpha == 1
    assert result.final_x.tolist() == [0, 0]


def test_max_iter():
    result = run(rosenbrock(), SolverConfig(method="bb3", max_iter=1))
    assert result.status is RunStatus.max_iter
    assert result.iterations == 1
    assert len(result.trace) == 2


def test_start_at_minimizer():
    problem = rosenbrock()
    result = run(problem, SolverConfig(), x0=problem.minimizer)
    assert result.status is RunStatus.converged
    assert result.iterations == 0
    assert len(result.trace) == 1


def test_missing_minimizer():
    with pytest.raises(MissingMinimizer):
        run(linear_problem(), SolverConfig())
    with pytest.raises(ConfigError):
        run(rosenbrock(), SolverConfig(), x0=[0, 0, 0])


def test_degenerate_run():
    gradnorm = StoppingRule(StopKind.gradnorm, 1e-8)
    result = run(linear_problem(), SolverConfig(method="bb1", stopping=gradnorm))
    assert result.status is RunStatus.degenerate
    assert result.iterations == 1
    # with a fallback the run keeps its previous steplength
    result = run(linear_problem(), SolverConfig(method="bb1", stopping=gradnorm, safeguard="fallback", max_iter=10))
    assert result.status is RunStatus.max_iter
    assert result.iterations == 10
    assert all(record.alpha == 1e-3 for record in result.trace[1:])


def test_diverged_run():
    problem = quadratic(QuadraticSpec(np.array([1.0, 10.0])))
    result = run(problem, SolverConfig(method="fixed", alpha0=1.0))
    assert result.status is RunStatus.diverged
    assert result.iterations < 5000
    assert not np.all(np.isfinite(result.final_x)) or not math.isfinite(result.trace[-1].f_value)


@pytest.mark.parametrize("method", ["bb1", "bb2", "bb3"])
def test_quadratic_convergence(method):
    problem = quadratic(QuadraticSpec(np.array([1.0, 10.0])))
    result = run(problem, SolverConfig(method=method))
    assert result.status is RunStatus.converged
    assert problem.distance_to_minimizer(result.final_x) <= 1e-8
    assert replay_trace(problem, result)


def test_replay_and_determinism():
    problem = rosenbrock()
    config = SolverConfig(method="bb3", stopping=StoppingRule(StopKind.target, 1e-4))
    first = run(problem, config)
    second = run(problem, config)
    assert replay_trace(problem, first)
    assert first.status is second.status
    assert first.iterations == second.iterations
    assert len(first.trace) == len(second.trace)
    for a, b in zip(first.trace, second.trace):
        assert np.array_equal(a.x, b.x)
        assert a.alpha == b.alpha
    # a tampered trace no longer replays
    first.trace[1].x[0] += 1e-12
    assert not replay_trace(problem, first)


def test_trace_steplengths_sandwiched():
    """Along a bb3 run, every steplength lies between bb1 and bb2 of the pair that produced it"""
    problem = quadratic(QuadraticSpec(np.array([1.0, 10.0])))
    result = run(problem, SolverConfig(method="bb3"))
    trace = result.trace
    for prev, cur, nxt in zip(trace, trace[1:], trace[2:]):
        p = SecantPair(cur.x - prev.x, problem.grad(cur.x) - problem.grad(prev.x))
        if p.sy > 0:
            assert nxt.alpha == bb3(p)
            assert bb1(p) * (1 - 1e-12) <= nxt.alpha <= bb2(p) * (1 + 1e-12)


@pytest.mark.parametrize("method", ["bb1", "bb2", "bb3"])
def test_quadratic_gradnorm_within_100(method):
    problem = quadratic(QuadraticSpec(np.array([1.0, 10.0])))
    config = SolverConfig(method=method, max_iter=100, stopping=StoppingRule(StopKind.gradnorm, 1e-8))
    result = run(problem, config, x0=[1, 1])
    assert result.status is RunStatus.converged
    assert result.iterations <= 100
