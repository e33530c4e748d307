import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deadline_aloha import (
    ConvergenceError,
    NetworkParams,
    SolverConfig,
    TrafficParams,
    average_over_offsets,
    network_kpis,
    solve_fixed_point,
    uniform_deadline_pmf,
)
from deadline_aloha.chain import solve_chain


def test_slot_average_single_path_case():
    # always transmit, always decode: active exactly one slot per cycle
    traffic = TrafficParams(6, 1.0, uniform_deadline_pmf(1, 6))
    macro = average_over_offsets([solve_chain(1.0, traffic)])
    window = traffic.window
    assert macro.x1 == pytest.approx(1.0 / window, abs=1e-12)
    assert macro.ys == pytest.approx((window - 1.0) / window, abs=1e-12)
    assert macro.x0 == 0.0
    assert macro.yf == 0.0


@given(
    st.integers(min_value=3, max_value=10),
    st.floats(min_value=0.01, max_value=1.0),
    st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=2, max_size=5),
)
@settings(deadline=None)
def test_slot_average_is_distribution(cycle_slots, aloha_p, medians):
    traffic = TrafficParams(cycle_slots, aloha_p, uniform_deadline_pmf(1, cycle_slots))
    macro = average_over_offsets([solve_chain(s, traffic) for s in medians])
    assert macro.as_array().sum() == pytest.approx(1.0, abs=1e-10)


def test_empty_solution_list_rejected():
    with pytest.raises(ValueError):
        average_over_offsets([])


def test_isolated_network_converges_immediately(desk_traffic, desk_solver):
    eq = solve_fixed_point(NetworkParams(intensity=0.0), desk_traffic, desk_solver)
    assert eq.iterations <= 2
    assert eq.meta.degenerate
    assert np.all(eq.meta.medians == 1.0)


def test_desk_point_converges(desk_equilibrium, desk_solver):
    eq = desk_equilibrium
    assert eq.residual <= desk_solver.epsilon
    assert eq.macro.as_array().sum() == pytest.approx(1.0, abs=1e-10)
    assert len(eq.per_class) == desk_solver.n_classes
    assert len(eq.residual_history) == eq.iterations
    # medians come out ordered, one chain each
    assert np.all(np.diff(eq.meta.medians) > 0)


def test_convergence_across_load_grid():
    # dense network, long-ish cycle: the regime where iterates can oscillate
    net = NetworkParams(intensity=0.5)
    solver = SolverConfig(n_classes=10)
    for aloha_p in (0.2, 0.5, 0.8, 0.95):
        for tau_min in (1, 5, 9):
            traffic = TrafficParams(10, aloha_p, uniform_deadline_pmf(tau_min, 10))
            eq = solve_fixed_point(net, traffic, solver)
            assert eq.residual <= solver.epsilon


def test_single_class_reduces_to_one_chain(desk_net, desk_traffic):
    eq = solve_fixed_point(desk_net, desk_traffic, SolverConfig(n_classes=1))
    kpis = network_kpis(eq)
    assert kpis.success_prob == pytest.approx(eq.per_class[0].summary.success_prob, abs=0)


def test_non_convergence_raises_with_trace(desk_net, desk_traffic):
    solver = SolverConfig(n_classes=5, max_iters=2, epsilon=1e-14)
    with pytest.raises(ConvergenceError) as exc:
        solve_fixed_point(desk_net, desk_traffic, solver)
    assert exc.value.iterations == 2
    assert len(exc.value.history) == 2
    assert exc.value.residual > 0


def test_network_kpis_consistency(desk_equilibrium):
    kpis = network_kpis(desk_equilibrium)
    assert kpis.success_prob + kpis.timeout_prob == pytest.approx(1.0, abs=1e-10)
    assert kpis.latency_pmf.sum() == pytest.approx(1.0, abs=1e-10)
    assert 1.0 <= kpis.mean_success_latency <= 3.0
    per_class = [cs.summary.success_prob for cs in desk_equilibrium.per_class]
    assert kpis.success_prob == pytest.approx(np.mean(per_class), abs=1e-14)


def test_long_cycle_operating_point():
    # dense long-cycle network; exact targets live in the acceptance suite
    net = NetworkParams(intensity=0.5)
    traffic = TrafficParams(50, 0.5, uniform_deadline_pmf(1, 50))
    eq = solve_fixed_point(net, traffic, SolverConfig(n_classes=25))
    kpis = network_kpis(eq)
    assert kpis.success_prob == pytest.approx(0.7776, abs=5e-3)
    assert kpis.mean_success_latency == pytest.approx(3.393, abs=5e-2)
