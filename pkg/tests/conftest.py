import numpy as np
import pytest

from deadline_aloha import (
    NetworkParams,
    SimConfig,
    SolverConfig,
    TrafficParams,
    solve_fixed_point,
    uniform_deadline_pmf,
)

# Short-cycle dense-ish operating point used across the suite: T=4 with
# uniform deadlines, moderate access probability, desk-scale torus.


@pytest.fixture(scope="session")
def desk_net():
    return NetworkParams(intensity=0.05, link_distance=2.0, eta=4.0, theta=5.0)


@pytest.fixture(scope="session")
def desk_traffic():
    return TrafficParams(
        cycle_slots=4, aloha_p=0.5, deadline=uniform_deadline_pmf(1, 4)
    )


@pytest.fixture(scope="session")
def desk_solver():
    return SolverConfig(n_classes=25)


@pytest.fixture(scope="session")
def desk_sim():
    return SimConfig(
        side=100.0,
        n_cycles=502,
        warmup_cycles=2,
        seed=7,
        replications=5,
        min_attempts=50,
    )


@pytest.fixture(scope="session")
def desk_equilibrium(desk_net, desk_traffic, desk_solver):
    return solve_fixed_point(desk_net, desk_traffic, desk_solver)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
