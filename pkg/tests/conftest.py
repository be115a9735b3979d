import pytest

from coronagrid import MultigridSpec, Patch, corona_sequence, nearest_crossing


@pytest.fixture(scope="session")
def pentagrid():
    return MultigridSpec.dfold(5, 0.5)


@pytest.fixture(scope="session")
def square():
    return MultigridSpec.from_angles([0, 90], [0.0, 0.0])


@pytest.fixture(scope="session")
def pentagrid_run(pentagrid):
    """Single-tile corona run to n=80, shared by the slower analysis tests."""
    seed = Patch(frozenset([nearest_crossing(pentagrid)]))
    return corona_sequence(pentagrid, seed, 80)
