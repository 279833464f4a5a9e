import numpy as np
import pytest

import itsa


@pytest.fixture(scope="session")
def case_study():
    return itsa.load_case_study()


@pytest.fixture(scope="session")
def full_design(case_study):
    """Segmented design with all three confounders, changepoint week 53."""
    return itsa.build_design(
        case_study,
        itsa.InterventionSpec(53),
        ["admissions", "discharges", "occupancy"],
    )


@pytest.fixture(scope="session")
def full_fit(full_design):
    return itsa.fit_ols(full_design)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
