import numpy as np
import pytest

from so3ir import catalog


def ni_alpha(beta: float, gamma: float) -> float:
    """First scale putting the compact twisted Stiefel metric on the nearly
    integrable surface: alpha*beta + 4*gamma*alpha - 25*beta*gamma = 0."""
    return 25.0 * beta * gamma / (beta + 4.0 * gamma)


def vir24_ricci_closed_form(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Printed closed forms for the Ricci diagonal of the compact family."""
    r1 = 2.0 * alpha / (25.0 * beta**2) + alpha / (50.0 * gamma**2)
    r2 = 1.0 / beta - 2.0 * alpha / (25.0 * beta**2)
    r4 = 1.0 / gamma - alpha / (50.0 * gamma**2)
    return np.array([r1, r2, r2, r4, r4])


@pytest.fixture(scope="session")
def bases():
    return catalog.so3ir_bases()


@pytest.fixture(scope="session")
def v511():
    return catalog.make_space("vir24", 5.0, 1.0, 1.0)


@pytest.fixture(scope="session")
def v111():
    return catalog.make_space("vir24", 1.0, 1.0, 1.0)


@pytest.fixture(scope="session")
def v_sasaki():
    return catalog.make_space("vir24", 25.0 / 36.0, 1.0 / 6.0, 1.0 / 12.0)


@pytest.fixture(scope="session")
def vtilde():
    return catalog.make_space("vtilde24", 125.0, 5.0, 1.0)


@pytest.fixture(scope="session")
def w_space():
    mu = catalog.wir_admissible_mu(12.0, 1.0)[0]
    return catalog.make_space("wir", 12.0, 1.0, 1.0, mu=mu)


@pytest.fixture(scope="session")
def su3_space():
    return catalog.make_space("su3_so3_isotropy")
