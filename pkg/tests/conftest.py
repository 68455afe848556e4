import math

import pytest
from hypothesis import strategies as st

from trustramsey import Economy, ProductionSpec, UtilitySpec, iso_economy

SQRT2 = math.sqrt(2.0)


@pytest.fixture
def iso_sqrt2():
    """f = 2 sqrt(L), phi(L) = L: L0 = 0.5 and Y* = sqrt(2)."""
    return Economy(
        utility=UtilitySpec(psi=1.0, eta=0.0, g=1.0),
        production=ProductionSpec(A=2.0, alpha=0.5),
        theta=0.9,
        tau_max=0.99,
        mode="IsoelasticNormalized",
    )


@pytest.fixture
def iso2():
    return iso_economy(2.0, 0.8)


@pytest.fixture
def general():
    """u = ln C - L^2/2 + G, f = sqrt(L), labour-income tax."""
    return Economy(
        utility=UtilitySpec(psi=1.0, eta=1.0, g=1.0),
        production=ProductionSpec(A=1.0, alpha=0.5),
        theta=0.9,
        tau_max=0.99,
    )


def general_labor_closed_form(tau, A=1.0, alpha=0.5, psi=1.0, eta=1.0):
    """L(tau) from (1-tau) alpha / (L (1 - tau alpha)) = psi L^eta (log consumption)."""
    return ((1 - tau) * alpha / (psi * (1 - tau * alpha))) ** (1 / (1 + eta))


@st.composite
def general_economies(draw):
    utility = UtilitySpec(
        psi=draw(st.floats(0.5, 2.0)),
        eta=draw(st.floats(0.0, 2.0)),
        g=draw(st.floats(0.5, 3.0)),
    )
    production = ProductionSpec(A=draw(st.floats(0.5, 3.0)), alpha=draw(st.floats(0.2, 0.8)))
    return Economy(utility=utility, production=production,
                   theta=draw(st.floats(0.05, 0.95)), tau_max=0.99)


@st.composite
def iso_economies(draw):
    return iso_economy(
        draw(st.floats(1.1, 6.0)),
        draw(st.floats(0.05, 0.95)),
        alpha=draw(st.floats(0.2, 0.8)),
        psi=draw(st.floats(0.5, 2.0)),
        eta=draw(st.floats(0.0, 2.0)),
    )
