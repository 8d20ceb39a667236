import pytest

from dividend_opt import ClaimModel, ModelParams, PenaltyModel, PremiumModel
from dividend_opt.tables import SWEEPS, locate_barrier


def make_params(premium="linear", claim_mu=0.3, penalty="zero", lam=0.1, q=0.05,
                c=1.0, eps=0.02, k=1.0, beta=0.5):
    if premium == "linear":
        prem = PremiumModel.linear(c, eps)
    elif premium == "constant":
        prem = PremiumModel.constant(c)
    elif premium == "rational":
        prem = PremiumModel.rational(c)
    else:
        raise ValueError(premium)
    if penalty == "zero":
        pen = PenaltyModel.zero()
    elif penalty == "constant":
        pen = PenaltyModel.constant(k)
    elif penalty == "linear":
        pen = PenaltyModel.linear(k, beta)
    else:
        raise ValueError(penalty)
    return ModelParams(prem, ClaimModel.exponential(claim_mu), pen, lam=lam, q=q)


@pytest.fixture(scope="session")
def table1_q05():
    """The workhorse instance: linear premium, q = 0.05 column of sweep 1."""
    return make_params()


@pytest.fixture(scope="session")
def table_solutions():
    """Session cache of (scale, barrier solution) per sweep column."""
    cache = {}

    def get(which, value):
        key = (which, value)
        if key not in cache:
            cache[key] = locate_barrier(SWEEPS[which].model_for(value))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def scale_q05(table_solutions):
    scale, _ = table_solutions(1, 0.05)
    return scale


@pytest.fixture(scope="session")
def barrier_q05(table_solutions):
    _, sol = table_solutions(1, 0.05)
    return sol
