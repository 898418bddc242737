import pytest
from hypothesis import given
from hypothesis import strategies as st

from ng_greedy import StrategyParams

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@given(alpha=unit, gamma=unit, r_leader=unit)
def test_accepts_unit_interval(alpha, gamma, r_leader):
    p = StrategyParams(alpha=alpha, gamma=gamma, r_leader=r_leader)
    assert 0.0 <= p.alpha <= 1.0
    assert 0.0 <= p.gamma <= 1.0
    assert 0.0 <= p.r_leader <= 1.0


def test_default_leader_share():
    assert StrategyParams(0.3, 0.5).r_leader == 0.4


@pytest.mark.parametrize("field", ["alpha", "gamma", "r_leader"])
@pytest.mark.parametrize("bad", [-0.1, 1.0000001, 17.0, float("nan")])
def test_rejects_out_of_range(field, bad):
    kwargs = {"alpha": 0.3, "gamma": 0.5, "r_leader": 0.4}
    kwargs[field] = bad
    with pytest.raises(ValueError, match=field):
        StrategyParams(**kwargs)


def test_frozen():
    p = StrategyParams(0.3, 0.5)
    with pytest.raises(AttributeError):
        p.alpha = 0.4
