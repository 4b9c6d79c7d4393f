import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from growthwave import (
    ScaleBandError,
    ScalePlan,
    ValidationError,
    Weight,
    default_band_ratio,
    doubling_constant,
    make_plan,
    power_type_gap,
    scale_sequence,
    smoothness_exponent,
    weight_from_descriptor,
)


def test_power_weight_values():
    w = Weight("power", a=1.0)
    assert w(0.5) == pytest.approx(2.0)
    assert w(2.0) == 1.0
    assert w(1.0) == 1.0


def test_logpow_weight_values():
    w = Weight("logpow", b=2.0)
    assert w(math.exp(-1)) == pytest.approx(4.0)
    assert w(3.0) == 1.0


def test_degenerate_table_rejected():
    with pytest.raises(ValidationError):
        Weight("table", table_t=np.array([0.01, 0.1, 1.0]), table_v=np.array([1.0, 1.0, 1.0]))


def test_non_monotone_table_rejected():
    with pytest.raises(ValidationError):
        Weight("table", table_t=np.array([0.01, 0.1, 1.0]), table_v=np.array([2.0, 3.0, 1.0]))


def test_table_weight_interpolates_monotonically():
    t = 2.0 ** -np.arange(10, -1, -1.0)
    v = (1 - np.log(t)) ** 1.0
    w = Weight("table", table_t=t, table_v=v)
    probe = np.geomspace(t[0], 1.0, 301)
    vals = w(probe)
    assert np.all(np.diff(vals) <= 1e-12)
    assert w(t[3]) == pytest.approx(v[3])
    # extrapolation below the samples keeps growing
    assert w(t[0] / 4) > w(t[0])


def test_doubling_constant_power_one():
    assert doubling_constant(Weight("power", a=1.0), 20) == pytest.approx(2.0)


def test_doubling_constant_at_least_one():
    # constant tail t > 1 contributes ratio 1
    assert doubling_constant(Weight("power", a=0.3), 8) >= 1.0


def test_doubling_constant_logpow_closed_form():
    # ratio (1 - ln t)/(1 - ln 2t) is maximized at t = 1/2 on the grid
    d = doubling_constant(Weight("logpow", b=1.0), 20)
    assert d == pytest.approx(1.0 + math.log(2.0), rel=1e-12)


def test_iterated_doubling_bound():
    for w in (Weight("power", a=1.5), Weight("logpow", b=1.0)):
        d = doubling_constant(w, 16)
        t = 2.0 ** (-np.arange(0, 33) / 4.0)
        for k in (1, 2, 5):
            assert np.all(w(t / 2**k) <= d**k * w(t) * (1 + 1e-9))


def test_scale_sequence_power_one_A2():
    alphas = scale_sequence(Weight("power", a=1.0), 2.0, 10)
    assert alphas == list(range(11))


def test_scale_sequence_starts_at_zero():
    for w in (Weight("power", a=0.7), Weight("logpow", b=2.0)):
        assert scale_sequence(w, 3.0, 3)[0] == 0


def test_scale_sequence_logpow_A_e():
    # smallest alpha with 1 + alpha ln 2 >= e^l
    alphas = scale_sequence(Weight("logpow", b=1.0), math.e, 5)
    expected = [0] + [math.ceil((math.e**l - 1) / math.log(2)) for l in range(1, 6)]
    assert alphas == expected == [0, 3, 10, 28, 78, 213]


def test_smoothness_exponent_power_15():
    w = Weight("power", a=1.5)
    alphas = scale_sequence(w, default_band_ratio(w), 8)
    m, gamma = smoothness_exponent(w, alphas)
    assert m == 3
    assert 0 < gamma < 1


def test_smoothness_exponent_power_one_gamma():
    w = Weight("power", a=1.0)
    m, gamma = smoothness_exponent(w, scale_sequence(w, 2.0, 10))
    assert m == 2
    assert gamma == pytest.approx(0.5)


def test_smoothness_exponent_logpow():
    w = Weight("logpow", b=1.0)
    m, _ = smoothness_exponent(w, scale_sequence(w, math.e, 5))
    assert m == 2


def test_power_type_gap_values():
    w1 = Weight("power", a=1.0)
    assert power_type_gap(scale_sequence(w1, 2.0, 10)) == 1
    w2 = Weight("power", a=0.5)
    assert power_type_gap(scale_sequence(w2, 2.0, 10)) == 2
    w3 = Weight("logpow", b=1.0)
    assert power_type_gap(scale_sequence(w3, math.e, 5)) is None


def test_make_plan_invariants_and_tail_bound():
    for w, A in ((Weight("power", a=1.0), 2.0),
                 (Weight("power", a=0.5), None),
                 (Weight("logpow", b=1.0), math.e)):
        plan = make_plan(w, A=A, l_max=8)
        alphas = np.array(plan.alphas, float)
        log2A = math.log2(plan.A)
        log2v = w.log2v_at_dyadic(alphas)
        ls = np.arange(len(alphas))
        assert np.all(log2v >= ls * log2A - 1e-9)
        assert np.all(log2v < (ls + 1) * log2A)
        # band ratios certified below gamma < 1
        rho = -plan.m * alphas + log2v
        assert np.all(np.diff(rho) <= math.log2(plan.gamma) + 1e-9)
        # geometric tail of 2^(m(a_L - a_(l-1))) v(2^-a_l)/v(2^-a_L): each term
        # past the immediate successor is <= gamma^(l-1-L) A^2, so the tail
        # from l = L+2 on stays below gamma A^2/(1-gamma)
        bound = plan.gamma * plan.A**2 / (1 - plan.gamma)
        for L in range(plan.l_max):
            terms = [
                2.0 ** (plan.m * (alphas[L] - alphas[l - 1]) + log2v[l] - log2v[L])
                for l in range(L + 2, plan.l_max + 1)
            ]
            assert sum(terms) <= bound + 1e-9


def test_band_missed_diagnostic_names_level():
    # a table weight that jumps far past the second band of A = 2
    t = np.array([1e-4, 2e-4, 0.5, 1.0])
    v = np.array([4096.0, 4095.0, 1.5, 1.0])
    w = Weight("table", table_t=t, table_v=v)
    with pytest.raises(ScaleBandError) as err:
        scale_sequence(w, 2.0, 6)
    assert err.value.level >= 1


def test_weight_descriptor_round_trip():
    for desc in ({"family": "power", "a": 1.5},
                 {"family": "logpow", "b": 1.0}):
        w = weight_from_descriptor(desc)
        assert w.descriptor()["family"] == desc["family"]
    w = weight_from_descriptor(
        {"family": "table", "t": [0.01, 0.1, 1.0], "v": [10.0, 3.0, 1.0]})
    assert w(0.1) == pytest.approx(3.0)


def test_plan_json_round_trip():
    plan = make_plan(Weight("power", a=1.0), A=2.0, l_max=6)
    clone = ScalePlan.from_json(plan.to_json())
    assert clone == plan


@settings(max_examples=25, deadline=None)
@given(a=st.floats(min_value=0.2, max_value=3.0))
def test_power_plan_properties(a):
    w = Weight("power", a=a)
    plan = make_plan(w, l_max=6)
    assert plan.alphas[0] == 0
    assert all(x < y for x, y in zip(plan.alphas, plan.alphas[1:]))
    assert 0 < plan.gamma < 1
    # monotone certificate: m-1 >= a always suffices for t^(m-1) t^-a
    assert plan.m >= math.ceil(a + 1) - 1


def test_block_of_level():
    plan = make_plan(Weight("power", a=0.5), A=2.0, l_max=5)  # alphas 0,2,4,6,8,10
    assert plan.block_of_level(0) == 0
    assert plan.block_of_level(1) == 1
    assert plan.block_of_level(2) == 1
    assert plan.block_of_level(3) == 2
    assert plan.block_of_level(10) == 5
    assert plan.block_of_level(11) == 6  # trailing truncated block
