import numpy as np
import pytest

from prefloc.attributes import (
    AnsweredQuery,
    Query,
    as_attribute_vector,
    sample_uniform,
    squared_distance,
)


def test_squared_distance_identity():
    assert squared_distance((0.5, 0.5), (0.5, 0.5)) == 0.0


def test_squared_distance_hand_case():
    # 0.3^2 + 0.4^2
    assert squared_distance((0.0, 0.0), (0.3, 0.4)) == pytest.approx(0.25, abs=1e-12)


def test_squared_distance_symmetry_random_pairs():
    rng = np.random.default_rng(1)
    for _ in range(100):
        a, b = rng.random(3), rng.random(3)
        assert squared_distance(a, b) == squared_distance(b, a)
        assert squared_distance(a, b) >= 0.0


def test_squared_distance_dimension_mismatch():
    with pytest.raises(ValueError):
        squared_distance((0.1, 0.2), (0.1, 0.2, 0.3))


def test_sample_uniform_bounds():
    points = sample_uniform(2, 1000, seed=7)
    assert points.shape == (1000, 2)
    assert np.all(points >= 0.0) and np.all(points <= 1.0)


def test_sample_uniform_deterministic():
    assert np.array_equal(sample_uniform(3, 50, seed=9), sample_uniform(3, 50, seed=9))


def test_sample_uniform_mean_close_to_half():
    points = sample_uniform(2, 100000, seed=3)
    means = points.mean(axis=0)
    assert np.all(means >= 0.49) and np.all(means <= 0.51)


@pytest.mark.parametrize("dimension,count", [(0, 10), (2, 0)])
def test_sample_uniform_rejects_bad_sizes(dimension, count):
    with pytest.raises(ValueError):
        sample_uniform(dimension, count, seed=1)


def test_vector_validation():
    with pytest.raises(ValueError):
        as_attribute_vector([0.2, 1.2])
    with pytest.raises(ValueError):
        as_attribute_vector([0.2, float("nan")])
    with pytest.raises(ValueError):
        as_attribute_vector([0.2, 0.3], dimension=3)
    with pytest.raises(ValueError):
        as_attribute_vector([])


def test_query_rejects_degenerate_pair():
    with pytest.raises(ValueError):
        Query(first=(0.4, 0.4), second=(0.4, 0.4))
    with pytest.raises(ValueError):
        Query(first=(0.4, 0.4), second=(0.4, 0.4 + 1e-9))


def test_query_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        Query(first=(0.4, 0.4), second=(0.4, 0.5, 0.6))


def test_answered_query_json_roundtrip():
    answered = AnsweredQuery(preferred=(0.25, 0.75), rejected=(0.5, 0.5))
    payload = answered.to_jsonable()
    assert payload == {"preferred": [0.25, 0.75], "rejected": [0.5, 0.5]}
    back = AnsweredQuery.from_jsonable(payload)
    assert np.array_equal(back.preferred, answered.preferred)
    assert np.array_equal(back.rejected, answered.rejected)
