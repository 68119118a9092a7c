import math
import random

import pytest

from clusterdel.branching import branching_number, chain_vector, compose_chain_vector


def test_known_roots():
    assert branching_number((2, 2)) == pytest.approx(math.sqrt(2), abs=1e-6)
    assert branching_number((3, 3)) == pytest.approx(2 ** (1 / 3), abs=1e-6)
    assert branching_number((1, 1)) == pytest.approx(2.0, abs=1e-6)
    assert branching_number((1, 4)) == pytest.approx(1.380278, abs=1e-6)


def test_quoted_bounds():
    assert branching_number((3, 3)) < 1.26
    assert branching_number((1, 4)) < 1.381
    assert branching_number((2, 2)) < 1.415
    assert branching_number((5, 8, 5, 8, 5, 8, 5, 8)) < 1.404
    assert branching_number((5, 8, 5, 8, 3, 6)) < 1.402
    assert branching_number((3, 6, 3, 6)) < 1.398


def test_single_entry_is_one():
    assert branching_number((1,)) == 1.0
    assert branching_number((7,)) == 1.0


def test_root_residual_small():
    rng = random.Random(1)
    for _ in range(200):
        v = tuple(rng.randint(1, 9) for _ in range(rng.randint(2, 8)))
        x = branching_number(v)
        assert abs(sum(x ** -a for a in v) - 1.0) <= 1e-8


def test_permutation_invariance():
    rng = random.Random(2)
    for _ in range(50):
        v = [rng.randint(1, 9) for _ in range(rng.randint(2, 6))]
        shuffled = v[:]
        rng.shuffle(shuffled)
        assert branching_number(v) == pytest.approx(branching_number(shuffled), abs=1e-9)


def test_monotonicity():
    rng = random.Random(3)
    for _ in range(50):
        v = [rng.randint(2, 9) for _ in range(rng.randint(2, 6))]
        base = branching_number(v)
        # appending an entry strictly increases the root
        assert branching_number(v + [rng.randint(1, 9)]) > base
        # increasing any single entry strictly decreases it
        i = rng.randrange(len(v))
        bumped = v[:]
        bumped[i] += 1
        assert branching_number(bumped) < base


def test_invalid_vectors():
    with pytest.raises(ValueError):
        branching_number(())
    with pytest.raises(ValueError):
        branching_number((0, 2))


def test_chain_vector_values():
    assert chain_vector(0) == (1,)
    assert chain_vector(2) == (3, 5, 5, 7)
    assert len(chain_vector(5)) == 2 ** 5
    # sum of multiplicities is 2^p for each p
    for p in range(8):
        assert len(chain_vector(p)) == 2 ** p


def test_chain_vector_5_root():
    x = branching_number(chain_vector(5))
    assert 1.400 < x < 1.410
    assert round(x, 3) == 1.406


def test_compose_chain_vector():
    assert compose_chain_vector([(0, 2, 1)]) == (3, 5, 5, 7)
    assert compose_chain_vector([(0, 0, 1)]) == (1,)
    assert compose_chain_vector([(0, 2, 2)]) == (4, 6, 6, 8)
    # concatenation over leaves
    two = compose_chain_vector([(0, 1, 1), (2, 0, 1)])
    assert sorted(two) == sorted(compose_chain_vector([(0, 1, 1)]) + compose_chain_vector([(2, 0, 1)]))


def test_compose_rejects_bad_leaves():
    with pytest.raises(ValueError):
        compose_chain_vector([(0, 2, 0)])
    with pytest.raises(ValueError):
        compose_chain_vector([(-1, 2, 1)])
    with pytest.raises(ValueError):
        compose_chain_vector([])
