import itertools

import pytest
from hypothesis import given, strategies as st

from xorforest.edge_space import EdgeCodec


def all_valid_names(n):
    """Brute-force oracle: the set of names of every legal pair."""
    codec = EdgeCodec(n)
    return {codec.encode(u, v): (u, v) for u, v in itertools.combinations(range(n), 2)}


def test_encode_examples_n8():
    codec = EdgeCodec(8)
    assert codec.encode(1, 3) == 2 * 9 + 4 == 22
    assert codec.encode(3, 1) == 22
    assert codec.encode(0, 7) == 1 * 9 + 8 == 17


def test_decode_examples_n8():
    codec = EdgeCodec(8)
    assert codec.decode(22) == (1, 3)
    assert codec.decode(0) is None


def test_decode_xor_of_two_names_is_invalid():
    # 22 ^ 17 = 7 has a zero high component; the brute-force name table
    # confirms no pair encodes to it.
    codec = EdgeCodec(8)
    garbage = codec.encode(1, 3) ^ codec.encode(0, 7)
    assert garbage == 7
    assert garbage not in all_valid_names(8)
    assert codec.decode(garbage) is None


@pytest.mark.parametrize("n", [2, 3, 8, 17, 64])
def test_round_trip_and_injectivity(n):
    codec = EdgeCodec(n)
    seen = {}
    for u, v in itertools.combinations(range(n), 2):
        name = codec.encode(u, v)
        assert name != 0
        assert name == codec.encode(v, u)
        assert name not in seen, f"collision {seen.get(name)} vs {(u, v)}"
        seen[name] = (u, v)
        assert codec.decode(name) == (u, v)


@pytest.mark.parametrize("n", [8, 64])
def test_decode_rejects_everything_but_names(n):
    valid = all_valid_names(n)
    codec = EdgeCodec(n)
    for word in range(codec.max_name + 2):
        got = codec.decode(word)
        if word in valid:
            assert got == valid[word]
        else:
            assert got is None


@given(st.integers(2, 1000), st.data())
def test_round_trip_property(n, data):
    codec = EdgeCodec(n)
    u = data.draw(st.integers(0, n - 1))
    v = data.draw(st.integers(0, n - 1).filter(lambda x: x != u))
    assert codec.decode(codec.encode(u, v)) == (min(u, v), max(u, v))


def test_contract_violations():
    codec = EdgeCodec(8)
    with pytest.raises(ValueError):
        codec.encode(3, 3)
    with pytest.raises(ValueError):
        codec.encode(0, 8)
    with pytest.raises(ValueError):
        codec.encode(-1, 2)
    with pytest.raises(ValueError):
        EdgeCodec(1)
