"""Mixed-radix encode/decode identities and the alternating schedule."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sidonbasis.ffpoly import PrimeModulus
from sidonbasis.gbase import DigitVector, MixedRadix, decode, encode, fmod

BASE35 = MixedRadix(PrimeModulus(3), 5)
BASE307 = MixedRadix(PrimeModulus(3), 307)


def test_fmod_examples():
    assert fmod(-1, 5) == 4
    assert fmod(7, 7) == 0
    assert fmod(8, 8) == 0
    assert fmod(0, 3) == 0
    with pytest.raises(ValueError):
        fmod(5, 0)
    with pytest.raises(ValueError):
        fmod(5, -2)


@given(st.integers(min_value=-(10**12), max_value=10**12), st.integers(min_value=1, max_value=10**9))
@settings(max_examples=200)
def test_fmod_is_representative(a, b):
    r = fmod(a, b)
    assert 0 <= r < b
    assert (a - r) % b == 0


def test_mixed_radix_validation():
    with pytest.raises(ValueError):
        MixedRadix(PrimeModulus(2), 5)
    with pytest.raises(ValueError):
        MixedRadix(PrimeModulus(3), 6)
    with pytest.raises(ValueError):
        BASE35.radix(0)


def test_radix_schedule():
    assert [BASE35.radix(i) for i in range(1, 7)] == [2, 5, 26, 5, 242, 5]
    assert BASE307.radix(3) == 26
    assert BASE307.radix(4) == 307


@given(st.integers(min_value=0, max_value=12))
def test_radix_product(n):
    assert BASE35.radix_product(n) == math.prod(BASE35.radix(i) for i in range(1, n + 1))
    # the even/odd split: k full levels weigh p^k * prod(q^{2i-1}-1)
    if n % 2 == 0:
        k = n // 2
        assert BASE35.radix_product(n) == 5**k * math.prod(3 ** (2 * i - 1) - 1 for i in range(1, k + 1))


def test_encode_examples():
    assert encode(BASE35, DigitVector((7,))) == 7
    assert encode(BASE35, DigitVector((0, 1))) == 2
    assert encode(BASE35, DigitVector((1, 1, 1, 1))) == 1 + 2 + 10 + 260
    assert encode(BASE35, DigitVector((1, 1, 1, 1))) == 273
    assert encode(BASE35, DigitVector(())) == 0


def test_decode_examples():
    assert decode(BASE35, 273, 4).digits == (1, 1, 1, 1)
    assert decode(BASE35, 0, 3).digits == (0, 0, 0)
    assert decode(BASE35, 99, 1).digits == (99,)
    with pytest.raises(ValueError):
        decode(BASE35, -1, 2)
    with pytest.raises(ValueError):
        decode(BASE35, 5, 0)


def canonical_vectors(base, max_len=9):
    def build(lengths):
        n = lengths[0]
        strategies = [st.integers(min_value=0, max_value=base.radix(i) - 1) for i in range(1, n)]
        strategies.append(st.integers(min_value=0, max_value=10**6))
        return st.tuples(*strategies).map(lambda ds: DigitVector(ds))

    return st.tuples(st.integers(min_value=1, max_value=max_len)).flatmap(build)


@given(canonical_vectors(BASE307))
@settings(max_examples=300)
def test_decode_encode_roundtrip(vec):
    assert vec.is_canonical(BASE307)
    n = encode(BASE307, vec)
    assert decode(BASE307, n, len(vec)).digits == vec.digits


@given(st.integers(min_value=0, max_value=3**400), st.integers(min_value=1, max_value=12))
@settings(max_examples=300)
def test_encode_decode_roundtrip(n, k):
    vec = decode(BASE307, n, k)
    assert vec.is_canonical(BASE307)
    assert encode(BASE307, vec) == n


def test_non_canonical_digits_still_encode_linearly():
    vec = DigitVector((5, 9, 40))  # all beyond their radixes
    assert not vec.is_canonical(BASE35)
    assert encode(BASE35, vec) == 5 + 9 * 2 + 40 * 10
    # bumping digit i adds exactly the weight of position i
    base_val = encode(BASE35, DigitVector((1, 1, 1)))
    assert encode(BASE35, DigitVector((1, 1, 2))) == base_val + BASE35.radix_product(2)
    assert encode(BASE35, DigitVector((1, 3, 1))) == base_val + 2 * BASE35.radix_product(1)


@given(st.integers(min_value=0, max_value=50), st.integers(min_value=1, max_value=50))
def test_monotone_in_top_digit(x, step):
    lo = encode(BASE35, DigitVector((1, 1, x)))
    hi = encode(BASE35, DigitVector((1, 1, x + step)))
    assert hi - lo == step * BASE35.radix_product(2)
    assert hi > lo


def test_is_canonical():
    assert DigitVector(()).is_canonical(BASE35)
    assert DigitVector((1, 4, 1000)).is_canonical(BASE35)
    assert not DigitVector((2, 0, 0)).is_canonical(BASE35)  # radix 1 is 2
    assert not DigitVector((1, 5, 0)).is_canonical(BASE35)  # radix 2 is 5
