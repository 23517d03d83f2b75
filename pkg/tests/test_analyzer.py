"""Analyzer tests: collision search and attribution, decomposition,
representation enumeration, Monte Carlo coverage."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sidonbasis.analyzer import (
    CollisionWitness,
    attribute_collision,
    decompose,
    exact_triple_count,
    find_representations,
    monte_carlo_coverage,
    verify_sidon,
)
from sidonbasis.auxset import AuxSet, YTable, triple_sumset_bits
from sidonbasis.builder import (
    Params,
    SequenceEntry,
    SidonSequence,
    build_moduli,
    mixed_radix,
)
from sidonbasis.ffpoly import Poly, PrimeModulus
from sidonbasis.gbase import DigitVector, encode

Q3 = PrimeModulus(3)


def test_verify_sidon_examples():
    assert verify_sidon([1, 2, 5, 11]) == []
    assert verify_sidon([7]) == []
    assert verify_sidon([]) == []
    wits = verify_sidon([1, 2, 3, 4])
    pairs = {(frozenset((w.n1, w.n2)), frozenset((w.n3, w.n4))) for w in wits}
    assert (frozenset((1, 4)), frozenset((2, 3))) in {
        (frozenset(a), frozenset(b)) for a, b in ((p2, p1) for p1, p2 in pairs)
    } | pairs
    with pytest.raises(ValueError):
        verify_sidon([3, 3, 5])


def brute_collisions(vals):
    seen = {}
    hits = set()
    for j in range(len(vals)):
        for i in range(j + 1):
            s = vals[i] + vals[j]
            if s in seen and seen[s] != (vals[i], vals[j]):
                hits.add(s)
            else:
                seen[s] = (vals[i], vals[j])
    return hits


@given(st.integers(min_value=0, max_value=10**9))
@settings(max_examples=200)
def test_verify_sidon_matches_brute(seed):
    rng = random.Random(seed)
    vals = sorted(rng.sample(range(1, 500), rng.randint(0, 40)))
    wits = verify_sidon(vals)
    assert {w.n1 + w.n2 for w in wits} == brute_collisions(vals)
    for w in wits:
        assert w.n1 + w.n2 == w.n3 + w.n4
        assert {w.n1, w.n2} != {w.n3, w.n4}


def test_verify_sidon_on_built_prefix(seq307):
    assert verify_sidon(seq307.values[:300]) == []


def test_collision_witness_validation():
    with pytest.raises(ValueError):
        CollisionWitness(1, 2, 3, 5)
    with pytest.raises(ValueError):
        CollisionWitness(1, 4, 4, 1)


def mock_entry(params, f, k, e, r, s):
    digits = []
    for ei, ri in zip(e, r):
        digits.extend((ei, ri))
    digits.append(s)
    n = encode(mixed_radix(params), DigitVector(tuple(digits)))
    return SequenceEntry(f=f, k=k, e=tuple(e), r=tuple(r), s=s, n=n)


@pytest.fixture(scope="module")
def mock_params(aux307):
    return Params(q=Q3, aux=aux307, c=Fraction(7, 20), k_min=1, k_max=2, seed=0)


def test_attribute_equal_k_collision(mock_params):
    # two different factorizations of (t+1)^2 (t+2) with balanced digits:
    # e-digit sums and r/s sums agree, so the encoded sums collide
    params = mock_params
    a = params.aux.A[0]
    e1 = mock_entry(params, Poly(Q3, (2, 0, 1)), 1, (1,), (a,), 5)  # (t+1)(t+2)
    e2 = mock_entry(params, Poly(Q3, (1, 1)), 1, (0,), (a,), 5)  # t+1
    e3 = mock_entry(params, Poly(Q3, (1, 2, 1)), 1, (0,), (a,), 4)  # (t+1)^2
    e4 = mock_entry(params, Poly(Q3, (2, 1)), 1, (1,), (a,), 6)  # t+2
    assert e1.n + e2.n == e3.n + e4.n
    seq = SidonSequence(
        params, build_moduli(params), tuple(sorted((e1, e2, e3, e4), key=lambda x: x.n))
    )
    w = CollisionWitness(e1.n, e2.n, e3.n, e4.n, entries=(e1, e2, e3, e4))
    audit = attribute_collision(seq, w)
    row = audit.rows[0]
    assert (row.kind_left, row.kind_right) == ("paired", "paired")
    assert row.x_match_left and row.x_match_right
    assert row.y_match_left and row.y_match_right
    assert row.y_in_pair_sums and not row.y_in_members
    assert audit.boundary_index == 1
    assert audit.shared_levels == 1
    assert audit.products_congruent
    assert audit.failed_margin.startswith("none")


def test_attribute_detects_product_mismatch(mock_params):
    params = mock_params
    a = params.aux.A[0]
    e1 = mock_entry(params, Poly(Q3, (2, 0, 1)), 1, (1,), (a,), 5)
    e2 = mock_entry(params, Poly(Q3, (1, 1)), 1, (0,), (a,), 5)
    e3 = mock_entry(params, Poly(Q3, (1, 2, 1)), 1, (0,), (a,), 4)
    # claims the digits of t+2 but carries the polynomial t+1
    e4 = mock_entry(params, Poly(Q3, (1, 1)), 1, (1,), (a,), 6)
    seq = SidonSequence(
        params, build_moduli(params), tuple(sorted((e1, e2, e3, e4), key=lambda x: x.n))
    )
    w = CollisionWitness(e1.n, e2.n, e3.n, e4.n, entries=(e1, e2, e3, e4))
    audit = attribute_collision(seq, w)
    assert not audit.products_congruent


def test_attribute_mixed_k_collision(mock_params):
    # a level-2 and a level-1 entry on each side; the lower entry's top
    # digit bleeds into positions k+1..k+2, which the audit marks
    # unclassified, and the boundary scan stops at the shared level
    params = mock_params
    a = params.aux.A[0]
    fa = Poly(Q3, (1, 1, 1))  # 1 mod t
    fb = Poly(Q3, (1, 1))
    a2 = mock_entry(params, fa, 2, (0, 2), (a, a), 9)
    b1 = mock_entry(params, fb, 1, (0,), (a,), 5)
    c2 = mock_entry(params, fa, 2, (0, 1), (a, a), 9)
    d1 = mock_entry(params, fb, 1, (0,), (a,), 6)
    assert a2.n + b1.n == c2.n + d1.n
    seq = SidonSequence(
        params, build_moduli(params), tuple(sorted((a2, b1, c2, d1), key=lambda x: x.n))
    )
    # pass the right pair in ascending-k order to exercise the swap
    w = CollisionWitness(a2.n, b1.n, d1.n, c2.n, entries=(a2, b1, d1, c2))
    audit = attribute_collision(seq, w)
    assert audit.left[0].k == 2 and audit.right[0].k == 2
    assert audit.shared_levels == 1
    row1, row2 = audit.rows
    assert (row1.kind_left, row1.kind_right) == ("paired", "paired")
    assert row1.x_match_left and row1.y_match_left
    assert (row2.kind_left, row2.kind_right) == ("unclassified", "unclassified")
    assert row2.x_expected_left is None and row2.x_match_left is None
    assert row2.y_in_members and not row2.y_in_pair_sums
    assert audit.boundary_index == 1
    assert audit.products_congruent


def test_attribute_resolves_entries_from_sequence(mock_params):
    # witness without embedded entries: the sequence lookup plus the
    # decoder recovers all four
    params = mock_params
    a = params.aux.A[0]
    e1 = mock_entry(params, Poly(Q3, (2, 0, 1)), 1, (1,), (a,), 5)
    e2 = mock_entry(params, Poly(Q3, (1, 1)), 1, (0,), (a,), 5)
    e3 = mock_entry(params, Poly(Q3, (1, 2, 1)), 1, (0,), (a,), 4)
    e4 = mock_entry(params, Poly(Q3, (2, 1)), 1, (1,), (a,), 6)
    seq = SidonSequence(
        params, build_moduli(params), tuple(sorted((e1, e2, e3, e4), key=lambda x: x.n))
    )
    audit = attribute_collision(seq, CollisionWitness(e1.n, e2.n, e3.n, e4.n))
    assert {audit.left[0].n, audit.left[1].n} == {e1.n, e2.n}
    assert audit.products_congruent


def test_decompose_small_value_stays_whole():
    aux = AuxSet(p=11, A=(1,), seed=0, attempt=0, window_start=None, method="random")
    params = Params(q=Q3, aux=aux, k_min=1, k_max=1)
    table = YTable(11, tuple(range(11)))
    dec = decompose(5, params, table)
    assert (dec.m, dec.k, dec.x, dec.y, dec.z) == (5, 0, (), (), 5)
    assert dec.digit_vector().digits == (5,)


def test_decompose_validation(params307, ytable307):
    with pytest.raises(ValueError):
        decompose(2, params307, ytable307)
    with pytest.raises(ValueError):
        decompose(10**6, params307, YTable(11, tuple(range(11))))


@given(st.integers(min_value=3, max_value=3**100))
@settings(max_examples=300)
def test_decompose_roundtrip(params307, ytable307, m):
    q = params307.q.q
    p = params307.aux.p
    bits = triple_sumset_bits(set(params307.aux.A))
    dec = decompose(m, params307, ytable307)
    assert dec.m == m and len(dec.x) == dec.k == len(dec.y)
    for level, (x, y) in enumerate(zip(dec.x, dec.y), start=1):
        assert 0 <= x < q ** (2 * level - 1) - 1
        assert 2 <= y < 2 * p
        assert all(bits >> (y - d) & 1 for d in (0, 1, 2))
    assert 3 <= dec.z <= 6 * p * q ** (2 * dec.k + 1)
    assert encode(mixed_radix(params307), dec.digit_vector()) == m


def test_decompose_peels_large_values(params307, ytable307):
    dec = decompose(3**100, params307, ytable307)
    assert dec.k >= 1
    assert set(dec.y) <= set(ytable307.entries)


def test_find_representations_examples():
    vals = [1, 2, 3, 4, 5]
    assert find_representations(6, vals, order=3) == [(0, 0, 3), (0, 1, 2), (1, 1, 1)]
    assert find_representations(3, vals, order=3) == [(0, 0, 0)]
    assert find_representations(2, vals, order=3) == []
    assert find_representations(100, vals, order=3) == []
    assert find_representations(6, vals, order=2) == [(0, 4), (1, 3), (2, 2)]
    assert find_representations(4, vals, order=2) == [(0, 2), (1, 1)]
    with pytest.raises(ValueError):
        find_representations(6, [3, 1, 2], order=3)
    with pytest.raises(ValueError):
        find_representations(6, vals, order=4)


def brute_triples(m, vals):
    out = []
    for i in range(len(vals)):
        for j in range(i, len(vals)):
            for l in range(j, len(vals)):
                if vals[i] + vals[j] + vals[l] == m:
                    out.append((i, j, l))
    return out


@given(st.integers(min_value=0, max_value=10**9))
@settings(max_examples=200)
def test_find_representations_matches_brute(seed):
    rng = random.Random(seed)
    vals = sorted(rng.sample(range(1, 120), rng.randint(1, 18)))
    m = rng.randint(1, 360)
    got = find_representations(m, vals, order=3)
    assert got == brute_triples(m, vals)
    for i, j, l in got:
        assert vals[i] + vals[j] + vals[l] == m


@given(st.integers(min_value=0, max_value=10**9))
@settings(max_examples=200)
def test_exact_triple_count_matches_brute(seed):
    rng = random.Random(seed)
    vals = sorted(rng.sample(range(1, 120), rng.randint(1, 18)))
    pair_ordered: dict[int, int] = {}
    for a in vals:
        for b in vals:
            pair_ordered[a + b] = pair_ordered.get(a + b, 0) + 1
    members = set(vals)
    for m in range(1, 361, 7):
        assert exact_triple_count(m, vals, pair_ordered, members) == len(
            brute_triples(m, vals)
        )


def coverage_args(seq):
    vals = seq.values
    start = 3 * vals[0] + 1
    return start, 25


def test_coverage_report_shape(params307, seq307):
    start, length = coverage_args(seq307)
    rep = monte_carlo_coverage(params307, (start, length), trials=3, seq=seq307)
    assert rep.window_start == start and rep.window_length == length
    assert rep.trials == 3
    assert len(rep.trial_seeds) == 3 and len(set(rep.trial_seeds)) == 3
    rows = list(rep.rows())
    assert len(rows) == length
    for m, count, freq in rows:
        assert start <= m < start + length
        assert 0 <= count <= 3
        assert freq == count / 3
        assert 0.0 <= freq <= 1.0
    assert set(rep.uncovered) == {m for m, c, _ in rows if c == 0}


def test_coverage_deterministic_and_parallel(params307, seq307):
    start, length = coverage_args(seq307)
    a = monte_carlo_coverage(params307, (start, length), trials=2, seq=seq307)
    b = monte_carlo_coverage(params307, (start, length), trials=2, seq=seq307)
    c = monte_carlo_coverage(params307, (start, length), trials=2, threads=2, seq=seq307)
    assert a == b == c


def test_coverage_empty_window(params307, seq307):
    rep = monte_carlo_coverage(params307, (0, 0), trials=5, seq=seq307)
    assert rep.window_length == 0
    assert rep.counts == {} or len(rep.counts) == 0
    assert list(rep.rows()) == []


def test_coverage_window_validation(params307, seq307):
    with pytest.raises(ValueError):
        monte_carlo_coverage(params307, (0, 5), trials=1, seq=seq307)
    with pytest.raises(ValueError):
        monte_carlo_coverage(params307, (3 * seq307.values[-1], 2), trials=1, seq=seq307)
    with pytest.raises(ValueError):
        monte_carlo_coverage(params307, (0, -1), trials=1, seq=seq307)
