"""Verification surface over built sequences.

verify_sidon hashes all pairwise sums and reports colliding pairs.
attribute_collision explains a collision digit by digit: it recovers the
four entries, reconstructs the mixed-radix digits of the equal sums,
compares each digit against the additive laws the construction imposes
(odd positions add discrete logs mod their radix, even positions add the
two auxiliary digits plus a possible carry), checks the product
congruence modulo the shared moduli, and names the first precondition
margin that does not hold at the configured parameters.

decompose peels a large integer into the same digit shape (driven by the
auxiliary y-table), find_representations enumerates exact three-element
sums, and monte_carlo_coverage measures how often a window of integers
stays representable when the random digits are redrawn.
"""

from __future__ import annotations

import bisect
import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .auxset import YTable
from .builder import (
    ModuliTable,
    Params,
    SequenceEntry,
    SidonSequence,
    audit_preconditions,
    build_sequence,
    decode_entry,
    mixed_radix,
    _digit_hash,
)
from .ffpoly import Poly, poly_mod, poly_mul
from .gbase import DigitVector, decode, encode, fmod


@dataclass(frozen=True)
class CollisionWitness:
    n1: int
    n2: int
    n3: int
    n4: int
    entries: tuple[SequenceEntry, SequenceEntry, SequenceEntry, SequenceEntry] | None = None

    def __post_init__(self):
        if self.n1 + self.n2 != self.n3 + self.n4:
            raise ValueError("witness sums differ")
        if {self.n1, self.n2} == {self.n3, self.n4}:
            raise ValueError("witness pairs coincide")


def verify_sidon(values) -> list[CollisionWitness]:
    """Empty iff all pairwise sums (i <= j) are distinct. Each collision is
    reported against the first pair holding that sum."""
    vals = list(values)
    if len(set(vals)) != len(vals):
        raise ValueError("values must be distinct")
    seen: dict[int, tuple[int, int]] = {}
    out: list[CollisionWitness] = []
    for j, b in enumerate(vals):
        for i in range(j + 1):
            s = vals[i] + b
            prior = seen.get(s)
            if prior is None:
                seen[s] = (vals[i], b)
            elif prior != (vals[i], b):
                out.append(CollisionWitness(prior[0], prior[1], vals[i], b))
    return out


@dataclass(frozen=True)
class DigitAuditRow:
    i: int
    x_digit: int
    y_digit: int
    kind_left: str  # "paired" | "unclassified" | "single"
    kind_right: str
    x_expected_left: int | None
    x_match_left: bool | None
    y_expected_left: int | None
    y_match_left: bool | None
    x_expected_right: int | None
    x_match_right: bool | None
    y_expected_right: int | None
    y_match_right: bool | None
    y_in_pair_sums: bool  # y_digit in A+A+{0,1}
    y_in_members: bool  # y_digit in A


@dataclass(frozen=True)
class CollisionAudit:
    witness: CollisionWitness
    left: tuple[SequenceEntry, SequenceEntry]
    right: tuple[SequenceEntry, SequenceEntry]
    rows: tuple[DigitAuditRow, ...]
    boundary_index: int  # last low position whose y digit is a shifted pair sum
    products_congruent: bool
    shared_levels: int
    failed_margin: str


def _resolve_entry(seq: SidonSequence, n: int) -> SequenceEntry:
    for ent in seq.entries:
        if ent.n == n:
            return ent
    f, k = decode_entry(n, seq.params, seq.moduli)
    base = mixed_radix(seq.params)
    digits = decode(base, n, 2 * k + 1).digits
    return SequenceEntry(
        f=f, k=k, e=digits[0 : 2 * k : 2], r=digits[1 : 2 * k : 2], s=digits[2 * k], n=n
    )


def _pair_expectations(
    params: Params, a: SequenceEntry, b: SequenceEntry, i: int
) -> tuple[str, int | None, int | None]:
    """(kind, expected x, expected y) for digit pair i of a+b, k(a) >= k(b)."""
    q = params.q.q
    if i <= b.k:
        radix = q ** (2 * i - 1) - 1
        esum = a.e[i - 1] + b.e[i - 1]
        carry = 1 if esum >= radix else 0
        return "paired", fmod(esum, radix), a.r[i - 1] + b.r[i - 1] + carry
    if i <= b.k + 2:
        return "unclassified", None, None
    return "single", a.e[i - 1], a.r[i - 1]


def attribute_collision(seq: SidonSequence, w: CollisionWitness) -> CollisionAudit:
    """Digit-level audit of one collision; see module docstring."""
    if w.entries is not None:
        e1, e2, e3, e4 = w.entries
    else:
        e1, e2 = _resolve_entry(seq, w.n1), _resolve_entry(seq, w.n2)
        e3, e4 = _resolve_entry(seq, w.n3), _resolve_entry(seq, w.n4)
    if e1.k < e2.k:
        e1, e2 = e2, e1
    if e3.k < e4.k:
        e3, e4 = e4, e3
    params = seq.params
    base = mixed_radix(params)
    total = e1.n + e2.n
    top_k = max(e1.k, e3.k)
    digits = decode(base, total, 2 * top_k + 3).digits
    a_members = set(params.aux.A)
    pair_sums = 0
    bits_a = 0
    for x in params.aux.A:
        bits_a |= 1 << x
    for x in params.aux.A:
        pair_sums |= bits_a << x
    pair_sums |= pair_sums << 1

    rows = []
    for i in range(1, top_k + 1):
        x_digit = digits[2 * i - 2]
        y_digit = digits[2 * i - 1]
        kind_l, ex_l, ey_l = _pair_expectations(params, e1, e2, i) if i <= e1.k else ("single", None, None)
        kind_r, ex_r, ey_r = _pair_expectations(params, e3, e4, i) if i <= e3.k else ("single", None, None)
        rows.append(
            DigitAuditRow(
                i=i,
                x_digit=x_digit,
                y_digit=y_digit,
                kind_left=kind_l,
                kind_right=kind_r,
                x_expected_left=ex_l,
                x_match_left=None if ex_l is None else ex_l == x_digit,
                y_expected_left=ey_l,
                y_match_left=None if ey_l is None else ey_l == y_digit,
                x_expected_right=ex_r,
                x_match_right=None if ex_r is None else ex_r == x_digit,
                y_expected_right=ey_r,
                y_match_right=None if ey_r is None else ey_r == y_digit,
                y_in_pair_sums=bool(pair_sums >> y_digit & 1),
                y_in_members=y_digit in a_members,
            )
        )

    boundary = 0
    for row in rows:
        if row.y_in_pair_sums:
            boundary = row.i
        else:
            break

    shared = min(e2.k, e4.k)
    left_prod = poly_mul(e1.f, e2.f)
    right_prod = poly_mul(e3.f, e4.f)
    congruent = all(
        poly_mod(left_prod, seq.moduli.g(i)) == poly_mod(right_prod, seq.moduli.g(i))
        for i in range(1, shared + 1)
    )

    audit = audit_preconditions(params)
    failed = "none: every audited margin holds, so this collision is unexplained"
    if not audit.c_ok:
        failed = audit.lines[0]
    else:
        for cls, line in zip(audit.classes, audit.lines[1:]):
            if cls.k in {e1.k, e2.k, e3.k, e4.k} and (
                cls.injectivity_margin_ok is False or cls.pair_margin_ok is False
            ):
                failed = line
                break
    return CollisionAudit(
        witness=w,
        left=(e1, e2),
        right=(e3, e4),
        rows=tuple(rows),
        boundary_index=boundary,
        products_congruent=congruent,
        shared_levels=shared,
        failed_margin=failed,
    )


@dataclass(frozen=True)
class Decomposition:
    m: int
    k: int
    x: tuple[int, ...]
    y: tuple[int, ...]
    z: int

    def digit_vector(self) -> DigitVector:
        digits = []
        for xi, yi in zip(self.x, self.y):
            digits.append(xi)
            digits.append(yi)
        digits.append(self.z)
        return DigitVector(tuple(digits))


def decompose(m: int, params: Params, y_table: YTable) -> Decomposition:
    """Peel m into digits <z y_k x_k ... y_1 x_1>: x_l is the remainder mod
    q^{2l-1}-1, y_l is the table entry for the residue class of the
    quotient mod p, and the loop stops as soon as the remaining value
    drops to at most 6 p q^{2l-1}, leaving it as the top digit z.

    Every quotient stays >= 3 (in fact >= 5 past the first round), so the
    result always re-encodes to m exactly with 3 <= z <= 6 p q^{2k+1}.
    """
    if m < 3:
        raise ValueError(f"need m >= 3, got {m}")
    if y_table.p != params.aux.p:
        raise ValueError("y-table prime differs from the aux set prime")
    q = params.q.q
    p = params.aux.p
    xs: list[int] = []
    ys: list[int] = []
    cur = m
    level = 1
    while cur > 6 * p * q ** (2 * level - 1):
        radix = q ** (2 * level - 1) - 1
        x = cur % radix
        cur = (cur - x) // radix
        y = y_table.entries[cur % p]
        xs.append(x)
        ys.append(y)
        cur = (cur - y) // p
        level += 1
    return Decomposition(m=m, k=level - 1, x=tuple(xs), y=tuple(ys), z=cur)


def _sorted_values(seq_or_values) -> list[int]:
    if isinstance(seq_or_values, SidonSequence):
        vals = list(seq_or_values.values)
    else:
        vals = list(seq_or_values)
    if any(a >= b for a, b in zip(vals, vals[1:])):
        raise ValueError("values must be sorted ascending and distinct")
    return vals


def find_representations(m: int, seq_or_values, order: int = 3) -> list[tuple[int, ...]]:
    """All index multisets (ascending) whose values sum to m; two-pointer
    over the sorted tail, so no triple hashing."""
    vals = _sorted_values(seq_or_values)
    if order == 2:
        out2 = []
        lo, hi = 0, len(vals) - 1
        while lo <= hi:
            s = vals[lo] + vals[hi]
            if s == m:
                out2.append((lo, hi))
                lo += 1
                hi -= 1
            elif s < m:
                lo += 1
            else:
                hi -= 1
        return out2
    if order != 3:
        raise ValueError("only orders 2 and 3 are supported")
    out = []
    for i, first in enumerate(vals):
        target = m - first
        if target < 2 * first:
            break
        lo, hi = i, len(vals) - 1
        while lo <= hi:
            s = vals[lo] + vals[hi]
            if s == target:
                out.append((i, lo, hi))
                lo += 1
                hi -= 1
            elif s < target:
                lo += 1
            else:
                hi -= 1
    return out


@dataclass(frozen=True)
class CoverageReport:
    window_start: int
    window_length: int
    trials: int
    counts: tuple[int, ...]  # exact representation counts in the base build
    uncovered: tuple[int, ...]
    frequencies: tuple[float, ...]  # fraction of re-randomized builds covering m
    trial_seeds: tuple[int, ...]

    def rows(self):
        """(m, count, frequency) triples, the tabular report."""
        for off in range(self.window_length):
            yield (
                self.window_start + off,
                self.counts[off],
                self.frequencies[off],
            )


def _trial_seed(seed: int, tau: int) -> int:
    h = hashlib.blake2b(
        f"coverage-trial|{tau}".encode(),
        key=(seed & (2**64 - 1)).to_bytes(8, "little"),
        digest_size=8,
    ).digest()
    return int.from_bytes(h, "little") >> 1


def _rerandomized_values(params: Params, entries, trial_seed: int) -> list[int]:
    """New n per entry with the e digits kept and r, s redrawn."""
    base = mixed_radix(params)
    a_elems = params.aux.A
    q = params.q.q
    out = []
    for ent in entries:
        r = tuple(
            a_elems[_digit_hash(trial_seed, ent.f, f"r{i}") % len(a_elems)]
            for i in range(1, ent.k + 1)
        )
        s = 1 + _digit_hash(trial_seed, ent.f, "s") % q ** (3 * ent.k)
        digits = []
        for i in range(ent.k):
            digits.append(ent.e[i])
            digits.append(r[i])
        digits.append(s)
        out.append(encode(base, DigitVector(tuple(digits))))
    return out


def _ordered_pair_counter(vals: list[int]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for j, b in enumerate(vals):
        for i in range(j + 1):
            s = vals[i] + b
            counts[s] = counts.get(s, 0) + (1 if i == j else 2)
    return counts


def exact_triple_count(m: int, vals: list[int], pair_ordered: dict[int, int], members: set[int]) -> int:
    """Number of multisets {a <= b <= c} from vals summing to m, via the
    ordered-triple count corrected for repeated-element patterns."""
    ordered = sum(pair_ordered.get(m - x, 0) for x in vals)
    with_double = sum(1 for x in vals if (m - 2 * x) in members and m - 2 * x != x)
    triple_same = 1 if m % 3 == 0 and m // 3 in members else 0
    distinct = (ordered - 3 * with_double - triple_same) // 6
    return distinct + with_double + triple_same


def _trial_covered(args) -> tuple[int, list[bool]]:
    params, entries, tau, seed, w_start, w_len = args
    vals = sorted(_rerandomized_values(params, entries, seed))
    pair_set = set()
    for j, b in enumerate(vals):
        for i in range(j + 1):
            pair_set.add(vals[i] + b)
    covered = []
    for off in range(w_len):
        m = w_start + off
        covered.append(any((m - x) in pair_set for x in vals))
    return tau, covered


def monte_carlo_coverage(
    params: Params,
    m_window: tuple[int, int],
    trials: int,
    threads: int = 1,
    seq: SidonSequence | None = None,
) -> CoverageReport:
    """Coverage of [start, start+length) by three-element sums: exact
    counts for the base build, plus the fraction of `trials`
    re-randomizations (fresh r and s digits, same e digits) covering each
    m. Deterministic given params.seed."""
    w_start, w_len = m_window
    if w_len < 0:
        raise ValueError("window length must be >= 0")
    if seq is None:
        seq = build_sequence(params)
    vals = list(seq.values)
    if w_len and not (3 * vals[0] <= w_start and w_start + w_len - 1 <= 3 * vals[-1]):
        raise ValueError("window outside the three-fold sum range of the build")

    pair_ordered = _ordered_pair_counter(vals)
    members = set(vals)
    pair_first: dict[int, tuple[int, int]] = {}
    for j in range(len(vals)):
        for l in range(j, len(vals)):
            pair_first.setdefault(vals[j] + vals[l], (vals[j], vals[l]))
    counts = []
    uncovered = []
    for m in range(w_start, w_start + w_len):
        cnt = exact_triple_count(m, vals, pair_ordered, members)
        # re-sum one concrete representative whenever we claim coverage
        if cnt > 0:
            for a in vals:
                pair = pair_first.get(m - a)
                if pair is not None:
                    assert a + pair[0] + pair[1] == m
                    break
            else:
                raise AssertionError(f"count {cnt} for {m} but no witness found")
        else:
            uncovered.append(m)
        counts.append(cnt)

    seeds = tuple(_trial_seed(params.seed, tau) for tau in range(trials))
    freq = [0] * w_len
    jobs = [
        (params, seq.entries, tau, seeds[tau], w_start, w_len)
        for tau in range(trials if w_len else 0)
    ]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_trial_covered, jobs))
    else:
        results = [_trial_covered(job) for job in jobs]
    for _, covered in sorted(results):
        for off, hit in enumerate(covered):
            if hit:
                freq[off] += 1
    frequencies = tuple(c / trials if trials else 0.0 for c in freq)
    return CoverageReport(
        window_start=w_start,
        window_length=w_len,
        trials=trials,
        counts=tuple(counts),
        uncovered=tuple(uncovered),
        frequencies=frequencies,
        trial_seeds=seeds,
    )
