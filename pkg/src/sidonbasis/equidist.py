"""Distribution of triple products of same-degree irreducibles in the
units of F_q[t]/(g).

For a squarefree modulus g and the set I_d of monic irreducibles of
degree d (minus any that divide g), every unordered 3-subset is reduced
to its product class mod g. If the classes were perfectly uniform each
unit would receive C(N, 3) / phi(g) triples; the report normalizes the
observed deviations by q^{(3d - deg g)/2}, the square-root scale the
count fluctuations are expected to live at. The normalized ratios are a
regression tripwire (they should stay small and shrink as d grows), not
a sharp constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ffpoly import (
    MINUS_INFINITY,
    PrimeModulus,
    Poly,
    enumerate_irreducibles,
    poly_gcd,
    poly_mod,
    poly_mul,
)
from .unitgroup import euler_phi_poly

# moduli up to this many residue classes get a dense numpy multiplication table
_TABLE_LIMIT = 4096


def _validate_modulus(g: Poly) -> None:
    if g.degree is MINUS_INFINITY or g.degree < 2:
        raise ValueError("modulus must have degree >= 2")
    if not g.is_monic():
        raise ValueError("modulus must be monic")
    from .ffpoly import poly_derivative

    if poly_gcd(g, poly_derivative(g)).degree != 0:
        raise ValueError("modulus must be squarefree")


def unit_codes(g: Poly) -> list[int]:
    """Codes of the residues coprime to g, ascending."""
    q = g.q
    size = q.q ** g.degree
    out = []
    for u in range(size):
        f = Poly.from_code(q, u)
        if poly_gcd(f, g).degree == 0:
            out.append(u)
    return out


def _mul_table(g: Poly) -> np.ndarray:
    """size x size table of residue-product codes mod g."""
    q = g.q
    size = q.q ** g.degree
    table = np.empty((size, size), dtype=np.int64)
    polys = [Poly.from_code(q, u) for u in range(size)]
    for i in range(size):
        for j in range(i, size):
            c = poly_mod(poly_mul(polys[i], polys[j]), g).code
            table[i, j] = c
            table[j, i] = c
    return table


@dataclass(frozen=True)
class TripleCountReport:
    q: PrimeModulus
    d: int
    g: Poly
    pool_size: int  # |I_d|, the full pool
    counts: dict[int, int]  # residue code -> triples; complete over units

    def histogram(self) -> dict[Poly, int]:
        return {Poly.from_code(self.q, u): c for u, c in self.counts.items()}


def triple_histogram(q: PrimeModulus, d: int, g: Poly, cap: int = 1000) -> TripleCountReport:
    """Count, for every residue class mod g, the unordered 3-subsets of
    I_d whose product lands there. Every unit class is present in the
    result (zero-filled); non-unit classes appear when hit, which happens
    exactly when a subset shares an irreducible factor with g, so the
    totals always partition C(|I_d|, 3)."""
    if g.q != q:
        raise ValueError("modulus field differs from q")
    if d < 1:
        raise ValueError("need d >= 1")
    _validate_modulus(g)
    pool = enumerate_irreducibles(q, d)
    if len(pool) > cap:
        raise ValueError(f"pool of {len(pool)} irreducibles exceeds cap {cap}")
    n = len(pool)
    res = [poly_mod(f, g) for f in pool]
    size = q.q ** g.degree
    unit_set = set(unit_codes(g))
    if size <= _TABLE_LIMIT and n >= 3:
        table = _mul_table(g)
        codes = np.array([r.code for r in res], dtype=np.int64)
        acc = np.zeros(size, dtype=np.int64)
        for i in range(n - 2):
            for j in range(i + 1, n - 1):
                pij = table[codes[i], codes[j]]
                acc += np.bincount(table[pij, codes[j + 1 :]], minlength=size)
        counts = {u: int(acc[u]) for u in range(size) if acc[u] or u in unit_set}
    else:
        counts = {u: 0 for u in sorted(unit_set)}
        for i in range(n - 2):
            for j in range(i + 1, n - 1):
                pij = poly_mod(poly_mul(res[i], res[j]), g)
                for l in range(j + 1, n):
                    c = poly_mod(poly_mul(pij, res[l]), g).code
                    counts[c] = counts.get(c, 0) + 1
        counts = dict(sorted(counts.items()))
    return TripleCountReport(q=q, d=d, g=g, pool_size=n, counts=counts)


@dataclass(frozen=True)
class DeviationRow:
    code: int
    residue: Poly
    count: int
    deviation: Fraction  # count - expected
    ratio: float  # |deviation| / normalizer


@dataclass(frozen=True)
class DeviationReport:
    q: PrimeModulus
    d: int
    g: Poly
    theta: Fraction  # deg g / (3d)
    phi_g: int
    binom: int  # C(|I_d|, 3), the conserved total
    expected: Fraction  # binom / phi_g, the per-unit main term
    normalizer: float  # q^{(3d - deg g)/2}
    nonunit_total: int  # triples sharing a factor with g
    conservation_ok: bool
    max_ratio: float
    mean_ratio: float
    chi2: float  # sum of squared deviations over expected, unit classes
    rows: tuple[DeviationRow, ...]  # unit classes only


def deviation_report(report: TripleCountReport) -> DeviationReport:
    q, d, g = report.q, report.d, report.g
    theta = Fraction(g.degree, 3 * d)
    if not 0 < theta < 1:
        raise ValueError(f"deg g / (3d) = {theta} outside (0, 1)")
    phi_g = euler_phi_poly(g)
    binom = math.comb(report.pool_size, 3)
    expected = Fraction(binom, phi_g)
    normalizer = math.sqrt(q.q ** (3 * d - g.degree))
    unit_set = set(unit_codes(g))
    rows = []
    total = 0
    nonunit_total = 0
    ratios = []
    chi2 = Fraction(0)
    for u in sorted(report.counts):
        c = report.counts[u]
        total += c
        if u not in unit_set:
            nonunit_total += c
            continue
        dev = c - expected
        ratio = abs(float(dev)) / normalizer
        ratios.append(ratio)
        if expected:
            chi2 += dev * dev / expected
        rows.append(
            DeviationRow(
                code=u,
                residue=Poly.from_code(q, u),
                count=c,
                deviation=dev,
                ratio=ratio,
            )
        )
    return DeviationReport(
        q=q,
        d=d,
        g=g,
        theta=theta,
        phi_g=phi_g,
        binom=binom,
        expected=expected,
        normalizer=normalizer,
        nonunit_total=nonunit_total,
        conservation_ok=total == binom,
        max_ratio=max(ratios) if ratios else 0.0,
        mean_ratio=sum(ratios) / len(ratios) if ratios else 0.0,
        chi2=float(chi2),
        rows=tuple(rows),
    )


def deviation_csv_rows(report: DeviationReport):
    """(a, count, expected, deviation, normalized_ratio) per unit class."""
    for row in report.rows:
        yield (
            str(row.residue),
            row.count,
            float(report.expected),
            float(row.deviation),
            row.ratio,
        )


def deviation_summary(report: DeviationReport) -> dict:
    """The JSON-ready summary block."""
    return {
        "q": report.q.q,
        "d": report.d,
        "g": str(report.g),
        "theta": float(report.theta),
        "phi_g": report.phi_g,
        "binom": report.binom,
        "max_ratio": report.max_ratio,
        "mean_ratio": report.mean_ratio,
        "chi2": report.chi2,
        "nonunit_total": report.nonunit_total,
    }
