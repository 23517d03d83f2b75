"""Unit groups of F_q[t]/(g): order, generators, discrete logarithm.

For irreducible g the units form a cyclic group of order N = q^deg(g) - 1.
Generators are found by the order test against the factored N. Discrete
logs go through a cached full-log table when N <= DLOG_SCAN_LIMIT (one
vectorized multiply-by-omega map plus a pure-Python orbit walk), and
through Pohlig-Hellman with baby-step giant-step per prime power above
that.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import primes
from .ffpoly import (
    Poly,
    PrimeModulus,
    enumerate_irreducibles,
    is_irreducible,
    poly_derivative,
    poly_divmod,
    poly_gcd,
    poly_invmod,
    poly_mod,
    poly_mul,
    poly_powmod,
)

DEFAULT_FACTOR_CAP = 10**18

DLOG_SCAN_LIMIT = 1 << 16


@functools.lru_cache(maxsize=None)
def _factorize_cached(n: int) -> tuple[int, ...]:
    return tuple(primes.factorize(n))


def factor_integer(n: int, cap: int = DEFAULT_FACTOR_CAP) -> tuple[int, ...]:
    """Prime factors with multiplicity, ascending. n = 1 gives ()."""
    if n < 1:
        raise ValueError(f"expected n >= 1, got {n}")
    if n > cap:
        raise ValueError(f"factoring cap exceeded: {n} > {cap}")
    return _factorize_cached(n)


def group_order(g: Poly) -> int:
    """Unit-group order q^deg(g) - 1 for irreducible g."""
    return g.q.q ** g.degree - 1


def _passes_order_test(omega: Poly, g: Poly, n: int, prime_factors: set[int]) -> bool:
    if not poly_sub_is_zero(poly_powmod(omega, n, g), _one_mod(g)):
        return False
    for ell in prime_factors:
        if poly_sub_is_zero(poly_powmod(omega, n // ell, g), _one_mod(g)):
            return False
    return True


def _one_mod(g: Poly) -> Poly:
    return poly_mod(Poly.one(g.q), g)


def poly_sub_is_zero(a: Poly, b: Poly) -> bool:
    return a == b


@dataclass(frozen=True)
class Generator:
    """A residue of full multiplicative order mod an irreducible g.

    Construction re-runs the order test; since the order test can only
    pass when the unit group has the full q^deg(g) - 1 elements, it also
    certifies irreducibility of g as a side effect.
    """

    g: Poly
    omega: Poly

    def __post_init__(self):
        g, omega = self.g, self.omega
        if not g.is_monic() or g.degree < 1:
            raise ValueError("modulus must be monic of degree >= 1")
        if omega.degree >= g.degree:
            raise ValueError("generator residue not reduced mod g")
        n = group_order(g)
        if poly_mod(omega, g).is_zero():
            raise ValueError("generator must be a unit")
        if not _passes_order_test(omega, g, n, set(factor_integer(n))):
            raise ValueError(f"{omega} does not have order {n} mod {g}")

    @property
    def order(self) -> int:
        return group_order(self.g)


def find_generator(g: Poly, cap: int = DEFAULT_FACTOR_CAP) -> Generator:
    """Smallest monic-or-constant residue of full order, in code order.

    The trivial group (order 1) accepts the constant 1 vacuously.
    """
    if not g.is_monic() or g.degree < 1:
        raise ValueError("need a monic modulus of degree >= 1")
    if not is_irreducible(g):
        raise ValueError(f"{g} is reducible")
    n = group_order(g)
    prime_factors = set(factor_integer(n, cap=cap))
    qv = g.q.q
    for code in range(1, qv**g.degree):
        omega = Poly.from_code(g.q, code)
        if not (omega.degree == 0 or omega.is_monic()):
            continue
        if _passes_order_test(omega, g, n, prime_factors):
            return Generator(g, omega)
    raise ArithmeticError(f"no generator found mod {g}")  # unreachable for irreducible g


_LOG_TABLE_CACHE: dict[tuple[int, tuple[int, ...], tuple[int, ...]], np.ndarray] = {}


def _mul_map(gen: Generator) -> np.ndarray:
    """Map array M with M[code(x)] = code(omega * x mod g) for all residues."""
    g, omega = gen.g, gen.omega
    qv = g.q.q
    d = g.degree
    # columns of the multiply-by-omega linear map on coefficient vectors
    lin = np.zeros((d, d), dtype=np.int64)
    for j in range(d):
        col = poly_mod(poly_mul(omega, Poly(g.q, (0,) * j + (1,))), g)
        for i, c in enumerate(col.coeffs):
            lin[j, i] = c
    codes = np.arange(qv**d, dtype=np.int64)
    digits = np.stack([(codes // qv**i) % qv for i in range(d)], axis=1)
    out_digits = digits @ lin % qv
    return out_digits @ (qv ** np.arange(d, dtype=np.int64))


def dlog_table(gen: Generator) -> np.ndarray:
    """Full log table T with T[code(x)] = dlog(x) for every unit x,
    -1 elsewhere. Cached per (q, g, omega)."""
    key = (gen.g.q.q, gen.g.coeffs, gen.omega.coeffs)
    cached = _LOG_TABLE_CACHE.get(key)
    if cached is not None:
        return cached
    n = gen.order
    size = gen.g.q.q ** gen.g.degree
    mul = _mul_map(gen).tolist()
    table = np.full(size, -1, dtype=np.int64)
    x = 1  # code of the constant 1
    for e in range(n):
        table[x] = e
        x = mul[x]
    if x != 1:
        raise AssertionError("generator orbit did not close")
    if int(table[1:].min()) < 0:
        raise AssertionError("generator orbit missed a unit")
    table.flags.writeable = False
    _LOG_TABLE_CACHE[key] = table
    return table


def _bsgs(base: Poly, target: Poly, order: int, g: Poly) -> int:
    """x with base^x = target mod g, 0 <= x < order (order of base)."""
    m = int(order**0.5) + 1
    baby: dict[tuple[int, ...], int] = {}
    cur = _one_mod(g)
    for j in range(m):
        baby.setdefault(cur.coeffs, j)
        cur = poly_mod(poly_mul(cur, base), g)
    stride = poly_invmod(poly_powmod(base, m, g), g)
    cur = poly_mod(target, g)
    for i in range(m + 1):
        j = baby.get(cur.coeffs)
        if j is not None:
            return (i * m + j) % order
        cur = poly_mod(poly_mul(cur, stride), g)
    raise ValueError("element not in the subgroup generated by base")


def _pohlig_hellman(gen: Generator, f: Poly) -> int:
    g = gen.g
    n = gen.order
    factors = factor_integer(n)
    residues: list[int] = []
    moduli: list[int] = []
    for ell in sorted(set(factors)):
        e = factors.count(ell)
        pe = ell**e
        w0 = poly_powmod(gen.omega, n // pe, g)
        f0 = poly_powmod(f, n // pe, g)
        gamma = poly_powmod(w0, ell ** (e - 1), g)
        w0_inv = poly_invmod(w0, g)
        x = 0
        for i in range(e):
            h = poly_powmod(
                poly_mod(poly_mul(f0, poly_powmod(w0_inv, x, g)), g),
                ell ** (e - 1 - i),
                g,
            )
            x += _bsgs(gamma, h, ell, g) * ell**i
        residues.append(x)
        moduli.append(pe)
    return primes.crt_int(residues, moduli)


def dlog(gen: Generator, f: Poly, scan_limit: int = DLOG_SCAN_LIMIT) -> int:
    """The unique e in [0, order) with omega^e == f mod g."""
    r = poly_mod(f, gen.g)
    if r.is_zero():
        raise ValueError(f"{f} is divisible by the modulus {gen.g}")
    if gen.order <= scan_limit:
        return int(dlog_table(gen)[r.code])
    return _pohlig_hellman(gen, r)


def factor_squarefree_poly(g: Poly, cap: int = 1 << 20) -> tuple[Poly, ...]:
    """Irreducible factors of monic squarefree g, ascending code order,
    by trial division over enumerated irreducibles."""
    if not g.is_monic():
        raise ValueError("expected a monic polynomial")
    if g.degree >= 1 and poly_gcd(g, poly_derivative(g)).degree != 0:
        raise ValueError(f"{g} is not squarefree")
    factors = []
    rest = g
    d = 1
    while rest.degree > 0:
        if 2 * d > rest.degree:
            factors.append(rest)
            break
        for pi in enumerate_irreducibles(g.q, d, cap=cap):
            if rest.degree < d or 2 * d > rest.degree:
                break
            quot, rem = poly_divmod(rest, pi)
            if rem.is_zero():
                factors.append(pi)
                rest = quot
        d += 1
    return tuple(sorted(factors, key=lambda f: (f.degree, f.code)))


def euler_phi_poly(g: Poly) -> int:
    """|units of F_q[t]/(g)| for monic squarefree g: the product of
    q^deg - 1 over the irreducible factors."""
    if g.degree == 0:
        return 1
    out = 1
    for pi in factor_squarefree_poly(g):
        out *= g.q.q**pi.degree - 1
    return out


@dataclass(frozen=True)
class ResidueSystem:
    """A squarefree modulus with its factorization and unit-group order."""

    g: Poly
    factorization: tuple[Poly, ...]
    order: int

    def __post_init__(self):
        prod = Poly.one(self.g.q)
        seen = set()
        for pi in self.factorization:
            if not is_irreducible(pi):
                raise ValueError(f"factor {pi} is not irreducible")
            if pi.coeffs in seen:
                raise ValueError(f"repeated factor {pi} (modulus not squarefree)")
            seen.add(pi.coeffs)
            prod = poly_mul(prod, pi)
        if prod != self.g:
            raise ValueError("factorization does not multiply to the modulus")
        expected = 1
        for pi in self.factorization:
            expected *= self.g.q.q**pi.degree - 1
        if expected != self.order:
            raise ValueError(f"order {self.order} != product formula {expected}")

    @classmethod
    def for_modulus(cls, g: Poly) -> "ResidueSystem":
        factors = factor_squarefree_poly(g)
        order = 1
        for pi in factors:
            order *= g.q.q**pi.degree - 1
        return cls(g, factors, order)
