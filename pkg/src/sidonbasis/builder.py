"""Assembly of the Sidon sequence.

For each level k, the members are the monic irreducibles f of even degree
in a window proportional to k^2 (build_Fk). Every f is turned into an
integer n_f by packing, least significant first, the digit vector

    <s  r_k e_k  ...  r_1 e_1>

into the alternating mixed radix (q^i - 1, p): e_i is the discrete log of
f modulo the fixed odd-degree modulus g_i, r_i is drawn from the auxiliary
set A, and the top digit s is drawn from {1, ..., q^{3k}}. The r and s
digits come from a keyed-hash counter RNG so every (f, digit) pair is an
independent, reproducible draw.

The map f -> n_f is injective and invertible: decode_entry peels the
digits back off, inverts each discrete log, and recombines by the Chinese
remainder theorem. audit_preconditions reports the concrete degree
margins that the collision-freeness argument needs at the configured
parameters.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction

from .auxset import AuxSet, aux_from_json, aux_to_json
from .ffpoly import (
    Poly,
    PrimeModulus,
    crt,
    enumerate_irreducibles,
    is_irreducible,
    poly_from_string,
    poly_powmod,
    poly_to_string,
)
from .gbase import DigitVector, MixedRadix, decode, encode
from .unitgroup import Generator, dlog, find_generator

SCALED_MODE_WARNING = (
    "scaled parameters: the asymptotic guarantees assume far larger q and k "
    "than any desk-scale run; margins that concretely hold are listed by the "
    "precondition audit"
)


class DecodeError(ValueError):
    """Value does not decode to any valid sequence entry."""


@dataclass(frozen=True)
class Params:
    q: PrimeModulus
    aux: AuxSet
    c: Fraction = Fraction(7, 20)
    k_min: int = 3
    k_max: int = 4
    seed: int = 0
    strict: bool = False

    def __post_init__(self):
        if self.q.q < 3:
            raise ValueError("q must be >= 3")
        if not isinstance(self.c, Fraction):
            object.__setattr__(self, "c", Fraction(self.c))
        if not 1 <= self.k_min <= self.k_max:
            raise ValueError(f"bad level range [{self.k_min}, {self.k_max}]")
        if self.strict:
            if not (Fraction(1, 3) < self.c and (3 - 2 * self.c) ** 2 > 5):
                raise ValueError(f"strict mode: c = {self.c} outside the open interval")
            if min(self.q.q, self.k_min) <= 100 * self.aux.p:
                raise ValueError(
                    "strict mode requires min(q, k_min) > 100 p; these parameters "
                    "are desk-scale, run with strict=False"
                )


@dataclass(frozen=True)
class ModuliTable:
    generators: tuple[Generator, ...]

    def g(self, i: int) -> Poly:
        return self.generators[i - 1].g

    def omega(self, i: int) -> Poly:
        return self.generators[i - 1].omega

    def __len__(self) -> int:
        return len(self.generators)


@dataclass(frozen=True)
class SequenceEntry:
    f: Poly
    k: int
    e: tuple[int, ...]
    r: tuple[int, ...]
    s: int
    n: int


@dataclass(frozen=True)
class SidonSequence:
    params: Params
    moduli: ModuliTable
    entries: tuple[SequenceEntry, ...]
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        ns = [ent.n for ent in self.entries]
        if any(a >= b for a, b in zip(ns, ns[1:])):
            raise ValueError("entries must be sorted by n with no duplicates")

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(ent.n for ent in self.entries)


def build_moduli(params: Params) -> ModuliTable:
    """g_i = smallest monic irreducible of degree 2i-1, with its smallest
    full-order residue, for i = 1..k_max."""
    gens = []
    for i in range(1, params.k_max + 1):
        g = enumerate_irreducibles(params.q, 2 * i - 1)[0]
        gens.append(find_generator(g))
    return ModuliTable(tuple(gens))


def fk_degrees(params: Params, k: int) -> tuple[int, ...]:
    """Even degrees m with c k^2 <= m < c (k+1)^2, exact arithmetic."""
    lo = params.c * k * k
    hi = params.c * (k + 1) * (k + 1)
    m = 2 * math.ceil(lo / 2)
    out = []
    while m < hi:
        out.append(m)
        m += 2
    return tuple(out)


def build_Fk(params: Params, k: int) -> list[Poly]:
    """All member polynomials at level k, degree-then-code order."""
    out: list[Poly] = []
    for m in fk_degrees(params, k):
        out.extend(enumerate_irreducibles(params.q, m))
    return out


def _digit_hash(seed: int, f: Poly, tag: str) -> int:
    msg = f"{poly_to_string(f)}|{tag}".encode()
    key = (seed & (2**64 - 1)).to_bytes(8, "little")
    return int.from_bytes(hashlib.blake2b(msg, key=key, digest_size=16).digest(), "little")


def mixed_radix(params: Params) -> MixedRadix:
    return MixedRadix(params.q, params.aux.p)


def compute_entry(params: Params, moduli: ModuliTable, f: Poly, k: int) -> SequenceEntry:
    """Digits of one member: e_i deterministic in f, r_i and s drawn from
    the keyed counter RNG (independent across (f, digit), reproducible)."""
    e = tuple(dlog(moduli.generators[i - 1], f) for i in range(1, k + 1))
    a_elems = params.aux.A
    r = tuple(
        a_elems[_digit_hash(params.seed, f, f"r{i}") % len(a_elems)]
        for i in range(1, k + 1)
    )
    s = 1 + _digit_hash(params.seed, f, "s") % params.q.q ** (3 * k)
    digits = []
    for i in range(k):
        digits.append(e[i])
        digits.append(r[i])
    digits.append(s)
    n = encode(mixed_radix(params), DigitVector(tuple(digits)))
    return SequenceEntry(f=f, k=k, e=e, r=r, s=s, n=n)


def build_sequence(params: Params) -> SidonSequence:
    moduli = build_moduli(params)
    warnings: list[str] = [] if params.strict else [SCALED_MODE_WARNING]
    entries: list[SequenceEntry] = []
    for k in range(params.k_min, params.k_max + 1):
        members = build_Fk(params, k)
        if not members:
            warnings.append(f"level k={k} is empty (no even degree in its window)")
        for f in members:
            entries.append(compute_entry(params, moduli, f, k))
    entries.sort(key=lambda ent: ent.n)
    for a, b in zip(entries, entries[1:]):
        if a.n == b.n:
            raise RuntimeError(
                f"duplicate encoded value {a.n} for {a.f} (k={a.k}) and "
                f"{b.f} (k={b.k}); injectivity violated"
            )
    audit = audit_preconditions(params)
    warnings.extend(line for line in audit.lines if "fail" in line)
    return SidonSequence(params, moduli, tuple(entries), tuple(warnings))


def level_value_range(params: Params, k: int) -> tuple[int, int]:
    """[lo, hi) bracket of encoded values at level k: the top digit s is in
    [1, q^{3k}], everything below contributes less than one s-weight."""
    base = mixed_radix(params)
    weight = base.radix_product(2 * k)
    return weight, weight * (params.q.q ** (3 * k) + 1)


def decode_entry(n: int, params: Params, moduli: ModuliTable) -> tuple[Poly, int]:
    """Inverse of compute_entry on built sequences: recover (f, k) from n.

    The level is inferred from the value bracket (adjacent levels do not
    overlap at these parameters, but every bracket-compatible level is
    tried). Foreign values fail digit validation, land outside the degree
    window, or decode to a reducible polynomial, and raise DecodeError.
    """
    base = mixed_radix(params)
    a_members = set(params.aux.A)
    for k in range(1, params.k_max + 1):
        lo, hi = level_value_range(params, k)
        if not lo <= n < hi:
            continue
        digits = decode(base, n, 2 * k + 1).digits
        e = digits[0 : 2 * k : 2]
        r = digits[1 : 2 * k : 2]
        s = digits[2 * k]
        if not 1 <= s <= params.q.q ** (3 * k):
            continue
        if any(x not in a_members for x in r):
            continue
        residues = [
            poly_powmod(moduli.omega(i), e[i - 1], moduli.g(i))
            for i in range(1, k + 1)
        ]
        f = crt(residues, [moduli.g(i) for i in range(1, k + 1)])
        if not f.is_monic():
            continue
        if f.degree not in fk_degrees(params, k):
            continue
        if not is_irreducible(f):
            continue
        return f, k
    raise DecodeError(f"{n} does not decode to any sequence entry")


@dataclass(frozen=True)
class KClassAudit:
    k: int
    degrees: tuple[int, ...]
    max_degree: int | None
    injectivity_margin_ok: bool | None  # max deg f < k^2
    pair_margin_ok: bool | None  # 2 max deg f < k^2


@dataclass(frozen=True)
class AuditReport:
    c_value: Fraction
    c_ok: bool
    classes: tuple[KClassAudit, ...]
    all_ok: bool
    lines: tuple[str, ...]


def audit_preconditions(params: Params) -> AuditReport:
    """Concrete margin report: (a) the window constant c sits inside its
    open interval; per level, (b) max deg f < k^2 so distinct members
    stay distinct mod g_1..g_k, and (c) 2 max deg f < k^2 so products of
    two members are still determined mod g_1..g_k."""
    c = params.c
    c_ok = Fraction(1, 3) < c and (3 - 2 * c) ** 2 > 5
    lines = [
        f"margin (a): 1/3 < c and (3-2c)^2 > 5 with c = {c}, "
        f"(3-2c)^2 = {(3 - 2 * c) ** 2}: {'pass' if c_ok else 'fail'}"
    ]
    classes = []
    all_ok = c_ok
    for k in range(params.k_min, params.k_max + 1):
        degs = fk_degrees(params, k)
        if not degs:
            classes.append(KClassAudit(k, degs, None, None, None))
            lines.append(f"k={k}: empty degree window")
            continue
        mx = degs[-1]
        ok_b = mx < k * k
        ok_c = 2 * mx < k * k
        classes.append(KClassAudit(k, degs, mx, ok_b, ok_c))
        all_ok = all_ok and ok_b and ok_c
        lines.append(
            f"k={k}: degrees {degs}, max {mx}: "
            f"(b) {mx} < {k * k} {'pass' if ok_b else 'fail'}; "
            f"(c) {2 * mx} < {k * k} {'pass' if ok_c else 'fail'}"
        )
    return AuditReport(c, c_ok, tuple(classes), all_ok, tuple(lines))


def params_to_json(params: Params) -> dict:
    return {
        "q": params.q.q,
        "c": str(params.c),
        "k_min": params.k_min,
        "k_max": params.k_max,
        "seed": params.seed,
        "strict": params.strict,
        "aux": aux_to_json(params.aux),
    }


def params_from_json(obj: dict) -> Params:
    return Params(
        q=PrimeModulus(int(obj["q"])),
        aux=aux_from_json(obj["aux"]),
        c=Fraction(obj["c"]),
        k_min=int(obj["k_min"]),
        k_max=int(obj["k_max"]),
        seed=int(obj["seed"]),
        strict=bool(obj["strict"]),
    )


def seq_to_json(seq: SidonSequence, manifest_ref: str | None = None) -> dict:
    out = {
        "params": params_to_json(seq.params),
        "moduli": [
            {"g": poly_to_string(gen.g), "omega": poly_to_string(gen.omega)}
            for gen in seq.moduli.generators
        ],
        "entries": [
            {
                "f": poly_to_string(ent.f),
                "k": ent.k,
                "e": list(ent.e),
                "r": list(ent.r),
                "s": str(ent.s),
                "n": str(ent.n),
            }
            for ent in seq.entries
        ],
        "warnings": list(seq.warnings),
    }
    if manifest_ref is not None:
        out["manifest"] = manifest_ref
    return out


def seq_from_json(obj: dict) -> SidonSequence:
    params = params_from_json(obj["params"])
    q = params.q
    moduli = ModuliTable(
        tuple(
            Generator(poly_from_string(q, m["g"]), poly_from_string(q, m["omega"]))
            for m in obj["moduli"]
        )
    )
    entries = tuple(
        SequenceEntry(
            f=poly_from_string(q, ent["f"]),
            k=int(ent["k"]),
            e=tuple(int(x) for x in ent["e"]),
            r=tuple(int(x) for x in ent["r"]),
            s=int(ent["s"]),
            n=int(ent["n"]),
        )
        for ent in obj["entries"]
    )
    return SidonSequence(params, moduli, entries, tuple(obj.get("warnings", ())))
