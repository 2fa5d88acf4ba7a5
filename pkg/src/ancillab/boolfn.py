"""Symmetric Boolean functions, their associated log-size functions, and the
exact integer Fourier expansion over parities.

Bit order: s_1 is index 0 and the least significant bit, so the weight encoded
by s is sum(s_k * 2^(k-1)).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass


def weight_bits(n: int) -> int:
    """Number of bits m = ceil(log2(n+1)) needed to write weights 0..n;
    equals n.bit_length()."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return n.bit_length()


@dataclass(frozen=True)
class SymmetricFunctionSpec:
    """f_n given by its value on each Hamming weight 0..n."""

    n: int
    value_by_weight: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if len(self.value_by_weight) != self.n + 1:
            raise ValueError(f"need {self.n + 1} weight entries")
        if any(v not in (0, 1) for v in self.value_by_weight):
            raise ValueError("weight table entries must be bits")

    def evaluate(self, x: str) -> int:
        if len(x) != self.n:
            raise ValueError(f"expected {self.n} input bits")
        return self.value_by_weight[x.count("1")]


@dataclass(frozen=True)
class AssociatedFunction:
    """g_m with g_m(s) = f_n(1^l 0^(n-l)) for l = weight written by s."""

    m: int
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != 1 << self.m:
            raise ValueError(f"need a table of length {1 << self.m}")
        if any(v not in (0, 1) for v in self.table):
            raise ValueError("table entries must be bits")

    def evaluate(self, s: int) -> int:
        return self.table[s]


@dataclass(frozen=True)
class FourierSpec:
    """g_m(s) = constant + (2/2^m) * sum_t c_t * parity(t & s), t != 0."""

    m: int
    constant: int
    coefficients: tuple[int, ...]  # index t-1 holds c_t for t = 1 .. 2^m - 1

    def __post_init__(self):
        if len(self.coefficients) != (1 << self.m) - 1:
            raise ValueError("coefficient table has the wrong length")
        bound = 1 << self.m
        if any(abs(c) > bound for c in self.coefficients):
            raise ValueError("coefficient out of range")

    def coefficient(self, t: int) -> int:
        return self.coefficients[t - 1]


_PARAM_RE = re.compile(r"^(THR|EXACT)_(\d+)$")


def builtin(name: str, n: int) -> SymmetricFunctionSpec:
    """Named symmetric functions; THR_k and EXACT_k carry their threshold in
    the name (e.g. "THR_2").  MAJ is 1 on weights >= ceil((n+1)/2)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    weights = range(n + 1)
    if name == "PA":
        table = [w & 1 for w in weights]
    elif name == "OR":
        table = [1 if w >= 1 else 0 for w in weights]
    elif name == "AND":
        table = [1 if w == n else 0 for w in weights]
    elif name == "MAJ":
        table = [1 if w >= (n + 2) // 2 else 0 for w in weights]
    else:
        m = _PARAM_RE.match(name)
        if not m:
            raise ValueError(f"unknown builtin {name!r}")
        k = int(m.group(2))
        if m.group(1) == "THR":
            table = [1 if w >= k else 0 for w in weights]
        else:
            table = [1 if w == k else 0 for w in weights]
    return SymmetricFunctionSpec(n, tuple(table))


def associated_function(f: SymmetricFunctionSpec) -> AssociatedFunction:
    m = _m(f.n)
    table = tuple(
        f.value_by_weight[l] if l <= f.n else 0 for l in range(1 << m)
    )
    return AssociatedFunction(m, table)


def fourier_coefficients(g: AssociatedFunction) -> FourierSpec:
    """Exact integer coefficients c_t = sum_u g(u) (2*parity(u&t) - 1).

    The expansion identity is re-checked exhaustively before returning; a
    failure is an implementation bug, not a data error.
    """
    if g.m > 20:
        raise ValueError("table too large to enumerate")
    size = 1 << g.m
    coeffs = []
    for t in range(1, size):
        c = 0
        for u in range(size):
            if g.table[u]:
                c += 2 * ((u & t).bit_count() & 1) - 1
        coeffs.append(c)
    spec = FourierSpec(g.m, g.table[0], tuple(coeffs))
    for s in range(size):
        if eval_fourier(spec, format(s, f"0{g.m}b")[::-1]) != g.table[s]:
            raise AssertionError(f"Fourier expansion failed at s={s}")
    return spec


def eval_fourier(spec: FourierSpec, s: str) -> int:
    """Evaluate the expansion at the bit string s (s_1 first); exact integer
    arithmetic, asserting the parity sum is divisible by 2^(m-1)."""
    if len(s) != spec.m:
        raise ValueError(f"expected {spec.m} bits")
    sval = 0
    for k, bit in enumerate(s):
        sval |= (bit == "1") << k
    acc = 0
    for t in range(1, 1 << spec.m):
        if (t & sval).bit_count() & 1:
            acc += spec.coefficients[t - 1]
    divisor = 1 << (spec.m - 1)
    if acc % divisor:
        raise AssertionError(f"parity sum {acc} not divisible by {divisor}")
    value = spec.constant + acc // divisor
    if value not in (0, 1):
        raise AssertionError(f"expansion value {value} is not a bit")
    return value


def load_function(text: str) -> SymmetricFunctionSpec:
    """Parse `n` followed by the n+1 weight-table bits, whitespace-separated."""
    tokens = text.split()
    if not tokens:
        raise ValueError("empty function file")
    n = int(tokens[0])
    values = tuple(int(t) for t in tokens[1:])
    return SymmetricFunctionSpec(n, values)


def dump_function(f: SymmetricFunctionSpec) -> str:
    return f"{f.n} " + " ".join(str(v) for v in f.value_by_weight) + "\n"
