"""Dyadic phase angles and gate operations.

Every phase in this library is an exact dyadic fraction of a full turn,
2*pi*c/2^t, kept in integer form until the final complex exponential so that
phase accumulation is exact and only one rounding happens per gate.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field


@dataclass(frozen=True, slots=True)
class DyadicAngle:
    """Angle 2*pi*num/2^exp, stored in canonical form.

    Canonical means exp >= 1, num reduced into [0, 2^exp), and num odd unless
    the angle is zero (zero is (0, 1)).  Each physical phase has exactly one
    canonical representation, so equality of DyadicAngles is equality of
    phases.
    """

    num: int
    exp: int = 1

    def __post_init__(self):
        if self.exp < 1:
            raise ValueError(f"exponent must be >= 1, got {self.exp}")
        num = self.num % (1 << self.exp)
        exp = self.exp
        while exp > 1 and num % 2 == 0:
            num //= 2
            exp -= 1
        if num == 0:
            exp = 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    @property
    def is_zero(self) -> bool:
        return self.num == 0

    def negated(self) -> "DyadicAngle":
        return DyadicAngle(-self.num, self.exp)

    def added(self, other: "DyadicAngle") -> "DyadicAngle":
        exp = max(self.exp, other.exp)
        num = (self.num << (exp - self.exp)) + (other.num << (exp - other.exp))
        return DyadicAngle(num, exp)

    def halved(self) -> "DyadicAngle":
        return DyadicAngle(self.num, self.exp + 1)

    def scaled(self, factor: int) -> "DyadicAngle":
        return DyadicAngle(self.num * factor, self.exp)

    @property
    def radians(self) -> float:
        return math.tau * self.num / (1 << self.exp)

    def unit(self) -> complex:
        """The complex number e^{i * angle} (the one rounding point)."""
        return cmath.exp(1j * self.radians)

    def __str__(self) -> str:
        return f"{self.num}/2^{self.exp}"


ZERO_ANGLE = DyadicAngle(0, 1)
PI = DyadicAngle(1, 1)

# Gate kinds.  H/X/Z/PHASE act on one qubit; CNOT is 1 control + 1 target;
# FANOUT xors its control into every target; TOFFOLI flips its target iff all
# controls are 1; CPHASE multiplies by e^{i*angle} iff all its qubits are 1
# (so the control/target split is cosmetic); PARITY xors the parity of its
# sources (held in `controls`) into the target.
KINDS = ("H", "X", "Z", "PHASE", "CNOT", "FANOUT", "TOFFOLI", "CPHASE", "PARITY")

_ANGLED = {"PHASE", "CPHASE"}


@dataclass(frozen=True, slots=True)
class GateOp:
    kind: str
    controls: tuple[int, ...] = ()
    targets: tuple[int, ...] = ()
    angle: DyadicAngle | None = None

    def __post_init__(self):
        k = self.kind
        nc, nt = len(self.controls), len(self.targets)
        if k not in KINDS:
            raise ValueError(f"unknown gate kind {k!r}")
        ok = {
            "H": nc == 0 and nt == 1,
            "X": nc == 0 and nt == 1,
            "Z": nc == 0 and nt == 1,
            "PHASE": nc == 0 and nt == 1,
            "CNOT": nc == 1 and nt == 1,
            "FANOUT": nc == 1 and nt >= 1,
            "TOFFOLI": nc >= 1 and nt == 1,
            "CPHASE": nc >= 1 and nt == 1,
            "PARITY": nc >= 1 and nt == 1,
        }[k]
        if not ok:
            raise ValueError(f"{k} gate got {nc} controls / {nt} targets")
        if (self.angle is not None) != (k in _ANGLED):
            raise ValueError(f"{k} gate {'missing' if k in _ANGLED else 'rejects'} an angle")
        support = self.controls + self.targets
        if len(set(support)) != len(support):
            raise ValueError(f"{k} gate has repeated qubits: {support}")
        if any(q < 0 for q in support):
            raise ValueError("qubit indices must be nonnegative")

    @property
    def support(self) -> tuple[int, ...]:
        return self.controls + self.targets

    @property
    def width(self) -> int:
        """Number of qubits the gate acts on (its size contribution)."""
        return len(self.controls) + len(self.targets)

    def inverse(self) -> "GateOp":
        if self.angle is not None:
            return GateOp(self.kind, self.controls, self.targets, self.angle.negated())
        return self

    def remapped(self, mapping) -> "GateOp":
        """Same gate with qubit indices translated through `mapping`."""
        return GateOp(
            self.kind,
            tuple(mapping[q] for q in self.controls),
            tuple(mapping[q] for q in self.targets),
            self.angle,
        )


def h(q: int) -> GateOp:
    return GateOp("H", (), (q,))


def x(q: int) -> GateOp:
    return GateOp("X", (), (q,))


def z(q: int) -> GateOp:
    return GateOp("Z", (), (q,))


def phase(q: int, angle: DyadicAngle) -> GateOp:
    return GateOp("PHASE", (), (q,), angle)


def cnot(control: int, target: int) -> GateOp:
    return GateOp("CNOT", (control,), (target,))


def fanout(control: int, targets) -> GateOp:
    return GateOp("FANOUT", (control,), tuple(targets))


def toffoli(controls, target: int) -> GateOp:
    return GateOp("TOFFOLI", tuple(controls), (target,))


def cphase(qubits, angle: DyadicAngle) -> GateOp:
    qs = tuple(qubits)
    return GateOp("CPHASE", qs[:-1], qs[-1:], angle)


def parity(sources, target: int) -> GateOp:
    return GateOp("PARITY", tuple(sources), (target,))
