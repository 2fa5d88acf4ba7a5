"""Dense statevector simulation of every gate kind in the extended set.

Convention: basis index bit j (least significant) is qubit j.  Amplitudes are
complex128; kernels mutate in place and also accept arrays of shape
(2^Q, batch) so exhaustive sweeps can run many initial states per pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gates import GateOp

_SQRT_HALF = math.sqrt(0.5)


@lru_cache(maxsize=32)
def _indices(qubit_count: int) -> np.ndarray:
    return np.arange(1 << qubit_count, dtype=np.int64)


def _bit_views(amps: np.ndarray, qubit_count: int, q: int):
    """Split amplitudes along basis-index bit q; trailing batch axes fold in."""
    dim = 1 << qubit_count
    rest = amps.size // dim
    v = amps.reshape(dim >> (q + 1), 2, (1 << q) * rest)
    return v[:, 0], v[:, 1]


def apply_inplace(amps: np.ndarray, qubit_count: int, gate: GateOp) -> None:
    """Apply one gate to amps (shape (2^Q,) or (2^Q, batch)), in place."""
    kind = gate.kind
    if kind == "H":
        a0, a1 = _bit_views(amps, qubit_count, gate.targets[0])
        t = a0.copy()
        a0 += a1
        a0 *= _SQRT_HALF
        np.subtract(t, a1, out=a1)
        a1 *= _SQRT_HALF
        return
    if kind == "X":
        a0, a1 = _bit_views(amps, qubit_count, gate.targets[0])
        t = a0.copy()
        a0[...] = a1
        a1[...] = t
        return
    if kind == "Z":
        _, a1 = _bit_views(amps, qubit_count, gate.targets[0])
        a1 *= -1.0
        return
    if kind == "PHASE":
        _, a1 = _bit_views(amps, qubit_count, gate.targets[0])
        a1 *= gate.angle.unit()
        return
    if kind == "CNOT":
        c, t = gate.controls[0], gate.targets[0]
        hi, lo = max(c, t), min(c, t)
        dim = 1 << qubit_count
        rest = amps.size // dim
        v = amps.reshape(-1, 2, 1 << (hi - lo - 1), 2, (1 << lo) * rest)
        ci, ti = (1, 3) if c == hi else (3, 1)
        sel = [slice(None)] * 5
        sel[ci] = 1
        s0, s1 = list(sel), list(sel)
        s0[ti], s1[ti] = 0, 1
        tmp = v[tuple(s0)].copy()
        v[tuple(s0)] = v[tuple(s1)]
        v[tuple(s1)] = tmp
        return

    idx = _indices(qubit_count)
    if kind == "CPHASE":
        if gate.angle.is_zero:
            return
        mask = _bits_mask(gate.support)
        amps[(idx & mask) == mask] *= gate.angle.unit()
        return
    if kind in ("FANOUT", "TOFFOLI"):
        cmask = _bits_mask(gate.controls)
        fmask = _bits_mask(gate.targets)
        sel = np.flatnonzero((idx & cmask) == cmask)
        amps[sel] = amps[sel ^ fmask]
        return
    if kind == "PARITY":
        smask = _bits_mask(gate.controls)
        fmask = 1 << gate.targets[0]
        sel = np.flatnonzero((np.bitwise_count(idx & smask) & 1).astype(bool))
        amps[sel] = amps[sel ^ fmask]
        return
    raise ValueError(f"unknown gate kind {kind!r}")


def _bits_mask(qubits) -> int:
    m = 0
    for q in qubits:
        m |= 1 << q
    return m


@dataclass(frozen=True)
class StateVector:
    """Unit-norm dense state over qubit_count qubits."""

    qubit_count: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.qubit_count < 1:
            raise ValueError("qubit_count must be >= 1")
        if self.amplitudes.shape != (1 << self.qubit_count,):
            raise ValueError(
                f"expected {1 << self.qubit_count} amplitudes, got {self.amplitudes.shape}"
            )
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state norm {norm} deviates from 1 by more than 1e-12")

    def copy(self) -> "StateVector":
        return StateVector(self.qubit_count, self.amplitudes.copy())


def prepare_basis(qubit_count: int, bits: str) -> StateVector:
    """Basis state |bits>, where bits[j] is the value of qubit j."""
    if len(bits) != qubit_count:
        raise ValueError(f"expected {qubit_count} bits, got {len(bits)}")
    index = 0
    for j, b in enumerate(bits):
        if b not in "01":
            raise ValueError(f"bad bit {b!r}")
        index |= (b == "1") << j
    amps = np.zeros(1 << qubit_count, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(qubit_count, amps)


def basis_index(bits: str) -> int:
    index = 0
    for j, b in enumerate(bits):
        index |= (b == "1") << j
    return index


def from_amplitudes(amps) -> StateVector:
    a = np.asarray(amps, dtype=np.complex128)
    qubit_count = int(a.size - 1).bit_length()
    return StateVector(qubit_count, a)


def apply_gate(state: StateVector, gate: GateOp) -> StateVector:
    for q in gate.support:
        if q >= state.qubit_count:
            raise ValueError(f"gate qubit {q} out of range for {state.qubit_count} qubits")
    amps = state.amplitudes.copy()
    apply_inplace(amps, state.qubit_count, gate)
    return StateVector(state.qubit_count, amps)


def run_circuit(state: StateVector, circuit) -> StateVector:
    """Apply circuit layers in order.  Gate order within a layer is irrelevant
    because layer supports are pairwise disjoint (Circuit invariant)."""
    if circuit.qubit_count != state.qubit_count:
        raise ValueError(
            f"circuit acts on {circuit.qubit_count} qubits, state has {state.qubit_count}"
        )
    amps = state.amplitudes.copy()
    for layer in circuit.layers:
        for gate in layer:
            apply_inplace(amps, state.qubit_count, gate)
    return StateVector(state.qubit_count, amps)


def run_on_array(amps: np.ndarray, qubit_count: int, circuit) -> None:
    """In-place circuit run on a raw (2^Q,) or (2^Q, batch) array."""
    for layer in circuit.layers:
        for gate in layer:
            apply_inplace(amps, qubit_count, gate)


def output_probability(state: StateVector, qubit: int) -> tuple[float, float]:
    """Z-basis marginal (p0, p1) of one qubit."""
    if qubit >= state.qubit_count:
        raise ValueError(f"qubit {qubit} out of range")
    a0, a1 = _bit_views(state.amplitudes, state.qubit_count, qubit)
    p1 = float(np.sum(np.abs(a1) ** 2))
    p0 = float(np.sum(np.abs(a0) ** 2))
    return p0, p1


def marginal_probability(state: StateVector, qubits, bits: int) -> float:
    """Probability that measuring `qubits` yields the bit values packed in
    `bits` (bit i of `bits` is the value of qubits[i])."""
    mask = 0
    want = 0
    for i, q in enumerate(qubits):
        mask |= 1 << q
        want |= ((bits >> i) & 1) << q
    idx = _indices(state.qubit_count)
    sel = (idx & mask) == want
    return float(np.sum(np.abs(state.amplitudes[sel]) ** 2))


def state_distance(a: StateVector, b: StateVector) -> float:
    """Euclidean norm of the amplitude difference (global phase matters)."""
    if a.qubit_count != b.qubit_count:
        raise ValueError("states have different qubit counts")
    return float(np.linalg.norm(a.amplitudes - b.amplitudes))


def phase_insensitive_distance(a: StateVector, b: StateVector) -> float:
    """min over phi of ||a - e^{i phi} b||: the catalytic-check distance."""
    if a.qubit_count != b.qubit_count:
        raise ValueError("states have different qubit counts")
    overlap = abs(np.vdot(a.amplitudes, b.amplitudes))
    return math.sqrt(max(0.0, 2.0 - 2.0 * overlap))


def random_state(qubit_count: int, rng: np.random.Generator) -> StateVector:
    v = rng.standard_normal(1 << qubit_count) + 1j * rng.standard_normal(1 << qubit_count)
    v /= np.linalg.norm(v)
    return StateVector(qubit_count, v)


def product_state(single_qubit_states) -> StateVector:
    """Tensor product of per-qubit (alpha, beta) pairs; qubit 0 first."""
    amps = np.array([1.0 + 0j])
    for alpha, beta in single_qubit_states:
        q = np.array([alpha, beta], dtype=np.complex128)
        amps = np.kron(q, amps)
    amps = amps / np.linalg.norm(amps)
    return StateVector(len(single_qubit_states), amps)


def random_qubit(rng: np.random.Generator) -> tuple[complex, complex]:
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    v /= np.linalg.norm(v)
    return complex(v[0]), complex(v[1])
