"""Circuit representation: layered gate lists, named registers, metrics,
a text serialization with exact round-trip, and an OpenQASM-3-subset export.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field

from .gates import KINDS, DyadicAngle, GateOp, ZERO_ANGLE, phase, x as x_gate


@dataclass(frozen=True)
class Circuit:
    qubit_count: int
    layers: tuple[tuple[GateOp, ...], ...]

    def __post_init__(self):
        for layer in self.layers:
            used = set()
            for gate in layer:
                for q in gate.support:
                    if q >= self.qubit_count:
                        raise ValueError(
                            f"gate qubit {q} out of range ({self.qubit_count} qubits)"
                        )
                    if q in used:
                        raise ValueError(f"layer has overlapping gates on qubit {q}")
                    used.add(q)

    def gates(self):
        for layer in self.layers:
            yield from layer

    @property
    def gate_count(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def inverse(self) -> "Circuit":
        layers = tuple(
            tuple(g.inverse() for g in layer) for layer in reversed(self.layers)
        )
        return Circuit(self.qubit_count, layers)

    def remapped(self, mapping, qubit_count: int) -> "Circuit":
        layers = tuple(
            tuple(g.remapped(mapping) for g in layer) for layer in self.layers
        )
        return Circuit(qubit_count, layers)


def from_layers(qubit_count: int, layers) -> Circuit:
    return Circuit(qubit_count, tuple(tuple(layer) for layer in layers if layer))


def from_gates(qubit_count: int, gates) -> Circuit:
    """One gate per layer, preserving sequence order."""
    return Circuit(qubit_count, tuple((g,) for g in gates))


def concat(*circuits: Circuit) -> Circuit:
    qc = max(c.qubit_count for c in circuits)
    layers = []
    for c in circuits:
        layers.extend(c.layers)
    return Circuit(qc, tuple(layers))


def repack(circuit: Circuit) -> Circuit:
    """Greedy earliest-fit relayering in gate order.

    Minimum depth is NP-hard in general; this deterministic left-to-right
    packing is the committed approximation and the value all depth metrics
    and bounds refer to.
    """
    last = {}
    layers: list[list[GateOp]] = []
    for gate in circuit.gates():
        at = 0
        for q in gate.support:
            prev = last.get(q)
            if prev is not None and prev >= at:
                at = prev + 1
        if at == len(layers):
            layers.append([])
        layers[at].append(gate)
        for q in gate.support:
            last[q] = at
    return Circuit(circuit.qubit_count, tuple(tuple(l) for l in layers))


def depth(circuit: Circuit) -> int:
    return len(repack(circuit).layers)


def size(circuit: Circuit) -> int:
    return sum(g.width for g in circuit.gates())


def census(circuit: Circuit) -> dict[str, int]:
    counts = Counter(g.kind for g in circuit.gates())
    return {k: counts[k] for k in KINDS if counts[k]}


@dataclass(frozen=True)
class RegisterMap:
    """Disjoint named qubit groups partitioning [0, qubit_count).

    `uninitialized_groups` preserves declaration order; p and q are the
    initialized / uninitialized ancilla counts.
    """

    qubit_count: int
    input: tuple[int, ...] = ()
    output: tuple[int, ...] = ()
    initialized: tuple[int, ...] = ()
    uninitialized_groups: tuple[tuple[str, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        seen = []
        for qs in (self.input, self.output, self.initialized, *
                   (qs for _, qs in self.uninitialized_groups)):
            seen.extend(qs)
        if sorted(seen) != list(range(self.qubit_count)):
            raise ValueError("registers do not partition the qubit range")

    @property
    def uninitialized(self) -> tuple[int, ...]:
        out = []
        for _, qs in self.uninitialized_groups:
            out.extend(qs)
        return tuple(out)

    @property
    def p(self) -> int:
        return len(self.initialized)

    @property
    def q(self) -> int:
        return len(self.uninitialized)

    def group(self, name: str) -> tuple[int, ...]:
        for n, qs in self.uninitialized_groups:
            if n == name:
                return qs
        raise KeyError(name)

    def with_extra_uninitialized(self, name: str, qubits) -> "RegisterMap":
        return RegisterMap(
            self.qubit_count + len(tuple(qubits)),
            self.input,
            self.output,
            self.initialized,
            self.uninitialized_groups + ((name, tuple(qubits)),),
        )

    def to_dict(self) -> dict:
        return {
            "qubit_count": self.qubit_count,
            "input": list(self.input),
            "output": list(self.output),
            "initialized": list(self.initialized),
            "uninitialized": {n: list(qs) for n, qs in self.uninitialized_groups},
            "p": self.p,
            "q": self.q,
        }


# --- text format ------------------------------------------------------------
#
# First line `qubits N`; one gate per line, `KIND q[i] q[j] ... [c/2^t]` with
# controls (or parity sources) before targets; layers separated by `---`.
# print_circuit(parse_circuit(s)) == s for every emitted file.

def format_gate(gate: GateOp) -> str:
    parts = [gate.kind] + [f"q[{q}]" for q in gate.support]
    if gate.angle is not None:
        parts.append(str(gate.angle))
    return " ".join(parts)


def print_circuit(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.qubit_count}"]
    for i, layer in enumerate(circuit.layers):
        if i:
            lines.append("---")
        lines.extend(format_gate(g) for g in layer)
    return "\n".join(lines) + "\n"


class CircuitParseError(ValueError):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


_QUBIT_RE = re.compile(r"^q\[(\d+)\]$")
_ANGLE_RE = re.compile(r"^(-?\d+)/2\^(\d+)$")


def _parse_gate(tokens: list[str], line_number: int) -> GateOp:
    kind = tokens[0]
    if kind not in KINDS:
        raise CircuitParseError(line_number, f"unknown gate kind {kind!r}")
    angle = None
    rest = tokens[1:]
    if rest and not rest[-1].startswith("q["):
        m = _ANGLE_RE.match(rest[-1])
        if not m:
            raise CircuitParseError(line_number, f"bad angle {rest[-1]!r}")
        angle = DyadicAngle(int(m.group(1)), int(m.group(2)))
        rest = rest[:-1]
    qubits = []
    for tok in rest:
        m = _QUBIT_RE.match(tok)
        if not m:
            raise CircuitParseError(line_number, f"bad qubit token {tok!r}")
        qubits.append(int(m.group(1)))
    if not qubits:
        raise CircuitParseError(line_number, "gate without qubits")
    ncontrols = {
        "H": 0, "X": 0, "Z": 0, "PHASE": 0, "CNOT": 1, "FANOUT": 1,
        "TOFFOLI": len(qubits) - 1, "CPHASE": len(qubits) - 1,
        "PARITY": len(qubits) - 1,
    }[kind]
    try:
        return GateOp(kind, tuple(qubits[:ncontrols]), tuple(qubits[ncontrols:]), angle)
    except ValueError as e:
        raise CircuitParseError(line_number, str(e)) from None


def parse_circuit(text: str) -> Circuit:
    qubit_count = None
    layers: list[list[GateOp]] = [[]]
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if qubit_count is None:
            m = re.match(r"^qubits\s+(\d+)$", line)
            if not m:
                raise CircuitParseError(line_number, "expected header `qubits N`")
            qubit_count = int(m.group(1))
            continue
        if line == "---":
            layers.append([])
            continue
        layers[-1].append(_parse_gate(line.split(), line_number))
    if qubit_count is None:
        raise CircuitParseError(1, "missing header `qubits N`")
    if layers == [[]]:
        layers = []
    try:
        return Circuit(qubit_count, tuple(tuple(l) for l in layers))
    except ValueError as e:
        raise CircuitParseError(line_number, str(e)) from None


# --- OpenQASM subset export ---------------------------------------------------

def export_qasm(circuit: Circuit) -> str:
    """Emit the elementary-set circuit as an OpenQASM-3 subset.

    Phase gates are spelled `p(2*pi*c/2^t)` per the file contract (OpenQASM 3
    proper spells exponentiation `**`; consumers of this subset format should
    read `^` as power).
    """
    lines = ["OPENQASM 3.0;", f"qubit[{circuit.qubit_count}] q;"]
    for gate in circuit.gates():
        if gate.kind == "H":
            lines.append(f"h q[{gate.targets[0]}];")
        elif gate.kind == "CNOT":
            lines.append(f"cx q[{gate.controls[0]}], q[{gate.targets[0]}];")
        elif gate.kind in ("PHASE", "Z"):
            a = gate.angle if gate.kind == "PHASE" else DyadicAngle(1, 1)
            lines.append(f"p(2*pi*{a.num}/2^{a.exp}) q[{gate.targets[0]}];")
        else:
            raise ValueError(f"{gate.kind} is not in the elementary set; lower first")
    return "\n".join(lines) + "\n"


# --- classical-control specialization ----------------------------------------

@dataclass
class SpecializeResult:
    circuit: Circuit
    index_map: dict[int, int]        # old live qubit -> new index
    final_values: dict[int, int]     # fixed qubit -> classical value at the end
    dropped_phase: DyadicAngle       # global phase from fully classical CPHASEs


def specialize(circuit: Circuit, fixed: dict[int, int]) -> SpecializeResult:
    """Partial-evaluate a circuit over qubits pinned to classical bits.

    Fixed qubits may be toggled by X-type gates (the classical value is
    tracked) but must never enter superposition; an H, or an entangling
    target with live controls, raises ValueError.
    """
    values = dict(fixed)
    live = [q for q in range(circuit.qubit_count) if q not in values]
    index_map = {q: i for i, q in enumerate(live)}
    dropped = ZERO_ANGLE
    out_layers: list[list[GateOp]] = []

    for layer in circuit.layers:
        out_layer: list[GateOp] = []
        overflow: list[GateOp] = []
        for gate in layer:
            kind = gate.kind
            if kind == "H" and gate.targets[0] in values:
                raise ValueError(f"H on fixed qubit {gate.targets[0]}")
            if kind in ("H", "PHASE", "Z", "X"):
                q = gate.targets[0]
                if q not in values:
                    out_layer.append(gate.remapped(index_map))
                elif kind == "X":
                    values[q] ^= 1
                elif values[q] == 1:
                    a = gate.angle if kind == "PHASE" else DyadicAngle(1, 1)
                    dropped = dropped.added(a)
                continue
            if kind == "CPHASE":
                live_qs = [q for q in gate.support if q not in values]
                if any(values[q] == 0 for q in gate.support if q in values):
                    continue
                if not live_qs:
                    dropped = dropped.added(gate.angle)
                elif len(live_qs) == 1:
                    out_layer.append(phase(index_map[live_qs[0]], gate.angle))
                else:
                    out_layer.append(
                        GateOp("CPHASE",
                               tuple(index_map[q] for q in live_qs[:-1]),
                               (index_map[live_qs[-1]],), gate.angle)
                    )
                continue
            if kind in ("CNOT", "TOFFOLI", "FANOUT"):
                controls = gate.controls if kind != "FANOUT" else gate.controls
                live_ctl = [q for q in controls if q not in values]
                if any(values[q] == 0 for q in controls if q in values):
                    continue
                targets = gate.targets
                fixed_tgts = [q for q in targets if q in values]
                live_tgts = [q for q in targets if q not in values]
                if live_ctl and fixed_tgts:
                    raise ValueError("live-controlled toggle of a fixed qubit")
                if not live_ctl:
                    for q in fixed_tgts:
                        values[q] ^= 1
                    for q in live_tgts:
                        out_layer.append(x_gate(index_map[q]))
                    continue
                mapped_ctl = tuple(index_map[q] for q in live_ctl)
                mapped_tgts = tuple(index_map[q] for q in live_tgts)
                if kind == "FANOUT":
                    out_layer.append(GateOp("FANOUT", mapped_ctl, mapped_tgts))
                elif len(mapped_ctl) == 1:
                    out_layer.append(GateOp("CNOT", mapped_ctl, mapped_tgts))
                else:
                    out_layer.append(GateOp("TOFFOLI", mapped_ctl, mapped_tgts))
                continue
            if kind == "PARITY":
                live_src = [q for q in gate.controls if q not in values]
                fixed_par = 0
                for q in gate.controls:
                    if q in values:
                        fixed_par ^= values[q]
                tgt = gate.targets[0]
                if tgt in values:
                    if live_src:
                        raise ValueError("live-controlled toggle of a fixed qubit")
                    values[tgt] ^= fixed_par
                    continue
                mt = index_map[tgt]
                if live_src:
                    out_layer.append(
                        GateOp("PARITY", tuple(index_map[q] for q in live_src), (mt,))
                    )
                    if fixed_par:
                        overflow.append(x_gate(mt))
                elif fixed_par:
                    out_layer.append(x_gate(mt))
                continue
            raise ValueError(f"unknown gate kind {kind!r}")
        if out_layer:
            out_layers.append(out_layer)
        if overflow:
            out_layers.append(overflow)

    spec = Circuit(len(live), tuple(tuple(l) for l in out_layers))
    return SpecializeResult(spec, index_map, values, dropped)
