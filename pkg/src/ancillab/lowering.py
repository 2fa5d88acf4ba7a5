"""Lowering of extended gates to the elementary set {H, PHASE, CNOT}.

Fan-out and parity gates become CNOT trees of logarithmic depth; Toffolis use
one borrowed (uninitialized) ancilla and a dirty ladder of linear depth;
multi-controlled phases paired around a fan-out segment collapse via the
cancellation rewrite, leaving two Toffolis and four 1-controlled phases.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, RegisterMap, census, depth, from_gates, repack, size
from .gates import (
    DyadicAngle,
    GateOp,
    PI,
    cnot,
    cphase,
    fanout,
    h,
    phase,
    toffoli,
)

_T = DyadicAngle(1, 3)
_TDG = _T.negated()

ELEMENTARY = ("H", "PHASE", "CNOT")
EXTENDED = ("H", "PHASE", "CNOT", "FANOUT", "TOFFOLI")


# --- CNOT trees ---------------------------------------------------------------

def parity_tree_layers(sources, target: int) -> list[list[GateOp]]:
    """CNOT layers computing target ^= XOR(sources), sources restored.

    Binomial up-sweep into the root, then the non-root combines re-applied in
    reverse.  Depth <= 2*ceil(log2(len+1)) - 1.
    """
    nodes = [target] + list(sources)
    up: list[list[GateOp]] = []
    stride = 1
    while stride < len(nodes):
        layer = [
            cnot(nodes[i + stride], nodes[i])
            for i in range(0, len(nodes), 2 * stride)
            if i + stride < len(nodes)
        ]
        up.append(layer)
        stride *= 2
    down = [
        [g for g in layer if g.targets[0] != target]
        for layer in reversed(up)
    ]
    return up + [l for l in down if l]


def fanout_tree_layers(control: int, targets) -> list[list[GateOp]]:
    """CNOT layers equal to the fan-out gate: the parity tree conjugated by
    H on every qubit, which simply reverses each CNOT."""
    return [
        [cnot(g.targets[0], g.controls[0]) for g in layer]
        for layer in parity_tree_layers(targets, control)
    ]


def lower_fanout(k: int) -> Circuit:
    """CNOT-only equivalent of a fan-out on k+1 qubits (control 0)."""
    if k < 1:
        raise ValueError("fan-out needs at least one target")
    return Circuit(k + 1, tuple(tuple(l) for l in fanout_tree_layers(0, range(1, k + 1))))


# --- Toffoli ------------------------------------------------------------------

def _ccx_gates(c1: int, c2: int, t: int) -> list[GateOp]:
    return [
        h(t),
        cnot(c2, t), phase(t, _TDG),
        cnot(c1, t), phase(t, _T),
        cnot(c2, t), phase(t, _TDG),
        cnot(c1, t), phase(c2, _T), phase(t, _T),
        h(t),
        cnot(c1, c2), phase(c1, _T), phase(c2, _TDG),
        cnot(c1, c2),
    ]


def _mcx_dirty_ladder(controls, target: int, dirty) -> list[GateOp]:
    """m-controlled X from 3-qubit pieces using m-2 borrowed qubits.

    Every borrowed qubit is returned to its initial state, whatever it was,
    so the ladder is safe on live data.
    """
    m = len(controls)
    if m == 1:
        return [cnot(controls[0], target)]
    if m == 2:
        return _ccx_gates(controls[0], controls[1], target)
    anc = list(dirty[: m - 2])
    if len(anc) < m - 2:
        raise ValueError("not enough borrowed qubits for the ladder")
    rungs = [(controls[i + 1], anc[i - 1], anc[i]) for i in range(m - 3, 0, -1)]
    top = (controls[m - 1], anc[m - 3], target)
    root = (controls[0], controls[1], anc[0])
    inner = rungs + [root] + [r for r in reversed(rungs)]
    seq = [top] + inner + [top] + inner
    out: list[GateOp] = []
    for c1, c2, t in seq:
        out.extend(_ccx_gates(c1, c2, t))
    return out


def toffoli_gates(controls, target: int, dirty) -> list[GateOp]:
    """k-controlled X in the elementary set; k >= 3 borrows dirty[0] only
    (the two halves lend each other the remaining borrowed qubits)."""
    controls = tuple(controls)
    k = len(controls)
    if k == 1:
        return [cnot(controls[0], target)]
    if k == 2:
        return _ccx_gates(controls[0], controls[1], target)
    if not dirty:
        raise ValueError("k >= 3 Toffoli needs one borrowed qubit")
    a = dirty[0]
    half = (k + 1) // 2
    first, second = controls[:half], controls[half:]
    ta = _mcx_dirty_ladder(first, a, second + (target,))
    tb = _mcx_dirty_ladder(second + (a,), target, first)
    return ta + tb + ta + tb


def lower_toffoli(k: int, ancilla: int | None = None, mode: str = "to_G") -> Circuit:
    """k-controlled Toffoli on controls 0..k-1, target k.

    mode "to_G": elementary-set circuit; k >= 3 needs `ancilla` (a borrowed
    qubit outside 0..k, restored for either basis value).  mode
    "to_Z_sandwich": a k-controlled Z between two H gates on the target.
    """
    controls = tuple(range(k))
    target = k
    if mode == "to_Z_sandwich":
        gates = [h(target), cphase(controls + (target,), PI), h(target)]
        return from_gates(k + 1, gates)
    if mode != "to_G":
        raise ValueError(f"unknown mode {mode!r}")
    if k <= 2:
        return from_gates(k + 1, toffoli_gates(controls, target, ()))
    if ancilla is None or ancilla <= k:
        raise ValueError("k >= 3 needs an ancilla index outside the gate qubits")
    gates = toffoli_gates(controls, target, (ancilla,))
    return from_gates(ancilla + 1, gates)


# --- controlled phases --------------------------------------------------------

def controlled_phase_pair_gates(c: int, t: int, angle: DyadicAngle) -> list[GateOp]:
    """1-controlled phase as elementary gates (the committed decomposition:
    half-angle on each qubit, CNOT, negative half on target, CNOT)."""
    half = angle.halved()
    return [
        phase(c, half),
        phase(t, half),
        cnot(c, t),
        phase(t, half.negated()),
        cnot(c, t),
    ]


def _cphase_gates(qubits, angle: DyadicAngle, keep_toffoli: bool = False) -> list[GateOp]:
    """k-controlled phase via halving recursion; borrows only gate qubits."""
    qs = tuple(qubits)
    if angle.is_zero:
        return []
    if len(qs) == 1:
        return [phase(qs[0], angle)]
    if len(qs) == 2:
        return controlled_phase_pair_gates(qs[0], qs[1], angle)
    t, ck, rest = qs[-1], qs[-2], qs[:-2]
    half = angle.halved()
    tof = [toffoli(rest, ck)] if keep_toffoli else toffoli_gates(rest, ck, (t,))
    return (
        controlled_phase_pair_gates(ck, t, half)
        + tof
        + controlled_phase_pair_gates(ck, t, half.negated())
        + tof
        + _cphase_gates(rest + (t,), half, keep_toffoli)
    )


def _sandwich_half(support, toggled: int, angle: DyadicAngle,
                   keep_toffoli: bool = True) -> list[GateOp]:
    """One of the two identical gate runs that replace the pair
    CP(+angle) ... CP(-angle) around a segment toggling only `toggled`."""
    others = [q for q in support if q != toggled]
    t, rest = others[0], tuple(others[1:])
    half = angle.halved()
    if not rest:
        mid = [GateOp("X", (), (toggled,))]
    elif keep_toffoli or len(rest) <= 2:
        mid = [toffoli(rest, toggled)]
    else:
        mid = toffoli_gates(rest, toggled, (t,))
    return (
        [cphase((toggled, t), half)]
        + mid
        + [cphase((toggled, t), half.negated())]
    )


def lower_phase_fanout_sandwich(
    k: int,
    angle: DyadicAngle,
    segment: Circuit | None = None,
    sandwich_qubits=None,
    toggled: int | None = None,
) -> Circuit:
    """Replacement for CP(+angle), a fan-out segment, CP(-angle) on k+1 qubits.

    The segment must toggle exactly one sandwich qubit (default: the last),
    with its own controls outside the sandwich.  Result: two (k-1)-controlled
    Toffolis and four 1-controlled phases around the untouched segment.
    """
    if k < 1:
        raise ValueError("sandwich needs k >= 1")
    qs = tuple(sandwich_qubits) if sandwich_qubits is not None else tuple(range(k + 1))
    if len(qs) != k + 1:
        raise ValueError(f"expected {k + 1} sandwich qubits, got {len(qs)}")
    tau = toggled if toggled is not None else qs[-1]
    if tau not in qs:
        raise ValueError("toggled qubit must be a sandwich qubit")
    if segment is None:
        extra = max(qs) + 1
        segment = from_gates(extra + 1, [fanout(extra, (tau,))])
    sset = set(qs)
    for g in segment.gates():
        touched = [q for q in g.support if q in sset]
        if not touched:
            continue
        if g.kind not in ("X", "CNOT", "FANOUT", "TOFFOLI", "PARITY"):
            raise ValueError(f"segment gate {g.kind} on sandwich qubits is not a toggle")
        if set(g.targets) & sset != {tau} or tau in g.controls:
            raise ValueError("segment must toggle exactly the designated qubit")
    if angle.is_zero:
        return segment
    half = _sandwich_half(qs, tau, angle)
    layers = tuple((g,) for g in half) + segment.layers + tuple((g,) for g in half)
    return Circuit(max(segment.qubit_count, max(qs) + 1), layers)


# --- whole-circuit lowering -----------------------------------------------------

@dataclass
class LoweringReport:
    target: str
    gates_before: dict[str, int]
    gates_after: dict[str, int]
    depth_before: int
    depth_after: int
    size_before: int
    size_after: int
    ancillas_added: tuple[int, ...]
    registers: RegisterMap | None = None

    def to_dict(self) -> dict:
        d = {
            "target": self.target,
            "gates_before": self.gates_before,
            "gates_after": self.gates_after,
            "depth_before": self.depth_before,
            "depth_after": self.depth_after,
            "size_before": self.size_before,
            "size_after": self.size_after,
            "ancillas_added": list(self.ancillas_added),
        }
        if self.registers is not None:
            d["registers"] = self.registers.to_dict()
        return d


def _match_sandwiches(gates: list[GateOp]) -> dict[int, tuple[int, int | None]]:
    """Pair CPHASE gates that cancel around a single-qubit toggle.

    A pair CP(+a) at i and CP(-a) at j on the same qubit set rewrites when
    every gate in between that touches the set either (a) is an X-type gate
    toggling exactly one common set qubit tau, with tau not among its own
    controls, or (b) never involves tau at all.  Returns
    {open_position: (close_position, tau_or_None)}; tau None means nothing in
    between touches the set, so both phases cancel outright.
    """
    matches: dict[int, tuple[int, int | None]] = {}
    consumed: set[int] = set()
    xtype = ("X", "CNOT", "FANOUT", "TOFFOLI", "PARITY")
    for i, g in enumerate(gates):
        if g.kind != "CPHASE" or i in consumed or g.angle.is_zero:
            continue
        sset = set(g.support)
        want = g.angle.negated()
        close = None
        for j in range(i + 1, len(gates)):
            other = gates[j]
            if (j not in consumed and other.kind == "CPHASE"
                    and set(other.support) == sset and other.angle == want):
                close = j
                break
        if close is None:
            continue
        tau: int | None = None
        readers: list[GateOp] = []
        ok = True
        for j in range(i + 1, close):
            other = gates[j]
            if not sset.intersection(other.support):
                continue
            if other.kind in xtype:
                tgt = sset.intersection(other.targets)
                if not tgt:
                    readers.append(other)
                    continue
                if len(tgt) != 1:
                    ok = False
                    break
                this_tau = next(iter(tgt))
                if tau is None:
                    tau = this_tau
                elif tau != this_tau:
                    ok = False
                    break
                readers.append(other)  # re-checked below for control overlap
            elif other.kind in ("Z", "PHASE", "CPHASE"):
                readers.append(other)
            else:
                ok = False
                break
        if ok and tau is not None:
            for other in readers:
                if tau in other.controls or (
                    other.kind not in xtype and tau in other.support
                ):
                    ok = False
                    break
        if ok:
            matches[i] = (close, tau)
            consumed.add(i)
            consumed.add(close)
    return matches


def _expand(gate: GateOp, allowed, alloc, keep_toffoli: bool) -> list[GateOp]:
    kind = gate.kind
    if kind in allowed:
        return [gate]
    if kind == "Z":
        return [phase(gate.targets[0], PI)]
    if kind == "X":
        t = gate.targets[0]
        return [h(t), phase(t, PI), h(t)]
    if kind == "PARITY":
        return [g for layer in parity_tree_layers(gate.controls, gate.targets[0])
                for g in layer]
    if kind == "FANOUT":
        return [g for layer in fanout_tree_layers(gate.controls[0], gate.targets)
                for g in layer]
    if kind == "TOFFOLI":
        k = len(gate.controls)
        if k <= 2:
            return toffoli_gates(gate.controls, gate.targets[0], ())
        return toffoli_gates(gate.controls, gate.targets[0], (alloc(gate),))
    if kind == "CPHASE":
        return _cphase_gates(gate.support, gate.angle, keep_toffoli)
    raise ValueError(f"cannot lower gate kind {kind!r}")


def lower_circuit(
    circuit: Circuit,
    target: str = "elementary",
    registers: RegisterMap | None = None,
) -> tuple[Circuit, LoweringReport]:
    """Rewrite the circuit over the chosen gate set.

    target "elementary" is the {H, PHASE, CNOT} set; "extended" keeps fan-out
    and Toffoli gates.  Each raw Toffoli with >= 3 controls borrows one fresh
    uninitialized ancilla, appended after the existing qubits and recorded.
    """
    if target not in ("elementary", "extended"):
        raise ValueError(f"unknown target {target!r}")
    allowed = ELEMENTARY if target == "elementary" else EXTENDED

    flat = list(circuit.gates())
    matches = _match_sandwiches(flat)
    closers = {j: (i, tau) for i, (j, tau) in matches.items()}

    qubit_count = circuit.qubit_count
    added: list[int] = []

    def alloc(gate: GateOp) -> int:
        nonlocal qubit_count
        added.append(qubit_count)
        qubit_count += 1
        return qubit_count - 1

    keep_toffoli = target == "extended"
    staged: list[GateOp] = []
    for pos, gate in enumerate(flat):
        if pos in matches:
            _, tau = matches[pos]
            if tau is not None:
                staged.extend(_sandwich_half(gate.support, tau, gate.angle, keep_toffoli))
            continue
        if pos in closers:
            opener, tau = closers[pos]
            if tau is not None:
                staged.extend(
                    _sandwich_half(flat[opener].support, tau, flat[opener].angle,
                                   keep_toffoli)
                )
            continue
        staged.append(gate)

    out: list[GateOp] = []
    stack = list(reversed(staged))
    while stack:
        g = stack.pop()
        expanded = _expand(g, allowed, alloc, keep_toffoli)
        if len(expanded) == 1 and expanded[0] is g:
            out.append(g)
        else:
            stack.extend(reversed(expanded))

    lowered = from_gates(qubit_count, out)
    new_registers = None
    if registers is not None:
        new_registers = (
            registers.with_extra_uninitialized("TOFF", added) if added else registers
        )
    report = LoweringReport(
        target=target,
        gates_before=census(circuit),
        gates_after=census(lowered),
        depth_before=depth(circuit),
        depth_after=depth(lowered),
        size_before=size(circuit),
        size_after=size(lowered),
        ancillas_added=tuple(added),
        registers=new_registers,
    )
    return lowered, report
