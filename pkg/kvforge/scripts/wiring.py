"""
wiring.py - Oriented wiring diagrams and their operadic composition.

A diagram has an output disc 0 and input discs 1..r. Each disc k carries two
label sets: L_k^- (points where strands begin) and L_k^+ (points where strands
end). A boundary point is a port (k, label). Strands run from a "-" port to a
"+" port; closed components are only counted.

Composition D o_i E glues the output disc of E into slot i of D. It needs
L_i^- = L'_0^+ and L_i^+ = L'_0^-: a strand of E ending at output label a
continues along the strand of D beginning at (i, a), and vice versa.
"""

from dataclasses import dataclass
from itertools import permutations
from typing import FrozenSet, Iterable, Iterator, List, Sequence, Set, Tuple

from .errors import MalformedInputError

Port = Tuple[int, str]
Strand = Tuple[Port, Port]
Colour = Tuple[FrozenSet[str], FrozenSet[str]]


def colour(minus: Iterable, plus: Iterable) -> Colour:
    return frozenset(str(l) for l in minus), frozenset(str(l) for l in plus)


@dataclass(frozen=True)
class WiringDiagram:
    """
    Combinatorial wiring diagram.

    Args:
        output: (L_0^-, L_0^+)
        inputs: (L_i^-, L_i^+) for i = 1..r
        strands: directed strands (source port, target port)
        circles: number of closed components
    """

    output: Colour
    inputs: Tuple[Colour, ...]
    strands: FrozenSet[Strand]
    circles: int = 0

    def __post_init__(self):
        object.__setattr__(self, "output", colour(*self.output))
        object.__setattr__(self, "inputs", tuple(colour(*c) for c in self.inputs))
        object.__setattr__(self, "strands", frozenset(
            ((int(s[0]), str(s[1])), (int(t[0]), str(t[1]))) for s, t in self.strands))
        if self.circles < 0:
            raise MalformedInputError("circle count must be nonnegative")
        sources = [s for s, _ in self.strands]
        targets = [t for _, t in self.strands]
        if len(set(sources)) != len(sources) or set(sources) != self.start_ports():
            raise MalformedInputError("strands must begin exactly once at every '-' label")
        if len(set(targets)) != len(targets) or set(targets) != self.end_ports():
            raise MalformedInputError("strands must end exactly once at every '+' label")

    @property
    def arity(self) -> int:
        return len(self.inputs)

    def colours(self) -> List[Colour]:
        return [self.output] + list(self.inputs)

    def start_ports(self) -> Set[Port]:
        return {(k, l) for k, (minus, _) in enumerate(self.colours()) for l in minus}

    def end_ports(self) -> Set[Port]:
        return {(k, l) for k, (_, plus) in enumerate(self.colours()) for l in plus}

    def sorted_strands(self) -> List[Strand]:
        return sorted(self.strands)


def compose_at(D: WiringDiagram, i: int, E: WiringDiagram) -> WiringDiagram:
    """
    Glue E into input slot i (1-based) of D.

    Returns:
        WiringDiagram: strands concatenated through the glued boundary, with
        the closed loops formed by the gluing added to the circle count
    """
    if not 1 <= i <= D.arity:
        raise MalformedInputError(f"slot {i} outside 1..{D.arity}")
    slot_minus, slot_plus = D.inputs[i - 1]
    out_minus, out_plus = E.output
    if slot_minus != out_plus or slot_plus != out_minus:
        raise MalformedInputError(f"slot {i} labels do not match the output labels of the inserted diagram")
    s = E.arity

    def renumber_d(port: Port) -> Port:
        k, l = port
        return (k, l) if k < i else (k + s - 1, l)

    def renumber_e(port: Port) -> Port:
        k, l = port
        return (k + i - 1, l)

    d_from = {src: ("D", src, tgt) for src, tgt in D.strands}
    e_from = {src: ("E", src, tgt) for src, tgt in E.strands}

    def successor(node):
        side, _, tgt = node
        if side == "D" and tgt[0] == i:
            return e_from[(0, tgt[1])]
        if side == "E" and tgt[0] == 0:
            return d_from[(i, tgt[1])]
        return None

    nodes = list(d_from.values()) + list(e_from.values())
    visited = set()
    strands = []
    for node in nodes:
        side, src, _ = node
        glued = (side == "D" and src[0] == i) or (side == "E" and src[0] == 0)
        if glued:
            continue
        start = renumber_d(src) if side == "D" else renumber_e(src)
        current = node
        visited.add((current[0], current[1]))
        nxt = successor(current)
        while nxt is not None:
            current = nxt
            visited.add((current[0], current[1]))
            nxt = successor(current)
        end_side, _, end = current
        strands.append((start, renumber_d(end) if end_side == "D" else renumber_e(end)))

    loops = 0
    for node in nodes:
        if (node[0], node[1]) in visited:
            continue
        loops += 1
        current = node
        while (current[0], current[1]) not in visited:
            visited.add((current[0], current[1]))
            current = successor(current)

    inputs = D.inputs[:i - 1] + E.inputs + D.inputs[i:]
    return WiringDiagram(D.output, inputs, frozenset(strands), D.circles + E.circles + loops)


def _check_permutation(sigma: Sequence[int], r: int) -> Tuple[int, ...]:
    sigma = tuple(int(v) for v in sigma)
    if sorted(sigma) != list(range(1, r + 1)):
        raise MalformedInputError(f"{sigma} is not a permutation of 1..{r}")
    return sigma


def sym_act(sigma: Sequence[int], D: WiringDiagram) -> WiringDiagram:
    """
    Reindex inputs: old slot k becomes slot sigma[k-1].
    """
    sigma = _check_permutation(sigma, D.arity)
    inputs: List[Colour] = [None] * D.arity  # type: ignore[list-item]
    for k, c in enumerate(D.inputs, start=1):
        inputs[sigma[k - 1] - 1] = c

    def move(port: Port) -> Port:
        k, l = port
        return (sigma[k - 1], l) if k else port

    strands = frozenset((move(a), move(b)) for a, b in D.strands)
    return WiringDiagram(D.output, tuple(inputs), strands, D.circles)


def block_permutation(sigma: Sequence[int], i: int, s: int) -> Tuple[int, ...]:
    """
    The permutation tau with sym_act(tau, D o_i E) = sym_act(sigma, D) o_sigma(i) E,
    where E has s inputs.
    """
    r = len(sigma)
    sigma = _check_permutation(sigma, r)
    target = sigma[i - 1]

    def position(slot: int) -> int:
        return slot if slot < target else slot + s - 1

    tau = []
    for k in range(1, r + 1):
        if k < i:
            tau.append(position(sigma[k - 1]))
        elif k == i:
            tau.extend(target + t for t in range(s))
    for k in range(i + 1, r + 1):
        tau.append(position(sigma[k - 1]))
    return tuple(tau)


# ---------------------------------------------------------------------------
# Standard diagrams
# ---------------------------------------------------------------------------

def _labels(n: int) -> List[str]:
    return [str(a) for a in range(1, n + 1)]


def identity_wiring(minus: Iterable, plus: Iterable) -> WiringDiagram:
    """Operad unit for an input slot coloured (minus, plus)."""
    minus, plus = colour(minus, plus)
    strands = {((1, a), (0, a)) for a in minus} | {((0, b), (1, b)) for b in plus}
    return WiringDiagram((plus, minus), ((minus, plus),), frozenset(strands))


def no_input_diagram(perm: Sequence[int], circles: int = 0) -> WiringDiagram:
    """The element of WD(n) for a permutation (1-based images) and a circle count."""
    n = len(perm)
    perm = _check_permutation(perm, n)
    labels = _labels(n)
    strands = {((0, str(a)), (0, str(perm[a - 1]))) for a in range(1, n + 1)}
    return WiringDiagram((labels, labels), (), frozenset(strands), circles)


def perm_of(D: WiringDiagram, n: int) -> Tuple[Tuple[int, ...], int]:
    """
    The pair (permutation, circles) of a diagram in WD(n).

    Raises:
        MalformedInputError: D has inputs or its labels are not 1..n
    """
    labels = frozenset(_labels(n))
    if D.arity or D.output != (labels, labels):
        raise MalformedInputError(f"diagram is not in WD({n})")
    perm = [0] * n
    for (_, a), (_, b) in D.strands:
        perm[int(a) - 1] = int(b)
    return tuple(perm), D.circles


def stacking_diagram(n: int) -> WiringDiagram:
    """
    Two-slot diagram with compose_at(compose_at(S, 2, D2), 1, D1) realising
    "first D1, then D2" on WD(n).
    """
    labels = _labels(n)
    strands = set()
    for a in labels:
        strands.add(((0, a), (1, a)))
        strands.add(((1, a), (2, a)))
        strands.add(((2, a), (0, a)))
    return WiringDiagram((labels, labels), ((labels, labels), (labels, labels)), frozenset(strands))


def closure_diagram(n: int) -> WiringDiagram:
    """One-slot diagram joining each slot label back to itself; closes WD(n) into WD(0)."""
    labels = _labels(n)
    strands = {((1, a), (1, a)) for a in labels}
    return WiringDiagram(((), ()), ((labels, labels),), frozenset(strands))


def stack(D1: WiringDiagram, D2: WiringDiagram, n: int) -> WiringDiagram:
    return compose_at(compose_at(stacking_diagram(n), 2, D2), 1, D1)


def enumerate_diagrams(output: Colour, inputs: Sequence[Colour], circles: int = 0) -> Iterator[WiringDiagram]:
    """Every matching for the given colours, in a fixed order."""
    output = colour(*output)
    inputs = tuple(colour(*c) for c in inputs)
    discs = [output] + list(inputs)
    starts = sorted((k, l) for k, (minus, _) in enumerate(discs) for l in minus)
    ends = sorted((k, l) for k, (_, plus) in enumerate(discs) for l in plus)
    if len(starts) != len(ends):
        return
    for image in permutations(ends):
        yield WiringDiagram(output, inputs, frozenset(zip(starts, image)), circles)
