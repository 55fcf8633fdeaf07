"""Entangling-protocol circuits for star, chain, and alternating-chain layouts.

Sites are numbered 1..n_qubits throughout the package. A circuit is an
ordered list of gate applications; list order is application order. Three
families are provided:

* ``build_star``: outer qubits 1..n_outer each rotated and then used as the
  control of a CX onto the central qubit (site n_outer + 1).
* ``build_linear``: the four orderings of the staircase chain protocol, which
  differ in sweep direction and CX orientation.
* ``build_periodic``: the case-4 ordering with two rotation angles alternating
  along the chain, starting with theta1 on the first-acted site n - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np


@dataclass(frozen=True)
class Rotation:
    """Single-qubit gate [[a, b], [b, -a]] with a = sin(theta/2), b = cos(theta/2)."""

    site: int
    theta: float


@dataclass(frozen=True)
class ControlledNot:
    control: int
    target: int


GateOp = Union[Rotation, ControlledNot]


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    ops: tuple[GateOp, ...]

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"circuit needs at least one qubit, got {self.n_qubits}")
        for op in self.ops:
            if isinstance(op, Rotation):
                if not 1 <= op.site <= self.n_qubits:
                    raise ValueError(f"rotation site {op.site} outside 1..{self.n_qubits}")
            else:
                if not (1 <= op.control <= self.n_qubits and 1 <= op.target <= self.n_qubits):
                    raise ValueError(
                        f"CX sites ({op.control}, {op.target}) outside 1..{self.n_qubits}"
                    )
                if op.control == op.target:
                    raise ValueError("CX control and target must differ")


def rotation_matrix(theta: float) -> np.ndarray:
    """The protocol's single-qubit rotation: real, symmetric, and unitary.

    theta = 0 gives X, theta = pi gives Z, theta = pi/2 gives the Hadamard.
    """
    a = np.sin(theta / 2.0)
    b = np.cos(theta / 2.0)
    return np.array([[a, b], [b, -a]], dtype=complex)


def cx_matrix(control_first: bool = True) -> np.ndarray:
    """4x4 controlled-NOT in the ordered two-site basis |q_left q_right>.

    ``control_first`` selects whether the left or the right site controls.
    """
    m = np.zeros((4, 4), dtype=complex)
    # column -> row permutation of basis states 00, 01, 10, 11
    order = (0, 1, 3, 2) if control_first else (0, 3, 2, 1)
    for col, row in enumerate(order):
        m[row, col] = 1.0
    return m


def build_star(n_outer: int, theta: float) -> Circuit:
    """Star protocol: rotate each outer qubit, then CX it onto the central one.

    Qubits 1..n_outer are the outer ring, qubit n_outer + 1 is central. Gates
    are applied outer qubit n_outer first, qubit 1 last, 2 * n_outer ops total.
    """
    if n_outer < 1:
        raise ValueError(f"star protocol needs n_outer >= 1, got {n_outer}")
    central = n_outer + 1
    ops: list[GateOp] = []
    for k in range(n_outer, 0, -1):
        ops.append(Rotation(k, theta))
        ops.append(ControlledNot(k, central))
    return Circuit(central, tuple(ops))


def build_linear(n: int, case: int, theta: float) -> Circuit:
    """Chain protocol, one of the four staircase orderings.

    case 1: i = n..2,   rotate i, CX(i -> i-1)
    case 2: i = 2..n,   rotate i, CX(i -> i-1)
    case 3: i = 1..n-1, rotate i, CX(i -> i+1)
    case 4: i = n-1..1, rotate i, CX(i -> i+1)

    Cases 2 and 4 entangle every nearest-neighbor pair; cases 1 and 3 leave
    only their final-acted end pair entangled.
    """
    if n < 3:
        raise ValueError(f"chain protocol needs n >= 3, got {n}")
    if case == 1:
        sequence = [(i, i - 1) for i in range(n, 1, -1)]
    elif case == 2:
        sequence = [(i, i - 1) for i in range(2, n + 1)]
    elif case == 3:
        sequence = [(i, i + 1) for i in range(1, n)]
    elif case == 4:
        sequence = [(i, i + 1) for i in range(n - 1, 0, -1)]
    else:
        raise ValueError(f"case must be 1, 2, 3, or 4, got {case}")
    ops: list[GateOp] = []
    for control, target in sequence:
        ops.append(Rotation(control, theta))
        ops.append(ControlledNot(control, target))
    return Circuit(n, tuple(ops))


def build_periodic(n: int, theta1: float, theta2: float) -> Circuit:
    """Case-4 chain ordering with two alternating rotation angles.

    Site i is rotated by theta1 when n - 1 - i is even and by theta2 when it
    is odd, so the first-acted site n - 1 always carries theta1. With
    theta1 == theta2 the op list is identical to ``build_linear(n, 4, theta1)``.
    """
    if n < 4:
        raise ValueError(f"alternating chain protocol needs n >= 4, got {n}")
    ops: list[GateOp] = []
    for i in range(n - 1, 0, -1):
        angle = theta1 if (n - 1 - i) % 2 == 0 else theta2
        ops.append(Rotation(i, angle))
        ops.append(ControlledNot(i, i + 1))
    return Circuit(n, tuple(ops))


def periodic_site_angle(n: int, site: int, theta1: float, theta2: float) -> float:
    """Angle that ``build_periodic`` assigns to ``site`` (sites 1..n-1 are rotated)."""
    if not 1 <= site <= n - 1:
        raise ValueError(f"site {site} is not rotated by the alternating protocol on {n} qubits")
    return theta1 if (n - 1 - site) % 2 == 0 else theta2


def circuit_to_text(circuit: Circuit) -> str:
    """Line-based debug dump: deterministic, one op per line."""
    lines = [f"QUBITS {circuit.n_qubits}"]
    for op in circuit.ops:
        if isinstance(op, Rotation):
            lines.append(f"U {op.site} {op.theta:.17g}")
        else:
            lines.append(f"CX {op.control} {op.target}")
    return "\n".join(lines) + "\n"
