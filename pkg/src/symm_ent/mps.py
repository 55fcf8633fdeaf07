"""Matrix-product-state engine for the entangling protocols.

The state is kept in mixed-canonical form around an orthogonality center:
site tensors have index order (left bond, physical, right bond), tensors
strictly left of the center are left-isometric, tensors strictly right of it
are right-isometric, and the center tensor carries the full norm. Moving the
center one site is a pure QR basis change that leaves the represented state
untouched.

Nearest-neighbor two-site gates follow the standard update: contract the
two-site block at the center, apply the gate, split back with a truncated
SVD. Gates between distant sites (the star layout's controlled-NOTs) are
applied exactly as a product-operator chain threaded through the intervening
sites, followed by a recanonicalization pass over the touched window, so no
swap network is needed.

Every protocol circuit in this package is a single staircase sweep whose
exact state never needs bond dimension above 2, so with the default settings
``discarded_weight_total`` stays at roundoff level; callers treat anything
above 1e-14 as a hard failure.

Instances are mutated in place by gates and sweeps; distinct sweeps must own
distinct instances.
"""

from __future__ import annotations

import numpy as np

from .linalg import require_unitary, svd_truncate
from .protocols import Circuit, ControlledNot, Rotation, cx_matrix, rotation_matrix
from .statevector import MAX_QUBITS, ZERO_PROBABILITY, StateVector

DEFAULT_CHI_MAX = 16
DEFAULT_TRUNC_TOL = 1e-12


def _operator_schmidt(gate: np.ndarray) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Split a two-site gate into sum_k A_k (x) B_k with at most four terms."""
    t = gate.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vdag = np.linalg.svd(t)
    left_ops, right_ops = [], []
    for k, value in enumerate(s):
        if value < 1e-14:
            break
        root = np.sqrt(value)
        left_ops.append((u[:, k] * root).reshape(2, 2))
        right_ops.append((vdag[k, :] * root).reshape(2, 2))
    return left_ops, right_ops


class MatrixProductState:
    def __init__(
        self,
        n_qubits: int,
        chi_max: int = DEFAULT_CHI_MAX,
        trunc_tol: float = DEFAULT_TRUNC_TOL,
    ):
        """Product state |0...0> with all bonds of dimension 1, center at site 1."""
        if n_qubits < 2:
            raise ValueError(f"MPS backend needs at least 2 qubits, got {n_qubits}")
        if chi_max < 2:
            raise ValueError(f"chi_max must be >= 2 (two-site gates need bond 2), got {chi_max}")
        if trunc_tol < 0:
            raise ValueError(f"trunc_tol must be >= 0, got {trunc_tol}")
        zero = np.zeros((1, 2, 1), dtype=complex)
        zero[0, 0, 0] = 1.0
        self.n_qubits = n_qubits
        self.chi_max = int(chi_max)
        self.trunc_tol = float(trunc_tol)
        self.tensors = [zero.copy() for _ in range(n_qubits)]
        self.center = 1
        self.discarded_weight_total = 0.0

    # ---------------------------------------------------------------- basics

    def _check_site(self, site: int, label: str = "site") -> None:
        if not 1 <= site <= self.n_qubits:
            raise ValueError(f"{label} {site} outside 1..{self.n_qubits}")

    @property
    def bond_dimensions(self) -> list[int]:
        """Dimensions of the n - 1 internal bonds."""
        return [t.shape[2] for t in self.tensors[:-1]]

    @property
    def max_bond_dimension(self) -> int:
        return max(self.bond_dimensions)

    def copy(self) -> "MatrixProductState":
        dup = MatrixProductState(self.n_qubits, self.chi_max, self.trunc_tol)
        dup.tensors = [t.copy() for t in self.tensors]
        dup.center = self.center
        dup.discarded_weight_total = self.discarded_weight_total
        return dup

    def norm(self) -> float:
        return float(np.linalg.norm(self.tensors[self.center - 1]))

    def overlap(self, other: "MatrixProductState") -> complex:
        """Inner product <self|other>."""
        if other.n_qubits != self.n_qubits:
            raise ValueError("overlap needs equal qubit counts")
        env = np.ones((1, 1), dtype=complex)
        for mine, theirs in zip(self.tensors, other.tensors):
            env = np.einsum("ab,apr,bps->rs", env, mine.conj(), theirs)
        return complex(env[0, 0])

    def canonical_deviation(self) -> float:
        """Max deviation from the expected isometry conditions and unit norm."""
        worst = abs(self.norm() - 1.0)
        for idx, t in enumerate(self.tensors, start=1):
            l, _, r = t.shape
            if idx < self.center:
                m = t.reshape(l * 2, r)
                worst = max(worst, float(np.max(np.abs(m.conj().T @ m - np.eye(r)))))
            elif idx > self.center:
                m = t.reshape(l, 2 * r)
                worst = max(worst, float(np.max(np.abs(m @ m.conj().T - np.eye(l)))))
        return worst

    # ------------------------------------------------------- center movement

    def _shift_right(self) -> None:
        c = self.center
        t = self.tensors[c - 1]
        l, _, r = t.shape
        q, carry = np.linalg.qr(t.reshape(l * 2, r))
        self.tensors[c - 1] = q.reshape(l, 2, -1)
        self.tensors[c] = np.tensordot(carry, self.tensors[c], axes=(1, 0))
        self.center = c + 1

    def _shift_left(self) -> None:
        c = self.center
        t = self.tensors[c - 1]
        l, _, r = t.shape
        # factor t = carry @ Q with Q row-orthonormal, via QR of the adjoint
        q, rmat = np.linalg.qr(t.reshape(l, 2 * r).conj().T)
        self.tensors[c - 1] = q.conj().T.reshape(-1, 2, r)
        self.tensors[c - 2] = np.tensordot(self.tensors[c - 2], rmat.conj().T, axes=(2, 0))
        self.center = c - 1

    def _shift_left_truncated(self) -> None:
        """Move the center left through a truncated SVD, compressing the bond."""
        c = self.center
        t = self.tensors[c - 1]
        l, _, r = t.shape
        res = svd_truncate(t.reshape(l, 2 * r), self.chi_max, self.trunc_tol)
        self.discarded_weight_total += res.discarded_weight
        s = res.singular_values
        norm_t = float(np.linalg.norm(t))
        norm_s = float(np.linalg.norm(s))
        if norm_s > 0.0:
            s = s * (norm_t / norm_s)
        self.tensors[c - 1] = res.right_isometry_dag.reshape(-1, 2, r)
        carry = res.left_isometry * s
        self.tensors[c - 2] = np.tensordot(self.tensors[c - 2], carry, axes=(2, 0))
        self.center = c - 1

    def shift_center(self, direction: str) -> None:
        """Move the orthogonality center one site left or right.

        The represented state is unchanged; the vacated tensor becomes an
        isometry in the direction it was left behind.
        """
        if direction == "right":
            if self.center >= self.n_qubits:
                raise ValueError("center is already at the right boundary")
            self._shift_right()
        elif direction == "left":
            if self.center <= 1:
                raise ValueError("center is already at the left boundary")
            self._shift_left()
        else:
            raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")

    def _move_center_to(self, site: int) -> None:
        while self.center < site:
            self._shift_right()
        while self.center > site:
            self._shift_left()

    # ------------------------------------------------------------ gate layer

    def apply_1q(self, gate, site: int) -> None:
        """Contract a 2x2 unitary into the physical leg of one site tensor.

        Preserves canonical structure wherever the center is, so no shift is
        required first.
        """
        g = require_unitary(gate, 2)
        self._check_site(site)
        self.tensors[site - 1] = np.einsum("qp,lpr->lqr", g, self.tensors[site - 1])

    def apply_2q(self, gate, site: int) -> None:
        """Apply a 4x4 unitary to sites (site, site + 1) at the center.

        The two-site block is contracted, the gate applied, and the block
        split by a truncated SVD; the center stays on the side it occupied
        before the gate. The caller must have shifted the center to ``site``
        or ``site + 1`` first.
        """
        g = require_unitary(gate, 4)
        self._check_site(site)
        if site + 1 > self.n_qubits:
            raise ValueError(f"two-site gate at {site} exceeds the chain")
        if self.center not in (site, site + 1):
            raise ValueError(
                f"center is at {self.center}, must be at {site} or {site + 1}; shift first"
            )
        left, right = self.tensors[site - 1], self.tensors[site]
        l = left.shape[0]
        r = right.shape[2]
        block = np.tensordot(left, right, axes=(2, 0))  # (l, p1, p2, r)
        block = np.tensordot(g.reshape(2, 2, 2, 2), block, axes=([2, 3], [1, 2]))
        block = block.transpose(2, 0, 1, 3)  # back to (l, p1', p2', r)
        norm_block = float(np.linalg.norm(block))
        res = svd_truncate(block.reshape(l * 2, 2 * r), self.chi_max, self.trunc_tol)
        self.discarded_weight_total += res.discarded_weight
        s = res.singular_values
        norm_s = float(np.linalg.norm(s))
        if norm_s > 0.0:
            s = s * (norm_block / norm_s)
        if self.center == site:
            self.tensors[site - 1] = (res.left_isometry * s).reshape(l, 2, -1)
            self.tensors[site] = res.right_isometry_dag.reshape(-1, 2, r)
        else:
            self.tensors[site - 1] = res.left_isometry.reshape(l, 2, -1)
            self.tensors[site] = (s[:, None] * res.right_isometry_dag).reshape(-1, 2, r)

    def apply_2q_long_range(self, gate, i: int, j: int) -> None:
        """Apply a 4x4 unitary to the distant pair (i, j), i < j, exactly.

        The gate is split into a sum of product operators, threaded through
        the window [i, j] as a block-diagonal bond enlargement, and the window
        is recanonicalized with truncating SVDs. The center ends at ``i``.
        """
        g = require_unitary(gate, 4)
        self._check_site(i)
        self._check_site(j)
        if not i < j:
            raise ValueError(f"need i < j, got ({i}, {j})")
        if j == i + 1:
            if self.center < i:
                self._move_center_to(i)
            elif self.center > j:
                self._move_center_to(j)
            self.apply_2q(g, i)
            return
        self._move_center_to(i)
        left_ops, right_ops = _operator_schmidt(g)
        k = len(left_ops)
        a_stack = np.stack(left_ops)
        b_stack = np.stack(right_ops)
        t = self.tensors[i - 1]
        l, _, r = t.shape
        self.tensors[i - 1] = np.einsum("kqp,lpr->lqrk", a_stack, t).reshape(l, 2, r * k)
        eye = np.eye(k)
        for m in range(i + 1, j):
            t = self.tensors[m - 1]
            lm, _, rm = t.shape
            self.tensors[m - 1] = np.einsum("lpr,kc->lkprc", t, eye).reshape(lm * k, 2, rm * k)
        t = self.tensors[j - 1]
        lj, _, rj = t.shape
        self.tensors[j - 1] = np.einsum("kqp,lpr->lkqr", b_stack, t).reshape(lj * k, 2, rj)
        # window is no longer canonical: rebuild left-to-right, compress back
        while self.center < j:
            self._shift_right()
        while self.center > i:
            self._shift_left_truncated()

    def run_circuit(self, circuit: Circuit) -> "MatrixProductState":
        """Apply all gates in listed order, shifting the center as needed."""
        if circuit.n_qubits != self.n_qubits:
            raise ValueError(
                f"circuit is for {circuit.n_qubits} qubits, state has {self.n_qubits}"
            )
        for op in circuit.ops:
            if isinstance(op, Rotation):
                self.apply_1q(rotation_matrix(op.theta), op.site)
            elif isinstance(op, ControlledNot):
                lo, hi = sorted((op.control, op.target))
                gate = cx_matrix(control_first=op.control < op.target)
                if hi == lo + 1:
                    if self.center < lo:
                        self._move_center_to(lo)
                    elif self.center > hi:
                        self._move_center_to(hi)
                    self.apply_2q(gate, lo)
                else:
                    self.apply_2q_long_range(gate, lo, hi)
            else:
                raise TypeError(f"unknown gate op {op!r}")
        return self

    # ------------------------------------------------------------ read layer

    def schmidt_values(self, bond: int) -> np.ndarray:
        """Schmidt coefficients across the bond between sites ``bond`` and ``bond + 1``."""
        if not 1 <= bond <= self.n_qubits - 1:
            raise ValueError(f"bond {bond} outside 1..{self.n_qubits - 1}")
        self._move_center_to(bond)
        t = self.tensors[bond - 1]
        l, _, r = t.shape
        return np.linalg.svd(t.reshape(l * 2, r), compute_uv=False)

    def pair_rdm(self, i: int, j: int) -> np.ndarray:
        """4x4 reduced density matrix of (i, j), i < j, in basis |q_i q_j>.

        Adjacent pairs reduce to the two-site block at the center; distant
        pairs contract the transfer network between them (cost O(distance)).
        """
        self._check_site(i)
        self._check_site(j)
        if not i < j:
            raise ValueError(f"pair must be ordered i < j, got ({i}, {j})")
        self._move_center_to(i)
        t = self.tensors[i - 1]
        env = np.einsum("lpr,lqs->pqrs", t, t.conj())
        for m in range(i + 1, j):
            tm = self.tensors[m - 1]
            env = np.einsum("pqrs,rxt,sxu->pqtu", env, tm, tm.conj())
        tj = self.tensors[j - 1]
        rho = np.einsum("pqrs,rxt,syt->pxqy", env, tj, tj.conj())
        return rho.reshape(4, 4)

    def to_statevector(self) -> StateVector:
        """Contract the full chain into an exact statevector (oracle bridge)."""
        if self.n_qubits > MAX_QUBITS:
            raise ValueError(
                f"full contraction is capped at {MAX_QUBITS} qubits, state has {self.n_qubits}"
            )
        vec = self.tensors[0][0]  # (2, r)
        for t in self.tensors[1:]:
            vec = np.tensordot(vec, t, axes=(vec.ndim - 1, 0))
        return StateVector(self.n_qubits, vec[..., 0].ravel())

    def postselect(self, site: int, outcome: int) -> float:
        """Project ``site`` onto ``outcome``, renormalize, return the probability.

        The measured qubit is kept (collapsed); canonical structure survives
        because the projection happens at the center.
        """
        self._check_site(site)
        if outcome not in (0, 1):
            raise ValueError(f"outcome must be 0 or 1, got {outcome}")
        self._move_center_to(site)
        t = self.tensors[site - 1].copy()
        t[:, 1 - outcome, :] = 0.0
        probability = float(np.linalg.norm(t) ** 2)
        if probability < ZERO_PROBABILITY:
            raise ValueError(f"outcome {outcome} at site {site} has zero probability")
        self.tensors[site - 1] = t / np.sqrt(probability)
        return probability
