"""Brute-force references for certifying the fast paths and the learner.

Everything here is written with explicit matrices and plain loops and shares
no numerical code with :mod:`sptomo.states`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .pauli import StabilizerProductGroup, StabilizerProductState
from .states import QuantumState, WeylDistribution

__all__ = [
    "FSP_QUBIT_LIMIT",
    "Q_QUBIT_LIMIT",
    "OracleResult",
    "Certification",
    "brute_force_fsp",
    "brute_force_q",
    "certify_run",
]

FSP_QUBIT_LIMIT = 10
Q_QUBIT_LIMIT = 4

# ties closer than this count as equal and resolve to the earliest state
TIE_TOL = 1e-12

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_H = 1 / np.sqrt(2)
# rows ordered (X,+) (X,-) (Y,+) (Y,-) (Z,+) (Z,-)
_BRAS = np.array(
    [
        [_H, _H],
        [_H, -_H],
        [_H, -1j * _H],
        [_H, 1j * _H],
        [1, 0],
        [0, 1],
    ],
    dtype=complex,
)


@dataclass(frozen=True)
class OracleResult:
    best_state: StabilizerProductState
    best_fidelity: float
    evaluations: int

    def to_dict(self) -> dict:
        return {
            "output": {"axes": self.best_state.axes, "signs": self.best_state.sign_bits},
            "best_fidelity": self.best_fidelity,
            "evaluations": self.evaluations,
        }


@dataclass(frozen=True)
class Certification:
    passed: bool
    margin: float
    achieved_fidelity: float
    optimal_fidelity: float


def _all_fidelities(rho: QuantumState) -> np.ndarray:
    """<phi|rho|phi> for all 6^n product states, shape (6,) * n.

    Contracts one qubit at a time with each of the six bras.
    """
    n = rho.n
    if rho.is_pure:
        # amplitudes: (choices..., remaining qubits...)
        work = np.asarray(rho.data).reshape((2,) * n)
        for _ in range(n):
            work = np.tensordot(work, _BRAS, axes=([0], [1]))
            # the new choice axis is last; the next qubit is now axis 0
        return np.abs(work) ** 2
    work = np.asarray(rho.data).reshape((2,) * (2 * n))
    for q in range(n):
        # row index of qubit q is axis 0, its column index axis n - q
        work = np.tensordot(_BRAS, work, axes=([1], [0]))
        work = np.moveaxis(work, 0, -1)
        col = n - q - 1
        work = np.tensordot(work, _BRAS.conj(), axes=([col], [1]))
        # two choice axes appended; keep the diagonal pair
        work = np.diagonal(work, axis1=-2, axis2=-1)
    return work.real


def brute_force_fsp(rho: QuantumState) -> OracleResult:
    """Exhaustive maximum fidelity over all 6^n stabilizer product states.

    Ties resolve to the first state in the order: axes X < Y < Z with qubit
    0 most significant, then sign bits numerically.
    """
    n = rho.n
    if n > FSP_QUBIT_LIMIT:
        raise ValueError(f"{n} qubits exceeds the oracle limit of {FSP_QUBIT_LIMIT}")
    fid = _all_fidelities(rho)
    # (axis_0, sign_0, axis_1, sign_1, ...) -> (axes..., signs...)
    fid = fid.reshape((3, 2) * n)
    fid = fid.transpose([2 * i for i in range(n)] + [2 * i + 1 for i in range(n)])
    flat = fid.reshape(-1)
    top = flat.max()
    index = int(np.flatnonzero(flat >= top - TIE_TOL)[0])
    group_index, signs = divmod(index, 1 << n)
    axes = "".join("XYZ"[int(d)] for d in np.unravel_index(group_index, (3,) * n))
    state = StabilizerProductState(StabilizerProductGroup(axes), signs)
    return OracleResult(state, float(flat[index]), 6**n)


def _pauli_matrix(label: str) -> np.ndarray:
    return reduce(np.kron, (_PAULI[c] for c in label))


def _label_index(label: str) -> int:
    """Table index of a Pauli string, computed directly from its characters."""
    n = len(label)
    x = int("".join("1" if c in "XY" else "0" for c in label), 2)
    z = int("".join("1" if c in "YZ" else "0" for c in label), 2)
    return (x << n) | z


def brute_force_q(rho: QuantumState) -> WeylDistribution:
    """q by literal sums over explicit Pauli matrices.

    Pure input: ``q(P) = sum_Q p(Q) p(PQ)`` with PQ identified by matrix
    product. Mixed input: ``q(x) = sum_a (-1)^[x,a] p(a)^2`` with the sign
    read off an explicit commutator.
    """
    n = rho.n
    if n > Q_QUBIT_LIMIT:
        raise ValueError(f"{n} qubits exceeds the oracle limit of {Q_QUBIT_LIMIT}")
    dim = 2**n
    labels = ["".join(c) for c in itertools.product("IXYZ", repeat=n)]
    mats = [_pauli_matrix(lab) for lab in labels]
    rho_mat = np.asarray(rho.density())
    p = np.array([np.trace(m @ rho_mat).real ** 2 / dim for m in mats])

    q = np.zeros(len(labels))
    if rho.is_pure:
        # single-qubit products up to phase, read off the 2x2 matrices
        times = {
            (a, b): next(
                c for c in "IXYZ" if abs(np.trace(_PAULI[c].conj().T @ _PAULI[a] @ _PAULI[b])) > 1
            )
            for a in "IXYZ"
            for b in "IXYZ"
        }
        position = {lab: i for i, lab in enumerate(labels)}
        for i, lp in enumerate(labels):
            for j, lq in enumerate(labels):
                r = position["".join(times[a, b] for a, b in zip(lp, lq))]
                q[i] += p[j] * p[r]
    else:
        for i, mx in enumerate(mats):
            for j, ma in enumerate(mats):
                sign = 1 if np.allclose(mx @ ma, ma @ mx) else -1
                q[i] += sign * p[j] ** 2

    table = np.zeros(4**n)
    for lab, value in zip(labels, q):
        table[_label_index(lab)] = value
    return WeylDistribution(n, table, kind="q")


def certify_run(
    rho: QuantumState, output_state: StabilizerProductState, epsilon: float
) -> Certification:
    """Check ``<phi|rho|phi> >= F_SP(rho) - epsilon`` for a learner output.

    ``output_state`` may also be a run report carrying one.
    """
    output_state = getattr(output_state, "output_state", output_state)
    best = brute_force_fsp(rho).best_fidelity
    vec = reduce(
        np.kron,
        (
            _BRAS[2 * "XYZ".index(axis) + int(bit)].conj()
            for axis, bit in zip(output_state.axes, output_state.sign_bits)
        ),
    )
    rho_mat = np.asarray(rho.density())
    achieved = float(np.vdot(vec, rho_mat @ vec).real)
    margin = achieved - (best - epsilon)
    return Certification(margin >= 0, margin, achieved, best)
