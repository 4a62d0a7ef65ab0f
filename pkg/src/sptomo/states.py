"""Exact small-n simulation of pure and mixed states.

Computational-basis indices are big-endian: qubit 0 is the most significant
bit, matching the bit layout of :class:`~sptomo.pauli.PauliOp`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliOp, StabilizerProductGroup, StabilizerProductState

__all__ = [
    "TABLE_QUBIT_CAP",
    "TableCapExceeded",
    "QuantumState",
    "WeylDistribution",
    "single_qubit_eigenstate",
    "basis_rotation",
    "make_sps",
    "fidelity",
    "purity",
    "char_distribution",
    "bell_diff_distribution",
    "basis_probabilities",
    "measure_sps_basis",
    "measure_sps_counts",
    "apply_depolarizing",
    "mix",
    "ghz",
    "random_pure",
    "random_mixed",
    "random_sps",
    "state_to_json",
    "state_from_json",
]

# p/q tables hold 4^n entries
TABLE_QUBIT_CAP = 8

STATE_TOL = 1e-10

_SQ2 = 1 / np.sqrt(2)
_EIGEN = {
    ("X", 0): np.array([_SQ2, _SQ2], dtype=complex),
    ("X", 1): np.array([_SQ2, -_SQ2], dtype=complex),
    ("Y", 0): np.array([_SQ2, 1j * _SQ2], dtype=complex),
    ("Y", 1): np.array([_SQ2, -1j * _SQ2], dtype=complex),
    ("Z", 0): np.array([1, 0], dtype=complex),
    ("Z", 1): np.array([0, 1], dtype=complex),
}


class TableCapExceeded(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class QuantumState:
    """A pure state (amplitude vector) or mixed state (density matrix).

    Build instances with :meth:`pure` or :meth:`mixed`; both validate the
    physical invariants to within ``1e-10``.
    """

    n: int
    data: np.ndarray = field(repr=False)

    @classmethod
    def pure(cls, amplitudes, *, check: bool = True) -> "QuantumState":
        vec = np.array(amplitudes, dtype=complex).reshape(-1)
        n = _qubits_for(vec.shape[0])
        if check:
            norm = np.vdot(vec, vec).real
            if abs(norm - 1) > STATE_TOL:
                raise ValueError(f"amplitudes are not normalized (norm^2 = {norm})")
        vec.setflags(write=False)
        return cls(n, vec)

    @classmethod
    def mixed(cls, density, *, check: bool = True) -> "QuantumState":
        mat = np.array(density, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {mat.shape}")
        n = _qubits_for(mat.shape[0])
        if check:
            if np.max(np.abs(mat - mat.conj().T)) > STATE_TOL:
                raise ValueError("density matrix is not Hermitian")
            tr = np.trace(mat).real
            if abs(tr - 1) > STATE_TOL:
                raise ValueError(f"density matrix has trace {tr}")
            lo = np.linalg.eigvalsh(mat).min()
            if lo < -STATE_TOL:
                raise ValueError(f"density matrix has negative eigenvalue {lo}")
        mat.setflags(write=False)
        return cls(n, mat)

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    @property
    def dim(self) -> int:
        return 1 << self.n

    def density(self) -> np.ndarray:
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data

    def as_mixed(self) -> "QuantumState":
        if not self.is_pure:
            return self
        return QuantumState.mixed(self.density(), check=False)


def _qubits_for(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise ValueError(f"dimension {dim} is not a power of two >= 2")
    return n


@dataclass(frozen=True, eq=False)
class WeylDistribution:
    """A table over all 4^n unsigned Paulis, indexed by ``PauliOp.index``."""

    n: int
    table: np.ndarray = field(repr=False)
    kind: str = "q"

    def __getitem__(self, op: PauliOp) -> float:
        return float(self.table[op.index])

    def total(self) -> float:
        return float(self.table.sum())

    def mass(self, ops) -> float:
        return float(sum(self.table[op.index] for op in ops))


def _check_cap(n: int, cap: int | None) -> None:
    cap = TABLE_QUBIT_CAP if cap is None else cap
    if n > cap:
        raise TableCapExceeded(f"{n} qubits exceeds the exact-table cap of {cap}")


def single_qubit_eigenstate(axis: str, sign: int) -> np.ndarray:
    """The (-1)^sign eigenvector of the Pauli ``axis``."""
    return _EIGEN[axis, sign].copy()


def basis_rotation(axis: str) -> np.ndarray:
    """Unitary taking the +1/-1 eigenstates of ``axis`` to |0>/|1>."""
    return np.array([_EIGEN[axis, 0].conj(), _EIGEN[axis, 1].conj()])


def make_sps(state: StabilizerProductState) -> QuantumState:
    vec = np.ones(1, dtype=complex)
    for i, axis in enumerate(state.axes):
        sign = (state.signs >> (state.n - 1 - i)) & 1
        vec = np.kron(vec, _EIGEN[axis, sign])
    return QuantumState.pure(vec, check=False)


def _check_match(rho: QuantumState, n: int) -> None:
    if rho.n != n:
        raise ValueError(f"dimension mismatch: state has {rho.n} qubits, expected {n}")


def fidelity(rho: QuantumState, phi: StabilizerProductState) -> float:
    """``<phi|rho|phi>``, or ``|<phi|psi>|^2`` for a pure input."""
    _check_match(rho, phi.n)
    vec = make_sps(phi).data
    if rho.is_pure:
        return float(abs(np.vdot(vec, rho.data)) ** 2)
    return float(np.vdot(vec, rho.data @ vec).real)


def purity(rho: QuantumState) -> float:
    if rho.is_pure:
        return 1.0
    return float(np.vdot(rho.data, rho.data).real)


def _fwht(arr: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis."""
    out = np.array(arr, copy=True)
    lead = out.shape[:-1]
    size = out.shape[-1]
    h = 1
    while h < size:
        view = out.reshape(*lead, size // (2 * h), 2, h)
        a = view[..., 0, :].copy()
        b = view[..., 1, :]
        view[..., 0, :] += b
        view[..., 1, :] = a - b
        h *= 2
    return out


def _pauli_expectations(rho: QuantumState) -> np.ndarray:
    """|tr(W_x rho)| for every x, as a (2^n, 2^n) array indexed [x-part, z-part].

    Row ``a`` holds ``rho[j ^ a, j]`` over ``j``; its Walsh-Hadamard transform
    gives ``tr(X^a Z^b rho)`` up to a sign for every ``b``.
    """
    dim = rho.dim
    j = np.arange(dim)
    flips = j[:, None] ^ j[None, :]  # flips[a, j] = j ^ a
    if rho.is_pure:
        psi = rho.data
        rows = psi[flips] * psi.conj()[None, :]
    else:
        rows = rho.data[flips, j[None, :]]
    return np.abs(_fwht(rows))


def char_distribution(rho: QuantumState, cap: int | None = None) -> WeylDistribution:
    """``p(x) = tr(W_x rho)^2 / 2^n`` over all unsigned Paulis.

    Sums to 1 for pure states and to the purity for mixed ones.
    """
    _check_cap(rho.n, cap)
    table = _pauli_expectations(rho) ** 2 / rho.dim
    return WeylDistribution(rho.n, table.reshape(-1), kind="p")


def bell_diff_distribution(
    rho: QuantumState, cap: int | None = None, form: str = "auto"
) -> WeylDistribution:
    """Bell difference sampling distribution q over unsigned Paulis.

    Args:
        rho: input state.
        cap: qubit cap for the 4^n table (defaults to ``TABLE_QUBIT_CAP``).
        form: ``"convolution"`` evaluates ``sum_Q p(Q) p(PQ)``, only valid
            for pure states; ``"signed"`` evaluates
            ``sum_a (-1)^[x,a] p(a)^2``, valid for any state; ``"auto"``
            picks the former for pure input and the latter otherwise.
    """
    if form == "auto":
        form = "convolution" if rho.is_pure else "signed"
    if form not in ("convolution", "signed"):
        raise ValueError(f"unknown form {form!r}")
    if form == "convolution" and not rho.is_pure:
        raise ValueError("the convolution form only holds for pure states")
    p = char_distribution(rho, cap).table
    size = p.shape[0]
    if form == "convolution":
        # XOR self-convolution over F_2^{2n}
        q = _fwht(_fwht(p) ** 2) / size
    else:
        dim = rho.dim
        # the symplectic form swaps the X and Z halves of the Walsh index
        q = _fwht(p**2).reshape(dim, dim).T.reshape(-1)
    if q.min() < -1e-9:
        raise ArithmeticError(f"q table has a negative entry {q.min()}")
    q = np.maximum(q, 0.0)
    return WeylDistribution(rho.n, q, kind="q")


def _apply_local(tensor: np.ndarray, unitaries, offset: int = 0, conj: bool = False):
    for i, u in enumerate(unitaries):
        u = u.conj() if conj else u
        tensor = np.moveaxis(np.tensordot(u, tensor, axes=([1], [offset + i])), 0, offset + i)
    return tensor


def basis_probabilities(rho: QuantumState, group: StabilizerProductGroup) -> np.ndarray:
    """Born probabilities of the 2^n S-basis labels (label = sign bits)."""
    _check_match(rho, group.n)
    n = rho.n
    rots = [basis_rotation(a) for a in group.axes]
    if rho.is_pure:
        amps = _apply_local(rho.data.reshape((2,) * n), rots)
        probs = np.abs(amps.reshape(-1)) ** 2
    else:
        mat = rho.data.reshape((2,) * (2 * n))
        mat = _apply_local(mat, rots)
        mat = _apply_local(mat, rots, offset=n, conj=True)
        probs = np.diagonal(mat.reshape(rho.dim, rho.dim)).real.copy()
    probs = np.maximum(probs, 0.0)
    return probs / probs.sum()


def measure_sps_counts(
    rho: QuantumState, group: StabilizerProductGroup, shots: int, rng: np.random.Generator
) -> np.ndarray:
    """Outcome histogram (length 2^n) of ``shots`` S-basis measurements."""
    if shots < 1:
        raise ValueError("shots must be positive")
    return rng.multinomial(shots, basis_probabilities(rho, group))


def measure_sps_basis(
    rho: QuantumState, group: StabilizerProductGroup, shots: int, rng: np.random.Generator
) -> np.ndarray:
    """Independent S-basis measurement outcomes as an array of n-bit labels."""
    if shots < 1:
        raise ValueError("shots must be positive")
    probs = basis_probabilities(rho, group)
    return rng.choice(probs.shape[0], size=shots, p=probs)


def apply_depolarizing(rho: QuantumState, lam: float) -> QuantumState:
    """Global depolarizing channel ``(1 - lam) rho + lam I / 2^n``."""
    if not 0 <= lam <= 1:
        raise ValueError(f"depolarizing strength {lam} outside [0, 1]")
    out = (1 - lam) * rho.density() + lam * np.eye(rho.dim) / rho.dim
    return QuantumState.mixed(out)


def mix(rho: QuantumState, sigma: QuantumState, weight: float) -> QuantumState:
    """Convex mixture ``(1 - weight) rho + weight sigma``."""
    if not 0 <= weight <= 1:
        raise ValueError(f"mixture weight {weight} outside [0, 1]")
    _check_match(sigma, rho.n)
    return QuantumState.mixed((1 - weight) * rho.density() + weight * sigma.density())


def ghz(n: int) -> QuantumState:
    if n < 1:
        raise ValueError("n must be positive")
    vec = np.zeros(1 << n, dtype=complex)
    vec[0] = vec[-1] = _SQ2
    return QuantumState.pure(vec)


def random_pure(n: int, rng: np.random.Generator) -> QuantumState:
    """Haar-random pure state."""
    if n < 1:
        raise ValueError("n must be positive")
    vec = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return QuantumState.pure(vec / np.linalg.norm(vec))


def random_mixed(n: int, rng: np.random.Generator, rank: int | None = None) -> QuantumState:
    """Random density matrix from a Ginibre matrix of the given rank."""
    dim = 1 << n
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return QuantumState.mixed(rho / np.trace(rho).real)


def random_sps(n: int, rng: np.random.Generator) -> StabilizerProductState:
    """Uniform draw from the 6^n stabilizer product states."""
    if n < 1:
        raise ValueError("n must be positive")
    axes = "".join(rng.choice(list("XYZ"), size=n))
    signs = int(rng.integers(0, 1 << n))
    return StabilizerProductState(StabilizerProductGroup(axes), signs)


def state_to_json(rho: QuantumState) -> str:
    """Amplitudes or density entries as nested arrays of ``[re, im]`` pairs."""
    pairs = np.stack([rho.data.real, rho.data.imag], axis=-1)
    return json.dumps(pairs.tolist())


def state_from_json(text: str) -> QuantumState:
    arr = np.asarray(json.loads(text), dtype=float)
    if arr.shape[-1] != 2:
        raise ValueError("expected [re, im] pairs")
    data = arr[..., 0] + 1j * arr[..., 1]
    if data.ndim == 1:
        return QuantumState.pure(data)
    if data.ndim == 2:
        return QuantumState.mixed(data)
    raise ValueError(f"unexpected array rank {data.ndim}")
