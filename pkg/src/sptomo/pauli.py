"""Unsigned Pauli operators over F_2^{2n} and stabilizer product groups.

Operators are stored as two packed integers ``x`` and ``z``. Qubit ``i`` (the
``i``-th character of the text form, counting from the left) lives at bit
``n - 1 - i``, so the X-part doubles as the bit-flip mask on a big-endian
computational-basis index.  Global phases are never tracked.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Axis",
    "PauliOp",
    "LocalSpan",
    "StabilizerProductGroup",
    "StabilizerProductState",
    "PairwiseLocalAnticommute",
    "symplectic_product",
    "local_anticommute_count",
    "local_span",
    "extensions",
    "parse_pauli",
    "format_pauli",
    "all_paulis",
]


class Axis(enum.Enum):
    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"

    @property
    def bits(self) -> tuple[int, int]:
        """The (x, z) bit pair of this single-qubit Pauli."""
        return _AXIS_BITS[self.value]


_AXIS_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_AXIS = {v: k for k, v in _AXIS_BITS.items()}
UNASSIGNED = "-"


class PairwiseLocalAnticommute(ValueError):
    """Raised when a set of operators does not pairwise commute locally."""

    def __init__(self, first: "PauliOp", second: "PauliOp"):
        self.pair = (first, second)
        super().__init__(
            f"operators {format_pauli(first)} and {format_pauli(second)} "
            "do not commute locally"
        )


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError(f"qubit count must be positive, got {n}")


@dataclass(frozen=True, order=True)
class PauliOp:
    """An unsigned n-qubit Pauli operator ``X^x Z^z`` (phase dropped)."""

    n: int
    x: int
    z: int

    def __post_init__(self):
        _check_n(self.n)
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError(f"bit vectors do not fit in {self.n} qubits")

    @classmethod
    def identity(cls, n: int) -> "PauliOp":
        return cls(n, 0, 0)

    @classmethod
    def from_index(cls, n: int, index: int) -> "PauliOp":
        """Inverse of :attr:`index`."""
        return cls(n, index >> n, index & ((1 << n) - 1))

    @property
    def index(self) -> int:
        """Position of this operator in a length-4^n distribution table."""
        return (self.x << self.n) | self.z

    @property
    def support(self) -> int:
        """Bit mask of the qubits where the operator is not the identity."""
        return self.x | self.z

    @property
    def weight(self) -> int:
        return self.support.bit_count()

    def axis(self, qubit: int) -> Axis:
        shift = self.n - 1 - qubit
        return Axis(_BITS_AXIS[((self.x >> shift) & 1, (self.z >> shift) & 1)])

    def axes(self) -> tuple[Axis, ...]:
        return tuple(self.axis(i) for i in range(self.n))

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        # product modulo global phase
        _same_n(self, other)
        return PauliOp(self.n, self.x ^ other.x, self.z ^ other.z)

    def __str__(self) -> str:
        return format_pauli(self)


def _same_n(p: PauliOp, q: PauliOp) -> None:
    if p.n != q.n:
        raise ValueError(f"qubit count mismatch: {p.n} != {q.n}")


def _anticommute_mask(p: PauliOp, q: PauliOp) -> int:
    return (p.x & q.z) ^ (p.z & q.x)


def symplectic_product(x: PauliOp, y: PauliOp) -> int:
    """Symplectic form ``[x, y]``; 0 iff the two operators commute."""
    _same_n(x, y)
    return _anticommute_mask(x, y).bit_count() & 1


def local_anticommute_count(p: PauliOp, q: PauliOp) -> int:
    """Number of qubits whose single-qubit factors anticommute."""
    _same_n(p, q)
    return _anticommute_mask(p, q).bit_count()


def parse_pauli(text: str) -> PauliOp:
    """Parse a string such as ``"XIZII"`` (one character per qubit)."""
    if not text:
        raise ValueError("empty Pauli string")
    x = z = 0
    for ch in text:
        try:
            bx, bz = _AXIS_BITS[ch]
        except KeyError:
            raise ValueError(f"invalid Pauli character {ch!r} in {text!r}") from None
        x = (x << 1) | bx
        z = (z << 1) | bz
    return PauliOp(len(text), x, z)


def format_pauli(op: PauliOp) -> str:
    return "".join(a.value for a in op.axes())


def all_paulis(n: int) -> Iterator[PauliOp]:
    """All 4^n operators in table-index order."""
    for index in range(4**n):
        yield PauliOp.from_index(n, index)


def _axes_to_bits(axes: str) -> tuple[int, int]:
    x = z = 0
    for ch in axes:
        bx, bz = _AXIS_BITS.get(ch, (0, 0))
        x = (x << 1) | bx
        z = (z << 1) | bz
    return x, z


@dataclass(frozen=True)
class LocalSpan:
    """The tensor product group ``{I, W_1} x ... x {I, W_n}``.

    ``assignment`` is a string over ``-XYZ``; ``-`` marks an unassigned qubit
    (``W_i = I``). The same string is the JSON encoding.
    """

    n: int
    assignment: str

    def __post_init__(self):
        _check_n(self.n)
        if len(self.assignment) != self.n or set(self.assignment) - set("-XYZ"):
            raise ValueError(f"invalid span assignment {self.assignment!r}")

    @classmethod
    def from_json(cls, text: str) -> "LocalSpan":
        return cls(len(text), text)

    def to_json(self) -> str:
        return self.assignment

    @property
    def assigned_count(self) -> int:
        return self.n - self.assignment.count(UNASSIGNED)

    @property
    def log2_size(self) -> int:
        return self.assigned_count

    def __contains__(self, op: PauliOp) -> bool:
        if op.n != self.n:
            return False
        x, z = _axes_to_bits(self.assignment)
        assigned = x | z
        if op.support & ~assigned:
            return False
        return not (((op.x ^ x) | (op.z ^ z)) & op.support)

    def is_complete(self) -> bool:
        return UNASSIGNED not in self.assignment


def local_span(ops: Iterable[PauliOp], n: int | None = None) -> LocalSpan:
    """Local span of a set of pairwise locally commuting operators.

    Args:
        ops: the operators; duplicates are fine.
        n: qubit count, required only when ``ops`` is empty.

    Raises:
        PairwiseLocalAnticommute: naming the first offending pair found.
    """
    ops = list(ops)
    if not ops:
        if n is None:
            raise ValueError("qubit count is required for an empty set")
        return LocalSpan(n, UNASSIGNED * n)
    if n is None:
        n = ops[0].n
    sx = sz = 0
    for j, op in enumerate(ops):
        if op.n != n:
            raise ValueError(f"qubit count mismatch: {op.n} != {n}")
        clash = op.support & (sx | sz) & ((op.x ^ sx) | (op.z ^ sz))
        if clash:
            other = next(o for o in ops[:j] if _anticommute_mask(o, op))
            raise PairwiseLocalAnticommute(other, op)
        free = op.support & ~(sx | sz)
        sx |= op.x & free
        sz |= op.z & free
    chars = []
    for i in range(n):
        shift = n - 1 - i
        bits = ((sx >> shift) & 1, (sz >> shift) & 1)
        chars.append(UNASSIGNED if bits == (0, 0) else _BITS_AXIS[bits])
    return LocalSpan(n, "".join(chars))


@dataclass(frozen=True, order=True)
class StabilizerProductGroup:
    """A stabilizer product group, i.e. one of X, Y, Z fixed on every qubit."""

    axes: str

    def __post_init__(self):
        if not self.axes or set(self.axes) - set("XYZ"):
            raise ValueError(f"invalid stabilizer product group axes {self.axes!r}")

    @property
    def n(self) -> int:
        return len(self.axes)

    def generator(self) -> PauliOp:
        """The unique full-weight element of the group."""
        return parse_pauli(self.axes)

    def span(self) -> LocalSpan:
        return LocalSpan(self.n, self.axes)

    def __contains__(self, op: PauliOp) -> bool:
        return op in self.span()

    def elements(self) -> list[PauliOp]:
        gen = self.generator()
        masks = range(1 << self.n)
        return [PauliOp(self.n, gen.x & m, gen.z & m) for m in masks]


@dataclass(frozen=True, order=True)
class StabilizerProductState:
    """One element of the S-basis of ``group``.

    ``signs`` packs the eigenvalue bits, qubit 0 in the most significant
    position; bit 1 means the (-1)-eigenstate of that qubit's axis.
    """

    group: StabilizerProductGroup
    signs: int = 0

    def __post_init__(self):
        if not 0 <= self.signs < (1 << self.group.n):
            raise ValueError("sign bits do not fit the group")

    @classmethod
    def from_strings(cls, axes: str, signs: str) -> "StabilizerProductState":
        if len(signs) != len(axes) or set(signs) - set("01"):
            raise ValueError(f"invalid sign bits {signs!r} for axes {axes!r}")
        return cls(StabilizerProductGroup(axes), int(signs, 2))

    @property
    def n(self) -> int:
        return self.group.n

    @property
    def axes(self) -> str:
        return self.group.axes

    @property
    def sign_bits(self) -> str:
        return format(self.signs, f"0{self.n}b")

    def __str__(self) -> str:
        return f"sps:{self.axes}:{self.sign_bits}"


def extensions(span: LocalSpan) -> list[StabilizerProductGroup]:
    """All 3^(n - assigned) stabilizer product groups containing ``span``.

    Order: free qubits take X < Y < Z, lexicographic with the lowest qubit
    index most significant.
    """
    free = [i for i, ch in enumerate(span.assignment) if ch == UNASSIGNED]
    base = list(span.assignment)
    out = []
    for choice in itertools.product("XYZ", repeat=len(free)):
        for i, ch in zip(free, choice):
            base[i] = ch
        out.append(StabilizerProductGroup("".join(base)))
    return out


def paulis_from_strings(texts: Sequence[str]) -> list[PauliOp]:
    return [parse_pauli(t) for t in texts]
