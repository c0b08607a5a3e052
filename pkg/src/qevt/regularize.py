"""Power-regularization of block-encodings with a counter register.

Any block-encoding can be made n-regular (its k-th power encodes A^k for
all 0 <= k <= n, n a power of two) by prepending a b = log2(n) qubit
counter that is incremented whenever the original ancillas leave their
all-zero state. Failed branches are thereby tagged and can no longer
re-enter the success branch until the counter wraps around after n calls.

Register order, most significant first: counter (C), original ancillas
(O), system (S). The success index stays at row/column 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoding import BlockEncoding
from .errors import ValidationError
from .linalg import kron

_MOD = "regularize"


@dataclass(frozen=True, eq=False)
class RegularizedEncoding:
    """A block-encoding wrapped with a counter register of width b, order n = 2^b."""

    base: BlockEncoding
    counter_qubits: int
    order: int
    source_ancillas: int

    def __post_init__(self):
        if self.base.ancilla_qubits != self.counter_qubits + self.source_ancillas:
            raise ValidationError(
                "ancilla accounting broken: "
                f"{self.base.ancilla_qubits} != {self.counter_qubits} + {self.source_ancillas}",
                module=_MOD,
            )
        if self.order != 2**self.counter_qubits:
            raise ValidationError(
                f"order {self.order} != 2^{self.counter_qubits}", module=_MOD
            )


def _power_of_two_exponent(n: int) -> int:
    if n < 1 or (n & (n - 1)) != 0:
        raise ValidationError(f"order must be a power of two, got {n}", module=_MOD)
    return n.bit_length() - 1


def incrementer(n: int) -> np.ndarray:
    """The n x n cyclic-shift permutation taking basis index x to (x + 1) mod n."""
    _power_of_two_exponent(n)
    q = np.zeros((n, n), dtype=np.complex128)
    q[(np.arange(n) + 1) % n, np.arange(n)] = 1.0
    return q


def branch_shift(n: int, a: int, d: int) -> np.ndarray:
    """Conditional increment on the counter: identity when the original
    ancillas read zero, the cyclic shift otherwise.

    Acts on C (dimension n) x O (dimension 2^a) x S (dimension d). Equals the
    two-gate form: increment the counter, then undo it when O is all-zero.
    """
    _power_of_two_exponent(n)
    if a < 0 or d < 1:
        raise ValidationError(f"invalid register sizes a={a}, d={d}", module=_MOD)
    dim_o = 2**a
    size = n * dim_o * d
    cols = np.arange(size)
    i = cols // (dim_o * d)
    j = (cols // d) % dim_o
    i_next = np.where(j == 0, i, (i + 1) % n)
    rows = (i_next * dim_o + j) * d + cols % d
    shift = np.zeros((size, size), dtype=np.complex128)
    shift[rows, cols] = 1.0
    return shift


def regularize(be: BlockEncoding, n: int) -> RegularizedEncoding:
    """Wrap a block-encoding so its first n powers encode the matrix powers.

    The returned unitary is branch_shift(n, a, d) . (I_n x U) with b + a
    ancillas; its top-left block is identical to the input's, so the
    encoding error at k = 1 is untouched.
    """
    b = _power_of_two_exponent(n)
    if b == 0:
        return RegularizedEncoding(
            base=be, counter_qubits=0, order=1, source_ancillas=be.ancilla_qubits
        )
    u_reg = branch_shift(n, be.ancilla_qubits, be.system_dim) @ kron(
        np.eye(n), be.unitary
    )
    wrapped = BlockEncoding(
        unitary=u_reg,
        ancilla_qubits=b + be.ancilla_qubits,
        system_dim=be.system_dim,
    )
    return RegularizedEncoding(
        base=wrapped, counter_qubits=b, order=n, source_ancillas=be.ancilla_qubits
    )
