"""Block-encodings: construction, decoding, verification, regularity order.

A unitary U with a ancilla qubits block-encodes a d x d matrix A up to
error eps when the top-left d x d block of U (ancillas most significant,
projected onto their all-zero state) is within eps of A in operator norm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NormBoundError, ValidationError
from .linalg import adjoint, as_matrix, ensure_square, operator_norm

_MOD = "encoding"

UNITARITY_TOL = 1e-9
NORM_SLACK = 1e-12
REGULARITY_FLOOR = 1e-10


@dataclass(frozen=True, eq=False)
class BlockEncoding:
    """A unitary together with its ancilla count and encoded-system dimension."""

    unitary: np.ndarray
    ancilla_qubits: int
    system_dim: int

    def __post_init__(self):
        u = ensure_square(self.unitary, name="encoding unitary")
        if self.ancilla_qubits < 0:
            raise ValidationError("ancilla count must be nonnegative", module=_MOD)
        if self.system_dim < 1:
            raise ValidationError("system dimension must be positive", module=_MOD)
        expected = (2**self.ancilla_qubits) * self.system_dim
        if u.shape[0] != expected:
            raise ValidationError(
                f"unitary dimension {u.shape[0]} != 2^{self.ancilla_qubits} * "
                f"{self.system_dim} = {expected}",
                module=_MOD,
            )
        defect = operator_norm(u.conj().T @ u - np.eye(u.shape[0]))
        if defect > UNITARITY_TOL:
            raise ValidationError(
                f"matrix is not unitary: ||U^dag U - I|| = {defect:.3e}", module=_MOD
            )
        u = u.copy()
        u.setflags(write=False)
        object.__setattr__(self, "unitary", u)

    @property
    def dim(self) -> int:
        return self.unitary.shape[0]


def top_left_block(be: BlockEncoding) -> np.ndarray:
    """The encoded d x d block: ancillas projected onto their all-zero state."""
    d = be.system_dim
    return be.unitary[:d, :d].copy()


def rescale(a) -> tuple[np.ndarray, float]:
    """Return (A / alpha, alpha) with alpha = max(1, ||A||), so the result is encodable."""
    a = as_matrix(a)
    alpha = max(1.0, operator_norm(a))
    return a / alpha, alpha


def dilate(a_mat) -> BlockEncoding:
    """Exact one-ancilla block-encoding of a contraction A.

    U = [[A, (I - A A^dag)^1/2], [(I - A^dag A)^1/2, -A^dag]]. Both square
    roots are built from one SVD of A so that they share the same clamped
    singular values; separate Hermitian square roots would lose ~sqrt(eps)
    of unitarity for contractions sitting exactly on the norm-1 boundary.
    """
    a = ensure_square(a_mat, name="matrix to encode")
    norm = operator_norm(a)
    if norm > 1.0 + NORM_SLACK:
        raise NormBoundError(
            f"cannot dilate: ||A|| = {norm:.12g} > 1; divide by the norm first "
            "(rescale(A) returns (A/alpha, alpha))",
            module=_MOD,
            norm=norm,
        )
    d = a.shape[0]
    left, sing, right_h = np.linalg.svd(a)
    complement = np.sqrt(1.0 - np.clip(sing, 0.0, 1.0) ** 2)
    top_right = (left * complement) @ adjoint(left)
    bottom_left = (adjoint(right_h) * complement) @ right_h
    u = np.block([[a, top_right], [bottom_left, -adjoint(a)]])
    return BlockEncoding(unitary=u, ancilla_qubits=1, system_dim=d)


def verify_encoding(be: BlockEncoding, a_mat, eps: float) -> bool:
    """True iff the encoded block is within eps of a_mat in operator norm."""
    a = ensure_square(a_mat, name="target matrix")
    if a.shape[0] != be.system_dim:
        raise ValidationError(
            f"target dimension {a.shape[0]} != encoded system dimension {be.system_dim}",
            module=_MOD,
        )
    if eps < 0:
        raise ValidationError("tolerance must be nonnegative", module=_MOD)
    return operator_norm(top_left_block(be) - a) <= eps


def regularity_profile(be: BlockEncoding, a_mat, k_max: int) -> list[float]:
    """Per-power encoding errors ||top_left(U^k) - A^k|| for k = 1..k_max."""
    a = ensure_square(a_mat, name="target matrix")
    if a.shape[0] != be.system_dim:
        raise ValidationError(
            f"target dimension {a.shape[0]} != encoded system dimension {be.system_dim}",
            module=_MOD,
        )
    if k_max < 1:
        raise ValidationError("k_max must be positive", module=_MOD)
    d = be.system_dim
    u_power = np.eye(be.dim, dtype=np.complex128)
    a_power = np.eye(d, dtype=np.complex128)
    errors = []
    for _ in range(k_max):
        u_power = u_power @ be.unitary
        a_power = a_power @ a
        errors.append(operator_norm(u_power[:d, :d] - a_power))
    return errors


def regularity_order(be: BlockEncoding, a_mat, tol: float, k_max: int) -> int:
    """Largest k <= k_max with ||top_left(U^j) - A^j|| <= j*tol + 1e-10 for all j <= k.

    The k = 0 case (identity) always passes. The k = 1 case failing means the
    input is not a block-encoding of a_mat at this tolerance, which is an error.
    """
    errors = regularity_profile(be, a_mat, k_max)
    if errors[0] > tol + REGULARITY_FLOOR:
        raise ValidationError(
            f"not a block-encoding at tolerance {tol:.3e}: k=1 error is {errors[0]:.3e}",
            module=_MOD,
        )
    order = k_max
    for k, err in enumerate(errors, start=1):
        if err > k * tol + REGULARITY_FLOOR:
            order = k - 1
            break
    return order
