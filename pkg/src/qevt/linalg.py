"""Dense complex matrix kernel.

Matrices are plain two-dimensional ``numpy`` arrays with dtype complex128,
row-major, with finite entries; these helpers validate and operate on them.
Throughout the package the norm of a matrix is its operator norm (largest
singular value). In every tensor product the first factor is the more
significant register.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

_MOD = "linalg"

HERMITIAN_TOL = 1e-8
NEGATIVE_EIG_TOL = -1e-8


def as_matrix(values, *, name: str = "matrix") -> np.ndarray:
    """Coerce to a validated complex matrix (2-D, nonempty, finite)."""
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != 2 or arr.size == 0:
        raise ValidationError(
            f"{name} must be a nonempty 2-D array, got shape {arr.shape}", module=_MOD
        )
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValidationError(f"{name} contains NaN or Inf entries", module=_MOD)
    return arr


def ensure_square(values, *, name: str = "matrix") -> np.ndarray:
    arr = as_matrix(values, name=name)
    if arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {arr.shape}", module=_MOD)
    return arr


def adjoint(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def matmul(a, b) -> np.ndarray:
    """Matrix product with an explicit conformability check."""
    a = as_matrix(a, name="left factor")
    b = as_matrix(b, name="right factor")
    if a.shape[1] != b.shape[0]:
        raise ValidationError(
            f"cannot multiply shapes {a.shape} x {b.shape}: inner dimensions differ",
            module=_MOD,
        )
    return a @ b


def kron(a, b) -> np.ndarray:
    """Kronecker product; the first factor is the more significant register."""
    return np.kron(as_matrix(a, name="left factor"), as_matrix(b, name="right factor"))


def operator_norm(a) -> float:
    """Largest singular value, via the Hermitian eigenvalues of A^dag A."""
    a = as_matrix(a)
    gram = a.conj().T @ a
    evals = np.linalg.eigvalsh(gram)
    return float(np.sqrt(max(float(evals[-1]), 0.0)))


def psd_sqrt(h) -> np.ndarray:
    """Hermitian PSD square root S with S @ S == h.

    Small negative eigenvalues (>= -1e-8) are clamped to zero so that
    contractions sitting exactly on the norm-1 boundary do not fail from
    floating-point noise.
    """
    h = ensure_square(h, name="psd matrix")
    herm_defect = operator_norm(h - h.conj().T)
    if herm_defect > HERMITIAN_TOL:
        raise ValidationError(
            f"matrix is not Hermitian: ||h - h^dag|| = {herm_defect:.3e}", module=_MOD
        )
    sym = (h + h.conj().T) / 2
    w, v = np.linalg.eigh(sym)
    if float(w[0]) < NEGATIVE_EIG_TOL:
        raise ValidationError(
            f"matrix is not PSD: smallest eigenvalue {float(w[0]):.3e}", module=_MOD
        )
    s = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return (s + s.conj().T) / 2


@dataclass(frozen=True)
class PolynomialSpec:
    """Complex polynomial a_0 + a_1 z + ... + a_n z^n, lowest coefficient first.

    Trailing zero coefficients are trimmed on construction (at least one
    coefficient is kept), so ``degree`` is the true degree except for the
    zero polynomial, which has degree 0 by convention.
    """

    coefficients: tuple[complex, ...] = field()

    def __init__(self, coefficients):
        coeffs = [complex(c) for c in coefficients]
        if not coeffs:
            raise ValidationError("polynomial needs at least one coefficient", module=_MOD)
        for c in coeffs:
            if not (np.isfinite(c.real) and np.isfinite(c.imag)):
                raise ValidationError("polynomial coefficient is not finite", module=_MOD)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=np.complex128)

    def __call__(self, z):
        """Evaluate at a scalar or array of points."""
        return np.polynomial.polynomial.polyval(np.asarray(z), self.array)

    def derivative(self) -> "PolynomialSpec":
        """Formal derivative via exact coefficient shifts."""
        if self.degree == 0:
            return PolynomialSpec([0.0])
        shifted = [k * c for k, c in enumerate(self.coefficients)][1:]
        return PolynomialSpec(shifted)

    def scaled(self, factor: complex) -> "PolynomialSpec":
        return PolynomialSpec([factor * c for c in self.coefficients])


def as_polynomial(p) -> PolynomialSpec:
    return p if isinstance(p, PolynomialSpec) else PolynomialSpec(p)


def horner_eval(p, a) -> np.ndarray:
    """Evaluate a polynomial at a square matrix by Horner's scheme."""
    p = as_polynomial(p)
    a = ensure_square(a)
    d = a.shape[0]
    eye = np.eye(d, dtype=np.complex128)
    coeffs = p.coefficients
    result = coeffs[-1] * eye
    for c in reversed(coeffs[:-1]):
        result = result @ a + c * eye
    return result
