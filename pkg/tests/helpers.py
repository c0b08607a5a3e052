"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import numpy as np

from qevt.linalg import PolynomialSpec


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_contraction(rng: np.random.Generator, dim: int, norm: float = 0.9) -> np.ndarray:
    g = random_complex(rng, (dim, dim))
    return norm * g / np.linalg.norm(g, 2)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    q, r = np.linalg.qr(random_complex(rng, (dim, dim)))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def circle_grid(count: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(count) / count)


def grid_sup(coeffs, count: int = 2**18) -> float:
    """Dense-grid sup of |P| on the circle, independent of the library routine."""
    pts = circle_grid(count)
    return float(np.max(np.abs(np.polynomial.polynomial.polyval(pts, np.asarray(coeffs)))))


def random_polynomial(
    rng: np.random.Generator, degree: int, sup: float = 0.9
) -> PolynomialSpec:
    """Random coefficients rescaled so the circle sup-norm is exactly `sup`."""
    coeffs = random_complex(rng, degree + 1)
    return PolynomialSpec(coeffs * (sup / grid_sup(coeffs)))


def naive_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Triple-loop product, the textbook definition."""
    rows, inner = a.shape
    cols = b.shape[1]
    out = np.zeros((rows, cols), dtype=np.complex128)
    for i in range(rows):
        for j in range(cols):
            acc = 0.0 + 0.0j
            for k in range(inner):
                acc += a[i, k] * b[k, j]
            out[i, j] = acc
    return out


def naive_poly_apply(coeffs, a: np.ndarray) -> np.ndarray:
    """Sum of independently computed matrix powers (no Horner)."""
    out = np.zeros_like(np.asarray(a, dtype=np.complex128))
    for k, c in enumerate(coeffs):
        out += c * np.linalg.matrix_power(a, k)
    return out


def opnorm(a: np.ndarray) -> float:
    """SVD operator norm; independent of the library's eigensolver route."""
    return float(np.linalg.norm(a, 2))
