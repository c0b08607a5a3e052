"""Generalized quantum signal processing on the unit circle.

Interleaving the signal operator diag(1, z) with 2x2 unitaries
R_0, ..., R_n realizes any degree-n polynomial P with |P| <= 1 on the
circle as the top-left entry of the product

    R_0 . diag(1, z) . R_1 . diag(1, z) ... diag(1, z) . R_n.

Synthesis runs in two stages: complete P to a pair (P, Q) with
|P|^2 + |Q|^2 = 1 on the circle (Fejer-Riesz factorization of 1 - |P|^2
by root pairing), then strip one rotation per degree from the pair.
Replacing diag(1, z) with the controlled unitary diag(I, U) lifts the
scalar identity to a block-encoding of P(U) for unitary U.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NormBoundError, NumericalError, ValidationError
from .linalg import PolynomialSpec, as_polynomial, ensure_square, kron, operator_norm

_MOD = "gqsp"

ROTATION_TOL = 1e-12
SUP_MARGIN = 1e-6  # polynomials must satisfy sup |P| <= 1 - SUP_MARGIN for completion
STRIP_TOL = 1e-13  # both leading coefficients below this aborts layer stripping
ROOT_RESIDUAL = 1e-13
ROOT_MAX_ITER = 500
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class GqspSequence:
    """Rotations R_0..R_n realizing scale * P(z); scale is the applied subnormalization."""

    rotations: tuple[np.ndarray, ...]
    scale: float = field(default=1.0)

    def __post_init__(self):
        if not self.rotations:
            raise ValidationError("a sequence needs at least one rotation", module=_MOD)
        if not 0 < self.scale <= 1.0 + 1e-12:
            raise ValidationError(f"invalid subnormalization scale {self.scale}", module=_MOD)
        frozen = []
        for k, rot in enumerate(self.rotations):
            r = np.asarray(rot, dtype=np.complex128)
            if r.shape != (2, 2):
                raise ValidationError(f"rotation {k} is not 2x2", module=_MOD)
            defect = operator_norm(r.conj().T @ r - np.eye(2))
            if defect > ROTATION_TOL:
                raise ValidationError(
                    f"rotation {k} is not unitary: defect {defect:.3e}", module=_MOD
                )
            r = r.copy()
            r.setflags(write=False)
            frozen.append(r)
        object.__setattr__(self, "rotations", tuple(frozen))

    @property
    def degree(self) -> int:
        return len(self.rotations) - 1


def polynomial_roots(coefficients) -> np.ndarray:
    """All complex roots by simultaneous Aberth-Ehrlich iteration.

    Coefficients are lowest-first. Converges when every relative residual
    drops below 1e-13; raises after 500 sweeps otherwise.
    """
    coeffs = np.asarray(coefficients, dtype=np.complex128)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    n = len(coeffs) - 1
    if n < 1:
        raise ValidationError("root finding needs degree >= 1", module=_MOD)
    # strip roots at the origin exactly
    n_zero = 0
    while coeffs[0] == 0:
        coeffs = coeffs[1:]
        n_zero += 1
    n_eff = len(coeffs) - 1
    if n_eff == 0:
        return np.zeros(n_zero, dtype=np.complex128)

    monic = coeffs / coeffs[-1]
    deriv = monic[1:] * np.arange(1, n_eff + 1)

    # initial guesses on a circle sized by the geometric mean of the root moduli,
    # with an irrational angular offset to break symmetric stalls
    radius = float(abs(monic[0]) ** (1.0 / n_eff))
    radius = min(max(radius, 0.25), 4.0)
    angles = 2 * np.pi * (np.arange(n_eff) + 0.372) / n_eff + 0.5
    z = radius * np.exp(1j * angles)

    powers = np.abs(monic)  # for the relative residual scale
    for _ in range(ROOT_MAX_ITER):
        p_val = np.polynomial.polynomial.polyval(z, monic)
        scale = np.polynomial.polynomial.polyval(np.abs(z), powers)
        done = np.abs(p_val) <= ROOT_RESIDUAL * np.maximum(scale, 1e-300)
        if np.all(done):
            break
        dp_val = np.polynomial.polynomial.polyval(z, deriv)
        dp_val = np.where(dp_val == 0, 1e-300, dp_val)
        newton = p_val / dp_val
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        repulsion = np.sum(1.0 / diff, axis=1) - 1.0  # remove the diagonal dummy
        denom = 1.0 - newton * repulsion
        denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        step = np.where(done, 0.0, newton / denom)
        z = z - step
    else:
        raise NumericalError(
            f"root finding did not converge within {ROOT_MAX_ITER} iterations", module=_MOD
        )
    return np.concatenate([np.zeros(n_zero, dtype=np.complex128), z])


def sup_norm_on_circle(p, grid: int = 16384) -> float:
    """max |P(z)| over the unit circle: dense grid plus one golden-section refinement."""
    p = as_polynomial(p)
    if grid < 4 * (p.degree + 1):
        raise ValidationError(
            f"grid {grid} too coarse for degree {p.degree}: need >= {4 * (p.degree + 1)}",
            module=_MOD,
        )
    theta = 2 * np.pi * np.arange(grid) / grid
    values = np.abs(p(np.exp(1j * theta)))
    i = int(np.argmax(values))
    best = float(values[i])

    def magnitude(t: float) -> float:
        return float(abs(p(np.exp(1j * t))))

    lo = theta[i] - 2 * np.pi / grid
    hi = theta[i] + 2 * np.pi / grid
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = magnitude(x1), magnitude(x2)
    while hi - lo > 1e-13:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = magnitude(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = magnitude(x1)
    return max(best, f1, f2)


def _circle_deficit_coefficients(p: PolynomialSpec) -> np.ndarray:
    """Laurent coefficients c_{-n}..c_n of 1 - |P|^2 on the circle."""
    coeffs = p.array
    n = p.degree
    auto = np.convolve(coeffs, np.conj(coeffs[::-1]))  # index n + m holds sum_l p_{l+m} conj(p_l)
    c = -auto
    c[n] += 1.0
    return c


def complete(p) -> PolynomialSpec:
    """Companion polynomial Q with |P|^2 + |Q|^2 = 1 on the unit circle.

    Factors the trigonometric polynomial 1 - |P|^2 by computing all roots of
    its polynomial lift, keeping one root of each conjugate-reciprocal pair
    (the one inside the open unit disk; roots caught on the wrong side are
    reflected radially inward through the circle), and fixing the overall
    constant from the mean of 1 - |P|^2. Requires sup |P| <= 1 - 1e-6 so no
    genuine roots sit on the circle; rescale the polynomial otherwise.
    """
    p = as_polynomial(p)
    c = _circle_deficit_coefficients(p)
    n = p.degree
    mean_deficit = float(c[n].real)  # 1 - sum |p_k|^2, the Fourier mean of 1 - |P|^2
    if float(np.max(np.abs(c))) <= 1e-14:
        # |P| == 1 identically on the circle (a unimodular monomial): Q = 0 exactly
        return PolynomialSpec([0.0])
    sup = sup_norm_on_circle(p)
    # the tiny absolute slack keeps freshly rescaled polynomials, whose sup is
    # 1 - SUP_MARGIN up to rounding, from tripping on the margin they just met
    if sup > 1.0 - SUP_MARGIN + 1e-10:
        raise NormBoundError(
            f"sup |P| on the circle is {sup:.9g} > {1.0 - SUP_MARGIN}; "
            "rescale the polynomial before completing",
            module=_MOD,
            norm=sup,
        )
    # trim the symmetric bandwidth: c_m ~ 0 for |m| > n_eff
    tiny = 1e-14 * max(1.0, float(np.max(np.abs(c))))
    n_eff = 0
    for m in range(n, 0, -1):
        if abs(c[n + m]) > tiny:
            n_eff = m
            break
    if n_eff == 0:
        return PolynomialSpec([np.sqrt(mean_deficit)])
    lift = c[n - n_eff : n + n_eff + 1]  # degree 2*n_eff, nonzero at both ends
    roots = polynomial_roots(lift)
    by_modulus = roots[np.argsort(np.abs(roots))]
    inner = by_modulus[:n_eff]
    inner = np.where(np.abs(inner) > 1.0, 1.0 / np.conj(inner), inner)
    monic = np.polynomial.polynomial.polyfromroots(inner)
    gamma = np.sqrt(mean_deficit / float(np.sum(np.abs(monic) ** 2)))
    q = PolynomialSpec(gamma * monic)

    theta = 2 * np.pi * np.arange(4096) / 4096
    pts = np.exp(1j * theta)
    residual = float(np.max(np.abs(np.abs(p(pts)) ** 2 + np.abs(q(pts)) ** 2 - 1.0)))
    if residual > 1e-8:
        raise NumericalError(
            f"completion residual {residual:.3e} exceeds 1e-8 on the verification grid",
            module=_MOD,
        )
    return q


def _unit_column(top: complex, bottom: complex) -> np.ndarray:
    norm = np.sqrt(abs(top) ** 2 + abs(bottom) ** 2)
    return np.array([top / norm, bottom / norm], dtype=np.complex128)


def synthesize(p) -> GqspSequence:
    """Rotation sequence whose scalar evaluation reproduces P on the circle.

    When sup |P| exceeds the 1 - 1e-6 completion margin, P is rescaled to fit
    and the factor is stored in the returned sequence's ``scale`` field, i.e.
    the sequence realizes scale * P.
    """
    p = as_polynomial(p)
    sup = sup_norm_on_circle(p)
    scale = 1.0
    if sup > 1.0 - SUP_MARGIN:
        deficit = float(np.max(np.abs(_circle_deficit_coefficients(p))))
        if deficit > 1e-14 or sup > 1.0 + 1e-12:
            scale = (1.0 - SUP_MARGIN) / sup
            p = p.scaled(scale)
    q = complete(p)

    n = p.degree
    pc = p.array
    qc = np.zeros(n + 1, dtype=np.complex128)
    qc[: q.degree + 1] = q.array

    rotations = []
    for layer in range(n):
        m = n - layer
        top = np.sqrt(abs(pc[m]) ** 2 + abs(qc[m]) ** 2)
        if top < STRIP_TOL:
            raise NumericalError(
                f"degenerate layer {layer}: both degree-{m} coefficients vanish",
                module=_MOD,
            )
        col0 = _unit_column(np.conj(qc[m]), -np.conj(pc[m]))
        bottom = np.sqrt(abs(pc[0]) ** 2 + abs(qc[0]) ** 2)
        if bottom >= STRIP_TOL:
            col1 = _unit_column(np.conj(qc[0]), -np.conj(pc[0]))
            col1 = col1 - (col0.conj() @ col1) * col0  # analytically orthogonal already
            col1 = col1 / np.linalg.norm(col1)
        else:
            col1 = np.array([-np.conj(col0[1]), np.conj(col0[0])], dtype=np.complex128)
        rot = np.column_stack([col0, col1])
        rotations.append(rot)
        # conjugate the pair by the rotation: drop one degree on top, one constant below
        new_p = np.conj(rot[0, 0]) * pc + np.conj(rot[1, 0]) * qc
        new_q = np.conj(rot[0, 1]) * pc + np.conj(rot[1, 1]) * qc
        pc = new_p[:m]
        qc = new_q[1 : m + 1]

    closing = np.sqrt(abs(pc[0]) ** 2 + abs(qc[0]) ** 2)
    if abs(closing - 1.0) > 1e-6:
        raise NumericalError(
            f"layer stripping lost unitarity: final column norm {closing:.9f}", module=_MOD
        )
    last = np.array(
        [[pc[0], -np.conj(qc[0])], [qc[0], np.conj(pc[0])]], dtype=np.complex128
    )
    rotations.append(last / closing)
    return GqspSequence(rotations=tuple(rotations), scale=scale)


def evaluate_scalar(seq: GqspSequence, z):
    """Top-left entry of R_0 diag(1,z) R_1 ... diag(1,z) R_n at a point or array."""
    zs = np.asarray(z, dtype=np.complex128)
    if np.any(np.abs(zs) > 1.0 + 1e-12):
        raise ValidationError("evaluation points must lie in the closed unit disk", module=_MOD)
    flat = np.atleast_1d(zs).ravel()
    vec = np.repeat(seq.rotations[-1][:, [0]], flat.size, axis=1)
    for rot in seq.rotations[-2::-1]:
        vec = rot @ np.vstack([vec[0], flat * vec[1]])
    values = vec[0].reshape(np.shape(zs))
    return complex(values) if np.isscalar(z) or np.shape(z) == () else values


def controlled_unitary(u) -> np.ndarray:
    """diag(I, U): apply U when the (most significant) control qubit is one."""
    u = ensure_square(u, name="controlled unitary")
    d = u.shape[0]
    out = np.zeros((2 * d, 2 * d), dtype=np.complex128)
    out[:d, :d] = np.eye(d)
    out[d:, d:] = u
    return out


def apply_to_operator(seq: GqspSequence, u) -> np.ndarray:
    """Full circuit (R_0 x I) C(U) (R_1 x I) ... C(U) (R_n x I) for a unitary U.

    With the processing qubit most significant, its top-left d x d block is
    the realized polynomial applied to U.
    """
    u = ensure_square(u, name="signal unitary")
    defect = operator_norm(u.conj().T @ u - np.eye(u.shape[0]))
    if defect > 1e-9:
        raise ValidationError(f"signal operator is not unitary: defect {defect:.3e}", module=_MOD)
    d = u.shape[0]
    eye = np.eye(d, dtype=np.complex128)
    cu = controlled_unitary(u)
    circuit = kron(seq.rotations[0], eye)
    for rot in seq.rotations[1:]:
        circuit = circuit @ cu @ kron(rot, eye)
    return circuit
