"""Log characteristic polynomial and multiplicative class functions.

Values are branch-log sums: each term takes the principal branch
(imaginary part in (-pi, pi], negative reals mapped to +pi) and the
imaginary parts are accumulated termwise, never re-wrapped, so the total
can leave (-pi, pi].
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .ewens import CycleType, Permutation
from .multipliers import JointMultiplierModel, MultiplierModel, sample_joint_cycle, sample_T, sample_z

_DET_SIZE_LIMIT = 12


class SingularSampleError(ArithmeticError):
    """A branch-log term hit an exact zero (probability-zero event)."""


@dataclass(frozen=True)
class ComplexLogValue:
    re: float
    im: float

    def __add__(self, other: "ComplexLogValue") -> "ComplexLogValue":
        return ComplexLogValue(self.re + other.re, self.im + other.im)

    def as_complex(self) -> complex:
        return complex(self.re, self.im)


@dataclass(frozen=True)
class SpectralFunction:
    """Function on the unit circle together with its zero angles.

    The zero angles are needed by quadrature split points and by the
    singular-sample guard; they cannot be recovered from the callable.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    zero_angles: tuple[float, ...]
    label: str

    def on_circle(self, phi: np.ndarray) -> np.ndarray:
        """f evaluated at e^{2 pi i phi}."""
        return self.eval(np.exp(2j * np.pi * np.asarray(phi)))


def char_poly() -> SpectralFunction:
    """f(x) = 1 - 1/x, the characteristic-polynomial factor; zero at angle 0."""
    return SpectralFunction(eval=lambda w: 1.0 - 1.0 / w, zero_angles=(0.0,), label="charpoly")


def sym_part() -> SpectralFunction:
    """f(w) = 2 - w - 1/w, so f(e^{2 pi i phi}) = 2 - 2 cos(2 pi phi) >= 0.

    Per-cycle factor of the symmetric-part characteristic polynomial:
    at w = y^m this equals 2 - 2 cos(m * alpha).
    """
    return SpectralFunction(eval=lambda w: 2.0 - w - 1.0 / w, zero_angles=(0.0,), label="sympart")


def antisym_part() -> SpectralFunction:
    """f(w) = 2 - w + 1/w; at w = y^m with y on the circle: 2 - 2i sin(m alpha)."""
    return SpectralFunction(eval=lambda w: 2.0 - w + 1.0 / w, zero_angles=(), label="antisympart")


def constant(c: float) -> SpectralFunction:
    return SpectralFunction(eval=lambda w: np.full_like(np.asarray(w), c, dtype=complex),
                            zero_angles=(), label=f"const({c})")


def spectral_function_by_label(label: str) -> SpectralFunction:
    table = {"charpoly": char_poly, "sympart": sym_part, "antisympart": antisym_part}
    if label.startswith("const:"):
        return constant(float(label.split(":", 1)[1]))
    if label not in table:
        raise KeyError(f"unknown spectral function {label!r}")
    return table[label]()


def branch_log(w: complex) -> ComplexLogValue:
    """Principal-branch log; strictly negative reals map to (ln|w|, +pi)."""
    if w == 0:
        raise SingularSampleError("log of exact zero")
    v = cmath.log(w)
    return ComplexLogValue(v.real, v.imag)


def _branch_log_sum(values: np.ndarray) -> ComplexLogValue:
    """Termwise principal-branch log sum of an array of nonzero complex values."""
    if np.any(values == 0):
        raise SingularSampleError("log of exact zero in class-function term")
    logs = np.log(values.astype(complex))
    return ComplexLogValue(float(logs.real.sum()), float(logs.imag.sum()))


def log_Z(ct: CycleType, x: float, model: MultiplierModel,
          stream: np.random.Generator) -> ComplexLogValue:
    """Sum over cycles of log(1 - x^{-m} T_{m,k}), one fresh T per cycle.

    `x` is the angle of the evaluation point e^{2 pi i x}.
    """
    total = ComplexLogValue(0.0, 0.0)
    for m, c in ct.nonzero():
        t = sample_T(model, m, stream, size=c)
        terms = 1.0 - np.exp(2j * np.pi * (t - m * x))
        total = total + _branch_log_sum(terms)
    return total


def w1(ct: CycleType, f: SpectralFunction, x: float, model: MultiplierModel,
       stream: np.random.Generator) -> ComplexLogValue:
    """First multiplicative class function: terms log f(x^m z_{m,k})."""
    total = ComplexLogValue(0.0, 0.0)
    for m, c in ct.nonzero():
        z = sample_z(model, stream, size=c)
        total = total + _branch_log_sum(f.on_circle(np.mod(z + m * x, 1.0)))
    return total


def w2(ct: CycleType, f: SpectralFunction, x: float, model: MultiplierModel,
       stream: np.random.Generator) -> ComplexLogValue:
    """Second multiplicative class function: terms log f(x^m T_{m,k})."""
    total = ComplexLogValue(0.0, 0.0)
    for m, c in ct.nonzero():
        t = sample_T(model, m, stream, size=c)
        total = total + _branch_log_sum(f.on_circle(np.mod(t + m * x, 1.0)))
    return total


def multipoint_w(ct: CycleType, kind: int, fs: list[SpectralFunction],
                 points: list[float], joint: JointMultiplierModel,
                 stream: np.random.Generator) -> list[ComplexLogValue]:
    """d coordinates evaluated with shared per-cycle joint draws.

    kind 1 uses the joint z draw, kind 2 the componentwise product T.
    Coordinate j pairs function fs[j] with point angle points[j].
    """
    if kind not in (1, 2):
        raise ValueError("kind must be 1 or 2")
    d = len(points)
    if len(fs) != d or joint.d != d:
        raise ValueError("points, functions and joint model must agree on d")
    totals = [ComplexLogValue(0.0, 0.0)] * d
    for m, c in ct.nonzero():
        for _ in range(c):
            z_bar, t_bar = sample_joint_cycle(joint, m, stream)
            angles = z_bar if kind == 1 else t_bar
            for j in range(d):
                w = fs[j].on_circle(np.array([math.fmod(angles[j] + m * points[j], 1.0)]))
                totals[j] = totals[j] + _branch_log_sum(w)
    return totals


def multipoint_logZ(ct: CycleType, points: list[float], joint: JointMultiplierModel,
                    stream: np.random.Generator) -> list[ComplexLogValue]:
    """log Z at d points with shared per-cycle joint multiplier draws.

    Terms are log(1 - x_j^{-m} T), matching log_Z coordinatewise rather
    than the f(x^m T) convention of the general class functions.
    """
    d = len(points)
    if joint.d != d:
        raise ValueError("points and joint model must agree on d")
    totals = [ComplexLogValue(0.0, 0.0)] * d
    for m, c in ct.nonzero():
        for _ in range(c):
            _, t_bar = sample_joint_cycle(joint, m, stream)
            for j in range(d):
                term = 1.0 - np.exp(2j * np.pi * (t_bar[j] - m * points[j]))
                totals[j] = totals[j] + _branch_log_sum(np.array([term]))
    return totals


def permutation_matrix(perm: Permutation, z_values: np.ndarray) -> np.ndarray:
    """M_ij = z_i * delta_{i, sigma(j)} as a dense complex matrix."""
    n = perm.n
    M = np.zeros((n, n), dtype=complex)
    for j in range(1, n + 1):
        i = perm.images[j - 1]
        M[i - 1, j - 1] = z_values[i - 1]
    return M


def det_oracle(perm: Permutation, z_values: np.ndarray, x: float) -> complex:
    """det(I - x^{-1} M(sigma, z)) by dense LU; n <= 12.

    Must equal the cycle product prod_c (1 - x^{-|c|} prod_{j in c} z_j)
    exactly, for any fixed z assignment.
    """
    if perm.n > _DET_SIZE_LIMIT:
        raise ValueError(f"dense determinant limited to n <= {_DET_SIZE_LIMIT}")
    xc = np.exp(2j * np.pi * x)
    M = permutation_matrix(perm, np.asarray(z_values, dtype=complex))
    return complex(np.linalg.det(np.eye(perm.n, dtype=complex) - M / xc))


def cycle_product(perm: Permutation, z_values: np.ndarray, x: float) -> complex:
    """prod over cycles c of (1 - x^{-|c|} prod_{j in c} z_j)."""
    xc = np.exp(2j * np.pi * x)
    z = np.asarray(z_values, dtype=complex)
    out = 1.0 + 0.0j
    for cyc in perm.cycles():
        zprod = np.prod(z[[j - 1 for j in cyc]])
        out *= 1.0 - zprod / xc ** len(cyc)
    return complex(out)


def sym_matrix(perm: Permutation) -> np.ndarray:
    """S_ij = delta_{i, sigma(j)} + delta_{i, sigma^{-1}(j)}."""
    n = perm.n
    S = np.zeros((n, n))
    for j in range(1, n + 1):
        S[perm.images[j - 1] - 1, j - 1] += 1.0
    return S + S.T


def sym_char_poly(perm: Permutation, x_real: float) -> float:
    """det(S - x I) for x in [-2, 2] via the cycle-product formula.

    With x = 2 cos(alpha) each length-m cycle contributes 2 - 2 cos(m alpha);
    the overall sign is (-1)^(n - #cycles), fixing the leading coefficient
    (-1)^n of det(S - x I).
    """
    if not -2.0 <= x_real <= 2.0:
        raise ValueError("x_real must lie in [-2, 2]")
    alpha = math.acos(x_real / 2.0)
    ct = perm.cycle_type()
    value = 1.0
    for m, c in ct.nonzero():
        value *= (2.0 - 2.0 * math.cos(m * alpha)) ** c
    sign = -1.0 if (perm.n - ct.total_cycles) % 2 else 1.0
    return sign * value


def sym_char_poly_matrix(perm: Permutation, x_real: float) -> float:
    """Dense-determinant counterpart of sym_char_poly; n <= 12."""
    if perm.n > _DET_SIZE_LIMIT:
        raise ValueError(f"dense determinant limited to n <= {_DET_SIZE_LIMIT}")
    S = sym_matrix(perm)
    return float(np.linalg.det(S - x_real * np.eye(perm.n)))


def antisym_matrix(perm: Permutation) -> np.ndarray:
    """2A = M - M^T for the plain permutation matrix M(sigma, 1)."""
    n = perm.n
    M = np.zeros((n, n))
    for j in range(1, n + 1):
        M[perm.images[j - 1] - 1, j - 1] = 1.0
    return M - M.T


def antisym_char_poly_matrix(perm: Permutation, x_real: float) -> float:
    """det(2A - x I) by dense determinant; n <= 12."""
    if perm.n > _DET_SIZE_LIMIT:
        raise ValueError(f"dense determinant limited to n <= {_DET_SIZE_LIMIT}")
    return float(np.linalg.det(antisym_matrix(perm) - x_real * np.eye(perm.n)))


def antisym_eigen_product(perm: Permutation, x_real: float) -> float:
    """det(2A - x I) from per-cycle eigenvalues 2i sin(2 pi k / m).

    Each length-m cycle block of M - M^T has eigenvalues
    2i sin(2 pi k / m), k = 0..m-1.  Used to arbitrate the stated but
    underived antisymmetric-part product identity.
    """
    out = 1.0 + 0.0j
    for m, c in perm.cycle_type().nonzero():
        k = np.arange(m)
        block = np.prod(2j * np.sin(2.0 * np.pi * k / m) - x_real)
        out *= block ** c
    return float(out.real)
