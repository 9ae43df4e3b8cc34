"""Limit constants of the CLTs via quadrature with singularity handling.

The variance and mean constants are integrals of log|f| and arg(f) over
the circle.  log|f| has integrable logarithmic singularities at the zeros
of f, so each subinterval between declared singular angles is integrated
with a double-exponential (tanh-sinh) rule, which keeps full accuracy at
singular endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .classfuncs import SpectralFunction


class QuadratureError(ArithmeticError):
    """Tanh-sinh refinement did not reach the target tolerance."""


@dataclass(frozen=True)
class LimitConstants:
    m_R: float
    m_I: float
    V_R: float
    V_I: float

    def to_dict(self) -> dict:
        return {"m_R": self.m_R, "m_I": self.m_I, "V_R": self.V_R, "V_I": self.V_I}


@dataclass(frozen=True)
class CovarianceSpec:
    """Blocks of the 2d x 2d limiting covariance, scaled by theta.

    re_re[j][l] = cov(Re N_j, Re N_l), and similarly re_im and im_im.
    """

    d: int
    re_re: np.ndarray
    re_im: np.ndarray
    im_im: np.ndarray

    def full_matrix(self) -> np.ndarray:
        """Symmetric 2d x 2d matrix ordered (Re_1..Re_d, Im_1..Im_d)."""
        top = np.hstack([self.re_re, self.re_im])
        bot = np.hstack([self.re_im.T, self.im_im])
        return np.vstack([top, bot])

    def to_dict(self) -> dict:
        return {"d": self.d, "re_re": self.re_re.tolist(),
                "re_im": self.re_im.tolist(), "im_im": self.im_im.tolist()}


def _tanh_sinh_segment(u: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                       target_tol: float, max_level: int = 12) -> float:
    """Integrate u over (a, b) with the double-exponential transformation.

    Nodes are kept strictly inside the interval by tracking their distance
    to the endpoints, so endpoint log singularities are never evaluated
    at the singular point itself.
    """
    half = 0.5 * (b - a)
    t_max = 4.0  # exp(pi/2*sinh(4)) ~ 1e18: node distance below double eps
    prev = None
    prev_diff = math.inf
    for level in range(3, max_level + 1):
        h = t_max / 2 ** level
        t = np.arange(-2 ** level, 2 ** level + 1) * h
        s = np.sinh(t)
        x = np.tanh(0.5 * math.pi * s)
        w = 0.5 * math.pi * np.cosh(t) / np.cosh(0.5 * math.pi * s) ** 2
        # distance of node from the nearer endpoint, computed stably
        dist = half * 2.0 / (np.exp(math.pi * np.abs(s)) + 1.0)
        keep = dist > 0.0
        pts = np.where(x >= 0, b - dist, a + dist)
        pts = np.clip(pts, np.nextafter(a, b), np.nextafter(b, a))
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.asarray(u(pts[keep]), dtype=float)
        vals = np.where(np.isfinite(vals), vals, 0.0)
        est = half * h * float(np.sum(vals * w[keep]))
        if prev is not None:
            diff = abs(est - prev)
            if diff <= target_tol * max(1.0, abs(est)):
                return est
            # Rounding noise in the integrand near singular endpoints puts
            # a floor under the refinement; once the level-to-level change
            # stops shrinking geometrically, more nodes cannot help.
            if level >= 8 and diff > 0.25 * prev_diff:
                return est
            prev_diff = diff
        prev = est
    raise QuadratureError(f"tanh-sinh did not converge on ({a}, {b})")


def singular_quadrature(u: Callable[[np.ndarray], np.ndarray],
                        singular_angles: tuple[float, ...] = (),
                        target_tol: float = 1e-10,
                        interval: tuple[float, float] = (0.0, 1.0)) -> float:
    """Integral of u over [0, 1] split at its declared singular angles."""
    a, b = interval
    cuts = sorted({a, b} | {s for s in singular_angles if a < s < b})
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        total += _tanh_sinh_segment(u, lo, hi, target_tol)
    return total


def _arg_jump_angles(f: SpectralFunction, grid_size: int = 4096) -> tuple[float, ...]:
    """Angles where arg(f) jumps, located by scanning a fine grid.

    Jump discontinuities appear at zeros of f and where f crosses the
    negative real axis; both show up as large steps of arg on the grid.
    """
    phi = (np.arange(grid_size) + 0.5) / grid_size
    args = np.angle(f.on_circle(phi))
    steps = np.abs(np.diff(args))
    jumps = np.flatnonzero(steps > 1.0)
    return tuple((phi[j] + phi[j + 1]) / 2.0 for j in jumps)


def limit_constants(f: SpectralFunction, target_tol: float = 1e-10) -> LimitConstants:
    """All four one-point constants by singular quadrature.

    m_R + i m_I = integral of log f over the circle (principal branch
    termwise); V_R integrates log^2|f|, V_I integrates arg^2(f).
    """
    log_abs = lambda phi: np.log(np.abs(f.on_circle(phi)))
    arg = lambda phi: np.angle(f.on_circle(phi))
    zeros = f.zero_angles
    jump_angles = zeros + _arg_jump_angles(f)
    m_R = singular_quadrature(log_abs, zeros, target_tol)
    m_I = singular_quadrature(arg, jump_angles, target_tol)
    V_R = singular_quadrature(lambda p: log_abs(p) ** 2, zeros, target_tol)
    V_I = singular_quadrature(lambda p: arg(p) ** 2, jump_angles, target_tol)
    return LimitConstants(m_R=m_R, m_I=m_I, V_R=V_R, V_I=V_I)


def covariance_matrix(fs: list[SpectralFunction], theta: float) -> CovarianceSpec:
    """Limiting covariance blocks for d points, scaled by theta.

    Off-diagonal double integrals separate into products of one-point
    integrals; diagonal entries are the one-point variance constants.
    """
    d = len(fs)
    consts = [limit_constants(f) for f in fs]
    mr = np.array([c.m_R for c in consts])
    mi = np.array([c.m_I for c in consts])
    re_re = theta * np.outer(mr, mr)
    re_im = theta * np.outer(mr, mi)
    im_im = theta * np.outer(mi, mi)
    for j in range(d):
        re_re[j, j] = theta * consts[j].V_R
        im_im[j, j] = theta * consts[j].V_I
        cross = singular_quadrature(
            lambda p, f=fs[j]: np.log(np.abs(f.on_circle(p))) * np.angle(f.on_circle(p)),
            fs[j].zero_angles + _arg_jump_angles(fs[j]))
        re_im[j, j] = theta * cross
    return CovarianceSpec(d=d, re_re=re_re, re_im=re_im, im_im=im_im)


@dataclass(frozen=True)
class StatisticSpec:
    """Per-cycle-length statistic X_{m,1} through its moment evaluators.

    second_moment(m) = E[X_{m,1}^2]; abs_moment(m, p) = E[|X_{m,1}|^p].
    """

    description: str
    second_moment: Callable[[int], float]
    abs_moment: Callable[[int, float], float]


def degenerate_statistic(a: float = 1.0) -> StatisticSpec:
    """X identically equal to a."""
    return StatisticSpec(description=f"constant {a}",
                         second_moment=lambda m: a * a,
                         abs_moment=lambda m, p: abs(a) ** p)


def charpoly_uniform_statistic() -> StatisticSpec:
    """X_{m,1} = log|1 - e^{2 pi i U}| with U uniform: moments independent of m."""
    h = lambda phi: np.log(np.abs(1.0 - np.exp(2j * np.pi * phi)))
    cache: dict[float, float] = {}

    def moment(p: float) -> float:
        if p not in cache:
            cache[p] = singular_quadrature(lambda t: np.abs(h(t)) ** p, (0.0,), 1e-9)
        return cache[p]

    return StatisticSpec(description="Re log Z term, uniform multiplier",
                         second_moment=lambda m: moment(2.0),
                         abs_moment=lambda m, p: moment(p))


def v_n(spec: StatisticSpec, n: int) -> float:
    """V_n = sum_{m=1}^n E[X_{m,1}^2] / m."""
    return math.fsum(spec.second_moment(m) / m for m in range(1, n + 1))


@dataclass(frozen=True)
class LyapunovReport:
    theta: float
    p: float
    n_grid: tuple[int, ...]
    ratios: tuple[float, ...]
    p_admissible: bool
    decreasing: bool


def lyapunov_check(spec: StatisticSpec, theta: float, p: float,
                   n_grid: tuple[int, ...] = (100, 1000, 10000)) -> LyapunovReport:
    """Tabulate sum (1/m) E|X|^p / V_n^{p/2} over a grid of n.

    The CLT hypotheses need p > max(1/theta, 2) and the ratio to vanish;
    the report flags an inadmissible p and non-decreasing ratios.
    """
    admissible = p > max(1.0 / theta, 2.0)
    ratios = []
    for n in n_grid:
        num = math.fsum(spec.abs_moment(m, p) / m for m in range(1, n + 1))
        vn = v_n(spec, n)
        ratios.append(num / vn ** (p / 2.0) if vn > 0 else math.inf)
    decreasing = all(b < a for a, b in zip(ratios, ratios[1:]))
    return LyapunovReport(theta=theta, p=p, n_grid=tuple(n_grid),
                          ratios=tuple(ratios), p_admissible=admissible,
                          decreasing=decreasing)


def normalization(n: int, theta: float, f: SpectralFunction,
                  part: str = "re", constants: LimitConstants | None = None) -> float:
    """Scale factor sqrt(theta * V * log n), V = V_R or V_I by part."""
    if n < 2:
        raise ValueError("n must be >= 2")
    c = constants if constants is not None else limit_constants(f)
    V = c.V_R if part == "re" else c.V_I
    return math.sqrt(theta * V * math.log(n))


def centering(n: int, theta: float, f: SpectralFunction,
              constants: LimitConstants | None = None) -> complex:
    """theta * (m_R + i m_I) * log n, the pre-normalization centering."""
    if n < 2:
        raise ValueError("n must be >= 2")
    c = constants if constants is not None else limit_constants(f)
    return theta * complex(c.m_R, c.m_I) * math.log(n)
