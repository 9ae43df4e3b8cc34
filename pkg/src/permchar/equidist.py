"""Kronecker sequences, star discrepancy, and Koksma-Hlawka error bounds.

Exact star discrepancy is available in dimensions 1 and 2; the
Erdos-Turan-Koksma lemma gives an upper bound for Kronecker sequences and
finite-type Diophantine certificates control how fast it decays.  The
extended Koksma-Hlawka bound works on the shrunken box [delta, 1-delta]^d
so that logarithmically singular integrands become admissible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


class DimensionUnsupportedError(ValueError):
    """Exact discrepancy implemented for d in {1, 2} only."""


class ResonantFrequencyError(ValueError):
    """Some ||q . phi|| vanished: rational dependence detected."""


class SingularPointHitError(ValueError):
    """A sequence point coincides with a declared singular angle."""


class PointOutsideBoxError(ValueError):
    """A sequence point lies outside [delta, 1-delta]^d."""


class NonConvergenceError(ArithmeticError):
    """Adaptive refinement failed to converge within the cap."""


_EXACT_LIMIT_1D = 100_000
_EXACT_LIMIT_2D = 4000


@dataclass(frozen=True)
class PointSequence:
    d: int
    points: np.ndarray  # shape (n, d), coordinates in [0, 1)

    def __post_init__(self):
        pts = self.points
        if pts.ndim != 2 or pts.shape[1] != self.d:
            raise ValueError("points must have shape (n, d)")
        if pts.size and (pts.min() < 0.0 or pts.max() >= 1.0):
            raise ValueError("coordinates must lie in [0, 1)")

    @property
    def n(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class FiniteTypeCertificate:
    """Diophantine lower bound ||q . phi|| >= K / ||q||_inf^gamma, verified
    over the searched range 0 < ||q||_inf <= H_searched."""

    K: float
    gamma: float
    H_searched: int
    preset: bool


@dataclass(frozen=True)
class DiscrepancyReport:
    n: int
    d: int
    exact_value: float
    etk_bound: float | None = None
    kh_error_bound: float | None = None
    delta: float | None = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "exact": self.exact_value,
            "etk": self.etk_bound,
            "kh_bound": self.kh_error_bound,
            "delta": self.delta,
        }


# Quadratic irrationals have exponent 1; the pair (sqrt2, sqrt3) shows
# record minima decaying like H^-2, so its certificate carries gamma = 2.
# K values frozen below the empirical minima over the searched ranges.
PRESETS: dict[tuple[float, ...], FiniteTypeCertificate] = {
    (math.sqrt(2.0) % 1.0,): FiniteTypeCertificate(K=0.30, gamma=1.0, H_searched=10**6, preset=True),
    (math.sqrt(3.0) % 1.0,): FiniteTypeCertificate(K=0.25, gamma=1.0, H_searched=10**6, preset=True),
    ((math.sqrt(5.0) - 1.0) / 2.0,): FiniteTypeCertificate(K=0.35, gamma=1.0, H_searched=10**6, preset=True),
    (math.sqrt(2.0) % 1.0, math.sqrt(3.0) % 1.0): FiniteTypeCertificate(
        K=0.005, gamma=2.0, H_searched=3000, preset=True),
}


def preset_certificate(phis: tuple[float, ...]) -> FiniteTypeCertificate | None:
    for key, cert in PRESETS.items():
        if len(key) == len(phis) and all(abs(a - b) < 1e-12 for a, b in zip(key, phis)):
            return cert
    return None


def kronecker(phis: float | tuple[float, ...], n: int) -> PointSequence:
    """Kronecker sequence: m-th point has coordinates frac(m * phi_j)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    phi = np.atleast_1d(np.asarray(phis, dtype=float))
    m = np.arange(1, n + 1, dtype=float)
    pts = np.mod(np.outer(m, phi), 1.0)
    return PointSequence(d=phi.size, points=pts)


def nearest_integer_distance(a):
    """||a|| = distance from a to the nearest integer, in [0, 1/2]."""
    frac = np.mod(np.asarray(a, dtype=float), 1.0)
    out = np.minimum(frac, 1.0 - frac)
    return float(out) if out.ndim == 0 else out


def _star_discrepancy_1d(xs: np.ndarray) -> float:
    n = len(xs)
    s = np.sort(xs)
    i = np.arange(1, n + 1)
    return float(max((i / n - s).max(), (s - (i - 1) / n).max()))


def _star_discrepancy_2d(points: np.ndarray) -> float:
    """Exact sup over anchored boxes via corner-candidate enumeration."""
    n = len(points)
    order = np.argsort(points[:, 0], kind="stable")
    xs = points[order, 0]
    ys = points[order, 1]
    best = 0.0
    # Over-deviation: closed boxes anchored at (a, b) with a a point
    # x-coordinate (or 1) and b a point y-coordinate (or 1).
    x_candidates = np.append(np.unique(xs), 1.0)
    for a in x_candidates:
        k = int(np.searchsorted(xs, a, side="right"))
        Y = np.sort(ys[:k])
        if k:
            cnt = np.searchsorted(Y, Y, side="right")
            best = max(best, float((cnt / n - a * Y).max()))
        best = max(best, k / n - a)
        # Under-deviation: boxes approached from below each candidate
        # corner, counting points strictly inside.
        ks = int(np.searchsorted(xs, a, side="left"))
        Ys = np.sort(ys[:ks])
        if ks:
            cnt_lo = np.searchsorted(Ys, Ys, side="left")
            best = max(best, float((a * Ys - cnt_lo / n).max()))
        best = max(best, a - ks / n)
    return best


def star_discrepancy_exact(seq: PointSequence) -> float:
    """Exact star discrepancy D_n^* for d = 1 or 2."""
    if seq.d == 1:
        if seq.n > _EXACT_LIMIT_1D:
            raise ValueError(f"1D exact discrepancy limited to n <= {_EXACT_LIMIT_1D}")
        return _star_discrepancy_1d(seq.points[:, 0])
    if seq.d == 2:
        if seq.n > _EXACT_LIMIT_2D:
            raise ValueError(f"2D exact discrepancy limited to n <= {_EXACT_LIMIT_2D}")
        return _star_discrepancy_2d(seq.points)
    raise DimensionUnsupportedError("exact discrepancy supports d in {1, 2}")


def star_discrepancy_grid_oracle(seq: PointSequence, grid_resolution: int) -> float:
    """Brute-force lower bound: sup over a grid of anchored boxes.

    Both closed and just-below-the-grid counts are scanned, so the value
    converges to D_n^* from below as the grid refines.
    """
    n = seq.n
    grid = np.arange(1, grid_resolution + 1) / grid_resolution
    best = 0.0
    if seq.d == 1:
        xs = np.sort(seq.points[:, 0])
        closed = np.searchsorted(xs, grid, side="right")
        open_ = np.searchsorted(xs, grid, side="left")
        best = float(np.maximum(np.abs(closed / n - grid), np.abs(open_ / n - grid)).max())
    elif seq.d == 2:
        for a in grid:
            inx_c = seq.points[:, 0] <= a
            inx_o = seq.points[:, 0] < a
            for b in grid:
                vol = a * b
                cc = np.count_nonzero(inx_c & (seq.points[:, 1] <= b))
                co = np.count_nonzero(inx_o & (seq.points[:, 1] < b))
                best = max(best, abs(cc / n - vol), abs(co / n - vol))
    else:
        raise DimensionUnsupportedError("grid oracle supports d in {1, 2}")
    return best


def _lattice_points(d: int, H: int) -> np.ndarray:
    """All q in Z^d with 0 < ||q||_inf <= H."""
    if d == 1:
        q = np.concatenate([np.arange(-H, 0), np.arange(1, H + 1)])
        return q[:, None]
    if d == 2:
        a = np.arange(-H, H + 1)
        Q1, Q2 = np.meshgrid(a, a, indexing="ij")
        q = np.stack([Q1.ravel(), Q2.ravel()], axis=1)
        return q[(q != 0).any(axis=1)]
    raise DimensionUnsupportedError("lattice enumeration supports d in {1, 2}")


def etk_bound(phis: float | tuple[float, ...], n: int, H: int) -> float:
    """Erdos-Turan-Koksma upper bound for the Kronecker sequence of phi.

    3^d * (2/(H+1) + (1/n) * sum_{0 < ||q||_inf <= H} 1/(r(q) ||q.phi||))
    with r(q) = prod max(1, |q_i|).
    """
    if H < 1:
        raise ValueError("H must be >= 1")
    phi = np.atleast_1d(np.asarray(phis, dtype=float))
    d = phi.size
    q = _lattice_points(d, H)
    dist = nearest_integer_distance(q @ phi)
    if np.any(dist < 1e-13):
        raise ResonantFrequencyError("||q.phi|| = 0 for some q: rational dependence")
    r = np.prod(np.maximum(1, np.abs(q)), axis=1)
    total = math.fsum((1.0 / (r * dist)).tolist())
    return float(3.0 ** d * (2.0 / (H + 1) + total / n))


def finite_type_estimate(phis: float | tuple[float, ...], H_max: int) -> FiniteTypeCertificate:
    """Empirical finite-type certificate from exhaustive search up to H_max.

    Record minima of ||q.phi|| against ||q||_inf are fitted by log-log
    regression to estimate gamma; K is the exhaustive minimum of
    ||q.phi|| * ||q||_inf^gamma.  Known quadratic-irrational angles come
    from the preset table instead.
    """
    if H_max < 2:
        raise ValueError("H_max must be >= 2")
    phi = np.atleast_1d(np.asarray(phis, dtype=float))
    cert = preset_certificate(tuple(phi.tolist()))
    if cert is not None:
        return cert
    q = _lattice_points(phi.size, H_max)
    hinf = np.abs(q).max(axis=1)
    dist = nearest_integer_distance(q @ phi)
    if np.any(dist < 1e-13):
        return FiniteTypeCertificate(K=0.0, gamma=1.0, H_searched=H_max, preset=False)
    shell_min = np.full(H_max + 1, np.inf)
    np.minimum.at(shell_min, hinf, dist)
    hs = np.arange(1, H_max + 1)
    valid = np.isfinite(shell_min[1:])
    running = np.minimum.accumulate(np.where(valid, shell_min[1:], np.inf))
    records = valid & (shell_min[1:] <= running)
    if records.sum() >= 2:
        slope, _ = np.polyfit(np.log(hs[records]), np.log(running[records]), 1)
        gamma = max(1.0, -float(slope))
    else:
        gamma = 1.0
    K = float((dist * hinf.astype(float) ** gamma).min())
    return FiniteTypeCertificate(K=K, gamma=gamma, H_searched=H_max, preset=False)


def certificate_holds(cert: FiniteTypeCertificate, phis: float | tuple[float, ...],
                      H: int) -> bool:
    """Check the certificate inequality for every q with ||q||_inf <= H."""
    phi = np.atleast_1d(np.asarray(phis, dtype=float))
    q = _lattice_points(phi.size, min(H, cert.H_searched))
    hinf = np.abs(q).max(axis=1).astype(float)
    dist = nearest_integer_distance(q @ phi)
    return bool(np.all(dist >= cert.K / hinf ** cert.gamma - 1e-14))


def weighted_sum(h: Callable[[np.ndarray], np.ndarray], seq: PointSequence,
                 singular_angles: tuple[float, ...] = ()) -> complex | float:
    """(1/n) sum of h over the sequence points (d = 1).

    Raises if any point coincides with a declared singular angle of h.
    """
    if seq.d != 1:
        raise DimensionUnsupportedError("weighted_sum supports d = 1")
    pts = seq.points[:, 0]
    for s in singular_angles:
        if np.any(np.abs(pts - s) < 1e-15):
            raise SingularPointHitError(f"sequence point hits singular angle {s}")
    vals = h(pts)
    if np.iscomplexobj(vals):
        return complex(math.fsum(vals.real.tolist()) / seq.n,
                       math.fsum(vals.imag.tolist()) / seq.n)
    return float(math.fsum(np.asarray(vals, dtype=float).tolist()) / seq.n)


def total_variation(h: Callable[[np.ndarray], np.ndarray], interval: tuple[float, float],
                    tol: float = 1e-6, max_points: int = 2 ** 22) -> float:
    """Total variation on [a, b] by refining grid sums of |h(t_{i+1}) - h(t_i)|.

    Exact on each monotone piece once the grid separates the pieces, so
    the estimates increase to the true variation for piecewise monotone h.
    """
    a, b = interval
    if not b > a:
        raise ValueError("empty interval")
    m = 1024
    prev = -math.inf
    while m <= max_points:
        t = np.linspace(a, b, m + 1)
        v = float(np.abs(np.diff(h(t))).sum())
        if v - prev < tol:
            return v
        prev = v
        m *= 2
    raise NonConvergenceError("total variation did not stabilize within the refinement cap")


def kh_error_bound(h: Callable[[np.ndarray], np.ndarray], seq: PointSequence,
                   delta: float, variation: float | None = None,
                   h2: Callable[[np.ndarray], np.ndarray] | None = None) -> float:
    """Extended Koksma-Hlawka bound on [delta, 1-delta]^d, d in {1, 2}.

    d = 1: delta * (|h(delta)| + |h(1-delta)|) + D_n^* * V(h | [delta, 1-delta]).
    d = 2 applies to product integrands h(u) * h2(v); face terms use the
    one-dimensional factors and the Vitali variation factors as
    V(h) * V(h2).  Absolute values are used in the face terms, which is
    the conservative form an error bound requires.
    """
    if not 0.0 <= delta < 0.5:
        raise ValueError("delta must lie in [0, 0.5)")
    lo, hi = delta, 1.0 - delta
    if seq.points.min() < lo or seq.points.max() > hi:
        raise PointOutsideBoxError("sequence points must lie inside [delta, 1-delta]^d")
    if seq.d == 1:
        V = total_variation(h, (lo, hi)) if variation is None else variation
        D = star_discrepancy_exact(seq)
        edge = abs(float(h(np.array([lo]))[0])) + abs(float(h(np.array([hi]))[0]))
        return delta * edge + D * V
    if seq.d == 2:
        if h2 is None:
            raise ValueError("d = 2 requires the second product factor h2")
        V1 = total_variation(h, (lo, hi))
        V2 = total_variation(h2, (lo, hi))
        grid = np.linspace(lo, hi, 4097)
        int1 = float(np.trapezoid(np.abs(h(grid)), grid))
        int2 = float(np.trapezoid(np.abs(h2(grid)), grid))
        habs = lambda t: np.abs(h(t))
        h2abs = lambda t: np.abs(h2(t))
        corners = [habs(np.array([lo]))[0], habs(np.array([hi]))[0]]
        corners2 = [h2abs(np.array([lo]))[0], h2abs(np.array([hi]))[0]]
        corner_sum = sum(c1 * c2 for c1 in corners for c2 in corners2)
        # Face-integral terms: the 4 edges at weight delta and the 4
        # corners at weight delta^2.
        face_terms = delta * 2.0 * (int1 * max(corners2) + int2 * max(corners))
        face_terms += delta ** 2 * corner_sum
        # Discrepancy terms: marginals on the two positive edges plus the
        # full 2-D box with the Vitali variation.
        seq1 = PointSequence(1, seq.points[:, :1])
        seq2 = PointSequence(1, seq.points[:, 1:])
        D1 = star_discrepancy_exact(seq1)
        D2 = star_discrepancy_exact(seq2)
        D12 = star_discrepancy_exact(seq)
        edge_var = D1 * V1 * max(corners2) + D2 * V2 * max(corners)
        return face_terms + edge_var + D12 * V1 * V2
    raise DimensionUnsupportedError("kh_error_bound supports d in {1, 2}")
