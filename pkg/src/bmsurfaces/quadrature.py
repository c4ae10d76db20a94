"""Numerical kernels: adaptive integration, finite parts and the regularised-volume oracle."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

DEFAULT_EPS_GRID = tuple(2.0**-j for j in range(3, 13))


class ConvergenceError(RuntimeError):
    """Adaptive subdivision hit its panel or depth limit."""


class IllConditionedFit(RuntimeError):
    def __init__(self, message: str, condition: float):
        super().__init__(f"{message} (condition estimate {condition:.3g})")
        self.condition = condition


@lru_cache(maxsize=None)
def lobatto_rule(n: int = 7) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Lobatto nodes and weights on [-1, 1] (closed rule, exact to degree 2n - 3)."""
    legendre = np.polynomial.legendre.Legendre.basis(n - 1)
    interior = np.sort(legendre.deriv().roots().real)
    nodes = np.concatenate(([-1.0], interior, [1.0]))
    weights = 2.0 / (n * (n - 1) * legendre(nodes) ** 2)
    return nodes, weights


def _evaluator(fn: Callable) -> Callable[[np.ndarray], np.ndarray]:
    def call(x: np.ndarray) -> np.ndarray:
        try:
            y = np.asarray(fn(x), dtype=float)
            if y.shape == x.shape:
                return y
        except (TypeError, ValueError):
            pass
        return np.array([float(fn(float(v))) for v in x])

    return call


def integrate_adaptive(
    fn: Callable,
    a: float,
    b: float,
    tol: float = 1e-10,
    points: Sequence[float] = (),
    max_panels: int = 200_000,
) -> float:
    """Integrate ``fn`` over ``[a, b]`` by adaptive bisection with a 7-point Lobatto rule.

    ``points`` inside ``(a, b)`` are mandatory panel boundaries (kinks,
    jumps).  A panel is accepted when the rule on the panel and on its two
    halves agree to within its share of ``tol * (1 + |I|)``, or to within
    the round-off level of ``|fn|`` on the panel.
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    if tol <= 0:
        raise ValueError("tol must be positive")
    f = _evaluator(fn)
    nodes, weights = lobatto_rule()
    length = b - a

    def rule(lo, hi):
        half = 0.5 * (hi - lo)
        y = f(0.5 * (hi + lo) + half * nodes)
        return half * float(weights @ y), half * float(weights @ np.abs(y))

    edges = sorted({a, b, *(float(x) for x in points if a < x < b)})
    # coarse pass fixes the absolute target
    coarse = 0.0
    for lo, hi in zip(edges, edges[1:]):
        grid = np.linspace(lo, hi, 9)
        coarse += sum(rule(x, y)[0] for x, y in zip(grid, grid[1:]))
    target = tol * (1.0 + abs(coarse))

    total = []
    stack = [(lo, hi, rule(lo, hi)[0]) for lo, hi in zip(edges, edges[1:])]
    panels = 0
    while stack:
        lo, hi, whole = stack.pop()
        mid = 0.5 * (lo + hi)
        (left, labs), (right, rabs) = rule(lo, mid), rule(mid, hi)
        panels += 1
        share = target * (hi - lo) / length
        # below the round-off floor of the panel further bisection cannot help
        floor = 50 * np.finfo(float).eps * (labs + rabs)
        if abs(whole - (left + right)) <= max(share, floor):
            total.append(left + right)
            continue
        if panels > max_panels or not lo < mid < hi:
            raise ConvergenceError(
                f"no convergence on [{a}, {b}] after {panels} panels (stuck near {mid:.6g}, tol {tol:g})"
            )
        stack.append((mid, hi, right))
        stack.append((lo, mid, left))
    return math.fsum(total)


def finite_part_power(i: int, m: int) -> float:
    """Epsilon-independent part of the integral of ``x^(i - m)`` over ``eps < |x| < 1``."""
    if m < 1 or not 0 <= i <= m - 1:
        raise ValueError(f"need 0 <= i <= m - 1, got i={i}, m={m}")
    if (i - m) % 2:
        return 0.0
    return 2.0 / (i - m + 1)


@dataclass(frozen=True)
class RadialProfile:
    """Density ``sum_i c_i x^(i - m)`` on the cross-section of a tube."""

    coefficients: tuple[float, ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        if self.m < 1 or len(self.coefficients) != self.m:
            raise ValueError(f"profile needs m >= 1 and exactly m coefficients, got m={self.m}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for i, c in enumerate(self.coefficients):
            if c:
                out += c * x ** (i - self.m)
        return out

    def tube_integral(self, eps: float, tol: float = 1e-13) -> float:
        """Integral over ``eps < |x| < 1``, each side integrated on its own."""
        right = integrate_adaptive(self, eps, 1.0, tol)
        left = integrate_adaptive(self, -1.0, -eps, tol)
        return right + left


@dataclass
class FiniteFit:
    constant: float
    powers: tuple[float, ...]
    log: float
    condition: float


def fit_finite_part(eps: Sequence[float], values: Sequence[float], m: int, max_condition: float = 1e12) -> FiniteFit:
    """Weighted least-squares fit ``c0 + sum_j c_j eps^-j + c_L ln(1/eps)`` for ``j = 1 .. m - 1``."""
    eps = np.asarray(eps, dtype=float)
    values = np.asarray(values, dtype=float)
    cols = [np.ones_like(eps)] + [eps ** (-j) for j in range(1, m)] + [np.log(1.0 / eps)]
    basis = np.column_stack(cols)
    if basis.shape[0] < basis.shape[1]:
        raise IllConditionedFit(f"{basis.shape[0]} grid points for {basis.shape[1]} unknowns", math.inf)
    # round-off in each value is proportional to its size: weight rows accordingly
    weight = 1.0 / np.maximum(1.0, np.abs(values))
    basis = basis * weight[:, None]
    values = values * weight
    scale = np.abs(basis).max(axis=0)
    scaled = basis / scale
    cond = float(np.linalg.cond(scaled))
    if not np.isfinite(cond) or cond > max_condition:
        raise IllConditionedFit("regularisation fit is ill-conditioned", cond)
    coef, *_ = np.linalg.lstsq(scaled, values, rcond=None)
    coef = coef / scale
    return FiniteFit(float(coef[0]), tuple(float(c) for c in coef[1:-1]), float(coef[-1]), cond)


def regularized_volume_numeric(p, omega, eps_grid: Sequence[float] = DEFAULT_EPS_GRID, tol: float = 1e-13) -> float:
    """Regularised volume from quadrature on shrinking tubes and an epsilon fit.

    Independent of the closed form: each curve's radial profile is integrated
    numerically over ``eps < |x| < 1`` for every grid value, the divergent
    terms are fitted away, and the constant is added to the face volumes.
    """
    from .surface import is_orientable

    orient = is_orientable(p)
    if not orient:
        raise ValueError("regularised volume is only defined on orientable surfaces")
    eps_grid = sorted(eps_grid, reverse=True)
    total = math.fsum(orient.flips[f] * omega.volumes[f] for f in p.face_ids)
    for c in p.curves:
        prof = RadialProfile(omega.periods[c.id], omega.m)
        values = [prof.tube_integral(e, tol) for e in eps_grid]
        fit = fit_finite_part(eps_grid, values, omega.m)
        if abs(fit.log) > 1e-6:
            warnings.warn(f"curve {c.id!r}: fitted log coefficient {fit.log:.3g} is not zero", RuntimeWarning)
        total += orient.flips[c.attachments[0][0]] * fit.constant
    return total
