"""Desingularisation of b^{2k}-forms: ``dx/x^{2k}`` is replaced by ``d f_eps`` inside the tube.

``f`` is odd, equal to ``-x^(1-2k)/(2k-1) + 2`` for ``x > 1``, and an odd
polynomial on ``[-1, 1]`` matched to ``N`` derivatives at ``x = 1``.
``f_eps(x) = eps^-(2k-1) f(x/eps)`` agrees with ``-x^(1-2k)/(2k-1)`` (up to a
constant) outside ``|x| <= eps``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .laurent import BmForm, require_form
from .quadrature import integrate_adaptive
from .surface import SurfacePresentation, is_orientable


class ProfileError(ValueError):
    pass


def _falling(n: float, j: int) -> float:
    out = 1.0
    for r in range(j):
        out *= n - r
    return out


def outer_derivative(k: int, j: int) -> float:
    """``j``-th derivative at ``x = 1`` of ``-x^(1-2k)/(2k-1) + 2`` (``j = 0`` is the value)."""
    if j == 0:
        return 2.0 - 1.0 / (2 * k - 1)
    return _falling(-2.0 * k, j - 1)


@dataclass(frozen=True)
class DesingProfile:
    k: int
    match_order: int
    coefficients: tuple[float, ...]  # of x, x^3, ..., x^(2N+1)

    def _inner(self, x, deriv: int):
        out = np.zeros_like(x)
        for l, c in enumerate(self.coefficients):
            n = 2 * l + 1
            if n >= deriv:
                out += c * _falling(n, deriv) * x ** (n - deriv)
        return out

    def f(self, x):
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) <= 1
        safe = np.where(inside, 1.0, x)
        outer = -np.sign(safe) * np.abs(safe) ** (1 - 2 * self.k) / (2 * self.k - 1) + 2 * np.sign(safe)
        return np.where(inside, self._inner(x, 0), outer)

    def fprime(self, x):
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) <= 1
        safe = np.where(inside, 1.0, x)
        return np.where(inside, self._inner(x, 1), safe ** (-2 * self.k))

    def fprime_eps(self, x, eps: float):
        """``f_eps'(x) = eps^-2k f'(x/eps)``; equals ``x^-2k`` for ``|x| > eps``."""
        return eps ** (-2 * self.k) * self.fprime(np.asarray(x, dtype=float) / eps)


def build_profile(k: int, N: int | None = None, grid_step: float = 1e-3) -> DesingProfile:
    """Odd polynomial profile matched to order ``N`` at ``x = 1``.

    Without ``N`` the highest order ``<= min(2k, 4)`` whose profile is
    strictly increasing is used (the order-4 match dips below zero).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if N is None:
        for n in range(min(2 * k, 4), 0, -1):
            try:
                return build_profile(k, n, grid_step)
            except ProfileError:
                continue
        raise ProfileError(f"no increasing profile for k = {k} with match order <= 4")
    if not 1 <= N <= 4:
        raise ValueError(f"match order must be in 1..4, got {N}")
    # rows: value and derivatives 1..N at x = 1 of sum_l c_l x^(2l+1)
    A = np.array([[_falling(2 * l + 1, j) for l in range(N + 1)] for j in range(N + 1)])
    b = np.array([outer_derivative(k, j) for j in range(N + 1)])
    coef = np.linalg.solve(A, b)
    prof = DesingProfile(k, N, tuple(float(c) for c in coef))
    grid = np.linspace(-1.0, 1.0, int(round(2 / grid_step)) + 1)
    slope = prof.fprime(grid)
    if slope.min() <= 0:
        x = grid[int(slope.argmin())]
        raise ProfileError(f"f' is not positive on [-1, 1] (min {slope.min():.3g} at x = {x:.3f}); try a smaller match order")
    return prof


def moment(profile: DesingProfile, i: int, tol: float = 1e-13) -> float:
    """``I_i``: integral of ``f'(s) s^i`` over ``[-1, 1]``."""
    return integrate_adaptive(lambda s: profile.fprime(s) * s**i, -1.0, 1.0, tol)


def _orientable_flips(p: SurfacePresentation) -> dict[str, int]:
    orient = is_orientable(p)
    if not orient:
        raise ValueError("desingularised volume needs an orientable surface")
    return orient.flips


def _check_order(omega: BmForm, profile: DesingProfile, eps: float) -> None:
    if omega.m % 2:
        raise ValueError(f"desingularisation is defined for even orders only, got m = {omega.m}")
    if omega.m != 2 * profile.k:
        raise ValueError(f"profile is for m = {2 * profile.k}, form has m = {omega.m}")
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")


def desing_total_volume_closed(p: SurfacePresentation, omega: BmForm, eps: float, profile: DesingProfile) -> float:
    _check_order(omega, profile, eps)
    require_form(p, omega)
    flips = _orientable_flips(p)
    k = profile.k
    weights = {}
    for i in range(0, 2 * k, 2):
        e = i - 2 * k + 1
        weights[i] = 2.0 / e * (1 - eps**e) + eps**e * moment(profile, i)
    terms = [flips[f] * v for f, v in omega.volumes.items()]
    for c in p.curves:
        a = omega.periods[c.id]
        terms.append(flips[c.attachments[0][0]] * math.fsum(w * a[i] for i, w in weights.items()))
    return math.fsum(terms)


@dataclass
class DesingVolumeReport:
    closed_form: float
    numeric: float
    relative_error: float
    epsilon: float


def desing_total_volume_numeric(
    p: SurfacePresentation, omega: BmForm, eps: float, profile: DesingProfile, tol: float = 1e-12
) -> DesingVolumeReport:
    closed = desing_total_volume_closed(p, omega, eps, profile)
    flips = _orientable_flips(p)
    terms = [flips[f] * v for f, v in omega.volumes.items()]
    for c in p.curves:
        a = omega.periods[c.id]
        if not any(a):
            continue

        def density(x, a=a):
            x = np.asarray(x, dtype=float)
            return profile.fprime_eps(x, eps) * sum(ai * x**i for i, ai in enumerate(a))

        terms.append(flips[c.attachments[0][0]] * integrate_adaptive(density, -1.0, 1.0, tol, points=(-eps, eps)))
    numeric = math.fsum(terms)
    return DesingVolumeReport(closed, numeric, abs(closed - numeric) / (1 + abs(closed)), eps)


@dataclass
class ConvergenceRow:
    epsilon: float
    sup_norms: tuple[float, ...]  # derivative orders 0 .. 2k - 1


def convergence_report(k: int, profile: DesingProfile, eps_list: Sequence[float], h: float = 2.0**-12) -> list[ConvergenceRow]:
    """Sup norms over ``|x| <= 1/2`` of ``Pi_eps - Pi`` and its finite differences.

    ``Pi_eps = 1/f_eps'`` is the dual bivector density, ``Pi = x^2k``.
    """
    eps_list = list(eps_list)
    if any(not 0 < e < 1 for e in eps_list) or any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be strictly decreasing inside (0, 1)")
    n = int(round(0.5 / h))
    x = np.arange(-n, n + 1) * h
    rows = []
    for eps in eps_list:
        diff = 1.0 / profile.fprime_eps(x, eps) - x ** (2 * k)
        norms = []
        d = diff
        for order in range(2 * k):
            norms.append(float(np.abs(d).max()) / h**order)
            d = np.diff(d)
        rows.append(ConvergenceRow(eps, tuple(norms)))
    return rows


def is_monotone(rows: Sequence[ConvergenceRow]) -> bool:
    return all(
        later <= earlier for a, b in zip(rows, rows[1:]) for earlier, later in zip(a.sup_norms, b.sup_norms)
    )
