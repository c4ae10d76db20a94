"""Top-degree b^m-Nambu structures, described by their invariants.

Each component ``Z_j`` of the critical hypersurface carries ``m`` periods
``w[j][i]``; ``w[j][0]`` is the modular period and is normalised to be
positive by choosing the side and direction of ``Z_j``.  The topology of
``(M, Z)`` is an opaque label: equivalence is decided relative to it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .bgraph import canonical_label
from .decision import Decision
from .laurent import BmForm, require_form
from .surface import SurfacePresentation, ValidationReport, is_orientable


@dataclass(frozen=True)
class NambuComponent:
    id: str
    periods: tuple[float, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "periods", tuple(float(x) for x in self.periods))


@dataclass(frozen=True)
class NambuData:
    n: int
    m: int
    components: tuple[NambuComponent, ...]
    orientable: bool
    regularized_volume: float | None = None
    topology: str = ""

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    def component(self, cid: str) -> NambuComponent:
        for c in self.components:
            if c.id == cid:
                return c
        raise KeyError(cid)


def nambu_validate(d: NambuData) -> ValidationReport:
    report = ValidationReport()
    if d.n < 2:
        report.add("dimension", f"dimension must be at least 2, got {d.n}")
    if d.m < 1:
        report.add("order", f"order must be at least 1, got {d.m}")
    if d.m % 2 == 0 and not d.orientable:
        report.add("orientability", f"a b^{d.m}-Nambu structure of even order forces an orientable manifold")
    if d.orientable and d.regularized_volume is None:
        report.add("volume", "orientable data needs a regularized volume")
    if not d.orientable and d.regularized_volume is not None:
        report.add("volume", "non-orientable data carries no regularized volume")
    seen = set()
    for c in d.components:
        if c.id in seen:
            report.add("duplicate component", f"component {c.id!r} listed twice")
        seen.add(c.id)
        if len(c.periods) != d.m:
            report.add("period count", f"component {c.id!r}: expected {d.m} periods, got {len(c.periods)}")
        elif not c.periods[0] > 0:
            report.add("modular period", f"component {c.id!r}: modular period {c.periods[0]:.5g} is not positive")
    return report


def _require(d: NambuData, which: str) -> None:
    report = nambu_validate(d)
    if not report.ok:
        raise ValueError(f"{which} data is invalid: " + "; ".join(map(str, report.violations)))


def _normalise(a: Sequence[float], m: int, orientable: bool) -> tuple[float, ...]:
    if a[0] >= 0:
        return tuple(a)
    if orientable and m % 2:
        # side swap compatible with the orientation
        return tuple((-1) ** (m + i) * x for i, x in enumerate(a))
    return tuple(-x for x in a)


def from_surface(p: SurfacePresentation, omega: BmForm) -> NambuData:
    """The n = 2 specialisation: a surface form seen as Nambu data."""
    require_form(p, omega)
    orient = is_orientable(p)
    comps = []
    for c in p.curves:
        a = omega.periods[c.id]
        if orient:
            s = orient.flips[c.attachments[0][0]]
            a = tuple(s * x for x in a)
        comps.append(NambuComponent(c.id, _normalise(a, omega.m, bool(orient)), c.sided.value))
    volume = None
    if orient:
        from .laurent import regularized_volume

        volume = regularized_volume(p, omega)
    return NambuData(2, omega.m, comps, bool(orient), volume, canonical_label(p))


def _close(x: float, y: float, tol: float) -> bool:
    return math.isclose(x, y, rel_tol=tol, abs_tol=tol)


def _periods_match(w1, w2, m: int, flip: bool, tol: float) -> bool:
    if all(_close(x, y, tol) for x, y in zip(w1, w2)):
        return True
    return flip and all(_close(x, (-1) ** i * y, tol) for i, (x, y) in enumerate(zip(w1, w2)))


def nambu_equivalent(
    d1: NambuData,
    d2: NambuData,
    correspondence: Mapping[str, str] | None = None,
    allow_side_change: bool | None = None,
    tol: float = 1e-9,
) -> Decision:
    """Match components (all bijections, or the given one) by periods, plus volume if orientable.

    ``allow_side_change`` admits ``w_i -> (-1)^i w_i`` on a component, the
    effect of exchanging its sides while keeping ``w_0 > 0``.  By default it
    is allowed exactly when that exchange is orientation-compatible: even
    order, or a non-orientable manifold.
    """
    if (d1.n, d1.m) != (d2.n, d2.m):
        raise ValueError(f"(n, m) differ: {(d1.n, d1.m)} vs {(d2.n, d2.m)}")
    _require(d1, "first")
    _require(d2, "second")
    if d1.topology != d2.topology:
        return Decision.no(f"topology labels differ: {d1.topology!r} vs {d2.topology!r}")
    if d1.orientable != d2.orientable:
        return Decision.no("one manifold is orientable and the other is not")
    if len(d1.components) != len(d2.components):
        return Decision.no(f"component counts differ: {len(d1.components)} vs {len(d2.components)}")
    if d1.orientable and not _close(d1.regularized_volume, d2.regularized_volume, tol):
        return Decision.no(
            f"regularized volume differs: {d1.regularized_volume:.5g} vs {d2.regularized_volume:.5g}"
        )
    flip = (d1.m % 2 == 0 or not d1.orientable) if allow_side_change is None else allow_side_change
    m = d1.m
    if correspondence is not None:
        for a, b in correspondence.items():
            w1, w2 = d1.component(a), d2.component(b)
            if w1.label != w2.label or not _periods_match(w1.periods, w2.periods, m, flip, tol):
                return Decision.no(f"component {a} does not match {b} under the given correspondence")
        return Decision(True, dict(correspondence))
    c1, c2 = d1.components, d2.components
    used = [False] * len(c2)
    chosen: dict[str, str] = {}

    def search(k: int) -> bool:
        if k == len(c1):
            return True
        for j, b in enumerate(c2):
            if used[j] or b.label != c1[k].label or not _periods_match(c1[k].periods, b.periods, m, flip, tol):
                continue
            used[j] = True
            chosen[c1[k].id] = b.id
            if search(k + 1):
                return True
            used[j] = False
            del chosen[c1[k].id]
        return False

    if search(0):
        return Decision(True, dict(chosen))
    for a in c1:
        if not any(a.label == b.label and _periods_match(a.periods, b.periods, m, flip, tol) for b in c2):
            w = ", ".join(f"{x:.5g}" for x in a.periods)
            return Decision.no(f"component {a.id} (periods {w}) has no partner")
    return Decision.no("no bijection of components matches all period vectors")


@dataclass(frozen=True)
class NambuElement:
    """A symmetry acting on components: permutation with side, direction and orientation signs."""

    components: Mapping[str, str]
    t: Mapping[str, int]
    u: Mapping[str, int]
    sigma: int = 1
    name: str = ""


def nambu_pullback(d: NambuData, g: NambuElement) -> NambuData:
    m = d.m
    comps = []
    for c in d.components:
        src = d.component(g.components[c.id])
        t, u = g.t[c.id], g.u[c.id]
        comps.append(NambuComponent(c.id, tuple(t ** (m + i + 1) * u * x for i, x in enumerate(src.periods)), c.label))
    vol = None if d.regularized_volume is None else g.sigma * d.regularized_volume
    return NambuData(d.n, d.m, comps, d.orientable, vol, d.topology)


def _mean(xs: list[float]) -> float:
    if all(x == xs[0] for x in xs):
        return xs[0]
    return math.fsum(xs) / len(xs)


def nambu_average(d: NambuData, G: Sequence[NambuElement]) -> NambuData:
    """Uniform average over the elements; check with :func:`nambu_validate` afterwards."""
    pulled = [nambu_pullback(d, g) for g in G]
    comps = []
    for k, c in enumerate(d.components):
        periods = tuple(_mean([q.components[k].periods[i] for q in pulled]) for i in range(d.m))
        comps.append(NambuComponent(c.id, periods, c.label))
    vol = None
    if d.regularized_volume is not None:
        vol = _mean([q.regularized_volume for q in pulled])
    return NambuData(d.n, d.m, comps, d.orientable, vol, d.topology)
