"""Finite groups acting on presentations and on forms."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .bgraph import presentation_isomorphisms
from .decision import Decision
from .laurent import BmForm, _isclose, component_volumes, first_mismatch, pull_back, require_form
from .surface import PresentationError, SurfaceMap, SurfacePresentation, check_map, is_orientable


class ActionError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteAction:
    elements: tuple[SurfaceMap, ...]

    def __init__(self, elements: Sequence[SurfaceMap]):
        object.__setattr__(self, "elements", tuple(elements))

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def table_problems(G: FiniteAction, p: SurfacePresentation | None = None) -> list[str]:
    """Closure, identity and (given ``p``) well-definedness of every element."""
    problems = []
    if not G.elements:
        return ["action has no elements"]
    members = set(G.elements)
    if len(members) != len(G.elements):
        problems.append("action lists an element twice")
    if not any(g.is_identity() for g in G):
        problems.append("action has no identity element")
    if p is not None:
        for g in G:
            for why in check_map(p, p, g):
                problems.append(f"element {g.name or '?'}: {why}")
        if problems:
            return problems
    for g in G:
        for h in G:
            try:
                gh = g.compose(h)
            except KeyError as exc:
                return problems + [f"elements {g.name!r} and {h.name!r} act on different ids ({exc.args[0]!r})"]
            if gh not in members:
                problems.append(f"{g.name or '?'} o {h.name or '?'} is not in the action")
    return problems


def require_action(G: FiniteAction, p: SurfacePresentation | None = None) -> None:
    problems = table_problems(G, p)
    if problems:
        raise ActionError("invalid action: " + "; ".join(problems))


def pullback(omega: BmForm, g: SurfaceMap) -> BmForm:
    return pull_back(omega, g)


@dataclass
class Invariance:
    invariant: bool
    element: SurfaceMap | None = None
    coordinate: str = ""

    def __bool__(self):
        return self.invariant


def is_invariant(omega: BmForm, G: FiniteAction) -> Invariance:
    """Exact comparison of ``g^* omega`` with ``omega`` for every element."""
    for g in G:
        pulled = pullback(omega, g)
        for c in sorted(omega.periods):
            for i, (x, y) in enumerate(zip(omega.periods[c], pulled.periods[c])):
                if x != y:
                    return Invariance(False, g, f"curve {c} period {i}: {x:.5g} pulls back to {y:.5g}")
        for f in sorted(omega.volumes):
            if omega.volumes[f] != pulled.volumes[f]:
                return Invariance(
                    False, g, f"face {f} volume: {omega.volumes[f]:.5g} pulls back to {pulled.volumes[f]:.5g}"
                )
    return Invariance(True)


def _mean(xs: list[float]) -> float:
    if all(x == xs[0] for x in xs):
        return xs[0]
    return math.fsum(xs) / len(xs)


def average(omega: BmForm, G: FiniteAction) -> BmForm:
    """Uniform average of the pullbacks; may be degenerate, which check_form reports."""
    pulled = [pullback(omega, g) for g in G]
    periods = {
        c: tuple(_mean([q.periods[c][i] for q in pulled]) for i in range(omega.m)) for c in omega.periods
    }
    volumes = {f: _mean([q.volumes[f] for q in pulled]) for f in omega.volumes}
    return BmForm(omega.m, periods, volumes)


def deck_group(p: SurfacePresentation, deck: SurfaceMap) -> FiniteAction:
    return FiniteAction([SurfaceMap.identity(p), deck])


def equivariantly_equivalent(
    p: SurfacePresentation,
    omega1: BmForm,
    omega2: BmForm,
    G: FiniteAction,
    allow_orientation_reversal: bool = False,
    tol: float = 1e-9,
) -> Decision:
    """Equivalence of two ``G``-invariant forms on ``p`` by a self-map commuting with ``G``."""
    if omega1.m != omega2.m:
        raise ValueError(f"orders differ: m = {omega1.m} vs m = {omega2.m}")
    require_action(G, p)
    for name, w in (("first", omega1), ("second", omega2)):
        require_form(p, w)
        inv = is_invariant(w, G)
        if not inv:
            raise ActionError(f"{name} form is not invariant under {inv.element.name or 'an element'}: {inv.coordinate}")
    orient = is_orientable(p)
    comps = p.components()
    vol1 = component_volumes(p, omega1) if orient else []
    tried, commuting, reason = 0, 0, None
    for phi in presentation_isomorphisms(p, p):
        tried += 1
        if any(phi.compose(g) != g.compose(phi) for g in G):
            continue
        if orient and not allow_orientation_reversal:
            c = orient.flips
            if any(phi.sigma[k[0]] * c[k[0]] * c[phi.faces[k[0]]] < 0 for k in comps):
                continue
        commuting += 1
        pulled = pull_back(omega2, phi)
        why = first_mismatch(omega1, pulled, tol)
        if why is None and orient:
            for k, (x, y) in enumerate(zip(vol1, component_volumes(p, pulled))):
                if not _isclose(x, y, tol):
                    why = f"component {k}: regularized volume differs: {x:.5g} vs {y:.5g}"
                    break
        if why is None:
            return Decision(True, phi, "", {"candidates": tried, "commuting": commuting})
        reason = reason or why
    if not commuting:
        reason = "no self-map of the presentation commutes with the action"
    elif reason and not reason.startswith("no "):
        reason = f"every matching commuting with the action fails ({reason})"
    return Decision.no(reason, candidates=tried, commuting=commuting)


def check_acts_on(G: FiniteAction, p: SurfacePresentation) -> None:
    for g in G:
        problems = check_map(p, p, g)
        if problems:
            raise PresentationError(f"element {g.name!r} does not act on the presentation: {problems[0]}")
