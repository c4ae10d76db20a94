"""b^m-forms on surface presentations, stored as Laurent periods and face volumes.

A form is recorded by the periods ``a[c][i]`` (the integral over curve ``c``
of the i-th Laurent coefficient, in the tube coordinates of ``c``) and one
real ``v[F]`` per face (the smooth part of the volume, signed by the face's
reference orientation).  Periods and the regularised volume are complete
invariants on orientable surfaces, so nothing pointwise is kept.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .bgraph import build_graph, canonical_label, deck_inverting_colorings, exists_bm, presentation_isomorphisms
from .decision import Decision, NoStructureError
from .quadrature import finite_part_power
from .surface import (
    CoveredSurface,
    DoubleCover,
    PresentationError,
    SurfaceMap,
    SurfacePresentation,
    ValidationReport,
    flip_face,
    is_orientable,
    orientation_double_cover,
    require_valid,
)

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class BmForm:
    m: int
    periods: Mapping[str, tuple[float, ...]]
    volumes: Mapping[str, float]

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"order m must be a positive integer, got {self.m!r}")
        periods = {c: tuple(float(x) for x in a) for c, a in self.periods.items()}
        for c, a in periods.items():
            if len(a) != self.m:
                raise ValueError(f"curve {c!r}: expected {self.m} periods, got {len(a)}")
        object.__setattr__(self, "periods", periods)
        object.__setattr__(self, "volumes", {f: float(v) for f, v in self.volumes.items()})

    def replace(self, periods=None, volumes=None) -> "BmForm":
        return BmForm(self.m, self.periods if periods is None else periods, self.volumes if volumes is None else volumes)


def _sign(x: float) -> int:
    return 1 if x > 0 else -1 if x < 0 else 0


def _check_ids(p: SurfacePresentation, omega: BmForm) -> None:
    if set(omega.periods) != set(p.curve_ids):
        raise PresentationError(
            f"form curves {sorted(omega.periods)} do not match presentation curves {sorted(p.curve_ids)}"
        )
    if set(omega.volumes) != set(p.face_ids):
        raise PresentationError(f"form faces {sorted(omega.volumes)} do not match presentation faces {sorted(p.face_ids)}")


def _derived_signs(p: SurfacePresentation, omega: BmForm) -> dict[str, list[tuple[int, str]]]:
    """Per face, the orientation signs forced by the leading periods, with their source."""
    m = omega.m
    out: dict[str, list[tuple[int, str]]] = {f: [] for f in p.face_ids}
    for c in p.curves:
        s0 = _sign(omega.periods[c.id][0])
        if not s0:
            continue
        if c.two_sided:
            for j, (f, _) in enumerate(c.attachments):
                sign = s0 if j == 0 else (-1) ** m * c.gluing_sign * s0
                out[f].append((sign, f"curve {c.id!r} side {j}"))
        else:
            out[c.attachments[0][0]].append((s0, f"curve {c.id!r}"))
    return out


def check_form(p: SurfacePresentation, omega: BmForm) -> ValidationReport:
    """Nondegeneracy along every curve and sign compatibility across every curve."""
    require_valid(p)
    _check_ids(p, omega)
    report = ValidationReport()
    m = omega.m
    for c in p.curves:
        a = omega.periods[c.id]
        if a[0] == 0:
            report.add("nondegeneracy", f"curve {c.id!r}: leading period a_0 is 0")
        if not c.two_sided:
            if m % 2 == 0:
                report.add("sign compatibility", f"one-sided curve {c.id!r} cannot carry an even-order singularity")
            twisted = [i for i in range(m) if (i - m) % 2 == 0 and a[i] != 0]
            if twisted:
                report.add(
                    "sign compatibility",
                    f"one-sided curve {c.id!r}: periods at indices {twisted} change sign around the curve and must vanish",
                )
    for f, signs in _derived_signs(p, omega).items():
        if len({s for s, _ in signs}) > 1:
            plus = [src for s, src in signs if s > 0]
            minus = [src for s, src in signs if s < 0]
            report.add(
                "sign compatibility",
                f"face {f!r} is positive from {', '.join(plus)} but negative from {', '.join(minus)}",
            )
            continue
        v = omega.volumes[f]
        if signs and v and _sign(v) != signs[0][0]:
            report.add(
                "sign compatibility",
                f"face {f!r}: volume {v:.5g} has the wrong sign for {signs[0][1]}",
            )
        if not signs and not v:
            report.add("nondegeneracy", f"face {f!r} gets no sign from a nondegenerate curve and has zero volume")
    return report


def require_form(p: SurfacePresentation, omega: BmForm) -> None:
    report = check_form(p, omega)
    if not report.ok:
        raise PresentationError("invalid form: " + "; ".join(map(str, report.violations)))


def face_signs(p: SurfacePresentation, omega: BmForm) -> dict[str, int]:
    """Sign of the form on each face relative to its reference orientation."""
    out = {}
    for f, signs in _derived_signs(p, omega).items():
        out[f] = signs[0][0] if signs else _sign(omega.volumes[f])
    return out


def pull_back(omega: BmForm, g: SurfaceMap) -> BmForm:
    """``g^* omega``; ``g`` maps the presentation of the result onto that of ``omega``.

    With ``x -> t x`` and ``theta -> u theta``, ``dx/x^m ^ x^i dtheta`` picks
    up ``t^(m + i + 1) u``.
    """
    m = omega.m
    try:
        periods = {
            c: tuple(g.t[c] ** (m + i + 1) * g.u[c] * x for i, x in enumerate(omega.periods[d]))
            for c, d in g.curves.items()
        }
        volumes = {f: g.sigma[f] * omega.volumes[h] for f, h in g.faces.items()}
    except KeyError as exc:
        raise PresentationError(f"map and form disagree on id {exc.args[0]!r}") from None
    return BmForm(m, periods, volumes)


def flip_face_form(p: SurfacePresentation, omega: BmForm, face_id: str) -> tuple[SurfacePresentation, BmForm]:
    """Same form, described after reversing the reference orientation of ``face_id``."""
    q = flip_face(p, face_id)
    periods = dict(omega.periods)
    for c in p.curves:
        if c.attachments[0][0] == face_id:
            periods[c.id] = tuple(-x for x in omega.periods[c.id])
    volumes = dict(omega.volumes)
    volumes[face_id] = -volumes[face_id]
    return q, omega.replace(periods, volumes)


def lift_form(cover: DoubleCover, omega: BmForm) -> BmForm:
    """Pull a base form back to the orientation double cover."""
    base = cover.base
    periods, volumes = {}, {}
    for f in base.faces:
        volumes[f"{f.id}+"] = omega.volumes[f.id]
        volumes[f"{f.id}-"] = -omega.volumes[f.id]
    for c in base.curves:
        a = omega.periods[c.id]
        if c.two_sided:
            periods[f"{c.id}+"] = a
            periods[f"{c.id}-"] = tuple(-x for x in a)
        else:
            periods[f"{c.id}~"] = tuple(0.0 if (i - omega.m) % 2 == 0 else 2 * x for i, x in enumerate(a))
    return BmForm(omega.m, periods, volumes)


def push_form(cover: DoubleCover, omega: BmForm) -> BmForm:
    """Base data of a deck-invariant cover form (left inverse of :func:`lift_form`)."""
    base = cover.base
    periods = {}
    for c in base.curves:
        if c.two_sided:
            periods[c.id] = omega.periods[f"{c.id}+"]
        else:
            periods[c.id] = tuple(x / 2 for x in omega.periods[f"{c.id}~"])
    return BmForm(omega.m, periods, {f.id: omega.volumes[f"{f.id}+"] for f in base.faces})


def _coherent(p: SurfacePresentation) -> dict[str, int]:
    orient = is_orientable(p)
    if not orient:
        raise ValueError("regularised volume is only defined on orientable surfaces")
    return orient.flips


def curve_finite_part(a, m: int) -> float:
    return math.fsum(finite_part_power(i, m) * x for i, x in enumerate(a))


def component_volumes(p: SurfacePresentation, omega: BmForm, flips: Mapping[str, int] | None = None) -> list[float]:
    """Regularised volume of each connected component, in the order of ``p.components()``.

    ``flips`` defaults to the coherent orientation that keeps the first face
    of each component.
    """
    flips = _coherent(p) if flips is None else flips
    out = []
    for comp in p.components():
        faces = set(comp)
        terms = [flips[f] * omega.volumes[f] for f in comp]
        for c in p.curves:
            f0 = c.attachments[0][0]
            if f0 in faces:
                terms.append(flips[f0] * curve_finite_part(omega.periods[c.id], omega.m))
        out.append(math.fsum(terms))
    return out


def regularized_volume(p: SurfacePresentation, omega: BmForm) -> float:
    return math.fsum(component_volumes(p, omega))


@dataclass
class InvariantVector:
    topology: str
    periods: dict[str, tuple[float, ...]]
    modular_periods: dict[str, float]
    regularized_volume: float | None

    def as_dict(self) -> dict:
        return {
            "topology": self.topology,
            "periods": {c: list(a) for c, a in sorted(self.periods.items())},
            "modular_periods": dict(sorted(self.modular_periods.items())),
            "regularized_volume": self.regularized_volume,
        }


def invariants(p: SurfacePresentation, omega: BmForm) -> InvariantVector:
    require_form(p, omega)
    volume = regularized_volume(p, omega) if is_orientable(p) else None
    return InvariantVector(
        canonical_label(p),
        dict(omega.periods),
        {c: a[0] for c, a in omega.periods.items()},
        volume,
    )


@dataclass
class ClassVector:
    volume: float | None
    periods: dict[str, tuple[float, ...]]
    component_volumes: list[float] = field(default_factory=list)


def cohomology_class(p: SurfacePresentation, omega: BmForm) -> ClassVector:
    require_form(p, omega)
    if is_orientable(p):
        comps = component_volumes(p, omega)
        return ClassVector(math.fsum(comps), dict(omega.periods), comps)
    return ClassVector(None, dict(omega.periods), [])


def _witness(p: SurfacePresentation, m: int, colors: Mapping[str, int], weight: Mapping[str, float]) -> BmForm:
    flips = _coherent(p)
    eps = {f: colors[f] * flips[f] for f in p.face_ids}
    tail = (0.0,) * (m - 1)
    periods = {c.id: (eps[c.attachments[0][0]] * weight.get(c.id, TWO_PI),) + tail for c in p.curves}
    return BmForm(m, periods, {f: float(e) for f, e in eps.items()})


def construct_form(p: SurfacePresentation | CoveredSurface, m: int) -> BmForm:
    """A witness form with ``|a_0| = 2 pi``, ``|v_F| = 1`` and vanishing higher periods.

    Odd orders colour the graph properly (first face positive); even orders
    use the constant colouring.  A non-orientable surface gets a
    deck-invariant witness on its orientation cover, pushed down to base
    data; a :class:`CoveredSurface` gets the invariant cover witness itself.
    """
    decision = exists_bm(p, m)
    if not decision:
        raise NoStructureError(decision)
    if isinstance(p, CoveredSurface):
        return _witness(p.cover, m, decision.witness["cover_colors"], {})
    if "colors" in decision.witness:
        return _witness(p, m, decision.witness["colors"], {})
    dc = orientation_double_cover(p)
    # lifts of one-sided curves carry twice the base period
    weight = {f"{c.id}~": 2 * TWO_PI for c in p.curves if not c.two_sided}
    upstairs = _witness(dc.cover, m, decision.witness["cover_colors"], weight)
    from .actions import FiniteAction, average

    upstairs = average(upstairs, FiniteAction([SurfaceMap.identity(dc.cover), dc.deck]))
    return push_form(dc, upstairs)


def _isclose(x: float, y: float, tol: float) -> bool:
    return math.isclose(x, y, rel_tol=tol, abs_tol=tol)


def first_mismatch(a: BmForm, b: BmForm, tol: float, curves=None, rename=None) -> str | None:
    """Reason two forms on the same presentation have different periods, or None."""
    for c in sorted(a.periods) if curves is None else curves:
        for i, (x, y) in enumerate(zip(a.periods[c], b.periods[c])):
            if not _isclose(x, y, tol):
                name = rename(c) if rename else c
                return f"curve {name}: period index {i} differs: {x:.5g} vs {y:.5g}"
    return None


def equivalent(
    p1: SurfacePresentation,
    omega1: BmForm,
    p2: SurfacePresentation,
    omega2: BmForm,
    allow_orientation_reversal: bool = False,
    tol: float = 1e-9,
) -> Decision:
    """Is there a diffeomorphism of the pairs carrying ``omega1`` to ``omega2`` up to cohomology?

    Orientable: some combinatorial isomorphism matches every period and the
    regularised volume of every component (orientation-preserving unless
    ``allow_orientation_reversal``).  Non-orientable: forms are lifted to the
    orientation covers and matched by isomorphisms commuting with the decks.
    """
    if omega1.m != omega2.m:
        raise ValueError(f"orders differ: m = {omega1.m} vs m = {omega2.m}")
    require_form(p1, omega1)
    require_form(p2, omega2)
    o1, o2 = is_orientable(p1), is_orientable(p2)
    if bool(o1) != bool(o2):
        return Decision.no("one surface is orientable and the other is not")
    if o1:
        return _equivalent_orientable(p1, omega1, p2, omega2, o1.flips, o2.flips, allow_orientation_reversal, tol)
    return _equivalent_cover(p1, omega1, p2, omega2, tol)


def _equivalent_orientable(p1, omega1, p2, omega2, c1, c2, allow_reversal, tol) -> Decision:
    vol1 = component_volumes(p1, omega1, c1)
    comps = p1.components()
    tried, skipped, reason = 0, 0, None
    for phi in presentation_isomorphisms(p1, p2):
        delta = [phi.sigma[comp[0]] * c1[comp[0]] * c2[phi.faces[comp[0]]] for comp in comps]
        if not allow_reversal and any(d < 0 for d in delta):
            skipped += 1
            continue
        tried += 1
        pulled = pull_back(omega2, phi)
        why = first_mismatch(omega1, pulled, tol)
        if why is None:
            vol2 = component_volumes(p1, pulled, c1)
            for k, (x, y) in enumerate(zip(vol1, vol2)):
                if not _isclose(x, y, tol):
                    why = f"component {k} (face {comps[k][0]}): regularized volume differs: {x:.5g} vs {y:.5g}"
                    break
        if why is None:
            return Decision(True, phi, "", {"candidates": tried, "reversing_skipped": skipped})
        reason = reason or why
    if reason is None:
        if skipped:
            reason = "surfaces are only related by orientation-reversing maps"
        else:
            reason = "no isomorphism between the curve configurations"
    return Decision.no(reason, candidates=tried, reversing_skipped=skipped)


def _equivalent_cover(p1, omega1, p2, omega2, tol) -> Decision:
    d1, d2 = orientation_double_cover(p1), orientation_double_cover(p2)
    w1, w2 = lift_form(d1, omega1), lift_form(d2, omega2)
    tried, reason = 0, None
    for phi in presentation_isomorphisms(d1.cover, d2.cover):
        if any(s != 1 for s in phi.sigma.values()):
            continue
        if phi.compose(d1.deck) != d2.deck.compose(phi):
            continue
        tried += 1
        why = first_mismatch(w1, pull_back(w2, phi), tol, rename=lambda c: c.rstrip("+-~"))
        if why is None:
            return Decision(True, phi, "", {"candidates": tried, "route": "orientation cover"})
        reason = reason or why
    return Decision.no(reason or "no deck-compatible isomorphism between the covers", candidates=tried)
