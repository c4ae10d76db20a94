"""Built-in surfaces, forms and actions from the classical examples.

Tube coordinates follow the height function on the sphere and the
``y`` (resp. ``x``) coordinate on the torus, so the reference orientations
below are the standard ones and every gluing sign is +1 unless stated.
"""
from __future__ import annotations

import math

from .surface import CoveredSurface, Curve, Face, SurfaceMap, SurfacePresentation

TWO_PI = 2 * math.pi


def sphere_equator() -> SurfacePresentation:
    """Sphere cut along the equator {h = 0}; north hemisphere is the positive side."""
    return SurfacePresentation(
        [Face("N", 1, ["n"]), Face("S", 1, ["s"])],
        [Curve("eq", "two", [("N", "n"), ("S", "s")], 1)],
        2,
        True,
    )


def sphere_two_circles() -> SurfacePresentation:
    """Sphere cut along {h = h0} and {h = -h0}: caps N, S and the band B between them."""
    return SurfacePresentation(
        [Face("N", 1, ["n"]), Face("B", 0, ["b1", "b2"]), Face("S", 1, ["s"])],
        [Curve("zp", "two", [("N", "n"), ("B", "b1")], 1), Curve("zm", "two", [("B", "b2"), ("S", "s")], 1)],
        2,
        True,
    )


def torus_two_curves() -> SurfacePresentation:
    """Torus cut along {y = 0} and {y = 1/2}; A = {0 < y < 1/2}, B = {1/2 < y < 1}."""
    return SurfacePresentation(
        [Face("A", 0, ["a0", "a1"]), Face("B", 0, ["b0", "b1"])],
        [Curve("z0", "two", [("A", "a0"), ("B", "b0")], 1), Curve("z1", "two", [("B", "b1"), ("A", "a1")], 1)],
        0,
        True,
    )


def torus_one_curve() -> SurfacePresentation:
    """Torus cut along a single meridian: one annulus meeting the curve from both sides."""
    return SurfacePresentation(
        [Face("A", 0, ["a0", "a1"])],
        [Curve("z", "two", [("A", "a0"), ("A", "a1")], 1)],
        0,
        True,
    )


def torus_four_curves() -> SurfacePresentation:
    """Torus cut along {x = 1/4}, {x = 1/2}, {x = 3/4}, {x = 0}; z_i is the right end of A_i."""
    faces = [Face(f"A{i}", 0, [f"l{i}", f"r{i}"]) for i in range(4)]
    curves = [Curve(f"z{i}", "two", [(f"A{i}", f"r{i}"), (f"A{(i + 1) % 4}", f"l{(i + 1) % 4}")], 1) for i in range(4)]
    return SurfacePresentation(faces, curves, 0, True)


def rp2_equator() -> SurfacePresentation:
    """Projective plane with the image of the equator, a one-sided curve bounding one disk."""
    return SurfacePresentation([Face("D", 1, ["d"])], [Curve("eq", "one", [("D", "d")])], 1, False)


def klein_two_curves() -> SurfacePresentation:
    """Klein bottle as the quotient of the torus by (x, y) -> (1 - x, y + 1/2).

    The curves {x = 0} and {x = 1/2} are each mapped to themselves with their
    sides exchanged, so both become one-sided; the two annuli become one.
    """
    return SurfacePresentation(
        [Face("A", 0, ["a0", "a1"])],
        [Curve("z0", "one", [("A", "a0")]), Curve("z1", "one", [("A", "a1")])],
        0,
        False,
    )


def klein_signed_cycle() -> SurfacePresentation:
    """Klein bottle as two annuli glued along two two-sided curves, one of them orientation-reversing."""
    return SurfacePresentation(
        [Face("A", 0, ["a0", "a1"]), Face("B", 0, ["b0", "b1"])],
        [Curve("z0", "two", [("A", "a0"), ("B", "b0")], 1), Curve("z1", "two", [("B", "b1"), ("A", "a1")], -1)],
        0,
        False,
    )


def antipodal_map() -> SurfaceMap:
    """(h, theta) -> (-h, theta + pi) on :func:`sphere_equator`."""
    return SurfaceMap({"N": "S", "S": "N"}, {"eq": "eq"}, {"eq": -1}, {"eq": 1}, {"N": -1, "S": -1}, "antipodal")


def antipodal_two_circles() -> SurfaceMap:
    """(h, theta) -> (-h, theta + pi) on :func:`sphere_two_circles`."""
    return SurfaceMap(
        {"N": "S", "B": "B", "S": "N"},
        {"zp": "zm", "zm": "zp"},
        {"zp": -1, "zm": -1},
        {"zp": 1, "zm": 1},
        {"N": -1, "B": -1, "S": -1},
        "antipodal",
    )


def rp2_translated() -> CoveredSurface:
    """Projective plane with the critical circle pushed off the equator.

    Downstairs the complement is a disk and a Moebius band, so the surface is
    given by its cover: the sphere with two parallel circles and the antipodal map.
    """
    return CoveredSurface(sphere_two_circles(), antipodal_two_circles())


def klein_action() -> SurfaceMap:
    """(x, y) -> (1 - x, y + 1/2) on the torus cut along {x = 0} and {x = 1/2}."""
    return SurfaceMap(
        {"A": "B", "B": "A"},
        {"z0": "z0", "z1": "z1"},
        {"z0": -1, "z1": -1},
        {"z0": 1, "z1": 1},
        {"A": -1, "B": -1},
        "klein",
    )


def half_turn() -> SurfaceMap:
    """(x, y) -> (1/2 - x, -y) on :func:`torus_four_curves`: fixes z0 and z2, swaps z1 and z3."""
    curves = {"z0": "z0", "z1": "z3", "z2": "z2", "z3": "z1"}
    return SurfaceMap(
        {"A0": "A1", "A1": "A0", "A2": "A3", "A3": "A2"},
        curves,
        {c: -1 for c in curves},
        {c: -1 for c in curves},
        {f"A{i}": 1 for i in range(4)},
        "half-turn",
    )


SURFACES = {
    "sphere_equator": sphere_equator,
    "sphere_two_circles": sphere_two_circles,
    "torus_two_curves": torus_two_curves,
    "torus_one_curve": torus_one_curve,
    "torus_four_curves": torus_four_curves,
    "rp2_equator": rp2_equator,
    "rp2_translated": rp2_translated,
    "klein_two_curves": klein_two_curves,
    "klein_signed_cycle": klein_signed_cycle,
}

# (surface, order, expected existence) for the classical table.
EXISTENCE_TABLE = [
    ("sphere_equator", 3, True),
    *[("torus_two_curves", m, True) for m in range(1, 7)],
    ("torus_one_curve", 3, False),
    ("rp2_equator", 2, False),
    ("rp2_equator", 3, True),
    ("rp2_translated", 3, False),
    ("klein_two_curves", 3, True),
    ("klein_two_curves", 2, False),
]


def sphere_form(m: int, periods=None, volumes=(0.0, 0.0)):
    """``dh / h^m ^ dtheta`` on the equator sphere, optionally with other periods."""
    from .laurent import BmForm

    a = list(periods) if periods is not None else [TWO_PI] + [0.0] * (m - 1)
    return BmForm(m, {"eq": a}, {"N": volumes[0], "S": volumes[1]})


def torus_form(m: int) -> "BmForm":
    """``dx / sin(2 pi x)^m ^ dy`` up to normalisation, on :func:`torus_two_curves`.

    Near {x = 1/2} the sine changes sign, hence the ``(-1)^m`` on the second curve.
    """
    from .laurent import BmForm

    tail = [0.0] * (m - 1)
    return BmForm(m, {"z0": [TWO_PI] + tail, "z1": [(-1) ** m * TWO_PI] + tail}, {"A": 0.0, "B": 0.0})


def omega_pair():
    """The two b^2-forms ``dh/h^2 ^ dtheta`` and ``(1/h + 1/h^2) dh ^ dtheta`` on the sphere."""
    return sphere_form(2, [TWO_PI, 0.0]), sphere_form(2, [TWO_PI, TWO_PI])


def orbit_pair():
    """Two half-turn invariant m = 2 forms, equivalent only by a map that does not commute with it."""
    from .laurent import BmForm

    def form(fixed, moved):
        a = {"z0": fixed, "z1": moved, "z2": fixed, "z3": moved}
        return BmForm(2, {c: [x, 0.0] for c, x in a.items()}, {f"A{i}": 0.0 for i in range(4)})

    return form(TWO_PI, 2 * TWO_PI), form(2 * TWO_PI, TWO_PI)


ACTIONS = {
    "antipodal": ("sphere_equator", antipodal_map),
    "antipodal_two_circles": ("sphere_two_circles", antipodal_two_circles),
    "klein": ("torus_two_curves", klein_action),
    "half_turn": ("torus_four_curves", half_turn),
}


def get_surface(name: str):
    try:
        return SURFACES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(sorted(SURFACES))}") from None
