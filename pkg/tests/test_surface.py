from __future__ import annotations

import random

import pytest

from bmsurfaces import fixtures as F
from bmsurfaces.surface import (
    Curve,
    Face,
    PresentationError,
    SurfaceMap,
    SurfacePresentation,
    check_map,
    disjoint_union,
    flip_face,
    involution_problems,
    is_orientable,
    orientation_double_cover,
    require_valid,
    validate,
)
from helpers import brute_force_orientable, random_presentation

PLAIN = [n for n in F.SURFACES if n != "rp2_translated"]


@pytest.mark.parametrize("name", PLAIN)
def test_fixtures_validate(name):
    assert validate(F.get_surface(name)).ok


def test_dangling_attachment_reported():
    p = SurfacePresentation([Face("N", 1, ["n"])], [Curve("eq", "two", [("N", "n"), ("X", "s")], 1)], 1)
    assert "dangling attachment" in validate(p).codes()
    with pytest.raises(PresentationError):
        require_valid(p)


def test_euler_mismatch_and_face_topology():
    p = SurfacePresentation(
        [Face("N", 1, ["n"]), Face("S", 1, ["s"])], [Curve("eq", "two", [("N", "n"), ("S", "s")], 1)], 0
    )
    assert validate(p).codes() == ["euler mismatch"]
    # a disk cannot have two boundary circles
    q = SurfacePresentation([Face("D", 1, ["a", "b"])], [Curve("z", "two", [("D", "a"), ("D", "b")], 1)], 1)
    assert "face topology" in validate(q).codes()


def test_unused_slot_and_double_use():
    p = SurfacePresentation(
        [Face("A", 0, ["a0", "a1"]), Face("B", 1, ["b"])],
        [Curve("z", "two", [("A", "a0"), ("B", "b")], 1)],
        1,
    )
    assert "slot matching" in validate(p).codes()
    q = SurfacePresentation(
        [Face("N", 1, ["n"]), Face("S", 1, ["s"])],
        [Curve("z1", "two", [("N", "n"), ("S", "s")], 1), Curve("z2", "two", [("N", "n"), ("S", "s")], 1)],
        2,
    )
    assert "duplicate slot" in validate(q).codes() or "slot matching" in validate(q).codes()


def test_attachment_count_and_sign():
    bad = SurfacePresentation([Face("D", 1, ["d"])], [Curve("eq", "one", [("D", "d"), ("D", "d")])], 1)
    assert "attachment count" in validate(bad).codes()
    bad2 = SurfacePresentation(
        [Face("N", 1, ["n"]), Face("S", 1, ["s"])], [Curve("eq", "two", [("N", "n"), ("S", "s")], 2)], 2
    )
    assert "gluing sign" in validate(bad2).codes()


def test_declared_orientability_checked():
    p = F.rp2_equator()
    q = SurfacePresentation(p.faces, p.curves, p.euler_char, True)
    assert "orientability mismatch" in validate(q).codes()


@pytest.mark.parametrize(
    "name, expected",
    [
        ("sphere_equator", True),
        ("torus_two_curves", True),
        ("torus_one_curve", True),
        ("rp2_equator", False),
        ("klein_two_curves", False),
        ("klein_signed_cycle", False),
    ],
)
def test_orientability_fixtures(name, expected):
    assert bool(is_orientable(F.get_surface(name))) is expected


def test_odd_sign_cycle_obstruction_is_the_cycle():
    o = is_orientable(F.klein_signed_cycle())
    assert not o
    assert set(o.obstruction) == {"z0", "z1"}


def test_orientability_matches_brute_force():
    rng = random.Random(7)
    for _ in range(300):
        p = random_presentation(rng, rng.randint(1, 5), rng.randint(0, 6), rng.choice([0, 0, 1]), signs=(1, -1))
        o = is_orientable(p)
        assert bool(o) == brute_force_orientable(p)
        if o:
            flips = o.flips
            for c in p.curves:
                (f1, _), (f2, _) = c.attachments
                assert flips[f1] * c.gluing_sign * flips[f2] == 1


def test_flip_face_preserves_orientability():
    rng = random.Random(3)
    for _ in range(100):
        p = random_presentation(rng, rng.randint(1, 4), rng.randint(0, 5), signs=(1, -1))
        f = rng.choice(p.face_ids)
        assert bool(is_orientable(flip_face(p, f))) == bool(is_orientable(p))


def test_map_composition_and_inverse():
    p = F.sphere_equator()
    a = F.antipodal_map()
    assert check_map(p, p, a) == []
    assert a.compose(a).is_identity()
    assert a.inverse() == a
    ident = SurfaceMap.identity(p)
    assert ident.compose(a) == a and a.compose(ident) == a


def test_check_map_rejects_bad_signs():
    p = F.sphere_equator()
    bad = SurfaceMap({"N": "S", "S": "N"}, {"eq": "eq"}, {"eq": -1}, {"eq": 1}, {"N": 1, "S": 1})
    assert check_map(p, p, bad)
    not_swapping = SurfaceMap({"N": "S", "S": "N"}, {"eq": "eq"}, {"eq": 1}, {"eq": 1}, {"N": -1, "S": -1})
    assert check_map(p, p, not_swapping)


@pytest.mark.parametrize("name", ["rp2_equator", "klein_two_curves", "klein_signed_cycle", "sphere_equator"])
def test_double_cover_properties(name):
    p = F.get_surface(name)
    cover, deck = orientation_double_cover(p)
    assert validate(cover).ok
    assert cover.euler_char == 2 * p.euler_char
    assert is_orientable(cover)
    assert involution_problems(cover, deck) == []
    assert all(f != g for f, g in deck.faces.items())


def test_double_cover_of_random_presentations():
    rng = random.Random(11)
    for _ in range(100):
        p = random_presentation(rng, rng.randint(1, 4), rng.randint(0, 5), rng.choice([0, 1, 2]), signs=(1, -1))
        dc = orientation_double_cover(p)
        assert validate(dc.cover).ok
        assert dc.cover.euler_char == 2 * p.euler_char
        assert involution_problems(dc.cover, dc.deck) == []
        # the cover of an orientable surface is two copies
        if is_orientable(p):
            assert len(dc.cover.components()) == 2 * len(p.components())


def test_rp2_translated_is_a_valid_covered_surface():
    s = F.rp2_translated()
    assert involution_problems(s.cover, s.deck) == []
    assert s.euler_char == 1


def test_deck_must_reverse_orientation():
    p = F.sphere_equator()
    rot = SurfaceMap.identity(p)
    assert involution_problems(p, rot)


def test_disjoint_union():
    u = disjoint_union(F.sphere_equator(), F.torus_two_curves())
    assert validate(u).ok
    assert len(u.components()) == 2
    assert u.euler_char == 2
