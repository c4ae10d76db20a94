from __future__ import annotations

import math
import random

import pytest

from bmsurfaces import fixtures as F
from bmsurfaces.actions import (
    ActionError,
    FiniteAction,
    average,
    deck_group,
    equivariantly_equivalent,
    is_invariant,
    pullback,
    require_action,
    table_problems,
)
from bmsurfaces.laurent import BmForm, check_form, construct_form, equivalent, regularized_volume
from bmsurfaces.surface import SurfaceMap

TWO_PI = 2 * math.pi


def group(name):
    surf, gen = F.ACTIONS[name]
    p = F.get_surface(surf)
    return p, FiniteAction([SurfaceMap.identity(p), gen()])


def random_coefficients(rng, p, m):
    return BmForm(
        m,
        {c: [rng.uniform(-3, 3) for _ in range(m)] for c in p.curve_ids},
        {f: rng.uniform(-3, 3) for f in p.face_ids},
    )


@pytest.mark.parametrize("name", sorted(F.ACTIONS))
def test_fixture_actions_are_groups(name):
    p, G = group(name)
    assert table_problems(G, p) == []


def test_table_problems_are_named():
    p, G = group("klein")
    assert "no identity" in table_problems(FiniteAction([F.klein_action()]), p)[0]
    assert table_problems(FiniteAction([]))
    with pytest.raises(ActionError):
        require_action(FiniteAction([SurfaceMap.identity(p), F.klein_action(), F.klein_action()]), p)


def test_identity_pullback():
    p = F.torus_two_curves()
    w = F.torus_form(3)
    assert pullback(w, SurfaceMap.identity(p)) == w


@pytest.mark.parametrize("m", range(1, 7))
def test_klein_sign_law(m):
    w = F.torus_form(m)
    pulled = pullback(w, F.klein_action())
    for c in ("z0", "z1"):
        assert pulled.periods[c][0] == (-1) ** (m + 1) * w.periods[c][0]
    assert bool(is_invariant(w, group("klein")[1])) == (m % 2 == 1)


def test_klein_m2_witness():
    inv = is_invariant(F.torus_form(2), group("klein")[1])
    assert not inv
    assert inv.element.name == "klein"
    assert inv.coordinate.startswith("curve z0 period 0")


@pytest.mark.parametrize("m", [1, 3, 5])
def test_antipodal_fixes_the_odd_sphere_forms(m):
    w = F.sphere_form(m, volumes=(1.0, -1.0))
    assert is_invariant(w, group("antipodal")[1])


def test_translated_projective_plane_witness_is_not_invariant():
    p, G = group("antipodal_two_circles")
    for m in (1, 3, 5):
        w = construct_form(p, m)
        assert not is_invariant(w, G)


def test_trivial_group():
    p = F.sphere_equator()
    G = FiniteAction([SurfaceMap.identity(p)])
    rng = random.Random(0)
    assert is_invariant(random_coefficients(rng, p, 2), G)


@pytest.mark.parametrize("name", sorted(F.ACTIONS))
def test_pullback_is_a_right_action(name):
    p, G = group(name)
    rng = random.Random(1)
    for m in (1, 2, 3, 4):
        w = random_coefficients(rng, p, m)
        for g in G:
            for h in G:
                assert pullback(pullback(w, g), h) == pullback(w, g.compose(h))


def test_average_examples():
    p, G = group("antipodal")
    w = F.sphere_form(1, volumes=(3.0, -1.0))
    avg = average(w, G)
    assert avg.volumes == {"N": 2.0, "S": -2.0}
    assert avg.periods == w.periods

    invariant = F.sphere_form(3, volumes=(1.0, -1.0))
    assert average(invariant, G) == invariant


def test_klein_m2_average_degenerates():
    p, G = group("klein")
    avg = average(F.torus_form(2), G)
    assert avg.periods["z0"][0] == 0.0
    assert "nondegeneracy" in check_form(p, avg).codes()


@pytest.mark.parametrize("name", sorted(F.ACTIONS))
def test_average_is_idempotent_and_invariant(name):
    p, G = group(name)
    rng = random.Random(2)
    for m in (1, 2, 3):
        once = average(random_coefficients(rng, p, m), G)
        assert average(once, G) == once
        assert is_invariant(once, G)


def test_deck_invariant_forms_have_zero_volume():
    rng = random.Random(3)
    for surf, name in (("sphere_equator", "antipodal"), ("sphere_two_circles", "antipodal_two_circles")):
        p = F.get_surface(surf)
        G = deck_group(p, F.ACTIONS[name][1]())
        for m in (1, 3, 5):
            w = average(construct_form(p, m), G)
            w = BmForm(m, w.periods, {f: v + rng.uniform(-1, 1) for f, v in w.volumes.items()})
            w = average(w, G)
            if check_form(p, w).ok:
                assert regularized_volume(p, w) == pytest.approx(0.0, abs=1e-12)
            assert math.fsum(w.volumes.values()) == pytest.approx(0.0, abs=1e-12)


def test_equivariant_yes():
    p, G = group("antipodal")
    a = F.sphere_form(3, volumes=(2.0, -2.0))
    b = F.sphere_form(3, volumes=(1.0, -1.0))
    assert is_invariant(a, G) and is_invariant(b, G)
    d = equivariantly_equivalent(p, a, b, G)
    assert d
    assert equivariantly_equivalent(p, a, a, G)


def test_equivariant_no_for_the_orbit_pair():
    p, G = group("half_turn")
    w1, w2 = F.orbit_pair()
    assert is_invariant(w1, G) and is_invariant(w2, G)
    assert equivalent(p, w1, p, w2)
    d = equivariantly_equivalent(p, w1, w2, G)
    assert not d
    assert "commuting with the action fails" in d.reason
    assert equivariantly_equivalent(p, w1, w1, G)


def test_equivariant_refuses_non_invariant_input():
    p, G = group("klein")
    with pytest.raises(ActionError, match="first form is not invariant"):
        equivariantly_equivalent(p, F.torus_form(2), F.torus_form(2), G)
