"""End-to-end acceptance checks, one test per criterion.

Each test records a one-line verdict in ``RESULTS``; the lines are printed in
the pytest terminal summary and when this file is run as a script.
"""
from __future__ import annotations

import itertools
import math
import random
import time
import warnings

import pytest

from bmsurfaces import fixtures as F
from bmsurfaces.actions import FiniteAction, average, is_invariant
from bmsurfaces.bgraph import EDGE, LOOP, BGraph, Edge, exists_bm, presentation_isomorphisms, two_colorable
from bmsurfaces.cli import run
from bmsurfaces.desingularize import (
    build_profile,
    convergence_report,
    desing_total_volume_closed,
    desing_total_volume_numeric,
    is_monotone,
)
from bmsurfaces.laurent import check_form, construct_form, equivalent, invariants, regularized_volume
from bmsurfaces.nambu import from_surface, nambu_equivalent
from bmsurfaces.quadrature import regularized_volume_numeric
from bmsurfaces.surface import (
    SurfaceMap,
    face_fixed_points,
    involution_problems,
    orientation_double_cover,
)
from helpers import random_form, random_presentation

TWO_PI = 2 * math.pi
RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    assert ok, RESULTS[n]


def test_criterion_01_sphere_counterexample():
    t0 = time.perf_counter()
    p = F.sphere_equator()
    w1, w2 = F.omega_pair()
    a1 = invariants(p, w1).periods["eq"][1]
    a2 = invariants(p, w2).periods["eq"][1]
    d = equivalent(p, w1, p, w2)
    prof = build_profile(1)
    gaps = [
        abs(desing_total_volume_closed(p, w1, eps, prof) - desing_total_volume_closed(p, w2, eps, prof))
        for eps in (0.2, 0.1, 0.05)
    ]
    elapsed = time.perf_counter() - t0
    ok = a1 == 0.0 and a2 == pytest.approx(TWO_PI) and not d and "0 vs 6.2832" in d.reason
    ok = ok and max(gaps) <= 1e-12 and elapsed < 1.0
    record(1, ok, f"a1 = {a1:g} vs {a2:.5g}, equiv NO ({d.reason}), max volume gap {max(gaps):.1e}, {elapsed:.2f}s")


def test_criterion_02_desingularisation_oracle():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    profiles = {k: build_profile(k) for k in (1, 2)}
    worst, count = 0.0, 0
    while count < 100:
        k = rng.choice((1, 2))
        p = random_presentation(rng, rng.randint(1, 4), rng.randint(1, 5))
        if not exists_bm(p, 2 * k):
            continue
        eps = rng.choice((0.1, 0.05))
        rep = desing_total_volume_numeric(p, random_form(rng, p, 2 * k), eps, profiles[k])
        worst = max(worst, rep.relative_error)
        count += 1
    elapsed = time.perf_counter() - t0
    record(2, worst <= 1e-6 and elapsed < 30, f"{count} instances, worst relative error {worst:.1e}, {elapsed:.1f}s")


def test_criterion_03_existence_table():
    wrong = []
    for name, m, expected in F.EXISTENCE_TABLE:
        d = exists_bm(F.get_surface(name), m)
        if bool(d) != expected:
            wrong.append(f"{name} m={m}")
    d = exists_bm(F.rp2_translated(), 3)
    obstruction = "deck transformation does not invert colors" in d.reason
    record(
        3,
        not wrong and obstruction,
        f"{len(F.EXISTENCE_TABLE)} entries, mismatches {wrong or 'none'}, translated RP2 obstruction: {d.reason}",
    )


def test_criterion_04_klein_invariance_law():
    p = F.torus_two_curves()
    G = FiniteAction([SurfaceMap.identity(p), F.klein_action()])
    verdicts = {m: bool(is_invariant(F.torus_form(m), G)) for m in range(1, 7)}
    ok = all(v == (m % 2 == 1) for m, v in verdicts.items())
    record(4, ok, "invariant for m = " + ", ".join(str(m) for m, v in verdicts.items() if v))


def test_criterion_05_averaging():
    p = F.torus_two_curves()
    G = FiniteAction([SurfaceMap.identity(p), F.klein_action()])
    idempotent = True
    rng = random.Random(5)
    for m in range(1, 7):
        w = random_form(rng, p, m) if exists_bm(p, m) else F.torus_form(m)
        once = average(w, G)
        idempotent = idempotent and average(once, G) == once
    avg = average(F.torus_form(2), G)
    a0 = avg.periods["z0"][0]
    rejected = not check_form(p, avg).ok
    quotient_no = not exists_bm(F.klein_two_curves(), 2)
    record(
        5,
        idempotent and a0 == 0.0 and rejected and quotient_no,
        f"idempotent {idempotent}, averaged m=2 a0 = {a0:g}, check_form rejects {rejected}, quotient m=2 NO {quotient_no}",
    )


def _brute_bipartite(n: int, pairs) -> bool:
    for bits in itertools.product((0, 1), repeat=n):
        if all(a != b and bits[a] != bits[b] for a, b in pairs):
            return True
    return False


def test_criterion_06_bipartiteness_oracle():
    t0 = time.perf_counter()
    checked, wrong = 0, 0
    for n in range(1, 6):
        kinds = list(itertools.combinations_with_replacement(range(n), 2))
        vs = [f"v{i}" for i in range(n)]
        for size in range(7):
            for pairs in itertools.combinations_with_replacement(kinds, size):
                g = BGraph(vs, [Edge(f"e{k}", LOOP if a == b else EDGE, (vs[a], vs[b])) for k, (a, b) in enumerate(pairs)])
                if bool(two_colorable(g)) != _brute_bipartite(n, pairs):
                    wrong += 1
                checked += 1
    elapsed = time.perf_counter() - t0
    record(6, wrong == 0 and elapsed < 60, f"{checked} multigraphs, {wrong} disagreements, {elapsed:.1f}s")


def test_criterion_07_regularised_volume_oracle():
    p = F.sphere_equator()
    checks = [
        (regularized_volume_numeric(p, construct_form(p, 1)), 0.0),
        (regularized_volume_numeric(p, F.sphere_form(2)), -4 * math.pi),
    ]
    fixture_ok = all(abs(x - y) <= 1e-6 * (1 + abs(y)) for x, y in checks)
    rng = random.Random(7)
    worst, count = 0.0, 0
    # a fitted log term near round-off is a warning, not a verdict: count them
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        while count < 50:
            q = random_presentation(rng, rng.randint(1, 4), rng.randint(1, 5))
            m = rng.randint(1, 6)
            if not exists_bm(q, m):
                continue
            w = random_form(rng, q, m)
            ref = regularized_volume(q, w)
            worst = max(worst, abs(regularized_volume_numeric(q, w) - ref) / (1 + abs(ref)))
            count += 1
    record(
        7,
        fixture_ok and worst <= 1e-6,
        f"sphere m=1 {checks[0][0]:.2e}, m=2 {checks[1][0]:.6f}; {count} random (m <= 6) worst {worst:.1e}"
        f" ({len(caught)} log-term warnings)",
    )


def test_criterion_08_convergence_surrogate():
    eps = [0.2, 0.1, 0.05, 0.025]
    tables = {k: convergence_report(k, build_profile(k), eps) for k in (1, 2)}
    ok = all(is_monotone(rows) and len(rows[0].sup_norms) == 2 * k for k, rows in tables.items())
    last = {k: ", ".join(f"{x:.2g}" for x in rows[-1].sup_norms) for k, rows in tables.items()}
    record(8, ok, f"monotone for k = 1, 2; sup norms at eps = 0.025: k=1 [{last[1]}], k=2 [{last[2]}]")


def test_criterion_09_double_covers():
    problems = []
    for name in ("rp2_equator", "klein_two_curves", "klein_signed_cycle"):
        p = F.get_surface(name)
        dc = orientation_double_cover(p)
        if dc.cover.euler_char != 2 * p.euler_char:
            problems.append(f"{name}: chi")
        if face_fixed_points(dc.deck) or involution_problems(dc.cover, dc.deck):
            problems.append(f"{name}: deck")
    klein = next(presentation_isomorphisms(orientation_double_cover(F.klein_two_curves()).cover, F.torus_two_curves()), None)
    rp2 = next(presentation_isomorphisms(orientation_double_cover(F.rp2_equator()).cover, F.sphere_equator()), None)
    ok = not problems and klein is not None and rp2 is not None
    record(9, ok, f"chi doubles, deck free: {problems or 'all'}; Klein cover ~ torus {klein is not None}, RP2 cover ~ sphere {rp2 is not None}")


def _nambu_fixture_forms():
    w1, w2 = F.omega_pair()
    sphere, torus, rp2, klein = (F.get_surface(n) for n in ("sphere_equator", "torus_two_curves", "rp2_equator", "klein_two_curves"))
    return [
        (sphere, construct_form(sphere, 1)),
        (sphere, w1),
        (sphere, w2),
        (torus, construct_form(torus, 2)),
        (rp2, construct_form(rp2, 3)),
        (klein, construct_form(klein, 3)),
    ]


def test_criterion_10_nambu_agrees_with_surfaces():
    forms = _nambu_fixture_forms()
    agree = yes = 0
    for (p, a), (q, b) in itertools.product(forms, repeat=2):
        try:
            surface = bool(equivalent(p, a, q, b, allow_orientation_reversal=True))
        except ValueError:
            surface = None
        try:
            nambu = bool(nambu_equivalent(from_surface(p, a), from_surface(q, b)))
        except ValueError:
            nambu = None
        agree += surface == nambu
        yes += bool(surface)
    total = len(forms) ** 2
    record(10, agree == total, f"{agree}/{total} ordered fixture pairs agree ({yes} yes)")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
