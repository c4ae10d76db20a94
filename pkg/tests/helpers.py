"""Random presentations and forms for property tests."""
from __future__ import annotations

import itertools
import math
import random

from bmsurfaces.bgraph import exists_bm
from bmsurfaces.laurent import BmForm
from bmsurfaces.surface import Curve, Face, SurfacePresentation, is_orientable, orientation_double_cover


def random_presentation(rng: random.Random, n_faces: int, n_curves: int, one_sided: int = 0, signs=(1,)) -> SurfacePresentation:
    """Genus-0 faces joined by random curves; connected when ``n_curves >= n_faces - 1``."""
    ends: list[list[str]] = [[] for _ in range(n_faces)]
    pairs = []
    for i in range(1, n_faces):  # spanning tree first
        pairs.append((rng.randrange(i), i))
    while len(pairs) < n_curves:
        pairs.append((rng.randrange(n_faces), rng.randrange(n_faces)))
    curves = []
    for k, (a, b) in enumerate(pairs):
        sa, sb = f"s{len(ends[a])}", None
        ends[a].append(sa)
        sb = f"s{len(ends[b])}"
        ends[b].append(sb)
        curves.append(Curve(f"c{k}", "two", [(f"F{a}", sa), (f"F{b}", sb)], rng.choice(signs)))
    for k in range(one_sided):
        a = rng.randrange(n_faces)
        s = f"s{len(ends[a])}"
        ends[a].append(s)
        curves.append(Curve(f"m{k}", "one", [(f"F{a}", s)]))
    faces = [Face(f"F{i}", 2 - len(ends[i]), ends[i]) for i in range(n_faces)]
    return SurfacePresentation(faces, curves, sum(f.euler_char for f in faces))


def random_form(rng: random.Random, p: SurfacePresentation, m: int, colors=None, zero_volume_prob=0.3) -> BmForm:
    """A valid form on ``p``: signs from ``colors`` (or an existence witness), magnitudes random."""
    orient = is_orientable(p)
    if colors is None:
        d = exists_bm(p, m)
        assert d, d.reason
        if "colors" in d.witness:
            colors = d.witness["colors"]
        else:
            colors = {f: d.witness["cover_colors"][f"{f}+"] for f in p.face_ids}
    eps = {f: colors[f] * (orient.flips[f] if orient else 1) for f in p.face_ids}
    periods = {}
    for c in p.curves:
        a = [eps[c.attachments[0][0]] * rng.uniform(0.5, 3.0)]
        for i in range(1, m):
            twisted = not c.two_sided and (i - m) % 2 == 0
            a.append(0.0 if twisted else rng.uniform(-2.0, 2.0))
        periods[c.id] = a
    volumes = {f: 0.0 if rng.random() < zero_volume_prob else eps[f] * rng.uniform(0.1, 3.0) for f in p.face_ids}
    return BmForm(m, periods, volumes)


def brute_force_orientable(p: SurfacePresentation) -> bool:
    """Try every assignment of face flips; one-sided curves are never orientable."""
    if any(not c.two_sided for c in p.curves):
        return False
    for flips in itertools.product((1, -1), repeat=len(p.faces)):
        f = dict(zip(p.face_ids, flips))
        if all(f[c.attachments[0][0]] * c.gluing_sign * f[c.attachments[1][0]] == 1 for c in p.curves):
            return True
    return False


def close(a: float, b: float, tol: float) -> bool:
    return math.isclose(a, b, rel_tol=tol, abs_tol=tol)
