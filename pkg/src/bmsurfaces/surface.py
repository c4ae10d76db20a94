"""Combinatorial model of a surface cut along disjoint circles.

A :class:`SurfacePresentation` records the pair (S, Z) as the faces of S \\ Z
(each an orientable surface with boundary, carrying its own reference
orientation) glued along the curves of Z.  A two-sided curve is glued to two
boundary slots and carries a gluing sign telling whether the reference
orientations of the two sides agree across it.  A one-sided curve has a
Moebius band neighbourhood and is glued to a single boundary slot.

Tube conventions used throughout the package: near a two-sided curve the
transverse coordinate ``x`` is positive on the side of the first attachment,
and the tube orientation ``dx ^ dtheta`` equals the reference orientation of
that face.  The second face sees the tube orientation multiplied by the
gluing sign.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping


class PresentationError(ValueError):
    """Raised when an input is structurally unusable (unknown ids, bad shapes)."""


class Sidedness(str, Enum):
    TWO = "two"
    ONE = "one"


@dataclass(frozen=True)
class Face:
    id: str
    euler_char: int
    boundary_slots: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "boundary_slots", tuple(self.boundary_slots))

    @property
    def capped_euler_char(self) -> int:
        """Euler characteristic of the closed surface obtained by capping every boundary circle."""
        return self.euler_char + len(self.boundary_slots)


@dataclass(frozen=True)
class Curve:
    id: str
    sided: Sidedness
    attachments: tuple[tuple[str, str], ...]
    gluing_sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "sided", Sidedness(self.sided))
        object.__setattr__(self, "attachments", tuple(tuple(a) for a in self.attachments))

    @property
    def two_sided(self) -> bool:
        return self.sided is Sidedness.TWO

    @property
    def faces(self) -> tuple[str, ...]:
        return tuple(face for face, _ in self.attachments)

    @property
    def is_loop(self) -> bool:
        return self.two_sided and len(self.attachments) == 2 and self.attachments[0][0] == self.attachments[1][0]

    def side_sign(self, j: int) -> int:
        """Sign relating the tube orientation to the reference orientation of attachment ``j``."""
        return 1 if j == 0 else self.gluing_sign


@dataclass(frozen=True)
class SurfacePresentation:
    faces: tuple[Face, ...]
    curves: tuple[Curve, ...]
    euler_char: int
    orientable: bool | None = None
    _face_index: dict = field(init=False, repr=False, compare=False)
    _curve_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "faces", tuple(self.faces))
        object.__setattr__(self, "curves", tuple(self.curves))
        object.__setattr__(self, "_face_index", {f.id: f for f in self.faces})
        object.__setattr__(self, "_curve_index", {c.id: c for c in self.curves})

    def face(self, face_id: str) -> Face:
        try:
            return self._face_index[face_id]
        except KeyError:
            raise PresentationError(f"unknown face id {face_id!r}") from None

    def curve(self, curve_id: str) -> Curve:
        try:
            return self._curve_index[curve_id]
        except KeyError:
            raise PresentationError(f"unknown curve id {curve_id!r}") from None

    @property
    def face_ids(self) -> tuple[str, ...]:
        return tuple(f.id for f in self.faces)

    @property
    def curve_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.curves)

    def curves_at(self, face_id: str) -> Iterator[tuple[Curve, int]]:
        """Yield ``(curve, attachment index)`` for every attachment landing on ``face_id``."""
        for c in self.curves:
            for j, (f, _) in enumerate(c.attachments):
                if f == face_id:
                    yield c, j

    def components(self) -> list[tuple[str, ...]]:
        """Connected components as tuples of face ids, in presentation order."""
        seen: set[str] = set()
        out = []
        for f in self.face_ids:
            if f in seen:
                continue
            comp = []
            queue = deque([f])
            seen.add(f)
            while queue:
                x = queue.popleft()
                comp.append(x)
                for c, _ in self.curves_at(x):
                    for y in c.faces:
                        if y not in seen:
                            seen.add(y)
                            queue.append(y)
            out.append(tuple(g for g in self.face_ids if g in set(comp)))
        return out


@dataclass
class Violation:
    code: str
    message: str

    def __str__(self):
        return f"{self.code}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def add(self, code: str, message: str) -> None:
        self.violations.append(Violation(code, message))

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def extend(self, other: "ValidationReport", prefix: str = "") -> None:
        for v in other.violations:
            self.violations.append(Violation(v.code, prefix + v.message))


def validate(p: SurfacePresentation) -> ValidationReport:
    report = ValidationReport()
    face_ids = [f.id for f in p.faces]
    for dup in sorted({x for x in face_ids if face_ids.count(x) > 1}):
        report.add("duplicate face", f"face id {dup!r} used more than once")
    curve_ids = [c.id for c in p.curves]
    for dup in sorted({x for x in curve_ids if curve_ids.count(x) > 1}):
        report.add("duplicate curve", f"curve id {dup!r} used more than once")

    slots: dict[tuple[str, str], int] = {}
    for f in p.faces:
        for s in f.boundary_slots:
            if (f.id, s) in slots:
                report.add("duplicate slot", f"face {f.id!r} lists slot {s!r} twice")
            slots[(f.id, s)] = 0
        b = len(f.boundary_slots)
        capped = f.capped_euler_char
        if capped > 2 or capped % 2:
            report.add(
                "face topology",
                f"face {f.id!r}: euler_char {f.euler_char} with {b} boundary circles "
                "is not an orientable surface with boundary",
            )
        elif b and f.euler_char > 1:
            report.add("face topology", f"face {f.id!r} has boundary but euler_char {f.euler_char} > 1")

    for c in p.curves:
        expected = 2 if c.two_sided else 1
        if len(c.attachments) != expected:
            report.add(
                "attachment count",
                f"{c.sided.value}-sided curve {c.id!r} has {len(c.attachments)} attachments, expected {expected}",
            )
        if c.two_sided and c.gluing_sign not in (1, -1):
            report.add("gluing sign", f"curve {c.id!r} has gluing sign {c.gluing_sign!r}")
        for att in c.attachments:
            if att not in slots:
                report.add("dangling attachment", f"curve {c.id!r} attaches to unknown slot {att!r}")
            else:
                slots[att] += 1
    for (f, s), n in slots.items():
        if n != 1:
            report.add("slot matching", f"slot {s!r} of face {f!r} is used by {n} curve attachments")

    total = sum(f.euler_char for f in p.faces)
    if total != p.euler_char:
        report.add("euler mismatch", f"faces sum to euler characteristic {total}, declared {p.euler_char}")

    if report.ok and p.orientable is not None:
        actual = bool(is_orientable(p))
        if actual != p.orientable:
            report.add("orientability mismatch", f"declared orientable={p.orientable}, computed {actual}")
    return report


def require_valid(p: SurfacePresentation) -> None:
    report = validate(p)
    if not report.ok:
        raise PresentationError("invalid presentation: " + "; ".join(map(str, report.violations)))


@dataclass
class Orientability:
    """Outcome of :func:`is_orientable`.

    ``flips`` maps each face to +1/-1 such that ``flips[a] * sign * flips[b] == 1``
    for every two-sided curve between ``a`` and ``b``.  ``obstruction`` is a
    tuple of curve ids: a single one-sided curve, or a cycle of curves whose
    gluing signs multiply to -1.
    """

    flips: dict[str, int] | None
    obstruction: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.flips is not None


def is_orientable(p: SurfacePresentation) -> Orientability:
    for c in p.curves:
        if not c.two_sided:
            return Orientability(None, (c.id,))

    flips: dict[str, int] = {}
    parent: dict[str, tuple[str, str] | None] = {}
    for root in p.face_ids:
        if root in flips:
            continue
        flips[root] = 1
        parent[root] = None
        queue = deque([root])
        while queue:
            a = queue.popleft()
            for c, j in p.curves_at(a):
                b = c.attachments[1 - j][0]
                want = flips[a] * c.gluing_sign
                if b not in flips:
                    flips[b] = want
                    parent[b] = (a, c.id)
                    queue.append(b)
                elif flips[b] != want:
                    return Orientability(None, _cycle_through(parent, a, b, c.id))
    return Orientability(flips)


def _cycle_through(parent, a: str, b: str, closing: str) -> tuple[str, ...]:
    def path_up(x):
        out = []
        while parent[x] is not None:
            prev, cid = parent[x]
            out.append((x, cid))
            x = prev
        out.append((x, None))
        return out

    pa, pb = path_up(a), path_up(b)
    on_b = {x for x, _ in pb}
    meet = next(x for x, _ in pa if x in on_b)
    up_a = [cid for x, cid in pa[: [x for x, _ in pa].index(meet)]]
    up_b = [cid for x, cid in pb[: [x for x, _ in pb].index(meet)]]
    return tuple(up_a[::-1] + [closing] + up_b)


@dataclass(frozen=True)
class SurfaceMap:
    """Combinatorial shadow of a b-diffeomorphism between two presentations.

    ``t[c]`` is -1 when the map exchanges the sides of curve ``c`` (in tube
    coordinates of ``c`` and of its image), ``u[c]`` is -1 when it reverses the
    curve's direction, and ``sigma[f]`` is -1 when it reverses the reference
    orientations of face ``f`` and its image.
    """

    faces: Mapping[str, str]
    curves: Mapping[str, str]
    t: Mapping[str, int]
    u: Mapping[str, int]
    sigma: Mapping[str, int]
    name: str = ""

    def __post_init__(self):
        for attr in ("faces", "curves", "t", "u", "sigma"):
            object.__setattr__(self, attr, dict(getattr(self, attr)))

    def __hash__(self):
        return hash(self.key())

    def __eq__(self, other):
        return isinstance(other, SurfaceMap) and self.key() == other.key()

    def key(self) -> tuple:
        return tuple(tuple(sorted(getattr(self, a).items())) for a in ("faces", "curves", "t", "u", "sigma"))

    def compose(self, other: "SurfaceMap") -> "SurfaceMap":
        """``self o other``: apply ``other`` first."""
        faces = {f: self.faces[g] for f, g in other.faces.items()}
        curves = {c: self.curves[d] for c, d in other.curves.items()}
        t = {c: other.t[c] * self.t[d] for c, d in other.curves.items()}
        u = {c: other.u[c] * self.u[d] for c, d in other.curves.items()}
        sigma = {f: other.sigma[f] * self.sigma[g] for f, g in other.faces.items()}
        return SurfaceMap(faces, curves, t, u, sigma)

    def inverse(self) -> "SurfaceMap":
        faces = {g: f for f, g in self.faces.items()}
        curves = {d: c for c, d in self.curves.items()}
        return SurfaceMap(
            faces,
            curves,
            {d: self.t[c] for c, d in self.curves.items()},
            {d: self.u[c] for c, d in self.curves.items()},
            {g: self.sigma[f] for f, g in self.faces.items()},
        )

    def is_identity(self) -> bool:
        return (
            all(f == g for f, g in self.faces.items())
            and all(c == d for c, d in self.curves.items())
            and all(v == 1 for m in (self.t, self.u, self.sigma) for v in m.values())
        )

    @classmethod
    def identity(cls, p: SurfacePresentation, name: str = "id") -> "SurfaceMap":
        fs, cs = p.face_ids, p.curve_ids
        return cls(
            {f: f for f in fs}, {c: c for c in cs}, {c: 1 for c in cs}, {c: 1 for c in cs}, {f: 1 for f in fs}, name
        )


def check_map(p: SurfacePresentation, q: SurfacePresentation, g: SurfaceMap) -> list[str]:
    """Return the reasons ``g`` is not a combinatorial b-map from ``p`` to ``q`` (empty if it is)."""
    problems = []
    if set(g.faces) != set(p.face_ids) or set(g.faces.values()) != set(q.face_ids):
        problems.append("face map is not a bijection between the face sets")
    if set(g.curves) != set(p.curve_ids) or set(g.curves.values()) != set(q.curve_ids):
        problems.append("curve map is not a bijection between the curve sets")
    if problems:
        return problems
    for name in ("t", "u"):
        m = getattr(g, name)
        if set(m) != set(p.curve_ids) or any(v not in (1, -1) for v in m.values()):
            problems.append(f"{name} signs must be +1/-1 for every curve")
    if set(g.sigma) != set(p.face_ids) or any(v not in (1, -1) for v in g.sigma.values()):
        problems.append("sigma signs must be +1/-1 for every face")
    if problems:
        return problems
    for c in p.curves:
        d = q.curve(g.curves[c.id])
        if c.sided != d.sided:
            problems.append(f"curve {c.id!r} and its image {d.id!r} differ in sidedness")
            continue
        if not c.two_sided:
            f = c.attachments[0][0]
            if g.faces[f] != d.attachments[0][0]:
                problems.append(f"one-sided curve {c.id!r}: face {f!r} not sent to the face of {d.id!r}")
            elif g.u[c.id] != g.sigma[f]:
                problems.append(f"one-sided curve {c.id!r}: direction sign must equal sigma of {f!r}")
            elif g.t[c.id] != 1:
                # the two sides of a Moebius band are not distinguished: t is fixed to +1
                problems.append(f"one-sided curve {c.id!r}: side sign must be +1")
            continue
        tt = g.t[c.id]
        for j, (f, _) in enumerate(c.attachments):
            jj = j if tt == 1 else 1 - j
            if g.faces[f] != d.attachments[jj][0]:
                problems.append(f"curve {c.id!r}: side {j} face {f!r} not sent to side {jj} of {d.id!r}")
                continue
            want = c.side_sign(j) * tt * g.u[c.id] * d.side_sign(jj)
            if g.sigma[f] != want:
                problems.append(f"curve {c.id!r}: orientation sign of face {f!r} inconsistent with (t, u)")
    return problems


@dataclass(frozen=True)
class DoubleCover:
    """Orientation double cover: ``cover`` with deck involution ``deck`` over ``base``.

    Cover faces ``F+``/``F-`` are the two local orientations of base face
    ``F``; their reference orientation is the tautological one, so every cover
    gluing sign is +1.  A two-sided base curve ``c`` lifts to ``c+`` and ``c-``;
    a one-sided one lifts to a single two-sided ``c~`` joining ``F+`` to ``F-``.
    """

    cover: SurfacePresentation
    deck: SurfaceMap
    base: SurfacePresentation | None = None

    def __iter__(self):
        return iter((self.cover, self.deck))


def _plus(x):
    return f"{x}+"


def _minus(x):
    return f"{x}-"


def _other(face_id: str) -> str:
    return face_id[:-1] + ("-" if face_id.endswith("+") else "+")


def orientation_double_cover(p: SurfacePresentation) -> DoubleCover:
    require_valid(p)
    faces = []
    for f in p.faces:
        faces.append(Face(_plus(f.id), f.euler_char, f.boundary_slots))
        faces.append(Face(_minus(f.id), f.euler_char, f.boundary_slots))
    curves = []
    dfaces = {}
    for f in p.faces:
        dfaces[_plus(f.id)] = _minus(f.id)
        dfaces[_minus(f.id)] = _plus(f.id)
    dcurves, dt, du = {}, {}, {}
    for c in p.curves:
        if c.two_sided:
            (f1, s1), (f2, s2) = c.attachments
            near = _plus(f2) if c.gluing_sign == 1 else _minus(f2)
            curves.append(Curve(_plus(c.id), Sidedness.TWO, [(_plus(f1), s1), (near, s2)], 1))
            curves.append(Curve(_minus(c.id), Sidedness.TWO, [(_minus(f1), s1), (_other(near), s2)], 1))
            for a, b in ((_plus(c.id), _minus(c.id)), (_minus(c.id), _plus(c.id))):
                dcurves[a], dt[a], du[a] = b, 1, -1
        else:
            ((f, s),) = c.attachments
            lifted = f"{c.id}~"
            curves.append(Curve(lifted, Sidedness.TWO, [(_plus(f), s), (_minus(f), s)], 1))
            dcurves[lifted], dt[lifted], du[lifted] = lifted, -1, 1
    cover = SurfacePresentation(faces, curves, 2 * p.euler_char, True)
    deck = SurfaceMap(dfaces, dcurves, dt, du, {f: -1 for f in dfaces}, "deck")
    return DoubleCover(cover, deck, p)


@dataclass(frozen=True)
class CoveredSurface:
    """A (possibly non-orientable) surface given by an orientable cover and its deck involution.

    This is how surfaces whose complementary faces are not orientable (a
    Moebius band face, say) enter the package: the base is never built,
    every decision is made upstairs.
    """

    cover: SurfacePresentation
    deck: SurfaceMap

    @property
    def euler_char(self) -> int:
        return self.cover.euler_char // 2


def involution_problems(p: SurfacePresentation, rho: SurfaceMap) -> list[str]:
    """Reasons ``rho`` is not a free orientation-reversing involution of orientable ``p``."""
    problems = check_map(p, p, rho)
    if problems:
        return problems
    if not rho.compose(rho).is_identity():
        problems.append("map does not square to the identity")
    cert = is_orientable(p)
    if not cert:
        problems.append("cover presentation is not orientable")
        return problems
    for f, g in rho.faces.items():
        if cert.flips[f] * rho.sigma[f] * cert.flips[g] != -1:
            problems.append(f"map preserves orientation on face {f!r}")
        if f == g and p.face(f).euler_char % 2:
            problems.append(f"face {f!r} is mapped to itself but has odd euler characteristic")
    for c, d in rho.curves.items():
        if c == d and rho.u[c] != 1:
            problems.append(f"curve {c!r} is reflected onto itself (fixed points)")
    return problems


def face_fixed_points(rho: SurfaceMap) -> list[str]:
    return [f for f, g in rho.faces.items() if f == g]


def disjoint_union(p: SurfacePresentation, q: SurfacePresentation, tags=("a", "b")) -> SurfacePresentation:
    """Disjoint union with ids prefixed by ``tags``."""
    faces, curves = [], []
    for tag, r in zip(tags, (p, q)):
        faces += [Face(f"{tag}.{f.id}", f.euler_char, f.boundary_slots) for f in r.faces]
        curves += [
            Curve(f"{tag}.{c.id}", c.sided, [(f"{tag}.{f}", s) for f, s in c.attachments], c.gluing_sign)
            for c in r.curves
        ]
    both = None
    if p.orientable is not None and q.orientable is not None:
        both = p.orientable and q.orientable
    return SurfacePresentation(faces, curves, p.euler_char + q.euler_char, both)


def flip_face(p: SurfacePresentation, face_id: str) -> SurfacePresentation:
    """Reverse the reference orientation of one face.

    Only gluing signs change; when ``face_id`` is the first attachment of a
    curve the tube orientation follows it (see :func:`bmsurfaces.laurent.flip_face_form`).
    """
    p.face(face_id)
    curves = []
    for c in p.curves:
        if c.two_sided and face_id in c.faces and not c.is_loop:
            curves.append(Curve(c.id, c.sided, c.attachments, -c.gluing_sign))
        else:
            curves.append(c)
    return SurfacePresentation(p.faces, curves, p.euler_char, p.orientable)
