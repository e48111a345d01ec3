"""Hand-built complexes and field sequences used by tests, examples and the CLI."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from .complex import SimplicialComplex, build_complex
from .mvf import MultivectorField


@dataclass
class Fixture:
    complex: SimplicialComplex
    fields: list[MultivectorField]
    isolating: list[frozenset[int]]
    names: dict[str, frozenset[int]]


def collapse_pairs(K: SimplicialComplex, region: Iterable[int]) -> list[frozenset[int]]:
    """Partition ``region`` into free-face pairs collapsing it onto the rest of its closure.

    The closure of ``region`` minus ``region`` must already be closed. Pairs
    are chosen greedily by smallest free face id, so the result is
    deterministic. Each pair is a regular multivector.
    """
    left = set(region)
    pairs = []
    while left:
        for s in sorted(left):
            up = [t for t in K.cofaces[s] if t in left]
            if len(up) == 1:
                pairs.append(frozenset((s, up[0])))
                left -= {s, up[0]}
                break
        else:
            raise ValueError(f"region does not collapse: {len(left)} simplices left")
    return pairs


def ring_pairs(K: SimplicialComplex, cycle: list[int]) -> list[frozenset[int]]:
    """Pair each vertex of a closed vertex cycle with its outgoing edge."""
    out = []
    for i, v in enumerate(cycle):
        w = cycle[(i + 1) % len(cycle)]
        out.append(frozenset((K.id_of((v,)), K.id_of((v, w)))))
    return out


def split_by(K: SimplicialComplex, cut: frozenset[int]) -> list[frozenset[int]]:
    """Components of ``K`` minus ``cut`` under the face relation, sorted by min id."""
    rest = K.all - cut
    seen: set[int] = set()
    comps = []
    for s in sorted(rest):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in (*K.faces[x], *K.cofaces[x]):
                if y in rest and y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        comps.append(frozenset(comp))
    return sorted(comps, key=min)


def interval() -> Fixture:
    """Edge ab with the field {{a, ab}, {b}}: a single attracting vertex b."""
    K = build_complex([(0, 1)])
    a, b, ab = K.id_of((0,)), K.id_of((1,)), K.id_of((0, 1))
    f = MultivectorField(K, [{a, ab}, {b}])
    return Fixture(K, [f], [K.all], {"a": frozenset({a}), "b": frozenset({b}), "ab": frozenset({ab})})


def hollow_circle() -> Fixture:
    """Boundary of a triangle with a periodic field."""
    K = build_complex([(0, 1), (1, 2), (0, 2)])
    f = MultivectorField(K, ring_pairs(K, [0, 1, 2]))
    return Fixture(K, [f], [K.all], {"ring": K.all})


def full_triangle(copies: int = 1) -> Fixture:
    """Filled triangle: a critical 2-cell repelling onto a periodic boundary."""
    K = build_complex([(0, 1, 2)])
    top = K.id_of((0, 1, 2))
    parts = [*ring_pairs(K, [0, 1, 2]), frozenset({top})]
    fields = [MultivectorField(K, parts) for _ in range(copies)]
    return Fixture(K, fields, [K.all] * copies, {"top": frozenset({top}), "ring": K.all - {top}})


class _Rings:
    """Concentric circles of ``m`` vertices joined by triangulated bands, optionally coned at the centre."""

    def __init__(self, m: int, circles: Iterable[int], center: bool) -> None:
        self.m = m
        self.circles = list(circles)
        self.center = center
        base = 1 if center else 0
        self._vid = {(r, j): base + i * m + j for i, r in enumerate(self.circles) for j in range(m)}
        tris = []
        if center:
            r0 = self.circles[0]
            tris += [(0, self.v(r0, j), self.v(r0, j + 1)) for j in range(m)]
        for r in self.circles[:-1]:
            for j in range(m):
                tris.append((self.v(r, j), self.v(r, j + 1), self.v(r + 1, j + 1)))
                tris.append((self.v(r, j), self.v(r + 1, j), self.v(r + 1, j + 1)))
        self.K = build_complex(tris)

    def v(self, r: int, j: int) -> int:
        return self._vid[(r, j % self.m)]

    def s(self, *verts: int) -> int:
        return self.K.id_of(tuple(sorted(verts)))

    def circle(self, r: int) -> frozenset[int]:
        m = self.m
        return frozenset({self.s(self.v(r, j)) for j in range(m)} | {self.s(self.v(r, j), self.v(r, j + 1)) for j in range(m)})

    def band(self, r: int) -> frozenset[int]:
        """Open band between circles r and r + 1."""
        out = set()
        for j in range(self.m):
            a, b, c, d = self.v(r, j), self.v(r, j + 1), self.v(r + 1, j), self.v(r + 1, j + 1)
            out |= {self.s(a, c), self.s(a, d), self.s(a, b, d), self.s(a, c, d)}
        return frozenset(out)

    def cycle(self, r: int) -> list[int]:
        return [self.v(r, j) for j in range(self.m)]


def disk_bifurcation(m: int = 6) -> Fixture:
    """Three fields on a triangulated disk with a centre vertex and circles 1, 2, 3.

    Field 1: a critical open disk inside circle 2 repels onto an attracting
    cycle on circle 2. Field 2: the centre becomes an attracting point and a
    periodic repeller appears in the band between circles 1 and 2. Field 3:
    the repeller and the attracting cycle merge into a semistable cycle.
    The outer band always collapses onto circle 2. ``16 m + 1`` simplices.
    """
    if m < 3:
        raise ValueError("need at least 3 vertices per circle")
    g = _Rings(m, (1, 2, 3), center=True)
    K = g.K
    c = g.s(0)
    disk1 = K.closure({g.s(0, g.v(1, j), g.v(1, j + 1)) for j in range(m)})
    inner = disk1 | K.closure(g.band(1))
    ring2 = g.circle(2)
    open_disk = frozenset(inner - ring2)
    outer = frozenset(K.all - inner - ring2)
    outer_pairs = collapse_pairs(K, outer)
    centre_pairs = collapse_pairs(K, disk1 - {c})
    ring = ring_pairs(K, g.cycle(2))
    strips = []
    for j in range(m):
        a, b, cc, d = g.v(1, j), g.v(1, j + 1), g.v(2, j), g.v(2, j + 1)
        strips.append(frozenset({g.s(a, cc), g.s(a, cc, d), g.s(a, d), g.s(a, b, d)}))
    merged = [s | r for s, r in zip(strips, ring)]
    f1 = MultivectorField(K, [open_disk, *ring, *outer_pairs])
    f2 = MultivectorField(K, [frozenset({c}), *centre_pairs, *strips, *ring, *outer_pairs])
    f3 = MultivectorField(K, [frozenset({c}), *centre_pairs, *merged, *outer_pairs])
    names = {
        "centre": frozenset({c}),
        "open_disk": open_disk,
        "ring2": ring2,
        "band12": g.band(1),
        "disk1": disk1,
        "outer": outer,
    }
    return Fixture(K, [f1, f2, f3], [K.all] * 3, names)


def shifted_annulus(m: int = 8, shift: int = 3) -> Fixture:
    """Three periodic attractors on an annulus with circles 0..3.

    The first field cycles along circle 1, the last along circle 2, and the
    middle one along a mixed loop that follows circle 1 for ``shift`` edges,
    climbs to circle 2, follows it around and drops back. Off the loop each
    field has one regular vector on each side.
    """
    if not 1 <= shift <= m - 2:
        raise ValueError("shift must lie in 1..m-2")
    g = _Rings(m, (0, 1, 2, 3), center=False)
    K = g.K
    mixed = [g.v(1, j) for j in range(shift + 1)] + [g.v(2, j) for j in range(shift, m + 1)]
    loops = [g.cycle(1), mixed, g.cycle(2)]
    fields = []
    rings = []
    for loop in loops:
        pairs = ring_pairs(K, loop)
        ring = frozenset().union(*pairs)
        rings.append(ring)
        fields.append(MultivectorField(K, [*pairs, *split_by(K, ring)]))
    names = {"ring_a": rings[0], "ring_b": rings[1], "ring_c": rings[2]}
    return Fixture(K, fields, [K.all] * 3, names)


def to_input(fix: Fixture, **options) -> dict:
    """The CLI input document for a fixture (simplices referenced by index)."""
    K = fix.complex
    doc = {
        "complex": [list(s) for s in K.simplices],
        "fields": [[sorted(v) for v in f.vectors] for f in fix.fields],
        "isolating": sorted(fix.isolating[0]) if all(N == fix.isolating[0] for N in fix.isolating)
        else [sorted(N) for N in fix.isolating],
    }
    doc.update(options)
    return doc
