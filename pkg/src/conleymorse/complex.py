"""Finite abstract simplicial complexes and face-relation primitives.

Simplices are identified by dense integer ids ordered by (dimension,
lexicographic vertex tuple). Sets of simplices are plain ``frozenset[int]``.
"""

from __future__ import annotations

from collections.abc import Iterable
from itertools import combinations

from .errors import DuplicateSimplex, EmptyInput

SimplexSet = frozenset


class SimplicialComplex:
    """An immutable, face-closed simplicial complex.

    Build instances with :func:`build_complex`; the constructor assumes its
    input is already face-closed and free of duplicates.
    """

    def __init__(self, simplices: Iterable[tuple[int, ...]]) -> None:
        ordered = sorted(set(simplices), key=lambda s: (len(s), s))
        self.simplices: tuple[tuple[int, ...], ...] = tuple(ordered)
        self.index: dict[tuple[int, ...], int] = {s: i for i, s in enumerate(ordered)}
        self.dim_of: tuple[int, ...] = tuple(len(s) - 1 for s in ordered)
        faces: list[frozenset[int]] = []
        cofaces: list[set[int]] = [set() for _ in ordered]
        for i, s in enumerate(ordered):
            if len(s) == 1:
                faces.append(frozenset())
                continue
            fs = frozenset(self.index[f] for f in combinations(s, len(s) - 1))
            faces.append(fs)
            for f in fs:
                cofaces[f].add(i)
        self.faces: tuple[frozenset[int], ...] = tuple(faces)
        self.cofaces: tuple[frozenset[int], ...] = tuple(frozenset(c) for c in cofaces)
        self.all: frozenset[int] = frozenset(range(len(ordered)))
        self._closure_cache: dict[int, frozenset[int]] = {}

    def __len__(self) -> int:
        return len(self.simplices)

    def __repr__(self) -> str:
        return f"SimplicialComplex({len(self)} simplices, dim {self.dim})"

    @property
    def dim(self) -> int:
        return max(self.dim_of, default=-1)

    def id_of(self, vertices: Iterable[int]) -> int:
        return self.index[tuple(sorted(vertices))]

    def ids_of(self, simplices: Iterable[Iterable[int]]) -> frozenset[int]:
        return frozenset(self.id_of(s) for s in simplices)

    def boundary(self, sigma: int) -> list[tuple[int, int]]:
        """Signed codimension-1 faces of ``sigma`` as ``(face_id, sign)`` pairs.

        The face omitting the i-th vertex gets sign ``(-1)**i``.
        """
        s = self.simplices[sigma]
        if len(s) == 1:
            return []
        return [(self.index[s[:i] + s[i + 1:]], -1 if i % 2 else 1) for i in range(len(s))]

    def closure_of(self, sigma: int) -> frozenset[int]:
        cached = self._closure_cache.get(sigma)
        if cached is None:
            s = self.simplices[sigma]
            cached = frozenset(
                self.index[f] for k in range(1, len(s) + 1) for f in combinations(s, k)
            )
            self._closure_cache[sigma] = cached
        return cached

    def closure(self, A: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for sigma in A:
            if sigma not in out:
                out |= self.closure_of(sigma)
        return frozenset(out)

    def star(self, A: Iterable[int]) -> frozenset[int]:
        """All cofaces (reflexive) of members of ``A``."""
        out = set(A)
        stack = list(out)
        while stack:
            for c in self.cofaces[stack.pop()]:
                if c not in out:
                    out.add(c)
                    stack.append(c)
        return frozenset(out)

    def mouth(self, A: Iterable[int]) -> frozenset[int]:
        A = frozenset(A)
        return self.closure(A) - A

    def is_closed(self, A: Iterable[int]) -> bool:
        A = frozenset(A)
        return all(self.faces[s] <= A for s in A)

    def convexity_witness(self, A: Iterable[int]) -> int | None:
        """A simplex outside ``A`` with a face and a coface in ``A``, if any."""
        A = frozenset(A)
        between = (self.closure(A) & self.star(A)) - A
        return min(between) if between else None

    def is_convex(self, A: Iterable[int]) -> bool:
        return self.convexity_witness(A) is None


def build_complex(raw: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Build a complex from vertex tuples, adding every missing face.

    Raises:
        EmptyInput: if ``raw`` is empty or contains an empty tuple.
        DuplicateSimplex: if one vertex set is listed twice.
        ValueError: on negative or repeated vertex ids within a tuple.
    """
    raw = [tuple(s) for s in raw]
    if not raw:
        raise EmptyInput("complex has no simplices")
    seen: set[tuple[int, ...]] = set()
    for s in raw:
        if not s:
            raise EmptyInput("empty simplex in input")
        if any(not isinstance(v, int) or v < 0 for v in s):
            raise ValueError(f"vertex ids must be nonnegative integers: {s}")
        key = tuple(sorted(s))
        if len(set(key)) != len(key):
            raise ValueError(f"repeated vertex in simplex {s}")
        if key in seen:
            raise DuplicateSimplex(f"simplex {key} listed twice")
        seen.add(key)
    closed: set[tuple[int, ...]] = set()
    for s in seen:
        for k in range(1, len(s) + 1):
            closed.update(combinations(s, k))
    return SimplicialComplex(closed)


def closure(K: SimplicialComplex, A: Iterable[int]) -> frozenset[int]:
    return K.closure(A)


def mouth(K: SimplicialComplex, A: Iterable[int]) -> frozenset[int]:
    return K.mouth(A)


def is_convex(K: SimplicialComplex, A: Iterable[int]) -> bool:
    return K.is_convex(A)
