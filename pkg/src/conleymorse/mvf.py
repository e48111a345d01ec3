"""Multivector fields: validated partitions into convex sets and their dynamics generator."""

from __future__ import annotations

from collections.abc import Iterable

from .complex import SimplicialComplex
from .errors import DifferentComplex, NotConvex, NotPartition
from .linalg import relative_homology


class MultivectorField:
    """A partition of a complex into convex multivectors.

    Vector ids are assigned in order of the smallest simplex id each vector
    contains. ``p`` is the default characteristic used for criticality.
    """

    def __init__(self, K: SimplicialComplex, partition: Iterable[Iterable[int]], p: int = 2) -> None:
        parts = [frozenset(v) for v in partition]
        vector_of: dict[int, int] = {}
        for v in parts:
            if not v:
                raise NotPartition("empty multivector")
            for s in v:
                if not 0 <= s < len(K):
                    raise NotPartition(f"simplex id {s} out of range")
                if s in vector_of:
                    raise NotPartition(f"simplex {s} appears in two multivectors")
                vector_of[s] = 0
        missing = K.all - vector_of.keys()
        if missing:
            raise NotPartition(f"simplex {min(missing)} is not covered")
        parts.sort(key=min)
        for i, v in enumerate(parts):
            witness = K.convexity_witness(v)
            if witness is not None:
                raise NotConvex(i, witness)
            for s in v:
                vector_of[s] = i
        self.complex = K
        self.p = p
        self.vectors: tuple[frozenset[int], ...] = tuple(parts)
        self.vector_of: tuple[int, ...] = tuple(vector_of[s] for s in range(len(K)))
        self._fv: dict[int, frozenset[int]] = {}
        self._critical: dict[tuple[int, int], bool] = {}
        self._meets: dict[int, tuple[MultivectorField, MultivectorField]] = {}

    def __len__(self) -> int:
        return len(self.vectors)

    def __repr__(self) -> str:
        return f"MultivectorField({len(self.vectors)} vectors on {len(self.complex)} simplices)"

    def same_partition(self, other: MultivectorField) -> bool:
        return self.complex is other.complex and self.vectors == other.vectors

    def vector(self, sigma: int) -> frozenset[int]:
        return self.vectors[self.vector_of[sigma]]

    def fv(self, sigma: int) -> frozenset[int]:
        """The multivector of ``sigma`` united with the closure of ``sigma``."""
        out = self._fv.get(sigma)
        if out is None:
            out = self.vector(sigma) | self.complex.closure_of(sigma)
            self._fv[sigma] = out
        return out

    def fv_set(self, A: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for s in A:
            out |= self.fv(s)
        return frozenset(out)

    def is_critical(self, v: int, p: int | None = None) -> bool:
        p = self.p if p is None else p
        key = (v, p)
        hit = self._critical.get(key)
        if hit is None:
            V = self.vectors[v]
            K = self.complex
            h = relative_homology(K, K.closure(V), K.mouth(V), p)
            hit = not h.is_trivial()
            self._critical[key] = hit
        return hit

    def critical_vectors(self, p: int | None = None) -> list[int]:
        return [v for v in range(len(self.vectors)) if self.is_critical(v, p)]

    def vectors_meeting(self, A: Iterable[int]) -> frozenset[int]:
        return frozenset(self.vector_of[s] for s in A)

    def is_compatible(self, A: Iterable[int]) -> bool:
        """True iff ``A`` is a union of whole multivectors."""
        A = frozenset(A)
        return all(self.vectors[v] <= A for v in self.vectors_meeting(A))


def build_field(K: SimplicialComplex, partition: Iterable[Iterable[int]], p: int = 2) -> MultivectorField:
    return MultivectorField(K, partition, p)


def fv(field: MultivectorField, sigma: int) -> frozenset[int]:
    return field.fv(sigma)


def is_critical(field: MultivectorField, v: int, p: int | None = None) -> bool:
    return field.is_critical(v, p)


def _same_complex(f1: MultivectorField, f2: MultivectorField) -> None:
    if f1.complex is not f2.complex:
        raise DifferentComplex("fields live on different complexes")


def is_refinement(f1: MultivectorField, f2: MultivectorField) -> bool:
    """True iff every vector of ``f1`` lies inside a single vector of ``f2``."""
    _same_complex(f1, f2)
    return all(len({f2.vector_of[s] for s in v}) == 1 for v in f1.vectors)


def intersect_fields(f1: MultivectorField, f2: MultivectorField) -> MultivectorField:
    """The field of nonempty pairwise intersections of vectors."""
    _same_complex(f1, f2)
    hit = f1._meets.get(id(f2))
    if hit is not None and hit[0] is f2:
        return hit[1]
    groups: dict[tuple[int, int], set[int]] = {}
    for s in range(len(f1.complex)):
        groups.setdefault((f1.vector_of[s], f2.vector_of[s]), set()).add(s)
    out = MultivectorField(f1.complex, groups.values(), f1.p)
    assert is_refinement(out, f1) and is_refinement(out, f2)
    f1._meets[id(f2)] = (f2, out)
    return out
