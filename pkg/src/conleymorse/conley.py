"""Morse decompositions, index pairs, Conley indices and Conley-Morse graphs."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field as dc_field

from .dynamics import (
    CRITICAL_VECTOR,
    MULTI_VECTOR_CYCLE,
    build_digraph,
    direct_connection,
    essential_sccs,
    invariant_part,
    is_isolated,
    push_forward,
    reach,
)
from .errors import (
    DifferentN,
    InteriorEscapes,
    InvariantChanged,
    NotClosed,
    NotContained,
    NotIsolated,
    OrderCycle,
    ValidationFailed,
)
from .linalg import Homology, relative_homology
from .mvf import MultivectorField, intersect_fields

IN_N = "in-N"
PLAIN = "plain"


@dataclass(frozen=True, eq=False)
class IndexPair:
    """A nested pair of closed sets ``E ⊆ P ⊆ N`` for the invariant set ``S``."""

    P: frozenset[int]
    E: frozenset[int]
    N: frozenset[int]
    field: MultivectorField
    kind: str = IN_N
    S: frozenset[int] | None = None

    @property
    def interior(self) -> frozenset[int]:
        return self.P - self.E

    @property
    def key(self) -> tuple[frozenset[int], frozenset[int]]:
        return (self.P, self.E)

    def homology(self, p: int = 2) -> Homology:
        return relative_homology(self.field.complex, self.P, self.E, p)


@dataclass(frozen=True)
class ValidationReport:
    """Per-clause outcome of index-pair validation.

    ``clauses`` maps a clause name to the sorted witness simplices violating
    it (empty tuple means the clause holds). ``S`` is the recomputed
    invariant part of ``P \\ E``.
    """

    kind: str
    clauses: dict[str, tuple[int, ...]]
    S: frozenset[int]

    @property
    def ok(self) -> bool:
        return not any(self.clauses.values())

    def __bool__(self) -> bool:
        return self.ok

    def failures(self) -> list[str]:
        return [name for name, w in self.clauses.items() if w]


def validate_index_pair(field: MultivectorField, ip: IndexPair, p: int | None = None) -> ValidationReport:
    P, E, N = ip.P, ip.E, ip.N
    c: dict[str, tuple[int, ...]] = {}
    c["closed"] = tuple(sorted(set().union(*(_closedness_witness(field, A) for A in (P, E, N)))))
    c["nested"] = tuple(sorted((E - P) | (P - N)))
    FE = field.fv_set(E)
    interior = P - E
    if ip.kind == IN_N:
        c["exit"] = tuple(sorted((FE & N) - E))
        c["forward"] = tuple(sorted((field.fv_set(P) & N) - P))
        c["interior"] = tuple(sorted(field.fv_set(interior) - N))
    else:
        c["exit"] = tuple(sorted((FE & P) - E))
        c["forward"] = tuple(sorted(field.fv_set(interior) - P))
    S = invariant_part(field, interior, p)
    c["invariant"] = tuple(sorted(S ^ ip.S)) if ip.S is not None else ()
    return ValidationReport(ip.kind, c, S)


def _closedness_witness(field: MultivectorField, A: frozenset[int]) -> tuple[int, ...]:
    K = field.complex
    return tuple(sorted(s for s in A if not K.faces[s] <= A))


def _validated(field: MultivectorField, ip: IndexPair, what: str) -> IndexPair:
    rep = validate_index_pair(field, ip)
    if not rep:
        raise ValidationFailed(f"{what}: clauses {rep.failures()} fail")
    if ip.S is None:
        return IndexPair(ip.P, ip.E, ip.N, ip.field, ip.kind, rep.S)
    return ip


@dataclass(frozen=True)
class MorseDecomposition:
    """Minimal Morse sets of the invariant part of ``N`` with their flow order.

    ``order`` holds pairs ``(i, j)`` with ``sets[i] < sets[j]``, meaning some
    path in ``N`` runs from ``sets[j]`` to ``sets[i]``. ``hasse`` is its
    transitive reduction.
    """

    field: MultivectorField
    N: frozenset[int]
    sets: tuple[frozenset[int], ...]
    kinds: tuple[str, ...]
    order: frozenset[tuple[int, int]]
    hasse: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.sets)

    def index_of(self, A: Iterable[int]) -> int | None:
        """Index of the Morse set containing all of ``A``, if any."""
        A = frozenset(A)
        for i, m in enumerate(self.sets):
            if A <= m:
                return i
        return None


def minimal_morse_decomposition(field: MultivectorField, N: Iterable[int], p: int | None = None) -> MorseDecomposition:
    N = frozenset(N)
    if not field.complex.is_closed(N):
        raise NotClosed("isolating set is not closed")
    comps = essential_sccs(field, invariant_part(field, N, p), p)
    return _ordered(field, N, [c.members for c in comps], [c.anchor_kind for c in comps], p)


def morse_decomposition_from_sets(
    field: MultivectorField, N: Iterable[int], sets: Iterable[Iterable[int]], p: int | None = None
) -> MorseDecomposition:
    """A user-supplied family of disjoint isolated invariant sets, ordered by flow."""
    N = frozenset(N)
    if not field.complex.is_closed(N):
        raise NotClosed("isolating set is not closed")
    sets = sorted((frozenset(m) for m in sets), key=min)
    seen: set[int] = set()
    for m in sets:
        if m & seen:
            raise NotIsolated(f"Morse sets overlap at simplex {min(m & seen)}")
        seen |= m
    crit = {s for v in field.critical_vectors(p) for s in field.vectors[v]}
    kinds = [CRITICAL_VECTOR if m & crit else MULTI_VECTOR_CYCLE for m in sets]
    return _ordered(field, N, sets, kinds, p)


def _ordered(
    field: MultivectorField, N: frozenset[int], sets: Sequence[frozenset[int]], kinds: Sequence[str], p: int | None
) -> MorseDecomposition:
    sets = tuple(sets)
    for m in sets:
        rep = is_isolated(field, N, m, p)
        if not rep:
            raise NotIsolated(f"Morse set with min simplex {min(m)} fails '{rep.failed}' (witness {list(rep.witness)})")
    G = build_digraph(field, N)
    owner = {s: i for i, m in enumerate(sets) for s in m}
    below: list[set[int]] = []
    for j, m in enumerate(sets):
        hit = {owner[s] for s in reach(G.out, m) if s in owner} - {j}
        below.append(hit)
    order = frozenset((i, j) for j in range(len(sets)) for i in below[j])
    for i, j in order:
        if (j, i) in order:
            raise OrderCycle(f"Morse sets {i} and {j} reach each other")
    hasse = tuple(
        sorted((i, j) for (i, j) in order if not any((i, k) in order and (k, j) in order for k in range(len(sets))))
    )
    return MorseDecomposition(field, N, sets, tuple(kinds), order, hasse)


def index_pair_pf(field: MultivectorField, N: Iterable[int], S: Iterable[int], p: int | None = None) -> IndexPair:
    """The push-forward index pair (pf_N(cl S), pf_N(mo S)) in ``N``."""
    N = frozenset(N)
    S = frozenset(S)
    rep = is_isolated(field, N, S, p)
    if not rep:
        raise NotIsolated(f"set fails '{rep.failed}' (witness {list(rep.witness)})")
    K = field.complex
    ip = IndexPair(push_forward(field, N, K.closure(S)), push_forward(field, N, K.mouth(S)), N, field, IN_N, S)
    return _validated(field, ip, "push-forward pair")


def closure_pair(field: MultivectorField, S: Iterable[int]) -> IndexPair:
    """The plain index pair (cl S, mo S); its isolating set is cl S."""
    S = frozenset(S)
    K = field.complex
    cl = K.closure(S)
    return IndexPair(cl, K.mouth(S), cl, field, PLAIN, S)


def intersect_index_pairs(ip1: IndexPair, ip2: IndexPair) -> IndexPair:
    """(P1 ∩ P2, E1 ∩ E2) in N under the intersection field, with S recomputed."""
    if ip1.N != ip2.N:
        raise DifferentN("index pairs live in different isolating sets")
    f = intersect_fields(ip1.field, ip2.field)
    ip = IndexPair(ip1.P & ip2.P, ip1.E & ip2.E, ip1.N, f, IN_N)
    return _validated(f, ip, "intersection pair")


def restrict_index_pair(ip: IndexPair, N2: Iterable[int]) -> IndexPair:
    """(P ∩ N', E ∩ N') as an index pair in the smaller isolating set N'."""
    N2 = frozenset(N2)
    field = ip.field
    if not field.complex.is_closed(N2):
        raise NotClosed("restricting set is not closed")
    if not N2 <= ip.N:
        raise NotContained("restricting set is not inside N")
    if not ip.interior <= N2:
        raise InteriorEscapes(f"simplex {min(ip.interior - N2)} of P minus E lies outside N'")
    S = ip.S if ip.S is not None else invariant_part(field, ip.interior)
    out = IndexPair(ip.P & N2, ip.E & N2, N2, field, IN_N, S)
    return _validated(field, out, "restricted pair")


def thicken_index_pair(
    field: MultivectorField, ip: IndexPair, decomposition: MorseDecomposition, k: int
) -> IndexPair:
    """Grow ``P`` by whole multivectors in ``k`` rounds without changing the index.

    Each round adds, in vector-id order, every multivector inside ``N`` that
    avoids ``E``, whose mouth lies in ``P`` as it stood at the start of the
    round, and that meets no Morse set outside ``S``.
    """
    if k <= 0:
        return ip
    S = ip.S if ip.S is not None else invariant_part(field, ip.interior)
    K = field.complex
    foreign = frozenset().union(*(m for m in decomposition.sets if not m <= S))
    P = set(ip.P)
    for _ in range(k):
        frozen_P = frozenset(P)
        added = [
            V
            for V in field.vectors
            if V <= ip.N and not V & ip.E and not V <= frozen_P and not V & foreign and K.mouth(V) <= frozen_P
        ]
        if not added:
            break
        for V in added:
            P |= V
    out = IndexPair(frozenset(P), ip.E, ip.N, field, IN_N, S)
    rep = validate_index_pair(field, out)
    if rep.clauses["invariant"]:
        raise InvariantChanged("thickening changed the invariant set")
    return _validated(field, out, "thickened pair")


@dataclass(frozen=True)
class ConleyIndex:
    betti: dict[int, int]

    @property
    def poincare(self) -> list[int]:
        coeffs = [self.betti.get(k, 0) for k in range(max(self.betti, default=-1) + 1)]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return coeffs

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.poincare):
            if not c:
                continue
            mono = "" if k == 0 else "t" if k == 1 else f"t^{k}"
            coeff = "" if c == 1 and mono else str(c)
            terms.append(coeff + mono)
        return " + ".join(terms) if terms else "0"


def conley_index(ip: IndexPair, p: int = 2) -> ConleyIndex:
    return ConleyIndex({k: b for k, b in ip.homology(p).betti.items() if b})


@dataclass(frozen=True)
class ConleyMorseGraph:
    """Vertices are Morse-set indices; an edge (u, v) records a direct connection u -> v."""

    decomposition: MorseDecomposition
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    poincare: dict[int, list[int]]
    pairs: dict[int, IndexPair] = dc_field(default_factory=dict)

    @property
    def sets(self) -> tuple[frozenset[int], ...]:
        return self.decomposition.sets


def connection_edges(field: MultivectorField, N: frozenset[int], sets: Sequence[frozenset[int]]) -> list[tuple[int, int]]:
    return [
        (u, v)
        for u in range(len(sets))
        for v in range(len(sets))
        if u != v and direct_connection(field, N, sets, u, v) is not None
    ]


def conley_morse_graph(
    field: MultivectorField,
    N: Iterable[int],
    decomposition: MorseDecomposition,
    p: int = 2,
    pairs: dict[int, IndexPair] | None = None,
) -> ConleyMorseGraph:
    N = frozenset(N)
    sets = decomposition.sets
    if pairs is None:
        pairs = {i: index_pair_pf(field, N, m) for i, m in enumerate(sets)}
    poincare = {i: conley_index(pairs[i], p).poincare for i in range(len(sets))}
    edges = tuple(connection_edges(field, N, sets))
    return ConleyMorseGraph(decomposition, tuple(range(len(sets))), edges, poincare, dict(pairs))
