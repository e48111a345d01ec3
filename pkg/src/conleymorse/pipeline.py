"""End-to-end constructions: Conley-Morse filtrations, relevant graphs, redundancy elimination."""

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field as dc_field

from .complex import SimplicialComplex
from .conley import (
    ConleyMorseGraph,
    IndexPair,
    MorseDecomposition,
    conley_morse_graph,
    connection_edges,
    index_pair_pf,
    intersect_index_pairs,
    minimal_morse_decomposition,
    morse_decomposition_from_sets,
    restrict_index_pair,
    thicken_index_pair,
)
from .errors import EmptyInput, MissingIndexPair
from .linalg import Homology, relative_homology
from .mvf import MultivectorField, intersect_fields
from .zigzag import Bar, Graph, ZigzagModule, build_graph_zigzag, interval_decompose, modules_from_homologies

PairKey = tuple[frozenset[int], frozenset[int]]


@dataclass(frozen=True, eq=False)
class FiltrationSequence:
    """A maximal feasible run of index pairs over consecutive fields.

    ``start`` is the 0-based index of the first field; ``morse[j]`` is the
    Morse-set index used at field ``start + j``. Global slot positions are
    1-based: field ``i`` (0-based) sits at ``2i + 1`` and the intersection
    between fields ``i`` and ``i + 1`` at ``2i + 2``.
    """

    start: int
    morse: tuple[int, ...]
    pairs: tuple[IndexPair, ...]
    intersections: tuple[IndexPair, ...]

    @property
    def end(self) -> int:
        return self.start + len(self.pairs) - 1

    @property
    def first_pos(self) -> int:
        return 2 * self.start + 1

    @property
    def last_pos(self) -> int:
        return 2 * self.end + 1

    def slots(self) -> list[IndexPair]:
        out = []
        for j, ip in enumerate(self.pairs):
            out.append(ip)
            if j < len(self.intersections):
                out.append(self.intersections[j])
        return out

    def slot_keys(self) -> list[PairKey]:
        return [ip.key for ip in self.slots()]

    def span(self, a: int, b: int) -> tuple[PairKey, ...] | None:
        """Slot contents over global positions a..b, or None if not covered."""
        if a < self.first_pos or b > self.last_pos:
            return None
        keys = self.slot_keys()
        return tuple(keys[q - self.first_pos] for q in range(a, b + 1))

    def signature(self) -> tuple:
        return (self.start, self.morse, tuple(self.slot_keys()))


def _check_pairs(pairs: Sequence[Sequence[IndexPair | None]], decompositions: Sequence[MorseDecomposition] | None) -> None:
    for i, row in enumerate(pairs):
        if decompositions is not None and len(row) != len(decompositions[i].sets):
            raise MissingIndexPair(f"field {i}: {len(row)} pairs for {len(decompositions[i].sets)} Morse sets")
        for j, ip in enumerate(row):
            if ip is None:
                raise MissingIndexPair(f"field {i}, Morse set {j} has no index pair")


def maximal_sequences(
    pairs: Sequence[Sequence[IndexPair]], linked: Callable[[int, IndexPair, IndexPair], bool]
) -> list[tuple[int, tuple[int, ...]]]:
    """Maximal sequences as ``(start, morse indices)``, following the incremental sweep.

    ``linked(i, a, b)`` decides whether pair ``a`` of field ``i`` may be
    followed by pair ``b`` of field ``i + 1``.
    """
    alive: list[tuple[int, tuple[int, ...]]] = []
    done: list[tuple[int, tuple[int, ...]]] = []
    for i, row in enumerate(pairs):
        to_remove: set[tuple[int, tuple[int, ...]]] = set()
        still_alive: list[tuple[int, tuple[int, ...]]] = []
        in_sequence = [False] * len(row)
        for seq in alive:
            start, idx = seq
            last = pairs[i - 1][idx[-1]]
            for m, ip in enumerate(row):
                if linked(i - 1, last, ip):
                    still_alive.append((start, idx + (m,)))
                    in_sequence[m] = True
                    to_remove.add(seq)
        done += [seq for seq in alive if seq not in to_remove]
        alive = still_alive
        for m in range(len(row)):
            if not in_sequence[m]:
                alive.append((i, (m,)))
    done += alive
    return sorted(done)


def _feasible(_i: int, a: IndexPair, b: IndexPair) -> bool:
    return bool(a.interior & b.interior)


def find_conley_morse_filtrations(
    pairs: Sequence[Sequence[IndexPair]], decompositions: Sequence[MorseDecomposition] | None = None
) -> list[FiltrationSequence]:
    """All Conley-Morse filtrations for pairs sharing one isolating set.

    ``pairs[i][m]`` is the index pair of Morse set ``m`` of field ``i``.
    """
    _check_pairs(pairs, decompositions)
    out = []
    for start, idx in maximal_sequences(pairs, _feasible):
        chosen = tuple(pairs[start + j][m] for j, m in enumerate(idx))
        inter = tuple(intersect_index_pairs(a, b) for a, b in zip(chosen, chosen[1:]))
        out.append(FiltrationSequence(start, idx, chosen, inter))
    return out


def changing_n_sequences(
    pairs: Sequence[Sequence[IndexPair]], decompositions: Sequence[MorseDecomposition] | None = None
) -> list[FiltrationSequence]:
    """Conley-Morse filtrations when each field has its own isolating set.

    A link between consecutive pairs needs overlapping interiors, both
    contained in the common part of the two isolating sets. Intersection
    slots restrict both pairs to that common part first.
    """
    _check_pairs(pairs, decompositions)

    def linked(_i: int, a: IndexPair, b: IndexPair) -> bool:
        common = a.N & b.N
        return bool(a.interior & b.interior) and a.interior <= common and b.interior <= common

    out = []
    for start, idx in maximal_sequences(pairs, linked):
        chosen = tuple(pairs[start + j][m] for j, m in enumerate(idx))
        inter = []
        for a, b in zip(chosen, chosen[1:]):
            common = a.N & b.N
            inter.append(intersect_index_pairs(restrict_index_pair(a, common), restrict_index_pair(b, common)))
        out.append(FiltrationSequence(start, idx, chosen, tuple(inter)))
    return out


@dataclass(frozen=True)
class RelevantCMGraph:
    """Relevant part of the Conley-Morse graph of an intersection field.

    ``vertices`` index into ``decomposition.sets``; ``iota1``/``iota2`` send
    each vertex to the Morse set of the left/right field containing it.
    """

    decomposition: MorseDecomposition
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    iota1: dict[int, int]
    iota2: dict[int, int]
    witnesses: dict[tuple[int, int], list[int]] = dc_field(default_factory=dict)

    def graph(self) -> Graph:
        return Graph(self.vertices, self.edges)


def _relevant_path(
    field: MultivectorField, N: frozenset[int], source: frozenset[int], target: frozenset[int], blocked: frozenset[int]
) -> list[int] | None:
    parent: dict[int, int] = {s: -1 for s in source}
    queue = deque(sorted(source))
    while queue:
        x = queue.popleft()
        for t in sorted(field.fv(x) & N):
            if t in parent or t in blocked:
                continue
            parent[t] = x
            if t in target:
                path = [t]
                while parent[path[-1]] != -1:
                    path.append(parent[path[-1]])
                return path[::-1]
            queue.append(t)
    return None


def relevant_cm_graph(
    f1: MultivectorField,
    f2: MultivectorField,
    N: Iterable[int],
    dec1: MorseDecomposition | None = None,
    dec2: MorseDecomposition | None = None,
    edges1: Iterable[tuple[int, int]] | None = None,
    edges2: Iterable[tuple[int, int]] | None = None,
    p: int | None = None,
) -> RelevantCMGraph:
    N = frozenset(N)
    dec1 = dec1 or minimal_morse_decomposition(f1, N, p)
    dec2 = dec2 or minimal_morse_decomposition(f2, N, p)
    f12 = intersect_fields(f1, f2)
    dec12 = minimal_morse_decomposition(f12, N, p)
    iota1: dict[int, int] = {}
    iota2: dict[int, int] = {}
    for u, m in enumerate(dec12.sets):
        hits1 = [i for i, s in enumerate(dec1.sets) if m <= s]
        hits2 = [i for i, s in enumerate(dec2.sets) if m <= s]
        assert len(hits1) <= 1 and len(hits2) <= 1, "Morse set inside two flanking sets"
        if hits1 and hits2:
            iota1[u], iota2[u] = hits1[0], hits2[0]
    vertices = tuple(sorted(iota1))
    every = [*dec1.sets, *dec2.sets, *dec12.sets]
    edges = []
    witnesses = {}
    for u in vertices:
        for v in vertices:
            if u == v:
                continue
            permitted = {
                dec1.sets[iota1[u]], dec1.sets[iota1[v]],
                dec2.sets[iota2[u]], dec2.sets[iota2[v]],
                dec12.sets[u], dec12.sets[v],
            }
            blocked = frozenset().union(*(s for s in every if s not in permitted))
            path = _relevant_path(f12, N, dec12.sets[u], dec12.sets[v], blocked)
            if path is not None:
                edges.append((u, v))
                witnesses[(u, v)] = path
    for iota, f, dec, given in ((iota1, f1, dec1, edges1), (iota2, f2, dec2, edges2)):
        flank = set(given) if given is not None else set(connection_edges(f, dec.N, dec.sets))
        for u, v in edges:
            assert iota[u] == iota[v] or (iota[u], iota[v]) in flank, "vertex map is not edge-preserving"
    return RelevantCMGraph(dec12, vertices, tuple(edges), iota1, iota2, witnesses)


def cm_as_graph(g: ConleyMorseGraph) -> Graph:
    return Graph(g.vertices, g.edges)


def graph_filtration(
    cm_graphs: Sequence[ConleyMorseGraph], relevant: Sequence[RelevantCMGraph], p: int = 2
) -> list[ZigzagModule]:
    """H_0 and H_1 modules of ``G_1 <- G_12 -> G_2 <- ...`` with the iota vertex maps."""
    graphs: list[Graph] = []
    maps = []
    for i, g in enumerate(cm_graphs):
        graphs.append(cm_as_graph(g))
        if i < len(relevant):
            r = relevant[i]
            graphs.append(r.graph())
            maps.append((r.iota1, r.iota2))
    return build_graph_zigzag(graphs, maps, p)


@dataclass(frozen=True, order=True)
class SourcedBar:
    bar: Bar
    source: int


def eliminate_redundancies(
    filtrations: Sequence[FiltrationSequence], barcodes: Sequence[Sequence[Bar]], literal: bool = False
) -> list[SourcedBar]:
    """Drop bars whose spanned subfiltration occurs identically in another filtration.

    Runs per homology degree with one ``forbidden`` flag per (filtration,
    span); of several identical copies only the last filtration keeps it.
    By default a flagged filtration still makes a bar redundant when it holds
    a strictly longer bar over the same content, so the result is exactly the
    set of maximal bars. ``literal=True`` lets the flag veto unconditionally.
    """
    spans = [{(b.dim, b.birth, b.death) for b in bars} for bars in barcodes]
    kept: list[SourcedBar] = []
    forbidden: set[tuple[int, int, int, int]] = set()
    for i, F in enumerate(filtrations):
        for bar in barcodes[i]:
            a, b, k = bar.birth, bar.death, bar.dim
            mine = F.span(a, b)
            redundant = False
            for j, G in enumerate(filtrations):
                if j == i or G.span(a, b) != mine:
                    continue
                dominates = not literal and _strictly_covers(spans[j], k, a, b)
                if (j, k, a, b) not in forbidden or dominates:
                    redundant = True
                    forbidden.add((i, k, a, b))
            if not redundant:
                kept.append(SourcedBar(bar, i))
    return sorted(kept, key=lambda sb: (sb.bar, sb.source))


def _strictly_covers(spans: set[tuple[int, int, int]], k: int, a: int, b: int) -> bool:
    return any(d == k and c <= a and b <= e and (c, e) != (a, b) for d, c, e in spans)


@dataclass
class Bundle:
    """Validated pipeline input."""

    complex: SimplicialComplex
    fields: list[MultivectorField]
    isolating: list[frozenset[int]]
    p: int = 2
    thicken: int = 0
    morse_sets: list[list[frozenset[int]] | None] | None = None

    @property
    def single_n(self) -> bool:
        return all(N == self.isolating[0] for N in self.isolating)


@dataclass
class CombinedBarcode:
    conley_bars: list[SourcedBar]
    graph_bars: list[Bar]
    filtrations: list[FiltrationSequence]
    decompositions: list[MorseDecomposition]
    cm_graphs: list[ConleyMorseGraph]
    relevant: list[RelevantCMGraph]
    filtration_bars: list[list[Bar]] = dc_field(default_factory=list)


def index_pairs_for(
    field: MultivectorField, dec: MorseDecomposition, thicken: int = 0, p: int | None = None
) -> list[IndexPair]:
    pairs = [index_pair_pf(field, dec.N, m, p) for m in dec.sets]
    if thicken:
        pairs = [thicken_index_pair(field, ip, dec, thicken) for ip in pairs]
    return pairs


def filtration_barcode(
    K: SimplicialComplex, F: FiltrationSequence, p: int, cache: dict[PairKey, Homology] | None = None
) -> list[Bar]:
    """Bars of one Conley-Morse filtration in global positions, all degrees."""
    cache = {} if cache is None else cache
    homs = []
    for key in F.slot_keys():
        h = cache.get(key)
        if h is None:
            h = cache[key] = relative_homology(K, key[0], key[1], p)
        homs.append(h)
    offset = 2 * F.start
    bars: list[Bar] = []
    for m in modules_from_homologies(homs, max(K.dim, 0), p):
        bars += [b.shifted(offset) for b in interval_decompose(m)]
    return sorted(bars)


def full_barcode(bundle: Bundle) -> CombinedBarcode:
    if not bundle.fields:
        raise EmptyInput("no fields given")
    K, p = bundle.complex, bundle.p
    overrides = bundle.morse_sets or [None] * len(bundle.fields)
    decs = [
        minimal_morse_decomposition(f, N, p) if sets is None else morse_decomposition_from_sets(f, N, sets, p)
        for f, N, sets in zip(bundle.fields, bundle.isolating, overrides)
    ]
    pairs = [index_pairs_for(f, d, bundle.thicken, p) for f, d in zip(bundle.fields, decs)]
    if bundle.single_n:
        filtrations = find_conley_morse_filtrations(pairs, decs)
    else:
        filtrations = changing_n_sequences(pairs, decs)
    cache: dict[PairKey, Homology] = {}
    per_filtration = [filtration_barcode(K, F, p, cache) for F in filtrations]
    conley_bars = eliminate_redundancies(filtrations, per_filtration)
    cms = [
        conley_morse_graph(f, d.N, d, p, dict(enumerate(row))) for f, d, row in zip(bundle.fields, decs, pairs)
    ]
    relevant = []
    for i in range(len(bundle.fields) - 1):
        N12 = bundle.isolating[i] & bundle.isolating[i + 1]
        relevant.append(
            relevant_cm_graph(
                bundle.fields[i], bundle.fields[i + 1], N12, decs[i], decs[i + 1], cms[i].edges, cms[i + 1].edges, p
            )
        )
    graph_bars = sorted(b for m in graph_filtration(cms, relevant, p) for b in interval_decompose(m))
    return CombinedBarcode(conley_bars, graph_bars, filtrations, decs, cms, relevant, per_filtration)
