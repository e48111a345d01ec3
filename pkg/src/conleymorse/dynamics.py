"""Reachability dynamics of a multivector field restricted to a set of simplices."""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field as dc_field
from math import ceil

from .errors import NotClosed, NotContained, NotInvariant, TooLarge
from .mvf import MultivectorField

CRITICAL_VECTOR = "critical-vector"
MULTI_VECTOR_CYCLE = "multi-vector-cycle"


@dataclass(frozen=True)
class DynDigraph:
    """Digraph on ``domain`` with an edge s -> t iff t lies in fv(s) and in the domain."""

    field: MultivectorField
    domain: frozenset[int]
    out: Mapping[int, frozenset[int]]
    _into: dict[int, set[int]] = dc_field(default_factory=dict, repr=False, compare=False)

    @property
    def into(self) -> dict[int, set[int]]:
        if not self._into and self.domain:
            for s in self.domain:
                self._into[s] = set()
            for s, targets in self.out.items():
                for t in targets:
                    self._into[t].add(s)
        return self._into


def build_digraph(field: MultivectorField, A: Iterable[int]) -> DynDigraph:
    A = frozenset(A)
    return DynDigraph(field, A, {s: field.fv(s) & A for s in A})


def reach(succ: Mapping[int, Iterable[int]], sources: Iterable[int]) -> set[int]:
    """Everything reachable from ``sources`` (inclusive) along ``succ``."""
    seen = set(sources)
    queue = deque(seen)
    while queue:
        for t in succ[queue.popleft()]:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def strongly_connected_components(
    nodes: Iterable[int], succ: Mapping[int, Iterable[int]]
) -> list[frozenset[int]]:
    """Tarjan's algorithm without recursion; components sorted by smallest member."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    stack: list[int] = []
    on_stack: set[int] = set()
    comps: list[frozenset[int]] = []
    counter = 0
    for root in sorted(nodes):
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(sorted(succ[root])))]
        while work:
            v, it = work[-1]
            descended = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(succ[w]))))
                    descended = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(frozenset(comp))
    comps.sort(key=min)
    return comps


@dataclass(frozen=True)
class EssentialScc:
    members: frozenset[int]
    anchor_kind: str


def essential_sccs(field: MultivectorField, A: Iterable[int], p: int | None = None) -> list[EssentialScc]:
    """Strongly connected components that carry an essential solution.

    A component qualifies if it contains a simplex of a critical multivector
    or meets at least two multivectors.
    """
    G = build_digraph(field, A)
    out = []
    for comp in strongly_connected_components(G.domain, G.out):
        vectors = field.vectors_meeting(comp)
        for v in vectors:
            assert field.vectors[v] & G.domain <= comp, "multivector split across components"
        if any(field.is_critical(v, p) for v in vectors):
            out.append(EssentialScc(comp, CRITICAL_VECTOR))
        elif len(vectors) >= 2:
            out.append(EssentialScc(comp, MULTI_VECTOR_CYCLE))
    return out


def invariant_part(field: MultivectorField, A: Iterable[int], p: int | None = None) -> frozenset[int]:
    """Simplices of ``A`` on a path inside ``A`` between essential components."""
    G = build_digraph(field, A)
    core: set[int] = set()
    for c in essential_sccs(field, G.domain, p):
        core |= c.members
    if not core:
        return frozenset()
    return frozenset(reach(G.out, core) & reach(G.into, core))


def _require_closed(field: MultivectorField, N: frozenset[int]) -> None:
    if not field.complex.is_closed(N):
        raise NotClosed("isolating set is not closed")


def push_forward(field: MultivectorField, N: Iterable[int], A: Iterable[int]) -> frozenset[int]:
    """Simplices of ``N`` reachable from ``A`` by paths inside ``N``."""
    N = frozenset(N)
    A = frozenset(A)
    _require_closed(field, N)
    if not A <= N:
        raise NotContained(f"simplex {min(A - N)} lies outside N")
    return frozenset(reach({s: field.fv(s) & N for s in N}, A))


@dataclass(frozen=True)
class IsolationReport:
    ok: bool
    failed: str | None = None
    witness: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _path_leaving_and_returning(field: MultivectorField, N: frozenset[int], S: frozenset[int]) -> list[int] | None:
    parent: dict[int, int] = {}
    queue: deque[int] = deque()
    for s in sorted(S):
        for t in sorted(field.fv(s) & N):
            if t not in S and t not in parent:
                parent[t] = s
                queue.append(t)
    while queue:
        x = queue.popleft()
        for t in sorted(field.fv(x) & N):
            if t in S:
                path = [t, x]
                while path[-1] not in S:
                    path.append(parent[path[-1]])
                return path[::-1]
            if t not in parent:
                parent[t] = x
                queue.append(t)
    return None


def is_isolated(field: MultivectorField, N: Iterable[int], S: Iterable[int], p: int | None = None) -> IsolationReport:
    """Check that ``S`` is an isolated invariant set with isolating set ``N``.

    On failure the report names the failing condition ("contained",
    "invariant", "compatible" or "isolation") and carries a witness.
    """
    N = frozenset(N)
    S = frozenset(S)
    _require_closed(field, N)
    if not S <= N:
        return IsolationReport(False, "contained", tuple(sorted(S - N)))
    inv = invariant_part(field, S, p)
    if inv != S:
        return IsolationReport(False, "invariant", tuple(sorted(S - inv)))
    for v in sorted(field.vectors_meeting(S)):
        rest = field.vectors[v] - S
        if rest:
            return IsolationReport(False, "compatible", (min(field.vectors[v] & S), min(rest)))
    path = _path_leaving_and_returning(field, N, S)
    if path is not None:
        return IsolationReport(False, "isolation", tuple(path))
    return IsolationReport(True)


def isolated_completion(field: MultivectorField, N: Iterable[int], S: Iterable[int], p: int | None = None) -> frozenset[int]:
    """``S`` together with every simplex on a path in ``N`` from ``S`` back to ``S``."""
    N = frozenset(N)
    S = frozenset(S)
    _require_closed(field, N)
    if not S <= N:
        raise NotContained(f"simplex {min(S - N)} lies outside N")
    if invariant_part(field, S, p) != S:
        raise NotInvariant("set is not invariant")
    G = build_digraph(field, N)
    return S | frozenset(reach(G.out, S) & reach(G.into, S))


def direct_connection(
    field: MultivectorField,
    N: Iterable[int],
    morse_sets: Sequence[Iterable[int]],
    src: int,
    dst: int,
) -> list[int] | None:
    """A path in ``N`` from one Morse set to another whose interior avoids all of them.

    For ``src == dst`` the interior must be nonempty. Returns the simplex ids
    along the path, or ``None``.
    """
    N = frozenset(N)
    sets = [frozenset(m) for m in morse_sets]
    blocked = frozenset().union(*sets) if sets else frozenset()
    source, target = sets[src], sets[dst]
    parent: dict[int, int] = {}
    queue: deque[int] = deque()
    for s in sorted(source):
        for t in sorted(field.fv(s) & N):
            if src != dst and t in target:
                return [s, t]
            if t not in blocked and t not in parent:
                parent[t] = s
                queue.append(t)
    while queue:
        x = queue.popleft()
        for t in sorted(field.fv(x) & N):
            if t in target:
                path = [t, x]
                while path[-1] not in source:
                    path.append(parent[path[-1]])
                return path[::-1]
            if t not in blocked and t not in parent:
                parent[t] = x
                queue.append(t)
    return None


# --- exponential reference implementation used by the test-suite ---------


def _simple_cycles(succ: Mapping[int, Sequence[int]]) -> list[tuple[int, ...]]:
    cycles = []
    for start in sorted(succ):
        stack = [(start, iter(succ[start]))]
        path = [start]
        on_path = {start}
        while stack:
            node, it = stack[-1]
            advanced = False
            for w in it:
                if w == start:
                    cycles.append(tuple(path))
                elif w > start and w not in on_path:
                    path.append(w)
                    on_path.add(w)
                    stack.append((w, iter(succ[w])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                on_path.discard(path.pop())
    return cycles


def _bfs_path(succ: Mapping[int, Sequence[int]], sources: Iterable[int], target: int) -> list[int] | None:
    sources = list(sources)
    parent: dict[int, int | None] = {s: None for s in sources}
    queue = deque(sources)
    while queue:
        x = queue.popleft()
        if x == target:
            path = [x]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        for t in succ[x]:
            if t not in parent:
                parent[t] = x
                queue.append(t)
    return None


def _is_essential_window(field: MultivectorField, seq: list[int], lead: int, tail: int, p: int | None) -> bool:
    """Literal check of the exit condition on every index of one period-aligned core."""
    labels = [field.vector_of[s] for s in seq]
    for i in range(lead, len(seq) - tail):
        v = labels[i]
        if field.is_critical(v, p):
            continue
        if all(w == v for w in labels[:i]) or all(w == v for w in labels[i + 1:]):
            return False
    return True


def oracle_invariant_part(field: MultivectorField, A: Iterable[int], p: int | None = None) -> frozenset[int]:
    """Reference invariant part by explicit construction of essential solutions.

    A simplex is accepted when some eventually periodic bi-infinite solution
    through it (a back cycle, a connecting walk, a forward cycle) satisfies
    the exit condition literally on a window of length at least 4|A|.
    """
    A = frozenset(A)
    if len(A) > 14:
        raise TooLarge(f"oracle limited to 14 simplices, got {len(A)}")
    if not A:
        return frozenset()
    succ = {s: sorted(field.fv(s) & A) for s in A}
    by_nodes: dict[frozenset[int], tuple[int, ...]] = {}
    for cyc in _simple_cycles(succ):
        crit = any(field.is_critical(field.vector_of[s], p) for s in cyc)
        if crit or len({field.vector_of[s] for s in cyc}) >= 2:
            by_nodes.setdefault(frozenset(cyc), cyc)
    good = list(by_nodes.values())
    reach_from = [reach(succ, c) for c in good]
    span = 2 * len(A)
    result = set()
    for sigma in sorted(A):
        ahead = reach(succ, [sigma])
        backs = [i for i, r in enumerate(reach_from) if sigma in r]
        fronts = [i for i, c in enumerate(good) if ahead & set(c)]
        found = False
        for b in backs:
            to_sigma = _bfs_path(succ, good[b], sigma)
            start = good[b].index(to_sigma[0])
            back = list(good[b][start + 1:] + good[b][: start + 1])
            for f in fronts:
                to_cycle = _path_to_set(succ, sigma, set(good[f]))
                entry = good[f].index(to_cycle[-1])
                front = list(good[f][entry:] + good[f][:entry])
                rb = ceil(span / len(back)) + 1
                rf = ceil(span / len(front)) + 1
                seq = back * rb + to_sigma[1:] + to_cycle[1:] + front[1:] + front * rf
                if any(seq[i + 1] not in succ[seq[i]] for i in range(len(seq) - 1)):
                    continue
                if _is_essential_window(field, seq, len(back), len(front), p):
                    found = True
                    break
            if found:
                break
        if found:
            result.add(sigma)
    return frozenset(result)


def _path_to_set(succ: Mapping[int, Sequence[int]], source: int, targets: set[int]) -> list[int]:
    parent: dict[int, int | None] = {source: None}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        if x in targets:
            path = [x]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        for t in succ[x]:
            if t not in parent:
                parent[t] = x
                queue.append(t)
    raise AssertionError("target set unreachable")
