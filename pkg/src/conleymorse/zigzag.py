"""Zigzag modules over F_p: construction from pair towers and graph towers, interval decomposition, audit."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .complex import SimplicialComplex
from .linalg import Homology, inclusion_matrix, inverse, kernel, matmul, rank, relative_homology, simplicial_matrix

FORWARD = "f"
BACKWARD = "b"


@dataclass(frozen=True)
class ZigzagModule:
    """Spaces at positions 1..L joined by one arrow between each neighbouring pair.

    ``maps[i]`` joins positions ``i + 1`` and ``i + 2``. A forward arrow maps
    the left space to the right one (shape ``dims[i+1] x dims[i]``); a backward
    arrow maps right to left. Towers built here alternate backward/forward so
    that every even position maps outward into both neighbours.
    """

    dims: tuple[int, ...]
    maps: tuple[np.ndarray, ...]
    directions: tuple[str, ...]
    p: int = 2
    degree: int = 0

    def __post_init__(self) -> None:
        if len(self.maps) != len(self.dims) - 1 or len(self.directions) != len(self.maps):
            raise ValueError("need exactly one arrow between consecutive positions")
        for i, (M, d) in enumerate(zip(self.maps, self.directions)):
            src, dst = (self.dims[i], self.dims[i + 1]) if d == FORWARD else (self.dims[i + 1], self.dims[i])
            if d not in (FORWARD, BACKWARD):
                raise ValueError(f"unknown arrow direction {d!r}")
            if np.shape(M) != (dst, src):
                raise ValueError(f"arrow {i + 1} has shape {np.shape(M)}, expected {(dst, src)}")

    def __len__(self) -> int:
        return len(self.dims)

    @classmethod
    def alternating(cls, dims: Sequence[int], maps: Sequence, p: int = 2, degree: int = 0) -> ZigzagModule:
        directions = tuple(BACKWARD if i % 2 == 0 else FORWARD for i in range(len(dims) - 1))
        return cls(tuple(dims), tuple(np.asarray(M, dtype=np.int64) % p for M in maps), directions, p, degree)

    def reversed(self) -> ZigzagModule:
        flip = {FORWARD: BACKWARD, BACKWARD: FORWARD}
        return ZigzagModule(
            self.dims[::-1], self.maps[::-1], tuple(flip[d] for d in self.directions[::-1]), self.p, self.degree
        )


@dataclass(frozen=True, order=True)
class Bar:
    """A closed interval [birth, death] of positions in a zigzag, for homology degree ``dim``."""

    dim: int
    birth: int
    death: int

    def covers(self, lo: int, hi: int) -> bool:
        return self.birth <= lo and hi <= self.death

    def field_span(self) -> tuple[int, bool, int, bool]:
        """Project positions onto field indices.

        Odd position ``2i - 1`` is field ``i``. A bar that starts at the slot
        between fields ``i`` and ``i + 1`` starts open at ``i``; one that ends
        there ends open at ``i + 1``. Returns (birth, birth_closed, death,
        death_closed).
        """
        b, d = self.birth, self.death
        birth = (b + 1) // 2
        death = d // 2 + 1 if d % 2 == 0 else (d + 1) // 2
        return birth, b % 2 == 1, death, d % 2 == 1

    def shifted(self, offset: int) -> Bar:
        return Bar(self.dim, self.birth + offset, self.death + offset)


def _rank_key(births: list[int], kinds: list[str], j: int) -> tuple[int, int, int]:
    # Flag order of the right filtration: backward-born bars sit lowest with
    # later births lower; forward-born bars follow, earlier births lower.
    if kinds[j] == BACKWARD:
        return (0, -births[j], j)
    return (1, births[j], j)


def _top(col: np.ndarray, order: list[int]) -> int | None:
    for j in order:
        if col[j]:
            return j
    return None


def _top_pivot_reduce(C: np.ndarray, order: list[int], p: int, U: np.ndarray | None = None) -> dict[int, int]:
    """Column-reduce ``C`` in place so nonzero columns have distinct top rows.

    ``order`` lists row indices from highest to lowest rank. Column
    operations are mirrored on ``U`` when given. Returns top row -> column.
    """
    piv: dict[int, int] = {}
    for c in range(C.shape[1]):
        while True:
            t = _top(C[:, c], order)
            if t is None:
                break
            other = piv.get(t)
            if other is None:
                piv[t] = c
                break
            f = C[t, c] * pow(int(C[t, other]), -1, p) % p
            C[:, c] = (C[:, c] - f * C[:, other]) % p
            if U is not None:
                U[:, c] = (U[:, c] - f * U[:, other]) % p
    return piv


def _extend_basis(Z: np.ndarray, n: int, p: int) -> np.ndarray:
    """Standard basis vectors completing the columns of ``Z`` to a basis of F_p^n."""
    cols = [Z[:, j] for j in range(Z.shape[1])]
    current = rank(np.array(cols).T, p) if cols else 0
    extra = []
    for e in np.eye(n, dtype=np.int64):
        trial = np.array(cols + extra + [e]).T
        if rank(trial, p) > current:
            extra.append(e)
            current += 1
        if current == n:
            break
    return np.array(extra, dtype=np.int64).reshape(len(extra), n).T


def interval_decompose(m: ZigzagModule) -> list[Bar]:
    """Barcode of ``m`` via a left-to-right sweep over a birth-labelled basis."""
    p = m.p
    L = len(m.dims)
    bars: list[Bar] = []
    Z = np.eye(m.dims[0], dtype=np.int64)
    births = [1] * m.dims[0]
    kinds = [FORWARD] * m.dims[0]
    for i, (A, d) in enumerate(zip(m.maps, m.directions)):
        here, nxt = i + 1, i + 2
        r = Z.shape[1]
        order = sorted(range(r), key=lambda j: _rank_key(births, kinds, j), reverse=True)
        if d == FORWARD:
            img = matmul(A, Z, p)
            ker = kernel(img, p) if r else np.zeros((0, 0), dtype=np.int64)
            dying = set(_top_pivot_reduce(ker.copy(), order, p)) if ker.size else set()
            keep = [j for j in range(r) if j not in dying]
            bars += [Bar(m.degree, births[j], here) for j in sorted(dying)]
            Zk = img[:, keep]
            extra = _extend_basis(Zk, m.dims[i + 1], p)
            Z = np.hstack([Zk, extra]) if extra.size else Zk.reshape(m.dims[i + 1], len(keep))
            births = [births[j] for j in keep] + [nxt] * extra.shape[1]
            kinds = [kinds[j] for j in keep] + [FORWARD] * extra.shape[1]
        else:
            n = m.dims[i + 1]
            C = matmul(inverse(Z, p), A, p) if r else np.zeros((0, n), dtype=np.int64)
            U = np.eye(n, dtype=np.int64)
            piv = _top_pivot_reduce(C, order, p, U)
            survivors = sorted(piv)
            bars += [Bar(m.degree, births[j], here) for j in range(r) if j not in piv]
            born = [c for c in range(n) if not C[:, c].any()]
            cols = [U[:, piv[j]] for j in survivors] + [U[:, c] for c in born]
            Z = np.array(cols, dtype=np.int64).reshape(len(cols), n).T
            births = [births[j] for j in survivors] + [nxt] * len(born)
            kinds = [kinds[j] for j in survivors] + [BACKWARD] * len(born)
    bars += [Bar(m.degree, b, L) for b in births]
    return sorted(bars)


@dataclass(frozen=True)
class AuditReport:
    failures: tuple[tuple[str, int, int], ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok


def _composite(m: ZigzagModule, a: int, b: int) -> np.ndarray:
    """Composite of arrows a..b (0-based, all in one direction)."""
    p = m.p
    if m.directions[a] == FORWARD:
        M = m.maps[a]
        for i in range(a + 1, b + 1):
            M = matmul(m.maps[i], M, p)
    else:
        M = m.maps[b]
        for i in range(b - 1, a - 1, -1):
            M = matmul(m.maps[i], M, p)
    return M


def audit_barcode(m: ZigzagModule, bars: Sequence[Bar]) -> AuditReport:
    """Check coverage counts, single-arrow ranks and composite ranks.

    Failures are ``(check, first_position, last_position)`` triples with
    1-based positions.
    """
    fails: list[tuple[str, int, int]] = []
    L = len(m.dims)
    for pos in range(1, L + 1):
        if sum(b.covers(pos, pos) for b in bars) != m.dims[pos - 1]:
            fails.append(("coverage", pos, pos))
    for i in range(L - 1):
        if sum(b.covers(i + 1, i + 2) for b in bars) != rank(m.maps[i], m.p):
            fails.append(("arrow", i + 1, i + 2))
    start = 0
    while start < L - 1:
        end = start
        while end + 1 < L - 1 and m.directions[end + 1] == m.directions[start]:
            end += 1
        for a in range(start, end + 1):
            for b in range(a + 1, end + 1):
                if sum(bar.covers(a + 1, b + 2) for bar in bars) != rank(_composite(m, a, b), m.p):
                    fails.append(("composite", a + 1, b + 2))
        start = end + 1
    return AuditReport(tuple(fails))


def _as_pair(x) -> tuple[frozenset[int], frozenset[int]]:
    if hasattr(x, "P"):
        return x.P, x.E
    P, E = x
    return frozenset(P), frozenset(E)


def build_relative_zigzag(
    K: SimplicialComplex,
    pairs: Sequence,
    p: int = 2,
    intersections: Sequence | None = None,
) -> list[ZigzagModule]:
    """Modules ``H_k(P_1,E_1) <- H_k(P_1∩P_2, E_1∩E_2) -> H_k(P_2,E_2) <- ...`` for k = 0..dim K.

    ``pairs`` may be index pairs or ``(P, E)`` tuples. Intersection slots are
    computed setwise unless supplied.
    """
    prim = [_as_pair(x) for x in pairs]
    if intersections is None:
        inter = [(a[0] & b[0], a[1] & b[1]) for a, b in zip(prim, prim[1:])]
    else:
        inter = [_as_pair(x) for x in intersections]
    slots: list[tuple[frozenset[int], frozenset[int]]] = []
    for j, pe in enumerate(prim):
        slots.append(pe)
        if j < len(inter):
            slots.append(inter[j])
    homs = [relative_homology(K, P, E, p) for P, E in slots]
    return modules_from_homologies(homs, max(K.dim, 0), p)


def modules_from_homologies(homs: Sequence[Homology], top: int, p: int) -> list[ZigzagModule]:
    out = []
    for k in range(top + 1):
        maps = []
        for j in range(1, len(homs), 2):
            maps.append(inclusion_matrix(homs[j], homs[j - 1], k))
            maps.append(inclusion_matrix(homs[j], homs[j + 1], k))
        out.append(ZigzagModule.alternating([h.rank_of(k) for h in homs], maps, p, k))
    return out


@dataclass(frozen=True)
class Graph:
    """Undirected view of a directed graph: vertex labels plus edges."""

    vertices: tuple
    edges: tuple[tuple, ...]

    def as_complex(self) -> tuple[SimplicialComplex, dict]:
        label = {v: i for i, v in enumerate(self.vertices)}
        simplices = {(i,) for i in label.values()}
        for u, v in self.edges:
            a, b = label[u], label[v]
            if a != b:
                simplices.add((min(a, b), max(a, b)))
        return SimplicialComplex(simplices), label


def build_graph_zigzag(
    graphs: Sequence[Graph], maps: Sequence[tuple[Mapping, Mapping]], p: int = 2
) -> list[ZigzagModule]:
    """H_0 and H_1 modules of ``G_1 <- G_12 -> G_2 <- ...`` along vertex maps.

    ``maps[j]`` is the pair (into left neighbour, into right neighbour) for
    the middle graph ``graphs[2j + 1]``.
    """
    cx = [g.as_complex() for g in graphs]
    homs = [relative_homology(K, K.all, (), p) for K, _ in cx]
    out = []
    for k in (0, 1):
        mats = []
        for j, (left, right) in enumerate(maps):
            mid = 2 * j + 1
            K_mid, lab_mid = cx[mid]
            for nb, vm in ((mid - 1, left), (mid + 1, right)):
                lab_nb = cx[nb][1]
                vmap = {lab_mid[v]: lab_nb[vm[v]] for v in graphs[mid].vertices}
                mats.append(simplicial_matrix(homs[mid], homs[nb], vmap, k))
        out.append(ZigzagModule.alternating([h.rank_of(k) for h in homs], mats, p, k))
    return out
