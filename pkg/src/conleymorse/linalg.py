"""Exact linear algebra over a prime field and simplicial (relative) homology.

Dense matrices are ``numpy`` int64 arrays whose entries are kept reduced
mod ``p``. Homology uses a sparse column reduction with lowest-entry pivots
over the quotient chain complex C(P)/C(E); the reduction data is kept so that
arbitrary relative cycles can be expressed in the stored basis.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping

import numpy as np

from .complex import SimplicialComplex
from .errors import NotClosed, NotNested, NotSimplicial, NotSubpair

Chain = dict[int, int]


def as_matrix(M, p: int) -> np.ndarray:
    return np.asarray(M, dtype=np.int64).reshape(np.shape(M)) % p


def row_reduce(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``M`` over F_p and its pivot columns."""
    A = as_matrix(M, p).copy()
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        if others.size:
            A[others] = (A[others] - np.outer(A[others, c], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M, p: int = 2) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(row_reduce(M, p)[1])


def kernel(M, p: int) -> np.ndarray:
    """Columns spanning the null space of ``M`` over F_p."""
    A = as_matrix(M, p)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, pivots = row_reduce(A, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for r, c in enumerate(pivots):
            basis[c, j] = -R[r, f] % p
    return basis


def inverse(M, p: int) -> np.ndarray:
    A = as_matrix(M, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, pivots = row_reduce(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return R[:, n:]


def matmul(A, B, p: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] == 0 or B.shape[0] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    return (A @ B) % p


def _axpy(target: Chain, source: Chain, c: int, p: int) -> None:
    """target += c * source, in place, dropping zeros."""
    for key, val in source.items():
        new = (target.get(key, 0) + c * val) % p
        if new:
            target[key] = new
        else:
            target.pop(key, None)


class Homology:
    """Relative homology H_*(P, E; F_p) with a fixed basis of representative cycles.

    Attributes:
        betti: dimension -> rank, for every dimension 0..dim K.
        basis: dimension -> list of representative relative cycles (sparse
            chains keyed by simplex id, supported on P minus E).
    """

    def __init__(self, K: SimplicialComplex, P: frozenset[int], E: frozenset[int], p: int) -> None:
        self.complex = K
        self.P = P
        self.E = E
        self.p = p
        self._pivot_of: dict[int, int] = {}
        self._R: dict[int, Chain] = {}
        V: dict[int, Chain] = {}
        cells = sorted(P - E)
        for j in cells:
            col: Chain = {}
            for f, s in K.boundary(j):
                if f not in E:
                    col[f] = s % p
            v: Chain = {j: 1}
            while col:
                low = max(col)
                i = self._pivot_of.get(low)
                if i is None:
                    break
                c = -col[low] * pow(self._R[i][low], -1, p) % p
                _axpy(col, self._R[i], c, p)
                _axpy(v, V[i], c, p)
            if col:
                self._pivot_of[max(col)] = j
                self._R[j] = col
            V[j] = v
        self._essential: dict[int, tuple[int, int]] = {}
        self.basis: dict[int, list[Chain]] = {k: [] for k in range(K.dim + 1)}
        for j in cells:
            if j in self._R or j in self._pivot_of:
                continue
            k = K.dim_of[j]
            self._essential[j] = (k, len(self.basis[k]))
            self.basis[k].append(V[j])
        self._V = {j: V[j] for j in self._essential}
        self.betti: dict[int, int] = {k: len(b) for k, b in self.basis.items()}

    def __repr__(self) -> str:
        return f"Homology(betti={self.betti}, p={self.p})"

    def rank_of(self, k: int) -> int:
        return self.betti.get(k, 0)

    def is_trivial(self) -> bool:
        return not any(self.betti.values())

    def poincare(self) -> list[int]:
        coeffs = [self.betti[k] for k in sorted(self.betti)]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return coeffs

    def coordinates(self, k: int, chain: Mapping[int, int]) -> np.ndarray:
        """Coordinates of the class of a relative k-cycle in the stored basis.

        Simplices of ``chain`` lying in E are dropped (they vanish in the
        quotient). Raises ``ValueError`` if the chain is not a relative cycle
        of (P, E).
        """
        p = self.p
        out = np.zeros(self.rank_of(k), dtype=np.int64)
        z: Chain = {}
        for s, c in chain.items():
            if s in self.E or c % p == 0:
                continue
            if s not in self.P:
                raise ValueError(f"simplex {s} is outside P")
            z[s] = c % p
        while z:
            low = max(z)
            i = self._pivot_of.get(low)
            if i is not None:
                c = -z[low] * pow(self._R[i][low], -1, p) % p
                _axpy(z, self._R[i], c, p)
                continue
            hit = self._essential.get(low)
            if hit is None or hit[0] != k:
                raise ValueError("chain is not a relative cycle of the expected dimension")
            c = z[low]
            out[hit[1]] = (out[hit[1]] + c) % p
            _axpy(z, self._V[low], -c, p)
        return out


def _check_pair(K: SimplicialComplex, P: frozenset[int], E: frozenset[int]) -> None:
    if not K.is_closed(P):
        raise NotClosed("P is not closed")
    if not K.is_closed(E):
        raise NotClosed("E is not closed")
    if not E <= P:
        raise NotNested("E is not contained in P")


def relative_homology(
    K: SimplicialComplex, P: Iterable[int], E: Iterable[int] = (), p: int = 2
) -> Homology:
    """Homology of the quotient chain complex C(P)/C(E) over F_p."""
    P = frozenset(P)
    E = frozenset(E)
    _check_pair(K, P, E)
    return Homology(K, P, E, p)


def boundary_matrix(K: SimplicialComplex, P: frozenset[int], E: frozenset[int], k: int, p: int) -> np.ndarray:
    """Dense matrix of the quotient boundary C_k(P)/C_k(E) -> C_{k-1}(P)/C_{k-1}(E)."""
    cols = sorted(s for s in P - E if K.dim_of[s] == k)
    rows = sorted(s for s in P - E if K.dim_of[s] == k - 1)
    where = {s: i for i, s in enumerate(rows)}
    D = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for j, s in enumerate(cols):
        for f, sign in K.boundary(s):
            if f in where:
                D[where[f], j] = sign % p
    return D


def betti_by_rank(
    K: SimplicialComplex, P: Iterable[int], E: Iterable[int] = (), p: int = 2
) -> dict[int, int]:
    """Betti numbers from ranks of dense boundary matrices (independent of :class:`Homology`)."""
    P = frozenset(P)
    E = frozenset(E)
    _check_pair(K, P, E)
    ranks = {k: rank(boundary_matrix(K, P, E, k, p), p) for k in range(K.dim + 2)}
    out = {}
    for k in range(K.dim + 1):
        n_k = sum(1 for s in P - E if K.dim_of[s] == k)
        out[k] = n_k - ranks[k] - ranks[k + 1]
    return out


def inclusion_matrix(src: Homology, dst: Homology, k: int) -> np.ndarray:
    """Matrix of H_k(P', E') -> H_k(P, E) induced by inclusion of pairs."""
    if not (src.P <= dst.P and src.E <= dst.E):
        raise NotSubpair("source pair is not nested in the target pair")
    if src.p != dst.p:
        raise ValueError("characteristics differ")
    M = np.zeros((dst.rank_of(k), src.rank_of(k)), dtype=np.int64)
    for j, z in enumerate(src.basis.get(k, [])):
        M[:, j] = dst.coordinates(k, z)
    return M


def induced_inclusion_map(
    K: SimplicialComplex,
    sub: tuple[Iterable[int], Iterable[int]],
    sup: tuple[Iterable[int], Iterable[int]],
    k: int,
    p: int = 2,
) -> np.ndarray:
    P1, E1 = (frozenset(x) for x in sub)
    P2, E2 = (frozenset(x) for x in sup)
    if not (P1 <= P2 and E1 <= E2):
        raise NotSubpair("source pair is not nested in the target pair")
    return inclusion_matrix(relative_homology(K, P1, E1, p), relative_homology(K, P2, E2, p), k)


def _sorting_sign(seq: list[int]) -> int:
    """Sign of the permutation that sorts ``seq`` (entries distinct)."""
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def simplicial_chain_map(
    K: SimplicialComplex, L: SimplicialComplex, vertex_map: Mapping[int, int], chain: Mapping[int, int], p: int
) -> Chain:
    out: Chain = {}
    for s, c in chain.items():
        img = [vertex_map[v] for v in K.simplices[s]]
        if len(set(img)) < len(img):
            continue
        t = L.index.get(tuple(sorted(img)))
        if t is None:
            raise NotSimplicial(f"image of {K.simplices[s]} is not a simplex")
        _axpy(out, {t: c}, _sorting_sign(img), p)
    return out


def check_simplicial(K: SimplicialComplex, L: SimplicialComplex, vertex_map: Mapping[int, int]) -> None:
    for s in K.simplices:
        try:
            img = tuple(sorted({vertex_map[v] for v in s}))
        except KeyError as exc:
            raise NotSimplicial(f"vertex {exc.args[0]} has no image") from None
        if img not in L.index:
            raise NotSimplicial(f"image of {s} is not a simplex")


def simplicial_matrix(src: Homology, dst: Homology, vertex_map: Mapping[int, int], k: int) -> np.ndarray:
    """Matrix of H_k(K) -> H_k(L) induced by a vertex map (absolute homology)."""
    check_simplicial(src.complex, dst.complex, vertex_map)
    M = np.zeros((dst.rank_of(k), src.rank_of(k)), dtype=np.int64)
    for j, z in enumerate(src.basis.get(k, [])):
        M[:, j] = dst.coordinates(k, simplicial_chain_map(src.complex, dst.complex, vertex_map, z, src.p))
    return M


def induced_simplicial_map(
    K: SimplicialComplex, L: SimplicialComplex, vertex_map: Mapping[int, int], k: int, p: int = 2
) -> np.ndarray:
    return simplicial_matrix(
        relative_homology(K, K.all, (), p), relative_homology(L, L.all, (), p), vertex_map, k
    )
