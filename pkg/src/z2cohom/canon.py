"""Canonical labelling of binary codes (and flags of codes) under coordinate permutations.

Individualization-refinement search.  The refinement is colour refinement
on the bipartite incidence between coordinates and codewords; leaves of the
search tree are discrete colourings, i.e. coordinate orderings, and the
certificate of a leaf is the RREF of the reordered code(s).  The canonical
form is the minimum certificate over all leaves.  Automorphisms found
along the way (two leaves with equal certificates) prune sibling subtrees
and trigger jumps back to the divergence point; both are exact, so the
minimum is never lost.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gf2 import _reverse_bits, rref_rows
from .hadamard import Subspace, permute_bits


@dataclass(frozen=True)
class CanonicalForm:
    certificate: tuple[tuple[int, ...], ...]
    """Per level: RREF rows (packed ints) of the reordered subspace."""
    labelling: tuple[int, ...]
    """labelling[c] = position of original coordinate c in the canonical order."""
    generators: tuple[tuple[int, ...], ...]
    """Automorphisms found during the search (image lists)."""
    group_order: int
    leaves: int

    def spaces(self, n: int) -> list[Subspace]:
        return [Subspace(n, rows) for rows in self.certificate]


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


def _orbits(gens: Sequence[Sequence[int]], n: int) -> _UnionFind:
    uf = _UnionFind(n)
    for g in gens:
        for i, j in enumerate(g):
            uf.union(i, j)
    return uf


class _Search:
    def __init__(self, levels: Sequence[Subspace], initial: Sequence[int] | None):
        n = levels[0].ambient_len
        self.n = n
        self.levels = [list(S.basis) for S in levels]
        total = levels[0]
        for S in levels[1:]:
            total = total + S
        words = [w for w in total.elements() if w]
        self.W = np.array([[(w >> c) & 1 for c in range(n)] for w in words], dtype=np.int64).reshape(
            len(words), n
        )
        # word label: which levels contain it
        member = np.array(
            [[int(S.contains_bits(w)) for S in levels] for w in words], dtype=np.int64
        ).reshape(len(words), len(levels))
        self.word_label = np.unique(member, axis=0, return_inverse=True)[1].reshape(-1)
        self.word_idx, self.coord_idx = np.nonzero(self.W)
        if initial is None:
            initial = [0] * n
        self.initial = np.asarray(initial, dtype=np.int64)
        self.leaves: dict[tuple, list[int]] = {}
        self.best_cert: tuple | None = None
        self.best_key: tuple | None = None
        self.best_perm: np.ndarray | None = None
        self.first_path: list[int] | None = None
        self.generators: list[tuple[int, ...]] = []
        self.leaf_count = 0

    # -- partitions ---------------------------------------------------------
    @staticmethod
    def _to_starts(labels: np.ndarray) -> np.ndarray:
        counts = np.bincount(labels)
        starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
        return starts[labels]

    def start_colouring(self) -> np.ndarray:
        labels = np.unique(self.initial, return_inverse=True)[1].reshape(-1)
        return self.refine(self._to_starts(labels))

    def refine(self, color: np.ndarray) -> np.ndarray:
        ncells = len(np.unique(color))
        n, nwords = self.n, len(self.word_label)
        if not nwords:
            return color
        wi, ci = self.word_idx, self.coord_idx
        while ncells < n:
            cell = np.unique(color, return_inverse=True)[1].reshape(-1)
            wsig = np.bincount(wi * ncells + cell[ci], minlength=nwords * ncells).reshape(nwords, ncells)
            wsig = np.concatenate((self.word_label[:, None], wsig), axis=1)
            wl = np.unique(wsig, axis=0, return_inverse=True)[1].reshape(-1)
            nl = int(wl.max()) + 1
            csig = np.bincount(ci * nl + wl[wi], minlength=n * nl).reshape(n, nl)
            csig = np.concatenate((color[:, None], csig), axis=1)
            labels = np.unique(csig, axis=0, return_inverse=True)[1].reshape(-1)
            color = self._to_starts(labels)
            new_cells = int(labels.max()) + 1
            if new_cells == ncells:
                break
            ncells = new_cells
        return color

    @staticmethod
    def individualize(color: np.ndarray, c: int) -> np.ndarray:
        s = color[c]
        new = color.copy()
        new[color == s] = s + 1
        new[c] = s
        return new

    # -- leaves -------------------------------------------------------------
    def certificate(self, perm: Sequence[int]) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(rref_rows([permute_bits(b, perm) for b in basis], self.n)[0]) for basis in self.levels
        )

    def cert_key(self, cert) -> tuple:
        return tuple(tuple(_reverse_bits(row, self.n) for row in rows) for rows in cert)

    def leaf(self, color: np.ndarray, path: list[int]) -> int | None:
        self.leaf_count += 1
        perm = [int(x) for x in color]
        cert = self.certificate(perm)
        if self.first_path is None:
            self.first_path = list(path)
        other = self.leaves.get(cert)
        if other is not None:
            other_perm, other_path = other
            inv = [0] * self.n
            for c, p in enumerate(other_perm):
                inv[p] = c
            gamma = tuple(inv[perm[c]] for c in range(self.n))
            if any(g != i for i, g in enumerate(gamma)):
                self.generators.append(gamma)
            k = 0
            while k < len(path) and path[k] == other_path[k]:
                k += 1
            return k
        self.leaves[cert] = (perm, list(path))
        key = self.cert_key(cert)
        if self.best_key is None or key < self.best_key:
            self.best_key, self.best_cert, self.best_perm = key, cert, perm
        return None

    # -- tree ---------------------------------------------------------------
    def search(self, color: np.ndarray, path: list[int]) -> int | None:
        cells, counts = np.unique(color, return_counts=True)
        if len(cells) == self.n:
            return self.leaf(color, path)
        target = cells[np.argmax(counts > 1)]
        members = [int(c) for c in np.flatnonzero(color == target)]
        depth = len(path)
        explored: list[int] = []
        for c in members:
            if explored:
                fixing = [g for g in self.generators if all(g[p] == p for p in path)]
                if fixing:
                    uf = _orbits(fixing, self.n)
                    root = uf.find(c)
                    if any(uf.find(e) == root for e in explored):
                        continue
            explored.append(c)
            jump = self.search(self.refine(self.individualize(color, c)), path + [c])
            if jump is not None and jump < depth:
                return jump
        return None

    def group_order(self) -> int:
        """|Aut| from orbit lengths along the first path of the tree."""
        order = 1
        path = self.first_path or []
        color = self.start_colouring()
        for k, u in enumerate(path):
            fixing = [g for g in self.generators if all(g[p] == p for p in path[:k])]
            members = np.flatnonzero(color == color[u])
            uf = _orbits(fixing, self.n)
            root = uf.find(u)
            order *= sum(1 for m in members if uf.find(int(m)) == root)
            color = self.refine(self.individualize(color, u))
        return order


def canonical_form(levels: Sequence[Subspace], initial: Sequence[int] | None = None) -> CanonicalForm:
    """Canonical form of a list of subspaces under simultaneous coordinate permutation.

    ``initial`` optionally supplies a permutation-covariant colouring of the
    coordinates (equal values = same cell; smaller values come first).
    """
    if not levels:
        raise ValueError("at least one subspace required")
    n = levels[0].ambient_len
    if any(S.ambient_len != n for S in levels):
        raise ValueError("ambient length mismatch")
    s = _Search(levels, initial)
    s.search(s.start_colouring(), [])
    return CanonicalForm(
        certificate=s.best_cert,
        labelling=tuple(s.best_perm),
        generators=tuple(s.generators),
        group_order=s.group_order(),
        leaves=s.leaf_count,
    )


def canonical_subspace(S: Subspace, initial: Sequence[int] | None = None) -> tuple[Subspace, tuple[int, ...]]:
    """(canonical representative, labelling) of a single code."""
    form = canonical_form([S], initial)
    return Subspace(S.ambient_len, form.certificate[0]), form.labelling
