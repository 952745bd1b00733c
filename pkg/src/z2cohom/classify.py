"""Isotropic 2r x r matrices and their orbits under row permutations and column operations.

A 2r x r matrix A of rank r whose columns have pairwise (and self) even
overlap has a self-dual column span, so the orbit of A under
S_2r x GL(r, 2) is the permutation-equivalence class of that span.  The
classification here therefore canonicalizes subspaces.  Candidates come
from standard forms (I_r; P) with P orthogonal, one per S_r x S_r double
coset of O(r, 2), and are merged by canonical code.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import random
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import permutations
from typing import Iterator, Sequence

from .canon import canonical_form
from .gf2 import Gf2Matrix, Gf2Vector, atomic_write_text, block_diag, rref_rows
from .hadamard import Subspace, is_even, permute_bits
from .unionfind import UnionFind

ALGORITHM_VERSION = "1"
DEFAULT_BUDGET = 6

# Published values: exact counts for r <= 6, lower bounds for 7 <= r <= 14.
PUBLISHED_COUNTS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 2, 6: 3}
PUBLISHED_LOWER_BOUNDS = {7: 4, 8: 6, 9: 7, 10: 9, 11: 12, 12: 16, 13: 20, 14: 25}


class BudgetExceededError(ValueError):
    pass


def _check_budget(r: int, budget: int | None, what: str) -> None:
    if r < 1:
        raise ValueError("r must be >= 1")
    limit = DEFAULT_BUDGET if budget is None else budget
    if r > limit:
        raise BudgetExceededError(f"{what} for r={r} exceeds the budget r <= {limit}")


# -- types ----------------------------------------------------------------------


@dataclass(frozen=True)
class IsotropicMatrix:
    """Member of M_r: a 2r x r matrix of rank r with even pairwise column overlaps."""

    matrix: Gf2Matrix

    def __post_init__(self) -> None:
        if not is_isotropic_matrix(self.matrix):
            raise ValueError("matrix is not a full-rank isotropic 2r x r matrix")

    @classmethod
    def from_columns(cls, cols: Sequence[Gf2Vector]) -> "IsotropicMatrix":
        return cls(Gf2Matrix.from_columns(cols))

    @property
    def r(self) -> int:
        return self.matrix.ncols

    def columns(self) -> list[Gf2Vector]:
        return self.matrix.columns()

    def span(self) -> Subspace:
        return Subspace.span(self.matrix.transpose().rows, self.matrix.nrows)


@dataclass(frozen=True)
class OrthogonalMatrix:
    """r x r matrix with P P^T = I over GF(2)."""

    matrix: Gf2Matrix

    def __post_init__(self) -> None:
        M = self.matrix
        if M.nrows != M.ncols or M @ M.transpose() != Gf2Matrix.identity(M.nrows):
            raise ValueError("matrix is not orthogonal")


@dataclass(frozen=True)
class Block:
    coords: tuple[int, ...]
    matrix: IsotropicMatrix


@dataclass(frozen=True)
class OrbitClass:
    representative: IsotropicMatrix
    canonical: Gf2Matrix
    dim_X: int
    blocks: tuple[int, ...]
    weight_distribution: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "canonical": self.canonical.to_strings(),
            "dim_X": self.dim_X,
            "blocks": list(self.blocks),
            "weight_distribution": list(self.weight_distribution),
        }


# -- membership and moves ---------------------------------------------------------


def is_isotropic_matrix(A: Gf2Matrix) -> bool:
    """Rank r and every pairwise Hadamard product of columns has even weight."""
    if A.nrows != 2 * A.ncols or A.ncols < 1:
        raise ValueError(f"expected a 2r x r matrix, got {A.nrows} x {A.ncols}")
    cols = A.transpose().rows
    if any(not is_even(a & b) for a in cols for b in cols):
        return False
    return len(rref_rows(cols, A.nrows)[0]) == A.ncols


def permute_rows(A: Gf2Matrix, images: Sequence[int]) -> Gf2Matrix:
    """Row i of A becomes row images[i]."""
    out = [0] * A.nrows
    for i, row in enumerate(A.rows):
        out[images[i]] = row
    return Gf2Matrix(A.nrows, A.ncols, tuple(out))


def random_invertible(r: int, rng: random.Random) -> Gf2Matrix:
    while True:
        M = Gf2Matrix(r, r, tuple(rng.getrandbits(r) for _ in range(r)))
        if M.rank == r:
            return M


def random_move(A: Gf2Matrix, rng: random.Random) -> tuple[Gf2Matrix, list[int], Gf2Matrix]:
    """Apply a random row permutation and right GL(r) factor; returns (σAλ, σ, λ)."""
    images = list(range(A.nrows))
    rng.shuffle(images)
    lam = random_invertible(A.ncols, rng)
    return permute_rows(A, images) @ lam, images, lam


def closure_under_moves(A: Gf2Matrix, rng: random.Random | None = None, trials: int = 20) -> bool:
    """Test utility: random moves σAλ stay inside M_r."""
    rng = rng or random.Random(0)
    if not is_isotropic_matrix(A):
        raise ValueError("A is not in M_r")
    return all(is_isotropic_matrix(random_move(A, rng)[0]) for _ in range(trials))


def stacked_identity(r: int) -> IsotropicMatrix:
    I = Gf2Matrix.identity(r)
    return IsotropicMatrix(I.vstack(I))


def stack_identity_over(P: Gf2Matrix) -> Gf2Matrix:
    return Gf2Matrix.identity(P.nrows).vstack(P)


def standard_form(A: Gf2Matrix | IsotropicMatrix) -> tuple[list[int], Gf2Matrix, OrthogonalMatrix]:
    """(σ, λ, P) with σAλ = (I_r; P), σ given as row images."""
    if isinstance(A, IsotropicMatrix):
        A = A.matrix
    if not is_isotropic_matrix(A):
        raise ValueError("A is not in M_r")
    r, n = A.ncols, A.nrows
    # reduce A^T with a tracked transform: T A^T = R (RREF)
    work = [row | (1 << (n + i)) for i, row in enumerate(A.transpose().rows)]
    pivots = []
    rank = 0
    for col in range(n):
        bit = 1 << col
        for k in range(rank, r):
            if work[k] & bit:
                break
        else:
            continue
        work[rank], work[k] = work[k], work[rank]
        for k in range(r):
            if k != rank and work[k] & bit:
                work[k] ^= work[rank]
        pivots.append(col)
        rank += 1
        if rank == r:
            break
    T = Gf2Matrix(r, r, tuple(row >> n for row in work))
    lam = T.transpose()
    pivot_set = set(pivots)
    rest = [c for c in range(n) if c not in pivot_set]
    images = [0] * n
    for pos, c in enumerate(pivots + rest):
        images[c] = pos
    B = permute_rows(A, images) @ lam
    top = Gf2Matrix(r, r, B.rows[:r])
    assert top == Gf2Matrix.identity(r), "standard form reduction failed"
    P = OrthogonalMatrix(Gf2Matrix(r, r, B.rows[r:]))
    return images, lam, P


# -- structure --------------------------------------------------------------------


def _as_matrix(A: Gf2Matrix | IsotropicMatrix) -> Gf2Matrix:
    return A.matrix if isinstance(A, IsotropicMatrix) else A


def product_span(A: Gf2Matrix | IsotropicMatrix) -> Subspace:
    """X(A) = span of all v_i ∘ v_j over columns of A."""
    A = _as_matrix(A)
    cols = A.transpose().rows
    prods = [a & b for a in cols for b in cols]
    return Subspace.span(prods, A.nrows)


def column_span(A: Gf2Matrix | IsotropicMatrix) -> Subspace:
    A = _as_matrix(A)
    return Subspace.span(A.transpose().rows, A.nrows)


def decompose(A: Gf2Matrix | IsotropicMatrix) -> list[Block]:
    """Split the column span into support-disjoint irreducible pieces.

    Coordinates are joined whenever they share a row of the RREF basis of
    the span; each connected class carries one block.
    """
    A = _as_matrix(A)
    if not is_isotropic_matrix(A):
        raise ValueError("A is not in M_r")
    n = A.nrows
    basis = column_span(A).basis
    uf = UnionFind(range(n))
    for row in basis:
        coords = [c for c in range(n) if (row >> c) & 1]
        for c in coords[1:]:
            uf.union(coords[0], c)
    groups: dict[int, list[int]] = {}
    for c in range(n):
        groups.setdefault(uf.find(c), []).append(c)
    blocks = []
    total_rank = 0
    for coords in sorted(groups.values()):
        local = {c: i for i, c in enumerate(coords)}
        rows = []
        for row in basis:
            if any((row >> c) & 1 for c in coords):
                rows.append(sum(1 << local[c] for c in coords if (row >> c) & 1))
        k = len(rows)
        if 2 * k != len(coords):
            raise AssertionError("block is not of shape 2k x k")
        total_rank += k
        cols = [Gf2Vector(len(coords), x) for x in rows]
        blocks.append(Block(tuple(coords), IsotropicMatrix.from_columns(cols)))
    if total_rank != A.ncols:
        raise AssertionError("block ranks do not add up to r")
    return blocks


def is_irreducible(A: Gf2Matrix | IsotropicMatrix) -> bool:
    A = _as_matrix(A)
    if product_span(A).dim == 2 * A.ncols - 1:
        return True
    return len(decompose(A)) == 1


def weight_distribution(S: Subspace) -> tuple[int, ...]:
    counts = [0] * (S.ambient_len + 1)
    for x in S.elements():
        counts[x.bit_count()] += 1
    return tuple(counts)


# -- generator families -----------------------------------------------------------


def gen_A(l: int) -> Gf2Matrix:
    """The (2l-1) x (l-1) matrix A(l)."""
    if l < 4:
        raise ValueError("A(l) requires l >= 4")
    cols = l - 1
    rows = [1]  # row 1: column 1 only
    for j in range(2, l):  # rows 2..l-1: columns 1 and l+1-j
        rows.append(1 | (1 << (l - j)))
    rows.append((1 << cols) - 1)  # row l: all ones
    rows.append((1 << cols) - 2)  # row l+1: columns 2..l-1
    for j in range(1, l - 1):  # identity on columns 2..l-1
        rows.append(1 << j)
    return Gf2Matrix(2 * l - 1, cols, tuple(rows))


def _ones_column(k: int) -> Gf2Matrix:
    return Gf2Matrix(k, 1, (1,) * k)


def gen_B(l: int) -> IsotropicMatrix:
    """B(l) = (A(l), 1; 0, 1), a 2l x l member of M_l."""
    if l < 4 or l % 2:
        raise ValueError("B(l) requires an even l >= 4")
    top = gen_A(l).hstack(_ones_column(2 * l - 1))
    bottom = Gf2Matrix(1, l, (1 << (l - 1),))
    return IsotropicMatrix(top.vstack(bottom))


def gen_C(s: int, t: int) -> IsotropicMatrix:
    """(A(s), 0, 1; 0, A(t), 1), a member of M_r with r = s + t - 1."""
    for x in (s, t):
        if x < 4 or x % 2:
            raise ValueError("C(s, t) requires even s, t >= 4")
    body = block_diag(gen_A(s), gen_A(t))
    return IsotropicMatrix(body.hstack(_ones_column(body.nrows)))


def gen_C_pairs(r: int) -> list[tuple[int, int]]:
    """Unordered {s, t} with s + t = r + 1, s <= t, both even and >= 4."""
    return [(s, r + 1 - s) for s in range(4, (r + 1) // 2 + 1, 2) if (r + 1 - s) % 2 == 0 and r + 1 - s >= s]


def direct_sum(*mats: Gf2Matrix | IsotropicMatrix) -> IsotropicMatrix:
    return IsotropicMatrix(block_diag(*(_as_matrix(m) for m in mats)))


def pair_block() -> IsotropicMatrix:
    return IsotropicMatrix(Gf2Matrix(2, 1, (1, 1)))


# -- canonical forms ----------------------------------------------------------------


def _coordinate_invariants(S: Subspace, blocks: Sequence[Block]) -> list[int]:
    """Permutation-covariant coordinate colouring: (component size, low-weight counts)."""
    n = S.ambient_len
    comp = [0] * n
    for b in blocks:
        for c in b.coords:
            comp[c] = len(b.coords)
    low = [[0] * 5 for _ in range(n)]
    for x in S.elements():
        w = x.bit_count()
        if 0 < w <= 4:
            for c in range(n):
                if (x >> c) & 1:
                    low[c][w] += 1
    keys = [(comp[c], tuple(low[c])) for c in range(n)]
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def canonical_labelling(A: Gf2Matrix | IsotropicMatrix) -> tuple[Gf2Matrix, tuple[int, ...]]:
    """(canonical r x 2r basis matrix, labelling) for the column span of A."""
    A = _as_matrix(A)
    S = column_span(A)
    if S.dim != A.ncols:
        raise ValueError("matrix does not have full column rank")
    blocks = decompose(A)
    form = canonical_form([S], _coordinate_invariants(S, blocks))
    return Gf2Matrix(S.dim, S.ambient_len, form.certificate[0]), form.labelling


def canonical_code(A: Gf2Matrix | IsotropicMatrix) -> Gf2Matrix:
    """Orbit invariant of A: RREF basis of the canonically reordered column span."""
    return canonical_labelling(A)[0]


def automorphism_group_order(A: Gf2Matrix | IsotropicMatrix) -> int:
    A = _as_matrix(A)
    S = column_span(A)
    return canonical_form([S], _coordinate_invariants(S, decompose(A))).group_order


def same_orbit(A: Gf2Matrix | IsotropicMatrix, B: Gf2Matrix | IsotropicMatrix) -> bool:
    return canonical_code(A) == canonical_code(B)


# -- orthogonal group -----------------------------------------------------------------


def enumerate_orthogonal(r: int, budget: int | None = None) -> Iterator[OrthogonalMatrix]:
    """Every P with P P^T = I, built column by column (odd columns, pairwise even overlap)."""
    _check_budget(r, budget, "orthogonal group enumeration")
    odd = [x for x in range(1 << r) if x.bit_count() & 1]
    cols: list[int] = []

    def extend() -> Iterator[OrthogonalMatrix]:
        if len(cols) == r:
            yield OrthogonalMatrix(Gf2Matrix.from_ints(cols, r).transpose())
            return
        for x in odd:
            if all(not (x & c).bit_count() & 1 for c in cols):
                cols.append(x)
                yield from extend()
                cols.pop()

    yield from extend()


def _swap_bits(x: int, i: int, j: int) -> int:
    if ((x >> i) ^ (x >> j)) & 1:
        x ^= (1 << i) | (1 << j)
    return x


def orthogonal_double_cosets(r: int, budget: int | None = None) -> list[Gf2Matrix]:
    """One representative per S_r \\ O(r,2) / S_r double coset (orbit BFS, min element kept)."""
    elements = {M.matrix.rows for M in enumerate_orthogonal(r, budget)}
    seen: set[tuple[int, ...]] = set()
    reps = []
    for start in sorted(elements):
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        best = start
        while queue:
            P = queue.popleft()
            best = min(best, P)
            nbrs = []
            for i in range(r - 1):
                rows = list(P)
                rows[i], rows[i + 1] = rows[i + 1], rows[i]
                nbrs.append(tuple(rows))
                nbrs.append(tuple(_swap_bits(x, i, i + 1) for x in P))
            for Q in nbrs:
                if Q not in seen:
                    seen.add(Q)
                    queue.append(Q)
        reps.append(Gf2Matrix(r, r, best))
    return reps


def double_cosets_orthogonal(r: int, budget: int | None = None) -> int:
    """|S_r \\ O(r,2) / S_r|."""
    return len(orthogonal_double_cosets(r, budget))


def row_column_canonical(P: Gf2Matrix) -> tuple[int, ...]:
    """Brute-force normal form of a square matrix under row and column permutations."""
    best = None
    for order in permutations(range(P.nrows)):
        rows = [P.rows[i] for i in order]
        cols = sorted(sum(((rows[i] >> j) & 1) << i for i in range(P.nrows)) for j in range(P.ncols))
        key = tuple(cols)
        if best is None or key < best:
            best = key
    return best


def same_orthogonal_double_coset(P1: Gf2Matrix, P2: Gf2Matrix) -> bool:
    return row_column_canonical(P1) == row_column_canonical(P2)


# -- classification -----------------------------------------------------------------


def orbit_class(A: Gf2Matrix | IsotropicMatrix) -> OrbitClass:
    A = _as_matrix(A)
    canonical, _ = canonical_labelling(A)
    rep = IsotropicMatrix(canonical.transpose())
    S = column_span(A)
    return OrbitClass(
        representative=rep,
        canonical=canonical,
        dim_X=product_span(A).dim,
        blocks=tuple(sorted((b.matrix.r for b in decompose(A)), reverse=True)),
        weight_distribution=weight_distribution(S),
    )


def _class_sort_key(c: OrbitClass) -> tuple:
    return (c.dim_X, tuple(Gf2Vector(c.canonical.ncols, row).lex_key() for row in c.canonical.rows))


def classify_M(r: int, budget: int | None = None, workers: int = 1) -> list[OrbitClass]:
    """All orbit classes of S_2r \\ M_r / GL(r,2), one canonical representative each."""
    _check_budget(r, budget, "classification")
    candidates = [stack_identity_over(P) for P in orthogonal_double_cosets(r, budget)]
    if workers > 1 and len(candidates) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            found = list(pool.map(orbit_class, candidates))
    else:
        found = [orbit_class(A) for A in candidates]
    classes: dict[Gf2Matrix, OrbitClass] = {}
    for c in found:
        classes.setdefault(c.canonical, c)
    return sorted(classes.values(), key=_class_sort_key)


def classification_to_dict(r: int, classes: Sequence[OrbitClass]) -> dict:
    return {"r": r, "count": len(classes), "classes": [c.to_dict() for c in classes]}


def classification_json(r: int, classes: Sequence[OrbitClass]) -> str:
    return json.dumps(classification_to_dict(r, classes), indent=2, sort_keys=False) + "\n"


def cache_key(r: int) -> str:
    return hashlib.sha256(f"classify_M|r={r}|algorithm={ALGORITHM_VERSION}".encode()).hexdigest()


def classify_cached(
    r: int, cache_dir: str | os.PathLike | None, budget: int | None = None, workers: int = 1
) -> str:
    """Classification JSON, served from a content-addressed cache when available."""
    if cache_dir is None:
        return classification_json(r, classify_M(r, budget, workers))
    _check_budget(r, budget, "classification")
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, cache_key(r) + ".json")
    if os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    text = classification_json(r, classify_M(r, budget, workers))
    atomic_write_text(path, text)
    return text


def self_dual_code_count(r: int) -> int:
    """Number of self-dual codes of length 2r: prod_{i=1}^{r-1} (2^i + 1)."""
    return math.prod(2**i + 1 for i in range(1, r))


def orbit_size(S: Subspace) -> int:
    """Number of distinct images of S under coordinate permutations (BFS over transpositions)."""
    n = S.ambient_len
    seen = {S.basis}
    queue = deque([S.basis])
    while queue:
        basis = queue.popleft()
        for i in range(n - 1):
            images = list(range(n))
            images[i], images[i + 1] = i + 1, i
            nxt = tuple(rref_rows([permute_bits(b, images) for b in basis], n)[0])
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen)

