"""Ring isomorphisms between cohomology profiles.

Graded isomorphisms of the Hadamard rings are induced by coordinate
permutations; this module provides the permutation type, the Hadamard
automorphism test and census, the permutation search for equivalent
filtrations, the induced ring map, and a brute-force oracle that
enumerates graded isomorphisms directly on tiny instances.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Sequence

from .classify import BudgetExceededError
from .cohomology import CohomProfile, RingElement, require_valid
from .gf2 import Gf2Matrix, Gf2Vector, SingularMatrixError, rref_rows
from .hadamard import Subspace, even_subspace, is_even, permute_bits

WEYL_BUDGET = 2


@dataclass(frozen=True)
class Permutation:
    """Coordinate map i -> images[i]."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "images", tuple(int(i) for i in self.images))
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError("images do not form a bijection")

    @classmethod
    def identity(cls, size: int) -> "Permutation":
        return cls(tuple(range(size)))

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, x: Gf2Vector) -> Gf2Vector:
        return apply_permutation(self, x)

    def apply_bits(self, x: int) -> int:
        return permute_bits(x, self.images)

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other."""
        if other.size != self.size:
            raise ValueError("size mismatch")
        return Permutation(tuple(self.images[other.images[i]] for i in range(self.size)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def to_matrix(self) -> Gf2Matrix:
        """Matrix M with M x = sigma(x) for column vectors x."""
        n = self.size
        rows = [0] * n
        for i, j in enumerate(self.images):
            rows[j] |= 1 << i
        return Gf2Matrix(n, n, tuple(rows))


def apply_permutation(sigma: Permutation, x: Gf2Vector) -> Gf2Vector:
    if sigma.size != x.length:
        raise ValueError(f"permutation of size {sigma.size} applied to vector of length {x.length}")
    return Gf2Vector(x.length, sigma.apply_bits(x.bits))


# -- Hadamard automorphisms --------------------------------------------------


def _matvec(rows: Sequence[int], x: int) -> int:
    out = 0
    for i, row in enumerate(rows):
        if (row & x).bit_count() & 1:
            out |= 1 << i
    return out


def _probe_set(r: int) -> list[int]:
    n = 2 * r
    basis = list(even_subspace(r).basis)
    probes = set(basis)
    probes.update(a ^ b for a, b in combinations(basis, 2))
    probes.update((1 << i) | (1 << j) for i, j in combinations(range(n), 2))
    probes.add((1 << n) - 1)
    return sorted(probes)


def _is_automorphism_rows(rows: Sequence[int], n: int, probes: Sequence[int], even_basis: Sequence[int]) -> bool:
    if not all(is_even(_matvec(rows, b)) for b in even_basis):
        return False
    image = {x: _matvec(rows, x) for x in probes}
    for i, x in enumerate(probes):
        fx = image[x]
        for y in probes[i:]:
            if _matvec(rows, x & y) != fx & image[y]:
                return False
    return True


def is_hadamard_automorphism(M: Gf2Matrix) -> bool:
    """True iff M preserves the even-weight space and is multiplicative on it."""
    n = M.nrows
    if M.ncols != n or n % 2:
        raise ValueError("expected a square matrix of even size")
    if M.rank != n:
        raise SingularMatrixError("matrix is singular")
    r = n // 2
    return _is_automorphism_rows(M.rows, n, _probe_set(r), even_subspace(r).basis)


def weyl_census(r: int, budget: int = WEYL_BUDGET) -> tuple[int, int]:
    """(automorphism count, how many of them are permutation matrices) over all of GL(2r)."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if r > budget:
        raise BudgetExceededError(f"weyl census scans 2^(4r^2) matrices; r = {r} exceeds budget {budget}")
    n = 2 * r
    probes = _probe_set(r)
    even_basis = even_subspace(r).basis
    found = perms = 0
    for rows in product(range(1 << n), repeat=n):
        if len(rref_rows(rows, n)[0]) != n:
            continue
        if _is_automorphism_rows(rows, n, probes, even_basis):
            found += 1
            if all(row.bit_count() == 1 for row in rows):
                perms += 1
    return found, perms


# -- flag equivalence ---------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    permutation: Permutation | None
    invariant_mismatch: str | None

    def to_dict(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "permutation": list(self.permutation.images) if self.permutation else None,
            "invariant_mismatch": self.invariant_mismatch,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _inner_levels(p: CohomProfile) -> list[Subspace]:
    # V_0 and V_{n-1} are fixed by every permutation
    return list(p.filtration[1 : p.n - 1])


def _coordinate_signature(levels: Sequence[Subspace], n: int, enum_cap: int = 14) -> list[tuple]:
    sig: list[list] = [[] for _ in range(n)]
    for V in levels:
        for c in range(n):
            # dim{v in V : v_c = 0} is dim V or dim V - 1
            sig[c].append(any((b >> c) & 1 for b in V.basis))
        if V.dim <= enum_cap:
            minw, counts = None, [0] * n
            for x in V.elements():
                w = x.bit_count()
                if w == 0 or (minw is not None and w > minw):
                    continue
                if minw is None or w < minw:
                    minw, counts = w, [0] * n
                for c in range(n):
                    if (x >> c) & 1:
                        counts[c] += 1
            for c in range(n):
                sig[c].append(counts[c])
    return [tuple(s) for s in sig]


def _projection(basis: Sequence[int], coords: Sequence[int]) -> tuple[int, ...]:
    rows = []
    for b in basis:
        y = 0
        for j, c in enumerate(coords):
            if (b >> c) & 1:
                y |= 1 << j
        rows.append(y)
    return tuple(rref_rows(rows, len(coords))[0])


def _carries(sigma: Permutation, p: CohomProfile, q: CohomProfile) -> bool:
    return all(V.permuted(sigma.images) == W for V, W in zip(p.filtration, q.filtration))


def equivalence_witness(p: CohomProfile, q: CohomProfile) -> EquivalenceResult:
    """Search for a coordinate permutation carrying every V_i^p onto V_i^q."""
    require_valid(p)
    require_valid(q)
    if p.r != q.r:
        return EquivalenceResult(False, None, "fixed-point counts differ")
    if p.n != q.n:
        return EquivalenceResult(False, None, "dimensions differ")
    if p.betti != q.betti:
        return EquivalenceResult(False, None, "betti numbers differ")
    n = p.length
    src, dst = _inner_levels(p), _inner_levels(q)
    sig_p, sig_q = _coordinate_signature(src, n), _coordinate_signature(dst, n)
    if sorted(sig_p) != sorted(sig_q):
        return EquivalenceResult(False, None, "coordinate invariants differ")

    images = [-1] * n
    used = [False] * n
    src_basis = [V.basis for V in src]
    dst_basis = [W.basis for W in dst]

    def consistent(k: int) -> bool:
        left = list(range(k + 1))
        right = images[: k + 1]
        return all(_projection(a, left) == _projection(b, right) for a, b in zip(src_basis, dst_basis))

    def extend(k: int) -> bool:
        if k == n:
            return True
        for t in range(n):
            if used[t] or sig_q[t] != sig_p[k]:
                continue
            images[k] = t
            if consistent(k):
                used[t] = True
                if extend(k + 1):
                    return True
                used[t] = False
        images[k] = -1
        return False

    if not extend(0):
        return EquivalenceResult(False, None, "no permutation carries the filtration")
    sigma = Permutation(tuple(images))
    if not _carries(sigma, p, q):  # pragma: no cover
        raise AssertionError("witness failed re-verification")
    return EquivalenceResult(True, sigma, None)


def flag_equivalent(p: CohomProfile, q: CohomProfile) -> Permutation | None:
    return equivalence_witness(p, q).permutation


# -- induced ring maps ---------------------------------------------------------


@dataclass(frozen=True)
class AnalyticIso:
    """The ring map sum_i sigma t^i from ``source`` to ``target``."""

    sigma: Permutation
    source: CohomProfile
    target: CohomProfile

    def __post_init__(self) -> None:
        if self.sigma.size != self.source.length or self.source.length != self.target.length:
            raise ValueError("size mismatch")
        if self.source.n != self.target.n:
            raise ValueError("profiles have different n")
        if not _carries(self.sigma, self.source, self.target):
            raise ValueError("permutation does not carry the source filtration onto the target")
        failed = [k for k, ok in self.check().items() if not ok]
        if failed:  # pragma: no cover
            raise ValueError("induced map fails: " + ", ".join(failed))

    def __call__(self, a: RingElement) -> RingElement:
        if a.profile != self.source:
            raise ValueError("element does not belong to the source ring")
        return RingElement(self.target, {d: self.sigma.apply_bits(v) for d, v in a.terms.items()})

    def check(self, max_degree: int | None = None) -> dict[str, bool]:
        """Additivity, multiplicativity, grading and unitality on basis elements."""
        p, q = self.source, self.target
        if max_degree is None:
            max_degree = 2 * p.n
        basis = [
            RingElement(p, {d: b}) for d in range(max_degree + 1) for b in p.piece(d).basis
        ]
        images = [self(a) for a in basis]
        graded = all(
            list(fa.terms) == list(a.terms) and fa.is_valid() for a, fa in zip(basis, images)
        )
        unital = self(RingElement.one(p)) == RingElement.one(q)
        additive = multiplicative = True
        for (a, fa), (b, fb) in combinations(zip(basis, images), 2):
            if self(a + b) != fa + fb:
                additive = False
            if a.degrees[0] + b.degrees[0] <= max_degree and self(a * b) != fa * fb:
                multiplicative = False
        for a, fa in zip(basis, images):
            if 2 * a.degrees[0] <= max_degree and self(a * a) != fa * fa:
                multiplicative = False
        return {"additive": additive, "multiplicative": multiplicative, "graded": graded, "unital": unital}


def analytic_iso(sigma: Permutation, p: CohomProfile, q: CohomProfile) -> AnalyticIso:
    require_valid(p)
    require_valid(q)
    return AnalyticIso(sigma, p, q)


# -- brute-force oracle --------------------------------------------------------


@dataclass(frozen=True)
class GradedIso:
    """Degreewise images of the source basis: maps[d] = ((src, img), ...)."""

    maps: tuple[tuple[tuple[int, int], ...], ...]
    permutation: Permutation | None


class _LinearMap:
    """Partial linear map given on a growing independent set of sources."""

    def __init__(self) -> None:
        self.pairs: dict[int, tuple[int, int]] = {}  # pivot -> (src, img), src reduced

    def reduce(self, x: int, y: int) -> tuple[int, int]:
        while x:
            low = x & -x
            pair = self.pairs.get(low)
            if pair is None:
                break
            x ^= pair[0]
            y ^= pair[1]
        return x, y

    def add(self, x: int, y: int) -> bool:
        """Impose f(x) = y; False on inconsistency."""
        x, y = self.reduce(x, y)
        if not x:
            return y == 0
        self.pairs[x & -x] = (x, y)
        return True

    def __call__(self, x: int) -> int:
        rx, y = self.reduce(x, 0)
        if rx:
            raise ValueError("vector outside the domain")
        return y

    @property
    def rank(self) -> int:
        return len(self.pairs)

    def copy(self) -> "_LinearMap":
        out = _LinearMap()
        out.pairs = dict(self.pairs)
        return out


def brute_graded_isos(p: CohomProfile, q: CohomProfile, degree_cap: int | None = None) -> list[GradedIso]:
    """Every graded ring isomorphism in degrees <= degree_cap, found by exhaustive search."""
    require_valid(p)
    require_valid(q)
    if degree_cap is None:
        degree_cap = 2 * p.n
    if p.r > 2 or p.n > 3 or degree_cap > 2 * p.n:
        raise BudgetExceededError("brute-force isomorphism search is limited to r <= 2, n <= 3, cap <= 2n")
    if p.r != q.r or p.n != q.n:
        return []
    length = p.length
    results: list[list[_LinearMap]] = []

    def build(d: int, maps: list[_LinearMap]) -> None:
        if d > degree_cap:
            results.append(maps)
            return
        P, Q = p.piece(d), q.piece(d)
        if P.dim != Q.dim:
            return
        f = _LinearMap()
        for i in range(1, d):
            j = d - i
            for a in p.piece(i).basis:
                fa = maps[i](a)
                for b in p.piece(j).basis:
                    if not f.add(a & b, fa & maps[j](b)):
                        return
        # degree-0 products are forced to agree: 1 is sent to 1
        complement = []
        g = f.copy()
        for b in P.basis:
            if g.reduce(b, 0)[0]:
                g.add(b, 0)
                complement.append(b)
        targets = list(Q.elements())
        for choice in product(targets, repeat=len(complement)):
            h = f.copy()
            ok = all(h.add(b, y) for b, y in zip(complement, choice))
            if not ok or h.rank != P.dim:
                continue
            imgs = [h(b) for b in P.basis]
            if len(rref_rows(imgs, length)[0]) != Q.dim or not all(Q.contains_bits(y) for y in imgs):
                continue
            build(d + 1, maps + [h])

    build(0, [])
    out = []
    bases = [p.piece(d).basis for d in range(degree_cap + 1)]
    for maps in results:
        table = tuple(tuple((b, maps[d](b)) for b in bases[d]) for d in range(degree_cap + 1))
        out.append(GradedIso(table, _inducing_permutation(table, length)))
    return out


def _inducing_permutation(table, length: int) -> Permutation | None:
    for images in permutations(range(length)):
        if all(permute_bits(b, images) == y for level in table for b, y in level):
            return Permutation(images)
    return None
