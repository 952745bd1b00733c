"""Hadamard (coordinatewise) product structure on (Z/2)^2r.

The even-weight hyperplane ``V_2r``, annihilators ``V(v)`` and their
intersections, and the closure test for subspaces whose pairwise
products stay even.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .gf2 import Gf2Matrix, Gf2Vector, kernel, reduce_against, rref_rows


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of (Z/2)^ambient_len held by its reduced basis.

    ``basis`` is the RREF basis (pivot = leftmost coordinate), so two
    subspaces are equal exactly when their bases are identical.
    """

    ambient_len: int
    basis: tuple[int, ...]

    @classmethod
    def span(cls, vectors: Iterable[Gf2Vector | int], ambient_len: int | None = None) -> "Subspace":
        bits = []
        for v in vectors:
            if isinstance(v, Gf2Vector):
                if ambient_len is None:
                    ambient_len = v.length
                elif v.length != ambient_len:
                    raise ValueError("length mismatch")
                bits.append(v.bits)
            else:
                bits.append(v)
        if ambient_len is None:
            raise ValueError("ambient length required for an empty spanning set")
        red, _ = rref_rows(bits, ambient_len)
        return cls(ambient_len, tuple(red))

    @classmethod
    def from_matrix_rows(cls, M: Gf2Matrix) -> "Subspace":
        return cls.span(M.rows, M.ncols)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list[int]:
        return [(b & -b).bit_length() - 1 for b in self.basis]

    def basis_vectors(self) -> list[Gf2Vector]:
        return [Gf2Vector(self.ambient_len, b) for b in self.basis]

    def matrix(self) -> Gf2Matrix:
        return Gf2Matrix(self.dim, self.ambient_len, self.basis)

    def contains_bits(self, x: int) -> bool:
        return reduce_against(x, self.basis, self.pivots) == 0

    def __contains__(self, x: Gf2Vector) -> bool:
        if x.length != self.ambient_len:
            raise ValueError("length mismatch")
        return self.contains_bits(x.bits)

    def issubspace(self, other: "Subspace") -> bool:
        return self.ambient_len == other.ambient_len and all(other.contains_bits(b) for b in self.basis)

    def __le__(self, other: "Subspace") -> bool:
        return self.issubspace(other)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_len != other.ambient_len:
            raise ValueError("length mismatch")
        return Subspace.span(self.basis + other.basis, self.ambient_len)

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.ambient_len != other.ambient_len:
            raise ValueError("length mismatch")
        # U ∩ W = annihilator of (U^perp + W^perp)
        return self.perp().__add__(other.perp()).perp()

    __and__ = intersect

    def perp(self) -> "Subspace":
        """Orthogonal complement under the standard dot product."""
        K = kernel(self.matrix()) if self.basis else Gf2Matrix.identity(self.ambient_len)
        return Subspace(self.ambient_len, K.rows)

    def elements(self) -> Iterator[int]:
        """All members as packed ints (Gray-code order, starting at zero)."""
        x = 0
        yield x
        for i in range(1, 1 << self.dim):
            x ^= self.basis[(i & -i).bit_length() - 1]
            yield x

    def permuted(self, images: Sequence[int]) -> "Subspace":
        """Image under the coordinate map i -> images[i]."""
        return Subspace.span((permute_bits(b, images) for b in self.basis), self.ambient_len)

    def to_strings(self) -> list[str]:
        """Basis rows in lexicographic order (coordinate 0 most significant)."""
        return sorted(str(v) for v in self.basis_vectors())


def permute_bits(x: int, images: Sequence[int]) -> int:
    out = 0
    i = 0
    while x:
        if x & 1:
            out |= 1 << images[i]
        x >>= 1
        i += 1
    return out


def _ones(n: int) -> int:
    return (1 << n) - 1


def _check_even_len(n: int) -> None:
    if n <= 0 or n % 2:
        raise ValueError(f"ambient length must be a positive even number, got {n}")


def hprod(x: Gf2Vector, y: Gf2Vector) -> Gf2Vector:
    """Coordinatewise product x∘y."""
    return x & y


def even_subspace(r: int) -> Subspace:
    """V_2r: even-weight vectors of length 2r."""
    if r < 1:
        raise ValueError("r must be >= 1")
    n = 2 * r
    return Subspace(n, kernel(Gf2Matrix(1, n, (_ones(n),))).rows)


def annihilator(v: Gf2Vector) -> Subspace:
    """V(v) = {x in V_2r : x∘v has even weight}."""
    n = v.length
    _check_even_len(n)
    return Subspace(n, kernel(Gf2Matrix(2, n, (_ones(n), v.bits))).rows)


def split_annihilator(v: Gf2Vector) -> tuple[Subspace, Subspace]:
    """(V1(v), V2(v)): even vectors supported inside, resp. outside, supp(v)."""
    n = v.length
    _check_even_len(n)
    if v.weight % 2:
        raise ValueError("v must have even weight")
    if v.bits in (0, _ones(n)):
        raise ValueError("decomposition is degenerate for v = 0 or v = all-ones")
    inside = v.support
    outside = [i for i in range(n) if not (v.bits >> i) & 1]

    def even_on(coords: list[int]) -> Subspace:
        first = coords[0]
        return Subspace.span([(1 << first) | (1 << c) for c in coords[1:]], n)

    return even_on(inside), even_on(outside)


def annihilator_family(vs: Sequence[Gf2Vector], n: int | None = None) -> Subspace:
    """V(v1, ..., vk) = intersection of annihilators; V_2r for the empty family."""
    if n is None:
        if not vs:
            raise ValueError("ambient length required for an empty family")
        n = vs[0].length
    _check_even_len(n)
    if any(v.length != n for v in vs):
        raise ValueError("length mismatch")
    rows = (_ones(n),) + tuple(v.bits for v in vs)
    return Subspace(n, kernel(Gf2Matrix(len(rows), n, rows)).rows)


def symmetric_law_check(u: Gf2Vector, v: Gf2Vector) -> bool:
    """Check V(u+v) = [V(u) ∩ V(v)] ∪ [V_2r minus (V(u) ∪ V(v))] pointwise."""
    if u.length != v.length:
        raise ValueError("length mismatch")
    n = u.length
    Vu, Vv, Vuv = annihilator(u), annihilator(v), annihilator(u + v)
    for x in even_subspace(n // 2).elements():
        in_u, in_v = Vu.contains_bits(x), Vv.contains_bits(x)
        rhs = (in_u and in_v) or (not in_u and not in_v)
        if Vuv.contains_bits(x) != rhs:
            return False
    return True


def is_even(x: int) -> bool:
    return not x.bit_count() & 1


def is_hadamard_closed(W: Subspace) -> bool:
    """True iff u∘v has even weight for all u, v in W (W must lie in V_2r)."""
    if not all(is_even(b) for b in W.basis):
        raise ValueError("subspace is not contained in the even-weight subspace")
    return all(is_even(a & b) for a, b in combinations(W.basis, 2))
