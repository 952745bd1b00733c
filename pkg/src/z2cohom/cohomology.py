"""Algebraic model of Z/2-equivariant cohomology rings with isolated fixed points.

A :class:`CohomProfile` stores the filtration V_0 ⊂ V_1 ⊂ ... ⊂ V_{n-1}
of subspaces of (Z/2)^2r.  The graded ring it describes is

    R = V_0 + V_1 t + ... + V_{n-1} t^{n-1} + (Z/2)^2r (t^n + t^{n+1} + ...)

inside (Z/2)^2r[t], with the coordinatewise product on coefficients.
Degrees >= n are never stored; they are the full space.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .gf2 import Gf2Vector
from .hadamard import Subspace, even_subspace, is_even, is_hadamard_closed


class InvalidProfileError(ValueError):
    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("invalid profile: " + "; ".join(self.violations))


class NotInRingImageError(ValueError):
    """A coefficient in degree d < n lies outside V_d."""


@dataclass(frozen=True)
class CohomProfile:
    n: int
    r: int
    betti: tuple[int, ...]
    filtration: tuple[Subspace, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "betti", tuple(self.betti))
        object.__setattr__(self, "filtration", tuple(self.filtration))

    @property
    def length(self) -> int:
        return 2 * self.r

    def piece(self, d: int) -> Subspace:
        """Coefficient space in degree d."""
        if d < 0:
            raise ValueError("negative degree")
        if d < self.n:
            return self.filtration[d]
        return Subspace.full(self.length)

    def is_valid(self) -> bool:
        return not validate_profile(self)

    def permuted(self, images: Sequence[int]) -> "CohomProfile":
        return CohomProfile(self.n, self.r, self.betti, tuple(V.permuted(images) for V in self.filtration))


def validate_profile(p: CohomProfile) -> list[str]:
    """Return the list of violated conditions (empty when valid)."""
    out: list[str] = []
    if p.n < 1:
        out.append("n: must be >= 1")
    if p.r < 1:
        out.append("r: must be >= 1")
    if out:
        return out
    n, r, b = p.n, p.r, p.betti
    if len(b) != n + 1:
        out.append(f"betti_length: expected {n + 1} entries, got {len(b)}")
    else:
        if any(x < 0 for x in b):
            out.append("betti_nonnegative: negative Betti number")
        if b[0] != 1 or b[n] != 1:
            out.append("betti_ends: b_0 and b_n must be 1")
        if any(b[i] != b[n - i] for i in range(n + 1)):
            out.append("betti_symmetry: b_i != b_(n-i)")
        if sum(b) != 2 * r:
            out.append(f"betti_sum: sum of Betti numbers {sum(b)} != 2r = {2 * r}")
    if len(p.filtration) != n:
        out.append(f"filtration_length: expected {n} subspaces, got {len(p.filtration)}")
        return out
    if any(V.ambient_len != 2 * r for V in p.filtration):
        out.append("ambient_length: subspace not in (Z/2)^2r")
        return out
    if len(b) == n + 1:
        for i, V in enumerate(p.filtration):
            expect = sum(b[: i + 1])
            if V.dim != expect:
                out.append(f"dimension: dim V_{i} = {V.dim}, expected {expect}")
    ones = Subspace.span([(1 << 2 * r) - 1], 2 * r)
    if p.filtration[0] != ones:
        out.append("V0_all_ones: V_0 must be spanned by the all-ones vector")
    top = even_subspace(r)
    if p.filtration[-1] != top:
        out.append(f"top_is_even: V_{n - 1} must equal the even-weight subspace")
    for i, V in enumerate(p.filtration):
        if not all(is_even(x) for x in V.basis):
            out.append(f"contained_in_even: V_{i} is not inside the even-weight subspace")
    for i in range(n - 1):
        if not p.filtration[i].issubspace(p.filtration[i + 1]):
            out.append(f"nested: V_{i} is not contained in V_{i + 1}")
    for i in range(1, n):
        for j in range(i, n - i):
            target = p.filtration[i + j]
            if not all(
                target.contains_bits(a & c) for a in p.filtration[i].basis for c in p.filtration[j].basis
            ):
                out.append(f"product_closure: V_{i} ∘ V_{j} not contained in V_{i + j}")
    return out


def require_valid(p: CohomProfile) -> None:
    violations = validate_profile(p)
    if violations:
        raise InvalidProfileError(violations)


def ring_dimensions(p: CohomProfile, max_degree: int | None = None) -> list[int]:
    """Dimensions of the graded pieces in degrees 0..max_degree (default n+1)."""
    require_valid(p)
    if max_degree is None:
        max_degree = p.n + 1
    return [p.piece(d).dim for d in range(max_degree + 1)]


def standard_profile_n2(r: int) -> CohomProfile:
    """The (forced) profile of a surface with 2r isolated fixed points."""
    if r < 1:
        raise ValueError("r must be >= 1")
    n = 2 * r
    return CohomProfile(
        2, r, (1, 2 * r - 2, 1), (Subspace.span([(1 << n) - 1], n), even_subspace(r))
    )


def profile_from_code(n: int, r: int, middle: Subspace) -> CohomProfile:
    """n = 3 profile whose V_1 is ``middle`` (∘-closed, contains all-ones, dim r)."""
    if n != 3:
        raise ValueError("profile_from_code builds n = 3 profiles only")
    length = 2 * r
    if middle.ambient_len != length:
        raise ValueError("middle subspace has the wrong ambient length")
    if middle.dim != r:
        raise ValueError(f"middle subspace must have dimension r = {r}, got {middle.dim}")
    if not middle.contains_bits((1 << length) - 1):
        raise ValueError("middle subspace must contain the all-ones vector")
    if not all(is_even(b) for b in middle.basis):
        raise ValueError("middle subspace must lie in the even-weight subspace")
    if not is_hadamard_closed(middle):
        raise ValueError("middle subspace is not closed under the Hadamard product")
    p = CohomProfile(
        3,
        r,
        (1, r - 1, r - 1, 1),
        (Subspace.span([(1 << length) - 1], length), middle, even_subspace(r)),
    )
    require_valid(p)
    return p


# -- ring elements ----------------------------------------------------------


@dataclass(frozen=True)
class RingElement:
    """Finite sum of terms v t^d; ``terms`` maps degree -> packed coefficient."""

    profile: CohomProfile
    terms: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for d, v in self.terms.items():
            if isinstance(v, Gf2Vector):
                if v.length != self.profile.length:
                    raise ValueError("coefficient length mismatch")
                v = v.bits
            if d < 0:
                raise ValueError("negative degree")
            if v:
                clean[d] = v
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def monomial(cls, profile: CohomProfile, v: Gf2Vector | str | int, degree: int) -> "RingElement":
        if isinstance(v, str):
            v = Gf2Vector.from_str(v)
        return cls(profile, {degree: v})

    @classmethod
    def one(cls, profile: CohomProfile) -> "RingElement":
        return cls(profile, {0: (1 << profile.length) - 1})

    def coefficient(self, d: int) -> Gf2Vector:
        return Gf2Vector(self.profile.length, self.terms.get(d, 0))

    @property
    def degrees(self) -> list[int]:
        return list(self.terms)

    def is_valid(self) -> bool:
        return all(
            d >= self.profile.n or self.profile.filtration[d].contains_bits(v) for d, v in self.terms.items()
        )

    def __add__(self, other: "RingElement") -> "RingElement":
        if other.profile != self.profile:
            raise ValueError("elements belong to different profiles")
        out = dict(self.terms)
        for d, v in other.terms.items():
            out[d] = out.get(d, 0) ^ v
        return RingElement(self.profile, out)

    def __mul__(self, other: "RingElement") -> "RingElement":
        return multiply(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.profile == other.profile and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.profile, tuple(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "RingElement(0)"
        n = self.profile.length
        parts = [f"{Gf2Vector(n, v)} t^{d}" for d, v in self.terms.items()]
        return "RingElement(" + " + ".join(parts) + ")"


def multiply(a: RingElement, b: RingElement) -> RingElement:
    """Product in R: (u t^i)(v t^j) = (u∘v) t^(i+j), extended bilinearly."""
    if a.profile != b.profile:
        raise ValueError("elements belong to different profiles")
    if not a.is_valid() or not b.is_valid():
        raise NotInRingImageError("operand is not an element of the ring")
    out: dict[int, int] = {}
    for i, u in a.terms.items():
        for j, v in b.terms.items():
            out[i + j] = out.get(i + j, 0) ^ (u & v)
    return RingElement(a.profile, out)


@dataclass(frozen=True)
class IndexPolynomial:
    """Element of Z/2[t]: the set of degrees with coefficient 1."""

    degrees: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "degrees", frozenset(self.degrees))
        if any(d < 0 for d in self.degrees):
            raise ValueError("index polynomial cannot have negative-degree terms")

    def coefficient(self, d: int) -> int:
        return int(d in self.degrees)

    def __bool__(self) -> bool:
        return bool(self.degrees)

    def __str__(self) -> str:
        if not self.degrees:
            return "0"
        return " + ".join("1" if d == 0 else f"t^{d}" for d in sorted(self.degrees, reverse=True))


def index(a: RingElement) -> IndexPolynomial:
    """Equivariant index: each term v t^d contributes (|v| mod 2) t^(d-n)."""
    n = a.profile.n
    degs = set()
    for d, v in a.terms.items():
        if d < n and not a.profile.filtration[d].contains_bits(v):
            raise NotInRingImageError(f"degree-{d} coefficient not in ring image")
        if v.bit_count() & 1:
            # d < n coefficients lie in V_d, which has only even vectors
            degs ^= {d - n}
    return IndexPolynomial(frozenset(degs))


def largest_closed_index(p: CohomProfile) -> tuple[int, int]:
    """Largest i with V_i closed under ∘ (products stay even), and dim V_i."""
    require_valid(p)
    for i in range(p.n - 1, -1, -1):
        if is_hadamard_closed(p.filtration[i]):
            return i, p.filtration[i].dim
    raise AssertionError("V_0 is always closed")  # pragma: no cover


# -- JSON ---------------------------------------------------------------------


def profile_to_dict(p: CohomProfile) -> dict:
    return {
        "n": p.n,
        "r": p.r,
        "betti": list(p.betti),
        "filtration": [V.to_strings() for V in p.filtration],
    }


def profile_from_dict(doc: Mapping) -> CohomProfile:
    """Build a profile from its JSON document; spanning sets are canonicalized.

    The top space V_{n-1} may be omitted, in which case the even-weight
    subspace is used.  The result is not validated here.
    """
    try:
        n, r = int(doc["n"]), int(doc["r"])
        betti = tuple(int(x) for x in doc["betti"])
        raw = doc["filtration"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed profile document: {exc}") from exc
    if r < 1 or n < 1:
        raise ValueError("malformed profile document: n and r must be positive")
    length = 2 * r
    spaces = []
    for rows in raw:
        vecs = [Gf2Vector.from_str(s) for s in rows]
        if any(v.length != length for v in vecs):
            raise ValueError(f"malformed profile document: rows must have length {length}")
        spaces.append(Subspace.span(vecs, length))
    if len(spaces) == n - 1:
        spaces.append(even_subspace(r))
    return CohomProfile(n, r, betti, tuple(spaces))


def dumps_profile(p: CohomProfile) -> str:
    return json.dumps(profile_to_dict(p), indent=2) + "\n"


def loads_profile(text: str) -> CohomProfile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("malformed profile document: expected an object")
    return profile_from_dict(doc)
