import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_n3_profile
from z2cohom.classify import column_span, gen_B
from z2cohom.cohomology import (
    CohomProfile,
    IndexPolynomial,
    InvalidProfileError,
    NotInRingImageError,
    RingElement,
    dumps_profile,
    index,
    largest_closed_index,
    loads_profile,
    multiply,
    profile_from_code,
    ring_dimensions,
    standard_profile_n2,
    validate_profile,
)
from z2cohom.gf2 import Gf2Vector
from z2cohom.hadamard import Subspace, even_subspace


def span(*rows):
    return Subspace.span([Gf2Vector.from_str(s) for s in rows])


def n3(rows):
    return CohomProfile(3, 2, (1, 1, 1, 1), (span("1111"), span(*rows), even_subspace(2)))


def test_validate_examples():
    for r in range(1, 17):
        assert validate_profile(standard_profile_n2(r)) == []
    assert validate_profile(n3(["1111", "1100"])) == []
    bad = validate_profile(n3(["1111", "1000"]))
    assert any(v.startswith("contained_in_even") for v in bad)


def test_validate_names_violations():
    p = CohomProfile(2, 2, (1, 1, 1), (span("1111"), even_subspace(2)))
    names = {v.split(":")[0] for v in validate_profile(p)}
    assert "betti_sum" in names
    closed_fail = CohomProfile(
        4, 3, (1, 2, 0, 2, 1), (span("111111"), span("111111", "110000", "101000"), span("111111", "110000", "101000"), even_subspace(3))
    )
    names = {v.split(":")[0] for v in validate_profile(closed_fail)}
    assert "product_closure" in names
    with pytest.raises(InvalidProfileError) as exc:
        ring_dimensions(closed_fail)
    assert exc.value.violations


def test_ring_dimensions_examples():
    assert ring_dimensions(standard_profile_n2(3), 4) == [1, 5, 6, 6, 6]
    assert ring_dimensions(n3(["1111", "1100"]), 5) == [1, 2, 3, 4, 4, 4]


def test_standard_profile_examples():
    p = standard_profile_n2(1)
    assert p.betti == (1, 0, 1) and p.filtration[0] == span("11")
    assert standard_profile_n2(3).betti == (1, 4, 1)


def test_profile_from_code_examples():
    assert profile_from_code(3, 1, span("11")).is_valid()
    assert profile_from_code(3, 2, span("1111", "1100")).is_valid()
    assert profile_from_code(3, 4, column_span(gen_B(4))).is_valid()
    with pytest.raises(ValueError):
        profile_from_code(3, 2, even_subspace(2))
    with pytest.raises(ValueError):
        profile_from_code(3, 2, span("1100", "1010"))
    with pytest.raises(ValueError):
        profile_from_code(4, 2, span("1111", "1100"))


def test_multiply_examples():
    p = n3(["1111", "1100"])
    a = RingElement.monomial(p, "1100", 1)
    assert a * a == RingElement.monomial(p, "1100", 2)
    one = RingElement.one(p)
    assert one * a == a
    bad = RingElement.monomial(p, "1010", 1)
    with pytest.raises(NotInRingImageError):
        multiply(bad, a)


def test_index_examples():
    p2 = standard_profile_n2(2)
    assert not index(RingElement.monomial(p2, "1100", 1))
    assert index(RingElement.monomial(p2, "1000", 2)) == IndexPolynomial(frozenset({0}))
    assert index(RingElement.monomial(p2, "1110", 3)) == IndexPolynomial(frozenset({1}))
    with pytest.raises(NotInRingImageError):
        index(RingElement.monomial(p2, "1000", 1))
    with pytest.raises(ValueError):
        IndexPolynomial(frozenset({-1}))


def test_largest_closed_index_examples():
    assert largest_closed_index(n3(["1111", "1100"])) == (1, 2)
    for r in range(1, 7):
        assert largest_closed_index(standard_profile_n2(r))[1] == 1
    assert largest_closed_index(standard_profile_n2(3)) == (0, 1)
    V = span("111111", "110000", "001100")
    p4 = CohomProfile(4, 3, (1, 2, 0, 2, 1), (span("111111"), V, V, even_subspace(3)))
    assert p4.is_valid()
    i, d = largest_closed_index(p4)
    assert d == 3 and i == 2


def test_json_round_trip():
    p = n3(["1111", "1100"])
    text = dumps_profile(p)
    assert loads_profile(text) == p
    doc = json.loads(text)
    assert doc["filtration"][1] == sorted(doc["filtration"][1])
    doc["filtration"] = doc["filtration"][:2]
    assert loads_profile(json.dumps(doc)) == p
    with pytest.raises(ValueError):
        loads_profile("{not json")
    with pytest.raises(ValueError):
        loads_profile('{"n": 2}')


@st.composite
def elements(draw, p, max_degree):
    terms = {}
    for d in range(max_degree + 1):
        piece = p.piece(d)
        coeffs = draw(st.lists(st.booleans(), min_size=piece.dim, max_size=piece.dim))
        x = 0
        for b, take in zip(piece.basis, coeffs):
            if take:
                x ^= b
        terms[d] = x
    return RingElement(p, terms)


@settings(max_examples=60)
@given(st.data())
def test_ring_axioms(data):
    r = data.draw(st.integers(1, 4))
    p = random_n3_profile(r, random.Random(data.draw(st.integers(0, 10**6))))
    a, b, c = (data.draw(elements(p, 3)) for _ in range(3))
    assert a.is_valid() and (a * b).is_valid()
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    index(a * b)


@given(st.integers(1, 12))
def test_dimensions_stabilize(r):
    dims = ring_dimensions(standard_profile_n2(r), 6)
    assert dims[2:] == [2 * r] * 5
    assert all(x < y for x, y in zip(dims[:2], dims[1:3])) or r == 1
