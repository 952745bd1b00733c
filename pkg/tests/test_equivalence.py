import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_n3_profile, random_self_dual_code
from z2cohom.classify import BudgetExceededError, column_span, gen_B, stacked_identity
from z2cohom.cohomology import RingElement, index, profile_from_code, standard_profile_n2
from z2cohom.equivalence import (
    AnalyticIso,
    Permutation,
    analytic_iso,
    apply_permutation,
    brute_graded_isos,
    equivalence_witness,
    flag_equivalent,
    is_hadamard_automorphism,
    weyl_census,
)
from z2cohom.gf2 import Gf2Matrix, Gf2Vector, SingularMatrixError
from z2cohom.hadamard import Subspace


def vec(s):
    return Gf2Vector.from_str(s)


def span(*rows):
    return Subspace.span([vec(s) for s in rows])


P_A = profile_from_code(3, 2, span("1111", "1100"))
P_B = profile_from_code(3, 2, span("1111", "1010"))


@st.composite
def perm_and_vectors(draw):
    n = draw(st.integers(1, 16))
    images = draw(st.permutations(range(n)))
    x = Gf2Vector(n, draw(st.integers(0, (1 << n) - 1)))
    y = Gf2Vector(n, draw(st.integers(0, (1 << n) - 1)))
    return Permutation(tuple(images)), x, y


def test_apply_permutation_examples():
    assert apply_permutation(Permutation.identity(4), vec("1011")) == vec("1011")
    assert apply_permutation(Permutation((1, 0, 2, 3)), vec("1000")) == vec("0100")
    with pytest.raises(ValueError):
        apply_permutation(Permutation.identity(3), vec("1000"))
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))


@given(perm_and_vectors())
def test_permutations_preserve_structure(pvs):
    s, x, y = pvs
    assert s(x & y) == s(x) & s(y)
    assert s(x).weight == x.weight
    assert s(Gf2Vector.ones(x.length)) == Gf2Vector.ones(x.length)
    assert s.inverse()(s(x)) == x
    assert s.to_matrix() @ x == s(x)
    assert s.compose(s.inverse()).is_identity()


def test_hadamard_automorphism_examples():
    for images in itertools.permutations(range(4)):
        assert is_hadamard_automorphism(Permutation(images).to_matrix())
    assert not is_hadamard_automorphism(Gf2Matrix.from_strings(["11", "01"]))
    with pytest.raises(SingularMatrixError):
        is_hadamard_automorphism(Gf2Matrix.from_strings(["11", "11"]))
    # fixes V_4 setwise but is not multiplicative
    M = Gf2Matrix.from_strings(["1110", "1101", "1011", "0111"])
    assert not is_hadamard_automorphism(M)


def test_weyl_census():
    assert weyl_census(1) == (2, 2)
    with pytest.raises(BudgetExceededError):
        weyl_census(3)


def test_flag_equivalent_examples():
    assert flag_equivalent(P_A, P_A).is_identity()
    w = equivalence_witness(P_A, P_B)
    assert w.equivalent and w.permutation.images == (0, 2, 1, 3)
    assert w.to_dict() == {"equivalent": True, "permutation": [0, 2, 1, 3], "invariant_mismatch": None}
    for r in range(1, 7):
        assert flag_equivalent(standard_profile_n2(r), standard_profile_n2(r)) is not None
    no = equivalence_witness(standard_profile_n2(3), standard_profile_n2(4))
    assert not no.equivalent and no.invariant_mismatch == "fixed-point counts differ"


def test_inequivalent_codes_are_separated():
    p = profile_from_code(3, 4, column_span(stacked_identity(4)))
    q = profile_from_code(3, 4, column_span(gen_B(4)))
    res = equivalence_witness(p, q)
    assert not res.equivalent and res.invariant_mismatch


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_flag_equivalence_is_an_equivalence(seed, r):
    rng = random.Random(seed)
    p, q, s = (random_n3_profile(r, rng) for _ in range(3))
    assert flag_equivalent(p, p).is_identity()
    pq, qp = flag_equivalent(p, q), flag_equivalent(q, p)
    assert (pq is None) == (qp is None)
    if pq is not None:
        assert p.permuted(pq.images) == q
        assert q.permuted(pq.inverse().images) == p
        qs = flag_equivalent(q, s)
        if qs is not None:
            assert p.permuted(qs.compose(pq).images) == s


def test_analytic_iso_examples():
    ident = analytic_iso(Permutation.identity(4), P_A, P_A)
    a = RingElement.monomial(P_A, "1100", 1)
    assert ident(a) == a
    f = analytic_iso(flag_equivalent(P_A, P_B), P_A, P_B)
    assert f(a) == RingElement.monomial(P_B, "1010", 1)
    assert index(f(a)) == index(a)
    assert all(f.check().values())
    with pytest.raises(ValueError):
        AnalyticIso(Permutation.identity(4), P_A, P_B)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_witness_gives_ring_isomorphism(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 4)
    S = random_self_dual_code(r, rng)
    images = list(range(2 * r))
    rng.shuffle(images)
    p, q = profile_from_code(3, r, S), profile_from_code(3, r, S.permuted(images))
    f = analytic_iso(flag_equivalent(p, q), p, q)
    assert all(f.check().values())


def test_brute_isos_tiny():
    s = standard_profile_n2(1)
    isos = brute_graded_isos(s, s)
    assert {i.permutation.images for i in isos} == {(0, 1), (1, 0)}
    isos = brute_graded_isos(P_A, P_A)
    assert isos and all(i.permutation is not None for i in isos)
    # exactly the 8 coordinate symmetries of span{1111, 1100}
    assert len({i.permutation for i in isos}) == 8
    cross = brute_graded_isos(P_A, P_B)
    assert all(P_A.permuted(i.permutation.images) == P_B for i in cross)
    assert brute_graded_isos(P_A, standard_profile_n2(2)) == []
    with pytest.raises(BudgetExceededError):
        brute_graded_isos(standard_profile_n2(3), standard_profile_n2(3))
