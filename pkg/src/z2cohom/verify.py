"""Self-check suites run by ``z2cohom verify``."""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources

from .classify import (
    PUBLISHED_COUNTS,
    classify_M,
    double_cosets_orthogonal,
    same_orbit,
    same_orthogonal_double_coset,
    stack_identity_over,
)
from .equivalence import weyl_census
from .gf2 import Gf2Matrix, Gf2Vector, parse_matrix, rref_rows
from .hadamard import annihilator, annihilator_family, split_annihilator, symmetric_law_check

SUITES = ("lemmas", "weyl", "classification")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def load_fixture(name: str) -> Gf2Matrix:
    text = resources.files("z2cohom").joinpath("data", name).read_text(encoding="utf-8")
    return parse_matrix(text)


def random_dimension_trial(rng: random.Random, max_r: int = 6) -> list[str]:
    """One random instance of each dimension law; returns failure descriptions."""
    fails = []
    r = rng.randint(1, max_r)
    n = 2 * r
    ones = (1 << n) - 1
    v = rng.randrange(1, ones)
    if annihilator(Gf2Vector(n, v)).dim != n - 2:
        fails.append(f"dim V(v) != 2r-2 for v={Gf2Vector(n, v)}")
    k = rng.randint(1, n - 1)
    vs = [rng.randrange(1 << n) for _ in range(k)]
    if len(rref_rows([ones] + vs, n)[0]) == k + 1:
        got = annihilator_family([Gf2Vector(n, x) for x in vs]).dim
        if got != n - 1 - k:
            fails.append(f"dim V(v1..v{k}) = {got} != {n - 1 - k}")
    if r >= 2:
        m = 2 * rng.randint(1, r - 1)
        w = Gf2Vector.from_indices(n, rng.sample(range(n), m))
        V1, V2 = split_annihilator(w)
        if (V1.dim, V2.dim) != (m - 1, n - m - 1):
            fails.append(f"split dims {(V1.dim, V2.dim)} != {(m - 1, n - m - 1)}")
    return fails


def suite_lemmas(trials: int = 10_000, seed: int = 0) -> list[CheckResult]:
    rng = random.Random(seed)
    failures: list[str] = []
    for _ in range(trials):
        failures.extend(random_dimension_trial(rng))
    out = [CheckResult("dimension laws", not failures, f"{trials} random instances, {len(failures)} failures")]
    bad = 0
    sym_trials = 200
    for _ in range(sym_trials):
        r = rng.randint(1, 4)
        n = 2 * r
        if not symmetric_law_check(Gf2Vector(n, rng.randrange(1 << n)), Gf2Vector(n, rng.randrange(1 << n))):
            bad += 1
    out.append(CheckResult("symmetric-difference law", bad == 0, f"{sym_trials} random pairs, {bad} failures"))
    return out


def suite_weyl() -> list[CheckResult]:
    out = []
    for r, expect in ((1, 2), (2, 24)):
        found, perms = weyl_census(r)
        out.append(
            CheckResult(
                f"weyl census r={r}",
                found == expect and perms == found,
                f"{found} automorphisms ({perms} permutation matrices), expected {expect}",
            )
        )
    return out


def suite_classification(max_r: int = 6) -> list[CheckResult]:
    out = []
    counts = {r: len(classify_M(r)) for r in range(1, max_r + 1)}
    expect = {r: PUBLISHED_COUNTS[r] for r in counts}
    out.append(CheckResult("N(r) table", counts == expect, f"got {counts}, expected {expect}"))
    bounds = {r: double_cosets_orthogonal(r) for r in range(1, min(max_r, 4) + 1)}
    ok = all(counts[r] <= bounds[r] for r in bounds)
    out.append(CheckResult("double-coset bound", ok, f"N(r) <= |S\\O/S| for r<=4: {bounds}"))
    P1, P2 = load_fixture("p1.txt"), load_fixture("p2.txt")
    same_code = same_orbit(stack_identity_over(P1), stack_identity_over(P2))
    same_coset = same_orthogonal_double_coset(P1, P2)
    out.append(
        CheckResult(
            "P1/P2 example",
            same_code and not same_coset,
            f"same M_6 orbit: {same_code}, same O(6) double coset: {same_coset}",
        )
    )
    return out


def run_suite(name: str) -> list[CheckResult]:
    if name == "all":
        return [c for s in SUITES for c in run_suite(s)]
    if name == "lemmas":
        return suite_lemmas()
    if name == "weyl":
        return suite_weyl()
    if name == "classification":
        return suite_classification()
    raise ValueError(f"unknown suite {name!r}")
