import functools

from z2cohom.cohomology import profile_from_code
from z2cohom.classify import classify_M, column_span


@functools.lru_cache(maxsize=None)
def class_reps(r):
    return tuple(c.representative.matrix for c in classify_M(r))


def random_self_dual_code(r, rng):
    """Column span of a random class representative, randomly relabelled."""
    rep = rng.choice(class_reps(r))
    S = column_span(rep)
    images = list(range(2 * r))
    rng.shuffle(images)
    return S.permuted(images)


def random_n3_profile(r, rng):
    return profile_from_code(3, r, random_self_dual_code(r, rng))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
