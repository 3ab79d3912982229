import random

import pytest

from cycrew import UniversalContext, samples

acceptance_lines = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def dinf():
    return samples.dihedral_infinity()


@pytest.fixture(scope="session")
def z4z6():
    return samples.z4_amalgam_z6()


@pytest.fixture(scope="session")
def hnn():
    return samples.hnn_s3()


@pytest.fixture(scope="session")
def dinf_ctx(dinf):
    return UniversalContext(dinf)


@pytest.fixture(scope="session")
def z4z6_ctx(z4z6):
    return UniversalContext(z4z6)


@pytest.fixture(scope="session")
def hnn_ctx(hnn):
    return UniversalContext(hnn)


@pytest.fixture(scope="session")
def free_ctx():
    return UniversalContext(samples.free_pregroup(2))


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def random_word(rng, k, max_len, min_len=0):
    n = rng.randrange(min_len, max_len + 1)
    return tuple(rng.randrange(k) for _ in range(n))


def conjugated(rng, ctx, w, max_conj=3):
    """w conjugated by a random short word, as an unreduced gamma word."""
    from cycrew.words import involute

    x = random_word(rng, len(ctx.alphabet), max_conj)
    return x + w + involute(x, ctx.alphabet)
