import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from slicetorsion.cyclotomic import Cyclotomic, RootOfUnity, euler_phi
from slicetorsion.monomial_rep import MonomialMatrix

ROOT = Path(__file__).resolve().parent.parent
FIXTURE = ROOT / "fixtures" / "bing_fig8_rep.json"


def random_cyclotomic(rng, n, bound=5, rational=False):
    coeffs = []
    for _ in range(euler_phi(n)):
        c = rng.randint(-bound, bound)
        coeffs.append(Fraction(c, rng.randint(1, 4)) if rational else c)
    return Cyclotomic(n, coeffs)


def random_root(rng, n):
    return RootOfUnity(rng.randrange(n), n)


def random_monomial(rng, k, n):
    perm = list(range(k))
    rng.shuffle(perm)
    return MonomialMatrix(perm, [random_root(rng, n) for _ in range(k)])


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def fixture_path():
    return FIXTURE


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
