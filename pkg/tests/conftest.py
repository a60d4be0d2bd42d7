from pathlib import Path
import sys

import pytest

# Add project root to Python path so 'src' module can be imported
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.algebra.chow import CurveClass, ShapeTag  # noqa: E402
from src.algebra.field import Field  # noqa: E402
from src.bundles.monad import MonadShape, random_monad  # noqa: E402

RESULT_DIR = project_root / "tests" / "results"

# Engine settings used across the suite: exact at pad 0, re-checked at pad 2.
PAD = 0
PAD_CHECK = True


@pytest.fixture(scope="session")
def field():
    return Field.prime()


@pytest.fixture(scope="session")
def small_field():
    return Field.prime(101)


def make_monad(tag: ShapeTag, c2, seed: int = 1):
    return random_monad(MonadShape(tag, CurveClass.of(c2)), Field.prime(), seed=seed)


@pytest.fixture(scope="session")
def kernel_110():
    return make_monad(ShapeTag.KERNEL, (1, 1, 0))


@pytest.fixture(scope="session")
def kernel_111():
    return make_monad(ShapeTag.KERNEL, (1, 1, 1))


@pytest.fixture(scope="session")
def global_110():
    return make_monad(ShapeTag.GLOBAL, (1, 1, 0))


@pytest.fixture(scope="session")
def results_dir():
    RESULT_DIR.mkdir(parents=True, exist_ok=True)
    return RESULT_DIR
