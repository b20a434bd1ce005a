import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import loop_space  # noqa: E402


@pytest.fixture
def space22():
    return loop_space(2, 2)


@pytest.fixture
def space23():
    return loop_space(2, 3)
