import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from frozenstar import backend


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation outside any timed section."""
    z = np.array([0.7 + 0.1j, 1.9])
    w = np.array([0.1 + 0.0j, 0.2])
    backend.ratio_series(z, 1.1, w, 1e-6)
    backend.term_ratios(z, 1.1, 2, 1e-6)
    backend.sin_prod_excl(z, np.array([1.0, 1.2]))
    yield
