import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from vqabench.fermions import HubbardSpec, build_hubbard


@pytest.fixture(scope="session")
def hubbard_2x2():
    return build_hubbard(HubbardSpec(2, 2, t=1.0, u=2.0))


@pytest.fixture(scope="session")
def hubbard_2x2_hamiltonian(hubbard_2x2):
    return hubbard_2x2.total()
