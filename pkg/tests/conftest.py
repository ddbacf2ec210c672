import os
import sys

import pytest

sys.path.append(os.path.join(os.path.dirname(os.path.abspath(__file__)), ".."))

from dampedbouncer.airy import get_basis
from dampedbouncer.common.system_configs import PhysicalSystem
from dampedbouncer.elements.catalog import PRINTED, VERIFIED
from dampedbouncer.elements.table import build_table


@pytest.fixture(scope="session")
def normalized() -> PhysicalSystem:
    return PhysicalSystem.normalized()


@pytest.fixture(scope="session")
def basis():
    return get_basis(60)


@pytest.fixture(scope="session")
def verified_table(basis):
    return build_table(basis, 40, VERIFIED)


@pytest.fixture(scope="session")
def printed_table(basis):
    return build_table(basis, 40, PRINTED)
