import doctest

import pytest

from csmm import arithgeo, corealg, gaussmm, symfun


@pytest.mark.parametrize("module", [corealg, symfun, gaussmm, arithgeo])
def test_doctests(module):
    result = doctest.testmod(module)
    assert result.failed == 0
