import pytest
from mpmath import mp

from maasslab.context import PrecisionContext
from maasslab.exact import kloosterman_table
from maasslab.spectral import assemble_H, build_trace_table

# m-values covering: Lehmer/S(n,x) checks (|m| <= 5), the acceptance indices
# n in {-23,-47,-71,-95,-119, 1, 25, 73, 97, 145}, and every non-square
# 0 < n <= 361 needed by the depth-3/2 assembly.
SCAN_MS = tuple(sorted({0, 1, 2, 3, 4, 5, -1, -2, -3, -4, -5,
                        -6, -8, -9, -10, -11, -13, -14}))
SCAN_CMAX = 10_000

N_MAX_H = 24 * 15 + 1


@pytest.fixture(scope="session")
def ctx30():
    return PrecisionContext(digits=30)


@pytest.fixture(scope="session")
def ctx60():
    return PrecisionContext(digits=60)


@pytest.fixture(scope="session")
def ktable():
    """The one big Kloosterman scan shared by everything."""
    return kloosterman_table(SCAN_CMAX, SCAN_MS)


@pytest.fixture(scope="session")
def trace_table(ctx30, ktable):
    """Tr_n(f) for 0 < n <= 361: squares by regularized quadrature,
    the rest through the Kloosterman series."""
    return build_trace_table(N_MAX_H, ctx30, fast=True, c_max=4000,
                             square_digits=25)


@pytest.fixture(scope="session")
def H_full(ctx30, trace_table):
    return assemble_H(N_MAX_H, traces=trace_table, ctx=ctx30, neg_max=N_MAX_H)


@pytest.fixture(autouse=True)
def _ambient_precision():
    # high ambient precision so that test-side comparisons can resolve
    # 1e-50-level tolerances
    old = mp.dps
    mp.dps = 85
    yield
    mp.dps = old
