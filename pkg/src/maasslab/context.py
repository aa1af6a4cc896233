"""Working-precision settings shared by the numerical layers."""

from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass, replace

import mpmath
from mpmath import mp


def _default_digits() -> int:
    env = os.environ.get("MAASSLAB_DIGITS")
    if env:
        return max(20, int(env))
    return 60


@dataclass(frozen=True)
class PrecisionContext:
    """Bundle of precision knobs: decimal digits, quadrature tolerance,
    series truncation threshold, and Kloosterman-sum cutoff."""

    digits: int = 60
    quad_tol: float | None = None   # relative quadrature tolerance
    series_cut: int = 400           # default q-expansion truncation (exponent numerator)
    c_max: int = 10_000             # modulus cutoff in Kloosterman series

    def __post_init__(self):
        if self.digits < 20:
            raise ValueError("need at least 20 working digits")
        tol = self.quad_tol if self.quad_tol is not None else mpmath.mpf(10) ** (-self.digits + 10)
        if tol < mpmath.mpf(10) ** (-self.digits + 10):
            raise ValueError("quad_tol finer than working precision supports")
        object.__setattr__(self, "quad_tol", tol)

    def with_digits(self, digits: int) -> "PrecisionContext":
        return replace(self, digits=digits, quad_tol=None)

    @property
    def eps(self):
        return mpmath.mpf(10) ** (-self.digits)

    @contextmanager
    def workprec(self, extra: int = 10):
        """mpmath working precision raised to digits + extra guard digits."""
        with mp.workdps(self.digits + extra):
            yield mp


DEFAULT_CTX = PrecisionContext(digits=_default_digits())
