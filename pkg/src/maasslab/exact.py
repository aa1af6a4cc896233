"""Exact rational/integer combinatorics: Dedekind sums, the eta multiplier
system, generalized Kloosterman sums A_c(n), the Kronecker character chi_12,
and partition statistics p(n), spt(n), s(n).

Everything here is pure and deterministic; the only floating point lives in
the vectorized Kloosterman scans, which are cross-checked against the exact
rational-phase evaluation in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from mpmath import mp

from .context import DEFAULT_CTX, PrecisionContext
from .matrices import GroupElement


# ---------------------------------------------------------------------------
# Dedekind sums
# ---------------------------------------------------------------------------

def dedekind_sum_direct(d: int, c: int) -> Fraction:
    """s(d,c) by the defining sum sum_{r=1}^{c-1} (r/c)((dr/c) - floor - 1/2).

    Slow oracle; kept independent of the reciprocity descent."""
    if c < 1:
        raise ValueError("modulus must be positive")
    if math.gcd(d, c) != 1:
        raise ValueError("gcd violation")
    total = Fraction(0)
    for r in range(1, c):
        x = Fraction(d * r, c)
        total += Fraction(r, c) * (x - math.floor(x) - Fraction(1, 2))
    return total


def dedekind_sum(d: int, c: int) -> Fraction:
    """s(d,c) via the Euclid-style reciprocity descent (exact)."""
    if c < 1:
        raise ValueError("modulus must be positive")
    if math.gcd(d, c) != 1:
        raise ValueError("gcd violation")
    d %= c
    total = Fraction(0)
    sign = 1
    # s(d,c) = (d^2+c^2+1)/(12dc) - 1/4 - s(c mod d, d)
    while d > 0:
        total += sign * (Fraction(d * d + c * c + 1, 12 * d * c) - Fraction(1, 4))
        sign = -sign
        d, c = c % d, d
    return total


def _dedekind_float(d: int, c: int) -> float:
    """Float64 descent, used only inside the big Kloosterman scans.

    Absolute error stays below ~1e-12 for c up to 10^4."""
    d %= c
    total = 0.0
    sign = 1.0
    while d > 0:
        total += sign * ((d * d + c * c + 1) / (12.0 * d * c) - 0.25)
        sign = -sign
        d, c = c % d, d
    return total


# ---------------------------------------------------------------------------
# Eta multiplier
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnitRoot24:
    """A 24th root of unity e(exponent/24)."""

    exponent: int

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % 24)

    def __mul__(self, other: "UnitRoot24") -> "UnitRoot24":
        return UnitRoot24(self.exponent + other.exponent)

    def conjugate(self) -> "UnitRoot24":
        return UnitRoot24(-self.exponent)

    def value(self):
        """Numerical value at the current mpmath precision."""
        return mp.expjpi(mp.mpf(2 * self.exponent) / 24)


def eta_multiplier(gamma: GroupElement) -> UnitRoot24:
    """The multiplier chi with eta(g tau) = chi(g) sqrt(c tau + d) eta(tau),
    principal branch of the square root.

    For c > 0 this is e(((a+d)/c - 12 s(d,c) - 3)/24); the c <= 0 cases are
    reduced to it via eta(tau + b) = e(b/24) eta(tau) and the -I relation."""
    if gamma.scale != 1:
        raise ValueError("eta multiplier is defined on SL2(Z) only")
    a, b, c, d = gamma.as_tuple()
    if c == 0:
        # +-T^b; sqrt(-1) = i contributes e(-6/24) when d = -1
        if d == 1:
            return UnitRoot24(b)
        return UnitRoot24(-b - 6)
    if c < 0:
        # chi(g) = i * chi(-g) since sqrt(c tau + d) = -i sqrt(-c tau - d)
        return UnitRoot24(6) * eta_multiplier(-gamma)
    expo = Fraction(a + d, c) - 12 * dedekind_sum(d, c) - 3
    if expo.denominator != 1:
        raise ArithmeticError("eta multiplier exponent must be integral")
    return UnitRoot24(int(expo))


# ---------------------------------------------------------------------------
# Kronecker character chi_12 and friends
# ---------------------------------------------------------------------------

def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for arbitrary integers."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign
    # factor out 2s from n
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 == 1 and a % 8 in (3, 5):
            sign = -sign
    a %= n
    # Jacobi symbol on odd n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def chi12(x) -> int:
    """chi_12 = (12|n); returns 0 when x is not a rational integer."""
    if isinstance(x, Fraction):
        if x.denominator != 1:
            return 0
        x = x.numerator
    if isinstance(x, float):
        if not x.is_integer():
            return 0
        x = int(x)
    return kronecker_symbol(12, int(x))


def chi12_sqrt(n: int) -> int:
    """chi_12(sqrt(n)): 0 unless n is a perfect square."""
    if n < 0:
        return 0
    r = math.isqrt(n)
    return chi12(r) if r * r == n else 0


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def omega0(c: int) -> int:
    """Number of distinct odd primes dividing c."""
    c = abs(c)
    count = 0
    while c % 2 == 0:
        c //= 2
    p = 3
    while p * p <= c:
        if c % p == 0:
            count += 1
            while c % p == 0:
                c //= p
        p += 2
    if c > 1:
        count += 1
    return count


# ---------------------------------------------------------------------------
# Kloosterman sums
# ---------------------------------------------------------------------------

def kloosterman_A(c: int, m: int, ctx: PrecisionContext = DEFAULT_CTX,
                  method: str = "fast"):
    """A_c(m) = sum_{d mod c, (d,c)=1} e^{pi i s(d,c)} e(-d m / c).

    Phases are exact rationals (in turns) reduced mod 1 before a single
    complex exponential per term.  method 'direct' forces the defining-sum
    Dedekind evaluation, 'fast' the reciprocity descent."""
    if c < 1:
        raise ValueError("modulus must be positive")
    sfun = dedekind_sum if method == "fast" else dedekind_sum_direct
    with ctx.workprec() as w:
        total = w.mpc(0)
        for d in range(c):
            if math.gcd(d, c) != 1:
                continue
            phase = sfun(d, c) / 2 - Fraction(d * m, c)
            phase -= math.floor(phase)
            total += w.expjpi(2 * w.mpf(phase.numerator) / phase.denominator)
        return total


def kloosterman_k(a: int, b: int, c: int, ctx: PrecisionContext = DEFAULT_CTX):
    """Ordinary Kloosterman sum k(a,b;c) = sum e((a dbar + b d)/c)."""
    if c < 1:
        raise ValueError("modulus must be positive")
    with ctx.workprec() as w:
        total = w.mpc(0)
        for d in range(c):
            if math.gcd(d, c) != 1:
                continue
            dbar = pow(d, -1, c) if c > 1 else 0
            phase = Fraction(a * dbar + b * d, c)
            phase -= math.floor(phase)
            total += w.expjpi(2 * w.mpf(phase.numerator) / phase.denominator)
        return total


def kloosterman_K_eta(m: int, n: int, c: int,
                      ctx: PrecisionContext = DEFAULT_CTX):
    """K(m,n;c) = sum_{d mod c, (d,c)=1} e^{pi i s(d,c)} e((dbar m + d n)/c),
    the eta-multiplier Kloosterman sum; satisfies A_c(n) = K(0,-n,c)."""
    if c < 1:
        raise ValueError("modulus must be positive")
    with ctx.workprec() as w:
        total = w.mpc(0)
        for d in range(c):
            if math.gcd(d, c) != 1:
                continue
            dbar = pow(d, -1, c) if c > 1 else 0
            phase = dedekind_sum(d, c) / 2 + Fraction(dbar * m + d * n, c)
            phase -= math.floor(phase)
            total += w.expjpi(2 * w.mpf(phase.numerator) / phase.denominator)
        return total


def _dedekind_float_vec(ds: np.ndarray, c: int) -> np.ndarray:
    """Vectorized float64 reciprocity descent for all d in ds (coprime to c)."""
    D = ds.astype(np.int64) % c
    C = np.full(len(ds), c, dtype=np.int64)
    total = np.zeros(len(ds))
    sign = np.ones(len(ds))
    active = D > 0
    while active.any():
        Da = D[active].astype(np.float64)
        Ca = C[active].astype(np.float64)
        total[active] += sign[active] * ((Da * Da + Ca * Ca + 1.0)
                                         / (12.0 * Da * Ca) - 0.25)
        sign[active] = -sign[active]
        Dn = C[active] % D[active]
        C[active] = D[active]
        D[active] = Dn
        active = D > 0
    return total


@lru_cache(maxsize=8)
def kloosterman_table(c_max: int, ms: tuple) -> dict:
    """Vectorized scan of A_c(m) for 1 <= c <= c_max and every m in ms.

    Returns {m: float64 array A of length c_max+1 with A[c] = A_c(m)}.
    A_c(m) is real: the d and c-d terms are complex conjugates since
    s(c-d,c) = -s(d,c).  Summation order is fixed (increasing d) so the
    output is deterministic."""
    ms = tuple(ms)
    out = {m: np.zeros(c_max + 1) for m in ms}
    for m in ms:
        out[m][1] = 1.0
    for c in range(2, c_max + 1):
        ds = np.nonzero(np.gcd(np.arange(c), c) == 1)[0]
        base = np.pi * _dedekind_float_vec(ds, c)
        for m in ms:
            out[m][c] = np.cos(base - (2.0 * np.pi * m / c) * ds).sum()
    return out


def lehmer_ratios(c_max: int, ms: tuple, table: dict | None = None) -> np.ndarray:
    """max_m |A_c(m)| / (2^{omega0(c)} sqrt(c)) for each c (index = c)."""
    if table is None:
        table = kloosterman_table(c_max, tuple(ms))
    bound = np.array([1.0] + [2.0 ** omega0(c) * math.sqrt(c)
                              for c in range(1, c_max + 1)])
    worst = np.zeros(c_max + 1)
    for m in ms:
        worst = np.maximum(worst, np.abs(table[m][:c_max + 1]))
    return worst / bound


def partial_sum_S(n: int, x: float, table: dict | None = None) -> float:
    """S(n,x) = sum_{c <= x} A_c((1-n)/24) / c."""
    if n % 24 != 1:
        raise ValueError("index must be 1 mod 24")
    if x < 1:
        raise ValueError("cutoff below 1")
    m = (1 - n) // 24
    cx = int(math.floor(x))
    if table is None or m not in table or len(table[m]) <= cx:
        table = kloosterman_table(cx, (m,))
    col = table[m]
    cs = np.arange(1, cx + 1)
    return float((col[1:cx + 1] / cs).sum())


# ---------------------------------------------------------------------------
# Partitions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4)
def _partition_list(n_max: int) -> tuple:
    """p(0..n_max) by the pentagonal-number recurrence."""
    p = [0] * (n_max + 1)
    p[0] = 1
    for n in range(1, n_max + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 == 1 else -1
            total += sign * p[n - g1]
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return tuple(p)


def partition_p(n: int) -> int:
    """Partition function p(n), exact."""
    if n < 0:
        raise ValueError("negative argument")
    return _partition_list(max(n, 64))[n]


def iter_partitions(n: int, max_part: int | None = None):
    """Yield all partitions of n as weakly decreasing tuples (oracle use)."""
    if n == 0:
        yield ()
        return
    if max_part is None or max_part > n:
        max_part = n
    for first in range(max_part, 0, -1):
        for rest in iter_partitions(n - first, first):
            yield (first,) + rest


def partition_p_enum(n: int) -> int:
    """Brute-force enumeration count (test oracle)."""
    return sum(1 for _ in iter_partitions(n))


def spt_enum(n: int) -> int:
    """spt(n) by direct enumeration: total multiplicity of the smallest part."""
    total = 0
    for lam in iter_partitions(n):
        smallest = lam[-1]
        total += sum(1 for part in lam if part == smallest)
    return total


@lru_cache(maxsize=4)
def _spt_list(n_max: int) -> tuple:
    """spt(0..n_max) via counting partitions with all parts > k.

    spt(n) = sum_{k>=1} sum_{m>=1} m * #{partitions of n - mk into parts > k}."""
    # gt[k][x] = number of partitions of x with every part > k, for 0<=k<=n_max
    gt = [[0] * (n_max + 1) for _ in range(n_max + 2)]
    for k in range(n_max + 2):
        gt[k][0] = 1
    for k in range(n_max, -1, -1):
        row = gt[k]
        above = gt[k + 1]
        part = k + 1
        for x in range(1, n_max + 1):
            row[x] = above[x] + (row[x - part] if x >= part else 0)
    out = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        total = 0
        for k in range(1, n + 1):
            m = 1
            while m * k <= n:
                total += m * gt[k][n - m * k]
                m += 1
        out[n] = total
    return tuple(out)


def spt(n: int) -> int:
    """Total number of smallest parts in the partitions of n."""
    if n < 1:
        raise ValueError("argument must be positive")
    return _spt_list(max(n, 64))[n]


def s_coeff(x) -> Fraction:
    """s(n) = spt(n) + (24n-1) p(n) / 12 for integers n >= 1, and s(0) = -1/12.

    Accepts a nonnegative integer or a Fraction that reduces to one (the
    argument pattern (m+1)/24 with m = -1 mod 24)."""
    x = Fraction(x)
    if x.denominator != 1 or x < 0:
        raise ValueError("argument must reduce to a nonnegative integer")
    n = int(x)
    if n == 0:
        return Fraction(-1, 12)
    return spt(n) + Fraction(24 * n - 1, 12) * partition_p(n)


def trace_cm_exact(n: int) -> Fraction:
    """12 s((1-n)/24) for n = 1 mod 24, n < 0: the exact CM trace value."""
    if n >= 0 or n % 24 != 1:
        raise ValueError("need a negative index = 1 mod 24")
    return 12 * s_coeff(Fraction(1 - n, 24))
