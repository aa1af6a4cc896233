"""Arbitrary-precision special functions: the normalized incomplete gamma
ratio beta_k, the alpha kernel, Bessel J/I/K, Whittaker M/W evaluated from
an integral representation with s-derivatives, and the normalizing factors
c(s), c'(s).

All routines take an optional PrecisionContext and evaluate with guard
digits on top of ctx.digits.
"""

from __future__ import annotations

from mpmath import mp

from .context import DEFAULT_CTX, PrecisionContext


def _as_mpf(x):
    return mp.mpf(x) if not isinstance(x, (mp.mpf, mp.mpc)) else x


# ---------------------------------------------------------------------------
# Incomplete gamma machinery
# ---------------------------------------------------------------------------

def gamma_star(a, z, ctx: PrecisionContext = DEFAULT_CTX):
    """Entire function gamma*(a,z) = e^{-z} sum_j z^j / Gamma(a+j+1).

    Equals gamma(a,z) / (Gamma(a) z^a) for z > 0 and continues it in z."""
    guard = 20 + int(abs(z) / 2.3) if z < 0 else 15
    with mp.workdps(ctx.digits + guard):
        z = _as_mpf(z)
        a = _as_mpf(a)
        total = mp.mpf(0)
        term_scale = mp.mpf(1)
        j = 0
        target = mp.mpf(10) ** (-(ctx.digits + 10))
        while True:
            term = term_scale / mp.gamma(a + j + 1)
            total += term
            j += 1
            term_scale *= z
            if j > 4 and abs(term) < target * max(1, abs(total)) and abs(z) < j:
                break
            if j > 10_000:
                raise ArithmeticError("gamma* series did not converge")
        return +(mp.e ** (-z) * total)


def beta_k(k, y, ctx: PrecisionContext = DEFAULT_CTX):
    """beta_k(y) = Gamma(1-k, y) / Gamma(1-k).

    Defined for y > 0 whenever 1-k is not a nonpositive integer (so k = 1/2
    and k = 3/2 are both fine).  Negative y is allowed only for k = 1/2,
    through beta_k(y) = 1 - y^{1-k} gamma*(1-k, y) with sqrt(-y) = i sqrt(y);
    the result is then complex."""
    k = mp.mpf(k)
    if k >= 1 and k == mp.floor(k):
        raise ValueError("k must not be a positive integer")
    with mp.workdps(ctx.digits + 15):
        y = _as_mpf(y)
        if y == 0:
            return mp.mpf(1)
        if y > 0:
            return +(mp.gammainc(1 - k, a=y, b=mp.inf) / mp.gamma(1 - k))
        if k != mp.mpf(1) / 2:
            raise ValueError("negative argument only supported at k = 1/2")
        root = mp.mpc(0, 1) * mp.sqrt(-y)      # y^{1/2} with sqrt(-y)=i sqrt(y)
        return +(1 - root * gamma_star(mp.mpf(1) / 2, y, ctx))


def erfc_quadrature(x, ctx: PrecisionContext = DEFAULT_CTX):
    """Independent erfc oracle: (2/sqrt(pi)) int_x^infty e^{-t^2} dt."""
    with mp.workdps(ctx.digits + 15):
        x = _as_mpf(x)
        val = mp.quad(lambda t: mp.e ** (-t * t), [x, x + 2, x + 10, mp.inf])
        return +(2 / mp.sqrt(mp.pi) * val)


# ---------------------------------------------------------------------------
# The alpha kernel
# ---------------------------------------------------------------------------

def alpha(y, ctx: PrecisionContext = DEFAULT_CTX):
    """alpha(y) = (sqrt y / 4 pi) int_0^oo e^{-pi y t} t^{-1/2} log(1+t) dt.

    Quadrature split at t = 1; the [0,1] piece is desingularized by t = u^2."""
    if y <= 0:
        raise ValueError("argument must be positive")
    with mp.workdps(ctx.digits + 15):
        y = _as_mpf(y)
        py = mp.pi * y

        def head(u):
            return 2 * mp.e ** (-py * u * u) * mp.log(1 + u * u)

        def tail(t):
            return mp.e ** (-py * t) / mp.sqrt(t) * mp.log(1 + t)

        cut = max(mp.mpf(2), 80 / py)   # exp(-py*t) below ~1e-35 past the cut
        head_val = mp.quad(head, [0, mp.mpf(1) / 2, 1])
        tail_val = mp.quad(tail, [1, cut, mp.inf])
        return +(mp.sqrt(y) / (4 * mp.pi) * (head_val + tail_val))


# ---------------------------------------------------------------------------
# Bessel functions
# ---------------------------------------------------------------------------

def bessel(kind: str, nu, x, ctx: PrecisionContext = DEFAULT_CTX):
    """J/I/K Bessel values at positive real argument."""
    if x <= 0:
        raise ValueError("argument must be positive")
    with mp.workdps(ctx.digits + 10):
        x = _as_mpf(x)
        nu = _as_mpf(nu)
        if kind == "J":
            return +mp.besselj(nu, x)
        if kind == "I":
            return +mp.besseli(nu, x)
        if kind == "K":
            return +mp.besselk(nu, x)
    raise ValueError("kind must be one of J, I, K")


# ---------------------------------------------------------------------------
# Whittaker functions
# ---------------------------------------------------------------------------

def _whittaker_W_integral(kappa, s, y, log_weight: bool = False):
    """W_{kappa, s-1/2}(y) from

        y^s e^{-y/2} / Gamma(s - kappa) *
            int_0^oo e^{-yt} t^{s-kappa-1} (1+t)^{s+kappa-1} dt,

    with t = u^2.  With log_weight, the integrand carries the extra factor
    log t + log(1+t) (the s-derivative of the integrand)."""
    kappa = mp.mpf(kappa)
    s = _as_mpf(s)
    y = _as_mpf(y)
    p = 2 * (s - kappa) - 1      # u-exponent after t = u^2

    def f(u):
        t = u * u
        w = mp.e ** (-y * t) * u ** p * (1 + t) ** (s + kappa - 1)
        if log_weight:
            w *= (2 * mp.log(u) if u > 0 else mp.ninf) + mp.log(1 + t)
        return 2 * w

    cut = mp.sqrt(max(mp.mpf(4), (mp.dps * mp.log(10) + 20) / y))
    val = mp.quad(f, [0, mp.mpf(1) / 2, 1, cut, mp.inf])
    return y ** s * mp.e ** (-y / 2) / mp.gamma(s - kappa) * val


def whittaker_Wn(n: int, y, s, ctx: PrecisionContext = DEFAULT_CTX,
                 method: str = "integral"):
    """W-Whittaker package (pi |n| y / 6)^{-1/4} W_{sgn(n)/4, s-1/2}(pi|n|y/6)
    for indices n = 1 mod 24."""
    if y <= 0:
        raise ValueError("argument must be positive")
    if n == 0:
        raise ValueError("index must be nonzero")
    with mp.workdps(ctx.digits + 15):
        s = _as_mpf(s)
        u = mp.pi * abs(n) * _as_mpf(y) / 6
        kappa = mp.mpf(1) / 4 if n > 0 else -mp.mpf(1) / 4
        if method == "integral":
            w = _whittaker_W_integral(kappa, s, u)
        elif method == "series":
            w = mp.whitw(kappa, s - mp.mpf(1) / 2, u)
        else:
            raise ValueError("method must be 'integral' or 'series'")
        return +(u ** (-mp.mpf(1) / 4) * w)


def whittaker_Wn_ds(n: int, y, s=None, ctx: PrecisionContext = DEFAULT_CTX,
                    method: str = "analytic", h_step=None):
    """d/ds of whittaker_Wn at s (default 3/4).

    'analytic' differentiates the integral representation under the integral
    sign; 'fd' is a central difference with one Richardson level."""
    with mp.workdps(ctx.digits + 15):
        s = mp.mpf(3) / 4 if s is None else _as_mpf(s)
        if method == "fd":
            h = mp.mpf(h_step if h_step is not None else "1e-6")

            def diff(hh):
                return (whittaker_Wn(n, y, s + hh, ctx)
                        - whittaker_Wn(n, y, s - hh, ctx)) / (2 * hh)

            d1, d2 = diff(h), diff(h / 2)
            return +((4 * d2 - d1) / 3)
        u = mp.pi * abs(n) * _as_mpf(y) / 6
        kappa = mp.mpf(1) / 4 if n > 0 else -mp.mpf(1) / 4
        w = _whittaker_W_integral(kappa, s, u)
        wlog = _whittaker_W_integral(kappa, s, u, log_weight=True)
        dW = w * (mp.log(u) - mp.digamma(s - kappa)) + wlog
        return +(u ** (-mp.mpf(1) / 4) * dW)


def _kummer_M(kappa, mu, z, ctx: PrecisionContext):
    """M_{kappa,mu}(z) by the defining Kummer series (oracle path)."""
    a = mu - kappa + mp.mpf(1) / 2
    b = 2 * mu + 1
    total = mp.mpf(1)
    term = mp.mpf(1)
    j = 0
    target = mp.mpf(10) ** (-(ctx.digits + 10))
    while True:
        term *= (a + j) * z / ((b + j) * (j + 1))
        total += term
        j += 1
        if abs(term) < target * max(1, abs(total)) and j > abs(z):
            break
        if j > 100_000:
            raise ArithmeticError("Kummer series did not converge")
    return mp.e ** (-z / 2) * z ** (mu + mp.mpf(1) / 2) * total


def whittaker_M(y, s, ctx: PrecisionContext = DEFAULT_CTX,
                method: str = "series"):
    """M-Whittaker package (pi y/6)^{-1/4} M_{1/4, s-1/2}(pi y / 6).

    At s = 3/4 this equals -(i sqrt(pi)/2)(1 - beta_{1/2}(-pi y/6)) e^{-pi y/12}."""
    if y <= 0:
        raise ValueError("argument must be positive")
    with mp.workdps(ctx.digits + 15):
        s = _as_mpf(s)
        u = mp.pi * _as_mpf(y) / 6
        if method == "series":
            w = mp.whitm(mp.mpf(1) / 4, s - mp.mpf(1) / 2, u)
        elif method == "kummer":
            w = _kummer_M(mp.mpf(1) / 4, s - mp.mpf(1) / 2, u, ctx)
        else:
            raise ValueError("method must be 'series' or 'kummer'")
        return +(u ** (-mp.mpf(1) / 4) * w)


# ---------------------------------------------------------------------------
# Normalizing factors
# ---------------------------------------------------------------------------

def c_factor(s, ctx: PrecisionContext = DEFAULT_CTX):
    """c(s) = (2s-1) Gamma(s-1/4) Gamma(2s-1/2) (2^{2s-1/2}-1)(3^{2s-1/2}-1)
    zeta(4s-1) / (6^{s-3/4} pi^{2s} Gamma(2s))."""
    with mp.workdps(ctx.digits + 10):
        s = _as_mpf(s)
        num = ((2 * s - 1) * mp.gamma(s - mp.mpf(1) / 4)
               * mp.gamma(2 * s - mp.mpf(1) / 2)
               * (mp.mpf(2) ** (2 * s - mp.mpf(1) / 2) - 1)
               * (mp.mpf(3) ** (2 * s - mp.mpf(1) / 2) - 1)
               * mp.zeta(4 * s - 1))
        den = mp.mpf(6) ** (s - mp.mpf(3) / 4) * mp.pi ** (2 * s) * mp.gamma(2 * s)
        return +(num / den)


def cprime_factor(s, ctx: PrecisionContext = DEFAULT_CTX):
    """c'(s) = 2^{4s-1} Gamma(s+1/4) Gamma(s-1/4)^2 zeta(2s-1/2) zeta(4s-1)
    / (pi^{s+3/4} Gamma(2s-1) zeta(4s-2)).

    At s = 3/4 both zeta(2s-1/2) and zeta(4s-2) sit at the pole of zeta; the
    ratio tends to 2 and the value is 4 pi / 3."""
    with mp.workdps(ctx.digits + 10):
        s = _as_mpf(s)
        base = (mp.mpf(2) ** (4 * s - 1) * mp.gamma(s + mp.mpf(1) / 4)
                * mp.gamma(s - mp.mpf(1) / 4) ** 2 * mp.zeta(4 * s - 1)
                / (mp.pi ** (s + mp.mpf(3) / 4) * mp.gamma(2 * s - 1)))
        if s == mp.mpf(3) / 4:
            ratio = mp.mpf(2)
        else:
            ratio = mp.zeta(2 * s - mp.mpf(1) / 2) / mp.zeta(4 * s - 2)
        return +(base * ratio)
