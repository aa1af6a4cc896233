"""Integral binary quadratic forms and their reduction theory.

Covers SL2(Z) reduction (definite and indefinite, with transformation
tracking), reduction cycles, Pell/fundamental-unit data, the Gamma0(6)
class sets

    Q_n = { ax^2+bxy+cy^2 : b^2-4ac = n, 6|a (a>0 for n<0), b = 1 mod 12 }

for n = 1 mod 24 in all three regimes, CM points, geodesic data, and the
cusp normalizations used for square discriminants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import is_square
from .matrices import GroupElement, IDENTITY, S_MAT, T_power, atkin_lehner


@dataclass(frozen=True)
class BQF:
    a: int
    b: int
    c: int

    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def content(self) -> int:
        return math.gcd(math.gcd(abs(self.a), abs(self.b)), abs(self.c))

    def as_tuple(self):
        return (self.a, self.b, self.c)

    def value(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def in_Qn(self) -> bool:
        """Membership in Q_n: 6 | a, b = 1 mod 12 (and a > 0 when definite)."""
        ok = self.a % 6 == 0 and self.b % 12 == 1
        if self.disc() < 0:
            ok = ok and self.a > 0
        return ok


def act(g: GroupElement, Q: BQF) -> BQF:
    return BQF(*g.apply_form(Q.as_tuple()))


# ---------------------------------------------------------------------------
# SL2(Z) reduction, definite forms
# ---------------------------------------------------------------------------

def _translate_to_normal(Q: BQF):
    """T^k with b' = b - 2ak in (-|a|, |a|]."""
    a = abs(Q.a)
    k = -((a - Q.b) // (2 * a))
    g = T_power(k)
    return act(g, Q), g


def reduce_definite(Q: BQF):
    """Reduced representative (|b| <= a <= c, b >= 0 if a = c or |b| = a)
    together with g such that act(g, Q) = reduced."""
    if Q.disc() >= 0 or Q.a <= 0:
        raise ValueError("need a positive definite form")
    g = IDENTITY
    cur = Q
    while True:
        cur, t = _translate_to_normal(cur)
        g = t @ g
        if cur.a > cur.c:
            cur, g = act(S_MAT, cur), S_MAT @ g
            continue
        break
    if cur.a == cur.c and cur.b < 0:
        cur, g = act(S_MAT, cur), S_MAT @ g
    if -cur.a == cur.b:
        cur, t = _translate_to_normal(cur)  # b = -a -> b = a
        g = t @ g
    return cur, g


def reduced_definite_forms(D: int, primitive_only: bool = False):
    """All SL2(Z)-reduced positive definite forms of discriminant D < 0."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError("need a negative discriminant")
    forms = []
    amax = math.isqrt(abs(D) // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            Q = BQF(a, b, c)
            if primitive_only and Q.content() != 1:
                continue
            forms.append(Q)
    return forms


def definite_automorphs(Q: BQF):
    """The finite SL2(Z) stabilizer of a definite form (both signs kept)."""
    D = Q.disc()
    auts = []
    umax = math.isqrt(4 // abs(D)) if abs(D) <= 4 else 0
    for u in range(-umax - 1, umax + 2):
        rhs = 4 + D * u * u
        if rhs < 0:
            continue
        t = math.isqrt(rhs)
        if t * t != rhs:
            continue
        for tt in ({t, -t} if t else {0}):
            if (tt - Q.b * u) % 2:
                continue
            g = GroupElement((tt - Q.b * u) // 2, -Q.c * u,
                             Q.a * u, (tt + Q.b * u) // 2)
            auts.append(g)
    return auts


# ---------------------------------------------------------------------------
# Indefinite reduction cycles
# ---------------------------------------------------------------------------

def is_reduced_indefinite(Q: BQF) -> bool:
    D = Q.disc()
    if D <= 0 or is_square(D):
        raise ValueError("need a positive non-square discriminant")
    s = math.isqrt(D)
    return 0 < Q.b <= s and s - Q.b < 2 * abs(Q.a) <= s + Q.b


def rho_step(Q: BQF):
    """One reduction step [a,b,c] -> [c,b',*], with its transformation.

    The new middle coefficient is the unique b' = b mod 2|c| in the window
    (-|c|, |c|] when |c| > sqrt(D), else (sqrt(D) - 2|c|, sqrt(D))."""
    D = Q.disc()
    s = math.isqrt(D)
    cur, g = act(S_MAT, Q), S_MAT            # [c, -b, a]
    a2 = 2 * abs(cur.a)
    hi = abs(cur.a) if abs(cur.a) > s else s
    bp = hi - ((hi - cur.b) % a2)
    k = (cur.b - bp) // (2 * cur.a)
    t = T_power(k)
    return act(t, cur), t @ g


def reduce_indefinite(Q: BQF):
    """Some reduced form in the SL2(Z) class, with transformation."""
    g = IDENTITY
    cur = Q
    for _ in range(10_000):
        if is_reduced_indefinite(cur):
            return cur, g
        cur, step = rho_step(cur)
        g = step @ g
    raise ArithmeticError("indefinite reduction did not terminate")


def cycle_of(Q: BQF):
    """The full rho-cycle through a reduced form: list of (form, transform)
    with transform mapping the starting form to each member."""
    if not is_reduced_indefinite(Q):
        raise ValueError("cycle must start at a reduced form")
    out = [(Q, IDENTITY)]
    cur, g = rho_step(Q)
    guard = 0
    while cur != Q:
        out.append((cur, g))
        cur2, step = rho_step(cur)
        g = step @ g
        cur = cur2
        guard += 1
        if guard > 100_000:
            raise ArithmeticError("runaway reduction cycle")
    return out, g     # g maps Q to itself: the cycle automorph


def automorph_sl2(Q: BQF) -> GroupElement:
    """Generator of the infinite cyclic SL2(Z) stabilizer (up to sign)."""
    R, g = reduce_indefinite(Q)
    _, m = cycle_of(R)
    gi = g.inverse_scaled()
    return gi @ m @ g


def sl2_transporter_indefinite(Q1: BQF, Q2: BQF):
    """g with act(g, Q1) = Q2, or None if SL2(Z)-inequivalent."""
    R1, g1 = reduce_indefinite(Q1)
    R2, g2 = reduce_indefinite(Q2)
    cyc, _ = cycle_of(R1)
    for form, walk in cyc:
        if form == R2:
            return g2.inverse_scaled() @ walk @ g1
    return None


@lru_cache(maxsize=None)
def fundamental_unit(D: int):
    """Minimal (t, u, norm) with t,u >= 1 and t^2 - D u^2 = norm in {4,-4},
    for a positive non-square discriminant D."""
    if D <= 0 or D % 4 not in (0, 1) or is_square(D):
        raise ValueError("need a positive non-square discriminant")
    b0 = D % 2
    principal = BQF(1, b0, (b0 * b0 - D) // 4)
    M = automorph_sl2(principal)
    t = M.a + M.d
    u = M.c            # lower-left = a*u with a = 1
    if t < 0:
        t, u = -t, -u
    if u < 0:
        u = -u         # inverse automorph has (t, -u)
    if t * t - D * u * u != 4 or t <= 0 or u <= 0:
        raise ArithmeticError(f"cycle automorph failed Pell check for D={D}")
    # descend to the norm -4 unit when it exists: eps_+ = eps_-^2
    tm = math.isqrt(t - 2) if t >= 2 else 0
    if tm and tm * tm == t - 2 and u % tm == 0:
        um = u // tm
        if tm * tm - D * um * um == -4:
            return tm, um, -4
    return t, u, 4


def automorph(Q: BQF) -> GroupElement:
    """Stabilizer generator [[ (t-bu)/2, -cu ], [ au, (t+bu)/2 ]] from the
    minimal t^2 - D u^2 = 4; lands in Gamma0(6) whenever 6 | a."""
    D = Q.disc()
    if D <= 0 or is_square(D):
        raise ValueError("automorph requires a positive non-square discriminant")
    t, u, norm = fundamental_unit(D)
    if norm == -4:
        t, u = (t * t + D * u * u) // 2, t * u
    if (t - Q.b * u) % 2:
        raise ArithmeticError("automorph parity violation")
    return GroupElement((t - Q.b * u) // 2, -Q.c * u,
                        Q.a * u, (t + Q.b * u) // 2)


# ---------------------------------------------------------------------------
# Gamma0(6) equivalence
# ---------------------------------------------------------------------------

def _transporter_in_gamma06(g0: GroupElement, M: GroupElement) -> bool:
    """Whether some g0 M^k lies in Gamma0(6); M-powers mod 6 are periodic."""
    seen = set()
    cur = g0
    mk = IDENTITY
    for _ in range(10_000):
        if cur.c % 6 == 0:
            return True
        key = tuple(x % 6 for x in mk.as_tuple())
        if key in seen:
            return False
        seen.add(key)
        mk = mk @ M
        cur = cur @ M
    raise ArithmeticError("transporter search did not stabilize")


def gamma06_equivalent(Q1: BQF, Q2: BQF) -> bool:
    """Proper equivalence under Gamma0(6)/{+-1}."""
    D = Q1.disc()
    if Q2.disc() != D:
        return False
    if D < 0:
        R1, g1 = reduce_definite(Q1)
        R2, g2 = reduce_definite(Q2)
        if R1 != R2:
            return False
        g2i = g2.inverse_scaled()
        return any((g2i @ u @ g1).c % 6 == 0 for u in definite_automorphs(R1))
    if is_square(D):
        raise ValueError("square-discriminant classes are matched by their cusp data")
    g0 = sl2_transporter_indefinite(Q1, Q2)
    if g0 is None:
        return False
    return _transporter_in_gamma06(g0, automorph(Q1))


# ---------------------------------------------------------------------------
# Class sets Q_n
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassSet:
    n: int
    reps: tuple
    regime: str


def class_number(d: int) -> int:
    """Form class number h(d): proper classes of primitive forms.

    Negative d: reduced-form count.  Positive non-square d: number of
    reduction cycles.  Square d = m^2: Euler phi(m), the count of primitive
    classes compatible with the regulator-weighted square-index formula."""
    if d % 4 not in (0, 1) or d == 0:
        raise ValueError("not a discriminant")
    if d < 0:
        return len(reduced_definite_forms(d, primitive_only=True))
    if is_square(d):
        m = math.isqrt(d)
        return sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)
    forms = _reduced_indefinite_forms(d)
    remaining = set(forms)
    cycles = 0
    while remaining:
        start = remaining.pop()
        cyc, _ = cycle_of(start)
        for f, _g in cyc:
            remaining.discard(f)
        cycles += 1
    return cycles


def _reduced_indefinite_forms(D: int, primitive_only: bool = True):
    out = []
    s = math.isqrt(D)
    for b in range(1, s + 1):
        if (D - b * b) % 4:
            continue
        lo = (s - b) // 2 + 1
        hi = (s + b) // 2
        for aa in range(max(lo, 1), hi + 1):
            for a in (aa, -aa):
                if (b * b - D) % (4 * a):
                    continue
                Q = BQF(a, b, (b * b - D) // (4 * a))
                if primitive_only and Q.content() != 1:
                    continue
                out.append(Q)
    return out


def _qn_candidates(n: int, a_bound: int):
    """Forms [a,b,c] with 6|a, 0<a<=a_bound, b = 1 mod 12, disc n; one b per
    translation class mod 2a."""
    for a in range(6, a_bound + 1, 6):
        period = (2 * a * 12) // math.gcd(2 * a, 12)
        for b in range(1, period + 1, 12):
            if (b * b - n) % (4 * a):
                continue
            yield BQF(a, b, (b * b - n) // (4 * a))


def _dedupe_gamma06(cands):
    reps = []
    for Q in cands:
        if not any(gamma06_equivalent(Q, R) for R in reps):
            reps.append(Q)
    return reps


def square_class_reps(n: int):
    """Square-discriminant class representatives: W_r [0,b,c], c mod b,
    for n = b^2 with (b,6) = 1.

    Returns (r, [list of underlying forms [0,b,c]])."""
    b = math.isqrt(n)
    if b * b != n or math.gcd(b, 6) != 1:
        raise ValueError("need n a square coprime to 6")
    r = {1: 1, 7: 2, 5: 3, 11: 6}[b % 12]
    return r, [BQF(0, b, c) for c in range(b)]


def enumerate_classes(n: int, expect: int | None = None) -> ClassSet:
    """Representatives of Gamma0(6)\\Q_n for n = 1 mod 24."""
    if n % 24 != 1 or n == 0:
        raise ValueError("index must be nonzero and 1 mod 24")
    if n < 0:
        target = expect if expect is not None else class_number(n)
        bound = 6 * (math.isqrt(abs(n) // 3) + 1)
        reps = _dedupe_gamma06(_qn_candidates(n, bound))
        while len(reps) < target and bound < 600 * (math.isqrt(abs(n)) + 1):
            bound *= 2
            reps = _dedupe_gamma06(_qn_candidates(n, bound))
        if len(reps) != target:
            raise ArithmeticError(
                f"found {len(reps)} classes for n={n}, expected {target}")
        return ClassSet(n, tuple(reps), "negative")
    if is_square(n):
        r, base = square_class_reps(n)
        W = atkin_lehner(r)
        reps = tuple(act(W, Q) for Q in base)
        return ClassSet(n, reps, "square")
    # positive non-square
    target = expect if expect is not None else class_number(n)
    bound = 6 * (math.isqrt(n) + 2)
    reps = _dedupe_gamma06(_qn_candidates(n, bound))
    tries = 0
    while len(reps) < target and tries < 6:
        bound *= 2
        reps = _dedupe_gamma06(_qn_candidates(n, bound))
        tries += 1
    if len(reps) != target:
        raise ArithmeticError(
            f"found {len(reps)} classes for n={n}, expected {target}")
    return ClassSet(n, tuple(reps), "positive-nonsquare")


# ---------------------------------------------------------------------------
# CM points, geodesics, cusp data
# ---------------------------------------------------------------------------

def cm_point(Q: BQF, ctx=None):
    """Root of Q(tau, 1) in the upper half plane, as an mpmath complex."""
    from mpmath import mp
    D = Q.disc()
    if D >= 0:
        raise ValueError("CM point requires a negative discriminant")
    return mp.mpc(-Q.b, mp.sqrt(abs(D))) / (2 * Q.a)


@dataclass(frozen=True)
class Geodesic:
    """Semicircle data for disc > 0 non-square; cusp data for square disc."""
    form: BQF
    center: Fraction | None = None
    radius2: Fraction | None = None          # radius^2, exact
    automorph: GroupElement | None = None
    cusps: tuple | None = None               # (a1, a2) as Fraction or 'oo'
    cusp_normalizers: tuple | None = None    # ((r1, g1), (r2, g2))


def cusp_normalizer(cusp):
    """The unique (r, gamma) with gamma in Gamma0(6), gamma W_r cusp = oo."""
    found = []
    for r in (1, 2, 3, 6):
        W = atkin_lehner(r)
        image = W.apply_cusp(cusp)
        if image == "oo":
            found.append((r, IDENTITY))
            continue
        p, q = image.numerator, image.denominator
        if q % 6:
            continue
        # gamma = [[u, v], [-q, p]] with up + vq = 1
        g, u, v = _xgcd(p, q)
        if g != 1:
            raise ArithmeticError("cusp not in lowest terms")
        found.append((r, GroupElement(u, v, -q, p)))
    if len(found) != 1:
        raise ArithmeticError(f"cusp {cusp}: expected exactly one Atkin-Lehner "
                              f"normalizer, found {len(found)}")
    return found[0]


def _xgcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def geodesic_data(Q: BQF) -> Geodesic:
    D = Q.disc()
    if D <= 0:
        raise ValueError("geodesic requires a positive discriminant")
    if not is_square(D):
        if Q.a == 0:
            raise ValueError("normalize a != 0 for non-square geodesics")
        return Geodesic(Q,
                        center=Fraction(-Q.b, 2 * Q.a),
                        radius2=Fraction(D, 4 * Q.a * Q.a),
                        automorph=automorph(Q))
    e = math.isqrt(D)
    if Q.a != 0:
        roots = (Fraction(-Q.b + e, 2 * Q.a), Fraction(-Q.b - e, 2 * Q.a))
    else:
        roots = ("oo", Fraction(-Q.c, Q.b))
    normalizers = tuple(cusp_normalizer(x) for x in roots)
    return Geodesic(Q, cusps=roots, cusp_normalizers=normalizers)
