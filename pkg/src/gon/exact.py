"""Exact arithmetic kernel: rationals, certified real enclosures, comparison.

Integers are Python ints, rationals are fractions.Fraction (already canonical:
den > 0, gcd(num, den) = 1). Irrational quantities (pi, square roots, ln,
zeta values, Gamma at half-integers) live in Real expression trees whose
enclose() method produces rational-endpoint intervals of any requested width,
with directed rounding throughout. Refining an enclosure never widens it:
every node remembers the intersection of all intervals it has produced.

Strict inequalities between such expressions are decided by
certified_compare, which refines both sides until the intervals separate or
the width budget is exhausted. Less/Greater results are rigorous.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import DomainError, PrecisionError
from .intmath import iroot, nth_root_frac_bounds

Rat = Union[int, Fraction]

# Precision cap in bits for adaptive refinement. Far beyond any constant the
# toolkit needs to separate; hitting it raises PrecisionError.
_PREC_CAP = 1 << 17

# zeta partial-sum term cap (the integral tail then limits achievable width).
_ZETA_TERM_CAP = 10**6

# best-possible zeta enclosures once the term cap is hit, keyed by exponent
_ZETA_CAPPED: dict = {}


def frac(x: Rat) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise DomainError(f"not an exact rational: {x!r}")


def frac_to_str(x: Rat) -> str:
    """Canonical wire form: plain integer or "num/den" with den > 1."""
    x = frac(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def str_to_frac(s: str) -> Fraction:
    s = s.strip()
    try:
        if "/" in s:
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"bad rational literal: {s!r}") from exc


@dataclass(frozen=True)
class Enclosure:
    """Closed interval [lo, hi] with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise DomainError("enclosure endpoints out of order")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def exact(self) -> Optional[Fraction]:
        return self.lo if self.lo == self.hi else None

    def contains(self, x: Rat) -> bool:
        return self.lo <= frac(x) <= self.hi

    def contains_interval(self, other: "Enclosure") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersect(self, other: "Enclosure") -> "Enclosure":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise DomainError("disjoint enclosures of one value")
        return Enclosure(lo, hi)

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def to_json(self) -> dict:
        return {"lo": frac_to_str(self.lo), "hi": frac_to_str(self.hi)}

    @staticmethod
    def from_json(d: dict) -> "Enclosure":
        return Enclosure(str_to_frac(d["lo"]), str_to_frac(d["hi"]))

    @staticmethod
    def point(x: Rat) -> "Enclosure":
        v = frac(x)
        return Enclosure(v, v)

    def __str__(self):
        e = self.exact
        if e is not None:
            return frac_to_str(e)
        return f"[{frac_to_str(self.lo)}, {frac_to_str(self.hi)}]"


# ---------------------------------------------------------------------------
# interval arithmetic on Enclosure


def _iadd(a: Enclosure, b: Enclosure) -> Enclosure:
    return Enclosure(a.lo + b.lo, a.hi + b.hi)


def _ineg(a: Enclosure) -> Enclosure:
    return Enclosure(-a.hi, -a.lo)


def _imul(a: Enclosure, b: Enclosure) -> Enclosure:
    cands = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return Enclosure(min(cands), max(cands))


class _NeedPrec(Exception):
    """Internal: result not representable at this precision, refine inputs."""


def _iinv(a: Enclosure) -> Enclosure:
    if a.lo <= 0 <= a.hi:
        raise _NeedPrec
    return Enclosure(1 / a.hi, 1 / a.lo)


def _iabs(a: Enclosure) -> Enclosure:
    if a.lo >= 0:
        return a
    if a.hi <= 0:
        return _ineg(a)
    return Enclosure(Fraction(0), max(-a.lo, a.hi))


def _ipow_int(a: Enclosure, k: int) -> Enclosure:
    if k == 0:
        return Enclosure.point(1)
    if k < 0:
        return _ipow_int(_iinv(a), -k)
    if k % 2 == 1 or a.lo >= 0:
        return Enclosure(a.lo**k, a.hi**k)
    if a.hi <= 0:
        return Enclosure(a.hi**k, a.lo**k)
    return Enclosure(Fraction(0), max(a.lo**k, a.hi**k))


def _iroot(a: Enclosure, q: int, prec: int) -> Enclosure:
    """q-th root of a nonnegative-valued interval, outward rounded."""
    if a.hi < 0:
        raise DomainError("root of negative value")
    lo = a.lo if a.lo > 0 else Fraction(0)
    scale = 1 << (prec + 8)
    rlo, _ = nth_root_frac_bounds(lo, q, scale)
    _, rhi = nth_root_frac_bounds(a.hi, q, scale)
    return Enclosure(rlo, rhi)


# ---------------------------------------------------------------------------
# series atoms with directed rounding (scaled-integer summation)


def _atan_inv_scaled(m: int, shift: int) -> tuple[int, int]:
    """Bounds [lo, hi] with atan(1/m)*2^shift in [lo, hi]."""
    scale = 1 << shift
    m2 = m * m
    lo = hi = 0
    mpow = m  # m^(2k+1)
    k = 0
    while True:
        den = mpow * (2 * k + 1)
        q = scale // den
        if q == 0:
            # alternating tail bounded by first omitted term (< 1 ulp)
            if k % 2 == 0:
                hi += 1
            else:
                lo -= 1
            return lo, hi
        if k % 2 == 0:
            lo += q
            hi += q + 1
        else:
            lo -= q + 1
            hi -= q
        mpow *= m2
        k += 1


_PI_CACHE: dict[int, Enclosure] = {}


def _pi_eval(prec: int) -> Enclosure:
    if prec in _PI_CACHE:
        return _PI_CACHE[prec]
    shift = prec + 40
    a_lo, a_hi = _atan_inv_scaled(5, shift)
    b_lo, b_hi = _atan_inv_scaled(239, shift)
    lo = Fraction(16 * a_lo - 4 * b_hi, 1 << shift)
    hi = Fraction(16 * a_hi - 4 * b_lo, 1 << shift)
    enc = Enclosure(lo, hi)
    _PI_CACHE[prec] = enc
    return enc


def _atanh_scaled(num: int, den: int, shift: int) -> tuple[int, int]:
    """Bounds on atanh(num/den)*2^shift for 0 < num/den <= 1/3."""
    scale = 1 << shift
    lo = hi = 0
    npow, dpow = num, den
    k = 0
    while True:
        q = scale * npow // (dpow * (2 * k + 1))
        if q == 0:
            # positive tail; ratio (num/den)^2 <= 1/9, so tail < (9/8) ulp
            hi += 2
            return lo, hi
        lo += q
        hi += q + 1
        npow *= num * num
        dpow *= den * den
        k += 1


_LN2_CACHE: dict[int, tuple[int, int]] = {}


def _ln2_scaled(shift: int) -> tuple[int, int]:
    if shift not in _LN2_CACHE:
        lo, hi = _atanh_scaled(1, 3, shift)
        _LN2_CACHE[shift] = (2 * lo, 2 * hi)
    return _LN2_CACHE[shift]


def _ln_eval(q: Fraction, prec: int) -> Enclosure:
    if q <= 0:
        raise DomainError("ln of nonpositive value")
    shift = prec + 40
    neg = q < 1
    if neg:
        q = 1 / q
    # q = 2^m * y with y in [1, 2)
    m = 0
    while q >= 2:
        q /= 2
        m += 1
    t = q - 1  # y - 1; atanh argument t/(y+1) <= 1/3 since y < 2
    lo = hi = 0
    if t != 0:
        u = t / (q + 1)
        alo, ahi = _atanh_scaled(u.numerator, u.denominator, shift)
        lo, hi = 2 * alo, 2 * ahi
    if m:
        l2lo, l2hi = _ln2_scaled(shift)
        lo += m * l2lo
        hi += m * l2hi
    enc = Enclosure(Fraction(lo, 1 << shift), Fraction(hi, 1 << shift))
    return _ineg(enc) if neg else enc


def _zeta_eval(n: int, prec: int) -> Enclosure:
    # partial sum + integral tail: sum_{k>K} k^-n in
    # [(K+1)^(1-n)/(n-1), K^(1-n)/(n-1)]
    K = 1 << (-(-prec // n))  # 2^ceil(prec/n)
    if K > _ZETA_TERM_CAP:
        # past the cap the tail fixes the width; reuse the one best sum
        K = _ZETA_TERM_CAP
        if n in _ZETA_CAPPED:
            return _ZETA_CAPPED[n]
    shift = prec + K.bit_length() + 8
    scale = 1 << shift
    lo = hi = 0
    for k in range(1, K + 1):
        q = scale // k**n
        lo += q
        hi += q + 1
    enc = Enclosure(Fraction(lo, scale), Fraction(hi, scale))
    tail = Enclosure(
        Fraction(1, (n - 1) * (K + 1) ** (n - 1)),
        Fraction(1, (n - 1) * K ** (n - 1)),
    )
    result = _iadd(enc, tail)
    if K == _ZETA_TERM_CAP:
        _ZETA_CAPPED[n] = result
    return result


# ---------------------------------------------------------------------------
# Real expression trees


class Real:
    """Immutable expression over rationals, pi, roots, ln, zeta.

    enclose(max_width) refines adaptively and never widens across calls.
    """

    _best: Optional[Enclosure] = None

    def _eval(self, prec: int) -> Enclosure:
        raise NotImplementedError

    def exact(self) -> Optional[Fraction]:
        """Exact rational value when structurally known, else None."""
        return None

    def enclose(self, max_width: Rat = Fraction(1, 10**30)) -> Enclosure:
        max_width = frac(max_width)
        if max_width <= 0:
            raise DomainError("max_width must be positive")
        e = self.exact()
        if e is not None:
            return Enclosure.point(e)
        best = self._best
        if best is not None and best.width <= max_width:
            return best
        # initial bits: roughly -log2(max_width) plus guard
        prec = max(32, max_width.denominator.bit_length() - max_width.numerator.bit_length() + 16)
        while True:
            if prec > _PREC_CAP:
                raise PrecisionError("enclosure width not reachable")
            try:
                cur = self._eval(prec)
            except _NeedPrec:
                prec *= 2
                continue
            best = cur if best is None else best.intersect(cur)
            self._best = best
            if best.width <= max_width:
                return best
            prec *= 2

    # -- operators ----------------------------------------------------------

    def __add__(self, other):
        return _mk_add(self, as_real(other))

    def __radd__(self, other):
        return _mk_add(as_real(other), self)

    def __sub__(self, other):
        return _mk_add(self, _mk_neg(as_real(other)))

    def __rsub__(self, other):
        return _mk_add(as_real(other), _mk_neg(self))

    def __mul__(self, other):
        return _mk_mul(self, as_real(other))

    def __rmul__(self, other):
        return _mk_mul(as_real(other), self)

    def __truediv__(self, other):
        return _mk_div(self, as_real(other))

    def __rtruediv__(self, other):
        return _mk_div(as_real(other), self)

    def __neg__(self):
        return _mk_neg(self)

    def __abs__(self):
        return _AbsNode(self)

    def __pow__(self, e):
        return rational_power(self, e)


class _Const(Real):
    def __init__(self, value: Fraction):
        self.value = frac(value)

    def exact(self):
        return self.value

    def _eval(self, prec):
        return Enclosure.point(self.value)

    def __repr__(self):
        return f"Real({frac_to_str(self.value)})"


class _Pi(Real):
    def _eval(self, prec):
        return _pi_eval(prec)

    def __repr__(self):
        return "Real(pi)"


class _Ln(Real):
    def __init__(self, arg: Fraction):
        if arg <= 0:
            raise DomainError("ln domain")
        self.arg = frac(arg)

    def _eval(self, prec):
        return _ln_eval(self.arg, prec)

    def __repr__(self):
        return f"Real(ln {frac_to_str(self.arg)})"


class _Zeta(Real):
    def __init__(self, n: int):
        if n < 2:
            raise DomainError("zeta argument must be >= 2")
        self.n = n

    def _eval(self, prec):
        return _zeta_eval(self.n, prec)

    def __repr__(self):
        return f"Real(zeta({self.n}))"


class _IntervalConst(Real):
    """A fixed certified enclosure that cannot be refined any further.

    Asking enclose() for a width below the stored one raises PrecisionError
    once the precision cap is reached, which is the honest answer.
    """

    def __init__(self, enc: Enclosure, label: str = "const"):
        self._best = enc
        self.label = label

    def _eval(self, prec):
        return self._best

    def __repr__(self):
        return f"Real({self.label})"


class _Add(Real):
    def __init__(self, a: Real, b: Real):
        self.a, self.b = a, b

    def _eval(self, prec):
        return _iadd(self.a._eval(prec + 2), self.b._eval(prec + 2))


class _Neg(Real):
    def __init__(self, a: Real):
        self.a = a

    def _eval(self, prec):
        return _ineg(self.a._eval(prec))


class _Mul(Real):
    def __init__(self, a: Real, b: Real):
        self.a, self.b = a, b

    def _eval(self, prec):
        # pad: product width ~ |a| w_b + |b| w_a; desk-scale magnitudes
        return _imul(self.a._eval(prec + 64), self.b._eval(prec + 64))


class _Div(Real):
    def __init__(self, a: Real, b: Real):
        self.a, self.b = a, b

    def _eval(self, prec):
        return _imul(self.a._eval(prec + 64), _iinv(self.b._eval(prec + 64)))


class _AbsNode(Real):
    def __init__(self, a: Real):
        self.a = a

    def _eval(self, prec):
        return _iabs(self.a._eval(prec))


class _Pow(Real):
    def __init__(self, base: Real, exp: Fraction):
        self.base = base
        self.exp = frac(exp)

    def _eval(self, prec):
        p, q = self.exp.numerator, self.exp.denominator
        b = self.base._eval(prec + 64)
        if q > 1:
            if b.hi < 0:
                raise DomainError("fractional power of negative value")
            if p < 0 and b.lo <= 0:
                raise _NeedPrec
            b = _iroot(b, q, prec)
        return _ipow_int(b, p)


def as_real(x: Union[Real, Rat]) -> Real:
    if isinstance(x, Real):
        return x
    return _Const(frac(x))


def _mk_add(a: Real, b: Real) -> Real:
    ea, eb = a.exact(), b.exact()
    if ea is not None and eb is not None:
        return _Const(ea + eb)
    if ea == 0:
        return b
    if eb == 0:
        return a
    return _Add(a, b)


def _mk_neg(a: Real) -> Real:
    ea = a.exact()
    if ea is not None:
        return _Const(-ea)
    return _Neg(a)


def _mk_mul(a: Real, b: Real) -> Real:
    ea, eb = a.exact(), b.exact()
    if ea is not None and eb is not None:
        return _Const(ea * eb)
    if ea == 0 or eb == 0:
        return _Const(Fraction(0))
    if ea == 1:
        return b
    if eb == 1:
        return a
    return _Mul(a, b)


def _mk_div(a: Real, b: Real) -> Real:
    ea, eb = a.exact(), b.exact()
    if eb == 0:
        raise ZeroDivisionError("division by exact zero")
    if ea is not None and eb is not None:
        return _Const(ea / eb)
    if eb == 1:
        return a
    return _Div(a, b)


PI = _Pi()


def pi() -> Real:
    return PI


def ln(q: Rat) -> Real:
    q = frac(q)
    if q == 1:
        return _Const(Fraction(0))
    return _Ln(q)


def zeta(n: int) -> Real:
    return _Zeta(n)


def interval_constant(lo: Rat, hi: Rat, label: str = "const") -> Real:
    """Real wrapping a fixed certified enclosure [lo, hi]."""
    lo, hi = frac(lo), frac(hi)
    if hi < lo:
        raise DomainError("empty interval")
    return _IntervalConst(Enclosure(lo, hi), label)


def _bernoulli_even(kmax: int) -> list[Fraction]:
    """B_0, B_2, ..., B_(2 kmax) from the defining recurrence."""
    n = 2 * kmax
    b = [Fraction(0)] * (n + 1)
    b[0] = Fraction(1)
    for m in range(1, n + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += math.comb(m + 1, j) * b[j]
        b[m] = -acc / (m + 1)
    return [b[2 * k] for k in range(kmax + 1)]


_EULER_GAMMA: Optional[Real] = None


def euler_gamma() -> Real:
    """Euler's constant as a fixed enclosure, certified to ~55 digits.

    Euler-Maclaurin for the harmonic sum: H_N = ln N + gamma + 1/(2N)
    - sum_{k>=1} B_2k / (2k N^2k), where truncating after k = K leaves a
    remainder no larger in magnitude than the first omitted term (the
    derivatives of 1/x have constant sign). N = 100 and K ~ 17 put that
    term below 10^-55; ln 100 contributes its own certified enclosure.
    """
    global _EULER_GAMMA
    if _EULER_GAMMA is None:
        n = 100
        target = Fraction(1, 10**56)
        bern = _bernoulli_even(25)
        harmonic = sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))
        total = harmonic - Fraction(1, 2 * n)
        k = 1
        while True:
            term = bern[k] / (2 * k * Fraction(n) ** (2 * k))
            if abs(term) < target:
                tail = abs(term)
                break
            total += term
            k += 1
            if k >= len(bern):
                raise PrecisionError("euler_gamma series did not converge")
        ln_n = ln(n).enclose(Fraction(1, 10**58))
        enc = Enclosure(total - ln_n.hi - tail, total - ln_n.lo + tail)
        _EULER_GAMMA = _IntervalConst(enc, "gamma")
    return _EULER_GAMMA


def _exact_rational_root(x: Fraction, q: int) -> Optional[Fraction]:
    """x**(1/q) when rational, else None (x >= 0)."""
    if x == 0:
        return Fraction(0)
    rn = iroot(x.numerator, q)
    rd = iroot(x.denominator, q)
    if rn**q == x.numerator and rd**q == x.denominator:
        return Fraction(rn, rd)
    return None


def rational_power(base: Union[Real, Rat], e: Rat) -> Real:
    """base**e with a rational exponent; exact folding when possible."""
    e = frac(e)
    b = as_real(base)
    eb = b.exact()
    if e == 1:
        return b
    if e == 0:
        return _Const(Fraction(1))
    if eb is not None:
        if e.denominator == 1:
            return _Const(eb ** e.numerator)
        if eb < 0:
            raise DomainError("fractional power of negative rational")
        root = _exact_rational_root(eb, e.denominator)
        if root is not None:
            return _Const(root ** e.numerator)
    if isinstance(b, _Pow):
        return rational_power(b.base, b.exp * e)
    return _Pow(b, e)


def sqrt(x: Union[Real, Rat]) -> Real:
    """Square root; exact (point enclosure) for perfect rational squares."""
    if not isinstance(x, Real) and frac(x) < 0:
        raise DomainError("sqrt of negative value")
    return rational_power(x, Fraction(1, 2))


def gamma_half(num2: int) -> Real:
    """Gamma(num2/2) for integer num2 >= 1, exactly rational * sqrt(pi)^e.

    Built from Gamma(z+1) = z Gamma(z) and Gamma(1/2) = sqrt(pi).
    """
    if num2 < 1:
        raise DomainError("gamma at nonpositive half-integer")
    if num2 % 2 == 0:
        return _Const(Fraction(math.factorial(num2 // 2 - 1)))
    k = (num2 - 1) // 2
    coef = Fraction(math.factorial(2 * k), 4**k * math.factorial(k))
    return _Const(coef) * sqrt(PI)


def gamma_half_squared(num2: int) -> tuple[Fraction, int]:
    """Gamma(num2/2)^2 as (rational coefficient, pi exponent)."""
    if num2 < 1:
        raise DomainError("gamma at nonpositive half-integer")
    if num2 % 2 == 0:
        return Fraction(math.factorial(num2 // 2 - 1)) ** 2, 0
    k = (num2 - 1) // 2
    coef = Fraction(math.factorial(2 * k), 4**k * math.factorial(k))
    return coef**2, 1


def enclose_pi(max_width: Rat) -> Enclosure:
    return PI.enclose(max_width)


def enclose_sqrt(r: Rat, max_width: Rat) -> Enclosure:
    r = frac(r)
    if r < 0:
        raise DomainError("sqrt of negative value")
    return sqrt(r).enclose(max_width)


class Comparison(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    UNDECIDED = "undecided"


DEFAULT_COMPARE_BUDGET = Fraction(1, 10**60)


def certified_compare(
    a: Union[Real, Rat],
    b: Union[Real, Rat],
    budget_width: Rat = DEFAULT_COMPARE_BUDGET,
    max_rounds: int = 20,
) -> Comparison:
    """Rigorously compare two expression values.

    LESS/GREATER are certified. UNDECIDED means the difference stayed inside
    an interval around zero down to the width budget (true equality or an
    astronomically small gap).
    """
    d = as_real(a) - as_real(b)
    ed = d.exact()
    if ed is not None:
        if ed < 0:
            return Comparison.LESS
        if ed > 0:
            return Comparison.GREATER
        return Comparison.UNDECIDED
    budget_width = frac(budget_width)
    width = Fraction(1, 1 << 16)
    for _ in range(max_rounds):
        try:
            e = d.enclose(width)
        except PrecisionError:
            return Comparison.UNDECIDED
        if e.lo > 0:
            return Comparison.GREATER
        if e.hi < 0:
            return Comparison.LESS
        if width <= budget_width:
            break
        width = width * width  # double the working precision
        if width < budget_width:
            width = budget_width
    return Comparison.UNDECIDED


def compare_pi_monomials(
    c1: Rat, k1: int, c2: Rat, k2: int,
    budget_width: Rat = DEFAULT_COMPARE_BUDGET,
) -> Comparison:
    """Compare c1*pi^k1 with c2*pi^k2 exactly (k >= 0 integers).

    Equal pi powers reduce to a rational comparison (equality decidable);
    distinct powers with nonzero coefficients can never be equal, so the
    certified comparison always terminates with a strict verdict.
    """
    c1, c2 = frac(c1), frac(c2)
    if k1 == k2:
        if c1 < c2:
            return Comparison.LESS
        if c1 > c2:
            return Comparison.GREATER
        return Comparison.UNDECIDED
    if k1 > k2:
        lhs, rhs = _Const(c1) * rational_power(PI, k1 - k2), _Const(c2)
    else:
        lhs, rhs = _Const(c1), _Const(c2) * rational_power(PI, k2 - k1)
    return certified_compare(lhs, rhs, budget_width)
