"""Exact real-number targets with certified fixed-point arithmetic.

Three representations are supported: exact rationals, quadratic irrationals
(a + b*sqrt(d))/c, and decimal literals with a stated digit budget. Every
numeric answer that leaves this module carries a computed error bound; a
comparison that cannot be resolved within the representation's information
raises PrecisionExhaustedError rather than guessing.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConfigurationError, InputError, InvariantError, PrecisionExhaustedError

# Escalation ceiling for exact variants; hitting it indicates a bug, not a
# precision limit (quadratic irrationals certify at any width).
_MAX_EXACT_BITS = 1 << 20

_MASK32 = np.uint64(0xFFFFFFFF)


def _square_free_split(d: int) -> tuple[int, int]:
    """Return (s, d') with d = s^2 * d' and d' free of small square factors."""
    s = 1
    for p in range(2, 1000):
        pp = p * p
        if pp > d:
            break
        while d % pp == 0:
            d //= pp
            s *= p
    return s, d


class Alpha:
    """Base of the three target representations.

    Subclasses implement mantissa_interval(bits) -> (lo, hi) with the
    guarantee lo/2^bits <= alpha <= hi/2^bits, and report how many bits of
    certification their information content supports.
    """

    is_rational = False

    def mantissa_interval(self, bits: int) -> tuple[int, int]:
        raise NotImplementedError

    def max_certified_bits(self) -> int | None:
        """None means unlimited (exact representations)."""
        return None

    @property
    def spec_id(self) -> str:
        raise NotImplementedError

    def value(self) -> float:
        lo, hi = self.mantissa_interval(96)
        return (lo + hi) / 2.0 / 2.0**96

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.spec_id!r})"


@dataclass(eq=True, repr=False)
class RationalAlpha(Alpha):
    p: int
    q: int
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    is_rational = True

    def __post_init__(self):
        if self.q == 0:
            raise ConfigurationError("rational alpha needs q != 0")
        if self.q < 0:
            self.p, self.q = -self.p, -self.q
        g = math.gcd(self.p, self.q)
        if g > 1:
            self.p //= g
            self.q //= g

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)

    def mantissa_interval(self, bits: int) -> tuple[int, int]:
        cached = self._cache.get(bits)
        if cached is not None:
            return cached
        num = self.p << bits
        lo = num // self.q
        hi = lo if num % self.q == 0 else lo + 1
        self._cache[bits] = (lo, hi)
        return lo, hi

    @property
    def spec_id(self) -> str:
        return f"rat:{self.p}/{self.q}"


@dataclass(eq=True, repr=False)
class QuadraticAlpha(Alpha):
    """(a + b*sqrt(d)) / c with d > 0 non-square and b, c nonzero."""

    a: int
    b: int
    c: int
    d: int
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.d <= 0:
            raise ConfigurationError("quadratic alpha needs d > 0")
        if self.b == 0 or self.c == 0:
            raise ConfigurationError("quadratic alpha needs b != 0 and c != 0")
        s = math.isqrt(self.d)
        if s * s == self.d:
            raise ConfigurationError(f"d={self.d} is a perfect square; use rat:")
        sq, rest = _square_free_split(self.d)
        if sq > 1:
            self.b *= sq
            self.d = rest
        if self.c < 0:
            self.a, self.b, self.c = -self.a, -self.b, -self.c
        g = math.gcd(math.gcd(abs(self.a), abs(self.b)), self.c)
        if g > 1:
            self.a //= g
            self.b //= g
            self.c //= g

    def mantissa_interval(self, bits: int) -> tuple[int, int]:
        cached = self._cache.get(bits)
        if cached is not None:
            return cached
        # |b|*sqrt(d)*2^bits lies in [s, s+1) with s = isqrt(b^2 d 4^bits)
        s = math.isqrt(self.b * self.b * self.d << (2 * bits))
        base = self.a << bits
        if self.b > 0:
            num_lo, num_hi = base + s, base + s + 1
        else:
            num_lo, num_hi = base - s - 1, base - s
        lo = num_lo // self.c
        hi = -((-num_hi) // self.c)
        self._cache[bits] = (lo, hi)
        return lo, hi

    @property
    def spec_id(self) -> str:
        if self.a == 0 and self.b == 1 and self.c == 1:
            return f"quad:sqrt{self.d}"
        return f"quad:({self.a}+{self.b}*sqrt{self.d})/{self.c}"


@dataclass(eq=True, repr=False)
class DecimalAlpha:
    """A decimal literal; the true value is within 10^-precision of it.

    precision is the count of fractional digits supplied, so the literal
    pins down an interval of width 2 * 10^-precision and nothing finer.
    """

    digits: str
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    is_rational = False

    def __post_init__(self):
        m = re.fullmatch(r"(-?)(\d+)\.(\d+)", self.digits)
        if not m:
            raise ConfigurationError(
                f"decimal alpha must look like [-]ddd.ddd, got {self.digits!r}"
            )
        sign, int_part, frac_part = m.groups()
        self.precision = len(frac_part)
        if self.precision < 30:
            raise ConfigurationError(
                f"decimal alpha needs >= 30 fractional digits, got {self.precision}"
            )
        scaled = int(int_part + frac_part)
        self._scaled = -scaled if sign else scaled

    def mantissa_interval(self, bits: int) -> tuple[int, int]:
        cached = self._cache.get(bits)
        if cached is not None:
            return cached
        den = 10**self.precision
        lo = ((self._scaled - 1) << bits) // den
        hi = -((-(self._scaled + 1) << bits) // den)
        self._cache[bits] = (lo, hi)
        return lo, hi

    def max_certified_bits(self) -> int | None:
        # beyond this the interval width is dominated by the digit budget
        return int(self.precision * math.log2(10)) + 32

    def bounds(self) -> tuple[Fraction, Fraction]:
        den = 10**self.precision
        return Fraction(self._scaled - 1, den), Fraction(self._scaled + 1, den)

    @property
    def spec_id(self) -> str:
        return f"dec:{self.digits}"

    def value(self) -> float:
        return self._scaled / 10.0**self.precision

    def __repr__(self) -> str:
        return f"DecimalAlpha({self.spec_id!r})"


Alpha.register = None  # no ABC machinery; duck typing across the three variants

_QUAD_RE = re.compile(
    r"\(\s*(-?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt\s*(\d+)\s*\)\s*/\s*(-?\d+)"
)


def parse_alpha(text: str):
    """Parse the CLI mini-grammar: rat:355/113, quad:(1+1*sqrt5)/2, dec:3.14...

    quad:sqrtD is shorthand for quad:(0+1*sqrtD)/1.
    """
    if text.startswith("rat:"):
        body = text[4:]
        if "/" in body:
            p_str, q_str = body.split("/", 1)
        else:
            p_str, q_str = body, "1"
        try:
            return RationalAlpha(int(p_str), int(q_str))
        except ValueError as exc:
            raise ConfigurationError(f"bad rational alpha {text!r}") from exc
    if text.startswith("quad:"):
        body = text[5:]
        m = re.fullmatch(r"sqrt\s*(\d+)", body)
        if m:
            return QuadraticAlpha(0, 1, 1, int(m.group(1)))
        m = _QUAD_RE.fullmatch(body)
        if m:
            a, sign, b, d, c = m.groups()
            b_val = int(b) if sign == "+" else -int(b)
            return QuadraticAlpha(int(a), b_val, int(c), int(d))
        raise ConfigurationError(f"bad quadratic alpha {text!r}")
    if text.startswith("dec:"):
        return DecimalAlpha(text[4:])
    raise ConfigurationError(f"alpha must start with rat:, quad: or dec:, got {text!r}")


# ---------------------------------------------------------------------------
# certified fractional parts
# ---------------------------------------------------------------------------

TARGET_FRAC_ERROR = 2.0**-48


@dataclass(frozen=True)
class FractionalPart:
    """{alpha * n} with a computed error bound (distance on the circle R/Z)."""

    value: float
    error_bound: float


def fractional_part(alpha, n: int, guard_bits: int = 64) -> FractionalPart:
    """Certified {alpha * n} to better than 2^-48.

    Exact rationals take a modular path with error at most one float ulp.
    Otherwise alpha's mantissa interval is widened to n.bit_length() +
    guard_bits bits so the product's uncertainty stays far below target;
    if the representation cannot support that (short decimal literal),
    PrecisionExhaustedError is raised.
    """
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}")
    if guard_bits < 64:
        raise InputError(f"guard_bits must be >= 64, got {guard_bits}")
    if isinstance(alpha, RationalAlpha):
        r = (alpha.p * n) % alpha.q
        g = math.gcd(r, alpha.q)
        dyadic = ((alpha.q // g) & (alpha.q // g - 1)) == 0
        return FractionalPart(value=r / alpha.q, error_bound=0.0 if dyadic else 2.0**-53)
    bits = n.bit_length() + guard_bits
    cap = alpha.max_certified_bits()
    if cap is not None:
        bits = min(bits, cap)
    lo, hi = alpha.mantissa_interval(bits)
    err = (hi - lo) * n / 2.0**bits + 2.0**-52
    if err >= TARGET_FRAC_ERROR:
        raise PrecisionExhaustedError(
            f"cannot certify {{alpha*n}} for n={n}: bound {err:.3e} >= 2^-48 "
            f"(alpha={alpha.spec_id})"
        )
    r = (lo * n) % (1 << bits)
    value = r / (1 << bits)
    if value >= 1.0:
        value = 0.0
    return FractionalPart(value=value, error_bound=err)


def _limbs(w: int, count: int) -> np.ndarray:
    out = np.empty(count, dtype=np.uint64)
    for i in range(count):
        out[i] = w & 0xFFFFFFFF
        w >>= 32
    return out


def fractional_parts_of_multiples(
    alpha, ns: np.ndarray, h: int = 1, guard_bits: int = 64
) -> tuple[np.ndarray, float]:
    """Vectorized {alpha * h * n} over an int array, with one shared error bound.

    Returns (fracs float64 in [0,1), per_term_error). The kernel reduces a
    fixed-point mantissa of alpha*h modulo 2^bits, then multiplies by each n
    in 32-bit limbs so every intermediate fits uint64 exactly; the only
    inexact step is the final float assembly (a few ulps).
    """
    ns = np.ascontiguousarray(ns, dtype=np.int64)
    if ns.size == 0:
        return np.empty(0, dtype=np.float64), 0.0
    if h < 1:
        raise InputError(f"h must be >= 1, got {h}")
    max_n = int(ns.max())
    if int(ns.min()) < 1:
        raise InputError("all n must be >= 1")
    if max_n >= 1 << 31:
        raise InputError("vectorized kernel supports n < 2^31")

    if isinstance(alpha, RationalAlpha):
        q = alpha.q
        if q < 1 << 31:
            r = (alpha.p * h) % q
            fr = ((ns % q) * r) % q
            return fr.astype(np.float64) / q, 2.0**-52
        # enormous denominator: fall back to exact big-int per element
        vals = np.array(
            [((alpha.p * h * int(n)) % q) / q for n in ns], dtype=np.float64
        )
        return vals, 2.0**-52

    bits = (h * max_n).bit_length() + guard_bits
    cap = alpha.max_certified_bits()
    if cap is not None:
        bits = min(bits, cap)
    lo, hi = alpha.mantissa_interval(bits)
    interval_err = (hi - lo) * h * max_n / 2.0**bits
    per_term_error = interval_err + 2.0**-50
    if per_term_error >= TARGET_FRAC_ERROR:
        raise PrecisionExhaustedError(
            f"cannot certify phases at h={h}, max n={max_n} for {alpha.spec_id}"
        )
    w = (lo * h) % (1 << bits)
    nlimbs = (bits + 31) // 32
    limbs = _limbs(w, nlimbs)
    u = ns.astype(np.uint64)
    acc = np.zeros((nlimbs + 1, ns.size), dtype=np.uint64)
    for j in range(nlimbs):
        prod = limbs[j] * u  # < 2^63, exact in uint64
        acc[j] += prod & _MASK32
        acc[j + 1] += prod >> np.uint64(32)
    for i in range(nlimbs):
        carry = acc[i] >> np.uint64(32)
        acc[i] &= _MASK32
        acc[i + 1] += carry
    top_bits = bits - 32 * (nlimbs - 1)
    acc[nlimbs - 1] &= np.uint64((1 << top_bits) - 1)
    fracs = np.zeros(ns.size, dtype=np.float64)
    for i in range(nlimbs):  # ascending so rounding error stays at a few ulps
        fracs += acc[i].astype(np.float64) * 2.0 ** (32 * i - bits)
    np.subtract(fracs, 1.0, out=fracs, where=fracs >= 1.0)
    return fracs, per_term_error


# ---------------------------------------------------------------------------
# continued fractions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Convergent:
    index: int
    a: int
    q: int

    def as_fraction(self) -> Fraction:
        return Fraction(self.a, self.q)


@dataclass(frozen=True)
class CFExpansion:
    """Partial quotients plus convergents.

    terminating: the full (finite) expansion of a rational was emitted.
    truncated: a decimal literal ran out of certified digits before
    max_terms; the quotients listed are all certified, none are guesses.
    """

    quotients: tuple[int, ...]
    convergents: tuple[Convergent, ...]
    terminating: bool
    truncated: bool


def _convergents_from_quotients(quotients) -> tuple[Convergent, ...]:
    out = []
    a_prev, a_prev2 = 1, 0
    q_prev, q_prev2 = 0, 1
    for j, c in enumerate(quotients):
        a_cur = c * a_prev + a_prev2
        q_cur = c * q_prev + q_prev2
        out.append(Convergent(index=j, a=a_cur, q=q_cur))
        a_prev2, a_prev = a_prev, a_cur
        q_prev2, q_prev = q_prev, q_cur
    return tuple(out)


def continued_fraction(alpha, max_terms: int) -> CFExpansion:
    """Partial quotients and convergents of alpha, certified.

    Rational: exact Euclidean algorithm, terminating. Quadratic irrational:
    exact periodic algorithm on (P + sqrt(D))/Q triples, emits any number of
    terms. Decimal literal: interval expansion that stops (truncated=True)
    before it would emit an uncertified quotient.
    """
    if max_terms < 1:
        raise InputError(f"max_terms must be >= 1, got {max_terms}")
    if isinstance(alpha, RationalAlpha):
        quotients = []
        p, q = alpha.p, alpha.q
        while q != 0 and len(quotients) < max_terms:
            a = p // q
            quotients.append(a)
            p, q = q, p - a * q
        return CFExpansion(
            quotients=tuple(quotients),
            convergents=_convergents_from_quotients(quotients),
            terminating=(q == 0),
            truncated=False,
        )
    if isinstance(alpha, QuadraticAlpha):
        return _quadratic_cf(alpha, max_terms)
    if isinstance(alpha, DecimalAlpha):
        return _interval_cf(alpha, max_terms)
    raise ConfigurationError(f"unsupported alpha {alpha!r}")


def _quadratic_cf(alpha: QuadraticAlpha, max_terms: int) -> CFExpansion:
    # write alpha = (P + sqrt(D))/Q with Q | D - P^2, then iterate exactly
    a, b, c, d = alpha.a, alpha.b, alpha.c, alpha.d
    if b > 0:
        P, Q = a * c, c * c
    else:
        P, Q = -a * c, -c * c
    D = b * b * d * c * c
    s = math.isqrt(D)
    quotients = []
    for _ in range(max_terms):
        if Q > 0:
            ak = (P + s) // Q
        else:
            ak = (-P - s - 1) // (-Q)
        quotients.append(ak)
        P = ak * Q - P
        num = D - P * P
        if num % Q != 0:
            raise InvariantError("quadratic CF invariant Q | D - P^2 broken")
        Q = num // Q
    return CFExpansion(
        quotients=tuple(quotients),
        convergents=_convergents_from_quotients(quotients),
        terminating=False,
        truncated=False,
    )


def _interval_cf(alpha: DecimalAlpha, max_terms: int) -> CFExpansion:
    lo, hi = alpha.bounds()
    quotients = []
    truncated = True
    while len(quotients) < max_terms:
        a_lo = lo.numerator // lo.denominator
        a_hi = hi.numerator // hi.denominator
        if a_lo != a_hi:
            break  # the next quotient is not determined by the digits given
        quotients.append(a_lo)
        frac_lo = lo - a_lo
        frac_hi = hi - a_lo
        if frac_lo == 0:
            break
        lo, hi = 1 / frac_hi, 1 / frac_lo
    else:
        truncated = False
    return CFExpansion(
        quotients=tuple(quotients),
        convergents=_convergents_from_quotients(quotients),
        terminating=False,
        truncated=truncated,
    )


@dataclass(frozen=True)
class IrrationalityProfile:
    """Denominator growth ratios log q_{j+1} / log q_j and their running max.

    Reports what was computed over the available convergents; no
    extrapolation to the limsup is attempted.
    """

    ratios: tuple[float, ...]
    running_max: tuple[float, ...]

    @property
    def max_ratio(self) -> float:
        return self.running_max[-1]


def irrationality_profile(cf: CFExpansion) -> IrrationalityProfile:
    if cf.terminating:
        raise InputError("irrationality profile is undefined for rationals (finite expansion)")
    qs = [c.q for c in cf.convergents if c.q >= 2]
    if len(qs) < 3:
        raise InputError(f"need >= 3 convergents with q >= 2, have {len(qs)}")
    ratios = []
    running = []
    best = 0.0
    for q_cur, q_next in zip(qs, qs[1:]):
        r = math.log(q_next) / math.log(q_cur)
        ratios.append(r)
        best = max(best, r)
        running.append(best)
    return IrrationalityProfile(ratios=tuple(ratios), running_max=tuple(running))


# ---------------------------------------------------------------------------
# certified comparisons
# ---------------------------------------------------------------------------


def _bit_schedule(alpha, start: int = 64):
    cap = alpha.max_certified_bits()
    limit = cap if cap is not None else _MAX_EXACT_BITS
    bits = start
    while bits < limit:
        yield bits
        bits *= 2
    yield limit


def compare_to_rational(alpha, target: Fraction) -> int:
    """Certified sign of alpha - target (-1, 0, +1), escalating precision.

    0 is only returned for an exactly equal rational alpha; for interval
    representations that cannot be separated from the target the call
    raises PrecisionExhaustedError.
    """
    if isinstance(alpha, RationalAlpha):
        diff = alpha.as_fraction() - target
        return (diff > 0) - (diff < 0)
    for bits in _bit_schedule(alpha):
        lo, hi = alpha.mantissa_interval(bits)
        scaled = target * (1 << bits)
        if Fraction(lo) > scaled:
            return 1
        if Fraction(hi) < scaled:
            return -1
    raise PrecisionExhaustedError(
        f"cannot separate {alpha.spec_id} from {target} with available precision"
    )


def abs_diff_leq(alpha, approx: Fraction, bound: Fraction) -> bool:
    """Certified test |alpha - approx| <= bound."""
    for bits in _bit_schedule(alpha):
        scale = 1 << bits
        lo, hi = alpha.mantissa_interval(bits)
        diff_lo = Fraction(lo, scale) - approx
        diff_hi = Fraction(hi, scale) - approx
        worst = max(abs(diff_lo), abs(diff_hi))
        best = Fraction(0) if diff_lo <= 0 <= diff_hi else min(abs(diff_lo), abs(diff_hi))
        if worst <= bound:
            return True
        if best > bound:
            return False
    raise PrecisionExhaustedError(
        f"cannot decide |{alpha.spec_id} - {approx}| <= {bound}"
    )


# ---------------------------------------------------------------------------
# major / minor arc classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MinorArcVerdict:
    """A convergent denominator landed in (Q, x/Q]."""

    convergent: Convergent


@dataclass(frozen=True)
class MajorArcVerdict:
    """No denominator in (Q, x/Q]: alpha is near a/q with small q.

    beta = alpha - a/q as a certified interval [beta_lo, beta_hi];
    next_q is the first denominator beyond x/Q.
    """

    convergent: Convergent
    beta_lo: float
    beta_hi: float
    next_q: int


@dataclass(frozen=True)
class ArcClassification:
    x: int
    A: float
    R: float
    Q: float
    verdict: MinorArcVerdict | MajorArcVerdict

    @property
    def kind(self) -> str:
        return "minor" if isinstance(self.verdict, MinorArcVerdict) else "major"


def classify_arc(alpha, x: int, A: float) -> ArcClassification:
    """Decide whether alpha sits on a major or minor arc at scale x.

    With L = log x, the cutoff is Q = L^(12A+38) (and R = L^(A+1) is carried
    for reporting). Scanning convergent denominators upward: the first q
    beyond Q either lands in (Q, x/Q] (minor verdict, smallest such q) or
    jumps past x/Q (major verdict with the previous convergent and a
    certified interval for beta = alpha - a/q).
    """
    if x < 16:
        raise InputError(f"x must be >= 16, got {x}")
    if A < 0:
        raise InputError(f"A must be >= 0, got {A}")
    if alpha.is_rational:
        raise InputError("arc classification assumes irrational alpha")
    L = math.log(x)
    R = L ** (A + 1)
    Q = L ** (12 * A + 38)
    xq = x / Q

    terms = 64
    while True:
        cf = continued_fraction(alpha, terms)
        convs = cf.convergents
        crossing = next((i for i, cv in enumerate(convs) if cv.q > Q), None)
        if crossing is not None:
            break
        if cf.truncated or terms >= 1 << 16:
            raise PrecisionExhaustedError(
                f"cannot certify convergents past Q={Q:.3e} for {alpha.spec_id}"
            )
        terms *= 2

    cv = convs[crossing]
    if cv.q <= xq:
        verdict = MinorArcVerdict(convergent=cv)
    else:
        if crossing == 0:
            raise InvariantError("first convergent denominator already exceeds Q")
        prev = convs[crossing - 1]
        bits = 192
        cap = alpha.max_certified_bits()
        if cap is not None:
            bits = min(bits, cap)
        lo, hi = alpha.mantissa_interval(bits)
        scale = 1 << bits
        approx = Fraction(prev.a, prev.q)
        beta_lo = float(Fraction(lo, scale) - approx)
        beta_hi = float(Fraction(hi, scale) - approx)
        verdict = MajorArcVerdict(
            convergent=prev, beta_lo=beta_lo, beta_hi=beta_hi, next_q=cv.q
        )
    return ArcClassification(x=x, A=A, R=R, Q=Q, verdict=verdict)
