"""Certified dyadic ball arithmetic and root enclosures.

A Ball is (mid, rad) with exact Fraction components: the represented real
number lies in [mid - rad, mid + rad], always.  Arithmetic is exact and then
rounded onto a dyadic grid of the current working precision, inflating the
radius by the rounding error, so bit sizes stay bounded while containment is
preserved.  CBall is the complex pair.

Root enclosures use the classical distance bound: for any degree-n polynomial
g and any point z with g'(z) != 0, the disc around z of radius
n*|g(z)/g'(z)| contains at least one root of g.  Approximations come from
mpmath; every radius reported here is certified by ball evaluation of that
bound, so downstream code never trusts the float layer.
"""

from __future__ import annotations

from fractions import Fraction
import math

import mpmath

from .errors import PrecisionError
from .factor import iroot

_PREC = [128]


class working_precision:
    """Context manager setting the dyadic rounding precision in bits."""

    def __init__(self, bits):
        self.bits = int(bits)

    def __enter__(self):
        _PREC.append(self.bits)
        return self

    def __exit__(self, *exc):
        _PREC.pop()
        return False


def current_precision():
    return _PREC[-1]


def _round_mid(x: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Round to the 2^-bits grid; returns (rounded, |error| bound)."""
    if x.denominator.bit_length() <= bits + 1:
        return x, Fraction(0)
    scaled = x * (1 << bits)
    n = scaled.numerator
    d = scaled.denominator
    q = (2 * n + d) // (2 * d)  # round to nearest
    r = Fraction(q, 1 << bits)
    err = abs(r - x)
    return r, err


def _round_rad_up(x: Fraction, bits: int) -> Fraction:
    if x <= 0:
        return Fraction(0)
    if x.denominator.bit_length() <= bits + 1:
        return x
    scaled = x * (1 << bits)
    q = scaled.numerator // scaled.denominator + 1
    return Fraction(q, 1 << bits)


class Ball:
    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=Fraction(0), _rounded=False):
        if not _rounded:
            bits = _PREC[-1]
            mid = Fraction(mid)
            rad = Fraction(rad)
            mid, err = _round_mid(mid, bits)
            rad = _round_rad_up(rad + err, bits)
        self.mid = mid
        self.rad = rad

    @classmethod
    def exact(cls, x):
        return cls(Fraction(x), Fraction(0), _rounded=True)

    def __repr__(self):
        return f"Ball({float(self.mid)!r} ± {float(self.rad)!r})"

    def __float__(self):
        return float(self.mid)

    def __add__(self, other):
        other = _as_ball(other)
        return Ball(self.mid + other.mid, self.rad + other.rad)

    __radd__ = __add__

    def __neg__(self):
        return Ball(-self.mid, self.rad, _rounded=True)

    def __sub__(self, other):
        other = _as_ball(other)
        return Ball(self.mid - other.mid, self.rad + other.rad)

    def __rsub__(self, other):
        return _as_ball(other) - self

    def __mul__(self, other):
        other = _as_ball(other)
        rad = (abs(self.mid) * other.rad + abs(other.mid) * self.rad
               + self.rad * other.rad)
        return Ball(self.mid * other.mid, rad)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ball(other)
        lo, hi = other.lower(), other.upper()
        if lo <= 0 <= hi:
            raise PrecisionError("division by a ball containing zero")
        cands = []
        for a in (self.lower(), self.upper()):
            for b in (lo, hi):
                cands.append(a / b)
        new_lo, new_hi = min(cands), max(cands)
        return Ball((new_lo + new_hi) / 2, (new_hi - new_lo) / 2)

    def lower(self):
        return self.mid - self.rad

    def upper(self):
        return self.mid + self.rad

    def abs_upper(self):
        return abs(self.mid) + self.rad

    def abs_lower(self):
        lo = abs(self.mid) - self.rad
        return lo if lo > 0 else Fraction(0)

    def contains_zero(self):
        return self.lower() <= 0 <= self.upper()

    def is_negative(self):
        return self.upper() < 0

    def is_positive(self):
        return self.lower() > 0


def _as_ball(x):
    if isinstance(x, Ball):
        return x
    return Ball(Fraction(x))


class CBall:
    __slots__ = ("re", "im")

    def __init__(self, re, im=None):
        self.re = re if isinstance(re, Ball) else Ball(Fraction(re))
        if im is None:
            im = Ball.exact(0)
        self.im = im if isinstance(im, Ball) else Ball(Fraction(im))

    @classmethod
    def from_ball(cls, b):
        return cls(b, Ball.exact(0))

    def __repr__(self):
        return f"CBall({complex(float(self.re.mid), float(self.im.mid))!r} ± {float(self.rad())!r})"

    def rad(self):
        return max(self.re.rad, self.im.rad)

    def __add__(self, other):
        other = _as_cball(other)
        return CBall(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return CBall(-self.re, -self.im)

    def __sub__(self, other):
        other = _as_cball(other)
        return CBall(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _as_cball(other) - self

    def __mul__(self, other):
        other = _as_cball(other)
        return CBall(self.re * other.re - self.im * other.im,
                     self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_cball(other)
        den = other.abs_sq()
        if den.contains_zero():
            raise PrecisionError("division by a complex ball containing zero")
        conj = CBall(other.re, -other.im)
        num = self * conj
        return CBall(num.re / den, num.im / den)

    def conjugate(self):
        return CBall(self.re, -self.im)

    def abs_sq(self) -> Ball:
        return self.re * self.re + self.im * self.im

    def abs_upper(self):
        return frac_sqrt_upper(self.abs_sq().upper())

    def abs_lower(self):
        return frac_sqrt_lower(self.abs_sq().lower())

    def to_complex(self):
        return complex(float(self.re.mid), float(self.im.mid))


def _as_cball(x):
    if isinstance(x, CBall):
        return x
    if isinstance(x, Ball):
        return CBall.from_ball(x)
    return CBall(Ball(Fraction(x)))


def frac_sqrt_upper(x: Fraction) -> Fraction:
    """Rational upper bound on sqrt(x), x >= 0."""
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return Fraction(0)
    bits = _PREC[-1]
    num = x.numerator << (2 * bits)
    r = iroot(num // x.denominator + 1, 2) + 1
    return Fraction(r, 1 << bits)


def frac_sqrt_lower(x: Fraction) -> Fraction:
    if x <= 0:
        return Fraction(0)
    bits = _PREC[-1]
    num = x.numerator << (2 * bits)
    r = iroot(num // x.denominator, 2)
    return Fraction(r, 1 << bits)


def frac_root_upper(x: Fraction, k: int) -> Fraction:
    """Rational upper bound on x^(1/k), x >= 0."""
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return Fraction(0)
    bits = _PREC[-1]
    num = x.numerator << (k * bits)
    r = iroot(num // x.denominator + 1, k) + 1
    return Fraction(r, 1 << bits)


def frac_root_lower(x: Fraction, k: int) -> Fraction:
    if x <= 0:
        return Fraction(0)
    bits = _PREC[-1]
    num = x.numerator << (k * bits)
    r = iroot(num // x.denominator, k)
    return Fraction(r, 1 << bits)


# 50 decimal digits on each side; ample for any b-bound at desk scale.
PI_LO = Fraction(31415926535897932384626433832795028841971693993751, 10 ** 49)
PI_HI = Fraction(31415926535897932384626433832795028841971693993752, 10 ** 49)


def ball_mat_mul(a, b):
    bt = list(zip(*b))
    return [[_sum_prod(row, col) for col in bt] for row in a]


def _sum_prod(row, col):
    acc = None
    for x, y in zip(row, col):
        t = x * y
        acc = t if acc is None else acc + t
    return acc


def ball_mat_det(rows):
    """Determinant ball of a square real-ball matrix (certified enclosure)."""
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    det = Ball.exact(1)
    for c in range(n):
        sel = max(range(c, n), key=lambda i: abs(m[i][c].mid))
        if m[sel][c].contains_zero():
            raise PrecisionError("pivot ball contains zero in determinant")
        if sel != c:
            m[c], m[sel] = m[sel], m[c]
            sign = -sign
        p = m[c][c]
        det = det * p
        for i in range(c + 1, n):
            if m[i][c].mid or m[i][c].rad:
                f = m[i][c] / p
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    if sign < 0:
        det = -det
    return det


class RootEnclosure:
    """A certified disc containing exactly one root of the input polynomial."""

    __slots__ = ("center", "radius", "is_real")

    def __init__(self, center: CBall, radius: Fraction, is_real: bool):
        self.center = center
        self.radius = radius
        self.is_real = is_real

    def __repr__(self):
        kind = "real" if self.is_real else "complex"
        return f"RootEnclosure({self.center.to_complex()!r}, r={float(self.radius):.3g}, {kind})"

    def real_interval(self):
        if not self.is_real:
            raise ValueError("not a real root")
        r = self.radius + self.re_error()
        return Ball(self.center.re.mid, self.center.re.rad + r)

    def re_error(self):
        return abs(self.center.im.mid) + self.center.im.rad

    def as_cball(self):
        if self.is_real:
            return CBall(self.real_interval(), Ball.exact(0))
        return CBall(Ball(self.center.re.mid, self.center.re.rad + self.radius,
                          _rounded=True),
                     Ball(self.center.im.mid, self.center.im.rad + self.radius,
                          _rounded=True))


def _eval_poly_cball(coeffs, z: CBall) -> CBall:
    acc = CBall(Ball.exact(0))
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def certify_roots(coeffs, expect_distinct=True, max_tries=6):
    """Certified enclosures for all roots of a polynomial with CBall coeffs.

    The true polynomial is assumed separable (expect_distinct); returns a list
    of RootEnclosure, pairwise disjoint, each classified real/non-real.  The
    classification argument: roots of a conjugate-stable family come in
    conjugate pairs, so when the conjugate of an isolating disc meets no other
    disc the root must equal its own conjugate.  Raises PrecisionError when
    the coefficient radii are too coarse to separate the roots.
    """
    n = len(coeffs) - 1
    if n < 1:
        return []
    if coeffs[-1].abs_sq().contains_zero():
        raise PrecisionError("leading coefficient ball contains zero")
    real_input = all(c.im.mid == 0 and c.im.rad == 0 for c in coeffs)
    dps = max(30, int(current_precision() * 0.3103) + 20)
    deriv = [coeffs[i] * i for i in range(1, n + 1)]
    for attempt in range(max_tries):
        with mpmath.workdps(dps << attempt):
            mp_coeffs = [mpmath.mpc(mpmath.mpf(c.re.mid.numerator) / c.re.mid.denominator,
                                    mpmath.mpf(c.im.mid.numerator) / c.im.mid.denominator)
                         for c in reversed(coeffs)]
            try:
                approx = mpmath.polyroots(mp_coeffs, maxsteps=200, extraprec=200)
            except mpmath.libmp.NoConvergence:
                continue
        bits = current_precision() << attempt
        encl = []
        ok = True
        with working_precision(bits + 64):
            for z in approx:
                zc = CBall(Ball.exact(_frac_from_mpf(z.real, bits)),
                           Ball.exact(_frac_from_mpf(z.imag, bits)))
                num = _eval_poly_cball(coeffs, zc).abs_upper()
                den = _eval_poly_cball(deriv, zc).abs_lower()
                if den == 0:
                    ok = False
                    break
                encl.append((zc, Fraction(n) * num / den))
            if not ok:
                continue
            # pairwise disjoint?
            if not _pairwise_disjoint(encl):
                continue
            out = _classify(encl, real_input)
            if out is not None:
                out.sort(key=lambda e: (0 if e.is_real else 1,
                                        e.center.re.mid, e.center.im.mid))
                return out
    raise PrecisionError("could not certify separated root enclosures")


def _frac_from_mpf(x, bits):
    man_exp = mpmath.mpf(x)
    fr = Fraction(*mpmath.libmp.to_rational(man_exp._mpf_))
    return _round_mid(fr, bits)[0]


def _pairwise_disjoint(encl):
    for i in range(len(encl)):
        zi, ri = encl[i]
        for j in range(i + 1, len(encl)):
            zj, rj = encl[j]
            d2 = ((zi.re.mid - zj.re.mid) ** 2 + (zi.im.mid - zj.im.mid) ** 2)
            if d2 <= (ri + rj + zi.rad() + zj.rad()) ** 2:
                return False
    return True


def _classify(encl, real_input):
    """Assign is_real via conjugate-disc disjointness; None if undecidable."""
    out = []
    for i, (zi, ri) in enumerate(encl):
        if not real_input:
            out.append(RootEnclosure(zi, ri, False))
            continue
        im_lo = zi.im.mid - zi.im.rad - ri
        im_hi = zi.im.mid + zi.im.rad + ri
        if im_lo > 0 or im_hi < 0:
            out.append(RootEnclosure(zi, ri, False))
            continue
        # conjugate disc must avoid every *other* disc
        conj_clear = True
        for j, (zj, rj) in enumerate(encl):
            if j == i:
                continue
            d2 = ((zi.re.mid - zj.re.mid) ** 2 + (-zi.im.mid - zj.im.mid) ** 2)
            if d2 <= (ri + rj + zi.rad() + zj.rad()) ** 2:
                conj_clear = False
                break
        if not conj_clear:
            return None
        out.append(RootEnclosure(zi, ri, True))
    return out
