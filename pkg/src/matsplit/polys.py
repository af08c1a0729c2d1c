"""Dense univariate polynomials with exact rational coefficients.

Coefficients are ascending (index = degree).  Provides the pieces the root
machinery needs: arithmetic, gcd, squarefree test, Sturm sequences and exact
real-root counting/isolation by bisection.
"""

from __future__ import annotations

from fractions import Fraction


def normalize(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def degree(p):
    p = normalize(p)
    return len(p) - 1 if p else -1


def add(p, q):
    n = max(len(p), len(q))
    p = list(p) + [Fraction(0)] * (n - len(p))
    q = list(q) + [Fraction(0)] * (n - len(q))
    return normalize([a + b for a, b in zip(p, q)])


def neg(p):
    return [-a for a in p]


def sub(p, q):
    return add(p, neg(q))


def mul(p, q):
    p, q = normalize(p), normalize(q)
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] += a * b
    return out


def scale(p, c):
    return normalize([a * c for a in p])


def divmod_poly(p, q):
    p, q = normalize(p), normalize(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    d = len(q) - 1
    lead = q[-1]
    quot = [Fraction(0)] * max(0, len(p) - d)
    while len(r) - 1 >= d and r:
        k = len(r) - 1 - d
        c = r[-1] / lead
        quot[k] = c
        for i in range(len(q)):
            r[k + i] -= c * q[i]
        r = normalize(r)
    return normalize(quot), r


def rem(p, q):
    return divmod_poly(p, q)[1]


def monic(p):
    p = normalize(p)
    if not p:
        return p
    return [a / p[-1] for a in p]


def gcd_poly(p, q):
    p, q = normalize(p), normalize(q)
    while q:
        p, q = q, rem(p, q)
    return monic(p)


def derivative(p):
    return normalize([i * a for i, a in enumerate(p)][1:])


def is_squarefree(p):
    return degree(gcd_poly(p, derivative(p))) <= 0


def evaluate(p, x):
    acc = Fraction(0)
    for c in reversed(normalize(p)):
        acc = acc * x + c
    return acc


def sturm_chain(p):
    p = normalize(p)
    chain = [p, derivative(p)]
    while degree(chain[-1]) > 0:
        r = rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append(neg(r))
    return [c for c in chain if c]


def _sign_at(p, x):
    v = evaluate(p, x)
    return (v > 0) - (v < 0)


def _sign_at_inf(p, positive):
    p = normalize(p)
    if not p:
        return 0
    s = (p[-1] > 0) - (p[-1] < 0)
    if not positive and (len(p) - 1) % 2 == 1:
        s = -s
    return s


def _variations(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p, lo=None, hi=None):
    """Number of distinct real roots of p in (lo, hi] (whole line by default).

    p need not be squarefree; the count is of distinct roots of the squarefree
    part.  lo/hi are Fractions or None for -/+ infinity.
    """
    p = normalize(p)
    if degree(p) <= 0:
        return 0
    sf = divmod_poly(p, gcd_poly(p, derivative(p)))[0]
    chain = sturm_chain(sf)
    s_lo = [_sign_at(c, lo) for c in chain] if lo is not None else \
        [_sign_at_inf(c, False) for c in chain]
    s_hi = [_sign_at(c, hi) for c in chain] if hi is not None else \
        [_sign_at_inf(c, True) for c in chain]
    return _variations(s_lo) - _variations(s_hi)


def root_bound(p):
    """Cauchy bound: all real roots lie in (-B, B)."""
    p = normalize(p)
    lead = abs(p[-1])
    b = max((abs(c) / lead for c in p[:-1]), default=Fraction(0))
    return b + 1


def isolate_real_roots(p):
    """Disjoint rational intervals (a, b], one distinct real root each."""
    p = normalize(p)
    sf = divmod_poly(p, gcd_poly(p, derivative(p)))[0]
    total = count_real_roots(sf)
    if total == 0:
        return []
    b = root_bound(sf)
    out = []
    stack = [(-b, b, total)]
    while stack:
        lo, hi, cnt = stack.pop()
        if cnt == 0:
            continue
        if cnt == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        # nudge off a root so interval endpoints stay root-free
        while not evaluate(sf, mid):
            mid += (hi - lo) / 64
        left = count_real_roots(sf, lo, mid)
        stack.append((lo, mid, left))
        stack.append((mid, hi, cnt - left))
    out.sort()
    return out


def refine_root(p, lo, hi, width):
    """Bisect (lo, hi] containing exactly one root of p until hi-lo <= width."""
    s_lo = _sign_at(p, lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        v = evaluate(p, mid)
        if not v:
            return mid - width / 2, mid + width / 2
        s_mid = (v > 0) - (v < 0)
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi
