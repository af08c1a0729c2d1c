"""LLL reduction with an exact unimodular transform and certified bounds.

The reduction runs on an integer scaling of the ball midpoints; the recorded
transform is exact, so the reduced basis is an exact integer recombination of
the order basis.  Acceptance is a posteriori: the product of certified vector
norms must satisfy the reducedness inequality with the constant

    c_m = gamma_m^(m/2) * (3/2)^m * 2^(m(m-1)/2),

checked through interval arithmetic (squared, so exact Hermite powers stay
rational).  On failure the caller doubles the precision and reruns --
adaptive precision replaces any fixed a-priori precision bookkeeping.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .balls import Ball, frac_sqrt_lower, frac_sqrt_upper
from .errors import InputError, PrecisionError
from .exact import Matrix

# gamma_m^m for m <= 8 (exact Hermite constants raised to the m-th power)
_HERMITE_POW = {
    1: Fraction(1),
    2: Fraction(4, 3),
    3: Fraction(2),
    4: Fraction(4),
    5: Fraction(8),
    6: Fraction(64, 3),
    7: Fraction(64),
    8: Fraction(256),
}


class ReductionConstant:
    """c_m with an exact rational square (gamma exact for m <= 8)."""

    __slots__ = ("m", "square", "hermite_exact")

    def __init__(self, m):
        if m < 1:
            raise InputError("m must be positive")
        gm = _HERMITE_POW.get(m)
        self.hermite_exact = gm is not None
        if gm is None:
            gm = Fraction(m) ** m  # gamma_m <= m
        self.m = m
        self.square = gm * Fraction(9, 4) ** m * Fraction(2) ** (m * (m - 1))

    def __float__(self):
        return float(self.square) ** 0.5

    def upper(self) -> Fraction:
        return frac_sqrt_upper(self.square)

    def __repr__(self):
        return f"ReductionConstant(m={self.m}, c~{float(self):.6g})"


def reducedness_constant(m) -> ReductionConstant:
    return ReductionConstant(m)


def lll_transform(rows, delta=Fraction(99, 100)):
    """Exact LLL on integer rows; returns (reduced_rows, transform).

    transform is unimodular with reduced = transform * rows.  Classic
    rational-arithmetic LLL with incrementally maintained Gram-Schmidt data.
    """
    if not Fraction(1, 4) < delta < 1:
        raise InputError("delta must lie in (1/4, 1)")
    b = [list(map(int, r)) for r in rows]
    n = len(b)
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    if n <= 1:
        return b, U
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    # full initial Gram-Schmidt
    star = []
    for i in range(n):
        v = [Fraction(e) for e in b[i]]
        for j in range(i):
            mu[i][j] = _dotf(b[i], star[j]) / B[j] if B[j] else Fraction(0)
            v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
        star.append(v)
        B[i] = _dotf(v, v)
        if not B[i]:
            raise PrecisionError("input rows are not numerically independent")

    def red(k, l):
        if abs(mu[k][l]) > Fraction(1, 2):
            q = _round_half_even(mu[k][l])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            U[k] = [x - q * y for x, y in zip(U[k], U[l])]
            mu[k][l] -= q
            for i in range(l):
                mu[k][i] -= q * mu[l][i]

    k = 1
    while k < n:
        red(k, k - 1)
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
        else:
            # swap rows k-1 and k, update GSO data in place
            mu_kk1 = mu[k][k - 1]
            Bk = B[k] + mu_kk1 * mu_kk1 * B[k - 1]
            mu[k][k - 1] = mu_kk1 * B[k - 1] / Bk
            B[k] = B[k - 1] * B[k] / Bk
            B[k - 1] = Bk
            b[k], b[k - 1] = b[k - 1], b[k]
            U[k], U[k - 1] = U[k - 1], U[k]
            for j in range(k - 1):
                mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
            for i in range(k + 1, n):
                t = mu[i][k]
                mu[i][k] = mu[i][k - 1] - mu_kk1 * t
                mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]
            k = max(k - 1, 1)
    return b, U


def _dotf(a, b):
    return sum((Fraction(x) * y for x, y in zip(a, b)), Fraction(0))


def _round_half_even(x: Fraction) -> int:
    fl, rem = divmod(x.numerator, x.denominator)
    rem2 = 2 * rem
    if rem2 > x.denominator:
        return fl + 1
    if rem2 < x.denominator:
        return fl
    return fl + (fl % 2)


class ReducedBasis:
    """LLL output bound to exact lattice elements and certified norms."""

    def __init__(self, embedding, transform, delta, precision_bits):
        self.embedding = embedding
        self.transform = transform
        self.delta = delta
        self.precision_bits = precision_bits
        self.m = len(transform)
        order_elems = embedding.order.basis_elements()
        self.elements = []
        for row in transform:
            acc = None
            for c, be in zip(row, order_elems):
                if not c:
                    continue
                term = be * c
                acc = term if acc is None else acc + term
            self.elements.append(acc)
        self.rows = [_combine_ball_rows(row, embedding.rows) for row in transform]
        self.norms_sq = [_row_norm_sq(r) for r in self.rows]
        self.det = embedding.det
        self.cm = reducedness_constant(self.m)
        prod_sup = Fraction(1)
        for ns in self.norms_sq:
            prod_sup *= ns.upper()
        det_lo = self.det.abs_lower()
        self.cert_lhs_sq = prod_sup
        self.cert_rhs_sq = self.cm.square * det_lo * det_lo
        self.certificate_ok = self.cert_lhs_sq <= self.cert_rhs_sq

    def achieved_ratio(self) -> float:
        det = abs(float(self.det.mid))
        prod = 1.0
        for ns in self.norms_sq:
            prod *= float(ns.mid) ** 0.5
        return prod / det if det else float("inf")

    def norm_lower(self, i) -> Fraction:
        return frac_sqrt_lower(self.norms_sq[i].lower())

    def float_rows(self):
        return [[float(e.mid) for e in row] for row in self.rows]


def _combine_ball_rows(coeffs, rows):
    acc = None
    for c, row in zip(coeffs, rows):
        if not c:
            continue
        term = [e * c for e in row]
        acc = term if acc is None else [x + y for x, y in zip(acc, term)]
    if acc is None:
        acc = [Ball.exact(0) for _ in rows[0]]
    return acc


def _row_norm_sq(row) -> Ball:
    acc = Ball.exact(0)
    for e in row:
        acc = acc + e * e
    return acc


def lll_reduce(embedding, delta=Fraction(99, 100), precision_bits=128,
               refine=None, max_precision_bits=4096) -> ReducedBasis:
    """Reduce Phi(Lambda); on certificate failure double precision and rerun.

    `refine`, when given, maps a precision to a fresh LatticeEmbedding at that
    precision (the reduction reruns on it); without it certificate failure
    raises PrecisionError.
    """
    prec = precision_bits
    while True:
        scale = 1 << prec
        int_rows = [[_round_int(e.mid * scale) for e in row]
                    for row in embedding.rows]
        try:
            _, U = lll_transform(int_rows, delta)
            rb = ReducedBasis(embedding, U, delta, prec)
        except PrecisionError:
            rb = None
        if rb is not None and rb.certificate_ok:
            det = Matrix([[Fraction(c) for c in row] for row in U]).det()
            assert det in (1, -1), "transform is not unimodular"
            return rb
        if refine is None or prec * 2 > max_precision_bits:
            raise PrecisionError(
                "reducedness certificate failed at the precision ceiling")
        prec *= 2
        embedding = refine(prec)


def _round_int(x: Fraction) -> int:
    return (2 * x.numerator + x.denominator) // (2 * x.denominator)


class CoefficientBox:
    """Per-coordinate enumeration bounds beta_i = floor(c_m L / |b_i|)."""

    __slots__ = ("betas",)

    def __init__(self, betas):
        self.betas = tuple(int(b) for b in betas)
        if any(b < 0 for b in self.betas):
            raise InputError("negative box bound")

    def __repr__(self):
        return f"CoefficientBox({self.betas})"

    def __len__(self):
        return len(self.betas)


def coefficient_box(rb: ReducedBasis, target_sq: Fraction,
                    cm_square=None) -> CoefficientBox:
    """Box from the Cramer bound, rounded outward.

    target_sq is an upper bound on L^2 (L the enumeration target length);
    beta_i = floor(sqrt(c_m^2 L^2 / |b_i|^2)) with |b_i| rounded down.
    """
    c_sq = rb.cm.square if cm_square is None else cm_square
    betas = []
    for ns in rb.norms_sq:
        lo = ns.lower()
        if lo <= 0:
            raise PrecisionError("reduced vector norm not separated from zero")
        ratio = c_sq * target_sq / lo
        betas.append(_isqrt_floor(ratio))
    return CoefficientBox(betas)


def _isqrt_floor(x: Fraction) -> int:
    import math
    if x < 0:
        return 0
    return math.isqrt(x.numerator // x.denominator)


# -- shell enumeration -----------------------------------------------------------

_GRID_LIMIT = 2_000_000


def iterate_box(box: CoefficientBox, shell_cap=8, prefilter=None,
                deadline=None, stats=None):
    """Yield sign-canonical integer vectors by nondecreasing max-norm shells.

    Within a shell the order is lexicographic.  `prefilter` is (float_matrix,
    threshold_sq): candidates whose float image norm exceeds the threshold are
    skipped (used with the enumeration target bound; exact predicates decide
    afterwards).  stats, when given, counts visited/kept in place.
    """
    betas = box.betas
    m = len(betas)
    top = min(shell_cap, max(betas) if betas else 0)
    fmat = None
    if prefilter is not None:
        fmat = np.asarray(prefilter[0], dtype=float)
        thresh = float(prefilter[1])
    for s in range(1, top + 1):
        if deadline is not None:
            deadline.check()
        caps = [min(b, s) for b in betas]
        tail_len = 0
        size = 1
        while tail_len < m:
            nxt = size * (2 * caps[m - 1 - tail_len] + 1)
            if nxt > _GRID_LIMIT:
                break
            size = nxt
            tail_len += 1
        head_len = m - tail_len
        tail_grid = _lex_grid(caps[head_len:])
        tail_abs_max = np.abs(tail_grid).max(axis=1) if tail_len else None
        tail_img = tail_grid.astype(float) @ fmat[head_len:] if fmat is not None else None
        head_ranges = [range(-c, c + 1) for c in caps[:head_len]]
        for head in itertools.product(*head_ranges):
            if deadline is not None:
                deadline.check()
            head_max = max((abs(h) for h in head), default=0)
            if head_max > s:
                continue
            first_nonzero = next((h for h in head if h), None)
            if first_nonzero is not None and first_nonzero < 0:
                continue
            if tail_len == 0:
                if head_max == s and first_nonzero is not None:
                    if stats is not None:
                        stats["visited"] += 1
                    yield head
                continue
            mask = np.ones(len(tail_grid), dtype=bool)
            if head_max < s:
                # the shell max-norm must be realized somewhere
                mask &= tail_abs_max == s
            if first_nonzero is None:
                # tail must provide the leading positive entry
                lead = _leading_sign(tail_grid)
                mask &= lead > 0
            if fmat is not None:
                head_vec = np.zeros(fmat.shape[1]) if head_len == 0 else \
                    np.asarray(head, dtype=float) @ fmat[:head_len]
                norms = ((tail_img + head_vec) ** 2).sum(axis=1)
                mask &= norms <= thresh
            idxs = np.nonzero(mask)[0]
            for t in idxs:
                if stats is not None:
                    stats["visited"] += 1
                yield head + tuple(int(v) for v in tail_grid[t])


def _lex_grid(caps):
    """All integer tuples with |x_i| <= caps[i], rows in lexicographic order."""
    if not caps:
        return np.zeros((1, 0), dtype=np.int64)
    ranges = [np.arange(-c, c + 1, dtype=np.int64) for c in caps]
    mesh = np.meshgrid(*ranges, indexing="ij")
    return np.stack([mm.reshape(-1) for mm in mesh], axis=1)


def _leading_sign(grid):
    """Sign of the first nonzero coordinate per row (0 for the zero row)."""
    n = grid.shape[0]
    out = np.zeros(n, dtype=np.int64)
    undecided = np.ones(n, dtype=bool)
    for c in range(grid.shape[1]):
        col = grid[:, c]
        newly = undecided & (col != 0)
        out[newly] = np.sign(col[newly])
        undecided &= col == 0
    return out


def element_of(rb: ReducedBasis, gamma):
    """Exact lattice element sum gamma_i * b_i."""
    acc = None
    for c, el in zip(gamma, rb.elements):
        if not c:
            continue
        term = el * c
        acc = term if acc is None else acc + term
    return acc


def enumerate_shells(rb: ReducedBasis, box: CoefficientBox, predicate,
                     shell_cap=8, prefilter=None, deadline=None, stats=None):
    """First (gamma, element) in shell order passing the exact predicate."""
    for gamma in iterate_box(box, shell_cap=shell_cap, prefilter=prefilter,
                             deadline=deadline, stats=stats):
        el = element_of(rb, gamma)
        if stats is not None:
            stats["tested"] += 1
        if predicate(el):
            return gamma, el
    return None
