"""Numerical representations A -> M_n(R or C), one per archimedean place.

A splitting element a (exact minimal polynomial of degree n, separable, with
a real root at real places) yields a spectral projector e = q(a)/q(lambda)
for a chosen root lambda; the left ideal A*e is minimal, and left
multiplication on a basis of it is the representation.  All numerics are
certified balls; representations only steer the search, every downstream
decision about elements is exact.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .algebra import AlgebraElement, StructureAlgebra, require_square_dimension
from .balls import (Ball, CBall, ball_mat_det, certify_roots,
                    frac_sqrt_upper, working_precision)
from .errors import InconclusiveError, PrecisionError
from .exact import Matrix, solve_and_kernel
from .numfield import Embedding, FieldElement


def element_min_poly(A: StructureAlgebra, a: AlgebraElement):
    """Exact minimal polynomial of a over K (ascending FieldElement coeffs)."""
    K = A.field
    powers = [A.identity]
    cur = A.identity
    flats = [list(cur.coords)]
    for deg in range(1, A.dim + 2):
        cur = cur * a
        cols = Matrix([[flats[j][i] for j in range(len(flats))]
                       for i in range(A.dim)])
        sol, _ = solve_and_kernel(cols, list(cur.coords))
        if sol is not None:
            return [-c for c in sol] + [K.one()]
        flats.append(list(cur.coords))
    raise AssertionError("no dependence up to the algebra dimension")


def _kpoly_derivative(f, K):
    return [c * i for i, c in enumerate(f)][1:] or [K.zero()]


def _kpoly_rem(a, b, K):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    b = list(b)
    while b and not b[-1]:
        b.pop()
    lead = b[-1]
    while len(a) >= len(b) and a:
        f = a[-1] / lead
        off = len(a) - len(b)
        for i in range(len(b)):
            a[off + i] = a[off + i] - f * b[i]
        while a and not a[-1]:
            a.pop()
    return a


def _kpoly_gcd_degree(f, g, K):
    a, b = list(f), list(g)
    while any(b):
        a, b = b, _kpoly_rem(a, b, K)
        while b and not b[-1]:
            b.pop()
    while a and not a[-1]:
        a.pop()
    return len(a) - 1


def is_separable_of_degree(A, a, n) -> bool:
    """Exact test: min poly of a has degree n and distinct roots."""
    f = element_min_poly(A, a)
    if len(f) - 1 != n:
        return False
    K = A.field
    return _kpoly_gcd_degree(f, _kpoly_derivative(f, K), K) <= 0


def splitting_element(A: StructureAlgebra, place: Embedding, seed=0,
                      max_tries=200, precision_bits=128):
    """Sample a in A whose reduced minimal polynomial splits this place.

    Accepts a iff the min poly has degree n over K with distinct roots, and
    (for a real place) at least one certified real root.  Deterministic given
    the seed; returns (a, min_poly, tries).
    """
    n = require_square_dimension(A)
    rng = random.Random((seed << 8) ^ place.index ^ 0xA5)
    for tries in range(1, max_tries + 1):
        spread = 1 + tries // 25
        coords = [rng.randrange(-spread, spread + 1) for _ in range(A.dim)]
        if not any(coords):
            continue
        a = A.element([A.field.from_rational(c) for c in coords])
        f = element_min_poly(A, a)
        if len(f) - 1 != n:
            continue
        if _kpoly_gcd_degree(f, _kpoly_derivative(f, A.field), A.field) > 0:
            continue
        if place.is_real:
            try:
                roots = _certified_roots_at(place, f, precision_bits)
            except PrecisionError:
                continue
            if not any(r.is_real for r in roots):
                continue
        return a, f, tries
    raise InconclusiveError(
        f"no splitting element found in {max_tries} samples at place {place.index}")


def _certified_roots_at(place: Embedding, f, precision_bits):
    with working_precision(precision_bits):
        coeffs = []
        for c in f:
            v = place(c, precision_bits)
            coeffs.append(v if isinstance(v, CBall) else CBall.from_ball(v))
        return certify_roots(coeffs)


class ArchRepresentation:
    """phi: A -> M_n at one place, with certified entries and residual bound."""

    def __init__(self, place, n, mats, precision_bits, residual, splitting):
        self.place = place
        self.is_real = place.is_real
        self.n = n
        self.mats = mats  # per basis element: n x n of Ball (real) / CBall
        self.precision_bits = precision_bits
        self.residual = residual
        self.splitting = splitting

    def apply(self, x: AlgebraElement):
        """phi(x) as an n x n ball matrix."""
        n = self.n
        if self.is_real:
            acc = [[Ball.exact(0) for _ in range(n)] for _ in range(n)]
        else:
            acc = [[CBall(Ball.exact(0)) for _ in range(n)] for _ in range(n)]
        for j, c in enumerate(x.coords):
            if not c:
                continue
            s = self.place(c, self.precision_bits)
            mat = self.mats[j]
            for r in range(n):
                for q in range(n):
                    acc[r][q] = acc[r][q] + s * mat[r][q]
        return acc

    def norm_sq(self, x: AlgebraElement) -> Ball:
        """Squared Frobenius norm ||phi(x)||^2 as a certified ball."""
        m = self.apply(x)
        acc = Ball.exact(0)
        for row in m:
            for e in row:
                if isinstance(e, CBall):
                    acc = acc + e.abs_sq()
                else:
                    acc = acc + e * e
        return acc


def build_representation(A: StructureAlgebra, place: Embedding,
                         a: AlgebraElement, precision_bits: int,
                         min_poly=None) -> ArchRepresentation:
    """Representation from the splitting element a at one place.

    Raises PrecisionError when pivots or the residual gate fail at this
    precision; the caller retries with a higher precision or a new element.
    """
    n = require_square_dimension(A)
    m = A.dim
    f = min_poly if min_poly is not None else element_min_poly(A, a)
    with working_precision(precision_bits):
        roots = _certified_roots_at(place, f, precision_bits)
        if len(roots) != n:
            raise PrecisionError("expected n distinct roots")
        lam, others = _select_root(roots, place.is_real)
        complex_mode = not place.is_real
        lam_val = lam.real_interval() if place.is_real else lam.as_cball()
        # q = f / (x - lambda) by synthetic division, in ball arithmetic
        coeffs = []
        for c in f:
            v = place(c, precision_bits)
            if complex_mode and not isinstance(v, CBall):
                v = CBall.from_ball(v)
            coeffs.append(v)
        q = _synthetic_division(coeffs, lam_val)
        qlam = _horner(q, lam_val)
        powers = [A.identity]
        for _ in range(n - 1):
            powers.append(powers[-1] * a)
        # e = sum_k (q_k / q(lambda)) sigma(a^k-coords)
        evec = None
        for k, qk in enumerate(q):
            ck = qk / qlam
            term = [ck * _embed_coord(place, c, precision_bits, complex_mode)
                    for c in powers[k].coords]
            evec = term if evec is None else [x + y for x, y in zip(evec, term)]
        # sigma-embedded left-regular matrices of the basis elements
        lmats = []
        for j in range(m):
            cols = []
            for i in range(m):
                cols.append([_embed_coord(place, c, precision_bits, complex_mode)
                             for c in A.table[j][i]])
            # column i = coords of a_j a_i
            lmats.append([[cols[i][k] for i in range(m)] for k in range(m)])
        ideal_rows = [_mat_vec(lmats[j], evec) for j in range(m)]
        basis_rows, pivots = _ball_row_reduce(ideal_rows, n, precision_bits)
        # phi(a_j): solve W phi_col = a_j * w_k on the pivot coordinates
        sub = [[basis_rows[t][pc] for t in range(n)] for pc in pivots]
        mats = []
        for j in range(m):
            cols = []
            for k in range(n):
                u = _mat_vec(lmats[j], basis_rows[k])
                rhs = [u[pc] for pc in pivots]
                cols.append(_ball_solve(sub, rhs))
            mats.append([[cols[k][t] for k in range(n)] for t in range(n)])
        rep = ArchRepresentation(place, n, mats, precision_bits, None, a)
        residual = _residual_bound(A, rep, precision_bits)
        gate = Fraction(1, 1 << (precision_bits // 2))
        if residual >= gate:
            raise PrecisionError(
                f"multiplicativity residual {float(residual):.3g} above gate")
        rep.residual = residual
        return rep


def _select_root(roots, want_real):
    reals = [r for r in roots if r.is_real]
    if want_real:
        if not reals:
            raise PrecisionError("no certified real root for a real place")
        lam = max(reals, key=lambda r: r.center.re.mid)
    else:
        lam = max(roots, key=lambda r: (r.center.im.mid, r.center.re.mid))
    others = [r for r in roots if r is not lam]
    return lam, others


def _embed_coord(place, c: FieldElement, bits, complex_mode):
    v = place(c, bits)
    if complex_mode and not isinstance(v, CBall):
        v = CBall.from_ball(v)
    return v


def _synthetic_division(coeffs, lam):
    """f / (x - lam) for monic-ish f given by ball coeffs, ascending."""
    n = len(coeffs) - 1
    out = [None] * n
    carry = coeffs[n]
    for k in range(n - 1, -1, -1):
        out[k] = carry
        carry = coeffs[k] + lam * carry
    return out


def _horner(coeffs, x):
    acc = None
    for c in reversed(coeffs):
        acc = c if acc is None else acc * x + c
    return acc


def _mat_vec(mat, vec):
    out = []
    for row in mat:
        acc = None
        for a, b in zip(row, vec):
            t = a * b
            acc = t if acc is None else acc + t
        out.append(acc)
    return out


def _abs_mid(e):
    if isinstance(e, CBall):
        return e.re.mid * e.re.mid + e.im.mid * e.im.mid
    return e.mid * e.mid


def _to_float(e):
    if isinstance(e, CBall):
        return complex(float(e.re.mid), float(e.im.mid))
    return float(e.mid)


def _ball_row_reduce(rows, want_rank, precision_bits):
    """Pick `want_rank` rows and pivot columns spanning the numeric row space.

    Full-pivot Gaussian elimination on the float midpoints with pivot
    threshold 2^-(precision_bits/4) selects the rows/columns; the selection is
    only a heuristic, correctness comes from the certified ball solves done on
    the selected submatrix afterwards.  Raises PrecisionError when the
    numerical rank at the threshold is not exactly `want_rank`.
    """
    thresh = 2.0 ** (-(precision_bits // 4))
    nr = len(rows)
    nc = len(rows[0])
    work = [[_to_float(e) for e in row] for row in rows]
    free_rows = set(range(nr))
    free_cols = set(range(nc))
    sel_rows = []
    sel_cols = []
    for _ in range(want_rank):
        best, bi, bj = -1.0, None, None
        for i in free_rows:
            wi = work[i]
            for j in free_cols:
                v = abs(wi[j])
                if v > best:
                    best, bi, bj = v, i, j
        if best <= thresh:
            raise PrecisionError("ideal basis is ill-conditioned at this precision")
        sel_rows.append(bi)
        sel_cols.append(bj)
        free_rows.discard(bi)
        free_cols.discard(bj)
        pivrow = work[bi]
        for i in free_rows:
            f = work[i][bj] / pivrow[bj]
            if f:
                work[i] = [x - f * y for x, y in zip(work[i], pivrow)]
    leftover = max((abs(work[i][j]) for i in free_rows for j in range(nc)),
                   default=0.0)
    if leftover > thresh:
        raise PrecisionError("numeric rank above the expected ideal dimension")
    return [list(rows[i]) for i in sel_rows], sel_cols


def _ball_solve(mat, rhs):
    """Solve a small square ball system by Gaussian elimination (certified)."""
    n = len(mat)
    m = [list(row) + [rhs[i]] for i, row in enumerate(mat)]
    for c in range(n):
        sel = max(range(c, n), key=lambda i: _abs_mid(m[i][c]))
        m[c], m[sel] = m[sel], m[c]
        piv = m[c][c]
        bad = piv.abs_sq().contains_zero() if isinstance(piv, CBall) \
            else piv.contains_zero()
        if bad:
            raise PrecisionError("singular pivot in ball solve")
        for i in range(n):
            if i == c:
                continue
            f = m[i][c] / piv
            m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [m[i][-1] / m[i][i] for i in range(n)]


def _residual_bound(A, rep, precision_bits):
    """Max multiplicativity defect over all basis pairs plus unitality defect."""
    m = A.dim
    n = rep.n
    worst = Fraction(0)
    basis = A.basis()
    mats = [rep.apply(b) for b in basis]
    for i in range(m):
        for j in range(m):
            lhs = _ball_mat_mul_small(mats[i], mats[j])
            prod = basis[i] * basis[j]
            rhs = rep.apply(prod)
            for r in range(n):
                for c in range(n):
                    diff = lhs[r][c] - rhs[r][c]
                    worst = max(worst, _sup_abs(diff))
    one = rep.apply(A.identity)
    for r in range(n):
        for c in range(n):
            target = 1 if r == c else 0
            worst = max(worst, _sup_abs(one[r][c] - target))
    return worst


def _ball_mat_mul_small(a, b):
    n = len(a)
    return [[_sum([a[i][k] * b[k][j] for k in range(n)]) for j in range(n)]
            for i in range(n)]


def _sum(items):
    acc = None
    for x in items:
        acc = x if acc is None else acc + x
    return acc


def _sup_abs(e):
    if isinstance(e, CBall):
        return frac_sqrt_upper(e.abs_sq().upper())
    return e.abs_upper()


class LatticeEmbedding:
    """Phi: order coordinates -> R^m, real places flat, complex Re then Im."""

    def __init__(self, order, reps):
        self.order = order
        self.reps = list(reps)
        n = reps[0].n
        self.n = n
        self.m = sum(n * n if rep.is_real else 2 * n * n for rep in self.reps)
        if self.m != order.qdim:
            raise PrecisionError(
                f"interleaved dimension {self.m} != lattice rank {order.qdim}")
        self.rows = [self.phi(b) for b in order.basis_elements()]
        det = ball_mat_det(self.rows)
        if det.contains_zero():
            raise PrecisionError("Phi matrix not certified invertible")
        self.det = det

    def phi(self, x: AlgebraElement):
        out = []
        for rep in self.reps:
            mat = rep.apply(x)
            if rep.is_real:
                for row in mat:
                    out.extend(row)
            else:
                for row in mat:
                    out.extend(e.re for e in row)
                for row in mat:
                    out.extend(e.im for e in row)
        return out

    def place_norms_sq(self, x: AlgebraElement):
        return [rep.norm_sq(x) for rep in self.reps]

    def float_rows(self):
        return [[float(e.mid) for e in row] for row in self.rows]

    def norm_sq(self, x: AlgebraElement) -> Ball:
        acc = Ball.exact(0)
        for b in self.place_norms_sq(x):
            acc = acc + b
        return acc


def phi_interleave(order, reps) -> LatticeEmbedding:
    """Interleave per-place representations into the full real lattice map."""
    r_real = sum(1 for rep in reps if rep.is_real)
    r, s = order.algebra.field.signature
    if r_real != r or len(reps) - r_real != s:
        raise PrecisionError("need exactly r real and s complex representations")
    ordered = sorted(reps, key=lambda rep: rep.place.index)
    return LatticeEmbedding(order, ordered)
