"""Exact linear algebra over Q (and any exact field with Python arithmetic).

Scalars are `fractions.Fraction` for rational work; the generic routines only
assume entries support +, -, *, / and truth-testing, so they are reused
verbatim over number-field elements.  Determinants of rational/integer
matrices go through fraction-free Bareiss elimination, the characteristic
polynomial through a Hessenberg reduction; both are exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import DimensionError

ExactScalar = Fraction


def _as_rows(rows):
    return [list(r) for r in rows]


class Matrix:
    """Immutable-by-convention dense matrix with exact entries."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows):
        self.rows = _as_rows(rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise DimensionError("ragged rows")

    @classmethod
    def identity(cls, n, one=Fraction(1)):
        zero = one - one
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, r, c, zero=Fraction(0)):
        return cls([[zero] * c for _ in range(r)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __repr__(self):
        return f"Matrix({self.rows!r})"

    def transpose(self):
        return Matrix([[self.rows[i][j] for i in range(self.nrows)]
                       for j in range(self.ncols)])

    def __add__(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionError("matrix shapes differ")
        return Matrix([[a + b for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionError("matrix shapes differ")
        return Matrix([[a - b for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.rows, other.rows)])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionError("matrix shapes incompatible")
            bt = other.transpose().rows
            return Matrix([[_dot(ra, cb) for cb in bt] for ra in self.rows])
        return Matrix([[e * other for e in r] for r in self.rows])

    def apply(self, vec):
        """Matrix times column vector (a sequence), returns a list."""
        if len(vec) != self.ncols:
            raise DimensionError("vector length mismatch")
        return [_dot(r, vec) for r in self.rows]

    def column(self, j):
        return [r[j] for r in self.rows]

    def is_zero(self):
        return all(not e for r in self.rows for e in r)

    def rank(self):
        ech, piv = _echelon(self.rows)
        return len(piv)

    def det(self):
        if self.nrows != self.ncols:
            raise DimensionError("determinant of non-square matrix")
        if all(isinstance(e, (Fraction, int)) for r in self.rows for e in r):
            return _det_bareiss_rational(self.rows)
        return _det_generic(self.rows)

    def inverse(self):
        if self.nrows != self.ncols:
            raise DimensionError("inverse of non-square matrix")
        n = self.nrows
        zero = _zero_of(self.rows)
        pivot = next((e for r in self.rows for e in r if e), None)
        if pivot is None:
            raise DimensionError("matrix is singular")
        one = pivot / pivot
        work = [list(self.rows[i]) + [one if i == j else zero for j in range(n)]
                for i in range(n)]
        ech, piv = _echelon(work, reduce=True)
        if piv[:n] != list(range(n)):
            raise DimensionError("matrix is singular")
        return Matrix([row[n:] for row in ech[:n]])


def _dot(a, b):
    it = zip(a, b)
    x, y = next(it)
    acc = x * y
    for x, y in it:
        acc = acc + x * y
    return acc


def _zero_of(rows):
    e = rows[0][0]
    return e - e


def _echelon(rows, reduce=False):
    """Row echelon form by exact Gaussian elimination.

    Returns (rows, pivot_columns).  With reduce=True pivots are normalized to 1
    and cleared above as well (RREF).  Works over any exact field.
    """
    m = [list(r) for r in rows]
    if not m:
        return m, []
    nr, nc = len(m), len(m[0])
    piv = []
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        sel = None
        for i in range(r, nr):
            if m[i][c]:
                sel = i
                break
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        if reduce:
            pivval = m[r][c]
            m[r] = [e / pivval for e in m[r]]
            rng = range(nr)
        else:
            rng = range(r + 1, nr)
        for i in rng:
            if i == r or not m[i][c]:
                continue
            factor = m[i][c] if reduce else m[i][c] / m[r][c]
            m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        piv.append(c)
        r += 1
    return m, piv


def _det_generic(rows):
    m = [list(r) for r in rows]
    n = len(m)
    zero = _zero_of(m)
    det = None
    sign = 1
    for c in range(n):
        sel = None
        for i in range(c, n):
            if m[i][c]:
                sel = i
                break
        if sel is None:
            return zero
        if sel != c:
            m[c], m[sel] = m[sel], m[c]
            sign = -sign
        p = m[c][c]
        det = p if det is None else det * p
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / p
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    if sign < 0:
        det = zero - det
    return det


def _det_bareiss_rational(rows):
    """Bareiss fraction-free determinant; input entries Fraction or int."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    den = 1
    for r in rows:
        for e in r:
            if isinstance(e, Fraction):
                den = den * e.denominator // gcd(den, e.denominator)
    m = [[int(e * den) if isinstance(e, Fraction) else e * den for e in r]
         for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            sel = None
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    sel = i
                    break
            if sel is None:
                return Fraction(0)
            m[k], m[sel] = m[sel], m[k]
            sign = -sign
        pk = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (pk * row_i[j] - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pk
    return Fraction(sign * m[n - 1][n - 1], den ** n)


def solve_and_kernel(M: Matrix, rhs=None):
    """Solve M x = rhs exactly and describe the solution set.

    rhs may be None (kernel only), a vector, or a Matrix of column right-hand
    sides.  Returns (particular, kernel_basis) where particular is None when
    rhs is None or the system is inconsistent; kernel_basis is a list of
    linearly independent vectors spanning the null space of M.
    """
    vec_rhs = False
    cols = []
    if rhs is not None:
        if isinstance(rhs, Matrix):
            if rhs.nrows != M.nrows:
                raise DimensionError("rhs row count mismatch")
            cols = [rhs.column(j) for j in range(rhs.ncols)]
        else:
            rhs = list(rhs)
            if len(rhs) != M.nrows:
                raise DimensionError("rhs length mismatch")
            cols = [rhs]
            vec_rhs = True
    nc = M.ncols
    aug = [list(M.rows[i]) + [col[i] for col in cols] for i in range(M.nrows)]
    ech, piv = _echelon(aug, reduce=True)
    piv = [c for c in piv if c < nc]
    pivset = set(piv)
    zero = _zero_of(M.rows) if M.rows else Fraction(0)
    one_val = ech[0][piv[0]] if piv else zero + 1
    # kernel basis from free columns
    kernel = []
    for c in range(nc):
        if c in pivset:
            continue
        v = [zero] * nc
        v[c] = one_val
        for r, pc in enumerate(piv):
            v[pc] = zero - ech[r][c]
        kernel.append(v)
    particular = None
    if rhs is not None:
        sols = []
        consistent = True
        for k in range(len(cols)):
            col = nc + k
            # rows with all-zero coefficients must have zero rhs
            for r in range(len(piv), M.nrows):
                if ech[r][col]:
                    consistent = False
                    break
            if not consistent:
                break
            v = [zero] * nc
            for r, pc in enumerate(piv):
                v[pc] = ech[r][col]
            sols.append(v)
        if consistent:
            particular = sols[0] if vec_rhs else Matrix(
                [[sols[j][i] for j in range(len(sols))] for i in range(nc)])
    return particular, kernel


def hnf_and_det(rows):
    """Row-style Hermite normal form of an integer row lattice.

    Returns (basis, det): the canonical upper-triangular basis with positive
    pivots and off-pivot entries reduced into [0, pivot), and the lattice
    determinant (product of pivots) when the lattice has full rank in its
    ambient space, else None.  Rank-deficient input just yields fewer rows.
    """
    work = [list(map(int, r)) for r in rows if any(r)]
    if not work:
        return [], None
    nc = len(work[0])
    if any(len(r) != nc for r in work):
        raise DimensionError("ragged rows")
    basis = []
    col = 0
    rows_left = work
    for col in range(nc):
        carrier = [r for r in rows_left if r[col] != 0]
        rest = [r for r in rows_left if r[col] == 0]
        if not carrier:
            rows_left = rest
            continue
        # fold all rows with a nonzero in this column into one pivot row
        pivot_row = carrier[0]
        for r in carrier[1:]:
            pivot_row, r = _fold(pivot_row, r, col)
            if any(r):
                rest.append(r)
        if pivot_row[col] < 0:
            pivot_row = [-e for e in pivot_row]
        basis.append(pivot_row)
        rows_left = rest
    # reduce entries above each pivot
    for i in range(len(basis) - 1, -1, -1):
        pc = next(j for j, e in enumerate(basis[i]) if e != 0)
        p = basis[i][pc]
        for k in range(i):
            q = basis[k][pc] // p
            if q:
                basis[k] = [a - q * b for a, b in zip(basis[k], basis[i])]
    det = None
    if len(basis) == nc:
        # pivots sit on the diagonal exactly when rank == ncols
        det = 1
        for i, row in enumerate(basis):
            det *= row[i]
    return basis, det


def _fold(a, b, col):
    """Euclid on column `col` of two rows; returns (pivot_row, reduced_row)."""
    a = list(a)
    b = list(b)
    while b[col] != 0:
        q = a[col] // b[col]
        if q:
            a = [x - q * y for x, y in zip(a, b)]
        a, b = b, a
    return a, b


def hnf_image(rows):
    """HNF basis only (drop the determinant)."""
    basis, _ = hnf_and_det(rows)
    return basis


def integer_kernel(rows):
    """Basis of {v in Z^c : rows . v = 0} via a column-HNF transform."""
    if not rows:
        return []
    nr, nc = len(rows), len(rows[0])
    # operate on columns: track V with M V brought to column echelon
    m = [list(map(int, r)) for r in rows]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def colswap(j, k):
        for row in m:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    def coladd(j, k, q):
        # col_j -= q * col_k
        for row in m:
            row[j] -= q * row[k]
        for row in v:
            row[j] -= q * row[k]

    pivot_col = 0
    for r in range(nr):
        # euclid across columns pivot_col..nc-1 on row r
        while True:
            nonz = [j for j in range(pivot_col, nc) if m[r][j] != 0]
            if not nonz:
                break
            jmin = min(nonz, key=lambda j: abs(m[r][j]))
            colswap(pivot_col, jmin)
            done = True
            for j in range(pivot_col + 1, nc):
                if m[r][j] != 0:
                    q = m[r][j] // m[r][pivot_col]
                    coladd(j, pivot_col, q)
                    if m[r][j] != 0:
                        done = False
            if done:
                pivot_col += 1
                break
        if pivot_col >= nc:
            break
    kernel_cols = [j for j in range(nc)
                   if all(m[r][j] == 0 for r in range(nr))]
    return [[v[i][j] for i in range(nc)] for j in kernel_cols]


def min_char_poly(M: Matrix):
    """Minimal and characteristic polynomial of a rational square matrix.

    Returns (min_coeffs, char_coeffs), both monic with exact Fraction
    coefficients in ascending order (index = degree).
    """
    if M.nrows != M.ncols:
        raise DimensionError("square matrix required")
    n = M.nrows
    charpoly = _charpoly_hessenberg(M)
    # minimal polynomial: first linear dependence among I, M, M^2, ...
    power = Matrix.identity(n)
    flat = [[Fraction(e) for r in power.rows for e in r]]
    for _ in range(n):
        power = power * M
        flat.append([Fraction(e) for r in power.rows for e in r])
        # solve: last power = combination of previous ones
        cols = Matrix([[flat[j][i] for j in range(len(flat) - 1)]
                       for i in range(n * n)])
        sol, _ = solve_and_kernel(cols, flat[-1])
        if sol is not None:
            k = len(flat) - 1
            coeffs = [-c for c in sol] + [Fraction(1)]
            return coeffs, charpoly
    raise AssertionError("no annihilating polynomial up to dimension")


def _charpoly_hessenberg(M: Matrix):
    """det(xI - M) for rational M via Hessenberg reduction, ascending coeffs."""
    n = M.nrows
    h = [[Fraction(e) for e in row] for row in M.rows]
    for c in range(n - 2):
        # need nonzero subdiagonal pivot h[c+1][c]
        if not h[c + 1][c]:
            sel = None
            for i in range(c + 2, n):
                if h[i][c]:
                    sel = i
                    break
            if sel is None:
                continue
            h[c + 1], h[sel] = h[sel], h[c + 1]
            for row in h:
                row[c + 1], row[sel] = row[sel], row[c + 1]
        p = h[c + 1][c]
        for i in range(c + 2, n):
            if h[i][c]:
                f = h[i][c] / p
                h[i] = [a - f * b for a, b in zip(h[i], h[c + 1])]
                for row in h:
                    row[c + 1] = row[c + 1] + f * row[i]
    # recurrence on leading principal minors of xI - H
    polys = [[Fraction(1)]]  # p_0 = 1
    for k in range(1, n + 1):
        # p_k = (x - h[k-1][k-1]) p_{k-1} - sum_j (prod subdiag) h[j][k-1] p_j
        term = _poly_mul([-h[k - 1][k - 1], Fraction(1)], polys[k - 1])
        run = Fraction(1)
        for j in range(k - 1, 0, -1):
            run *= h[j][j - 1]
            coeff = run * h[j - 1][k - 1]
            if coeff:
                term = _poly_sub(term, _poly_scale(polys[j - 1], coeff))
        polys.append(term)
    p = polys[n]
    return p + [Fraction(0)] * (n + 1 - len(p))


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _poly_scale(a, c):
    return [x * c for x in a]


def poly_eval_matrix(coeffs, M: Matrix):
    """Evaluate a polynomial (ascending coeffs) at a square matrix."""
    n = M.nrows
    acc = Matrix.zero(n, n)
    for c in reversed(coeffs):
        acc = acc * M + Matrix.identity(n) * Fraction(c)
    return acc
