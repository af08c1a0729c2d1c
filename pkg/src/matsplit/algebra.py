"""Structure-constant algebras over a number field K.

An algebra is given by an m x m x m table gamma with a_i a_j =
sum_k gamma[i][j][k] a_k.  Construction verifies associativity on all basis
triples and solves for the two-sided identity; nothing about the input is
trusted.  Element rank, zero-divisor tests and corner algebras are all exact
K-linear algebra -- numerics never decide anything here.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DimensionError, InputError, StructuralError
from .exact import Matrix, solve_and_kernel
from .numfield import FieldElement, NumberField


class AlgebraElement:
    __slots__ = ("algebra", "coords")

    def __init__(self, algebra, coords):
        coords = tuple(_coerce_field(algebra.field, c) for c in coords)
        if len(coords) != algebra.dim:
            raise DimensionError("coordinate length must equal the algebra dimension")
        self.algebra = algebra
        self.coords = coords

    def __repr__(self):
        return f"AlgebraElement({[c.coords for c in self.coords]})"

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement)
                and self.algebra is other.algebra
                and self.coords == other.coords)

    def __hash__(self):
        return hash(tuple(c.coords for c in self.coords))

    def __bool__(self):
        return any(self.coords)

    def __add__(self, other):
        return AlgebraElement(self.algebra,
                              [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        return AlgebraElement(self.algebra,
                              [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return AlgebraElement(self.algebra, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            return AlgebraElement(self.algebra, [a * other for a in self.coords])
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra.multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            return AlgebraElement(self.algebra, [a * other for a in self.coords])
        return NotImplemented

    def __pow__(self, k):
        acc = self.algebra.identity
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def is_zero(self):
        return not self


def _coerce_field(K, c):
    if isinstance(c, FieldElement):
        return c
    if isinstance(c, (int, Fraction)):
        return K.from_rational(c)
    return K.element(c)


class StructureAlgebra:
    """Associative unital algebra over K given by structure constants."""

    def __init__(self, field: NumberField, table, check_associativity=True):
        self.field = field
        self.dim = len(table)
        self.table = self._normalize_table(table)
        if check_associativity:
            self._check_associativity()
        n = _integer_sqrt(self.dim)
        self.n = n  # None when dim is not a perfect square
        self.identity = self._find_identity()
        self._q_table = None
        self._q_trace_vec = None

    # -- table plumbing ---------------------------------------------------------

    def _normalize_table(self, table):
        m = self.dim
        K = self.field
        out = []
        for i in range(m):
            if len(table[i]) != m:
                raise InputError("structure-constant table must be m x m x m")
            row = []
            for j in range(m):
                entry = table[i][j]
                if len(entry) != m:
                    raise InputError("structure-constant table must be m x m x m")
                row.append(tuple(_coerce_field(K, c) for c in entry))
            out.append(row)
        return out

    def basis_element(self, i) -> AlgebraElement:
        coords = [self.field.zero()] * self.dim
        coords[i] = self.field.one()
        return AlgebraElement(self, coords)

    def basis(self):
        return [self.basis_element(i) for i in range(self.dim)]

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, [self.field.zero()] * self.dim)

    def element(self, coords) -> AlgebraElement:
        return AlgebraElement(self, coords)

    def multiply(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        m = self.dim
        zero = self.field.zero()
        out = [zero] * m
        table = self.table
        for i, xi in enumerate(x.coords):
            if not xi:
                continue
            ti = table[i]
            for j, yj in enumerate(y.coords):
                if not yj:
                    continue
                f = xi * yj
                tij = ti[j]
                for k in range(m):
                    if tij[k]:
                        out[k] = out[k] + f * tij[k]
        return AlgebraElement(self, out)

    def _check_associativity(self):
        m = self.dim
        basis = self.basis()
        for i in range(m):
            for j in range(m):
                left = basis[i] * basis[j]
                for k in range(m):
                    lhs = left * basis[k]
                    rhs = basis[i] * (basis[j] * basis[k])
                    if lhs.coords != rhs.coords:
                        raise InputError(
                            f"associativity fails on basis triple ({i}, {j}, {k})")

    def _find_identity(self) -> AlgebraElement:
        # x with a_j x = a_j and x a_j = a_j for all j: stack both systems.
        m = self.dim
        K = self.field
        rows = []
        rhs = []
        zero, one = K.zero(), K.one()
        for j in range(m):
            for k in range(m):
                # sum_i x_i gamma[j][i][k] = delta_jk   (right identity)
                rows.append([self.table[j][i][k] for i in range(m)])
                rhs.append(one if j == k else zero)
                # sum_i x_i gamma[i][j][k] = delta_jk   (left identity)
                rows.append([self.table[i][j][k] for i in range(m)])
                rhs.append(one if j == k else zero)
        sol, _ = solve_and_kernel(Matrix(rows), rhs)
        if sol is None:
            raise InputError("algebra has no two-sided identity")
        return AlgebraElement(self, sol)

    # -- regular representations -------------------------------------------------

    def left_regular_matrix(self, y: AlgebraElement) -> Matrix:
        """Matrix of a -> y*a over K (column j = coordinates of y*a_j)."""
        m = self.dim
        zero = self.field.zero()
        cols = []
        for j in range(m):
            col = [zero] * m
            for i, yi in enumerate(y.coords):
                if not yi:
                    continue
                tij = self.table[i][j]
                for k in range(m):
                    if tij[k]:
                        col[k] = col[k] + yi * tij[k]
            cols.append(col)
        return Matrix([[cols[j][k] for j in range(m)] for k in range(m)])

    def right_regular_matrix(self, y: AlgebraElement) -> Matrix:
        """Matrix of a -> a*y over K (column j = coordinates of a_j*y)."""
        m = self.dim
        zero = self.field.zero()
        cols = []
        for j in range(m):
            col = [zero] * m
            for i, yi in enumerate(y.coords):
                if not yi:
                    continue
                tji = self.table[j][i]
                for k in range(m):
                    if tji[k]:
                        col[k] = col[k] + yi * tji[k]
            cols.append(col)
        return Matrix([[cols[j][k] for j in range(m)] for k in range(m)])

    # -- restriction of scalars to Q ----------------------------------------------

    @property
    def q_dim(self):
        return self.dim * self.field.degree

    def q_index(self, i, j):
        """Flat index of omega_j * a_i in the Q-basis."""
        return i * self.field.degree + j

    def q_table(self):
        """Structure constants of the restriction of scalars, cached.

        Q-basis element (i, j) is omega_j * a_i; returns a flat table
        T[p][q] = list of Fractions of length q_dim.
        """
        if self._q_table is not None:
            return self._q_table
        m, d = self.dim, self.field.degree
        N = m * d
        omega = self.field.omega_table
        table = self.table
        omega_elems = [self.field.element(_unit_vec(d, u)) for u in range(d)]
        # cache omega_u * g for every structure constant g
        prod_cache = {}

        def omega_times(u, g):
            key = (u, g.coords)
            hit = prod_cache.get(key)
            if hit is None:
                hit = (omega_elems[u] * g).coords
                prod_cache[key] = hit
            return hit

        qt = [[None] * N for _ in range(N)]
        for i in range(m):
            for j in range(d):
                p = i * d + j
                for k in range(m):
                    gam = table[i][k]
                    for l in range(d):
                        q = k * d + l
                        out = [Fraction(0)] * N
                        # (omega_j a_i)(omega_l a_k) = (omega_j omega_l)(a_i a_k)
                        ww = omega[j][l]
                        for t in range(m):
                            g = gam[t]
                            if not g:
                                continue
                            base = t * d
                            for u in range(d):
                                c = ww[u]
                                if not c:
                                    continue
                                for v, gc in enumerate(omega_times(u, g)):
                                    if gc:
                                        out[base + v] += c * gc
                        qt[p][q] = out
        self._q_table = qt
        return qt

    def q_coords(self, x: AlgebraElement):
        """Flatten an element to rational coordinates over the Q-basis."""
        out = []
        for c in x.coords:
            out.extend(c.coords)
        return out

    def from_q_coords(self, vec) -> AlgebraElement:
        d = self.field.degree
        coords = []
        for i in range(self.dim):
            coords.append(self.field.element(vec[i * d:(i + 1) * d]))
        return AlgebraElement(self, coords)

    def q_trace(self, x: AlgebraElement) -> Fraction:
        """Regular trace of A viewed as a Q-algebra (restriction of scalars)."""
        if self._q_trace_vec is None:
            qt = self.q_table()
            N = self.q_dim
            vec = []
            for q in range(N):
                t = Fraction(0)
                for p in range(N):
                    t += qt[q][p][p]
                vec.append(t)
            self._q_trace_vec = vec
        xc = self.q_coords(x)
        return sum((c * t for c, t in zip(xc, self._q_trace_vec)), Fraction(0))


def _unit_vec(d, u):
    v = [Fraction(0)] * d
    v[u] = Fraction(1)
    return v


def _integer_sqrt(m):
    import math
    n = math.isqrt(m)
    return n if n * n == m else None


def make_algebra(K: NumberField, table, check_associativity=True) -> StructureAlgebra:
    return StructureAlgebra(K, table, check_associativity=check_associativity)


def require_square_dimension(A: StructureAlgebra) -> int:
    if A.n is None:
        raise StructuralError(
            f"dimension {A.dim} is not a perfect square; not a full matrix algebra")
    return A.n


def rank_of_element(A: StructureAlgebra, y: AlgebraElement) -> int:
    """Matrix rank of y under any isomorphism A = M_n(K): dim_K(A y) / n."""
    n = require_square_dimension(A)
    r = A.right_regular_matrix(y).rank()
    if r % n:
        raise StructuralError(
            f"dim(A*y) = {r} is not divisible by n = {n}; A is not M_n(K)")
    return r // n


def is_zero_divisor(A: StructureAlgebra, y: AlgebraElement) -> bool:
    if not y:
        return False
    return A.right_regular_matrix(y).rank() < A.dim


def is_nilpotent(A: StructureAlgebra, y: AlgebraElement) -> bool:
    """Exact nilpotency test: y^dim == 0."""
    return not (y ** A.dim)


def left_ideal_basis(A: StructureAlgebra, y: AlgebraElement):
    """Exact basis of A*y as a list of AlgebraElements (column reduction)."""
    from .exact import _echelon
    rows = [list((A.basis_element(i) * y).coords) for i in range(A.dim)]
    ech, piv = _echelon(rows)
    out = []
    for r in range(len(piv)):
        out.append(AlgebraElement(A, ech[r]))
    return out


def right_identity_of_left_ideal(A: StructureAlgebra, y: AlgebraElement) -> AlgebraElement:
    """The right identity e of A*y: z*e = z for all z in A*y; e is idempotent."""
    if not y:
        raise InputError("y must be nonzero")
    basis = left_ideal_basis(A, y)
    t = len(basis)
    K = A.field
    # e = sum_s c_s w_s with w_r * e = w_r for every generator w_r
    rows = []
    rhs = []
    for w in basis:
        prods = [w * ws for ws in basis]
        for k in range(A.dim):
            rows.append([prods[s].coords[k] for s in range(t)])
            rhs.append(w.coords[k])
    sol, _ = solve_and_kernel(Matrix(rows), rhs)
    if sol is None:
        raise StructuralError("left ideal has no right identity; A is not M_n(K)")
    e = A.zero()
    for c, w in zip(sol, basis):
        e = e + w * c
    if (e * e).coords != e.coords:
        raise StructuralError("computed right identity is not idempotent")
    return e


class CornerAlgebra:
    """e A e with exact inclusion/projection maps."""

    def __init__(self, parent, e, corner, basis_elements):
        self.parent = parent
        self.e = e
        self.algebra = corner
        self._basis_elements = basis_elements  # elements of the parent

    def include(self, x: AlgebraElement) -> AlgebraElement:
        """Corner coordinates -> parent element."""
        acc = self.parent.zero()
        for c, w in zip(x.coords, self._basis_elements):
            acc = acc + w * c
        return acc

    def project(self, x: AlgebraElement) -> AlgebraElement:
        """Parent element -> corner coordinates of e*x*e."""
        exe = self.e * x * self.e
        rows = [list(w.coords) for w in self._basis_elements]
        sol, _ = solve_and_kernel(Matrix(rows).transpose(), list(exe.coords))
        if sol is None:
            raise StructuralError("element does not project into the corner")
        return AlgebraElement(self.algebra, sol)


def corner_algebra(A: StructureAlgebra, e: AlgebraElement) -> CornerAlgebra:
    """Build B = eAe for an idempotent e, with structure constants over K."""
    if not e:
        raise InputError("idempotent must be nonzero")
    if (e * e).coords != e.coords:
        raise InputError("e is not idempotent")
    from .exact import _echelon
    rows = [list((e * A.basis_element(i) * e).coords) for i in range(A.dim)]
    ech, piv = _echelon(rows)
    basis_elements = [AlgebraElement(A, ech[r]) for r in range(len(piv))]
    t = len(basis_elements)
    coord_matrix = Matrix([list(w.coords) for w in basis_elements]).transpose()
    table = []
    for wi in basis_elements:
        row = []
        for wj in basis_elements:
            prod = wi * wj
            sol, _ = solve_and_kernel(coord_matrix, list(prod.coords))
            if sol is None:
                raise StructuralError("corner product escaped the corner span")
            row.append([c for c in sol])
        table.append(row)
    corner = StructureAlgebra(A.field, table, check_associativity=False)
    holder = CornerAlgebra(A, e, corner, basis_elements)
    # identity of the corner must be e itself
    if holder.include(corner.identity).coords != e.coords:
        raise StructuralError("corner identity is not e")
    return holder
