"""Number fields K = Q(alpha) with a fixed integral basis.

Supported descriptors: the rationals, quadratic fields Q(sqrt(D)) with the
closed-form integral basis, and general fields where the caller supplies the
minimal polynomial, an integral basis and the discriminant (all validated).
Field elements carry exact rational coordinates over the integral basis;
archimedean embeddings return certified balls and are refinable to any
precision.
"""

from __future__ import annotations

from fractions import Fraction

from . import polys
from .balls import Ball, CBall, RootEnclosure, certify_roots, working_precision
from .errors import InputError, PrecisionError
from .exact import Matrix
from .factor import is_squarefree


class FieldElement:
    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != field.degree:
            raise InputError("coordinate length must equal the field degree")
        self.field = field
        self.coords = coords

    def __repr__(self):
        return f"FieldElement({self.coords})"

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        return isinstance(other, FieldElement) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, [a - b for a, b in zip(self.coords, o.coords)])

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a * other for a in self.coords])
        if not isinstance(other, FieldElement):
            return NotImplemented
        table = self.field.omega_table
        d = self.field.degree
        out = [Fraction(0)] * d
        for i, xi in enumerate(self.coords):
            if not xi:
                continue
            row = table[i]
            for j, yj in enumerate(other.coords):
                if not yj:
                    continue
                cij = row[j]
                f = xi * yj
                for k in range(d):
                    if cij[k]:
                        out[k] += f * cij[k]
        return FieldElement(self.field, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.inverse() * self

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        acc = self.field.one()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def inverse(self):
        if not self:
            raise ZeroDivisionError("field element is zero")
        sol, _ = _solve(self.mul_matrix(), self.field.one().coords)
        return FieldElement(self.field, sol)

    def mul_matrix(self) -> Matrix:
        """Matrix of y -> self*y on the integral basis (columns = self*omega_j)."""
        d = self.field.degree
        cols = []
        for j in range(d):
            col = [Fraction(0)] * d
            for i, xi in enumerate(self.coords):
                if not xi:
                    continue
                cij = self.field.omega_table[i][j]
                for k in range(d):
                    if cij[k]:
                        col[k] += xi * cij[k]
            cols.append(col)
        return Matrix([[cols[j][k] for j in range(d)] for k in range(d)])

    def norm(self) -> Fraction:
        return self.mul_matrix().det()

    def trace(self) -> Fraction:
        m = self.mul_matrix()
        t = Fraction(0)
        for i in range(m.nrows):
            t += m[i, i]
        return t

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def power_coords(self):
        """Coordinates over the power basis 1, alpha, ..., alpha^(d-1)."""
        basis = self.field.integral_basis
        d = self.field.degree
        out = [Fraction(0)] * d
        for i, xi in enumerate(self.coords):
            if not xi:
                continue
            for k in range(d):
                out[k] += xi * basis[i][k]
        return out


def _solve(M, rhs):
    from .exact import solve_and_kernel
    sol, ker = solve_and_kernel(M, rhs)
    if sol is None:
        raise ZeroDivisionError("singular multiplication matrix")
    return sol, ker


class Embedding:
    """One archimedean place: a real embedding or a conjugate-pair representative."""

    __slots__ = ("field", "index", "is_real", "_position")

    def __init__(self, field, index, is_real, position):
        self.field = field
        self.index = index
        self.is_real = is_real
        self._position = position

    def __repr__(self):
        kind = "real" if self.is_real else "complex"
        return f"Embedding(#{self.index}, {kind})"

    def alpha(self, precision_bits):
        """Certified enclosure of the image of the field generator."""
        return self.field._root_enclosure(self._position, precision_bits)

    def __call__(self, x: FieldElement, precision_bits):
        """Certified value of this embedding at x: Ball if real, else CBall."""
        if self.field.is_rationals:
            b = Ball.exact(x.coords[0])
            return b if self.is_real else CBall.from_ball(b)
        with working_precision(precision_bits):
            pc = x.power_coords()
            if self.is_real:
                a = self.alpha(precision_bits).real_interval()
                acc = Ball.exact(0)
                for c in reversed(pc):
                    acc = acc * a + Ball.exact(c)
                return acc
            a = self.alpha(precision_bits).as_cball()
            acc = CBall(Ball.exact(0))
            for c in reversed(pc):
                acc = acc * a + CBall(Ball.exact(c))
            return acc


class NumberField:
    def __init__(self, min_poly, integral_basis, disc, signature, is_rationals=False):
        self.min_poly = [int(c) for c in min_poly]
        self.degree = len(self.min_poly) - 1
        self.integral_basis = [tuple(Fraction(c) for c in row) for row in integral_basis]
        self.disc = int(disc)
        self.signature = signature
        self.is_rationals = is_rationals
        self._basis_matrix = Matrix([list(r) for r in self.integral_basis])
        self._power_to_integral = self._basis_matrix.transpose().inverse()
        self.omega_table = self._build_omega_table()
        self._one = self._find_one()
        self._root_cache: dict[int, list[RootEnclosure]] = {}
        self._base_roots: list[RootEnclosure] | None = None

    # -- construction helpers -------------------------------------------------

    def _build_omega_table(self):
        d = self.degree
        f = [Fraction(c) for c in self.min_poly]
        table = []
        for i in range(d):
            row = []
            for j in range(d):
                prod = polys.mul(list(self.integral_basis[i]), list(self.integral_basis[j]))
                prod = polys.rem(prod, f)
                prod = prod + [Fraction(0)] * (d - len(prod))
                coords = self._power_to_integral.apply(prod[:d])
                if any(c.denominator != 1 for c in coords):
                    raise InputError(
                        "integral basis is not multiplicatively closed over Z")
                row.append(tuple(Fraction(c) for c in coords))
            table.append(row)
        return table

    def _find_one(self):
        one_power = [Fraction(1)] + [Fraction(0)] * (self.degree - 1)
        coords = self._power_to_integral.apply(one_power)
        if any(c.denominator != 1 for c in coords):
            raise InputError("1 is not in the Z-span of the integral basis")
        return FieldElement(self, coords)

    # -- element constructors --------------------------------------------------

    def element(self, coords) -> FieldElement:
        return FieldElement(self, coords)

    def from_rational(self, q) -> FieldElement:
        q = Fraction(q)
        return FieldElement(self, [c * q for c in self._one.coords])

    def one(self) -> FieldElement:
        return self._one

    def zero(self) -> FieldElement:
        return FieldElement(self, [Fraction(0)] * self.degree)

    def gen(self) -> FieldElement:
        """alpha as a field element (integral coordinates)."""
        power = [Fraction(0)] * self.degree
        if self.degree == 1:
            power[0] = Fraction(1)
        else:
            power[1] = Fraction(1)
        coords = self._power_to_integral.apply(power)
        return FieldElement(self, coords)

    def __repr__(self):
        if self.is_rationals:
            return "NumberField(Q)"
        return f"NumberField(deg={self.degree}, disc={self.disc})"

    def __eq__(self, other):
        return (isinstance(other, NumberField)
                and self.min_poly == other.min_poly
                and self.integral_basis == other.integral_basis)

    # -- embeddings -------------------------------------------------------------

    def embeddings(self, precision_bits=128):
        r, s = self.signature
        if self.is_rationals:
            return [Embedding(self, 0, True, 0)]
        self._ensure_roots(precision_bits)
        out = []
        for pos in range(r + s):
            out.append(Embedding(self, pos, pos < r, pos))
        return out

    def _ensure_roots(self, bits):
        if self._base_roots is None:
            self._base_roots = self._certified_roots(bits)
            self._root_cache[bits] = self._base_roots
        elif bits not in self._root_cache:
            fresh = self._certified_roots(bits)
            matched = _match_roots(self._base_roots, fresh)
            self._root_cache[bits] = matched

    def _certified_roots(self, bits):
        with working_precision(bits):
            coeffs = [CBall(Ball.exact(Fraction(c))) for c in self.min_poly]
            roots = certify_roots(coeffs)
        reals = [e for e in roots if e.is_real]
        reals.sort(key=lambda e: e.center.re.mid)
        complexes = [e for e in roots if not e.is_real and e.center.im.mid > 0]
        complexes.sort(key=lambda e: (e.center.re.mid, e.center.im.mid))
        r, s = self.signature
        if len(reals) != r or len(complexes) != s:
            raise PrecisionError("root classification disagrees with the signature")
        return reals + complexes

    def _root_enclosure(self, position, bits):
        self._ensure_roots(bits)
        return self._root_cache[bits][position]

    # -- invariants -------------------------------------------------------------

    def norm_trace(self, x: FieldElement):
        return x.norm(), x.trace()


def _match_roots(base, fresh):
    """Reorder `fresh` enclosures to follow the base-list positions."""
    out = []
    for e in base:
        cands = []
        for f in fresh:
            dx = e.center.re.mid - f.center.re.mid
            dy = e.center.im.mid - f.center.im.mid
            if dx * dx + dy * dy <= (e.radius + f.radius) ** 2:
                cands.append(f)
        if len(cands) != 1:
            raise PrecisionError("refined roots could not be matched")
        out.append(cands[0])
    return out


# -- public constructors --------------------------------------------------------


def rationals() -> NumberField:
    return NumberField([-1, 1], [[Fraction(1)]], 1, (1, 0), is_rationals=True)


def quadratic(D: int) -> NumberField:
    D = int(D)
    if D in (0, 1):
        raise InputError("quadratic descriptor needs D != 0, 1")
    if not is_squarefree(D):
        raise InputError(f"D = {D} is not squarefree")
    min_poly = [-D, 0, 1]
    if D % 4 == 1:
        basis = [[Fraction(1), Fraction(0)], [Fraction(1, 2), Fraction(1, 2)]]
        disc = D
    else:
        basis = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
        disc = 4 * D
    signature = (2, 0) if D > 0 else (0, 1)
    return NumberField(min_poly, basis, disc, signature)


def general(min_poly, integral_basis, disc) -> NumberField:
    min_poly = [int(c) for c in min_poly]
    if not min_poly or min_poly[-1] != 1:
        raise InputError("minimal polynomial must be monic with integer coefficients")
    d = len(min_poly) - 1
    if d < 1:
        raise InputError("minimal polynomial must be non-constant")
    if not _is_irreducible(min_poly):
        raise InputError("minimal polynomial is reducible over Q")
    if len(integral_basis) != d or any(len(r) != d for r in integral_basis):
        raise InputError("integral basis must be d vectors of length d")
    r = polys.count_real_roots([Fraction(c) for c in min_poly])
    signature = (r, (d - r) // 2)
    field = NumberField(min_poly, integral_basis, disc, signature)
    gram = Matrix([[ (field.element(_unit(d, i)) * field.element(_unit(d, j))).trace()
                     for j in range(d)] for i in range(d)])
    if gram.det() != disc:
        raise InputError("supplied discriminant does not match the integral basis")
    return field


def _unit(d, i):
    v = [Fraction(0)] * d
    v[i] = Fraction(1)
    return v


def _is_irreducible(min_poly) -> bool:
    import sympy

    x = sympy.Symbol("x")
    expr = sum(int(c) * x ** i for i, c in enumerate(min_poly))
    return sympy.Poly(expr, x).is_irreducible


def make_number_field(descriptor) -> NumberField:
    """Build a field from a descriptor dict (the instance-file schema)."""
    if isinstance(descriptor, NumberField):
        return descriptor
    kind = descriptor.get("type")
    if kind == "rationals":
        return rationals()
    if kind == "quadratic":
        return quadratic(int(descriptor["D"]))
    if kind == "general":
        basis = [[Fraction(c) for c in row] for row in descriptor["integral_basis"]]
        return general(descriptor["min_poly"], basis, int(descriptor["discriminant"]))
    raise InputError(f"unknown field descriptor type {kind!r}")


def archimedean_embeddings(K: NumberField, precision_bits=128):
    if precision_bits < 16:
        raise InputError("precision_bits must be at least 16")
    return K.embeddings(precision_bits)


def norm_trace(K: NumberField, x: FieldElement):
    """Exact field norm and trace of x via its multiplication matrix."""
    return K.norm_trace(x)
