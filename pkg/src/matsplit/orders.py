"""Orders in A: unital full-rank lattices, discriminants, maximal orders.

Orders are stored as a Hermite-normal-form basis over a common denominator in
the flattened Q-coordinates of A (restriction of scalars), so everything is
plain integer lattice arithmetic.  Maximality: for each prime p with p^2
dividing the discriminant, enlarge via left/right idealizers of the radical
ideal of Lambda/p*Lambda until stable, then via idealizers of the maximal
two-sided ideals above p (the radical loop alone stalls on hereditary
non-maximal orders).  The radical mod p is the iterated integer-trace kernel:

    I_0 = Lambda/p,   I_{k+1} = {x in I_k : Tr((x y)^{p^k}) = 0 mod p^{k+1}
                                  for all y in I_k},

levels k = 0..floor(log_p N); the plain trace kernel is only level 0 and is
wrong alone in small characteristic.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd

from .algebra import AlgebraElement, StructureAlgebra
from .errors import InputError, StructuralError
from .exact import Matrix, hnf_and_det, integer_kernel
from .factor import factorize, is_probable_prime


class Order:
    """Full-rank unital lattice in A, closed under multiplication."""

    def __init__(self, algebra: StructureAlgebra, den: int, hnf_rows, _trusted=False):
        self.algebra = algebra
        g = den
        for row in hnf_rows:
            for e in row:
                g = gcd(g, e)
        self.den = den // g
        self.hnf = [[e // g for e in row] for row in hnf_rows]
        self.qdim = algebra.q_dim
        if len(self.hnf) != self.qdim:
            raise StructuralError("order basis does not have full rank")
        self._basis_elements = None
        self._mult_table = None
        self._trace_vec = None
        self._gram = None
        self._disc = None
        if not _trusted:
            self.validate()

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_generators(cls, algebra, rational_rows, _trusted=False):
        """Z-span of rational coordinate rows; must have full rank."""
        den = 1
        for row in rational_rows:
            for e in row:
                e = Fraction(e)
                den = den * e.denominator // gcd(den, e.denominator)
        int_rows = [[int(Fraction(e) * den) for e in row] for row in rational_rows]
        basis, _ = hnf_and_det(int_rows)
        return cls(algebra, den, basis, _trusted=_trusted)

    def basis_elements(self):
        if self._basis_elements is None:
            self._basis_elements = [
                self.algebra.from_q_coords([Fraction(e, self.den) for e in row])
                for row in self.hnf]
        return self._basis_elements

    # -- membership and coordinates -------------------------------------------

    def coords_of(self, qvec):
        """Exact coordinates over the order basis of a rational q-vector."""
        n = self.qdim
        v = [Fraction(e) * self.den for e in qvec]
        out = [Fraction(0)] * n
        piv = self._pivots()
        # rows are upper triangular: row idx only touches columns >= piv[idx]
        for idx in range(n):
            c = piv[idx]
            coef = v[c] / self.hnf[idx][c]
            out[idx] = coef
            if coef:
                row = self.hnf[idx]
                for j in range(c, n):
                    if row[j]:
                        v[j] -= coef * row[j]
        if any(v):
            raise StructuralError("vector outside the ambient span")
        return out

    def _pivots(self):
        piv = []
        for row in self.hnf:
            piv.append(next(j for j, e in enumerate(row) if e))
        return piv

    def contains_qvec(self, qvec) -> bool:
        try:
            coords = self.coords_of(qvec)
        except StructuralError:
            return False
        return all(c.denominator == 1 for c in coords)

    def contains_order(self, other) -> bool:
        return all(self.contains_qvec([Fraction(e, other.den) for e in row])
                   for row in other.hnf)

    def index_in(self, larger) -> int:
        """[larger : self] for self a sublattice of larger."""
        det_self = _diag_product(self.hnf) * Fraction(larger.den, self.den) ** self.qdim
        det_larger = _diag_product(larger.hnf)
        idx = Fraction(det_self, det_larger)
        if idx.denominator != 1:
            raise StructuralError("not a sublattice")
        return int(idx)

    def same_lattice(self, other) -> bool:
        a = [Fraction(e, self.den) for row in self.hnf for e in row]
        b = [Fraction(e, other.den) for row in other.hnf for e in row]
        return a == b

    # -- ring structure ----------------------------------------------------------

    def mult_table(self):
        """T[i][j] = integer coordinates of b_i*b_j over the order basis."""
        if self._mult_table is None:
            basis = self.basis_elements()
            table = []
            for bi in basis:
                row = []
                for bj in basis:
                    coords = self.coords_of(self.algebra.q_coords(bi * bj))
                    if any(c.denominator != 1 for c in coords):
                        raise StructuralError("order is not closed under multiplication")
                    row.append([int(c) for c in coords])
                table.append(row)
            self._mult_table = table
        return self._mult_table

    def validate(self):
        """Order axioms: contains 1, closed under multiplication, full rank."""
        one = self.algebra.q_coords(self.algebra.identity)
        if not self.contains_qvec(one):
            raise StructuralError("order does not contain the identity")
        self.mult_table()

    def trace_vector(self):
        if self._trace_vec is None:
            A = self.algebra
            self._trace_vec = [A.q_trace(b) for b in self.basis_elements()]
        return self._trace_vec

    def gram(self):
        """Integer Gram matrix of the regular trace form on the order basis."""
        if self._gram is None:
            T = self.mult_table()
            tr = self.trace_vector()
            n = self.qdim
            g = []
            for i in range(n):
                row = []
                for j in range(n):
                    val = sum((Fraction(c) * t for c, t in zip(T[i][j], tr)),
                              Fraction(0))
                    if val.denominator != 1:
                        raise StructuralError("regular trace is not integral")
                    row.append(int(val))
                g.append(row)
            self._gram = g
        return self._gram

    def discriminant(self) -> int:
        if self._disc is None:
            det = Matrix([[Fraction(e) for e in row] for row in self.gram()]).det()
            assert det.denominator == 1
            self._disc = int(det)
        return self._disc

    def __repr__(self):
        return f"Order(den={self.den}, qdim={self.qdim})"


def _diag_product(hnf_rows):
    out = 1
    for i, row in enumerate(hnf_rows):
        out *= row[i]
    return out


def initial_order(A: StructureAlgebra) -> Order:
    """Scale the basis to clear structure-constant denominators; adjoin R*1."""
    qt = A.q_table()
    N = A.q_dim
    c = 1
    for p in range(N):
        for q in range(N):
            for e in qt[p][q]:
                c = c * e.denominator // gcd(c, e.denominator)
    d = A.field.degree
    rows = []
    for j in range(d):
        omega_one = A.identity * A.field.element(_unit(d, j))
        rows.append(A.q_coords(omega_one))
    for i in range(N):
        row = [Fraction(0)] * N
        row[i] = Fraction(c)
        rows.append(row)
    return Order.from_generators(A, rows)


def _unit(d, j):
    v = [Fraction(0)] * d
    v[j] = Fraction(1)
    return v


# -- F_p linear algebra -------------------------------------------------------


def _modp_echelon(rows, p):
    """Row echelon over F_p; returns (rows, pivot_cols)."""
    m = [[e % p for e in row] for row in rows]
    if not m:
        return m, []
    nr, nc = len(m), len(m[0])
    piv = []
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        sel = next((i for i in range(r, nr) if m[i][c]), None)
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = pow(m[r][c], p - 2, p) if p > 2 else m[r][c]
        m[r] = [(e * inv) % p for e in m[r]]
        for i in range(nr):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        piv.append(c)
        r += 1
    return m[:len(piv)], piv


def _modp_kernel(rows, p, ncols):
    """Kernel basis of the row-matrix over F_p (vectors of length ncols)."""
    ech, piv = _modp_echelon(rows, p)
    pivset = set(piv)
    out = []
    for c in range(ncols):
        if c in pivset:
            continue
        v = [0] * ncols
        v[c] = 1
        for r, pc in enumerate(piv):
            v[pc] = (-ech[r][c]) % p
        out.append(v)
    return out


def _kernel_mod(rows, q, ncols):
    """Lattice {x in Z^ncols : rows . x = 0 mod q} as HNF basis rows."""
    reduced = [[e % q for e in row] for row in rows if any(e % q for e in row)]
    if not reduced:
        return [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    pre, _ = hnf_and_det(reduced)
    r = len(pre)
    stacked = [pre[i] + [-q if j == i else 0 for j in range(r)] for i in range(r)]
    # columns are (x, y); integer kernel projected to x spans the solution set
    ker = integer_kernel(stacked)
    proj = [v[:ncols] for v in ker]
    proj += [[q if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    basis, _ = hnf_and_det(proj)
    return basis


# -- radical of Lambda / p Lambda ----------------------------------------------


def radical_mod_p(order: Order, p: int):
    """Basis vectors (ints mod p, coords over the order basis) of rad(L/pL)."""
    N = order.qdim
    gram = order.gram()
    current = _modp_kernel([[e % p for e in row] for row in gram], p, N)
    if not current:
        return []
    levels = 0
    while p ** (levels + 1) <= N:
        levels += 1
    T = order.mult_table()
    for k in range(1, levels + 1):
        q = p ** (k + 1)
        mats = [_left_matrix_mod(T, u, q) for u in current]
        t = len(current)
        rows = []
        for s in range(t):
            row = []
            for tt in range(t):
                prod = _mat_mul_mod(mats[s], mats[tt], q)
                tr = _trace_pow_mod(prod, p ** k, q)
                if tr % p ** k:
                    raise AssertionError("trace level divisibility failed")
                row.append((tr // p ** k) % p)
            rows.append(row)
        # constraint: g_k(x, y) = 0 for all y -> kernel over the columns
        cols = [[rows[s][tt] for s in range(t)] for tt in range(t)]
        combo = _modp_kernel(cols, p, t)
        if not combo:
            return []
        current = [_combine_mod(combo_row, current, p) for combo_row in combo]
    return current


def _left_matrix_mod(T, u, q):
    """Regular matrix (mod q) of the element with integer coords u."""
    N = len(T)
    out = [[0] * N for _ in range(N)]
    for i, ui in enumerate(u):
        if not ui % q:
            continue
        Ti = T[i]
        for j in range(N):
            tij = Ti[j]
            col = ui
            for k in range(N):
                if tij[k]:
                    out[k][j] = (out[k][j] + col * tij[k]) % q
    return out


def _mat_mul_mod(a, b, q):
    n = len(a)
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) % q for col in bt] for row in a]


def _trace_pow_mod(m, e, q):
    """Trace of m^e mod q (e >= 1, small)."""
    acc = None
    base = m
    while e:
        if e & 1:
            acc = base if acc is None else _mat_mul_mod(acc, base, q)
        e >>= 1
        if e:
            base = _mat_mul_mod(base, base, q)
    return sum(acc[i][i] for i in range(len(acc))) % q


def _combine_mod(coeffs, vectors, p):
    n = len(vectors[0])
    out = [0] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i in range(n):
                out[i] = (out[i] + c * v[i]) % p
    return out


# -- idealizers -----------------------------------------------------------------


def _ideal_lattice(order: Order, modp_rows, p):
    """HNF basis of the lift of a mod-p subspace, as rows over the order basis."""
    N = order.qdim
    rows = [list(r) for r in modp_rows]
    rows += [[p if i == j else 0 for j in range(N)] for i in range(N)]
    basis, det = hnf_and_det(rows)
    return basis, det


def idealizer(order: Order, modp_rows, p: int, side="left") -> Order:
    """O(I) = {x in A : x I <= I} (or I x <= I) for I = lift + p*Lambda."""
    N = order.qdim
    G, detG = _ideal_lattice(order, modp_rows, p)
    k = 0
    dd = detG
    while dd % p == 0:
        dd //= p
        k += 1
    if dd not in (1, -1):
        raise AssertionError("ideal index is not a p-power")
    adj = _triangular_adjugate(G, abs(detG))
    T = order.mult_table()
    q = p ** (k + 1)
    stacked = []
    for j in range(N):
        gj = G[j]
        # M[i][:] = coords of b_i * g_j (left side: condition x * g_j)
        M = []
        for i in range(N):
            acc = [0] * N
            for t, gt in enumerate(gj):
                if not gt:
                    continue
                src = T[i][t] if side == "left" else T[t][i]
                for kk in range(N):
                    if src[kk]:
                        acc[kk] += gt * src[kk]
            M.append(acc)
        W = _int_mat_mul(M, adj)
        # condition: eta . W = 0 mod q, i.e. W^T eta^T = 0
        for col in range(N):
            stacked.append([W[row][col] % q for row in range(N)])
    K = _kernel_mod(stacked, q, N)
    # new order basis: (K / p) in order coordinates -> ambient q-coordinates
    new_rows = []
    for row in K:
        amb = [Fraction(0)] * N
        for c, hrow in zip(row, order.hnf):
            if c:
                for j in range(N):
                    if hrow[j]:
                        amb[j] += Fraction(c * hrow[j], p * order.den)
        new_rows.append(amb)
    out = Order.from_generators(order.algebra, new_rows)
    if not out.contains_order(order):
        raise AssertionError("idealizer lost the original order")
    return out


def _triangular_adjugate(G, absdet):
    """absdet * G^{-1} for an upper-triangular integer G (integer output)."""
    n = len(G)
    frac = Matrix([[Fraction(e) for e in row] for row in G]).inverse()
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            v = frac[i, j] * absdet
            assert v.denominator == 1
            row.append(int(v))
        out.append(row)
    return out


def _int_mat_mul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def p_enlarge(order: Order, p: int) -> Order:
    """One enlargement step: left order of the radical ideal at p."""
    if not is_probable_prime(p):
        raise InputError(f"{p} is not prime")
    rad = radical_mod_p(order, p)
    return idealizer(order, rad, p, side="left")


# -- semisimple quotient and its central idempotents -----------------------------


class _QuotientAlgebra:
    """S = (Lambda/p)/rad with multiplication through chosen coset reps."""

    def __init__(self, order, p, rad_rows):
        self.p = p
        self.N = order.qdim
        self.T = order.mult_table()
        ech, piv = _modp_echelon(rad_rows, p) if rad_rows else ([], [])
        self.rad_ech = ech
        self.rad_piv = piv
        pivset = set(piv)
        self.support = [c for c in range(self.N) if c not in pivset]
        self.dim = len(self.support)

    def reduce(self, vec):
        """Reduce a length-N vector mod the radical; returns S-coords."""
        v = [e % self.p for e in vec]
        for r, pc in enumerate(self.rad_piv):
            f = v[pc]
            if f:
                row = self.rad_ech[r]
                v = [(a - f * b) % self.p for a, b in zip(v, row)]
        return [v[c] for c in self.support]

    def lift(self, s_coords):
        v = [0] * self.N
        for c, val in zip(self.support, s_coords):
            v[c] = val % self.p
        return v

    def mul(self, x, y):
        """S-multiplication of S-coordinate vectors."""
        xl = self.lift(x)
        yl = self.lift(y)
        p = self.p
        out = [0] * self.N
        for i, xi in enumerate(xl):
            if not xi:
                continue
            Ti = self.T[i]
            for j, yj in enumerate(yl):
                if not yj:
                    continue
                f = xi * yj
                tij = Ti[j]
                for k in range(self.N):
                    if tij[k]:
                        out[k] = (out[k] + f * tij[k]) % p
        return self.reduce(out)

    def one(self, order):
        one_coords = order.coords_of(order.algebra.q_coords(order.algebra.identity))
        return self.reduce([int(c) for c in one_coords])

    def power(self, x, e):
        acc = None
        base = x
        while e:
            if e & 1:
                acc = base if acc is None else self.mul(acc, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return acc


def _central_idempotents(order: Order, p: int, rad_rows):
    """Primitive central idempotents of S = (L/pL)/rad, as S-coordinates."""
    S = _QuotientAlgebra(order, p, rad_rows)
    w = S.dim
    if w == 0:
        return S, []
    basis = [[1 if i == j else 0 for j in range(w)] for i in range(w)]
    # center: z s_j = s_j z for all j
    mats = []
    for j in range(w):
        mats.append([S.mul(basis[i], basis[j]) for i in range(w)])
    matsr = []
    for j in range(w):
        matsr.append([S.mul(basis[j], basis[i]) for i in range(w)])
    constraint = []
    for j in range(w):
        for k in range(w):
            constraint.append([(mats[j][i][k] - matsr[j][i][k]) % p for i in range(w)])
    center = _modp_kernel(constraint, p, w)
    if not center:
        raise StructuralError("semisimple quotient has empty center")
    # Frobenius-fixed subalgebra of the center
    frob_rows = []
    for z in center:
        zp = S.power(z, p)
        frob_rows.append(zp)
    # solve x (in center coords): sum x_i z_i^p = sum x_i z_i
    t = len(center)
    constraint2 = []
    for k in range(w):
        constraint2.append([(frob_rows[i][k] - center[i][k]) % p for i in range(t)])
    fixed = _modp_kernel(constraint2, p, t)
    bvecs = []
    for combo in fixed:
        v = [0] * w
        for c, z in zip(combo, center):
            if c:
                for i in range(w):
                    v[i] = (v[i] + c * z[i]) % p
        bvecs.append(v)
    one = S.one(order)
    idems = [one]
    rng = random.Random(0x1DE ^ p)
    for b in bvecs:
        refined = []
        for e in idems:
            eb = S.mul(e, b)
            refined.extend(_split_by_element(S, e, eb, p, rng))
        idems = refined
    return S, idems


def _split_by_element(S, e, x, p, rng):
    """Split idempotent e using x = e*b (central): Lagrange on min poly roots."""
    # Krylov: powers of x inside eS
    w = S.dim
    powers = [e]
    cur = e
    seen = [e]
    coeffs = None
    for deg in range(1, w + 2):
        cur = S.mul(cur, x)
        rows = [list(v) for v in powers]
        sol = _modp_solve(rows, cur, p)
        if sol is not None:
            coeffs = sol  # x^deg = sum coeffs[i] x^i in eS
            break
        powers.append(cur)
    assert coeffs is not None
    # min poly of x on eS: t^deg - sum coeffs_i t^i
    deg = len(powers)
    poly = [(-c) % p for c in coeffs] + [1]
    roots = _fp_roots_split(poly, p, rng)
    if len(roots) != deg:
        raise StructuralError("Frobenius-fixed element has a non-split minimal polynomial")
    if deg == 1:
        return [e]
    out = []
    for c in roots:
        # Lagrange idempotent: prod_{c' != c} (x - c' e) / (c - c')
        acc = e
        denom = 1
        for c2 in roots:
            if c2 == c:
                continue
            term = [(a - c2 * b) % p for a, b in zip(x, e)]
            acc = S.mul(acc, term)
            denom = denom * (c - c2) % p
        inv = pow(denom, p - 2, p) if p > 2 else denom
        acc = [(a * inv) % p for a in acc]
        if S.mul(acc, acc) != acc:
            raise AssertionError("component idempotent is not idempotent")
        out.append(acc)
    return out


def _modp_solve(rows, rhs, p):
    """Solve x . rows = rhs over F_p (row-vector convention); None if unsolvable."""
    t = len(rows)
    if t == 0:
        return None
    n = len(rows[0])
    aug = [[rows[i][j] for i in range(t)] + [rhs[j]] for j in range(n)]
    ech, piv = _modp_echelon(aug, p)
    if t in piv:
        return None
    sol = [0] * t
    for r, pc in enumerate(piv):
        sol[pc] = ech[r][t]
    return sol


def _fp_poly_gcd(a, b, p):
    a = [e % p for e in a]
    b = [e % p for e in b]

    def norm(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    a, b = norm(a), norm(b)
    while b:
        # a mod b
        inv = pow(b[-1], p - 2, p)
        while len(a) >= len(b) and a:
            f = a[-1] * inv % p
            off = len(a) - len(b)
            for i in range(len(b)):
                a[off + i] = (a[off + i] - f * b[i]) % p
            a = norm(a)
        a, b = b, a
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [e * inv % p for e in a]
    return a


def _fp_poly_powmod(base, e, mod, p):
    def mulmod(x, y):
        out = [0] * (len(x) + len(y) - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        out[i + j] = (out[i + j] + xi * yj) % p
        # reduce mod `mod`
        inv = pow(mod[-1], p - 2, p)
        while len(out) >= len(mod):
            f = out[-1] * inv % p
            off = len(out) - len(mod)
            for i in range(len(mod)):
                out[off + i] = (out[off + i] - f * mod[i]) % p
            while out and out[-1] == 0:
                out.pop()
        return out if out else [0]

    acc = [1]
    b = [e_ % p for e_ in base]
    while e:
        if e & 1:
            acc = mulmod(acc, b)
        e >>= 1
        if e:
            b = mulmod(b, b)
    return acc


def _fp_roots_split(poly, p, rng):
    """All roots of a squarefree monic polynomial that splits into linears."""
    deg = len(poly) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [(-poly[0]) % p]
    if p <= 4096:
        return [c for c in range(p) if _fp_eval(poly, c, p) == 0]
    # Cantor-Zassenhaus splitting for linear factors
    for _ in range(128):
        a = rng.randrange(p)
        # gcd(poly, (x+a)^((p-1)/2) - 1)
        xa = [a % p, 1]
        g = _fp_poly_powmod(xa, (p - 1) // 2, poly, p)
        g = list(g)
        g[0] = (g[0] - 1) % p
        d = _fp_poly_gcd(poly, g, p)
        if 0 < len(d) - 1 < deg:
            q, r = _fp_poly_divmod(poly, d, p)
            assert not any(r)
            return _fp_roots_split(d, p, rng) + _fp_roots_split(q, p, rng)
    raise StructuralError("failed to split a totally-split polynomial over F_p")


def _fp_poly_divmod(a, b, p):
    a = [e % p for e in a]
    b = [e % p for e in b]
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) < len(b):
            break
        f = a[-1] * inv % p
        off = len(a) - len(b)
        q[off] = f
        for i in range(len(b)):
            a[off + i] = (a[off + i] - f * b[i]) % p
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _fp_eval(poly, c, p):
    acc = 0
    for coef in reversed(poly):
        acc = (acc * c + coef) % p
    return acc


# -- maximal order ------------------------------------------------------------


def maximal_order(A: StructureAlgebra, factor_rho_rounds=1_000_000,
                  deadline=None):
    """Fixed point of the enlargement process over all primes with p^2 | disc."""
    lam = initial_order(A)
    disc = lam.discriminant()
    fac = factorize(abs(disc), rho_rounds=factor_rho_rounds)
    primes = sorted(p for p, e in fac.items() if e >= 2)
    steps = []
    for p in primes:
        while True:
            if deadline is not None:
                deadline.check()
            grew, lam, how = _enlarge_at(lam, p)
            if not grew:
                break
            steps.append((p, how, abs(lam.discriminant())))
    report = {"primes": primes, "steps": steps,
              "initial_disc": disc, "final_disc": lam.discriminant()}
    return lam, report


def _try_grow(order, rows, p, side):
    new = idealizer(order, rows, p, side=side)
    if not new.same_lattice(order):
        # discriminant must shrink by the index squared
        idx = order.index_in(new)
        assert new.discriminant() * idx * idx == order.discriminant()
        return new
    return None


def _enlarge_at(order, p):
    rad = radical_mod_p(order, p)
    for side in ("left", "right"):
        new = _try_grow(order, rad, p, side)
        if new is not None:
            return True, new, f"radical-{side}"
    S, idems = _central_idempotents(order, p, rad)
    if len(idems) >= 2:
        for e in idems:
            one = S.one(order)
            complement = [(a - b) % p for a, b in zip(one, e)]
            # maximal ideal: rad + S*(1 - e) pulled back
            rows = list(rad)
            for i in range(order.qdim):
                unit = [0] * order.qdim
                unit[i] = 1
                prod = S.lift(S.mul(S.reduce(unit), complement))
                rows.append(prod)
            for side in ("left", "right"):
                new = _try_grow(order, rows, p, side)
                if new is not None:
                    return True, new, f"maxideal-{side}"
    return False, order, None
