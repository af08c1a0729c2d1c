"""Instance and witness JSON formats, the instance generator, the verifier.

Rationals are serialized as canonical "p/q" strings (q > 0, gcd-reduced) so
arbitrary precision survives every JSON parser, and files are emitted in a
canonical byte form (sorted keys, fixed indentation) so fixed-seed runs are
byte-identical.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction

from .algebra import StructureAlgebra, left_ideal_basis, rank_of_element
from .errors import InputError
from .exact import Matrix
from .numfield import NumberField, make_number_field

INSTANCE_FORMAT = "matsplit-instance/1"
WITNESS_FORMAT = "matsplit-witness/1"


def frac_to_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def frac_from_str(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise InputError(f"expected a rational string, got {type(s).__name__}")
    return Fraction(s)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def field_descriptor(K: NumberField) -> dict:
    if K.is_rationals:
        return {"type": "rationals"}
    if K.degree == 2 and K.min_poly[1] == 0:
        D = -K.min_poly[0]
        if (D % 4 == 1 and K.disc == D) or (D % 4 != 1 and K.disc == 4 * D):
            return {"type": "quadratic", "D": int(D)}
    return {
        "type": "general",
        "min_poly": list(K.min_poly),
        "integral_basis": [[frac_to_str(c) for c in row] for row in K.integral_basis],
        "discriminant": int(K.disc),
    }


def _element_to_strs(coords) -> list:
    return [frac_to_str(c) for c in coords]


def serialize_instance(A: StructureAlgebra, hidden_witness=None) -> dict:
    K = A.field
    m = A.dim
    sc = [[[_element_to_strs(A.table[i][j][k].coords) for k in range(m)]
           for j in range(m)] for i in range(m)]
    out = {
        "format": INSTANCE_FORMAT,
        "field": field_descriptor(K),
        "dimension": m,
        "structure_constants": sc,
    }
    if hidden_witness is not None:
        out["hidden_witness"] = hidden_witness
    return out


def parse_instance(doc, check_associativity=True) -> StructureAlgebra:
    if doc.get("format") != INSTANCE_FORMAT:
        raise InputError(f"unknown instance format {doc.get('format')!r}")
    K = make_number_field(doc["field"])
    m = int(doc["dimension"])
    sc = doc["structure_constants"]
    if len(sc) != m:
        raise InputError("structure_constants must be an m-long array")
    table = []
    for i in range(m):
        row = []
        for j in range(m):
            entry = []
            for k in range(m):
                coords = [frac_from_str(s) for s in sc[i][j][k]]
                entry.append(K.element(coords))
            row.append(entry)
        table.append(row)
    return StructureAlgebra(K, table, check_associativity=check_associativity)


# -- instance generator ---------------------------------------------------------


def _standard_matrix_unit_table(n, K):
    """Structure constants of M_n(K) on the matrix-unit basis E_11..E_nn."""
    m = n * n
    zero, one = K.zero(), K.one()
    table = []
    for i in range(m):
        a, b = divmod(i, n)
        row = []
        for j in range(m):
            c, d = divmod(j, n)
            entry = [zero] * m
            if b == c:
                entry[a * n + d] = one
            row.append(entry)
        table.append(row)
    return table


def standard_matrix_algebra(n, K=None) -> StructureAlgebra:
    from . import numfield
    K = K or numfield.rationals()
    return StructureAlgebra(K, _standard_matrix_unit_table(n, K),
                            check_associativity=False)


def _rand_fraction(rng, bound):
    num = rng.randrange(-bound, bound + 1)
    den = rng.randrange(1, bound + 1)
    return Fraction(num, den)


def _rand_field_element(rng, K, bound):
    return K.element([_rand_fraction(rng, bound) for _ in range(K.degree)])


def scrambled_instance(n, K, seed, entry_bound=10):
    """Random invertible change of basis S applied to the matrix units.

    Returns (algebra, S) with S an m x m matrix over K; the instance basis is
    b_i = sum_l S[i][l] E_l, so S is an explicit isomorphism witness back to
    the standard presentation.  Deterministic in the seed.
    """
    if n < 1 or entry_bound < 1:
        raise InputError("need n >= 1 and entry_bound >= 1")
    m = n * n
    rng = random.Random(seed)
    std = standard_matrix_algebra(n, K)
    while True:
        S = [[_rand_field_element(rng, K, entry_bound) for _ in range(m)]
             for _ in range(m)]
        SM = Matrix(S)
        try:
            S_inv = SM.inverse()
        except Exception:
            continue
        break
    # gamma over the scrambled basis: coords of b_i b_j over {b_k}
    table = []
    for i in range(m):
        bi = std.element(S[i])
        row_products = []
        for j in range(m):
            bj = std.element(S[j])
            prod = bi * bj  # coords over the matrix units
            coords = _row_times_matrix(list(prod.coords), S_inv)
            row_products.append(coords)
        table.append(row_products)
    A = StructureAlgebra(K, table, check_associativity=False)
    return A, S


def _row_times_matrix(row, M: Matrix):
    out = []
    for c in range(M.ncols):
        acc = None
        for i, x in enumerate(row):
            if not x:
                continue
            t = x * M[i, c]
            acc = t if acc is None else acc + t
        out.append(acc if acc is not None else row[0] - row[0])
    return out


def gen_instance(n, field_desc, seed, entry_bound=10, with_witness=False) -> dict:
    """Instance file dict for a scrambled M_n(K); bit-reproducible in the seed."""
    K = make_number_field(field_desc) if not isinstance(field_desc, NumberField) \
        else field_desc
    A, S = scrambled_instance(n, K, seed, entry_bound)
    hidden = None
    if with_witness:
        hidden = {
            "kind": "basis-change-to-matrix-units",
            "matrix": [[_element_to_strs(e.coords) for e in row] for row in S],
        }
    doc = serialize_instance(A, hidden_witness=hidden)
    doc["generator"] = {"n": n, "seed": seed, "entry_bound": entry_bound}
    return doc


# -- witness serialization --------------------------------------------------------


def serialize_witness(A: StructureAlgebra, report) -> dict:
    n = report.iso.n
    images = []
    for img in report.iso.images:
        images.append([[_element_to_strs(img[r, c].coords) for c in range(n)]
                       for r in range(n)])
    stats = {k: v for k, v in report.stats.items() if k != "elapsed_seconds"}
    return {
        "format": WITNESS_FORMAT,
        "n": n,
        "rank_one": [_element_to_strs(c.coords) for c in report.witness.element.coords],
        "isomorphism_images": images,
        "order_discriminants": [[lvl, int(d)] for lvl, d in report.order_discs],
        "statistics": {
            "provenance": report.witness.provenance,
            "recursion_depth": report.witness.recursion_depth,
            "soundness_checks": report.soundness,
            "counters": stats,
        },
    }


def parse_witness(doc):
    if doc.get("format") != WITNESS_FORMAT:
        raise InputError(f"unknown witness format {doc.get('format')!r}")
    return doc


class VerifyResult:
    def __init__(self, ok, failed=None, detail=""):
        self.ok = ok
        self.failed = failed
        self.detail = detail

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "VerifyResult(pass)" if self.ok else \
            f"VerifyResult(fail at {self.failed}: {self.detail})"


def verify(instance_doc, witness_doc) -> VerifyResult:
    """Exact witness checks: rank one, unitality, multiplicativity, bijectivity."""
    A = parse_instance(instance_doc)
    doc = parse_witness(witness_doc)
    K = A.field
    m = A.dim
    n = int(doc["n"])
    if A.n != n:
        return VerifyResult(False, "dimension",
                            f"witness n = {n} but algebra dimension is {m}")
    C = A.element([K.element([frac_from_str(s) for s in cs])
                   for cs in doc["rank_one"]])
    ideal = left_ideal_basis(A, C)
    if len(ideal) != n:
        return VerifyResult(False, "rank-one",
                            f"dim(A*C) = {len(ideal)}, expected n = {n}")
    images = []
    for mat in doc["isomorphism_images"]:
        rows = []
        for r in range(n):
            rows.append([K.element([frac_from_str(s) for s in mat[r][c]])
                         for c in range(n)])
        images.append(Matrix(rows))

    def image_of(x):
        acc = [[K.zero() for _ in range(n)] for _ in range(n)]
        for coeff, img in zip(x.coords, images):
            if not coeff:
                continue
            for r in range(n):
                for c in range(n):
                    acc[r][c] = acc[r][c] + coeff * img[r, c]
        return Matrix(acc)

    if image_of(A.identity) != Matrix.identity(n, K.one()):
        return VerifyResult(False, "unitality", "image of 1 is not the identity")
    basis = A.basis()
    for i in range(m):
        for j in range(m):
            if images[i] * images[j] != image_of(basis[i] * basis[j]):
                return VerifyResult(False, "multiplicativity",
                                    f"fails on basis pair ({i}, {j})")
    flat = Matrix([[img[r, c] for r in range(n) for c in range(n)]
                   for img in images])
    if flat.rank() != m:
        return VerifyResult(False, "bijectivity",
                            "images are K-linearly dependent")
    return VerifyResult(True)
