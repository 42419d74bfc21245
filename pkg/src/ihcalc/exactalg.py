"""Exact linear algebra over Q, Z_p, F_{p^m}, and Z.

Everything here is exact: rationals use arbitrary-precision fractions,
finite fields use table-driven arithmetic on integer-encoded elements,
and integer computations (Smith normal form, integer kernels) never
leave Z.  No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class CoefficientError(ValueError):
    """Raised for invalid coefficient specifications or misuse."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# Coefficient specifications
# ---------------------------------------------------------------------------


class Rationals:
    """The field Q.  Elements are Fraction instances."""

    char = 0
    order = None
    is_field = True
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    def from_int(self, n):
        return Fraction(n)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class Integers:
    """The ring Z.  Not a field; rank/kernel ops reject it."""

    char = 0
    order = None
    is_field = False
    zero = 0
    one = 1

    def from_int(self, n):
        return n

    def __eq__(self, other):
        return isinstance(other, Integers)

    def __hash__(self):
        return hash("Z")

    def __repr__(self):
        return "Z"


class PrimeField:
    """Z_p for a prime p.  Elements are ints in [0, p)."""

    is_field = True

    def __init__(self, p: int):
        if not is_prime(p):
            raise CoefficientError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.order = p
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def from_int(self, n):
        return n % self.p

    def elements(self):
        return range(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Zp", self.p))

    def __repr__(self):
        return f"Z{self.p}"


def _poly_trim(c):
    while c and c[-1] == 0:
        c = c[:-1]
    return c


def _poly_mulmod(a, b, modulus, p):
    """Multiply polynomials a, b (low-degree-first coefficient tuples) mod
    a monic modulus of degree m, coefficients mod p."""
    m = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce: x^m = -(modulus[:-1])
    for d in range(len(prod) - 1, m - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for k in range(m):
                prod[d - m + k] = (prod[d - m + k] - c * modulus[k]) % p
    prod = prod[:m] + [0] * max(0, m - len(prod))
    return tuple(prod[:m])


def _poly_is_irreducible(poly, p):
    """Trial division by all monic polynomials of degree <= deg/2."""
    m = len(poly) - 1
    if m == 1:
        return True
    # roots check doubles as degree-1 trial division
    for d in range(1, m // 2 + 1):
        for idx in range(p**d):
            divisor = _int_to_digits(idx, p, d) + (1,)
            if _poly_divides(divisor, poly, p):
                return False
    return True


def _poly_divides(divisor, poly, p):
    rem = list(poly)
    dd = len(divisor) - 1
    while len(_poly_trim(tuple(rem))) - 1 >= dd and any(rem):
        rem = list(_poly_trim(tuple(rem)))
        if len(rem) - 1 < dd:
            break
        lead = rem[-1]
        shift = len(rem) - 1 - dd
        for k in range(dd + 1):
            rem[shift + k] = (rem[shift + k] - lead * divisor[k]) % p
    return not any(rem)


def _int_to_digits(value, p, m):
    digits = []
    for _ in range(m):
        digits.append(value % p)
        value //= p
    return tuple(digits)


def _digits_to_int(digits, p):
    value = 0
    for d in reversed(digits):
        value = value * p + d
    return value


class FiniteField:
    """F_{p^m} presented as Z_p[x]/(modulus).

    Elements are ints in [0, p^m) encoding coefficient vectors base p,
    low-degree digit first.  For small q the full multiplication table is
    precomputed, so arithmetic is a list lookup.
    """

    is_field = True
    _TABLE_LIMIT = 512

    def __init__(self, p: int, m: int, modulus=None):
        if not is_prime(p):
            raise CoefficientError(f"{p} is not prime")
        if m < 1:
            raise CoefficientError("extension degree must be >= 1")
        if modulus is None:
            modulus = smallest_irreducible(p, m)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise CoefficientError("modulus must be monic of degree m")
        if not _poly_is_irreducible(modulus, p):
            raise CoefficientError("modulus is not irreducible")
        self.p = p
        self.m = m
        self.modulus = modulus
        self.char = p
        self.order = p**m
        self.zero = 0
        self.one = 1
        self._mul_table = None
        self._inv_table = None
        if self.order <= self._TABLE_LIMIT:
            self._build_tables()

    def _build_tables(self):
        q, p, m = self.order, self.p, self.m
        digits = [_int_to_digits(v, p, m) for v in range(q)]
        table = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                v = _digits_to_int(
                    _poly_mulmod(digits[a], digits[b], self.modulus, p), p
                )
                table[a][b] = v
                table[b][a] = v
        self._mul_table = table
        inv = [0] * q
        for a in range(1, q):
            row = table[a]
            for b in range(1, q):
                if row[b] == 1:
                    inv[a] = b
                    break
        self._inv_table = inv

    def add(self, a, b):
        p, m = self.p, self.m
        da = _int_to_digits(a, p, m)
        db = _int_to_digits(b, p, m)
        return _digits_to_int(tuple((x + y) % p for x, y in zip(da, db)), p)

    def sub(self, a, b):
        p, m = self.p, self.m
        da = _int_to_digits(a, p, m)
        db = _int_to_digits(b, p, m)
        return _digits_to_int(tuple((x - y) % p for x, y in zip(da, db)), p)

    def neg(self, a):
        p, m = self.p, self.m
        return _digits_to_int(tuple((-x) % p for x in _int_to_digits(a, p, m)), p)

    def mul(self, a, b):
        if self._mul_table is not None:
            return self._mul_table[a][b]
        p, m = self.p, self.m
        return _digits_to_int(
            _poly_mulmod(
                _int_to_digits(a, p, m), _int_to_digits(b, p, m), self.modulus, p
            ),
            p,
        )

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self._inv_table is not None:
            return self._inv_table[a]
        return self.power(a, self.order - 2)

    def power(self, a, e):
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def from_int(self, n):
        return n % self.p

    def from_coeffs(self, coeffs):
        """Element from polynomial coefficients, low-degree first."""
        c = tuple(x % self.p for x in coeffs)
        if len(c) > self.m:
            raise CoefficientError("too many coefficients")
        return _digits_to_int(c + (0,) * (self.m - len(c)), self.p)

    def generator(self):
        """The class of x."""
        return self.from_coeffs((0, 1))

    def elements(self):
        return range(self.order)

    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and other.p == self.p
            and other.m == self.m
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("Fq", self.p, self.m, self.modulus))

    def __repr__(self):
        return f"F{self.order}"


def smallest_irreducible(p: int, m: int) -> tuple:
    """Lexicographically smallest monic irreducible polynomial of degree m
    over Z_p, coefficients compared low-degree-first."""
    if m == 1:
        return (0, 1)
    for idx in range(p**m):
        poly = _int_to_digits(idx, p, m) + (1,)
        if _poly_is_irreducible(poly, p):
            return poly
    raise CoefficientError("no irreducible polynomial found")  # unreachable


def make_field(p: int, m: int = 1):
    """Z_p for m == 1, otherwise F_{p^m} with the canonical modulus."""
    if not is_prime(p):
        raise CoefficientError(f"{p} is not prime")
    if m < 1:
        raise CoefficientError("extension degree must be >= 1")
    if m == 1:
        return PrimeField(p)
    return FiniteField(p, m)


RATIONALS = Rationals()
INTEGERS = Integers()


def is_square(a, field) -> bool:
    """True iff a is a nonzero square in the finite field."""
    if not isinstance(field, (PrimeField, FiniteField)):
        raise CoefficientError("is_square requires a finite field")
    if a == field.zero:
        raise CoefficientError("is_square is undefined at 0")
    q = field.order
    if q % 2 == 0:
        return True
    e = (q - 1) // 2
    result = field.one
    base = a
    while e:
        if e & 1:
            result = field.mul(result, base)
        base = field.mul(base, base)
        e >>= 1
    return result == field.one


def smallest_nonsquare(field):
    """Smallest nonsquare in the field's canonical element order."""
    for a in field.elements():
        if a != field.zero and not is_square(a, field):
            return a
    raise CoefficientError("every element is a square")


# ---------------------------------------------------------------------------
# Sparse exact matrices
# ---------------------------------------------------------------------------


class ExactMatrix:
    """Sparse matrix with exact scalar entries.  Zero entries are never
    stored.  Entry semantics depend on the ambient coefficient ring:
    ints for Z / Z_p / F_{p^m} (encoded), Fraction or int for Q."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows, ncols, entries=None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = {}
        if entries:
            for (r, c), v in entries.items():
                if v:
                    if not (0 <= r < nrows and 0 <= c < ncols):
                        raise IndexError("entry out of bounds")
                    self.entries[(r, c)] = v

    @classmethod
    def from_rows(cls, rows):
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        entries = {}
        for r, row in enumerate(rows):
            for c, v in enumerate(row):
                if v:
                    entries[(r, c)] = v
        return cls(nrows, ncols, entries)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def to_rows(self):
        rows = [[0] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def row_dicts(self):
        rows = [dict() for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def col_dicts(self):
        cols = [dict() for _ in range(self.ncols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def transpose(self):
        return ExactMatrix(
            self.ncols, self.nrows, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols}, {len(self.entries)} nonzero)"


# --- rank ------------------------------------------------------------------


def _rank_modp(rows, p):
    pivots = {}
    rank = 0
    for row in rows:
        row = dict(row)
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                f = pow(row[c], p - 2, p)
                row = {cc: (v * f) % p for cc, v in row.items()}
                pivots[c] = row
                rank += 1
                break
            f = row[c]
            for cc, v in prow.items():
                nv = (row.get(cc, 0) - f * v) % p
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        # empty row: dependent
    return rank


def _rank_generic(rows, field):
    mul, sub, inv = field.mul, field.sub, field.inv
    zero = field.zero
    pivots = {}
    rank = 0
    for row in rows:
        row = {c: v for c, v in row.items() if v != zero}
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                f = inv(row[c])
                row = {cc: mul(v, f) for cc, v in row.items()}
                pivots[c] = row
                rank += 1
                break
            f = row[c]
            for cc, v in prow.items():
                nv = sub(row.get(cc, zero), mul(f, v))
                if nv != zero:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
    return rank


def _row_to_int(row):
    """Clear denominators and strip content from a row of Fractions/ints."""
    if not row:
        return row
    denom = 1
    for v in row.values():
        if isinstance(v, Fraction):
            denom = denom * v.denominator // gcd(denom, v.denominator)
    out = {}
    for c, v in row.items():
        out[c] = int(v * denom)
    g = 0
    for v in out.values():
        g = gcd(g, v)
    if g > 1:
        out = {c: v // g for c, v in out.items()}
    return out


def _rank_fraction_free(rows):
    """Rank over Q by integer-preserving elimination: rows are cleared to
    integer content, and eliminations use cross-multiplication followed by
    content removal.  No fractions appear at any point."""
    pivots = {}
    rank = 0
    for row in rows:
        row = _row_to_int({c: v for c, v in row.items() if v})
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                pivots[c] = row
                rank += 1
                break
            a, b = row[c], prow[c]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            new = {}
            for cc in set(row) | set(prow):
                nv = fa * row.get(cc, 0) - fb * prow.get(cc, 0)
                if nv:
                    new[cc] = nv
            g2 = 0
            for v in new.values():
                g2 = gcd(g2, v)
            if g2 > 1:
                new = {cc: v // g2 for cc, v in new.items()}
            row = new
    return rank


def rank(A: ExactMatrix, coeff) -> int:
    """Rank of A over a coefficient field."""
    if isinstance(coeff, Integers):
        raise CoefficientError("rank over Z is ambiguous; use smith_normal_form")
    if not getattr(coeff, "is_field", False):
        raise CoefficientError("rank requires a field")
    rows = A.row_dicts()
    rows = [r for r in rows if r]
    if isinstance(coeff, PrimeField):
        p = coeff.p
        reduced = []
        for r in rows:
            rr = {c: v % p for c, v in r.items()}
            rr = {c: v for c, v in rr.items() if v}
            if rr:
                reduced.append(rr)
        return _rank_modp(reduced, p)
    if isinstance(coeff, Rationals):
        return _rank_fraction_free(rows)
    if isinstance(coeff, FiniteField):
        lift = [
            {c: coeff.from_int(v) if isinstance(v, int) else v for c, v in r.items()}
            for r in rows
        ]
        return _rank_generic(lift, coeff)
    raise CoefficientError(f"unsupported coefficients {coeff!r}")


def rank_columns(cols, nrows, coeff):
    """Rank of the matrix whose columns are the given dicts {row: value}.

    Convenience wrapper used by the homology engines, which naturally
    produce boundary columns."""
    entries = {}
    for j, col in enumerate(cols):
        for r, v in col.items():
            entries[(r, j)] = v
    return rank(ExactMatrix(nrows, len(cols), entries), coeff)


# --- kernels ---------------------------------------------------------------


def kernel_basis(A: ExactMatrix, coeff):
    """Basis of ker A over a field, as dense lists of length ncols."""
    if not getattr(coeff, "is_field", False):
        raise CoefficientError("kernel_basis requires a field")
    if isinstance(coeff, PrimeField):
        field = coeff
        norm = lambda v: v % field.p
    elif isinstance(coeff, Rationals):
        field = coeff
        norm = lambda v: Fraction(v)
    else:
        field = coeff
        norm = lambda v: field.from_int(v) if isinstance(v, int) else v
    zero, one = field.zero, field.one
    mul, sub, inv, neg = field.mul, field.sub, field.inv, field.neg

    cols = A.col_dicts()
    pivots = {}  # row -> (column dict, trace dict)
    kernel = []
    for j in range(A.ncols):
        col = {r: norm(v) for r, v in cols[j].items() if norm(v) != zero}
        trace = {j: one}
        while col:
            r = min(col)
            piv = pivots.get(r)
            if piv is None:
                f = inv(col[r])
                col = {rr: mul(v, f) for rr, v in col.items()}
                trace = {jj: mul(v, f) for jj, v in trace.items()}
                pivots[r] = (col, trace)
                break
            pcol, ptrace = piv
            f = col[r]
            for rr, v in pcol.items():
                nv = sub(col.get(rr, zero), mul(f, v))
                if nv != zero:
                    col[rr] = nv
                else:
                    col.pop(rr, None)
            for jj, v in ptrace.items():
                nv = sub(trace.get(jj, zero), mul(f, v))
                if nv != zero:
                    trace[jj] = nv
                else:
                    trace.pop(jj, None)
        else:
            vec = [zero] * A.ncols
            for jj, v in trace.items():
                vec[jj] = v
            kernel.append(vec)
    return kernel


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def integer_kernel_basis(A: ExactMatrix):
    """Basis of the integer kernel lattice of A (saturated by construction),
    as dense integer lists of length ncols."""
    cols = A.col_dicts()
    pivots = {}  # row -> (column dict, trace dict), pivot entry positive
    kernel = []
    for j in range(A.ncols):
        col = dict(cols[j])
        trace = {j: 1}
        while col:
            r = min(col)
            piv = pivots.get(r)
            if piv is None:
                if col[r] < 0:
                    col = {rr: -v for rr, v in col.items()}
                    trace = {jj: -v for jj, v in trace.items()}
                pivots[r] = (col, trace)
                break
            pcol, ptrace = piv
            a, b = pcol[r], col[r]
            g, x, y = _xgcd(a, b)
            # new pivot = x*pcol + y*col  (entry g at r)
            # new col   = (a//g)*col - (b//g)*pcol  (entry 0 at r)
            fa, fb = a // g, b // g
            newp, newt = {}, {}
            for rr in set(pcol) | set(col):
                v = x * pcol.get(rr, 0) + y * col.get(rr, 0)
                if v:
                    newp[rr] = v
            for jj in set(ptrace) | set(trace):
                v = x * ptrace.get(jj, 0) + y * trace.get(jj, 0)
                if v:
                    newt[jj] = v
            newc, newct = {}, {}
            for rr in set(pcol) | set(col):
                v = fa * col.get(rr, 0) - fb * pcol.get(rr, 0)
                if v:
                    newc[rr] = v
            for jj in set(ptrace) | set(trace):
                v = fa * trace.get(jj, 0) - fb * ptrace.get(jj, 0)
                if v:
                    newct[jj] = v
            pivots[r] = (newp, newt)
            col, trace = newc, newct
        else:
            vec = [0] * A.ncols
            for jj, v in trace.items():
                vec[jj] = v
            kernel.append(vec)
    return kernel


def solve_columns(basis_cols, target_cols, coeff):
    """Express each target column in terms of the independent basis columns.

    Returns a list of dicts {basis index: coefficient}.  Raises if a target
    is not in the span.  Over Integers, solves with exact rationals and
    checks integrality (valid for saturated bases)."""
    field = RATIONALS if isinstance(coeff, Integers) else coeff
    if not getattr(field, "is_field", False):
        raise CoefficientError("solve_columns requires a field or Z")
    zero = field.zero
    mul, sub, inv = field.mul, field.sub, field.inv
    if isinstance(field, Rationals):
        norm = lambda v: Fraction(v)
    elif isinstance(field, PrimeField):
        norm = lambda v: v % field.p
    else:
        norm = lambda v: field.from_int(v) if isinstance(v, int) else v

    # echelonize basis columns, remembering the elimination recipe
    pivots = {}  # row -> (column dict, trace over basis indices)
    for j, raw in enumerate(basis_cols):
        col = {r: norm(v) for r, v in raw.items() if norm(v) != zero}
        trace = {j: field.one}
        while col:
            r = min(col)
            piv = pivots.get(r)
            if piv is None:
                f = inv(col[r])
                pivots[r] = (
                    {rr: mul(v, f) for rr, v in col.items()},
                    {jj: mul(v, f) for jj, v in trace.items()},
                )
                break
            pcol, ptrace = piv
            f = col[r]
            for rr, v in pcol.items():
                nv = sub(col.get(rr, zero), mul(f, v))
                if nv != zero:
                    col[rr] = nv
                else:
                    col.pop(rr, None)
            for jj, v in ptrace.items():
                nv = sub(trace.get(jj, zero), mul(f, v))
                if nv != zero:
                    trace[jj] = nv
                else:
                    trace.pop(jj, None)
        else:
            raise CoefficientError("basis columns are dependent")

    results = []
    for raw in target_cols:
        col = {r: norm(v) for r, v in raw.items() if norm(v) != zero}
        coords = {}
        while col:
            r = min(col)
            piv = pivots.get(r)
            if piv is None:
                raise CoefficientError("target not in span of basis")
            pcol, ptrace = piv
            f = col[r]
            for rr, v in pcol.items():
                nv = sub(col.get(rr, zero), mul(f, v))
                if nv != zero:
                    col[rr] = nv
                else:
                    col.pop(rr, None)
            for jj, v in ptrace.items():
                nv = field.add(coords.get(jj, zero), mul(f, v))
                if nv != zero:
                    coords[jj] = nv
                else:
                    coords.pop(jj, None)
        if isinstance(coeff, Integers):
            out = {}
            for jj, v in coords.items():
                if isinstance(v, Fraction):
                    if v.denominator != 1:
                        raise CoefficientError("non-integral solution")
                    v = v.numerator
                out[jj] = v
            coords = out
        results.append(coords)
    return results


# --- Smith normal form -----------------------------------------------------


@dataclass(frozen=True)
class SNFResult:
    invariant_factors: tuple
    rank: int

    @property
    def torsion(self):
        return tuple(d for d in self.invariant_factors if d > 1)


def smith_normal_form(A: ExactMatrix) -> SNFResult:
    """Invariant factors d1 | d2 | ... of an integer matrix.

    Elementary row/column operations with a smallest-absolute-value pivot,
    ties broken by position."""
    rows = {}
    cols = {}
    for (r, c), v in A.entries.items():
        if not isinstance(v, int):
            if isinstance(v, Fraction) and v.denominator == 1:
                v = v.numerator
            else:
                raise CoefficientError("smith_normal_form requires integer entries")
        rows.setdefault(r, {})[c] = v
        cols.setdefault(c, {}).setdefault(r, None)
    diag = []

    def add_row(src, dst, factor):
        srow = rows.get(src, {})
        drow = rows.setdefault(dst, {})
        for c, v in srow.items():
            nv = drow.get(c, 0) + factor * v
            if nv:
                drow[c] = nv
                cols.setdefault(c, {})[dst] = None
            else:
                drow.pop(c, None)
                col = cols.get(c)
                if col is not None:
                    col.pop(dst, None)

    def add_col(src, dst, factor):
        scol = cols.get(src, {})
        for r in list(scol):
            v = rows[r].get(src)
            if v is None:
                continue
            nv = rows[r].get(dst, 0) + factor * v
            if nv:
                rows[r][dst] = nv
                cols.setdefault(dst, {})[r] = None
            else:
                rows[r].pop(dst, None)
                col = cols.get(dst)
                if col is not None:
                    col.pop(r, None)

    while True:
        best = None
        for r in sorted(rows):
            row = rows[r]
            if not row:
                continue
            for c in sorted(row):
                v = abs(row[c])
                if best is None or v < best[0]:
                    best = (v, r, c)
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pr, pc = best
        while True:
            pv = rows[pr][pc]
            done = True
            # clear the pivot column
            for r in sorted(cols.get(pc, {})):
                if r == pr:
                    continue
                v = rows[r].get(pc)
                if v is None:
                    continue
                q = v // pv
                if q:
                    add_row(pr, r, -q)
                if rows[r].get(pc):
                    # remainder smaller than pivot: swap roles
                    pr = r
                    done = False
                    break
            if not done:
                continue
            # clear the pivot row
            for c in sorted(rows.get(pr, {})):
                if c == pc:
                    continue
                v = rows[pr].get(c)
                if v is None:
                    continue
                q = v // pv
                if q:
                    add_col(pc, c, -q)
                if rows[pr].get(c):
                    pc = c
                    done = False
                    break
            if done:
                break
        diag.append(abs(rows[pr][pc]))
        # deactivate pivot row and column
        for c in list(rows.get(pr, {})):
            col = cols.get(c)
            if col is not None:
                col.pop(pr, None)
        rows.pop(pr, None)
        for r in list(cols.get(pc, {})):
            rows.get(r, {}).pop(pc, None)
        cols.pop(pc, None)

    # repair the divisibility chain
    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                a, b = diag[i], diag[j]
                if b % a:
                    g = gcd(a, b)
                    diag[i], diag[j] = g, a * b // g
                    changed = True
    diag.sort()
    return SNFResult(tuple(diag), len(diag))
