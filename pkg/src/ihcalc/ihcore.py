"""Intersection homology of stratified complexes.

The chain groups are assembled per coefficient ring: over a field, the
allowable chains with allowable boundary form a subspace of the span of
allowable simplices; over the integers they form a lattice.  The two are
genuinely different objects (the integral complex tensored with a field
is not the field-coefficient complex), so nothing here ever tensors.
"""

from dataclasses import dataclass
from fractions import Fraction

from .exactalg import (
    ExactMatrix,
    FiniteField,
    Integers,
    INTEGERS,
    PrimeField,
    RATIONALS,
    Rationals,
    integer_kernel_basis,
    kernel_basis,
    rank,
    smith_normal_form,
    solve_columns,
)
from .simplicial import (
    SimplicialComplex,
    StratifiedComplex,
    simplex_key,
    simplicial_link,
    sorted_vertices,
    stratum_components,
)


class PerversityError(ValueError):
    pass


class Perversity:
    """A perversity function on codimensions 2..n.

    Stored as the tuple (p(2), ..., p(n)).  Must start at 0 and grow by
    steps of 0 or 1.
    """

    __slots__ = ("values", "n")

    def __init__(self, values, n=None):
        values = tuple(int(v) for v in values)
        if n is None:
            n = len(values) + 1
        if n >= 2 and len(values) != n - 1:
            raise PerversityError(
                f"need values for codimensions 2..{n}, got {len(values)}"
            )
        if n < 2 and values:
            raise PerversityError("no codimensions >= 2 in this dimension")
        if values:
            if values[0] != 0:
                raise PerversityError("perversity must vanish at codimension 2")
            for a, b in zip(values, values[1:]):
                if not (a <= b <= a + 1):
                    raise PerversityError(
                        f"perversity must grow by 0 or 1, got {values}"
                    )
        self.values = values
        self.n = n

    def __call__(self, k):
        if k < 2:
            return 0
        if k > self.n:
            raise PerversityError(f"perversity not defined at codimension {k}")
        return self.values[k - 2]

    @classmethod
    def zero(cls, n):
        return cls((0,) * max(n - 1, 0), n)

    @classmethod
    def top(cls, n):
        return cls(tuple(k - 2 for k in range(2, n + 1)), n)

    @classmethod
    def lower_middle(cls, n):
        return cls(tuple((k - 2) // 2 for k in range(2, n + 1)), n)

    @classmethod
    def upper_middle(cls, n):
        return cls(tuple((k - 1) // 2 for k in range(2, n + 1)), n)

    def dual(self):
        return Perversity(
            tuple(k - 2 - self(k) for k in range(2, self.n + 1)), self.n
        )

    def __le__(self, other):
        return self.n == other.n and all(
            a <= b for a, b in zip(self.values, other.values)
        )

    def __eq__(self, other):
        return (
            isinstance(other, Perversity)
            and self.n == other.n
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.values, self.n))

    def __repr__(self):
        return f"Perversity({self.values}, n={self.n})"


def middle_perversities(n):
    if n < 2:
        raise PerversityError("middle perversities need dimension >= 2")
    return Perversity.lower_middle(n), Perversity.upper_middle(n)


def allowable(s, i, pbar, X: StratifiedComplex):
    """Allowability of an i-simplex: its intersection with each skeleton
    X^(n-k) must have dimension at most i - k + p(k).  An empty
    intersection satisfies every bound."""
    s = frozenset(s)
    if len(s) - 1 != i:
        raise PerversityError(f"simplex has dimension {len(s) - 1}, not {i}")
    n = X.n
    for k in range(2, n + 1):
        skel = X.skeleton(n - k)
        if skel.dimension < 0:
            continue
        verts = skel.vertices
        c = sum(1 for v in s if v in verts)
        if c == 0:
            continue
        if c - 1 > i - k + pbar(k):
            return False
    return True


def _skeleton_vertex_sets(X):
    n = X.n
    out = []
    for k in range(2, n + 1):
        skel = X.skeleton(n - k)
        if skel.dimension >= 0:
            out.append((k, skel.vertices))
    return out


def _allowable_simplices(X, pbar):
    """Sorted allowable simplices per degree 0..n."""
    n = X.n
    bounds = _skeleton_vertex_sets(X)
    out = []
    for i in range(n + 1):
        good = []
        for s in X.complex.faces(i):
            ok = True
            for k, verts in bounds:
                c = sum(1 for v in s if v in verts)
                if c > 0 and c - 1 > i - k + pbar(k):
                    ok = False
                    break
            if ok:
                good.append(s)
        out.append(sorted(good, key=simplex_key))
    return out


def boundary_chain(s):
    """Signed boundary of a simplex: list of (face, sign) with the usual
    alternating signs for the sorted vertex ordering."""
    vs = sorted_vertices(s)
    return [(s - {v}, (-1) ** j) for j, v in enumerate(vs)]


def _boundary_columns(simplices, row_index):
    """Boundary of each simplex as a column over the indexed rows; faces
    missing from the index are dropped."""
    cols = []
    for s in simplices:
        col = {}
        for f, sign in boundary_chain(s):
            r = row_index.get(f)
            if r is not None:
                col[r] = sign
        cols.append(col)
    return cols


def _cols_to_matrix(cols, nrows):
    entries = {}
    for j, col in enumerate(cols):
        for r, v in col.items():
            entries[(r, j)] = v
    return ExactMatrix(nrows, len(cols), entries)


class _ChainData:
    """Boundary matrices of the allowable spans, shared by the engines.

    For each degree i: A[i] is the sorted list of allowable i-simplices,
    D[i] the boundary matrix from span A[i] to the full chain group one
    degree down, and B[i] the rows of D[i] on non-allowable faces.  The
    intersection chain group in degree i is the kernel of B[i].
    """

    def __init__(self, X, pbar):
        n = X.n
        self.n = n
        self.A = _allowable_simplices(X, pbar)
        all_faces = [sorted(X.complex.faces(i), key=simplex_key) for i in range(n + 1)]
        self.D = [None] * (n + 1)
        self.B = [None] * (n + 1)
        self.allow_rows = [None] * (n + 1)
        for i in range(1, n + 1):
            faces = all_faces[i - 1]
            row_index = {f: r for r, f in enumerate(faces)}
            allowed = set(self.A[i - 1])
            cols = _boundary_columns(self.A[i], row_index)
            self.D[i] = _cols_to_matrix(cols, len(faces))
            bad_rows = [r for r, f in enumerate(faces) if f not in allowed]
            bad_pos = {r: j for j, r in enumerate(bad_rows)}
            bcols = []
            for col in cols:
                bcol = {bad_pos[r]: v for r, v in col.items() if r in bad_pos}
                bcols.append(bcol)
            self.B[i] = _cols_to_matrix(bcols, len(bad_rows))
            good_rows = [r for r, f in enumerate(faces) if f in allowed]
            self.allow_rows[i] = good_rows


@dataclass(frozen=True)
class IHTable:
    """Homology table in degrees 0..n.

    Field coefficients fill `dims`; integer coefficients fill
    `free_ranks` and `torsion` (a tuple of invariant-factor tuples).
    """

    coeff_label: str
    n: int
    dims: tuple = None
    free_ranks: tuple = None
    torsion: tuple = None
    chain_dims: tuple = None

    @property
    def is_integral(self):
        return self.free_ranks is not None

    def dim(self, i):
        if not 0 <= i <= self.n:
            return 0
        return self.dims[i]

    def rank(self, i):
        if not 0 <= i <= self.n:
            return 0
        return self.free_ranks[i] if self.is_integral else self.dims[i]

    def torsion_at(self, i):
        if not self.is_integral or not 0 <= i <= self.n:
            return ()
        return self.torsion[i]

    def group_description(self, i):
        if self.is_integral:
            parts = []
            r = self.rank(i)
            if r == 1:
                parts.append("Z")
            elif r > 1:
                parts.append(f"Z^{r}")
            parts.extend(f"Z/{t}" for t in self.torsion_at(i))
            return " + ".join(parts) if parts else "0"
        d = self.dim(i)
        if d == 0:
            return "0"
        base = self.coeff_label
        return base if d == 1 else f"{base}^{d}"

    def as_dict(self):
        out = {"coefficients": self.coeff_label, "degrees": {}}
        for i in range(self.n + 1):
            if self.is_integral:
                out["degrees"][str(i)] = {
                    "rank": self.free_ranks[i],
                    "torsion": list(self.torsion[i]),
                    "group": self.group_description(i),
                }
            else:
                out["degrees"][str(i)] = {
                    "dimension": self.dims[i],
                    "group": self.group_description(i),
                }
        return out


def _coeff_label(coeff):
    if isinstance(coeff, Rationals):
        return "Q"
    if isinstance(coeff, Integers):
        return "Z"
    if isinstance(coeff, PrimeField):
        return f"Z{coeff.p}"
    if isinstance(coeff, FiniteField):
        return f"F{coeff.p}^{coeff.m}"
    raise PerversityError(f"unsupported coefficients {coeff!r}")


def _field_table(data, coeff):
    n = data.n
    rank_D = [0] * (n + 2)
    rank_B = [0] * (n + 2)
    for i in range(1, n + 1):
        rank_D[i] = rank(data.D[i], coeff)
        rank_B[i] = rank(data.B[i], coeff)
    dims = []
    chain_dims = []
    for i in range(n + 1):
        ic = len(data.A[i]) - rank_B[i] if i >= 1 else len(data.A[i])
        chain_dims.append(ic)
        h = len(data.A[i]) - rank_D[i] - rank_D[i + 1] + rank_B[i + 1]
        if i == 0:
            h = len(data.A[0]) - rank_D[1] + rank_B[1]
        dims.append(h)
    return IHTable(
        coeff_label=_coeff_label(coeff),
        n=n,
        dims=tuple(dims),
        chain_dims=tuple(chain_dims),
    )


def _integral_table(data):
    n = data.n
    # Lattice basis of the intersection chains in each degree: the
    # integer kernel of the bad-row boundary (saturated by construction).
    U = []
    for i in range(n + 1):
        if i == 0:
            U.append([
                [1 if j == t else 0 for j in range(len(data.A[0]))]
                for t in range(len(data.A[0]))
            ])
        else:
            U.append(integer_kernel_basis(data.B[i]))
    # Boundary in lattice coordinates.
    M = [None] * (n + 2)
    for i in range(1, n + 1):
        if not U[i] or not U[i - 1]:
            M[i] = ExactMatrix(len(U[i - 1]), len(U[i]))
            continue
        Dcols = data.D[i].col_dicts()
        pos = {r: t for t, r in enumerate(data.allow_rows[i])}
        targets = []
        for u in U[i]:
            chain = {}
            for j, c in enumerate(u):
                if not c:
                    continue
                for r, v in Dcols[j].items():
                    chain[r] = chain.get(r, 0) + c * v
            tgt = {}
            for r, v in chain.items():
                if v:
                    if r not in pos:
                        raise PerversityError("boundary leaked onto a bad face")
                    tgt[pos[r]] = v
            targets.append(tgt)
        basis_cols = [
            {t: c for t, c in enumerate(u) if c} for u in U[i - 1]
        ]
        sols = solve_columns(basis_cols, targets, INTEGERS)
        entries = {}
        for j, sol in enumerate(sols):
            for r, v in sol.items():
                if v:
                    entries[(r, j)] = v
        M[i] = ExactMatrix(len(U[i - 1]), len(U[i]), entries)
    free = []
    tors = []
    snfs = [None] * (n + 2)
    for i in range(1, n + 1):
        snfs[i] = smith_normal_form(M[i])
    for i in range(n + 1):
        r_lo = snfs[i].rank if i >= 1 else 0
        r_hi = snfs[i + 1].rank if i + 1 <= n else 0
        free.append(len(U[i]) - r_lo - r_hi)
        t = snfs[i + 1].torsion if i + 1 <= n else ()
        tors.append(tuple(t))
    return IHTable(
        coeff_label="Z",
        n=n,
        free_ranks=tuple(free),
        torsion=tuple(tors),
        chain_dims=tuple(len(U[i]) for i in range(n + 1)),
    )


def ih_homology(X: StratifiedComplex, pbar: Perversity, coeff) -> IHTable:
    """Intersection homology table of X for one perversity, computed
    directly over the requested coefficient ring."""
    if pbar.n != X.n:
        raise PerversityError(
            f"perversity is for dimension {pbar.n}, space has {X.n}"
        )
    data = _ChainData(X, pbar)
    if isinstance(coeff, Integers):
        return _integral_table(data)
    return _field_table(data, coeff)


@dataclass
class IntersectionChainComplex:
    """Explicit chain-level data: per degree, the allowable simplices,
    a basis of the intersection chains in those coordinates, and the
    boundary matrix between consecutive bases."""

    n: int
    coeff_label: str
    allowable: list
    bases: list
    boundaries: list


def intersection_chain_complex(X, pbar, coeff):
    data = _ChainData(X, pbar)
    n = data.n
    integral = isinstance(coeff, Integers)
    bases = []
    for i in range(n + 1):
        if i == 0:
            dim0 = len(data.A[0])
            one = coeff.one if not integral else 1
            zero = coeff.zero if not integral else 0
            bases.append(
                [[one if j == t else zero for j in range(dim0)] for t in range(dim0)]
            )
        elif integral:
            bases.append(integer_kernel_basis(data.B[i]))
        else:
            bases.append(kernel_basis(data.B[i], coeff))
    field = RATIONALS if integral else coeff
    boundaries = []
    for i in range(n + 1):
        if i == 0 or not bases[i] or not bases[i - 1]:
            boundaries.append(ExactMatrix(len(bases[i - 1]) if i else 0, len(bases[i])))
            continue
        Dcols = data.D[i].col_dicts()
        pos = {r: t for t, r in enumerate(data.allow_rows[i])}
        targets = []
        zero = 0 if integral else coeff.zero
        for u in bases[i]:
            chain = {}
            for j, c in enumerate(u):
                if c == zero:
                    continue
                for r, v in Dcols[j].items():
                    cur = chain.get(r, zero)
                    if integral:
                        chain[r] = cur + c * v
                    else:
                        term = coeff.mul(c, coeff.from_int(v))
                        chain[r] = coeff.add(cur, term)
            tgt = {}
            for r, v in chain.items():
                if v != zero:
                    if r not in pos:
                        raise PerversityError("boundary leaked onto a bad face")
                    tgt[pos[r]] = v
            targets.append(tgt)
        basis_cols = [
            {t: c for t, c in enumerate(u) if c != zero} for u in bases[i - 1]
        ]
        sols = solve_columns(basis_cols, targets, INTEGERS if integral else coeff)
        entries = {}
        for j, sol in enumerate(sols):
            for r, v in sol.items():
                if v != (0 if integral else coeff.zero):
                    entries[(r, j)] = v
        boundaries.append(ExactMatrix(len(bases[i - 1]), len(bases[i]), entries))
    icc = IntersectionChainComplex(
        n=n,
        coeff_label="Z" if integral else _coeff_label(coeff),
        allowable=data.A,
        bases=bases,
        boundaries=boundaries,
    )
    _assert_square_zero(icc, coeff)
    return icc


def _assert_square_zero(icc, coeff):
    integral = isinstance(coeff, Integers)
    for i in range(2, icc.n + 1):
        lo = icc.boundaries[i - 1].col_dicts()
        hi = icc.boundaries[i].col_dicts()
        for col in hi:
            acc = {}
            for r, v in col.items():
                for rr, w in lo[r].items():
                    if integral:
                        acc[rr] = acc.get(rr, 0) + v * w
                    else:
                        acc[rr] = coeff.add(
                            acc.get(rr, coeff.zero), coeff.mul(v, w)
                        )
            zero = 0 if integral else coeff.zero
            for rr, v in acc.items():
                if isinstance(v, Fraction):
                    v = v if v else 0
                if v != zero:
                    raise AssertionError("boundary squared is nonzero")


def ordinary_homology(C: SimplicialComplex, coeff) -> IHTable:
    """Simplicial homology from the full chain complex; the oracle the
    intersection machinery is checked against on manifolds."""
    n = max(C.dimension, 0)
    faces = [sorted(C.faces(i), key=simplex_key) for i in range(n + 1)]
    mats = [None] * (n + 2)
    for i in range(1, n + 1):
        row_index = {f: r for r, f in enumerate(faces[i - 1])}
        cols = _boundary_columns(faces[i], row_index)
        mats[i] = _cols_to_matrix(cols, len(faces[i - 1]))
    if isinstance(coeff, Integers):
        snfs = [None] * (n + 2)
        for i in range(1, n + 1):
            snfs[i] = smith_normal_form(mats[i])
        free = []
        tors = []
        for i in range(n + 1):
            r_lo = snfs[i].rank if i >= 1 else 0
            r_hi = snfs[i + 1].rank if i + 1 <= n else 0
            free.append(len(faces[i]) - r_lo - r_hi)
            tors.append(tuple(snfs[i + 1].torsion) if i + 1 <= n else ())
        return IHTable(
            coeff_label="Z",
            n=n,
            free_ranks=tuple(free),
            torsion=tuple(tors),
            chain_dims=tuple(len(f) for f in faces),
        )
    ranks = [0] * (n + 2)
    for i in range(1, n + 1):
        ranks[i] = rank(mats[i], coeff)
    dims = tuple(
        len(faces[i]) - ranks[i] - ranks[i + 1] for i in range(n + 1)
    )
    return IHTable(
        coeff_label=_coeff_label(coeff),
        n=n,
        dims=dims,
        chain_dims=tuple(len(f) for f in faces),
    )


@dataclass
class UCTReport:
    prime: int
    integral: IHTable
    mod_p: IHTable
    violations: list  # (degree, predicted, actual)

    @property
    def holds(self):
        return not self.violations


def uct_violation_report(X, pbar, p):
    """Compare mod-p intersection homology with what universal
    coefficients would predict from the integral table."""
    integral = ih_homology(X, pbar, INTEGERS)
    modp = ih_homology(X, pbar, PrimeField(p))
    violations = []
    for i in range(X.n + 1):
        tp = sum(1 for t in integral.torsion_at(i) if t % p == 0)
        tp_prev = sum(1 for t in integral.torsion_at(i - 1) if t % p == 0)
        predicted = integral.rank(i) + tp + tp_prev
        actual = modp.dim(i)
        if predicted != actual:
            violations.append((i, predicted, actual))
    return UCTReport(prime=p, integral=integral, mod_p=modp, violations=violations)


@dataclass
class TorsionFreeReport:
    entries: list  # (stratum_dim, representative, degree, torsion)

    @property
    def passes(self):
        return all(not t for *_, t in self.entries)

    def failures(self):
        return [e for e in self.entries if e[3]]


def torsion_free_check(X, pbar):
    """Local torsion condition: for each singular stratum component of
    codimension c, the integral intersection homology of its link must be
    torsion free in degree c - 2 - p(c)."""
    entries = []
    n = X.n
    for d in range(0, n - 1):
        c = n - d
        for comp in stratum_components(X, d):
            rep = comp[0]
            link = simplicial_link(X, rep)
            deg = c - 2 - pbar(c)
            sub = Perversity(pbar.values[: max(link.n - 1, 0)], link.n)
            table = ih_homology(link, sub, INTEGERS)
            entries.append((d, rep, deg, table.torsion_at(deg)))
    return TorsionFreeReport(entries=entries)
