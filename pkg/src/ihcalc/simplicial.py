"""Finite simplicial complexes with stratifications.

Simplices are frozensets of hashable vertex labels.  Integer labels are
the common case (and the only case the CLI file format produces), but
constructions like products and subdivisions temporarily use tuples or
frozensets as labels; `relabel_canonical` flattens any complex back to
integer labels deterministically.
"""

from dataclasses import dataclass, field
from itertools import combinations, permutations


class SimplicialError(ValueError):
    pass


def _canon_key(v):
    """Total order on mixed vertex labels, for deterministic output."""
    if isinstance(v, bool):
        return (0, int(v))
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, tuple):
        return (2, tuple(_canon_key(x) for x in v))
    if isinstance(v, frozenset):
        return (3, tuple(sorted(_canon_key(x) for x in v)))
    raise SimplicialError(f"unsupported vertex label {v!r}")


def simplex_key(s):
    return tuple(sorted((_canon_key(v) for v in s)))


def sorted_vertices(s):
    return sorted(s, key=_canon_key)


class SimplicialComplex:
    """Downward-closed set of simplices, indexed by dimension.

    Immutable after construction.  `by_dim[d]` is a frozenset of
    frozensets of d+1 vertices.
    """

    __slots__ = ("by_dim", "dimension")

    def __init__(self, by_dim):
        self.by_dim = {d: frozenset(ss) for d, ss in by_dim.items() if ss}
        self.dimension = max(self.by_dim, default=-1)

    @classmethod
    def empty(cls):
        return cls({})

    @classmethod
    def from_maximal(cls, maximal):
        by_dim = {}
        seen = set()
        stack = [frozenset(m) for m in maximal]
        for m in stack:
            if not m:
                raise SimplicialError("empty simplex in maximal list")
        while stack:
            s = stack.pop()
            if s in seen or not s:
                continue
            seen.add(s)
            by_dim.setdefault(len(s) - 1, set()).add(s)
            if len(s) > 1:
                for v in s:
                    f = s - {v}
                    if f not in seen:
                        stack.append(f)
        return cls(by_dim)

    def faces(self, d):
        return self.by_dim.get(d, frozenset())

    def all_simplices(self):
        for d in sorted(self.by_dim):
            yield from self.by_dim[d]

    def __contains__(self, s):
        s = frozenset(s)
        return s in self.by_dim.get(len(s) - 1, ())

    def __len__(self):
        return sum(len(ss) for ss in self.by_dim.values())

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.by_dim == other.by_dim

    def __hash__(self):
        return hash(frozenset(self.by_dim.items()))

    def __le__(self, other):
        return all(
            ss <= other.by_dim.get(d, frozenset()) for d, ss in self.by_dim.items()
        )

    @property
    def vertices(self):
        return {next(iter(s)) for s in self.by_dim.get(0, ())}

    def f_vector(self):
        return tuple(len(self.faces(d)) for d in range(self.dimension + 1))

    def euler_characteristic(self):
        return sum((-1) ** d * len(ss) for d, ss in self.by_dim.items())

    def facets(self):
        """Simplices that are not proper faces of another simplex."""
        out = []
        for d in sorted(self.by_dim, reverse=True):
            for s in self.by_dim[d]:
                if d == self.dimension or not any(
                    s < t for dd in self.by_dim if dd > d for t in self.by_dim[dd]
                ):
                    out.append(s)
        return out

    def facets_sorted(self):
        return sorted(self.facets(), key=simplex_key)

    def link(self, s):
        s = frozenset(s)
        if s not in self:
            raise SimplicialError(f"{sorted_vertices(s)} is not a simplex")
        by_dim = {}
        for d, ss in self.by_dim.items():
            ld = d - len(s)
            if ld < 0:
                continue
            for t in ss:
                if s <= t:
                    by_dim.setdefault(ld, set()).add(t - s)
        return SimplicialComplex(by_dim)

    def star_closed(self, s):
        """Closed star of s: all faces of simplices containing s."""
        s = frozenset(s)
        top = [t for t in self.facets() if s <= t]
        if not top:
            raise SimplicialError(f"{sorted_vertices(s)} is not a simplex")
        return SimplicialComplex.from_maximal(top)

    def restrict(self, vertex_set):
        """Full subcomplex on a vertex set."""
        vs = set(vertex_set)
        by_dim = {
            d: {s for s in ss if s <= vs} for d, ss in self.by_dim.items()
        }
        return SimplicialComplex(by_dim)

    def union(self, other):
        by_dim = {d: set(ss) for d, ss in self.by_dim.items()}
        for d, ss in other.by_dim.items():
            by_dim.setdefault(d, set()).update(ss)
        return SimplicialComplex(by_dim)

    def intersection(self, other):
        by_dim = {
            d: ss & other.by_dim.get(d, frozenset())
            for d, ss in self.by_dim.items()
        }
        return SimplicialComplex(by_dim)

    def is_connected(self):
        verts = self.vertices
        if not verts:
            return True
        adj = {v: set() for v in verts}
        for e in self.faces(1):
            a, b = tuple(e)
            adj[a].add(b)
            adj[b].add(a)
        start = min(verts, key=_canon_key)
        seen = {start}
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return seen == verts

    def relabel(self, mapping):
        by_dim = {}
        for d, ss in self.by_dim.items():
            for s in ss:
                img = frozenset(mapping[v] for v in s)
                if len(img) != len(s):
                    raise SimplicialError("relabeling collapses a simplex")
                by_dim.setdefault(d, set()).add(img)
        return SimplicialComplex(by_dim)

    def __repr__(self):
        return f"SimplicialComplex(dim={self.dimension}, f={self.f_vector()})"


def build_complex(maximal_simplices):
    if not maximal_simplices:
        raise SimplicialError("no maximal simplices given")
    return SimplicialComplex.from_maximal(maximal_simplices)


def canonical_vertex_order(K):
    return sorted(K.vertices, key=_canon_key)


def relabel_canonical(K, start=0):
    """Relabel vertices to start..start+V-1 in canonical label order."""
    mapping = {v: start + i for i, v in enumerate(canonical_vertex_order(K))}
    return K.relabel(mapping), mapping


class StratifiedComplex:
    """A simplicial complex with a skeleton filtration.

    skeleta[i] is the subcomplex X^i for 0 <= i <= n, with skeleta[n]
    equal to the whole complex.  The singular locus is skeleta[n-2].
    """

    __slots__ = ("complex", "skeleta", "n")

    def __init__(self, complex, skeleta, n=None):
        if n is None:
            n = complex.dimension
        skeleta = list(skeleta)
        if len(skeleta) != n + 1:
            raise SimplicialError(
                f"need {n + 1} skeleta for formal dimension {n}, got {len(skeleta)}"
            )
        if skeleta[n] != complex:
            raise SimplicialError("top skeleton must be the whole complex")
        for i in range(n):
            if skeleta[i].dimension > i:
                raise SimplicialError(f"skeleton {i} has dimension > {i}")
            if not skeleta[i] <= skeleta[i + 1]:
                raise SimplicialError(f"skeleton {i} not contained in skeleton {i + 1}")
            if not skeleta[i] <= complex:
                raise SimplicialError(f"skeleton {i} not a subcomplex")
        self.complex = complex
        self.skeleta = tuple(skeleta)
        self.n = n

    @classmethod
    def trivial(cls, complex, n=None):
        if n is None:
            n = complex.dimension
        empty = SimplicialComplex.empty()
        return cls(complex, [empty] * n + [complex], n)

    @classmethod
    def from_skeleton_map(cls, complex, skel_map, n=None):
        """Skeleta given as {i: subcomplex}; omitted i default to the
        largest given skeleton below, or the empty complex."""
        if n is None:
            n = complex.dimension
        skeleta = []
        prev = SimplicialComplex.empty()
        for i in range(n):
            if i in skel_map:
                prev = skel_map[i]
            skeleta.append(prev)
        skeleta.append(complex)
        return cls(complex, skeleta, n)

    def skeleton(self, i):
        if i < 0:
            return SimplicialComplex.empty()
        if i >= self.n:
            return self.complex
        return self.skeleta[i]

    def singular_locus(self):
        return self.skeleton(self.n - 2)

    def stratum_dimension(self, s):
        """Smallest i with s in X^i; the stratum containing the interior
        of s has this dimension."""
        s = frozenset(s)
        for i in range(self.n + 1):
            if s in self.skeleton(i):
                return i
        raise SimplicialError(f"{sorted_vertices(s)} is not a simplex")

    def relabel(self, mapping):
        return StratifiedComplex(
            self.complex.relabel(mapping),
            [sk.relabel(mapping) for sk in self.skeleta],
            self.n,
        )

    def __eq__(self, other):
        return (
            isinstance(other, StratifiedComplex)
            and self.n == other.n
            and self.complex == other.complex
            and self.skeleta == other.skeleta
        )

    def __hash__(self):
        return hash((self.complex, self.skeleta, self.n))

    def __repr__(self):
        return f"StratifiedComplex(n={self.n}, f={self.complex.f_vector()})"


@dataclass
class PseudomanifoldReport:
    dimensional_homogeneity: bool
    face_regularity: bool
    no_codim_one: bool
    orientable: bool
    irreducible: bool
    failures: list = field(default_factory=list)

    @property
    def is_pseudomanifold(self):
        return (
            self.dimensional_homogeneity
            and self.face_regularity
            and self.no_codim_one
        )


def verify_pseudomanifold(X: StratifiedComplex) -> PseudomanifoldReport:
    K = X.complex
    n = X.n
    failures = []

    homogeneous = K.dimension == n
    if homogeneous:
        for s in K.facets():
            if len(s) - 1 != n:
                homogeneous = False
                failures.append(s)

    top = sorted(K.faces(n), key=simplex_key)
    cofaces = {}
    for t in top:
        for v in t:
            cofaces.setdefault(t - {v}, []).append(t)

    sigma = X.singular_locus()
    regular = True
    for f in sorted(K.faces(n - 1), key=simplex_key) if n >= 1 else []:
        if len(cofaces.get(f, ())) != 2:
            regular = False
            failures.append(f)

    if n >= 2:
        no_codim_one = X.skeleton(n - 1) == X.skeleton(n - 2)
    elif n == 1:
        no_codim_one = len(X.skeleton(0)) == 0
    else:
        no_codim_one = True

    # Orientability and irreducibility are checked on X - Sigma: the dual
    # graph of n-simplices with edges across (n-1)-faces outside the
    # singular locus.
    ordered = {t: tuple(sorted_vertices(t)) for t in top}
    adj = {t: [] for t in top}
    for f, ts in cofaces.items():
        if len(ts) == 2 and f not in sigma:
            a, b = ts
            ja = ordered[a].index(next(iter(a - f)))
            jb = ordered[b].index(next(iter(b - f)))
            rel = -((-1) ** ja) * ((-1) ** jb)
            adj[a].append((b, rel))
            adj[b].append((a, rel))

    orientable = True
    signs = {}
    components = 0
    for start in top:
        if start in signs:
            continue
        components += 1
        signs[start] = 1
        frontier = [start]
        while frontier:
            t = frontier.pop()
            for u, rel in adj[t]:
                want = signs[t] * rel
                if u not in signs:
                    signs[u] = want
                    frontier.append(u)
                elif signs[u] != want:
                    orientable = False
                    failures.append(u)
    irreducible = components <= 1

    return PseudomanifoldReport(
        dimensional_homogeneity=homogeneous,
        face_regularity=regular,
        no_codim_one=no_codim_one,
        orientable=orientable,
        irreducible=irreducible,
        failures=failures,
    )


def orientation_signs(K, n=None):
    """Coherent orientation signs {n-simplex: +-1}, or None if K is not
    orientable.  Signs are relative to the sorted vertex ordering."""
    X = StratifiedComplex.trivial(K, n)
    rep = verify_pseudomanifold(X)
    if not rep.orientable:
        return None
    top = sorted(K.faces(X.n), key=simplex_key)
    cofaces = {}
    for t in top:
        for v in t:
            cofaces.setdefault(t - {v}, []).append(t)
    ordered = {t: tuple(sorted_vertices(t)) for t in top}
    signs = {}
    for start in top:
        if start in signs:
            continue
        signs[start] = 1
        frontier = [start]
        while frontier:
            t = frontier.pop()
            for v in t:
                f = t - {v}
                ts = cofaces[f]
                if len(ts) != 2:
                    continue
                u = ts[0] if ts[1] == t else ts[1]
                if u in signs:
                    continue
                ja = ordered[t].index(v)
                jb = ordered[u].index(next(iter(u - f)))
                signs[u] = -signs[t] * ((-1) ** ja) * ((-1) ** jb)
                frontier.append(u)
    return signs


def _join(K1, K2):
    """Simplicial join: simplices s1 | s2 with s_i a simplex or empty."""
    if K1.dimension < 0:
        return K2
    if K2.dimension < 0:
        return K1
    by_dim = {}
    all1 = [frozenset()] + list(K1.all_simplices())
    all2 = [frozenset()] + list(K2.all_simplices())
    for s1 in all1:
        for s2 in all2:
            s = s1 | s2
            if s:
                by_dim.setdefault(len(s) - 1, set()).add(s)
    return SimplicialComplex(by_dim)


def _fresh_labels(used, names):
    out = []
    k = 0
    for name in names:
        lab = name
        while lab in used or lab in out:
            lab = (name, k)
            k += 1
        out.append(lab)
    return out


def cone(L: StratifiedComplex, apex=None):
    """Compact cone on L, stratified with the apex as the 0-skeleton and
    the cone on each skeleton of L one level up."""
    if apex is None:
        (apex,) = _fresh_labels(L.complex.vertices, ["apex"])
    elif apex in L.complex.vertices:
        raise SimplicialError("apex label already used")
    point = SimplicialComplex({0: {frozenset([apex])}})
    n = L.n
    skeleta = [point]
    for i in range(1, n + 1):
        skeleta.append(_join(point, L.skeleton(i - 1)))
    skeleta.append(_join(point, L.complex))
    return StratifiedComplex(skeleta[-1], skeleta, n + 1)


def suspension(L: StratifiedComplex, north=None, south=None):
    """Suspension of L: union of two cones, stratified so the i-skeleton
    is the suspension of L's (i-1)-skeleton."""
    if north is None and south is None:
        north, south = _fresh_labels(L.complex.vertices, ["N", "S"])
    for a in (north, south):
        if a in L.complex.vertices:
            raise SimplicialError("apex label already used")
    poles = SimplicialComplex({0: {frozenset([north]), frozenset([south])}})
    n = L.n
    skeleta = [poles]
    for i in range(1, n + 1):
        skeleta.append(_join(poles, L.skeleton(i - 1)))
    skeleta.append(_join(poles, L.complex))
    return StratifiedComplex(skeleta[-1], skeleta, n + 1)


def _staircase_facets(f1, f2, pos1, pos2):
    """Maximal simplices of the product of two simplices, as monotone
    staircase paths through the grid of vertex pairs."""
    a = sorted(f1, key=lambda v: pos1[v])
    b = sorted(f2, key=lambda v: pos2[v])
    s, t = len(a) - 1, len(b) - 1
    out = []
    stack = [((0, 0), ((a[0], b[0]),))]
    while stack:
        (i, j), path = stack.pop()
        if i == s and j == t:
            out.append(frozenset(path))
            continue
        if i < s:
            stack.append(((i + 1, j), path + ((a[i + 1], b[j]),)))
        if j < t:
            stack.append(((i, j + 1), path + ((a[i], b[j + 1]),)))
    return out


def product_complex(K1, K2):
    """Staircase triangulation of |K1| x |K2|; vertices are pairs.

    Vertex orders are the canonical label orders, so products of
    subcomplexes are subcomplexes of the product.
    """
    pos1 = {v: i for i, v in enumerate(canonical_vertex_order(K1))}
    pos2 = {v: i for i, v in enumerate(canonical_vertex_order(K2))}
    facets = []
    for f1 in K1.facets():
        for f2 in K2.facets():
            facets.extend(_staircase_facets(f1, f2, pos1, pos2))
    return SimplicialComplex.from_maximal(facets)


def product(X: StratifiedComplex, M: SimplicialComplex):
    """Product of a stratified complex with a closed manifold factor.

    The skeleta are X^j x M shifted up by dim M, so the strata are the
    products of X's strata with M.
    """
    rep = verify_pseudomanifold(StratifiedComplex.trivial(M))
    if not rep.is_pseudomanifold:
        raise SimplicialError("product factor must be a closed manifold")
    m = M.dimension
    n = X.n
    total = product_complex(X.complex, M)
    empty = SimplicialComplex.empty()
    skeleta = []
    for k in range(n + m):
        j = k - m
        if j < 0 or X.skeleton(j).dimension < 0:
            skeleta.append(empty)
        else:
            skeleta.append(product_complex(X.skeleton(j), M))
    skeleta.append(total)
    return StratifiedComplex(total, skeleta, n + m)


def connected_sum(M1, M2, orientations=(1, 1)):
    """Connected sum of two closed oriented triangulated manifolds.

    One facet is removed from each (the canonically lowest) and the
    boundary spheres are glued by matching vertices in ascending label
    order, flipped by one transposition when the induced boundary
    orientations fail to cancel.
    """
    if M1.dimension != M2.dimension:
        raise SimplicialError("dimension mismatch")
    n = M1.dimension
    reports = []
    for M in (M1, M2):
        rep = verify_pseudomanifold(StratifiedComplex.trivial(M))
        if not rep.is_pseudomanifold:
            raise SimplicialError("connected sum requires closed manifolds")
        if not rep.orientable:
            raise SimplicialError("connected sum requires orientable summands")
        reports.append(rep)
    s1 = orientation_signs(M1)
    s2 = orientation_signs(M2)
    F1 = min(M1.faces(n), key=simplex_key)
    F2 = min(M2.faces(n), key=simplex_key)
    b1 = sorted_vertices(F1)
    b2 = sorted_vertices(F2)
    # Glued orientations cancel when the two removed facets carry opposite
    # signs under the ascending-order identification.
    flip = s1[F1] * orientations[0] == s2[F2] * orientations[1]
    if flip:
        b2 = b2[:-2] + [b2[-1], b2[-2]]
    fresh = 0
    used = set(M1.vertices)
    mapping = {}
    for u, v in zip(b2, b1):
        mapping[u] = v
    for v in canonical_vertex_order(M2):
        if v in mapping:
            continue
        while ("cs", fresh) in used:
            fresh += 1
        mapping[v] = ("cs", fresh)
        fresh += 1
    facets = [t for t in M1.faces(n) if t != F1]
    for t in M2.faces(n):
        if t == F2:
            continue
        facets.append(frozenset(mapping[v] for v in t))
    K, _ = relabel_canonical(SimplicialComplex.from_maximal(facets))
    return K


def simplicial_link(X: StratifiedComplex, s):
    """Link of a simplex with the stratification it inherits from X."""
    s = frozenset(s)
    if s not in X.complex:
        raise SimplicialError(f"{sorted_vertices(s)} is not a simplex")
    d = len(s) - 1
    L = X.complex.link(s)
    formal = X.n - d - 1
    skeleta = []
    for j in range(formal):
        skeleta.append(L.intersection(X.skeleton(j + d + 1)))
    skeleta.append(L)
    return StratifiedComplex(L, skeleta, formal)


def _sd_complex(K, label):
    facets = []
    for f in K.facets():
        vs = sorted_vertices(f)
        for perm in permutations(vs):
            chain = []
            cur = frozenset()
            for v in perm:
                cur = cur | {v}
                chain.append(label[cur])
            facets.append(frozenset(chain))
    return SimplicialComplex.from_maximal(facets)


def barycentric_subdivision(X):
    """Barycentric subdivision; skeleta subdivide along.  Accepts either
    a plain complex or a stratified one.  New vertex labels are integers
    assigned in canonical order of the old simplices."""
    K = X.complex if isinstance(X, StratifiedComplex) else X
    label = {
        s: i
        for i, s in enumerate(sorted(K.all_simplices(), key=simplex_key))
    }
    sd = _sd_complex(K, label)
    if not isinstance(X, StratifiedComplex):
        return sd
    skeleta = []
    for i in range(X.n):
        sk = X.skeleton(i)
        if sk.dimension < 0:
            skeleta.append(SimplicialComplex.empty())
        else:
            skeleta.append(_sd_complex(sk, label))
    skeleta.append(sd)
    return StratifiedComplex(sd, skeleta, X.n)


def quotient(K, identify):
    """Quotient by a vertex identification map.

    `identify` sends some vertices to their replacements; unlisted
    vertices are fixed.  Raises if any maximal simplex collapses, which
    signals the triangulation is too coarse for this gluing.
    """
    facets = []
    for t in K.facets():
        img = frozenset(identify.get(v, v) for v in t)
        if len(img) != len(t):
            raise SimplicialError(
                f"quotient collapses {sorted_vertices(t)}; subdivide first"
            )
        facets.append(img)
    return SimplicialComplex.from_maximal(facets)


def stratum_components(X: StratifiedComplex, d):
    """Connected components of the d-dimensional stratum X^d - X^(d-1),
    as sorted lists of the d-simplices whose interiors lie in it.  Two
    d-simplices are adjacent when they share a (d-1)-face that is also
    outside X^(d-1)."""
    inside = X.skeleton(d).faces(d) - X.skeleton(d - 1).faces(d)
    if not inside:
        return []
    lower = X.skeleton(d - 1)
    shared = {}
    if d > 0:
        for s in inside:
            for v in s:
                f = s - {v}
                if f not in lower:
                    shared.setdefault(f, []).append(s)
    adj = {s: set() for s in inside}
    for ss in shared.values():
        for a in ss:
            for b in ss:
                if a != b:
                    adj[a].add(b)
    components = []
    seen = set()
    for start in sorted(inside, key=simplex_key):
        if start in seen:
            continue
        comp = {start}
        frontier = [start]
        while frontier:
            s = frontier.pop()
            for t in adj[s]:
                if t not in comp:
                    comp.add(t)
                    frontier.append(t)
        seen |= comp
        components.append(sorted(comp, key=simplex_key))
    return components


def contract_edges(K, protect=()):
    """Shrink a complex by contracting edges that satisfy the link
    condition, which preserves PL type on combinatorial manifolds.
    Greedy sweeps in canonical edge order until nothing contracts."""
    protect = set(protect)
    simplices = set(K.all_simplices())
    idx = {}
    for s in simplices:
        for v in s:
            idx.setdefault(v, set()).add(s)

    def link_set(s):
        out = set()
        base = min((idx.get(v, set()) for v in s), key=len)
        for t in base:
            if s <= t and len(t) > len(s):
                out.add(t - s)
        return out

    changed = True
    while changed:
        changed = False
        edges = sorted((s for s in simplices if len(s) == 2), key=simplex_key)
        for e in edges:
            if e not in simplices:
                continue
            a, b = sorted_vertices(e)
            if b in protect:
                a, b = b, a
            if b in protect:
                continue
            if link_set({a}) & link_set({b}) != link_set(e):
                continue
            for s in list(idx[b]):
                simplices.discard(s)
                for v in s:
                    idx[v].discard(s)
                t = frozenset(a if v == b else v for v in s)
                if len(t) == len(s) and t not in simplices:
                    simplices.add(t)
                    for v in t:
                        idx.setdefault(v, set()).add(t)
            idx.pop(b, None)
            changed = True
    by_dim = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, set()).add(s)
    return SimplicialComplex(by_dim)
