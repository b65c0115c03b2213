"""Finite-dimensional algebras over small finite fields.

An :class:`Algebra` is a structure-constant table over a :class:`~taulab.gf.GF`
together with a distinguished complete set of orthogonal idempotents.
Constructors: bound quiver algebras (:func:`path_algebra`), raw tables
(:func:`algebra_from_structure_constants`), tensor path algebras of
finite-field species (:func:`species_algebra`), and scalar extension
(:func:`tensor_up`).  Elements are coordinate tuples.

The radical is exact in all cases: for admissible bound-quiver presentations
and species algebras it is the positive-length part of the basis; otherwise
it is computed by the characteristic-p trace-form chain (kernels of
x -> coeff_{p^i} of charpoly(xy), iterated), which the test suite
cross-checks against a full nilpotency scan on small instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .gf import (
    GF,
    Mat,
    Span,
    embed,
    field,
    poly_mul,
    poly_trim,
    poly_xgcd,
)

# hard cap on element enumerations (idempotent scans, brute oracles)
ENUM_CAP = 1 << 20
# path-length / tensor-degree cap before we declare the quotient infinite
PATH_CAP = 24
PATH_COUNT_CAP = 20000


class CapExceeded(Exception):
    """An enumeration or length cap was hit; inputs are outside desk scale."""


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple  # (source index, target index, name)

    def __post_init__(self):
        names = [a[2] for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be unique")
        for s, t, _ in self.arrows:
            if not (0 <= s < len(self.vertices) and 0 <= t < len(self.vertices)):
                raise ValueError("arrow endpoint out of range")

    @property
    def n(self):
        return len(self.vertices)


class Algebra:
    """A unital associative algebra given by structure constants.

    ``table[i][j]`` holds the coordinates of ``b_i * b_j``.  The basis,
    unit and the stored idempotent set are validated at construction;
    instances are immutable afterwards.
    """

    def __init__(self, base: GF, basis_names, table, unit,
                 idempotents=None, tag="structure-constant", meta=None,
                 validate=True):
        self.base = base
        self.basis_names = list(basis_names)
        self.dim = len(self.basis_names)
        self.table = [[tuple(table[i][j]) for j in range(self.dim)]
                      for i in range(self.dim)]
        self.unit = tuple(unit)
        self.tag = tag
        self.meta = dict(meta or {})
        # left-multiplication matrices L_i (rows j -> coords of b_i b_j)
        self._L = [Mat(base, [list(self.table[i][j]) for j in range(self.dim)])
                   for i in range(self.dim)]
        self._R = [Mat(base, [list(self.table[i][j]) for i in range(self.dim)])
                   for j in range(self.dim)]
        if validate:
            self._validate()
        if idempotents is None:
            idempotents = [self.unit]
        self.idempotents = [tuple(e) for e in idempotents]
        if validate:
            self._validate_idempotents()
        self._gens = None
        self._rad = None
        self._pidem = None

    # -- element arithmetic ---------------------------------------------------

    def zero(self):
        return (0,) * self.dim

    def basis_elt(self, i):
        v = [0] * self.dim
        v[i] = 1
        return tuple(v)

    def mul(self, x, y):
        f = self.base
        acc = [0] * self.dim
        for i, xi in enumerate(x):
            if xi:
                row = self._L[i].apply_left(y)
                if xi == 1:
                    acc = [f.add(a, b) for a, b in zip(acc, row)]
                else:
                    acc = [f.add(a, f.mul(xi, b)) for a, b in zip(acc, row)]
        return tuple(acc)

    def add(self, x, y):
        f = self.base
        return tuple(f.add(a, b) for a, b in zip(x, y))

    def smul(self, c, x):
        f = self.base
        return tuple(f.mul(c, a) for a in x)

    def power(self, x, e):
        acc = self.unit
        for _ in range(e):
            acc = self.mul(acc, x)
        return acc

    def rmat(self, x) -> Mat:
        """Matrix of right multiplication by x on row vectors (v -> v*x)."""
        f = self.base
        acc = Mat.zeros(f, self.dim, self.dim)
        for j, xj in enumerate(x):
            if xj:
                m = self._R[j] if xj == 1 else self._R[j].scale(xj)
                acc = acc + m
        return acc

    def lmat(self, x) -> Mat:
        """Matrix of left multiplication by x on row vectors (v -> x*v)."""
        f = self.base
        acc = Mat.zeros(f, self.dim, self.dim)
        for i, xi in enumerate(x):
            if xi:
                m = self._L[i] if xi == 1 else self._L[i].scale(xi)
                acc = acc + m
        return acc

    def elements(self, cap=ENUM_CAP):
        if self.base.q ** self.dim > cap:
            raise CapExceeded(
                f"element enumeration q^dim = {self.base.q}^{self.dim} exceeds cap")
        return (tuple(v) for v in
                itertools.product(range(self.base.q), repeat=self.dim))

    def is_commutative(self):
        return all(self.table[i][j] == self.table[j][i]
                   for i in range(self.dim) for j in range(i))

    # -- validation -------------------------------------------------------------

    def _validate(self):
        d = self.dim
        if self.rmat(self.unit).rows != Mat.identity(self.base, d).rows:
            raise ValueError("unit law fails on the right")
        if self.lmat(self.unit).rows != Mat.identity(self.base, d).rows:
            raise ValueError("unit law fails on the left")
        for i in range(d):
            Li = self._L[i]
            for j in range(d):
                lhs_start = self.table[i][j]
                for k in range(d):
                    lhs = self._R[k].apply_left(lhs_start)   # (b_i b_j) b_k
                    rhs = Li.apply_left(self.table[j][k])    # b_i (b_j b_k)
                    if lhs != list(rhs):
                        raise ValueError(
                            f"associativity fails at basis triple ({i},{j},{k})")

    def _validate_idempotents(self):
        tot = self.zero()
        for a, e in enumerate(self.idempotents):
            if self.mul(e, e) != e:
                raise ValueError(f"idempotent {a} is not idempotent")
            for b, f2 in enumerate(self.idempotents):
                if a != b and self.mul(e, f2) != self.zero():
                    raise ValueError(f"idempotents {a},{b} not orthogonal")
            tot = self.add(tot, e)
        if tot != self.unit:
            raise ValueError("idempotents do not sum to the unit")

    # -- derived structure -------------------------------------------------------

    def generators(self):
        """Indices of a small subset of the basis that generates the algebra."""
        if self._gens is not None:
            return self._gens
        gens = []
        span = _subalgebra_span(self, [])
        for i in range(self.dim):
            if not span.contains(self.basis_elt(i)):
                gens.append(i)
                span = _subalgebra_span(self, gens)
        self._gens = gens
        return gens

    def opposite(self):
        table = [[self.table[j][i] for j in range(self.dim)]
                 for i in range(self.dim)]
        op = Algebra(self.base, self.basis_names, table, self.unit,
                     idempotents=self.idempotents, tag="derived",
                     meta={"opposite_of": self}, validate=False)
        if self.tag in ("bound-quiver", "species"):
            # same positive part, so the exact radical carries over
            op.meta["rad_indices"] = self.meta.get("rad_indices")
        return op

    def peirce_basis(self, ei, ej):
        """Basis (rows) of e_i * A * e_j for idempotents given as elements."""
        Li, Rj = self.lmat(ei), self.rmat(ej)
        rows = [Rj.apply_left(Li.apply_left(self.basis_elt(t)))
                for t in range(self.dim)]
        return Mat(self.base, rows).row_space_basis()

    def __repr__(self):
        return (f"Algebra(dim={self.dim} over {self.base}, tag={self.tag}, "
                f"{len(self.idempotents)} idempotents)")


def _subalgebra_span(a: Algebra, gen_indices):
    """Span of the unital subalgebra generated by the given basis elements."""
    vecs = [list(a.unit)] + [list(a.basis_elt(i)) for i in gen_indices]
    basis = Mat(a.base, vecs).row_space_basis()
    while True:
        sp = Span(basis)
        new = []
        for u in basis.rows:
            for v in basis.rows:
                w = a.mul(tuple(u), tuple(v))
                if not sp.contains(w):
                    new.append(list(w))
                    basis = Mat(a.base, basis.rows + [list(w)]).row_space_basis()
                    sp = Span(basis)
        if not new:
            return sp


# ---------------------------------------------------------------------------
# bound quiver algebras
# ---------------------------------------------------------------------------

def path_algebra(q: Quiver, relations, f: GF, length_cap=PATH_CAP) -> Algebra:
    """The quotient of the path algebra of ``q`` by admissible relations.

    ``relations`` is a list of linear combinations, each a list of
    ``(coefficient, [arrow names])`` with all terms parallel and of length
    >= 2.  The quotient must be finite-dimensional; the construction finds
    the least L with every length-L path in the ideal and takes reduced
    paths as the basis.
    """
    arrow_ix = {name: k for k, (_, _, name) in enumerate(q.arrows)}
    rels = []
    for rel in relations:
        terms = []
        for coeff, names in rel:
            seq = tuple(arrow_ix[nm] for nm in names)
            if len(seq) < 2:
                raise ValueError("relations must lie in the square of the arrow ideal")
            for u, v in zip(seq, seq[1:]):
                if q.arrows[u][1] != q.arrows[v][0]:
                    raise ValueError(f"non-composable relation term {names}")
            terms.append((coeff % f.p if f.n == 1 else coeff, seq))
        if not terms:
            continue
        st = {(q.arrows[seq[0]][0], q.arrows[seq[-1]][1]) for _, seq in terms}
        if len(st) != 1:
            raise ValueError("relation terms must be parallel paths")
        rels.append(terms)

    max_rel_len = max((len(seq) for terms in rels for _, seq in terms), default=2)

    L = max(2, max_rel_len)
    while True:
        paths = _paths_up_to(q, L)
        if len(paths) > PATH_COUNT_CAP:
            raise CapExceeded("path count explodes; quotient looks infinite-dimensional")
        ok = _ideal_kills_top_layer(q, f, rels, paths, L)
        if ok:
            break
        L += 1
        if L > length_cap:
            raise CapExceeded(
                f"no arrow-ideal power enters the relation ideal within length {length_cap}; "
                "the quotient is infinite-dimensional or the ideal is not admissible")

    # rebuild with a window wide enough to reduce any product of basis paths
    window = 2 * L - 1
    paths = _paths_up_to(q, window)
    cols = sorted(range(len(paths)), key=lambda i: (-len(paths[i][1]), i))
    col_of = {paths[c][0:2]: r for r, c in enumerate(cols)}  # path -> column
    ordered = [paths[c] for c in cols]

    gens = _ideal_generators(q, f, rels, paths, window)
    rows = []
    for g in gens:
        vec = [0] * len(paths)
        for coeff, p in g:
            vec[col_of[p]] = f.add(vec[col_of[p]], coeff)
        rows.append(vec)
    if rows:
        R, pivots = Mat(f, rows).rref()
        pivots = set(pivots)
        ideal = Span(Mat(f, R.rows[: len(pivots)])) if pivots else None
    else:
        pivots = set()
        ideal = None

    basis_cols = [c for c in range(len(paths)) if c not in pivots]
    for c in basis_cols:
        if len(ordered[c][1]) >= L:
            raise AssertionError("long path survived reduction")  # unreachable
    basis_cols.sort(key=lambda c: (len(ordered[c][1]), ordered[c]))
    basis_paths = [ordered[c] for c in basis_cols]
    pos_of = {c: i for i, c in enumerate(basis_cols)}

    def reduce_vec(vec):
        if ideal is not None:
            vec = ideal.reduce(vec)
        out = [0] * len(basis_paths)
        for c, x in enumerate(vec):
            if x:
                out[pos_of[c]] = x
        return tuple(out)

    names = []
    for src, seq in basis_paths:
        if not seq:
            names.append(f"e{q.vertices[src]}")
        else:
            names.append("*".join(q.arrows[k][2] for k in seq))

    dim = len(basis_paths)
    table = [[None] * dim for _ in range(dim)]
    for i, (si, pi) in enumerate(basis_paths):
        ti = q.arrows[pi[-1]][1] if pi else si
        for j, (sj, pj) in enumerate(basis_paths):
            if ti != sj:
                table[i][j] = (0,) * dim
                continue
            concat = (si, pi + pj)
            vec = [0] * len(paths)
            vec[col_of[concat]] = 1
            table[i][j] = reduce_vec(vec)

    unit = [0] * dim
    idem = []
    for v in range(q.n):
        e = [0] * dim
        e[basis_paths.index((v, ()))] = 1
        idem.append(tuple(e))
        unit = [f.add(a, b) for a, b in zip(unit, e)]

    a = Algebra(f, names, table, unit, idempotents=idem, tag="bound-quiver",
                meta={"quiver": q,
                      "path_of_basis": basis_paths,
                      "rad_indices": [i for i, (_, seq) in enumerate(basis_paths) if seq]})
    return a


def _paths_up_to(q: Quiver, L):
    by_len = [[(v, ()) for v in range(q.n)]]
    for _ in range(L):
        nxt = []
        for src, seq in by_len[-1]:
            end = q.arrows[seq[-1]][1] if seq else src
            for k, (s, t, _) in enumerate(q.arrows):
                if s == end:
                    nxt.append((src, seq + (k,)))
        by_len.append(nxt)
        if len(sum(by_len, [])) > PATH_COUNT_CAP:
            break
    return [p for layer in by_len for p in layer]


def _ideal_generators(q: Quiver, f: GF, rels, paths, L):
    """All u*r*v with every term inside the length-<=L window."""
    paths_from = {}
    paths_into = {}
    for src, seq in paths:
        tgt = q.arrows[seq[-1]][1] if seq else src
        paths_from.setdefault(src, []).append((src, seq))
        paths_into.setdefault(tgt, []).append((src, seq))
    out = []
    for terms in rels:
        rsrc = q.arrows[terms[0][1][0]][0]
        rtgt = q.arrows[terms[0][1][-1]][1]
        rmax = max(len(seq) for _, seq in terms)
        for usrc, useq in paths_into.get(rsrc, []):
            if len(useq) + rmax > L:
                continue
            for vsrc, vseq in paths_from.get(rtgt, []):
                if len(useq) + rmax + len(vseq) > L:
                    continue
                g = [(coeff, (usrc, useq + seq + vseq)) for coeff, seq in terms]
                out.append(g)
    return out


def _ideal_kills_top_layer(q, f, rels, paths, L):
    top = [p for p in paths if len(p[1]) == L]
    if not top:
        return True
    col_of = {}
    cols = sorted(range(len(paths)), key=lambda i: (-len(paths[i][1]), i))
    for r, c in enumerate(cols):
        col_of[paths[c][0:2]] = r
    rows = []
    for g in _ideal_generators(q, f, rels, paths, L):
        vec = [0] * len(paths)
        for coeff, p in g:
            vec[col_of[p]] = f.add(vec[col_of[p]], coeff)
        rows.append(vec)
    if not rows:
        return False
    _, pivots = Mat(f, rows).rref()
    pivset = set(pivots)
    return all(col_of[p[0:2]] in pivset for p in top)


# ---------------------------------------------------------------------------
# structure-constant algebras
# ---------------------------------------------------------------------------

def algebra_from_structure_constants(table, unit, f: GF, basis_names=None) -> Algebra:
    """Validate a raw table and compute its primitive idempotents."""
    dim = len(table)
    if basis_names is None:
        basis_names = [f"b{i}" for i in range(dim)]
    a = Algebra(f, basis_names, table, unit, tag="structure-constant")
    a._pidem = _refine_idempotents(a, [a.unit])
    a.idempotents = list(a._pidem)
    return a


# ---------------------------------------------------------------------------
# radical
# ---------------------------------------------------------------------------

def radical(a: Algebra):
    """Basis (list of coordinate tuples) of the Jacobson radical."""
    if a._rad is not None:
        return a._rad
    if a.meta.get("rad_indices") is not None:
        rad = [a.basis_elt(i) for i in a.meta["rad_indices"]]
    else:
        rad = _radical_charp(a)
        _check_nilpotent_ideal(a, rad)
    a._rad = rad
    return rad


def _radical_charp(a: Algebra):
    """Radical via the characteristic-p chain of trace-form kernels.

    Stage i intersects with the kernel of (x, y) -> c_{p^i}(xy), where c_j
    is the coefficient of lambda^(dim - j) in the characteristic polynomial
    of right multiplication on the algebra.  The predicate is additive and
    p^i-semilinear in x on the current ideal, so each stage is one linear
    solve after twisting coordinates by the inverse Frobenius power.
    """
    f = a.base
    n = a.dim
    if n == 0:
        return []
    basis = [a.basis_elt(i) for i in range(n)]
    i = 0
    pi = 1  # p^i
    while pi <= n:
        t = len(basis)
        if t == 0:
            break
        rows = []
        for x in basis:
            row = []
            for y in basis:
                cp = a.rmat(a.mul(x, y)).charpoly()
                row.append(cp[n - pi])
            rows.append(row)
        eta = Mat(f, rows).left_nullspace()
        # untwist: xi_j = eta_j^(1/p^i)
        e_inv = (f.n - (i % f.n)) % f.n
        new_basis = []
        for v in eta:
            xs = []
            for c in v:
                for _ in range(e_inv):
                    c = f.frob(c)
                xs.append(c)
            w = [0] * a.dim
            for c, b in zip(xs, basis):
                if c:
                    w = [f.add(u, f.mul(c, bv)) for u, bv in zip(w, b)]
            new_basis.append(tuple(w))
        if new_basis:
            rows = Mat(f, [list(v) for v in new_basis]).row_space_basis().rows
            basis = [tuple(r) for r in rows]
        else:
            basis = []
        i += 1
        pi *= f.p
    return basis


def _check_nilpotent_ideal(a: Algebra, rad):
    """Sanity check: the computed space is a nilpotent two-sided ideal."""
    if not rad:
        return
    f = a.base
    sp = Span(Mat(f, [list(v) for v in rad]).row_space_basis())
    for r in rad:
        for i in range(a.dim):
            b = a.basis_elt(i)
            if not sp.contains(a.mul(r, b)) or not sp.contains(a.mul(b, r)):
                raise AssertionError("radical candidate is not an ideal")
    if _nilpotency_index(a, rad) is None:
        raise AssertionError("radical candidate is not nilpotent")


def _nilpotency_index(a: Algebra, gens):
    """Least m with (span of gens as ideal power chain)^m = 0, or None."""
    cur = [list(v) for v in gens]
    m = 1
    while cur:
        if m > a.dim + 1:
            return None
        nxt = []
        for u in cur:
            for v in gens:
                w = a.mul(tuple(u), tuple(v))
                if any(w):
                    nxt.append(list(w))
        if nxt:
            nxt = Mat(a.base, nxt).row_space_basis().rows
        cur = [r for r in nxt if any(r)]
        m += 1
    return m


def radical_brute(a: Algebra, cap=ENUM_CAP):
    """Oracle: rad = {x : x*y is nilpotent for every element y}.

    Exponential in dim; only for cross-checking on tiny instances.
    """
    if a.base.q ** (2 * a.dim) > cap:
        raise CapExceeded("brute radical scan too large")
    els = list(a.elements())
    members = []
    for x in els:
        ok = True
        for y in els:
            z = a.mul(x, y)
            nil = False
            acc = z
            for _ in range(a.dim + 1):
                if not any(acc):
                    nil = True
                    break
                acc = a.mul(acc, z)
            if not nil:
                ok = False
                break
        if ok:
            members.append(list(x))
    if not members:
        return []
    rows = Mat(a.base, members).row_space_basis().rows
    return [tuple(r) for r in rows]


# ---------------------------------------------------------------------------
# quotients, corners, idempotents
# ---------------------------------------------------------------------------

class QuotientData:
    def __init__(self, alg, proj, lift):
        self.alg = alg
        self.proj = proj
        self.lift = lift


def quotient_by_ideal(a: Algebra, ideal_rows) -> QuotientData:
    """The quotient algebra with projection/lift along a complement basis."""
    f = a.base
    if not ideal_rows:
        ident = lambda v: tuple(v)
        return QuotientData(a, ident, ident)
    basis = Mat(f, [list(r) for r in ideal_rows]).row_space_basis()
    sp = Span(basis)
    pivots = set(sp._pivots)
    rep_cols = [c for c in range(a.dim) if c not in pivots]

    def proj(v):
        red = sp.reduce(list(v))
        return tuple(red[c] for c in rep_cols)

    def lift(w):
        v = [0] * a.dim
        for c, x in zip(rep_cols, w):
            v[c] = x
        return tuple(v)

    dim = len(rep_cols)
    table = [[proj(a.mul(lift(_unit_vec(dim, i)), lift(_unit_vec(dim, j))))
              for j in range(dim)] for i in range(dim)]
    alg = Algebra(f, [a.basis_names[c] for c in rep_cols], table,
                  proj(a.unit), tag="derived", validate=False)
    return QuotientData(alg, proj, lift)


def _unit_vec(d, i):
    v = [0] * d
    v[i] = 1
    return tuple(v)


def corner_algebra(a: Algebra, e):
    """(C, include) for the corner e*A*e with unit e."""
    basis = a.peirce_basis(e, e)
    sp = Span(basis)
    dim = basis.r
    rows = basis.rows

    def include(w):
        f = a.base
        acc = [0] * a.dim
        for c, row in zip(w, rows):
            if c:
                acc = [f.add(x, f.mul(c, y)) for x, y in zip(acc, row)]
        return tuple(acc)

    table = [[sp.coords(a.mul(tuple(rows[i]), tuple(rows[j])))
              for j in range(dim)] for i in range(dim)]
    unit = sp.coords(list(e))
    if unit is None:
        raise AssertionError("corner unit missing from corner basis")
    C = Algebra(a.base, [f"c{i}" for i in range(dim)], table, unit,
                tag="derived", validate=False)
    return C, include


def _find_nontrivial_idempotent(d: Algebra, cap=ENUM_CAP):
    """Scan a (semisimple) algebra for an idempotent != 0, 1.

    Exhaustion certifies that none exists, i.e. the algebra is local
    (for semisimple input: a division ring, hence here a field).
    """
    zero = d.zero()
    for x in d.elements(cap):
        if x == zero or x == d.unit:
            continue
        if d.mul(x, x) == x:
            return x
    return None


def lift_idempotent(a: Algebra, qd: QuotientData, ebar, nil_index):
    """Lift an idempotent along a nilpotent ideal (CRT in k[x]).

    With u*x^m + v*(1-x)^m = 1, the element e = u(t)*t^m is an idempotent
    congruent to t for any t with t^2 = t mod the ideal.
    """
    f = a.base
    t = qd.lift(ebar)
    m = nil_index
    xm = [0] * m + [1]
    one_minus_x_m = [1]
    for _ in range(m):
        one_minus_x_m = poly_mul(f, one_minus_x_m, [1, f.neg(1)])
    g, u, _ = poly_xgcd(f, xm, one_minus_x_m)
    assert poly_trim(g) == [1]
    tm = a.power(t, m)
    # u(t) * t^m
    acc = a.zero()
    tp = a.unit
    for c in u:
        if c:
            acc = a.add(acc, a.smul(c, a.mul(tp, tm)))
        tp = a.mul(tp, t)
    e = acc
    if a.mul(e, e) != e or qd.proj(e) != ebar:
        raise AssertionError("idempotent lifting failed")
    return e


def _try_split_idempotent(a: Algebra, e):
    """Split e into two orthogonal idempotents, or None if e is primitive."""
    C, include = corner_algebra(a, e)
    rad = radical(C)
    qd = quotient_by_ideal(C, rad)
    ebar = _find_nontrivial_idempotent(qd.alg)
    if ebar is None:
        return None
    if rad:
        m = _nilpotency_index(C, rad)
        e1_c = lift_idempotent(C, qd, ebar, m)
    else:
        e1_c = qd.lift(ebar)
    e1 = include(e1_c)
    e2 = tuple(a.base.sub(x, y) for x, y in zip(e, e1))
    assert a.mul(e1, e1) == e1 and a.mul(e2, e2) == e2
    assert a.mul(e1, e2) == a.zero() and a.mul(e2, e1) == a.zero()
    return [e1, e2]


def _refine_idempotents(a: Algebra, start):
    work = list(start)
    out = []
    while work:
        e = work.pop(0)
        split = _try_split_idempotent(a, e)
        if split is None:
            out.append(e)
        else:
            work = split + work
    return out


def primitive_idempotents(a: Algebra):
    """A complete set of orthogonal primitive idempotents."""
    if a._pidem is not None:
        return a._pidem
    if a.tag in ("bound-quiver", "species"):
        # trivial paths / vertex units have local corners already
        a._pidem = list(a.idempotents)
    else:
        a._pidem = _refine_idempotents(a, a.idempotents)
    return a._pidem


# ---------------------------------------------------------------------------
# scalar extension
# ---------------------------------------------------------------------------

def tensor_up(a: Algebra, m: int) -> Algebra:
    """The same structure constants read over the degree-m extension field.

    Idempotents are refined afterwards: primitive ones can split (the
    degree-0 field components decompose over the bigger field).
    """
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    em = embed(a.base, m)
    K = em.big
    conv = em.map
    table = [[tuple(conv(c) for c in a.table[i][j]) for j in range(a.dim)]
             for i in range(a.dim)]
    unit = tuple(conv(c) for c in a.unit)
    idem = [tuple(conv(c) for c in e) for e in a.idempotents]
    meta = {"extension_of": a, "embedding": em}
    if a.tag == "bound-quiver":
        meta["quiver"] = a.meta.get("quiver")
        meta["path_of_basis"] = a.meta.get("path_of_basis")
        meta["rad_indices"] = a.meta.get("rad_indices")
        aK = Algebra(K, a.basis_names, table, unit, idempotents=idem,
                     tag="bound-quiver", meta=meta, validate=False)
        aK._pidem = list(aK.idempotents)
        return aK
    if a.tag == "species":
        # the positive part still spans the radical after base change
        meta["rad_indices"] = a.meta.get("rad_indices")
    aK = Algebra(K, a.basis_names, table, unit, idempotents=idem,
                 tag="derived", meta=meta, validate=False)
    aK._pidem = _refine_idempotents(aK, idem)
    aK.idempotents = list(aK._pidem)
    return aK


# ---------------------------------------------------------------------------
# species
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RSpeciesCombinatorial:
    """Combinatorial data of a species with division algebras R or C."""
    quiver: Quiver
    vertex_tags: tuple        # "R" | "C" per vertex
    arrow_tags: tuple         # "natural" | "conjugate" per arrow
    mod_rad_square: bool = False

    def __post_init__(self):
        for t in self.vertex_tags:
            if t not in ("R", "C"):
                raise ValueError(f"bad vertex tag {t}")
        for (s, t, _), tag in zip(self.quiver.arrows, self.arrow_tags):
            if tag not in ("natural", "conjugate"):
                raise ValueError(f"bad arrow tag {tag}")
            if tag == "conjugate" and not (
                    self.vertex_tags[s] == "C" and self.vertex_tags[t] == "C"):
                raise ValueError("conjugate tag needs C at both endpoints")


@dataclass(frozen=True)
class ComplexifiedSpecies:
    quiver: Quiver
    rad_square_transfers: bool


def complexify_species(s: RSpeciesCombinatorial) -> ComplexifiedSpecies:
    """The quiver of the scalar-extended algebra of an R/C species.

    Every C vertex splits in two; each arrow contributes one or two arrows
    according to the endpoint tags, with the conjugate bimodule crossing
    the two copies.  When the species was taken modulo X tensor X, the same
    quiver modulo paths of length two presents the extended algebra.
    """
    q = s.quiver
    verts = []
    plain = {}
    barred = {}
    for i, v in enumerate(q.vertices):
        if s.vertex_tags[i] == "R":
            plain[i] = len(verts)
            verts.append(str(v))
        else:
            plain[i] = len(verts)
            verts.append(str(v))
            barred[i] = len(verts)
            verts.append(f"{v}_bar")
    arrows = []
    for (a, b, nm), tag in zip(q.arrows, s.arrow_tags):
        ta, tb = s.vertex_tags[a], s.vertex_tags[b]
        if ta == "R" and tb == "R":
            arrows.append((plain[a], plain[b], nm))
        elif ta == "R" and tb == "C":
            arrows.append((plain[a], plain[b], nm))
            arrows.append((plain[a], barred[b], f"{nm}_bar"))
        elif ta == "C" and tb == "R":
            arrows.append((plain[a], plain[b], nm))
            arrows.append((barred[a], plain[b], f"{nm}_bar"))
        elif tag == "natural":
            arrows.append((plain[a], plain[b], nm))
            arrows.append((barred[a], barred[b], f"{nm}_bar"))
        else:
            arrows.append((barred[a], plain[b], nm))
            arrows.append((plain[a], barred[b], f"{nm}_bar"))
    return ComplexifiedSpecies(Quiver(tuple(verts), tuple(arrows)),
                               rad_square_transfers=True)


@dataclass(frozen=True)
class SpeciesFq:
    """A species over a finite field: field extensions at vertices, twisted
    extension bimodules at arrows.

    Arrow data ``(degree, twist)``: the bimodule is the degree-``degree``
    extension of the base, with the source field acting through the
    canonical embedding and the target field through the embedding composed
    with ``twist`` powers of the base-field Frobenius.
    """
    base: GF
    quiver: Quiver
    vertex_degrees: tuple
    arrow_data: tuple        # (degree, twist) per arrow
    rad_power: int | None = None

    def __post_init__(self):
        for (s, t, _), (deg, twist) in zip(self.quiver.arrows, self.arrow_data):
            ds, dt = self.vertex_degrees[s], self.vertex_degrees[t]
            if deg % ds or deg % dt:
                raise ValueError("arrow degree must be a multiple of both endpoint degrees")
            if not (0 <= twist < dt):
                raise ValueError("twist exponent must be reduced modulo the target degree")


def species_algebra(s: SpeciesFq, length_cap=PATH_CAP) -> Algebra:
    """The tensor path algebra of a finite-field species.

    Degree-0 part is the product of the vertex fields; the degree-l part is
    spanned by l-fold tensors along composable arrow sequences, with tensors
    over the intermediate fields realized as explicit balancing quotients.
    """
    k = s.base
    q = s.quiver
    vfields = [embed(k, d) for d in s.vertex_degrees]      # k -> D_a
    afields = [embed(k, d) for d, _ in s.arrow_data]       # k -> X_alpha
    # D_src -> X and D_tgt -> X (the latter pre-twist)
    left_emb = []
    right_emb = []
    for (a, b, _), (deg, twist) in zip(q.arrows, s.arrow_data):
        left_emb.append(embed(vfields[a].big, deg // s.vertex_degrees[a]))
        right_emb.append(embed(vfields[b].big, deg // s.vertex_degrees[b]))

    def right_act(aix, x, d):
        """x * d on the bimodule of arrow aix (d in the target field)."""
        X = afields[aix].big
        y = right_emb[aix].map(d)
        twist = s.arrow_data[aix][1]
        for _ in range(twist * k.n):
            y = X.frob(y)
        return X.mul(x, y)

    def left_act(aix, d, x):
        X = afields[aix].big
        return X.mul(left_emb[aix].map(d), x)

    # composable arrow sequences, by length
    cap = s.rad_power if s.rad_power is not None else length_cap + 1
    total = sum(s.vertex_degrees)
    arrow_seqs = [[]]
    cur = [(i,) for i in range(len(q.arrows))]
    deg = 1
    pieces = {}  # seq -> (basis tuples, Span or None, raw dims)
    while deg < cap and cur:
        arrow_seqs.append(cur)
        nxt = []
        for seq in cur:
            end = q.arrows[seq[-1]][1]
            for i2, (a2, b2, _) in enumerate(q.arrows):
                if a2 == end:
                    nxt.append(seq + (i2,))
        for seq in cur:
            pieces[seq] = _tensor_piece(s, seq, afields, vfields,
                                        left_act, right_act)
            total += len(pieces[seq][0])
        cur = nxt
        deg += 1
        if total > PATH_COUNT_CAP:
            raise CapExceeded("tensor algebra dimension explodes")
    if cur and s.rad_power is None:
        raise CapExceeded(
            f"tensor algebra not nilpotent within degree {length_cap}; "
            "pass an explicit radical power")

    # ---- assemble the global basis -------------------------------------------
    basis = []      # ("v", vertex, j) or ("t", seq, index)
    names = []
    for v in range(q.n):
        for j in range(s.vertex_degrees[v]):
            basis.append(("v", v, j))
            names.append(f"{q.vertices[v]}.g{j}" if s.vertex_degrees[v] > 1
                         else f"e{q.vertices[v]}")
    for ln in range(1, len(arrow_seqs)):
        for seq in arrow_seqs[ln]:
            for t, _ in enumerate(pieces[seq][0]):
                basis.append(("t", seq, t))
                names.append("*".join(q.arrows[i][2] for i in seq) +
                             (f".t{t}" if len(pieces[seq][0]) > 1 else ""))
    index = {b: i for i, b in enumerate(basis)}
    dim = len(basis)

    def vert_elt_coords(v, x):
        """Coordinates of the field element x of D_v in the global basis."""
        out = [0] * dim
        for j, c in enumerate(vfields[v].coords(x)):
            out[index[("v", v, j)]] = c
        return out

    def tensor_coords(seq, raw_vec):
        out = [0] * dim
        red = _reduce_tensor(pieces[seq], raw_vec)
        for t, c in enumerate(red):
            out[index[("t", seq, t)]] = c
        return out

    table = [[(0,) * dim] * dim for _ in range(dim)]
    f = k
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            table[i][j] = tuple(_species_mul(
                s, q, vfields, afields, pieces, left_act, right_act,
                vert_elt_coords, tensor_coords, bi, bj, dim))

    unit = [0] * dim
    idem = []
    for v in range(q.n):
        e = vert_elt_coords(v, 1)
        idem.append(tuple(e))
        unit = [f.add(x, y) for x, y in zip(unit, e)]

    rad_ix = [i for i, b in enumerate(basis) if b[0] == "t"]
    return Algebra(k, names, table, unit, idempotents=idem, tag="species",
                   meta={"species": s, "basis_keys": basis,
                         "rad_indices": rad_ix})


def _tensor_piece(s, seq, afields, vfields, left_act, right_act):
    """Reduced basis of X_{a_1} (x)_D ... (x)_D X_{a_l} for one arrow sequence.

    Raw coordinates index tuples of per-factor basis exponents; the balancing
    relations (x*d) (x) y = x (x) (d*y) at each junction are quotiented out by
    row reduction, and the surviving coordinate tuples form the basis.
    """
    k = s.base
    dims = [len(afields[i].basis) for i in seq]
    if len(seq) == 1:
        sz = dims[0]
        return ([(j,) for j in range(sz)], None, dims)
    shape = list(itertools.product(*[range(d) for d in dims]))
    pos = {t: i for i, t in enumerate(shape)}
    rows = []
    for spot in range(len(seq) - 1):
        aix, bix = seq[spot], seq[spot + 1]
        mid = s.quiver.arrows[aix][1]
        Dm = vfields[mid].big
        Xa, Xb = afields[aix], afields[bix]
        # the relation is linear in d and in x, y, and the d*g-relation
        # follows from the g-relation by sliding, so the single generator
        # g of D_mid = k[g] spans the whole balancing space
        dgen = Dm.gen
        for u in range(dims[spot]):
            for v in range(dims[spot + 1]):
                ud = right_act(aix, Xa.basis[u], dgen)
                dv = left_act(bix, dgen, Xb.basis[v])
                lhs = Xa.coords(ud)
                rhs = Xb.coords(dv)
                for rest in itertools.product(
                        *[range(d) for t, d in enumerate(dims)
                          if t not in (spot, spot + 1)]):
                    vec = [0] * len(shape)
                    rest = list(rest)
                    for j, c in enumerate(lhs):
                        if c:
                            tup = _splice(rest, spot, j, v, len(dims))
                            vec[pos[tup]] = k.add(vec[pos[tup]], c)
                    for j, c in enumerate(rhs):
                        if c:
                            tup = _splice(rest, spot, u, j, len(dims))
                            vec[pos[tup]] = k.sub(vec[pos[tup]], c)
                    if any(vec):
                        rows.append(vec)
    if not rows:
        return (shape, None, dims)
    R, piv = Mat(k, rows).rref()
    sp = Span(Mat(k, R.rows[: len(piv)]))
    keep = [t for i, t in enumerate(shape) if i not in set(piv)]
    return (keep, (sp, shape, pos, keep), dims)


def _splice(rest, spot, u, v, nfac):
    out = []
    ri = 0
    for t in range(nfac):
        if t == spot:
            out.append(u)
        elif t == spot + 1:
            out.append(v)
        else:
            out.append(rest[ri])
            ri += 1
    return tuple(out)


def _reduce_tensor(piece, raw_vec):
    keep, red, dims = piece
    if red is None:
        return raw_vec
    sp, shape, pos, kept = red
    vec = sp.reduce(raw_vec)
    keep_pos = [pos[t] for t in kept]
    return [vec[i] for i in keep_pos]


def _species_mul(s, q, vfields, afields, pieces, left_act, right_act,
                 vert_elt_coords, tensor_coords, bi, bj, dim):
    k = s.base
    zero = [0] * dim
    if bi[0] == "v" and bj[0] == "v":
        if bi[1] != bj[1]:
            return zero
        v = bi[1]
        D = vfields[v].big
        x = D.mul(vfields[v].basis[bi[2]], vfields[v].basis[bj[2]])
        return vert_elt_coords(v, x)
    if bi[0] == "v" and bj[0] == "t":
        v, seq = bi[1], bj[1]
        if q.arrows[seq[0]][0] != v:
            return zero
        d = vfields[v].basis[bi[2]]
        return _act_on_tensor(s, q, afields, pieces, tensor_coords,
                              seq, bj[2], d, left_act, right_act, dim, side="L")
    if bi[0] == "t" and bj[0] == "v":
        seq, v = bi[1], bj[1]
        if q.arrows[seq[-1]][1] != v:
            return zero
        d = vfields[v].basis[bj[2]]
        return _act_on_tensor(s, q, afields, pieces, tensor_coords,
                              seq, bi[2], d, left_act, right_act, dim, side="R")
    # tensor * tensor: concatenate if composable
    seq1, seq2 = bi[1], bj[1]
    if q.arrows[seq1[-1]][1] != q.arrows[seq2[0]][0]:
        return zero
    seq = seq1 + seq2
    if seq not in pieces:
        return zero  # beyond the radical power: the product is zero
    t1 = pieces[seq1][0][bi[2]]
    t2 = pieces[seq2][0][bj[2]]
    return tensor_coords(seq, _raw_full(pieces[seq], t1 + t2, k))


def _raw_full(piece, tup, k):
    keep, red, dims = piece
    if red is None:
        vec = [0] * len(keep)
        vec[keep.index(tup)] = 1
        return vec
    sp, shape, pos, kept = red
    vec = [0] * len(shape)
    vec[pos[tup]] = 1
    return vec


def _act_on_tensor(s, q, afields, pieces, tensor_coords, seq, tix, d,
                   left_act, right_act, dim, side):
    k = s.base
    keep, red, dims = pieces[seq]
    tup = keep[tix]
    spot = 0 if side == "L" else len(seq) - 1
    aix = seq[spot]
    x = afields[aix].basis[tup[spot]]
    y = left_act(aix, d, x) if side == "L" else right_act(aix, x, d)
    cs = afields[aix].coords(y)
    if red is None:
        raw = [0] * len(keep)
        for j, c in enumerate(cs):
            if c:
                t2 = tuple(j if t == spot else tup[t] for t in range(len(tup)))
                raw[keep.index(t2)] = k.add(raw[keep.index(t2)], c)
        return tensor_coords(seq, raw)
    sp, shape, pos, kept = red
    raw = [0] * len(shape)
    for j, c in enumerate(cs):
        if c:
            t2 = tuple(j if t == spot else tup[t] for t in range(len(tup)))
            raw[pos[t2]] = k.add(raw[pos[t2]], c)
    return tensor_coords(seq, raw)


# ---------------------------------------------------------------------------
# isomorphism search (test helper; bounded, not used by core operations)
# ---------------------------------------------------------------------------

def find_algebra_isomorphism(a: Algebra, b: Algebra, cap=ENUM_CAP):
    """Search for an isomorphism a -> b as a basis-change matrix, or None.

    Only supports split basic algebras (each diagonal corner semisimple part
    one-dimensional over the base); any isomorphism can be normalized to send
    primitive idempotents to primitive idempotents, so the search runs over
    idempotent matchings and blockwise images of a radical basis.  Bounded
    and only used in tests.
    """
    if a.dim != b.dim or a.base is not b.base:
        return None
    pa, pb = primitive_idempotents(a), primitive_idempotents(b)
    if len(pa) != len(pb):
        return None
    rada, radb = radical(a), radical(b)
    if len(rada) != len(radb):
        return None
    if len(pa) + len(rada) != a.dim or len(pb) + len(radb) != b.dim:
        raise CapExceeded("isomorphism search needs split basic algebras")
    blocks_a = _peirce_rad_basis(a, pa, rada)
    for perm in itertools.permutations(range(len(pb))):
        pbp = [pb[i] for i in perm]
        blocks_b = _peirce_rad_basis(b, pbp, radb)
        M = _iso_try(a, b, pa, pbp, blocks_a, blocks_b, cap)
        if M is not None:
            return M
    return None


def _peirce_rad_basis(a, pa, rada):
    """Radical basis split into Peirce blocks e_i rad e_j."""
    f = a.base
    out = {}
    total = 0
    for i, ei in enumerate(pa):
        for j, ej in enumerate(pa):
            rows = [list(a.mul(ei, a.mul(r, ej))) for r in rada]
            rows = [r for r in rows if any(r)]
            if rows:
                rows = Mat(f, rows).row_space_basis().rows
            out[(i, j)] = rows
            total += len(rows)
    assert total == len(rada)
    return out


def _iso_try(a, b, pa, pb, blocks_a, blocks_b, cap):
    f = a.base
    slots = []  # (block key, source row, target block rows)
    sizes = []
    for key, rows in sorted(blocks_a.items()):
        tgt = blocks_b.get(key, [])
        if len(tgt) != len(rows):
            return None  # block dimensions differ under this matching
        for r in rows:
            slots.append((key, r, tgt))
            sizes.append(len(tgt))
    space = 1
    for sz in sizes:
        space *= f.q ** sz
    if space > cap:
        raise CapExceeded("isomorphism search space too large")
    src_rows = [list(e) for e in pa] + [r for _, r, _ in slots]
    S = Mat(f, src_rows)
    if not S.is_invertible():
        raise CapExceeded("peirce-adapted basis is not a basis")
    Sinv = S.inverse()
    for choice in itertools.product(*[
            itertools.product(range(f.q), repeat=sz) for sz in sizes]):
        rows = [list(e) for e in pb]
        for cs, (_, _, tgt) in zip(choice, slots):
            img = [0] * b.dim
            for c, t in zip(cs, tgt):
                if c:
                    img = [f.add(x, f.mul(c, y)) for x, y in zip(img, t)]
            rows.append(img)
        M = Sinv @ Mat(f, rows)
        if not M.is_invertible():
            continue
        if _is_algebra_hom(a, b, M):
            return M
    return None


def _is_algebra_hom(a, b, M):
    if M.apply_left(list(a.unit)) != list(b.unit):
        return False
    images = [M.apply_left(list(a.basis_elt(i))) for i in range(a.dim)]
    for i in range(a.dim):
        for j in range(a.dim):
            lhs = M.apply_left(list(a.table[i][j]))
            rhs = b.mul(tuple(images[i]), tuple(images[j]))
            if tuple(lhs) != rhs:
                return False
    return True
