"""Support tau-tilting theory over a representation-finite algebra.

Everything is indexed through the catalogue of indecomposables: a tau-rigid
pair is stored as (sorted catalogue indices of the module part, sorted vertex
indices of the shifted projective part).  Support tau-tilting pairs are the
size-|Lambda| cliques of the pairwise compatibility graph, Bongartz and
co-Bongartz completions are found through their Fac-characterisations, and
tau-perpendicular subcategories are reduced to module categories over the
endomorphism algebra of their relative projective generator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Algebra
from .gf import Mat
from .rep import (Rep, _cache, _dsum_or_zero, ar_translate, ar_translate_inv,
                  decompose, direct_sum_with_embeddings, dual_rep,
                  endomorphism_algebra, enumerate_ind, ext1, from_action,
                  gen_membership, hom, injective_ind, projective_ind, simples,
                  syzygy, top)


# ---------------------------------------------------------------------------
# catalogue-level tables
# ---------------------------------------------------------------------------

def _tau_tables(a: Algebra):
    """Hom dimensions and translate indices over the full catalogue."""
    c = _cache(a)
    hit = c.get("tau_tables")
    if hit is not None:
        return hit
    cat = enumerate_ind(a)
    n = len(a.idempotents)
    proj_of_vertex = [cat.index_of(projective_ind(a, v)) for v in range(n)]
    inj_of_vertex = [cat.index_of(injective_ind(a, v)) for v in range(n)]
    tau_idx = []
    for X in cat:
        T = ar_translate(X)
        tau_idx.append(None if T.is_zero() else cat.index_of(T))
    homdim = [[hom(X, Y).dim for Y in cat] for X in cat]
    rigid = [i for i in range(len(cat))
             if tau_idx[i] is None or homdim[i][tau_idx[i]] == 0]
    td = {
        "cat": cat,
        "n": n,
        "proj_of_vertex": proj_of_vertex,
        "inj_of_vertex": inj_of_vertex,
        "vertex_of_proj": {pi: v for v, pi in enumerate(proj_of_vertex)},
        "tau": tau_idx,
        "homdim": homdim,
        "rigid": rigid,
    }
    c["tau_tables"] = td
    return td


# ---------------------------------------------------------------------------
# tau-rigid pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TauRigidPair:
    """Basic pair (M, P): catalogue indices for M, vertex indices for P."""
    algebra: Algebra
    m: tuple
    p: tuple

    def module(self) -> Rep:
        return enumerate_ind(self.algebra).rep_of_key(self.m)

    def proj(self) -> Rep:
        return _dsum_or_zero(self.algebra,
                             [projective_ind(self.algebra, v) for v in self.p])

    @property
    def size(self):
        return len(self.m) + len(self.p)

    @property
    def is_stt(self):
        return self.size == len(self.algebra.idempotents)

    def certificate(self):
        M = self.module()
        return {
            "hom_M_tauM": hom(M, ar_translate(M)).dim,
            "hom_P_M": hom(self.proj(), M).dim,
        }

    def __repr__(self):
        return f"TauRigidPair(m={self.m}, p={self.p})"


@dataclass(frozen=True)
class TauInvRigidPair:
    """Dual pair (N, Q): catalogue indices for N, vertex indices for Q."""
    algebra: Algebra
    n: tuple
    q: tuple

    def module(self) -> Rep:
        return enumerate_ind(self.algebra).rep_of_key(self.n)

    def inj(self) -> Rep:
        return _dsum_or_zero(self.algebra,
                             [injective_ind(self.algebra, v) for v in self.q])

    @property
    def is_sttinv(self):
        return len(self.n) + len(self.q) == len(self.algebra.idempotents)

    def certificate(self):
        N = self.module()
        return {
            "hom_tauinvN_N": hom(ar_translate_inv(N), N).dim,
            "hom_N_Q": hom(N, self.inj()).dim,
        }


def is_tau_rigid(M: Rep) -> bool:
    """Hom(M, tau M) = 0."""
    if M.is_zero():
        return True
    return hom(M, ar_translate(M)).dim == 0


def _is_projective(P: Rep) -> bool:
    if P.is_zero():
        return True
    O = syzygy(P)[0]
    return O.is_zero()


def is_tau_rigid_pair(M: Rep, P: Rep) -> bool:
    """Hom(M, tau M) = 0 and P projective with Hom(P, M) = 0."""
    if not _is_projective(P):
        raise ValueError("second component is not projective")
    if not is_tau_rigid(M):
        return False
    if M.is_zero() or P.is_zero():
        return True
    return hom(P, M).dim == 0


def pair_from_reps(a: Algebra, M: Rep, P: Rep, check=True) -> TauRigidPair:
    """The basic pair with the same add-closure as (M, P)."""
    td = _tau_tables(a)
    cat = td["cat"]
    m = tuple(sorted({cat.index_of(X) for X in decompose(M)}))
    pv = set()
    for X in decompose(P):
        i = cat.index_of(X)
        if i not in td["vertex_of_proj"]:
            raise ValueError("second component is not projective")
        pv.add(td["vertex_of_proj"][i])
    out = TauRigidPair(a, m, tuple(sorted(pv)))
    if check and not is_tau_rigid_pair(out.module(), out.proj()):
        raise ValueError("pair is not tau-rigid")
    return out


# ---------------------------------------------------------------------------
# compatibility graph and clique enumeration
# ---------------------------------------------------------------------------

def _compatible(td, x, y):
    homdim, tau, cat = td["homdim"], td["tau"], td["cat"]
    kx, ix = x
    ky, iy = y
    if kx == "p" and ky == "p":
        return True
    if kx == "p":
        kx, ix, ky, iy = ky, iy, kx, ix
    if ky == "p":
        # shifted projective P(v) against a module: Hom(P(v), X) = 0
        return cat[ix].dims[iy] == 0
    ti, tj = tau[ix], tau[iy]
    if tj is not None and homdim[ix][tj]:
        return False
    if ti is not None and homdim[iy][ti]:
        return False
    return True


def _rigid_cliques(a: Algebra, size=None):
    """All cliques of the compatibility graph, optionally of a fixed size."""
    td = _tau_tables(a)
    n = td["n"]
    verts = [("m", i) for i in td["rigid"]] + [("p", v) for v in range(n)]
    out = []

    def emit(cur):
        m = tuple(sorted(i for k, i in cur if k == "m"))
        p = tuple(sorted(i for k, i in cur if k == "p"))
        out.append(TauRigidPair(a, m, p))

    def grow(start, cur):
        if size is None or len(cur) == size:
            emit(cur)
            if size is not None:
                return
        if len(cur) == n:
            return
        for t in range(start, len(verts)):
            v = verts[t]
            if all(_compatible(td, v, w) for w in cur):
                cur.append(v)
                grow(t + 1, cur)
                cur.pop()

    grow(0, [])
    out.sort(key=lambda q: (q.size, q.m, q.p))
    return out


def enumerate_tau_rigid_pairs(a: Algebra):
    """Every basic tau-rigid pair, the empty one included."""
    c = _cache(a)
    if "tau_rigid_pairs" not in c:
        c["tau_rigid_pairs"] = _rigid_cliques(a, size=None)
    return c["tau_rigid_pairs"]


def enumerate_stt(a: Algebra):
    """All basic support tau-tilting pairs (the size-|Lambda| cliques)."""
    c = _cache(a)
    if "stt" not in c:
        pairs = _rigid_cliques(a, size=len(a.idempotents))
        for q in pairs:
            assert is_tau_rigid_pair(q.module(), q.proj())
        c["stt"] = pairs
    return c["stt"]


# ---------------------------------------------------------------------------
# torsion data of a pair
# ---------------------------------------------------------------------------

def fac_set(pair: TauRigidPair) -> frozenset:
    """Fac M as a set of catalogue indices (Gen M; they agree, M tau-rigid)."""
    a = pair.algebra
    c = _cache(a)
    key = ("fac", pair.m)
    if key not in c:
        cat = enumerate_ind(a)
        M = pair.module()
        c[key] = frozenset(j for j in range(len(cat))
                           if gen_membership(cat[j], M))
    return c[key]


def perp_of_set(a: Algebra, ind_set) -> frozenset:
    """{X : Hom(S, X) = 0 for all S in the set}."""
    td = _tau_tables(a)
    homdim = td["homdim"]
    return frozenset(j for j in range(len(td["cat"]))
                     if all(homdim[t][j] == 0 for t in ind_set))


def sub_set(a: Algebra, N: Rep) -> frozenset:
    """Sub N as a set of catalogue indices, through the dual algebra."""
    cat = enumerate_ind(a)
    if N.is_zero():
        return frozenset()
    DN = dual_rep(N)
    return frozenset(j for j in range(len(cat))
                     if gen_membership(dual_rep(cat[j]), DN))


def bperp_set(pair: TauRigidPair) -> frozenset:
    """The Bongartz torsion class  ^perp(tau M) ∩ P^perp."""
    a = pair.algebra
    td = _tau_tables(a)
    cat, homdim, tau = td["cat"], td["homdim"], td["tau"]
    out = []
    for j in range(len(cat)):
        if any(tau[i] is not None and homdim[j][tau[i]] for i in pair.m):
            continue
        if any(cat[j].dims[v] for v in pair.p):
            continue
        out.append(j)
    return frozenset(out)


# ---------------------------------------------------------------------------
# the H map to support tau^{-1}-tilting pairs
# ---------------------------------------------------------------------------

def h_map(pair: TauRigidPair) -> TauInvRigidPair:
    """H(M, P) = (tau M + nu P, nu M_pr), for a support tau-tilting pair."""
    if not pair.is_stt:
        raise ValueError("H is defined on support tau-tilting pairs")
    a = pair.algebra
    td = _tau_tables(a)
    tau, vop = td["tau"], td["vertex_of_proj"]
    nk = [tau[i] for i in pair.m if tau[i] is not None]
    nk += [td["inj_of_vertex"][v] for v in pair.p]
    qv = sorted(vop[i] for i in pair.m if i in vop)
    assert len(set(nk)) == len(nk), "H image is not basic"
    out = TauInvRigidPair(a, tuple(sorted(nk)), tuple(qv))
    cert = out.certificate()
    assert cert["hom_tauinvN_N"] == 0 and cert["hom_N_Q"] == 0
    assert out.is_sttinv
    return out


# ---------------------------------------------------------------------------
# Bongartz and co-Bongartz completions
# ---------------------------------------------------------------------------

def _stt_with_fac(a: Algebra, target) -> TauRigidPair:
    hits = [q for q in enumerate_stt(a) if fac_set(q) == target]
    assert len(hits) == 1, "completion is not unique against Fac"
    return hits[0]


def bongartz(pair: TauRigidPair) -> TauRigidPair:
    """The unique stt pair (M+, P) with Fac M+ = ^perp(tau M) ∩ P^perp."""
    out = _stt_with_fac(pair.algebra, bperp_set(pair))
    assert out.p == pair.p, "Bongartz completion moved the projective part"
    assert set(pair.m) <= set(out.m)
    return out


def cobongartz(pair: TauRigidPair) -> TauRigidPair:
    """The unique stt pair (M-, P-) with Fac M- = Fac M."""
    out = _stt_with_fac(pair.algebra, fac_set(pair))
    assert set(pair.m) <= set(out.m) and set(pair.p) <= set(out.p)
    return out


# ---------------------------------------------------------------------------
# g-vectors, cones, and the fan
# ---------------------------------------------------------------------------

def _top_mult(M: Rep):
    """Multiplicity of each P(i) in the projective cover, from the top."""
    a = M.algebra
    t = top(M)
    S = simples(a)
    out = []
    for i in range(len(a.idempotents)):
        d = S[i].dims[i]
        assert t.dims[i] % d == 0
        out.append(t.dims[i] // d)
    return out


def g_vector(M: Rep):
    """[P0] - [P1] of the minimal presentation, in the projective basis."""
    a = M.algebra
    n = len(a.idempotents)
    if M.is_zero():
        return (0,) * n
    O = syzygy(M)[0]
    m0 = _top_mult(M)
    m1 = _top_mult(O) if not O.is_zero() else [0] * n
    return tuple(x - y for x, y in zip(m0, m1))


def _cone_coords(gens, v):
    """Exact coordinates of v in the (independent) generators, or None."""
    k = len(gens)
    n = len(v)
    if k == 0:
        return [] if all(x == 0 for x in v) else None
    A = [[Fraction(gens[j][i]) for j in range(k)] + [Fraction(v[i])]
         for i in range(n)]
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, n) if A[i][col] != 0), None)
        if piv is None:
            return None  # dependent generators; callers check rank first
        A[r], A[piv] = A[piv], A[r]
        pv = A[r][col]
        A[r] = [x / pv for x in A[r]]
        for i in range(n):
            if i != r and A[i][col]:
                fct = A[i][col]
                A[i] = [x - fct * y for x, y in zip(A[i], A[r])]
        r += 1
    for i in range(r, n):
        if A[i][k] != 0:
            return None
    return [A[j][k] for j in range(k)]


@dataclass(frozen=True)
class GCone:
    """Simplicial cone spanned by integer generator rows."""
    ambient: int
    gens: tuple

    def contains(self, v) -> bool:
        lam = _cone_coords(self.gens, v)
        return lam is not None and all(x >= 0 for x in lam)

    def contains_interior(self, v) -> bool:
        lam = _cone_coords(self.gens, v)
        return (lam is not None and len(lam) == self.ambient
                and all(x > 0 for x in lam))

    def interior_point(self):
        return tuple(sum(g[i] for g in self.gens) for i in range(self.ambient))


def g_cone(pair: TauRigidPair) -> GCone:
    a = pair.algebra
    cat = enumerate_ind(a)
    n = len(a.idempotents)
    gens = [g_vector(cat[i]) for i in pair.m]
    for v in pair.p:
        gens.append(tuple(-1 if t == v else 0 for t in range(n)))
    gens = tuple(gens)
    if gens:
        probe = _cone_coords(gens, [Fraction(0)] * n)
        assert probe is not None, "cone generators are linearly dependent"
    return GCone(n, gens)


@dataclass(frozen=True)
class GFan:
    algebra: Algebra
    cones: dict           # (m, p) -> GCone
    maximal: tuple        # keys of the support tau-tilting pairs


def g_fan(a: Algebra) -> GFan:
    """Cones of every basic tau-rigid pair; maximal ones are the stt pairs."""
    pairs = enumerate_tau_rigid_pairs(a)
    cones = {(q.m, q.p): g_cone(q) for q in pairs}
    maximal = tuple((q.m, q.p) for q in pairs if q.is_stt)
    seen = {}
    for key in maximal:
        fs = frozenset(cones[key].gens)
        assert fs not in seen, "two stt pairs share a maximal cone"
        seen[fs] = key
    return GFan(a, cones, maximal)


# ---------------------------------------------------------------------------
# tau-perpendicular subcategories and Jasso reduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WideSubcat:
    """M^perp ∩ ^perp(tau M) ∩ P^perp as a set of catalogue indices."""
    algebra: Algebra
    inds: frozenset
    pair: TauRigidPair

    def contains_rep(self, X: Rep) -> bool:
        cat = enumerate_ind(self.algebra)
        return all(i in self.inds for i in cat.key(X))

    def members(self):
        cat = enumerate_ind(self.algebra)
        return [cat[i] for i in sorted(self.inds)]


def tau_perp(pair: TauRigidPair) -> WideSubcat:
    a = pair.algebra
    td = _tau_tables(a)
    cat, homdim, tau = td["cat"], td["homdim"], td["tau"]
    out = []
    for j in range(len(cat)):
        if any(homdim[i][j] for i in pair.m):
            continue
        if any(tau[i] is not None and homdim[j][tau[i]] for i in pair.m):
            continue
        if any(cat[j].dims[v] for v in pair.p):
            continue
        out.append(j)
    return WideSubcat(a, frozenset(out), pair)


def relative_projectives(W: WideSubcat):
    """Members with no extensions into any member (ambient Ext^1)."""
    cat = enumerate_ind(W.algebra)
    inds = sorted(W.inds)
    return [j for j in inds
            if all(ext1(cat[j], cat[y]).dim == 0 for y in inds)]


def jasso_reduce(pair: TauRigidPair):
    """(Gamma, transport, relproj): W_(M,P) as a module category.

    Gamma is the endomorphism algebra of the relative projective generator
    (composition-opposite, so Hom(P_W, -) lands in right Gamma-modules);
    transport maps each catalogue index of a W-member to its image module.
    The relative projective count must equal the number of simples the
    reduced category owes, else the engine is broken and we fail loudly.
    """
    a = pair.algebra
    cat = enumerate_ind(a)
    W = tau_perp(pair)
    relproj = relative_projectives(W)
    need = len(a.idempotents) - pair.size
    if len(relproj) != need:
        raise AssertionError(
            f"{len(relproj)} relative projectives for {need} simples")
    if not relproj:
        return None, {}, []
    parts = [cat[j] for j in relproj]
    PW, embeds = direct_sum_with_embeddings(parts)
    ga0 = endomorphism_algebra(PW, opposite=True)
    hbE = ga0.meta["hom_basis"]
    f = a.base
    idem = []
    for emb in embeds:
        cs = hbE.coords(emb.transpose() @ emb)
        assert cs is not None
        idem.append(tuple(cs))
    gamma = Algebra(f, ga0.basis_names, ga0.table, ga0.unit,
                    idempotents=idem, tag="derived",
                    meta=dict(ga0.meta, relproj=tuple(relproj)))
    transport = {}
    for j in sorted(W.inds):
        hbX = hom(PW, cat[j])
        mats = []
        for t in range(gamma.dim):
            rows = [list(hbX.coords(hbE.mats[t] @ F)) for F in hbX.mats]
            mats.append(Mat(f, rows))
        transport[j] = from_action(gamma, mats)
    return gamma, transport, relproj


# ---------------------------------------------------------------------------
# signed tau-exceptional sequences
# ---------------------------------------------------------------------------

def enumerate_signed_tau_exceptional(a: Algebra):
    """All complete signed sequences; entries ("mod"|"shift", catalogue idx).

    The recursion peels off the last entry (an indecomposable tau-rigid
    module, or a shifted indecomposable projective) and continues inside the
    Jasso reduction of its tau-perpendicular subcategory; reduced entries are
    transported back through the equivalence.
    """
    return _signed_seqs(a)


def _signed_seqs(a: Algebra):
    td = _tau_tables(a)
    cat, n = td["cat"], td["n"]
    res = []
    last_choices = [("mod", i) for i in td["rigid"]]
    last_choices += [("shift", td["proj_of_vertex"][v]) for v in range(n)]
    for kind, i in last_choices:
        if kind == "mod":
            pair = TauRigidPair(a, (i,), ())
        else:
            pair = TauRigidPair(a, (), (td["vertex_of_proj"][i],))
        gamma, transport, relproj = jasso_reduce(pair)
        if gamma is None:
            if n == 1:
                res.append(((kind, i),))
            continue
        gcat = enumerate_ind(gamma, sweep=False)
        lam_of = {}
        for j, TX in transport.items():
            lam_of[gcat.index_of(TX)] = j
        assert len(lam_of) == len(gcat), \
            "transport is not a bijection onto the reduced indecomposables"
        for sub in _signed_seqs(gamma):
            mapped = tuple((k2, lam_of[i2]) for k2, i2 in sub)
            res.append(mapped + ((kind, i),))
    return res


def enumerate_tau_exceptional(a: Algebra):
    """The unsigned complete sequences (no shifted entry at any level)."""
    return [s for s in enumerate_signed_tau_exceptional(a)
            if all(kind == "mod" for kind, _ in s)]


def ordered_decompositions_count(a: Algebra) -> int:
    """Ordered decompositions into indecomposables of all basic stt pairs."""
    import math
    return sum(math.factorial(q.size) for q in enumerate_stt(a))


# ---------------------------------------------------------------------------
# TF-orderings
# ---------------------------------------------------------------------------

def _tf_ok(ordered):
    """Each part avoids Fac of the tail; tails here are tau-rigid, so the
    trace test computes Fac membership exactly."""
    if not ordered:
        return True
    a = ordered[0].algebra
    for i in range(len(ordered)):
        tail = _dsum_or_zero(a, ordered[i + 1:])
        for part in decompose(ordered[i]):
            if gen_membership(part, tail):
                return False
    return True


def tf_ordered_decompositions(M: Rep):
    """All TF-orderings of the indecomposable summands of a tau-rigid M."""
    a = M.algebra
    if M.is_zero():
        return [[]]
    if not is_tau_rigid(M):
        raise ValueError("module is not tau-rigid")
    cat = enumerate_ind(a)
    parts = decompose(M)
    ks = [cat.index_of(X) for X in parts]
    if len(set(ks)) != len(ks):
        raise ValueError("module is not basic")
    out = []
    for perm in itertools.permutations(range(len(parts))):
        ordered = [parts[t] for t in perm]
        if _tf_ok(ordered):
            out.append(ordered)
    return out


def is_weakly_tf_preordered(groups) -> bool:
    """Summand groups in order; no indecomposable of a group in Fac(tail)."""
    return _tf_ok(list(groups))


def tf_ordered_refinement(groups):
    """A TF-ordering refining the given group order, or None."""
    pieces = [decompose(g) for g in groups]
    for choice in itertools.product(
            *[itertools.permutations(ps) for ps in pieces]):
        flat = [x for grp in choice for x in grp]
        if _tf_ok(flat):
            return flat
    return None


# ---------------------------------------------------------------------------
# classical tilting modules
# ---------------------------------------------------------------------------

def is_tilting(M: Rep) -> bool:
    """proj.dim <= 1, no self-extensions, |M| = |Lambda|."""
    a = M.algebra
    if M.is_zero():
        return False
    cat = enumerate_ind(a)
    ks = {cat.index_of(X) for X in decompose(M)}
    if len(ks) != len(a.idempotents):
        return False
    O = syzygy(M)[0]
    if not O.is_zero() and not syzygy(O)[0].is_zero():
        return False
    return ext1(M, M).dim == 0


def tilted_algebra(M: Rep) -> Algebra:
    """End(M) (composition-opposite) of a tilting module, flagged as such."""
    if not is_tilting(M):
        raise ValueError("module is not tilting")
    b = endomorphism_algebra(M, opposite=True)
    b.meta["tilted_from"] = M
    return b
