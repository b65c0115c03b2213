"""Scalar extension along F_q < F_{q^m} and restriction back.

An ExtensionContext wires a base algebra to its extended companion from
tensor_up and carries two integer matrices: D tracks how each indecomposable
projective decomposes after extension (the map K_0(proj) -> K_0(proj) in the
projective bases), and R tracks the composition multiplicities of restricted
extended-simples.  On top of the two functors sit the induced maps on
tau-rigid pairs, torsion classes and semibricks, the commuting-square
verifier, and the embedding of g-vector fans.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Algebra, tensor_up
from .gf import Mat
from .rep import (Rep, _cache, composition_vector, decompose, enumerate_ind,
                  from_action, injective_ind, projective_ind, simples,
                  zero_rep)
from .tau import (TauInvRigidPair, TauRigidPair, bongartz, cobongartz,
                  enumerate_stt, enumerate_tau_rigid_pairs, fac_set, g_cone,
                  g_fan, g_vector, h_map, is_tau_rigid_pair, pair_from_reps,
                  tau_perp)
from .tors import (filt_closure, is_brick, is_semibrick, left_semibrick,
                   right_semibrick, simples_of_wide, stt_from_torsion)


@dataclass(frozen=True)
class ExtensionContext:
    base: Algebra
    m: int
    extended: Algebra
    D: tuple        # rows: extended vertices, cols: base vertices
    R: tuple        # rows: base vertices, cols: extended vertices


def extension_context(a: Algebra, m: int) -> ExtensionContext:
    c = _cache(a)
    key = ("extctx", m)
    if key in c:
        return c[key]
    ak = tensor_up(a, m)
    n = len(a.idempotents)
    nk = len(ak.idempotents)
    bigproj = [projective_ind(ak, i) for i in range(nk)]
    catK = enumerate_ind(ak)
    bigproj_idx = [catK.index_of(P) for P in bigproj]
    D = [[0] * n for _ in range(nk)]
    for j in range(n):
        PK = _extend(ak, projective_ind(a, j))
        for part in decompose(PK):
            t = catK.index_of(part)
            assert t in bigproj_idx, "extension of a projective is projective"
            D[bigproj_idx.index(t)][j] += 1
    assert all(any(row) for row in D), \
        "an extended projective class is missing from D"
    R = [[0] * nk for _ in range(n)]
    for j, S in enumerate(simples(ak)):
        cv = composition_vector(_restrict(a, ak, S))
        for i in range(n):
            R[i][j] = cv[i]
    ctx = ExtensionContext(a, m, ak,
                           tuple(tuple(r) for r in D),
                           tuple(tuple(r) for r in R))
    c[key] = ctx
    return ctx


# ---------------------------------------------------------------------------
# the two functors
# ---------------------------------------------------------------------------

def _extend(ak: Algebra, M: Rep) -> Rep:
    em = ak.meta["embedding"]
    if M.is_zero():
        return zero_rep(ak)
    mats = [Mat(ak.base, [[em.map(x) for x in row] for row in F.rows])
            for F in M.mats]
    return from_action(ak, mats)


def extend_rep(M: Rep, ctx: ExtensionContext) -> Rep:
    """M tensored up to the bigger field: same action matrices, re-blocked."""
    if M.algebra is not ctx.base:
        raise ValueError("module is not over the base algebra")
    return _extend(ctx.extended, M)


def _blow(em, F: Mat, f) -> Mat:
    m = em.m
    rows = []
    blocks = [[em.block(x) for x in row] for row in F.rows]
    for r in range(F.r):
        for t in range(m):
            row = []
            for c in range(F.c):
                row.extend(blocks[r][c].rows[t])
            rows.append(row)
    return Mat(f, rows)


def _restrict(a: Algebra, ak: Algebra, X: Rep) -> Rep:
    em = ak.meta["embedding"]
    if X.is_zero():
        return zero_rep(a)
    mats = [_blow(em, F, a.base) for F in X.mats]
    return from_action(a, mats)


def restrict_rep(X: Rep, ctx: ExtensionContext) -> Rep:
    """X as a module over the base: entries blown up to m x m blocks."""
    if X.algebra is not ctx.extended:
        raise ValueError("module is not over the extended algebra")
    return _restrict(ctx.base, ctx.extended, X)


def extend_ind_set(ctx: ExtensionContext, inds) -> frozenset:
    """Catalogue indices over the extension of everything extended from
    the given base catalogue indices."""
    cat = enumerate_ind(ctx.base)
    catK = enumerate_ind(ctx.extended)
    out = set()
    for i in inds:
        out.update(catK.key(extend_rep(cat[i], ctx)))
    return frozenset(out)


# ---------------------------------------------------------------------------
# induced maps
# ---------------------------------------------------------------------------

def lift_pair(pair: TauRigidPair, ctx: ExtensionContext) -> TauRigidPair:
    """(M, P) -> (M_K^b, P_K^b), the basic extension of a tau-rigid pair."""
    if not is_tau_rigid_pair(pair.module(), pair.proj()):
        raise ValueError("pair is not tau-rigid")
    MK = extend_rep(pair.module(), ctx)
    PK = extend_rep(pair.proj(), ctx)
    out = pair_from_reps(ctx.extended, MK, PK)
    if pair.is_stt:
        assert out.is_stt, "support tau-tilting did not transfer"
    return out


def lift_inv_pair(pair: TauInvRigidPair, ctx: ExtensionContext) -> TauInvRigidPair:
    """(N, Q) -> (N_K^b, Q_K^b) on the tau^{-1} side."""
    ak = ctx.extended
    catK = enumerate_ind(ak)
    NK = extend_rep(pair.module(), ctx)
    n_key = tuple(sorted(set(catK.key(NK))))
    qv = set()
    inj_idx = {catK.index_of(injective_ind(ak, v)): v
               for v in range(len(ak.idempotents))}
    for part in decompose(extend_rep(pair.inj(), ctx)):
        qv.add(inj_idx[catK.index_of(part)])
    out = TauInvRigidPair(ak, n_key, tuple(sorted(qv)))
    cert = out.certificate()
    assert cert["hom_tauinvN_N"] == 0 and cert["hom_N_Q"] == 0
    return out


def lift_torsion(T, ctx: ExtensionContext) -> frozenset:
    """Fac M -> Fac(M_K^b) through the stt pair of the class."""
    pair = stt_from_torsion(ctx.base, T)
    return fac_set(lift_pair(pair, ctx))


def lift_brick(B: Rep, ctx: ExtensionContext):
    """The semibrick ind(B_K) of an extended brick, as a list of modules."""
    if not is_brick(B):
        raise ValueError("module is not a brick")
    ak = ctx.extended
    catK = enumerate_ind(ak)
    keys = sorted(set(catK.key(extend_rep(B, ctx))))
    assert is_semibrick(ak, keys)
    return [catK[i] for i in keys]


# ---------------------------------------------------------------------------
# the commuting squares
# ---------------------------------------------------------------------------

SQUARE_NAMES = ("H", "cobongartz", "bongartz", "intervals", "left_semibrick",
                "right_semibrick", "wide_filt_membership")


def verify_commuting_squares(a: Algebra, ctx: ExtensionContext):
    """Check each named transport square on every tau-rigid pair.

    Returns {name: {"holds": bool, "checked": int, "witnesses": [...]}}; a
    witness records the pair and the two sides that disagreed.
    """
    assert ctx.base is a
    ak = ctx.extended
    cat = enumerate_ind(a)
    report = {name: {"holds": True, "checked": 0, "witnesses": []}
              for name in SQUARE_NAMES}

    def record(name, ok, pair, lhs=None, rhs=None):
        report[name]["checked"] += 1
        if not ok:
            report[name]["holds"] = False
            report[name]["witnesses"].append(
                ((pair.m, pair.p), lhs, rhs))

    for q in enumerate_tau_rigid_pairs(a):
        lq = lift_pair(q, ctx)

        lhs = lift_pair(cobongartz(q), ctx)
        rhs = cobongartz(lq)
        record("cobongartz", lhs == rhs, q, (lhs.m, lhs.p), (rhs.m, rhs.p))

        lhs = lift_pair(bongartz(q), ctx)
        rhs = bongartz(lq)
        record("bongartz", lhs == rhs, q, (lhs.m, lhs.p), (rhs.m, rhs.p))

        itv_l = (fac_set(lift_pair(cobongartz(q), ctx)),
                 fac_set(lift_pair(bongartz(q), ctx)))
        itv_r = (fac_set(cobongartz(lq)), fac_set(bongartz(lq)))
        record("intervals", itv_l == itv_r, q, itv_l, itv_r)

        lhs = extend_ind_set(ctx, left_semibrick(q.module()))
        rhs = left_semibrick(lq.module())
        record("left_semibrick", lhs == rhs, q, lhs, rhs)

        WK = tau_perp(lq).inds
        S = simples_of_wide(a, tau_perp(q).inds)
        rhs = filt_closure(ak, extend_ind_set(ctx, S))
        record("wide_filt_membership", WK == rhs, q, WK, rhs)
        W = tau_perp(q).inds
        ok = all((i in W) == (extend_ind_set(ctx, {i}) <= WK)
                 for i in range(len(cat)))
        record("wide_filt_membership", ok, q, sorted(W), sorted(WK))

        if q.is_stt:
            h = h_map(q)
            lhs = lift_inv_pair(h, ctx)
            rhs = h_map(lq)
            record("H", (lhs.n, lhs.q) == (rhs.n, rhs.q), q,
                   (lhs.n, lhs.q), (rhs.n, rhs.q))

            N = h.module()
            lhs = extend_ind_set(ctx, right_semibrick(N))
            rhs = right_semibrick(lift_inv_pair(h, ctx).module())
            record("right_semibrick", lhs == rhs, q, lhs, rhs)

    return report


# ---------------------------------------------------------------------------
# the fan embedding
# ---------------------------------------------------------------------------

def apply_D(ctx: ExtensionContext, v):
    return tuple(sum(ctx.D[i][j] * v[j] for j in range(len(v)))
                 for i in range(len(ctx.D)))


@dataclass
class FanEmbedding:
    ctx: ExtensionContext
    pair_map: dict        # (m, p) over the base -> (m, p) over the extension
    injective_on_maximal: bool


def fan_embedding(a: Algebra, ctx: ExtensionContext) -> FanEmbedding:
    """Cone-by-cone embedding of the g-vector fan along the matrix D.

    Certifies that D carries the g-vector of every indecomposable to the
    g-vector of its extension and that each cone lands inside the cone of
    the lifted pair.
    """
    assert ctx.base is a
    cat = enumerate_ind(a)
    for X in cat:
        gK = g_vector(extend_rep(X, ctx))
        assert apply_D(ctx, g_vector(X)) == gK, \
            "D does not transport the g-vector"
    fan = g_fan(a)
    pair_map = {}
    for q in enumerate_tau_rigid_pairs(a):
        lq = lift_pair(q, ctx)
        cone = fan.cones[(q.m, q.p)]
        big = g_cone(lq)
        for gen in cone.gens:
            assert big.contains(apply_D(ctx, gen)), \
                "image generator escapes the lifted cone"
        pair_map[(q.m, q.p)] = (lq.m, lq.p)
    stt_images = [pair_map[(q.m, q.p)] for q in enumerate_stt(a)]
    injective = len(set(stt_images)) == len(stt_images)
    assert injective, "fan map is not injective on maximal cones"
    return FanEmbedding(ctx, pair_map, injective)
