"""King stability over exact rationals.

A stability condition theta is a rational vector in the dual of K_0(mod),
one coordinate per simple; a module is theta-semistable when theta vanishes
on its class and is nonpositive on every submodule class.  Wall cones carry
an explicit H-representation (one equality, pruned inequalities) so that
membership, redundancy and containment questions all reduce to homogeneous
Fourier-Motzkin elimination over Fraction arithmetic.

Pairing is against composition vectors, i.e. classes in K_0(mod); over
species these differ from dimension vectors by the degrees of the
endomorphism fields of the simples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .algebra import Algebra
from .rep import (Rep, all_submodules, composition_vector, decompose,
                  enumerate_ind, hom, projective_ind, simples, sub_rep)
from .scalarext import ExtensionContext, extend_rep
from .tau import enumerate_stt, g_fan


def theta(coeffs) -> tuple:
    """Coerce to an exact rational stability vector."""
    return tuple(Fraction(c) for c in coeffs)


def theta_value(th, M: Rep) -> Fraction:
    cv = composition_vector(M)
    return sum((Fraction(t) * c for t, c in zip(th, cv)), Fraction(0))


def _dot(th, v) -> Fraction:
    return sum((Fraction(t) * c for t, c in zip(th, v)), Fraction(0))


# ---------------------------------------------------------------------------
# submodule profiles
# ---------------------------------------------------------------------------

_PROF = {}


def _profile(M: Rep):
    """Sorted distinct classes of the nonzero proper submodules of M."""
    got = _PROF.get(id(M))
    if got is not None and got[0] is M:
        return got[1]
    out = set()
    for rows in all_submodules(M):
        if len(rows) in (0, M.dim):
            continue
        out.add(composition_vector(sub_rep(M, rows)))
    prof = tuple(sorted(out))
    _PROF[id(M)] = (M, prof)
    return prof


def submodule_dim_vectors(M: Rep):
    """Dimension vectors of all submodules, trivial ones included."""
    return {sub_rep(M, rows).dims for rows in all_submodules(M)}


def is_semistable(M: Rep, th) -> bool:
    """theta vanishes on [M] and is <= 0 on every submodule class."""
    if M.is_zero():
        raise ValueError("semistability is about nonzero modules")
    th = theta(th)
    if theta_value(th, M) != 0:
        return False
    return all(_dot(th, v) <= 0 for v in _profile(M))


def is_stable(M: Rep, th) -> bool:
    if M.is_zero():
        raise ValueError("stability is about nonzero modules")
    th = theta(th)
    if theta_value(th, M) != 0:
        return False
    return all(_dot(th, v) < 0 for v in _profile(M))


# ---------------------------------------------------------------------------
# homogeneous Fourier-Motzkin
# ---------------------------------------------------------------------------

def _norm_row(co):
    den = 1
    for c in co:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in co]
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    if g > 1:
        ints = [c // g for c in ints]
    return tuple(ints)


def _fm_feasible(rows, n) -> bool:
    """Is there theta with co.theta < 0 (strict) / <= 0 (weak) for all rows?

    Homogeneous system, so feasibility means a nonzero solution for the
    strict rows; eliminates coordinates left to right.
    """
    cur = set()
    for co, s in rows:
        co = _norm_row(tuple(Fraction(c) for c in co))
        if not any(co):
            if s:
                return False
            continue
        cur.add((co, s))
    for i in range(n):
        pos = [r for r in cur if r[0][i] > 0]
        neg = [r for r in cur if r[0][i] < 0]
        keep = {r for r in cur if r[0][i] == 0}
        for (cu, su) in pos:
            for (cl, sl) in neg:
                co = tuple(Fraction(-cl[i]) * a + Fraction(cu[i]) * b
                           for a, b in zip(cu, cl))
                co = _norm_row(co)
                if not any(co):
                    if su or sl:
                        return False
                    continue
                keep.add((co, su or sl))
        cur = keep
    return True


def _cone_implies(eqs, ineqs, target, n, equality=False) -> bool:
    """Does {eq.theta = 0, w.theta <= 0} force target.theta <= 0 (or = 0)?"""
    base = []
    for e in eqs:
        base.append((tuple(e), False))
        base.append((tuple(-Fraction(c) for c in e), False))
    base.extend((tuple(w), False) for w in ineqs)
    neg_target = tuple(-Fraction(c) for c in target)
    if _fm_feasible(base + [(neg_target, True)], n):
        return False
    if equality and _fm_feasible(base + [(tuple(target), True)], n):
        return False
    return True


# ---------------------------------------------------------------------------
# wall cones
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WallCone:
    algebra: Algebra
    cls: tuple      # [M]
    ineqs: tuple    # pruned submodule classes

    def contains(self, th) -> bool:
        th = theta(th)
        if _dot(th, self.cls) != 0:
            return False
        return all(_dot(th, v) <= 0 for v in self.ineqs)


def wall(M: Rep) -> WallCone:
    """The cone of stability vectors making M semistable.

    The H-representation keeps one inequality per irredundant submodule
    class; a class is dropped when the remaining system already forces it,
    scanning in sorted order.
    """
    if M.is_zero():
        raise ValueError("walls are attached to nonzero modules")
    n = len(simples(M.algebra))
    eq = composition_vector(M)
    cands = list(_profile(M))
    kept = []
    for i, v in enumerate(cands):
        others = kept + cands[i + 1:]
        if not _cone_implies([eq], others, v, n):
            kept.append(v)
    return WallCone(M.algebra, eq, tuple(kept))


# ---------------------------------------------------------------------------
# stability under base field extension
# ---------------------------------------------------------------------------

def pullback_theta(th, ctx: ExtensionContext) -> tuple:
    """theta over the base composed with restriction of scalars.

    Coordinate j of the result pairs the extended simple S'_j against
    theta through the restriction matrix, so evaluating it on a module
    equals evaluating theta on the restricted module.
    """
    th = theta(th)
    nk = len(ctx.R[0])
    return tuple(sum((th[i] * ctx.R[i][j] for i in range(len(th))),
                     Fraction(0)) for j in range(nk))


def theta_of_g(a: Algebra, g) -> tuple:
    """The stability vector of a g-vector: pair projectives with simples."""
    S = simples(a)
    P = [projective_ind(a, j) for j in range(len(S))]
    return tuple(sum((Fraction(g[j]) * hom(P[j], S[i]).dim
                      for j in range(len(P))), Fraction(0))
                 for i in range(len(S)))


def theta_grid(n, radius=3):
    """All integer stability vectors in [-radius, radius]^n."""
    return [theta(v) for v in
            itertools.product(range(-radius, radius + 1), repeat=n)]


def _facet_points(a: Algebra):
    """Interior points of the codimension-one faces of the g-cones, as
    stability vectors; these sit exactly on walls."""
    out = []
    for q in enumerate_stt(a):
        fan = g_fan(a)
        gens = fan.cones[(q.m, q.p)].gens
        for drop in range(len(gens)):
            face = [g for t, g in enumerate(gens) if t != drop]
            if not face:
                continue
            pt = tuple(sum(g[i] for g in face) for i in range(len(gens[0])))
            out.append(theta_of_g(a, pt))
    seen = []
    for p in out:
        if p not in seen:
            seen.append(p)
    return seen


def pullback_report(a: Algebra, ctx: ExtensionContext, grid=None):
    """Exhaustive checks that stability transports along the pullback.

    scaling          theta'([M_K]) = [K:k] * theta([M])
    semistability    M theta-semistable iff M_K theta'-semistable
    walls            each wall maps into the wall of every summand of M_K
    """
    assert ctx.base is a
    cat = enumerate_ind(a)
    catK = enumerate_ind(ctx.extended)
    n = len(a.idempotents)
    if grid is None:
        grid = theta_grid(n) + _facet_points(a)
    report = {name: {"holds": True, "checked": 0, "witnesses": []}
              for name in ("scaling", "semistability", "walls")}

    def record(name, ok, witness):
        report[name]["checked"] += 1
        if not ok:
            report[name]["holds"] = False
            report[name]["witnesses"].append(witness)

    ext_of = {i: extend_rep(cat[i], ctx) for i in range(len(cat))}
    for i, M in enumerate(cat):
        MK = ext_of[i]
        for th in grid:
            pth = pullback_theta(th, ctx)
            record("scaling",
                   theta_value(pth, MK) == ctx.m * theta_value(th, M),
                   (i, th))
            record("semistability",
                   is_semistable(M, th) == is_semistable(MK, pth),
                   (i, th))

    for i, M in enumerate(cat):
        w = wall(M)
        for N in decompose(ext_of[i]):
            wK = wall(N)
            pulled_eq = tuple(_dot(ctx.R[r], wK.cls) for r in range(n))
            ok = _cone_implies([w.cls], w.ineqs, pulled_eq, n, equality=True)
            for v in wK.ineqs:
                pulled = tuple(_dot(ctx.R[r], v) for r in range(n))
                ok = ok and _cone_implies([w.cls], w.ineqs, pulled, n)
            record("walls", ok, (i, catK.index_of(N)))
    return report
