"""Completed finitary Ringel-Hall algebras, truncated by composition length.

Elements are integer series over iso-class keys (sorted catalogue-index
tuples), cut off above a truncation length L.  The structure constant
c^E_{M,N} counts submodules of E isomorphic to N with quotient isomorphic
to M.  Convention note: with the other reading (quotient ~ N) the symbol
[0] fails to be a two-sided unit and the filtration products below collapse,
so the submodule carries N and the quotient carries M throughout.

Length means composition length, which only agrees with k-dimension when
every simple has endomorphism field k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import Algebra
from .rep import (Rep, _cache, all_submodules, composition_vector,
                  enumerate_ind, ext1, hom, iso, quotient_rep, sub_rep)
from .tors import interval_heart, is_torsion_class, torsion_lattice


def module_length(M: Rep) -> int:
    return sum(composition_vector(M))


def _lengths(a: Algebra):
    c = _cache(a)
    if "hall_lengths" not in c:
        c["hall_lengths"] = tuple(module_length(X) for X in enumerate_ind(a))
    return c["hall_lengths"]


def key_length(a: Algebra, key) -> int:
    ln = _lengths(a)
    return sum(ln[i] for i in key)


def default_truncation(a: Algebra) -> int:
    """The longest indecomposable; at this depth a sum of symbols [M]
    determines the indecomposables it came from."""
    return max(_lengths(a))


def census(a: Algebra, L: int):
    """Keys of every module of length <= L, grouped by length."""
    c = _cache(a)
    got = c.get(("hall_census", L))
    if got is not None:
        return got
    ln = _lengths(a)
    by_len = {ell: [] for ell in range(L + 1)}

    def grow(start, acc, left):
        by_len[L - left].append(tuple(acc))
        for i in range(start, len(ln)):
            if ln[i] <= left:
                grow(i, acc + [i], left - ln[i])

    grow(0, [], L)
    out = {ell: tuple(sorted(keys)) for ell, keys in by_len.items()}
    c[("hall_census", L)] = out
    return out


def _profile_of_key(a: Algebra, ekey):
    """c^E_{M,N} for a fixed E: map (quotient key, submodule key) -> count."""
    c = _cache(a)
    got = c.get(("hall_profile", ekey))
    if got is not None:
        return got
    cat = enumerate_ind(a)
    E = cat.rep_of_key(ekey)
    prof = {}
    for rows in all_submodules(E):
        nk = cat.key(sub_rep(E, rows))
        mk = cat.key(quotient_rep(E, rows)[0])
        prof[(mk, nk)] = prof.get((mk, nk), 0) + 1
    c[("hall_profile", ekey)] = prof
    return prof


def hall_number(M: Rep, N: Rep, E: Rep) -> int:
    """#{submodules of E isomorphic to N with quotient isomorphic to M}."""
    a = E.algebra
    if module_length(M) + module_length(N) != module_length(E):
        return 0
    cat = enumerate_ind(a)
    prof = _profile_of_key(a, cat.key(E))
    return prof.get((cat.key(M), cat.key(N)), 0)


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HallSeries:
    algebra: Algebra
    L: int
    coeffs: tuple      # sorted ((key, coefficient)), zeros dropped

    def coeff(self, key) -> int:
        return dict(self.coeffs).get(tuple(key), 0)

    def supp(self):
        return tuple(k for k, _ in self.coeffs)

    def __repr__(self):
        return f"HallSeries(L={self.L}, {dict(self.coeffs)!r})"


def _series(a, L, d) -> HallSeries:
    return HallSeries(a, L, tuple(sorted(
        (k, v) for k, v in d.items() if v != 0)))


def unit_series(a: Algebra, L: int) -> HallSeries:
    return _series(a, L, {(): 1})


def bracket(a: Algebra, M, L: int) -> HallSeries:
    """The basis symbol [M]; M is a module or an iso-class key."""
    key = enumerate_ind(a).key(M) if isinstance(M, Rep) else tuple(M)
    if key_length(a, key) > L:
        raise ValueError("module is longer than the truncation")
    return _series(a, L, {key: 1})


def e_of(a: Algebra, inds, L: int) -> HallSeries:
    """E_C for the additive closure of the given indecomposables."""
    members = set(inds)
    d = {}
    for keys in census(a, L).values():
        for k in keys:
            if all(i in members for i in k):
                d[k] = 1
    return _series(a, L, d)


def series_mul(F: HallSeries, G: HallSeries) -> HallSeries:
    assert F.algebra is G.algebra and F.L == G.L
    a, L = F.algebra, F.L
    fc, gc = dict(F.coeffs), dict(G.coeffs)
    out = {}
    for keys in census(a, L).values():
        for ekey in keys:
            tot = 0
            for (mk, nk), cnt in _profile_of_key(a, ekey).items():
                fm = fc.get(mk)
                if fm:
                    gn = gc.get(nk)
                    if gn:
                        tot += fm * gn * cnt
            if tot:
                out[ekey] = tot
    return _series(a, L, out)


def invert(E: HallSeries) -> HallSeries:
    """Degree-by-degree two-sided inverse; requires coefficient 1 on [0].

    Series with no constant term annihilate a nonzero series, so nothing
    else is invertible.
    """
    if E.coeff(()) != 1:
        raise ValueError("series has no unit constant term, not invertible")
    a, L = E.algebra, E.L
    ec = dict(E.coeffs)
    cen = census(a, L)
    right = {(): 1}
    left = {(): 1}
    for ell in range(1, L + 1):
        for key in cen[ell]:
            acc_r = 0
            acc_l = 0
            for (mk, nk), cnt in _profile_of_key(a, key).items():
                if mk:
                    acc_r += ec.get(mk, 0) * right.get(nk, 0) * cnt
                if nk:
                    acc_l += left.get(mk, 0) * ec.get(nk, 0) * cnt
            if acc_r:
                right[key] = -acc_r
            if acc_l:
                left[key] = -acc_l
    assert left == right, "left and right inverses disagree"
    out = _series(a, L, right)
    assert series_mul(E, out) == unit_series(a, L)
    assert series_mul(out, E) == unit_series(a, L)
    return out


# ---------------------------------------------------------------------------
# filtration products and the interval-heart morphism
# ---------------------------------------------------------------------------

def verify_factorization(a: Algebra, chain, L=None):
    """Check a strictly increasing torsion chain factors E_mod by hearts.

    The product runs with the top step leftmost.  Returns (bool, diffs)
    where diffs maps keys to (product coefficient, target coefficient).
    """
    if L is None:
        L = default_truncation(a)
    chain = [frozenset(T) for T in chain]
    cat = enumerate_ind(a)
    if chain[0] != frozenset() or chain[-1] != frozenset(range(len(cat))):
        raise ValueError("chain must run from 0 to the whole category")
    for lo, hi in zip(chain, chain[1:]):
        if not (lo < hi):
            raise ValueError("chain must strictly increase")
        if not is_torsion_class(a, hi):
            raise ValueError("chain member is not a torsion class")
    prod = None
    for lo, hi in zip(chain, chain[1:]):
        factor = e_of(a, interval_heart(a, lo, hi), L)
        prod = factor if prod is None else series_mul(factor, prod)
    target = e_of(a, range(len(cat)), L)
    diffs = {}
    keys = set(prod.supp()) | set(target.supp())
    for k in sorted(keys):
        if prod.coeff(k) != target.coeff(k):
            diffs[k] = (prod.coeff(k), target.coeff(k))
    return not diffs, diffs


def phi(a: Algebra, lower, upper, L=None) -> HallSeries:
    """The unit attached to a torsion interval: E of the interval heart."""
    if L is None:
        L = default_truncation(a)
    if L < default_truncation(a):
        raise ValueError("truncation below the longest indecomposable "
                         "cannot separate hearts")
    return e_of(a, interval_heart(a, lower, upper), L)


def heart_controlled_check(a: Algebra, L=None):
    """Certify on this algebra that interval generators are controlled by
    their hearts.

    unit          phi of a trivial interval is [0]
    composition   phi of nested intervals composes multiplicatively
    separation    two intervals get the same series iff equal hearts
    """
    if L is None:
        L = default_truncation(a)
    if L < default_truncation(a):
        raise ValueError("truncation below the longest indecomposable "
                         "cannot separate hearts")
    lat = torsion_lattice(a)
    m = len(lat.classes)
    pairs = [(u, t) for u in range(m) for t in range(m) if lat.leq(u, t)]
    hearts = {}
    series = {}
    for (u, t) in pairs:
        hearts[(u, t)] = frozenset(
            interval_heart(a, lat.classes[u], lat.classes[t]))
        series[(u, t)] = phi(a, lat.classes[u], lat.classes[t], L)
    report = {name: {"holds": True, "checked": 0, "witnesses": []}
              for name in ("unit", "composition", "separation")}

    def record(name, ok, witness):
        report[name]["checked"] += 1
        if not ok:
            report[name]["holds"] = False
            report[name]["witnesses"].append(witness)

    for t in range(m):
        record("unit", series[(t, t)] == unit_series(a, L), t)
    for v in range(m):
        for u in range(m):
            if not lat.leq(v, u):
                continue
            for t in range(m):
                if not lat.leq(u, t):
                    continue
                lhs = series_mul(series[(u, t)], series[(v, u)])
                record("composition", lhs == series[(v, t)], (v, u, t))
    for p in pairs:
        for q in pairs:
            record("separation",
                   (series[p] == series[q]) == (hearts[p] == hearts[q]),
                   (p, q))
    return report


# ---------------------------------------------------------------------------
# counting oracles
# ---------------------------------------------------------------------------

def aut_order(M: Rep) -> int:
    """Order of the automorphism group, by scanning the endomorphism space."""
    if M.is_zero():
        return 1
    hb = hom(M, M)
    q = M.algebra.base.q
    count = 0
    for coeffs in itertools.product(range(q), repeat=hb.dim):
        F = None
        for c, base in zip(coeffs, hb.mats):
            if c:
                term = base.scale(c)
                F = term if F is None else F + term
        if F is not None and F.rank() == M.dim:
            count += 1
    return count


def ext_middle_census(M: Rep, N: Rep):
    """How many extension classes of M by N have each middle term."""
    a = M.algebra
    cat = enumerate_ind(a)
    ex = ext1(M, N)
    q = a.base.q
    out = {}
    for coeffs in itertools.product(range(q), repeat=ex.dim):
        mid = ex.middle_term(coeffs)
        k = cat.key(mid)
        out[k] = out.get(k, 0) + 1
    return out
