"""The tau-cluster morphism category, realised from intervals.

Objects are equivalence classes of tau-perpendicular intervals
[Fac M, perp(tau M) ∩ P^perp] of the torsion lattice, two intervals
identified when their hearts (the perpendicular wide subcategories W)
coincide.  A morphism from the class of W1 to the class of W2 is a
containment I2 ⊆ I1 of representative intervals, two containments
identified when the lower endpoint of the inner interval meets W1 in the
same set.  Checking that single intersection is the cheapest of several
equivalent identification tests; the others run in the invariant suite.

Composition picks chainable representatives I3 ⊆ I2 ⊆ I1 (they always
exist because every containment of every representative is stored) and
reads off the class of the outer containment.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Algebra
from .hall import phi, series_mul
from .rep import enumerate_ind
from .scalarext import ExtensionContext, extend_ind_set, lift_pair
from .tau import (bongartz, bperp_set, cobongartz, enumerate_tau_rigid_pairs,
                  fac_set, h_map, tau_perp)
from .tors import (filt_closure, interval_heart, left_semibrick,
                   right_semibrick, simples_of_wide, torsion_lattice)


@dataclass(frozen=True)
class WInterval:
    """A tau-perpendicular interval with every pair that generates it."""
    lower: frozenset
    upper: frozenset
    wide: frozenset
    pairs: tuple

    @property
    def ends(self):
        return (self.lower, self.upper)

    def contains(self, other) -> bool:
        return self.lower <= other.lower and other.upper <= self.upper


@dataclass(frozen=True)
class WMorphism:
    dom: frozenset     # wide ind-set of the source object
    cod: frozenset     # wide ind-set of the target object
    key: frozenset     # lower endpoint of the inner interval, cut to dom
    reps: tuple        # (outer WInterval, inner WInterval) containments

    @property
    def handle(self):
        return (self.dom, self.cod, self.key)

    @property
    def is_identity(self):
        return self.dom == self.cod and not self.key


@dataclass
class WCategory:
    algebra: Algebra
    objects: tuple              # wide ind-sets, sorted by (size, members)
    intervals: tuple            # all WInterval representatives
    homs: dict                  # (dom, cod) -> {key: WMorphism}
    table: dict                 # (handle1, handle2) -> handle of the composite

    def hom(self, dom, cod):
        return self.homs.get((frozenset(dom), frozenset(cod)), {})

    def identity(self, obj):
        return (frozenset(obj), frozenset(obj), frozenset())

    def morphisms(self):
        for per in self.homs.values():
            yield from per.values()

    def compose(self, h1, h2):
        """The composite of W1 -> W2 (h1) followed by W2 -> W3 (h2)."""
        return self.table[(h1, h2)]


def _interval_census(a: Algebra):
    by_ends = {}
    for q in enumerate_tau_rigid_pairs(a):
        lo, hi, wide = fac_set(q), bperp_set(q), tau_perp(q).inds
        assert wide == interval_heart(a, lo, hi)
        by_ends.setdefault((lo, hi), (wide, []))[1].append(q)
    return tuple(WInterval(lo, hi, wide, tuple(qs))
                 for (lo, hi), (wide, qs) in sorted(
                     by_ends.items(),
                     key=lambda kv: (len(kv[0][0]), sorted(kv[0][0]),
                                     len(kv[0][1]), sorted(kv[0][1]))))


def build_wcat(a: Algebra) -> WCategory:
    intervals = _interval_census(a)
    objects = tuple(sorted({iv.wide for iv in intervals},
                           key=lambda w: (len(w), sorted(w))))

    homs = {}
    for outer in intervals:
        for inner in intervals:
            if not outer.contains(inner):
                continue
            dom, cod = outer.wide, inner.wide
            key = inner.lower & dom
            per = homs.setdefault((dom, cod), {})
            if key in per:
                per[key] = WMorphism(dom, cod, key,
                                     per[key].reps + ((outer, inner),))
            else:
                per[key] = WMorphism(dom, cod, key, ((outer, inner),))

    table = {}
    for (d1, c1), per1 in homs.items():
        for m1 in per1.values():
            for (d2, c2), per2 in homs.items():
                if d2 != c1:
                    continue
                for m2 in per2.values():
                    got = set()
                    for i1, mid in m1.reps:
                        for mid2, i3 in m2.reps:
                            if mid.ends == mid2.ends:
                                got.add(homs[(d1, c2)][i3.lower & d1].handle)
                    assert len(got) == 1, (m1.handle, m2.handle, got)
                    table[(m1.handle, m2.handle)] = got.pop()

    cat = WCategory(a, objects, intervals, homs, table)
    for w in objects:
        assert cat.identity(w) in {m.handle for m in cat.hom(w, w).values()}
    return cat


def check_category(cat: WCategory):
    """Identity and associativity laws over the whole composition table."""
    report = {name: {"holds": True, "checked": 0, "witnesses": []}
              for name in ("identity", "associativity")}

    def record(name, ok, witness):
        report[name]["checked"] += 1
        if not ok:
            report[name]["holds"] = False
            report[name]["witnesses"].append(witness)

    for m in cat.morphisms():
        h = m.handle
        record("identity",
               cat.compose(cat.identity(m.dom), h) == h
               and cat.compose(h, cat.identity(m.cod)) == h, h)
    by_dom = {}
    for m in cat.morphisms():
        by_dom.setdefault(m.dom, []).append(m.handle)
    for m1 in cat.morphisms():
        for h2 in by_dom.get(m1.cod, ()):
            h12 = cat.compose(m1.handle, h2)
            for h3 in by_dom.get(h2[1], ()):
                lhs = cat.compose(h12, h3)
                rhs = cat.compose(m1.handle, cat.compose(h2, h3))
                record("associativity", lhs == rhs, (m1.handle, h2, h3))
    return report


# ---------------------------------------------------------------------------
# the identification tests agree
# ---------------------------------------------------------------------------

def _left_brick_set(q):
    return left_semibrick(bongartz(q).module())


def _right_brick_set(q):
    return right_semibrick(h_map(cobongartz(q)).module())


def _cut_interval(a, lo, hi, wide):
    lat = torsion_lattice(a)
    return frozenset(cls & wide for cls in lat.classes if lo <= cls <= hi)


def identification_report(a: Algebra):
    """On every nested configuration of tau-rigid pairs, the six
    identification tests answer alike: cut intervals, both endpoints,
    lower endpoint, upper endpoint, right bricks, left bricks."""
    names = ("interval", "both", "lower", "upper",
             "right_bricks", "left_bricks")
    report = {name: {"holds": True, "checked": 0, "witnesses": []}
              for name in names}
    pairs = enumerate_tau_rigid_pairs(a)
    data = {}
    for q in pairs:
        data[(q.m, q.p)] = (fac_set(q), bperp_set(q), tau_perp(q).inds,
                            _left_brick_set(q), _right_brick_set(q))
    for small in pairs:
        wide = data[(small.m, small.p)][2]
        over = [q for q in pairs
                if set(small.m) <= set(q.m) and set(small.p) <= set(q.p)]
        for i, q1 in enumerate(over):
            lo1, hi1, w1, bl1, br1 = data[(q1.m, q1.p)]
            for q2 in over[i + 1:]:
                lo2, hi2, w2, bl2, br2 = data[(q2.m, q2.p)]
                if w1 != w2:
                    continue
                answers = {
                    "interval": (_cut_interval(a, lo1, hi1, wide)
                                 == _cut_interval(a, lo2, hi2, wide)),
                    "both": (lo1 & wide, hi1 & wide)
                            == (lo2 & wide, hi2 & wide),
                    "lower": lo1 & wide == lo2 & wide,
                    "upper": hi1 & wide == hi2 & wide,
                    "right_bricks": br1 & wide == br2 & wide,
                    "left_bricks": bl1 & wide == bl2 & wide,
                }
                agreed = len(set(answers.values())) == 1
                for name in names:
                    report[name]["checked"] += 1
                    if not agreed:
                        report[name]["holds"] = False
                        report[name]["witnesses"].append(
                            ((small.m, small.p), (q1.m, q1.p),
                             (q2.m, q2.p), answers))
    return report


# ---------------------------------------------------------------------------
# the scalar-extension functor
# ---------------------------------------------------------------------------

def _lift_interval_data(ctx, q):
    lq = lift_pair(q, ctx)
    return fac_set(lq), bperp_set(lq), tau_perp(lq).inds


def functor_F(a: Algebra, ctx: ExtensionContext):
    """The functor between the two categories induced by scalar extension.

    Returns (object map, morphism map, report).  Object classes travel by
    lifting any generating pair; morphism classes by lifting both ends of
    any representative containment; the report certifies independence of
    all those choices, functoriality over the whole composition table,
    injectivity on objects and on every hom-set, and that each object's
    image is filtered by the extension of its relative simples.
    """
    assert ctx.base is a
    ak = ctx.extended
    cat1, cat2 = build_wcat(a), build_wcat(ak)
    report = {name: {"holds": True, "checked": 0, "witnesses": []}
              for name in ("well_defined", "functorial", "faithful",
                           "filt_transport")}

    def record(name, ok, witness):
        report[name]["checked"] += 1
        if not ok:
            report[name]["holds"] = False
            report[name]["witnesses"].append(witness)

    lifted = {}
    for iv in cat1.intervals:
        for q in iv.pairs:
            lifted[(q.m, q.p)] = _lift_interval_data(ctx, q)

    obj_map = {}
    for iv in cat1.intervals:
        images = {lifted[(q.m, q.p)][2] for q in iv.pairs}
        obj_map.setdefault(iv.wide, set()).update(images)
    for w, images in sorted(obj_map.items(),
                            key=lambda kv: (len(kv[0]), sorted(kv[0]))):
        record("well_defined", len(images) == 1, ("object", sorted(w)))
    obj_map = {w: next(iter(images)) for w, images in obj_map.items()}
    for w, wk in obj_map.items():
        assert wk in cat2.objects
        S = simples_of_wide(a, w)
        record("filt_transport",
               wk == filt_closure(ak, extend_ind_set(ctx, S)),
               ("object", sorted(w)))

    mor_map = {}
    for m in cat1.morphisms():
        images = set()
        for outer, inner in m.reps:
            for q1 in outer.pairs:
                lo1, hi1, w1 = lifted[(q1.m, q1.p)]
                for q2 in inner.pairs:
                    lo2, hi2, w2 = lifted[(q2.m, q2.p)]
                    assert lo1 <= lo2 and hi2 <= hi1
                    images.add((w1, w2, lo2 & w1))
        record("well_defined", len(images) == 1, ("morphism", m.handle))
        img = images.pop()
        assert img[0] == obj_map[m.dom] and img[1] == obj_map[m.cod]
        assert img[2] in cat2.homs[(img[0], img[1])]
        mor_map[m.handle] = img

    for (h1, h2), h12 in cat1.table.items():
        record("functorial",
               cat2.compose(mor_map[h1], mor_map[h2]) == mor_map[h12],
               (h1, h2))
    for w in cat1.objects:
        clash = [v for v in cat1.objects
                 if v != w and obj_map[v] == obj_map[w]]
        record("faithful", not clash, ("object", sorted(w)))
    for (dom, cod), per in cat1.homs.items():
        images = {mor_map[m.handle] for m in per.values()}
        record("faithful", len(images) == len(per),
               ("hom", sorted(dom), sorted(cod)))
    return obj_map, mor_map, report


# ---------------------------------------------------------------------------
# the group functor
# ---------------------------------------------------------------------------

def functor_Gamma(a: Algebra):
    """Assign to each morphism class the interval symbol of the lower
    endpoints of any representative containment.

    Returns (mapping handle -> Z symbol, report).  The report certifies
    representative-independence through interval hearts, composition
    against the Hall-algebra images, and faithfulness hom-set by hom-set
    (distinct parallel morphisms get series-distinct symbols).
    """
    cat = build_wcat(a)
    lat = torsion_lattice(a)
    report = {name: {"holds": True, "checked": 0, "witnesses": []}
              for name in ("well_defined", "composition", "faithful")}

    def record(name, ok, witness):
        report[name]["checked"] += 1
        if not ok:
            report[name]["holds"] = False
            report[name]["witnesses"].append(witness)

    gamma = {}
    hearts = {}
    for m in cat.morphisms():
        keys = {(outer.lower, inner.lower) for outer, inner in m.reps}
        hs = {interval_heart(a, lo, hi) for lo, hi in keys}
        record("well_defined", len(hs) == 1, m.handle)
        lo, hi = min(keys, key=lambda e: (sorted(e[0]), sorted(e[1])))
        gamma[m.handle] = ("Z", (lat.index(lo), lat.index(hi)))
        hearts[m.handle] = hs.pop()

    def series_of(handle):
        u, t = gamma[handle][1]
        return phi(a, lat.classes[u], lat.classes[t])

    for (h1, h2), h12 in cat.table.items():
        lhs = series_mul(series_of(h2), series_of(h1))
        record("composition", lhs == series_of(h12), (h1, h2))
    for per in cat.homs.values():
        ms = sorted(per.values(), key=lambda m: sorted(m.key))
        for i, m1 in enumerate(ms):
            for m2 in ms[i + 1:]:
                record("faithful",
                       series_of(m1.handle) != series_of(m2.handle),
                       (m1.handle, m2.handle))
    return gamma, report


# ---------------------------------------------------------------------------
# drawing
# ---------------------------------------------------------------------------

def irreducible_morphisms(cat: WCategory):
    """Non-identity morphisms admitting no factorization through two
    non-identity morphisms."""
    out = []
    for m in cat.morphisms():
        if m.is_identity:
            continue
        reducible = False
        for (h1, h2), h12 in cat.table.items():
            if h12 != m.handle:
                continue
            m1 = cat.homs[(h1[0], h1[1])][h1[2]]
            m2 = cat.homs[(h2[0], h2[1])][h2[2]]
            if not m1.is_identity and not m2.is_identity:
                reducible = True
                break
        if not reducible:
            out.append(m.handle)
    return out


def dot_wcat(cat: WCategory, all_morphisms=False) -> str:
    """DOT digraph: objects as nodes, irreducible morphisms as edges
    (every non-identity morphism with all_morphisms)."""
    cat_obj = {w: f"W{i}" for i, w in enumerate(cat.objects)}
    inds = enumerate_ind(cat.algebra)
    lines = ["digraph wcat {", "  rankdir=TB;"]
    for w, name in cat_obj.items():
        label = "0" if not w else "+".join(str(i) for i in sorted(w))
        peripheries = 2 if len(w) == len(inds) else 1
        lines.append(f'  {name} [label="{label}", '
                     f"peripheries={peripheries}];")
    shown = (irreducible_morphisms(cat) if not all_morphisms
             else [m.handle for m in cat.morphisms() if not m.is_identity])
    for dom, cod, key in shown:
        label = "+".join(str(i) for i in sorted(key)) if key else "0"
        lines.append(f'  {cat_obj[dom]} -> {cat_obj[cod]} '
                     f'[label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
