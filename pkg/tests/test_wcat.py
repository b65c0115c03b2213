import pytest

from taulab.gf import field
from taulab.algebra import Quiver, SpeciesFq, path_algebra, species_algebra
from taulab.scalarext import extension_context
from taulab.tau import enumerate_tau_rigid_pairs, tau_perp
from taulab.tors import torsion_lattice
from taulab.wcat import (
    build_wcat,
    check_category,
    dot_wcat,
    functor_F,
    functor_Gamma,
    identification_report,
    irreducible_morphisms,
)

f2 = field(2)

_fix = {}


def _shared(name, make):
    if name not in _fix:
        _fix[name] = make()
    return _fix[name]


@pytest.fixture(scope="module")
def a2():
    return _shared("a2", lambda: path_algebra(
        Quiver(("1", "2"), ((0, 1, "a"),)), [], f2))


@pytest.fixture(scope="module")
def x2():
    return _shared("x2", lambda: path_algebra(
        Quiver(("1",), ((0, 0, "x"),)), [[(1, ["x", "x"])]], f2))


@pytest.fixture(scope="module")
def nak():
    return _shared("nak", lambda: path_algebra(
        Quiver(("1", "2", "3"), ((0, 1, "a"), (1, 2, "b"))),
        [[(1, ["a", "b"])]], f2))


@pytest.fixture(scope="module")
def ltw():
    return _shared("ltw", lambda: species_algebra(SpeciesFq(
        f2, Quiver(("1",), ((0, 0, "x"),)), (2,), ((2, 1),), rad_power=2)))


# -- the category itself ------------------------------------------------------------


def test_x2_category(x2):
    cat = build_wcat(x2)
    mod = frozenset(range(2))
    zero = frozenset()
    assert set(cat.objects) == {zero, mod}
    # two parallel morphisms down to the point, one through each maximal
    # interval; only identities elsewhere
    assert set(cat.hom(mod, zero)) == {zero, mod}
    assert set(cat.hom(mod, mod)) == {zero}
    assert set(cat.hom(zero, zero)) == {zero}
    assert cat.hom(zero, mod) == {}


def test_objects_are_the_perpendicular_wides(a2, x2, nak):
    for a in (a2, x2, nak):
        cat = build_wcat(a)
        wides = {tau_perp(q).inds for q in enumerate_tau_rigid_pairs(a)}
        assert set(cat.objects) == wides


def test_a2_objects(a2):
    cat = build_wcat(a2)
    assert sorted(sorted(w) for w in cat.objects) == [
        [], [0], [0, 1, 2], [1], [2]]


def test_identities(a2, x2):
    for a in (a2, x2):
        cat = build_wcat(a)
        for w in cat.objects:
            h = cat.identity(w)
            m = cat.hom(w, w)[h[2]]
            assert m.is_identity and m.handle == h
            # the lower endpoint never meets its own perpendicular heart
            assert h[2] == frozenset()


def test_category_laws(a2, x2, nak, ltw):
    for a in (a2, x2, nak, ltw):
        rep = check_category(build_wcat(a))
        for name in ("identity", "associativity"):
            assert rep[name]["holds"], rep[name]["witnesses"]
            assert rep[name]["checked"] > 0


def test_hom_to_zero_matches_torsion_classes(a2):
    # morphisms from the full category to the point are keyed by exactly
    # the torsion classes
    cat = build_wcat(a2)
    mod = frozenset(range(3))
    keys = set(cat.hom(mod, frozenset()))
    assert keys == set(torsion_lattice(a2).classes)


def test_identification_tests_agree(a2, nak, ltw):
    for a in (a2, nak, ltw):
        rep = identification_report(a)
        names = ("interval", "both", "lower", "upper",
                 "right_bricks", "left_bricks")
        assert set(rep) == set(names)
        for name in names:
            assert rep[name]["holds"], rep[name]["witnesses"]
            assert rep[name]["checked"] > 0


# -- the scalar-extension functor ----------------------------------------------------


def test_functor_reports_hold(a2, ltw):
    for a in (a2, ltw):
        ctx = extension_context(a, 2)
        _, _, rep = functor_F(a, ctx)
        for name in ("well_defined", "functorial", "faithful",
                     "filt_transport"):
            assert rep[name]["holds"], (name, rep[name]["witnesses"])
            assert rep[name]["checked"] > 0


def test_functor_iso_onto_image_when_nothing_splits(a2):
    ctx = extension_context(a2, 2)
    om, mm, _ = functor_F(a2, ctx)
    c1, c2 = build_wcat(a2), build_wcat(ctx.extended)
    assert len(c1.objects) == len(c2.objects) == len(set(om.values()))
    assert sum(1 for _ in c1.morphisms()) == sum(1 for _ in c2.morphisms())
    assert len(set(mm.values())) == len(mm)


def test_functor_into_strictly_bigger_category(ltw):
    ctx = extension_context(ltw, 2)
    om, mm, _ = functor_F(ltw, ctx)
    c1, c2 = build_wcat(ltw), build_wcat(ctx.extended)
    assert len(c1.objects) == 2 and len(c2.objects) == 6
    assert len(set(om.values())) == 2
    # faithful but far from dense at the morphism level
    assert len(set(mm.values())) == len(mm) == 4
    assert sum(1 for _ in c2.morphisms()) > len(mm)


def test_trivial_extension_is_identity_functor(a2):
    ctx = extension_context(a2, 1)
    om, mm, rep = functor_F(a2, ctx)
    assert all(k == v for k, v in om.items())
    assert all(k == v for k, v in mm.items())
    assert all(entry["holds"] for entry in rep.values())


# -- the group functor ---------------------------------------------------------------


def test_gamma_reports(a2, x2, ltw):
    for a in (a2, x2, ltw):
        _, rep = functor_Gamma(a)
        for name in ("well_defined", "composition", "faithful"):
            assert rep[name]["holds"], (name, rep[name]["witnesses"])
            assert rep[name]["checked"] > 0


def test_gamma_values(a2):
    gamma, _ = functor_Gamma(a2)
    cat = build_wcat(a2)
    lat = torsion_lattice(a2)
    mod, zero = frozenset(range(3)), frozenset()
    # identities pick up trivial intervals
    for w in cat.objects:
        u, t = gamma[cat.identity(w)][1]
        assert u == t
    # descents to the point are anchored at the bottom, keyed by Fac
    for key in cat.hom(mod, zero):
        assert gamma[(mod, zero, key)] == (
            "Z", (lat.bottom, lat.index(key)))


# -- drawing ------------------------------------------------------------------------


def test_irreducibles(x2, a2):
    assert len(irreducible_morphisms(build_wcat(x2))) == 2
    assert len(irreducible_morphisms(build_wcat(a2))) == 11


def test_dot_output(ltw):
    text = dot_wcat(build_wcat(ltw))
    assert text.startswith("digraph wcat {")
    assert 'label="0+1", peripheries=2' in text
    assert text.count("->") == 2
    full = dot_wcat(build_wcat(ltw), all_morphisms=True)
    assert full.count("->") >= text.count("->")
