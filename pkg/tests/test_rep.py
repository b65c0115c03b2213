import itertools

import pytest
from hypothesis import given, settings, strategies as st

from taulab.gf import field
from taulab.algebra import (
    Algebra,
    CapExceeded,
    Quiver,
    algebra_from_structure_constants,
    find_algebra_isomorphism,
    path_algebra,
    tensor_up,
)
from taulab.rep import (
    TauInvFunctor,
    ar_translate,
    ar_translate_inv,
    composition_vector,
    decompose,
    direct_sum,
    dual_rep,
    endomorphism_algebra,
    enumerate_ind,
    ext1,
    from_action,
    gen_membership,
    hom,
    injectives,
    is_hereditary,
    is_hom,
    iso,
    length,
    min_presentation,
    nakayama,
    preprojective_algebra,
    projective_cover,
    projectives,
    quotient_rep,
    rad_mod,
    regular_rep,
    simples,
    soc_mod,
    sub_rep,
    sweep_certificate,
    syzygy,
    top,
    torsionfree_quotient,
    zero_rep,
)

f2 = field(2)
f3 = field(3)

_a2_singleton = None


def _a2():
    # shared instance so the rep caches persist across hypothesis examples
    global _a2_singleton
    if _a2_singleton is None:
        _a2_singleton = path_algebra(Quiver(("1", "2"), ((0, 1, "a"),)), [], f2)
    return _a2_singleton


@pytest.fixture(scope="module")
def a2():
    return _a2()


@pytest.fixture(scope="module")
def a3():
    return path_algebra(Quiver(("1", "2", "3"), ((0, 1, "a"), (1, 2, "b"))), [], f2)


@pytest.fixture(scope="module")
def nak():
    # linear A_3 with rad^2 = 0
    q = Quiver(("1", "2", "3"), ((0, 1, "a"), (1, 2, "b")))
    return path_algebra(q, [[(1, ["a", "b"])]], f2)


def ltw_table():
    # F_4 + F_4 x, with x l = l^2 x and x^2 = 0; basis 1, w, x, wx over F_2
    enc = lambda *cs: tuple(cs)
    t = [[None] * 4 for _ in range(4)]
    t[0] = [enc(1, 0, 0, 0), enc(0, 1, 0, 0), enc(0, 0, 1, 0), enc(0, 0, 0, 1)]
    t[1] = [enc(0, 1, 0, 0), enc(1, 1, 0, 0), enc(0, 0, 0, 1), enc(0, 0, 1, 1)]
    t[2] = [enc(0, 0, 1, 0), enc(0, 0, 1, 1), enc(0, 0, 0, 0), enc(0, 0, 0, 0)]
    t[3] = [enc(0, 0, 0, 1), enc(0, 0, 1, 0), enc(0, 0, 0, 0), enc(0, 0, 0, 0)]
    return t


@pytest.fixture(scope="module")
def ltw():
    return algebra_from_structure_constants(ltw_table(), (1, 0, 0, 0), f2,
                                            ["1", "w", "x", "wx"])


# -- standard modules ----------------------------------------------------------


def test_regular_decomposes_into_projectives(a2):
    reg = regular_rep(a2)
    parts = decompose(reg)
    assert sorted(p.dims for p in parts) == [(0, 1), (1, 1)]
    P = projectives(a2)
    assert any(iso(parts[0], p) for p in P)
    assert any(iso(parts[1], p) for p in P)


def test_projective_injective_simple_identifications(a2):
    P, S, I = projectives(a2), simples(a2), injectives(a2)
    assert iso(P[1], S[1])      # vertex 2 is a sink
    assert iso(I[0], S[0])      # vertex 1 is a source
    assert iso(I[1], P[0])      # the 2-dim module is both
    assert not iso(P[0], S[0])


def test_hom_dim_counts_block_dimension(a2):
    # dim Hom(e_i A, M) = dim M e_i
    P = projectives(a2)
    mods = simples(a2) + P + injectives(a2) + [regular_rep(a2)]
    for i in range(2):
        for M in mods:
            assert hom(P[i], M).dim == M.dims[i]


def test_hom_elements_intertwine(a2, nak):
    for a in (a2, nak):
        reg = regular_rep(a)
        hb = hom(reg, reg)
        for F in hb.mats:
            assert is_hom(reg, reg, F)
        # composition stays inside the space
        for F in hb.mats:
            for G in hb.mats:
                assert hb.coords(F @ G) is not None


def test_end_of_regular_is_opposite(a2, nak):
    # "f then g" composition makes End(A_A) the opposite algebra
    for a in (a2, nak):
        E = endomorphism_algebra(regular_rep(a), opposite=True)
        assert find_algebra_isomorphism(E, a) is not None


def test_zero_and_sum_bookkeeping(a2):
    z = zero_rep(a2)
    assert z.is_zero() and decompose(z) == []
    P = projectives(a2)
    s = direct_sum([P[0], P[1], P[0]])
    assert s.dims == (2, 3)
    assert len(decompose(s)) == 3


def test_sub_quotient_are_modules(a2):
    reg = regular_rep(a2)
    rows = [list(r) for r in reg.act(a2.basis_elt(2)).rows]  # image of the arrow
    S = sub_rep(reg, rows)
    Q, proj = quotient_rep(reg, rows)
    assert S.dim + Q.dim == reg.dim
    # the projection intertwines
    for g in a2.generators():
        assert (reg.mats[g] @ proj).rows == (proj @ Q.mats[g]).rows


def test_from_action_rejects_non_block_spanning(a2):
    from taulab.gf import Mat
    bad = [Mat.identity(f2, 2) for _ in range(a2.dim)]  # unit ok, idempotents not
    with pytest.raises(ValueError):
        from_action(a2, bad)


# -- radical layers ------------------------------------------------------------


def test_rad_top_soc(a2):
    P, S = projectives(a2), simples(a2)
    assert iso(rad_mod(P[0]), S[1])
    assert iso(top(P[0]), S[0])
    assert iso(soc_mod(P[0]), S[1])
    ss = direct_sum([S[0], S[1]])
    assert iso(soc_mod(ss), ss)
    assert iso(top(ss), ss)


def test_rad_of_regular_is_arrow_ideal(a3):
    reg = regular_rep(a3)
    r = rad_mod(reg)
    assert r.dim == 3  # a, b, a*b


# -- covers, syzygies, presentations --------------------------------------------


def test_projective_cover_of_simple(a2):
    P, S = projectives(a2), simples(a2)
    P0, cover = projective_cover(S[0])
    assert iso(P0, P[0])
    assert cover.rank() == S[0].dim
    O, incl, _, _ = syzygy(S[0])
    assert iso(O, S[1])
    P1, P0b, pres, _ = min_presentation(S[0])
    assert iso(P1, P[1]) and iso(P0b, P[0])
    # presentation really is a map P1 -> P0 with cokernel S(1)
    assert is_hom(P1, P0b, pres)


def test_cover_of_projective_is_identity_like(nak):
    for P in projectives(nak):
        P0, cover = projective_cover(P)
        assert iso(P0, P)
        O, _, _, _ = syzygy(P)
        assert O.is_zero()


def test_cover_handles_fat_simple_tops(ltw):
    # top of the regular module is the residue field F_4: one generator
    # accounts for a 2-dimensional top
    reg = regular_rep(ltw)
    P0, _ = projective_cover(top(reg))
    assert iso(P0, reg)


# -- ext groups ------------------------------------------------------------------


def test_ext1_a2(a2):
    P, S = projectives(a2), simples(a2)
    e = ext1(S[0], S[1])
    assert e.dim == 1
    assert iso(e.middle_term([1]), P[0])       # the nonsplit extension
    split = e.middle_term([0])
    assert len(decompose(split)) == 2
    assert ext1(S[1], S[0]).dim == 0           # no arrows 2 -> 1
    for i in range(2):
        assert ext1(P[0], S[i]).dim == 0
        assert ext1(P[1], S[i]).dim == 0


def test_ext1_additive_in_first_argument(a3):
    S = simples(a3)
    X = direct_sum([S[0], S[1]])
    for N in S:
        assert ext1(X, N).dim == ext1(S[0], N).dim + ext1(S[1], N).dim


def test_middle_term_dims(nak):
    S = simples(nak)
    for M, N in itertools.product(S, repeat=2):
        e = ext1(M, N)
        for t in range(e.dim):
            co = [0] * e.dim
            co[t] = 1
            E = e.middle_term(co)
            assert E.dim == M.dim + N.dim


def test_hereditary_detection(a2, a3, nak, ltw):
    assert is_hereditary(a2)
    assert is_hereditary(a3)
    assert not is_hereditary(nak)
    assert not is_hereditary(ltw)


# -- Nakayama functor and AR translation -----------------------------------------


def test_nakayama_sends_projectives_to_injectives(a2, nak):
    for a in (a2, nak):
        P, I = projectives(a), injectives(a)
        for i in range(len(P)):
            assert iso(nakayama(P[i]), I[i])


def test_nakayama_kills_module_without_maps_to_regular(a2):
    # Hom(S(1), Lambda) = 0 for the non-projective simple
    S = simples(a2)
    assert nakayama(S[0]).is_zero()


def test_ar_translate_a2(a2):
    P, S, I = projectives(a2), simples(a2), injectives(a2)
    assert iso(ar_translate(S[0]), S[1])
    assert ar_translate(P[0]).is_zero()
    assert ar_translate(P[1]).is_zero()
    assert iso(ar_translate_inv(S[1]), S[0])
    assert ar_translate_inv(I[0]).is_zero()
    assert ar_translate_inv(I[1]).is_zero()
    assert iso(ar_translate_inv(ar_translate(S[0])), S[0])


def test_ar_translate_rotates_nakayama_simples(nak):
    S = simples(nak)
    assert iso(ar_translate(S[0]), S[1])
    assert iso(ar_translate(S[1]), S[2])
    assert ar_translate(S[2]).is_zero()  # S(3) = P(3)
    assert iso(ar_translate_inv(S[2]), S[1])


def test_dual_is_involutive(a2, ltw):
    for a in (a2, ltw):
        for M in simples(a) + projectives(a):
            assert iso(dual_rep(dual_rep(M)), M)


def test_dual_swaps_hom_direction(nak):
    S = simples(nak)
    for M, N in itertools.product(S + projectives(nak), repeat=2):
        assert hom(M, N).dim == hom(dual_rep(N), dual_rep(M)).dim


# -- generation and composition series --------------------------------------------


def test_gen_membership(a2):
    P, S = projectives(a2), simples(a2)
    assert gen_membership(S[0], P[0])          # S(1) is a quotient of P(1)
    assert not gen_membership(S[1], P[0])      # Hom(P(1), S(2)) = 0
    assert gen_membership(regular_rep(a2), direct_sum(P))
    assert gen_membership(zero_rep(a2), S[0])


def test_torsionfree_quotient(a2):
    P, S = projectives(a2), simples(a2)
    assert iso(torsionfree_quotient(P[0], S[1]), S[0])
    assert torsionfree_quotient(P[0], P[0]).is_zero()


def test_composition_vector(a2, nak):
    assert composition_vector(regular_rep(a2)) == (1, 2)
    assert length(regular_rep(a2)) == 3
    P = projectives(nak)
    assert composition_vector(P[0]) == (1, 1, 0)
    assert composition_vector(P[2]) == (0, 0, 1)


def test_composition_vector_rejects_non_basic():
    # 2x2 matrix algebra: the two simples coincide, so block dims are dependent
    def e(i, j):
        m = [[0] * 2 for _ in range(2)]
        m[i][j] = 1
        return m

    names = ["e11", "e12", "e21", "e22"]
    units = [e(0, 0), e(0, 1), e(1, 0), e(1, 1)]

    def mul(x, y):
        out = [[0] * 2 for _ in range(2)]
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    out[i][j] ^= x[i][k] & y[k][j]
        return out

    def coords(m):
        return (m[0][0], m[0][1], m[1][0], m[1][1])

    table = [[coords(mul(x, y)) for y in units] for x in units]
    m2 = Algebra(f2, names, table, (1, 0, 0, 1),
                 idempotents=[(1, 0, 0, 0), (0, 0, 0, 1)])
    with pytest.raises(ValueError):
        composition_vector(regular_rep(m2))


# -- enumerating indecomposables ---------------------------------------------------


def test_enumerate_a2(a2):
    cat = enumerate_ind(a2)
    assert len(cat) == 3
    assert [x.dims for x in cat] == [(0, 1), (1, 0), (1, 1)]
    reg = regular_rep(a2)
    key = cat.key(reg)
    assert len(key) == 2
    assert iso(cat.rep_of_key(key), reg)


def test_enumerate_ltw(ltw):
    # the local twisted algebra has exactly two indecomposables
    cat = enumerate_ind(ltw)
    assert sorted(x.dim for x in cat) == [2, 4]


def test_enumerate_hexagon(ltw):
    # after extending scalars to F_4 the simple splits: four indecomposables
    hexa = tensor_up(ltw, 2)
    cat = enumerate_ind(hexa)
    assert len(cat) == 4
    assert sorted(x.dim for x in cat) == [1, 1, 2, 2]


def test_enumerate_nakayama(nak):
    cat = enumerate_ind(nak)
    assert len(cat) == 5
    assert sorted(sum(x.dims) for x in cat) == [1, 1, 1, 2, 2]


def test_enumerate_a3(a3):
    cat = enumerate_ind(a3)
    assert len(cat) == 6
    # closed under translation
    for X in cat:
        for Y in (ar_translate(X), ar_translate_inv(X)):
            if not Y.is_zero():
                cat.index_of(Y)


def test_enumerate_bails_on_infinite_type():
    kr = path_algebra(Quiver(("1", "2"), ((0, 1, "a"), (0, 1, "b"))), [], f2)
    with pytest.raises(CapExceeded):
        enumerate_ind(kr)


def test_sweep_counting_detects_missing_member(a2):
    cat = enumerate_ind(a2)
    n = sweep_certificate(a2, cat, total_cap=4)
    assert n > 0
    from taulab.rep import IndCatalogue
    broken = IndCatalogue(a2, [x for x in cat.reps if x.dims != (1, 1)])
    with pytest.raises(AssertionError):
        sweep_certificate(a2, broken, total_cap=4)


def test_iso_distinguishes_same_dim_vector(nak):
    S, P = simples(nak), projectives(nak)
    X = direct_sum([S[0], S[1]])
    assert X.dims == P[0].dims
    assert not iso(X, P[0])
    assert iso(X, direct_sum([S[1], S[0]]))


# -- strict tau-inverse functor and preprojective algebras -------------------------


def test_tau_inv_functor_matches_translate(a3):
    fun = TauInvFunctor(a3)
    for X in enumerate_ind(a3, sweep=False):
        T, _ = fun.on_object(X)
        U = ar_translate_inv(X)
        assert (T.is_zero() and U.is_zero()) or iso(T, U)


def test_tau_inv_functor_requires_hereditary(nak, ltw):
    for a in (nak, ltw):
        with pytest.raises(ValueError):
            TauInvFunctor(a)
        with pytest.raises(ValueError):
            preprojective_algebra(a)


def test_preprojective_a2(a2):
    Pi = preprojective_algebra(a2)
    assert Pi.dim == 4
    assert Pi.meta["grading"] == [3, 1]
    # degree zero is the algebra itself
    g0 = Pi.meta["grading"][0]
    assert all(c == 0 for i in range(g0) for j in range(g0)
               for c in Pi.table[i][j][g0:])
    sub = [[tuple(Pi.table[i][j][:g0]) for j in range(g0)] for i in range(g0)]
    A0 = Algebra(f2, Pi.basis_names[:g0], sub, tuple(Pi.unit[:g0]),
                 tag="derived")
    assert find_algebra_isomorphism(A0, a2) is not None


def test_preprojective_dimension_is_sum_of_ind_dims(a3):
    # each summand Hom(A, tau^{-r} A) contributes dim tau^{-r} A, and the
    # tau^{-1} orbit of A runs over every indecomposable exactly once
    Pi = preprojective_algebra(a3)
    cat = enumerate_ind(a3, sweep=False)
    assert Pi.dim == sum(x.dim for x in cat)
    assert Pi.meta["grading"] == [6, 3, 1]


def test_preprojective_d4():
    d4 = path_algebra(
        Quiver(("1", "2", "3", "4"), ((0, 3, "a"), (1, 3, "b"), (2, 3, "c"))),
        [], f2)
    Pi = preprojective_algebra(d4)
    assert Pi.dim == 28
    assert Pi.meta["grading"] == [7, 14, 7]


def test_preprojective_of_semisimple_is_identity():
    ss = path_algebra(Quiver(("1",), ()), [], f3)
    Pi = preprojective_algebra(ss)
    assert Pi.dim == 1
    assert Pi.meta["grading"] == [1]


def test_preprojective_over_f3():
    a = path_algebra(Quiver(("1", "2"), ((0, 1, "a"),)), [], f3)
    Pi = preprojective_algebra(a)
    assert Pi.dim == 4 and Pi.meta["grading"] == [3, 1]


# -- property tests ----------------------------------------------------------------


@st.composite
def a2_module(draw):
    idx = draw(st.lists(st.integers(0, 2), min_size=0, max_size=3))
    return tuple(sorted(idx))


@settings(max_examples=30, deadline=None)
@given(a2_module(), a2_module())
def test_hom_dim_additive_over_sums(ka, kb):
    cat = enumerate_ind(_a2())
    X = cat.rep_of_key(ka)
    Y = cat.rep_of_key(kb)
    if X.is_zero() or Y.is_zero():
        assert hom(X, Y).dim == 0
        return
    total = sum(hom(cat[i], cat[j]).dim for i in ka for j in kb)
    assert hom(X, Y).dim == total


@settings(max_examples=30, deadline=None)
@given(a2_module())
def test_decompose_recovers_key(ka):
    cat = enumerate_ind(_a2())
    X = cat.rep_of_key(ka)
    assert cat.key(X) == ka
    assert composition_vector(X) == tuple(
        sum(composition_vector(cat[i])[t] for i in ka) for t in range(2))


@settings(max_examples=20, deadline=None)
@given(a2_module())
def test_dual_involution_property(ka):
    cat = enumerate_ind(_a2())
    X = cat.rep_of_key(ka)
    if X.is_zero():
        return
    assert iso(dual_rep(dual_rep(X)), X)
