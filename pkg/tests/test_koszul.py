import random

import pytest

from lgsing import (ContextMismatch, IdentityViolation, KoszulModule, LGPair, PolyMatrix,
                    WindowTooSmall, act_point, convolve_ext, forget, koszul_algebra, new_koszul,
                    pull_push, rhom_trivial_dims, shift_koszul, telescope, trivial_module, twisted_E,
                    u_cone_check)
from lgsing.errors import VariableCollision
from lgsing.koszul import (au_tensor, intertwines, point_hom_dims, point_lg, pull_push_comparison,
                           tensor_labels, telescope_inclusion)
from corpus import QX, QY, k_rep, koszul_corpus, lg_x, point_corpus
from oracles import koszul_identities_hold, twisted_cohomology_oracle, u_cone_oracle, underlying_cohomology

ALL = koszul_corpus() + point_corpus()
POINT = point_corpus()
K0 = koszul_algebra(point_lg())
T = trivial_module()


def ids(items):
    return [lab for lab, *_ in items]


# ---------------------------------------------------------------- construction

def test_new_koszul_examples():
    assert T.ranks == (1,) and T.lo == 0
    lg = lg_x(2)
    M = new_koszul(lg, -1, [1, 1], [[["x"]]], [[["x"]]])
    assert M == k_rep(2)
    with pytest.raises(IdentityViolation) as exc:
        new_koszul(lg, -1, [1, 1], [[["x"]]], [[["1"]]])
    assert exc.value.degree in (-1, 0)


def test_shape_checks():
    lg = lg_x(2)
    with pytest.raises(ContextMismatch):
        KoszulModule(lg, 0, (1, 2), [PolyMatrix(QX, 1, 1)], [PolyMatrix(QX, 1, 2)])


def test_koszul_algebra():
    K = koszul_algebra(lg_x(2))
    assert (K.lo, K.hi, K.ranks) == (-1, 0, (1, 1))
    assert K.d[0] == PolyMatrix.from_rows(QX, [["x^2"]]) and K.h[0] == PolyMatrix.identity(QX, 1)
    assert K0.d[0].is_zero() and K0.h[0] == PolyMatrix.identity(K0.ctx, 1)


@pytest.mark.parametrize("label", ids(ALL))
def test_validation_detects_corruption(label):
    M = dict(ALL)[label]
    if M.width < 2:
        return
    rng = random.Random(label)
    k = rng.randrange(M.width - 1)
    for which in ("d", "h"):
        mats = list(getattr(M, which))
        A = mats[k]
        if A.rows == 0 or A.cols == 0:
            continue
        i, j = rng.randrange(A.rows), rng.randrange(A.cols)
        entries = [list(r) for r in A.entries]
        entries[i][j] = entries[i][j] + M.ctx.one()
        mats[k] = PolyMatrix(M.ctx, A.rows, A.cols, entries)
        d, h = (mats, M.h) if which == "d" else (M.d, mats)
        if koszul_identities_hold(M.lg.f, list(M.ctx.vars), M.ranks, d, h):
            KoszulModule(M.lg, M.lo, M.ranks, d, h)
        else:
            with pytest.raises(IdentityViolation):
                KoszulModule(M.lg, M.lo, M.ranks, d, h)


@pytest.mark.parametrize("label", ids(ALL))
def test_corpus_identities_by_oracle(label):
    M = dict(ALL)[label]
    assert koszul_identities_hold(M.lg.f, list(M.ctx.vars), M.ranks, M.d, M.h)


def test_forget():
    K = koszul_algebra(lg_x(3))
    F = forget(K)
    assert F.lg.f.is_zero() and F.d == K.d and all(h.is_zero() for h in F.h)
    assert (F.lo, F.ranks) == (K.lo, K.ranks)
    assert forget(T) == T


@pytest.mark.parametrize("label", ids(ALL))
def test_pull_push_rank_formula(label):
    M = dict(ALL)[label]
    P = pull_push(M)
    for i in P.degrees():
        assert P.rank(i) == M.rank(i) + M.rank(i + 1)


def test_pull_push_examples():
    assert pull_push(T) == K0
    assert pull_push(koszul_algebra(lg_x(2))).ranks == (1, 2, 1)


# ---------------------------------------------------------------- convolution

def test_convolution_examples():
    C = convolve_ext(koszul_algebra(lg_x(2)), koszul_algebra(lg_x(3, QY)))
    assert C.ranks == (1, 2, 1) and C.lg.f == C.ctx.parse("x^2 + y^3")
    with pytest.raises(VariableCollision):
        convolve_ext(k_rep(2), k_rep(3))


@pytest.mark.parametrize("label", ids(ALL))
def test_point_action_of_trivial_is_literal_identity(label):
    M = dict(ALL)[label]
    assert act_point(T, M) == M


@pytest.mark.parametrize("label", ids(ALL))
def test_point_action_of_koszul_algebra_is_pull_push(label):
    M = dict(ALL)[label]
    X, Y = act_point(K0, M), pull_push(M)
    assert (X.lo, X.ranks) == (Y.lo, Y.ranks)
    phi = pull_push_comparison(M)
    assert intertwines(phi, Y, X)
    # phi is unitriangular up to signs after the summand swap, hence invertible
    for n, m in phi.items():
        assert m.rows == m.cols


def test_point_action_rejects_nonzero_potential():
    with pytest.raises(ValueError):
        act_point(k_rep(2), k_rep(2, "y"))


def test_act_point_of_telescope_on_trivial():
    assert act_point(telescope(1), T).ranks == (1, 1)


def _relabel(M, N, P):
    """Labels (a, b, c, i, j, k) per degree of (M*N)*P and M*(N*P)."""
    def left():
        MN = tensor_labels(M, N)
        out = {}
        for n, summands in tensor_labels(convolve_ext(M, N), P).items():
            labs = []
            for ab, c in summands:
                for (a, b) in MN[ab]:
                    for i in range(M.rank(a)):
                        for j in range(N.rank(b)):
                            labs.extend((a, b, c, i, j, k) for k in range(P.rank(c)))
            # Kronecker order inside (ab, c): the MN index is outer
            out[n] = labs
        return out

    def right():
        NP = tensor_labels(N, P)
        out = {}
        for n, summands in tensor_labels(M, convolve_ext(N, P)).items():
            labs = []
            for a, bc in summands:
                for i in range(M.rank(a)):
                    for (b, c) in NP[bc]:
                        for j in range(N.rank(b)):
                            labs.extend((a, b, c, i, j, k) for k in range(P.rank(c)))
            out[n] = labs
        return out
    return left(), right()


def test_convolution_associativity():
    Rz = __import__("lgsing").RingCtx.make("Q", "z")
    M, N = k_rep(2), koszul_algebra(lg_x(3, QY))
    P = koszul_algebra(LGPair.make(Rz, "z^2"))
    L = convolve_ext(convolve_ext(M, N), P)
    R = convolve_ext(M, convolve_ext(N, P))
    ll, rl = _relabel(M, N, P)
    assert (L.lo, L.ranks) == (R.lo, R.ranks)
    perm = lambda labs: sorted(range(len(labs)), key=lambda k: labs[k])
    for n in L.degrees():
        if n + 1 <= L.hi:
            a = L.d_at(n).permute(perm(ll[n + 1]), perm(ll[n]))
            b = R.d_at(n).permute(perm(rl[n + 1]), perm(rl[n])).embed(L.ctx)
            assert a == b
            a = L.h_at(n + 1).permute(perm(ll[n]), perm(ll[n + 1]))
            b = R.h_at(n + 1).permute(perm(rl[n]), perm(rl[n + 1])).embed(L.ctx)
            assert a == b


# ---------------------------------------------------------------- telescopes

def test_telescope_base_case():
    assert telescope(1) == K0
    with pytest.raises(ValueError):
        telescope(0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_telescope_underlying_cohomology(n):
    Tn = telescope(n)
    assert (Tn.lo, Tn.hi) == (-2 * n + 1, 0)
    coh = underlying_cohomology(Tn)
    expected = {i: 0 for i in Tn.degrees()}
    expected[0] = expected[-2 * n + 1] = 1
    assert coh == expected


@pytest.mark.parametrize("n", [1, 2, 3])
def test_telescope_inclusions_are_eps_stable(n):
    small, big = telescope(n), telescope(n + 1)
    inc = telescope_inclusion(n)
    # the image of T_n sits in the top 2n degrees of T_(n+1); matrices agree there
    for i in small.degrees():
        if i + 1 <= small.hi:
            assert big.d_at(i) @ inc[i] == inc[i + 1] @ small.d_at(i)
        if i - 1 >= small.lo:
            assert big.h_at(i) @ inc[i] == inc[i - 1] @ small.h_at(i)


@pytest.mark.parametrize("label", ["trivial", "K(A,0)", "trivial[1]", "T_2"])
def test_telescope_hom_stabilizes_to_trivial_module_values(label):
    M = dict(POINT)[label]
    target = rhom_trivial_dims(M, 5)
    # below 2n - 2 + lo the truncation of the telescope is invisible
    for n in (1, 2, 3, 4):
        degs = range(M.lo - 2, 2 * n - 2 + M.lo)
        assert point_hom_dims(telescope(n), M, degs) == {j: target[j] for j in degs}


# ---------------------------------------------------------------- twisted functor

def _n(M):
    # smallest window at least 4 that contains M
    return max(4, M.hi - M.lo, (max(abs(M.lo), abs(M.hi)) + 1) // 2)


def test_twisted_trivial_is_free_with_zero_differential():
    A = twisted_E(T, 3)
    for n in range(-6, 7):
        assert len(A.level(n)) == (1 if n >= 0 and n % 2 == 0 else 0)
        assert A.differential(n).is_zero()


def test_rhom_examples():
    N = 5
    t = rhom_trivial_dims(T, N)
    assert t == {n: int(n >= 0 and n % 2 == 0) for n in range(-10, 11)}
    assert rhom_trivial_dims(K0, N) == {n: int(n == -1) for n in range(-10, 11)}
    assert rhom_trivial_dims(shift_koszul(T), N) == {n: int(n >= -1 and n % 2 == 1) for n in range(-10, 11)}


@pytest.mark.parametrize("label", ids(POINT))
def test_rhom_against_truncated_complex_oracle(label):
    M = dict(POINT)[label]
    assert rhom_trivial_dims(M, _n(M)) == twisted_cohomology_oracle(M, _n(M))


def test_window_too_small():
    with pytest.raises(WindowTooSmall):
        twisted_E(telescope(3), 2)
    with pytest.raises(ValueError):
        twisted_E(k_rep(2), 5)


@pytest.mark.parametrize("label", ids(POINT))
def test_au_modules_are_complexes_of_u_modules(label):
    assert twisted_E(dict(POINT)[label], _n(dict(POINT)[label])).check()


@pytest.mark.parametrize("a, b", [("trivial", "K(A,0)"), ("K(A,0)", "K(A,0)"), ("T_2", "trivial[1]"),
                                  ("K(A,0)", "T_2")])
def test_twisted_functor_is_monoidal(a, b):
    M, N = dict(POINT)[a], dict(POINT)[b]
    W = 6
    lhs = twisted_E(convolve_ext(M, N), W)
    rhs = au_tensor(twisted_E(M, W), twisted_E(N, W))
    lo, hi = lhs.window
    for n in range(lo, hi):
        assert lhs.level(n) == rhs.level(n)
        assert lhs.differential(n) == rhs.differential(n)
        assert lhs.u_map(n) == rhs.u_map(n)


# ---------------------------------------------------------------- cone of u

@pytest.mark.parametrize("label", ids(POINT))
def test_u_cone_check(label):
    M = dict(POINT)[label]
    r = u_cone_check(M, _n(M))
    assert r.passed
    assert r.cone_dims == u_cone_oracle(M, _n(M))


def test_u_cone_examples():
    nz = lambda d: {k for k, v in d.items() if v}
    assert nz(u_cone_check(T, 5).cone_dims) == {0}
    assert nz(u_cone_check(K0, 5).cone_dims) == {-1, 0}
    assert nz(u_cone_check(shift_koszul(T), 5).cone_dims) == {-1}
