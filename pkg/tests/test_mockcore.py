"""Second-order period objects and their verifiers."""

import mpmath as mp
import pytest

from periodlab import (
    F_f2,
    S,
    hat_function,
    hat_r_f2,
    l_dirichlet,
    noncritical_lvalue,
    period_polynomial,
    r_f2,
    tilde_r_f2,
    verify_mock_es,
    verify_superm,
    verify_w_k2,
    xi_fd,
    laplace_fd,
)


@pytest.fixture(scope="module")
def zero(f_delta):
    return f_delta.scale(0)


def test_F_f2_two_routes_agree(ctx, f_delta):
    for z in (mp.mpc(0, 1), mp.mpc("0.3", "1.0")):
        v1 = F_f2(f_delta, z, ctx)
        v2 = F_f2(f_delta, z, ctx, method="termwise")
        assert abs(v1 - v2) <= ctx.tol_tight * (1 + abs(v1))


def test_F_f2_t_invariance(ctx, f_delta):
    z = mp.mpc("0.3", 1)
    a = F_f2(f_delta, z + 1, ctx)
    b = F_f2(f_delta, z, ctx)
    assert abs(a - b) <= ctx.tol_tight * (1 + abs(a))


def test_F_f2_zero(ctx, zero):
    assert F_f2(zero, mp.mpc(0, 1), ctx) == 0


def test_r_f2_holomorphy_probe(ctx, f_delta):
    z = mp.mpc(1, 1)
    v = xi_fd(lambda w: r_f2(f_delta, w, ctx), 12, z, ctx)
    scale = max(1, abs(r_f2(f_delta, z, ctx)))
    assert abs(v) <= ctx.tol_fd * scale


def test_r_f2_zero(ctx, zero):
    assert r_f2(zero, mp.mpc(0, 1), ctx) == 0


def test_tilde_closed_vs_quadrature(ctx, f_delta):
    for z in (mp.mpc(0, 1), mp.mpc(1, 1), mp.mpc("0.5", 2)):
        c = tilde_r_f2(f_delta, z, ctx, method="closed")
        q = tilde_r_f2(f_delta, z, ctx, method="quadrature")
        assert abs(c - q) <= ctx.tol_tight * (1 + abs(c)), z


def test_tilde_decays_like_inverse_y(ctx, f_delta):
    # purely non-holomorphic: every y-exponent is negative, so y * tilde(iy)
    # converges.  At z = iy every l-term of the n = 0 row scales as 1/y, so
    # the limit constant is the full n = 0 row of the closed form (the l = 0
    # term alone misses it by a factor ~4.6).
    k = 12
    L1 = period_polynomial(f_delta, ctx).critical_values[0]
    C0 = -mp.factorial(k - 2) * L1 * mp.fsum(
        (2 * mp.pi) ** l
        * (-1) ** (1 + l)
        * (4 * mp.pi) ** mp.mpf(-1 - l)
        / (mp.factorial(l) * mp.factorial(k - 2 - l) * (1 + l))
        for l in range(k - 1)
    )
    v100 = tilde_r_f2(f_delta, mp.mpc(0, 100), ctx)
    assert abs(100 * v100 - C0) <= mp.mpf("0.01") * abs(C0)
    v50 = tilde_r_f2(f_delta, mp.mpc(0, 50), ctx)
    # O(1/y) approach: halving the distance when y doubles
    assert abs(100 * v100 - C0) <= mp.mpf("0.7") * abs(50 * v50 - C0)


def test_tilde_zero(ctx, zero):
    assert tilde_r_f2(zero, mp.mpc(0, 1), ctx) == 0


def test_hat_assembly_exact(ctx, f_delta):
    ev = hat_r_f2(f_delta, mp.mpc("0.3", "1.2"), ctx)
    assert ev.hat == ev.r_f2 - ev.tilde


def test_hat_harmonicity(ctx, f_delta):
    z = mp.mpc(1, 1)
    h = hat_function(f_delta, ctx)
    v = laplace_fd(h, 12, z, ctx, step=mp.mpf("1e-10"))
    assert abs(v) <= ctx.tol_fd * max(1, abs(h(z)))


def test_hat_xi_image(ctx, f_delta):
    z = mp.mpc("0.3", "1.1")
    h = hat_function(f_delta, ctx)
    rp = period_polynomial(f_delta, ctx)
    got = xi_fd(h, 12, z, ctx)
    want = (2j) ** (1 - 12) * rp.base(z)
    assert abs(got - want) <= ctx.tol_fd * abs(want)


def test_noncritical_values_vs_dirichlet(ctx, f_delta, f_delta_long):
    for m in (0, 3):
        got = noncritical_lvalue(f_delta, m, ctx).value
        want = l_dirichlet(f_delta_long, 12 + m, ctx, tol=mp.mpf("1e-13")).value
        assert abs(got - want) <= mp.mpf("1e-8") * abs(want), m


def test_noncritical_richardson_mode(ctx, f_delta, f_delta_long):
    got = noncritical_lvalue(f_delta, 0, ctx, method="richardson").value
    want = l_dirichlet(f_delta_long, 12, ctx, tol=mp.mpf("1e-13")).value
    # first-order model at z in {1e-2, 1e-3} carries an O(z1 z2) model error
    assert abs(got - want) <= mp.mpf("1e-3") * abs(want)


def test_noncritical_zero(ctx, zero):
    assert noncritical_lvalue(zero, 2, ctx).value == 0


def test_superm_generic_points(ctx, f_delta):
    # includes a translated pair (z, z+1): the completion itself carries no
    # translation law, but the defining identity holds at both points
    z = mp.mpc("0.1", "0.5")
    pts = [z, z + 1, mp.mpc("0.5", "1.7"), mp.mpc("0.9", "3.0")]
    rep = verify_superm(f_delta, pts, ctx)
    assert rep.passed, rep.summary_line()


def test_superm_imaginary_axis(ctx, f_delta):
    rep = verify_superm(f_delta, [mp.mpc(0, 1), mp.mpc(0, "1.7")], ctx)
    assert rep.passed


def test_superm_zero(ctx, zero):
    rep = verify_superm(zero, [mp.mpc(0, 1)], ctx)
    assert rep.passed and rep.max_residual == 0


def test_wk2_families(ctx, f_delta):
    pts = [mp.mpc("0.2", "0.9"), mp.mpc("0.7", "1.4")]
    reps = verify_w_k2(f_delta, pts, ctx)
    assert len(reps) == 3
    for r in reps:
        assert r.passed, r.summary_line()


def test_wk2_weight16(ctx, f_cusp16):
    reps = verify_w_k2(f_cusp16, [mp.mpc("0.3", "1.1")], ctx)
    for r in reps:
        assert r.passed, r.summary_line()


def test_mock_es_relations(ctx, f_delta):
    reps = verify_mock_es(f_delta, [mp.mpc(0, 1), mp.mpc(1, 1), mp.mpc("-0.5", "1.5")], ctx)
    for r in reps:
        assert r.passed, r.summary_line()


def test_mock_es_zero(ctx, zero):
    reps = verify_mock_es(zero, [mp.mpc(0, 1)], ctx)
    for r in reps:
        assert r.max_residual == 0


def test_pipeline_linear_in_f(ctx, f_delta):
    # run with 2f and compare: every pipeline output is linear in f
    two = f_delta.scale(2)
    z = mp.mpc("0.4", "1.3")
    for op in (r_f2, tilde_r_f2, F_f2):
        a = op(f_delta, z, ctx)
        b = op(two, z, ctx)
        assert abs(b - 2 * a) <= 2 * ctx.tol_tight * (1 + abs(b)), op.__name__
    va = noncritical_lvalue(f_delta, 1, ctx).value
    vb = noncritical_lvalue(two, 1, ctx).value
    assert abs(vb - 2 * va) <= 2 * ctx.tol_tight * (1 + abs(vb))


def test_verifiers_independent_of_ambient_precision(ctx, f_delta):
    # all internal arithmetic happens at the context's working precision,
    # so results cannot degrade when the caller sits at low ambient dps
    # (the CLI, unlike this test session, runs at mpmath's default 15)
    with mp.workdps(15):
        rep = verify_superm(f_delta, [mp.mpc("0.3", "1.2")], ctx)
        reps = verify_mock_es(f_delta, [mp.mpc(1, 1)], ctx)
    assert rep.max_residual < mp.mpf("1e-40")
    for r in reps:
        assert r.max_residual < mp.mpf("1e-40"), r.summary_line()


def test_xi_image_degree_bound(ctx, f_delta):
    # xi(hat) interpolated by a degree-(k-2) polynomial at k+3 samples;
    # residual at 3 holdout points stays at FD tolerance
    k = 12
    h = hat_function(f_delta, ctx)
    xs = [mp.mpc("0.1", "0.8") + j * mp.mpc("0.07", "0.12") for j in range(k + 3)]
    vals = [xi_fd(h, k, z, ctx) for z in xs]
    # least-squares fit of degree k-2 through k+3 points
    A = mp.matrix(len(xs), k - 1)
    for i, z in enumerate(xs):
        for j in range(k - 1):
            A[i, j] = z ** j
    G = mp.matrix(k - 1, k - 1)
    b = mp.matrix(k - 1, 1)
    for p in range(k - 1):
        for q in range(k - 1):
            G[p, q] = mp.fsum(mp.conj(A[i, p]) * A[i, q] for i in range(len(xs)))
        b[p] = mp.fsum(mp.conj(A[i, p]) * vals[i] for i in range(len(xs)))
    sol = mp.lu_solve(G, b)
    holdouts = [mp.mpc("0.55", "1.1"), mp.mpc("0.25", "1.9"), mp.mpc("0.8", "1.3")]
    for z in holdouts:
        fit = mp.fsum(sol[j] * z ** j for j in range(k - 1))
        val = xi_fd(h, k, z, ctx)
        assert abs(fit - val) <= ctx.tol_fd * max(1, abs(val))


def test_wk2_weight18(ctx):
    from periodlab import cusp_form

    reps = verify_w_k2(cusp_form(18, 64), [mp.mpc("0.3", "1.1")], ctx)
    for r in reps:
        assert r.passed, r.summary_line()
