"""Second-order period objects: completion, non-critical values, verifiers.

Objects attached to a weight-k cusp form f, with F its Eichler integral:

* F2(z)     = int_{-conj z}^{i oo} F(w) (w+z)^(-k) dw      (quadrature), also
              (k-2)! sum a(n) Gamma(1-k, 4 pi n y) q^(-n)   (termwise);
* r2(z)     = int_0^{i oo} F(w) (wz-1)^(-k) dw              (holomorphic);
* tilde(z)  = int_{-conj z}^{i oo} r(w) (w+z)^(-k) dw, with the closed form
              -(k-2)! sum_{n,l} L(n+1) (-2 pi i z)^l (-4 pi y)^(-1-n-l)
                               / (l! (k-2-n-l)! (1+n+l))
              (purely non-holomorphic: every y-exponent is negative);
* hat = r2 - tilde, the completion satisfying the period relations.

The closed form for the correction term is the one the termwise computation
produces; it is cross-checked against direct quadrature by the verifier
suite.  Non-critical L-values are read off from derivatives of r2 at 0:
d^m/dz^m r2(z) |_{z -> 0+} = i^(k+m) (m+k-1)! m! / ((k-1)(2 pi)^(m+k)) L(k+m),
computed by differentiating under the integral sign, where the limit can be
taken exactly (the differentiated integrand is absolutely integrable at
z = 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath as mp

from .eichler import (
    S,
    U,
    UTILDE,
    eichler_integral,
    period_polynomial,
    slash_function,
)
from .kernel import (
    DomainError,
    NonConvergent,
    PrecisionContext,
    RayPath,
    quad_polyline,
    quad_ray,
    xi_fd,
)
from .lfun import LValue
from .qforms import QSeries, conjugate_form
from .reports import RelationReport, residual_scale
from .special import upper_incomplete_gamma


class ExtrapolationUnstable(NonConvergent):
    """Richardson stages disagree beyond the model error."""


@dataclass(frozen=True)
class MockPeriodEvaluation:
    """Pointwise bundle (r2, tilde, hat) with hat = r2 - tilde exactly."""

    z: mp.mpc
    r_f2: mp.mpc
    tilde: mp.mpc
    hat: mp.mpc
    method: str


def F_f2(f: QSeries, z, ctx: PrecisionContext, method: str = "quadrature") -> mp.mpc:
    """Iterated integral F2(z); ``method`` is "quadrature" or "termwise"."""
    with mp.workdps(ctx.work_dps):
        z = mp.mpc(z)
        if not mp.im(z) > 0:
            raise DomainError("F_f2 requires Im z > 0")
        if f.is_zero():
            return mp.mpc(0)
        if method == "termwise":
            return _F_f2_termwise(f, z, ctx)
        F = eichler_integral(f, ctx)
        k = f.weight
        integrand = lambda w: F(w) * (w + z) ** (-k)
        return quad_ray(integrand, RayPath(start=-mp.conj(z)), 2 * mp.pi, ctx, avoid=(-z,))


def _F_f2_termwise(f: QSeries, z: mp.mpc, ctx: PrecisionContext) -> mp.mpc:
    k = f.weight
    y = mp.im(z)
    qm = mp.exp(-2j * mp.pi * z)  # q^(-1); |q^(-n)| = e^(2 pi n y)
    eps = ctx.eps()
    total = mp.mpc(0)
    qn = mp.mpc(1)
    from .qforms import _to_mpc

    for n in range(1, f.n_max + 1):
        qn *= qm
        c = f.coeff(n)
        term_mag = None
        if c != 0:
            term = _to_mpc(c) * upper_incomplete_gamma(1 - k, 4 * mp.pi * n * y, ctx) * qn
            total += term
            term_mag = abs(term)
        # Gamma(1-k, x) ~ x^(-k) e^(-x): the e^(2 pi n y) growth of q^(-n)
        # is beaten by e^(-4 pi n y), so terms decay like e^(-2 pi n y)
        if term_mag is not None and n >= 4 and term_mag < eps * (1 + abs(total)):
            break
    return mp.factorial(k - 2) * total


def r_f2(f: QSeries, z, ctx: PrecisionContext) -> mp.mpc:
    """Holomorphic second-order period function int_0^{i oo} F(w)(wz-1)^(-k) dw.

    The integrand is bounded at w = 0 (F tends to r(0) along the ray) and the
    pole w = 1/z of the kernel lies in the lower half-plane, off the path.
    """
    with mp.workdps(ctx.work_dps):
        z = mp.mpc(z)
        if f.is_zero():
            return mp.mpc(0)
        F = eichler_integral(f, ctx)
        k = f.weight
        pole = 1 / z if z != 0 else None
        integrand = lambda w: F(w) * (w * z - 1) ** (-k)
        return quad_ray(
            integrand,
            RayPath(start=mp.mpc(0)),
            2 * mp.pi,
            ctx,
            avoid=(pole,) if pole is not None else (),
        )


def tilde_r_f2(f: QSeries, z, ctx: PrecisionContext, method: str = "closed") -> mp.mpc:
    """Non-holomorphic correction term; closed form by default."""
    with mp.workdps(ctx.work_dps):
        z = mp.mpc(z)
        if not mp.im(z) > 0:
            raise DomainError("tilde_r_f2 requires Im z > 0")
        if f.is_zero():
            return mp.mpc(0)
        if method == "quadrature":
            r = period_polynomial(f, ctx).base
            k = f.weight
            integrand = lambda w: r(w) * (w + z) ** (-k)
            return quad_ray(integrand, RayPath(start=-mp.conj(z)), 0, ctx, avoid=(-z,))
        if method != "closed":
            raise ValueError("method must be 'closed' or 'quadrature'")
        return _tilde_closed(f, z, ctx)


def _tilde_closed(f: QSeries, z: mp.mpc, ctx: PrecisionContext) -> mp.mpc:
    k = f.weight
    lvals = period_polynomial(f, ctx).critical_values
    y = mp.im(z)
    total = mp.mpc(0)
    minus_2piz = -2j * mp.pi * z
    inv4py = 1 / (-4 * mp.pi * y)
    for n in range(0, k - 1):
        zl = mp.mpc(1)
        for l in range(0, k - 1 - n):
            total += (
                lvals[n]
                / (mp.factorial(l) * mp.factorial(k - 2 - n - l) * (1 + n + l))
                * zl
                * inv4py ** (1 + n + l)
            )
            zl *= minus_2piz
    return -mp.factorial(k - 2) * total


def hat_r_f2(f: QSeries, z, ctx: PrecisionContext) -> MockPeriodEvaluation:
    """Completion r2 - tilde at z (closed-form correction term)."""
    with mp.workdps(ctx.work_dps):
        z = mp.mpc(z)
        r2 = r_f2(f, z, ctx)
        tl = tilde_r_f2(f, z, ctx)
        return MockPeriodEvaluation(z=z, r_f2=r2, tilde=tl, hat=r2 - tl, method="quadrature+closed")


def hat_function(f: QSeries, ctx: PrecisionContext) -> Callable[[mp.mpc], mp.mpc]:
    """The completion as a plain function of z (for slash/xi probing)."""

    def h(z):
        return hat_r_f2(f, z, ctx).hat

    return h


def noncritical_lvalue(
    f: QSeries,
    m: int,
    ctx: PrecisionContext,
    method: str = "limit",
) -> LValue:
    """L(k+m) extracted from the m-th derivative of r2 at the cusp 0.

    Differentiating under the integral sign gives
    d^m/dz^m r2(z) = (-1)^m (k)_m int_0^{i oo} F(w) w^m (wz-1)^(-k-m) dw,
    absolutely convergent down to z = 0, where it collapses to
    (k)_m int F(w) w^m dw.  ``method="limit"`` evaluates there exactly;
    ``method="richardson"`` instead samples small real z in {1e-2, 1e-3} and
    extrapolates with a first-order model, which carries a model error of
    order z1*z2 relative and is kept as a stability probe.
    """
    if m < 0 or m > 6:
        raise DomainError("derivative order limited to 0 <= m <= 6")
    with mp.workdps(ctx.work_dps):
        if f.is_zero():
            return LValue(s=mp.mpc(f.weight + m), value=mp.mpc(0), method="mock-period", est_error=mp.mpf(0))
        k = f.weight
        const = (
            mp.mpc(0, 1) ** (k + m)
            * mp.factorial(m + k - 1)
            * mp.factorial(m)
            / ((k - 1) * (2 * mp.pi) ** (m + k))
        )
        if method == "limit":
            deriv = _r_f2_derivative(f, m, mp.mpf(0), ctx)
        elif method == "richardson":
            z1, z2 = mp.mpf("1e-2"), mp.mpf("1e-3")
            v1 = _r_f2_derivative(f, m, z1, ctx)
            v2 = _r_f2_derivative(f, m, z2, ctx)
            deriv = (z1 * v2 - z2 * v1) / (z1 - z2)
            exact = _r_f2_derivative(f, m, mp.mpf(0), ctx)
            if abs(deriv - exact) > mp.mpf("0.05") * residual_scale(exact):
                raise ExtrapolationUnstable("Richardson stages disagree with the limit")
        else:
            raise ValueError("method must be 'limit' or 'richardson'")
        value = deriv / const
        return LValue(s=mp.mpc(k + m), value=value, method="mock-period", est_error=ctx.eps())


def _r_f2_derivative(f: QSeries, m: int, z_real: mp.mpf, ctx: PrecisionContext) -> mp.mpc:
    F = eichler_integral(f, ctx)
    k = f.weight
    sign = (-1) ** m * mp.rf(k, m)

    def integrand(w):
        return F(w) * w ** m * (w * z_real - 1) ** (-k - m)

    return sign * quad_ray(integrand, RayPath(start=mp.mpc(0)), 2 * mp.pi, ctx)


# ---------------------------------------------------------------------------
# verifiers
# ---------------------------------------------------------------------------

def verify_superm(f: QSeries, pts: Sequence[complex], ctx: PrecisionContext) -> RelationReport:
    """Residuals of F2|_k(S-1)(z) - (r2 - tilde)(z) at each point."""
    k = f.weight
    residuals = []
    with mp.workdps(ctx.work_dps):
        for z in pts:
            z = mp.mpc(z)
            lhs = F_f2(f, S.apply(z), ctx) * z ** (-k) - F_f2(f, z, ctx)
            ev = hat_r_f2(f, z, ctx)
            residuals.append(abs(lhs - ev.hat) / residual_scale(lhs, ev.hat))
    return RelationReport.from_residuals(
        identity=f"superm[{f.label}]",
        points=pts,
        residuals=residuals,
        tolerance=ctx.tol_tight,
    )


def verify_w_k2(f: QSeries, pts: Sequence[complex], ctx: PrecisionContext) -> list:
    """Period relations and xi-image of the completion: three reports.

    hat|(1+S) = hat|(1+U+U^2) = 0 at tol_tight, and
    xi_k(hat) = (2i)^(1-k) r_{f^c} at tol_fd (finite differences).
    """
    k = f.weight
    h = hat_function(f, ctx)
    rconj = period_polynomial(conjugate_form(f), ctx).base
    res_s, res_u, res_xi = [], [], []
    with mp.workdps(ctx.work_dps):
        for z in pts:
            z = mp.mpc(z)
            v0 = h(z)
            vs = v0 + slash_function(h, k, S)(z)
            vu = v0 + slash_function(h, k, U)(z) + slash_function(h, k, U * U)(z)
            scale = residual_scale(v0)
            res_s.append(abs(vs) / scale)
            res_u.append(abs(vu) / scale)
            xv = xi_fd(h, k, z, ctx)
            target = (2j) ** (1 - k) * rconj(z)
            res_xi.append(abs(xv - target) / residual_scale(xv, target))
    return [
        RelationReport.from_residuals(f"wk2_slash_S[{f.label}]", pts, res_s, ctx.tol_tight),
        RelationReport.from_residuals(f"wk2_slash_U[{f.label}]", pts, res_u, ctx.tol_tight),
        RelationReport.from_residuals(f"wk2_xi_image[{f.label}]", pts, res_xi, ctx.tol_fd),
    ]


def verify_mock_es(f: QSeries, pts: Sequence[complex], ctx: PrecisionContext) -> list:
    """The two period relations satisfied by r2 itself (with correction integrals).

    r2|(1+S)(z)      = int_0^{i oo} r(w) (w+z)^(-k) dw
    r2|(1+U+U^2)(z)  = int_{-1}^{i oo} r(w) (w+z)^(-k) dw
                       + int_{-1}^{0} (r|_{2-k} Utilde)(w) (w+z)^(-k) dw

    The right-hand integrals have polynomial integrands; the cusp-to-cusp leg
    runs -1 -> -1+i -> i -> 0 through the upper half-plane.
    """
    from .eichler import slash_polynomial

    k = f.weight
    res1, res2 = [], []
    with mp.workdps(ctx.work_dps):
        r = period_polynomial(f, ctx).base
        r_ut = slash_polynomial(r, 2 - k, UTILDE)
        for z in pts:
            z = mp.mpc(z)
            lhs1 = r_f2(f, z, ctx) + r_f2(f, S.apply(z), ctx) * z ** (-k)
            g1 = lambda w: r(w) * (w + z) ** (-k)
            rhs1 = quad_ray(g1, RayPath(start=mp.mpc(0)), 0, ctx, avoid=(-z,))
            res1.append(abs(lhs1 - rhs1) / residual_scale(lhs1, rhs1))

            lhs2 = (
                r_f2(f, z, ctx)
                + r_f2(f, U.apply(z), ctx) * U.jfactor(z) ** (-k)
                + r_f2(f, (U * U).apply(z), ctx) * (U * U).jfactor(z) ** (-k)
            )
            rhs2a = quad_ray(g1, RayPath(start=mp.mpc(-1)), 0, ctx, avoid=(-z,))
            g2 = lambda w: r_ut(w) * (w + z) ** (-k)
            rhs2b = quad_polyline(
                g2,
                [mp.mpc(-1), mp.mpc(-1, 1), mp.mpc(0, 1), mp.mpc(0)],
                ctx,
                avoid=(-z,),
            )
            rhs2 = rhs2a + rhs2b
            res2.append(abs(lhs2 - rhs2) / residual_scale(lhs2, rhs2))
    return [
        RelationReport.from_residuals(f"mockes_1S[{f.label}]", pts, res1, ctx.tol_tight),
        RelationReport.from_residuals(f"mockes_UU[{f.label}]", pts, res2, ctx.tol_tight),
    ]
