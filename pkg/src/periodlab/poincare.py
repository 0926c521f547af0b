"""Seed functions, truncated Poincare sums, termwise descent identities.

Identities between full Poincare series reduce termwise because the xi and
Bol operators commute with the slash action; a "matched truncation" evaluates
both sides over the identical finite coset set, turning slowly convergent
series statements into exact pointwise checks at any truncation bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable, Sequence, Tuple

import mpmath as mp

from .eichler import GroupElement, IDENTITY
from .kernel import DomainError, PrecisionContext, laplace_fd, xi_fd
from .qforms import QSeries, conjugate_form, bol, evaluate
from .reports import RelationReport, residual_scale
from .special import cal_M, psi_seed


@dataclass(frozen=True)
class CosetTruncation:
    """Coset representatives for the translation subgroup, bottom rows bounded.

    One representative per coset with bottom row (c, d), gcd(c, d) = 1,
    1 <= c <= bound, |d| <= bound, plus the identity (c, d) = (0, 1).
    """

    bound: int
    representatives: Tuple[GroupElement, ...]

    @classmethod
    def build(cls, bound: int) -> "CosetTruncation":
        if bound < 0:
            raise ValueError("bound must be >= 0")
        reps = [IDENTITY]
        for c in range(1, bound + 1):
            for d in range(-bound, bound + 1):
                if gcd(c, d) != 1:
                    continue
                # solve a d - b c = 1
                a, b = _solve_row(c, d)
                reps.append(GroupElement(a, b, c, d))
        return cls(bound=bound, representatives=tuple(reps))


def _solve_row(c: int, d: int) -> Tuple[int, int]:
    # extended euclid: u c + v d = 1  ->  (a, b) = (v, -u)
    u, v = _ext_gcd(c, d)
    return v, -u


def _ext_gcd(c: int, d: int) -> Tuple[int, int]:
    old_r, r = c, d
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r == -1:
        old_u, old_v = -old_u, -old_v
    return old_u, old_v


def phi_seed(k: int, m: int, s, z, ctx: PrecisionContext) -> mp.mpc:
    """Seed cal_M(k, s, 4 pi m y) e(m x) of the weight-k series (k may be <= 0)."""
    if m == 0:
        raise DomainError("phi_seed requires m != 0")
    with mp.workdps(ctx.work_dps):
        z = mp.mpc(z)
        if not mp.im(z) > 0:
            raise DomainError("phi_seed requires Im z > 0")
        return cal_M(k, s, 4 * mp.pi * m * mp.im(z), ctx) * mp.exp(2j * mp.pi * m * mp.re(z))


def truncated_poincare(
    series_weight: int,
    seed: Callable[[mp.mpc], mp.mpc],
    z,
    trunc: CosetTruncation,
    ctx: PrecisionContext,
) -> mp.mpc:
    """sum over representatives of (seed |_weight gamma)(z), fixed order."""
    with mp.workdps(ctx.work_dps):
        z = mp.mpc(z)
        terms = [
            seed(g.apply(z)) * g.jfactor(z) ** (-series_weight)
            for g in trunc.representatives
        ]
        return mp.fsum(terms)


def verify_termwise_xi(
    k: int,
    m: int,
    pts: Sequence[complex],
    ctx: PrecisionContext,
    trunc_bound: int = 10,
    matched_pts: Sequence[complex] = (mp.mpc(0, 2),),
) -> list:
    """xi_k of the s-derivative seed against the dual-weight Whittaker seed.

    Termwise: xi_k(psi_{-m})(z) = (4 pi m)^(1-k) phi^{(2-k)}_{m, k/2}(z);
    matched truncation: the same identity summed over one coset set on both
    sides, which holds at every bound because xi commutes with the action.
    """
    if m <= 0:
        raise DomainError("index m must be positive")
    res_term = []
    with mp.workdps(ctx.work_dps):
        pref = (4 * mp.pi * m) ** (1 - k)
        seed_psi = lambda w: psi_seed(k, -m, w, ctx)
        seed_phi = lambda w: phi_seed(2 - k, m, mp.mpf(k) / 2, w, ctx)
        for z in pts:
            z = mp.mpc(z)
            lhs = xi_fd(seed_psi, k, z, ctx)
            rhs = pref * seed_phi(z)
            res_term.append(abs(lhs - rhs) / residual_scale(lhs, rhs))
        trunc = CosetTruncation.build(trunc_bound)
        res_matched = []
        for z in matched_pts:
            z = mp.mpc(z)
            big = lambda w: truncated_poincare(k, seed_psi, w, trunc, ctx)
            lhs = xi_fd(big, k, z, ctx)
            rhs = pref * truncated_poincare(2 - k, seed_phi, z, trunc, ctx)
            res_matched.append(abs(lhs - rhs) / residual_scale(lhs, rhs))
    return [
        RelationReport.from_residuals(
            f"xi_descent_termwise[k={k},m={m}]", pts, res_term, ctx.tol_fd
        ),
        RelationReport.from_residuals(
            f"xi_descent_matched[k={k},m={m},C={trunc_bound}]",
            matched_pts,
            res_matched,
            ctx.tol_fd,
        ),
    ]


def verify_termwise_dipoincare(
    k: int,
    m: int,
    pts: Sequence[complex],
    ctx: PrecisionContext,
    trunc_bound: int = 10,
    matched_pts: Sequence[complex] = (mp.mpc(0, "1.5"),),
) -> list:
    """xi_{2-k} of the dual-weight seed against the exponential seed.

    Termwise: xi_{2-k}(phi^{(2-k)}_{-m, k/2})(z) = (k-1)(4 pi m)^(k-1) q^m;
    matched truncation over one coset set on both sides.
    """
    if m <= 0:
        raise DomainError("index m must be positive")
    res_term = []
    with mp.workdps(ctx.work_dps):
        pref = (k - 1) * (4 * mp.pi * m) ** (k - 1)
        seed_phi = lambda w: phi_seed(2 - k, -m, mp.mpf(k) / 2, w, ctx)
        seed_exp = lambda w: mp.exp(2j * mp.pi * m * w)
        for z in pts:
            z = mp.mpc(z)
            lhs = xi_fd(seed_phi, 2 - k, z, ctx)
            rhs = pref * seed_exp(z)
            res_term.append(abs(lhs - rhs) / residual_scale(lhs, rhs))
        trunc = CosetTruncation.build(trunc_bound)
        res_matched = []
        for z in matched_pts:
            z = mp.mpc(z)
            big = lambda w: truncated_poincare(2 - k, seed_phi, w, trunc, ctx)
            lhs = xi_fd(big, 2 - k, z, ctx)
            rhs = pref * truncated_poincare(k, seed_exp, z, trunc, ctx)
            res_matched.append(abs(lhs - rhs) / residual_scale(lhs, rhs))
    return [
        RelationReport.from_residuals(
            f"bol_descent_termwise[k={k},m={m}]", pts, res_term, ctx.tol_fd
        ),
        RelationReport.from_residuals(
            f"bol_descent_matched[k={k},m={m},C={trunc_bound}]",
            matched_pts,
            res_matched,
            ctx.tol_fd,
        ),
    ]


def verify_laplace_eigenvalue(
    series_weight: int,
    m: int,
    s,
    pts: Sequence[complex],
    ctx: PrecisionContext,
) -> RelationReport:
    """Residual of Delta_w(phi) - (s(1-s) + (w^2 - 2w)/4) phi at pts.

    The residual is scaled by the seed magnitude as well: at the harmonic
    parameter the eigenvalue vanishes and the finite-difference error is
    proportional to |phi|, not to the (zero) right-hand side.
    """
    with mp.workdps(ctx.work_dps):
        s = mp.mpf(s)
        lam = s * (1 - s) + mp.mpf(series_weight ** 2 - 2 * series_weight) / 4
        seed = lambda w: phi_seed(series_weight, m, s, w, ctx)
        residuals = []
        for z in pts:
            z = mp.mpc(z)
            lhs = laplace_fd(seed, series_weight, z, ctx)
            val = seed(z)
            rhs = lam * val
            residuals.append(abs(lhs - rhs) / residual_scale(lhs, rhs, val))
    return RelationReport.from_residuals(
        f"laplace_eigenvalue[w={series_weight},m={m},s={mp.nstr(s, 6)}]",
        pts,
        residuals,
        ctx.tol_fd,
    )


def verify_bol_xi_avatar(f: QSeries, pts: Sequence[complex], ctx: PrecisionContext) -> list:
    """q-series avatar of the D^(k-1) o xi_k chain on the iterated integral.

    First family (finite differences): xi_k(F2)(z) equals the q-series
    (2i)^(1-k) conj(F(-conj z)) = -(2i)^(1-k) F^(c)(z) pointwise.  Second
    family: applying the termwise (k-1)-fold derivative to that series gives
    -(k-2)!/(4 pi)^(k-1) f^c, checked by evaluating both sides.
    """
    from .eichler import eichler_integral
    from .mockcore import F_f2

    k = f.weight
    fc = conjugate_form(f)
    Fc = eichler_integral(fc, ctx)
    res_fd, res_chain = [], []
    with mp.workdps(ctx.work_dps):
        pref = (2j) ** (1 - k)
        F2 = lambda w: F_f2(f, w, ctx)
        # weight 2-k series with coefficients of (2i)^(1-k) F^c = -(2i)^(1-k) F_{f^c}
        gcoeffs = tuple(-pref * Fc.coefficient(n) for n in range(1, fc.n_max + 1))
        gseries = QSeries(
            weight=2 - k,
            n_min=1,
            coeffs=gcoeffs,
            tail_bound=(float(2 * abs(pref) * abs(Fc.coefficient(1))) + 2.0, 1.0),
            cuspidal=True,
            modular=False,
            label="xi_image_series",
        )
        chain = bol(gseries)  # weight k series, expect -(k-2)!/(4 pi)^(k-1) f^c
        chain_pref = -mp.factorial(k - 2) / (4 * mp.pi) ** (k - 1)
        for z in pts:
            z = mp.mpc(z)
            lhs = xi_fd(F2, k, z, ctx)
            rhs = -pref * Fc(z)
            res_fd.append(abs(lhs - rhs) / residual_scale(lhs, rhs))
            cv = evaluate(chain, z, ctx)
            tv = chain_pref * evaluate(fc, z, ctx)
            res_chain.append(abs(cv - tv) / residual_scale(cv, tv))
    return [
        RelationReport.from_residuals(f"bol_xi_avatar_fd[{f.label}]", pts, res_fd, ctx.tol_fd),
        RelationReport.from_residuals(
            f"bol_xi_avatar_chain[{f.label}]", pts, res_chain, ctx.tol_tight
        ),
    ]
