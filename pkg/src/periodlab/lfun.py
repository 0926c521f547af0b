"""L-values of level-1 cusp forms.

Two engines:

* ``l_dirichlet`` - direct summation in the absolute-convergence region,
  with a certified tail bound from the series' coefficient-growth metadata.
  This is the oracle for non-critical values.
* ``l_completed`` - the incomplete-gamma series for the completed function
  Lambda(s) = (2 pi)^(-s) Gamma(s) L(s)
            = sum_n a(n) [ Gamma(s, 2 pi n) / (2 pi n)^s
                          + (-1)^(k/2) Gamma(k-s, 2 pi n) / (2 pi n)^(k-s) ],
  obtained by splitting int_0^oo f(iy) y^(s-1) dy at y = 1 and applying
  f(i/y) = (iy)^k f(iy).  It converges exponentially and is valid at every
  s, which makes it the engine for all critical arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .kernel import DomainError, PrecisionContext, TailTooLarge
from .qforms import QSeries, _to_mpc
from .special import upper_incomplete_gamma


class OutOfRegion(DomainError):
    """Argument outside the absolute-convergence region of the Dirichlet series."""


@dataclass(frozen=True)
class LValue:
    s: mp.mpc
    value: mp.mpc
    method: str
    est_error: mp.mpf

    def to_dict(self) -> dict:
        return {
            "s": [mp.nstr(mp.re(self.s), 30), mp.nstr(mp.im(self.s), 30)],
            "value": [mp.nstr(mp.re(self.value), 30), mp.nstr(mp.im(self.value), 30)],
            "method": self.method,
            "est_error": mp.nstr(self.est_error, 10),
        }


def dirichlet_truncation_length(tail_bound, s, tol) -> int:
    """Smallest N with the certified tail C N^(alpha-sigma+1)/(sigma-alpha-1) <= tol."""
    C, alpha = mp.mpf(tail_bound[0]), mp.mpf(tail_bound[1])
    sigma = mp.re(mp.mpc(s))
    margin = sigma - alpha - 1
    if margin <= 0:
        raise OutOfRegion("no certified truncation in this region")
    n = (C / (mp.mpf(tol) * margin)) ** (1 / margin)
    return int(mp.ceil(n)) + 1


def l_dirichlet(f: QSeries, s, ctx: PrecisionContext, tol=None) -> LValue:
    """sum a(n) n^(-s) for Re s > (k+1)/2 + 1, certified tail <= tol.

    Raises OutOfRegion outside the stated region and TailTooLarge when the
    stored coefficient window cannot certify the requested tolerance.
    """
    with mp.workdps(ctx.work_dps):
        s = mp.mpc(s)
        sigma = mp.re(s)
        if not sigma > (f.weight + 1) / 2 + 1:
            raise OutOfRegion(f"Re s = {sigma} not inside Re s > (k+1)/2 + 1")
        if f.tail_bound is None:
            raise DomainError("l_dirichlet needs a series with a polynomial tail bound")
        tol = mp.mpf(tol) if tol is not None else mp.mpf(ctx.tol_tight)
        C, alpha = mp.mpf(f.tail_bound[0]), mp.mpf(f.tail_bound[1])
        total = mp.mpc(0)
        for n in range(max(1, f.n_min), f.n_max + 1):
            c = f.coeff(n)
            if c != 0:
                total += _to_mpc(c) * mp.mpf(n) ** (-s)
        # sum_{n>N} C n^(alpha - sigma) <= C N^(alpha-sigma+1)/(sigma-alpha-1)
        N = mp.mpf(f.n_max)
        tail = C * N ** (alpha - sigma + 1) / (sigma - alpha - 1)
        if not tail <= tol * (1 + abs(total)):
            raise TailTooLarge(
                f"certified Dirichlet tail {mp.nstr(tail, 5)} needs more coefficients of {f.label}"
            )
        return LValue(s=s, value=total, method="dirichlet", est_error=tail)


def lambda_completed(f: QSeries, s, ctx: PrecisionContext) -> mp.mpc:
    """Completed value Lambda(s); entire in s, manifestly (-1)^(k/2)-symmetric."""
    if not f.cuspidal:
        raise DomainError("completed L-series requires a cusp form")
    with mp.workdps(ctx.work_dps):
        s = mp.mpc(s)
        k = f.weight
        sign = (-1) ** (k // 2)
        eps = ctx.eps()
        total = mp.mpc(0)
        for n in range(1, f.n_max + 1):
            c = f.coeff(n)
            x = 2 * mp.pi * n
            t1 = _gamma_upper_any(s, x, ctx) * x ** (-s)
            t2 = sign * _gamma_upper_any(k - s, x, ctx) * x ** (-(k - s))
            if c != 0:
                total += _to_mpc(c) * (t1 + t2)
            # terms decay like e^(-2 pi n); stop once the bound is negligible
            if n >= 4 and (abs(t1) + abs(t2)) * mp.mpf(n + 1) ** (k / 2 + 1) < eps * (1 + abs(total)):
                break
        return total


def _gamma_upper_any(s: mp.mpc, x, ctx: PrecisionContext) -> mp.mpc:
    if mp.im(s) == 0:
        return mp.mpc(upper_incomplete_gamma(mp.re(s), x, ctx))
    return mp.gammainc(s, x)


def l_completed(f: QSeries, s, ctx: PrecisionContext) -> LValue:
    """L(s) at arbitrary s via the completed series (exponentially convergent)."""
    with mp.workdps(ctx.work_dps):
        s = mp.mpc(s)
        lam = lambda_completed(f, s, ctx)
        value = lam * (2 * mp.pi) ** s / mp.gamma(s)
        return LValue(s=s, value=value, method="completed", est_error=ctx.eps())
