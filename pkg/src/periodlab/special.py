"""Special functions: incomplete gamma on all real orders, Whittaker M, seeds.

Conventions used throughout:

* ``upper_incomplete_gamma(s, x)`` is Gamma(s, x) = int_x^oo t^(s-1) e^(-t) dt
  for s > 0, extended to s <= 0 by the downward recursion
  Gamma(s, x) = (Gamma(s+1, x) - x^s e^(-x)) / s anchored at
  Gamma(0, x) = E1(x).
* ``whittaker_M`` is computed from the confluent hypergeometric series
  everywhere (entire in the argument); the classical integral representation
  is provided separately and serves as an oracle only, since it degenerates
  on the boundary Re(nu - mu + 1/2) = 0 that the seed functions sit on.
* ``cal_M(k, s, u) = |u|^(-k/2) M_{sgn(u) k/2, s - 1/2}(|u|)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .kernel import DomainError, NonConvergent, PrecisionContext, StepTooLarge
from .reports import RelationReport, residual_scale

_EULER_GAMMA_DPS_PAD = 10


def exp_e1(x: mp.mpf, ctx: PrecisionContext) -> mp.mpf:
    """Exponential integral E1(x) for real x > 0.

    Power series for x < 1, modified-Lentz continued fraction for x >= 1.
    """
    if x <= 0:
        raise DomainError("exp_e1 requires x > 0")
    with mp.workdps(ctx.work_dps + _EULER_GAMMA_DPS_PAD):
        x = mp.mpf(x)
        eps = ctx.eps()
        if x < 1:
            # -gamma - ln x + sum (-1)^(m+1) x^m / (m m!)
            total = -mp.euler - mp.log(x)
            term = mp.mpf(1)
            for m in range(1, 10 * ctx.work_dps):
                term *= -x / m
                add = -term / m
                total += add
                if abs(add) < eps * (1 + abs(total)):
                    return total
            raise NonConvergent("E1 power series did not converge")
        # E1(x) = e^-x / (x + 1 - 1^2/(x + 3 - 2^2/(x + 5 - ...)));
        # linear convergence, slowest near x = 1 (a few thousand terms)
        tiny = mp.mpf(10) ** (-(ctx.work_dps + 30))
        f = x + 1
        C, D = f, mp.mpf(0)
        for n in range(1, 500000):
            an = -mp.mpf(n) ** 2
            bn = x + 2 * n + 1
            D = bn + an * D
            if D == 0:
                D = tiny
            C = bn + an / C
            if C == 0:
                C = tiny
            D = 1 / D
            delta = C * D
            f *= delta
            if abs(delta - 1) < eps:
                return mp.exp(-x) / f
        raise NonConvergent("E1 continued fraction did not converge")


def _gamma_upper_positive(s: mp.mpf, x: mp.mpf, ctx: PrecisionContext) -> mp.mpf:
    """Gamma(s, x) for s > 0, x > 0: series for x < s + 1, Lentz CF otherwise."""
    eps = ctx.eps()
    if x < s + 1:
        # lower incomplete gamma by series, then complement
        term = mp.mpf(1) / s
        total = term
        j = mp.mpf(1)
        while True:
            term *= x / (s + j)
            total += term
            if abs(term) < eps * abs(total):
                break
            j += 1
            if j > 10 ** 6:
                raise NonConvergent("lower gamma series did not converge")
        lower = total * mp.exp(-x) * x ** s
        return mp.gamma(s) - lower
    tiny = mp.mpf(10) ** (-(ctx.work_dps + 30))
    b = x + 1 - s
    f = b if b != 0 else tiny
    C, D = f, mp.mpf(0)
    for n in range(1, 10 ** 6):
        an = -n * (n - s)
        b += 2
        D = b + an * D
        if D == 0:
            D = tiny
        C = b + an / C
        if C == 0:
            C = tiny
        D = 1 / D
        delta = C * D
        f *= delta
        if abs(delta - 1) < eps:
            return mp.exp(-x) * x ** s / f
    raise NonConvergent("upper gamma continued fraction did not converge")


def upper_incomplete_gamma(s, x, ctx: PrecisionContext) -> mp.mpf:
    """Gamma(s, x) for any real order s and real x > 0.

    Nonpositive orders come from the recursion
    Gamma(s, x) = (Gamma(s+1, x) - x^s e^(-x)) / s, run downward from the
    anchor Gamma(0, x) = E1(x) (integer s) or from a fractional anchor in
    (0, 1] (non-integer s).
    """
    if x <= 0:
        raise DomainError("upper_incomplete_gamma requires x > 0")
    with mp.workdps(ctx.work_dps + _EULER_GAMMA_DPS_PAD):
        s = mp.mpf(s)
        x = mp.mpf(x)
        if s > 0:
            return _gamma_upper_positive(s, x, ctx)
        if s == 0:
            return exp_e1(x, ctx)
        m = int(mp.ceil(-s))
        s0 = s + m  # anchor order in [0, 1)
        if s0 == 0:
            g = exp_e1(x, ctx)
        else:
            g = _gamma_upper_positive(s0, x, ctx)
        emx = mp.exp(-x)
        for j in range(1, m + 1):
            order = s0 - j
            g = (g - x ** order * emx) / order
        return g


def e1_continued(x, branch: str = "L") -> mp.mpc:
    """E1 analytically continued across the cut, branch selected explicitly.

    branch "L": argument reached counterclockwise from the positive axis
    (arg in (0, 2 pi)); branch "R": clockwise (arg in (-2 pi, 0]).  On the
    principal domain this agrees with mpmath's e1; real negative arguments
    are treated as the upper edge by "L" and the lower edge by "R".
    """
    x = mp.mpc(x)
    v = mp.e1(x)
    if branch == "L":
        if mp.im(x) < 0:
            v -= 2j * mp.pi
    elif branch == "R":
        if mp.im(x) > 0 or (mp.im(x) == 0 and mp.re(x) < 0):
            v += 2j * mp.pi
    else:
        raise ValueError("branch must be 'L' or 'R'")
    return v


def gamma_upper_negint_continued(n_order: int, x, branch: str = "L") -> mp.mpc:
    """Gamma(-N, x) for integer N >= 0 and complex x, explicit branch.

    Uses Gamma(-N, x) = (-1)^N/N! (E1(x) - e^(-x) sum_{j<N} (-1)^j j! x^(-j-1)),
    with E1 continued per ``branch``.  This is the continuation that the
    damped cusp integrals need on the left half-plane.
    """
    if n_order < 0:
        raise DomainError("n_order must be >= 0")
    x = mp.mpc(x)
    if x == 0:
        raise DomainError("argument must be nonzero")
    e1v = e1_continued(x, branch)
    if n_order == 0:
        return e1v
    acc = mp.mpc(0)
    for j in range(n_order):
        acc += (-1) ** j * mp.factorial(j) * x ** (-j - 1)
    return (-1) ** n_order / mp.factorial(n_order) * (e1v - mp.exp(-x) * acc)


@dataclass(frozen=True)
class WhittakerArgs:
    """Arguments (mu, nu, y) of the M-Whittaker function M_{mu, nu}(y)."""

    mu: float
    nu: float
    y: float

    def validate(self) -> None:
        if not self.y > 0:
            raise DomainError("Whittaker argument y must be positive")
        b = 1 + 2 * mp.mpf(self.nu)
        if b <= 0 and mp.isint(b):
            raise DomainError("1 + 2 nu must not be a nonpositive integer")


def _kummer_series(a: mp.mpf, b: mp.mpf, y: mp.mpf, ctx: PrecisionContext) -> mp.mpf:
    """Confluent hypergeometric 1F1(a; b; y) by direct summation (entire in y)."""
    eps = ctx.eps()
    total = mp.mpf(1)
    term = mp.mpf(1)
    j = 0
    while True:
        term = term * (a + j) / (b + j) * y / (j + 1)
        total += term
        j += 1
        if j > 4 and abs(term) < eps * (1 + abs(total)):
            return total
        if j > 10 ** 6:
            raise NonConvergent("confluent series iteration cap reached")


def whittaker_M(args: WhittakerArgs, ctx: PrecisionContext) -> mp.mpf:
    """M_{mu, nu}(y) = y^(nu+1/2) e^(-y/2) 1F1(nu - mu + 1/2; 1 + 2 nu; y)."""
    args.validate()
    with mp.workdps(ctx.work_dps):
        mu, nu, y = mp.mpf(args.mu), mp.mpf(args.nu), mp.mpf(args.y)
        phi = _kummer_series(nu - mu + mp.mpf("0.5"), 1 + 2 * nu, y, ctx)
        return y ** (nu + mp.mpf("0.5")) * mp.exp(-y / 2) * phi


def whittaker_M_integral(args: WhittakerArgs, ctx: PrecisionContext) -> mp.mpf:
    """Integral-representation oracle, valid for Re(nu +- mu + 1/2) > 0."""
    args.validate()
    mu, nu, y = mp.mpf(args.mu), mp.mpf(args.nu), mp.mpf(args.y)
    if not (nu + mu + mp.mpf("0.5") > 0 and nu - mu + mp.mpf("0.5") > 0):
        raise DomainError("integral representation needs Re(nu +- mu + 1/2) > 0")
    with mp.workdps(ctx.work_dps):
        integ = mp.quad(
            lambda t: t ** (nu + mu - mp.mpf("0.5")) * (1 - t) ** (nu - mu - mp.mpf("0.5")) * mp.exp(-y * t),
            [0, 1],
            method="tanh-sinh",
            maxdegree=ctx.quad_order + 4,
        )
        pref = (
            y ** (nu + mp.mpf("0.5"))
            * mp.exp(y / 2)
            * mp.gamma(1 + 2 * nu)
            / (mp.gamma(nu + mu + mp.mpf("0.5")) * mp.gamma(nu - mu + mp.mpf("0.5")))
        )
        return pref * integ


def cal_M(k: int, s, u, ctx: PrecisionContext) -> mp.mpf:
    """Normalized Whittaker value |u|^(-k/2) M_{sgn(u) k/2, s-1/2}(|u|), u != 0."""
    if u == 0:
        raise DomainError("cal_M requires u != 0")
    with mp.workdps(ctx.work_dps):
        s = mp.mpf(s)
        u = mp.mpf(u)
        two_s = 2 * s
        if two_s <= 0 and mp.isint(two_s):
            raise DomainError("2s must not be a nonpositive integer")
        kk = mp.mpf(k)
        mu = mp.sign(u) * kk / 2
        args = WhittakerArgs(mu=mu, nu=s - mp.mpf("0.5"), y=abs(u))
        return abs(u) ** (-kk / 2) * whittaker_M(args, ctx)


def psi_seed(k: int, m: int, z, ctx: PrecisionContext, step=None) -> mp.mpc:
    """Seed d/ds[cal_M(k, s, 4 pi m y)]_{s=k/2} e(m x) for the weight-k series.

    Central difference in s for m < 0; for m > 0 the point s = k/2 is the
    boundary of the terminating regime, so a one-sided second-order stencil
    from s > k/2 is used instead.
    """
    if m == 0:
        raise DomainError("psi_seed requires m != 0")
    with mp.workdps(ctx.work_dps):
        z = mp.mpc(z)
        if not mp.im(z) > 0:
            raise DomainError("psi_seed requires Im z > 0")
        h = mp.mpf(step) if step is not None else mp.mpf(ctx.fd_step)
        s0 = mp.mpf(k) / 2
        u = 4 * mp.pi * m * mp.im(z)
        if 2 * (s0 - h) <= 0:
            raise StepTooLarge("s-step crosses the confluent series pole")
        if m < 0:
            d = (cal_M(k, s0 + h, u, ctx) - cal_M(k, s0 - h, u, ctx)) / (2 * h)
        else:
            d = (
                -3 * cal_M(k, s0, u, ctx)
                + 4 * cal_M(k, s0 + h, u, ctx)
                - cal_M(k, s0 + 2 * h, u, ctx)
            ) / (2 * h)
        return d * mp.exp(2j * mp.pi * m * mp.re(z))


def bold_gamma(s, y, ctx: PrecisionContext) -> mp.mpf:
    """Iterated incomplete gamma int_y^oo Gamma(s, t) t^(-s) e^t dt/t for y > 0.

    For y < 0 the integral runs to -oo instead ("from -infinity" convention,
    real-axis path); that branch is implemented for positive integer s only,
    where Gamma(s, t) = (s-1)! e^(-t) sum_{j<s} t^j/j! makes the integrand a
    rational function with the closed antiderivative used below.
    """
    with mp.workdps(ctx.work_dps):
        s = mp.mpf(s)
        y = mp.mpf(y)
        if y == 0:
            raise DomainError("bold_gamma requires y != 0")
        if y > 0:
            val, err = mp.quad(
                lambda t: upper_incomplete_gamma(s, t, ctx) * t ** (-s - 1) * mp.exp(t),
                [y, y + 9, y + 99, mp.inf],
                maxdegree=ctx.quad_order + 4,
                error=True,
            )
            if not err <= ctx.tol_tight * (1 + abs(val)):
                raise NonConvergent("bold_gamma tail did not converge")
            return val
        if not (mp.isint(s) and s > 0):
            raise DomainError("bold_gamma for y < 0 is implemented for positive integer s only")
        si = int(s)
        # int_y^{-oo} (s-1)! sum_j t^(j-s-1)/j! dt = -(s-1)! sum_j y^(j-s)/(j! (j-s))
        total = mp.mpf(0)
        for j in range(si):
            total += y ** (j - si) / (mp.factorial(j) * (j - si))
        return -mp.factorial(si - 1) * total


def whittaker_derivative_identity_check(k: int, y, ctx: PrecisionContext) -> RelationReport:
    """Residual of the nested-derivative collapse of the normalized Whittaker seed.

    Left side: d/ds [ d/dy' ( cal_M(k, s + k/2, -y') e^(-y'/2) ) ]_{s=0, y'=y}
    by central differences; right side: e^(-y/2) y^(-k) cal_M(2-k, k/2, y).
    The s- and y-steps use 10^(-digits/5), balancing the nested truncation
    against roundoff at the elevated working precision.
    """
    with mp.workdps(ctx.work_dps):
        y = mp.mpf(y)
        if y <= 0:
            raise DomainError("identity check requires y > 0")
        h = mp.mpf(10) ** (-mp.mpf(ctx.digits) / 5)

        def inner(s, yy):
            return cal_M(k, s + mp.mpf(k) / 2, -yy, ctx) * mp.exp(-yy / 2)

        def ddy(s):
            return (inner(s, y + h) - inner(s, y - h)) / (2 * h)

        lhs = (ddy(h) - ddy(-h)) / (2 * h)
        rhs = mp.exp(-y / 2) * y ** mp.mpf(-k) * cal_M(2 - k, mp.mpf(k) / 2, y, ctx)
        resid = abs(lhs - rhs) / residual_scale(lhs, rhs)
        return RelationReport.single(
            identity=f"whittaker_derivative_identity[k={k}]",
            point=mp.mpc(y),
            residual=resid,
            tolerance=ctx.tol_fd,
        )
