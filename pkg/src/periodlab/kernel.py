"""Numerical kernel: precision context, ray quadrature, finite-difference operators.

All arithmetic is mpmath-based.  "Complex value" throughout the package means
an ``mpmath.mpc`` carried at the working precision of the active
:class:`PrecisionContext`; no wrapper type is introduced.  Every routine is
pure: a context object is read-only and may be shared between concurrent
callers, and quadrature/summation orders are fixed so repeated runs are
bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import mpmath as mp


class KernelError(Exception):
    """Base class for numerical-kernel failures."""


class NonConvergent(KernelError):
    """Quadrature refinements failed to agree within tolerance."""


class BadPath(KernelError):
    """An integration path leaves the certified region (or hits a pole)."""


class StepTooLarge(KernelError):
    """A finite-difference stencil leaves the certified analyticity region."""


class DomainError(KernelError):
    """Argument outside the mathematical domain of an operation."""


class TailTooLarge(KernelError):
    """A certified series tail exceeds the requested tolerance."""


@dataclass(frozen=True)
class PrecisionContext:
    """All numerical knobs in one immutable bundle.

    digits      decimal working precision (>= 30)
    quad_order  mpmath quadrature max degree per panel
    series_len  default q-series truncation length
    fd_step     real step for finite differences; default 10^(-digits/3),
                which balances second-order truncation against roundoff
    tail_height height above which exponential tail truncation starts
    tol_tight   tolerance for quadrature/series identities
    tol_fd      tolerance for finite-difference based identities
    guard       extra working digits used inside kernels
    """

    digits: int = 50
    quad_order: int = 6
    series_len: int = 64
    fd_step: Optional[mp.mpf] = None
    tail_height: float = 1.0
    tol_tight: mp.mpf = field(default_factory=lambda: mp.mpf("1e-20"))
    tol_fd: mp.mpf = field(default_factory=lambda: mp.mpf("1e-6"))
    guard: int = 15

    def __post_init__(self):
        if self.digits < 30:
            raise ValueError("digits must be >= 30")
        if self.series_len < 16:
            raise ValueError("series_len must be >= 16")
        if self.tail_height < 1:
            raise ValueError("tail_height must be >= 1")
        if self.fd_step is None:
            with mp.workdps(self.digits + self.guard):
                h = mp.mpf(10) ** (-mp.mpf(self.digits) / 3)
            object.__setattr__(self, "fd_step", h)
        if not self.fd_step ** 2 > mp.mpf(10) ** (-self.digits):
            raise ValueError("fd_step^2 must exceed 10^(-digits)")

    @property
    def work_dps(self) -> int:
        return self.digits + self.guard

    def eps(self) -> mp.mpf:
        """Series/quadrature cutoff well below the working precision."""
        return mp.mpf(10) ** (-(self.digits + 8))


DEFAULT_CTX = PrecisionContext()


@dataclass(frozen=True)
class RayPath:
    """Integration path in the closed upper half-plane.

    kind = "vertical": from ``start`` straight up to i*infinity.
    kind = "segment" : straight line from ``start`` to ``end``.

    Endpoints may sit on the real axis (cusps) only when the caller certifies
    the integrand bounded there; interior points must have Im > 0.
    """

    start: complex
    kind: str = "vertical"
    end: Optional[complex] = None

    def __post_init__(self):
        if self.kind not in ("vertical", "segment"):
            raise ValueError("kind must be 'vertical' or 'segment'")
        if self.kind == "segment" and self.end is None:
            raise ValueError("segment path needs an end point")

    def validate(self) -> None:
        s = mp.mpc(self.start)
        if mp.im(s) < 0:
            raise BadPath("path start below the real axis")
        if self.kind == "segment":
            e = mp.mpc(self.end)
            if mp.im(e) < 0:
                raise BadPath("path end below the real axis")
            if mp.im(s) == 0 and mp.im(e) == 0:
                raise BadPath("segment interior would lie on the real axis")


def ensure_finite(value: mp.mpc, what: str = "result") -> mp.mpc:
    if not mp.isfinite(value):
        raise NonConvergent(f"{what} is not finite")
    return value


def path_clearance(path: RayPath, points: Sequence[complex], min_dist: float = 1e-6) -> None:
    """Raise BadPath when any of ``points`` comes within ``min_dist`` of the path."""
    pts = [mp.mpc(p) for p in points]
    if not pts:
        return
    if path.kind == "vertical":
        x0, y0 = mp.re(mp.mpc(path.start)), mp.im(mp.mpc(path.start))
        for p in pts:
            dx = abs(mp.re(p) - x0)
            dy = mp.mpf(0) if mp.im(p) >= y0 else y0 - mp.im(p)
            if mp.sqrt(dx * dx + dy * dy) < min_dist:
                raise BadPath(f"pole {p} too close to vertical ray")
    else:
        a, b = mp.mpc(path.start), mp.mpc(path.end)
        ab = b - a
        denom = abs(ab) ** 2
        for p in pts:
            t = mp.re(mp.conj(ab) * (p - a)) / denom
            t = min(max(t, mp.mpf(0)), mp.mpf(1))
            if abs(a + t * ab - p) < min_dist:
                raise BadPath(f"pole {p} too close to segment")


def _quad(f, pts, ctx: PrecisionContext, method: str = "gauss-legendre"):
    val, err = mp.quad(f, pts, method=method, maxdegree=ctx.quad_order + 4, error=True)
    return val, err


def quad_ray(
    integrand: Callable[[mp.mpc], mp.mpc],
    path: RayPath,
    decay_rate: float,
    ctx: PrecisionContext,
    avoid: Sequence[complex] = (),
) -> mp.mpc:
    """Integrate ``integrand`` along ``path``.

    For vertical rays the path is split at height max(1, start height): the
    lower piece uses tanh-sinh nodes (integrands are bounded but typically not
    smooth to machine order at a cusp endpoint), the upper piece uses
    Gauss-Legendre panels of geometrically growing width.  With
    ``decay_rate = d > 0`` the caller certifies |integrand(x+iy)| <= C e^(-d y)
    above ctx.tail_height and the ray is truncated where that bound falls
    below 10^(-digits-8); with d = 0 the tail is mapped to a finite interval
    (the integrand must then decay at least like y^(-2)).

    Raises NonConvergent when the internal error estimate exceeds
    tol_tight * (1 + |result|), BadPath for an invalid path.
    """
    path.validate()
    if avoid:
        path_clearance(path, avoid)
    with mp.workdps(ctx.work_dps):
        if path.kind == "segment":
            a, b = mp.mpc(path.start), mp.mpc(path.end)
            if a == b:
                return mp.mpc(0)
            g = lambda t: integrand(a + t * (b - a)) * (b - a)
            val, err = _quad(g, [0, 1], ctx, method="tanh-sinh")
            total, toterr = val, err
        else:
            x0 = mp.re(mp.mpc(path.start))
            y0 = mp.im(mp.mpc(path.start))
            g = lambda t: integrand(mp.mpc(x0, t)) * mp.mpc(0, 1)
            pieces = []
            errs = []
            lo = y0
            split = max(mp.mpf(1), y0)
            if y0 < split:
                val, err = _quad(g, [y0, split], ctx, method="tanh-sinh")
                pieces.append(val)
                errs.append(err)
                lo = split
            if decay_rate > 0:
                # truncate where C e^(-d y) is negligible; the headroom also
                # absorbs moderate constants C and polynomial prefactors
                yend = max(lo, mp.mpf(ctx.tail_height)) + (ctx.digits + 24) * mp.log(10) / mp.mpf(decay_rate)
                pts = [lo]
                step = mp.mpf(2)
                while pts[-1] < yend:
                    pts.append(min(pts[-1] + step, yend))
                    step *= 2
                val, err = _quad(g, pts, ctx)
                pieces.append(val)
                errs.append(err)
            else:
                pts = [lo, lo + 9, lo + 99, mp.inf]
                val, err = _quad(g, pts, ctx)
                pieces.append(val)
                errs.append(err)
            total = mp.fsum(pieces)
            toterr = mp.fsum(errs)
        ensure_finite(total, "quad_ray result")
        if not toterr <= ctx.tol_tight * (1 + abs(total)):
            raise NonConvergent(
                f"quad_ray error estimate {mp.nstr(toterr, 5)} exceeds tolerance"
            )
        return total


def quad_polyline(
    integrand: Callable[[mp.mpc], mp.mpc],
    vertices: Sequence[complex],
    ctx: PrecisionContext,
    avoid: Sequence[complex] = (),
) -> mp.mpc:
    """Sum of segment integrals along consecutive ``vertices``."""
    with mp.workdps(ctx.work_dps):
        total = mp.mpc(0)
        for a, b in zip(vertices[:-1], vertices[1:]):
            total += quad_ray(
                integrand, RayPath(start=a, kind="segment", end=b), 0, ctx, avoid=avoid
            )
        return total


def _check_stencil(z: mp.mpc, h: mp.mpf) -> None:
    if mp.im(z) - h <= 0:
        raise StepTooLarge("stencil leaves the upper half-plane")


def xi_fd(
    F: Callable[[mp.mpc], mp.mpc],
    k: int,
    z: complex,
    ctx: PrecisionContext,
    step: Optional[mp.mpf] = None,
) -> mp.mpc:
    """Weight-k xi operator 2i y^k conj(dF/dzbar) by central differences.

    dF/dzbar = (F_x + i F_y)/2 with second-order stencils of width
    ctx.fd_step.  The error is O(fd_step^2) relative to the magnitude of F
    near z, so F must be evaluated essentially to full working precision.
    """
    with mp.workdps(ctx.work_dps):
        z = mp.mpc(z)
        h = mp.mpf(step) if step is not None else mp.mpf(ctx.fd_step)
        _check_stencil(z, h)
        Fx = (F(z + h) - F(z - h)) / (2 * h)
        Fy = (F(z + mp.mpc(0, 1) * h) - F(z - mp.mpc(0, 1) * h)) / (2 * h)
        dzbar = (Fx + mp.mpc(0, 1) * Fy) / 2
        return ensure_finite(2j * mp.im(z) ** k * mp.conj(dzbar), "xi_fd")


def laplace_fd(
    F: Callable[[mp.mpc], mp.mpc],
    k: int,
    z: complex,
    ctx: PrecisionContext,
    step: Optional[mp.mpf] = None,
) -> mp.mpc:
    """Weight-k hyperbolic Laplacian -y^2(F_xx+F_yy) + iky(F_x+iF_y), 5-point stencil."""
    with mp.workdps(ctx.work_dps):
        z = mp.mpc(z)
        h = mp.mpf(step) if step is not None else mp.mpf(ctx.fd_step)
        _check_stencil(z, h)
        f0 = F(z)
        fxp, fxm = F(z + h), F(z - h)
        ih = mp.mpc(0, 1) * h
        fyp, fym = F(z + ih), F(z - ih)
        Fxx = (fxp - 2 * f0 + fxm) / h ** 2
        Fyy = (fyp - 2 * f0 + fym) / h ** 2
        Fx = (fxp - fxm) / (2 * h)
        Fy = (fyp - fym) / (2 * h)
        y = mp.im(z)
        val = -(y ** 2) * (Fxx + Fyy) + mp.mpc(0, 1) * k * y * (Fx + mp.mpc(0, 1) * Fy)
        return ensure_finite(val, "laplace_fd")
