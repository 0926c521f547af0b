"""Slash action, period polynomials and Eichler integrals.

The period polynomial of a weight-k cusp form is assembled from completed
L-values (exponentially convergent and exactly symmetric), with the
definitional integral int_0^{i oo} f(w)(w - z)^(k-2) dw retained as a
quadrature oracle.  The Eichler integral F(z) is evaluated from its termwise
closed form with the cocycle rule F = r + z^(k-2) F(-1/z) applied below the
reduction height.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import mpmath as mp

from .kernel import DomainError, PrecisionContext, RayPath, quad_ray
from .lfun import l_completed
from .qforms import QSeries, REDUCTION_HEIGHT, _to_mpc
from .reports import RelationReport, residual_scale


class NonPolynomialResult(DomainError):
    """A polynomial slashed at an incompatible weight left V_n."""


class NotInW(DomainError):
    """Polynomial fails the period relations beyond tolerance."""


class RankDeficient(DomainError):
    """The decomposition system degenerated (impossible for dim-1 spaces)."""


@dataclass(frozen=True)
class GroupElement:
    """Integer 2x2 matrix with determinant 1, acting by Moebius maps."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant must be 1")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def apply(self, z) -> mp.mpc:
        z = mp.mpc(z)
        return (self.a * z + self.b) / (self.c * z + self.d)

    def jfactor(self, z) -> mp.mpc:
        return self.c * mp.mpc(z) + self.d


IDENTITY = GroupElement(1, 0, 0, 1)
S = GroupElement(0, -1, 1, 0)
T = GroupElement(1, 1, 0, 1)
U = GroupElement(1, -1, 1, 0)
UTILDE = GroupElement(-1, -1, 1, 0)  # = S U^2 S^(-1)


@dataclass(frozen=True)
class PolynomialC:
    """Complex polynomial c_0 + c_1 z + ... + c_n z^n of degree bound n."""

    degree_bound: int
    coeffs: Tuple[mp.mpc, ...]

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, degree_bound: Optional[int] = None) -> "PolynomialC":
        cs = tuple(mp.mpc(c) for c in coeffs)
        n = degree_bound if degree_bound is not None else max(len(cs) - 1, 0)
        if len(cs) - 1 > n:
            raise ValueError("coefficient list exceeds degree bound")
        cs = cs + tuple(mp.mpc(0) for _ in range(n + 1 - len(cs)))
        return cls(degree_bound=n, coeffs=cs)

    def __call__(self, z) -> mp.mpc:
        z = mp.mpc(z)
        acc = mp.mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __add__(self, other: "PolynomialC") -> "PolynomialC":
        n = max(self.degree_bound, other.degree_bound)
        a = self.coeffs + (mp.mpc(0),) * (n + 1 - len(self.coeffs))
        b = other.coeffs + (mp.mpc(0),) * (n + 1 - len(other.coeffs))
        return PolynomialC(n, tuple(x + y for x, y in zip(a, b)))

    def scale(self, c) -> "PolynomialC":
        c = mp.mpc(c)
        return PolynomialC(self.degree_bound, tuple(c * x for x in self.coeffs))

    def negate_variable(self) -> "PolynomialC":
        """P(z) -> P(-z)."""
        return PolynomialC(
            self.degree_bound,
            tuple(c if j % 2 == 0 else -c for j, c in enumerate(self.coeffs)),
        )

    def sup_norm(self) -> mp.mpf:
        return max(abs(c) for c in self.coeffs) if self.coeffs else mp.mpf(0)

    def is_zero(self, tol=0) -> bool:
        return self.sup_norm() <= tol

    def to_json(self) -> str:
        return json.dumps(
            [[mp.nstr(mp.re(c), mp.mp.dps), mp.nstr(mp.im(c), mp.mp.dps)] for c in self.coeffs]
        )

    @classmethod
    def from_json(cls, text: str) -> "PolynomialC":
        pairs = json.loads(text)
        return cls.from_coeffs([mp.mpc(mp.mpf(re), mp.mpf(im)) for re, im in pairs])


def _binomial_row(n: int) -> list:
    row = [1] * (n + 1)
    for j in range(1, n + 1):
        row[j] = row[j - 1] * (n - j + 1) // j
    return row


def slash_polynomial(P: PolynomialC, m: int, gamma: GroupElement) -> PolynomialC:
    """Exact weight-m action on polynomials: P(gamma z) (cz+d)^(-m).

    Requires m = -degree_bound, the weight under which V_n is closed; the
    result is assembled from sum_j c_j (az+b)^j (cz+d)^(n-j).
    """
    n = P.degree_bound
    if m != -n:
        raise NonPolynomialResult(f"weight {m} does not preserve V_{n}")
    a, b, c, d = gamma.a, gamma.b, gamma.c, gamma.d
    out = [mp.mpc(0)] * (n + 1)
    for j, cj in enumerate(P.coeffs):
        if cj == 0:
            continue
        # (a z + b)^j
        pj = [mp.mpc(0)] * (j + 1)
        for t, binom in enumerate(_binomial_row(j)):
            pj[t] = mp.mpc(binom) * mp.mpc(a) ** t * mp.mpc(b) ** (j - t)
        # (c z + d)^(n - j)
        qj = [mp.mpc(0)] * (n - j + 1)
        for t, binom in enumerate(_binomial_row(n - j)):
            qj[t] = mp.mpc(binom) * mp.mpc(c) ** t * mp.mpc(d) ** (n - j - t)
        for t1, p1 in enumerate(pj):
            if p1 == 0:
                continue
            for t2, q2 in enumerate(qj):
                out[t1 + t2] += cj * p1 * q2
    return PolynomialC(n, tuple(out))


def slash_function(F: Callable[[mp.mpc], mp.mpc], m: int, gamma: GroupElement) -> Callable:
    """Lazy weight-m action on a black-box function: z -> F(gamma z)(cz+d)^(-m)."""

    def slashed(z):
        z = mp.mpc(z)
        return F(gamma.apply(z)) * gamma.jfactor(z) ** (-m)

    return slashed


def slash(obj, m: int, gamma: GroupElement):
    if isinstance(obj, PolynomialC):
        return slash_polynomial(obj, m, gamma)
    return slash_function(obj, m, gamma)


@dataclass(frozen=True)
class PeriodPolynomial:
    """Degree-(k-2) period polynomial with the critical values that built it."""

    base: PolynomialC
    weight: int
    source: str
    critical_values: Tuple[mp.mpc, ...]  # L(1), ..., L(k-1)

    def __call__(self, z) -> mp.mpc:
        return self.base(z)


_PERIOD_CACHE: dict = {}


def period_polynomial(f: QSeries, ctx: PrecisionContext) -> PeriodPolynomial:
    """Period polynomial from critical L-values.

    Coefficient of z^(k-2-n) is
    -(k-2)!/(2 pi i)^(k-1) * (2 pi i)^(k-2-n) L(n+1) / (k-2-n)!.
    """
    if not f.cuspidal:
        raise DomainError("period polynomial requires a cusp form")
    key = (f, ctx.digits)
    cached = _PERIOD_CACHE.get(key)
    if cached is not None:
        return cached
    k = f.weight
    with mp.workdps(ctx.work_dps):
        lvals = tuple(l_completed(f, n + 1, ctx).value for n in range(k - 1))
        pref = -mp.factorial(k - 2) / (2j * mp.pi) ** (k - 1)
        coeffs = [mp.mpc(0)] * (k - 1)
        for n in range(k - 1):
            j = k - 2 - n  # degree of this term
            coeffs[j] = pref * (2j * mp.pi) ** j * lvals[n] / mp.factorial(j)
        result = PeriodPolynomial(
            base=PolynomialC.from_coeffs(coeffs, degree_bound=k - 2),
            weight=k,
            source=f.label,
            critical_values=lvals,
        )
    _PERIOD_CACHE[key] = result
    return result


def period_polynomial_quadrature(f: QSeries, z0, ctx: PrecisionContext) -> mp.mpc:
    """Definitional oracle r(z0) = int_0^{i oo} f(w)(w - z0)^(k-2) dw."""
    from .qforms import evaluate

    k = f.weight
    with mp.workdps(ctx.work_dps):
        z0 = mp.mpc(z0)
        integrand = lambda w: evaluate(f, w, ctx) * (w - z0) ** (k - 2)
        return quad_ray(integrand, RayPath(start=mp.mpc(0)), 2 * mp.pi, ctx)


class EichlerIntegral:
    """Evaluator for F(z) = int_z^{i oo} f(w)(w - z)^(k-2) dw of weight 2-k.

    Termwise, F(z) = (k-2)! (-2 pi i)^(1-k) sum a(n) n^(1-k) q^n.  Below the
    reduction height the cocycle rule F(z) = r(z) + z^(k-2) F(-1/z) (together
    with exact T-translations) moves the argument into the fast-convergence
    region; each step at least doubles Im z.
    """

    def __init__(self, f: QSeries, ctx: PrecisionContext):
        if not f.cuspidal:
            raise DomainError("Eichler integral requires a cusp form")
        self.f = f
        self.weight = 2 - f.weight
        self.ctx = ctx
        self._period = period_polynomial(f, ctx)
        with mp.workdps(ctx.work_dps):
            k = f.weight
            self._prefactor = mp.factorial(k - 2) * (-2j * mp.pi) ** (1 - k)
            self._coeffs = tuple(
                _to_mpc(f.coeff(n)) * mp.mpf(n) ** (1 - k) for n in range(1, f.n_max + 1)
            )

    def coefficient(self, n: int) -> mp.mpc:
        """Coefficient of q^n (n >= 1)."""
        if n < 1 or n > len(self._coeffs):
            return mp.mpc(0)
        return self._prefactor * self._coeffs[n - 1]

    def period(self) -> PeriodPolynomial:
        return self._period

    def _direct(self, z: mp.mpc) -> mp.mpc:
        q = mp.exp(2j * mp.pi * z)
        qabs = abs(q)
        eps = self.ctx.eps()
        total = mp.mpc(0)
        qn = mp.mpc(1)
        k = self.f.weight
        for n, c in enumerate(self._coeffs, start=1):
            qn *= q
            if c != 0:
                total += c * qn
            # |a(n) n^(1-k)| <= 2 n^(1 - k/2) <= 2: plain geometric tail bound
            if n >= 4 and 2 * qabs ** (n + 1) / (1 - qabs) < eps * (1 + abs(total)):
                break
        return self._prefactor * total

    def evaluate(self, z, allow_hybrid: bool = True) -> mp.mpc:
        with mp.workdps(self.ctx.work_dps):
            z = mp.mpc(z)
            if not mp.im(z) > 0:
                raise DomainError("Eichler integral evaluated off the upper half-plane")
            total = mp.mpc(0)
            factor = mp.mpc(1)
            k = self.f.weight
            for _ in range(8 * self.ctx.work_dps):
                z = z - mp.floor(mp.re(z) + mp.mpf("0.5"))
                if mp.im(z) >= REDUCTION_HEIGHT or not allow_hybrid:
                    break
                total += factor * self._period(z)
                factor *= z ** (k - 2)
                z = -1 / z
            return total + factor * self._direct(z)

    def __call__(self, z) -> mp.mpc:
        return self.evaluate(z)


_EICHLER_CACHE: dict = {}


def eichler_integral(f: QSeries, ctx: PrecisionContext) -> EichlerIntegral:
    key = (f, ctx.digits, ctx.series_len)
    inst = _EICHLER_CACHE.get(key)
    if inst is None:
        inst = EichlerIntegral(f, ctx)
        _EICHLER_CACHE[key] = inst
    return inst


def w_membership(
    P,
    m: int,
    ctx: PrecisionContext,
    pts: Sequence[complex] = (),
    tol=None,
) -> RelationReport:
    """Residuals of P|(1+S) and P|(1+U+U^2) (coefficient norm or pointwise).

    For a PolynomialC the two relations are evaluated exactly in coefficient
    space (relative to the coefficient sup norm); for a black-box function
    they are sampled at ``pts``.
    """
    tol = mp.mpf(tol) if tol is not None else mp.mpf(ctx.tol_tight)
    with mp.workdps(ctx.work_dps):
        if isinstance(P, PolynomialC):
            rel_s = slash_polynomial(P, m, IDENTITY) + slash_polynomial(P, m, S)
            rel_u = (
                slash_polynomial(P, m, IDENTITY)
                + slash_polynomial(P, m, U)
                + slash_polynomial(P, m, U * U)
            )
            scale = residual_scale(P.sup_norm())
            residuals = [rel_s.sup_norm() / scale, rel_u.sup_norm() / scale]
            return RelationReport.from_residuals(
                identity="w_membership(coefficient-norm)",
                points=[mp.mpc(0), mp.mpc(0)],
                residuals=residuals,
                tolerance=tol,
                labels=("1+S", "1+U+U^2"),
            )
        if not pts:
            raise ValueError("function membership test needs sample points")
        residuals = []
        labels = []
        points = []
        for z in pts:
            z = mp.mpc(z)
            v0 = P(z)
            vs = v0 + slash_function(P, m, S)(z)
            vu = v0 + slash_function(P, m, U)(z) + slash_function(P, m, U * U)(z)
            scale = residual_scale(v0)
            residuals.extend([abs(vs) / scale, abs(vu) / scale])
            labels.extend(["1+S", "1+U+U^2"])
            points.extend([z, z])
        return RelationReport.from_residuals(
            identity="w_membership(pointwise)",
            points=points,
            residuals=residuals,
            tolerance=tol,
            labels=labels,
        )


def es_decompose(
    P: PolynomialC,
    k: int,
    ctx: PrecisionContext,
    tol=None,
) -> Tuple[mp.mpc, mp.mpc, mp.mpc, mp.mpf]:
    """Solve P = alpha r + beta r(-.) + c (z^(k-2) - 1) over the dim-1 space.

    r is the period polynomial of the normalized eigenform of weight k.
    Returns (alpha, beta, c, residual); raises NotInW when the least-squares
    residual exceeds tolerance and RankDeficient if the 3-column system
    degenerates.
    """
    from .qforms import cusp_form

    tol = mp.mpf(tol) if tol is not None else mp.mpf(10) ** (-10)
    with mp.workdps(ctx.work_dps):
        f0 = cusp_form(k, max(ctx.series_len, 32))
        r = period_polynomial(f0, ctx).base
        rminus = r.negate_variable()
        cob = PolynomialC.from_coeffs(
            [mp.mpc(-1)] + [mp.mpc(0)] * (k - 3) + [mp.mpc(1)], degree_bound=k - 2
        )
        ncoef = k - 1
        cols = [r.coeffs, rminus.coeffs, cob.coeffs]
        rhs = [P.coeffs[i] if i < len(P.coeffs) else mp.mpc(0) for i in range(ncoef)]
        # normal equations at working precision; the 3x3 system is tiny
        G = mp.matrix(3, 3)
        b = mp.matrix(3, 1)
        for p in range(3):
            for q in range(3):
                G[p, q] = mp.fsum(mp.conj(cols[p][i]) * cols[q][i] for i in range(ncoef))
            b[p] = mp.fsum(mp.conj(cols[p][i]) * rhs[i] for i in range(ncoef))
        if abs(mp.det(G)) < mp.mpf(10) ** (-ctx.digits):
            raise RankDeficient("decomposition basis is numerically dependent")
        sol = mp.lu_solve(G, b)
        resid = max(
            abs(mp.fsum(cols[p][i] * sol[p] for p in range(3)) - rhs[i]) for i in range(ncoef)
        )
        scale = residual_scale(P.sup_norm())
        resid = resid / scale
        if resid > tol:
            raise NotInW(f"decomposition residual {mp.nstr(resid, 5)} exceeds tolerance")
        return sol[0], sol[1], sol[2], resid
