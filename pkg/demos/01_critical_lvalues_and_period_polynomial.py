"""Critical L-values and the period polynomial of the discriminant form.

The completed-series engine evaluates L(s) at every argument; the critical
values L(1), ..., L(k-1) assemble the period polynomial, which the
definitional cusp integral then confirms.
"""

import mpmath as mp

from periodlab import (
    PrecisionContext,
    delta,
    l_completed,
    l_dirichlet,
    period_polynomial,
    period_polynomial_quadrature,
)

ctx = PrecisionContext(digits=50)
mp.mp.dps = ctx.work_dps

f = delta(64)
print("form:", f.label, " weight:", f.weight, " a(1..5) =", [int(f.coeff(n)) for n in range(1, 6)])

print("\ncritical values via the completed series:")
for s in range(1, 12):
    v = l_completed(f, s, ctx).value
    print(f"  L({s:2d}) = {mp.nstr(mp.re(v), 30)}")

print("\ncross-check against direct summation where it converges:")
long = delta(700)
for s in (12, 14):
    vd = l_dirichlet(long, s, ctx, tol=mp.mpf('1e-13')).value
    vc = l_completed(long, s, ctx).value
    print(f"  s={s}: |completed - dirichlet| = {mp.nstr(abs(vd - vc), 3)}")

rp = period_polynomial(f, ctx)
print("\nperiod polynomial coefficients (degree 0..10):")
for j, c in enumerate(rp.base.coeffs):
    print(f"  z^{j:<2d}  {mp.nstr(c, 20)}")

print("\ndefinitional integral oracle at three points:")
for z0 in (mp.mpc(0, 1), mp.mpc(1, 1), mp.mpc(0, 2)):
    oracle = period_polynomial_quadrature(f, z0, ctx)
    print(f"  z0={z0}:  |quadrature - polynomial| = {mp.nstr(abs(oracle - rp.base(z0)), 3)}")
