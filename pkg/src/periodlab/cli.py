"""Command-line surface: L-values, period polynomials, verification suites.

Exit codes: 0 success (all identities pass), 1 at least one identity failed
(report still written), 2 domain/configuration error, 3 convergence failure.
Reports are byte-reproducible for a fixed configuration and version: numbers
are serialized as decimal strings, key order is fixed, and no timestamps are
embedded.  Exact q-expansions are cached on disk under $PERIODLAB_CACHE
(keyed by constructor and length, with a checksum; corrupt entries are
rebuilt silently).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import mpmath as mp

from . import __version__
from .kernel import DomainError, NonConvergent, PrecisionContext, TailTooLarge
from .lfun import OutOfRegion, l_completed, l_dirichlet
from .qforms import (
    DIM_ONE_WEIGHTS,
    QSeries,
    UnsupportedWeight,
    ZERO_SPACE_WEIGHTS,
    cusp_form,
    delta,
    read_qexp,
    weakly_holomorphic_m10,
    write_qexp,
)
from .reports import RelationReport, reports_to_csv

EXIT_OK = 0
EXIT_IDENTITY_FAILURE = 1
EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3

CONFIG_SCHEMA = "periodlab-config-1"
REPORT_SCHEMA = "periodlab-report-1"

SUITES = ("superm", "wk2", "mockes", "perstar", "poincare", "special", "all")

_FORM_WEIGHTS = {"delta": 12, **{f"cusp{k}": k for k in DIM_ONE_WEIGHTS}}


@dataclass
class SuiteConfig:
    """Parsed, versioned configuration for verification runs."""

    digits: int = 50
    series_len: int = 64
    tol_tight: Optional[str] = None
    tol_fd: Optional[str] = None
    forms: List[str] = field(default_factory=lambda: ["delta", "cusp16"])
    suites: List[str] = field(default_factory=lambda: ["all"])
    points: str = "generic10"

    @classmethod
    def from_file(cls, path: str) -> "SuiteConfig":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict) or raw.get("schema") != CONFIG_SCHEMA:
            raise ValueError(f"config must carry schema = {CONFIG_SCHEMA}")
        cfg = cls()
        for key in ("digits", "series_len", "tol_tight", "tol_fd", "forms", "suites", "points"):
            if key in raw:
                setattr(cfg, key, raw[key])
        for s in cfg.suites:
            if s not in SUITES:
                raise ValueError(f"unknown suite {s!r}")
        for f in cfg.forms:
            if f not in _FORM_WEIGHTS:
                raise ValueError(f"unknown form {f!r}")
        return cfg

    def context(self) -> PrecisionContext:
        kwargs = {"digits": int(self.digits), "series_len": int(self.series_len)}
        if self.tol_tight is not None:
            kwargs["tol_tight"] = mp.mpf(self.tol_tight)
        if self.tol_fd is not None:
            kwargs["tol_fd"] = mp.mpf(self.tol_fd)
        return PrecisionContext(**kwargs)

    def to_dict(self) -> dict:
        return {
            "schema": CONFIG_SCHEMA,
            "digits": self.digits,
            "series_len": self.series_len,
            "tol_tight": self.tol_tight,
            "tol_fd": self.tol_fd,
            "forms": list(self.forms),
            "suites": list(self.suites),
            "points": self.points,
        }


# ---------------------------------------------------------------------------
# q-expansion disk cache
# ---------------------------------------------------------------------------

def _cache_dir() -> Optional[str]:
    return os.environ.get("PERIODLAB_CACHE")


def _checksum(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def cached_form(label: str, N: int) -> QSeries:
    """Constructor dispatch with optional on-disk caching of exact expansions."""
    builders = {
        "delta": lambda: delta(N),
        "wh-10": lambda: weakly_holomorphic_m10(N),
        **{f"cusp{k}": (lambda kk: (lambda: cusp_form(kk, N)))(k) for k in DIM_ONE_WEIGHTS},
    }
    if label not in builders:
        raise UnsupportedWeight(f"unknown form {label!r}")
    root = _cache_dir()
    if root is None:
        return builders[label]()
    os.makedirs(root, exist_ok=True)
    stem = os.path.join(root, f"{label}_N{N}")
    qexp_path, sum_path = stem + ".qexp", stem + ".sha256"
    if os.path.exists(qexp_path) and os.path.exists(sum_path):
        try:
            with open(sum_path, "r", encoding="utf-8") as fh:
                want = fh.read().strip()
            if want == _checksum(qexp_path):
                loaded = read_qexp(qexp_path)
                fresh = builders[label]()
                if loaded.coeffs == fresh.coeffs[: len(loaded.coeffs)]:
                    return fresh
        except (OSError, ValueError):
            pass  # fall through and rebuild
    form = builders[label]()
    try:
        write_qexp(form, qexp_path)
        with open(sum_path, "w", encoding="utf-8") as fh:
            fh.write(_checksum(qexp_path) + "\n")
    except OSError:
        pass
    return form


# ---------------------------------------------------------------------------
# point grids
# ---------------------------------------------------------------------------

def generic_points(n: int = 10) -> list:
    """Deterministic grid in 0.1 <= Re z <= 0.9, 0.6 <= Im z <= 2.4."""
    pts = []
    for i in range(n):
        t = mp.mpf(i) / max(n - 1, 1)
        pts.append(mp.mpc(mp.mpf("0.1") + mp.mpf("0.8") * t, mp.mpf("0.6") + mp.mpf("1.8") * t))
    return pts


def perstar_points(n: int = 5) -> list:
    """Points with |z|^2 <= 2.5 Im z so S-leg base heights stay moderate."""
    pts = []
    for i in range(n):
        t = mp.mpf(i) / max(n - 1, 1)
        pts.append(mp.mpc(mp.mpf("0.15") + mp.mpf("0.4") * t, mp.mpf("0.9") + mp.mpf("0.5") * t))
    return pts


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def run_suite(name: str, cfg: SuiteConfig, ctx: PrecisionContext) -> List[RelationReport]:
    from .mockcore import verify_mock_es, verify_superm, verify_w_k2
    from .poincare import (
        verify_bol_xi_avatar,
        verify_laplace_eigenvalue,
        verify_termwise_dipoincare,
        verify_termwise_xi,
    )
    from .regint import verify_per_star
    from .special import whittaker_derivative_identity_check

    reports: List[RelationReport] = []
    forms = [cached_form(label, ctx.series_len) for label in cfg.forms]
    pts10 = generic_points(10)
    pts5 = generic_points(5)
    if name == "superm":
        for f in forms:
            reports.append(verify_superm(f, pts10, ctx))
    elif name == "wk2":
        for f in forms:
            reports.extend(verify_w_k2(f, pts5, ctx))
    elif name == "mockes":
        for f in forms:
            reports.extend(verify_mock_es(f, [mp.mpc(0, 1), mp.mpc(1, 1), mp.mpc("-0.5", "1.5")], ctx))
    elif name == "perstar":
        M = cached_form("wh-10", max(ctx.series_len, 170))
        reports.extend(verify_per_star(M, perstar_points(3), ctx))
    elif name == "poincare":
        k = 12
        reports.extend(verify_termwise_xi(k, 1, [mp.mpc(0, 1), mp.mpc("0.3", "0.8")], ctx))
        reports.extend(verify_termwise_dipoincare(k, 1, [mp.mpc(0, 1), mp.mpc("0.25", "1.5")], ctx))
        reports.append(
            verify_laplace_eigenvalue(2 - k, 1, mp.mpf(6), [mp.mpc(0, 1)], ctx)
        )
        reports.extend(verify_bol_xi_avatar(cached_form("delta", ctx.series_len), pts5, ctx))
    elif name == "special":
        for k in (4, 12):
            for y in ("0.5", "1", "2", "5"):
                reports.append(whittaker_derivative_identity_check(k, mp.mpf(y), ctx))
    else:
        raise ValueError(f"unknown suite {name!r}")
    return reports


def _write_report(reports: List[RelationReport], cfg: SuiteConfig, out: Optional[str], csv: Optional[str]) -> None:
    payload = {
        "tool_version": __version__,
        "schema": REPORT_SCHEMA,
        "config": cfg.to_dict(),
        "reports": [r.to_dict() for r in reports],
        "all_pass": all(r.passed for r in reports),
    }
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if csv:
        reports_to_csv(reports, csv)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_lvalue(args) -> int:
    ctx = PrecisionContext(digits=args.digits)
    try:
        weight = _FORM_WEIGHTS.get(args.form)
        if weight is None:
            raise UnsupportedWeight(f"unknown form {args.form!r}")
        s = mp.mpf(args.s)
        if args.method == "dirichlet":
            from .lfun import dirichlet_truncation_length

            tol = mp.mpf("1e-12")
            tail_bound = (2.0, weight / 2)
            N = args.series_len or min(dirichlet_truncation_length(tail_bound, s, tol), 20000)
            f = cached_form(args.form, max(N, 32))
            lv = l_dirichlet(f, s, ctx, tol=tol)
        else:
            f = cached_form(args.form, args.series_len or ctx.series_len)
            lv = l_completed(f, s, ctx)
        print(json.dumps({"schema": REPORT_SCHEMA, "form": args.form, **lv.to_dict()}))
        return EXIT_OK
    except (OutOfRegion, UnsupportedWeight, DomainError, ValueError) as exc:
        print(json.dumps({"error": str(exc), "kind": "domain"}))
        return EXIT_DOMAIN
    except (NonConvergent, TailTooLarge) as exc:
        print(json.dumps({"error": str(exc), "kind": "convergence"}))
        return EXIT_CONVERGENCE


def cmd_periodpoly(args) -> int:
    from .eichler import period_polynomial, period_polynomial_quadrature

    ctx = PrecisionContext(digits=args.digits)
    try:
        k = args.weight if args.weight else _FORM_WEIGHTS.get(args.form)
        if k is None:
            raise UnsupportedWeight(f"unknown form {args.form!r}")
        if k in ZERO_SPACE_WEIGHTS:
            payload = {
                "schema": REPORT_SCHEMA,
                "form": args.form,
                "weight": k,
                "coefficients": [["0", "0"] for _ in range(max(k - 1, 0))],
                "critical_values": [],
                "note": "cusp space is zero; period polynomial vanishes",
            }
            print(json.dumps(payload))
            return EXIT_OK
        if k not in DIM_ONE_WEIGHTS:
            raise UnsupportedWeight(f"weight {k} not supported (dim > 1 or odd)")
        f = cached_form("delta" if k == 12 else f"cusp{k}", ctx.series_len)
        rp = period_polynomial(f, ctx)
        payload = {
            "schema": REPORT_SCHEMA,
            "form": args.form,
            "weight": k,
            "coefficients": [
                [mp.nstr(mp.re(c), ctx.digits), mp.nstr(mp.im(c), ctx.digits)]
                for c in rp.base.coeffs
            ],
            "critical_values": [
                {"s": n + 1, "value": [mp.nstr(mp.re(v), ctx.digits), mp.nstr(mp.im(v), ctx.digits)]}
                for n, v in enumerate(rp.critical_values)
            ],
        }
        if args.check:
            devs = []
            for z0 in (mp.mpc(0, 1), mp.mpc(1, 1), mp.mpc(0, 2)):
                oracle = period_polynomial_quadrature(f, z0, ctx)
                devs.append(abs(oracle - rp.base(z0)) / (1 + abs(oracle)))
            payload["quadrature_max_deviation"] = mp.nstr(max(devs), 10)
        print(json.dumps(payload))
        return EXIT_OK
    except (UnsupportedWeight, DomainError, ValueError) as exc:
        print(json.dumps({"error": str(exc), "kind": "domain"}))
        return EXIT_DOMAIN
    except (NonConvergent, TailTooLarge) as exc:
        print(json.dumps({"error": str(exc), "kind": "convergence"}))
        return EXIT_CONVERGENCE


def cmd_verify(args) -> int:
    try:
        if args.config:
            cfg = SuiteConfig.from_file(args.config)
        else:
            cfg = SuiteConfig()
        if args.digits:
            cfg.digits = args.digits
        if args.form:
            if args.form not in _FORM_WEIGHTS:
                raise ValueError(f"unknown form {args.form!r}")
            cfg.forms = [args.form]
        if args.suite != "all":
            cfg.suites = [args.suite]
        elif not cfg.suites:
            cfg.suites = ["all"]
        ctx = cfg.context()
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": str(exc), "kind": "config"}))
        return EXIT_DOMAIN
    try:
        names = list(cfg.suites)
        if "all" in names or args.suite == "all":
            names = ["superm", "wk2", "mockes", "perstar", "poincare", "special"]
        reports: List[RelationReport] = []
        for name in names:
            reports.extend(run_suite(name, cfg, ctx))
    except (NonConvergent, TailTooLarge) as exc:
        print(json.dumps({"error": str(exc), "kind": "convergence"}))
        return EXIT_CONVERGENCE
    except (DomainError, ValueError) as exc:
        print(json.dumps({"error": str(exc), "kind": "domain"}))
        return EXIT_DOMAIN
    _write_report(reports, cfg, args.out, args.csv)
    for r in reports:
        print(r.summary_line(), file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_IDENTITY_FAILURE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="periodlab", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    pl = sub.add_parser("lvalue", help="compute an L-value")
    pl.add_argument("--form", required=True)
    pl.add_argument("--s", required=True)
    pl.add_argument("--method", choices=("dirichlet", "completed"), default="completed")
    pl.add_argument("--digits", type=int, default=50)
    pl.add_argument("--series-len", type=int, default=0)
    pl.set_defaults(func=cmd_lvalue)

    pp = sub.add_parser("periodpoly", help="emit period polynomial JSON")
    pp.add_argument("--form", default="delta")
    pp.add_argument("--weight", type=int, default=0)
    pp.add_argument("--digits", type=int, default=50)
    pp.add_argument("--check", action="store_true", help="re-run the quadrature oracle")
    pp.set_defaults(func=cmd_periodpoly)

    pv = sub.add_parser("verify", help="run verification suites")
    pv.add_argument("suite", choices=SUITES)
    pv.add_argument("--form", default=None)
    pv.add_argument("--digits", type=int, default=0)
    pv.add_argument("--config", default=None)
    pv.add_argument("--out", default=None)
    pv.add_argument("--csv", default=None)
    pv.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
