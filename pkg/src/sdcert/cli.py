"""``sdc`` command-line interface.

Exit codes: 0 ok, 2 bad input/config, 3 disconnected graph, 4 eigensolver
failure, 5 a certificate check or verification item failed.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import os
import sys
import warnings

from . import __version__, _json
from .bfs import DEFAULT_APSP_BUDGET, double_sweep_lower_bound, exact_diameter
from .certifier import DiameterCertificate, build_certificate, bound_rhs, verify_certificate
from .errors import (
    BudgetExceededError,
    DisconnectedGraphError,
    EdgeListParseError,
    EigensolverError,
    GraphValidationError,
)
from .graph import FAMILIES, format_edge_list, generate, is_connected, load_edge_list
from .kernels import BACKEND, thread_count
from .laplacian import DEFAULT_DENSE_CAP, DEFAULT_TOL, LaplacianOperator, dense_spectrum, lanczos_smallest_k, smallest_k

log = logging.getLogger("sdcert")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DISCONNECTED = 3
EXIT_SOLVER = 4
EXIT_CHECK = 5

FAMILY_PARAMS = {
    "path": ("n",),
    "cycle": ("n",),
    "complete": ("n",),
    "grid2d": ("rows", "cols"),
    "hypercube": ("d",),
    "barbell": ("m",),
    "random_regular": ("n", "d"),
}


class UsageError(Exception):
    pass


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0 or math.isinf(value):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _k_value(text):
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("k must be >= 2")
    return value


def _k_range(text):
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}") from None
    if lo < 2 or hi < lo:
        raise argparse.ArgumentTypeError(f"need 2 <= A <= B, got {text!r}")
    return lo, hi


def _read_input(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        g = load_edge_list(text)
    for w in caught:
        log.warning("%s: %s", path, w.message)
    return g, hashlib.sha256(text.encode("utf-8")).hexdigest()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summary_stream(args):
    # keep stdout clean for JSON when no --out is given
    return sys.stdout if args.out else sys.stderr


def _config(args, **extra) -> dict:
    cfg = {"command": args.command}
    for key in sorted(vars(args)):
        if key in ("command", "out", "verbose", "func"):
            continue
        value = getattr(args, key)
        if isinstance(value, tuple):
            value = list(value)
        cfg[key] = value
    cfg.update(extra)
    return cfg


def _invert(args):
    return {"auto": None, "plain": False, "inverse": True}[args.lanczos]


def _tool() -> dict:
    return {"name": "sdcert", "version": __version__}


# --------------------------------------------------------------------------
# subcommands


def _parse_gen_params(family, tokens):
    names = FAMILY_PARAMS[family]
    values: dict[str, int] = {}
    seed = None
    positional = []
    for tok in tokens:
        if "=" in tok:
            key, _, raw = tok.partition("=")
            try:
                val = int(raw)
            except ValueError:
                raise UsageError(f"non-integer parameter {tok!r}") from None
            if key == "seed":
                seed = val
            elif key in names:
                values[key] = val
            else:
                raise UsageError(f"{family} has no parameter {key!r}; expected {', '.join(names)}")
        else:
            try:
                positional.append(int(tok))
            except ValueError:
                raise UsageError(f"non-integer parameter {tok!r}") from None
    free = [n for n in names if n not in values]
    if len(positional) > len(free):
        raise UsageError(f"{family} takes parameters {', '.join(names)}; got too many")
    values.update(zip(free, positional))
    params = [values[n] for n in names if n in values]
    return params, seed


def cmd_gen(args) -> int:
    params, seed = _parse_gen_params(args.family, args.params)
    if seed is None:
        seed = args.seed
    g = generate(args.family, *params, seed=seed)
    _emit(format_edge_list(g), args.out)
    log.info("%s%s: n=%d m=%d", args.family, tuple(params), g.n, g.num_edges)
    return EXIT_OK


def _certificate_summary(cert: DiameterCertificate) -> str:
    lines = [
        f"n={cert.n} k={cert.k} diameter={cert.diameter.diameter} ({cert.diameter.mode}) R={cert.budget_radius}"
        f"{' trivial-regime' if cert.trivial_regime else ''}",
        f"lambda_{cert.k}={cert.lam.value:.12g} via {cert.lam.method} (residual {cert.lam.residual:.2e})",
    ]
    if cert.sets:
        radii = ",".join(str(s.radius) for s in cert.sets)
        lines.append(f"sets: k={len(cert.sets)} radii=[{radii}] phi_max={cert.phi_max:.6g}")
    for c in cert.checks:
        lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.lhs!r} {c.op} {c.rhs!r}")
    lines.append("certificate: " + ("all checks pass" if cert.passed else "CHECK FAILURE"))
    if not cert.exact:
        lines.append("note: diameter is a double-sweep lower bound; the certificate is non-exact")
    return "\n".join(lines) + "\n"


def cmd_certify(args) -> int:
    g, digest = _read_input(args.graph)
    config = _config(args, input_sha256=digest, backend=BACKEND)
    cert = build_certificate(
        g,
        args.k,
        diam_mode=args.diam_mode,
        apsp_budget=args.apsp_budget,
        seed=args.seed,
        tol=args.tol,
        max_iter=args.max_iter,
        invert=_invert(args),
        config=config,
    )
    ok = cert.passed
    if args.tamper_test:
        cert = cert.with_lambda(3.0)
        report = verify_certificate(g, cert, apsp_budget=args.apsp_budget)
        ok = report.passed
        print("\n".join(report.lines()), file=_summary_stream(args))
    _emit(_json.dumps(cert.to_dict()), args.out)
    print(_certificate_summary(cert), end="", file=_summary_stream(args))
    return EXIT_OK if ok else EXIT_CHECK


def cmd_verify(args) -> int:
    g, _ = _read_input(args.graph)
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            cert = DiameterCertificate.from_dict(json.load(fh))
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        raise UsageError(f"unreadable certificate {args.certificate}: {exc}") from exc
    if cert.n != g.n:
        raise UsageError(f"certificate is for n={cert.n} but the graph has n={g.n}")
    report = verify_certificate(g, cert, apsp_budget=args.apsp_budget)
    print("\n".join(report.lines()))
    print("verification: " + ("PASS" if report.passed else f"FAIL ({len(report.failures)} item(s))"))
    return EXIT_OK if report.passed else EXIT_CHECK


SWEEP_COLUMNS = ["k", "lambda_k", "diam", "lhs", "rhs", "ratio", "trivial_regime", "diam_mode", "checks_pass"]


def cmd_sweep(args) -> int:
    if args.k_range is not None:
        k_min, k_max = args.k_range
    elif args.k_min is not None:
        k_min = args.k_min
        k_max = args.k_max if args.k_max is not None else k_min
        if k_min < 2 or k_max < k_min:
            raise UsageError(f"need 2 <= k_min <= k_max, got {k_min}..{k_max}")
    else:
        raise UsageError("give K_MIN [K_MAX] or --k-range A:B")
    g, digest = _read_input(args.graph)
    if k_max >= g.n:
        raise UsageError(f"k_max={k_max} must be below n={g.n}")
    if not is_connected(g):
        raise DisconnectedGraphError("graph is not connected")
    config = _config(args, k_min=k_min, k_max=k_max, input_sha256=digest, backend=BACKEND)
    if args.diam_mode == "exact":
        diameter = exact_diameter(g, budget=args.apsp_budget)
    else:
        diameter = double_sweep_lower_bound(g, seed=args.seed)
    spectrum = smallest_k(g, k_max, tol=args.tol, seed=args.seed, max_iter=args.max_iter or g.n, invert=_invert(args))
    buf = io.StringIO()
    buf.write(f"# {json.dumps({'tool': _tool(), 'config': config}, sort_keys=False)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    all_ok = True
    for k in range(k_min, k_max + 1):
        cert = build_certificate(g, k, spectrum=spectrum, diameter=diameter, config=config)
        lhs = cert.diameter.diameter * cert.lam.value
        rhs = bound_rhs(g.n, k)
        all_ok &= cert.passed
        w.writerow(
            [
                k,
                format(cert.lam.value, ".17g"),
                cert.diameter.diameter,
                format(lhs, ".17g"),
                format(rhs, ".17g"),
                format(lhs / rhs, ".17g"),
                str(cert.trivial_regime).lower(),
                cert.diameter.mode,
                str(cert.passed).lower(),
            ]
        )
    _emit(buf.getvalue(), args.out)
    return EXIT_OK if all_ok else EXIT_CHECK


def cmd_eigs(args) -> int:
    g, digest = _read_input(args.graph)
    if not is_connected(g):
        raise DisconnectedGraphError("graph is not connected")
    if args.k >= g.n:
        raise UsageError(f"k={args.k} must be below n={g.n}")
    if args.method == "dense":
        res = dense_spectrum(g, cap=max(DEFAULT_DENSE_CAP, g.n))
        res_k = dict(res.to_dict())
        res_k["eigenvalues"] = res_k["eigenvalues"][: args.k]
        res_k["residuals"] = res_k["residuals"][: args.k]
        payload = res_k
    elif args.method == "lanczos":
        payload = lanczos_smallest_k(
            LaplacianOperator(g), args.k, tol=args.tol, seed=args.seed, max_iter=args.max_iter, invert=_invert(args)
        ).to_dict()
    else:
        payload = smallest_k(g, args.k, tol=args.tol, seed=args.seed, max_iter=args.max_iter, invert=_invert(args)).to_dict()
    doc = {"tool": _tool(), "config": _config(args, input_sha256=digest, backend=BACKEND), **payload}
    _emit(_json.dumps(doc), args.out)
    return EXIT_OK


def cmd_diameter(args) -> int:
    g, digest = _read_input(args.graph)
    if args.diam_mode == "exact":
        res = exact_diameter(g, budget=args.apsp_budget)
    else:
        if not is_connected(g):
            raise DisconnectedGraphError("graph is not connected")
        res = double_sweep_lower_bound(g, seed=args.seed)
    doc = {"tool": _tool(), "config": _config(args, input_sha256=digest, backend=BACKEND), **res.to_dict()}
    _emit(_json.dumps(doc), args.out)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sdc", description="Spectral diameter certificates for unweighted graphs.")
    parser.add_argument("--version", action="version", version=f"sdcert {__version__} ({BACKEND} kernels)")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True, out=True):
        if seed:
            p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
        if out:
            p.add_argument("--out", help="output path (default: standard output)")

    def solver(p):
        p.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL, help="eigen residual tolerance")
        p.add_argument("--max-iter", type=_positive_int, default=None, help="Lanczos steps per round")
        p.add_argument("--lanczos", choices=["auto", "plain", "inverse"], default="auto",
                       help="run Lanczos on L itself or on its grounded inverse (auto: inverse when the factor is sparse)")

    def diam(p):
        p.add_argument("--diam-mode", choices=["exact", "doublesweep"], default="exact")
        p.add_argument("--apsp-budget", type=_positive_int, default=DEFAULT_APSP_BUDGET,
                       help="max vertices for exact all-pairs BFS")

    p = sub.add_parser("gen", help="write a generated graph as an edge list")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("params", nargs="+", help="integers, positional or key=value (seed=S allowed)")
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("certify", help="build a diameter certificate")
    p.add_argument("graph")
    p.add_argument("--k", type=_k_value, default=2)
    p.add_argument("--tamper-test", action="store_true",
                   help="corrupt lambda_k after building and verify (must exit 5)")
    common(p)
    solver(p)
    diam(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="independently re-check a certificate")
    p.add_argument("graph")
    p.add_argument("certificate")
    p.add_argument("--apsp-budget", type=_positive_int, default=DEFAULT_APSP_BUDGET)
    p.set_defaults(func=cmd_verify, out=None)

    p = sub.add_parser("sweep", help="CSV of diam*lambda_k against 48 k ln n over a k range")
    p.add_argument("graph")
    p.add_argument("k_min", nargs="?", type=_k_value)
    p.add_argument("k_max", nargs="?", type=_k_value)
    p.add_argument("--k-range", type=_k_range, default=None)
    common(p)
    solver(p)
    diam(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("eigs", help="smallest normalized-Laplacian eigenvalues as JSON")
    p.add_argument("graph")
    p.add_argument("--k", type=_positive_int, default=2)
    p.add_argument("--method", choices=["auto", "dense", "lanczos"], default="auto")
    common(p)
    solver(p)
    p.set_defaults(func=cmd_eigs)

    p = sub.add_parser("diameter", help="diameter and witnessing pair as JSON")
    p.add_argument("graph")
    common(p)
    diam(p)
    p.set_defaults(func=cmd_diameter)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        thread_count()
        return args.func(args)
    except (EdgeListParseError, GraphValidationError, UsageError, BudgetExceededError, OSError, ValueError) as exc:
        print(f"sdc: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DisconnectedGraphError as exc:
        print(f"sdc: disconnected graph: {exc}", file=sys.stderr)
        return EXIT_DISCONNECTED
    except EigensolverError as exc:
        print(f"sdc: eigensolver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
