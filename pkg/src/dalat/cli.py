"""Command-line interface: ``dalat <verb> [options]``.

Exit codes: 0 success, 1 domain error (inadmissible state matrix,
singular feedthrough, non-coisometry, failed check), 2 usage error.
With ``--json`` every verb writes one JSON document; errors become
``{"code", "message", "witness"}``.

Output schemas
--------------
basis           text scalar | JSON {n, z, mode, value:[re, im]} | CSV x,y,n,re,im (--window)
eval            JSON {z, mode, value:[[[re, im]...]...]} per point
check-analytic  text "residual R" | JSON {fn, window, analytic, max_residual}
integrate       JSON {fn, path, value}
tmap            JSON {t, value} or {markov: CoefficientSeries JSON}
product/invert  Realization JSON
degree          text integer | JSON {degree, source}
annihilate      JSON {coeffs: [[re, im]...]} (coefficients of p in the z^(n) basis)
schur-check     JSON {seed, dims, min_eig, opnorm, kernel_match_err, ...}
mesh-converge   CSV h,value,limit,abs_err
verify-all      JSON report {profile, passed, failed, checks:[{name, passed, detail}]}
"""
from __future__ import annotations

import argparse
import contextlib
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import mesh
from .basis import DEFAULT_TERMS, basis_csv, basis_poly, basis_table, e_lambda_table
from .lattice import (LatticeFunction, LatticePoint, PathError, PathSpec, Window, WindowError,
                      discrete_integral, ferrand_residuals, is_discrete_analytic, lattice_points,
                      staircase)
from .realization import (InadmissibleError, InsufficientDataError, Realization,
                          annihilating_polynomial, combine, invert, kernel_realization,
                          markov_params, mcmillan_degree, rational_eval, transfer_eval)
from .scalar import (GR, ModeError, default_mode, format_fraction, format_scalar, parse_scalar,
                     to_complex_array)
from .schur import CoisometryError, schur_check
from .verify import verify_all

__all__ = ["run", "main", "VERBS"]

VERBS = ("basis", "eval", "check-analytic", "integrate", "tmap", "product", "invert",
         "degree", "annihilate", "schur-check", "mesh-converge", "verify-all")


class DomainError(Exception):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class UsageError(Exception):
    pass


class FailedReport(Exception):
    """A report was produced but records failures: print it and exit 1."""

    def __init__(self, text: str):
        super().__init__("report records failures")
        self.text = text


# encoding ---------------------------------------------------------------------

def _num(v, exact: bool):
    if exact:
        v = GR.coerce(v)
        return [format_fraction(v.re), format_fraction(v.im)]
    c = complex(v)
    return [float(c.real), float(c.imag)]


def _mat(a: np.ndarray, exact: bool):
    return [[_num(v, exact) for v in row] for row in a]


def _text_scalar(v, exact: bool) -> str:
    if exact:
        return format_scalar(v)
    c = complex(v)
    if c.imag == 0:
        return format(c.real, ".17g")
    return f"{c.real:.17g}{'+' if c.imag >= 0 else '-'}{abs(c.imag):.17g}i"


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


# inputs ---------------------------------------------------------------------------

def _window(text: str) -> Window:
    try:
        x0, x1, y0, y1 = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise UsageError(f"window must be x0,x1,y0,y1, got {text!r}") from exc
    return Window(x0, x1, y0, y1)


def _point(text: str) -> LatticePoint:
    try:
        return LatticePoint.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _scalar(text: str, exact: bool):
    try:
        return parse_scalar(text, exact)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _realization(path: str, exact: bool) -> Realization:
    try:
        R = Realization.from_json(_load_json(path))
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{path} is not a realization document: {exc}") from exc
    return R if exact or not R.exact else R.to_float()


def _named_function(spec: str, window: Window, exact: bool) -> LatticeFunction:
    """``const1``, ``z``, ``zbar``, ``x``, ``basis:N``, ``exp:LAMBDA`` or ``file:PATH``."""
    one = GR(1) if exact else 1.0
    if spec == "const1":
        return LatticeFunction.constant([[one]], window, exact)
    if spec == "z":
        return LatticeFunction.tabulate(lambda p: p.scalar(exact), window, exact)
    if spec == "zbar":
        return LatticeFunction.tabulate(lambda p: p.conj().scalar(exact), window, exact)
    if spec == "x":
        return LatticeFunction.tabulate(lambda p: p.x * one, window, exact)
    kind, _, arg = spec.partition(":")
    if kind == "basis" and arg.isdigit():
        return basis_table(int(arg), window, exact)
    if kind == "exp" and arg:
        return e_lambda_table(_scalar(arg, exact), window)
    if kind == "file" and arg:
        try:
            return LatticeFunction.from_json(_load_json(arg))
        except (KeyError, ValueError, TypeError) as exc:
            raise UsageError(f"{arg} is not a lattice function document: {exc}") from exc
    raise UsageError(f"unknown function {spec!r}; use const1, z, zbar, x, basis:N, exp:L, file:PATH")


# verbs -----------------------------------------------------------------------------

def cmd_basis(args, exact):
    if args.window:
        return basis_csv(args.n, _window(args.window), exact)
    if args.z is None:
        raise UsageError("basis needs --z or --window")
    z = _point(args.z)
    if z.x < 0:
        raise DomainError(f"{z} is not in the right half-lattice", str(z))
    v = basis_poly(args.n, z, exact)
    if args.json:
        return _dump({"n": args.n, "z": str(z), "mode": _mode(exact), "value": _num(v, exact)})
    return _text_scalar(v, exact) + "\n"


def cmd_eval(args, exact):
    R = _realization(args.realization, exact)
    pts = lattice_points(args.z)
    out = []
    for z in pts:
        out.append({"z": str(z), "value": _mat(rational_eval(R, z), R.exact)})
    return _dump({"mode": R.mode, "values": out})


def cmd_check_analytic(args, exact):
    w = _window(args.window)
    f = _named_function(args.fn, w, exact)
    ok, res = is_discrete_analytic(f, args.tol or 0.0)
    doc = {"fn": args.fn, "window": w.as_dict(), "analytic": ok, "max_residual": res}
    if not ok:
        mags = np.abs(to_complex_array(ferrand_residuals(f))).max(axis=(2, 3))
        i, j = np.unravel_index(np.argmax(mags), mags.shape)
        raise DomainError(f"{args.fn} is not discrete analytic on {w} (max residual {res:.6g})",
                          str(LatticePoint(w.x0 + int(i), w.y0 + int(j))))
    if args.json:
        return _dump(doc)
    return f"residual {res:.17g}\n" if res else "residual 0\n"


def cmd_integrate(args, exact):
    if args.path:
        path = PathSpec.parse(args.path)
    elif args.z:
        path = staircase(_point(args.z))
    else:
        raise UsageError("integrate needs --path or --z")
    xs = [p.x for p in path.vertices]
    ys = [p.y for p in path.vertices]
    w = Window(min(xs), max(xs), min(ys), max(ys))
    f = _named_function(args.fn, w, exact)
    v = discrete_integral(f, path)
    return _dump({"fn": args.fn, "path": [str(p) for p in path.vertices],
                  "closed": path.closed, "value": _mat(v, f.exact)})


def cmd_tmap(args, exact):
    R = _realization(args.realization, exact)
    if args.markov is not None:
        return _dump({"markov": markov_params(R, args.markov).to_json()})
    if args.t is None:
        raise UsageError("tmap needs --t or --markov")
    t = _scalar(args.t, R.exact)
    try:
        v = transfer_eval(R, t)
    except (ZeroDivisionError, np.linalg.LinAlgError, ValueError) as exc:
        raise DomainError(f"I - tA is singular at t = {args.t}", args.t) from exc
    return _dump({"t": args.t, "mode": R.mode, "value": _mat(v, R.exact)})


def cmd_product(args, exact):
    R2 = _realization(args.left, exact)
    R1 = _realization(args.right, exact)
    if R1.exact != R2.exact:
        R1, R2 = R1.to_float(), R2.to_float()
    try:
        P = combine(args.kind, R2, R1)
    except (ValueError, ModeError) as exc:
        if isinstance(exc, InadmissibleError):
            raise
        raise UsageError(str(exc)) from exc
    return _dump(P.to_json())


def cmd_invert(args, exact):
    R = _realization(args.realization, exact)
    try:
        Ri = invert(R)
    except InadmissibleError:
        raise
    except ValueError as exc:
        raise DomainError(str(exc), "D") from exc
    return _dump(Ri.to_json())


def cmd_degree(args, exact):
    if args.w:
        w = _point(args.w)
        if w.x < 0:
            raise DomainError(f"{w} is not in the right half-lattice", str(w))
        d = mcmillan_degree(kernel_realization(w))
        source = f"kernel at {w}"
    elif args.realization:
        d = mcmillan_degree(_realization(args.realization, exact))
        source = args.realization
    else:
        raise UsageError("degree needs --w or --realization")
    if args.json:
        return _dump({"degree": d, "source": source})
    return f"{d}\n"


def cmd_annihilate(args, exact):
    R = _realization(args.realization, exact)
    p = annihilating_polynomial(R)
    return _dump({"mode": R.mode, "coeffs": [_num(c[0, 0], R.exact) for c in p.coeffs]})


def cmd_schur_check(args, exact):
    try:
        n, m, p = (int(t) for t in args.dims.split(","))
    except ValueError as exc:
        raise UsageError(f"--dims must be n,m,p, got {args.dims!r}") from exc
    if args.points:
        try:
            text = Path(args.points).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.points}: {exc.strerror}") from exc
        try:
            doc = json.loads(text)
            pts = lattice_points([LatticePoint.parse(str(s)) for s in doc])
        except json.JSONDecodeError:
            pts = lattice_points(text.replace("\n", " "))
    else:
        pts = list(Window(0, 3, -1, 2).points())
    if not pts:
        raise UsageError("no points given")
    try:
        report = schur_check(args.seed, (n, m, p), pts)
    except ValueError as exc:
        raise DomainError(str(exc), args.dims) from exc
    if not report["passed"]:
        raise FailedReport(_dump(report))
    return _dump(report)


def cmd_mesh_converge(args, exact):
    try:
        hs = [mesh.as_step(t) for t in args.h_list.split(",")]
        return mesh.convergence_csv(args.n, mesh._rational(args.x), hs, exact)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_verify_all(args, exact):
    report = verify_all(args.profile)
    text = _dump(report)
    if not report["passed"]:
        print(f"dalat: failed checks: {', '.join(report['failed'])}", file=sys.stderr)
        raise FailedReport(text)
    return text


COMMANDS = {
    "basis": cmd_basis,
    "eval": cmd_eval,
    "check-analytic": cmd_check_analytic,
    "integrate": cmd_integrate,
    "tmap": cmd_tmap,
    "product": cmd_product,
    "invert": cmd_invert,
    "degree": cmd_degree,
    "annihilate": cmd_annihilate,
    "schur-check": cmd_schur_check,
    "mesh-converge": cmd_mesh_converge,
    "verify-all": cmd_verify_all,
}


def _mode(exact: bool) -> str:
    return "exact" if exact else "float"


def build_parser() -> argparse.ArgumentParser:
    def flags(defaults: bool) -> argparse.ArgumentParser:
        # after the verb, unset flags must not clobber values given before it
        d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--json", action="store_true", default=d(False), help="emit JSON")
        p.add_argument("--mode", choices=("exact", "float"), default=d(None),
                       help="scalar mode (default: $DALAT_MODE or exact)")
        p.add_argument("--tol", type=float, default=d(None), help="numerical tolerance")
        p.add_argument("--seed", type=int, default=d(0), help="random seed")
        p.add_argument("--out", default=d(None), help="write output to FILE")
        return p

    common = flags(False)
    parser = argparse.ArgumentParser(prog="dalat", parents=[flags(True)],
                                     description="Discrete analytic functions on the half-lattice.")
    sub = parser.add_subparsers(dest="verb", metavar="VERB")
    sub.required = True

    def verb(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    p = verb("basis", "basis polynomial z^(n) at a point, or a CSV table over a window")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--z")
    p.add_argument("--window", help="x0,x1,y0,y1; emits n = 0..N as CSV")

    p = verb("eval", "evaluate a realization at lattice points")
    p.add_argument("--realization", required=True, help="realization JSON file")
    p.add_argument("--z", required=True, help="points, e.g. '1+i;2;3-2i'")

    p = verb("check-analytic", "check the lattice Cauchy-Riemann equation on a window")
    p.add_argument("--fn", required=True, help="const1, z, zbar, x, basis:N, exp:L, file:PATH")
    p.add_argument("--window", default="0,5,-3,3")

    p = verb("integrate", "discrete integral along a path")
    p.add_argument("--fn", required=True)
    p.add_argument("--path", help="vertices, e.g. '0;1;1+i'")
    p.add_argument("--z", help="integrate from 0 to z along the staircase")

    p = verb("tmap", "classical transfer value D + tC(I - tA)^-1 B or Markov parameters")
    p.add_argument("--realization", required=True)
    p.add_argument("--t")
    p.add_argument("--markov", type=int, nargs="?", const=DEFAULT_TERMS - 1,
                   help=f"number of Markov parameters beyond D (bare flag: {DEFAULT_TERMS - 1})")

    p = verb("product", "cascade (or sum) of two realizations")
    p.add_argument("--left", required=True, help="f2 in f2 o f1")
    p.add_argument("--right", required=True, help="f1 in f2 o f1")
    p.add_argument("--kind", choices=("product", "sum"), default="product")

    p = verb("invert", "convolution inverse of a realization")
    p.add_argument("--realization", required=True)

    p = verb("degree", "McMillan degree of the kernel at w or of a realization")
    p.add_argument("--w")
    p.add_argument("--realization")

    p = verb("annihilate", "annihilating polynomial det(I - tA) of a realization")
    p.add_argument("--realization", required=True)

    p = verb("schur-check", "kernel positivity and contraction checks for a random coisometry")
    p.add_argument("--dims", required=True, help="n,m,p")
    p.add_argument("--points", help="file with lattice points (JSON list or whitespace separated)")

    p = verb("mesh-converge", "x_h^(n) against x^n / n! along a list of mesh sizes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--h-list", required=True, help="e.g. 1,1/2,1/4")

    p = verb("verify-all", "run every invariant check")
    p.add_argument("--profile", choices=("quick", "full"), default="quick")
    return parser


def _error_doc(code: int, message: str, witness) -> str:
    return _dump({"code": code, "message": message, "witness": witness})


def run(argv: list[str]) -> tuple[int, bytes]:
    """Execute one command; returns ``(exit_code, stdout_bytes)``."""
    parser = build_parser()
    captured = io.StringIO()
    try:
        with contextlib.redirect_stdout(captured), contextlib.redirect_stderr(sys.stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), captured.getvalue().encode()
    mode = args.mode or default_mode()
    exact = mode == "exact"
    try:
        out = COMMANDS[args.verb](args, exact)
        code = 0
    except UsageError as exc:
        print(f"dalat: error: {exc}", file=sys.stderr)
        return 2, (_error_doc(2, str(exc), None) if args.json else "").encode()
    except FailedReport as exc:
        code, out = 1, exc.text
    except DomainError as exc:
        code = 1
        out = _error_doc(1, str(exc), exc.witness) if args.json else ""
        print(f"dalat: {exc}", file=sys.stderr)
    except InadmissibleError as exc:
        code = 1
        out = _error_doc(1, str(exc), exc.witness) if args.json else ""
        print(f"dalat: {exc}", file=sys.stderr)
    except (CoisometryError, InsufficientDataError, WindowError, PathError) as exc:
        code = 1
        out = _error_doc(1, str(exc), None) if args.json else ""
        print(f"dalat: {exc}", file=sys.stderr)
    if args.out:
        Path(args.out).write_text(out)
        return code, b""
    return code, out.encode()


def main(argv: list[str] | None = None) -> int:
    code, out = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.buffer.write(out)
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
