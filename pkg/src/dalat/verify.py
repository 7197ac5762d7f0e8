"""Ordered registry of invariant checks behind ``dalat verify-all``.

Each check returns ``(passed, detail)`` where ``detail`` holds measured
residuals. Failures are data: :func:`verify_all` always produces a full
report. The registry order fixes the report order.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable

import numpy as np

from . import linalg as la
from . import mesh, schur
from .basis import (CoefficientSeries, basis_poly, basis_row, convolve, e_lambda,
                    e_lambda_table, h2_norm_squared, mu_to_lambda, series_table,
                    taylor_coefficients, z_apply)
from .corpus import (random_contractive_colligation, random_exact_coisometry, random_gr,
                     random_lambda, random_minimal_float, random_rational_matrix,
                     random_realization, random_small_rational, rng_for)
from .lattice import (LatticeFunction, LatticePoint, PathSpec, Window, apply_difference,
                      discrete_integral, is_discrete_analytic)
from .realization import (Realization, backward_shift_rank, combine, invert, kernel_realization,
                          markov_params, minimal_realization, rational_table, resolvent_eval,
                          resolvent_table, transfer_eval)
from .scalar import ALPHA_MINUS, ALPHA_PLUS, GR, to_complex_array

__all__ = ["Profile", "PROFILES", "CHECKS", "verify_all", "check_names"]


@dataclass(frozen=True)
class Profile:
    name: str
    kernel_terms: int
    colligations: int
    gram_points: int
    mcmillan_span: int


PROFILES = {
    "quick": Profile("quick", kernel_terms=300, colligations=6, gram_points=30, mcmillan_span=6),
    "full": Profile("full", kernel_terms=400, colligations=50, gram_points=30, mcmillan_span=6),
}

BasisFn = Callable[[int, LatticePoint], GR]


def _default_basis(n: int, z: LatticePoint) -> GR:
    return basis_poly(n, z, exact=True)


def _table(basis: BasisFn, n: int, window: Window) -> LatticeFunction:
    return LatticeFunction.tabulate(lambda z: basis(n, z), window, exact=True)


def _random_table(seed, window: Window) -> LatticeFunction:
    rng = rng_for(seed)
    return LatticeFunction.tabulate(lambda z: random_gr(rng), window, exact=True)


def _nonzero(f: LatticeFunction) -> float:
    return la.max_abs(f.values)


# lattice operators -------------------------------------------------------------

def check_commute(ctx):
    f = _random_table(11, Window(0, 5, -2, 3))
    a = apply_difference("dy", apply_difference("dx", f))
    b = apply_difference("dx", apply_difference("dy", f))
    ok = a.equals(b)
    g = _random_table(12, Window(0, 6, -3, 3))
    c = apply_difference("d", apply_difference("dbar", g))
    d = apply_difference("dbar", apply_difference("d", g))
    ok2 = c.equals(d)
    return ok and ok2, {"dxdy": a.max_abs_diff(b), "wirtinger": c.max_abs_diff(d)}


def check_dbar_factor(ctx):
    f = _random_table(13, Window(0, 5, -2, 3))
    g = f.restrict(Window(0, 5, -2, 2)) + apply_difference("dy", f).scale(ALPHA_PLUS)
    lhs = g.restrict(Window(0, 4, -2, 2)) + apply_difference("dx", g).scale(ALPHA_MINUS)
    rhs = f.restrict(Window(0, 4, -2, 2)) + apply_difference("dbar", f)
    return lhs.equals(rhs), {"residual": lhs.max_abs_diff(rhs)}


def check_closed_paths(ctx):
    w = Window(0, 6, -3, 3)
    fns = [_table(ctx["basis"], n, w) for n in (2, 5)] + [e_lambda_table(GR(Fraction(1, 3), 1), w)]
    loops = [PathSpec.parse("0;1;1+i;i;0"),
             PathSpec.parse("1-2i;2-2i;3-2i;3-i;3;3+i;2+i;2;1;1-i;1-2i"),
             PathSpec.parse("4;5;6;6+i;6+2i;5+2i;5+i;4+i;4")]
    worst = 0.0
    for f in fns:
        for loop in loops:
            worst = max(worst, la.max_abs(discrete_integral(f, loop)))
        worst = max(worst, _nonzero(apply_difference("dbar", f)))
    return worst == 0, {"max_integral_or_dbar": worst}


# basis polynomials ---------------------------------------------------------------

def check_si3(ctx):
    w = Window(0, 11, -12, 12)
    basis = ctx["basis"]
    worst = 0.0
    prev = _table(basis, 0, w)
    for n in range(1, 13):
        cur = _table(basis, n, w)
        d = apply_difference("dx", cur).max_abs_diff(prev.restrict(Window(0, 10, -12, 12)))
        worst = max(worst, d)
        prev = cur
    return worst == 0, {"max_residual": worst, "n_max": 12, "window": "12x25"}


def check_basis_analytic(ctx):
    w = Window(0, 11, -12, 12)
    worst = 0.0
    for n in range(13):
        worst = max(worst, is_discrete_analytic(_table(ctx["basis"], n, w))[1])
    return worst == 0, {"max_residual": worst}


def check_binomial(ctx):
    bad = [(n, x) for n in range(13) for x in range(12)
           if ctx["basis"](n, LatticePoint(x, 0)) != GR(comb(x, n))]
    return not bad, {"mismatches": len(bad)}


def check_chu(ctx):
    pts = [LatticePoint(x, y) for x in range(6) for y in range(-3, 3)]
    basis = ctx["basis"]
    bad = 0
    for z in pts:
        for w in pts:
            s = z + w
            for n in range(9):
                rhs = sum((basis(k, z) * basis(n - k, w) for k in range(n + 1)), GR(0))
                bad += basis(n, s) != rhs
    return bad == 0, {"mismatches": bad, "pairs": len(pts) ** 2}


def check_eigen(ctx):
    rng = rng_for(3)
    w = Window(0, 4, -3, 3)
    worst = 0.0
    for _ in range(20):
        lam = random_lambda(rng)
        f = e_lambda_table(lam, w)
        worst = max(worst, apply_difference("dx", f).max_abs_diff(
            f.restrict(Window(0, 3, -3, 3)).scale(lam)))
        mu = random_gr(rng)
        if mu == GR(-1, -1):
            continue
        g = e_lambda_table(mu_to_lambda(mu), w)
        worst = max(worst, apply_difference("dy", g).max_abs_diff(
            g.restrict(Window(0, 4, -3, 2)).scale(mu)))
    return worst == 0, {"max_residual": worst}


def check_generating(ctx):
    worst = 0.0
    for lam in (0.5, 0.9, 0.7j):
        for x in range(4):
            for y in range(-3, 4):
                row = basis_row(LatticePoint(x, y), 199, exact=False)
                s = np.sum(row * lam ** np.arange(200))
                worst = max(worst, abs(s - e_lambda(complex(lam), (x, y))))
    return worst <= 1e-8, {"max_error": worst}


def check_hadamard(ctx):
    target = 1 / math.sqrt(2)
    out = {}
    ok = True
    for z in (LatticePoint(1, 1), LatticePoint(3, 0), LatticePoint(2, -4)):
        v = basis_row(z, 400, exact=True)[400]
        a = v.abs2()
        root = math.exp((math.log(a.numerator) - math.log(a.denominator)) / 800) if a else 0.0
        out[str(z)] = root / target
        ok &= abs(root / target - 1) <= 0.05
    return ok, {"ratio_to_limit": out}


def check_z_decay(ctx):
    w = Window(0, 4, -2, 2)
    one = LatticeFunction.constant([[1]], w)
    cur = one
    mismatch = 0
    for n in range(1, 6):
        cur = z_apply(cur)
        mismatch += not cur.equals(_table(ctx["basis"], n, w))
    worst = max(abs(basis_row(z, 200, exact=False)[200]) for z in w.points())
    return mismatch == 0 and worst <= 1e-6, {"Zn_mismatches": mismatch, "max_abs_at_200": worst}


def check_taylor_roundtrip(ctx):
    rng = rng_for(5)
    bad = 0
    for _ in range(5):
        c = CoefficientSeries(random_rational_matrix(rng, (7, 1, 1)))
        t = series_table(c, Window(0, 8, -2, 2))
        bad += not taylor_coefficients(t, 6).equals(c)
    return bad == 0, {"mismatches": bad}


# realizations -------------------------------------------------------------------

def check_resolvent_steps(ctx):
    rng = rng_for(21)
    bad = 0
    for n in (1, 2, 3):
        A = random_small_rational(rng, n)
        I = la.eye(n)
        up = (I + A * ALPHA_PLUS) @ la.inv(I + A * ALPHA_MINUS)
        for z in Window(0, 3, -2, 2).points():
            E = resolvent_eval(A, z)
            bad += not la.equal(resolvent_eval(A, z + LatticePoint(1, 0)), (I + A) @ E)
            bad += not la.equal(resolvent_eval(A, z + LatticePoint(0, 1)), up @ E)
    return bad == 0, {"mismatches": bad}


def check_resolvent_identity(ctx):
    rng = rng_for(22)
    bad = 0
    K = 8
    for _ in range(10):
        n = int(rng.integers(1, 4))
        A = random_small_rational(rng, n)
        e = taylor_coefficients(resolvent_table(A, Window(0, K, 0, 1)), K)
        poly = CoefficientSeries(np.stack([la.eye(n), -A]))
        prod = convolve(poly, e, length=K + 1)
        want = CoefficientSeries(np.stack([la.eye(n)] + [la.zeros((n, n))] * K))
        bad += not prod.equals(want)
    return bad == 0, {"mismatches": bad}


def check_series_match(ctx):
    rng = rng_for(23)
    worst = 0.0
    w = Window(0, 3, -3, 3)
    for _ in range(5):
        R = random_realization(rng, 2, contractive=True)
        tab = rational_table(R, w)
        M = markov_params(R.to_float(), 250)
        ser = series_table(M, w)
        worst = max(worst, la.max_abs(to_complex_array(tab.values) - ser.values))
    return worst <= 1e-9, {"max_error": worst}


def check_rational_analytic(ctx):
    rng = rng_for(24)
    worst = 0.0
    for _ in range(4):
        R = random_realization(rng, 2)
        worst = max(worst, is_discrete_analytic(rational_table(R, Window(0, 4, -3, 3)))[1])
    return worst == 0, {"max_residual": worst}


def check_tmap_product(ctx):
    rng = rng_for(25)
    bad = 0
    for _ in range(10):
        R1 = random_realization(rng, int(rng.integers(0, 4)))
        R2 = random_realization(rng, int(rng.integers(0, 4)))
        P = combine("product", R2, R1)
        K = P.n + 3
        conv = convolve(markov_params(R2, K), markov_params(R1, K), length=K + 1)
        bad += not conv.equals(markov_params(P, K))
        t = GR(Fraction(1, 7), Fraction(-1, 5))
        bad += not la.equal(transfer_eval(P, t), transfer_eval(R2, t) @ transfer_eval(R1, t))
    return bad == 0, {"mismatches": bad}


def check_inverse(ctx):
    rng = rng_for(26)
    bad = 0
    tried = 0
    while tried < 8:
        R = random_realization(rng, int(rng.integers(1, 4)), 2, 2)
        try:
            Ri = invert(R)
        except ValueError:
            continue
        tried += 1
        for P in (combine("product", Ri, R), combine("product", R, Ri)):
            want = CoefficientSeries(np.stack([la.eye(2)] + [la.zeros((2, 2))] * 8))
            bad += not markov_params(P, 8).equals(want)
    return bad == 0, {"mismatches": bad, "systems": tried}


def check_t_injective(ctx):
    rng = rng_for(27)
    worst = 0.0
    for _ in range(3):
        A11 = random_small_rational(rng, 2)
        A22 = random_small_rational(rng, 1)
        A = np.block([[A11, random_rational_matrix(rng, (2, 1))],
                      [la.zeros((1, 2)), A22]])
        B = np.concatenate([random_rational_matrix(rng, (2, 1)), la.zeros((1, 1))])
        C = np.concatenate([la.zeros((1, 2)), random_rational_matrix(rng, (1, 1))], axis=1)
        R = Realization(A, B, C, la.zeros((1, 1)))
        if any(v for m in markov_params(R, 8).coeffs for v in m.flat):
            return False, {"error": "test system has nonzero Markov parameters"}
        worst = max(worst, _nonzero(rational_table(R, Window(0, 5, -6, 6))))
    return worst == 0, {"max_value": worst}


def check_minimal_idempotent(ctx):
    rng = rng_for(28)
    bad = 0
    for _ in range(5):
        R = random_realization(rng, int(rng.integers(1, 4)))
        R1, d1 = minimal_realization(markov_params(R, 2 * R.n + 2))
        R2, d2 = minimal_realization(markov_params(R1, 2 * R1.n + 2))
        K = 2 * R.n + 4
        bad += d1 != d2 or not markov_params(R1, K).equals(markov_params(R, K))
    return bad == 0, {"mismatches": bad}


def check_kernel_degree(ctx):
    span = ctx["profile"].mcmillan_span
    bad = []
    for x in range(span + 1):
        for y in range(-span, span + 1):
            w = LatticePoint(x, y)
            R = kernel_realization(w)
            _, d = minimal_realization(markov_params(R, 2 * R.n + 2))
            if d != x + abs(y):
                bad.append(str(w))
    return not bad, {"points": (span + 1) * (2 * span + 1), "failures": bad}


def check_backward_shift_rank(ctx):
    bad = []
    for s in range(10):
        n = 1 + s % 4
        R = random_minimal_float(s, n)
        r = backward_shift_rank(rational_table(R, Window(0, 14, -3, 3)), 8)
        if r != n:
            bad.append([s, n, r])
    return not bad, {"failures": bad}


# Schur functions ----------------------------------------------------------------

def check_adjoint_resolvent(ctx):
    rng = rng_for(31)
    bad = 0
    for n in (1, 2):
        A = random_small_rational(rng, n)
        As = la.ctranspose(A)
        for w in Window(0, 4, -4, 4).points():
            bad += not la.equal(la.ctranspose(resolvent_eval(A, w)), resolvent_eval(As, w.conj()))
    return bad == 0, {"mismatches": bad}


def check_kernel_hermitian(ctx):
    cg = random_exact_coisometry(32, 2, 1, 2)
    bad = 0
    for z in Window(0, 2, -1, 1).points():
        for w in Window(0, 2, -1, 1).points():
            bad += not la.equal(la.ctranspose(schur.kernel_closed(cg, z, w)),
                                schur.kernel_closed(cg, w, z))
    return bad == 0, {"mismatches": bad}


def _shifted_F(cg, z, n, terms):
    """``(Z^n F)(z) = sum_k C A^k z^(n+k)``."""
    row = basis_row(z, n + terms, exact=False)
    out = np.zeros((cg.m, cg.n), dtype=complex)
    M = cg.C.astype(complex)
    for k in range(terms):
        out += M * row[n + k]
        M = M @ cg.A
    return out


def check_telescoping(ctx):
    worst = 0.0
    terms = 120
    for s in range(3):
        cg = schur.random_coisometry(3, 1, 2, 40 + s)
        z, w = LatticePoint(2, 1), LatticePoint(1, -2)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", schur.KernelTruncationWarning)
            for N in (3, 6, 10):
                inc = (schur.kernel_series(cg, z, w, N + 1, terms=terms)
                       - schur.kernel_series(cg, z, w, N, terms=terms))
                Gz, Gw = _shifted_F(cg, z, N, terms), _shifted_F(cg, w, N, terms)
                Hz, Hw = _shifted_F(cg, z, N + 1, terms), _shifted_F(cg, w, N + 1, terms)
                want = Gz @ Gw.conj().T - Hz @ Hw.conj().T
                worst = max(worst, float(np.max(np.abs(inc - want))))
    return worst <= 1e-8, {"max_error": worst}


def check_dbr(ctx):
    worst = 0.0
    for s in range(3):
        cg = random_contractive_colligation(50 + s, 3, 1)
        worst = max(worst, schur.dbr_residual(cg, LatticePoint(1, 1), [1.0], 200),
                    schur.dbr_residual(cg, LatticePoint(2, -1), [1j], 200))
    return worst <= 1e-6, {"max_error": worst}


def check_h2_shift(ctx):
    rng = rng_for(33)
    bad = 0
    for _ in range(20):
        c = CoefficientSeries(random_rational_matrix(rng, (int(rng.integers(1, 8)), 1, 1)))
        t = series_table(c, Window(0, c.N + 1, 0, 1))
        d = taylor_coefficients(apply_difference("dx", t), c.N)
        lhs = h2_norm_squared(d)
        rhs = h2_norm_squared(c) - c.coeffs[0, 0, 0].abs2()
        bad += lhs != rhs
    return bad == 0, {"mismatches": bad}


def _gram_points(count: int) -> list[LatticePoint]:
    pts = list(Window(0, 5, -5, 5).points())
    step = max(1, len(pts) // count)
    return pts[::step][:count]


def check_gram_psd(ctx):
    prof = ctx["profile"]
    rng = rng_for(34)
    pts = _gram_points(prof.gram_points)
    worst = math.inf
    for s in range(prof.colligations):
        n, m = int(rng.integers(1, 9)), int(rng.integers(1, 4))
        p = int(rng.integers(m, 4))
        cg = schur.random_coisometry(n, m, p, 1000 + s)
        worst = min(worst, schur.gram_psd(cg, pts)[1])
    return worst >= -schur.PSD_TOL, {"min_eig": worst, "colligations": prof.colligations}


def check_kernel_match(ctx):
    prof = ctx["profile"]
    rng = rng_for(35)
    worst = 0.0
    pts = list(Window(0, 3, -1, 2).points())
    count = 2 if prof.name == "quick" else 10
    for s in range(count):
        n = int(rng.integers(1, 5))
        cg = schur.random_coisometry(n, 1, 2, 2000 + s)
        for z in pts[::3]:
            for w in pts[::4]:
                d = schur.kernel_closed(cg, z, w) - schur.kernel_series(cg, z, w, prof.kernel_terms)
                worst = max(worst, la.max_abs(d))
    return worst <= 1e-6, {"max_error": worst, "N": prof.kernel_terms}


def check_multiplier(ctx):
    prof = ctx["profile"]
    worst = 0.0
    for s in range(prof.colligations):
        cg = schur.random_coisometry(1 + s % 8, 1 + s % 3, 3, 3000 + s)
        worst = max(worst, schur.multiplier_contraction(cg, 64)[1])
    return worst <= 1 + schur.CONTRACTION_TOL, {"max_opnorm": worst}


def check_defect_completion(ctx):
    worst = 0.0
    cases = [([[0]], [[1]]), ([[0]], [[0]]), ([[0.5]], [[0.5]])]
    for s in range(5):
        cg = random_contractive_colligation(60 + s, 3, 2, scale=1.0)
        cases.append((cg.A, cg.C))
    for A, C in cases:
        cg = schur.defect_completion(A, C)
        worst = max(worst, schur.is_coisometry(cg.block)[1])
    return worst <= 1e-10, {"max_defect": worst}


# mesh ---------------------------------------------------------------------------

LADDER = [Fraction(1, 2 ** k) for k in range(7)]


def check_mesh_product(ctx):
    bad = sum(mesh.basis_poly_h(n, (x, 0), h) != GR(mesh.falling_product(n, x, h))
              for n in range(9) for x in (1, 2, 3) for h in LADDER)
    return bad == 0, {"mismatches": bad}


def check_mesh_limit(ctx):
    worst_c = 0.0
    bad = []
    for n in range(9):
        for x in (1, 2, 3):
            errs = [row[3] for row in mesh.convergence_table(n, x, LADDER)]
            if any(b > a for a, b in zip(errs, errs[1:])):
                bad.append([n, x])
            worst_c = max(worst_c, max(float(e / h) for e, h in zip(errs, LADDER)))
    return not bad, {"non_monotone": bad, "observed_C": worst_c}


def check_mesh_complex_limit(ctx):
    # coarse meshes are not monotone off the real axis; only k >= 3 is checked
    z = 1 + 1j
    bad = []
    worst_c = 0.0
    for n in range(9):
        errs = [abs(complex(mesh.basis_poly_h(n, (1, 1), h)) - z ** n / math.factorial(n))
                for h in LADDER]
        tail = errs[3:]
        if any(b > a for a, b in zip(tail, tail[1:])) or errs[-1] > 0.02:
            bad.append(n)
        worst_c = max(worst_c, max(e / float(h) for e, h in zip(tail, LADDER[3:])))
    return not bad, {"failures": bad, "observed_C": worst_c}


def check_mesh_operators(ctx):
    w = Window(0, 6, -2, 3)
    inner = Window(0, 5, -2, 3)
    bad = 0
    for h in (Fraction(1, 2), Fraction(1, 3)):
        for n in range(1, 5):
            t = mesh.basis_table_h(n, w, h)
            bad += not mesh.delta_xh(t, h).equals(mesh.basis_table_h(n - 1, inner, h))
            bad += not mesh.delta_xh(mesh.z_h(t, h), h).equals(t.restrict(inner))
            bad += not mesh.mesh_residual(t)[0]
    return bad == 0, {"mismatches": bad}


def check_mesh_adjoint(ctx):
    rng = rng_for(36)
    bad = 0
    for h in (Fraction(1, 2), Fraction(1, 4)):
        for _ in range(2):
            a = [random_gr(rng) for _ in range(int(rng.integers(1, 12)))]
            b = [random_gr(rng) for _ in range(int(rng.integers(1, 12)))]
            bad += not mesh.mesh_adjoint_check(a, b, h)[2]
    return bad == 0, {"mismatches": bad}


def check_adjoint_identity(ctx):
    bad = [[n, m] for n in range(11) for m in range(11) if not mesh.adjoint_identity_check(n, m)[2]]
    return not bad, {"failures": bad}


def check_mesh_kernel(ctx):
    lim, tail = mesh.limit_kernel(1, 1, 60)
    errs = [abs(mesh.kernel_h(1, 1, h, 60)[0] - lim) for h in LADDER]
    ok = all(b < a for a, b in zip(errs, errs[1:]))
    return ok, {"errors": errs, "limit": lim.real, "limit_tail": tail}


CHECKS: list[tuple[str, Callable]] = [
    ("difference-commute", check_commute),
    ("dbar-factor", check_dbar_factor),
    ("closed-path", check_closed_paths),
    ("si3", check_si3),
    ("basis-analytic", check_basis_analytic),
    ("binomial", check_binomial),
    ("chu-vandermonde", check_chu),
    ("eigenfunction", check_eigen),
    ("generating-series", check_generating),
    ("hadamard", check_hadamard),
    ("z-decay", check_z_decay),
    ("taylor-roundtrip", check_taylor_roundtrip),
    ("resolvent-steps", check_resolvent_steps),
    ("resolvent-identity", check_resolvent_identity),
    ("resolvent-series", check_series_match),
    ("rational-analytic", check_rational_analytic),
    ("tmap-product", check_tmap_product),
    ("convolution-inverse", check_inverse),
    ("t-injective", check_t_injective),
    ("minimal-idempotent", check_minimal_idempotent),
    ("kernel-degree", check_kernel_degree),
    ("backward-shift-rank", check_backward_shift_rank),
    ("adjoint-resolvent", check_adjoint_resolvent),
    ("kernel-hermitian", check_kernel_hermitian),
    ("telescoping", check_telescoping),
    ("dbr-identity", check_dbr),
    ("h2-shift", check_h2_shift),
    ("gram-psd", check_gram_psd),
    ("kernel-match", check_kernel_match),
    ("multiplier-contraction", check_multiplier),
    ("defect-completion", check_defect_completion),
    ("mesh-product", check_mesh_product),
    ("mesh-limit", check_mesh_limit),
    ("mesh-complex-limit", check_mesh_complex_limit),
    ("mesh-operators", check_mesh_operators),
    ("mesh-adjoint", check_mesh_adjoint),
    ("adjoint-identity", check_adjoint_identity),
    ("mesh-kernel", check_mesh_kernel),
]


def check_names() -> list[str]:
    return [name for name, _ in CHECKS]


def _clean(v):
    """Make measurements JSON-friendly (Fractions and complex become strings/floats)."""
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, Fraction):
        return float(v)
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def verify_all(profile: str = "quick", basis: BasisFn | None = None,
               only: list[str] | None = None) -> dict:
    """Run the registry and return the report.

    ``basis`` replaces the exact basis-polynomial provider used by the
    basis checks (fault injection); ``only`` restricts to named checks.
    """
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; expected one of {sorted(PROFILES)}")
    ctx = {"profile": PROFILES[profile], "basis": basis or _default_basis}
    results = []
    for name, fn in CHECKS:
        if only is not None and name not in only:
            continue
        try:
            ok, detail = fn(ctx)
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
        results.append({"name": name, "passed": bool(ok), "detail": _clean(detail)})
    return {
        "profile": profile,
        "passed": all(r["passed"] for r in results),
        "failed": [r["name"] for r in results if not r["passed"]],
        "checks": results,
    }
