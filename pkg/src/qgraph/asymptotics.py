"""Numerical companion to the exact modules.

Everything here lives in the scaling regime q = exp(hbar) with small negative
real hbar, where an edge of color n carries the holonomy eigenvalue
x = q^(n/2).  The module provides the dilogarithm, the factorial potential and
the graph potentials built from it, the twist variables obtained as
logarithmic gradients of those potentials, saddle-point data for the
tetrahedron, Lagrangian-condition probes, and growth tables comparing
hbar * log |invariant| against the potentials.

Branch policy: principal logarithms throughout.  For real dilogarithm
arguments above 1 the real part of the principal value is used; the sign
ambiguity this leaves in intermediate logs cancels in every exponentiated
quantity (the twists), which is covered by unit tests comparing both branch
choices.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from itertools import product as _iterproduct
from typing import NamedTuple, Optional

import mpmath
import numpy as np

from .apoly import TET_EDGES, THETA_EDGES, tet_classical_A, theta_classical_A
from .invariants import (
    TetColoring,
    _quad_halves,
    _triangle_halves,
    is_admissible,
    tet_is_admissible,
)

TWO_PI = 2.0 * math.pi
PI_SQ_OVER_6 = math.pi * math.pi / 6.0

# arguments this close to the unit locus are treated as singular for twists
_SING_TOL = 1e-8


class SingularPointError(ValueError):
    """Raised when a potential or twist is requested on its singular locus."""


# -- dilogarithm -------------------------------------------------------------------------------


def _bernoulli_series_coeffs(count: int) -> list:
    # exact Bernoulli recurrence over Fraction, flattened to float B_k/(k+1)!
    bern = [Fraction(1)]
    for m in range(1, count):
        acc = Fraction(0)
        for k in range(m):
            acc += Fraction(math.comb(m + 1, k)) * bern[k]
        bern.append(-acc / (m + 1))
    out = []
    fact = 1
    for k, b in enumerate(bern):
        fact *= k + 1
        out.append(float(b / fact))
    return out


_LOG_SERIES_COEF = _bernoulli_series_coeffs(44)


def _dilog_series(u: complex) -> complex:
    # accelerated series in w = -log(1-u); converges for |w| < 2*pi and the
    # routing below only sends arguments with |w| <= ~1.4 here
    w = -cmath.log(1 - u)
    w2 = w * w
    acc = _LOG_SERIES_COEF[0] * w + _LOG_SERIES_COEF[1] * w2
    wp = w * w2
    k = 2
    while k < len(_LOG_SERIES_COEF):
        term = _LOG_SERIES_COEF[k] * wp
        acc += term
        if abs(term) <= 1e-17 * (1.0 + abs(acc)):
            break
        wp *= w2
        k += 2
    return acc


def _dilog_routed(u: complex) -> complex:
    if u == 1:
        return complex(PI_SQ_OVER_6, 0.0)
    if abs(u) > 1.0:
        lu = cmath.log(-u)
        return -_dilog_routed(1.0 / u) - PI_SQ_OVER_6 - 0.5 * lu * lu
    if u.real > 0.5:
        return PI_SQ_OVER_6 - cmath.log(u) * cmath.log(1 - u) - _dilog_routed(1 - u)
    return _dilog_series(u)


def dilog(u) -> complex:
    """Principal-branch dilogarithm.

    Real arguments above 1 sit on the branch cut; the value returned there is
    the real part of the principal value, so exact-real input gives an
    exact-real answer.
    """
    u = complex(u)
    if u == 0:
        return 0j
    on_real_cut = u.imag == 0.0 and u.real > 1.0
    val = _dilog_routed(u)
    if on_real_cut:
        return complex(val.real, 0.0)
    return val


def g_potential(u) -> complex:
    """Factorial potential -(log u)^2/4 - Li_2(u) with the principal log."""
    u = complex(u)
    if u == 0:
        raise SingularPointError("factorial potential needs a nonzero argument")
    lu = cmath.log(u)
    return -0.25 * lu * lu - dilog(u)


# -- point containers --------------------------------------------------------------------------


class HolonomyPoint(NamedTuple):
    """Holonomy eigenvalues keyed by edge label, plus the scale parameter."""

    x: dict
    hbar: complex = 0.0


class TwistPoint(NamedTuple):
    """Twist variables keyed by edge label."""

    y: dict


class SaddleRecord(NamedTuple):
    """Roots of the tetrahedron saddle polynomial and the selected branch.

    residual is the absolute value of the edge-1 classical curve at the
    selected root's twist; curve_errors and lattice_errors hold per-root
    diagnostics (the lattice error measures the distance of the logarithmic
    slope from the 2*pi*i lattice, where a genuine saddle of the summand
    must land).
    """

    z_roots: tuple
    chosen: int
    y1: complex
    residual: float
    curve_errors: tuple
    lattice_errors: tuple
    degenerate: bool


def _coords(x, labels) -> tuple:
    if isinstance(x, HolonomyPoint):
        return tuple(complex(x.x[lab]) for lab in labels)
    vals = tuple(complex(v) for v in x)
    if len(vals) != len(labels):
        raise ValueError(f"expected {len(labels)} coordinates, got {len(vals)}")
    return vals


# -- theta graph -------------------------------------------------------------------------------


def _theta_args(xa, xb, xc) -> tuple:
    return (xa * xb * xc, xb * xc / xa, xa * xc / xb, xa * xb / xc)


def w_theta(x) -> complex:
    """Growth potential of the theta graph."""
    xa, xb, xc = _coords(x, THETA_EDGES)
    u1, u2, u3, u4 = _theta_args(xa, xb, xc)
    total = 1j * math.pi * cmath.log(xa * xb * xc)
    total += g_potential(u1) + g_potential(u2) + g_potential(u3) + g_potential(u4)
    total -= g_potential(xa * xa) + g_potential(xb * xb) + g_potential(xc * xc)
    return total


def _require_regular_theta(xa, xb, xc):
    for v in _theta_args(xa, xb, xc) + (xa * xa, xb * xb, xc * xc):
        if abs(v) < 1e-12:
            raise SingularPointError("zero potential argument")
        if abs(1 - v) < _SING_TOL:
            raise SingularPointError("argument on the unit locus")


def grad_log_y_theta(x) -> TwistPoint:
    """Twists of the theta graph as exponentiated potential gradients.

    Differentiating the potential in log x_j makes every squared-log piece
    cancel identically, leaving the constant i*pi plus logs of (1 - argument)
    factors.  Exponentiation turns that into a sign times a ratio of such
    factors, which is what gets evaluated here; the cancellation-free form is
    exact for real eigenvalues and branch-independent in general.

    Finite differences of w_theta reproduce these twists exactly on the
    region where every potential argument stays below 1.  Arguments beyond 1
    sit on the dilogarithm cut, where the real-part convention of w_theta
    drops the imaginary piece of individual terms; the difference
    exponentiates to a per-term sign, so there the finite-difference image
    can differ from the analytic twist by an overall sign while the twist
    itself stays branch-independent.
    """
    xa, xb, xc = _coords(x, THETA_EDGES)
    _require_regular_theta(xa, xb, xc)

    def one(p, s, t):
        u1 = p * s * t
        u2 = s * t / p
        u3 = p * t / s
        u4 = p * s / t
        return -(1 - u1) * (1 - u3) * (1 - u4) / ((1 - u2) * (1 - p * p) ** 2)

    return TwistPoint(
        y={"a": one(xa, xb, xc), "b": one(xb, xc, xa), "c": one(xc, xa, xb)}
    )


def _grad_log_y_theta_termwise(x, flip_negative_cut: bool = False) -> dict:
    """Literal term-by-term log-gradient of the theta potential, exponentiated.

    With flip_negative_cut the opposite branch of log(1 - u) is taken whenever
    1 - u lands on the negative real axis.  The exponentiated twists must not
    depend on that choice; tests compare both against grad_log_y_theta.
    """
    xa, xb, xc = _coords(x, THETA_EDGES)
    _require_regular_theta(xa, xb, xc)

    def lg(u):
        v = 1 - u
        val = cmath.log(v)
        if flip_negative_cut and v.imag == 0 and v.real < 0:
            val = complex(val.real, -math.pi)
        return val

    def slope(u):
        return -0.5 * cmath.log(u) + lg(u)

    def one(p, s, t):
        u1, u2, u3, u4 = p * s * t, s * t / p, p * t / s, p * s / t
        total = 1j * math.pi
        total += slope(u1) - slope(u2) + slope(u3) + slope(u4)
        total -= 2 * slope(p * p)
        return cmath.exp(total)

    return {"a": one(xa, xb, xc), "b": one(xb, xc, xa), "c": one(xc, xa, xb)}


def check_residual_theta(x) -> dict:
    """Absolute value of each theta classical curve at the gradient twists.

    Near the singular loci the twists blow up and the check is skipped: the
    returned map then carries NaN for every edge, which is the diagnostic
    callers should report instead of a residual.
    """
    xa, xb, xc = _coords(x, THETA_EDGES)
    try:
        ys = grad_log_y_theta((xa, xb, xc)).y
    except SingularPointError:
        return {edge: math.nan for edge in THETA_EDGES}
    base = {"x_a": xa, "x_b": xb, "x_c": xc}
    out = {}
    for edge in THETA_EDGES:
        point = dict(base)
        point["y_" + edge] = ys[edge]
        out[edge] = abs(theta_classical_A(edge).poly.evaluate(point))
    return out


# -- tetrahedron potential and saddles ---------------------------------------------------------


def _tet_products(xs) -> tuple:
    x1, x2, x12, x3, x4, x23 = xs
    triples = (x1 * x2 * x12, x3 * x4 * x12, x1 * x4 * x23, x2 * x3 * x23)
    quads = (x1 * x2 * x3 * x4, x1 * x3 * x12 * x23, x2 * x4 * x12 * x23)
    return triples, quads


def w_tet(x, z) -> complex:
    """Growth potential of the tetrahedron at auxiliary variable z."""
    xs = _coords(x, TET_EDGES)
    z = complex(z)
    if z == 0:
        raise SingularPointError("auxiliary variable must be nonzero")
    triples, quads = _tet_products(xs)
    total = 1j * math.pi * cmath.log(z) + g_potential(z)
    for p in triples:
        total -= g_potential(z / p)
    for r in quads:
        total -= g_potential(r / z)
    return total


def w_tet_slope(x, z) -> complex:
    """z times the z-derivative of the tetrahedron potential."""
    xs = _coords(x, TET_EDGES)
    z = complex(z)
    triples, quads = _tet_products(xs)
    total = 1j * math.pi - 0.5 * cmath.log(z) + cmath.log(1 - z)
    for p in triples:
        total += 0.5 * cmath.log(z / p) - cmath.log(1 - z / p)
    for r in quads:
        total += -0.5 * cmath.log(r / z) + cmath.log(1 - r / z)
    return total


def w_tet_curvature(x, z) -> complex:
    """Second logarithmic z-derivative of the tetrahedron potential."""
    xs = _coords(x, TET_EDGES)
    z = complex(z)
    triples, quads = _tet_products(xs)
    total = -0.5 - z / (1 - z)
    for p in triples:
        u = z / p
        total += 0.5 + u / (1 - u)
    for r in quads:
        u = r / z
        total += 0.5 + u / (1 - u)
    return total


def w_tet_one_loop_shape(x, z) -> complex:
    """Product of first-order factorial corrections at the saddle.

    Each factorial in the summand carries a sqrt(1 - argument) correction
    beyond its leading exponential; their ratio collapses to this single
    rational expression, whose square root scales the one-loop magnitude.
    """
    xs = _coords(x, TET_EDGES)
    z = complex(z)
    triples, quads = _tet_products(xs)
    num = 1 - z
    den = 1.0 + 0j
    for p in triples:
        den *= 1 - z / p
    for r in quads:
        den *= 1 - r / z
    if den == 0:
        raise SingularPointError("saddle sits on a correction zero")
    return num / den


def saddle_cubic_tet(x) -> tuple:
    """Coefficients (z^3, z^2, z, 1) of the saddle balance polynomial.

    The balance of the two four-fold products has identically cancelling
    quartic and constant terms, leaving z times a quadratic; the zero
    constant coefficient is kept so the tuple matches the displayed cubic.
    """
    xs = _coords(x, TET_EDGES)
    p1, p2, p3, p4 = _tet_products(xs)[0]
    q1, q2, q3 = _tet_products(xs)[1]
    s1 = p1 + p2 + p3 + p4
    s2 = p1 * p2 + p1 * p3 + p1 * p4 + p2 * p3 + p2 * p4 + p3 * p4
    s3 = p1 * p2 * p3 + p1 * p2 * p4 + p1 * p3 * p4 + p2 * p3 * p4
    r1 = q1 + q2 + q3
    r2 = q1 * q2 + q1 * q3 + q2 * q3
    r3 = q1 * q2 * q3
    return (s1 - r1 - 1.0, r1 + r2 - s2, s3 - r2 - r3, 0.0)


def saddle_twists_tet(x, z) -> TwistPoint:
    """All six twist variables determined by one saddle value.

    Each twist is an eigenvalue times a cross-ratio of the saddle against the
    triple and quadruple products; the assignments below are pinned by the
    classical curves, which they satisfy identically.
    """
    xs = _coords(x, TET_EDGES)
    z = complex(z)
    x1, x2, x12, x3, x4, x23 = xs
    (p1, p2, p3, p4), (r1, r2, r3) = _tet_products(xs)
    for r in (r1, r2, r3):
        if abs(z - r) < 1e-13 * abs(r):
            raise SingularPointError("saddle collides with a twist pole")
    y = {
        "1": x3 * (z - p1) * (z - p3) / ((z - r1) * (z - r2)),
        "2": x4 * (z - p1) * (z - p4) / ((z - r1) * (z - r3)),
        "12": x23 * (z - p1) * (z - p2) / ((z - r2) * (z - r3)),
        "3": x1 * (z - p2) * (z - p4) / ((z - r1) * (z - r2)),
        "4": x2 * (z - p2) * (z - p3) / ((z - r1) * (z - r3)),
        "23": x12 * (z - p3) * (z - p4) / ((z - r2) * (z - r3)),
    }
    return TwistPoint(y=y)


def _lattice_error(xs, z) -> float:
    # distance of the logarithmic slope from the 2*pi*i lattice; the slope of
    # a genuine summand saddle lands on the lattice because integer shifts of
    # the summation index change the summand by exp(2*pi*i*m)
    try:
        d = w_tet_slope(xs, z)
    except (SingularPointError, ValueError, ZeroDivisionError):
        return math.inf
    k = round(d.imag / TWO_PI)
    return abs(d - complex(0.0, TWO_PI * k))


def _curve_error_tet(xs, z) -> float:
    try:
        y1 = saddle_twists_tet(xs, z).y["1"]
    except SingularPointError:
        return math.inf
    point = {"x_" + lab: val for lab, val in zip(TET_EDGES, xs)}
    point["y_1"] = y1
    return abs(tet_classical_A("1").poly.evaluate(point))


def saddle_solve_tet(x) -> SaddleRecord:
    """Solve the saddle balance and select the branch that feeds the growth.

    Returns the two quadratic roots plus the structural zero root of the
    cubic.  Selection minimizes the edge-1 curve residual, with residuals
    below 1e-8 bucketed together; ties fall to the lattice error (bucketed at
    1e-6), then to roots in the closed lower half plane, then to smaller
    imaginary magnitude.  The structural zero root never wins because its
    slope is singular.  For a conjugate pair this picks the lower-half root,
    whose potential exceeds the upper one's by 2*pi*|arg z| and is the value
    the alternating sum actually grows with.
    """
    xs = _coords(x, TET_EDGES)
    a, b, c, _ = saddle_cubic_tet(xs)
    scale = max(abs(a), abs(b), abs(c))
    if scale == 0.0 or abs(a) < 1e-13 * scale:
        return SaddleRecord(
            z_roots=(),
            chosen=-1,
            y1=complex(math.nan, math.nan),
            residual=math.inf,
            curve_errors=(),
            lattice_errors=(),
            degenerate=True,
        )
    roots = tuple(complex(r) for r in np.roots([a, b, c])) + (0j,)
    curve_errors = tuple(_curve_error_tet(xs, z) if z != 0 else math.inf for z in roots)
    lattice_errors = tuple(_lattice_error(xs, z) if z != 0 else math.inf for z in roots)

    def sel_key(i):
        res = curve_errors[i]
        lat = lattice_errors[i]
        zi = roots[i]
        return (
            0.0 if res < 1e-8 else res,
            0.0 if lat < 1e-6 else lat,
            0 if zi.imag <= 1e-12 else 1,
            abs(zi.imag),
            zi.real,
        )

    candidates = [i for i, z in enumerate(roots) if z != 0]
    chosen = min(candidates, key=sel_key)
    zc = roots[chosen]
    y1 = saddle_twists_tet(xs, zc).y["1"]
    return SaddleRecord(
        z_roots=roots,
        chosen=chosen,
        y1=y1,
        residual=curve_errors[chosen],
        curve_errors=curve_errors,
        lattice_errors=lattice_errors,
        degenerate=False,
    )


def tet_real_segment(x) -> Optional[tuple]:
    """Real z-interval swept by the summation index, or None when empty."""
    xs = _coords(x, TET_EDGES)
    triples, quads = _tet_products(xs)
    lo = max(abs(r) for r in quads)
    hi = min(abs(p) for p in triples)
    if not lo < hi:
        return None
    return lo, hi


def tet_summation_floor(x) -> Optional[tuple]:
    """Interior stationary point of Re(potential) on the summation segment.

    On the open segment every potential argument stays inside (0, 1), so the
    real part is smooth with a unique interior minimum; the minimum is the
    magnitude floor of the largest summand.  Located by bisecting the real
    part of the slope, which runs from -inf to +inf across the segment.
    Returns (z, Re potential) or None when the segment is empty.
    """
    seg = tet_real_segment(x)
    if seg is None:
        return None
    xs = tuple(float(abs(v)) for v in _coords(x, TET_EDGES))
    lo, hi = seg
    pad = (hi - lo) * 1e-9
    a, b = lo + pad, hi - pad
    fa = w_tet_slope(xs, a).real
    fb = w_tet_slope(xs, b).real
    if not fa < 0.0 < fb:
        return None
    for _ in range(200):
        mid = 0.5 * (a + b)
        if w_tet_slope(xs, mid).real < 0.0:
            a = mid
        else:
            b = mid
    zs = 0.5 * (a + b)
    return zs, w_tet(xs, zs).real


# -- Lagrangian condition ----------------------------------------------------------------------


def lagrangian_residual(graph: str, x, step: float = 1e-5) -> float:
    """Largest antisymmetry of the twist log-Jacobian at one point.

    Central differences in log x with the given step; the twists of the
    tetrahedron are recomputed through the saddle nearest to the unperturbed
    one so the branch stays continuous.  A symmetric Jacobian is the testable
    statement that the twist pairing closes the symplectic form on the curve
    family.
    """
    if graph == "theta":
        labels = THETA_EDGES
        xs = tuple(float(v.real) for v in _coords(x, THETA_EDGES))
        y_ref = grad_log_y_theta(xs).y

        def twists_at(pt):
            return grad_log_y_theta(pt).y

    elif graph == "tet":
        labels = TET_EDGES
        xs = tuple(float(v.real) for v in _coords(x, TET_EDGES))
        rec = saddle_solve_tet(xs)
        if rec.degenerate:
            raise SingularPointError("degenerate saddle polynomial")
        z_ref = rec.z_roots[rec.chosen]
        y_ref = saddle_twists_tet(xs, z_ref).y

        def twists_at(pt):
            a, b, c, _ = saddle_cubic_tet(pt)
            roots = [complex(r) for r in np.roots([a, b, c])]
            z = min(roots, key=lambda r: abs(r - z_ref))
            return saddle_twists_tet(pt, z).y

    else:
        raise ValueError(f"unknown graph {graph!r}")

    n = len(labels)
    jac = [[0j] * n for _ in range(n)]
    for f in range(n):
        up = list(xs)
        dn = list(xs)
        up[f] *= math.exp(step)
        dn[f] *= math.exp(-step)
        yp = twists_at(tuple(up))
        ym = twists_at(tuple(dn))
        for e, lab in enumerate(labels):
            jac[e][f] = (yp[lab] - ym[lab]) / (2.0 * step * y_ref[lab])
    return max(
        abs(jac[i][j] - jac[j][i]) for i in range(n) for j in range(i + 1, n)
    )


def sample_theta_point(
    rng, delta: float = 0.1, lo: float = 0.15, hi: float = 0.85, subunit: bool = False
):
    """Random eigenvalue triple bounded away from the singular loci.

    With subunit=True every potential argument must also stay below 1, which
    keeps the point inside the region where w_theta is analytic along real
    perturbations (needed for finite-difference comparisons).
    """
    for _ in range(100000):
        xa, xb, xc = (rng.uniform(lo, hi) for _ in range(3))
        args = _theta_args(xa, xb, xc) + (xa * xa, xb * xb, xc * xc)
        if any(abs(1 - u) < delta for u in args):
            continue
        if subunit and any(u > 1.0 for u in args):
            continue
        return (xa, xb, xc)
    raise RuntimeError("theta point sampler starved")


def sample_tet_point(rng, delta: float = 0.15, lo: float = 0.2, hi: float = 0.8):
    """Random eigenvalue six-tuple whose saddle sits away from degeneracies.

    The saddle must keep a relative distance delta from every product it can
    collide with, and the balance quadratic must be comfortably nondegenerate.
    Acceptance runs near ten percent on the default box.
    """
    for _ in range(100000):
        xs = tuple(rng.uniform(lo, hi) for _ in range(6))
        a, b, c, _ = saddle_cubic_tet(xs)
        if abs(a) < 0.05 * max(abs(b), abs(c), 1e-30):
            continue
        rec = saddle_solve_tet(xs)
        if rec.degenerate:
            continue
        z = rec.z_roots[rec.chosen]
        triples, quads = _tet_products(xs)
        if any(abs(z - p) < delta * abs(p) for p in triples):
            continue
        if any(abs(z - r) < delta * abs(r) for r in quads):
            continue
        if abs(1 - z) < delta or abs(z) < 1e-4:
            continue
        return xs
    raise RuntimeError("tet point sampler starved")


# -- exact magnitude evaluation in the growth regime -------------------------------------------


def _log_bracket_prefix(n: int, hbar: float) -> list:
    # prefix sums of log [k] at v = exp(hbar/2); all factors are positive for
    # hbar < 0 so plain log arithmetic is exact-form evaluation
    base = math.log1p(-math.exp(hbar))
    out = [0.0]
    acc = 0.0
    for k in range(1, n + 1):
        acc += (1 - k) * hbar / 2.0 + math.log1p(-math.exp(hbar * k)) - base
        out.append(acc)
    return out


def log_abs_theta(colors, hbar: float) -> float:
    """log of the theta invariant magnitude at v = exp(hbar/2).

    Works through the factored factorial form term by term in log space, so
    there is no cancellation and double precision suffices at any color.
    """
    a, b, c = (int(v) for v in colors)
    if not is_admissible(a, b, c):
        raise ValueError(f"inadmissible coloring {(a, b, c)}")
    s = (a + b + c) // 2
    pref = _log_bracket_prefix(s + 1, float(hbar))
    return (pref[s + 1] + pref[s - a] + pref[s - b] + pref[s - c]) - (
        pref[a] + pref[b] + pref[c]
    )


def log_abs_tet(colors, hbar: float, start_bits: int = 320) -> tuple:
    """log of the normalized tetrahedron invariant magnitude at v = exp(hbar/2).

    The alternating sum cancels catastrophically in the growth regime (the
    surviving fraction shrinks like exp(-gap/|hbar|)), so the summation runs
    at extended precision and doubles it until the survivor is trusted.
    Returns (log magnitude, diagnostics dict).
    """
    col = TetColoring(*(int(v) for v in colors))
    if not tet_is_admissible(col):
        raise ValueError(f"inadmissible coloring {tuple(col)}")
    taus = _triangle_halves(col)
    ups = _quad_halves(col)
    lo, hi = max(taus), min(ups)
    if lo > hi:
        raise ValueError("empty summation range")
    hbar = float(hbar)
    bits = start_bits
    for _ in range(8):
        with mpmath.workprec(bits):
            h = mpmath.mpf(hbar)
            base = mpmath.log1p(-mpmath.exp(h))
            pref = [mpmath.mpf(0)] * (hi + 2)
            acc = mpmath.mpf(0)
            for k in range(1, hi + 2):
                acc += (1 - k) * h / 2 + mpmath.log1p(-mpmath.exp(h * k)) - base
                pref[k] = acc
            signed = mpmath.mpf(0)
            total = mpmath.mpf(0)
            for m in range(lo, hi + 1):
                lt = pref[m + 1]
                for t in taus:
                    lt -= pref[m - t]
                for u in ups:
                    lt -= pref[u - m]
                term = mpmath.exp(lt)
                total += term
                signed += -term if m % 2 else term
            if signed == 0:
                return -math.inf, {"cancellation": 0.0, "precision_bits": bits}
            canc = float(abs(signed) / total)
            if abs(signed) / total > mpmath.mpf(2) ** (60 - bits):
                return float(mpmath.log(abs(signed))), {
                    "cancellation": canc,
                    "precision_bits": bits,
                }
        bits *= 2
    raise ArithmeticError("cancellation exhausted the precision ladder")


# -- color rounding ----------------------------------------------------------------------------


def round_colors_theta(x, hbar: float) -> tuple:
    """Nearest admissible theta coloring for the requested eigenvalues.

    Colors solve x = exp(hbar n / 2).  When plain rounding breaks parity the
    cheapest single-entry adjustment that restores admissibility is taken.
    Returns (colors or None, notes).
    """
    if not hbar < 0:
        raise ValueError("growth regime needs negative hbar")
    xs = tuple(float(v.real) for v in _coords(x, THETA_EDGES))
    exact = [2.0 * math.log(v) / hbar for v in xs]
    base = [max(0, round(e)) for e in exact]
    notes = []
    if is_admissible(*base):
        cand = tuple(base)
    else:
        best = None
        for i in range(3):
            for d in (-1, 1):
                trial = list(base)
                trial[i] += d
                if min(trial) < 0 or not is_admissible(*trial):
                    continue
                cost = (sum(abs(t - e) for t, e in zip(trial, exact)), tuple(trial))
                if best is None or cost < best:
                    best = cost
        if best is None:
            return None, ("no admissible coloring near the requested point",)
        cand = best[1]
        notes.append("rounding adjusted to restore admissibility")
    if all(c == 0 for c in cand):
        notes.append("trivial coloring, invariant equals 1")
    return cand, tuple(notes)


def round_colors_tet(x, hbar: float) -> tuple:
    """Nearest admissible tetrahedron coloring, brute-forced over unit shifts."""
    if not hbar < 0:
        raise ValueError("growth regime needs negative hbar")
    xs = tuple(float(v.real) for v in _coords(x, TET_EDGES))
    exact = [2.0 * math.log(v) / hbar for v in xs]
    base = [max(0, round(e)) for e in exact]

    def usable(c):
        col = TetColoring(*c)
        if not tet_is_admissible(col):
            return False
        return max(_triangle_halves(col)) <= min(_quad_halves(col))

    if usable(base):
        cand, notes = tuple(base), []
    else:
        best = None
        for deltas in _iterproduct((-1, 0, 1), repeat=6):
            trial = [b + d for b, d in zip(base, deltas)]
            if min(trial) < 0 or not usable(trial):
                continue
            cost = (sum(abs(t - e) for t, e in zip(trial, exact)), tuple(trial))
            if best is None or cost < best:
                best = cost
        if best is None:
            return None, ("no admissible coloring near the requested point",)
        cand, notes = best[1], ["rounding adjusted to restore admissibility"]
    if all(c == 0 for c in cand):
        notes.append("trivial coloring, invariant equals 1")
    return cand, tuple(notes)


# -- growth tables -----------------------------------------------------------------------------


class GrowthRow(NamedTuple):
    """One growth-table line: measured magnitude against the potential."""

    hbar: float
    colors: Optional[tuple]
    scaled_log_abs: float
    target: float
    error: float
    notes: tuple = ()


class GrowthTable(NamedTuple):
    """Summary of a growth check across several hbar values.

    error_ratios holds consecutive |error| quotients (about 2 when the
    residual is first order and hbar halves); richardson is the two-point
    extrapolation of the corrected magnitudes, to be compared against target.
    """

    graph: str
    target: float
    rows: tuple
    error_ratios: tuple
    monotone: bool
    richardson: float
    richardson_rel_err: float


def _summarize(graph: str, target: float, rows: list) -> GrowthTable:
    errs = [r.error for r in rows if r.error == r.error and math.isfinite(r.error)]
    ratios = tuple(
        abs(e0 / e1) for e0, e1 in zip(errs, errs[1:]) if e1 != 0.0
    )
    monotone = len(errs) >= 2 and all(
        abs(e0) > abs(e1) for e0, e1 in zip(errs, errs[1:])
    )
    if len(errs) >= 2:
        rich = 2.0 * (errs[-1] + target) - (errs[-2] + target)
        rel = abs(rich - target) / abs(target) if target != 0 else math.inf
    else:
        rich, rel = math.nan, math.nan
    return GrowthTable(graph, target, tuple(rows), ratios, monotone, rich, rel)


# subtracting these normalizations leaves a residual linear in hbar
_THETA_CONST = PI_SQ_OVER_6
_THETA_LOG_COEF = 1.5


def growth_check_theta(x, hbars) -> GrowthTable:
    """Compare hbar*log|theta| against the potential across hbar values.

    Each row evaluates the exact invariant at the nearest admissible
    coloring.  The magnitude carries, on top of Re W, a constant pi^2/6 and a
    (3/2) hbar log(-hbar) normalization; both are subtracted, and the target
    is shifted to the effective eigenvalues of the rounded colors, so the
    error column is first order in hbar.  Expect consecutive errors to halve
    as hbar halves and the Richardson value to land on the target.
    """
    xs = tuple(float(v.real) for v in _coords(x, THETA_EDGES))
    target = w_theta(xs).real
    rows = []
    for hb in hbars:
        hb = float(hb)
        colors, notes = round_colors_theta(xs, hb)
        if colors is None:
            rows.append(GrowthRow(hb, None, math.nan, target, math.nan, notes))
            continue
        if all(c == 0 for c in colors):
            rows.append(GrowthRow(hb, colors, 0.0, target, math.nan, notes))
            continue
        val = hb * log_abs_theta(colors, hb)
        x_eff = tuple(math.exp(hb * n / 2.0) for n in colors)
        shift = w_theta(x_eff).real - target
        norm = _THETA_CONST - _THETA_LOG_COEF * hb * math.log(-hb)
        err = val - norm - shift - target
        rows.append(GrowthRow(hb, colors, val, target, err, notes))
    return _summarize("theta", target, rows)


def growth_check_tet(x, hbars, start_bits: int = 320) -> GrowthTable:
    """Compare hbar*log|tet| against the potential at the selected saddle.

    Beyond Re W the alternating sum carries a constant -pi^2, a
    2 hbar log(-hbar) term, and a one-loop magnitude assembled from the
    curvature, the correction product, and the interference cosine of the
    conjugate saddle pair; all are subtracted so the error column is first
    order in hbar.  Rows flag near-nodes of the cosine, report the measured
    cancellation of the sum, and note the real-segment magnitude floor whose
    gap to the saddle value sets that cancellation.
    """
    xs = tuple(float(v.real) for v in _coords(x, TET_EDGES))
    rec = saddle_solve_tet(xs)
    if rec.degenerate:
        raise SingularPointError("degenerate saddle polynomial")
    target = w_tet(xs, rec.z_roots[rec.chosen]).real
    rows = []
    for hb in hbars:
        hb = float(hb)
        colors, notes = round_colors_tet(xs, hb)
        notes = list(notes)
        if colors is None:
            rows.append(GrowthRow(hb, None, math.nan, target, math.nan, tuple(notes)))
            continue
        if all(c == 0 for c in colors):
            rows.append(GrowthRow(hb, colors, 0.0, target, math.nan, tuple(notes)))
            continue
        val_log, diag = log_abs_tet(colors, hb, start_bits=start_bits)
        val = hb * val_log
        notes.append(f"cancellation {diag['cancellation']:.3e}")
        x_eff = tuple(math.exp(hb * n / 2.0) for n in colors)
        rec_eff = saddle_solve_tet(x_eff)
        z0 = rec_eff.z_roots[rec_eff.chosen]
        if abs(z0.imag) < 1e-12:
            notes.append("real saddle branch, interference model approximate")
        w_eff = w_tet(x_eff, z0)
        curv = w_tet_curvature(x_eff, z0)
        shape = w_tet_one_loop_shape(x_eff, z0)
        phase = w_eff.imag / hb + 0.5 * cmath.phase(shape) - 0.5 * cmath.phase(curv)
        cosine = abs(math.cos(phase))
        if cosine < 0.2:
            notes.append("interference node nearby, one-loop magnitude unstable")
        mag = (
            math.log(2.0)
            + 0.5 * math.log(TWO_PI / (-hb * abs(curv)))
            + 0.5 * math.log(abs(shape))
            - 3.0 * math.log(TWO_PI)
            + (math.log(cosine) if cosine > 0 else -math.inf)
        )
        norm = -math.pi * math.pi + 2.0 * hb * math.log(-hb) + hb * mag
        shift = w_eff.real - target
        err = val - norm - shift - target
        floor = tet_summation_floor(x_eff)
        if floor is not None:
            notes.append(f"max-term floor {floor[1]:.6f}")
        rows.append(GrowthRow(hb, colors, val, target, err, tuple(notes)))
    return _summarize("tet", target, rows)


def gx_self_check(x, hbars) -> GrowthTable:
    """First-order convergence of hbar*log [n]! to the factorial potential.

    Rounds n from x = exp(hbar n), subtracts the known pi^2/6 constant, the
    log(-hbar) terms, and the square-root measure, and reports the residual,
    which must shrink linearly in hbar with a clean Richardson limit.
    """
    xv = float(x)
    if not 0.0 < xv < 1.0:
        raise ValueError("self check needs 0 < x < 1")
    target = g_potential(xv).real
    rows = []
    for hb in hbars:
        hb = float(hb)
        n = round(math.log(xv) / hb)
        if n <= 0:
            rows.append(
                GrowthRow(hb, (0,), 0.0, target, math.nan, ("trivial rounding",))
            )
            continue
        x_eff = math.exp(hb * n)
        val = hb * _log_bracket_prefix(n, hb)[n]
        corr = (
            PI_SQ_OVER_6
            - math.log(x_eff) * math.log(-hb)
            + 0.5 * hb * math.log(TWO_PI / -hb)
        )
        shift = g_potential(x_eff).real - target
        err = val - corr - shift - target
        rows.append(GrowthRow(hb, (n,), val, target, err, ()))
    return _summarize("bracket-factorial", target, rows)
