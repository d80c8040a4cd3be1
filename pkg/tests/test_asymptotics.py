"""Growth-regime numerics: dilogarithm, potentials, twists, saddles, tables.

Reference values come from independent routes: mpmath's polylog as the
dilogarithm oracle, exact Laurent evaluation of the invariants at
v = exp(hbar/2) against the log-space evaluators, classical curves solved
directly for the twist at pinned points, and finite differences against
every closed-form derivative.  Frozen constants were produced by
term-by-term summation with the oracle pieces only.
"""

import cmath
import math
import random
from fractions import Fraction

import mpmath
import pytest

from qgraph.apoly import TET_EDGES, THETA_EDGES, saddle_system, tet_classical_A, theta_classical_A
from qgraph.asymptotics import (
    GrowthRow,
    GrowthTable,
    HolonomyPoint,
    SingularPointError,
    TwistPoint,
    _grad_log_y_theta_termwise,
    check_residual_theta,
    dilog,
    g_potential,
    grad_log_y_theta,
    growth_check_tet,
    growth_check_theta,
    gx_self_check,
    lagrangian_residual,
    log_abs_tet,
    log_abs_theta,
    round_colors_tet,
    round_colors_theta,
    saddle_cubic_tet,
    saddle_solve_tet,
    saddle_twists_tet,
    sample_tet_point,
    sample_theta_point,
    tet_real_segment,
    tet_summation_floor,
    w_tet,
    w_tet_curvature,
    w_tet_one_loop_shape,
    w_tet_slope,
    w_theta,
)
from qgraph.invariants import TetColoring, is_admissible, tet_is_admissible, tet_primed, theta_invariant

PI_SQ_6 = math.pi * math.pi / 6.0


# -- dilogarithm --


def test_dilog_special_values():
    assert dilog(0) == 0
    assert abs(dilog(1) - PI_SQ_6) < 1e-15
    assert abs(dilog(-1) + PI_SQ_6 / 2.0) < 1e-15


def test_dilog_matches_mpmath_on_unit_disk():
    rng = random.Random(3)
    for _ in range(400):
        r = rng.uniform(0.0, 0.999)
        th = rng.uniform(0.0, 2.0 * math.pi)
        u = complex(r * math.cos(th), r * math.sin(th))
        ref = complex(mpmath.polylog(2, u))
        assert abs(dilog(u) - ref) <= 1e-12


def test_dilog_matches_mpmath_off_disk():
    rng = random.Random(4)
    for _ in range(200):
        r = rng.uniform(1.001, 20.0)
        th = rng.uniform(0.02, 2.0 * math.pi - 0.02)
        u = complex(r * math.cos(th), r * math.sin(th))
        if u.imag == 0.0:
            continue
        ref = complex(mpmath.polylog(2, u))
        assert abs(dilog(u) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_dilog_real_axis_above_one_takes_real_part():
    # on the cut the value is real: the real part of the principal branch
    for u in (1.5, 2.0, 5.0, 40.0):
        got = dilog(u)
        assert got.imag == 0.0
        ref = complex(mpmath.polylog(2, u))
        assert abs(got.real - ref.real) <= 1e-12 * max(1.0, abs(ref.real))


def test_dilog_reflection_identity():
    # Li2(u) + Li2(1-u) = pi^2/6 - log(u) log(1-u), principal logs
    rng = random.Random(9)
    for _ in range(300):
        u = complex(rng.uniform(-2.0, 2.0), rng.uniform(0.05, 2.5))
        lhs = dilog(u) + dilog(1 - u)
        rhs = PI_SQ_6 - cmath.log(u) * cmath.log(1 - u)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_dilog_inversion_identity():
    # Li2(u) + Li2(1/u) = -pi^2/6 - log(-u)^2/2 away from the real axis
    rng = random.Random(10)
    for _ in range(300):
        u = complex(rng.uniform(-3.0, 3.0), rng.uniform(0.05, 3.0))
        if abs(u) < 1e-3:
            continue
        lhs = dilog(u) + dilog(1.0 / u)
        lu = cmath.log(-u)
        rhs = -PI_SQ_6 - 0.5 * lu * lu
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_g_potential_values():
    assert abs(g_potential(1) + PI_SQ_6) < 1e-15
    ref = -0.25 - complex(mpmath.polylog(2, math.e)).real
    assert abs(g_potential(math.e) - ref) < 1e-13


def test_g_potential_rejects_zero():
    with pytest.raises(SingularPointError):
        g_potential(0)


def test_g_potential_is_factorial_limit():
    # hbar log [n]! = g(x_n) + pi^2/6 - log(x_n) log(-hbar) + O(hbar log hbar)
    hb = -1.0 / 256.0
    n = round(math.log(0.5) / hb)
    log_fact = 0.0
    for k in range(1, n + 1):
        log_fact += (1 - k) * hb / 2.0 + math.log1p(-math.exp(hb * k)) - math.log1p(-math.exp(hb))
    x_eff = math.exp(hb * n)
    residual = (
        hb * log_fact
        - g_potential(x_eff).real
        - PI_SQ_6
        + math.log(x_eff) * math.log(-hb)
    )
    assert abs(residual) <= abs(hb * math.log(-hb))


# -- theta potential and twists --


def test_w_theta_trivial_point():
    assert abs(w_theta((1, 1, 1)) + PI_SQ_6) < 1e-13


def test_w_theta_against_termwise_oracle():
    xa, xb, xc = 0.5, 0.5, 0.5
    args = [xa * xb * xc, xb * xc / xa, xa * xc / xb, xa * xb / xc]

    def g_ref(u):
        lu = cmath.log(u)
        li = complex(mpmath.polylog(2, u))
        if u.imag == 0 and u.real > 1:
            li = complex(li.real, 0.0)
        return -0.25 * lu * lu - li

    ref = 1j * math.pi * cmath.log(xa * xb * xc)
    ref += sum(g_ref(complex(u)) for u in args)
    ref -= g_ref(complex(xa * xa)) + g_ref(complex(xb * xb)) + g_ref(complex(xc * xc))
    got = w_theta((xa, xb, xc))
    assert abs(got - ref) < 1e-13
    assert abs(got - (-1.0729035222567926 - 6.532758270910805j)) < 1e-12


def test_w_theta_permutation_invariant():
    rng = random.Random(12)
    for _ in range(50):
        x = sample_theta_point(rng)
        base = w_theta(x)
        for perm in ((0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
            assert abs(w_theta(tuple(x[i] for i in perm)) - base) < 1e-12


def test_w_theta_accepts_holonomy_point():
    pt = HolonomyPoint(x={"a": 0.5, "b": 0.6, "c": 0.7}, hbar=-0.01)
    assert w_theta(pt) == w_theta((0.5, 0.6, 0.7))


def test_theta_twists_at_symmetric_point_solve_the_curve():
    # the curve is linear in its twist, so it pins the value; the gradient
    # must reproduce exactly what the curve forces
    ys = grad_log_y_theta((0.5, 0.5, 0.5)).y
    poly = theta_classical_A("a").poly
    base = {"x_a": 0.5, "x_b": 0.5, "x_c": 0.5}
    c0 = poly.evaluate({**base, "y_a": 0.0})
    c1 = poly.evaluate({**base, "y_a": 1.0}) - c0
    forced = -c0 / c1
    assert abs(forced - Fraction(-7, 9)) < 1e-15
    for edge in THETA_EDGES:
        assert abs(ys[edge] - forced) < 1e-14


def test_theta_twists_match_finite_differences():
    rng = random.Random(11)
    h = 1e-6
    for _ in range(20):
        x = sample_theta_point(rng, subunit=True)
        ys = grad_log_y_theta(x).y
        for i, edge in enumerate(THETA_EDGES):
            up = list(x)
            dn = list(x)
            up[i] *= math.exp(h)
            dn[i] *= math.exp(-h)
            fd = (w_theta(tuple(up)) - w_theta(tuple(dn))) / (2.0 * h)
            assert abs(cmath.exp(fd) - ys[edge]) <= 1e-8 * abs(ys[edge])


def test_theta_twists_branch_independent():
    pts = [(0.2, 0.8, 0.8)]
    rng = random.Random(21)
    pts += [sample_theta_point(rng) for _ in range(20)]
    for x in pts:
        base = grad_log_y_theta(x).y
        for flip in (False, True):
            alt = _grad_log_y_theta_termwise(x, flip_negative_cut=flip)
            for edge in THETA_EDGES:
                assert abs(alt[edge] - base[edge]) <= 1e-12 * abs(base[edge])


def test_theta_twists_permutation_equivariant():
    rng = random.Random(13)
    for _ in range(30):
        xa, xb, xc = sample_theta_point(rng)
        ys = grad_log_y_theta((xa, xb, xc)).y
        swapped = grad_log_y_theta((xb, xa, xc)).y
        assert abs(ys["a"] - swapped["b"]) < 1e-13 * abs(ys["a"])


def test_theta_twists_singular_locus_raises():
    with pytest.raises(SingularPointError):
        grad_log_y_theta((1.0, 0.5, 0.5))


def test_check_residual_theta_symmetric_point():
    res = check_residual_theta((0.5, 0.5, 0.5))
    assert all(v <= 1e-10 for v in res.values())


def test_check_residual_theta_random_sweep():
    rng = random.Random(5)
    seen = 0
    for _ in range(100):
        x = tuple(rng.uniform(0.1, 0.9) for _ in range(3))
        res = check_residual_theta(x)
        vals = list(res.values())
        if any(v != v for v in vals):
            continue
        seen += 1
        assert max(vals) <= 1e-9
    assert seen >= 95


def test_check_residual_theta_skips_near_singular():
    res = check_residual_theta((0.999999999, 0.5, 0.5))
    assert all(v != v for v in res.values())


# -- tetrahedron potential and saddles --


def test_w_tet_trivial_point():
    assert abs(w_tet((1,) * 6, 1) - math.pi * math.pi) < 1e-13


def test_w_tet_against_termwise_oracle():
    x = (0.3, 0.4, 0.5, 0.6, 0.7, 0.2)
    z = 0.11 + 0.03j
    x1, x2, x12, x3, x4, x23 = x
    triples = [x1 * x2 * x12, x3 * x4 * x12, x1 * x4 * x23, x2 * x3 * x23]
    quads = [x1 * x2 * x3 * x4, x1 * x3 * x12 * x23, x2 * x4 * x12 * x23]

    def g_ref(u):
        lu = cmath.log(u)
        return -0.25 * lu * lu - complex(mpmath.polylog(2, u))

    ref = 1j * math.pi * cmath.log(z) + g_ref(z)
    ref -= sum(g_ref(z / p) for p in triples)
    ref -= sum(g_ref(r / z) for r in quads)
    got = w_tet(x, z)
    assert abs(got - ref) < 1e-13
    assert abs(got - (6.364129548442474 + 1.818407609653291j)) < 1e-12


def test_w_tet_slope_and_curvature_match_finite_differences():
    x = (0.3, 0.4, 0.5, 0.6, 0.7, 0.2)
    h = 1e-6
    for z in (0.11 + 0.03j, 0.05 - 0.02j, 0.2 + 0.1j):
        up = z * math.exp(h)
        dn = z * math.exp(-h)
        fd1 = (w_tet(x, up) - w_tet(x, dn)) / (2.0 * h)
        assert abs(fd1 - w_tet_slope(x, z)) <= 1e-7 * max(1.0, abs(fd1))
        fd2 = (w_tet_slope(x, up) - w_tet_slope(x, dn)) / (2.0 * h)
        assert abs(fd2 - w_tet_curvature(x, z)) <= 1e-6 * max(1.0, abs(fd2))


def test_saddle_balance_symbolic_degree_and_constant():
    # the quartic terms of the two four-fold products cancel identically and
    # so does the constant term: the balance is exactly z times a quadratic
    balance, _ = saddle_system()
    assert balance.degree_in("z") == 3
    coeffs = balance.coeffs_in("z")
    assert 0 not in coeffs
    assert 4 not in coeffs
    pt = {
        "x_1": Fraction(1, 3),
        "x_2": Fraction(2, 5),
        "x_12": Fraction(1, 2),
        "x_3": Fraction(3, 7),
        "x_4": Fraction(2, 3),
        "x_23": Fraction(1, 5),
        "z": Fraction(0),
    }
    assert balance.eval_fraction(pt) == 0


def test_saddle_cubic_matches_symbolic_balance():
    balance, _ = saddle_system()
    rng = random.Random(17)
    for _ in range(20):
        x = tuple(rng.uniform(0.2, 0.9) for _ in range(6))
        a, b, c, d = saddle_cubic_tet(x)
        pt = {"x_" + lab: x[i] for i, lab in enumerate(TET_EDGES)}
        for z in (0.3, 0.7, 1.3):
            ref = balance.evaluate({**pt, "z": z})
            got = a * z**3 + b * z**2 + c * z + d
            assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))


def test_saddle_cubic_symmetric_point():
    # at x = (t,...,t) with t = 1/2 the quadratic factor is
    # (2816 z^2 - 432 z + 17) / 4096 up to the overall -z
    a, b, c, d = saddle_cubic_tet((0.5,) * 6)
    assert d == 0
    scale = a / (-2816.0 / 4096.0)
    assert abs(scale - 1.0) < 1e-14
    assert abs(b - scale * (432.0 / 4096.0)) < 1e-14
    assert abs(c - scale * (-17.0 / 4096.0)) < 1e-14


def test_saddle_solve_symmetric_point():
    rec = saddle_solve_tet((0.5,) * 6)
    assert not rec.degenerate
    assert rec.z_roots[-1] == 0
    z0 = rec.z_roots[rec.chosen]
    assert abs(z0 - (0.07670454545454544 - 0.012383235635058715j)) < 1e-12
    assert z0.imag < 0
    assert rec.residual <= 1e-10
    assert rec.lattice_errors[rec.chosen] <= 1e-9
    w0 = w_tet((0.5,) * 6, z0)
    assert abs(w0 - (5.083672530512017 - 7.982830219499228j)) < 1e-11
    # conjugate pair: the discarded branch carries strictly smaller Re W
    other = [z for i, z in enumerate(rec.z_roots) if i != rec.chosen and z != 0][0]
    assert w_tet((0.5,) * 6, other).real < w0.real


def test_saddle_solve_random_points():
    rng = random.Random(2)
    for _ in range(20):
        x = sample_tet_point(rng)
        rec = saddle_solve_tet(x)
        assert not rec.degenerate
        assert rec.residual <= 1e-8
        assert rec.lattice_errors[rec.chosen] <= 1e-6
        point = {"x_" + lab: complex(v) for lab, v in zip(TET_EDGES, x)}
        point["y_1"] = rec.y1
        assert abs(tet_classical_A("1").poly.evaluate(point)) <= 1e-8


def test_saddle_solve_degenerate_report():
    rec = saddle_solve_tet((1,) * 6)
    assert rec.degenerate
    assert rec.z_roots == ()
    assert rec.chosen == -1
    assert math.isinf(rec.residual)


def test_saddle_twists_satisfy_all_six_curves():
    rng = random.Random(2)
    for _ in range(20):
        x = sample_tet_point(rng)
        rec = saddle_solve_tet(x)
        ys = saddle_twists_tet(x, rec.z_roots[rec.chosen]).y
        base = {"x_" + lab: complex(v) for lab, v in zip(TET_EDGES, x)}
        for edge in TET_EDGES:
            point = dict(base)
            point["y_" + edge] = ys[edge]
            assert abs(tet_classical_A(edge).poly.evaluate(point)) <= 1e-8


def test_summation_floor_sits_under_the_saddle():
    for t, gap_ref in ((0.5, 0.2429), (0.35, 0.3580)):
        x = (t,) * 6
        seg = tet_real_segment(x)
        assert seg is not None
        lo, hi = seg
        assert abs(lo - t**4) < 1e-12 and abs(hi - t**3) < 1e-12
        floor = tet_summation_floor(x)
        assert floor is not None
        zs, re_w = floor
        assert lo < zs < hi
        rec = saddle_solve_tet(x)
        gap = w_tet(x, rec.z_roots[rec.chosen]).real - re_w
        assert abs(gap - gap_ref) < 1e-3


# -- exact magnitude evaluators --


def test_log_abs_theta_matches_exact_evaluation():
    hb = -0.22
    v0 = complex(math.exp(hb / 2.0))
    for colors in ((2, 2, 2), (4, 6, 8), (10, 7, 5), (12, 12, 12)):
        exact = theta_invariant(*colors).eval_complex(v0, precision=60)
        assert abs(log_abs_theta(colors, hb) - math.log(abs(exact))) <= 1e-12


def test_log_abs_theta_rejects_inadmissible():
    with pytest.raises(ValueError):
        log_abs_theta((1, 1, 1), -0.1)


def test_log_abs_tet_matches_exact_evaluation():
    hb = -0.22
    v0 = complex(math.exp(hb / 2.0))
    for colors in (
        (2, 2, 2, 2, 2, 2),
        (4, 4, 4, 4, 4, 4),
        (6, 4, 8, 6, 4, 8),
        (10, 10, 10, 10, 10, 10),
    ):
        exact = tet_primed(TetColoring(*colors)).eval_complex(v0, precision=120)
        got, diag = log_abs_tet(colors, hb)
        assert abs(got - math.log(abs(exact))) <= 1e-12
        assert 0.0 < diag["cancellation"] <= 1.0
        assert diag["precision_bits"] >= 320


def test_log_abs_tet_survives_heavy_cancellation():
    # in the deep growth regime the surviving fraction is ~exp(-gap/|hbar|);
    # the ladder must keep enough bits for a trustworthy magnitude
    colors = (268, 269, 269, 268, 269, 269)
    got, diag = log_abs_tet(colors, -1.0 / 128.0)
    assert math.isfinite(got)
    assert diag["cancellation"] < 1e-15


def test_log_abs_tet_rejects_inadmissible():
    with pytest.raises(ValueError):
        log_abs_tet((1, 2, 2, 2, 2, 2), -0.1)


# -- color rounding --


def test_round_colors_theta_plain_and_repaired():
    colors, notes = round_colors_theta((0.5, 0.5, 0.5), -1.0 / 32.0)
    assert colors == (44, 44, 44)
    assert notes == ()
    colors, notes = round_colors_theta((0.5, 0.5, 0.5), -1.0 / 64.0)
    assert colors is not None
    assert is_admissible(*colors)
    assert sum(colors) == 265 or sum(colors) == 266
    assert any("adjust" in n for n in notes)
    assert sum(abs(c - 2.0 * math.log(0.5) / (-1.0 / 64.0)) for c in colors) <= 1.5


def test_round_colors_theta_trivial_point():
    colors, notes = round_colors_theta((0.999, 0.999, 0.999), -1.0 / 32.0)
    assert colors == (0, 0, 0)
    assert any("trivial" in n for n in notes)


def test_round_colors_theta_rejects_positive_hbar():
    with pytest.raises(ValueError):
        round_colors_theta((0.5, 0.5, 0.5), 0.1)


def test_round_colors_tet_plain_and_repaired():
    colors, notes = round_colors_tet((0.35,) * 6, -1.0 / 64.0)
    assert colors == (134,) * 6
    assert notes == ()
    colors, notes = round_colors_tet((0.35,) * 6, -1.0 / 32.0)
    assert colors is not None
    col = TetColoring(*colors)
    assert tet_is_admissible(col)
    assert any("adjust" in n for n in notes)
    assert sum(abs(c - 2.0 * math.log(0.35) / (-1.0 / 32.0)) for c in colors) <= 3.0


# -- growth tables --


def test_growth_check_theta_symmetric_point():
    table = growth_check_theta((0.5, 0.5, 0.5), (-1.0 / 32.0, -1.0 / 64.0, -1.0 / 128.0))
    assert isinstance(table, GrowthTable)
    assert table.graph == "theta"
    assert abs(table.target - (-1.0729035222567926)) < 1e-12
    assert len(table.rows) == 3
    assert table.monotone
    for ratio in table.error_ratios:
        assert 1.6 <= ratio <= 2.4
    assert table.richardson_rel_err <= 0.01
    errs = [r.error for r in table.rows]
    assert abs(errs[0] - (-0.036319)) < 2e-4
    assert abs(errs[1] - (-0.018163)) < 2e-4
    assert abs(errs[2] - (-0.009029)) < 2e-4


def test_growth_check_theta_trivial_row():
    table = growth_check_theta((0.999, 0.999, 0.999), (-1.0 / 32.0,))
    row = table.rows[0]
    assert row.colors == (0, 0, 0)
    assert row.scaled_log_abs == 0.0
    assert row.error != row.error
    assert any("trivial" in n for n in row.notes)


def test_growth_check_tet_symmetric_point():
    table = growth_check_tet((0.35,) * 6, (-1.0 / 32.0, -1.0 / 64.0, -1.0 / 128.0))
    assert table.graph == "tet"
    assert abs(table.target - 2.2164372196507123) < 1e-10
    assert table.monotone
    for ratio in table.error_ratios:
        assert 1.6 <= ratio <= 2.4
    assert table.richardson_rel_err <= 0.01
    for row in table.rows:
        assert any("cancellation" in n for n in row.notes)
        assert any("floor" in n for n in row.notes)


def test_growth_check_tet_reports_cancellation_scaling():
    # measured cancellation tracks exp(-gap/|hbar|) against the segment floor
    table = growth_check_tet((0.5,) * 6, (-1.0 / 64.0,))
    row = table.rows[0]
    note = next(n for n in row.notes if n.startswith("cancellation"))
    measured = float(note.split()[1])
    assert measured < 1e-5


def test_gx_self_check_first_order():
    table = gx_self_check(0.5, (-1.0 / 32.0, -1.0 / 64.0, -1.0 / 128.0, -1.0 / 256.0))
    assert table.monotone
    for ratio in table.error_ratios:
        assert 1.7 <= ratio <= 2.3
    assert table.richardson_rel_err <= 0.01
    # the surviving residual is hbar times a pinned slope:
    # -log(x)/4 + log(1-x)/2 at x = 1/2
    slope = -math.log(0.5) / 4.0 + 0.5 * math.log(0.5)
    for row in table.rows[-2:]:
        n = row.colors[0]
        x_eff = math.exp(row.hbar * n)
        want = row.hbar * (-math.log(x_eff) / 4.0 + 0.5 * math.log(1.0 - x_eff))
        assert abs(row.error - want) <= 2e-4
    assert abs(slope - (-0.17328679513998632)) < 1e-12


def test_gx_self_check_rejects_bad_regime():
    with pytest.raises(ValueError):
        gx_self_check(1.5, (-0.01,))


# -- Lagrangian condition --


def test_lagrangian_theta_symmetric_point():
    assert lagrangian_residual("theta", (0.5, 0.5, 0.5)) <= 1e-10


def test_lagrangian_theta_random_points():
    rng = random.Random(7)
    worst = 0.0
    for _ in range(50):
        x = sample_theta_point(rng)
        worst = max(worst, lagrangian_residual("theta", x, step=1e-5))
    assert worst <= 1e-6


def test_lagrangian_tet_random_points():
    rng = random.Random(7)
    worst = 0.0
    for _ in range(20):
        x = sample_tet_point(rng)
        worst = max(worst, lagrangian_residual("tet", x, step=1e-5))
    assert worst <= 1e-5


def test_lagrangian_rejects_unknown_graph():
    with pytest.raises(ValueError):
        lagrangian_residual("pentagon", (0.5, 0.5, 0.5))


# -- samplers --


def test_sample_theta_point_respects_constraints():
    rng = random.Random(1)
    for _ in range(50):
        x = sample_theta_point(rng, subunit=True)
        assert all(0.15 <= v <= 0.85 for v in x)
        xa, xb, xc = x
        args = (xa * xb * xc, xb * xc / xa, xa * xc / xb, xa * xb / xc, xa * xa, xb * xb, xc * xc)
        assert all(u <= 1.0 and abs(1 - u) >= 0.1 for u in args)


def test_sample_tet_point_respects_constraints():
    rng = random.Random(1)
    for _ in range(10):
        x = sample_tet_point(rng)
        rec = saddle_solve_tet(x)
        assert not rec.degenerate
        z = rec.z_roots[rec.chosen]
        assert abs(1 - z) >= 0.15 and abs(z) >= 1e-4


def test_samplers_deterministic():
    a = sample_theta_point(random.Random(42))
    b = sample_theta_point(random.Random(42))
    assert a == b
    c = sample_tet_point(random.Random(42))
    d = sample_tet_point(random.Random(42))
    assert c == d
