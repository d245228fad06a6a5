"""Acceptance suite: one test per criterion, each printing a pass/fail line
with its runtime.  Run with `pytest tests/test_acceptance.py -v -s`.
"""

import math
import time

import numpy as np

import pbl
from pbl import (
    ConstantModel,
    GAUSSIAN_SPEC,
    Model,
    ModelPoint,
    OrbitSource,
    apply,
    ball_form,
    cayley_gamma23,
    cocompact_bound,
    counting_function,
    counting_upper_bound,
    curvature_determinant,
    cusp_bound,
    cusp_lattice_sum,
    cusp_term_log,
    distance,
    gamma_integral_chain,
    maxima_locate,
    min_displacement,
    model2_form,
    model3_form,
    orbit_cosh_power_sum,
    random_isometry,
    scaling_fit,
    stabilizer_matrix,
    verify_isometry,
)
from pbl.lattice import HeisenbergParam
from pbl.transforms import _GAMMA3, _GAMMA23


class _Timer:
    def __init__(self, budget):
        self.budget = budget

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        return False


def _report(idx, label, timer, detail=""):
    print(f"ACCEPTANCE {idx} [{label}]: PASS ({timer.elapsed:.2f}s){' ' + detail if detail else ''}")
    assert timer.elapsed < timer.budget, f"runtime {timer.elapsed:.2f}s over budget {timer.budget}s"


def test_criterion_1_cayley_and_conjugation():
    with _Timer(1.0) as t:
        h, h2, h3 = ball_form(2), model2_form(), model3_form()
        assert verify_isometry(_GAMMA23, h3, h2) <= 1e-12
        assert verify_isometry(_GAMMA3, h, h3) <= 1e-12

        rng = np.random.default_rng(100)
        g23 = np.array(_GAMMA23)
        g23_inv = np.linalg.inv(g23)
        worst = 0.0
        for _ in range(100):
            p = HeisenbergParam(complex(rng.normal(), rng.normal()), float(rng.normal()))
            m2 = stabilizer_matrix(p, Model.M2).mat
            m3 = stabilizer_matrix(p, Model.M3).mat
            worst = max(worst, float(np.abs(g23 @ m2 @ g23_inv - m3).max()))
        assert worst <= 1e-12
    _report(1, "cayley identities", t, f"conjugation residual {worst:.2e}")


def test_criterion_2_distance_invariance():
    with _Timer(10.0) as t:
        rng = np.random.default_rng(200)
        form = ball_form(2)
        worst = 0.0
        for s in range(1000):
            g = random_isometry(form, s)
            pts = []
            for _ in range(2):
                v = rng.normal(size=2) + 1j * rng.normal(size=2)
                v *= rng.uniform(0.02, 0.8) / np.linalg.norm(v)
                pts.append(ModelPoint.ball(v))
            z, w = pts
            worst = max(worst, abs(distance(apply(g, z), apply(g, w)) - distance(z, w)))
        assert worst <= 1e-9

        cay = cayley_gamma23()
        worst_x = 0.0
        for _ in range(200):
            zs = []
            for _ in range(2):
                z2 = complex(rng.normal(), rng.normal()) * 0.7
                y1 = abs(z2) ** 2 / 2 + rng.uniform(0.1, 3.0)
                zs.append(ModelPoint.m2(complex(rng.normal(), y1), z2))
            z, w = zs
            worst_x = max(
                worst_x, abs(distance(z, w) - distance(apply(cay, z), apply(cay, w)))
            )
        assert worst_x <= 1e-9
    _report(2, "distance invariance", t, f"worst {worst:.2e}, cross-model {worst_x:.2e}")


def test_criterion_3_curvature_determinant():
    with _Timer(5.0) as t:
        rng = np.random.default_rng(300)
        worst = 0.0
        for n in (2, 3):
            target = (4 * math.pi) ** -n
            for _ in range(20):
                v = rng.normal(size=n) + 1j * rng.normal(size=n)
                v *= rng.uniform(0.05, 0.75) / np.linalg.norm(v)
                det = curvature_determinant(ModelPoint.ball(v))
                worst = max(worst, abs(det - target) / target)
        assert worst <= 1e-4
    _report(3, "curvature determinant", t, f"worst relative error {worst:.2e}")


def test_criterion_4_maximum_set():
    with _Timer(5.0) as t:
        worst = 0.0
        for k in (6, 10, 20, 50):
            p = maxima_locate(k, tol=1e-6)
            x_star = k / (4 * math.pi)
            worst = max(worst, abs(p.coords[0].real + x_star) / x_star, abs(p.coords[1]))
        assert worst <= 1e-6
    _report(4, "maximum set", t, f"worst deviation {worst:.2e}")


def test_criterion_5_counting():
    with _Timer(30.0) as t:
        k = 6
        z = ModelPoint.m3(complex(-k / (4 * math.pi), 0.0), 0.0)
        src = OrbitSource.from_lattice(GAUSSIAN_SPEC)
        rx = min_displacement(src, z)

        # independent oracle: closed-form displacement over |m|,|n|,|l| <= 50
        a0 = k / (2 * math.pi)
        m = np.arange(-50, 51)
        s2 = (m[:, None] ** 2 + m[None, :] ** 2).ravel()
        a = a0 + s2 / 2.0
        l = np.arange(-50, 51)
        cosh2 = ((a[:, None] ** 2 + l[None, :] ** 2) / a0**2).ravel()

        for delta in np.linspace(0.0, 4.0, 9):
            brute = int(np.count_nonzero(cosh2 <= math.cosh(delta / 2.0) ** 2))
            counted = counting_function(src, z, z, float(delta))
            assert counted == brute, (delta, counted, brute)
            assert counting_upper_bound(2, rx, float(delta)) >= counted
    _report(5, "counting vs brute force", t, f"r_x {rx:.4f}")


def test_criterion_6_gamma_chain():
    with _Timer(10.0) as t:
        ratios = []
        for k in (6, 8, 12, 20):
            gc = gamma_integral_chain(k)
            assert abs(gc.beta_ratio - 1.0) <= 1e-8
            ratios.append(gc.r_ratio)
        spread = max(ratios) - min(ratios)
        assert spread <= 1e-6
    _report(6, "gamma chain", t, f"r-integral constant {ratios[0]:.12f}, spread {spread:.2e}")


def test_criterion_7_lattice_sum():
    with _Timer(60.0) as t:
        res = cusp_lattice_sum(6, GAUSSIAN_SPEC, rel_tol=1e-8)
        got = res.value.to_float()

        # direct double-truncated oracle over |m|,|n| <= 200, |l| <= 4000
        k = 6
        a0 = k / (2 * math.pi)
        m = np.arange(-200, 201)
        s2 = (m[:, None] ** 2 + m[None, :] ** 2).ravel()
        counts = np.bincount(s2)
        svals = np.nonzero(counts)[0]
        w = counts[svals].astype(float)
        av = a0 + svals / 2.0
        l = np.arange(-4000, 4001)
        brute = 0.0
        for i in range(0, av.size, 512):
            ai = av[i : i + 512][:, None]
            wi = w[i : i + 512][:, None]
            brute += float(
                (wi * np.exp(k * math.log(a0) - 3.0 * np.log(ai**2 + l[None, :] ** 2))).sum()
            )
        assert abs(got - brute) <= 1e-8 * brute

        for kk in (6, 8, 12):
            r = cusp_lattice_sum(kk, GAUSSIAN_SPEC, rel_tol=1e-8)
            majorant = math.exp(cusp_term_log(kk, ConstantModel(1.0, 0), 1.0))
            assert r.value.to_float() <= majorant
    _report(7, "lattice sum", t, f"sum {got:.12f} vs brute {brute:.12f}")


def test_criterion_8_exponents():
    with _Timer(120.0) as t:
        ks = list(range(50, 401, 25))
        cm = ConstantModel(1.0, 2)
        r_x = 6.0

        fit_cc = scaling_fit(ks, lambda k: cocompact_bound(2, k, r_x, cm).total)
        assert abs(fit_cc.slope - 2.0) <= 0.02

        reports = {k: cusp_bound(k, r_x, cm, GAUSSIAN_SPEC, rel_tol=1e-6) for k in ks}
        fit_cusp = scaling_fit(ks, lambda k: reports[k].total)
        assert abs(fit_cusp.slope - 2.5) <= 0.05

        def iso(k):
            return reports[k].terms["cusp_term"].log() - math.log(cm(k)) - 1.5 * math.log(k)

        r100 = cusp_bound(100, r_x, cm, GAUSSIAN_SPEC, rel_tol=1e-6)
        halving = math.exp(
            (r100.terms["cusp_term"].log() - math.log(cm(100)) - 1.5 * math.log(100)) - iso(50)
        )
        assert abs(halving - 0.5) <= 0.05
    _report(
        8,
        "exponents",
        t,
        f"cocompact {fit_cc.slope:.4f}, cusp {fit_cusp.slope:.4f}, halving {halving:.4f}",
    )


def test_criterion_9_covers_stability():
    with _Timer(10.0) as t:
        k = 8
        z = ModelPoint.m3(complex(-k / (4 * math.pi), 0.0), 0.0)
        box = [
            (m, n, l)
            for m in range(-3, 4)
            for n in range(-3, 4)
            for l in range(-3, 4)
        ]
        full = [stabilizer_matrix(GAUSSIAN_SPEC.param(*i), Model.M3) for i in box]
        sub_idx = [i for i in box if all(c % 2 == 0 for c in i)]
        sub = [stabilizer_matrix(GAUSSIAN_SPEC.param(*i), Model.M3) for i in sub_idx]

        # termwise: every subgroup term appears identically in the full list
        def term(g):
            return pbl.cosh2_half_distance(z, apply(g, z)) ** (-k / 2.0)

        full_terms = {i: term(g) for i, g in zip(box, full)}
        for i, g in zip(sub_idx, sub):
            assert term(g) == full_terms[i]

        s_full = orbit_cosh_power_sum(full, z, k)
        s_sub = orbit_cosh_power_sum(sub, z, k)
        assert s_sub <= s_full
        assert math.fsum(term(g) for g in sub) <= math.fsum(term(g) for g in full)
    _report(9, "covers stability", t, f"sub {s_sub.to_float():.6f} <= full {s_full.to_float():.6f}")
