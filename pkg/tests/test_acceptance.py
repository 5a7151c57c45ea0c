"""Acceptance criteria, each at its stated tolerance, one summary line per criterion."""

import io
import itertools
import time

import numpy as np
import pytest

from dpsqed import basis, cli, diagram, difference, oscillatory, vertex
from dpsqed.diagram import DiagramSpec
from dpsqed.greens import kernels, scans
from dpsqed.quadrature import DEFAULT_QUAD


def test_criterion_01_orthonormality(acceptance_line):
    t = time.perf_counter()
    worst = float(basis.orthonormality_defects(30, DEFAULT_QUAD).max())
    elapsed = time.perf_counter() - t
    ok = worst < 1e-8 and elapsed < 10
    acceptance_line(1, "orthonormality", ok, f"max defect {worst:.2e} (< 1e-8), {elapsed:.2f}s (< 10s)")
    assert ok


def test_criterion_02_eigenrelation(acceptance_line):
    worst = 0.0
    for e in (0.1, 0.5, 1.0):
        v = basis.xi_table(51, e)
        d = difference.delta_sharp(difference.GridFunction(v)).values[:51]
        worst = max(worst, float(np.max(np.abs(d - 1j * e * v[:51]) / np.abs(v[:51]))))
    ok = worst < 1e-10
    acceptance_line(2, "eigenrelation", ok, f"max relative error {worst:.2e} (< 1e-10)")
    assert ok


def test_criterion_03_greens_property(acceptance_line):
    g, err = difference.greens_matrix(11, DEFAULT_QUAD)
    dg = difference.delta_sharp_array(g, axis=0)
    n = np.arange(11)
    worst_ratio = 0.0
    for nh in range(11):
        res = np.abs(dg[:11, nh] - (n == nh)).max()
        e = ((np.sqrt(n + 1) * err[n + 1, nh] + np.sqrt(n) * err[np.maximum(n - 1, 0), nh]) / np.sqrt(2)).max()
        worst_ratio = max(worst_ratio, res / e)
    ok = worst_ratio <= 10
    acceptance_line(3, "greens_property", ok, f"max residual / error estimate {worst_ratio:.2f} (<= 10)")
    assert ok


def test_criterion_04_toy_contrast(acceptance_line):
    L = [10.0, 100.0, 1000.0]
    e = 0.1
    lin = difference.perturb_linear_continuous(e, L)
    non = difference.perturb_nonlinear_continuous(e, 1.0, 0.5, L)
    nd = difference.perturb_nonlinear_discrete(e, 64)
    ld = difference.perturb_linear_discrete(e, 2, 64)
    exponents = [lin.growth_exponent, non.growth_exponent]
    vanish = max(np.abs(nd.orders[1].values[::2]).max(), np.abs(nd.orders[2].values).max())
    consts = [
        abs(ld.resummed()[0] - basis.xi_table(64, e)[0]) / e ** 3,
        lin.resummation_error / e ** 3,
        non.resummation_error / e ** 3,
    ]
    ok = all(abs(x - 2) <= 0.05 for x in exponents) and vanish < 1e-8 and max(consts) <= 5
    acceptance_line(
        4,
        "toy_contrast",
        ok,
        f"exponents {exponents[0]:.4f}, {exponents[1]:.4f} (2 +- 0.05); "
        f"discrete orders {vanish:.1e} (< 1e-8); O(e^3) constant {max(consts):.3f} (<= 5)",
    )
    assert ok


def test_criterion_05_distinctness(acceptance_line):
    rep = vertex.theorem_a1_distinctness(0, 1.0, 1.0, 10, DEFAULT_QUAD)
    target = abs(np.pi ** -0.5 * np.exp(-1) - np.pi ** -0.25 * np.exp(-2))
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(20):
        m = int(rng.integers(0, 11))
        p, q = rng.uniform(-3, 3, 2)
        r = vertex.pair_with_test_function(m, p, q, m + int(rng.integers(0, 6)), DEFAULT_QUAD)
        worst = max(worst, abs(r.value - basis.eval_xi(m, p) * basis.eval_xi(m, q)))
    gap_dev = abs(rep.difference - target)
    ok = gap_dev < 1e-4 and worst < DEFAULT_QUAD.tolerance
    acceptance_line(
        5, "distinctness", ok, f"gap {rep.difference:.6f} vs {target:.6f} (< 1e-4); pairing {worst:.1e} (< 1e-10)"
    )
    assert ok


def test_criterion_06_segment_sum(acceptance_line):
    dev = abs(oscillatory.segment_sum_sin(1.0, 0.5).accumulated.real - np.sqrt(np.pi / 2))
    ks = (0.5, 1.0, 2.0, 5.0)
    runs = [oscillatory.segment_sum_sin(k, 0.5) for k in ks]
    scaled = [r.accumulated.real * k ** 0.5 for r, k in zip(runs, ks)]
    spread = (max(scaled) - min(scaled)) / abs(np.mean(scaled))
    alt = all(r.alternation_verified for r in runs)
    theta = all(np.all((t > 0) & (t < 1)) for t in (oscillatory.mean_value_offsets(r, k, 0.5) for r, k in zip(runs, ks)))
    ok = dev < 1e-8 and spread < 1e-6 and alt and theta
    acceptance_line(
        6, "segment_sum", ok, f"deviation {dev:.1e} (< 1e-8); scaling spread {spread:.1e} (< 1e-6); alternation {alt}; theta {theta}"
    )
    assert ok


def test_criterion_07_tail_asymptotics(acceptance_line):
    devs = []
    for k, N in ((2.0, 400.0), (1.0, 100.0), (-1.0, 100.0), (0.5, 400.0), (1.0, 1e4), (3.0, 64.0)):
        assert abs(k) * np.sqrt(N) >= 10
        devs.append(oscillatory.compare_tail(k, N).modulus_deviation)
    Ns = [16, 64, 256, 1024]
    grid = [(0.7, 0.3, 0.2), (1.0, 1.0, 1.0), (0.2, 1.3, -0.4)]
    sups = [max(abs(vertex.sigma_N(*pt, N).smooth()) for pt in grid) for N in Ns]
    scal = [sups[i] / sups[0] * (Ns[i] / Ns[0]) ** 0.25 for i in range(len(Ns))]
    mono = all(b <= a for a, b in zip(sups, sups[1:]))
    ok = max(devs) <= 0.3 and all(abs(s - 1) <= 0.2 for s in scal) and mono
    acceptance_line(
        7,
        "tail_asymptotics",
        ok,
        f"max tail deviation {max(devs):.3f} (<= 0.3); N^-1/4 ratios {min(scal):.3f}..{max(scal):.3f} (1 +- 0.2); monotone {mono}",
    )
    assert ok


def test_criterion_08_power_counting(acceptance_line):
    e = diagram.kappa(DiagramSpec(2, 0, 2))
    p = diagram.kappa(DiagramSpec(0, 2, 2))
    specs = diagram.enumerate_feasible(12)
    gap = all(diagram.kappa(s) - diagram.kappa_hat(s) == 3 * (s.j - 1) for s in specs)

    def expected(s):
        if (s.E_F, s.E_B) == (0, 1):
            return diagram.FURRY
        return diagram.CONVERGES if 1.5 * s.E_F + s.E_B > 1 else diagram.DIVERGES

    verdict = all(diagram.converges(s) == expected(s) for s in specs)
    brute = {
        (ef, eb, j)
        for j in range(1, 7)
        for ef in range(0, 2 * j + 1, 2)
        for eb in range(0, j + 1)
        if (j - eb) % 2 == 0
    }
    listed = [(s.E_F, s.E_B, s.j) for s in diagram.enumerate_feasible(6)]
    enum = set(listed) == brute and len(listed) == len(brute)
    ok = e == -2 and p == -1 and gap and verdict and enum
    acceptance_line(8, "power_counting", ok, f"kappa {e}, {p}; gap law {gap}; verdicts {verdict}; enumeration {enum} ({len(listed)})")
    assert ok


def test_criterion_09_propagator_anchor(acceptance_line):
    d = kernels.dplus_coincidence(DEFAULT_QUAD)
    dev = abs(d + 1j * np.sqrt(np.pi))
    finite = all(
        kernels.potential_greens(n, n, DEFAULT_QUAD).converged and kernels.kg_coincidence_spatial(n, 1.0, DEFAULT_QUAD).converged
        for n in itertools.product(range(5), repeat=3)
    )
    ok = dev < 1e-6 and finite
    acceptance_line(
        9, "propagator_anchor", ok, f"D+ = {d.real:.3g}{d.imag:+.10f}i, |D+ + i sqrt(pi)| = {dev:.4f} (< 1e-6); finite {finite}"
    )
    assert ok


def test_criterion_10_divergence_contrast(acceptance_line):
    t = time.perf_counter()
    a = scans.cutoff_scan_A()
    ta = time.perf_counter() - t
    t = time.perf_counter()
    ph = scans.cutoff_scan_continuous_photon()
    tp = time.perf_counter() - t
    ok = -0.5 < a.fit.degree < 0.5 and a.fit.log_coefficient != 0 and 1.5 < ph.fit.degree < 2.5 and max(ta, tp) < 300
    acceptance_line(
        10,
        "divergence_contrast",
        ok,
        f"A degree {a.fit.degree:.4f} log coef {a.fit.log_coefficient:.3f}; photon degree {ph.fit.degree:.4f}; "
        f"{ta:.1f}s, {tp:.1f}s (< 300s)",
    )
    assert ok


def test_criterion_11_determinism(acceptance_line, tmp_path):
    outputs = []
    for run in ("a", "b"):
        target = tmp_path / run
        code = cli.dispatch(["repro", "--all", "--out", str(target)], stdout=io.StringIO(), stderr=io.StringIO())
        assert code == 0
        outputs.append({p.name: p.read_bytes() for p in sorted(target.iterdir())})
    same = outputs[0] == outputs[1] and len(outputs[0]) == 11
    acceptance_line(11, "determinism", same, f"{len(outputs[0])} files byte-identical: {same}")
    assert same
