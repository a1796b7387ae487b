"""Acceptance suite: every exit criterion at its stated tolerance.

Each test prints exactly one PASS/FAIL line, so running

    pytest tests/test_acceptance.py -v -s

gives a criterion-by-criterion verdict. All randomness is seeded through the
library's own counter generator.
"""

import math
import time

import numpy as np
import pytest

import schurhorn as sh
from schurhorn.errors import MajorizationViolated
from schurhorn.rng import CounterRNG


def conclude(name: str, ok: bool, detail: str = ""):
    line = f"{'PASS' if ok else 'FAIL'}: {name}"
    if detail:
        line += f"  [{detail}]"
    print(line)
    assert ok, line


def embed2(g: sh.GivensParams) -> np.ndarray:
    c, s = math.cos(g.theta), math.sin(g.theta)
    return np.array(
        [
            [np.exp(1j * g.phi) * c, np.exp(1j * g.psi) * s],
            [-np.exp(-1j * g.psi) * s, np.exp(-1j * g.phi) * c],
        ]
    )


def spread_spectrum(d, rng, scale):
    d = np.sort(np.asarray(d, dtype=float))
    h = np.array([rng.uniform(-1, 1) for _ in range(d.size)])
    h -= h.mean()
    h.sort()
    return d + scale * h


def slope_of(eps, values):
    return float(np.polyfit(np.log(eps), np.log(values), 1)[0])


def test_two_by_two_correction_exactness():
    """10^4 random feasible 2x2 problems, real and complex."""
    rng = CounterRNG(1001)
    worst_entry = 0.0
    worst_trace = 0.0
    done = 0
    while done < 10_000:
        complex_off = done % 2 == 1
        b11 = rng.uniform(-3, 3)
        b22 = rng.uniform(-3, 3)
        if complex_off:
            b12 = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        else:
            b12 = rng.uniform(-2, 2)
        if rng.uniform() < 0.5:
            d1 = rng.uniform(min(b11, b22), max(b11, b22))
        else:
            d1 = b11 + rng.uniform(-0.5, 0.5)
        p = sh.TwoByTwoProblem(b11, b22, b12, d1, b11 + b22 - d1)
        r = complex(b12).real if (complex(b12).real != 0 or complex(b12).imag == 0) else -complex(b12).imag
        if r * r - (b22 - d1) * (b11 - d1) < 0:
            continue
        g = (
            sh.solve_correction_angle_hermitian(p)
            if complex_off
            else sh.solve_correction_angle(sh.TwoByTwoProblem(b11, b22, float(np.real(b12)), d1, p.d2))
        )
        b = np.array([[b11, b12], [np.conj(b12), b22]], dtype=complex)
        u = embed2(g)
        out = u @ b @ u.conj().T
        scale = p.scale
        worst_entry = max(worst_entry, abs(out[0, 0] - d1) / scale)
        worst_trace = max(worst_trace, abs((out[0, 0] + out[1, 1]) - (b11 + b22)) / scale)
        done += 1
    conclude(
        "two-by-two exactness over 10^4 feasible problems",
        worst_entry <= 1e-11 and worst_trace <= 1e-12,
        f"entry {worst_entry:.2e}, trace {worst_trace:.2e}",
    )


def test_exponent_table_real_and_complex():
    """Angle/correction-size exponents per scenario row, both kinds, < 10 s."""
    start = time.time()
    grid = np.array([10.0 ** (-2 - k) for k in range(7)])
    rows = {
        "coupling-nonzero": (1, 1, "nz", 0.0, 1.0, 1.0, 1.0),
        "zero-coupling-distinct": (1, 1, "z", 0.0, 1.0, 0.5, 0.5),
        "zero-coupling-equal-fast": (2, 1, "z", 0.5, 0.5, 0.5, 1.5),
        "zero-coupling-equal-slow": (1, 2, "z", 0.5, 0.5, 0.0, 1.0),
    }
    failures = []
    for name, (alpha, beta, off, d1, d2, gamma, delta) in rows.items():
        for complex_off in (False, True):
            thetas, dists = [], []
            for eps in grid:
                f, gg = eps**alpha, eps**beta
                if off == "nz":
                    b12 = (1.0 + 0.5j) if complex_off else 1.0
                else:
                    b12 = 0j if complex_off else 0.0
                p = sh.TwoByTwoProblem(d1 - f, d2 + gg, b12, d1, d2)
                g = (
                    sh.solve_correction_angle_hermitian(p)
                    if complex_off
                    else sh.solve_correction_angle(p)
                )
                b = np.array([[p.b11, p.b12], [np.conj(p.b12), p.b22]], dtype=complex)
                u = embed2(g)
                thetas.append(abs(g.theta))
                dists.append(np.linalg.norm(u @ b @ u.conj().T - b))
            st = slope_of(grid, thetas)
            sd = slope_of(grid, dists)
            if abs(st - gamma) > 0.05 or abs(sd - delta) > 0.05:
                failures.append(f"{name} complex={complex_off}: theta {st:.3f}, dist {sd:.3f}")
    # purely imaginary order-one coupling exercises the phased branch
    thetas, dists = [], []
    for eps in grid:
        p = sh.TwoByTwoProblem(-eps, 1.0 + eps, 1j, 0.0, 1.0)
        g = sh.solve_correction_angle_hermitian(p)
        b = np.array([[p.b11, p.b12], [np.conj(p.b12), p.b22]], dtype=complex)
        u = embed2(g)
        thetas.append(abs(g.theta))
        dists.append(np.linalg.norm(u @ b @ u.conj().T - b))
    if abs(slope_of(grid, thetas) - 1.0) > 0.05 or abs(slope_of(grid, dists) - 1.0) > 0.05:
        failures.append("imaginary coupling row")
    elapsed = time.time() - start
    conclude(
        "angle and correction-size exponents match the scenario table",
        not failures and elapsed < 10.0,
        f"{elapsed:.2f} s" + ("; " + "; ".join(failures) if failures else ""),
    )


def test_diagonal_construction_residuals_and_rate():
    """500 random admissible targets, then the adversarial sqrt-eps sweep."""
    rng = CounterRNG(2002)
    worst_diag = 0.0
    worst_spec = 0.0
    for _ in range(500):
        n = 2 + rng.randint(7)
        d = np.array([rng.uniform(-4, 4) for _ in range(n)])
        if rng.uniform() < 0.3:
            d[rng.randint(n)] = d[rng.randint(n)]  # repeated targets
        amp = 10.0 ** (-4 * rng.uniform())
        lam = spread_spectrum(d, rng, amp)
        cert = sh.correct_diagonal(d, lam)
        scale = 1.0 + max(np.max(np.abs(d)), np.max(np.abs(lam)))
        worst_diag = max(worst_diag, cert.diag_residual / scale)
        worst_spec = max(worst_spec, cert.spectrum_residual / scale)
    slopes = []
    for seed in (5, 17):
        cfg = sh.SweepConfig(
            family="diagonal-distinct", n=6, trials_per_eps=3, seed=seed,
            perturbation_style="adversarial",
        )
        slopes.append(sh.epsilon_sweep(cfg).fitted_slope)
    ok = (
        worst_diag <= 1e-10
        and worst_spec <= 1e-8
        and all(0.45 <= s <= 0.55 for s in slopes)
    )
    conclude(
        "diagonal construction: residuals on 500 instances and sqrt-eps rate",
        ok,
        f"diag {worst_diag:.2e}, spec {worst_spec:.2e}, slopes {[round(s, 3) for s in slopes]}",
    )


def test_connected_correction_linear_rate():
    """Connected-pattern sweeps: linear rate, clean residuals, edges persist."""
    slopes = []
    worst_diag = 0.0
    worst_spec = 0.0
    edge_failures = 0
    for seed in (1, 2, 3):
        cfg = sh.SweepConfig(
            family="irreducible", n=6, trials_per_eps=3, seed=seed,
            perturbation_style="generic",
        )
        res = sh.epsilon_sweep(cfg)
        slopes.append(res.fitted_slope)
        for r in res.records:
            if r.eps <= 1e-3 and r.status == "EdgeVanished":
                edge_failures += 1
            if r.status == "ok":
                worst_diag = max(worst_diag, r.diag_resid)
                worst_spec = max(worst_spec, r.spec_resid)
    ok = (
        all(0.9 <= s <= 1.1 for s in slopes)
        and edge_failures == 0
        and worst_diag <= 1e-10 * 10
        and worst_spec <= 1e-8 * 10
    )
    conclude(
        "connected corrections: linear rate, residuals, no vanished edges",
        ok,
        f"slopes {[round(s, 3) for s in slopes]}, diag {worst_diag:.2e}, spec {worst_spec:.2e}",
    )


def test_decomposition_window_order_and_reassembly():
    """500 random block-structured matrices: ordered windows, exact reassembly."""
    rng = CounterRNG(3003)
    ordered = True
    exact = True
    for _ in range(500):
        pieces = []
        shift = 0.0
        for _ in range(2 + rng.randint(3)):
            m = 1 + rng.randint(3)
            if m == 1:
                pieces.append(np.array([[rng.uniform(-1, 1) + shift]]))
            else:
                blk = np.zeros((m, m))
                for i in range(m):
                    blk[i, i] = rng.uniform(-0.5, 0.5) + shift
                for k in range(1, m):
                    j = rng.randint(k)
                    blk[k, j] = blk[j, k] = rng.uniform(0.5, 1.0)
                pieces.append(blk)
            shift += rng.uniform(0.0, 3.0)
        n = sum(p.shape[0] for p in pieces)
        full = np.zeros((n, n))
        at = 0
        for p in pieces:
            full[at : at + p.shape[0], at : at + p.shape[0]] = p
            at += p.shape[0]
        order = list(range(n))
        rng.shuffle(order)
        a = sh.DenseHermitian.from_dense(full[np.ix_(order, order)])
        part = sh.block_decompose(a)
        scale = 1.0 + a.norm_fro()
        for b1, b2 in zip(part.blocks, part.blocks[1:]):
            if b1.window.hi > b2.window.lo + 1e-12 * scale:
                ordered = False
        dense = a.to_dense()
        p = part.permutation
        ap = dense[np.ix_(p, p)]
        rebuilt = np.zeros_like(dense)
        for b in part.blocks:
            rebuilt[b.start : b.stop, b.start : b.stop] = ap[b.start : b.stop, b.start : b.stop]
        rank = np.empty(n, dtype=int)
        rank[p] = np.arange(n)
        if not np.array_equal(rebuilt[np.ix_(rank, rank)], dense):
            exact = False
    conclude(
        "decomposition: 500 instances with ordered windows and exact reassembly",
        ordered and exact,
        f"ordered={ordered}, exact={exact}",
    )


def test_end_to_end_mixed_families():
    """Full pipeline on mixed-block families, real and complex."""
    all_valid = True
    slope_notes = []
    slope_ok = True
    for fam in ("mixed-block", "hermitian-mixed-block"):
        cfg = sh.SweepConfig(
            family=fam, n=6, trials_per_eps=3, seed=4, perturbation_style="adversarial"
        )
        res = sh.epsilon_sweep(cfg)
        g1 = {}
        g2 = {}
        root = CounterRNG(cfg.seed)
        for trial in range(cfg.trials_per_eps):
            inst_rng = root.spawn(2 * trial)
            dir_rng = root.spawn(2 * trial + 1)
            inst = sh.gen_instance(cfg.family, cfg.n, inst_rng.u64())
            h = inst.direction(cfg.perturbation_style, dir_rng)
            for eps in cfg.eps_grid:
                lam = inst.lam_at(h, eps)
                if fam.startswith("hermitian"):
                    cert = sh.schur_horn_correct_hermitian(inst.matrix, lam)
                else:
                    cert = sh.schur_horn_correct(inst.matrix, lam)
                if not sh.validate_certificate(inst.matrix, lam, cert).all_ok:
                    all_valid = False
                g1.setdefault(eps, []).append(cert.gnorm_pre)
                g2.setdefault(eps, []).append(cert.gnorm_post)
        eps_sorted = sorted(g1, reverse=True)
        for label, series in (("pre", g1), ("post", g2)):
            med = np.array([np.median(series[e]) for e in eps_sorted])
            if med.max() <= 1e-12:
                continue  # factor identically zero for this family
            s = slope_of(np.array(eps_sorted), med)
            slope_notes.append(f"{fam}/{label}={s:.3f}")
            if s < 0.45:
                slope_ok = False

    # residual parity between the two pipelines on real-valued input
    inst = sh.gen_instance("mixed-block", 6, 12)
    h = inst.direction("generic", CounterRNG(3))
    lam = inst.lam_at(h, 1e-5)
    cert_r = sh.schur_horn_correct(inst.matrix, lam)
    a_h = sh.DenseHermitian.from_dense(inst.matrix.to_dense().astype(complex), kind=sh.KIND_HERM)
    cert_h = sh.schur_horn_correct_hermitian(a_h, lam)
    parity = (
        abs(cert_r.diag_residual - cert_h.diag_residual) <= 1e-10
        and abs(cert_r.spectrum_residual - cert_h.spectrum_residual) <= 1e-10
        and abs(cert_r.distance_to_original - cert_h.distance_to_original) <= 1e-10
    )
    conclude(
        "end-to-end pipeline: validations, factor-norm rates, kind parity",
        all_valid and slope_ok and parity,
        f"valid={all_valid}, slopes {slope_notes}, parity={parity}",
    )


def test_violations_break_exactly_the_targeted_sum():
    """Generated perturbations violate the chosen inequality and are rejected."""
    rng = CounterRNG(4004)
    ok = True
    cases = 0
    while cases < 60:
        n = 2 + rng.randint(5)
        values = sorted(rng.uniform(-2, 2) for _ in range(1 + rng.randint(2)))
        lam = np.sort(np.array([values[rng.randint(len(values))] for _ in range(n)]))
        if lam[-1] - lam[0] <= 1e-9:
            continue
        d = lam.copy()  # every partial sum tight
        i = rng.randint(n - 1)
        eps = 10.0 ** (-2 - 3 * rng.uniform())
        lt = sh.gen_violation_perturbation(lam, d, i, eps)
        tau = sh.check_majorization(lam, d).tau_maj
        # independent expected overshoot from the multiplicity structure
        if lam[i] < lam[-1] - tau:
            group = np.abs(lam - lam[i]) <= tau
            expected = np.count_nonzero(group[: i + 1]) * eps
        else:
            expected = (n - 1 - i) * eps
        rep = sh.check_majorization(lt, d)
        if rep.holds or abs(rep.k_slacks[i] + expected) > 1e-10 * (1 + expected):
            ok = False
        try:
            sh.correct_diagonal(d, lt)
            ok = False
        except MajorizationViolated:
            pass
        try:
            sh.schur_horn_correct(sh.DenseHermitian.from_diag(d), lt)
            ok = False
        except MajorizationViolated:
            pass
        cases += 1
    remark_ok = True
    for eps in [10.0 ** (-2 - k) for k in range(7)]:
        lt = np.array([1.0 + eps, 2.0 - eps])
        try:
            sh.correct_diagonal([1.0, 2.0], lt)
            remark_ok = False
        except MajorizationViolated as err:
            remark_ok = remark_ok and err.index == 0
        try:
            sh.schur_horn_correct(sh.DenseHermitian.from_diag([1.0, 2.0]), lt)
            remark_ok = False
        except MajorizationViolated:
            pass
    conclude(
        "violation generators break the targeted inequality and are rejected",
        ok and remark_ok,
        f"generated={ok}, two-point family={remark_ok}",
    )


def test_window_measure_positive_for_connected():
    """500 random connected matrices of size >= 2 have spread spectra."""
    rng = CounterRNG(5005)
    worst = np.inf
    for _ in range(500):
        n = 2 + rng.randint(7)
        m = np.zeros((n, n))
        for i in range(n):
            m[i, i] = rng.uniform(-1, 1)
        order = list(range(n))
        rng.shuffle(order)
        for k in range(1, n):
            a, b = order[k], order[rng.randint(k)]
            m[a, b] = m[b, a] = rng.uniform(0.3, 1.5) * (1 if rng.uniform() < 0.5 else -1)
        w = sh.spectrum_window(sh.DenseHermitian.from_dense(m))
        worst = min(worst, w.measure / (1e-12 * (1.0 + np.linalg.norm(m))))
    conclude(
        "window measure positive on 500 connected matrices",
        worst > 1.0,
        f"min measure / threshold = {worst:.2e}",
    )


def test_class_distance_bound_stable_over_decades():
    """Sampled class-to-class distances stay below a stable sqrt-eps multiple."""
    d = np.array([1.0, 2.0, 3.0])
    lam = np.array([0.7, 2.0, 3.3])
    zero = sh.hausdorff_upper_bound(lam, lam, d, samples=4, seed=1)
    ratios = []
    for eps in (1e-2, 1e-4, 1e-6, 1e-8):
        lam2 = lam + eps * np.array([-1.0, 0.0, 1.0])
        bound = sh.hausdorff_upper_bound(lam, lam2, d, samples=4, seed=1)
        ratios.append(bound / math.sqrt(float(np.linalg.norm(lam2 - lam))))
    ok = zero <= 1e-10 and max(ratios) <= 4.0
    conclude(
        "class-distance surrogate: zero at equality, bounded by C sqrt(eps)",
        ok,
        f"zero={zero:.2e}, max C={max(ratios):.3f}",
    )
