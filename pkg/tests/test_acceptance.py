"""End-to-end acceptance gate.

Each test covers one numbered acceptance criterion, prints a single
PASS/FAIL line (visible under ``pytest -s``), and enforces the stated
tolerances and time budgets.  Run ``pytest tests/test_acceptance.py -v -s``
to see the lines.
"""

import time

import numpy as np
import pytest

from analytic_pr import (
    CASE1,
    CASE2,
    CASE3,
    CircleSystem,
    DegenerateGeometry,
    InvalidWindow,
    MeasurementSet,
    RecoveryConfig,
    StftParams,
    Window,
    WindowSet,
    analytic_from_real,
    canonicalize,
    hilbert,
    hilbert_matrix,
    im_ratio,
    instantaneous_frequency,
    is_analytic,
    make_case1_window,
    make_case2_windows,
    make_case3_windows,
    measure,
    measurement_count,
    measurement_plan,
    recover,
    run_trial,
    sample_generic,
    solve_three_circles,
    stft_magnitude,
    stft_magnitude_spectral,
    suggest_shift,
    up_to_sign_error,
    validate_for_case,
    validate_m_triple,
)
from analytic_pr import recovery as recovery_module
from oracles import wrap_distance


def _finish(label: str, ok: bool, detail: str) -> None:
    print(f"{label}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"{label}: {detail}"


def _params(n: int) -> StftParams:
    return StftParams(n=n, shift=suggest_shift(n), m_triple=(0, 1, 2))


def _pipeline(case: str, n: int, seed: int):
    params = _params(n)
    z = sample_generic(n, 2 * seed)
    rng = np.random.default_rng(2 * seed + 1)
    if case == CASE1:
        windows = make_case1_window(n, 3, int(rng.integers(n)), seed=rng)
        plan = measurement_plan(case, n, 3, windows.zero_run_start, params)
    elif case == CASE2:
        windows = make_case2_windows(n, int(rng.integers(n)), seed=rng)
        plan = measurement_plan(case, n, zero_run_start=windows.zero_run_start,
                                params=params)
    else:
        windows = make_case3_windows(n, seed=rng)
        plan = measurement_plan(case, n, params=params)
    meas = measure(z, windows, plan, params)
    return z, windows, meas, RecoveryConfig(params=params)


def test_criterion_1_plan_sizes():
    t0 = time.perf_counter()
    checked = 0
    for n in range(4, 65):
        params = _params(n)
        half = n // 2
        p1 = measurement_plan(CASE1, n, 2, 0, params)
        assert len(p1.entries) == 3 * half + 1 == measurement_count(CASE1, n)
        p2 = measurement_plan(CASE2, n, zero_run_start=0, params=params)
        assert len(p2.entries) == 3 * half + 1 == measurement_count(CASE2, n)
        checked += 2
        if n % 2 == 0:
            p3 = measurement_plan(CASE3, n, params=params)
            assert len(p3.entries) == 3 * n // 2 - 1 == measurement_count(CASE3, n)
            checked += 1
    elapsed = time.perf_counter() - t0
    _finish(
        "criterion 1 (plan sizes)",
        elapsed < 1.0,
        f"{checked} plans over N in [4,64] sized exactly ({elapsed:.2f}s < 1s)",
    )


def test_criterion_2_recovery_success_rates():
    t0 = time.perf_counter()
    trials = 500
    cells = [(case, n) for case in (CASE1, CASE2) for n in (6, 7, 8, 13, 16, 32)]
    cells += [(CASE3, n) for n in (6, 8, 16, 32)]
    worst_rate, worst_cell = 1.0, None
    max_ok_error = 0.0
    silent_wrong = 0
    named_failures = 0
    for idx, (case, n) in enumerate(cells):
        base = 1000 * idx
        good = 0
        for t in range(trials):
            rec = run_trial(case, n, base + t)
            if rec.status == "ok":
                max_ok_error = max(max_ok_error, rec.error)
                if rec.error <= 1e-8:
                    good += 1
                elif rec.error >= 1e-6:
                    silent_wrong += 1  # hard failure: wrong answer, no error
            else:
                named_failures += 1  # run_trial only maps named library errors
        rate = good / trials
        if worst_cell is None or rate < worst_rate:
            worst_rate, worst_cell = rate, (case, n)
        assert rate >= 0.99, f"{case} n={n}: {rate:.1%} below 99%"
    elapsed = time.perf_counter() - t0
    _finish(
        "criterion 2 (recovery success)",
        silent_wrong == 0 and worst_rate >= 0.99 and elapsed < 60.0,
        f"{len(cells)} cells x {trials} trials: worst cell {worst_cell} at "
        f"{worst_rate:.1%}, max ok-error {max_ok_error:.2e}, "
        f"{named_failures} named failures, {silent_wrong} silent wrong answers "
        f"({elapsed:.1f}s < 60s)",
    )


def test_criterion_3_circle_solver():
    t0 = time.perf_counter()
    rng = np.random.default_rng(9100)
    planted = 0
    worst = 0.0
    while planted < 10_000:
        z = complex(*rng.standard_normal(2))
        centers = tuple(rng.standard_normal(3) + 1j * rng.standard_normal(3))
        if abs(im_ratio(*centers)) < 1e-3:
            continue
        sys = CircleSystem(
            centers=centers, radii=tuple(abs(z + v) for v in centers)
        )
        got = solve_three_circles(sys)
        worst = max(worst, abs(got - z) / max(1.0, abs(z)))
        planted += 1
    assert worst <= 1e-10

    collinear = 0
    while collinear < 1_000:
        base = complex(*rng.standard_normal(2))
        step = complex(*rng.standard_normal(2))
        t2, t3 = rng.standard_normal(2)
        if abs(step) < 0.1 or min(abs(t2), abs(t3), abs(t2 - t3)) < 0.05:
            continue
        sys = CircleSystem(
            centers=(base, base + t2 * step, base + t3 * step),
            radii=(1.0, 2.0, 1.5),
        )
        with pytest.raises(DegenerateGeometry):
            solve_three_circles(sys)
        collinear += 1
    elapsed = time.perf_counter() - t0
    _finish(
        "criterion 3 (circle solver)",
        worst <= 1e-10 and elapsed < 5.0,
        f"10000 planted systems, worst relative error {worst:.2e} <= 1e-10; "
        f"1000 collinear systems all rejected ({elapsed:.1f}s < 5s)",
    )


def test_criterion_4_transform_duality():
    t0 = time.perf_counter()
    rng = np.random.default_rng(9200)
    worst = 0.0
    for _ in range(1_000):
        n = int(rng.integers(4, 33))
        bandlimit = int(rng.integers(2, (n + 1) // 2 + 1))
        i = int(rng.integers(n))
        w = make_case1_window(n, bandlimit, i, seed=rng)
        params = _params(n)
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        k = int(rng.integers(n))
        m = int(rng.integers(params.segments))
        t = stft_magnitude(z, w, k, m, params)
        s = stft_magnitude_spectral(z, w, k, m, params)
        worst = max(worst, abs(t - s) / max(t, s, 1.0))
    elapsed = time.perf_counter() - t0
    _finish(
        "criterion 4 (transform duality)",
        worst <= 1e-10 and elapsed < 5.0,
        f"1000 random (z, w, k, m, B) tuples: worst relative gap {worst:.2e} "
        f"<= 1e-10 ({elapsed:.1f}s < 5s)",
    )


def test_criterion_5_analytic_structure():
    t0 = time.perf_counter()
    rng = np.random.default_rng(9300)
    matrices = {}
    checked = {0: 0, 1: 0}
    for parity in (0, 1):
        lengths = [n for n in range(4, 33) if n % 2 == parity]
        for _ in range(1_000):
            n = int(rng.choice(lengths))
            x = rng.standard_normal(n)
            a = analytic_from_real(x)
            assert is_analytic(a, tol=1e-10)
            assert float(np.max(np.abs(a.signal.real - x))) <= 1e-10
            if n not in matrices:
                matrices[n] = hilbert_matrix(n)
            assert float(
                np.max(np.abs(matrices[n] @ x - hilbert(x)))
            ) <= 1e-10
            checked[parity] += 1
    elapsed = time.perf_counter() - t0
    _finish(
        "criterion 5 (analytic structure)",
        checked == {0: 1000, 1: 1000},
        "1000 draws per parity, N <= 32: spectral support, real-part identity "
        f"and Hilbert matrix all within 1e-10 ({elapsed:.1f}s)",
    )


def test_criterion_6_modulation_triples():
    t0 = time.perf_counter()
    worst = np.inf
    triples = 0
    pairs = 0
    for n in range(4, 33):
        for hop in range(1, n):
            seg = -(-n // hop)
            if seg < 3:
                break  # segments only shrink as the hop grows
            roots = np.exp(2j * np.pi * ((hop * np.arange(seg)) % n) / n)
            idx = np.arange(seg)
            i, j, k = np.meshgrid(idx, idx, idx, indexing="ij")
            mask = (i != j) & (i != k) & (j != k)
            v1, v2, v3 = roots[i[mask]], roots[j[mask]], roots[k[mask]]
            im = ((v1 - v2) / (v1 - v3)).imag
            worst = min(worst, float(np.min(np.abs(im))))
            triples += int(im.size)
            pairs += 1
            # the library's own check agrees on the canonical triple
            assert validate_m_triple(n, hop, 0, 1, 2, threshold=1e-6).ok
    elapsed = time.perf_counter() - t0
    _finish(
        "criterion 6 (modulation triples)",
        worst > 1e-6 and elapsed < 30.0,
        f"{triples} ordered triples over {pairs} (N, hop) pairs, N <= 32: "
        f"smallest |im_ratio| {worst:.3e} > 1e-6 ({elapsed:.1f}s < 30s)",
    )


def test_criterion_7_instantaneous_frequency():
    t0 = time.perf_counter()
    n = 16
    worst = 0.0
    for case_idx, case in enumerate((CASE1, CASE2, CASE3)):
        done = 0
        seed = 20_000 * (case_idx + 1)
        while done < 200:
            seed += 1
            z = sample_generic(n, 2 * seed)
            mags = np.abs(z.signal)
            if float(mags.min()) <= 1e-6 * float(mags.max()):
                continue  # the criterion only covers well-separated samples
            _, windows, meas, cfg = _pipeline(case, n, seed)
            result = recover(meas, windows, cfg)
            gap = wrap_distance(
                instantaneous_frequency(result.signal),
                instantaneous_frequency(z),
            )
            worst = max(worst, float(np.max(gap)))
            done += 1
    elapsed = time.perf_counter() - t0
    _finish(
        "criterion 7 (instantaneous frequency)",
        worst <= 1e-8,
        f"200 generic trials per case at n={n}: worst phase-increment gap "
        f"{worst:.2e} <= 1e-8 mod 2*pi ({elapsed:.1f}s)",
    )


def test_criterion_8_window_validation_rejects(monkeypatch):
    t0 = time.perf_counter()
    magnitude_reads = []
    solver_calls = []
    orig_mag = MeasurementSet.magnitude
    monkeypatch.setattr(
        MeasurementSet,
        "magnitude",
        lambda self, w, k, m: (magnitude_reads.append((w, k, m)),
                               orig_mag(self, w, k, m))[1],
    )
    orig_solve = recovery_module.solve_three_circles
    monkeypatch.setattr(
        recovery_module,
        "solve_three_circles",
        lambda *a, **kw: (solver_calls.append(1), orig_solve(*a, **kw))[1],
    )

    rejected = 0
    for v in range(100):
        n = 6 + (v % 8)  # lengths 6..13
        if v % 2 == 0:
            _, w, meas, cfg = _pipeline(CASE1, n, 30_000 + v)
            spec = w.spectrum.copy()
            spec[(w.band_start + 1) % n] = 0.0  # entry the recursion divides by
            broken = Window(spec, w.bandlimit, w.zero_run_start, w.case)
        else:
            _, ws, meas, cfg = _pipeline(CASE2, n, 30_000 + v)
            w1 = ws.windows[0]
            spec = w1.spectrum.copy()
            spec[(w1.band_start + 1) % n] = 0.0  # window 1's recursion entry
            broken = WindowSet(
                (Window(spec, w1.bandlimit, w1.zero_run_start, w1.case),)
                + ws.windows[1:],
                ws.case, ws.bandlimit, ws.zero_run_start,
            )
        report = validate_for_case(broken)
        assert not report.ok
        assert "recursion_entry_nonzero" in [c.name for c in report.failures()]
        with pytest.raises(InvalidWindow):
            recover(meas, broken, cfg)
        rejected += 1
    elapsed = time.perf_counter() - t0
    _finish(
        "criterion 8 (window validation)",
        rejected == 100 and not magnitude_reads and not solver_calls,
        f"{rejected}/100 violating windows rejected before any magnitude read "
        f"({len(magnitude_reads)} reads) or circle solve ({len(solver_calls)} "
        f"solves) ({elapsed:.1f}s)",
    )


def test_criterion_9_sign_blindness():
    t0 = time.perf_counter()
    cases = (CASE1, CASE2, CASE3)
    compared = 0
    for s in range(100):
        case = cases[s % 3]
        n = 8 if s % 2 == 0 else 12
        z, windows, meas, cfg = _pipeline(case, n, 40_000 + s)
        neg = measure(-z.signal, windows, meas.plan, cfg.params)
        assert meas.magnitudes.tobytes() == neg.magnitudes.tobytes()
        res_pos = recover(meas, windows, cfg)
        res_neg = recover(neg, windows, cfg)
        canon_pos = canonicalize(res_pos.spectrum)
        canon_neg = canonicalize(res_neg.spectrum)
        gap = float(np.max(np.abs(canon_pos - canon_neg)))
        assert gap <= 1e-12 * float(np.linalg.norm(canon_pos))
        compared += 1
    elapsed = time.perf_counter() - t0
    _finish(
        "criterion 9 (sign blindness)",
        compared == 100,
        "100 seeds: negated-signal magnitudes byte-identical and "
        f"canonicalized estimates equal to 1e-12 ({elapsed:.1f}s)",
    )
