"""Acceptance suite: one test (and one pass/fail line under ``pytest -v``)
per shipped criterion.  Quantitative targets are frozen from independent
oracle runs; asymptotic statements are checked through bounded-drift and
minimum-growth proxies at desk scale.
"""

import time

import numpy as np
import pytest

from vilenkin.constructions import random_atom
from vilenkin.group import parse_base_spec, point_of
from vilenkin.harness import ExperimentConfig, emit, run_experiment
from vilenkin.kernels import (
    dirichlet,
    dirichlet_table,
    kernel_integral_2d,
    kernel_integral_2d_oracle,
)
from vilenkin.operators import cond_expectation, partial_sum2d
from vilenkin.transform import (
    character_matrix,
    forward,
    forward2d,
    grid1d,
    grid2d,
    inverse,
    inverse2d,
)

TRANSFORM_BASES = ("2x10", "2,3,4,2,3")


def _report(num: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"CRITERION {num} ({name}): {status} {detail}".rstrip())
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def test_criterion_1_transform_correctness():
    start = time.perf_counter()
    worst_fast, worst_round, worst_gram = 0.0, 0.0, 0.0
    for spec in TRANSFORM_BASES:
        base = parse_base_spec(spec)
        size = base.size
        w = character_matrix(base.generators)
        gram = np.abs(w.conj() @ w.T / size - np.eye(size)).max()
        worst_gram = max(worst_gram, gram)
        rng = np.random.default_rng(123)
        for i in range(10):  # 10 1-D + 10 2-D random inputs per base
            f = grid1d(base, base.depth, rng.normal(size=size) + 1j * rng.normal(size=size))
            a = forward(f, mode="fast").coefficients
            b = forward(f, mode="naive").coefficients
            worst_fast = max(worst_fast, np.abs(a - b).max())
            worst_round = max(
                worst_round, np.abs(inverse(forward(f)).values - f.values).max()
            )
        size2 = min(size, 144)
        depth2 = next(d for d in range(base.depth, 0, -1) if base.m_at(d) <= size2)
        sub = base.truncated(depth2)
        for i in range(10):
            vals = rng.normal(size=(sub.size, sub.size))
            f = grid2d(sub, depth2, vals + 1j * rng.normal(size=vals.shape))
            a = forward2d(f, mode="fast").coefficients
            b = forward2d(f, mode="naive").coefficients
            worst_fast = max(worst_fast, np.abs(a - b).max())
            worst_round = max(
                worst_round, np.abs(inverse2d(forward2d(f)).values - f.values).max()
            )
    elapsed = time.perf_counter() - start
    ok = worst_fast < 1e-10 and worst_round < 1e-12 and worst_gram < 1e-12 and elapsed < 30
    _report(
        1,
        "transform correctness",
        ok,
        f"fast-vs-naive={worst_fast:.2e} roundtrip={worst_round:.2e} "
        f"gram={worst_gram:.2e} elapsed={elapsed:.1f}s",
    )


def test_criterion_2_kernel_identities():
    start = time.perf_counter()
    block_exact = True
    for spec in TRANSFORM_BASES:
        base = parse_base_spec(spec)
        for j in range(base.depth + 1):
            vals = dirichlet(base.m_at(j), base, base.depth, method="closed").values
            expect = np.zeros(base.size)
            expect[:: base.m_at(j)] = base.m_at(j)
            if np.abs(vals - expect).max() > 1e-12:
                block_exact = False
    worst = 0.0
    for spec in TRANSFORM_BASES:
        base = parse_base_spec(spec)
        depth = next(d for d in range(base.depth, 0, -1) if base.m_at(d) <= 256)
        sub = base.truncated(depth)
        table = dirichlet_table(sub, depth, sub.size - 1)
        for n in range(sub.size):
            closed = dirichlet(n, sub, depth, method="closed").values
            worst = max(worst, np.abs(closed - table[n]).max())
    elapsed = time.perf_counter() - start
    ok = block_exact and worst < 1e-10 and elapsed < 60
    _report(
        2,
        "kernel identities",
        ok,
        f"block-exact={block_exact} closed-vs-direct={worst:.2e} elapsed={elapsed:.1f}s",
    )


def test_criterion_3_kernel_integral_estimates():
    cfg = ExperimentConfig(
        "lemma1", base="2,3x3", depth=2, eps=(0.25, 0.5, 1.0), samples=16, seed=0
    )
    result = run_experiment(cfg)
    # separation against the double-sum oracle at M_N = 64
    base = parse_base_spec("2x6")
    rng = np.random.default_rng(2)
    sep = 0.0
    for _ in range(20):
        m, n = (int(rng.integers(1, base.size + 1)) for _ in range(2))
        x, y = (point_of(int(rng.integers(0, base.size)), base) for _ in range(2))
        cell = int(rng.integers(0, base.depth + 1))
        sep = max(
            sep,
            abs(
                kernel_integral_2d(m, n, x, y, cell)
                - kernel_integral_2d_oracle(m, n, x, y, cell)
            ),
        )
    ok = result.passed and sep < 1e-12
    _report(
        3,
        "kernel integral estimates",
        ok,
        f"drift={result.summary['max_drift']:.3g} separation={sep:.2e}",
    )


def test_criterion_4_operator_algebra():
    base = parse_base_spec("2,3x2")
    size = base.size
    worst = {"idempotence": 0.0, "nesting": 0.0, "martingale": 0.0, "annihilation": 0.0}
    atom_base = parse_base_spec("2x5")
    for seed in range(50):
        rng = np.random.default_rng(seed)
        f = grid2d(base, base.depth, rng.normal(size=(size, size)))
        m, n = (int(rng.integers(1, size + 1)) for _ in range(2))
        s = partial_sum2d(f, m, n)
        worst["idempotence"] = max(
            worst["idempotence"], np.abs(partial_sum2d(s, m, n).values - s.values).max()
        )
        big = partial_sum2d(partial_sum2d(f, size, size), m, n)
        worst["nesting"] = max(worst["nesting"], np.abs(big.values - s.values).max())
        lo, hi = sorted(int(rng.integers(0, base.depth + 1)) for _ in range(2))
        a = cond_expectation(cond_expectation(f, hi), lo)
        b = cond_expectation(f, lo)
        worst["martingale"] = max(worst["martingale"], np.abs(a.values - b.values).max())
        support = int(np.random.default_rng(seed).integers(1, 4))
        atom = random_atom(atom_base, support, 0.75, seed)
        cap = atom_base.m_at(support)
        killed = partial_sum2d(atom.grid, cap, int(rng.integers(1, cap + 1)))
        worst["annihilation"] = max(worst["annihilation"], np.abs(killed.values).max())
    ok = all(v < 1e-10 for v in worst.values())
    detail = " ".join(f"{k}={v:.2e}" for k, v in worst.items())
    _report(4, "operator algebra", ok, detail)


def test_criterion_5_strong_summability_boundedness():
    start = time.perf_counter()
    cfg = ExperimentConfig(
        "strong-sum", base="2x5", depth=3, p=0.75, alpha=1.0, samples=100, seed=1000
    )
    result = run_experiment(cfg)
    elapsed = time.perf_counter() - start
    lo = result.summary["max_ratio_lo"]
    hi = result.summary["max_ratio_hi"]
    # frozen oracle values for this seeded configuration
    anchored = lo == pytest.approx(0.912480594236, rel=1e-9) and hi == pytest.approx(
        1.05177472794, rel=1e-9
    )
    ok = result.passed and hi <= 2.0 * lo and anchored and elapsed < 300
    _report(
        5,
        "strong summability boundedness",
        ok,
        f"ratio(N=3)={lo:.6g} ratio(N=4)={hi:.6g} elapsed={elapsed:.1f}s",
    )


def test_criterion_6_weighted_maximal_sharpness():
    cfg = ExperimentConfig(
        "sharpness", base="2x7", depth=5, p=0.5, family="thm1b"
    )
    result = run_experiment(cfg)
    ratios = [float(t) for t in result.summary["ratios"].split()]
    expect = [1.0, 8.0 / 3.0, 6.4, 128.0 / 9.0]  # frozen closed-form oracle
    anchored = all(r == pytest.approx(e, rel=1e-9) for r, e in zip(ratios, expect))
    growth_ok = all(b / a >= 1.5 for a, b in zip(ratios, ratios[1:]))
    ok = result.passed and result.summary["hypothesis_met"] and growth_ok and anchored
    _report(
        6,
        "weighted maximal sharpness",
        ok,
        "ratios=" + " ".join(f"{r:.6g}" for r in ratios),
    )


def test_criterion_7_modulus_counterexample():
    cfg = ExperimentConfig(
        "convergence", base="2x6", depth=6, p=0.5, family="thm3b"
    )
    result = run_experiment(cfg)
    modulus = [r for r in result.records if r["kind"] == "modulus"]
    floors = [r for r in result.records if r["kind"] == "weak-floor"]
    mod_ok = all(r["ok"] for r in modulus) and len(modulus) == 4
    floor_ok = all(r["ok"] for r in floors) and len(floors) == 3
    anchored = all(r["scaled"] == pytest.approx(1.0, rel=1e-9) for r in floors)
    ok = result.passed and mod_ok and floor_ok and anchored
    _report(
        7,
        "modulus-of-continuity counterexample",
        ok,
        "scaled=" + " ".join(f"{r['scaled']:.4g}" for r in modulus)
        + " floors=" + " ".join(f"{r['scaled']:.4g}" for r in floors),
    )


def test_criterion_8_cone_convergence_rate():
    cfg = ExperimentConfig(
        "convergence", base="2x5", depth=3, p=0.75, alpha=1.0, samples=50, seed=0
    )
    result = run_experiment(cfg)
    drift = result.summary["drift"]
    anchored = drift == pytest.approx(1.44891128135, rel=1e-9)
    polys = [r for r in result.records if r["kind"] == "polynomial-exact"]
    ok = (
        result.passed
        and drift <= 2.0
        and anchored
        and len(polys) == 10
        and result.summary["poly_error"] < 1e-10
    )
    _report(
        8,
        "cone convergence rate",
        ok,
        f"drift={drift:.6g} poly_error={result.summary['poly_error']:.2e}",
    )


def test_criterion_9_determinism(tmp_path):
    ok = True
    detail = []
    for fmt in ("csv", "json"):
        blobs = []
        for i in (0, 1):
            cfg = ExperimentConfig(
                "lemma1", base="2,3x3", depth=2, eps=(0.5,), samples=8, seed=4
            )
            path = tmp_path / f"run{i}.{fmt}"
            emit(run_experiment(cfg), fmt, str(path))
            blobs.append(path.read_bytes())
        same = blobs[0] == blobs[1]
        ok = ok and same
        detail.append(f"{fmt}={'identical' if same else 'DIFFERS'}")
    _report(9, "deterministic reruns", ok, " ".join(detail))
