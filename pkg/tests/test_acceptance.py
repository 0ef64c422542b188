"""Acceptance run: ten numbered criteria, one PASS/FAIL line each.

Run alone with ``pytest tests/test_acceptance.py -v -s``; the summary lines are
printed even without ``-s``.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from cvghz.entanglement import tangle_of_state
from cvghz.ghz import GHZParams, ghz_state, parse_scheme, photon_operated_ghz
from cvghz.nonlocality import QUANTUM_BOUND, b3_value, max_b3_over_r, threshold_efficiency
from cvghz.oracle import run_oracle_suite
from cvghz.phasespace import (
    apply_loss,
    apply_symplectic,
    beam_splitter,
    effective_covariance,
    identity,
    is_physical,
    mixture_norm,
    ndpa,
    phase_rotation,
    single_mode_squeezer,
)
from cvghz.teleportation import (
    NoCrossingError,
    epr_sum,
    fidelity_curve,
    fidelity_gaussian,
    fidelity_two_path_check,
    ghz_optimal_gain,
    optimal_gain,
    threshold_squeezing,
)

SEED = 1234
THREADS = 4


def report(capsys, number, title, failures):
    status = "PASS" if not failures else "FAIL"
    with capsys.disabled():
        print(f"\n[{status}] criterion {number}: {title}")
        for line in failures:
            print(f"         {line}")
    assert not failures, "; ".join(failures)


def compare(label, got, want, tol):
    if got is None or not np.isfinite(got) or abs(got - want) > tol:
        return [f"{label}: got {got}, want {want} +- {tol}"]
    return []


def pmap(fn, items):
    with ThreadPoolExecutor(max_workers=THREADS) as pool:
        return list(pool.map(fn, items))


def test_criterion_01_fidelity_anchor(capsys):
    f = fidelity_gaussian(np.eye(6) / 2, 1.0)
    report(capsys, 1, f"vacuum-resource fidelity {f:.12f} vs 1/sqrt(5)",
           compare("F(I/2, g=1)", f, 1 / np.sqrt(5), 1e-9))


MK_TARGETS = {
    "none": 2.324,
    "sub:A": 2.301, "sub:A,B": 2.293, "sub:A,B,C": 2.428,
    "add:A": 2.368, "add:A,B": 2.412, "add:A,B,C": 2.495,
}


def test_criterion_02_mk_maxima(capsys):
    specs = list(MK_TARGETS)
    results = pmap(lambda s: max_b3_over_r(parse_scheme(s)), specs)
    failures, shown = [], []
    for spec, (r, x, b) in zip(specs, results):
        shown.append(f"{spec}={b:.4f}")
        failures += compare(f"max|B3| {spec} (r*={r:.3f}, x*={x:.4f})", b, MK_TARGETS[spec], 0.01)
    report(capsys, 2, "MK maxima " + " ".join(shown), failures)


EFFICIENCY_TARGETS = {
    "none": 0.694,
    "sub:A": 0.972, "sub:A,B": 0.750, "sub:A,B,C": 0.931,
    "add:A": 0.972, "add:A,B": 0.982, "add:A,B,C": 0.986,
}


def test_criterion_03_efficiency_thresholds(capsys):
    specs = list(EFFICIENCY_TARGETS)
    results = pmap(lambda s: threshold_efficiency(parse_scheme(s)), specs)
    failures, shown = [], []
    for spec, eta in zip(specs, results):
        shown.append(f"{spec}={eta:.4f}")
        failures += compare(f"eta_th {spec}", eta, EFFICIENCY_TARGETS[spec], 0.01)
    report(capsys, 3, "efficiency thresholds " + " ".join(shown), failures)


UNIT_GAIN_TARGETS = {
    "none": 0.107,
    "sub:A": 0.481, "sub:C": 0.481, "sub:B": 0.291,
    "sub:A,B": 0.080, "sub:B,C": 0.080, "sub:A,C": 0.060, "sub:A,B,C": 0.469,
    "add:A": 0.477, "add:B": 0.289, "add:A,B": 0.443, "add:A,C": 0.426, "add:A,B,C": 0.484,
}


def _thresholds(targets, gain):
    def one(spec):
        try:
            return threshold_squeezing(parse_scheme(spec), gain)
        except NoCrossingError:
            return None

    specs = list(targets)
    failures, shown = [], []
    for spec, r in zip(specs, pmap(one, specs)):
        shown.append(f"{spec}={r:.4f}" if r is not None else f"{spec}=none")
        failures += compare(f"r_th {spec}", r, targets[spec], 0.01)
    return failures, shown


def test_criterion_04_unit_gain_thresholds(capsys):
    failures, shown = _thresholds(UNIT_GAIN_TARGETS, "unit")
    report(capsys, 4, "unit-gain thresholds " + " ".join(shown), failures)


OPTIMAL_GAIN_TARGETS = {
    "sub:A": 0.338, "sub:B": 0.264, "sub:A,B,C": 0.384,
    "add:A": 0.471, "add:A,B": 0.436, "add:A,C": 0.422, "add:A,B,C": 0.450,
}


def test_criterion_05_optimal_gain(capsys):
    failures, shown = _thresholds(OPTIMAL_GAIN_TARGETS, "optimal")
    worst = 0.0
    for r in np.linspace(0.05, 1.0, 20):
        g, _ = optimal_gain(ghz_state(GHZParams.biased(r)))
        worst = max(worst, abs(g - ghz_optimal_gain(r)))
    failures += compare("GHZ optimal gain vs closed form (max deviation)", worst, 0.0, 1e-4)
    report(capsys, 5, f"optimal-gain thresholds {' '.join(shown)}; GHZ gain dev {worst:.1e}", failures)


def test_criterion_06_role_symmetry(capsys):
    rs = np.linspace(0.02, 1.5, 30)
    failures, worst = [], 0.0
    for kind in ("sub", "add"):
        for left, right in (("A", "C"), ("A,B", "B,C")):
            for gain in ("unit", "optimal"):
                a = [fidelity_curve(parse_scheme(f"{kind}:{left}"), r, gain)[1] for r in rs]
                c = [fidelity_curve(parse_scheme(f"{kind}:{right}"), r, gain)[1] for r in rs]
                dev = float(np.max(np.abs(np.subtract(a, c))))
                worst = max(worst, dev)
                failures += compare(f"{kind}:{left} vs {kind}:{right} ({gain} gain)", dev, 0.0, 1e-10)
    report(capsys, 6, f"A/C and AB/BC fidelity curves coincide (max dev {worst:.1e})", failures)


def test_criterion_07_tangle(capsys):
    failures, worst = [], 0.0
    placements = {
        "sub1": ["sub:A", "sub:B", "sub:C"], "sub2": ["sub:A,B", "sub:B,C", "sub:A,C"], "sub3": ["sub:A,B,C"],
        "add1": ["add:A", "add:B", "add:C"], "add2": ["add:A,B", "add:B,C", "add:A,C"], "add3": ["add:A,B,C"],
    }
    for r in (0.1, 0.2):
        ghz = tangle_of_state(ghz_state(GHZParams.biased(r)))
        tau = {}
        for key, specs in placements.items():
            values = [tangle_of_state(photon_operated_ghz(r, parse_scheme(s))) for s in specs]
            spread = max(values) - min(values)
            worst = max(worst, spread)
            failures += compare(f"tangle placement spread {key} r={r}", spread, 0.0, 1e-10)
            tau[key] = values[0]
        if not tau["sub2"] > ghz:
            failures.append(f"r={r}: two-mode subtraction {tau['sub2']:.5f} not above GHZ {ghz:.5f}")
        for key in ("sub1", "sub3", "add1", "add2", "add3"):
            if not tau[key] <= ghz:
                failures.append(f"r={r}: {key} tangle {tau[key]:.5f} above GHZ {ghz:.5f}")
    report(capsys, 7, f"tangle orderings at r=0.1, 0.2; placement spread {worst:.1e}", failures)


def test_criterion_08_oracle_suite(capsys):
    checks = run_oracle_suite(threads=THREADS)
    failures = [f"{c.name}: error {c.error:.2e} > {c.tol:g}" for c in checks if not c.passed]
    worst = max((c.error / c.tol for c in checks), default=0.0)
    report(capsys, 8, f"Fock oracle equivalence, {len(checks)} checks (worst error/tol {worst:.2e})", failures)


def random_physical_cov(rng, n=3):
    s = identity(n)
    for _ in range(8):
        i, j = rng.choice(n, size=2, replace=False)
        kind = rng.integers(4)
        if kind == 0:
            g = beam_splitter(rng.uniform(0.05, 1.0), i, j, n)
        elif kind == 1:
            g = ndpa(rng.uniform(0, 1.0), i, j, n)
        elif kind == 2:
            g = single_mode_squeezer(rng.uniform(-1, 1), i, n)
        else:
            g = phase_rotation(rng.uniform(-np.pi, np.pi), i, n)
        s = g @ s
    nu = np.repeat(0.5 + rng.exponential(0.5, size=n), 2)
    return s.matrix @ np.diag(nu) @ s.matrix.T


def test_criterion_09_two_path_identity(capsys):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(1000):
        v = random_physical_cov(rng)
        g = rng.uniform(0.0, 1.5)
        worst = max(worst, abs(fidelity_gaussian(v, g) - fidelity_two_path_check(v, g)))
    report(capsys, 9, f"determinant vs A-map fidelity on 1000 random (V, g): max dev {worst:.1e}",
           compare("max deviation", worst, 0.0, 1e-10))


def test_criterion_10_properties(capsys):
    rng = np.random.default_rng(SEED)
    failures = []
    schemes = ["none", "sub:A", "sub:B", "sub:A,B", "sub:A,C", "sub:A,B,C",
               "add:A", "add:B", "add:A,B", "add:A,C", "add:A,B,C", "sub:A;add:C", "add:A;sub:B,C"]

    # symplectic closure
    for _ in range(200):
        s = identity(3)
        for _ in range(6):
            i, j = rng.choice(3, size=2, replace=False)
            s = [beam_splitter(rng.uniform(0.05, 1), i, j, 3), ndpa(rng.uniform(0, 1), i, j, 3),
                 single_mode_squeezer(rng.uniform(-1, 1), i, 3), phase_rotation(rng.uniform(-3, 3), i, 3)][rng.integers(4)] @ s
        if not s.is_symplectic(tol=1e-9):
            failures.append("composition left the symplectic group")
            break

    xs = np.linspace(0, 2, 81)
    for spec in schemes:
        ops = parse_scheme(spec)
        for r in rng.uniform(0.03, 1.5, size=4):
            st = photon_operated_ghz(r, ops)
            v = effective_covariance(st)
            if not is_physical(v, tol=1e-8):
                failures.append(f"{spec} r={r:.3f} violates the uncertainty relation")
            if np.max(np.abs(b3_value(st, xs))) > QUANTUM_BOUND:
                failures.append(f"{spec} r={r:.3f} exceeds 2 sqrt 2")
            # conditioning order
            rev = photon_operated_ghz(r, list(reversed(ops)))
            if not (np.isclose(mixture_norm(rev), mixture_norm(st), rtol=1e-9)
                    and np.allclose(effective_covariance(rev), v, atol=1e-9)):
                failures.append(f"{spec} r={r:.3f} depends on conditioning order")
            # loss composition
            e1, e2 = rng.uniform(0, 1, size=2)
            a = effective_covariance(apply_loss(apply_loss(st, e1), e2))
            b = effective_covariance(apply_loss(st, e1 * e2))
            if not np.allclose(a, b, atol=1e-10):
                failures.append(f"{spec} r={r:.3f} loss channels do not compose")
            lossy = effective_covariance(apply_loss(st, e1))
            if not is_physical(lossy, tol=1e-8):
                failures.append(f"{spec} r={r:.3f} eta={e1:.3f} lossy state unphysical")

    worst = 0.0
    for r in np.linspace(0, 3, 31):
        worst = max(worst, abs(epr_sum(ghz_state(GHZParams.biased(r))) / (2.5 * np.exp(-2 * r)) - 1))
    failures += compare("GHZ EPR sum relative deviation", worst, 0.0, 1e-10)
    report(capsys, 10, f"property suite over {len(schemes)} schemes (EPR dev {worst:.1e})", failures)
