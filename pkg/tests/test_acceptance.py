"""Acceptance battery: every exit criterion at its frozen tolerance.

Each criterion is one test that prints a single pass/fail line.  The heavy
suites run once per module via fixtures and the criteria assert on their
check subsets.  Everything is driven by one documented seed.
"""

import json
import subprocess
import sys

import pytest

from bochnerproj import run_suite
from bochnerproj.suites import DEFAULT_SEED

SEED = DEFAULT_SEED


def _line(num, name, ok):
    print(f"ACCEPTANCE {num} ({name}): {'PASS' if ok else 'FAIL'}")


def _subset(report, ids):
    got = {c.id: c for c in report.checks}
    missing = [i for i in ids if i not in got]
    assert not missing, f"checks never ran: {missing}"
    return [got[i] for i in ids]


@pytest.fixture(scope="module")
def duality_report():
    return run_suite("duality", seed=SEED, instances=500, jobs=1)[0]


@pytest.fixture(scope="module")
def smoothness_report():
    return run_suite("smoothness", seed=SEED, instances=500, jobs=1)[0]


@pytest.fixture(scope="module")
def projections_report():
    return run_suite("projections", seed=SEED, instances=200, jobs=1)[0]


@pytest.fixture(scope="module")
def derivatives_report():
    return run_suite("derivatives", seed=SEED, instances=200, jobs=1)[0]


@pytest.fixture(scope="module")
def hilbert_report():
    return run_suite("hilbert", seed=SEED, instances=200, jobs=1)[0]


def test_criterion_1_duality_identities(duality_report):
    ids = [
        "pairing-identity",
        "dual-norm-identity",
        "homogeneity",
        "support-preservation",
        "indicator-image",
        "simple-sum-image",
        "partition-reconstruction",
        "two-block-reconstruction",
        "restriction-scaling",
        "restriction-support",
        "restriction-separation",
        "hoelder-bound",
        "norm-triangle",
        "norm-homogeneity",
        "restrict-decomposition",
        "embed-isometry",
        "simple-approximation-convergence",
    ]
    checks = _subset(duality_report, ids)
    assert duality_report.environment["instances"] >= 500
    ok = all(c.passed for c in checks)
    _line(1, "duality identities", ok)
    assert ok, [c.id for c in checks if not c.passed]


def test_criterion_2_smoothness_cross_check(smoothness_report):
    ids = [
        "analytic-vs-numeric-vector",
        "analytic-vs-numeric-bochner",
        "self-direction",
        "self-direction-bochner",
        "zero-base",
        "lipschitz-bound",
        "psi-positive-homogeneity",
        "hilbert-closed-form",
    ]
    checks = _subset(smoothness_report, ids)
    assert smoothness_report.environment["instances"] >= 500
    ok = all(c.passed for c in checks)
    _line(2, "norm-derivative cross-check", ok)
    assert ok, [c.id for c in checks if not c.passed]


def test_criterion_3_projection_optimality(projections_report):
    ids = [
        "oracle-agreement-subspace",
        "oracle-agreement-ball-interior",
        "oracle-agreement-ball-subspace-exterior",
        "oracle-agreement-ball-cylinder-interior",
        "oracle-agreement-ball-exterior",
        "oracle-agreement-cylinder-interior",
        "oracle-agreement-cylinder-exterior",
        "oracle-objective",
        "oracle-internal-audit",
        "feasibility-audit",
        "variational-inequality",
    ]
    checks = _subset(projections_report, ids)
    assert projections_report.environment["instances"] >= 200
    assert projections_report.environment["audit_samples"] >= 10000
    ok = all(c.passed for c in checks)
    _line(3, "projection optimality vs oracle", ok)
    assert ok, [c.id for c in checks if not c.passed]


def test_criterion_4_structural_properties(projections_report):
    ids = [
        "subspace-nonexpansive",
        "inverse-image",
        "idempotence",
        "cylinder-passthrough",
        "translation-covariance",
        "boundary-continuity",
        "classification-consistency",
    ]
    checks = _subset(projections_report, ids)
    ok = all(c.passed for c in checks)
    _line(4, "structural projection properties", ok)
    assert ok, [c.id for c in checks if not c.passed]


def test_criterion_5_derivative_correctness(derivatives_report):
    ids = [
        "fd-subspace",
        "fd-ball-interior-subspace-direction",
        "fd-ball-interior-general-direction",
        "fd-ball-subspace-exterior-subspace-direction",
        "fd-ball-subspace-exterior-general-direction",
        "fd-ball-cylinder-interior",
        "fd-ball-exterior",
        "fd-cylinder-interior",
        "fd-cylinder-exterior",
        "annihilation-ball",
        "annihilation-cylinder",
        "positive-homogeneity",
        "base-point-independence",
        "boundary-not-covered",
        "psi-numeric-agreement",
        "fd-bound-validity",
    ]
    checks = _subset(derivatives_report, ids)
    assert derivatives_report.environment["instances"] >= 200
    ok = all(c.passed for c in checks)
    _line(5, "derivative correctness vs quotients", ok)
    assert ok, [c.id for c in checks if not c.passed]


def test_criterion_6_uniformity_proxy(derivatives_report):
    ids = [
        "uniformity-subspace",
        "uniformity-cylinder-interior",
        "uniformity-cylinder-exterior",
    ]
    checks = _subset(derivatives_report, ids)
    ok = all(c.passed for c in checks)
    _line(6, "uniform quotient envelope", ok)
    assert ok, [c.id for c in checks if not c.passed]


def test_criterion_7_hilbert_specialization(hilbert_report):
    ok = hilbert_report.overall_pass
    assert hilbert_report.environment["instances"] >= 200
    _line(7, "inner-product specialization", ok)
    assert ok, [c.id for c in hilbert_report.checks if not c.passed]


def test_criterion_8_degenerate_collapse(projections_report, derivatives_report):
    ids_p = ["full-support-collapse", "unit-mass-simple"]
    ids_d = ["full-support-derivative-collapse"]
    checks = _subset(projections_report, ids_p) + _subset(derivatives_report, ids_d)
    ok = all(c.passed for c in checks)
    _line(8, "degenerate collapse", ok)
    assert ok, [c.id for c in checks if not c.passed]


def test_criterion_9_cli(tmp_path):
    report_path = tmp_path / "report.json"
    verify = subprocess.run(
        [
            sys.executable,
            "-m",
            "bochnerproj",
            "verify",
            "--suite",
            "all",
            "--jobs",
            "1",
            "--out",
            str(report_path),
        ],
        capture_output=True,
        text=True,
    )
    ok = verify.returncode == 0
    payload = json.loads(report_path.read_text()) if ok else None
    if ok:
        ok = payload["overall_pass"] is True
        # report round-trips byte-for-byte through a reload/redump cycle
        redump = json.dumps(payload, indent=2)
        ok = ok and json.loads(redump) == payload
    demo = subprocess.run(
        [sys.executable, "-m", "bochnerproj", "demo"],
        capture_output=True,
        text=True,
    )
    ok = ok and demo.returncode == 0
    ok = ok and "(1, 0)" in demo.stdout and "(1, 3)" in demo.stdout
    ok = ok and "derived: brute-force oracle" in demo.stdout
    _line(9, "command line interface", ok)
    assert ok, (verify.returncode, demo.returncode, demo.stdout[-400:])
