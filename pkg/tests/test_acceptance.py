"""Acceptance criteria, each run at its stated sample count and tolerance.

A criterion lists (suite, check-id prefix, tolerance) triples.  Positive
checks pass when their largest observed error is within the tolerance;
negative controls pass when they produced a violation witness.
"""

import filecmp
import subprocess
import sys
import time

import pytest

from conftest import ACCEPTANCE_LINES
from trialgebra import verify as vf

SEED = 42
NEG = None  # marks a negative control

CRITERIA = {
    1: ("algebra laws", 10_000, [
        ("algebra.associativity", "associativity.", 1e-9),
        ("algebra.unitality", "unitality.", 0.0),
        ("algebra.closed_form", "closed_vs_table.", 1e-9),
        ("algebra.conjugation", "anti_automorphism.type", 1e-9),
        ("algebra.conjugation", "anti_automorphism_fails.typeI", NEG),
    ]),
    2: ("inverse", 10_000, [
        ("algebra.inverse", "two_sided_inverse.typeII", 1e-9),
    ]),
    3: ("fibration contracts", 10_000, [
        ("fibration.h1_preserves", "left_h1_fixes_pi1", 1e-9),
        ("fibration.h2_preserves", "left_h2_fixes_pi2", 1e-9),
        ("fibration.h1_nonmember_breaks", "left_nonmember_moves_fiber", NEG),
        ("fibration.h2_nonmember_breaks", "left_nonmember_moves_fiber", NEG),
        ("fibration.matrices", "matrices_reproduce_products", 1e-9),
        ("fibration.matrices", "det_left", 1e-9),
    ]),
    4: ("base actions", 1_000, [
        ("fibration.base_affine", "affine_law", 1e-9),
        ("fibration.base_hyperbolic", "hyperbolic_law", 1e-9),
        ("fibration.involutions", "square_is_identity", 1e-9),
        ("fibration.involutions", "h1_base_reflection", 1e-9),
        ("fibration.involutions", "h2_base_inversion", 1e-9),
    ]),
    5: ("rotation calculus", 1_000, [
        ("fibration.rotations", "norm_scaling", 1e-9),
        ("fibration.rotations", "angle_invariant", 1e-9),
        ("fibration.reflections", "involutive", 1e-9),
        ("fibration.reflections", "collinear_and_orthogonal", 1e-9),
    ]),
    6: ("adapted coordinates", 10_000, [
        ("adapted.roundtrip", "to_from_adapted", 1e-9),
        ("adapted.roundtrip", "from_to_adapted", 1e-9),
        ("adapted.structure_action", "action_is_left_h1", 1e-9),
        ("adapted.sphere_metric", "degenerate_metric", 1e-6),
    ]),
    7: ("conformal model", 10_000, [
        ("conformal.roundtrip", "plane_sphere_plane", 1e-9),
        ("conformal.roundtrip", "sphere_plane_sphere", 1e-9),
        ("conformal.p_map", "constant_on_fibers", 1e-9),
        ("conformal.factor", "pullback_ratio", 1e-5),
        ("conformal.fibers", "fiber_parabolas", 1e-8),
    ]),
    8: ("projective model", 10_000, [
        ("projective.quadric", "lift_on_quadric", 1e-9),
        ("projective.weierstrass", "standardization", 1e-9),
        ("projective.weierstrass", "metric_from_embedding", 1e-5),
        ("projective.curvature", "curvature_from_connection", 1e-5),
        ("projective.curvature", "ricci", 1e-5),
        ("projective.covariant_constancy", "nabla_", 1e-5),
        ("projective.curvature", "equiaffine", 1e-6),
    ]),
    9: ("geodesics", 1_000, [
        ("projective.geodesics", "rk4_stays_on_family", 1e-6),
        ("projective.geodesics", "vertical_lines", 0.0),
        ("projective.geodesics", "circle_is_not_geodesic", NEG),
    ]),
    10: ("cross-model agreement", 1_000, [
        ("projective.cross_model", "lift_matches_stereo_inv", 1e-9),
        ("projective.cross_model", "fiber_parabolas", 1e-8),
    ]),
}


def evaluate(trials, items):
    reports = {name: vf.run_suite(name, SEED, trials) for name in dict.fromkeys(s for s, _, _ in items)}
    problems, worst = [], 0.0
    for suite, prefix, tol in items:
        checks = [c for c in reports[suite].checks if c.id.startswith(prefix)]
        if not checks:
            problems.append(f"{suite}/{prefix}: no such check")
        for c in checks:
            if tol is NEG:
                if c.status != "pass":
                    problems.append(f"{suite}/{c.id}: no violation witnessed")
            elif c.trials == 0 or c.max_abs_err is None or not c.max_abs_err <= tol:
                problems.append(f"{suite}/{c.id}: max_abs_err {c.max_abs_err} > {tol}")
            else:
                worst = max(worst, c.max_abs_err)
    return problems, worst


def record(number, title, ok, detail):
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    title, trials, items = CRITERIA[number]
    t0 = time.perf_counter()
    problems, worst = evaluate(trials, items)
    elapsed = time.perf_counter() - t0
    detail = f"trials={trials} max_err={worst:.2e} time={elapsed:.1f}s"
    if problems:
        detail += " | " + "; ".join(problems)
    record(number, title, not problems, detail)
    assert not problems, problems


def test_criterion_11_determinism(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    codes, times = [], []
    for p in paths:
        t0 = time.perf_counter()
        proc = subprocess.run(
            [sys.executable, "-m", "trialgebra", "verify", "--all", "--seed", str(SEED), "--json", str(p)],
            capture_output=True,
            text=True,
            check=False,
        )
        times.append(time.perf_counter() - t0)
        codes.append(proc.returncode)
    identical = filecmp.cmp(paths[0], paths[1], shallow=False)
    ok = identical and codes == [0, 0] and max(times) < 60
    record(11, "determinism", ok, f"identical={identical} exit={codes} time={max(times):.1f}s")
    assert ok
