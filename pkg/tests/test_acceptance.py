"""Acceptance criteria, one test each, at their stated tolerances.

Every test prints a single PASS/FAIL line (also collected into the terminal
summary) and then asserts, so a failing criterion fails visibly.
"""

import time
from contextlib import contextmanager

import numpy as np

from nilrange.certify import (
    complex_gaussian,
    haar_unitary,
    random_general,
    random_nilpotent,
    random_reducible5,
    random_reducible_nilpotent,
    verify,
)
from nilrange.families import (
    ExceptionalParams,
    construct_exceptional,
    is_vertical,
    parallel_canonical,
    parallel_distance,
    real_family_eigenvalues,
    real_family_matrix,
    real_family_vertical_flat,
    tau1,
    tau2,
)
from nilrange.kippenhahn import (
    coeffs_nilpotent4,
    default_search_radius,
    eval_general,
    singular_points,
)
from nilrange.linalg import eigvalsh, frob, rotated_parts
from nilrange.numrange import (
    TWO_PI,
    angle_distance,
    compression_is_scalar,
    exceptional_angles,
    flat_portions,
    sample_boundary,
    support_value,
)
from nilrange.reducible5 import (
    Reducible5Params,
    assemble_5x5,
    cardioid_point,
    cubic_max_root,
    flat_count_5x5,
    support_distance_3x3,
)

from conftest import ACCEPTANCE_LINES, EXAMPLE_PARAMS, S2, S3, WITHFLAT


@contextmanager
def criterion(number, title, budget=None):
    """Collect named checks; report one line and fail on any miss."""
    failures = []
    t0 = time.perf_counter()
    yield failures
    dt = time.perf_counter() - t0
    if budget is not None and dt >= budget:
        failures.append(f"runtime {dt:.2f}s exceeds {budget}s")
    status = "PASS" if not failures else "FAIL"
    line = f"{status} criterion {number}: {title} ({dt:.2f}s)"
    if failures:
        line += " -- " + "; ".join(failures)
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert not failures, line


def check(failures, ok, what):
    if not ok:
        failures.append(what)


def test_criterion_1_example_without_flat():
    with criterion(1, "exceptional example, no flat portion", budget=1.0) as f:
        p = ExceptionalParams(**EXAMPLE_PARAMS)
        A = construct_exceptional(p)
        want = [S2 / 2, S3 / 2, np.sqrt(2 + S3) / 2]
        check(f, np.abs([A[1, 2], A[1, 3], A[2, 3]] - np.array(want)).max() <= 1e-14, "a4..a6")
        check(f, abs(tau1(p)) <= 1e-12 and abs(tau2(p)) <= 1e-12, "tau values")
        exc = exceptional_angles(A)
        check(f, any(angle_distance(e.theta, 0.0) <= 1e-8 for e in exc), "theta = 0 exceptional")
        fps = flat_portions(A, exceptional=exc)
        check(f, not any(angle_distance(fp.line.theta, 0.0) <= 1e-6 for fp in fps), "no flat on x = -1/2")


def test_criterion_2_single_flat():
    with criterion(2, "one flat portion on x = -1/2: segment, coefficients, singular point", budget=1.0) as f:
        fps = flat_portions(WITHFLAT)
        check(f, len(fps) == 1, f"{len(fps)} flat portions")
        if fps:
            fp = fps[0]
            on_line = angle_distance(fp.line.theta, 0.0) <= 1e-8 and abs(fp.line.d + 0.5) <= 1e-9
            check(f, on_line and fp.length > 0.05, "portion on x = -1/2 longer than 0.05")
        c1, c2, c3, c4, c5, c6 = coeffs_nilpotent4(WITHFLAT).c
        cs = max(abs(c3 + 4 * c1 - 0.25), abs(c6 + 2 * c2), abs(c5 - 4 * c1 + 0.75))
        check(f, cs <= 1e-8, f"system cs residual {cs:.2e}")
        pts = singular_points(coeffs_nilpotent4(WITHFLAT), default_search_radius(WITHFLAT))
        hit = [p for p in pts if abs(p.u - 2) <= 1e-8 and abs(p.v) <= 1e-8 and p.residual <= 1e-9]
        check(f, len(hit) == 1, "singular point (2, 0)")


def test_criterion_3_real_family():
    with criterion(3, "real family: vertical flat and closed-form eigenvalues") as f:
        A = real_family_matrix(1, 2, -1)
        fps = flat_portions(A)
        check(f, len(fps) == 1 and all(is_vertical(fp) for fp in fps), "one vertical flat portion")
        err = 0.0
        for t in TWO_PI * np.arange(256) / 256:
            R, _ = rotated_parts(A, t)
            err = max(err, np.abs(np.sort(real_family_eigenvalues(1, 2, -1, t)) - eigvalsh(R)).max())
        check(f, err <= 1e-12, f"eigenvalue error {err:.2e}")
        rng = np.random.default_rng(3)
        bad = 0
        for k in range(200):
            a1, a2, a3 = rng.uniform(-2, 2, 3)
            if k % 2:
                a3 = a1 * rng.choice([-1.0, 1.0])  # half the draws on |a1| = |a3|
            oracle = any(is_vertical(fp) for fp in flat_portions(real_family_matrix(a1, a2, a3)))
            bad += real_family_vertical_flat(a1, a2, a3) != oracle
        check(f, bad == 0, f"{bad} disagreements")


def test_criterion_4_parallel_pair():
    with criterion(4, "parallel canonical form: two portions, distance, angle") as f:
        rng = np.random.default_rng(4)
        bad = []
        for k in range(100):
            a1, a3 = rng.uniform(0.1, 3, 2)
            a2 = rng.normal()
            alpha = complex_gaussian(rng, ()) * 2
            U = haar_unitary(4, rng)
            A = U @ parallel_canonical(a1, a2, a3, alpha) @ U.conj().T
            fps = flat_portions(A)
            dist = parallel_distance(a1, a2, a3, alpha)
            ok = len(fps) == 2 and all(
                abs(-fp.line.d - dist) <= 1e-8 * dist
                and angle_distance(2 * fp.direction_angle, 2 * np.angle(alpha)) <= 2e-6
                for fp in fps
            )
            if not ok:
                bad.append(k)
        check(f, not bad, f"draws {bad}")


def test_criterion_5_certification_sweeps():
    with criterion(5, "randomized flat-count sweeps", budget=60.0) as f:
        for family, trials, seed in (("nilpotent4", 2000, 42), ("general4", 500, 7), ("reducible4", 500, 7)):
            s = verify(family, trials, seed)
            print(f"  {family}: histogram {s.histogram}, degenerate {s.degenerate}")
            check(f, s.ok, f"{family} violations {s.violations + s.parallel_violations}")
            if family == "nilpotent4":
                check(f, set(s.histogram) <= {0, 1, 2}, f"{family} counts {sorted(s.histogram)}")


def test_criterion_6_kippenhahn_coefficients():
    with criterion(6, "trace-formula quartic vs determinant") as f:
        rng = np.random.default_rng(6)
        worst_rel, worst_im = 0.0, 0.0
        for _ in range(100):
            A = random_nilpotent(rng)
            q = coeffs_nilpotent4(A, check=False)
            worst_im = max(worst_im, q.imag / (1 + frob(A)) ** 4)
            pts = rng.normal(size=(50, 3))
            for u, v, w in pts:
                d = eval_general(A, u, v, w)
                # relative to the size of the individual terms of the quartic
                scale = (frob(A) * np.hypot(u, v) + abs(w)) ** 4
                worst_rel = max(worst_rel, abs(q(u, v, w) - d) / scale)
        print(f"  worst relative error {worst_rel:.2e}, worst scaled imaginary part {worst_im:.2e}")
        check(f, worst_rel <= 1e-10, f"relative error {worst_rel:.2e}")
        check(f, worst_im <= 1e-10, f"imaginary part {worst_im:.2e}")


def test_criterion_7_reducible5():
    with criterion(7, "reducible 5x5 classification, Viete, cardioid") as f:
        for r, rho, want in ((3.3, 3, 2), (3.3, 3.3, 1), (2, 3, 1), (7, 3, 0)):
            p = Reducible5Params(r, rho, rho, rho)
            got, oracle = flat_count_5x5(p), len(flat_portions(assemble_5x5(p)))
            check(f, got == want == oracle, f"({r}, {rho}): closed form {got}, oracle {oracle}")
        rng = np.random.default_rng(7)
        grid = TWO_PI * np.arange(256) / 256
        err = 0.0
        for _ in range(50):
            p = Reducible5Params(1.0, *rng.uniform(0.1, 3, 3))
            roots = np.array([cubic_max_root(p, t) for t in grid])
            err = max(err, np.abs(support_distance_3x3(p, grid) - roots / 2).max())
        check(f, err <= 1e-12, f"Viete vs companion {err:.2e}")
        card = max(abs(abs(cardioid_point(t)) - np.sqrt(5 + 4 * np.cos(t))) for t in grid)
        check(f, card <= 1e-12, f"cardioid modulus {card:.2e}")


def corpus(size=160):
    rng = np.random.default_rng(8)
    out = []
    for k in range(size):
        j = k % 6
        if j == 0:
            out.append(random_nilpotent(rng))
        elif j == 1:
            out.append(random_general(rng, int(rng.integers(2, 9))))
        elif j == 2:
            out.append(random_reducible_nilpotent(rng))
        elif j == 3:
            out.append(random_reducible5(rng))
        elif j == 4:
            U = haar_unitary(4, rng)
            M = parallel_canonical(*rng.uniform(0.2, 2, 3), complex_gaussian(rng, ()))
            out.append(U @ M @ U.conj().T)
        else:
            a = complex_gaussian(rng, 3)
            a = a / np.abs(a) * rng.uniform(0, 0.95, 3)
            p = ExceptionalParams(complex_gaussian(rng, ()), *a, *rng.uniform(0, TWO_PI, 2))
            out.append(construct_exceptional(p))
    return out


def test_criterion_8_oracle_self_consistency():
    with criterion(8, "oracle self-consistency on the randomized corpus") as f:
        rng = np.random.default_rng(9)
        fails = {"antipodal": 0, "convexity": 0, "covariance": 0, "quadform": 0}
        for A in corpus():
            n = A.shape[0]
            nrm = 1 + frob(A)
            H, K = (A + A.conj().T) / 2, (A - A.conj().T) / 2j
            for t in rng.uniform(0, TWO_PI, 4):
                lam = eigvalsh(np.cos(t) * H + np.sin(t) * K)[-1]
                fails["antipodal"] += bool(abs(support_value(A, t + np.pi) + lam) > 1e-12 * nrm)

            m = 96
            pts = sample_boundary(A, m)
            th = TWO_PI * np.arange(m) / m
            d = np.array([support_value(A, t) for t in th])
            off = (np.exp(-1j * th)[:, None] * pts[None, :]).real - d[:, None]
            fails["convexity"] += bool(off.min() < -1e-9 * nrm)

            phi, c, b = rng.uniform(0, TWO_PI), rng.uniform(0.1, 10), complex_gaussian(rng, ())
            B = c * np.exp(1j * phi) * A + b * np.eye(n)
            fa, fb = flat_portions(A), flat_portions(B)
            ok = len(fa) == len(fb)
            for t in rng.uniform(0, TWO_PI, 3):
                want = c * support_value(A, t) + (np.exp(-1j * (t + phi)) * b).real
                ok &= abs(support_value(B, t + phi) - want) <= 1e-12 * (1 + frob(B))
            for fp in fa:
                match = [g for g in fb if angle_distance(g.line.theta, fp.line.theta + phi) < 1e-6]
                ok &= len(match) == 1 and abs(match[0].length - c * fp.length) <= 1e-6 * c * fp.length
            fails["covariance"] += not ok

            for sub in exceptional_angles(A):
                if sub.dim == 2:
                    flat = bool(flat_portions(A, exceptional=[sub]))
                    fails["quadform"] += compression_is_scalar(A, sub.basis[:, 0], sub.basis[:, 1]) == flat
        print(f"  failures per property: {fails}")
        for name, count in fails.items():
            check(f, count == 0, f"{name}: {count}")
