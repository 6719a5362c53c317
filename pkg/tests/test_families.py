import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilrange.certify import haar_unitary, random_nilpotent
from nilrange.errors import BadModulus, BadParams, ZeroA1, ZeroRadius
from nilrange.families import (
    ExceptionalParams,
    UpperNilpotent4,
    condex_residuals,
    construct_exceptional,
    exceptional_criterion,
    flat_branch,
    gram_residual,
    has_flat_on_line,
    is_vertical,
    match_parallel_canonical,
    oracle_flat_on_line,
    parallel_canonical,
    parallel_distance,
    real_family_eigenvalues,
    real_family_matrix,
    real_family_vertical_flat,
    real_tau2,
    tau1,
    tau2,
)
from nilrange.linalg import eigvalsh, rotated_parts
from nilrange.numrange import angle_distance, exceptional_angles, flat_portions

from conftest import EXAMPLE, EXAMPLE_PARAMS, S2, S3, WITHFLAT, WITHFLAT_PARAMS, cgauss

seeds = st.integers(0, 2**32 - 1)


def random_params(rng, alpha=None):
    a = cgauss(rng, 3)
    a = a / np.abs(a) * rng.uniform(0, 0.95, 3)
    if alpha is None:
        alpha = 1.0
    return ExceptionalParams(alpha, *a, *rng.uniform(0, 2 * np.pi, 2))


def eigvec_identities(p):
    """Left-hand sides of the two quadratic-form identities, divided by r1."""
    A = construct_exceptional(ExceptionalParams(1.0, *p.a, p.theta1, p.theta2))
    a1, a2, a3 = p.a
    r1, r2, r3 = p.r
    e1, e2 = np.exp(1j * p.theta1), np.exp(1j * p.theta2)
    y1 = np.array([-a2 * r1 + a1 * r2 * e1, -r2 * e1, r1, 0])
    y2 = np.array([-a3 * r1 + a1 * r3 * e2, -r3 * e2, 0, r1])
    ip = lambda x, y: np.vdot(y, x)  # noqa: E731
    n1, n2 = ip(y1, y1), ip(y2, y2)
    lhs1 = n2 * ip(A @ y1, y1) - n1 * ip(A @ y2, y2)
    lhs2 = n1 * ip(A @ y2, y1) - ip(y2, y1) * ip(A @ y1, y1)
    return A, (y1, y2), lhs1 / r1, lhs2 / r1


def test_construct_example():
    p = ExceptionalParams(**EXAMPLE_PARAMS)
    A = construct_exceptional(p)
    np.testing.assert_allclose(A, EXAMPLE, atol=1e-14)
    np.testing.assert_allclose([A[1, 2], A[1, 3], A[2, 3]], [S2 / 2, S3 / 2, np.sqrt(2 + S3) / 2], atol=1e-14)
    assert abs(tau1(p)) <= 1e-12 and abs(tau2(p)) <= 1e-12
    assert flat_branch(p) == (False, "i")
    assert not has_flat_on_line(p)
    np.testing.assert_allclose(construct_exceptional(ExceptionalParams(**WITHFLAT_PARAMS)), WITHFLAT, atol=1e-15)


def test_params_validation():
    with pytest.raises(BadModulus):
        ExceptionalParams(1.0, 1.1, 0, 0)
    with pytest.raises(BadParams):
        ExceptionalParams(1.0, np.nan, 0, 0)
    p = ExceptionalParams(2j, 0.6, 0, 1.0, 0.5, 1.0)
    assert p.r == pytest.approx((0.8, 1.0, 0.0))
    assert p.theta3 == pytest.approx(0.5)
    assert p.line.theta == pytest.approx(np.pi / 2) and p.line.d == -1.0
    with pytest.raises(ZeroRadius):
        tau1(p)


def test_tau_zero_entries():
    p = ExceptionalParams(1.0, 0, 0, 0, 0.4, 1.5)
    assert tau1(p) == 0
    assert tau2(p) == pytest.approx(np.exp(1.1j), abs=1e-15)


@given(seeds)
def test_tau_matches_eigenvector_identities(seed):
    p = random_params(np.random.default_rng(seed))
    A, ys, lhs1, lhs2 = eigvec_identities(p)
    R, _ = rotated_parts(A, 0.0)
    for y in ys:
        np.testing.assert_allclose(R @ y, -0.5 * y, atol=1e-12)
    assert abs(lhs1 - tau1(p)) <= 1e-12
    assert abs(lhs2 - tau2(p)) <= 1e-12


def test_real_tau2_matches(rng):
    for _ in range(100):
        a = rng.uniform(-0.95, 0.95, 3)
        t1, t2 = np.pi * rng.integers(-2, 3, 2)
        p = ExceptionalParams(1.0, *a, t1, t2)
        assert abs(real_tau2(*a, t1, t2) - tau2(p)) <= 1e-13
        assert abs(tau1(p)) <= 1e-13
    with pytest.raises(BadParams):
        real_tau2(0.1, 0.2, 0.3, 0.5, 0.0)


def test_gram_and_condex():
    m = UpperNilpotent4.from_matrix(EXAMPLE)
    gr = gram_residual(m)
    assert max(abs(x) for x in gr.minors) <= 1e-14
    mods, arg = condex_residuals(m)
    assert max(map(abs, mods)) <= 1e-14 and arg <= 1e-14
    assert exceptional_criterion(m)
    assert not exceptional_criterion(UpperNilpotent4.from_matrix(np.triu(np.ones((4, 4)), 1) * 0.3))


def test_criterion_agrees_with_oracle(rng):
    for k in range(300):
        alpha = cgauss(rng, ()) + 0.1
        p = random_params(rng)
        m = UpperNilpotent4.from_matrix(construct_exceptional(p))
        if k % 3 == 1:
            m = UpperNilpotent4(*(np.array(m.a) + 1e-3 * cgauss(rng, 6)))
        elif k % 3 == 2:
            m = UpperNilpotent4.from_matrix(random_nilpotent(rng, conjugate=False))
        crit = exceptional_criterion(m)
        A = alpha * m.matrix()
        oracle = any(
            angle_distance(e.theta, np.angle(alpha)) <= 1e-6 and abs(e.value + abs(alpha) / 2) <= 1e-6 * (1 + abs(alpha))
            for e in exceptional_angles(A)
        )
        assert crit == oracle == (k % 3 == 0), k


def branch_params(rng, k):
    """Draws hitting the generic branch and the three single-zero branches."""
    p = random_params(rng)
    a = list(p.a)
    j = k % 4
    if j:
        a[j - 1] = np.exp(1j * rng.uniform(0, 2 * np.pi))
        if k % 8 >= 4:
            # equal remaining radii: the decision rests on an argument relation
            others = [i for i in range(3) if i != j - 1]
            a[others[1]] = a[others[0]] * np.exp(1j * rng.uniform(0, 2 * np.pi))
    return ExceptionalParams(1.0, *a, p.theta1, p.theta2)


def test_flat_test_agrees_with_oracle(rng):
    seen = set()
    for k in range(160):
        p = branch_params(rng, k)
        res = flat_branch(p)
        seen.add(res.branch)
        want = oracle_flat_on_line(construct_exceptional(p), p.line)
        assert has_flat_on_line(p) == want, (k, res)
    assert {"i", "ii", "iii", "iv"} <= seen


def test_flat_test_argument_relation():
    # |a1| = 1 and r2 = r3: flat iff the arguments of a3 and a2 differ by theta3
    p = ExceptionalParams(1.0, 1.0, 0.5, 0.5 * np.exp(0.7j), 0.2, 0.9)
    assert flat_branch(p) == (False, "ii")
    assert not oracle_flat_on_line(construct_exceptional(p), p.line)
    q = ExceptionalParams(1.0, 1.0, 0.5, 0.5 * np.exp(0.3j), 0.2, 0.9)
    assert flat_branch(q) == (True, "ii")
    assert oracle_flat_on_line(construct_exceptional(q), q.line)
    assert flat_branch(ExceptionalParams(1.0, 1.0, 1.0, 0.3)).branch == "two-zero"
    z = ExceptionalParams(1.0, 1.0, 0.0, 0.0)
    assert flat_branch(z) == (None, "ii:not-applicable")
    assert has_flat_on_line(z) == oracle_flat_on_line(construct_exceptional(z), z.line)


def test_parallel_canonical_validation():
    with pytest.raises(BadParams):
        parallel_canonical(0.0, 1.0, 1.0)
    with pytest.raises(BadParams):
        parallel_canonical(1.0, 1j, 1.0)
    with pytest.raises(BadParams):
        parallel_canonical(1.0, 1.0, 1.0, 0)


def test_parallel_form_sweep(rng):
    for _ in range(200):
        a1, a3 = rng.uniform(0.1, 3, 2)
        a2 = rng.normal()
        alpha = cgauss(rng, ()) * 2
        U = haar_unitary(4, rng)
        A = U @ parallel_canonical(a1, a2, a3, alpha) @ U.conj().T
        fps = flat_portions(A)
        assert len(fps) == 2
        dist = parallel_distance(a1, a2, a3, alpha)
        for fp in fps:
            assert abs(-fp.line.d - dist) <= 1e-8 * dist
            assert angle_distance(2 * fp.direction_angle, 2 * np.angle(alpha)) <= 2e-6
        m = match_parallel_canonical(A, fps[0].direction_angle)
        assert m.matched
        np.testing.assert_allclose([m.a1, abs(m.a2), m.a3], np.array([a1, abs(a2), a3]) * abs(alpha), rtol=1e-7, atol=1e-9)


def test_parallel_match_rejects():
    fp = flat_portions(WITHFLAT)[0]
    assert not match_parallel_canonical(WITHFLAT, fp.direction_angle).matched
    A = parallel_canonical(1.0, 0.5, 2.0)
    assert not match_parallel_canonical(A, np.pi / 2).matched
    B = A.copy()
    B[0, 3] += 0.1
    assert not match_parallel_canonical(B, 0.0).matched


def test_real_family_eigenvalues(rng):
    for _ in range(100):
        a = rng.normal(size=3) * 2
        t = rng.uniform(0, 2 * np.pi)
        R, _ = rotated_parts(real_family_matrix(*a), t)
        got = np.sort(real_family_eigenvalues(*a, t))
        np.testing.assert_allclose(got, eigvalsh(R), atol=1e-12 * (1 + np.abs(a).sum()))


def test_real_family_example():
    A = real_family_matrix(1, 2, -1)
    np.testing.assert_allclose(real_family_eigenvalues(1, 2, -1, 0.0), [-2, 1, 0, 1], atol=1e-15)
    fps = flat_portions(A)
    assert len(fps) == 1 and is_vertical(fps[0])
    assert fps[0].line.theta == pytest.approx(np.pi) and fps[0].line.d == pytest.approx(-1.0)
    assert real_family_vertical_flat(1, 2, -1)
    assert not real_family_vertical_flat(1, 0.5, 1)
    assert not real_family_vertical_flat(1, 2, 1.5)
    with pytest.raises(ZeroA1):
        real_family_vertical_flat(0, 1, 1)


def test_real_family_vertical_flat_agrees(rng):
    for k in range(100):
        a1, a2, a3 = rng.uniform(-2, 2, 3)
        if k % 2:
            a3 = a1 * rng.choice([-1, 1])
        want = any(is_vertical(fp) for fp in flat_portions(real_family_matrix(a1, a2, a3)))
        assert real_family_vertical_flat(a1, a2, a3) == want
