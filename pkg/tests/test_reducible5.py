import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from nilrange.certify import random_reducible5_params
from nilrange.errors import BadParams
from nilrange.linalg import eigvalsh, is_nilpotent, re_part
from nilrange.numrange import flat_portions, support_value
from nilrange.reducible5 import (
    Reducible5Params,
    assemble_5x5,
    cardioid_curve,
    cardioid_point,
    cubic_max_root,
    flat_count_5x5,
    support_distance_3x3,
)

GRID = np.linspace(0, 2 * np.pi, 256)
positive = st.floats(0.05, 5.0)


def block3(p):
    return assemble_5x5(p)[2:, 2:]


def test_params_validation():
    with pytest.raises(BadParams):
        Reducible5Params(0, 1, 1, 1)
    with pytest.raises(BadParams):
        Reducible5Params(1, 1, -1, 1)
    with pytest.raises(BadParams):
        Reducible5Params(1, np.inf, 1, 1)
    p = Reducible5Params(1, 1, 2, 3)
    assert (p.s, p.t, p.equal) == (14, 6, False)
    assert Reducible5Params(2, 3, 3, 3).equal


def test_support_distance_examples():
    p = Reducible5Params(1, 3, 3, 3)
    assert support_distance_3x3(p, 0.0) == pytest.approx(3.0, abs=1e-14)
    assert support_distance_3x3(p, np.pi) == pytest.approx(1.5, abs=1e-14)
    q = Reducible5Params(1, 1, 0, 2)
    np.testing.assert_allclose(support_distance_3x3(q, GRID), np.sqrt(5) / 2, atol=1e-15)
    with pytest.raises(BadParams):
        support_distance_3x3((1, 1, 1, 1), 0.0)


def test_cardioid_points():
    assert cardioid_point(0) == pytest.approx(3)
    assert cardioid_point(2 * np.pi / 3) == pytest.approx(-1.5 + 1j * np.sqrt(3) / 2)
    assert cardioid_point(np.pi) == pytest.approx(-1)
    for t in GRID:
        assert abs(abs(cardioid_point(t)) - np.sqrt(5 + 4 * np.cos(t))) <= 1e-12
    c = cardioid_curve(3.0, 65)
    assert c[32] == pytest.approx(3.0) and c[0] == pytest.approx(-1.5 - 1j * np.sqrt(3) / 2)


def test_viete_matches_companion_and_eigensolver(rng):
    for k in range(50):
        r1, r2, r3 = rng.uniform(0.1, 3, 3)
        p = Reducible5Params(1.0, r1, r2, r3)
        d = support_distance_3x3(p, GRID)
        roots = np.array([cubic_max_root(p, t) for t in GRID])
        np.testing.assert_allclose(d, roots / 2, atol=1e-12)
        if k < 10:
            A2 = block3(p)
            for t in GRID[::32]:
                lam = eigvalsh(re_part(np.exp(1j * t) * A2))[-1]
                assert d[list(GRID).index(t)] == pytest.approx(lam, abs=1e-12)


@given(positive, st.floats(0, 5.0), positive)
def test_monotone_in_cos(r1, r2, r3):
    p = Reducible5Params(1.0, r1, r2, r3)
    c = np.linspace(-1, 1, 101)
    d = support_distance_3x3(p, np.arccos(c))
    if p.t / p.s**1.5 > 1e-6:
        assert np.all(np.diff(d) > 0)
    else:
        assert np.all(np.diff(d) >= -1e-15)


@pytest.mark.parametrize("rho", [3.0, 1.0, 0.4])
def test_cardioid_hull(rho):
    p = Reducible5Params(1.0, rho, rho, rho)
    for t in GRID[::8]:
        f = lambda phi: -(np.exp(1j * t) * rho / 3 * cardioid_point(phi)).real  # noqa: E731
        phis = np.linspace(-2 * np.pi / 3, 2 * np.pi / 3, 2001)
        vals = np.array([f(x) for x in phis])
        k = int(np.argmin(vals))
        lo, hi = phis[max(k - 1, 0)], phis[min(k + 1, phis.size - 1)]
        best = min(vals[k], minimize_scalar(f, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}).fun)
        assert abs(-best - support_distance_3x3(p, t)) <= 1e-8 * rho


def test_classification_examples():
    cases = {(3.3, 3.0): 2, (3.3, 3.3): 1, (2.0, 3.0): 1, (7.0, 3.0): 0, (1.0, 3.0): 1}
    for (r, rho), want in cases.items():
        p = Reducible5Params(r, rho, rho, rho)
        assert flat_count_5x5(p) == want
        A = assemble_5x5(p)
        assert is_nilpotent(A)
        assert len(flat_portions(A)) == want
    assert flat_count_5x5(Reducible5Params(2, 1, 0, 1)) == 0
    assert flat_portions(assemble_5x5(Reducible5Params(2, 1, 0, 1))) == []
    assert support_value(assemble_5x5(Reducible5Params(2, 1, 0, 1)), 0.3) == pytest.approx(-1.0)
    with pytest.raises(BadParams):
        flat_count_5x5((1, 1, 1, 1))


def thresholds(p):
    if p.equal:
        return [p.r1, 2 * p.r1]
    return [2 * support_distance_3x3(p, np.pi), 2 * support_distance_3x3(p, 0.0)]


def test_classification_matches_oracle(rng):
    checked = 0
    for k in range(200):
        p = random_reducible5_params(rng)
        if k % 4 == 0:
            # push r towards a threshold to exercise the boundary logic
            th = rng.choice(thresholds(p))
            p = Reducible5Params(th * (1 + rng.choice([-1, 1]) * rng.uniform(2e-4, 2e-2)), p.r1, p.r2, p.r3)
        if min(abs(p.r - th) for th in thresholds(p)) <= 1e-4 * p.r:
            continue
        count = len(flat_portions(assemble_5x5(p)))
        assert count <= 2
        assert flat_count_5x5(p) == count, p
        checked += 1
    assert checked > 150
