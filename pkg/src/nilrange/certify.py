"""Seeded random matrix families and the flat-portion certification sweep.

Trial ``k`` of a sweep with seed ``s`` draws from ``default_rng(s + k)``,
so results do not depend on how trials are scheduled across workers.
"""

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from typing import NamedTuple

import numpy as np

from .errors import DegenerateRange
from .numrange import N_SCAN, angle_distance, flat_portions
from .reducible5 import Reducible5Params, assemble_5x5


def complex_gaussian(rng, shape):
    """Standard complex Gaussian entries (E|z|^2 = 1)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def haar_unitary(n, rng):
    """Haar-distributed unitary from the QR factorization of a Gaussian matrix."""
    Q, R = np.linalg.qr(complex_gaussian(rng, (n, n)))
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_nilpotent(rng, n=4, conjugate=True):
    T = np.triu(complex_gaussian(rng, (n, n)), 1)
    if not conjugate:
        return T
    U = haar_unitary(n, rng)
    return U @ T @ U.conj().T


def random_general(rng, n=4):
    return complex_gaussian(rng, (n, n))


_BLOCKS = ((3, 1), (2, 2), (2, 1, 1))


def random_reducible_nilpotent(rng, n=4):
    """Direct sum of nilpotent triangular blocks, conjugated by a Haar unitary."""
    sizes = _BLOCKS[rng.integers(len(_BLOCKS))] if n == 4 else (n - 1, 1)
    A = np.zeros((n, n), dtype=np.complex128)
    k = 0
    for m in sizes:
        A[k : k + m, k : k + m] = np.triu(complex_gaussian(rng, (m, m)), 1)
        k += m
    U = haar_unitary(n, rng)
    return U @ A @ U.conj().T


def random_reducible5_params(rng):
    """Positive parameters of the 2x2 + 3x3 family; a third of the draws have equal r_j."""
    if rng.random() < 1 / 3:
        rho = rng.uniform(0.5, 3.0)
        return Reducible5Params(rng.uniform(0.2, 2.5) * rho, rho, rho, rho)
    r1, r2, r3 = rng.uniform(0.2, 3.0, 3)
    return Reducible5Params(rng.uniform(0.2, 6.0), r1, r2, r3)


def random_reducible5(rng):
    return assemble_5x5(random_reducible5_params(rng))


FAMILIES = {
    "nilpotent4": (random_nilpotent, 2),
    "general4": (random_general, 4),
    "reducible4": (random_reducible_nilpotent, 1),
    "reducible5": (random_reducible5, 2),
}


def draw(family, seed, index):
    gen, _ = FAMILIES[family]
    return gen(np.random.default_rng(seed + index))


class TrialResult(NamedTuple):
    index: int
    count: int  # -1 for a degenerate range
    parallel_ok: bool


def parallel_consistent(fps, tol=1e-6):
    """Two portions on opposite parallel lines must be the only two."""
    for i in range(len(fps)):
        for j in range(i + 1, len(fps)):
            if angle_distance(fps[i].line.theta, fps[j].line.theta + np.pi) <= tol:
                if len(fps) != 2:
                    return False
    return True


def run_trial(family, seed, index, n_scan=N_SCAN, tol_mult=None, tol_flat=None):
    A = draw(family, seed, index)
    try:
        fps = flat_portions(A, n_scan=n_scan, tol_mult=tol_mult, tol_flat=tol_flat)
    except DegenerateRange:
        return TrialResult(index, -1, True)
    return TrialResult(index, len(fps), parallel_consistent(fps))


def _run_chunk(args):
    family, seed, indices, kw = args
    return [run_trial(family, seed, i, **kw) for i in indices]


class Summary(NamedTuple):
    family: str
    trials: int
    seed: int
    bound: int
    histogram: dict
    violations: list  # trial indices whose count exceeds the bound
    parallel_violations: list
    degenerate: int

    @property
    def ok(self):
        return not self.violations and not self.parallel_violations


def thread_count():
    try:
        return max(1, int(os.environ.get("NR_THREADS", "1")))
    except ValueError:
        return 1


def verify(family, trials, seed, workers=None, **kw):
    """Run ``trials`` seeded draws of ``family`` through the oracle and tally counts."""
    if family not in FAMILIES:
        raise KeyError(family)
    if trials < 1:
        raise ValueError("trials must be positive")
    bound = FAMILIES[family][1]
    workers = thread_count() if workers is None else workers
    idx = list(range(trials))
    if workers > 1:
        chunks = [idx[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            parts = pool.map(_run_chunk, [(family, seed, c, kw) for c in chunks])
            results = sorted((r for part in parts for r in part), key=lambda r: r.index)
    else:
        results = _run_chunk((family, seed, idx, kw))
    hist = Counter(r.count for r in results if r.count >= 0)
    return Summary(
        family=family,
        trials=trials,
        seed=seed,
        bound=bound,
        histogram=dict(sorted(hist.items())),
        violations=[r.index for r in results if r.count > bound],
        parallel_violations=[r.index for r in results if not r.parallel_ok],
        degenerate=sum(r.count < 0 for r in results),
    )
