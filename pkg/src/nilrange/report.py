"""Aggregated analysis of a single matrix, serialized as key-sorted JSON."""

import json
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .errors import NotNilpotent
from .families import UpperNilpotent4, exceptional_criterion
from .kippenhahn import (
    coeffs_nilpotent4,
    default_search_radius,
    kippenhahn_form,
    singular_points,
)
from .linalg import as_cmat, is_nilpotent, nilpotent_triangularize
from .matrixio import matrix_hash
from .numrange import N_SCAN, exceptional_angles, flat_portions, is_degenerate
from .reducible5 import Reducible5Params, flat_count_5x5


def cjson(z):
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


@dataclass
class AnalysisReport:
    input_hash: str
    n: int
    version: str = __version__
    seed: Optional[int] = None
    notes: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    degenerate: Optional[dict] = None
    exceptional_angles: list = field(default_factory=list)
    flat_portions: list = field(default_factory=list)
    kippenhahn: Optional[dict] = None
    kippenhahn_form: list = field(default_factory=list)
    singular_points: list = field(default_factory=list)
    closed_form: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))


def detect_reducible5(A):
    """Parameters if A has exactly the block pattern of the 2x2 + 3x3 family."""
    if A.shape != (5, 5):
        return None
    mask = np.zeros((5, 5), dtype=bool)
    mask[0, 1] = mask[2, 3] = mask[2, 4] = mask[3, 4] = True
    if np.any(A[~mask] != 0) or np.any(A[mask].imag != 0):
        return None
    try:
        return Reducible5Params(A[0, 1].real, A[2, 3].real, A[2, 4].real, A[3, 4].real)
    except ValueError:
        return None


def _degenerate_info(A):
    n = A.shape[0]
    ev = np.linalg.eigvals(A)
    if np.ptp(ev.real) + np.ptp(ev.imag) <= 1e-10 * (1 + np.abs(A).max()):
        return {"kind": "point", "points": [cjson(np.trace(A) / n)]}
    i, j = np.unravel_index(np.argmax(np.abs(ev[:, None] - ev[None, :])), (n, n))
    a, b = sorted((ev[i], ev[j]), key=lambda z: (z.real, z.imag))
    return {"kind": "segment", "points": [cjson(a), cjson(b)]}


def analyze(A, n_scan=N_SCAN, tol_mult=None, tol_flat=None, only_flats=False, seed=None):
    """Run the oracle and every applicable closed-form check on ``A``."""
    A = as_cmat(A)
    n = A.shape[0]
    rep = AnalysisReport(input_hash=matrix_hash(A), n=n, seed=seed)
    rep.tolerances = {"n_scan": n_scan, "tol_mult": tol_mult, "tol_flat": tol_flat}
    nil = is_nilpotent(A)
    if nil:
        rep.notes.append(f"nilpotent {n}x{n}")
    fam5 = detect_reducible5(A)
    if fam5 is not None:
        rep.notes.append("reducible 5x5 family")
        rep.closed_form["flat_count_5x5"] = flat_count_5x5(fam5)

    if is_degenerate(A):
        rep.degenerate = _degenerate_info(A)
        rep.notes.append(f"degenerate range ({rep.degenerate['kind']})")
        return rep

    exc = exceptional_angles(A, n_scan=n_scan, tol_mult=tol_mult)
    fps = flat_portions(A, tol_flat=tol_flat, exceptional=exc)
    rep.flat_portions = [
        {
            "theta": fp.line.theta,
            "d": fp.line.d,
            "z1": cjson(fp.z1),
            "z2": cjson(fp.z2),
            "length": fp.length,
        }
        for fp in fps
    ]
    if only_flats:
        return rep
    rep.exceptional_angles = [
        {"theta": e.theta, "d": e.value, "dim": e.dim, "gap": e.gap, "continuum": e.continuum}
        for e in exc
    ]
    rep.kippenhahn_form = [[i, j, k, c] for (i, j, k), c in sorted(kippenhahn_form(A).as_dict().items())]

    if nil and n == 4:
        q = coeffs_nilpotent4(A)
        rep.kippenhahn = {f"c{k}": float(v) for k, v in enumerate(q.c, 1)}
        rep.kippenhahn["imag"] = q.imag
        seeds = [fp.line.line_coordinates() for fp in fps if abs(fp.line.d) > 1e-12]
        pts = singular_points(q, default_search_radius(A), seeds=seeds or None)
        rep.singular_points = [{"u": p.u, "v": p.v, "residual": p.residual} for p in pts]
        try:
            _, T = nilpotent_triangularize(A)
        except NotNilpotent:
            T = None
        if T is not None:
            m = UpperNilpotent4.from_matrix(T, tol=1e-8)
            checks = []
            for e in exc:
                if e.value < 0:
                    alpha = -2 * e.value * np.exp(1j * e.theta)
                    scaled = UpperNilpotent4(*(np.array(m.a) / alpha))
                    checks.append({"theta": e.theta, "criterion": exceptional_criterion(scaled)})
            rep.closed_form["exceptional_criterion"] = checks
    return rep
