"""Orthogonal/unitary transform chains and correction certificates.

Every construction in this library is a similarity chain applied to a
diagonal seed: result = T_k ... T_1 diag(initial) T_1* ... T_k*. Certificates
store the seed and the ordered chain so a verifier can rebuild the result
from scratch. Each transform carries a stage tag:

* ``pre``     near-identity rotations acting before the eigenbasis (trace
              compensation inside a strong block),
* ``basis``   the eigenbasis factor, or any unconstrained orthogonal part,
* ``post``    near-identity rotations acting after the eigenbasis (diagonal
              restoration),
* ``balance`` block-level queue rotations on the eigenvalue matrix (may be
              far from the identity for equal-diagonal scalar pairs),
* ``perm``    the final relabeling back to the caller's index order.

The near-identity factor norms reported by a certificate cover the ``pre``
and ``post`` stage products only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import linalg
from .linalg import DenseHermitian, GivensParams

STAGE_PRE = "pre"
STAGE_BASIS = "basis"
STAGE_POST = "post"
STAGE_BALANCE = "balance"
STAGE_PERM = "perm"


@dataclass(frozen=True, eq=False)
class RotationTransform:
    params: GivensParams
    stage: str = STAGE_BASIS


@dataclass(frozen=True, eq=False)
class BasisTransform:
    """Orthogonal/unitary block embedded at the given positions."""

    positions: tuple
    matrix: np.ndarray
    stage: str = STAGE_BASIS


@dataclass(frozen=True, eq=False)
class PermutationTransform:
    """Relabeling with result[a, b] = M[perm[a], perm[b]]."""

    perm: tuple
    stage: str = STAGE_PERM


Transform = Union[RotationTransform, BasisTransform, PermutationTransform]


def transform_matrix(t: Transform, n: int, kind: str) -> np.ndarray:
    m = np.eye(n, dtype=linalg.working_dtype(kind))
    if isinstance(t, RotationTransform):
        g = t.params
        u = g.matrix2()
        m[np.ix_([g.i, g.j], [g.i, g.j])] = u
    elif isinstance(t, BasisTransform):
        pos = list(t.positions)
        m[np.ix_(pos, pos)] = t.matrix
    elif isinstance(t, PermutationTransform):
        m = np.zeros((n, n), dtype=linalg.working_dtype(kind))
        for a, src in enumerate(t.perm):
            m[a, src] = 1.0
    else:
        raise TypeError(f"unknown transform {type(t)!r}")
    return m


def apply_transform(m: np.ndarray, t: Transform, kind: str) -> np.ndarray:
    """Return T m T*, touching only the indices the transform acts on."""
    if isinstance(t, RotationTransform):
        out = m.copy()
        linalg.apply_givens_dense(out, t.params, kind)
        return out
    if isinstance(t, BasisTransform):
        out = m.copy()
        pos = list(t.positions)
        u = np.asarray(t.matrix)
        out[pos, :] = u @ out[pos, :]
        out[:, pos] = out[:, pos] @ u.conj().T
        if kind == linalg.KIND_HERM:
            for p in pos:
                out[p, p] = out[p, p].real
        return out
    if isinstance(t, PermutationTransform):
        idx = list(t.perm)
        return m[np.ix_(idx, idx)].copy()
    raise TypeError(f"unknown transform {type(t)!r}")


def chain_apply(initial_diag: np.ndarray, transforms: list, kind: str) -> np.ndarray:
    m = np.diag(np.asarray(initial_diag, dtype=np.float64)).astype(linalg.working_dtype(kind))
    for t in transforms:
        m = apply_transform(m, t, kind)
    return m


def stage_distance(transforms: list, n: int, kind: str, stage: str) -> float:
    """Frobenius distance of the product of stage-tagged factors from identity."""
    prod = np.eye(n, dtype=linalg.working_dtype(kind))
    seen = False
    for t in transforms:
        if t.stage == stage:
            prod = transform_matrix(t, n, kind) @ prod
            seen = True
    if not seen:
        return 0.0
    return float(np.linalg.norm(prod - np.eye(n)))


def max_orthogonality_defect(transforms: list, n: int, kind: str) -> float:
    worst = 0.0
    for t in transforms:
        u = transform_matrix(t, n, kind)
        worst = max(worst, float(np.linalg.norm(u.conj().T @ u - np.eye(n))))
    return worst


@dataclass
class CorrectionStep:
    """One queue/rotation event: plane indices, rotation, perturbations after."""

    i: int
    j: int
    rotation: GivensParams
    updated_perturbations: tuple


@dataclass
class CorrectionCertificate:
    """Constructed matrix plus the transform chain that produced it.

    ``initial`` is the positioned diagonal the chain starts from (a
    permutation of the requested spectrum). Residuals are recomputed at
    construction: ``diag_residual`` is the max deviation of the result's
    diagonal from its target, ``spectrum_residual`` the max eigenvalue
    deviation from the sorted requested spectrum (via an independent
    decomposition), and ``distance_to_original`` the Frobenius distance to
    the matrix being perturbed.
    """

    result: DenseHermitian
    steps: list
    transforms: list
    initial: np.ndarray
    diag_residual: float
    spectrum_residual: float
    distance_to_original: float
    gnorm_pre: float = 0.0
    gnorm_post: float = 0.0
    extras: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "result": self.result.to_json(),
            "initial": [float(x) for x in self.initial],
            "steps": [
                {
                    "i": s.i,
                    "j": s.j,
                    "rotation": _givens_to_json(s.rotation),
                    "updated_perturbations": [float(x) for x in s.updated_perturbations],
                }
                for s in self.steps
            ],
            "transforms": [transform_to_json(t) for t in self.transforms],
            "residuals": {
                "diag": self.diag_residual,
                "spectrum": self.spectrum_residual,
                "distance_to_original": self.distance_to_original,
                "gnorm_pre": self.gnorm_pre,
                "gnorm_post": self.gnorm_post,
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "CorrectionCertificate":
        res = data["residuals"]
        return cls(
            result=DenseHermitian.from_json(data["result"]),
            steps=[
                CorrectionStep(
                    i=int(s["i"]),
                    j=int(s["j"]),
                    rotation=_givens_from_json(s["rotation"]),
                    updated_perturbations=tuple(s["updated_perturbations"]),
                )
                for s in data["steps"]
            ],
            transforms=[transform_from_json(t) for t in data["transforms"]],
            initial=np.asarray(data["initial"], dtype=np.float64),
            diag_residual=float(res["diag"]),
            spectrum_residual=float(res["spectrum"]),
            distance_to_original=float(res["distance_to_original"]),
            gnorm_pre=float(res.get("gnorm_pre", 0.0)),
            gnorm_post=float(res.get("gnorm_post", 0.0)),
        )


def _givens_to_json(g: GivensParams) -> dict:
    return {"i": g.i, "j": g.j, "theta": g.theta, "phi": g.phi, "psi": g.psi}


def _givens_from_json(data: dict) -> GivensParams:
    return GivensParams(
        int(data["i"]), int(data["j"]), float(data["theta"]), float(data.get("phi", 0.0)), float(data.get("psi", 0.0))
    )


def transform_to_json(t: Transform) -> dict:
    if isinstance(t, RotationTransform):
        return {"kind": "rotation", "stage": t.stage, **_givens_to_json(t.params)}
    if isinstance(t, BasisTransform):
        mat = np.asarray(t.matrix)
        payload: dict = {
            "kind": "basis",
            "stage": t.stage,
            "positions": [int(p) for p in t.positions],
            "re": mat.real.tolist(),
        }
        if np.iscomplexobj(mat):
            payload["im"] = mat.imag.tolist()
        return payload
    if isinstance(t, PermutationTransform):
        return {"kind": "permutation", "stage": t.stage, "perm": [int(p) for p in t.perm]}
    raise TypeError(f"unknown transform {type(t)!r}")


def transform_from_json(data: dict) -> Transform:
    kind = data["kind"]
    if kind == "rotation":
        return RotationTransform(_givens_from_json(data), stage=data.get("stage", STAGE_BASIS))
    if kind == "basis":
        mat = np.asarray(data["re"], dtype=np.float64)
        if "im" in data:
            mat = mat + 1j * np.asarray(data["im"], dtype=np.float64)
        return BasisTransform(tuple(data["positions"]), mat, stage=data.get("stage", STAGE_BASIS))
    if kind == "permutation":
        return PermutationTransform(tuple(data["perm"]), stage=data.get("stage", STAGE_PERM))
    raise ValueError(f"unknown transform kind {kind!r}")


def finish_certificate(
    working: np.ndarray,
    kind: str,
    steps: list,
    transforms: list,
    initial: np.ndarray,
    diag_target: np.ndarray,
    lambda_tilde: np.ndarray,
    original: DenseHermitian | None,
) -> CorrectionCertificate:
    """Pack the working matrix and compute all certificate residuals."""
    result = DenseHermitian.from_dense(working, kind=kind, tol=np.inf)
    n = result.n
    diag_residual = float(np.max(np.abs(result.diag() - np.asarray(diag_target, dtype=np.float64))))
    spec = linalg.eig_sym(result)
    lam_sorted = np.sort(np.asarray(lambda_tilde, dtype=np.float64), kind="stable")
    spectrum_residual = float(np.max(np.abs(spec.eigenvalues - lam_sorted)))
    distance = linalg.fro_dist(result, original) if original is not None else 0.0
    return CorrectionCertificate(
        result=result,
        steps=steps,
        transforms=transforms,
        initial=np.asarray(initial, dtype=np.float64).copy(),
        diag_residual=diag_residual,
        spectrum_residual=spectrum_residual,
        distance_to_original=distance,
        gnorm_pre=stage_distance(transforms, n, kind, STAGE_PRE),
        gnorm_post=stage_distance(transforms, n, kind, STAGE_POST),
    )
