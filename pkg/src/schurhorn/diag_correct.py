"""Priority-queue diagonal correction.

Given a target diagonal d and a spectrum lam majorized by d, build a
symmetric matrix with diagonal exactly d and spectrum lam, starting from
diag(sorted lam) paired entrywise with sorted d. The scan walks the indices
in order, enqueueing deficits (perturbation below target) and, on meeting a
surplus index j, repeatedly pops a deficit i and applies the two-by-two
correction rotation on the plane (i, j). Each step zeroes the perturbation
at i and accumulates it at j, so the majorization prefix inequalities are
preserved and the procedure terminates after at most n(n-1)/2 rotations.

The queue pops the smallest enqueued index by default. A seeded generator
may be supplied to randomize pop order; any pop discipline yields a valid
construction, which the harness uses to sample distinct members of the
equivalence class.
"""

from __future__ import annotations

import heapq

import numpy as np

from . import givens, linalg, majorization, transforms
from .errors import DimensionMismatch, MajorizationViolated
from .linalg import KIND_SYM, DenseHermitian, GivensParams
from .rng import CounterRNG
from .transforms import CorrectionCertificate, CorrectionStep, PermutationTransform, RotationTransform

_STEP_LIMIT_MARGIN = 4


def rotate_fix_entry(
    working: np.ndarray,
    kind: str,
    p_fix: int,
    p_other: int,
    target: float,
    stage: str,
    rec: list,
) -> GivensParams:
    """Rotate the (p_fix, p_other) plane so working[p_fix, p_fix] becomes target.

    Handles either slot order by solving the swapped problem when p_fix is
    the larger index. Mutates ``working`` in place and records the transform.
    """
    i, j = (p_fix, p_other) if p_fix < p_other else (p_other, p_fix)
    b_fix = working[p_fix, p_fix].real
    b_oth = working[p_other, p_other].real
    b12 = complex(working[p_fix, p_other])
    if kind == KIND_SYM:
        params = givens.solve_correction_angle(
            givens.TwoByTwoProblem(b_fix, b_oth, b12.real, float(target), b_oth)
        )
    else:
        params = givens.solve_correction_angle_hermitian(
            givens.TwoByTwoProblem(b_fix, b_oth, b12, float(target), b_oth)
        )
    if p_fix > p_other:
        params = params.swapped()
    params = params.with_plane(i, j)
    linalg.apply_givens_dense(working, params, kind)
    rec.append(RotationTransform(params, stage=stage))
    return params


def queue_balance(
    working: np.ndarray,
    kind: str,
    block_positions: list,
    block_targets,
    zero_tol: float,
    stage: str,
    rec: list,
    steps: list,
    rng: CounterRNG | None = None,
) -> None:
    """Run the scan/enqueue/pop loop over blocks of diagonal positions.

    ``block_targets[b]`` is the required trace of block b; singleton blocks
    recover the plain diagonal correction. Surplus always moves between the
    smallest current entry of the popped block and the largest current entry
    of the surplus block, both read from the live matrix.
    """
    targets = np.asarray(block_targets, dtype=np.float64)
    p = len(block_positions)

    def offset(b: int) -> float:
        return float(sum(working[q, q].real for q in block_positions[b]) - targets[b])

    queue: list[int] = []
    n = working.shape[0]
    limit = n * (n - 1) // 2 + n + _STEP_LIMIT_MARGIN
    spent = 0
    for j in range(p):
        while True:
            hj = offset(j)
            if abs(hj) <= zero_tol:
                break
            if hj < 0.0:
                if rng is None:
                    heapq.heappush(queue, j)
                else:
                    queue.append(j)
                break
            if not queue:
                raise RuntimeError("surplus with empty queue; majorization precheck missed a violation")
            i = heapq.heappop(queue) if rng is None else queue.pop(rng.randint(len(queue)))
            hi = offset(i)
            pos_i = min(block_positions[i], key=lambda q: (working[q, q].real, q))
            pos_j = max(block_positions[j], key=lambda q: (working[q, q].real, -q))
            params = rotate_fix_entry(
                working,
                kind,
                p_fix=pos_i,
                p_other=pos_j,
                target=working[pos_i, pos_i].real - hi,
                stage=stage,
                rec=rec,
            )
            steps.append(CorrectionStep(pos_i, pos_j, params, (offset(i), offset(j))))
            spent += 1
            if spent > limit:
                raise RuntimeError("rotation budget exceeded")


def correct_diagonal(d, lambda_tilde, rng: CounterRNG | None = None) -> CorrectionCertificate:
    """Construct a symmetric matrix with diagonal d and spectrum lambda_tilde.

    Requires lambda_tilde majorized by d; raises MajorizationViolated with the
    first offending partial-sum index otherwise. Input order is arbitrary; the
    result is reported in the caller's index order for d.
    """
    d = np.asarray(d, dtype=np.float64)
    lam = np.asarray(lambda_tilde, dtype=np.float64)
    if d.shape != lam.shape or d.ndim != 1:
        raise DimensionMismatch("d and lambda_tilde must be equal-length vectors")
    report = majorization.check_majorization(lam, d)
    if not report.holds:
        raise MajorizationViolated(report.first_violation())

    order = np.argsort(d, kind="stable")
    d_sorted = d[order]
    lam_sorted = np.sort(lam, kind="stable")
    n = d.size

    working = np.diag(lam_sorted)
    rec: list = []
    steps: list = []
    queue_balance(
        working,
        KIND_SYM,
        [[k] for k in range(n)],
        d_sorted,
        majorization.default_tau_trace(d),
        transforms.STAGE_BASIS,
        rec,
        steps,
        rng=rng,
    )

    # rank[a] is the sorted-frame position of original index a
    rank = np.empty(n, dtype=int)
    rank[order] = np.arange(n)
    if not np.array_equal(rank, np.arange(n)):
        rec.append(PermutationTransform(tuple(int(r) for r in rank)))
        working = working[np.ix_(rank, rank)]

    return transforms.finish_certificate(
        working=working,
        kind=KIND_SYM,
        steps=steps,
        transforms=rec,
        initial=lam_sorted,
        diag_target=d,
        lambda_tilde=lam,
        original=DenseHermitian.from_diag(d),
    )


def correction_trace(d, lambda_tilde) -> list:
    """Step sequence of the queue procedure, without the assembled matrices."""
    return correct_diagonal(d, lambda_tilde).steps
