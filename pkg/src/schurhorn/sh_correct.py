"""End-to-end correction for arbitrary symmetric or Hermitian matrices.

Pipeline: decompose into window-ordered blocks, check the block-wise
majorization of the requested spectrum against the block traces, balance the
block traces with queue-driven rotations on the eigenvalue matrix, then hand
each block to its strong correction. The assembled chain is

    result = P^T ( G2 Q G1 R diag(lam~) R^T G1^T Q^T G2^T ) P

with R the balance rotations, G1/G2 the block-diagonal near-identity factors
of the strong corrections, Q the block eigenbases, and P the decomposition
permutation. The distance to the input matrix is O(sqrt(eps)) for an O(eps)
admissible perturbation.
"""

from __future__ import annotations

import numpy as np

from . import linalg, majorization, strong_sh, transforms
from .diag_correct import queue_balance
from .errors import DimensionMismatch, MajorizationViolated
from .linalg import KIND_HERM, KIND_SYM, DenseHermitian
from .transforms import CorrectionCertificate, PermutationTransform


def _correct_general(a: DenseHermitian, lambda_tilde) -> CorrectionCertificate:
    lam = np.asarray(lambda_tilde, dtype=np.float64)
    if lam.shape != (a.n,):
        raise DimensionMismatch("spectrum length must match the matrix dimension")
    partition = strong_sh.block_decompose(a)
    perm = partition.permutation
    dense = a.to_dense()
    aperm = dense[np.ix_(perm, perm)]
    traces = np.array(
        [float(np.sum(aperm.diagonal()[b.start : b.stop].real)) for b in partition.blocks]
    )

    report = majorization.blockwise_majorization(lam, traces, partition)
    if not report.holds:
        raise MajorizationViolated(report.first_violation())

    tau_struct = strong_sh.default_tau_struct(a)
    zero_tol = majorization.default_tau_trace(a.diag())

    # position the sorted spectrum: contiguous slices per block, and inside a
    # block each component takes the values matching its own eigenvalue ranks
    lam_sorted = np.sort(lam, kind="stable")
    initial = np.empty(a.n, dtype=np.float64)
    start = 0
    for block in partition.blocks:
        chunk = lam_sorted[start : start + block.size]
        start += block.size
        sub = aperm[block.start : block.stop, block.start : block.stop]
        comps = strong_sh._components_dense(sub, tau_struct)
        if len(comps) == 1:
            initial[block.start : block.stop] = chunk
            continue
        regions = [
            strong_sh._make_region(c + block.start, sub[np.ix_(c, c)], a.kind) for c in comps
        ]
        regions.sort(key=lambda r: (r.window.lo, r.window.hi, int(r.positions[0])))
        assigned = strong_sh._rank_assignment(chunk, [r.eigvals for r in regions])
        for reg, values in zip(regions, assigned):
            initial[reg.positions] = values

    working = np.diag(initial).astype(linalg.working_dtype(a.kind))
    rec: list = []
    steps: list = []
    queue_balance(
        working,
        a.kind,
        [list(range(b.start, b.stop)) for b in partition.blocks],
        traces,
        zero_tol,
        transforms.STAGE_BALANCE,
        rec,
        steps,
    )
    for block in partition.blocks:
        strong_sh._correct_region(
            working,
            rec,
            steps,
            a.kind,
            np.arange(block.start, block.stop),
            aperm[block.start : block.stop, block.start : block.stop],
            tau_struct,
            zero_tol,
        )

    rank = np.empty(a.n, dtype=int)
    rank[perm] = np.arange(a.n)
    if not np.array_equal(rank, np.arange(a.n)):
        rec.append(PermutationTransform(tuple(int(r) for r in rank)))
        working = working[np.ix_(rank, rank)]

    return transforms.finish_certificate(
        working, a.kind, steps, rec, initial, a.diag(), lam, original=a
    )


def schur_horn_correct(a: DenseHermitian, lambda_tilde) -> CorrectionCertificate:
    """Realize an admissible spectrum perturbation with the diagonal held fixed.

    Raises MajorizationViolated (with the offending block index) when the
    block-wise relation between the sorted spectrum and the block traces
    fails; block-level construction errors propagate.
    """
    if a.kind != KIND_SYM:
        raise DimensionMismatch("expected a real-symmetric matrix")
    return _correct_general(a, lambda_tilde)


def schur_horn_correct_hermitian(a: DenseHermitian, lambda_tilde) -> CorrectionCertificate:
    """Hermitian variant; complex rotations carry their phases in the chain."""
    if a.kind != KIND_HERM:
        raise DimensionMismatch("expected a complex-Hermitian matrix")
    return _correct_general(a, lambda_tilde)
