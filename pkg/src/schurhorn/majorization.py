"""Majorization predicates on real vectors, with strictness classification.

Convention: ``lam`` is majorized by ``d`` when the ascending partial sums of
``lam`` never exceed those of ``d`` and the totals agree. The per-index slack
is ``slack_k = sum(d_sorted[:k+1]) - sum(lam_sorted[:k+1])`` for
k = 0 .. n-2, so the relation holds exactly when every slack is nonnegative
and the trace residual vanishes. Tolerances default to scale-aware values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, MajorizationFails, PartitionMismatch


def default_tau_maj(d) -> float:
    d = np.asarray(d, dtype=np.float64)
    peak = float(np.max(np.abs(d))) if d.size else 0.0
    return 1e-12 * (1.0 + peak)


def default_tau_trace(d) -> float:
    d = np.asarray(d, dtype=np.float64)
    peak = float(np.max(np.abs(d))) if d.size else 0.0
    return 1e-12 * d.size * (1.0 + peak)


@dataclass(frozen=True)
class MajorizationReport:
    k_slacks: np.ndarray
    trace_residual: float
    holds: bool
    strict: np.ndarray
    tau_maj: float
    tau_trace: float

    def first_violation(self) -> int | None:
        """Smallest k with slack below -tau_maj, or n-1 for a trace-only failure."""
        bad = np.nonzero(self.k_slacks < -self.tau_maj)[0]
        if bad.size:
            return int(bad[0])
        if abs(self.trace_residual) > self.tau_trace:
            return int(self.k_slacks.size)
        return None


def _report(slacks: np.ndarray, trace_residual: float, tau_maj: float, tau_trace: float) -> MajorizationReport:
    holds = bool(np.all(slacks >= -tau_maj)) and abs(trace_residual) <= tau_trace
    return MajorizationReport(
        k_slacks=slacks,
        trace_residual=float(trace_residual),
        holds=holds,
        strict=slacks > tau_maj,
        tau_maj=tau_maj,
        tau_trace=tau_trace,
    )


def check_majorization(lam, d, tau_maj: float | None = None, tau_trace: float | None = None) -> MajorizationReport:
    """Report whether ``lam`` is majorized by ``d`` (ascending-sum form)."""
    lam = np.asarray(lam, dtype=np.float64)
    d = np.asarray(d, dtype=np.float64)
    if lam.shape != d.shape or lam.ndim != 1 or lam.size < 1:
        raise DimensionMismatch("vectors must be one-dimensional and of equal length")
    if tau_maj is None:
        tau_maj = default_tau_maj(d)
    if tau_trace is None:
        tau_trace = default_tau_trace(d)
    if tau_maj < 0 or tau_trace < 0:
        raise ValueError("tolerances must be nonnegative")
    lam_s = np.sort(lam, kind="stable")
    d_s = np.sort(d, kind="stable")
    slacks = np.cumsum(d_s)[:-1] - np.cumsum(lam_s)[:-1]
    return _report(slacks, float(np.sum(d) - np.sum(lam)), tau_maj, tau_trace)


@dataclass(frozen=True)
class ScalarMatrixCase:
    """All eigenvalues and diagonal entries coincide."""


@dataclass(frozen=True)
class StrictCase:
    """Every partial-sum inequality is strict."""


@dataclass(frozen=True)
class NonStrictCase:
    """Some partial sum is tight; k is the smallest such index."""

    k: int


StrictnessCase = ScalarMatrixCase | StrictCase | NonStrictCase


def classify_strictness(report: MajorizationReport, lam, d) -> StrictnessCase:
    """Classify a holding majorization relation; raises MajorizationFails otherwise."""
    if not report.holds:
        raise MajorizationFails("relation does not hold; nothing to classify")
    lam = np.asarray(lam, dtype=np.float64)
    d = np.asarray(d, dtype=np.float64)
    combined = np.concatenate([lam, d])
    if combined.max() - combined.min() <= report.tau_maj:
        return ScalarMatrixCase()
    if bool(np.all(report.strict)):
        return StrictCase()
    k = int(np.nonzero(~report.strict)[0][0])
    return NonStrictCase(k)


def _partition_sizes(partition) -> list[int]:
    if hasattr(partition, "sizes"):
        sizes = list(partition.sizes)
    else:
        sizes = [int(s) for s in partition]
    if any(s < 1 for s in sizes):
        raise PartitionMismatch("block sizes must be positive")
    return sizes


def blockwise_majorization(
    lambda_tilde,
    block_traces,
    partition,
    tau_maj: float | None = None,
    tau_trace: float | None = None,
) -> MajorizationReport:
    """Majorization over block traces, with lambda assigned to blocks by sorted order.

    Blocks keep the order given by the partition (they are already window
    ordered); only the eigenvalues are sorted before slicing.
    """
    lam = np.asarray(lambda_tilde, dtype=np.float64)
    traces = np.asarray(block_traces, dtype=np.float64)
    sizes = _partition_sizes(partition)
    if sum(sizes) != lam.size:
        raise PartitionMismatch("partition does not cover the eigenvalue vector")
    if traces.shape != (len(sizes),):
        raise PartitionMismatch("one trace per block required")
    if tau_maj is None:
        tau_maj = default_tau_maj(traces)
    if tau_trace is None:
        tau_trace = default_tau_trace(traces)
    lam_s = np.sort(lam, kind="stable")
    sums = np.empty(len(sizes))
    start = 0
    for b, size in enumerate(sizes):
        sums[b] = float(np.sum(lam_s[start : start + size]))
        start += size
    slacks = np.cumsum(traces)[:-1] - np.cumsum(sums)[:-1]
    return _report(slacks, float(np.sum(traces) - np.sum(sums)), tau_maj, tau_trace)
