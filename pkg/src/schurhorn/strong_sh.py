"""Strong corrections: trace-only perturbations realized with near-identity factors.

A matrix is strongly correctable when any trace-preserving O(eps) spectrum
perturbation admits a realization G2 Q G1 diag(lam~) G1* Q* G2* with the same
diagonal, Q an eigenbasis factor, and ||Gi - I|| = O(sqrt(eps)). This module
implements the constructions that witness it:

* connected (irreducible) matrices, by correcting diagonal entries leaf-first
  along a spanning tree of the nonzero pattern;
* block pairs whose spectrum windows overlap on a set of positive measure,
  by one trace-compensating rotation between extreme eigenvalues followed by
  independent per-block corrections;
* a block plus a scalar strictly inside the block's window, identically;
* arbitrary matrices, decomposed by ``block_decompose`` into window-ordered
  blocks that are scalars or strongly correctable.

It also provides the converse tooling: the strictness gate (a non-strict
partial sum means no strong correction exists) and generators of explicit
trace-preserving perturbations that break a chosen majorization inequality.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from . import linalg, majorization, transforms
from .diag_correct import queue_balance, rotate_fix_entry
from .errors import (
    DimensionMismatch,
    EdgeVanished,
    MajorizationViolated,
    NoEqualityAtI,
    NotIrreducible,
    NotStronglyCorrectable,
    ScalarOutsideWindow,
    ScalarSpectrum,
    TraceMismatch,
    WindowsDisjoint,
)
from .linalg import KIND_SYM, DenseHermitian
from .majorization import NonStrictCase, ScalarMatrixCase, StrictCase
from .transforms import BasisTransform, CorrectionCertificate, CorrectionStep

TAG_SCALAR = "Scalar"
TAG_STRONG = "StrongSH"


@dataclass(frozen=True)
class SpectrumWindow:
    """Closed interval between the extreme eigenvalues."""

    lo: float
    hi: float

    @property
    def measure(self) -> float:
        return self.hi - self.lo

    def contains_strictly(self, v: float) -> bool:
        return self.lo < v < self.hi

    def overlap_measure(self, other: "SpectrumWindow") -> float:
        return max(0.0, min(self.hi, other.hi) - max(self.lo, other.lo))

    def hull(self, other: "SpectrumWindow") -> "SpectrumWindow":
        return SpectrumWindow(min(self.lo, other.lo), max(self.hi, other.hi))


@dataclass(frozen=True)
class Block:
    start: int
    stop: int
    tag: str
    window: SpectrumWindow

    @property
    def size(self) -> int:
        return self.stop - self.start


@dataclass(frozen=True)
class BlockPartition:
    """Permutation into contiguous window-ordered blocks.

    ``permutation[k]`` is the original index sitting at permuted position k,
    so the permuted matrix is A[permutation][:, permutation].
    """

    permutation: np.ndarray
    blocks: tuple

    @property
    def sizes(self) -> list:
        return [b.size for b in self.blocks]


def default_tau_struct(a: DenseHermitian) -> float:
    return 1e-12 * a.norm_fro()


def _components_dense(m: np.ndarray, tau: float) -> list:
    """Connected components of the off-diagonal pattern |m_ij| > tau."""
    n = m.shape[0]
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        frontier = deque([start])
        while frontier:
            v = frontier.popleft()
            for w in range(n):
                if w != v and not seen[w] and abs(m[v, w]) > tau:
                    seen[w] = True
                    comp.append(w)
                    frontier.append(w)
        comps.append(np.array(sorted(comp), dtype=int))
    comps.sort(key=lambda c: int(c[0]))
    return comps


def connected_components(a: DenseHermitian, tau_struct: float | None = None) -> list:
    """Index sets of the graph with an edge where |a_ij| exceeds tau_struct."""
    if tau_struct is None:
        tau_struct = default_tau_struct(a)
    if tau_struct < 0:
        raise ValueError("tau_struct must be nonnegative")
    return _components_dense(a.to_dense(), tau_struct)


def _window_of_dense(sub: np.ndarray, kind: str) -> tuple:
    if sub.shape[0] == 1:
        v = float(sub[0, 0].real)
        return SpectrumWindow(v, v), np.array([v])
    values, _, _ = linalg._eig_dense(sub, kind, linalg.DEFAULT_EIG_TOL)
    return SpectrumWindow(float(values[0]), float(values[-1])), values


def spectrum_window(a: DenseHermitian) -> SpectrumWindow:
    """[lambda_min, lambda_max]; positive measure for connected n > 1 matrices."""
    window, _ = _window_of_dense(a.to_dense(), a.kind)
    return window


# ---------------------------------------------------------------------------
# correction engine
# ---------------------------------------------------------------------------


@dataclass
class _Region:
    """A diagonal sub-block of the matrix being corrected, at global positions."""

    positions: np.ndarray
    sub: np.ndarray
    window: SpectrumWindow
    eigvals: np.ndarray

    @property
    def size(self) -> int:
        return len(self.positions)

    @property
    def trace(self) -> float:
        return float(np.sum(self.sub.diagonal().real))


def _make_region(positions: np.ndarray, sub: np.ndarray, kind: str) -> _Region:
    window, eigvals = _window_of_dense(sub, kind)
    return _Region(positions=positions, sub=sub, window=window, eigvals=eigvals)


def _rank_assignment(values_sorted: np.ndarray, eig_lists: list) -> list:
    """Split sorted values across components by eigenvalue rank.

    Component eigenvalues are merge-sorted (ties by component order) and the
    k-th smallest value goes wherever the k-th smallest eigenvalue lives.
    """
    tagged = []
    for ci, eigs in enumerate(eig_lists):
        tagged.extend((float(v), ci) for v in eigs)
    tagged.sort(key=lambda t: (t[0], t[1]))
    out = [[] for _ in eig_lists]
    for val, (_, ci) in zip(values_sorted, tagged):
        out[ci].append(float(val))
    return [np.array(x) for x in out]


def _bfs_tree(adj: list, root: int):
    m = len(adj)
    parent = [-1] * m
    depth = [0] * m
    seen = [False] * m
    seen[root] = True
    frontier = deque([root])
    while frontier:
        v = frontier.popleft()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                parent[w] = v
                depth[w] = depth[v] + 1
                frontier.append(w)
    if not all(seen):
        raise NotIrreducible("nonzero pattern is not connected")
    return parent, depth


def _correct_connected(working, rec, steps, kind, region: _Region, tau_struct, zero_tol) -> None:
    """Correct one connected region: eigenbasis factor, then leaf-first rotations."""
    pos = region.positions
    m = region.size
    if m == 1:
        p = int(pos[0])
        target = float(region.sub[0, 0].real)
        if abs(working[p, p].real - target) > 4.0 * zero_tol:
            raise TraceMismatch(f"scalar entry off target by {working[p, p].real - target:.3e}")
        return

    values = np.array([working[int(p), int(p)].real for p in pos])
    _, basis, _ = linalg._eig_dense(region.sub, kind, linalg.DEFAULT_EIG_TOL)
    order = np.argsort(values, kind="stable")
    rank = np.empty(m, dtype=int)
    rank[order] = np.arange(m)
    basis = basis[:, rank]  # column l now pairs with the value at local slot l
    bt = BasisTransform(tuple(int(p) for p in pos), basis, stage=transforms.STAGE_BASIS)
    rec.append(bt)
    plist = [int(p) for p in pos]
    working[plist, :] = basis @ working[plist, :]
    working[:, plist] = working[:, plist] @ basis.conj().T
    if kind != KIND_SYM:
        for p in plist:
            working[p, p] = working[p, p].real

    adj = [
        [w for w in range(m) if w != v and abs(region.sub[v, w]) > tau_struct]
        for v in range(m)
    ]
    parent, depth = _bfs_tree(adj, 0)
    children = [0] * m
    for v in range(1, m):
        children[parent[v]] += 1
    alive = [True] * m
    for _ in range(m - 1):
        leaf = max(
            (v for v in range(1, m) if alive[v] and children[v] == 0),
            key=lambda v: (depth[v], -v),
        )
        par = parent[leaf]
        gl, gp = int(pos[leaf]), int(pos[par])
        if abs(working[gl, gp]) <= tau_struct:
            raise EdgeVanished(f"tree edge ({gl}, {gp}) fell below the structural threshold")
        target = float(region.sub[leaf, leaf].real)
        params = rotate_fix_entry(working, kind, gl, gp, target, transforms.STAGE_POST, rec)
        steps.append(
            CorrectionStep(
                gl,
                gp,
                params,
                (
                    working[gl, gl].real - target,
                    working[gp, gp].real - float(region.sub[par, par].real),
                ),
            )
        )
        alive[leaf] = False
        children[par] -= 1


def _correct_region(working, rec, steps, kind, positions, sub, tau_struct, zero_tol) -> None:
    """Dispatch a region: single component directly, otherwise merge recursion."""
    comps_local = _components_dense(sub, tau_struct)
    if len(comps_local) == 1:
        _correct_connected(
            working, rec, steps, kind, _make_region(positions, sub, kind), tau_struct, zero_tol
        )
        return
    parts = []
    for comp in comps_local:
        gpos = positions[comp]
        parts.append(_make_region(gpos, sub[np.ix_(comp, comp)], kind))
    parts.sort(key=lambda r: (r.window.lo, r.window.hi, int(r.positions[0])))
    _merge_recurse(working, rec, steps, kind, parts, tau_struct, zero_tol)


def _extreme_position(working, positions, want_max: bool) -> int:
    if want_max:
        return int(max(positions, key=lambda p: (working[int(p), int(p)].real, -int(p))))
    return int(min(positions, key=lambda p: (working[int(p), int(p)].real, int(p))))


def _merge_recurse(working, rec, steps, kind, parts: list, tau_struct, zero_tol) -> None:
    """Compensate the last part against the hull of the rest, then correct both."""
    if len(parts) == 1:
        only = parts[0]
        _correct_region(working, rec, steps, kind, only.positions, only.sub, tau_struct, zero_tol)
        return
    prefix, last = parts[:-1], parts[-1]
    hull = prefix[0].window
    for r in prefix[1:]:
        hull = hull.hull(r.window)
    if last.size == 1:
        v = float(last.sub[0, 0].real)
        if not hull.contains_strictly(v):
            raise ScalarOutsideWindow(f"scalar {v} not strictly inside [{hull.lo}, {hull.hi}]")
    elif hull.overlap_measure(last.window) <= 0.0:
        raise WindowsDisjoint(
            f"windows [{hull.lo}, {hull.hi}] and [{last.window.lo}, {last.window.hi}] share no measure"
        )

    prefix_positions = np.concatenate([r.positions for r in prefix])
    offset = float(
        sum(working[int(p), int(p)].real for p in prefix_positions)
        - sum(r.trace for r in prefix)
    )
    if abs(offset) > zero_tol:
        p_fix = _extreme_position(working, prefix_positions, want_max=offset > 0)
        p_oth = _extreme_position(working, last.positions, want_max=offset < 0)
        target = working[p_fix, p_fix].real - offset
        params = rotate_fix_entry(working, kind, p_fix, p_oth, target, transforms.STAGE_PRE, rec)
        steps.append(
            CorrectionStep(
                p_fix,
                p_oth,
                params,
                (working[p_fix, p_fix].real - target, offset),
            )
        )
    _merge_recurse(working, rec, steps, kind, prefix, tau_struct, zero_tol)
    _correct_region(working, rec, steps, kind, last.positions, last.sub, tau_struct, zero_tol)


def _zero_tol_for(a: DenseHermitian) -> float:
    return majorization.default_tau_trace(a.diag())


# ---------------------------------------------------------------------------
# public constructions
# ---------------------------------------------------------------------------


def _check_trace(a: DenseHermitian, lam: np.ndarray) -> None:
    gap = abs(float(np.sum(lam)) - float(np.sum(a.diag())))
    if gap > majorization.default_tau_trace(a.diag()):
        raise TraceMismatch(f"spectrum trace off by {gap:.3e}")


def correct_irreducible(a: DenseHermitian, lambda_tilde) -> CorrectionCertificate:
    """Spanning-tree correction for a matrix with connected nonzero pattern.

    Builds B = Q' diag(lam~) Q'* from the eigenbasis, then restores each
    diagonal entry with one rotation per leaf-parent tree edge; the last
    entry is exact by trace preservation. Rotation angles are O(eps) because
    every tree edge carries an order-one coupling.
    """
    lam = np.asarray(lambda_tilde, dtype=np.float64)
    if lam.shape != (a.n,):
        raise DimensionMismatch("spectrum length must match the matrix dimension")
    tau_struct = default_tau_struct(a)
    dense = a.to_dense()
    if len(_components_dense(dense, tau_struct)) != 1:
        raise NotIrreducible("matrix has more than one connected component")
    _check_trace(a, lam)

    initial = np.sort(lam, kind="stable")
    working = np.diag(initial).astype(linalg.working_dtype(a.kind))
    rec: list = []
    steps: list = []
    region = _make_region(np.arange(a.n), dense, a.kind)
    _correct_connected(working, rec, steps, a.kind, region, tau_struct, _zero_tol_for(a))
    return transforms.finish_certificate(
        working, a.kind, steps, rec, initial, a.diag(), lam, original=a
    )


def _blkdiag(parts: list, kind: str) -> np.ndarray:
    n = sum(p.shape[0] for p in parts)
    out = np.zeros((n, n), dtype=linalg.working_dtype(kind))
    at = 0
    for p in parts:
        out[at : at + p.shape[0], at : at + p.shape[0]] = p
        at += p.shape[0]
    return out


def merge_blocks(a1: DenseHermitian, a2: DenseHermitian, lam1, lam2) -> CorrectionCertificate:
    """Correct blkdiag(A1, A2) for per-block spectra with opposite trace offsets.

    Requires the spectrum windows to intersect on positive measure. One
    rotation between the extreme eigenvalues of the two blocks moves the
    trace offset across, after which each block is corrected independently.
    """
    if a1.kind != a2.kind:
        raise DimensionMismatch("blocks must share the same kind")
    kind = a1.kind
    lam1 = np.asarray(lam1, dtype=np.float64)
    lam2 = np.asarray(lam2, dtype=np.float64)
    if lam1.shape != (a1.n,) or lam2.shape != (a2.n,):
        raise DimensionMismatch("per-block spectrum lengths must match the blocks")
    d1, d2 = a1.to_dense(), a2.to_dense()
    w1, _ = _window_of_dense(d1, kind)
    w2, _ = _window_of_dense(d2, kind)
    if w1.overlap_measure(w2) <= 0.0:
        raise WindowsDisjoint("spectrum windows intersect with zero measure")

    full = _blkdiag([d1, d2], kind)
    a = DenseHermitian.from_dense(full, kind=kind, tol=np.inf)
    lam = np.concatenate([lam1, lam2])
    _check_trace(a, lam)

    initial = np.concatenate([np.sort(lam1, kind="stable"), np.sort(lam2, kind="stable")])
    working = np.diag(initial).astype(linalg.working_dtype(kind))
    rec: list = []
    steps: list = []
    parts = [
        _make_region(np.arange(a1.n), d1, kind),
        _make_region(np.arange(a1.n, a1.n + a2.n), d2, kind),
    ]
    tau_struct = default_tau_struct(a)
    _merge_recurse(working, rec, steps, kind, parts, tau_struct, _zero_tol_for(a))
    return transforms.finish_certificate(
        working, kind, steps, rec, initial, a.diag(), lam, original=a
    )


def absorb_scalar(a1: DenseHermitian, d2: float, lam1, lam2: float) -> CorrectionCertificate:
    """Merge a block with a trailing scalar lying strictly inside its window."""
    w1 = spectrum_window(a1)
    if not w1.contains_strictly(float(d2)):
        raise ScalarOutsideWindow(f"{d2} is not strictly inside [{w1.lo}, {w1.hi}]")
    scalar = DenseHermitian.from_dense(np.array([[float(d2)]]), kind=a1.kind, tol=np.inf)
    return merge_blocks_unchecked(a1, scalar, np.asarray(lam1, dtype=np.float64), np.array([float(lam2)]))


def merge_blocks_unchecked(a1, a2, lam1, lam2) -> CorrectionCertificate:
    """Merge without the window-overlap precondition (scalar absorption path)."""
    kind = a1.kind
    d1, d2 = a1.to_dense(), a2.to_dense()
    full = _blkdiag([d1, d2], kind)
    a = DenseHermitian.from_dense(full, kind=kind, tol=np.inf)
    lam = np.concatenate([lam1, lam2])
    _check_trace(a, lam)
    initial = np.concatenate([np.sort(lam1, kind="stable"), np.sort(lam2, kind="stable")])
    working = np.diag(initial).astype(linalg.working_dtype(kind))
    rec: list = []
    steps: list = []
    parts = [
        _make_region(np.arange(a1.n), d1, kind),
        _make_region(np.arange(a1.n, a1.n + a2.n), d2, kind),
    ]
    _merge_recurse(working, rec, steps, kind, parts, default_tau_struct(a), _zero_tol_for(a))
    return transforms.finish_certificate(
        working, kind, steps, rec, initial, a.diag(), lam, original=a
    )


def block_decompose(a: DenseHermitian) -> BlockPartition:
    """Permute into window-sorted blocks, greedily merging while windows chain.

    Components are sorted by (lambda_min, lambda_max); the running block
    absorbs the next component when it is connected with positive window
    overlap, or a scalar strictly inside the interior of the running window.
    Across the resulting blocks the windows are ordered end to start.
    """
    dense = a.to_dense()
    tau = default_tau_struct(a)
    comps = _components_dense(dense, tau)
    regions = [_make_region(c, dense[np.ix_(c, c)], a.kind) for c in comps]
    regions.sort(key=lambda r: (r.window.lo, r.window.hi, int(r.positions[0])))

    groups: list = []
    cur = [regions[0]]
    cur_window = regions[0].window
    for reg in regions[1:]:
        if reg.size == 1:
            merge = cur_window.contains_strictly(float(reg.sub[0, 0].real))
        else:
            merge = cur_window.overlap_measure(reg.window) > 0.0
        if merge:
            cur.append(reg)
            cur_window = cur_window.hull(reg.window)
        else:
            groups.append((cur, cur_window))
            cur = [reg]
            cur_window = reg.window
    groups.append((cur, cur_window))

    perm: list = []
    blocks: list = []
    at = 0
    for members, window in groups:
        size = sum(r.size for r in members)
        for r in members:
            perm.extend(int(p) for p in r.positions)
        tag = TAG_SCALAR if size == 1 else TAG_STRONG
        blocks.append(Block(at, at + size, tag, window))
        at += size
    return BlockPartition(permutation=np.array(perm, dtype=int), blocks=tuple(blocks))


def strong_sh_correct(a: DenseHermitian, lambda_tilde) -> CorrectionCertificate:
    """Trace-preserving correction with near-identity pre/post factors.

    Dispatch: scalar matrices absorb the whole construction into the basis
    factor (any eigenbasis works for a multiple of the identity); connected
    matrices take the spanning-tree route; block matrices recurse through
    window merges. A non-strict partial sum between the matrix's own spectrum
    and diagonal rules the construction out (necessary condition), reported
    as NotStronglyCorrectable.
    """
    lam = np.asarray(lambda_tilde, dtype=np.float64)
    if lam.shape != (a.n,):
        raise DimensionMismatch("spectrum length must match the matrix dimension")
    _check_trace(a, lam)
    dense = a.to_dense()
    eigvals, _, _ = linalg._eig_dense(dense, a.kind, linalg.DEFAULT_EIG_TOL)
    d = a.diag()
    case = majorization.classify_strictness(majorization.check_majorization(eigvals, d), eigvals, d)
    if isinstance(case, NonStrictCase):
        raise NotStronglyCorrectable(case.k)

    zero_tol = _zero_tol_for(a)
    rec: list = []
    steps: list = []
    if isinstance(case, ScalarMatrixCase):
        # eigenbasis freedom: build any matrix with this diagonal and spectrum,
        # entirely inside the basis factor
        initial = np.sort(lam, kind="stable")
        working = np.diag(initial).astype(linalg.working_dtype(a.kind))
        queue_balance(
            working,
            a.kind,
            [[k] for k in range(a.n)],
            d,
            zero_tol,
            transforms.STAGE_BASIS,
            rec,
            steps,
        )
        return transforms.finish_certificate(working, a.kind, steps, rec, initial, d, lam, original=a)

    tau_struct = default_tau_struct(a)
    comps = _components_dense(dense, tau_struct)
    regions = [_make_region(c, dense[np.ix_(c, c)], a.kind) for c in comps]
    regions.sort(key=lambda r: (r.window.lo, r.window.hi, int(r.positions[0])))
    assigned = _rank_assignment(np.sort(lam, kind="stable"), [r.eigvals for r in regions])
    initial = np.empty(a.n, dtype=np.float64)
    for reg, values in zip(regions, assigned):
        initial[reg.positions] = values
    working = np.diag(initial).astype(linalg.working_dtype(a.kind))
    if len(regions) == 1:
        _correct_connected(working, rec, steps, a.kind, regions[0], tau_struct, zero_tol)
    else:
        _merge_recurse(working, rec, steps, a.kind, regions, tau_struct, zero_tol)
    return transforms.finish_certificate(working, a.kind, steps, rec, initial, d, lam, original=a)


# ---------------------------------------------------------------------------
# violation generators
# ---------------------------------------------------------------------------


def gen_violation_perturbation(lam, d, i: int, eps: float) -> np.ndarray:
    """Trace-preserving perturbation breaking the majorization inequality at i.

    Requires the relation to hold with equality at partial-sum index i
    (0-based, i < n-1) and a non-constant spectrum. Raising the group of
    eigenvalues containing lam_sorted[i] by eps (and lowering the top group
    to compensate) overshoots the i-th partial sum; when that group is the
    top group, the bottom group is raised instead.
    """
    lam = np.sort(np.asarray(lam, dtype=np.float64), kind="stable")
    d = np.sort(np.asarray(d, dtype=np.float64), kind="stable")
    n = lam.size
    if d.size != n:
        raise DimensionMismatch("vectors must have equal length")
    if not 0 <= i <= n - 2:
        raise ValueError("index must point at one of the n-1 partial sums")
    if eps <= 0:
        raise ValueError("eps must be positive")
    report = majorization.check_majorization(lam, d)
    if not report.holds:
        raise MajorizationViolated(report.first_violation())
    tau = report.tau_maj
    if lam[-1] - lam[0] <= tau:
        raise ScalarSpectrum("constant spectrum admits no violating perturbation")
    if report.k_slacks[i] > tau:
        raise NoEqualityAtI(f"partial sum {i} is strict (slack {report.k_slacks[i]:.3e})")

    out = lam.copy()
    if lam[i] < lam[-1] - tau:
        group = np.nonzero(np.abs(lam - lam[i]) <= tau)[0]
        top = np.nonzero(lam > lam[-1] - tau)[0]
        out[group] += eps
        out[top] -= eps * group.size / top.size
    else:
        bottom = np.nonzero(lam < lam[0] + tau)[0]
        top = np.nonzero(np.abs(lam - lam[-1]) <= tau)[0]
        out[bottom] += eps * top.size / bottom.size
        out[top] -= eps
    return out
