"""Dense symmetric/Hermitian matrices, plane rotations, and a Jacobi eigensolver.

Matrices are stored as the packed upper triangle (row major, diagonal
included), so Hermitian symmetry and a real diagonal are construction
invariants rather than runtime checks. Real-symmetric matrices (`kind="sym"`)
hold float64 entries; complex-Hermitian matrices (`kind="herm"`) hold
complex128 entries with real diagonal.

The eigensolver is a cyclic two-sided Jacobi iteration: self-contained,
orthogonal to machine precision, and entirely adequate at the n <= ~100
scale this library targets. Complex pivots are reduced to real ones by a
unit phase factor before rotating; pivots that are already real take the
plain real path, so real-valued Hermitian input reproduces the symmetric
computation bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DimensionMismatch, NonConvergence

KIND_SYM = "sym"
KIND_HERM = "herm"

DEFAULT_EIG_TOL = 1e-12
MAX_SWEEPS = 30


def _packed_size(n: int) -> int:
    return n * (n + 1) // 2


def _packed_index(n: int, i: int, j: int) -> int:
    # requires i <= j
    return i * n - (i * (i - 1)) // 2 + (j - i)


@dataclass(frozen=True, eq=False)
class DenseHermitian:
    """n-by-n real-symmetric or complex-Hermitian matrix, packed upper triangle."""

    n: int
    kind: str
    upper: np.ndarray

    def __post_init__(self):
        if self.kind not in (KIND_SYM, KIND_HERM):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("dimension must be positive")
        if self.upper.shape != (_packed_size(self.n),):
            raise ValueError("packed storage has wrong length")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_dense(cls, mat, kind: str | None = None, tol: float = 1e-12) -> "DenseHermitian":
        m = np.asarray(mat)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch("expected a square matrix")
        n = m.shape[0]
        if kind is None:
            kind = KIND_HERM if np.iscomplexobj(m) else KIND_SYM
        m = m.astype(np.complex128 if kind == KIND_HERM else np.float64)
        scale = max(1.0, float(np.linalg.norm(m)))
        if np.linalg.norm(m - m.conj().T) > tol * scale:
            raise ValueError("matrix is not Hermitian within tolerance")
        if kind == KIND_HERM and np.max(np.abs(m.diagonal().imag)) > tol * scale:
            raise ValueError("diagonal entries must be real")
        upper = np.empty(_packed_size(n), dtype=m.dtype)
        k = 0
        for i in range(n):
            upper[k] = m[i, i].real
            upper[k + 1 : k + (n - i)] = m[i, i + 1 :]
            k += n - i
        return cls(n, kind, upper)

    @classmethod
    def from_diag(cls, values, kind: str = KIND_SYM) -> "DenseHermitian":
        v = np.asarray(values, dtype=np.float64)
        n = v.shape[0]
        dtype = np.complex128 if kind == KIND_HERM else np.float64
        upper = np.zeros(_packed_size(n), dtype=dtype)
        for i in range(n):
            upper[_packed_index(n, i, i)] = v[i]
        return cls(n, kind, upper)

    @classmethod
    def identity(cls, n: int, kind: str = KIND_SYM) -> "DenseHermitian":
        return cls.from_diag(np.ones(n), kind)

    # -- accessors ---------------------------------------------------------

    def to_dense(self) -> np.ndarray:
        dtype = np.complex128 if self.kind == KIND_HERM else np.float64
        m = np.zeros((self.n, self.n), dtype=dtype)
        k = 0
        for i in range(self.n):
            m[i, i:] = self.upper[k : k + (self.n - i)]
            k += self.n - i
        m += np.triu(m, 1).conj().T
        return m

    def entry(self, i: int, j: int):
        if i <= j:
            return self.upper[_packed_index(self.n, i, j)]
        return np.conj(self.upper[_packed_index(self.n, j, i)])

    def diag(self) -> np.ndarray:
        return np.array([self.upper[_packed_index(self.n, i, i)].real for i in range(self.n)])

    def norm_fro(self) -> float:
        total = 0.0
        k = 0
        for i in range(self.n):
            row = self.upper[k : k + (self.n - i)]
            total += abs(row[0]) ** 2 + 2.0 * float(np.sum(np.abs(row[1:]) ** 2))
            k += self.n - i
        return math.sqrt(total)

    def allclose(self, other: "DenseHermitian", tol: float = 1e-12) -> bool:
        return (
            self.n == other.n
            and self.kind == other.kind
            and bool(np.allclose(self.upper, other.upper, rtol=0.0, atol=tol))
        )

    # -- JSON wire format --------------------------------------------------

    def to_json(self) -> dict:
        """`{"n":, "kind":, "upper": [[re] or [re,im], ...]}`, row-major upper triangle."""
        entries = []
        k = 0
        for i in range(self.n):
            entries.append([float(self.upper[k].real)])
            for v in self.upper[k + 1 : k + (self.n - i)]:
                if self.kind == KIND_HERM:
                    entries.append([float(v.real), float(v.imag)])
                else:
                    entries.append([float(v)])
            k += self.n - i
        return {"n": self.n, "kind": self.kind, "upper": entries}

    @classmethod
    def from_json(cls, data: dict) -> "DenseHermitian":
        n = int(data["n"])
        kind = data["kind"]
        if kind not in (KIND_SYM, KIND_HERM):
            raise ValueError(f"unknown kind {kind!r}")
        entries = data["upper"]
        if len(entries) != _packed_size(n):
            raise DimensionMismatch("upper-triangle entry count does not match n")
        dtype = np.complex128 if kind == KIND_HERM else np.float64
        upper = np.zeros(_packed_size(n), dtype=dtype)
        k = 0
        for i in range(n):
            for j in range(i, n):
                raw = entries[k]
                re = float(raw[0])
                im = float(raw[1]) if len(raw) > 1 else 0.0
                if im != 0.0 and (kind == KIND_SYM or i == j):
                    raise ValueError("imaginary part not allowed here")
                upper[k] = complex(re, im) if kind == KIND_HERM else re
                k += 1
        return cls(n, kind, upper)


@dataclass(frozen=True)
class GivensParams:
    """Plane rotation on coordinates (i, j), i < j.

    The embedded 2x2 block is

        [ e^{i phi} cos(theta)    e^{i psi} sin(theta) ]
        [ -e^{-i psi} sin(theta)  e^{-i phi} cos(theta) ]

    with phi = psi = 0 for the real form.
    """

    i: int
    j: int
    theta: float
    phi: float = 0.0
    psi: float = 0.0

    @property
    def is_phased(self) -> bool:
        return self.phi != 0.0 or self.psi != 0.0

    def matrix2(self) -> np.ndarray:
        c = math.cos(self.theta)
        s = math.sin(self.theta)
        if not self.is_phased:
            return np.array([[c, s], [-s, c]])
        ep = np.exp(1j * self.phi)
        eq = np.exp(1j * self.psi)
        return np.array([[ep * c, eq * s], [-np.conj(eq) * s, np.conj(ep) * c]])

    def with_plane(self, i: int, j: int) -> "GivensParams":
        return replace(self, i=i, j=j)

    def swapped(self) -> "GivensParams":
        """Parameters of S G S for the coordinate swap S (fixes the other slot)."""
        return replace(self, theta=-self.theta, phi=-self.phi, psi=-self.psi)

    def dist_identity(self) -> float:
        return float(np.linalg.norm(self.matrix2() - np.eye(2)))


@dataclass
class SpectralDecomposition:
    """Eigenvalues ascending, orthonormal basis columns, reconstruction residual."""

    eigenvalues: np.ndarray
    basis: np.ndarray
    residual: float


def working_dtype(kind: str):
    return np.complex128 if kind == KIND_HERM else np.float64


def apply_givens_dense(m: np.ndarray, g: GivensParams, kind: str) -> None:
    """In-place conjugation m <- G m G*; touches only rows/columns i and j."""
    i, j = g.i, g.j
    u = g.matrix2()
    if kind == KIND_SYM and g.is_phased:
        raise ValueError("phased rotation applied to a real-symmetric matrix")
    m[[i, j], :] = u @ m[[i, j], :]
    m[:, [i, j]] = m[:, [i, j]] @ u.conj().T
    if kind == KIND_HERM:
        m[i, i] = m[i, i].real
        m[j, j] = m[j, j].real


def _eig_dense(mat: np.ndarray, kind: str, tol: float, max_sweeps: int = MAX_SWEEPS):
    """Cyclic Jacobi on a dense copy. Returns (eigenvalues, basis, residual)."""
    n = mat.shape[0]
    a = mat.astype(working_dtype(kind), copy=True)
    q = np.eye(n, dtype=a.dtype)
    norm_f = float(np.linalg.norm(mat))
    target = tol * norm_f

    def off_mass():
        return math.sqrt(2.0) * float(np.linalg.norm(a[np.triu_indices(n, 1)]))

    converged = n == 1
    if not converged:
        # iterate past the contract target; quadratic tail makes this one sweep
        inner_target = target / 16.0
        skip = inner_target / (4.0 * n * n)
        for _ in range(max_sweeps):
            if off_mass() <= inner_target:
                converged = True
                break
            for p in range(n - 1):
                for qq in range(p + 1, n):
                    apq = a[p, qq]
                    if abs(apq) <= skip:
                        continue
                    if kind == KIND_HERM and apq.imag != 0.0:
                        r = abs(apq)
                        phase = apq / r
                        pre = np.array([[np.conj(phase), 0.0], [0.0, 1.0]])
                    else:
                        r = apq.real
                        pre = None
                    app = a[p, p].real
                    aqq_ = a[qq, qq].real
                    tau = (aqq_ - app) / (2.0 * r)
                    # smaller root of t^2 - 2 tau t - 1 = 0 for the [[c,s],[-s,c]] convention
                    t = -math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                    c = 1.0 / math.sqrt(1.0 + t * t)
                    s = t * c
                    rot = np.array([[c, s], [-s, c]])
                    u = rot @ pre if pre is not None else rot
                    a[[p, qq], :] = u @ a[[p, qq], :]
                    a[:, [p, qq]] = a[:, [p, qq]] @ u.conj().T
                    a[p, qq] = 0.0
                    a[qq, p] = 0.0
                    a[p, p] = a[p, p].real
                    a[qq, qq] = a[qq, qq].real
                    q[:, [p, qq]] = q[:, [p, qq]] @ u.conj().T
        else:
            converged = off_mass() <= target
    if not converged:
        raise NonConvergence(f"off-diagonal mass above {target:.3e} after {max_sweeps} sweeps")

    values = a.diagonal().real.copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    basis = q[:, order]
    residual = float(np.linalg.norm(mat - basis @ np.diag(values) @ basis.conj().T))
    return values, basis, residual


def eig_sym(a: DenseHermitian, tol: float = DEFAULT_EIG_TOL, max_sweeps: int = MAX_SWEEPS) -> SpectralDecomposition:
    """Full spectral decomposition; eigenvalues ascending, ties kept stable.

    Convergence is declared when the off-diagonal Frobenius mass drops below
    tol * ||A||_F; raises NonConvergence past the sweep budget.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    values, basis, residual = _eig_dense(a.to_dense(), a.kind, tol, max_sweeps)
    return SpectralDecomposition(values, basis, residual)


def conjugate_by_givens(a: DenseHermitian, g: GivensParams) -> DenseHermitian:
    """Return G A G*. Entries outside rows/columns i, j are bit-identical."""
    if not (0 <= g.i < g.j < a.n):
        raise DimensionMismatch(f"plane ({g.i}, {g.j}) out of range for n={a.n}")
    if a.kind == KIND_SYM and g.is_phased:
        raise ValueError("real-symmetric conjugation requires zero phases")
    m = a.to_dense()
    apply_givens_dense(m, g, a.kind)
    return DenseHermitian.from_dense(m, kind=a.kind, tol=np.inf)


def fro_dist(a: DenseHermitian, b: DenseHermitian) -> float:
    """Frobenius distance ||A - B||_F."""
    if a.n != b.n or a.kind != b.kind:
        raise DimensionMismatch("operands must share dimension and kind")
    total = 0.0
    k = 0
    for i in range(a.n):
        row = a.upper[k : k + (a.n - i)] - b.upper[k : k + (a.n - i)]
        total += abs(row[0]) ** 2 + 2.0 * float(np.sum(np.abs(row[1:]) ** 2))
        k += a.n - i
    return math.sqrt(total)
