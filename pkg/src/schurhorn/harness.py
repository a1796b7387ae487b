"""Experiment harness: seeded instances, epsilon sweeps, and certificate checks.

Sweeps drive the full correction pipeline over a decreasing epsilon grid with
a fixed per-trial instance and perturbation direction, so each trial traces a
clean log-log curve; the fitted slope uses per-epsilon medians. All
randomness flows through the counter-based generator in ``rng``, making CSV
output bit-reproducible for a given seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg, majorization, sh_correct, strong_sh, transforms
from .diag_correct import correct_diagonal
from .errors import (
    EmptySample,
    FeasibilityError,
    InsufficientGrid,
    MajorizationViolated,
    SchurHornError,
    UnknownFamily,
)
from .linalg import KIND_HERM, KIND_SYM, DenseHermitian
from .rng import CounterRNG
from .transforms import CorrectionCertificate

FAMILIES = (
    "diagonal-distinct",
    "diagonal-repeated",
    "irreducible",
    "mixed-block",
    "hermitian-irreducible",
    "hermitian-mixed-block",
)

STYLE_ADVERSARIAL = "adversarial"
STYLE_GENERIC = "generic"

DEFAULT_EPS_GRID = tuple(10.0 ** (-2 - k) for k in range(7))

CSV_HEADER = "family,n,eps,trial,distance,gnorm1,gnorm2,diag_resid,spec_resid,status"

# two-sided 95% t quantiles by degrees of freedom (least-squares slope band)
_T95 = {
    1: 12.706, 2: 4.303, 3: 3.182, 4: 2.776, 5: 2.571, 6: 2.447, 7: 2.365,
    8: 2.306, 9: 2.262, 10: 2.228, 12: 2.179, 15: 2.131, 20: 2.086, 30: 2.042,
}


def _t95(df: int) -> float:
    if df <= 0:
        return float("inf")
    keys = sorted(_T95)
    for k in keys:
        if df <= k:
            return _T95[k]
    return 1.96


@dataclass(frozen=True)
class SweepConfig:
    family: str
    n: int
    eps_grid: tuple = DEFAULT_EPS_GRID
    trials_per_eps: int = 3
    seed: int = 0
    perturbation_style: str = STYLE_GENERIC

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnknownFamily(f"unknown family {self.family!r}")
        grid = tuple(float(e) for e in self.eps_grid)
        if any(e <= 0 for e in grid):
            raise ValueError("eps grid entries must be positive")
        if any(a <= b for a, b in zip(grid, grid[1:])):
            raise ValueError("eps grid must be strictly decreasing")
        object.__setattr__(self, "eps_grid", grid)
        if self.trials_per_eps < 1:
            raise ValueError("trials_per_eps must be at least 1")
        if self.perturbation_style not in (STYLE_ADVERSARIAL, STYLE_GENERIC):
            raise ValueError(f"unknown perturbation style {self.perturbation_style!r}")

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "eps_grid": list(self.eps_grid),
            "trials_per_eps": self.trials_per_eps,
            "seed": self.seed,
            "perturbation_style": self.perturbation_style,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SweepConfig":
        kwargs = {"family": data["family"], "n": int(data["n"])}
        if "eps_grid" in data:
            kwargs["eps_grid"] = tuple(data["eps_grid"])
        if "trials_per_eps" in data:
            kwargs["trials_per_eps"] = int(data["trials_per_eps"])
        if "seed" in data:
            kwargs["seed"] = int(data["seed"])
        if "perturbation_style" in data:
            kwargs["perturbation_style"] = data["perturbation_style"]
        return cls(**kwargs)


@dataclass
class SweepRecord:
    family: str
    n: int
    eps: float
    trial: int
    distance: float
    gnorm1: float
    gnorm2: float
    diag_resid: float
    spec_resid: float
    status: str


@dataclass
class SweepResult:
    config: SweepConfig
    records: list
    fitted_slope: float
    slope_band: tuple
    medians: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# instance generation
# ---------------------------------------------------------------------------


@dataclass
class Instance:
    """A matrix, its base spectrum, and per-style perturbation directions.

    The admissible spectrum at scale eps is ``base + eps * direction``; the
    direction is drawn once per trial so sweeps stay on one curve.
    """

    matrix: DenseHermitian
    base: np.ndarray
    _direction: callable

    def direction(self, style: str, rng: CounterRNG) -> np.ndarray:
        return self._direction(style, rng)

    def lam_at(self, h: np.ndarray, eps: float) -> np.ndarray:
        return self.base + eps * h


def _sorted_zero_sum(n: int, rng: CounterRNG) -> np.ndarray:
    """Ascending mean-zero vector; its prefix sums are all nonpositive."""
    u = np.array([rng.uniform(-1.0, 1.0) for _ in range(n)])
    u -= u.mean()
    u.sort(kind="stable")
    return u


def _endpoint_transfer(n: int) -> np.ndarray:
    h = np.zeros(n)
    h[0] = -1.0
    h[-1] = 1.0
    return h


def _random_connected(n: int, rng: CounterRNG, kind: str) -> np.ndarray:
    """Random matrix whose pattern is a spanning tree plus extra edges."""
    m = np.zeros((n, n), dtype=linalg.working_dtype(kind))
    for i in range(n):
        m[i, i] = rng.uniform(-1.0, 1.0)

    def coupling():
        mag = rng.uniform(0.5, 1.5) * (1.0 if rng.uniform() < 0.5 else -1.0)
        if kind == KIND_HERM:
            # keep the real part of order one; the correction branches on it
            angle = rng.uniform(-math.pi / 3.0, math.pi / 3.0)
            if rng.uniform() < 0.5:
                angle += math.pi
            return mag * complex(math.cos(angle), math.sin(angle))
        return mag

    order = list(range(n))
    rng.shuffle(order)
    for k in range(1, n):
        a, b = order[k], order[rng.randint(k)]
        v = coupling()
        m[a, b] = v
        m[b, a] = np.conj(v)
    extras = rng.randint(n)
    for _ in range(extras):
        a, b = rng.randint(n), rng.randint(n)
        if a != b and m[a, b] == 0:
            v = coupling()
            m[a, b] = v
            m[b, a] = np.conj(v)
    return m


def _shift_diag(m: np.ndarray, shift: float) -> np.ndarray:
    return m + shift * np.eye(m.shape[0], dtype=m.dtype)


def _generic_blockwise(sizes: list, rng: CounterRNG) -> np.ndarray:
    """Per-entry jitter, mean-zero within blocks, plus sorted block offsets."""
    parts = []
    offsets = _sorted_zero_sum(len(sizes), rng)
    for size, off in zip(sizes, offsets):
        jitter = np.array([rng.uniform(-1.0, 1.0) for _ in range(size)])
        jitter -= jitter.mean()
        jitter.sort(kind="stable")
        parts.append(jitter + off / size)
    return np.concatenate(parts)


def gen_instance(family: str, n: int, seed: int) -> Instance:
    """Seeded instance for the named family, with an admissible perturbation rule."""
    if family not in FAMILIES:
        raise UnknownFamily(f"unknown family {family!r}")
    rng = CounterRNG(seed)
    kind = KIND_HERM if family.startswith("hermitian-") else KIND_SYM

    if family in ("diagonal-distinct", "diagonal-repeated"):
        if n < 2:
            raise ValueError("diagonal families need n >= 2")
        if family == "diagonal-distinct":
            gaps = np.array([rng.uniform(0.5, 1.5) for _ in range(n)])
            d = np.cumsum(gaps) + rng.uniform(-1.0, 1.0)
        else:
            distinct = max(2, n // 2)
            values = np.cumsum([rng.uniform(0.5, 1.5) for _ in range(distinct)])
            d = np.sort(np.array([values[rng.randint(distinct)] for _ in range(n - 2)] + [values[0], values[-1]]))
        matrix = DenseHermitian.from_diag(d, kind)
        base = np.sort(d)

        def direction(style: str, trial_rng: CounterRNG, _n=n) -> np.ndarray:
            if style == STYLE_ADVERSARIAL:
                return _endpoint_transfer(_n)
            return _sorted_zero_sum(_n, trial_rng)

        return Instance(matrix, base, direction)

    if family in ("irreducible", "hermitian-irreducible"):
        if n < 2:
            raise ValueError("irreducible families need n >= 2")
        dense = _random_connected(n, rng, kind)
        matrix = DenseHermitian.from_dense(dense, kind=kind)
        base, _, _ = linalg._eig_dense(dense, kind, linalg.DEFAULT_EIG_TOL)

        def direction(style: str, trial_rng: CounterRNG, _n=n) -> np.ndarray:
            h = _sorted_zero_sum(_n, trial_rng)
            if style == STYLE_ADVERSARIAL:
                h = _endpoint_transfer(_n)
            return h

        return Instance(matrix, base, direction)

    if family in ("mixed-block", "hermitian-mixed-block"):
        if n < 5:
            raise ValueError("mixed-block families need n >= 5")
        # two connected blocks with overlapping windows, one interior scalar,
        # one detached scalar well above every window
        n1 = max(2, (n - 2) // 2)
        n2 = n - 2 - n1
        b1 = _random_connected(n1, rng, kind)
        w1, _ = strong_sh._window_of_dense(b1, kind)
        b2_raw = _random_connected(n2, rng, kind)
        w2_raw, _ = strong_sh._window_of_dense(b2_raw, kind)
        # drop the second window's bottom well inside the first window
        target_min = w1.lo + rng.uniform(0.35, 0.65) * w1.measure
        b2 = _shift_diag(b2_raw, target_min - w2_raw.lo)
        w2, _ = strong_sh._window_of_dense(b2, kind)
        hull = w1.hull(w2)
        inner = 0.5 * (hull.lo + hull.hi)
        outer = hull.hi + rng.uniform(1.0, 2.0)
        dense = np.zeros((n, n), dtype=linalg.working_dtype(kind))
        dense[:n1, :n1] = b1
        dense[n1 : n1 + n2, n1 : n1 + n2] = b2
        dense[n - 2, n - 2] = inner
        dense[n - 1, n - 1] = outer
        matrix = DenseHermitian.from_dense(dense, kind=kind)
        base, _, _ = linalg._eig_dense(dense, kind, linalg.DEFAULT_EIG_TOL)
        merged = n - 1  # sizes: merged strong block (b1 + b2 + inner scalar), detached scalar

        def direction(style: str, trial_rng: CounterRNG, _n=n, _merged=merged) -> np.ndarray:
            if style == STYLE_ADVERSARIAL:
                # move mass inside the merged block and across the block
                # boundary, touching interior entries so the per-block
                # restoration rotations stay active
                h = np.zeros(_n)
                h[0] = -0.25
                h[1] = -0.75
                h[_merged - 1] = 0.5
                h[_n - 1] = 0.5
                return h
            return _generic_blockwise([_merged, _n - _merged], trial_rng)

        return Instance(matrix, base, direction)

    raise UnknownFamily(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


def _fit_slope(xs: np.ndarray, ys: np.ndarray) -> tuple:
    """Least-squares slope of log(y) on log(x) with a 95 percent band."""
    lx = np.log(xs)
    ly = np.log(ys)
    m = lx.size
    mx = lx.mean()
    sxx = float(np.sum((lx - mx) ** 2))
    slope = float(np.sum((lx - mx) * (ly - ly.mean())) / sxx)
    inter = float(ly.mean() - slope * mx)
    resid = ly - (inter + slope * lx)
    if m > 2:
        se = math.sqrt(float(np.sum(resid**2)) / (m - 2) / sxx)
    else:
        se = 0.0
    half = _t95(m - 2) * se if m > 2 else 0.0
    return slope, (slope - half, slope + half)


def _run_pipeline(matrix: DenseHermitian, lam: np.ndarray) -> CorrectionCertificate:
    if matrix.kind == KIND_HERM:
        return sh_correct.schur_horn_correct_hermitian(matrix, lam)
    return sh_correct.schur_horn_correct(matrix, lam)


def epsilon_sweep(cfg: SweepConfig) -> SweepResult:
    """Run the correction pipeline over the epsilon grid; fit the distance slope.

    Per-trial failures are recorded with their error class in the status
    column and excluded from the fit. Requires at least two usable grid
    points, else InsufficientGrid.
    """
    if len(cfg.eps_grid) < 2:
        raise InsufficientGrid("slope regression needs at least two epsilon values")
    root = CounterRNG(cfg.seed)
    records: list = []
    for trial in range(cfg.trials_per_eps):
        inst_rng = root.spawn(2 * trial)
        dir_rng = root.spawn(2 * trial + 1)
        instance = gen_instance(cfg.family, cfg.n, inst_rng.u64())
        h = instance.direction(cfg.perturbation_style, dir_rng)
        for ei, eps in enumerate(cfg.eps_grid):
            lam = instance.lam_at(h, eps)
            try:
                cert = _run_pipeline(instance.matrix, lam)
                rec = SweepRecord(
                    cfg.family, cfg.n, eps, trial,
                    cert.distance_to_original, cert.gnorm_pre, cert.gnorm_post,
                    cert.diag_residual, cert.spectrum_residual, "ok",
                )
            except SchurHornError as err:
                rec = SweepRecord(
                    cfg.family, cfg.n, eps, trial,
                    float("nan"), float("nan"), float("nan"),
                    float("nan"), float("nan"), type(err).__name__,
                )
            records.append((ei, trial, rec))
    records.sort(key=lambda t: (t[0], t[1]))
    flat = [r for _, _, r in records]

    eps_ok: list = []
    medians: list = []
    for ei, eps in enumerate(cfg.eps_grid):
        vals = [r.distance for e, _, r in records if e == ei and r.status == "ok" and r.distance > 0.0]
        if vals:
            eps_ok.append(eps)
            medians.append(float(np.median(vals)))
    if len(eps_ok) < 2:
        raise InsufficientGrid("fewer than two epsilon values produced usable distances")
    slope, band = _fit_slope(np.array(eps_ok), np.array(medians))
    return SweepResult(cfg, flat, slope, band, medians=list(zip(eps_ok, medians)))


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def sweep_to_csv(result: SweepResult) -> str:
    lines = [CSV_HEADER]
    for r in result.records:
        lines.append(
            f"{r.family},{r.n},{_fmt(r.eps)},{r.trial},{_fmt(r.distance)},{_fmt(r.gnorm1)},"
            f"{_fmt(r.gnorm2)},{_fmt(r.diag_resid)},{_fmt(r.spec_resid)},{r.status}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# equivalence-class distance surrogate
# ---------------------------------------------------------------------------


def hausdorff_upper_bound(lambda1, lambda2, d, samples: int, seed: int = 0) -> float:
    """Empirical upper-bound surrogate for the class-to-class distance.

    Samples members X of the class with diagonal d and spectrum lambda1 by
    running the diagonal correction with randomized pop orders, then corrects
    each X to spectrum lambda2 through the full pipeline and takes the
    largest distance. This bounds the restricted sup-inf from sampled
    members; it is never an exact class distance.
    """
    if samples <= 0:
        raise EmptySample("need at least one sample")
    lam1 = np.asarray(lambda1, dtype=np.float64)
    lam2 = np.asarray(lambda2, dtype=np.float64)
    d = np.asarray(d, dtype=np.float64)
    for lam in (lam1, lam2):
        report = majorization.check_majorization(lam, d)
        if not report.holds:
            raise MajorizationViolated(report.first_violation())
    rng = CounterRNG(seed)
    worst = 0.0
    for k in range(samples):
        member = correct_diagonal(d, lam1, rng=rng.spawn(k)).result
        cert = _run_pipeline(member, lam2)
        worst = max(worst, linalg.fro_dist(member, cert.result))
    return worst


# ---------------------------------------------------------------------------
# certificate validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertificateReport:
    diag_ok: bool
    spectrum_ok: bool
    chain_ok: bool
    orthogonality_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.diag_ok and self.spectrum_ok and self.chain_ok and self.orthogonality_ok


def validate_certificate(
    a: DenseHermitian, lambda_tilde, cert: CorrectionCertificate, tol: float = 1e-8
) -> CertificateReport:
    """Recompute everything a certificate claims, from scratch.

    The chain is re-applied to the stored seed diagonal; the rebuilt matrix
    must carry the diagonal of ``a``, the result's spectrum must match the
    requested one (independent decomposition), the rebuilt matrix must agree
    with the stored result, and every chain factor must be orthogonal or
    unitary.
    """
    lam = np.asarray(lambda_tilde, dtype=np.float64)
    scale = 1.0 + max(
        float(np.max(np.abs(a.diag()))), float(np.max(np.abs(lam))) if lam.size else 0.0
    )
    rebuilt = transforms.chain_apply(cert.initial, cert.transforms, a.kind)
    diag_ok = bool(np.max(np.abs(rebuilt.diagonal().real - a.diag())) <= tol * scale)
    spec = linalg.eig_sym(cert.result)
    spectrum_ok = bool(np.max(np.abs(spec.eigenvalues - np.sort(lam))) <= tol * scale)
    chain_ok = bool(
        np.linalg.norm(rebuilt - cert.result.to_dense()) <= tol * scale * max(1, a.n)
    )
    ortho_ok = bool(
        transforms.max_orthogonality_defect(cert.transforms, a.n, a.kind) <= 1e-10 * max(1, a.n)
    )
    return CertificateReport(diag_ok, spectrum_ok, chain_ok, ortho_ok)
