"""Constructive machinery for matrices with prescribed diagonal and spectrum.

Builds real-symmetric and complex-Hermitian matrices whose diagonal and
eigenvalues are both prescribed, via chains of plane rotations, and provides
an experiment harness that measures how far such a construction must move
when the spectrum is perturbed with the diagonal held fixed.
"""

from . import errors
from .diag_correct import correct_diagonal, correction_trace
from .givens import (
    CorrectionScenario,
    ScenarioCase,
    TwoByTwoProblem,
    classify_scenario,
    solve_correction_angle,
    solve_correction_angle_hermitian,
)
from .harness import (
    FAMILIES,
    CertificateReport,
    Instance,
    SweepConfig,
    SweepResult,
    epsilon_sweep,
    gen_instance,
    hausdorff_upper_bound,
    sweep_to_csv,
    validate_certificate,
)
from .linalg import (
    KIND_HERM,
    KIND_SYM,
    DenseHermitian,
    GivensParams,
    SpectralDecomposition,
    conjugate_by_givens,
    eig_sym,
    fro_dist,
)
from .majorization import (
    MajorizationReport,
    NonStrictCase,
    ScalarMatrixCase,
    StrictCase,
    blockwise_majorization,
    check_majorization,
    classify_strictness,
)
from .rng import CounterRNG
from .sh_correct import schur_horn_correct, schur_horn_correct_hermitian
from .strong_sh import (
    Block,
    BlockPartition,
    SpectrumWindow,
    absorb_scalar,
    block_decompose,
    connected_components,
    correct_irreducible,
    gen_violation_perturbation,
    merge_blocks,
    spectrum_window,
    strong_sh_correct,
)
from .transforms import CorrectionCertificate, CorrectionStep

__version__ = "0.1.0"

__all__ = [
    "errors",
    "DenseHermitian",
    "GivensParams",
    "SpectralDecomposition",
    "KIND_SYM",
    "KIND_HERM",
    "eig_sym",
    "conjugate_by_givens",
    "fro_dist",
    "MajorizationReport",
    "check_majorization",
    "classify_strictness",
    "blockwise_majorization",
    "ScalarMatrixCase",
    "StrictCase",
    "NonStrictCase",
    "TwoByTwoProblem",
    "CorrectionScenario",
    "ScenarioCase",
    "solve_correction_angle",
    "solve_correction_angle_hermitian",
    "classify_scenario",
    "correct_diagonal",
    "correction_trace",
    "CorrectionCertificate",
    "CorrectionStep",
    "SpectrumWindow",
    "Block",
    "BlockPartition",
    "connected_components",
    "spectrum_window",
    "correct_irreducible",
    "merge_blocks",
    "absorb_scalar",
    "block_decompose",
    "gen_violation_perturbation",
    "strong_sh_correct",
    "schur_horn_correct",
    "schur_horn_correct_hermitian",
    "SweepConfig",
    "SweepResult",
    "Instance",
    "FAMILIES",
    "epsilon_sweep",
    "sweep_to_csv",
    "hausdorff_upper_bound",
    "validate_certificate",
    "CertificateReport",
    "gen_instance",
    "CounterRNG",
]
