"""Two-by-two diagonal correction by a single plane rotation.

Given a Hermitian 2x2 block

    B = [ b11  b12 ]
        [ b12* b22 ]

find a rotation G with G B G* carrying the target value d1 in the (1,1)
slot. Writing t = tan(theta), the real problem reduces to

    (b22 - d1) t^2 + 2 b12 t + (b11 - d1) = 0,

solvable over the reals iff the discriminant

    Delta/4 = b12^2 - (b22 - d1)(b11 - d1)

is nonnegative. The root is taken in denominator form,

    t = (d1 - b11) / (b12 + sign(b12) sqrt(Delta/4)),

which avoids cancellation and selects the smaller-magnitude root; with
b12 = 0 the nonnegative root t = sqrt((d1 - b11)/(b22 - d1)) is used, and
the degenerate corner b12 = 0, b22 = d1, b11 != d1 is the quarter-turn
swap theta = pi/2.

Complex off-diagonals reduce to the real problem: when Re(b12) != 0 the
plain real rotation applies with b12 replaced by Re(b12); when b12 is purely
imaginary, a phase pair with phi - psi = pi/2 turns the coupling term into
-Im(b12) while keeping the rotation continuous in the identity. Exponent
scenarios for inputs b11 = d1 - f, b22 = d2 + g with f ~ eps^alpha,
g ~ eps^beta are classified by ``classify_scenario``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import Infeasible
from .linalg import GivensParams


@dataclass(frozen=True)
class TwoByTwoProblem:
    b11: float
    b22: float
    b12: complex
    d1: float
    d2: float

    @property
    def scale(self) -> float:
        return 1.0 + abs(self.b11) + abs(self.b22) + abs(self.b12)

    @property
    def is_complex(self) -> bool:
        return isinstance(self.b12, complex) and self.b12.imag != 0.0


def default_tau_disc(p: TwoByTwoProblem) -> float:
    return 1e-12 * p.scale**2


def _solve_real_tangent(b11: float, b12: float, b22: float, d1: float, tau: float) -> float:
    quart = b12 * b12 - (b22 - d1) * (b11 - d1)
    if quart < 0.0:
        if quart < -tau:
            raise Infeasible(f"discriminant {4.0 * quart:.3e} below -tau")
        quart = 0.0
    f = d1 - b11
    if b12 != 0.0:
        return f / (b12 + math.copysign(math.sqrt(quart), b12))
    if f == 0.0:
        return 0.0
    a = b22 - d1
    if a == 0.0:
        # only the quarter turn places b22 in the (1,1) slot
        return math.inf
    t2 = f / a
    if t2 < 0.0:
        t2 = 0.0  # inside the clamped-discriminant band
    return math.sqrt(t2)


def _params_from_tangent(t: float, phi: float = 0.0, psi: float = 0.0) -> GivensParams:
    theta = math.pi / 2.0 if math.isinf(t) else math.atan(t)
    return GivensParams(0, 1, theta, phi, psi)


def solve_correction_angle(p: TwoByTwoProblem, tau_disc: float | None = None) -> GivensParams:
    """Rotation placing d1 in the (1,1) slot of the real problem.

    Returns parameters on the canonical plane (0, 1); callers embed them via
    ``with_plane``. Raises Infeasible when the discriminant is below -tau_disc.
    """
    b12 = complex(p.b12)
    if b12.imag != 0.0:
        raise ValueError("real solver given a complex off-diagonal; use the hermitian solver")
    if tau_disc is None:
        tau_disc = default_tau_disc(p)
    t = _solve_real_tangent(p.b11, b12.real, p.b22, p.d1, tau_disc)
    return _params_from_tangent(t)


def solve_correction_angle_hermitian(p: TwoByTwoProblem, tau_disc: float | None = None) -> GivensParams:
    """Complex variant: reduce to the real solver through the phase structure.

    Branches on the off-diagonal: Re(b12) != 0 keeps a plain real rotation
    with coupling Re(b12); purely imaginary b12 uses phases (0, -pi/2), whose
    coupling term is -Im(b12); b12 = 0 is already the real problem. The
    feasibility guard uses |b12|^2 so it covers every branch.
    """
    if tau_disc is None:
        tau_disc = default_tau_disc(p)
    b12 = complex(p.b12)
    quart = abs(b12) ** 2 - (p.b22 - p.d1) * (p.b11 - p.d1)
    if quart < -tau_disc:
        raise Infeasible(f"discriminant {4.0 * quart:.3e} below -tau")
    if b12.imag == 0.0:
        return solve_correction_angle(
            TwoByTwoProblem(p.b11, p.b22, b12.real, p.d1, p.d2), tau_disc
        )
    if b12.real != 0.0:
        t = _solve_real_tangent(p.b11, b12.real, p.b22, p.d1, tau_disc)
        return _params_from_tangent(t)
    t = _solve_real_tangent(p.b11, -b12.imag, p.b22, p.d1, tau_disc)
    return _params_from_tangent(t, phi=0.0, psi=-math.pi / 2.0)


class ScenarioCase(Enum):
    B12_NONZERO = "B12Nonzero"
    ZERO_OFF_DISTINCT = "ZeroOffDistinct"
    ZERO_OFF_EQUAL_ALPHA_GT_BETA = "ZeroOffEqualAlphaGtBeta"
    ZERO_OFF_EQUAL_ALPHA_LE_BETA = "ZeroOffEqualAlphaLeBeta"


@dataclass(frozen=True)
class CorrectionScenario:
    case_id: ScenarioCase
    gamma: Fraction
    delta: Fraction


def classify_scenario(p: TwoByTwoProblem, alpha, beta) -> CorrectionScenario:
    """Asymptotic exponents (gamma, delta) of |theta| and the correction size.

    ``alpha`` and ``beta`` are the decay exponents of f = d1 - b11 and
    g = b22 - d2; exact classification expects them as ints or Fractions.
    """
    a = Fraction(alpha)
    b = Fraction(beta)
    if a <= 0 or b <= 0:
        raise ValueError("exponents must be positive")
    if p.b12 != 0:
        return CorrectionScenario(ScenarioCase.B12_NONZERO, a, a)
    if p.d1 != p.d2:
        return CorrectionScenario(ScenarioCase.ZERO_OFF_DISTINCT, a / 2, a / 2)
    if a > b:
        return CorrectionScenario(ScenarioCase.ZERO_OFF_EQUAL_ALPHA_GT_BETA, (a - b) / 2, (a + b) / 2)
    return CorrectionScenario(ScenarioCase.ZERO_OFF_EQUAL_ALPHA_LE_BETA, Fraction(0), a)
