"""Closed-form success probabilities, the null-condition manifold, sweeps.

The interferometric scheme only heralds cleanly when a lone photon can never
reach the detector.  That destructive-interference requirement pins the
splitter parameters to a one-dimensional manifold:

* the relative phases must satisfy ``phi1 - phi2 = nu * pi`` for integer nu;
* for even nu, ``cos(theta1 + theta2) = 0``; for odd nu,
  ``cos(theta1 - theta2) = 0``.

That yields four constraint branches (sum/diff, +pi/2 / -pi/2).  On every
one of them the two-photon click probability has the same closed form,

    P_s / p^2 = |1 - beta|^2 cos^6(theta1) sin^2(theta1),

depending on the angles only through the splitter ahead of the absorber.
(Parameterizing by the second splitter instead gives the mirrored surface
``|1-beta|^2 sin^6(theta2) cos^2(theta2)``; the two expressions agree on the
manifold.)  The optimum sits at theta1 = 30 degrees modulo the symmetry set
{30, 150, 210, 330} and equals ``27/256 |1-beta|^2`` — independent of the
absorber, which only sets the prefactor.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum

from .elements import BeamSplitterParams
from .fock import DEFAULT_CUTOFF
from .schemes import MAIN, SchemeConfig, SourceSpec, run_main_scheme
from .tpam import GenericTpam, fwm_coefficients, FwmParams

__all__ = [
    "ANGLE_TOL",
    "CaseId",
    "ConstraintCase",
    "SweepSpec",
    "ScanRow",
    "classify_constraint",
    "manifold_completion",
    "closed_form_ps",
    "verify_formula_against_simulator",
    "golden_section_maximize",
    "optimize_ps",
    "jf_length_scan",
    "sweep_rows",
    "SWEEP_COLUMNS",
]

#: Angular tolerance for deciding a configuration sits on the manifold.
ANGLE_TOL = 1e-10

#: Peak value of cos^6(t) sin^2(t), attained at t = 30 degrees.
_PEAK = 27.0 / 256.0


class CaseId(str, Enum):
    SUM_PLUS = "sum_plus"
    SUM_MINUS = "sum_minus"
    DIFF_PLUS = "diff_plus"
    DIFF_MINUS = "diff_minus"
    VIOLATED = "violated"


VALID_CASES = (CaseId.SUM_PLUS, CaseId.SUM_MINUS, CaseId.DIFF_PLUS, CaseId.DIFF_MINUS)


@dataclass(frozen=True, slots=True)
class ConstraintCase:
    """Which null-condition branch a configuration satisfies.

    ``nu`` is the integer phase winding (phi1 - phi2)/pi, ``None`` when
    violated.
    """

    case_id: CaseId
    nu: int | None = None

    @property
    def is_valid(self) -> bool:
        return self.case_id is not CaseId.VIOLATED


def classify_constraint(
    phi1: float, phi2: float, theta1: float, theta2: float, tol: float = ANGLE_TOL
) -> ConstraintCase:
    """Classify splitter parameters against the null-condition manifold."""
    delta = phi1 - phi2
    nu = round(delta / math.pi)
    if abs(delta - nu * math.pi) > tol:
        return ConstraintCase(CaseId.VIOLATED)
    angle = theta1 + theta2 if nu % 2 == 0 else theta1 - theta2
    if abs(math.cos(angle)) > tol:
        return ConstraintCase(CaseId.VIOLATED)
    plus = math.sin(angle) > 0.0
    if nu % 2 == 0:
        return ConstraintCase(CaseId.SUM_PLUS if plus else CaseId.SUM_MINUS, nu)
    return ConstraintCase(CaseId.DIFF_PLUS if plus else CaseId.DIFF_MINUS, nu)


def _case_id(case: ConstraintCase | CaseId | str) -> CaseId:
    if isinstance(case, ConstraintCase):
        return case.case_id
    return CaseId(case)


def manifold_completion(theta1: float, case: ConstraintCase | CaseId | str) -> tuple[float, float, float]:
    """Given theta1 and a branch, return (theta2, phi1, phi2) on the manifold."""
    cid = _case_id(case)
    if cid is CaseId.SUM_PLUS:
        return math.pi / 2 - theta1, 0.0, 0.0
    if cid is CaseId.SUM_MINUS:
        return -math.pi / 2 - theta1, 0.0, 0.0
    if cid is CaseId.DIFF_PLUS:
        return theta1 - math.pi / 2, math.pi, 0.0
    if cid is CaseId.DIFF_MINUS:
        return theta1 + math.pi / 2, math.pi, 0.0
    raise ValueError("cannot complete a violated constraint")


def closed_form_ps(beta: complex, theta1: float, case: ConstraintCase | CaseId | str) -> float:
    """Success probability per p^2 on the given constraint branch.

    All four valid branches give ``|1-beta|^2 cos^6(theta1) sin^2(theta1)``:
    on the manifold the click probability depends on the angles only through
    the splitter ahead of the absorber.

    Raises:
        ValueError: for the violated case — there is no closed form off the
            manifold, run the simulator instead.
    """
    cid = _case_id(case)
    if cid is CaseId.VIOLATED:
        raise ValueError("no closed form off the null-condition manifold")
    return abs(1.0 - beta) ** 2 * math.cos(theta1) ** 6 * math.sin(theta1) ** 2


def _unitary_tpam(beta: complex) -> GenericTpam:
    mag = abs(beta)
    if mag > 1.0 + 1e-12:
        raise ValueError(f"|beta| must be <= 1, got {mag}")
    alpha = math.sqrt(max(0.0, 1.0 - mag * mag))
    return GenericTpam(alpha, beta)


def simulate_manifold_point(
    beta: complex,
    theta1: float,
    case: ConstraintCase | CaseId | str,
    *,
    p: float = 1.0,
    cutoff: int = DEFAULT_CUTOFF,
) -> float:
    """Run the full circuit at a manifold point; returns p_success / p^2."""
    if p <= 0.0:
        raise ValueError("p must be positive to report a per-p^2 value")
    theta2, phi1, phi2 = manifold_completion(theta1, case)
    cfg = SchemeConfig(
        source=SourceSpec(p),
        tpam=_unitary_tpam(beta),
        bs1=BeamSplitterParams(theta1, phi1),
        bs2=BeamSplitterParams(theta2, phi2),
        variant=MAIN,
        cutoff=cutoff,
    )
    return run_main_scheme(cfg).p_success / p**2


def verify_formula_against_simulator(
    theta1_values: Sequence[float],
    beta_values: Sequence[complex],
    cases: Iterable[ConstraintCase | CaseId | str] = VALID_CASES,
    *,
    p: float = 1.0,
    cutoff: int = DEFAULT_CUTOFF,
) -> float:
    """Max deviation |closed_form - simulated/p^2| over the given grid."""
    worst = 0.0
    for case in cases:
        for theta1 in theta1_values:
            for beta in beta_values:
                predicted = closed_form_ps(beta, theta1, case)
                simulated = simulate_manifold_point(beta, theta1, case, p=p, cutoff=cutoff)
                worst = max(worst, abs(predicted - simulated))
    return worst


def golden_section_maximize(f, lo: float, hi: float, tol: float = 1e-9) -> tuple[float, float]:
    """Derivative-free 1-D maximization on [lo, hi] (assumed unimodal there)."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    x = (a + b) / 2.0
    return x, f(x)


def optimize_ps(
    beta: complex,
    case: ConstraintCase | CaseId | str = CaseId.SUM_PLUS,
    *,
    grid_points: int = 1441,
    tol: float = 1e-9,
) -> tuple[float, float]:
    """Maximize the closed form over theta1 in [0, 2 pi).

    Coarse grid scan followed by golden-section refinement around the best
    grid point.  Returns (theta1_star, ps_star); the argmax lands on one of
    the symmetric optima {30, 150, 210, 330} degrees for every beta != 1.
    """
    cid = _case_id(case)

    def f(theta1: float) -> float:
        return closed_form_ps(beta, theta1, cid)

    step = 2.0 * math.pi / grid_points
    best_i = max(range(grid_points), key=lambda i: f(i * step))
    lo, hi = (best_i - 1) * step, (best_i + 1) * step
    theta_star, ps_star = golden_section_maximize(f, lo, hi, tol)
    return theta_star % (2.0 * math.pi), ps_star


@dataclass(frozen=True, slots=True)
class ScanRow:
    """One row of a medium-length scan."""

    length_multiple: float
    coefficient: complex
    ps_over_p2: float
    composition: str


def jf_length_scan(
    m_values: Iterable[float], condition: tuple[int, int] = (0, 0)
) -> list[ScanRow]:
    """Success probability per p^2 as the mixer length steps through m_values.

    The composition is inferred per row from the detection condition and the
    length's parity: condition (0,0) with integer length feeds the
    interferometric scheme at its optimal angle (27/256 |1-beta|^2);
    condition (1,1) is the pair-herald scheme (|alpha1|^2 / 2); condition
    (0,0) with half-odd length is the filter-split scheme (|beta|^2 / 4).
    Because the interaction phase advances by an irrational multiple of pi
    per cycle, integer scans fill the phase circle densely and the running
    max of the interferometric composition climbs toward
    27/256 * 16/9 = 3/64.
    """
    condition = (int(condition[0]), int(condition[1]))
    rows: list[ScanRow] = []
    for m in m_values:
        params = FwmParams(float(m))
        alpha0, alpha1, beta = fwm_coefficients(params)
        if condition == (1, 1):
            if not params.is_integer_length:
                raise ValueError(f"condition (1,1) scan needs integer lengths, got {m}")
            rows.append(ScanRow(float(m), alpha1, abs(alpha1) ** 2 / 2.0, "pair-herald"))
        elif condition == (0, 0) and params.is_integer_length:
            rows.append(
                ScanRow(float(m), beta, _PEAK * abs(1.0 - beta) ** 2, "interferometer")
            )
        elif condition == (0, 0) and params.is_half_odd_length:
            rows.append(ScanRow(float(m), beta, abs(beta) ** 2 / 4.0, "filter-split"))
        else:
            raise ValueError(
                f"no scheme composes condition {condition} with length_multiple {m}"
            )
    return rows


# --------------------------------------------------------------------------
# Parameter sweeps


SWEEP_COLUMNS = (
    "theta0_rad",
    "theta1_rad",
    "theta2_rad",
    "beta_re",
    "beta_im",
    "p",
    "p_success",
    "p_success_over_p2",
    "fidelity",
)


@dataclass(frozen=True, slots=True)
class SweepSpec:
    """Grids for a main-scheme parameter sweep.

    Angles are radians; each sweep point snaps theta2 (and the phases) onto
    the requested constraint branch rather than penalizing violations.
    """

    theta0: tuple[float, ...] = (math.pi / 4,)
    theta1: tuple[float, ...] = (math.pi / 4,)
    beta: tuple[complex, ...] = (0j,)
    p: tuple[float, ...] = (1.0,)
    case: CaseId = CaseId.SUM_PLUS

    def __post_init__(self) -> None:
        for name in ("theta0", "theta1", "p"):
            axis = getattr(self, name)
            if len(axis) == 0:
                raise ValueError(f"sweep axis {name!r} is empty")
            if any(b < a for a, b in zip(axis, axis[1:])):
                raise ValueError(f"sweep axis {name!r} must be non-decreasing")
        if len(self.beta) == 0:
            raise ValueError("sweep axis 'beta' is empty")

    @classmethod
    def from_mapping(cls, data: Mapping[str, object]) -> "SweepSpec":
        """Parse the JSON sweep format.

        Each axis is either an explicit list of values or a range object
        ``{"start": x, "stop": y, "steps": n, "unit": "deg"|"rad"}`` (unit
        applies to the angle axes; default radians).  Beta values may be
        numbers, ``[re, im]`` pairs, or strings accepted by ``complex()``.
        """
        known = {"theta0", "theta1", "beta", "p", "case"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown sweep axes: {sorted(unknown)}")
        kwargs: dict[str, object] = {}
        for name in ("theta0", "theta1"):
            if name in data:
                kwargs[name] = tuple(_parse_axis(data[name], angle=True))
        if "p" in data:
            kwargs["p"] = tuple(_parse_axis(data["p"], angle=False))
        if "beta" in data:
            raw = data["beta"]
            if not isinstance(raw, (list, tuple)):
                raise ValueError("'beta' must be a list")
            kwargs["beta"] = tuple(_parse_beta(v) for v in raw)
        if "case" in data:
            kwargs["case"] = CaseId(str(data["case"]))
        return cls(**kwargs)


def _parse_axis(raw: object, *, angle: bool) -> list[float]:
    if isinstance(raw, (list, tuple)):
        return [float(v) for v in raw]
    if isinstance(raw, Mapping):
        extra = set(raw) - {"start", "stop", "steps", "unit"}
        if extra:
            raise ValueError(f"unknown keys in axis spec: {sorted(extra)}")
        try:
            start, stop = float(raw["start"]), float(raw["stop"])
            steps = int(raw["steps"])
        except KeyError as missing:
            raise ValueError(f"axis spec needs start/stop/steps, missing {missing}") from None
        if steps < 1:
            raise ValueError("axis spec needs steps >= 1")
        unit = str(raw.get("unit", "rad"))
        scale = math.pi / 180.0 if unit == "deg" else 1.0
        if unit not in ("deg", "rad"):
            raise ValueError(f"unknown unit {unit!r}")
        if not angle and unit == "deg":
            raise ValueError("'deg' only applies to angle axes")
        if steps == 1:
            return [start * scale]
        inc = (stop - start) / (steps - 1)
        return [(start + i * inc) * scale for i in range(steps)]
    raise ValueError(f"axis spec must be a list or a range object, got {raw!r}")


def _parse_beta(raw: object) -> complex:
    if isinstance(raw, str):
        return complex(raw.replace(" ", ""))
    if isinstance(raw, (list, tuple)):
        if len(raw) != 2:
            raise ValueError(f"beta pair must be [re, im], got {raw!r}")
        return complex(float(raw[0]), float(raw[1]))
    if isinstance(raw, (int, float, complex)):
        return complex(raw)
    raise ValueError(f"cannot parse beta value {raw!r}")


def sweep_rows(spec: SweepSpec, *, cutoff: int = DEFAULT_CUTOFF) -> list[dict[str, float]]:
    """Run the main scheme at every grid point; deterministic row order.

    Grid order is theta0-major, then theta1, beta, p.  Points are evaluated
    independently (runs are pure), so callers may parallelize; this reference
    implementation keeps a single deterministic pass.
    """
    rows: list[dict[str, float]] = []
    for theta0 in spec.theta0:
        for theta1 in spec.theta1:
            theta2, phi1, phi2 = manifold_completion(theta1, spec.case)
            for beta in spec.beta:
                tpam = _unitary_tpam(beta)
                for p in spec.p:
                    cfg = SchemeConfig(
                        source=SourceSpec(p),
                        tpam=tpam,
                        bs0=BeamSplitterParams(theta0, 0.0),
                        bs1=BeamSplitterParams(theta1, phi1),
                        bs2=BeamSplitterParams(theta2, phi2),
                        variant=MAIN,
                        cutoff=cutoff,
                    )
                    result = run_main_scheme(cfg)
                    rows.append(
                        {
                            "theta0_rad": theta0,
                            "theta1_rad": theta1,
                            "theta2_rad": theta2,
                            "beta_re": beta.real,
                            "beta_im": beta.imag,
                            "p": p,
                            "p_success": result.p_success,
                            "p_success_over_p2": (
                                result.p_success / p**2 if p > 0 else float("nan")
                            ),
                            "fidelity": result.fidelity,
                        }
                    )
    return rows
