"""Two-photon-absorbing media (TPAMs).

Two models are provided:

* :class:`GenericTpam` — the abstract channel. Transparent to zero or one
  photon, and on two photons splits into an absorption branch (amplitude
  ``alpha``, medium jumps to an excited level) and a survival branch
  (amplitude ``beta``):

      |0>|g> -> |0>|g>
      |1>|g> -> |1>|g>
      |2>|g> -> alpha |0>|e> + beta |2>|g>

  ``|alpha|^2 + |beta|^2 = 1`` makes the map an isometry; a smaller sum
  models extra loss.  Inputs with more than two photons are rejected — the
  model defines no dynamics for them.

* :class:`FwmParams` / ``fwm_*`` — a resonant four-wave-mixing realization in
  which the photons of a pump mode cycle into a pair of generated field
  modes (E1, E2) with a photon-number-dependent period.  Lengths are
  expressed as multiples M of the full single-photon conversion cycle L0;
  the two-photon sector then evolves with interaction phase
  ``phi = M * pi * sqrt(3/2)``:

      |0,0,0> -> |0,0,0>
      |1,0,0> -> cos(M pi)|1,0,0> - i sin(M pi)|0,1,1>
      |2,0,0> -> alpha0|0,2,2> + alpha1|1,1,1> + beta|2,0,0>

  with alpha0 = -(2 sqrt2 / 3) e^{2i pump_phase} sin^2(phi/2),
  alpha1 = -(i/sqrt3) e^{i pump_phase} sin(phi), beta = (2 + cos(phi))/3;
  these always satisfy |alpha0|^2 + |alpha1|^2 + |beta|^2 = 1.  Because the
  sqrt(3/2) makes phi an irrational multiple of pi, integer M sweeps fill
  the phase circle densely.

  For odd integer M a single photon re-emerges with a sign flip; by default
  a compensating phase shifter on the pump mode (built into the channel) is
  applied so the medium stays transparent to one photon.  At half-odd M
  (e.g. 3/2) a single photon converts completely into the generated pair —
  evaluated literally the amplitude is +i at M = 3/2; only its magnitude
  enters any probability reported here.

Conditioning the generated modes on a photon-count pattern turns the
four-wave mixer into an effective (generally trace-decreasing) channel on
the pump mode alone: see :func:`fwm_conditioned_channel`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .fock import (
    DEFAULT_CUTOFF,
    CutoffOverflowError,
    FockKet,
    ModeRegister,
    PureState,
    UnsupportedPhotonNumberError,
    fock_state,
    project_number,
)

__all__ = [
    "GenericTpam",
    "FwmParams",
    "FwmTpamSpec",
    "FwmConditionedChannel",
    "apply_generic_tpam",
    "fwm_coefficients",
    "fwm_coefficients_from_phase",
    "fwm_evolve",
    "fwm_conditioned_channel",
]

_SQRT_3_2 = math.sqrt(1.5)
_INTEGER_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class GenericTpam:
    """Coefficients of the generic two-photon absorber.

    Args:
        alpha: two-photon absorption amplitude.
        beta: two-photon survival amplitude.
        global_phase: common phase multiplying all three transformation
            rules; physically unobservable, kept as an explicit knob so the
            invariance can be exercised.
    """

    alpha: complex
    beta: complex
    global_phase: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        if abs(self.alpha) ** 2 + abs(self.beta) ** 2 > 1.0 + 1e-9:
            raise ValueError(
                "generic TPAM requires |alpha|^2 + |beta|^2 <= 1, got "
                f"{abs(self.alpha)**2 + abs(self.beta)**2:.6f}"
            )

    @property
    def loss(self) -> float:
        """Probability weight of the unmodeled loss branch (0 when unitary)."""
        return max(0.0, 1.0 - abs(self.alpha) ** 2 - abs(self.beta) ** 2)

    @property
    def is_unitary(self) -> bool:
        return self.loss <= 1e-9


def apply_generic_tpam(
    state: PureState, mode: str, tpam: GenericTpam, *, excited_level: int = 1
) -> PureState:
    """Send ``mode`` through a generic two-photon absorber.

    The state's register must carry a medium subsystem with at least
    ``excited_level + 1`` levels (use :func:`photonherald.fock.with_medium_dims`
    first).  Kets whose medium is already excited pass through untouched as
    long as they hold at most one photon in the mode — that is the
    "entangled consistently from earlier applications" case.  A two-photon
    ket with an excited medium is outside the model and rejected, as is any
    ket with more than two photons in the mode.
    """
    reg = state.register
    i = reg.index(mode)
    if reg.medium_dims <= excited_level:
        raise ValueError(
            f"medium subsystem too small: need at least {excited_level + 1} levels, "
            f"register has {reg.medium_dims}"
        )
    phase = cmath.exp(1j * tpam.global_phase)
    out: dict[FockKet, complex] = {}

    def _add(ket: FockKet, amp: complex) -> None:
        out[ket] = out.get(ket, 0j) + amp

    for ket, amp in state.terms():
        n = ket.occupations[i]
        if n > 2:
            raise UnsupportedPhotonNumberError(
                f"generic TPAM saw {n} photons in {mode!r}; the model covers at most 2"
            )
        if n == 2:
            if ket.medium != 0:
                raise UnsupportedPhotonNumberError(
                    "two photons reached a TPAM whose medium is already excited; "
                    "the model defines no dynamics for this"
                )
            absorbed = FockKet(ket.occupations[:i] + (0,) + ket.occupations[i + 1 :], excited_level)
            _add(absorbed, amp * tpam.alpha * phase)
            _add(ket, amp * tpam.beta * phase)
        else:
            _add(ket, amp * phase)
    return PureState(reg, out)


@dataclass(frozen=True, slots=True)
class FwmParams:
    """Four-wave-mixing medium parameters.

    Args:
        length_multiple: medium length M in units of the full single-photon
            conversion cycle L0.  Positive; integers keep the medium
            transparent to one photon, half-odd values convert one photon
            completely.
        pump_phase: phase of the classical pump amplitude; enters the
            two-photon coefficients as e^{i pump_phase} per converted photon
            pair.  Zero keeps beta real positive.
        compensate_odd_sign: apply the built-in phase shifter that undoes
            the single-photon sign flip arising at odd integer M.
    """

    length_multiple: float
    pump_phase: float = 0.0
    compensate_odd_sign: bool = True

    def __post_init__(self) -> None:
        if isinstance(self.length_multiple, Fraction):
            object.__setattr__(self, "length_multiple", float(self.length_multiple))
        if not self.length_multiple > 0:
            raise ValueError("length_multiple must be positive")

    @property
    def interaction_phase(self) -> float:
        """Two-photon interaction phase phi = M * pi * sqrt(3/2)."""
        return self.length_multiple * math.pi * _SQRT_3_2

    @property
    def rabi_angle(self) -> float:
        """Single-photon conversion angle M * pi."""
        return self.length_multiple * math.pi

    @property
    def is_integer_length(self) -> bool:
        return abs(self.length_multiple - round(self.length_multiple)) <= _INTEGER_TOL

    @property
    def is_half_odd_length(self) -> bool:
        doubled = 2.0 * self.length_multiple
        return abs(doubled - round(doubled)) <= _INTEGER_TOL and round(doubled) % 2 == 1


@dataclass(frozen=True, slots=True)
class FwmTpamSpec:
    """A four-wave mixer used as a TPAM: medium parameters plus the
    photon-count pattern required of the generated fields."""

    params: FwmParams
    condition: tuple[int, int] = (0, 0)

    def __post_init__(self) -> None:
        condition = tuple(int(c) for c in self.condition)
        if len(condition) != 2 or not all(0 <= c <= 2 for c in condition):
            raise ValueError(f"condition must be two counts in 0..2, got {self.condition!r}")
        object.__setattr__(self, "condition", condition)


def fwm_coefficients_from_phase(
    phase: float, pump_phase: float = 0.0
) -> tuple[complex, complex, complex]:
    """Two-photon sector coefficients (alpha0, alpha1, beta) at a given phase."""
    pump = cmath.exp(1j * pump_phase)
    alpha0 = -(2.0 * math.sqrt(2.0) / 3.0) * pump * pump * math.sin(phase / 2.0) ** 2
    alpha1 = -(1j / math.sqrt(3.0)) * pump * math.sin(phase)
    beta = complex((2.0 + math.cos(phase)) / 3.0)
    return alpha0, alpha1, beta


def fwm_coefficients(params: FwmParams) -> tuple[complex, complex, complex]:
    return fwm_coefficients_from_phase(params.interaction_phase, params.pump_phase)


def fwm_evolve(
    state: PureState, modes: tuple[str, str, str], params: FwmParams
) -> PureState:
    """Propagate ``modes = (pump, e1, e2)`` through the four-wave mixer.

    Both generated-field modes must be in vacuum on every populated ket.
    Pump occupations above two are rejected (no dynamics defined).  The
    register cutoff must be at least 2 so the generated pairs fit.
    """
    reg = state.register
    ip = reg.index(modes[0])
    i1 = reg.index(modes[1])
    i2 = reg.index(modes[2])
    rabi = params.rabi_angle
    alpha0, alpha1, beta = fwm_coefficients(params)
    flip = (
        params.compensate_odd_sign
        and params.is_integer_length
        and round(params.length_multiple) % 2 == 1
    )

    def _with(ket: FockKet, pump: int, e1: int, e2: int) -> FockKet:
        occ = list(ket.occupations)
        occ[ip], occ[i1], occ[i2] = pump, e1, e2
        return FockKet(tuple(occ), ket.medium)

    out: dict[FockKet, complex] = {}

    def _add(ket: FockKet, amp: complex) -> None:
        if flip:
            amp *= (-1.0) ** ket.occupations[ip]
        out[ket] = out.get(ket, 0j) + amp

    for ket, amp in state.terms():
        if ket.occupations[i1] != 0 or ket.occupations[i2] != 0:
            raise ValueError(
                f"four-wave mixer requires both generated-field modes in vacuum, got {ket}"
            )
        n = ket.occupations[ip]
        if n > 2:
            raise UnsupportedPhotonNumberError(
                f"four-wave mixer saw {n} pump photons; the model covers at most 2"
            )
        if n >= 1 and reg.cutoff < 2:
            raise CutoffOverflowError(
                "four-wave mixing needs cutoff >= 2 so generated photon pairs fit"
            )
        if n == 0:
            _add(ket, amp)
        elif n == 1:
            _add(ket, amp * math.cos(rabi))
            _add(_with(ket, 0, 1, 1), amp * (-1j) * math.sin(rabi))
        else:
            _add(_with(ket, 0, 2, 2), amp * alpha0)
            _add(_with(ket, 1, 1, 1), amp * alpha1)
            _add(ket, amp * beta)
    return PureState(reg, out)


@dataclass(frozen=True, slots=True)
class FwmConditionedChannel:
    """Effective pump-mode channel after conditioning the generated fields.

    ``transitions`` maps input pump occupation n -> (output occupation,
    amplitude); inputs whose image is fully rejected by the condition are
    absent.  The map is generally trace-decreasing: the lost norm is the
    probability of the condition failing.
    """

    params: FwmParams
    condition: tuple[int, int]
    transitions: tuple[tuple[int, tuple[int, complex]], ...]

    def amplitude(self, n: int) -> tuple[int, complex] | None:
        for key, value in self.transitions:
            if key == n:
                return value
        return None

    def survival_probability(self, n: int) -> float:
        hit = self.amplitude(n)
        return 0.0 if hit is None else abs(hit[1]) ** 2

    def apply(self, state: PureState, mode: str) -> PureState:
        """Apply the conditioned channel to ``mode`` of ``state``.

        The output is unnormalized; its lost squared norm is the probability
        that the generated-field detectors failed the condition.
        """
        i = state.register.index(mode)
        out: dict[FockKet, complex] = {}
        for ket, amp in state.terms():
            n = ket.occupations[i]
            if n > 2:
                raise UnsupportedPhotonNumberError(
                    f"conditioned four-wave channel saw {n} photons; at most 2 supported"
                )
            hit = self.amplitude(n)
            if hit is None:
                continue
            n_out, factor = hit
            new = ket.replace_occupation(i, n_out)
            out[new] = out.get(new, 0j) + amp * factor
        return PureState(state.register, out)


def fwm_conditioned_channel(
    params: FwmParams, condition: tuple[int, int] = (0, 0)
) -> FwmConditionedChannel:
    """Build the pump-mode channel induced by detecting the generated fields.

    Composes :func:`fwm_evolve` with number projections on both generated
    modes.  With condition (0,0) and integer length the result realizes the
    generic absorber with the absorption branch removed: |2> -> beta |2>,
    |1> -> |1|, |0> -> |0>.
    """
    if not (0 <= condition[0] <= 2 and 0 <= condition[1] <= 2):
        raise ValueError(f"condition counts must lie in 0..2, got {condition}")
    scratch = ModeRegister(("w", "e1", "e2"), cutoff=max(2, DEFAULT_CUTOFF))
    transitions: list[tuple[int, tuple[int, complex]]] = []
    for n in range(3):
        evolved = fwm_evolve(fock_state(scratch, (n, 0, 0)), ("w", "e1", "e2"), params)
        kept, _ = project_number(evolved, "e1", condition[0])
        kept, _ = project_number(kept, "e2", condition[1])
        terms = list(kept.terms())
        if not terms:
            continue
        if len(terms) != 1:
            raise RuntimeError("conditioned four-wave channel produced a non-basis image")
        ket, amp = terms[0]
        transitions.append((n, (ket.occupations[0], amp)))
    return FwmConditionedChannel(params, tuple(condition), tuple(transitions))
