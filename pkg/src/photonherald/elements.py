"""Linear-optical elements acting on Fock-space states.

The beam splitter follows the Schrodinger-picture substitution convention on
creation operators,

    a1+  ->  cos(theta) a1+ + e^{-i phi} sin(theta) a2+
    a2+  -> -e^{+i phi} sin(theta) a1+ + cos(theta) a2+

(not the Heisenberg-picture transformation), extended multiplicatively to
every ket.  Reflectivity is sin^2(theta).  The induced two-mode Fock-basis
coefficients are computed once per (theta, phi, photon pair) via a binomial
expansion and memoized; the cache is read-only after first build, so
concurrent sweeps can share it safely.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .fock import DEFAULT_CUTOFF, CutoffOverflowError, FockKet, PureState

__all__ = [
    "BeamSplitterParams",
    "PhaseShifterParams",
    "apply_beam_splitter",
    "apply_phase_shifter",
    "unitarity_check",
]


@dataclass(frozen=True, slots=True)
class BeamSplitterParams:
    """Mixing angle, relative phase and the pair of modes being mixed.

    ``mode_pair`` may be left ``None`` when the circuit wires the element
    itself (see :meth:`on`).
    """

    theta: float
    phi: float = 0.0
    mode_pair: tuple[str, str] | None = None

    @classmethod
    def balanced(cls, mode_pair: tuple[str, str] | None = None) -> "BeamSplitterParams":
        """A 50/50 splitter (theta = pi/4, phi = 0)."""
        return cls(math.pi / 4, 0.0, mode_pair)

    @property
    def reflectivity(self) -> float:
        return math.sin(self.theta) ** 2

    def on(self, first: str, second: str) -> "BeamSplitterParams":
        return replace(self, mode_pair=(first, second))


@dataclass(frozen=True, slots=True)
class PhaseShifterParams:
    phi: float
    mode: str | None = None

    def on(self, mode: str) -> "PhaseShifterParams":
        return replace(self, mode=mode)


@lru_cache(maxsize=None)
def _mixing_row(theta: float, phi: float, n1: int, n2: int) -> tuple[tuple[int, complex], ...]:
    """Output amplitudes for the input ket |n1, n2>.

    Returns ((m1, amplitude), ...) with m2 = n1 + n2 - m1 implied; photon
    number is conserved per ket.  Derived by substituting the rotated
    creation operators into a1+^n1 a2+^n2 |0,0> / sqrt(n1! n2!) and expanding
    binomially.
    """
    c, s = math.cos(theta), math.sin(theta)
    f12 = cmath.exp(-1j * phi) * s  # coefficient of a2+ inside a1+
    f21 = -cmath.exp(1j * phi) * s  # coefficient of a1+ inside a2+
    total = n1 + n2
    row = [0j] * (total + 1)
    for j in range(n1 + 1):
        for k in range(n2 + 1):
            coeff = (
                math.comb(n1, j)
                * math.comb(n2, k)
                * (c**j)
                * (f12 ** (n1 - j))
                * (f21**k)
                * (c ** (n2 - k))
            )
            row[j + k] += coeff
    norm_in = math.sqrt(math.factorial(n1) * math.factorial(n2))
    out = []
    for m1, coeff in enumerate(row):
        amp = coeff * math.sqrt(math.factorial(m1) * math.factorial(total - m1)) / norm_in
        if abs(amp) > 0.0:
            out.append((m1, amp))
    return tuple(out)


def apply_beam_splitter(state: PureState, params: BeamSplitterParams) -> PureState:
    """Mix the two modes of ``params.mode_pair`` through the splitter.

    Raises:
        CutoffOverflowError: if any ket carries more combined photons in the
            pair than the cutoff, since the rotation would then populate
            occupations the register cannot store.
    """
    if params.mode_pair is None:
        raise ValueError("BeamSplitterParams.mode_pair must be set to apply the element")
    reg = state.register
    i1 = reg.index(params.mode_pair[0])
    i2 = reg.index(params.mode_pair[1])
    out: dict[FockKet, complex] = {}
    for ket, amp in state.terms():
        n1, n2 = ket.occupations[i1], ket.occupations[i2]
        if n1 + n2 > reg.cutoff:
            raise CutoffOverflowError(
                f"beam splitter on {params.mode_pair} would exceed cutoff "
                f"{reg.cutoff} for ket {ket} (combined occupation {n1 + n2})"
            )
        for m1, coeff in _mixing_row(params.theta, params.phi, n1, n2):
            new = ket.replace_occupation(i1, m1).replace_occupation(i2, n1 + n2 - m1)
            prev = out.get(new, 0j)
            out[new] = prev + amp * coeff
    return PureState(reg, out)


def apply_phase_shifter(state: PureState, params: PhaseShifterParams) -> PureState:
    """Each ket gains exp(i * n * phi) where n is the mode's occupation."""
    if params.mode is None:
        raise ValueError("PhaseShifterParams.mode must be set to apply the element")
    i = state.register.index(params.mode)
    return PureState(
        state.register,
        {
            ket: amp * cmath.exp(1j * params.phi * ket.occupations[i])
            for ket, amp in state.terms()
        },
    )


def unitarity_check(params: BeamSplitterParams, cutoff: int = DEFAULT_CUTOFF) -> float:
    """Max-norm deviation of the induced Fock-basis matrix from unitarity.

    Builds the block matrix over all two-mode states with total photon number
    up to ``cutoff`` (the splitter conserves that total, so this is the space
    it acts on without truncation) and returns ``max |U^dag U - I|``.
    """
    basis = [(n, m1) for n in range(cutoff + 1) for m1 in range(n + 1)]
    index = {bm: i for i, bm in enumerate(basis)}
    dim = len(basis)
    u = np.zeros((dim, dim), dtype=complex)
    for n, in1 in basis:
        col = index[(n, in1)]
        for m1, amp in _mixing_row(params.theta, params.phi, in1, n - in1):
            u[index[(n, m1)], col] = amp
    dev = u.conj().T @ u - np.eye(dim)
    return float(np.max(np.abs(dev)))
