"""Truncated few-mode bosonic Fock space: kets, pure states, ensembles.

States live on a :class:`ModeRegister` that fixes the mode labels, a shared
photon-number cutoff, and the dimension of an optional internal "medium"
subsystem (the absorber register used by two-photon media, ground state at
index 0).

A :class:`PureState` is a sparse map ``FockKet -> complex amplitude``.  Mixed
states are :class:`Ensemble` objects: classical-probability-weighted lists of
pure states.  Every mixture produced by the circuits in this package is
diagonal in that decomposition, so the ensemble picture is exact — a dense
density-matrix representation is never needed at runtime.

Conventions used throughout:

* Amplitudes with magnitude at or below :data:`PRUNE_THRESHOLD` are dropped on
  construction, so states never store numerical dust.
* Ket iteration order is deterministic (lexicographic on occupations, then the
  medium index), which keeps every downstream output byte-stable.
* Conditioning (:func:`project_number`, :meth:`Ensemble.condition_number`)
  returns the *unnormalized* kept component together with its squared norm.
  For a normalized input that squared norm is the outcome probability, and
  chaining conditions accumulates joint probabilities.  Renormalization is an
  explicit caller step.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass

__all__ = [
    "DEFAULT_CUTOFF",
    "PRUNE_THRESHOLD",
    "FockError",
    "CutoffOverflowError",
    "UnsupportedPhotonNumberError",
    "ModeRegister",
    "FockKet",
    "PureState",
    "Ensemble",
    "fock_state",
    "vacuum_state",
    "apply_creation",
    "tensor",
    "project_number",
    "partial_trace_discard",
    "fidelity_to_single_photon",
    "with_medium_dims",
    "relabel_modes",
]

#: Default photon-number cutoff per mode.  The circuits here inject at most
#: two photons, so four leaves headroom and makes truncation errors loud
#: (an overflow raises) instead of silent.
DEFAULT_CUTOFF = 4

#: Amplitudes at or below this magnitude are discarded when states are built.
PRUNE_THRESHOLD = 1e-14

#: Squared-norm threshold under which a state counts as numerically zero.
_ZERO_NORM = PRUNE_THRESHOLD**2

#: Amplitude tolerance when deciding two branches are the same state
#: (up to a global phase) during ensemble consolidation.
_CONSOLIDATE_ATOL = 1e-10


class FockError(Exception):
    """Base class for physics-level errors raised by this package."""


class CutoffOverflowError(FockError):
    """An operation would populate occupations above the register cutoff.

    Raised instead of silently clipping, so truncation artifacts cannot
    masquerade as physics.
    """


class UnsupportedPhotonNumberError(FockError):
    """A nonlinear medium was fed more photons than its model covers."""


@dataclass(frozen=True, slots=True)
class ModeRegister:
    """Immutable description of the Hilbert space a state lives on.

    Args:
        labels: Ordered mode names, e.g. ``("B", "C")``.  Must be unique.
            May be empty (a register can shrink to nothing after every mode
            has been measured away).
        cutoff: Maximum photon number stored per mode.
        medium_dims: Dimension of the internal medium subsystem; ``1`` means
            no medium, ``2`` models {ground, excited}, larger values allow
            several distinguishable excited levels (one per absorber).
    """

    labels: tuple[str, ...]
    cutoff: int = DEFAULT_CUTOFF
    medium_dims: int = 1

    def __post_init__(self) -> None:
        if not isinstance(self.labels, tuple):
            object.__setattr__(self, "labels", tuple(self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"mode labels must be unique, got {self.labels!r}")
        for label in self.labels:
            if not isinstance(label, str) or not label:
                raise ValueError(f"mode labels must be non-empty strings, got {label!r}")
        if self.cutoff < 1:
            raise ValueError("cutoff must be at least 1")
        if self.medium_dims < 1:
            raise ValueError("medium_dims must be at least 1")

    @property
    def n_modes(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        """Position of ``label`` in the register.

        Raises:
            KeyError: if the label is not present.
        """
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown mode label {label!r}; register has {self.labels}") from None

    def without(self, label: str) -> "ModeRegister":
        """A copy of this register with ``label`` removed."""
        i = self.index(label)
        return ModeRegister(self.labels[:i] + self.labels[i + 1 :], self.cutoff, self.medium_dims)

    def validate_ket(self, ket: "FockKet") -> None:
        if len(ket.occupations) != self.n_modes:
            raise ValueError(
                f"ket {ket} has {len(ket.occupations)} modes, register expects {self.n_modes}"
            )
        for n in ket.occupations:
            if not 0 <= n <= self.cutoff:
                raise CutoffOverflowError(f"occupation {n} outside [0, {self.cutoff}] in {ket}")
        if not 0 <= ket.medium < self.medium_dims:
            raise ValueError(f"medium index {ket.medium} outside [0, {self.medium_dims}) in {ket}")


@dataclass(frozen=True, order=True, slots=True)
class FockKet:
    """A single basis ket: per-mode photon counts plus a medium index."""

    occupations: tuple[int, ...]
    medium: int = 0

    def replace_occupation(self, index: int, value: int) -> "FockKet":
        occ = list(self.occupations)
        occ[index] = value
        return FockKet(tuple(occ), self.medium)

    def __str__(self) -> str:
        occ = ",".join(str(n) for n in self.occupations)
        return f"|{occ};m{self.medium}>"


class PureState:
    """Sparse pure state on a :class:`ModeRegister`.

    Stores only non-negligible amplitudes.  Instances are treated as
    immutable values: every operation returns a new state.
    """

    __slots__ = ("register", "_amps")

    def __init__(
        self,
        register: ModeRegister,
        amplitudes: Mapping[FockKet, complex] | Iterable[tuple[FockKet, complex]] = (),
    ) -> None:
        items = amplitudes.items() if isinstance(amplitudes, Mapping) else amplitudes
        amps: dict[FockKet, complex] = {}
        for ket, raw in items:
            register.validate_ket(ket)
            amp = complex(raw)
            if abs(amp) > PRUNE_THRESHOLD:
                amps[ket] = amp
        self.register = register
        self._amps = amps

    # -- inspection ------------------------------------------------------

    def terms(self) -> Iterator[tuple[FockKet, complex]]:
        """Deterministically ordered (ket, amplitude) pairs."""
        return iter(sorted(self._amps.items(), key=lambda kv: kv[0]))

    def amplitude(self, ket: FockKet) -> complex:
        return self._amps.get(ket, 0j)

    def squared_norm(self) -> float:
        return sum(abs(a) ** 2 for a in self._amps.values())

    def is_zero(self) -> bool:
        return not self._amps

    def __len__(self) -> int:
        return len(self._amps)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        body = " + ".join(f"({a:.6g}){k}" for k, a in self.terms())
        return f"PureState({body or '0'})"

    # -- elementwise operations ------------------------------------------

    def scaled(self, factor: complex) -> "PureState":
        return PureState(self.register, {k: a * factor for k, a in self._amps.items()})

    def normalized(self) -> "PureState":
        n2 = self.squared_norm()
        if n2 <= _ZERO_NORM:
            raise ValueError("cannot normalize a numerically zero state")
        return self.scaled(1.0 / math.sqrt(n2))


def fock_state(
    register: ModeRegister, occupations: Iterable[int], medium: int = 0
) -> PureState:
    """The basis state ``|occupations; medium>`` with unit amplitude."""
    return PureState(register, {FockKet(tuple(occupations), medium): 1.0 + 0j})


def vacuum_state(register: ModeRegister) -> PureState:
    return fock_state(register, (0,) * register.n_modes)


def apply_creation(state: PureState, mode: str) -> PureState:
    """Apply the bosonic creation operator on ``mode``.

    Each ket ``|..n..>`` maps to ``sqrt(n+1)|..n+1..>``, extended linearly.

    Raises:
        CutoffOverflowError: if any populated ket already sits at the cutoff.
    """
    i = state.register.index(mode)
    out: dict[FockKet, complex] = {}
    for ket, amp in state._amps.items():
        n = ket.occupations[i]
        if n + 1 > state.register.cutoff:
            raise CutoffOverflowError(
                f"creation on {mode!r} would exceed cutoff {state.register.cutoff} from {ket}"
            )
        new = ket.replace_occupation(i, n + 1)
        out[new] = out.get(new, 0j) + amp * math.sqrt(n + 1)
    return PureState(state.register, out)


def tensor(a: PureState, b: PureState) -> PureState:
    """Tensor product; registers concatenate, amplitudes multiply.

    The two registers must use the same cutoff and have disjoint labels.
    At most one side may carry a nontrivial medium subsystem (the product
    keeps that one); media are global here, not per-mode.
    """
    ra, rb = a.register, b.register
    if set(ra.labels) & set(rb.labels):
        raise ValueError(f"label collision in tensor: {set(ra.labels) & set(rb.labels)}")
    if ra.cutoff != rb.cutoff:
        raise ValueError("tensor requires matching cutoffs")
    if ra.medium_dims > 1 and rb.medium_dims > 1:
        raise ValueError("at most one tensor factor may carry a medium subsystem")
    medium_dims = max(ra.medium_dims, rb.medium_dims)
    reg = ModeRegister(ra.labels + rb.labels, ra.cutoff, medium_dims)
    out: dict[FockKet, complex] = {}
    for ka, aa in a._amps.items():
        for kb, ab in b._amps.items():
            medium = ka.medium if ra.medium_dims > 1 else kb.medium
            out[FockKet(ka.occupations + kb.occupations, medium)] = aa * ab
    return PureState(reg, out)


def project_number(state: PureState, mode: str, n: int) -> tuple[PureState, float]:
    """Project onto ``n`` photons in ``mode`` (ideal number-resolving click).

    Keeps only the kets with occupation ``n`` in the mode and removes the
    measured mode from the register.  Returns the unnormalized kept state and
    its squared norm — the outcome probability when the input is normalized.
    An empty result is not an error: it comes back as (zero state, 0.0).
    """
    if n > state.register.cutoff:
        raise ValueError(f"cannot project onto n={n} above cutoff {state.register.cutoff}")
    i = state.register.index(mode)
    reg = state.register.without(mode)
    out: dict[FockKet, complex] = {}
    for ket, amp in state._amps.items():
        if ket.occupations[i] == n:
            occ = ket.occupations[:i] + ket.occupations[i + 1 :]
            out[FockKet(occ, ket.medium)] = amp
    kept = PureState(reg, out)
    return kept, kept.squared_norm()


def with_medium_dims(state: PureState, medium_dims: int) -> PureState:
    """Attach a medium subsystem (in its ground state) to a medium-free state."""
    if state.register.medium_dims != 1:
        raise ValueError("state already carries a medium subsystem")
    reg = ModeRegister(state.register.labels, state.register.cutoff, medium_dims)
    return PureState(reg, dict(state._amps))


def relabel_modes(state: PureState, mapping: Mapping[str, str]) -> PureState:
    """Rename modes; occupations and amplitudes are untouched."""
    labels = tuple(mapping.get(lbl, lbl) for lbl in state.register.labels)
    reg = ModeRegister(labels, state.register.cutoff, state.register.medium_dims)
    return PureState(reg, dict(state._amps))


class Ensemble:
    """A classical mixture of pure states: list of (weight, PureState).

    Branch states are normalized at construction; weights carry all the
    probability bookkeeping.  Before any conditioning the weights of a
    physical input mixture sum to 1; after conditioning the total weight is
    the accumulated joint probability of the accepted outcomes.
    """

    __slots__ = ("register", "branches")

    def __init__(
        self, register: ModeRegister, branches: Iterable[tuple[float, PureState]] = ()
    ) -> None:
        cleaned: list[tuple[float, PureState]] = []
        for weight, state in branches:
            if state.register != register:
                raise ValueError("all ensemble branches must share one register")
            w = float(weight)
            if w < -1e-12:
                raise ValueError(f"negative branch weight {w}")
            if w <= 0.0 or state.is_zero():
                continue
            cleaned.append((w, state.normalized()))
        self.register = register
        self.branches = tuple(cleaned)

    def total_weight(self) -> float:
        return sum(w for w, _ in self.branches)

    def __len__(self) -> int:
        return len(self.branches)

    def __iter__(self) -> Iterator[tuple[float, PureState]]:
        return iter(self.branches)

    def map_branches(self, op) -> "Ensemble":
        """Apply a (possibly trace-decreasing) pure-state map branch by branch.

        Any norm lost by ``op`` is folded into the branch weight; branches
        that die completely are dropped.
        """
        out: list[tuple[float, PureState]] = []
        register = self.register
        for w, state in self.branches:
            mapped = op(state)
            register = mapped.register
            n2 = mapped.squared_norm()
            if n2 > _ZERO_NORM:
                out.append((w * n2, mapped))
        return Ensemble(register, out)

    def condition_number(self, mode: str, n: int) -> tuple["Ensemble", float]:
        """Condition every branch on ``n`` photons in ``mode``.

        Returns the surviving ensemble (weights = joint probabilities, states
        renormalized, measured mode dropped) and the total accepted
        probability relative to this ensemble's weights.
        """
        out: list[tuple[float, PureState]] = []
        total = 0.0
        for w, state in self.branches:
            kept, q = project_number(state, mode, n)
            if q > _ZERO_NORM:
                total += w * q
                out.append((w * q, kept))
        return Ensemble(self.register.without(mode), out), total

    def number_distribution(self, mode: str) -> dict[int, float]:
        """Probability of each photon count in ``mode`` (by branch weight)."""
        dist: dict[int, float] = {}
        i = self.register.index(mode)
        for w, state in self.branches:
            for ket, amp in state._amps.items():
                n = ket.occupations[i]
                dist[n] = dist.get(n, 0.0) + w * abs(amp) ** 2
        return dist

    def normalized_weights(self) -> "Ensemble":
        total = self.total_weight()
        if total <= 0.0:
            raise ValueError("cannot normalize an empty ensemble")
        new = Ensemble.__new__(Ensemble)
        new.register = self.register
        new.branches = tuple((w / total, s) for w, s in self.branches)
        return new

    def consolidated(self, atol: float = _CONSOLIDATE_ATOL) -> "Ensemble":
        """Merge branches that are equal up to a global phase.

        Keeps ensembles small after partial traces; exact mixtures produced
        by the circuits here only ever have a handful of distinct branches,
        so the pairwise comparison is cheap.
        """
        merged: list[tuple[float, PureState]] = []
        for w, state in self.branches:
            canon = _canonical_phase(state)
            for j, (wj, sj) in enumerate(merged):
                if _states_close(canon, _canonical_phase(sj), atol):
                    merged[j] = (wj + w, sj)
                    break
            else:
                merged.append((w, state))
        new = Ensemble.__new__(Ensemble)
        new.register = self.register
        new.branches = tuple(merged)
        return new


def _canonical_phase(state: PureState) -> PureState:
    """Rotate the global phase so the largest-magnitude amplitude is real positive."""
    best: tuple[float, FockKet] | None = None
    for ket, amp in state._amps.items():
        mag = abs(amp)
        if best is None or mag > best[0] + 1e-15 or (abs(mag - best[0]) <= 1e-15 and ket < best[1]):
            best = (mag, ket)
    if best is None:
        return state
    anchor = state._amps[best[1]]
    return state.scaled(abs(anchor) / anchor)


def _states_close(a: PureState, b: PureState, atol: float) -> bool:
    kets = set(a._amps) | set(b._amps)
    return all(abs(a.amplitude(k) - b.amplitude(k)) <= atol for k in kets)


def partial_trace_discard(state: PureState | Ensemble, mode: str) -> Ensemble:
    """Trace out one mode, returning the reduced state as an ensemble.

    A pure state decomposes exactly over the discarded mode's occupation:
    grouping the kets by that occupation yields orthogonal components whose
    squared norms are the branch weights of the reduced density matrix.
    """
    if isinstance(state, Ensemble):
        reg = state.register.without(mode)
        branches: list[tuple[float, PureState]] = []
        for w, s in state.branches:
            for wk, sk in partial_trace_discard(s, mode).branches:
                branches.append((w * wk, sk))
        return Ensemble(reg, branches).consolidated()

    i = state.register.index(mode)
    reg = state.register.without(mode)
    groups: dict[int, dict[FockKet, complex]] = {}
    for ket, amp in state._amps.items():
        occ = ket.occupations[:i] + ket.occupations[i + 1 :]
        groups.setdefault(ket.occupations[i], {})[FockKet(occ, ket.medium)] = amp
    branches = []
    for _, amps in sorted(groups.items()):
        component = PureState(reg, amps)
        branches.append((component.squared_norm(), component))
    return Ensemble(reg, branches).consolidated()


def fidelity_to_single_photon(state: PureState | Ensemble) -> float:
    """Overlap with the one-photon Fock state of a single-mode state.

    For a pure state this is ``|<1|psi>|^2`` (medium levels summed over, i.e.
    the medium is traced out); for an ensemble, the weight-averaged value.
    Branch weights/normalization are divided out, so conditioned states can
    be passed directly.

    Raises:
        ValueError: if the state still has more (or fewer) than one mode.
    """
    if isinstance(state, Ensemble):
        total = state.total_weight()
        if total <= 0.0:
            return 0.0
        return sum(w * fidelity_to_single_photon(s) for w, s in state.branches) / total
    if state.register.n_modes != 1:
        raise ValueError(
            f"fidelity_to_single_photon needs a single-mode state, got {state.register.n_modes} modes"
        )
    n2 = state.squared_norm()
    if n2 <= _ZERO_NORM:
        return 0.0
    got = sum(
        abs(amp) ** 2 for ket, amp in state._amps.items() if ket.occupations == (1,)
    )
    return got / n2
