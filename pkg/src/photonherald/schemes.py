"""End-to-end heralded single-photon purification circuits.

Four executable circuits, all fed by the same imperfect source model
``rho = p|1><1| + (1-p)|0><0|`` on each input:

* ``main`` — two source copies meet at a front splitter (BS0), one output is
  discarded, the other enters a Mach-Zehnder interferometer (BS1, BS2) with a
  two-photon absorber in the internal arm.  A number-resolving detector on
  one interferometer output heralds; exactly one photon there announces a
  single photon in the other output.
* ``doubled`` — both front-splitter outputs are processed through identical
  interferometer+absorber stacks; a click in exactly one of the two
  detectors heralds.  Photon bunching at the front splitter makes the two
  heralds exclusive, doubling the success probability.
* ``pair-herald`` — the front-splitter output crosses a four-wave-mixing
  medium whose length is an integer number of single-photon cycles;
  detecting one photon in each generated field projects the two-photon
  component onto exactly one surviving pump photon.
* ``filter-split`` — a four-wave mixer of half-odd length converts any single
  photon away completely; conditioning the generated fields on vacuum leaves
  only the (attenuated) two-photon and vacuum components, which a balanced
  splitter plus a single-photon click then separates into a heralded photon.

Every run returns a :class:`SchemeResult` carrying the success probability,
the conditional (heralded) output state, its fidelity to ``|1>``, and a
per-input-photon-sector breakdown of where the probability came from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .elements import BeamSplitterParams, apply_beam_splitter
from .fock import (
    DEFAULT_CUTOFF,
    Ensemble,
    ModeRegister,
    PureState,
    fidelity_to_single_photon,
    fock_state,
    partial_trace_discard,
    project_number,
    relabel_modes,
    tensor,
    vacuum_state,
    with_medium_dims,
)
from .tpam import FwmParams, FwmTpamSpec, GenericTpam, apply_generic_tpam, fwm_conditioned_channel, fwm_evolve

__all__ = [
    "MAIN",
    "DOUBLED",
    "PAIR_HERALD",
    "FILTER_SPLIT",
    "VARIANTS",
    "SourceSpec",
    "SchemeConfig",
    "SchemeResult",
    "input_mixture",
    "reduce_through_bs0",
    "run_main_scheme",
    "run_doubled_scheme",
    "run_pair_herald_scheme",
    "run_filter_split_scheme",
    "run_scheme",
]

MAIN = "main"
DOUBLED = "doubled"
PAIR_HERALD = "pair_herald"
FILTER_SPLIT = "filter_split"
VARIANTS = (MAIN, DOUBLED, PAIR_HERALD, FILTER_SPLIT)

#: Joint probabilities at or below this are treated as dead branches.
_NEGLIGIBLE = 1e-24


@dataclass(frozen=True, slots=True)
class SourceSpec:
    """Single-photon source efficiency p: emits |1> with probability p, else vacuum."""

    p: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"source efficiency must lie in [0, 1], got {self.p}")


@dataclass(frozen=True, slots=True)
class SchemeConfig:
    """Full circuit configuration.

    ``bs0`` is the front splitter both source copies meet at; ``bs1``/``bs2``
    enclose the absorber arm in the interferometric variants.  Mode wiring is
    done by the schemes themselves, so ``mode_pair`` may be left unset.
    """

    source: SourceSpec
    tpam: GenericTpam | FwmTpamSpec
    bs0: BeamSplitterParams = BeamSplitterParams.balanced()
    bs1: BeamSplitterParams = BeamSplitterParams.balanced()
    bs2: BeamSplitterParams = BeamSplitterParams.balanced()
    variant: str = MAIN
    cutoff: int = DEFAULT_CUTOFF

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown scheme variant {self.variant!r}; expected one of {VARIANTS}")
        if self.cutoff < 2:
            raise ValueError("scheme circuits need cutoff >= 2 (two-photon inputs)")


@dataclass(frozen=True)
class SchemeResult:
    """Outcome of one scheme run.

    Attributes:
        p_success: total heralding probability.
        conditional_state: heralded output ensemble (weights normalized to 1),
            or ``None`` when nothing heralds.
        fidelity: overlap of the conditional output with |1>; reported as 0.0
            when there is no conditional state.
        branch_log: contribution of each input photon-number sector to
            p_success; the values sum to p_success.
        details: scheme-specific diagnostics (per-detector probabilities,
            conventions, echoed parameters).
    """

    p_success: float
    conditional_state: Ensemble | None
    fidelity: float
    branch_log: dict[int, float]
    details: dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict[str, object]:
        """JSON-ready representation (deterministic ordering throughout)."""
        return {
            "p_success": self.p_success,
            "fidelity": self.fidelity,
            "branch_log": {str(k): self.branch_log[k] for k in sorted(self.branch_log)},
            "conditional_state": _ensemble_to_jsonable(self.conditional_state),
            "details": self.details,
        }


def _ensemble_to_jsonable(ens: Ensemble | None) -> dict[str, object] | None:
    if ens is None:
        return None
    branches = []
    for w, state in ens.branches:
        terms = [
            {
                "occupations": list(ket.occupations),
                "medium": ket.medium,
                "re": amp.real,
                "im": amp.imag,
            }
            for ket, amp in state.terms()
        ]
        branches.append({"weight": w, "terms": terms})
    return {"modes": list(ens.register.labels), "branches": branches}


def input_mixture(
    p: float, label: str = "B", *, cutoff: int = DEFAULT_CUTOFF
) -> Ensemble:
    """The source output: {p: |1>, 1-p: |0>} on a single mode."""
    spec = SourceSpec(p)  # range check
    reg = ModeRegister((label,), cutoff)
    return Ensemble(
        reg,
        [(spec.p, fock_state(reg, (1,))), (1.0 - spec.p, fock_state(reg, (0,)))],
    )


def reduce_through_bs0(
    p: float,
    theta0: float = math.pi / 4,
    phi0: float = 0.0,
    *,
    cutoff: int = DEFAULT_CUTOFF,
    discard: bool = True,
) -> Ensemble:
    """Interfere two source copies at the front splitter and drop one output.

    Returns the reduced mixture on mode ``B``.  At theta0 = pi/4 the weights
    are (p^2/2, p(1-p), p^2/2 - p + 1) on |2>, |1>, |0> — photon bunching
    pushes the one-photon weight down and the two-photon weight up, which is
    exactly what the absorber downstream feeds on.

    With ``discard=False`` the joint two-mode ensemble on (A, B) is returned
    instead (used by the doubled variant, which processes both outputs).
    """
    mix_a = input_mixture(p, "A", cutoff=cutoff)
    mix_b = input_mixture(p, "B", cutoff=cutoff)
    bs0 = BeamSplitterParams(theta0, phi0, ("A", "B"))
    joint_reg = ModeRegister(("A", "B"), cutoff)
    joint = Ensemble(
        joint_reg,
        [
            (wa * wb, apply_beam_splitter(tensor(sa, sb), bs0))
            for wa, sa in mix_a
            for wb, sb in mix_b
        ],
    )
    if not discard:
        return joint
    return partial_trace_discard(joint, "A")


def _sector_of(state: PureState) -> int:
    """Input-sector photon count of a single-mode Fock branch."""
    ket, _ = next(iter(state.terms()))
    return sum(ket.occupations)


def _apply_tpam(
    state: PureState, mode: str, tpam: GenericTpam | FwmTpamSpec, *, excited_level: int = 1
) -> PureState:
    if isinstance(tpam, GenericTpam):
        return apply_generic_tpam(state, mode, tpam, excited_level=excited_level)
    channel = fwm_conditioned_channel(tpam.params, tpam.condition)
    return channel.apply(state, mode)


def _interferometer(
    state: PureState,
    pair: tuple[str, str],
    cfg: SchemeConfig,
    *,
    excited_level: int = 1,
) -> PureState:
    """BS1 -> absorber on the first mode of ``pair`` -> BS2."""
    state = apply_beam_splitter(state, cfg.bs1.on(*pair))
    state = _apply_tpam(state, pair[0], cfg.tpam, excited_level=excited_level)
    return apply_beam_splitter(state, cfg.bs2.on(*pair))


def _validate_interferometer_tpam(tpam: GenericTpam | FwmTpamSpec) -> None:
    if isinstance(tpam, FwmTpamSpec) and not tpam.params.is_integer_length:
        raise ValueError(
            "the interferometric schemes need an integer-length four-wave mixer "
            "(transparency to one photon); got length_multiple="
            f"{tpam.params.length_multiple}"
        )


def _finalize(
    p: float,
    variant: str,
    p_success: float,
    branches: list[tuple[float, PureState]],
    branch_log: dict[int, float],
    register: ModeRegister | None,
    details: dict[str, object],
) -> SchemeResult:
    conditional: Ensemble | None = None
    fidelity = 0.0
    if p_success > _NEGLIGIBLE and register is not None:
        conditional = Ensemble(register, branches).normalized_weights().consolidated()
        fidelity = fidelity_to_single_photon(conditional)
    details = dict(details)
    details["p"] = p
    details["p_success_over_p2"] = p_success / p**2 if p > 0 else None
    details["variant"] = variant
    return SchemeResult(
        p_success=p_success,
        conditional_state=conditional,
        fidelity=fidelity,
        branch_log=branch_log,
        details=details,
    )


def run_main_scheme(cfg: SchemeConfig) -> SchemeResult:
    """Front splitter -> trace -> Mach-Zehnder with absorber -> herald.

    The detector watches the interferometer output that shares a label with
    the absorber arm (mode B); exactly one photon there heralds, and the
    conditional output lives in mode C.  With both interferometer splitters
    balanced and a generic absorber the success probability is
    ``|1-beta|^2 p^2 / 16``.
    """
    if cfg.variant != MAIN:
        raise ValueError(f"run_main_scheme needs variant={MAIN!r}, got {cfg.variant!r}")
    _validate_interferometer_tpam(cfg.tpam)
    p = cfg.source.p
    sectors = reduce_through_bs0(p, cfg.bs0.theta, cfg.bs0.phi, cutoff=cfg.cutoff)
    needs_medium = isinstance(cfg.tpam, GenericTpam)
    reg_c = ModeRegister(("C",), cfg.cutoff)

    p_success = 0.0
    branch_log: dict[int, float] = {}
    kept_branches: list[tuple[float, PureState]] = []
    out_register: ModeRegister | None = None
    for w, state in sectors:
        sector = _sector_of(state)
        psi = tensor(state, vacuum_state(reg_c))
        if needs_medium:
            psi = with_medium_dims(psi, 2)
        psi = _interferometer(psi, ("B", "C"), cfg)
        kept, q = project_number(psi, "B", 1)
        contribution = w * q
        branch_log[sector] = branch_log.get(sector, 0.0) + contribution
        if contribution > _NEGLIGIBLE:
            p_success += contribution
            kept_branches.append((contribution, kept))
            out_register = kept.register
    return _finalize(p, MAIN, p_success, kept_branches, branch_log, out_register, {})


def run_doubled_scheme(cfg: SchemeConfig) -> SchemeResult:
    """Process both front-splitter outputs; herald on exactly one click.

    Each output feeds its own interferometer+absorber stack (independent
    media, tracked as distinct excited levels of one shared medium register).
    Bunching at the front splitter never puts one photon in each stack, so a
    lone photon cannot click anywhere on the null manifold and the two
    heralds are mutually exclusive: the success probability is exactly twice
    the main scheme's.  The heralded mode is relabeled ``C`` whichever arm
    produced it.
    """
    if cfg.variant != DOUBLED:
        raise ValueError(f"run_doubled_scheme needs variant={DOUBLED!r}, got {cfg.variant!r}")
    _validate_interferometer_tpam(cfg.tpam)
    p = cfg.source.p
    needs_medium = isinstance(cfg.tpam, GenericTpam)
    medium_dims = 3 if needs_medium else 1
    cutoff = cfg.cutoff
    reg_cc = ModeRegister(("CA", "CB"), cutoff)
    out_reg = ModeRegister(("C",), cutoff, medium_dims)

    p_success = 0.0
    branch_log: dict[int, float] = {}
    kept_branches: list[tuple[float, PureState]] = []
    clicks_by_detector = {"A": 0.0, "B": 0.0}

    joint = reduce_through_bs0(p, cfg.bs0.theta, cfg.bs0.phi, cutoff=cutoff, discard=False)
    for w, state in joint:
        sector = _sector_of(state)
        psi = tensor(state, vacuum_state(reg_cc))
        if needs_medium:
            psi = with_medium_dims(psi, medium_dims)
        psi = _interferometer(psi, ("A", "CA"), cfg, excited_level=1)
        psi = _interferometer(psi, ("B", "CB"), cfg, excited_level=2)
        for n_a in range(cutoff + 1):
            kept_a, q_a = project_number(psi, "A", n_a)
            if q_a <= _NEGLIGIBLE:
                continue
            for n_b in range(cutoff + 1):
                kept_ab, q_ab = project_number(kept_a, "B", n_b)
                if q_ab <= _NEGLIGIBLE:
                    continue
                if (n_a == 1) == (n_b == 1):
                    continue  # zero or both clicks: failure
                contribution = w * q_ab
                detector, out_label, drop_label = (
                    ("A", "CA", "CB") if n_a == 1 else ("B", "CB", "CA")
                )
                p_success += contribution
                clicks_by_detector[detector] += contribution
                branch_log[sector] = branch_log.get(sector, 0.0) + contribution
                reduced = partial_trace_discard(kept_ab.normalized(), drop_label)
                for v, component in reduced:
                    kept_branches.append(
                        (contribution * v, relabel_modes(component, {out_label: "C"}))
                    )
    details = {"clicks_by_detector": clicks_by_detector}
    return _finalize(p, DOUBLED, p_success, kept_branches, branch_log, out_reg, details)


def run_pair_herald_scheme(
    p: float,
    length_multiple: float = 2.0,
    *,
    pump_phase: float = 0.0,
    theta0: float = math.pi / 4,
    phi0: float = 0.0,
    cutoff: int = DEFAULT_CUTOFF,
) -> SchemeResult:
    """Herald on the photon pair generated by converting the two-photon part.

    The front-splitter output crosses a four-wave mixer of integer length (a
    whole number of single-photon cycles, so a lone photon re-emerges and
    keeps its generated fields empty); detecting exactly one photon in each
    generated field can then only come from the two-photon component's
    single-conversion branch, leaving exactly one pump photon behind.
    p_success = p^2 |alpha1|^2 / 2 at a balanced front splitter.
    """
    params = FwmParams(length_multiple, pump_phase)
    if not params.is_integer_length or round(length_multiple) < 1:
        raise ValueError(
            "pair-herald scheme needs a positive integer length_multiple "
            f"(single-photon transparency); got {length_multiple}"
        )
    sectors = reduce_through_bs0(p, theta0, phi0, cutoff=cutoff)
    reg_e = ModeRegister(("E1", "E2"), cutoff)

    p_success = 0.0
    branch_log: dict[int, float] = {}
    kept_branches: list[tuple[float, PureState]] = []
    out_register: ModeRegister | None = None
    for w, state in sectors:
        sector = _sector_of(state)
        psi = tensor(state, vacuum_state(reg_e))
        psi = fwm_evolve(psi, ("B", "E1", "E2"), params)
        kept, _ = project_number(psi, "E1", 1)
        kept, q = project_number(kept, "E2", 1)
        contribution = w * q
        branch_log[sector] = branch_log.get(sector, 0.0) + contribution
        if contribution > _NEGLIGIBLE:
            p_success += contribution
            kept_branches.append((contribution, kept))
            out_register = kept.register
    details = {
        "length_multiple": length_multiple,
        "condition": [1, 1],
        "output_mode": "B",
    }
    return _finalize(p, PAIR_HERALD, p_success, kept_branches, branch_log, out_register, details)


def run_filter_split_scheme(
    p: float,
    length_multiple: float = 1.5,
    *,
    pump_phase: float = 0.0,
    theta0: float = math.pi / 4,
    phi0: float = 0.0,
    cutoff: int = DEFAULT_CUTOFF,
) -> SchemeResult:
    """Filter out the one-photon component, then split and herald.

    At half-odd length a single photon converts completely into the
    generated pair, so conditioning the generated fields on vacuum removes
    the one-photon component and attenuates the two-photon one by beta.  A
    balanced splitter against a fresh vacuum mode then sends the surviving
    pair into |1,1> half the time; exactly one photon at the monitored
    output heralds the twin photon in the other.  p_success = p^2|beta|^2/4.

    The |1,1> herald event is symmetric between the two splitter outputs:
    monitoring either one flags the same event with the same probability, so
    per-output probabilities are reported in ``details`` and only the
    monitored output counts toward p_success (summing both would
    double-count).
    """
    params = FwmParams(length_multiple, pump_phase)
    if not params.is_half_odd_length:
        raise ValueError(
            "filter-split scheme needs a half-odd length_multiple (k + 1/2) so a "
            f"single photon fully converts; got {length_multiple}"
        )
    sectors = reduce_through_bs0(p, theta0, phi0, cutoff=cutoff)
    reg_e = ModeRegister(("E1", "E2"), cutoff)
    reg_c = ModeRegister(("C",), cutoff)

    p_success = 0.0
    click_by_output = {"B": 0.0, "C": 0.0}
    branch_log: dict[int, float] = {}
    kept_branches: list[tuple[float, PureState]] = []
    out_register: ModeRegister | None = None
    for w, state in sectors:
        sector = _sector_of(state)
        psi = tensor(state, vacuum_state(reg_e))
        psi = fwm_evolve(psi, ("B", "E1", "E2"), params)
        kept, _ = project_number(psi, "E1", 0)
        kept, _ = project_number(kept, "E2", 0)
        if kept.is_zero():
            branch_log.setdefault(sector, 0.0)
            continue
        split = apply_beam_splitter(
            tensor(kept, vacuum_state(reg_c)), BeamSplitterParams.balanced(("B", "C"))
        )
        heralded, q = project_number(split, "B", 1)
        _, q_mirror = project_number(split, "C", 1)
        contribution = w * q
        click_by_output["B"] += contribution
        click_by_output["C"] += w * q_mirror
        branch_log[sector] = branch_log.get(sector, 0.0) + contribution
        if contribution > _NEGLIGIBLE:
            p_success += contribution
            kept_branches.append((contribution, heralded))
            out_register = heralded.register
    details = {
        "length_multiple": length_multiple,
        "condition": [0, 0],
        "monitored_output": "B",
        "output_mode": "C",
        "click_probability_by_output": click_by_output,
        "herald_convention": (
            "exactly one photon at the monitored output; the two outputs flag "
            "the same pair event, so only one is counted"
        ),
    }
    return _finalize(p, FILTER_SPLIT, p_success, kept_branches, branch_log, out_register, details)


def run_scheme(cfg: SchemeConfig) -> SchemeResult:
    """Dispatch a :class:`SchemeConfig` to the matching circuit."""
    if cfg.variant == MAIN:
        return run_main_scheme(cfg)
    if cfg.variant == DOUBLED:
        return run_doubled_scheme(cfg)
    if not isinstance(cfg.tpam, FwmTpamSpec):
        raise ValueError(f"variant {cfg.variant!r} requires a four-wave-mixing TPAM")
    common = dict(
        pump_phase=cfg.tpam.params.pump_phase,
        theta0=cfg.bs0.theta,
        phi0=cfg.bs0.phi,
        cutoff=cfg.cutoff,
    )
    if cfg.variant == PAIR_HERALD:
        return run_pair_herald_scheme(cfg.source.p, cfg.tpam.params.length_multiple, **common)
    return run_filter_split_scheme(cfg.source.p, cfg.tpam.params.length_multiple, **common)
