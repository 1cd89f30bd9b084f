"""Self-check suites: published-value reproduction and structural invariants.

Two suites, both returning plain :class:`CheckResult` rows so the CLI can
print one pass/fail line per item:

* ``paper_value_checks`` — re-derives every headline success probability and
  coefficient from the simulator and compares against the quoted values with
  their published rounding tolerances.
* ``invariant_checks`` — randomized structural properties (unitarity, norm
  preservation, global-phase invariance, doubling exactness, formula vs
  simulator agreement) over a seeded RNG.

One paper-value check is expected to fail: the quoted 0.1620 for the
pair-herald scheme at two mixer cycles.  The simulator (and the coefficient
formula it implements) give |alpha1|^2/2 = 0.162505..., which misses the
0.1620 +/- 5e-4 window by 5.1e-6.  The neighbouring quantities — the
coefficient normalization, the analytic maximum 1/6, and every other scheme
value — all reproduce, so the discrepancy is in the quoted rounding, not the
dynamics.  The check is kept honest rather than widened.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass

from .analysis import (
    VALID_CASES,
    CaseId,
    closed_form_ps,
    golden_section_maximize,
    jf_length_scan,
    manifold_completion,
    optimize_ps,
    simulate_manifold_point,
)
from .elements import BeamSplitterParams, apply_beam_splitter, unitarity_check
from .fock import (
    DEFAULT_CUTOFF,
    FockKet,
    ModeRegister,
    PureState,
    apply_creation,
    fock_state,
    project_number,
)
from .schemes import (
    DOUBLED,
    MAIN,
    SchemeConfig,
    SourceSpec,
    reduce_through_bs0,
    run_doubled_scheme,
    run_filter_split_scheme,
    run_main_scheme,
    run_pair_herald_scheme,
    run_scheme,
)
from .tpam import (
    FwmParams,
    FwmTpamSpec,
    GenericTpam,
    apply_generic_tpam,
    fwm_coefficients,
    fwm_coefficients_from_phase,
    fwm_conditioned_channel,
)

__all__ = ["CheckResult", "paper_value_checks", "invariant_checks", "DEFAULT_SEED"]

DEFAULT_SEED = 20260815


@dataclass(frozen=True, slots=True)
class CheckResult:
    """One verification item: |measured - expected| <= tolerance means pass."""

    name: str
    measured: float
    expected: float
    tolerance: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return abs(self.measured - self.expected) <= self.tolerance

    def format_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = (
            f"{status}  {self.name:<38s} measured={self.measured:.10g} "
            f"expected={self.expected:.10g} tol={self.tolerance:.1g}"
        )
        if self.note:
            line += f"  ({self.note})"
        return line


def _unitary_tpam(beta: complex) -> GenericTpam:
    alpha = math.sqrt(max(0.0, 1.0 - abs(beta) ** 2))
    return GenericTpam(alpha, beta)


def _main_config(
    beta: complex,
    theta1: float,
    *,
    p: float = 1.0,
    case: CaseId = CaseId.SUM_PLUS,
    tpam: GenericTpam | FwmTpamSpec | None = None,
    cutoff: int = DEFAULT_CUTOFF,
    variant: str = MAIN,
) -> SchemeConfig:
    theta2, phi1, phi2 = manifold_completion(theta1, case)
    return SchemeConfig(
        source=SourceSpec(p),
        tpam=tpam if tpam is not None else _unitary_tpam(beta),
        bs1=BeamSplitterParams(theta1, phi1),
        bs2=BeamSplitterParams(theta2, phi2),
        variant=variant,
        cutoff=cutoff,
    )


def _random_valid_config(rng: random.Random, cutoff: int = DEFAULT_CUTOFF) -> SchemeConfig:
    """A random configuration on the null-condition manifold."""
    theta1 = rng.uniform(0.0, 2.0 * math.pi)
    case = VALID_CASES[rng.randrange(len(VALID_CASES))]
    draw = rng.random()
    if draw < 0.6:
        tpam: GenericTpam | FwmTpamSpec = GenericTpam(
            math.sqrt(1.0 - (m := rng.uniform(0.0, 1.0)) ** 2)
            * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi)),
            m * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi)),
        )
    elif draw < 0.8:
        scale = rng.uniform(0.3, 0.95)  # lossy absorber: |alpha|^2+|beta|^2 < 1
        m = rng.uniform(0.0, 1.0)
        tpam = GenericTpam(scale * math.sqrt(1.0 - m * m), scale * m)
    else:
        tpam = FwmTpamSpec(FwmParams(float(rng.randint(1, 6))))
    cfg = _main_config(0.0, theta1, case=case, tpam=tpam, cutoff=cutoff)
    return SchemeConfig(
        source=SourceSpec(rng.uniform(0.05, 1.0)),
        tpam=cfg.tpam,
        bs0=BeamSplitterParams(rng.uniform(0.1, math.pi / 2 - 0.1)),
        bs1=cfg.bs1,
        bs2=cfg.bs2,
        variant=MAIN,
        cutoff=cutoff,
    )


def paper_value_checks(
    cutoff: int = DEFAULT_CUTOFF, seed: int = DEFAULT_SEED
) -> list[CheckResult]:
    """Reproduce every quoted number; returns one row per quoted value."""
    checks: list[CheckResult] = []

    # Front-splitter reduction weights at a balanced splitter.
    worst = 0.0
    for p in (0.25, 0.6, 0.86, 1.0):
        dist = reduce_through_bs0(p, cutoff=cutoff).number_distribution("B")
        expected = {2: p * p / 2.0, 1: p * (1.0 - p), 0: p * p / 2.0 - p + 1.0}
        worst = max(worst, max(abs(dist.get(n, 0.0) - expected[n]) for n in expected))
    checks.append(
        CheckResult("bs0-reduction-weights", worst, 0.0, 1e-12, "4 source efficiencies")
    )

    # A lone photon cannot trigger the herald with balanced splitters.
    reg = ModeRegister(("B", "C"), cutoff, medium_dims=2)
    psi = fock_state(reg, (1, 0))
    psi = apply_beam_splitter(psi, BeamSplitterParams.balanced(("B", "C")))
    psi = apply_generic_tpam(psi, "B", GenericTpam(1.0, 0.0))
    psi = apply_beam_splitter(psi, BeamSplitterParams.balanced(("B", "C")))
    _, q_null = project_number(psi, "B", 1)
    checks.append(CheckResult("single-photon-null-balanced", q_null, 0.0, 1e-12))

    # Balanced-interferometer success probability |1-beta|^2 p^2 / 16.
    worst = 0.0
    for beta in (1.0, 0.4130, 0.0, -1.0):
        for p in (0.5, 1.0):
            cfg = SchemeConfig(SourceSpec(p), _unitary_tpam(beta), cutoff=cutoff)
            sim = run_main_scheme(cfg).p_success
            worst = max(worst, abs(sim - abs(1.0 - beta) ** 2 * p * p / 16.0))
    checks.append(
        CheckResult("balanced-success-formula", worst, 0.0, 1e-10, "8 (beta, p) points")
    )

    # Optimal first-splitter angle: 30 degrees modulo the symmetry set.
    symmetry = [math.radians(d) for d in (30.0, 150.0, 210.0, 330.0)]
    worst_angle = 0.0
    worst_value = 0.0
    for beta in (0.0, 0.4130, -1.0, 0.25 + 0.55j):
        theta_star, ps_star = optimize_ps(beta)
        worst_angle = max(worst_angle, min(abs(theta_star - s) for s in symmetry))
        worst_value = max(worst_value, abs(ps_star - 27.0 / 256.0 * abs(1.0 - beta) ** 2))
    checks.append(CheckResult("optimal-angle-30deg", worst_angle, 0.0, 1e-6, "radians"))
    checks.append(CheckResult("optimal-success-27-256", worst_value, 0.0, 1e-10))

    # Strongest nonlinear phase shift: 27/64 ~ 0.4219, doubled to 0.84375.
    _, ps_star = optimize_ps(-1.0)
    checks.append(CheckResult("strong-phase-optimum", ps_star, 0.4219, 1e-4))
    doubled = run_doubled_scheme(
        _main_config(-1.0, math.pi / 6, variant=DOUBLED, cutoff=cutoff)
    ).p_success
    checks.append(CheckResult("doubled-scheme-0.84375", doubled, 0.84375, 1e-10))

    # Heralded outputs are pure |1> whenever anything heralds.
    rng = random.Random(seed)
    worst = 0.0
    heralded = 0
    for _ in range(100):
        result = run_scheme(_random_valid_config(rng, cutoff))
        if result.p_success > 1e-6:
            heralded += 1
            worst = max(worst, abs(result.fidelity - 1.0))
    checks.append(
        CheckResult(
            "heralded-purity-random-scan", worst, 0.0, 1e-12, f"{heralded}/100 heralded"
        )
    )

    # Mixer coefficient normalization and the one-cycle survival amplitude.
    rng = random.Random(seed + 1)
    worst = 0.0
    for _ in range(1000):
        a0, a1, b = fwm_coefficients_from_phase(rng.uniform(0.0, 8.0 * math.pi))
        worst = max(worst, abs(abs(a0) ** 2 + abs(a1) ** 2 + abs(b) ** 2 - 1.0))
    checks.append(CheckResult("fwm-normalization", worst, 0.0, 1e-12, "1000 random phases"))
    _, _, beta_one = fwm_coefficients(FwmParams(1.0))
    checks.append(CheckResult("fwm-beta-one-cycle", beta_one.real, 0.4130, 5e-4))

    # Mixer-fed interferometer at the optimal angle, and its running best.
    def interferometer_ps(m: int) -> float:
        cfg = _main_config(
            0.0, math.pi / 6, tpam=FwmTpamSpec(FwmParams(float(m))), cutoff=cutoff
        )
        return run_main_scheme(cfg).p_success

    checks.append(CheckResult("fwm-main-one-cycle", interferometer_ps(1), 0.0363, 5e-4))
    checks.append(CheckResult("fwm-main-four-cycles", interferometer_ps(4), 0.0446, 5e-4))
    best = max(row.ps_over_p2 for row in jf_length_scan(range(1, 13)))
    checks.append(
        CheckResult("fwm-main-running-best", best, 0.0469, 5e-4, "integer lengths 1..12")
    )

    # Pair-herald scheme: quoted value at two cycles, analytic maximum 1/6.
    ps_pair = run_pair_herald_scheme(1.0, 2.0, cutoff=cutoff).p_success
    checks.append(
        CheckResult(
            "pair-herald-two-cycles",
            ps_pair,
            0.1620,
            5e-4,
            "known discrepancy: formula gives 0.16251",
        )
    )
    _, peak = golden_section_maximize(
        lambda phi: abs(fwm_coefficients_from_phase(phi)[1]) ** 2 / 2.0,
        0.0,
        math.pi,
        tol=1e-10,
    )
    checks.append(CheckResult("pair-herald-analytic-max", peak, 1.0 / 6.0, 1e-6))

    # Filter-split scheme: quoted value at 1.5 cycles, limit 1/4.
    ps_filter = run_filter_split_scheme(1.0, 1.5, cutoff=cutoff).p_success
    checks.append(CheckResult("filter-split-three-half-cycles", ps_filter, 0.2291, 5e-4))
    best = max(
        row.ps_over_p2 for row in jf_length_scan([k + 0.5 for k in range(25)])
    )
    checks.append(
        CheckResult("filter-split-running-best", best, 0.25, 5e-4, "half-odd lengths to 24.5")
    )

    return checks


def invariant_checks(
    seed: int = DEFAULT_SEED, draws: int = 100, cutoff: int = DEFAULT_CUTOFF
) -> list[CheckResult]:
    """Randomized structural properties; deterministic for a given seed."""
    rng = random.Random(seed)
    checks: list[CheckResult] = []

    worst = max(
        unitarity_check(
            BeamSplitterParams(rng.uniform(-math.pi, math.pi), rng.uniform(0.0, 2.0 * math.pi)),
            cutoff=cutoff,
        )
        for _ in range(draws)
    )
    checks.append(CheckResult("beam-splitter-unitarity", worst, 0.0, 1e-12, f"{draws} draws"))

    # BS(theta, phi) then BS(-theta, phi) is the identity.
    reg = ModeRegister(("B", "C"), cutoff)
    worst = 0.0
    for _ in range(draws):
        theta, phi = rng.uniform(-math.pi, math.pi), rng.uniform(0.0, 2.0 * math.pi)
        n1 = rng.randint(0, cutoff // 2)
        n2 = rng.randint(0, cutoff - n1 - 1)
        psi = fock_state(reg, (n1, n2))
        out = apply_beam_splitter(psi, BeamSplitterParams(theta, phi, ("B", "C")))
        out = apply_beam_splitter(out, BeamSplitterParams(-theta, phi, ("B", "C")))
        diff = {ket: amp for ket, amp in out.terms()}
        for ket, amp in psi.terms():
            diff[ket] = diff.get(ket, 0.0) - amp
        worst = max(worst, max(abs(v) for v in diff.values()))
    checks.append(CheckResult("beam-splitter-composition", worst, 0.0, 1e-12))

    # Unitary absorber + splitters preserve the norm.
    worst = 0.0
    reg_m = ModeRegister(("B", "C"), cutoff, medium_dims=2)
    for _ in range(draws):
        m = rng.uniform(0.0, 1.0)
        tpam = GenericTpam(
            math.sqrt(1.0 - m * m) * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi)),
            m * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi)),
        )
        psi = PureState(
            reg_m,
            {
                FockKet((2, 0)): cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi)),
                FockKet((1, 1)): 0.4 * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi)),
                FockKet((0, 2)): 0.2 * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi)),
            },
        )
        norm_in = psi.squared_norm()
        out = apply_beam_splitter(psi, BeamSplitterParams.balanced(("B", "C")))
        out = apply_generic_tpam(out, "B", tpam)
        out = apply_beam_splitter(out, BeamSplitterParams(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi), ("B", "C")))
        worst = max(worst, abs(out.squared_norm() - norm_in))
    checks.append(CheckResult("norm-preservation", worst, 0.0, 1e-12))

    # A global phase on the absorber rules never moves any probability.
    worst = 0.0
    for _ in range(draws // 2):
        beta = rng.uniform(0.0, 1.0) * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        base = _unitary_tpam(beta)
        shifted = GenericTpam(base.alpha, base.beta, global_phase=rng.uniform(0.0, 2.0 * math.pi))
        theta1 = rng.uniform(0.0, 2.0 * math.pi)
        p = rng.uniform(0.2, 1.0)
        ps_base = run_main_scheme(_main_config(beta, theta1, p=p, tpam=base, cutoff=cutoff)).p_success
        ps_shift = run_main_scheme(_main_config(beta, theta1, p=p, tpam=shifted, cutoff=cutoff)).p_success
        worst = max(worst, abs(ps_base - ps_shift))
    checks.append(CheckResult("tpam-global-phase-invariance", worst, 0.0, 1e-12))

    # Integer-length mixers are exactly transparent to a single photon.
    worst = 0.0
    for m in range(1, draws + 1):
        channel = fwm_conditioned_channel(FwmParams(float(m)))
        worst = max(worst, abs(channel.survival_probability(1) - 1.0))
    checks.append(CheckResult("fwm-single-photon-transparency", worst, 0.0, 1e-12))

    # Doubling exactness: the two heralds are exclusive.
    worst = 0.0
    for _ in range(draws // 4):
        cfg = _random_valid_config(rng, cutoff)
        main_ps = run_main_scheme(cfg).p_success
        doubled_cfg = SchemeConfig(
            cfg.source, cfg.tpam, cfg.bs0, cfg.bs1, cfg.bs2, DOUBLED, cfg.cutoff
        )
        worst = max(worst, abs(run_doubled_scheme(doubled_cfg).p_success - 2.0 * main_ps))
    checks.append(CheckResult("doubling-exactness", worst, 0.0, 1e-12))

    # Ladder: projecting n+1 after a creation operator gives (n+1) * norm^2.
    reg1 = ModeRegister(("B",), cutoff)
    worst = 0.0
    for _ in range(draws):
        n = rng.randint(0, cutoff - 1)
        scale = rng.uniform(0.1, 1.0) * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        psi = fock_state(reg1, (n,)).scaled(scale)
        _, q = project_number(apply_creation(psi, "B"), "B", n + 1)
        worst = max(worst, abs(q - (n + 1) * abs(scale) ** 2))
    checks.append(CheckResult("creation-ladder", worst, 0.0, 1e-12))

    # Closed form vs simulator across random manifold points, all branches.
    worst = 0.0
    for _ in range(draws // 2):
        case = VALID_CASES[rng.randrange(len(VALID_CASES))]
        theta1 = rng.uniform(0.0, 2.0 * math.pi)
        beta = rng.uniform(0.0, 1.0) * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        predicted = closed_form_ps(beta, theta1, case)
        simulated = simulate_manifold_point(beta, theta1, case, cutoff=cutoff)
        worst = max(worst, abs(predicted - simulated))
    checks.append(CheckResult("formula-simulator-agreement", worst, 0.0, 1e-10))

    return checks
