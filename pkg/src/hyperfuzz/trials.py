"""Seeded trial drivers for the theorem oracles.

Every driver is reproducible from ``(seed, grid, trials)``: trial ``k`` draws
from its own ``random.Random`` seeded by :func:`trial_seed`.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .catalog import fixture_spaces
from .hypercore import Hyperfield, HypervectorSpace, check_prop_2_4
from .ifalgebra import (
    IFS,
    Agreement,
    Certificate,
    check_result_3_2,
    check_result_3_4,
    closure_oracle,
    equivalence_oracle,
    is_if_hyperfield,
)
from .lintrans import LinearMap, enumerate_linear_maps, theorem_4_2_oracle
from .modelfind import OverlaySearchError, SearchSpec, enumerate_structures, random_ifs, random_overlay

THEOREMS = ("3.5", "3.7", "3.8", "4.2")


def trial_seed(seed: int, trial: int) -> int:
    return seed * 1_000_003 + trial


@dataclass
class Case:
    """One refuting instance with everything needed to replay it."""

    space_name: str
    space: HypervectorSpace
    field_ifs: IFS
    certificate: Certificate
    members: tuple[IFS, ...] = ()
    overlay: IFS | None = None
    linear_map: LinearMap | None = None
    agreement: Agreement | None = None


@dataclass
class TrialSummary:
    theorem: str
    seed: int
    grid: int
    convention: str = ""
    trials: int = 0
    verified: int = 0
    cases: list[Case] = field(default_factory=list)

    @property
    def counterexamples(self) -> int:
        return self.trials - self.verified

    @property
    def ok(self) -> bool:
        return self.counterexamples == 0

    def tally(self) -> dict[str, Any]:
        return {
            "theorem": self.theorem,
            "convention": self.convention,
            "seed": self.seed,
            "grid": self.grid,
            "trials": self.trials,
            "verified": self.verified,
            "counterexample": self.counterexamples,
        }


def grid_ifs_all(carrier, grid: int):
    """Every IFS over ``carrier`` whose degrees lie on the ``1/grid`` lattice."""
    pairs = [(Fraction(m, grid), Fraction(v, grid)) for m in range(grid + 1) for v in range(grid + 1 - m)]
    for combo in itertools.product(pairs, repeat=len(carrier)):
        yield IFS(carrier, tuple(p[0] for p in combo), tuple(p[1] for p in combo))


def valid_family(
    space: HypervectorSpace, grid: int, rng: random.Random, size: int = 1, attempts: int = 200
) -> tuple[IFS, tuple[IFS, ...]]:
    """A random IF hyperfield A with ``size`` random valid IF-HVS overlays over it.

    A is redrawn whenever the overlays cannot be found quickly: field overlays
    with tiny ``mu_F(1)`` admit almost no space overlays.
    """
    for _ in range(attempts):
        a = random_overlay(space.field, grid, rng)
        try:
            members = tuple(random_overlay(space, grid, rng, field_overlay=a, retries=2000) for _ in range(size))
        except OverlaySearchError:
            continue
        return a, members
    raise OverlaySearchError(f"no valid overlay family on {space.carrier.names}")


def valid_pair(space: HypervectorSpace, grid: int, rng: random.Random) -> tuple[IFS, IFS]:
    a, (b,) = valid_family(space, grid, rng)
    return a, b


def _pick_space(rng: random.Random, spaces: dict[str, HypervectorSpace]) -> tuple[str, HypervectorSpace]:
    name = rng.choice(sorted(spaces))
    return name, spaces[name]


# -- derived inequalities ------------------------------------------------------


def derived_trials(trials: int = 500, seed: int = 0, grid: int = 8) -> dict[str, int]:
    """Prop 2.4 / Result 3.2 / Result 3.4 audits on random valid overlays.

    Returns the number of violations found per oracle (all expected zero).
    """
    fields: list[Hyperfield] = []
    for n in (1, 2, 3):
        fields.extend(enumerate_structures(SearchSpec("hyperfield", n)).structures)
    spaces = fixture_spaces()
    counts = {"PROP2.4": 0, "RES3.2": 0, "RES3.4": 0, "instances": 0}
    for k in range(trials):
        rng = random.Random(trial_seed(seed, k))
        if k % 2 == 0:
            f = rng.choice(fields)
            a = random_overlay(f, grid, rng)
            reports = {"PROP2.4": check_prop_2_4(f.additive), "RES3.2": check_result_3_2(f, a)}
        else:
            _, v = _pick_space(rng, spaces)
            a, b = valid_pair(v, grid, rng)
            reports = {
                "PROP2.4": check_prop_2_4(v.vectors),
                "RES3.2": check_result_3_2(v.field, a),
                "RES3.4": check_result_3_4(v, a, b),
            }
        for key, report in reports.items():
            counts[key] += report.total
            counts["instances"] += report.checked
    return counts


# -- Theorem 3.5 -------------------------------------------------------------------


def _disagreement(name, space, a, b, ag: Agreement, seed, trial) -> Case:
    report = ag.eight_report if not ag.eight else ag.four_report
    cert = Certificate("THM3.5", report.violations[0], b.mu, b.nu, "", seed, trial)
    return Case(name, space, a, cert, overlay=b, agreement=ag)


def equivalence_sweep(name: str, space: HypervectorSpace, grid: int = 4) -> TrialSummary:
    """Every grid overlay pair (A, B) with A an IF hyperfield."""
    summary = TrialSummary("3.5", seed=0, grid=grid)
    field_overlays = [a for a in grid_ifs_all(space.field.carrier, grid) if is_if_hyperfield(space.field, a)]
    space_overlays = list(grid_ifs_all(space.carrier, grid))
    for a in field_overlays:
        for b in space_overlays:
            ag = equivalence_oracle(space, a, b)
            summary.trials += 1
            if ag.agree:
                summary.verified += 1
            else:
                summary.cases.append(_disagreement(name, space, a, b, ag, None, None))
    return summary


def equivalence_trials(
    trials: int = 1000, seed: int = 0, grid: int = 8, spaces: dict[str, HypervectorSpace] | None = None
) -> TrialSummary:
    """Random A (an IF hyperfield) and B; odd trials draw B among valid
    IF-HVS overlays, even trials draw it unconstrained."""
    spaces = spaces or fixture_spaces()
    summary = TrialSummary("3.5", seed=seed, grid=grid)
    for k in range(trials):
        rng = random.Random(trial_seed(seed, k))
        name, v = _pick_space(rng, spaces)
        if k % 2:
            a, b = valid_pair(v, grid, rng)
        else:
            a, b = random_overlay(v.field, grid, rng), random_ifs(v.carrier, grid, rng)
        ag = equivalence_oracle(v, a, b)
        summary.trials += 1
        if ag.agree:
            summary.verified += 1
        else:
            summary.cases.append(_disagreement(name, v, a, b, ag, seed, k))
    return summary


# -- Theorems 3.7 / 3.8 ------------------------------------------------------------


def chain_family(base: IFS, thresholds) -> tuple[IFS, ...]:
    """Truncations ``(min(mu, 1-d), max(nu, d))`` of a valid overlay; for
    descending ``d`` they increase in ``mu`` and decrease in ``nu``."""
    members = []
    for d in sorted(thresholds, reverse=True):
        c = 1 - d
        members.append(IFS(base.carrier, tuple(min(m, c) for m in base.mu), tuple(max(v, d) for v in base.nu)))
    return tuple(members)


def closure_trials(
    op: str,
    convention: str,
    trials: int = 500,
    seed: int = 0,
    grid: int = 8,
    chain: bool = False,
    spaces: dict[str, HypervectorSpace] | None = None,
) -> TrialSummary:
    """Random families of one to three valid IF-HVS overlays (or chains)."""
    spaces = spaces or fixture_spaces()
    theorem = "3.7" if op == "intersect" else "3.8"
    summary = TrialSummary(theorem, seed=seed, grid=grid, convention=convention)
    for k in range(trials):
        rng = random.Random(trial_seed(seed, k))
        name, v = _pick_space(rng, spaces)
        if chain:
            a, base = valid_pair(v, grid, rng)
            members = chain_family(base, [Fraction(rng.randint(0, grid), grid) for _ in range(rng.randint(2, 3))])
        else:
            a, members = valid_family(v, grid, rng, rng.randint(1, 3))
        verdict = closure_oracle(v, a, members, op, convention, seed, k)
        summary.trials += 1
        if verdict.verified:
            summary.verified += 1
        else:
            summary.cases.append(Case(name, v, a, verdict.certificate, members=members))
    return summary


# -- Theorem 4.2 ---------------------------------------------------------------------


def preimage_trials(
    samples: int = 100, seed: int = 0, grid: int = 8, spaces: dict[str, HypervectorSpace] | None = None
) -> TrialSummary:
    """Every linear map between catalog spaces over a common field, against
    ``samples`` seeded valid (A, B) pairs on each target."""
    spaces = spaces or fixture_spaces()
    summary = TrialSummary("4.2", seed=seed, grid=grid)
    names = sorted(spaces)
    for j, wname in enumerate(names):
        w = spaces[wname]
        pairs = []
        for k in range(samples):
            rng = random.Random(trial_seed(seed, j * samples + k))
            pairs.append(valid_pair(w, grid, rng))
        for vname in names:
            v = spaces[vname]
            if v.field != w.field:
                continue
            for t in enumerate_linear_maps(v, w):
                for k, (a, b) in enumerate(pairs):
                    verdict = theorem_4_2_oracle(t, a, b)
                    summary.trials += 1
                    if verdict.verified:
                        summary.verified += 1
                    else:
                        cert = verdict.certificate
                        summary.cases.append(
                            Case(f"{vname} -> {wname}", v, a, cert, overlay=b, linear_map=t)
                        )
    return summary


SWEEP_SPACES = ("GF2/GF2", "K/K")


def equivalence_campaign(trials: int = 1000, seed: int = 0, grid: int = 8, sweep_grid: int = 4) -> TrialSummary:
    """Exhaustive sweeps on the two-element self-spaces plus seeded random trials."""
    spaces = fixture_spaces()
    total = TrialSummary("3.5", seed=seed, grid=grid)
    parts = [equivalence_sweep(name, spaces[name], sweep_grid) for name in SWEEP_SPACES]
    parts.append(equivalence_trials(trials, seed, grid, spaces))
    for part in parts:
        total.trials += part.trials
        total.verified += part.verified
        total.cases.extend(part.cases)
    return total


def run_theorem(
    theorem: str, trials: int, seed: int, grid: int = 8, convention: str = "paper", sweep: bool = False
) -> TrialSummary:
    if theorem == "3.5":
        if sweep:
            return equivalence_campaign(trials, seed, grid)
        return equivalence_trials(trials, seed, grid)
    if theorem == "3.7":
        return closure_trials("intersect", convention, trials, seed, grid)
    if theorem == "3.8":
        return closure_trials("union", convention, trials, seed, grid)
    if theorem == "4.2":
        return preimage_trials(trials, seed, grid)
    raise ValueError(f"unknown theorem {theorem!r}; expected one of {THEOREMS}")

