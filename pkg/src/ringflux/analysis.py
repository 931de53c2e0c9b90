"""Phase classification, momentum formulas, predictors and conservation checks."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .dynamics import (
    CycleInfo,
    FluxRule,
    NonBinaryState,
    cycle_mean_momentum,
    find_cycle,
    step,
    step_kernel,
)
from .lattice import (
    MIN_LENGTH,
    Densities,
    RingState,
    count_pattern,
    densities,
    make_state,
    one_star_zero_count,
    run_spectrum,
)

EXHAUSTIVE_BOUND = 16


class AnalysisError(ValueError):
    pass


class WrongPhase(AnalysisError):
    pass


class BoundTooLarge(AnalysisError):
    pass


class PhaseType(str, enum.Enum):
    TypeA = "TypeA"
    TypeB = "TypeB"
    Other = "Other"

    def __str__(self) -> str:
        return self.value


def discriminant(state: RingState) -> int:
    """``2*#011 - #1 + #0``; positive exactly on the moving-pair side."""
    return 2 * count_pattern(state, "011") - state.ones + state.zeros


def classify(state: RingState) -> PhaseType:
    pairs = count_pattern(state, "0110")
    spec = run_spectrum(state)
    if pairs == 0 and spec.zero_pair_count == 0:
        return PhaseType.TypeA
    if pairs + spec.zero_pair_count > 0 and spec.longest < 4:
        return PhaseType.TypeB
    return PhaseType.Other


def momentum_formula_A(state: RingState) -> Fraction:
    if classify(state) is not PhaseType.TypeA:
        raise WrongPhase(f"{state.word} is not type A")
    return Fraction(state.ones - state.zeros, state.length)


def momentum_formula_B(state: RingState) -> Fraction:
    if classify(state) is not PhaseType.TypeB:
        raise WrongPhase(f"{state.word} is not type B")
    return Fraction(2 * count_pattern(state, "011"), state.length)


def predict_q_rule1(rho, rho011) -> Fraction:
    rho, rho011 = Fraction(rho), Fraction(rho011)
    return max(2 * rho - 1, 2 * rho011)


def predict_q_ex1(rho, rho_odd) -> Fraction:
    rho, rho_odd = Fraction(rho), Fraction(rho_odd)
    return min(2 * (1 - rho), rho - rho_odd)


def predict_q_ex2(rho, rho_1star0) -> Fraction:
    """``rho_1star0`` must be the on-cycle value; it is not conserved in transients."""
    rho, rho_1star0 = Fraction(rho), Fraction(rho_1star0)
    return min(2 * rho, 1 - 4 * rho_1star0, 2 * (1 - rho))


@dataclass(frozen=True)
class AsymptoticReport:
    cycle: CycleInfo
    mean_momentum: Fraction
    type_label: PhaseType
    densities_initial: Densities
    densities_asymptotic: Densities

    def describe(self) -> str:
        fmt = lambda d: ", ".join(f"{k}={v}" for k, v in d._asdict().items())
        lines = [
            f"transient: {self.cycle.transient}",
            f"period: {self.cycle.period}",
            f"mean momentum Q: {self.mean_momentum}",
            f"type: {self.type_label}",
            f"densities (initial): {fmt(self.densities_initial)}",
            f"densities (on cycle): {fmt(self.densities_asymptotic)}",
        ]
        return "\n".join(lines)


def asymptotic_report(rule: FluxRule, state: RingState, budget: Optional[int] = None) -> AsymptoticReport:
    cycle = find_cycle(rule, state, budget)
    labels = {classify(s) for s in cycle.cycle_states}
    label = labels.pop() if len(labels) == 1 else PhaseType.Other
    return AsymptoticReport(
        cycle,
        cycle_mean_momentum(rule, cycle),
        label,
        densities(state),
        densities(cycle.cycle_states[0]),
    )


# -- conservation certificates --------------------------------------------

QUANTITIES = ("site-sum", "odd-runs", "one-star-zero")


def quantity_function(quantity: str) -> Callable[[RingState], int]:
    """Integer functional by name: ``site-sum``, ``odd-runs``, ``one-star-zero``
    or ``pattern:WORD``."""
    if quantity == "site-sum":
        return lambda s: s.ones
    if quantity == "odd-runs":
        return lambda s: run_spectrum(s).odd_runs
    if quantity == "one-star-zero":
        return one_star_zero_count
    if quantity.startswith("pattern:"):
        word = quantity[len("pattern:"):]
        if not word or set(word) - {"0", "1"}:
            raise AnalysisError(f"bad pattern in {quantity!r}")
        return lambda s: count_pattern(s, word)
    raise AnalysisError(f"unknown quantity {quantity!r}; use {', '.join(QUANTITIES)} or pattern:WORD")


@dataclass(frozen=True)
class Counterexample:
    state: str
    before: int
    after: Optional[int]  # None when the step itself left {0,1}


@dataclass(frozen=True)
class ConservationReport:
    rule: FluxRule
    quantity: str
    lengths_checked: tuple[int, ...]
    verdict: str
    counterexample: Optional[Counterexample] = None

    def text(self) -> str:
        lines = [
            f"rule: {self.rule.serialize()} ({self.rule.label})",
            f"quantity: {self.quantity}",
            f"lengths: {self.lengths_checked[0]}..{self.lengths_checked[-1]}",
            f"verdict: {self.verdict}",
        ]
        if self.counterexample:
            c = self.counterexample
            after = "non-binary" if c.after is None else c.after
            lines.append(f"counterexample: {c.state} before={c.before} after={after}")
        return "\n".join(lines)

    def record(self) -> dict:
        c = self.counterexample
        return {
            "rule": self.rule.serialize(),
            "quantity": self.quantity,
            "lmin": self.lengths_checked[0],
            "lmax": self.lengths_checked[-1],
            "verdict": self.verdict,
            "counterexample": c.state if c else "",
            "before": c.before if c else "",
            "after": ("" if c is None else "non-binary" if c.after is None else c.after),
        }


def certify_conserved(
    rule: FluxRule,
    quantity: str,
    L_min: int,
    L_max: int,
    bound: int = EXHAUSTIVE_BOUND,
) -> ConservationReport:
    """Check that ``quantity`` survives one step from every ring of every length
    in ``L_min..L_max``; report the smallest counterexample (shortest ring first,
    then lexicographic) otherwise."""
    if not MIN_LENGTH <= L_min <= L_max:
        raise AnalysisError(f"need {MIN_LENGTH} <= L_min <= L_max, got {L_min}, {L_max}")
    if L_max > bound:
        raise BoundTooLarge(f"L_max={L_max} exceeds exhaustive bound {bound}")
    value = quantity_function(quantity)
    lengths = tuple(range(L_min, L_max + 1))
    for L in lengths:
        for x in range(1 << L):
            s = RingState(L, x)
            new, invalid, _, _ = step_kernel(rule.table, x, L)
            before = value(s)
            if invalid:
                return ConservationReport(rule, quantity, lengths, "violated", Counterexample(s.word, before, None))
            after = value(RingState(L, new))
            if after != before:
                return ConservationReport(rule, quantity, lengths, "violated", Counterexample(s.word, before, after))
    return ConservationReport(rule, quantity, lengths, "conserved")


def replay_counterexample(rule: FluxRule, quantity: str, c: Counterexample) -> tuple[int, Optional[int]]:
    value = quantity_function(quantity)
    s = make_state(c.state)
    try:
        return value(s), value(step(rule, s))
    except NonBinaryState:
        return value(s), None

