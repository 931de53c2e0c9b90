"""Flux tables, the conservation-form update, and exact asymptotics.

The update is

    u_j' = u_j + q(u_{j-2}, u_{j-1}, u_j, u_{j+1}) - q(u_{j-1}, u_j, u_{j+1}, u_{j+2})

where ``q`` at window ``(j-2 .. j+1)`` is the flow across the bond
``(j-1, j)``.  The kernel below evaluates it bit-sliced over a whole packed
ring at once; the same code runs on a Python int or on a numpy array of
packed rings (used to tabulate every successor of a small ring size).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .lattice import MIN_LENGTH, RingState, popcount, shift

# Table 1 column order: abcd = 1111, 1110, ..., 0000.
_COLUMN_ORDER = tuple(range(15, -1, -1))


class DynamicsError(ValueError):
    pass


class UnknownRule(DynamicsError):
    pass


class RuleParseError(DynamicsError):
    pass


class NonBinaryState(DynamicsError):
    def __init__(self, state: RingState, sites: Sequence[int]):
        self.state = state
        self.sites = tuple(sites)
        super().__init__(f"update of {state.word} leaves {{0,1}} at site(s) {list(self.sites)}")


class StepBudgetExceeded(DynamicsError):
    pass


def _from_columns(ones=(), minus=()) -> tuple[int, ...]:
    table = [0] * 16
    for w in ones:
        table[int(w, 2)] = 1
    for w in minus:
        table[int(w, 2)] = -1
    return tuple(table)


@dataclass(frozen=True)
class FluxRule:
    """16 flux values indexed by the 4-bit window ``abcd`` (``a`` most significant)."""

    table: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        table = tuple(int(v) for v in self.table)
        if len(table) != 16:
            raise RuleParseError(f"flux table needs 16 entries, got {len(table)}")
        if any(v not in (-1, 0, 1) for v in table):
            raise RuleParseError(f"flux entries must be -1, 0 or 1: {table}")
        object.__setattr__(self, "table", table)

    def __call__(self, a: int, b: int, c: int, d: int) -> int:
        return self.table[(a << 3) | (b << 2) | (c << 1) | d]

    def serialize(self) -> str:
        return "table:" + ",".join(str(self.table[i]) for i in _COLUMN_ORDER)

    @property
    def label(self) -> str:
        return self.name or self.serialize()

    def __str__(self) -> str:
        return self.label


RULE1 = FluxRule(_from_columns(ones=("1111", "1110", "1101", "1100", "0110")), "rule1")
EX1 = FluxRule(_from_columns(ones=("1110", "1101", "1100", "0110")), "ex1")
EX2 = FluxRule(
    _from_columns(ones=("1110", "1101", "1100", "1010", "1000", "0101", "0100"), minus=("0011",)),
    "ex2",
)
BUILTIN_RULES = {"rule1": RULE1, "ex1": EX1, "ex2": EX2}


def builtin_rule(name: str) -> FluxRule:
    try:
        return BUILTIN_RULES[name.lower()]
    except KeyError:
        raise UnknownRule(f"unknown rule {name!r}; built-ins are {sorted(BUILTIN_RULES)}") from None


def parse_rule(text: str) -> FluxRule:
    """Parse ``rule1``/``ex1``/``ex2`` or ``table:q15,...,q0``."""
    text = text.strip()
    if not text.startswith("table:"):
        return builtin_rule(text)
    try:
        values = [int(v) for v in text[len("table:"):].split(",")]
    except ValueError:
        raise RuleParseError(f"cannot parse flux table {text!r}") from None
    if len(values) != 16:
        raise RuleParseError(f"flux table needs 16 entries, got {len(values)}")
    table = [0] * 16
    for idx, v in zip(_COLUMN_ORDER, values):
        table[idx] = v
    rule = FluxRule(tuple(table))
    for builtin in BUILTIN_RULES.values():
        if builtin.table == rule.table:
            return builtin
    return rule


def flux(rule: FluxRule, a: int, b: int, c: int, d: int) -> int:
    return rule(a, b, c, d)


@lru_cache(maxsize=None)
def _minterms(table: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return (
        tuple(i for i, v in enumerate(table) if v == 1),
        tuple(i for i, v in enumerate(table) if v == -1),
    )


def _inflow_masks(table, x, length):
    """Masks of sites receiving +1 and -1 flow across their left bond."""
    mask = (1 << length) - 1
    windows = (shift(x, -2, length), shift(x, -1, length), x, shift(x, 1, length))
    lits = [(w & mask, ~w & mask) for w in windows]

    def cover(indices):
        acc = x & 0
        for idx in indices:
            term = mask
            for pos in range(4):
                term &= lits[pos][0] if (idx >> (3 - pos)) & 1 else lits[pos][1]
            acc |= term
        return acc

    plus, minus = _minterms(table)
    return cover(plus), cover(minus)


def step_kernel(table, x, length):
    """One bit-sliced update.

    Returns ``(new, invalid, inflow_plus, inflow_minus)``; ``invalid`` marks
    sites whose updated value would leave {0, 1}.
    """
    mask = (1 << length) - 1
    p_in, n_in = _inflow_masks(table, x, length)
    p_out, n_out = shift(p_in, 1, length), shift(n_in, 1, length)
    # u + p_in + n_out - (n_in + p_out), as 2-bit sums compared slice-wise
    s0 = x ^ p_in ^ n_out
    s1 = (x & p_in) | (x & n_out) | (p_in & n_out)
    t0 = n_in ^ p_out
    t1 = n_in & p_out
    equal = ~(s0 ^ t0) & ~(s1 ^ t1) & mask
    one = ((~t1 & ~t0 & ~s1 & s0) | (~t1 & t0 & s1 & ~s0) | (t1 & s1 & s0)) & mask
    invalid = mask & ~(equal | one)
    return one, invalid, p_in, n_in


def step(rule: FluxRule, state: RingState) -> RingState:
    new, invalid, _, _ = step_kernel(rule.table, state.bits, state.length)
    if invalid:
        raise NonBinaryState(state, _invalid_sites(invalid, state.length))
    return RingState(state.length, new)


def flow_count(rule: FluxRule, state: RingState) -> int:
    """Total flux summed over all bonds (particles moved, net of -1 entries)."""
    _, _, p_in, n_in = step_kernel(rule.table, state.bits, state.length)
    return popcount(p_in) - popcount(n_in)


def instantaneous_momentum(rule: FluxRule, state: RingState) -> Fraction:
    return Fraction(flow_count(rule, state), state.length)


@dataclass(frozen=True)
class CycleInfo:
    transient: int
    period: int
    cycle_states: tuple[RingState, ...]


def trajectory(rule: FluxRule, state: RingState, steps: int) -> list[RingState]:
    if steps < 0:
        raise ValueError("steps must be >= 0")
    out = [state]
    for _ in range(steps):
        out.append(step(rule, out[-1]))
    return out


def cycle_of(successor: Callable[[int], int], x: int, budget: int) -> tuple[int, list[int]]:
    """Transient length and cycle (packed) of ``x`` under ``successor``.

    Exact: every visited state is remembered, so work is O(transient + period).
    """
    seen: dict[int, int] = {}
    path: list[int] = []
    while x not in seen:
        if len(path) >= budget:
            raise StepBudgetExceeded(f"no recurrence within {budget} steps")
        seen[x] = len(path)
        path.append(x)
        x = successor(x)
    mu = seen[x]
    return mu, path[mu:]


def default_budget(length: int) -> int:
    return (1 << length) + 1


def find_cycle(
    rule: FluxRule,
    state: RingState,
    budget: int | None = None,
    table: "TransitionTable | None" = None,
) -> CycleInfo:
    """Transient, period and cycle of ``state``; ``table`` (if given) must be
    ``transition_table(rule, state.length)`` and replaces stepping by lookup."""
    L = state.length
    if budget is None:
        budget = default_budget(L)
    if table is not None:
        successor = table.next
    else:
        def successor(x: int) -> int:
            return step(rule, RingState(L, x)).bits

    mu, cycle = cycle_of(successor, state.bits, budget)
    return CycleInfo(mu, len(cycle), tuple(RingState(L, c) for c in cycle))


def cycle_mean_momentum(rule: FluxRule, cycle: CycleInfo) -> Fraction:
    L = cycle.cycle_states[0].length
    total = sum(flow_count(rule, s) for s in cycle.cycle_states)
    return Fraction(total, cycle.period * L)


def mean_momentum(rule: FluxRule, state: RingState, budget: int | None = None) -> Fraction:
    """Asymptotic mean momentum: flux averaged over one period of the cycle."""
    return cycle_mean_momentum(rule, find_cycle(rule, state, budget))


def _invalid_sites(mask: int, length: int) -> list[int]:
    return [j for j in range(length) if mask >> (length - 1 - j) & 1]


@dataclass(frozen=True)
class TransitionTable:
    """Successor, invalid-site mask and total flow for every packed ring of one length."""

    length: int
    successor: list[int]
    invalid: list[int]
    flow: list[int]

    def next(self, x: int) -> int:
        if self.invalid[x]:
            raise NonBinaryState(RingState(self.length, x), _invalid_sites(self.invalid[x], self.length))
        return self.successor[x]


def transition_table(rule: FluxRule, length: int) -> TransitionTable:
    if length < MIN_LENGTH or length > 24:
        raise ValueError(f"transition tables are built for {MIN_LENGTH} <= L <= 24, got {length}")
    xs = np.arange(1 << length, dtype=np.uint64)
    new, invalid, p_in, n_in = step_kernel(rule.table, xs, length)
    flow = np.bitwise_count(p_in).astype(np.int64) - np.bitwise_count(n_in).astype(np.int64)
    return TransitionTable(length, new.tolist(), invalid.tolist(), flow.tolist())
