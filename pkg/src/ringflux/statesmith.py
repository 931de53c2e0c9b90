"""Initial conditions: targeted construction, Bernoulli sampling, enumeration.

On a ring with at least one 0, ``#011`` equals the number of maximal 1-runs of
length >= 2, so a target ``(ones, runs_ge2)`` is a composition problem: pick a
run count ``r``, make ``runs_ge2`` of the runs long and the rest singletons,
then spread the leftover ones over the long runs and the zeros over the gaps.

Randomness is Python's ``random.Random`` (MT19937) seeded with a 64-bit
integer; its seeding and ``random()``/``randrange`` streams are stable across
platforms.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional

from .analysis import BoundTooLarge
from .lattice import MIN_LENGTH, RingState, TooShort

PRNG_NAME = "python-random-MT19937"
EXHAUSTIVE_BOUND = 16


class Infeasible(ValueError):
    pass


@dataclass(frozen=True)
class InvariantTarget:
    length: int
    ones: int
    runs_ge2: int
    odd_runs: Optional[int] = None


class Feasibility(NamedTuple):
    ok: bool
    runs: tuple[int, ...]  # admissible run counts r; empty when infeasible

    def __bool__(self) -> bool:
        return self.ok

    @property
    def witness(self) -> Optional[int]:
        return self.runs[0] if self.runs else None


def _odd_long_runs(target: InvariantTarget, r: int) -> Optional[int]:
    """How many long runs must have odd length for ``r`` runs, or None if
    the odd-run target cannot be met with ``r`` runs."""
    g = target.runs_ge2
    surplus = target.ones - r + g  # ones held by the long runs
    if target.odd_runs is None:
        return 0
    m = target.odd_runs - (r - g)
    if m < 0 or m > g or (surplus - m) % 2 or surplus < 2 * g + m:
        return None
    return m


def _run_counts(target: InvariantTarget) -> tuple[int, ...]:
    L, ones, g = target.length, target.ones, target.runs_ge2
    if ones < 0 or ones > L or g < 0:
        return ()
    if ones in (0, L):
        ok = g == 0 and target.odd_runs in (None, 0)
        return (0,) if ok else ()
    if g == 0:
        candidates = [ones] if ones <= L - ones else []
    else:
        candidates = range(g, min(L - ones, ones - g) + 1)
    return tuple(r for r in candidates if r >= 1 and _odd_long_runs(target, r) is not None)


def feasible(target: InvariantTarget) -> Feasibility:
    runs = _run_counts(target)
    return Feasibility(bool(runs), runs)


def _composition(rng: random.Random, total: int, parts: int) -> list[int]:
    """Uniformly random composition of ``total`` into ``parts`` nonnegative parts."""
    if parts == 0:
        return []
    bars = sorted(rng.sample(range(total + parts - 1), parts - 1))
    edges = [-1] + bars + [total + parts - 1]
    return [edges[i + 1] - edges[i] - 1 for i in range(parts)]


def construct(target: InvariantTarget, seed: int) -> RingState:
    L = target.length
    if L < MIN_LENGTH:
        raise TooShort(f"ring needs at least {MIN_LENGTH} sites, got {L}")
    options = feasible(target)
    if not options:
        raise Infeasible(f"no ring realizes {target}")
    if target.ones in (0, L):
        return RingState(L, (1 << L) - 1 if target.ones else 0)

    rng = random.Random(seed)
    r = options.runs[rng.randrange(len(options.runs))]
    g = target.runs_ge2
    m = _odd_long_runs(target, r)
    surplus = target.ones - r + g - 2 * g - m
    if target.odd_runs is None:
        extra = _composition(rng, surplus, g)
        long_runs = [2 + e for e in extra]
    else:
        odd = set(rng.sample(range(g), m))
        extra = _composition(rng, surplus // 2, g)
        long_runs = [2 + (i in odd) + 2 * e for i, e in enumerate(extra)]
    runs = long_runs + [1] * (r - g)
    rng.shuffle(runs)
    gaps = [1 + e for e in _composition(rng, L - target.ones - r, r)]
    word = "".join("1" * k + "0" * z for k, z in zip(runs, gaps))
    return RingState(L, int(word, 2)).rotate(rng.randrange(L))


def random_state(L: int, p, seed: int) -> RingState:
    """Independent Bernoulli(p) sites; ``p`` may be a Fraction, float or "a/b"."""
    if L < MIN_LENGTH:
        raise TooShort(f"ring needs at least {MIN_LENGTH} sites, got {L}")
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"probability {p} outside [0, 1]")
    rng = random.Random(seed)
    bits = 0
    for _ in range(L):
        bits = (bits << 1) | (rng.random() < p)
    return RingState(L, bits)


def enumerate_states(L: int, bound: int = EXHAUSTIVE_BOUND) -> Iterator[RingState]:
    if L < MIN_LENGTH:
        raise TooShort(f"ring needs at least {MIN_LENGTH} sites, got {L}")
    if L > bound:
        raise BoundTooLarge(f"L={L} exceeds exhaustive bound {bound}")
    return (RingState(L, x) for x in range(1 << L))


def feasible_targets(L: int) -> list[InvariantTarget]:
    """Every feasible ``(ones, runs_ge2)`` pair on ``L`` sites, ascending."""
    out = []
    for ones in range(L + 1):
        for g in range(L // 2 + 1):
            t = InvariantTarget(L, ones, g)
            if feasible(t):
                out.append(t)
    return out


def derive_seeds(seed: int, n: int) -> list[int]:
    """``n`` 64-bit child seeds drawn from a master generator."""
    rng = random.Random(seed)
    return [rng.getrandbits(64) for _ in range(n)]
