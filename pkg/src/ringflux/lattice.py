"""Periodic binary rings, cyclic pattern counts and run-length bookkeeping.

A ring of ``L`` sites is stored as an ``L``-bit integer.  Site 0 is the most
significant bit, so ``int(word, 2)`` is the packed value of a bitstring
literal and ascending integers enumerate words in lexicographic order.
Particles move toward increasing site index.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, NamedTuple

MIN_LENGTH = 5


class LatticeError(ValueError):
    pass


class TooShort(LatticeError):
    pass


class NonBinarySymbol(LatticeError):
    pass


class PatternTooLong(LatticeError):
    pass


def shift(x, k: int, length: int):
    """Cyclic relabel: site ``j`` of the result holds site ``j + k`` of ``x``.

    Works on Python ints and on numpy unsigned arrays alike.
    """
    k %= length
    if k == 0:
        return x
    mask = (1 << length) - 1
    return ((x << k) | (x >> (length - k))) & mask


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True, order=True)
class RingState:
    length: int
    bits: int

    def __post_init__(self):
        if self.length < MIN_LENGTH:
            raise TooShort(f"ring needs at least {MIN_LENGTH} sites, got {self.length}")
        if not 0 <= self.bits < (1 << self.length):
            raise ValueError(f"packed value {self.bits} does not fit {self.length} sites")

    @property
    def mask(self) -> int:
        return (1 << self.length) - 1

    @property
    def ones(self) -> int:
        return popcount(self.bits)

    @property
    def zeros(self) -> int:
        return self.length - self.ones

    def site(self, j: int) -> int:
        return (self.bits >> (self.length - 1 - j % self.length)) & 1

    @property
    def sites(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.word)

    @property
    def word(self) -> str:
        return format(self.bits, f"0{self.length}b")

    def rotate(self, k: int) -> "RingState":
        """Ring whose site ``j`` is this ring's site ``j + k``."""
        return RingState(self.length, shift(self.bits, k, self.length))

    def __str__(self) -> str:
        return self.word


def make_state(bits) -> RingState:
    """Build a ring from a bitstring literal (or a sequence of 0/1 values)."""
    if not isinstance(bits, str):
        bits = "".join(str(b) for b in bits)
    bad = set(bits) - {"0", "1"}
    if bad:
        raise NonBinarySymbol(f"non-binary symbol(s) {sorted(bad)!r} in {bits!r}")
    if len(bits) < MIN_LENGTH:
        raise TooShort(f"ring needs at least {MIN_LENGTH} sites, got {len(bits)}")
    return RingState(len(bits), int(bits, 2))


def _check_pattern(pattern: str) -> str:
    if not pattern:
        raise LatticeError("pattern must be nonempty")
    if set(pattern) - {"0", "1"}:
        raise NonBinarySymbol(f"non-binary pattern {pattern!r}")
    return pattern


def match_mask(bits: int, length: int, pattern: str) -> int:
    """Bit mask of the start sites at which ``pattern`` occurs cyclically."""
    mask = (1 << length) - 1
    hit = mask
    for i, ch in enumerate(pattern):
        w = shift(bits, i, length)
        hit &= w if ch == "1" else ~w & mask
    return hit


def count_pattern(state: RingState, pattern: str) -> int:
    """Number of cyclic start positions where ``pattern`` matches."""
    _check_pattern(pattern)
    if len(pattern) > state.length:
        raise PatternTooLong(f"pattern of length {len(pattern)} on a ring of {state.length}")
    return popcount(match_mask(state.bits, state.length, pattern))


@dataclass(frozen=True)
class RunSpectrum:
    """Maximal blocks of 1's by length, the number of ``00`` pairs, saturation."""

    run_counts: Mapping[int, int] = field(default_factory=dict)
    zero_pair_count: int = 0
    saturated: bool = False

    def __getitem__(self, k: int) -> int:
        return self.run_counts.get(k, 0)

    @property
    def longest(self) -> int:
        return max(self.run_counts, default=0)

    @property
    def odd_runs(self) -> int:
        return sum(c for k, c in self.run_counts.items() if k % 2)

    @property
    def long_runs(self) -> int:
        """Runs of length >= 2; equals #011 on a non-saturated ring."""
        return sum(c for k, c in self.run_counts.items() if k >= 2)


def run_starts(state: RingState) -> dict[int, list[int]]:
    """Start sites of maximal 1-runs keyed by run length (empty if saturated)."""
    w = state.word
    if "0" not in w:
        return {}
    L = state.length
    z = w.index("0")
    rotated = w[z:] + w[:z]
    starts: dict[int, list[int]] = {}
    i = 0
    while i < L:
        if rotated[i] == "1":
            j = i
            while j < L and rotated[j] == "1":
                j += 1
            starts.setdefault(j - i, []).append((i + z) % L)
            i = j
        else:
            i += 1
    for v in starts.values():
        v.sort()
    return starts


@lru_cache(maxsize=1 << 18)
def run_spectrum(state: RingState) -> RunSpectrum:
    if state.zeros == 0:
        return RunSpectrum({}, 0, True)
    w = state.word
    z = w.index("0")
    counts: dict[int, int] = {}
    for block in (w[z:] + w[:z]).split("0"):
        if block:
            counts[len(block)] = counts.get(len(block), 0) + 1
    return RunSpectrum(dict(sorted(counts.items())), count_pattern(state, "00"), False)


class Densities(NamedTuple):
    rho: Fraction
    rho011: Fraction
    rho_odd: Fraction
    rho_1star0: Fraction


def one_star_zero_count(state: RingState) -> int:
    return count_pattern(state, "110") + count_pattern(state, "100")


def densities(state: RingState) -> Densities:
    L = state.length
    return Densities(
        Fraction(state.ones, L),
        Fraction(count_pattern(state, "011"), L),
        Fraction(run_spectrum(state).odd_runs, L),
        Fraction(one_star_zero_count(state), L),
    )
