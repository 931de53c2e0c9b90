"""Shared naive oracles.

Everything here works on plain strings/lists and shares no code with the
package's bit-packed paths.
"""
from fractions import Fraction

import pytest


def naive_count(word, pattern):
    L, k = len(word), len(pattern)
    ext = word + word[: k - 1]
    return sum(ext[j:j + k] == pattern for j in range(L))


def naive_runs(word):
    """Lengths of maximal cyclic 1-blocks (None for the all-ones word)."""
    if "0" not in word:
        return None
    L = len(word)
    runs = []
    for j in range(L):
        if word[j] == "1" and word[j - 1] == "0":
            k = 0
            while word[(j + k) % L] == "1":
                k += 1
            runs.append(k)
    return runs


def naive_step(table, word):
    """Literal per-site update; returns None if any site leaves {0, 1}."""
    u = [int(c) for c in word]
    L = len(u)

    def q(a, b, c, d):
        return table[a * 8 + b * 4 + c * 2 + d]

    new = []
    for j in range(L):
        v = (u[j] + q(u[(j - 2) % L], u[(j - 1) % L], u[j], u[(j + 1) % L])
             - q(u[(j - 1) % L], u[j], u[(j + 1) % L], u[(j + 2) % L]))
        if v not in (0, 1):
            return None
        new.append(str(v))
    return "".join(new)


def naive_flow(table, word):
    u = [int(c) for c in word]
    L = len(u)
    return sum(table[u[(j - 2) % L] * 8 + u[(j - 1) % L] * 4 + u[j] * 2 + u[(j + 1) % L]] for j in range(L))


def naive_mean_momentum(table, word):
    """Burn in past any transient (2^L steps), then average over one period."""
    L = len(word)
    for _ in range(1 << L):
        word = naive_step(table, word)
    start, total, n = word, 0, 0
    while True:
        total += naive_flow(table, word)
        n += 1
        word = naive_step(table, word)
        if word == start:
            return Fraction(total, n * L)


def brent(successor, x0):
    """Brent's cycle detection (constant memory): returns (transient, period)."""
    power = lam = 1
    tortoise, hare = x0, successor(x0)
    while tortoise != hare:
        if power == lam:
            tortoise, power, lam = hare, power * 2, 0
        hare = successor(hare)
        lam += 1
    tortoise = hare = x0
    for _ in range(lam):
        hare = successor(hare)
    mu = 0
    while tortoise != hare:
        tortoise, hare = successor(tortoise), successor(hare)
        mu += 1
    return mu, lam


ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
