"""Set-complement intersection protocols and the uniform available-color sampler.

The kernel problem: Alice holds X, Bob holds Y, both subsets of range(m) with
|X| + |Y| <= m - k for slack k >= 1.  They must agree on an element outside
both sets.  A deterministic binary search does it in O(log^2 m) bits; a
randomized guess-and-subsample wrapper gets O(log^2 (m/k)) expected bits; and
pre-permuting the universe with public coins turns "find any free element"
into "sample a free element uniformly at random".
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from .runtime import (
    Bits,
    Message,
    Party,
    ProtocolError,
    PublicCoins,
    Transcript,
    draw_permutation,
    parallel_compose,
    run_protocol,
    width_for,
)

ALICE = "A"
BOB = "B"

# Sampling probability constant from the guess sequence: p = min(1, 150*m/k~^2).
GUESS_SAMPLE_NUMERATOR = 150


@dataclass(frozen=True)
class SlackIntInstance:
    """Universe range(m); Alice's blocked set X, Bob's blocked set Y."""

    m: int
    x: frozenset[int]
    y: frozenset[int]

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("universe must be nonempty")
        for s in (self.x, self.y):
            if s and (min(s) < 0 or max(s) >= self.m):
                raise ValueError("set element out of universe range")

    @property
    def slack(self) -> int:
        return self.m - len(self.x) - len(self.y)

    def free_elements(self) -> list[int]:
        """Brute-force complement; the oracle the protocols are checked against."""
        blocked = self.x | self.y
        return [e for e in range(self.m) if e not in blocked]

    @staticmethod
    def of(m: int, x, y) -> "SlackIntInstance":
        return SlackIntInstance(m, frozenset(x), frozenset(y))


def guess_probability(m: int, k_guess: int) -> float:
    """Element sampling probability for one guess of the slack."""
    return min(1.0, GUESS_SAMPLE_NUMERATOR * m / (k_guess * k_guess))


def _det_search_party(role: str, my_set: frozenset[int], domain: list[int],
                      phase: str | None = None) -> Party:
    """Binary search over ``domain`` for an element outside both sets.

    Per level: Alice sends |X n left half|; Bob replies one direction bit,
    preferring the left half whenever it has slack.  Maintains the invariant
    that the current domain has slack, so the final singleton is free.
    """
    # Halves are contiguous ranges of the domain, so one prefix-sum pass
    # gives every level's membership count in O(1).
    prefix = [0]
    for e in domain:
        prefix.append(prefix[-1] + (e in my_set))
    lo, hi = 0, len(domain)
    while hi - lo > 1:
        mid = lo + (hi - lo + 1) // 2
        left_size = mid - lo
        my_left = prefix[mid] - prefix[lo]
        if role == ALICE:
            reply = yield Message({"cnt": Bits(my_left, width_for(left_size))}, phase=phase)
            reply = yield Message(phase=phase)
            direction = reply["dir"].value
        else:
            reply = yield Message(phase=phase)
            x_left = reply["cnt"].value
            direction = 0 if x_left + my_left < left_size else 1
            yield Message({"dir": Bits(direction, 1)}, phase=phase)
        if direction == 0:
            hi = mid
        else:
            lo = mid
    elem = domain[lo]
    if elem in my_set:
        raise ProtocolError("binary search landed on a blocked element; "
                            "slack precondition violated")
    return elem


def det_slack_int_party(role: str, my_set: frozenset[int], domain: list[int],
                        phase: str | None = None) -> Party:
    return _det_search_party(role, my_set, domain, phase=phase)


def rand_slack_int_party(role: str, m: int, my_set: frozenset[int],
                         coins: PublicCoins, phase: str | None = None) -> Party:
    """Guess-and-subsample protocol for one party.

    Guesses k~ = m, ceil(m/2), ..., 1.  Per guess both parties publicly sample
    S from range(m) elementwise with probability min(1, 150m/k~^2); Alice
    announces |S n X|, Bob answers one bit for the condition
    |S n X| + |S n Y| < |S|, and on success they binary-search S.
    """
    k_guess = m
    while True:
        p = guess_probability(m, k_guess)
        s = np.flatnonzero(coins.bernoulli_array(p, m)).tolist()
        if role == ALICE:
            count = sum(1 for e in s if e in my_set)
            reply = yield Message({"cnt": Bits(count, width_for(len(s)))}, phase=phase)
            reply = yield Message(phase=phase)
            go = reply["go"].value
        else:
            reply = yield Message(phase=phase)
            x_count = reply["cnt"].value
            y_count = sum(1 for e in s if e in my_set)
            go = int(x_count + y_count < len(s))
            yield Message({"go": Bits(go, 1)}, phase=phase)
        if go:
            result = yield from _det_search_party(role, my_set, s, phase=phase)
            return result
        if k_guess == 1:
            raise ProtocolError("guess sequence exhausted; instance has no slack")
        k_guess = ceil(k_guess / 2)


def color_sample_party(role: str, m: int, my_set: frozenset[int],
                       coins: PublicCoins, phase: str | None = None) -> Party:
    """Uniform sampling wrapper: permute the universe publicly, find a free
    element in the permuted instance, map it back."""
    perm = draw_permutation(coins, m)
    inverse = [0] * m
    for i, pi in enumerate(perm):
        inverse[pi] = i
    mapped = frozenset(perm[e] for e in my_set)
    answer = yield from rand_slack_int_party(role, m, mapped, coins, phase=phase)
    return inverse[answer]


def _run_pair(make_party, coins: PublicCoins | None = None) -> tuple[int, Transcript]:
    alice = make_party(ALICE, coins.view() if coins is not None else None)
    bob = make_party(BOB, coins.view() if coins is not None else None)
    a, b, transcript = run_protocol(alice, bob)
    if a != b:
        raise ProtocolError(f"parties disagree on the answer: {a} vs {b}")
    return a, transcript


def det_slack_int(inst: SlackIntInstance, domain: list[int] | None = None
                  ) -> tuple[int, Transcript]:
    """Deterministic protocol; returns (free element, transcript)."""
    s = sorted(domain) if domain is not None else list(range(inst.m))
    in_x = sum(1 for e in s if e in inst.x)
    in_y = sum(1 for e in s if e in inst.y)
    if in_x + in_y >= len(s):
        raise ValueError("domain has no slack")
    return _run_pair(lambda role, _:
                     _det_search_party(role, inst.x if role == ALICE else inst.y, s))


def rand_slack_int(inst: SlackIntInstance, coins: PublicCoins) -> tuple[int, Transcript]:
    if inst.slack < 1:
        raise ValueError("instance must have slack >= 1")
    return _run_pair(lambda role, c:
                     rand_slack_int_party(role, inst.m,
                                          inst.x if role == ALICE else inst.y, c),
                     coins)


def color_sample_uniform(inst: SlackIntInstance, coins: PublicCoins
                         ) -> tuple[int, Transcript]:
    """Sample an element of the complement uniformly; both parties learn it."""
    if inst.slack < 1:
        raise ValueError("instance must have slack >= 1")
    return _run_pair(lambda role, c:
                     color_sample_party(role, inst.m,
                                        inst.x if role == ALICE else inst.y, c),
                     coins)


def batch_color_sample_party(role: str, instances: list[tuple[int, frozenset[int]]],
                             coins: PublicCoins, phase: str | None = None) -> Party:
    """One party's side of sampling all instances in parallel.

    Instance i draws its coins from substream i of ``coins``, so a batch run
    is message-for-message identical to solo runs on the same substreams.
    """
    subs = [color_sample_party(role, m, blocked, coins.substream(i), phase=phase)
            for i, (m, blocked) in enumerate(instances)]
    results = yield from parallel_compose(subs, phase=phase)
    return results


def batch_color_sample(instances: list[SlackIntInstance], coins: PublicCoins
                       ) -> tuple[list[int], Transcript]:
    for i, inst in enumerate(instances):
        if inst.slack < 1:
            raise ValueError(f"instance {i} has no slack")
    views = {ALICE: [(inst.m, inst.x) for inst in instances],
             BOB: [(inst.m, inst.y) for inst in instances]}
    answers, transcript = _run_pair(
        lambda role, c: batch_color_sample_party(role, views[role], c), coins)
    return answers, transcript
