"""Zero-communication edge coloring game: exact evaluation and the labeling audit.

The game: seven shared spoke vertices; Alice privately joins her hub to a
uniform 2-subset of spokes, Bob independently joins his hub likewise; each
player colors its own two edges from three colors with no communication.
They win iff the union is a proper 3-edge-coloring.  Strategies are per-input
distributions over the nine ordered color pairs, and no strategy pair wins
with probability above 11024/11025: the labeling argument below extracts an
explicit failure witness from any pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

N_SPOKES = 7
N_COLORS = 3
INPUT_PAIRS: tuple[tuple[int, int], ...] = tuple(combinations(range(N_SPOKES), 2))
N_INPUTS = len(INPUT_PAIRS)          # 21
OUTCOMES: tuple[tuple[int, int], ...] = tuple((a, b) for a in range(N_COLORS)
                                              for b in range(N_COLORS))
N_OUTCOMES = len(OUTCOMES)           # 9
INPUT_INDEX = {pair: i for i, pair in enumerate(INPUT_PAIRS)}

WIN_BOUND = Fraction(11024, 11025)
LABEL_THRESHOLD = Fraction(1, 5)
CASE1_BOUND = Fraction(1, 21 * 5)
CASE2_BOUND = Fraction(1, 21 * 21 * 5 * 5)


class StrategyError(ValueError):
    pass


@dataclass(frozen=True)
class ZecStrategy:
    """21 x 9 table: row per sorted input pair (i < j), column per ordered
    outcome (color of the edge to the lower spoke, color to the higher)."""

    table: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.table) != N_INPUTS or any(len(r) != N_OUTCOMES for r in self.table):
            raise StrategyError("strategy table must be 21 x 9")
        for row in self.table:
            if any(p < 0 for p in row):
                raise StrategyError("negative probability")
            if abs(float(sum(row)) - 1.0) > 1e-12:
                raise StrategyError("input distribution does not sum to 1")

    def as_array(self) -> np.ndarray:
        return np.array([[float(p) for p in row] for row in self.table])

    def prob(self, input_idx: int, outcome: tuple[int, int]) -> Fraction:
        return self.table[input_idx][OUTCOMES.index(outcome)]

    def edge_color_marginal(self, input_idx: int, spoke: int, color: int) -> Fraction:
        """Probability the edge to ``spoke`` gets ``color`` under this input."""
        i, j = INPUT_PAIRS[input_idx]
        if spoke == i:
            pos = 0
        elif spoke == j:
            pos = 1
        else:
            raise ValueError(f"spoke {spoke} not part of input {INPUT_PAIRS[input_idx]}")
        return sum(p for (pair, p) in zip(OUTCOMES, self.table[input_idx])
                   if pair[pos] == color)

    @staticmethod
    def from_rows(rows) -> "ZecStrategy":
        return ZecStrategy(tuple(tuple(Fraction(p).limit_denominator(10**12)
                                       if not isinstance(p, Fraction) else p
                                       for p in row) for row in rows))

    @staticmethod
    def constant_pair(low_color: int, high_color: int) -> "ZecStrategy":
        """Deterministic: lower-spoke edge gets low_color, higher gets high_color."""
        idx = OUTCOMES.index((low_color, high_color))
        row = tuple(Fraction(1) if k == idx else Fraction(0) for k in range(N_OUTCOMES))
        return ZecStrategy(tuple(row for _ in range(N_INPUTS)))

    @staticmethod
    def uniform() -> "ZecStrategy":
        row = tuple(Fraction(1, 9) for _ in range(N_OUTCOMES))
        return ZecStrategy(tuple(row for _ in range(N_INPUTS)))

    @staticmethod
    def random_dirichlet(rng: np.random.Generator) -> "ZecStrategy":
        rows = []
        for _ in range(N_INPUTS):
            weights = rng.dirichlet(np.ones(N_OUTCOMES))
            rows.append([Fraction(w).limit_denominator(10**9) for w in weights])
        # renormalize exactly
        rows = [[p / sum(row) for p in row] for row in rows]
        return ZecStrategy(tuple(tuple(row) for row in rows))


def _joint_is_proper(alice_pair, alice_colors, bob_pair, bob_colors) -> bool:
    i, j = alice_pair
    k, l = bob_pair
    a1, a2 = alice_colors
    b1, b2 = bob_colors
    if a1 == a2 or b1 == b2:
        return False
    if i == k and a1 == b1:
        return False
    if i == l and a1 == b2:
        return False
    if j == k and a2 == b1:
        return False
    if j == l and a2 == b2:
        return False
    return True


_WIN_TENSOR: np.ndarray | None = None


def win_tensor() -> np.ndarray:
    """Boolean [alice_input, bob_input, alice_outcome, bob_outcome] wins."""
    global _WIN_TENSOR
    if _WIN_TENSOR is None:
        t = np.zeros((N_INPUTS, N_INPUTS, N_OUTCOMES, N_OUTCOMES), dtype=bool)
        for ia, pa in enumerate(INPUT_PAIRS):
            for ib, pb in enumerate(INPUT_PAIRS):
                for oa, ca in enumerate(OUTCOMES):
                    for ob, cb in enumerate(OUTCOMES):
                        t[ia, ib, oa, ob] = _joint_is_proper(pa, ca, pb, cb)
        _WIN_TENSOR = t
    return _WIN_TENSOR


def zec_win_probability(alice: ZecStrategy, bob: ZecStrategy) -> float:
    """Exact expectation over the 441 uniform input pairs and both strategies."""
    w = win_tensor()
    a = alice.as_array()
    b = bob.as_array()
    return float(np.einsum("io,ijop,jp->", a, w, b) / (N_INPUTS * N_INPUTS))


def zec_win_probability_exact(alice: ZecStrategy, bob: ZecStrategy) -> Fraction:
    """Rational-arithmetic evaluator for regression constants."""
    w = win_tensor()
    total = Fraction(0)
    for ia in range(N_INPUTS):
        arow = alice.table[ia]
        for ib in range(N_INPUTS):
            brow = bob.table[ib]
            acc = Fraction(0)
            for oa in range(N_OUTCOMES):
                pa = arow[oa]
                if not pa:
                    continue
                for ob in range(N_OUTCOMES):
                    if w[ia, ib, oa, ob] and brow[ob]:
                        acc += pa * brow[ob]
            total += acc
    return total / (N_INPUTS * N_INPUTS)


@dataclass(frozen=True)
class LabelTable:
    """Per spoke, the colors a side plays on that spoke's edge with
    probability >= 1/5 under some input; plus one witnessing input each."""

    alice: tuple[frozenset[int], ...]
    bob: tuple[frozenset[int], ...]
    alice_witness: dict[tuple[int, int], int]  # (spoke, color) -> input index
    bob_witness: dict[tuple[int, int], int]

    def labels(self, side: str) -> tuple[frozenset[int], ...]:
        return self.alice if side == "A" else self.bob

    def singleton_spokes(self, side: str) -> list[int]:
        return [s for s, lab in enumerate(self.labels(side)) if len(lab) == 1]


def build_label_table(alice: ZecStrategy, bob: ZecStrategy) -> LabelTable:
    sides = []
    witnesses = []
    for strat in (alice, bob):
        labels = []
        witness: dict[tuple[int, int], int] = {}
        for spoke in range(N_SPOKES):
            got = set()
            for color in range(N_COLORS):
                for idx, pair in enumerate(INPUT_PAIRS):
                    if spoke not in pair:
                        continue
                    if strat.edge_color_marginal(idx, spoke, color) >= LABEL_THRESHOLD:
                        got.add(color)
                        witness[(spoke, color)] = idx
                        break
            labels.append(frozenset(got))
        sides.append(tuple(labels))
        witnesses.append(witness)
    return LabelTable(sides[0], sides[1], witnesses[0], witnesses[1])


@dataclass(frozen=True)
class FailureWitness:
    """A concrete input (pair) with a guaranteed clash probability."""

    case: int                         # 1 or 2
    side: str | None                  # case 1: which side clashes internally
    alice_input: tuple[int, int] | None
    bob_input: tuple[int, int] | None
    color: int
    bound: Fraction                   # lower bound on the failure probability
    event_probability: Fraction       # exact probability of the witnessed clash


def find_failure_witness(alice: ZecStrategy, bob: ZecStrategy) -> FailureWitness:
    """Constructive form of the win-probability bound.

    Case 1: one side labels two spokes with the same singleton color; giving
    that side both those edges clashes with probability >= 1/5.  Case 2: a
    spoke carries >= 2 labels on both sides with a shared color; the two
    witnessing inputs collide on that spoke with probability >= 1/25.
    """
    table = build_label_table(alice, bob)
    for side, strat in (("A", alice), ("B", bob)):
        singles = table.singleton_spokes(side)
        by_color: dict[int, list[int]] = {}
        for s in singles:
            (c,) = table.labels(side)[s]
            by_color.setdefault(c, []).append(s)
        for c, spokes in sorted(by_color.items()):
            if len(spokes) >= 2:
                s1, s2 = sorted(spokes)[:2]
                idx = INPUT_INDEX[(s1, s2)]
                strat_row = strat.table[idx]
                event = strat_row[OUTCOMES.index((c, c))]
                witness_input = INPUT_PAIRS[idx]
                return FailureWitness(
                    case=1, side=side,
                    alice_input=witness_input if side == "A" else None,
                    bob_input=witness_input if side == "B" else None,
                    color=c, bound=CASE1_BOUND,
                    event_probability=Fraction(1, N_INPUTS) * event)
    for spoke in range(N_SPOKES):
        la = table.alice[spoke]
        lb = table.bob[spoke]
        if len(la) >= 2 and len(lb) >= 2:
            common = sorted(la & lb)
            if not common:
                continue
            c = common[0]
            ia = table.alice_witness[(spoke, c)]
            ib = table.bob_witness[(spoke, c)]
            pa = alice.edge_color_marginal(ia, spoke, c)
            pb = bob.edge_color_marginal(ib, spoke, c)
            return FailureWitness(
                case=2, side=None,
                alice_input=INPUT_PAIRS[ia], bob_input=INPUT_PAIRS[ib],
                color=c, bound=CASE2_BOUND,
                event_probability=Fraction(1, N_INPUTS * N_INPUTS) * pa * pb)
    raise AssertionError("no failure witness found; the case analysis is exhaustive, "
                         "so this indicates a bug in the label computation")


def sample_game_outcomes(strategy: ZecStrategy, inputs: np.ndarray,
                         rng: np.random.Generator) -> np.ndarray:
    """Vectorized outcome draws for an array of input indices."""
    cumulative = np.cumsum(strategy.as_array(), axis=1)
    u = rng.random(len(inputs))
    idx = (cumulative[inputs] < u[:, None]).sum(axis=1)
    return np.minimum(idx, N_OUTCOMES - 1)


def product_game_estimate(alice: ZecStrategy, bob: ZecStrategy, copies: int,
                          trials: int, seed: int = 0
                          ) -> tuple[float, tuple[float, float]]:
    """Monte-Carlo estimate of winning all ``copies`` independent instances,
    with a 95% confidence interval."""
    rng = np.random.default_rng(seed)
    w = win_tensor()
    wins = np.ones(trials, dtype=bool)
    for _ in range(copies):
        ia = rng.integers(0, N_INPUTS, size=trials)
        ib = rng.integers(0, N_INPUTS, size=trials)
        oa = sample_game_outcomes(alice, ia, rng)
        ob = sample_game_outcomes(bob, ib, rng)
        wins &= w[ia, ib, oa, ob]
    p_hat = float(wins.mean())
    half = 1.96 * (p_hat * (1 - p_hat) / trials) ** 0.5
    return p_hat, (max(0.0, p_hat - half), min(1.0, p_hat + half))
