"""Exact Shapley values for small cooperative games.

Games are described by a player count and a value function over player
coalitions encoded as bitmasks.  All enumeration is exhaustive, so this
module is the ground truth for axiom checks and worked examples; the
player count is capped to keep the exponential cost honest.

Results are exact ``fractions.Fraction`` objects whenever the value
function returns rationals (ints or Fractions); float-valued games fall
back to double precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

MAX_PLAYERS = 24


@dataclass(frozen=True)
class CooperativeGame:
    """A cooperative game: ``n_players`` and a value function over coalitions.

    ``value`` receives a coalition as a bitmask (bit ``i`` set means player
    ``i`` is in the coalition, players numbered from 0) and returns its
    worth.  The function must be total over all ``2**n_players`` masks.
    """

    n_players: int
    value: Callable[[int], float | Fraction]

    def __post_init__(self) -> None:
        if not 1 <= self.n_players <= MAX_PLAYERS:
            raise ValueError(
                f"n_players must be in 1..{MAX_PLAYERS}, got {self.n_players}"
            )

    @property
    def grand_coalition(self) -> int:
        return (1 << self.n_players) - 1


def _shapley_weights(k: int) -> list[Fraction]:
    """Exact coalition weights |S|! (k-|S|-1)! / k! indexed by |S|."""
    kf = factorial(k)
    return [Fraction(factorial(s) * factorial(k - s - 1), kf) for s in range(k)]


def _memoized(value: Callable[[int], float | Fraction]) -> Callable[[int], float | Fraction]:
    cache: dict[int, float | Fraction] = {}

    def lookup(mask: int) -> float | Fraction:
        if mask not in cache:
            cache[mask] = value(mask)
        return cache[mask]

    return lookup


def classic_shapley(game: CooperativeGame, player: int) -> float | Fraction:
    """Average marginal contribution of ``player`` over all coalitions.

    Exact when the value function is rational-valued.  The sum runs over
    every coalition of the other players, weighted by the number of
    orderings that place exactly that coalition before the player.
    """
    p = game.n_players
    if not 0 <= player < p:
        raise ValueError(f"player {player} out of range 0..{p - 1}")
    v = _memoized(game.value)
    weights = _shapley_weights(p)
    others = [i for i in range(p) if i != player]
    bit = 1 << player
    total: float | Fraction = Fraction(0)
    for sub in range(1 << (p - 1)):
        mask = 0
        size = 0
        for j, i in enumerate(others):
            if sub >> j & 1:
                mask |= 1 << i
                size += 1
        total += weights[size] * (v(mask | bit) - v(mask))
    return total


def _validate_partition(groups: Sequence[Sequence[int]], n_players: int) -> list[int]:
    """Check an exact partition of 0..n_players-1; return group bitmasks."""
    seen = 0
    masks = []
    for gi, members in enumerate(groups):
        if len(members) == 0:
            raise ValueError(f"group {gi} is empty")
        mask = 0
        for i in members:
            if not 0 <= i < n_players:
                raise ValueError(f"player {i} in group {gi} out of range")
            bit = 1 << i
            if seen & bit:
                raise ValueError(f"player {i} appears in more than one group")
            seen |= bit
            mask |= bit
        masks.append(mask)
    if seen != (1 << n_players) - 1:
        missing = [i for i in range(n_players) if not seen >> i & 1]
        raise ValueError(f"players {missing} not assigned to any group")
    return masks


def grouped_shapley(
    game: CooperativeGame, groups: Sequence[Sequence[int]], group: int
) -> float | Fraction:
    """Shapley value of a predefined coalition of players.

    ``groups`` must exactly partition the player set.  Each group is
    treated as a single indivisible player: the contribution of
    ``groups[group]`` is averaged over all unions of the other groups,
    with the weights of a k-player game where k is the group count.
    Under the singleton partition this reduces to :func:`classic_shapley`.
    """
    masks = _validate_partition(groups, game.n_players)
    k = len(masks)
    if not 0 <= group < k:
        raise ValueError(f"group {group} out of range 0..{k - 1}")
    v = _memoized(game.value)
    weights = _shapley_weights(k)
    others = [g for g in range(k) if g != group]
    gmask = masks[group]
    total: float | Fraction = Fraction(0)
    for sub in range(1 << (k - 1)):
        union = 0
        size = 0
        for j, g in enumerate(others):
            if sub >> j & 1:
                union |= masks[g]
                size += 1
        total += weights[size] * (v(union | gmask) - v(union))
    return total


def naive_group_sum(
    game: CooperativeGame, groups: Sequence[Sequence[int]], group: int
) -> float | Fraction:
    """Sum of per-player classic Shapley values inside one group.

    The common shortcut for aggregating attributions; kept as a baseline
    because it can understate what the group is worth as a unit.
    """
    _validate_partition(groups, game.n_players)
    if not 0 <= group < len(groups):
        raise ValueError(f"group {group} out of range 0..{len(groups) - 1}")
    total: float | Fraction = Fraction(0)
    for player in groups[group]:
        total += classic_shapley(game, player)
    return total


@dataclass(frozen=True)
class GloveGame:
    """Matching game: ``n_left`` players hold a left glove, one holds a right.

    A coalition is worth 1 exactly when it can complete a pair, i.e. it
    contains the right-glove player and at least one left-glove player.
    """

    n_left: int = 2
    game: CooperativeGame = field(init=False)

    def __post_init__(self) -> None:
        if self.n_left < 1:
            raise ValueError("need at least one left-glove player")
        n = self.n_left + 1
        right_bit = 1 << self.n_left
        left_mask = right_bit - 1

        def value(mask: int) -> int:
            return 1 if (mask & right_bit) and (mask & left_mask) else 0

        object.__setattr__(self, "game", CooperativeGame(n, value))

    @property
    def right_player(self) -> int:
        return self.n_left

    @property
    def partition(self) -> list[list[int]]:
        """Left-glove holders as one coalition, the right-glove holder alone."""
        return [list(range(self.n_left)), [self.n_left]]
