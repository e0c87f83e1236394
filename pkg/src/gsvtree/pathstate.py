"""Object wrapper over the path kernels, for inspection and testing.

PathState delegates every weight operation to the same compiled kernels
the tree walk uses, so properties proven here (extend/unwind inversion,
weight identities) hold verbatim inside the hot loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels


class PathEntry(NamedTuple):
    feature: int
    zero_fraction: float
    one_fraction: float
    weight: float


class PathState:
    """A feature path with Shapley permutation weights.

    A fresh state is empty; the first extension is conventionally the
    sentinel ``(feature=-1, zero=1, one=1)``.  ``capacity`` bounds the
    number of entries (sentinel included).
    """

    __slots__ = ("_pd", "_pz", "_po", "_pw", "_len")

    def __init__(self, capacity: int) -> None:
        if capacity < 1:
            raise ValueError("capacity must be at least 1")
        self._pd = np.full(capacity, -1, dtype=np.int64)
        self._pz = np.zeros(capacity, dtype=np.float64)
        self._po = np.zeros(capacity, dtype=np.float64)
        self._pw = np.zeros(capacity, dtype=np.float64)
        self._len = 0

    @classmethod
    def fresh(cls, capacity: int) -> "PathState":
        """Empty state pre-extended with the sentinel entry."""
        state = cls(capacity + 1)
        state.extend(1.0, 1.0, -1)
        return state

    def __len__(self) -> int:
        return self._len

    def __getitem__(self, i: int) -> PathEntry:
        if not 0 <= i < self._len:
            raise IndexError(i)
        return PathEntry(int(self._pd[i]), float(self._pz[i]),
                         float(self._po[i]), float(self._pw[i]))

    def entries(self) -> list[PathEntry]:
        return [self[i] for i in range(self._len)]

    def weights(self) -> np.ndarray:
        return self._pw[:self._len].copy()

    def copy(self) -> "PathState":
        other = PathState(len(self._pd))
        other._pd[:] = self._pd
        other._pz[:] = self._pz
        other._po[:] = self._po
        other._pw[:] = self._pw
        other._len = self._len
        return other

    def extend(self, zero_fraction: float, one_fraction: float,
               feature: int) -> None:
        if self._len >= len(self._pd):
            raise ValueError("path is at capacity")
        self._len = int(_kernels.extend_path(
            self._pd, self._pz, self._po, self._pw, 0, self._len,
            float(zero_fraction), float(one_fraction), int(feature)))

    def unwind(self, idx: int) -> None:
        if not 0 <= idx < self._len:
            raise IndexError(idx)
        self._len = int(_kernels.unwind_path(
            self._pd, self._pz, self._po, self._pw, 0, self._len, int(idx)))

    def unwound_weight_sum(self, idx: int) -> float:
        if not 0 <= idx < self._len:
            raise IndexError(idx)
        return float(_kernels.unwound_sum(
            self._pz, self._po, self._pw, 0, self._len, int(idx)))

    def find_first_group(self, lookup: Sequence[int] | np.ndarray,
                         group: int) -> int:
        """First entry index after the sentinel in ``group``, or -1."""
        lookup = np.asarray(lookup, dtype=np.int64)
        return int(_kernels.find_first_group(
            self._pd, 0, self._len, lookup, int(group)))


def weight_update(state: PathState, zero_fraction: float,
                  one_fraction: float, feature: int) -> PathState:
    """Copy-on-write extension: returns the longer state, input untouched."""
    out = PathState(len(state) + 1)
    for i in range(len(state)):
        entry = state[i]
        out._pd[i] = entry.feature
        out._pz[i] = entry.zero_fraction
        out._po[i] = entry.one_fraction
        out._pw[i] = entry.weight
    out._len = len(state)
    out.extend(zero_fraction, one_fraction, feature)
    return out


def unwind(state: PathState, index: int) -> PathState:
    """Copy-on-write removal: returns the shorter state, input untouched."""
    out = state.copy()
    out.unwind(index)
    return out


def unwound_weight_sum(state: PathState, index: int) -> float:
    """Total weight the state would have after unwinding ``index``."""
    return state.unwound_weight_sum(index)
