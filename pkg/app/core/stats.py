"""Running means and confidence intervals."""

import math
from collections import deque
from typing import Deque, List, Optional, Sequence


class TrailingMean:
    """Sliding-window mean updated one value at a time.

    mean += (new - dropped) / window once the window is full, and the
    running-mean step mean += (new - mean) / n while it fills.
    """

    def __init__(self, window: int):
        if window < 1:
            raise ValueError("window must be positive")
        self.window = window
        self.values: Deque[float] = deque()
        self.mean = 0.0

    def push(self, value: float) -> Optional[float]:
        """Add a value; returns the mean once ``window`` values exist, else None."""
        self.values.append(value)
        if len(self.values) > self.window:
            dropped = self.values.popleft()
            self.mean += (value - dropped) / self.window
        else:
            self.mean += (value - self.mean) / len(self.values)
        return self.mean if self.full else None

    @property
    def full(self) -> bool:
        return len(self.values) >= self.window


def trailing_average(series: Sequence[float], window: int) -> List[Optional[float]]:
    """Sliding mean of ``series``; None before ``window`` values exist."""
    tracker = TrailingMean(window)
    return [tracker.push(value) for value in series]


def best_trailing(series: Sequence[float], window: int) -> Optional[float]:
    """Highest trailing average; the plain mean when the series is shorter than the window."""
    if not series:
        return None
    values = [v for v in trailing_average(series, min(window, len(series))) if v is not None]
    return max(values)


def ci_half_width(wins: int, games: int, z: float = 1.96) -> float:
    """Normal-approximation half-width z * sqrt(p (1 - p) / n)."""
    if games < 1:
        raise ValueError("games must be positive")
    p = wins / games
    return z * math.sqrt(p * (1.0 - p) / games)
