"""Symmetrization of Bernoulli product pairs via per-coordinate binary channels.

A pair (Ber(p), Ber(q)) is mapped coordinate-wise to the symmetric pair
(Ber(1/2 + g/2), Ber(1/2 - g/2)) with g = |p-q| / (1 + |p+q-1|). The map is a
genuine randomized binary channel, so the joint TV never increases, while the
per-coordinate gap shrinks by at most a factor of 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import InvalidDistributionError, ProbVector, _matched_params

__all__ = ["SymmetrizedPair", "Channel2x2", "symmetrize", "channel_matrix",
           "apply_channel_product"]

ROW_SUM_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SymmetrizedPair:
    """The symmetric image (gamma, 1/2 + gamma/2, 1/2 - gamma/2) of a pair."""

    gamma_hat: np.ndarray
    p_hat: ProbVector
    q_hat: ProbVector


@dataclass(frozen=True)
class Channel2x2:
    """A row-stochastic 2x2 transition matrix on {0, 1}.

    Row 0 gives the output law for input 1, row 1 for input 0; column 0 is the
    probability of output 1 (distribution vectors are read as (mass at 1,
    mass at 0)).
    """

    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.float64)
        if rows.shape != (2, 2):
            raise InvalidDistributionError(f"rows must be 2x2, got shape {rows.shape}")
        if np.any(rows < 0.0) or np.any(rows > 1.0):
            raise InvalidDistributionError(f"channel entries outside [0, 1]: {rows!r}")
        sums = rows.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > ROW_SUM_TOLERANCE):
            raise InvalidDistributionError(f"channel rows sum to {sums!r}, not 1")
        object.__setattr__(self, "rows", rows)

    def push_prob_one(self, prob_one: float) -> float:
        """Mass at 1 after sending Ber(prob_one) through the channel."""
        return prob_one * self.rows[0, 0] + (1.0 - prob_one) * self.rows[1, 0]


def symmetrize(p, q) -> SymmetrizedPair:
    """Symmetrize a Bernoulli pair coordinate-wise.

    gamma = |p-q| / (1 + |p+q-1|) is well defined for p = q (gamma = 0) and
    satisfies gamma >= |p-q| / 2.
    """
    pa, qa = _matched_params(p, q)
    gamma = np.abs(pa - qa) / (1.0 + np.abs(pa + qa - 1.0))
    half = 0.5 * gamma
    return SymmetrizedPair(
        gamma_hat=gamma,
        p_hat=ProbVector(0.5 + half),
        q_hat=ProbVector(0.5 - half),
    )


def channel_matrix(p: float, q: float) -> Channel2x2:
    """The binary channel sending Ber(p) to Ber(1/2+g/2) and Ber(q) to Ber(1/2-g/2).

    The ratio g/(p-q) simplifies to 1/(1 + |p+q-1|), which is also its
    continuous limit at p = q; that form is used so the matrix is defined on
    the whole unit square. For p < q the construction relabels both inputs
    (u -> 1-u), which amounts to swapping the matrix rows.
    """
    for name, value in (("p", p), ("q", q)):
        if not (0.0 <= value <= 1.0):
            raise ValueError(f"{name} = {value!r} outside [0, 1]")
    if p < q:
        base = channel_matrix(1.0 - p, 1.0 - q)
        return Channel2x2(base.rows[::-1].copy())
    s = p + q
    # One row is always deterministic: which one depends on the sign of s - 1.
    if s <= 1.0:
        top = (1.0, 0.0)
        off = s / (2.0 * (2.0 - s))
        bottom = (0.5 - off, 0.5 + off)
    else:
        off = (2.0 - s) / (2.0 * s)
        top = (0.5 + off, 0.5 - off)
        bottom = (0.0, 1.0)
    return Channel2x2(np.array([top, bottom]))


def apply_channel_product(pair_p, pair_q) -> tuple:
    """Symmetrize a pair and return the per-coordinate channels realizing it."""
    pa, qa = _matched_params(pair_p, pair_q)
    sym = symmetrize(pa, qa)
    channels = tuple(channel_matrix(float(pi), float(qi)) for pi, qi in zip(pa, qa))
    return sym, channels
