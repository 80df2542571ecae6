r"""Two-user, two-subband MISO downlink channel with imperfect transmitter CSI.

The transmitter has two antennas; each user has one.  In every subband
``s`` and for every user ``u`` the true channel vector splits as

    true = estimate + error,

where the transmitter only knows ``estimate``.  The error entries are
i.i.d. complex Gaussian with per-entry variance ``sigma2 = p ** -a`` for
quality exponent ``a`` in [0, 1] at linear SNR ``p``; the estimate is drawn
with per-entry variance ``1 - sigma2`` so the true channel always has unit
per-entry variance regardless of ``a``.  ``a = 1`` is essentially perfect
CSI at high SNR, ``a = 0`` makes the estimate useless (it degenerates to
the zero vector, and zero-forcing on it fails loudly).

Randomness is drawn from per-trial substreams: ``trial_rng(seed, t)`` is a
pure function of the master seed and the trial index, so runs are
bit-reproducible and results do not depend on how trials are partitioned
across workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

USERS = ("user1", "user2")
SUBBANDS = ("A", "B")
SCENARIO_KINDS = ("unmatched", "matched")


@dataclass(frozen=True)
class QualityPair:
    """CSIT quality exponents (beta, alpha) with 0 <= alpha <= beta <= 1.

    The pair is ordered by convention: beta is the better quality.  Exact
    rational values (``fractions.Fraction``) are accepted and preserved so
    closed-form DoF expressions can be evaluated exactly.
    """

    beta: float
    alpha: float

    def __post_init__(self) -> None:
        if not (0 <= self.alpha <= self.beta <= 1):
            raise ValueError(
                f"quality exponents need 0 <= alpha <= beta <= 1, got "
                f"beta={self.beta}, alpha={self.alpha}"
            )


@dataclass(frozen=True)
class Scenario:
    """CSIT allocation across (user, subband) cells.

    unmatched: user1 has quality beta in subband A and alpha in B, user2 the
    reverse (each user has one well-sounded subband).
    matched: both users have beta in subband A and alpha in B.
    """

    kind: str

    def __post_init__(self) -> None:
        if self.kind not in SCENARIO_KINDS:
            raise ValueError(f"scenario kind must be one of {SCENARIO_KINDS}, got {self.kind!r}")

    def quality(self, user: str, subband: str, q: QualityPair):
        """CSIT quality exponent of `user`'s channel estimate in `subband`."""
        if user not in USERS:
            raise ValueError(f"unknown user {user!r}")
        if subband not in SUBBANDS:
            raise ValueError(f"unknown subband {subband!r}")
        if self.kind == "matched":
            return q.beta if subband == "A" else q.alpha
        return q.beta if (user == "user1") == (subband == "A") else q.alpha


UNMATCHED = Scenario("unmatched")
MATCHED = Scenario("matched")


def db_to_linear(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)


def linear_to_db(p: float) -> float:
    return 10.0 * np.log10(p)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent substream for one Monte Carlo trial.

    Built from ``SeedSequence(seed, spawn_key=(trial,))`` so the stream is a
    pure function of (seed, trial) -- no shared state between trials.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(trial,)))


@dataclass(frozen=True)
class ChannelPair:
    """True channel, transmitter-side estimate and estimation error (2-vectors)."""

    true: np.ndarray
    estimate: np.ndarray
    error: np.ndarray


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of all four (user, subband) channels."""

    pairs: Dict[Tuple[str, str], ChannelPair]

    def pair(self, user: str, subband: str) -> ChannelPair:
        return self.pairs[(user, subband)]

    def true(self, user: str, subband: str) -> np.ndarray:
        return self.pairs[(user, subband)].true

    def estimate(self, user: str, subband: str) -> np.ndarray:
        return self.pairs[(user, subband)].estimate


def _complex_gaussian(rng: np.random.Generator, var: float, n: int = 2) -> np.ndarray:
    if var <= 0.0:
        return np.zeros(n, dtype=complex)
    return np.sqrt(var / 2.0) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def sample_pair(rng: np.random.Generator, a: float, p: float) -> ChannelPair:
    """Draw (true, estimate, error) for one (user, subband) cell.

    Args:
        rng: source of randomness (typically a trial substream).
        a: CSIT quality exponent in [0, 1].
        p: linear SNR, must exceed 1 so sigma2 = p**-a stays within [0, 1].

    Returns:
        ChannelPair with error entries CN(0, sigma2) and estimate entries
        CN(0, 1 - sigma2); ``true == estimate + error`` holds bitwise.
    """
    if not 0 <= a <= 1:
        raise ValueError(f"quality exponent must lie in [0, 1], got {a}")
    if p <= 1:
        raise ValueError(f"linear SNR must exceed 1, got {p}")
    sigma2 = float(p) ** (-float(a))
    estimate = _complex_gaussian(rng, 1.0 - sigma2)
    error = _complex_gaussian(rng, sigma2)
    return ChannelPair(true=estimate + error, estimate=estimate, error=error)


def sample_realization(
    rng: np.random.Generator, q: QualityPair, scenario: Scenario, p: float
) -> ChannelRealization:
    """Draw the four channels of one trial in a fixed (subband, user) order."""
    pairs = {}
    for subband in SUBBANDS:
        for user in USERS:
            a = float(scenario.quality(user, subband, q))
            pairs[(user, subband)] = sample_pair(rng, a, p)
    return ChannelRealization(pairs)


def zf_direction(v: np.ndarray) -> np.ndarray:
    """Unit vector orthogonal to v with the fixed phase convention.

    Returns (-conj(v2), conj(v1)) / ||v||, which satisfies v^H w = 0
    exactly.  Raises on (near-)zero input because ZF on a degenerate
    estimate has no meaning.
    """
    v = np.asarray(v)
    if v.shape != (2,):
        raise ValueError(f"expected a length-2 vector, got shape {v.shape}")
    norm = np.linalg.norm(v)
    if norm <= 1e-12:
        raise ValueError("degenerate direction: cannot zero-force on a zero estimate")
    return np.array([-np.conj(v[1]), np.conj(v[0])]) / norm


def unit(v: np.ndarray) -> np.ndarray:
    """v / ||v|| with the same degeneracy guard as zf_direction."""
    v = np.asarray(v)
    norm = np.linalg.norm(v)
    if norm <= 1e-12:
        raise ValueError("degenerate direction: cannot normalise a zero estimate")
    return v / norm


def measure_error_exponent(a: float, snr_ladder, trials: int, seed: int = 0) -> float:
    """Estimate the CSIT error decay exponent from sampled errors.

    Computes mean ||error||^2 / 2 at each ladder point and returns the
    least-squares slope of -log2(mean) against log2(p); for errors drawn
    with variance p**-a the slope estimates a.
    """
    ladder = [float(p) for p in snr_ladder]
    if len(ladder) < 2 or any(p <= 1 for p in ladder) or sorted(ladder) != ladder:
        raise ValueError(f"SNR ladder must be ascending with every p > 1, got {snr_ladder}")
    if trials < 1:
        raise ValueError("at least one trial is required")
    log_means = np.empty(len(ladder))
    for k, p in enumerate(ladder):
        sq = np.empty(trials)
        for t in range(trials):
            pair = sample_pair(trial_rng(seed, t), a, p)
            sq[t] = np.vdot(pair.error, pair.error).real
        log_means[k] = -np.log2(np.mean(sq) / 2.0)
    return float(np.polyfit(np.log2(ladder), log_means, 1)[0])
