"""Size-1 sample compression for the anchored family, plus the generalization bound.

The compressor keeps a single labeled point: the first one when every label is
off-anchor, otherwise the one carrying the longest bit prefix (earliest index
on ties). Reconstruction rebuilds an anchored hypothesis from that point alone,
completing unseen code bits with zeros so the round trip is deterministic.
"""

from __future__ import annotations

import math

import numpy as np

from .classes import SeparationHypothesis, random_separation_hypothesis
from .core import AnchoredLabel, RealizabilityError, UniformUnit


class RealizableSample:
    """A labeled sample consistent with a single anchored hypothesis (checked)."""

    __slots__ = ("pairs", "seq")

    def __init__(self, pairs):
        pairs = tuple((x, y) for x, y in pairs)
        if not pairs:
            raise RealizabilityError("empty sample")
        seq = _shared_anchor(pairs)
        anchor_points = set(seq)
        longest = max((y.prefix for _, y in pairs if y.prefix is not None), key=len, default=())
        for x, y in pairs:
            if y.prefix is None:
                if x in anchor_points:
                    raise RealizabilityError(f"off-anchor label at anchor point {x!r}")
            else:
                t = len(y.prefix)
                if seq[t - 1] != x:
                    raise RealizabilityError(
                        f"prefix of length {t} attached to {x!r}, not the anchor's point {t}"
                    )
                if longest[: t] != y.prefix:
                    raise RealizabilityError("prefixes are not consistent with a single code")
        self.pairs = pairs
        self.seq = seq

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def _shared_anchor(pairs):
    first = pairs[0][1]
    if not isinstance(first, AnchoredLabel):
        raise RealizabilityError(f"label {first!r} is not anchored")
    seq = first.seq
    for _, y in pairs:
        if not isinstance(y, AnchoredLabel):
            raise RealizabilityError(f"label {y!r} is not anchored")
        if y.seq != seq:
            raise RealizabilityError("labels carry different anchor sequences")
    return seq


def compress(sample):
    """Pick the single kept pair: longest-prefix label, else the first pair."""
    pairs = sample.pairs if isinstance(sample, RealizableSample) else tuple(sample)
    if not pairs:
        raise RealizabilityError("empty sample")
    _shared_anchor(pairs)
    best = None
    best_len = -1
    for pair in pairs:
        prefix = pair[1].prefix
        if prefix is not None and len(prefix) > best_len:
            best, best_len = pair, len(prefix)
    return best if best is not None else pairs[0]


def reconstruct(pair) -> SeparationHypothesis:
    """Rebuild an anchored hypothesis from one kept pair, zero-completing the code."""
    _, y = pair
    if not isinstance(y, AnchoredLabel):
        raise TypeError(f"reconstruction needs an anchored label, got {y!r}")
    n = len(y.seq)
    if y.prefix is None:
        theta = (0,) * n
    else:
        theta = tuple(y.prefix) + (0,) * (n - len(y.prefix))
    return SeparationHypothesis(y.seq, theta)


def compression_learner(sample) -> SeparationHypothesis:
    """The one-point compression predictor: reconstruct(compress(sample))."""
    return reconstruct(compress(sample))


def pac_error_bound(n, k=1, delta=0.05) -> float:
    """Holdout-error bound for a size-k compression fit on n samples, confidence 1-delta.

    Uses natural logarithms. Requires 1 <= k <= n/2 and 0 < delta < 1.
    """
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if k < 1 or k > n / 2:
        raise ValueError(f"compression size must satisfy 1 <= k <= n/2, got k={k}, n={n}")
    return 100.0 * math.sqrt((k * math.log(n / k) + k + math.log(1.0 / delta)) / n)


def random_realizable_sample(rng: np.random.Generator, max_points=50, max_anchor=20,
                             mu=UniformUnit()) -> tuple:
    """A random (hypothesis, sample) pair mixing on-anchor and off-anchor points."""
    anchor_len = int(rng.integers(1, max_anchor + 1))
    h = random_separation_hypothesis(mu, anchor_len, rng)
    n = int(rng.integers(1, max_points + 1))
    points = []
    for _ in range(n):
        if rng.random() < 0.5:
            points.append(h.seq[int(rng.integers(anchor_len))])
        else:
            points.append(mu.sample(rng))
    sample = RealizableSample((x, h(x)) for x in points)
    return h, sample


def verify_roundtrips(trials: int, rng: np.random.Generator, max_points=50, max_anchor=20) -> int:
    """Count pointwise round-trip disagreements over random realizable samples."""
    violations = 0
    for _ in range(trials):
        _, sample = random_realizable_sample(rng, max_points=max_points, max_anchor=max_anchor)
        predictor = compression_learner(sample)
        if any(predictor(x) != y for x, y in sample):
            violations += 1
    return violations
